//! Closed-form characteristics of the Hamilton–Jacobi equation for
//! `S(t, λ, ε) = τ[log((x_t - λ)*(x_t - λ) + ε)]`.
//!
//! Along a characteristic the momenta `p_u`, `p_v` are constant, `ε` decays as
//! `ε0 (1 - t p0)²` and reaches zero at the lifetime `t* = 1/p0`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{finite, Error, Result};
use crate::measure::Measure;
use crate::subordination::{h_map, v_t};

/// Initial momenta `(p_u, p_v, p_ε)` at `(λ0, ε0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Momenta {
    pub p_u0: f64,
    pub p_v0: f64,
    pub p0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharacteristicState {
    pub t: f64,
    pub u: f64,
    pub v: f64,
    pub eps: f64,
    pub p_u: f64,
    pub p_v: f64,
    /// Blows up at the lifetime, where it is `None`.
    pub p_eps: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HjValue {
    pub s_value: f64,
    pub h0: f64,
}

/// The `ε0 → 0` limit of the lifetime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LimitTime {
    Finite(f64),
    Unbounded,
}

impl LimitTime {
    pub fn is_below(&self, t: f64) -> bool {
        matches!(self, LimitTime::Finite(x) if *x < t)
    }
}

fn check_eps0(eps0: f64) -> Result<()> {
    finite(&[eps0])?;
    if eps0 <= 0.0 {
        return Err(Error::InvalidParameters(format!("eps0 = {eps0} must be positive")));
    }
    Ok(())
}

/// Gradient of `S(0, ·)` at `(λ0, ε0)`.
pub fn initial_momenta(m: &Measure, lambda0: Complex64, eps0: f64) -> Result<Momenta> {
    check_eps0(eps0)?;
    let (u0, v0) = (lambda0.re, lambda0.im);
    let b = m.kernel_bundle(u0, v0, eps0)?;
    Ok(Momenta {
        p_u0: 2.0 * b.i1,
        p_v0: 2.0 * v0 * b.i0,
        p0: b.i0,
    })
}

/// `t* = 1/p0`.
pub fn lifetime_tstar(m: &Measure, lambda0: Complex64, eps0: f64) -> Result<f64> {
    Ok(1.0 / initial_momenta(m, lambda0, eps0)?.p0)
}

/// `T(λ0) = lim_{ε0→0} t*(λ0, ε0)`. A divergent kernel integral gives `T = 0`.
pub fn t_limit(m: &Measure, lambda0: Complex64) -> Result<LimitTime> {
    finite(&[lambda0.re, lambda0.im])?;
    let i0 = if lambda0.im != 0.0 {
        Some(m.kernel_bundle(lambda0.re, lambda0.im, 0.0)?.i0)
    } else {
        m.poisson_limit_i0(lambda0.re)?
    };
    Ok(match i0 {
        None => LimitTime::Finite(0.0),
        Some(x) if x > 0.0 => LimitTime::Finite(1.0 / x),
        Some(_) => LimitTime::Unbounded,
    })
}

/// `H = -(p_u² - p_v²)/4 - ε p_ε²`.
pub fn hamiltonian(eps: f64, p_u: f64, p_v: f64, p_eps: f64) -> f64 {
    -0.25 * (p_u * p_u - p_v * p_v) - eps * p_eps * p_eps
}

/// State at time `t` along the characteristic from `(λ0, ε0)`.
pub fn flow(m: &Measure, lambda0: Complex64, eps0: f64, t: f64) -> Result<CharacteristicState> {
    let mo = initial_momenta(m, lambda0, eps0)?;
    flow_from(lambda0, eps0, &mo, t)
}

/// [`flow`] with precomputed momenta.
pub fn flow_from(lambda0: Complex64, eps0: f64, mo: &Momenta, t: f64) -> Result<CharacteristicState> {
    finite(&[t])?;
    let tstar = 1.0 / mo.p0;
    if t < 0.0 || t > tstar {
        return Err(Error::BeyondLifetime { t, lifetime: tstar });
    }
    let (eps, p_eps) = if t == tstar {
        (0.0, None)
    } else {
        let k = 1.0 - t * mo.p0;
        (eps0 * k * k, Some(mo.p0 / k))
    };
    Ok(CharacteristicState {
        t,
        u: lambda0.re - 0.5 * t * mo.p_u0,
        v: lambda0.im + 0.5 * t * mo.p_v0,
        eps,
        p_u: mo.p_u0,
        p_v: mo.p_v0,
        p_eps,
    })
}

/// `S` along the characteristic: `S(0, λ0, ε0) + t H0`.
pub fn hj_value(m: &Measure, lambda0: Complex64, eps0: f64, t: f64) -> Result<HjValue> {
    let mo = initial_momenta(m, lambda0, eps0)?;
    let tstar = 1.0 / mo.p0;
    finite(&[t])?;
    if t < 0.0 || t > tstar {
        return Err(Error::BeyondLifetime { t, lifetime: tstar });
    }
    let h0 = hamiltonian(eps0, mo.p_u0, mo.p_v0, mo.p0);
    let s0 = m.log_energy(lambda0, eps0)?;
    Ok(HjValue { s_value: s0 + t * h0, h0 })
}

/// `ε0^t(λ0) = v_t(u0)² - v0²`, the starting regularization whose path lands on `ε = 0` at time `t`.
pub fn epsilon0_t(m: &Measure, t: f64, lambda0: Complex64) -> Result<f64> {
    let v = v_t(m, t, lambda0.re)?.v;
    let v0 = lambda0.im.abs();
    if v0 > v {
        return Err(Error::OutsideLambdaClosure {
            re: lambda0.re,
            im: lambda0.im,
        });
    }
    Ok(v * v - v0 * v0)
}

/// Where the characteristic from `λ0` ends when `ε` reaches zero at time `t`.
///
/// Inside `Λ_t` the path starts from `ε0^t` and ends at `t p1 + 2 i v0` with
/// `p1 = ∫ x dμ / ((u0 - x)² + v0² + ε0^t)`. Outside it starts from `ε0 → 0`
/// and ends at `λ0 - t G(λ0)`.
pub fn terminal_position(m: &Measure, t: f64, lambda0: Complex64) -> Result<Complex64> {
    finite(&[t, lambda0.re, lambda0.im])?;
    let (u0, v0) = (lambda0.re, lambda0.im);
    let vt = v_t(m, t, u0)?.v;
    if vt > 0.0 && v0.abs() < vt + 1e-9 {
        let eps = (vt * vt - v0 * v0).max(0.0);
        let p1 = m.kernel_bundle(u0, v0, eps)?.ix;
        Ok(Complex64::new(t * p1, 2.0 * v0))
    } else {
        h_map(m, -t, lambda0)
    }
}
