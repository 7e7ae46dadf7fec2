//! Closed forms for a Cauchy input. These are the reference values the
//! general pipeline is checked against; none of them call into it.
//!
//! The standard law has location 0 and scale 1. [`CauchyLaw`] carries the
//! formulas to `cauchy(m, γ)` by the affine change `x → m + γ x`, under which
//! `t → t/γ²`, `u → (u - m)/γ`, heights scale by `γ` and planar densities by
//! `1/γ²`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::roots::bisect;

/// Peak of `v_t`, `(√(1 + 4t) - 1)/2`, written without cancellation.
pub fn peak_height(t: f64) -> f64 {
    2.0 * t / (1.0 + (1.0 + 4.0 * t).sqrt())
}

/// Positive root of `v u² = (1 + v)(t - v - v²)`.
pub fn cauchy_v(t: f64, u: f64) -> f64 {
    let top = peak_height(t);
    let u2 = u * u;
    if u2 == 0.0 {
        return top;
    }
    let g = |v: f64| v * u2 - (1.0 + v) * (t - v - v * v);
    bisect(g, 0.0, top, 0.0, 1e-16).expect("cubic changes sign on (0, peak]")
}

/// `v u² - (1 + v)(t - v - v²)`, which vanishes at `v = v_t(u)`.
pub fn cubic_residual(t: f64, u: f64, v: f64) -> f64 {
    v * u * u - (1.0 + v) * (t - v - v * v)
}

/// `ψ_t'(u)` in terms of `v = v_t(u)`.
pub fn psi_prime(t: f64, u: f64) -> f64 {
    let v = cauchy_v(t, u);
    (t + 4.0 * v * v * (1.0 + v).powi(2)) / ((1.0 + v) * (t + 2.0 * v * v * (1.0 + v)))
}

/// `ψ_t(u) = u + u v/(1 + v)`.
pub fn psi(t: f64, u: f64) -> f64 {
    let v = cauchy_v(t, u);
    u + u * v / (1.0 + v)
}

/// `f_{α,β}(u0) = u0 + ((α - β)/s) u0 v/(1 + v)` with `v = v_s(u0)`.
pub fn f_map(alpha: f64, beta: f64, u0: f64) -> f64 {
    let s = alpha + beta;
    let v = cauchy_v(s, u0);
    u0 + (alpha - beta) / s * u0 * v / (1.0 + v)
}

/// Brown density of `x0 + c_t` (`α = β = t/2`).
pub fn cauchy_circular_density(t: f64, u: f64) -> f64 {
    let v = cauchy_v(t, u);
    let a = 1.0 + v;
    (t + 4.0 * v * v * a * a) / (a * (t + 2.0 * v * v * a)) / (2.0 * PI * t)
}

/// Peak of the elliptic boundary, `β(√(1 + 4s) - 1)/s`.
pub fn elliptic_peak(alpha: f64, beta: f64) -> f64 {
    let s = alpha + beta;
    beta * peak_height(s) * 2.0 / s
}

/// `u²` of the boundary point of `Ω_{α,β}` at height `b`.
pub fn cauchy_elliptic_boundary(alpha: f64, beta: f64, b: f64) -> Result<f64> {
    let peak = elliptic_peak(alpha, beta);
    if !(b > 0.0) || b > peak * (1.0 + 1e-12) {
        return Err(Error::NegativeSquare { b, peak });
    }
    let s = alpha + beta;
    let num = (b * alpha + beta).powi(2) * (4.0 * beta * beta - 2.0 * b * beta - b * b * s);
    let den = b * beta * beta * (b * s + 2.0 * beta);
    Ok((num / den).max(0.0))
}

/// Height `b = φ(u)` of the elliptic boundary above `u`.
pub fn cauchy_elliptic_phi(alpha: f64, beta: f64, u: f64) -> f64 {
    let s = alpha + beta;
    let peak = elliptic_peak(alpha, beta);
    let u2 = u * u;
    if u2 == 0.0 {
        return peak;
    }
    // Polynomial form of the boundary equation; positive as b → 0⁺, ≤ 0 at the peak.
    let q = |b: f64| {
        (b * alpha + beta).powi(2) * (4.0 * beta * beta - 2.0 * b * beta - b * b * s)
            - u2 * b * beta * beta * (b * s + 2.0 * beta)
    };
    bisect(q, 0.0, peak, 0.0, 1e-16).expect("boundary equation changes sign on (0, peak]")
}

/// Brown density of `x0 + c_{α,β}` at real part `u`.
pub fn cauchy_elliptic_density(alpha: f64, beta: f64, u: f64) -> f64 {
    let s = alpha + beta;
    let b = cauchy_elliptic_phi(alpha, beta, u);
    let (b2, b3, b4) = (b * b, b * b * b, b * b * b * b);
    let b_ = beta;
    let num = b4 * s.powi(3) + 4.0 * b3 * s * s * b_ + 4.0 * b2 * s * b_ * b_ + 4.0 * b_.powi(4);
    let den = b4 * s * s * alpha
        + 4.0 * b3 * s * alpha * b_
        + 4.0 * b2 * alpha * b_ * b_
        + 4.0 * b * b_.powi(4)
        + 4.0 * b_.powi(4);
    num / den / (4.0 * PI * beta)
}

/// Brown density of `x0 + i σ_t`.
pub fn cauchy_isigma_density(t: f64, u: f64) -> f64 {
    let q = 1.0 + u * u;
    (4.0 * t + q * q) / (q.powf(1.5) * (q + 4.0 * t).sqrt()) / (4.0 * PI * t)
}

/// Boundary height of `Ω` for `x0 + i σ_t`.
pub fn cauchy_isigma_phi(t: f64, u: f64) -> f64 {
    let q = (1.0 + u * u).sqrt();
    4.0 * t / (q * (q + (u * u + 1.0 + 4.0 * t).sqrt()))
}

/// `∫ 2 φ w du` over `|u| ≤ 10³` by Gauss–Kronrod, plus the tail `2 φ w ≈ 1/(π u²)`.
pub fn cauchy_isigma_mass(t: f64) -> f64 {
    let cut = 1e3;
    let pts: Vec<f64> = (-40..=40).map(|k| cut * (k as f64 / 40.0).powi(3)).collect();
    let (core, _) = crate::quadrature::integrate_scalar(
        |u| 2.0 * cauchy_isigma_phi(t, u) * cauchy_isigma_density(t, u),
        &pts,
        &Default::default(),
    );
    // 2φw = (2/π) (4t + q²) / (q² (q + √(q² + 4t))²) with q = √(1+u²); its
    // leading term 1/(π u²) integrates to 1/(π cut) on each side.
    core + 2.0 / (PI * cut)
}

/// A Cauchy law with arbitrary location and scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyLaw {
    pub location: f64,
    pub scale: f64,
}

impl CauchyLaw {
    pub fn standard() -> Self {
        Self {
            location: 0.0,
            scale: 1.0,
        }
    }

    fn z(&self, u: f64) -> f64 {
        (u - self.location) / self.scale
    }

    fn g2(&self) -> f64 {
        self.scale * self.scale
    }

    pub fn v(&self, t: f64, u: f64) -> f64 {
        self.scale * cauchy_v(t / self.g2(), self.z(u))
    }

    pub fn circular_density(&self, t: f64, u: f64) -> f64 {
        cauchy_circular_density(t / self.g2(), self.z(u)) / self.g2()
    }

    pub fn elliptic_phi(&self, alpha: f64, beta: f64, u: f64) -> f64 {
        self.scale * cauchy_elliptic_phi(alpha / self.g2(), beta / self.g2(), self.z(u))
    }

    pub fn elliptic_density(&self, alpha: f64, beta: f64, u: f64) -> f64 {
        cauchy_elliptic_density(alpha / self.g2(), beta / self.g2(), self.z(u)) / self.g2()
    }

    pub fn isigma_phi(&self, t: f64, u: f64) -> f64 {
        self.scale * cauchy_isigma_phi(t / self.g2(), self.z(u))
    }

    pub fn isigma_density(&self, t: f64, u: f64) -> f64 {
        cauchy_isigma_density(t / self.g2(), self.z(u)) / self.g2()
    }

    /// `f_{α,β}(u0)`; a map of the line, so it transforms as a coordinate.
    pub fn f_map(&self, alpha: f64, beta: f64, u0: f64) -> f64 {
        self.location + self.scale * f_map(alpha / self.g2(), beta / self.g2(), self.z(u0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v_examples() {
        for &t in &[0.25, 1.0, 4.0] {
            assert!((cauchy_v(t, 0.0) - ((1.0 + 4.0 * t).sqrt() - 1.0) / 2.0).abs() < 1e-15);
        }
        assert!((cauchy_v(1.0, 100.0) * 1e4 - 1.0).abs() < 0.05);
        for &u in &[0.1, 1.0, 10.0, 300.0] {
            let v = cauchy_v(1.0, u);
            assert!(cubic_residual(1.0, u, v).abs() <= 1e-12);
        }
    }

    #[test]
    fn circular_examples() {
        assert!((cauchy_circular_density(2.0, 1e4) * 2.0 * PI * 2.0 - 1.0).abs() < 1e-6);
        let w = cauchy_circular_density(1.0, 0.0);
        assert!((w - psi_prime(1.0, 0.0) / (2.0 * PI)).abs() < 1e-15);
        // ψ' by differencing ψ = u + uv/(1+v).
        let h = 1e-5;
        let d = (psi(1.0, 0.7 + h) - psi(1.0, 0.7 - h)) / (2.0 * h);
        assert!((d - psi_prime(1.0, 0.7)).abs() < 1e-8);
    }

    #[test]
    fn elliptic_boundary_examples() {
        let (a, b) = (0.125, 0.875);
        assert!(cauchy_elliptic_boundary(a, b, elliptic_peak(a, b)).unwrap() < 1e-12);
        assert!(matches!(
            cauchy_elliptic_boundary(a, b, 1.01 * elliptic_peak(a, b)),
            Err(Error::NegativeSquare { .. })
        ));
        // α = 0 reduction
        let t = 1.3;
        for &h in &[0.1, 0.5, 1.0] {
            let u2 = cauchy_elliptic_boundary(0.0, t, h).unwrap();
            assert!((u2 - (4.0 * t - 2.0 * h - h * h) / (h * (h + 2.0))).abs() < 1e-12 * (1.0 + u2));
            assert!((cauchy_isigma_phi(t, u2.sqrt()) - h).abs() < 1e-12);
        }
        // ∝ 1/b as b → 0
        let r = cauchy_elliptic_boundary(a, b, 1e-6).unwrap() * 1e-6;
        let r2 = cauchy_elliptic_boundary(a, b, 1e-7).unwrap() * 1e-7;
        assert!((r / r2 - 1.0).abs() < 1e-5);
    }

    #[test]
    fn elliptic_specializations() {
        for k in 0..200 {
            let u = -20.0 + 40.0 * k as f64 / 199.0;
            let a = cauchy_elliptic_density(0.0, 1.0, u);
            assert!((a - cauchy_isigma_density(1.0, u)).abs() < 1e-10, "u={u}");
            let c = cauchy_elliptic_density(0.5, 0.5, u);
            assert!((c - cauchy_circular_density(1.0, u)).abs() < 1e-10, "u={u}");
        }
        assert!((cauchy_elliptic_density(0.125, 0.875, 1e5) * 4.0 * PI * 0.875 - 1.0).abs() < 1e-4);
    }

    #[test]
    fn isigma_examples() {
        assert!((cauchy_isigma_density(1.0, 0.0) - 5f64.sqrt() / (4.0 * PI)).abs() < 1e-15);
        assert!((cauchy_isigma_density(1.0, 1e6) * 4.0 * PI - 1.0).abs() < 1e-6);
        assert!((cauchy_isigma_mass(1.0) - 1.0).abs() < 1e-4);
    }

    #[test]
    fn affine_family_rescales() {
        let law = CauchyLaw { location: 2.0, scale: 3.0 };
        assert!((law.v(9.0, 2.0) - 3.0 * peak_height(1.0)).abs() < 1e-14);
        assert_eq!(law.isigma_density(9.0, 2.0), cauchy_isigma_density(1.0, 0.0) / 9.0);
        assert_eq!(CauchyLaw::standard().f_map(0.2, 0.3, 1.5), f_map(0.2, 0.3, 1.5));
    }
}
