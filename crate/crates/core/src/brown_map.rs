//! The boundary map `f`, the domain `Ω` through `φ`, the density `w` and the
//! push-forward maps `U` and `Q`.
//!
//! Everything is parametrized by `u0`, the real coordinate of `Λ_s`. A single
//! evaluation of `v_s(u0)` and the kernel bundle at `(u0, v_s(u0))` gives
//! `f(u0)`, `f'(u0)`, `φ(f(u0))` and `w(f(u0))` together ([`map_point`]).
//!
//! Writing `I(u0) = i1(u0, v_s(u0))`, implicit differentiation of
//! `i0(u0, v_s(u0)) = 1/s` gives
//!
//! ```text
//! I'(u0) = 2 v² j0 - i0 + 2 j1² / j0          (v > 0)
//! I'(u0) = -i0(u0, 0)                         (v = 0)
//! f'     = 1 + (α - β) I'
//! w      = (1 + 2β I' / f') / (4πβ)
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{finite, Error, Result};
use crate::exec::Exec;
use crate::measure::{richardson_trapezoid, Measure};
use crate::roots;
use crate::subordination::{self, boundary_re_g, v_t, FlowGrid, SupportComponents};

/// Variances of the free elliptic element: `α ≥ 0` on the real part, `β > 0`
/// on the imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticParams {
    pub alpha: f64,
    pub beta: f64,
    pub s: f64,
    pub r: f64,
}

impl EllipticParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        finite(&[alpha, beta])?;
        if alpha < 0.0 || beta <= 0.0 {
            return Err(Error::InvalidParameters(format!(
                "need alpha >= 0 and beta > 0, got alpha = {alpha}, beta = {beta}"
            )));
        }
        Ok(Self {
            alpha,
            beta,
            s: alpha + beta,
            r: alpha - beta,
        })
    }

    /// `α = β = s/2`.
    pub fn circular(s: f64) -> Result<Self> {
        Self::new(0.5 * s, 0.5 * s)
    }

    /// `α = 0, β = t`: the imaginary semicircular case.
    pub fn imaginary(t: f64) -> Result<Self> {
        Self::new(0.0, t)
    }

    /// Vertical contraction factor `2β/s`.
    pub fn rhat(&self) -> f64 {
        2.0 * self.beta / self.s
    }

    pub fn is_circular(&self) -> bool {
        self.r == 0.0
    }
}

/// All boundary-map quantities at one `u0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapPoint {
    pub u0: f64,
    /// `v_s(u0)`
    pub v: f64,
    /// `f(u0)`
    pub u: f64,
    /// `φ(f(u0)) = (2β/s) v_s(u0)`
    pub phi: f64,
    /// `d/du0 i1(u0, v_s(u0))`, undefined on the edge of the support.
    pub i1_prime: Option<f64>,
    pub f_prime: Option<f64>,
    /// Density at `f(u0)`; `None` unless `v > 0`.
    pub w: Option<f64>,
}

/// Evaluates `f`, `f'`, `φ` and `w` at `u0`.
pub fn map_point(m: &Measure, p: &EllipticParams, u0: f64) -> Result<MapPoint> {
    let fp = v_t(m, p.s, u0)?;
    let v = fp.v;
    let (re_g, i1_prime) = if v > 0.0 {
        let b = m.kernel_bundle(u0, v, 0.0)?;
        (b.i1, Some(2.0 * v * v * b.j0 - b.i0 + 2.0 * b.j1 * b.j1 / b.j0))
    } else {
        let g = boundary_re_g(m, u0, 0.0)?;
        (g, m.poisson_limit_i0(u0)?.map(|i0| -i0))
    };
    let u = if p.is_circular() { u0 } else { u0 + p.r * re_g };
    let f_prime = i1_prime.map(|d| 1.0 + p.r * d);
    let w = match (v > 0.0, i1_prime, f_prime) {
        (true, Some(d), Some(fd)) => Some((1.0 + 2.0 * p.beta * d / fd) / (4.0 * PI * p.beta)),
        _ => None,
    };
    Ok(MapPoint {
        u0,
        v,
        u,
        phi: p.rhat() * v,
        i1_prime,
        f_prime,
        w,
    })
}

/// `f(u0) = Re H_{α-β}(u0 + i v_s(u0))`.
pub fn f_ab(m: &Measure, p: &EllipticParams, u0: f64) -> Result<f64> {
    finite(&[u0])?;
    if p.is_circular() {
        return Ok(u0);
    }
    Ok(map_point(m, p, u0)?.u)
}

/// `f'(u0)`, analytic through the kernel bundle.
pub fn f_ab_prime(m: &Measure, p: &EllipticParams, u0: f64) -> Result<f64> {
    map_point(m, p, u0)?.f_prime.ok_or(Error::OutsideDomain(u0))
}

/// Inverse of the increasing homeomorphism `f`.
pub fn f_ab_inverse(m: &Measure, p: &EllipticParams, u: f64) -> Result<f64> {
    finite(&[u])?;
    if p.is_circular() {
        return Ok(u);
    }
    let scale = m.scale().max(p.s.sqrt());
    let limit = 1e9 * scale;
    let mut h = scale;
    let mut lo = u - h;
    let mut hi = u + h;
    while f_ab(m, p, lo)? > u {
        h *= 2.0;
        lo = u - h;
        if h > limit {
            return Err(Error::BracketFailure(u));
        }
    }
    h = scale;
    while f_ab(m, p, hi)? < u {
        h *= 2.0;
        hi = u + h;
        if h > limit {
            return Err(Error::BracketFailure(u));
        }
    }

    let mut failure = None;
    let tol = 1e-13 * u.abs().max(1.0);
    let root = roots::newton_bracketed(
        |x| match map_point(m, p, x) {
            Ok(mp) => (mp.u - u, mp.f_prime.unwrap_or(f64::NAN)),
            Err(e) => {
                failure.get_or_insert(e);
                (f64::NAN, f64::NAN)
            }
        },
        lo,
        hi,
        tol,
        1e-15,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    root
}

/// Height of `Ω` above `u`: `φ(u) = (2β/s) v_s(f⁻¹(u))`.
pub fn phi_ab(m: &Measure, p: &EllipticParams, u: f64) -> Result<f64> {
    let u0 = f_ab_inverse(m, p, u)?;
    Ok(p.rhat() * v_t(m, p.s, u0)?.v)
}

fn reject_degenerate(m: &Measure, p: &EllipticParams) -> Result<()> {
    if p.alpha == 0.0 {
        if let Some(a) = m.dirac_location() {
            return Err(Error::Degenerate(format!(
                "a Dirac mass at {a} plus an imaginary semicircular element lives on a vertical segment"
            )));
        }
    }
    Ok(())
}

/// Brown-measure density at `u + iv` for any `|v| < φ(u)`; it depends only on `u`.
pub fn brown_density(m: &Measure, p: &EllipticParams, u: f64) -> Result<f64> {
    reject_degenerate(m, p)?;
    let u0 = f_ab_inverse(m, p, u)?;
    map_point(m, p, u0)?.w.ok_or(Error::OutsideDomain(u))
}

/// [`brown_density`] at a planar point; errors outside `Ω`.
pub fn brown_density_at(m: &Measure, p: &EllipticParams, lambda: Complex64) -> Result<f64> {
    reject_degenerate(m, p)?;
    let u0 = f_ab_inverse(m, p, lambda.re)?;
    let mp = map_point(m, p, u0)?;
    if lambda.im.abs() >= mp.phi {
        return Err(Error::OutsideOmega {
            re: lambda.re,
            im: lambda.im,
        });
    }
    mp.w.ok_or(Error::OutsideDomain(lambda.re))
}

/// `U(u0 + i v0) = f(u0) + i (2β/s) v0`, mapping the closure of `Λ_s` onto that of `Ω`.
pub fn pushforward_u(m: &Measure, p: &EllipticParams, lambda0: Complex64) -> Result<Complex64> {
    finite(&[lambda0.re, lambda0.im])?;
    let mp = map_point(m, p, lambda0.re)?;
    if lambda0.im.abs() > mp.v + 1e-9 {
        return Err(Error::OutsideLambda {
            re: lambda0.re,
            im: lambda0.im,
        });
    }
    Ok(Complex64::new(mp.u, p.rhat() * lambda0.im))
}

/// `Q(u + iv) = (s u - 2β f⁻¹(u)) / (α - β)`, or `ψ_s(u)` when `α = β`.
pub fn pushforward_q(m: &Measure, p: &EllipticParams, lambda: Complex64) -> Result<f64> {
    let (u, u0) = omega_preimage(m, p, lambda)?;
    if p.is_circular() {
        subordination::psi_t(m, p.s, u)
    } else {
        Ok((p.s * u - 2.0 * p.beta * u0) / p.r)
    }
}

/// The same map as [`pushforward_q`], computed as `ψ_s(f⁻¹(u))`.
pub fn pushforward_q_via_psi(m: &Measure, p: &EllipticParams, lambda: Complex64) -> Result<f64> {
    let (_, u0) = omega_preimage(m, p, lambda)?;
    subordination::psi_t(m, p.s, u0)
}

fn omega_preimage(m: &Measure, p: &EllipticParams, lambda: Complex64) -> Result<(f64, f64)> {
    finite(&[lambda.re, lambda.im])?;
    let u0 = f_ab_inverse(m, p, lambda.re)?;
    let phi = p.rhat() * v_t(m, p.s, u0)?.v;
    if lambda.im.abs() > phi + 1e-9 {
        return Err(Error::OutsideOmega {
            re: lambda.re,
            im: lambda.im,
        });
    }
    Ok((lambda.re, u0))
}

/// Gradient of `s_t = S(t, λ, 0)` on `Ω_t` for the imaginary case `α = 0, β = t`.
pub fn grad_s(m: &Measure, t: f64, lambda: Complex64) -> Result<(f64, f64)> {
    let p = EllipticParams::imaginary(t)?;
    let (u, u0) = omega_preimage(m, &p, lambda)?;
    Ok((2.0 * u0 / t - 2.0 * u / t, lambda.im / t))
}

/// `ψ_s'(u0) = 1 + s I'(u0)`.
pub fn psi_prime(m: &Measure, s: f64, u0: f64) -> Result<f64> {
    let p = EllipticParams::circular(s)?;
    let mp = map_point(m, &p, u0)?;
    mp.i1_prime.map(|d| 1.0 + s * d).ok_or(Error::OutsideDomain(u0))
}

/// `f''(u0) = ((α - β)/s) ψ_s''(u0)`, differencing the analytic `ψ_s'`.
pub fn f_second_derivative(m: &Measure, p: &EllipticParams, u0: f64) -> Result<f64> {
    finite(&[u0])?;
    let v = v_t(m, p.s, u0)?.v;
    if v <= 0.0 {
        return Err(Error::OutsideLambda { re: u0, im: 0.0 });
    }
    if p.is_circular() {
        return Ok(0.0);
    }
    let h = 1e-4 * (1.0 + u0.abs()).min(v.max(1e-3) * 10.0);
    let d2 = (psi_prime(m, p.s, u0 + h)? - psi_prime(m, p.s, u0 - h)?) / (2.0 * h);
    Ok(p.r / p.s * d2)
}

/// Sampled Brown-measure density over a window of `u0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityField {
    pub params: EllipticParams,
    /// Window in `u0` coordinates.
    pub window: (f64, f64),
    pub u0_grid: Vec<f64>,
    pub u_grid: Vec<f64>,
    pub phi: Vec<f64>,
    /// `None` at finite component endpoints.
    pub w: Vec<Option<f64>>,
    pub components: SupportComponents,
    /// Index ranges of each component inside the grids.
    pub component_ranges: Vec<(usize, usize)>,
    /// `∫ 2 φ w du` including the tail correction.
    pub mass: f64,
    pub tail_correction: f64,
}

/// Default `u0` window: the support dilated by `3√s`, or the `1e-4` quantiles
/// dilated the same way for unbounded laws.
pub fn auto_window(m: &Measure, s: f64) -> (f64, f64) {
    subordination::auto_window(m, s)
}

/// Assembles the density field with about `resolution` grid points.
pub fn density_field(
    m: &Measure,
    p: &EllipticParams,
    resolution: usize,
    window: Option<(f64, f64)>,
) -> Result<DensityField> {
    density_field_with(m, p, resolution, window, Exec::default())
}

pub fn density_field_with(
    m: &Measure,
    p: &EllipticParams,
    resolution: usize,
    window: Option<(f64, f64)>,
    exec: Exec,
) -> Result<DensityField> {
    reject_degenerate(m, p)?;
    let (lo, hi) = window.unwrap_or_else(|| auto_window(m, p.s));
    let FlowGrid { u0_grid, edges, ranges, components, center, .. } = FlowGrid::build(m, p.s, resolution, (lo, hi))?;

    let points: Vec<(f64, bool)> = u0_grid.iter().copied().zip(edges.iter().copied()).collect();
    let mapped = exec.try_map(&points, |&(u0, edge)| {
        if edge {
            // v vanishes at a finite endpoint; report the boundary sample only.
            Ok::<_, Error>((f_ab(m, p, u0).or_else(|_| edge_image(m, p, u0))?, 0.0, None))
        } else {
            let mp = map_point(m, p, u0)?;
            Ok((mp.u, mp.phi, mp.w))
        }
    })?;

    let u_grid: Vec<f64> = mapped.iter().map(|x| x.0).collect();
    let phi: Vec<f64> = mapped.iter().map(|x| x.1).collect();
    let w: Vec<Option<f64>> = mapped.iter().map(|x| x.2).collect();
    for &(s, e) in &ranges {
        if let Some(i) = u_grid[s..e].windows(2).position(|q| q[1] <= q[0]) {
            return Err(Error::NonMonotone(s + i + 1));
        }
    }

    let mut mass = 0.0;
    let mut tail = 0.0;
    let u_center = f_ab(m, p, center)?;
    for (&(s, e), &(a, b)) in ranges.iter().zip(&components.intervals) {
        let g = |i: usize| 2.0 * phi[i] * w[i].unwrap_or(0.0);
        let gs: Vec<f64> = (s..e).map(g).collect();
        mass += richardson_trapezoid(&u_grid[s..e], &gs);
        // Heavy tails: 2φw ≈ K/d² beyond the window.
        if m.support().0.is_infinite() && a <= lo {
            let d = (u_grid[s] - u_center).abs();
            tail += g(s) * d;
        }
        if m.support().1.is_infinite() && b >= hi {
            let d = (u_grid[e - 1] - u_center).abs();
            tail += g(e - 1) * d;
        }
    }

    Ok(DensityField {
        params: *p,
        window: (lo, hi),
        u0_grid,
        u_grid,
        phi,
        w,
        components,
        component_ranges: ranges,
        mass: mass + tail,
        tail_correction: tail,
    })
}

/// Image of a finite component endpoint, where `G` may only exist as a limit.
fn edge_image(m: &Measure, p: &EllipticParams, u0: f64) -> Result<f64> {
    let v = 1e-9 * p.s.sqrt();
    Ok(u0 + p.r * m.kernel_bundle(u0, v, 0.0)?.i1)
}

impl DensityField {
    /// CSV with columns `u0,u,phi,w`; every line of `header` becomes a `#` comment.
    pub fn to_csv(&self, header: &[String]) -> String {
        let mut out = String::new();
        for line in header {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str("u0,u,phi,w\n");
        for i in 0..self.u0_grid.len() {
            let w = self.w[i].map(|x| format!("{x:.17e}")).unwrap_or_default();
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{}\n",
                self.u0_grid[i], self.u_grid[i], self.phi[i], w
            ));
        }
        out
    }

    /// Metadata sidecar: parameters, components, mass and tail correction.
    pub fn sidecar(&self) -> serde_json::Value {
        serde_json::json!({
            "params": self.params,
            "window_u0": [self.window.0, self.window.1],
            "components_u0": self.components.intervals,
            "unbounded": self.components.unbounded,
            "points": self.u0_grid.len(),
            "mass": self.mass,
            "tail_correction": self.tail_correction,
        })
    }

    /// `(u, φ(u))` samples of the upper boundary curve.
    pub fn boundary(&self) -> Vec<(f64, f64)> {
        self.u_grid.iter().copied().zip(self.phi.iter().copied()).collect()
    }

    /// Linear interpolation of `φ` and `w` at `u`, zero outside the sampled set.
    pub fn interpolate(&self, u: f64) -> (f64, f64) {
        for &(s, e) in &self.component_ranges {
            let g = &self.u_grid[s..e];
            if u < g[0] || u > g[g.len() - 1] {
                continue;
            }
            let j = g.partition_point(|&x| x <= u).clamp(1, g.len() - 1);
            let (a, b) = (g[j - 1], g[j]);
            let lam = if b > a { (u - a) / (b - a) } else { 0.0 };
            let at = |i: usize| (self.phi[s + i], self.w[s + i].unwrap_or(0.0));
            let (pa, wa) = at(j - 1);
            let (pb, wb) = at(j);
            // Endpoint samples carry no w; use the neighbour's.
            let wa = if self.w[s + j - 1].is_none() { wb } else { wa };
            let wb = if self.w[s + j].is_none() { wa } else { wb };
            return (pa + lam * (pb - pa), wa + lam * (wb - wa));
        }
        (0.0, 0.0)
    }
}
