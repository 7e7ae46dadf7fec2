//! The semicircular flow: `v_t`, `H_r`, `ψ_t`, the real trace of `Λ_t` and
//! the density of `x0 ⊞ σ_t`.

use num_complex::Complex64;
use serde::Serialize;

use std::f64::consts::PI;

use crate::error::{finite, Error, Result};
use crate::exec::Exec;
use crate::measure::{richardson_trapezoid, Measure};
use crate::roots;

/// Tolerance on `|Im H_t(u + i v_t(u))|`.
pub const IMAGINARY_TOL: f64 = 1e-9;

/// `v_t(u)` together with its derivative and root residual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowPoint {
    pub u: f64,
    pub t: f64,
    pub v: f64,
    /// `dv/du`; `None` at points where it is undefined (a component endpoint).
    pub dv_du: Option<f64>,
    /// `|i0(u, v) - 1/t|` when `v > 0`, zero otherwise.
    pub residual: f64,
}

/// Maximal open intervals of the real line on which `v_t > 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportComponents {
    pub intervals: Vec<(f64, f64)>,
    /// Set when a component reaches an end of the search window.
    pub unbounded: bool,
}

/// Search window for [`support_components`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Search {
    pub lower: f64,
    pub upper: f64,
    pub step: f64,
}

fn check_t(t: f64) -> Result<()> {
    finite(&[t])?;
    if t <= 0.0 {
        return Err(Error::InvalidParameters(format!("t = {t} must be positive")));
    }
    Ok(())
}

/// `t · i0(u, 0⁺) - 1`, with `+∞` when the integral diverges.
fn excess(m: &Measure, t: f64, u: f64) -> Result<f64> {
    Ok(match m.poisson_limit_i0(u)? {
        Some(i0) => t * i0 - 1.0,
        None => f64::INFINITY,
    })
}

/// Solves `i0(u, v) = 1/t` for `v ∈ (0, √t]`.
pub fn v_t(m: &Measure, t: f64, u: f64) -> Result<FlowPoint> {
    check_t(t)?;
    finite(&[u])?;
    if let Some(a) = m.dirac_location() {
        let d2 = (u - a) * (u - a);
        if d2 >= t {
            return Ok(FlowPoint {
                u,
                t,
                v: 0.0,
                dv_du: if d2 > t { Some(0.0) } else { None },
                residual: 0.0,
            });
        }
        let v = (t - d2).sqrt();
        return Ok(FlowPoint {
            u,
            t,
            v,
            dv_du: Some(-(u - a) / v),
            residual: 0.0,
        });
    }

    let e0 = excess(m, t, u)?;
    if e0 <= 0.0 {
        return Ok(FlowPoint {
            u,
            t,
            v: 0.0,
            dv_du: if e0 < 0.0 { Some(0.0) } else { None },
            residual: 0.0,
        });
    }
    let mut failure = None;
    let v = roots::newton_bracketed(
        |v| {
            if v == 0.0 {
                return (e0, f64::NEG_INFINITY);
            }
            match m.kernel_bundle(u, v, 0.0) {
                Ok(b) => (t * b.i0 - 1.0, -2.0 * t * v * b.j0),
                Err(e) => {
                    failure.get_or_insert(e);
                    (f64::NAN, f64::NAN)
                }
            }
        },
        0.0,
        t.sqrt(),
        1e-14,
        1e-13,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let v = v?;
    let b = m.kernel_bundle(u, v, 0.0)?;
    Ok(FlowPoint {
        u,
        t,
        v,
        dv_du: Some(-b.j1 / (v * b.j0)),
        residual: (b.i0 - 1.0 / t).abs(),
    })
}

/// Locates the components of `{v_t > 0}` inside the search window.
pub fn support_components(m: &Measure, t: f64, search: Search) -> Result<SupportComponents> {
    check_t(t)?;
    let Search { lower, upper, step } = search;
    finite(&[lower, upper, step])?;
    if !(upper > lower) || step <= 0.0 {
        return Err(Error::InvalidParameters("empty search window".into()));
    }
    let n = ((upper - lower) / step).ceil().max(1.0) as usize;
    let nodes: Vec<f64> = (0..=n).map(|k| (lower + k as f64 * step).min(upper)).collect();
    let signs = Exec::default().try_map(&nodes, |&u| excess(m, t, u).map(|e| e > 0.0))?;
    let mids: Vec<f64> = nodes.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let mid_signs = Exec::default().try_map(&mids, |&u| excess(m, t, u).map(|e| e > 0.0))?;

    let refine = |a: f64, b: f64| -> Result<f64> {
        let g = |u: f64| match excess(m, t, u) {
            Ok(e) => e,
            Err(_) => f64::NAN,
        };
        roots::bisect(g, a, b, 1e-12, 0.0)
    };

    let mut intervals = Vec::new();
    let mut start = if signs[0] { Some(lower) } else { None };
    for k in 0..n {
        let (a, b) = (signs[k], signs[k + 1]);
        if a == b && mid_signs[k] != a {
            return Err(Error::ResolutionTooCoarse(mids[k]));
        }
        if a != b {
            let edge = refine(nodes[k], nodes[k + 1])?;
            if b {
                start = Some(edge);
            } else if let Some(s) = start.take() {
                intervals.push((s, edge));
            }
        }
    }
    if let Some(s) = start {
        intervals.push((s, upper));
    }
    let unbounded = signs[0] || signs[n];
    Ok(SupportComponents { intervals, unbounded })
}

/// `H_r(z) = z + r G(z)`.
pub fn h_map(m: &Measure, r: f64, z: Complex64) -> Result<Complex64> {
    finite(&[r])?;
    Ok(z + r * m.cauchy_transform(z)?)
}

/// `Re G` on the boundary curve: `i1(u, v)` when `v > 0`, the real limit otherwise.
pub(crate) fn boundary_re_g(m: &Measure, u: f64, v: f64) -> Result<f64> {
    if v > 0.0 {
        Ok(m.kernel_bundle(u, v, 0.0)?.i1)
    } else {
        Ok(m.cauchy_transform(Complex64::new(u, 0.0))?.re)
    }
}

/// `ψ_t` evaluated from an already computed flow point.
pub fn psi_from_flow(m: &Measure, fp: &FlowPoint) -> Result<f64> {
    let (u, v, t) = (fp.u, fp.v, fp.t);
    if v > 0.0 {
        let b = m.kernel_bundle(u, v, 0.0)?;
        let im = v * (1.0 - t * b.i0);
        if im.abs() > IMAGINARY_TOL {
            return Err(Error::ImaginaryResidual(im));
        }
        Ok(u + t * b.i1)
    } else {
        Ok(u + t * boundary_re_g(m, u, 0.0)?)
    }
}

/// `ψ_t(u) = H_t(u + i v_t(u))`, which is real.
pub fn psi_t(m: &Measure, t: f64, u: f64) -> Result<f64> {
    psi_from_flow(m, &v_t(m, t, u)?)
}

/// Pairs `(ψ_t(u), v_t(u) / (π t))` over the grid: the density of `x0 ⊞ σ_t`
/// at the pushed locations.
pub fn free_convolution_density(m: &Measure, t: f64, u_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    free_convolution_density_with(m, t, u_grid, Exec::default())
}

pub fn free_convolution_density_with(m: &Measure, t: f64, u_grid: &[f64], exec: Exec) -> Result<Vec<(f64, f64)>> {
    check_t(t)?;
    let out = exec.try_map(u_grid, |&u| {
        let fp = v_t(m, t, u)?;
        Ok::<_, Error>((psi_from_flow(m, &fp)?, fp.v / (PI * t)))
    })?;
    if let Some(i) = out.windows(2).position(|w| w[1].0 <= w[0].0) {
        return Err(Error::NonMonotone(i + 1));
    }
    Ok(out)
}

/// Default window: the support dilated by `3√t`, or the `1e-4` quantiles
/// dilated the same way for unbounded laws.
pub fn auto_window(m: &Measure, t: f64) -> (f64, f64) {
    let (lo, hi) = m.support();
    let pad = 3.0 * t.sqrt();
    let lo = if lo.is_finite() { lo } else { m.quantile(1e-4) };
    let hi = if hi.is_finite() { hi } else { m.quantile(1.0 - 1e-4) };
    (lo - pad, hi + pad)
}

fn component_grid(a: f64, b: f64, open_lo: bool, open_hi: bool, n: usize, center: f64, width: f64) -> Vec<f64> {
    let n = n.max(3);
    let k = |i: usize| i as f64 / (n - 1) as f64;
    match (open_lo, open_hi) {
        (false, false) => (0..n).map(|i| 0.5 * (a + b) - 0.5 * (b - a) * (PI * k(i)).cos()).collect(),
        (true, true) => {
            let c = center.clamp(a, b);
            let (xa, xb) = (((a - c) / width).asinh(), ((b - c) / width).asinh());
            (0..n).map(|i| c + width * (xa + (xb - xa) * k(i)).sinh()).collect()
        }
        (false, true) => (0..n).map(|i| a + (b - a) * (1.0 - (0.5 * PI * k(i)).cos())).collect(),
        (true, false) => (0..n).map(|i| b - (b - a) * (1.0 - (0.5 * PI * k(i)).cos())).collect(),
    }
}

/// Sample points of `u` over the components of `{v_t > 0}` inside a window.
///
/// Closed components get Chebyshev points (endpoints included and flagged in
/// `edges`), window-clipped ones are stretched towards the median.
#[derive(Debug, Clone)]
pub struct FlowGrid {
    pub window: (f64, f64),
    pub u0_grid: Vec<f64>,
    pub edges: Vec<bool>,
    pub ranges: Vec<(usize, usize)>,
    pub components: SupportComponents,
    pub center: f64,
}

impl FlowGrid {
    pub fn build(m: &Measure, t: f64, resolution: usize, (lo, hi): (f64, f64)) -> Result<Self> {
        check_t(t)?;
        finite(&[lo, hi])?;
        if !(hi > lo) {
            return Err(Error::InvalidParameters(format!("empty window [{lo}, {hi}]")));
        }
        if resolution < 8 {
            return Err(Error::InvalidParameters("resolution must be at least 8".into()));
        }
        let search = Search {
            lower: lo,
            upper: hi,
            step: (hi - lo) / (4 * resolution) as f64,
        };
        let components = support_components(m, t, search)?;
        let total_len: f64 = components.intervals.iter().map(|c| c.1 - c.0).sum();
        let center = m.quantile(0.5);
        let width = t.sqrt().min(m.scale()).max(1e-3 * t.sqrt());

        let mut u0_grid = Vec::with_capacity(resolution);
        let mut edges = Vec::new();
        let mut ranges = Vec::new();
        for &(a, b) in &components.intervals {
            let n = ((resolution as f64) * (b - a) / total_len).round() as usize;
            let (open_lo, open_hi) = (a <= lo, b >= hi);
            let start = u0_grid.len();
            let pts = component_grid(a, b, open_lo, open_hi, n.max(17) | 1, center, width);
            let last = pts.len() - 1;
            for (i, x) in pts.into_iter().enumerate() {
                u0_grid.push(x);
                edges.push((i == 0 && !open_lo) || (i == last && !open_hi));
            }
            ranges.push((start, u0_grid.len()));
        }
        Ok(Self {
            window: (lo, hi),
            u0_grid,
            edges,
            ranges,
            components,
            center,
        })
    }
}

/// Density of `x0 ⊞ σ_t` sampled at `x = ψ_t(u)` over a [`FlowGrid`].
#[derive(Debug, Clone, Serialize)]
pub struct ConvolutionLaw {
    pub t: f64,
    pub u: Vec<f64>,
    pub x: Vec<f64>,
    pub density: Vec<f64>,
    pub ranges: Vec<(usize, usize)>,
    /// Trapezoid mass plus `tail_correction`.
    pub mass: f64,
    pub tail_correction: f64,
}

pub fn free_convolution_law(m: &Measure, t: f64, resolution: usize, window: Option<(f64, f64)>, exec: Exec) -> Result<ConvolutionLaw> {
    let win = window.unwrap_or_else(|| auto_window(m, t));
    let grid = FlowGrid::build(m, t, resolution, win)?;
    let pts: Vec<(f64, bool)> = grid.u0_grid.iter().copied().zip(grid.edges.iter().copied()).collect();
    let out = exec.try_map(&pts, |&(u, edge)| {
        if edge {
            // Finite endpoint: v = 0 and ψ is the limit of u + t·Re G.
            let eps_v = 1e-9 * t.sqrt();
            return Ok::<_, Error>((u + t * m.kernel_bundle(u, eps_v, 0.0)?.i1, 0.0));
        }
        let fp = v_t(m, t, u)?;
        Ok((psi_from_flow(m, &fp)?, fp.v / (PI * t)))
    })?;
    let x: Vec<f64> = out.iter().map(|p| p.0).collect();
    let density: Vec<f64> = out.iter().map(|p| p.1).collect();
    let (lo, hi) = win;
    let (slo, shi) = m.support();
    let x_center = psi_t(m, t, grid.center.clamp(lo, hi)).unwrap_or(grid.center);
    let mut mass = 0.0;
    let mut tail = 0.0;
    for (&(s, e), &(a, b)) in grid.ranges.iter().zip(&grid.components.intervals) {
        if let Some(i) = x[s..e].windows(2).position(|q| q[1] <= q[0]) {
            return Err(Error::NonMonotone(s + i + 1));
        }
        mass += richardson_trapezoid(&x[s..e], &density[s..e]);
        // Heavy tails: density ≈ K/d² beyond the window.
        if slo.is_infinite() && a <= lo {
            tail += density[s] * (x[s] - x_center).abs();
        }
        if shi.is_infinite() && b >= hi {
            tail += density[e - 1] * (x[e - 1] - x_center).abs();
        }
    }
    Ok(ConvolutionLaw {
        t,
        u: grid.u0_grid,
        x,
        density,
        ranges: grid.ranges,
        mass: mass + tail,
        tail_correction: tail,
    })
}

impl ConvolutionLaw {
    /// CSV with columns `u,x,density`.
    pub fn to_csv(&self, header: &[String]) -> String {
        let mut out = String::new();
        for line in header {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str("u,x,density\n");
        for i in 0..self.u.len() {
            out.push_str(&format!("{:.17e},{:.17e},{:.17e}\n", self.u[i], self.x[i], self.density[i]));
        }
        out
    }

    /// Density at `x` by linear interpolation, zero off the sampled set.
    pub fn interpolate(&self, x: f64) -> f64 {
        for &(s, e) in &self.ranges {
            let g = &self.x[s..e];
            if x < g[0] || x > g[g.len() - 1] {
                continue;
            }
            let j = g.partition_point(|&y| y <= x).clamp(1, g.len() - 1);
            let (a, b) = (g[j - 1], g[j]);
            let lam = if b > a { (x - a) / (b - a) } else { 0.0 };
            return self.density[s + j - 1] + lam * (self.density[s + j] - self.density[s + j - 1]);
        }
        0.0
    }
}

/// Implicit-differentiation `dv/du` next to a central difference with step 1e-5.
pub fn v_t_derivative_fd_check(m: &Measure, t: f64, u: f64) -> Result<(f64, f64)> {
    let fp = v_t(m, t, u)?;
    if fp.v <= 0.0 {
        return Err(Error::OutsideDomain(u));
    }
    let analytic = fp.dv_du.ok_or(Error::OutsideDomain(u))?;
    let h = 1e-5;
    let fd = (v_t(m, t, u + h)?.v - v_t(m, t, u - h)?.v) / (2.0 * h);
    Ok((analytic, fd))
}
