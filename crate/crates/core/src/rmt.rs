//! Random-matrix laboratory: `A_N + √α X̃_N + i√β X_N` with `A_N` diagonal
//! with i.i.d. entries from `μ` and independent GUE factors, its spectrum, and
//! binned comparison against a [`DensityField`].

use faer::complex_native::c64;
use faer::Mat;
use num_complex::Complex64;
use rand::distributions::{Distribution, Open01};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::brown_map::{DensityField, EllipticParams};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::measure::{Measure, MeasureKind};

/// Largest accepted `‖MV - VΛ‖_F / (‖M‖_F ‖V‖_F)`.
pub const BACKWARD_TOL: f64 = 1e-8;

/// Seeds of the three random ingredients, derived from one master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSeeds {
    pub master: u64,
    pub diagonal: u64,
    pub gue_real: u64,
    pub gue_imag: u64,
}

impl ModelSeeds {
    pub fn from_master(master: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master);
        Self {
            master,
            diagonal: rng.next_u64(),
            gue_real: rng.next_u64(),
            gue_imag: rng.next_u64(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenCloud {
    pub n: usize,
    pub eigenvalues: Vec<Complex64>,
    pub seeds: Option<ModelSeeds>,
    pub backward_error: f64,
}

/// GUE normalized so the spectrum tends to the semicircle of variance 1.
pub fn sample_gue(n: usize, seed: u64) -> Result<Mat<c64>> {
    if n == 0 {
        return Err(Error::InvalidParameters("matrix size must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let off = (0.5 / n as f64).sqrt();
    let diag = (1.0 / n as f64).sqrt();
    let mut m = Mat::<c64>::zeros(n, n);
    for i in 0..n {
        let x: f64 = StandardNormal.sample(&mut rng);
        m.write(i, i, c64::new(diag * x, 0.0));
        for j in i + 1..n {
            let a: f64 = StandardNormal.sample(&mut rng);
            let b: f64 = StandardNormal.sample(&mut rng);
            let z = c64::new(off * a, off * b);
            m.write(i, j, z);
            m.write(j, i, z.conj());
        }
    }
    Ok(m)
}

/// `n` i.i.d. draws from `μ` by inverse-CDF sampling.
pub fn sample_diag_law(m: &Measure, n: usize, seed: u64) -> Result<Vec<f64>> {
    if matches!(m.kind(), MeasureKind::Tabulated { .. }) {
        return Err(Error::UnsupportedSampling("tabulated"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n)
        .map(|_| {
            let p: f64 = rng.sample(Open01);
            m.quantile(p)
        })
        .collect())
}

/// `diag(a) + √α X̃ + i √β X`.
pub fn build_model(diag: &[f64], p: &EllipticParams, seeds: &ModelSeeds) -> Result<Mat<c64>> {
    let n = diag.len();
    let x_re = sample_gue(n, seeds.gue_real)?;
    let x_im = sample_gue(n, seeds.gue_imag)?;
    let (sa, sb) = (p.alpha.sqrt(), p.beta.sqrt());
    Ok(Mat::from_fn(n, n, |i, j| {
        let a = x_re.read(i, j);
        let b = x_im.read(i, j);
        // √α a + i √β b
        let mut z = c64::new(sa * a.re - sb * b.im, sa * a.im + sb * b.re);
        if i == j {
            z.re += diag[i];
        }
        z
    }))
}

fn frobenius(m: &Mat<c64>) -> f64 {
    let mut acc = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m.read(i, j);
            acc += z.re * z.re + z.im * z.im;
        }
    }
    acc.sqrt()
}

/// All eigenvalues of a dense complex matrix, with the backward error of the
/// full decomposition.
pub fn eigenvalues(m: &Mat<c64>) -> Result<EigenCloud> {
    let n = m.nrows();
    if n != m.ncols() || n == 0 {
        return Err(Error::InvalidParameters("eigenvalues need a nonempty square matrix".into()));
    }
    for j in 0..n {
        for i in 0..n {
            let z = m.read(i, j);
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFiniteInput);
            }
        }
    }
    let evd = m.eigendecomposition::<c64>();
    let u = evd.u();
    let s = evd.s();
    let resid = m * u - u * s.column_vector().column_vector_as_diagonal();
    let u_owned = u.to_owned();
    let norm_m = frobenius(m);
    let norm_u = frobenius(&u_owned);
    let backward_error = if norm_m > 0.0 {
        frobenius(&resid) / (norm_m * norm_u)
    } else {
        frobenius(&resid)
    };
    let col = s.column_vector();
    let eigenvalues: Vec<Complex64> = (0..n)
        .map(|i| {
            let z = col.read(i);
            Complex64::new(z.re, z.im)
        })
        .collect();
    if !(backward_error <= BACKWARD_TOL) || eigenvalues.iter().any(|z| !z.is_finite()) {
        return Err(Error::ConvergenceFailure { residual: backward_error });
    }
    Ok(EigenCloud {
        n,
        eigenvalues,
        seeds: None,
        backward_error,
    })
}

/// Samples the model for `μ` and `p` with size `n` and returns its spectrum.
pub fn simulate(m: &Measure, p: &EllipticParams, n: usize, master_seed: u64) -> Result<EigenCloud> {
    let seeds = ModelSeeds::from_master(master_seed);
    let diag = sample_diag_law(m, n, seeds.diagonal)?;
    let model = build_model(&diag, p, &seeds)?;
    let mut cloud = eigenvalues(&model)?;
    cloud.seeds = Some(seeds);
    Ok(cloud)
}

/// [`simulate`] for several master seeds, one matrix per task.
pub fn simulate_many(m: &Measure, p: &EllipticParams, n: usize, seeds: &[u64], exec: Exec) -> Result<Vec<EigenCloud>> {
    exec.try_map(seeds, |&s| simulate(m, p, n, s))
}

impl EigenCloud {
    /// Wraps arbitrary points (for example a Monte-Carlo sample) as a cloud.
    pub fn from_points(points: Vec<Complex64>) -> Self {
        Self {
            n: points.len(),
            eigenvalues: points,
            seeds: None,
            backward_error: 0.0,
        }
    }

    /// `re,im` rows after `#` comment lines.
    pub fn to_csv(&self, header: &[String]) -> String {
        let mut out = String::new();
        for line in header {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str("re,im\n");
        for z in &self.eigenvalues {
            out.push_str(&format!("{:.17e},{:.17e}\n", z.re, z.im));
        }
        out
    }
}

/// Rectangle split into `nu × nv` bins; everything else is one extra cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinBox {
    pub u: (f64, f64),
    pub v: (f64, f64),
    pub nu: usize,
    pub nv: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BinReport {
    pub iu: usize,
    pub iv: usize,
    pub empirical: f64,
    pub brown: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub bin_box: BinBox,
    /// Half the ℓ¹ distance over the bins and the outside cell.
    pub tv_distance: f64,
    /// Fraction of the cloud outside the box.
    pub clipped_fraction: f64,
    /// Brown mass outside the box.
    pub brown_outside: f64,
    pub bins: Vec<BinReport>,
}

/// Cumulative `u`-marginal `∫ 2 φ w` over the sampled field.
fn marginal_cdf(field: &DensityField) -> (Vec<f64>, Vec<f64>) {
    let mut us = Vec::new();
    let mut cum = Vec::new();
    let mut acc = 0.0;
    for &(s, e) in &field.component_ranges {
        for i in s..e {
            if i > s {
                let g = |k: usize| 2.0 * field.phi[k] * field.w[k].unwrap_or(0.0);
                acc += 0.5 * (g(i - 1) + g(i)) * (field.u_grid[i] - field.u_grid[i - 1]);
            }
            us.push(field.u_grid[i]);
            cum.push(acc);
        }
    }
    (us, cum)
}

fn invert_cdf(us: &[f64], cum: &[f64], target: f64) -> f64 {
    let j = cum.partition_point(|&c| c < target).clamp(1, cum.len() - 1);
    let (c0, c1) = (cum[j - 1], cum[j]);
    if c1 > c0 {
        us[j - 1] + (target - c0) / (c1 - c0) * (us[j] - us[j - 1])
    } else {
        us[j]
    }
}

/// Default box: the central 95% of the `u`-marginal and the full height of `Ω` there.
pub fn default_bin_box(field: &DensityField, nu: usize, nv: usize) -> BinBox {
    let (us, cum) = marginal_cdf(field);
    let total = *cum.last().unwrap_or(&1.0);
    let lo = invert_cdf(&us, &cum, 0.025 * total);
    let hi = invert_cdf(&us, &cum, 0.975 * total);
    let vmax = field
        .u_grid
        .iter()
        .zip(&field.phi)
        .filter(|(u, _)| **u >= lo && **u <= hi)
        .map(|(_, p)| *p)
        .fold(0.0, f64::max);
    BinBox {
        u: (lo, hi),
        v: (-vmax, vmax),
        nu,
        nv,
    }
}

/// Brown mass of `[u1, u2] × [v1, v2]` from the interpolated field.
fn brown_bin_mass(field: &DensityField, u1: f64, u2: f64, v1: f64, v2: f64) -> f64 {
    let sub = 64;
    let h = (u2 - u1) / sub as f64;
    (0..sub)
        .map(|k| {
            let u = u1 + (k as f64 + 0.5) * h;
            let (phi, w) = field.interpolate(u);
            let overlap = (v2.min(phi) - v1.max(-phi)).max(0.0);
            w * overlap * h
        })
        .sum()
}

/// Binned total-variation distance between a cloud and the Brown measure.
pub fn cloud_vs_density(cloud: &EigenCloud, field: &DensityField, bin_box: BinBox) -> Comparison {
    let BinBox { u, v, nu, nv } = bin_box;
    let du = (u.1 - u.0) / nu as f64;
    let dv = (v.1 - v.0) / nv as f64;
    let mut counts = vec![0usize; nu * nv];
    let mut outside = 0usize;
    for z in &cloud.eigenvalues {
        let iu = ((z.re - u.0) / du).floor();
        let iv = ((z.im - v.0) / dv).floor();
        if iu >= 0.0 && iv >= 0.0 && (iu as usize) < nu && (iv as usize) < nv {
            counts[iu as usize * nv + iv as usize] += 1;
        } else {
            outside += 1;
        }
    }
    let n = cloud.eigenvalues.len().max(1) as f64;
    let cells: Vec<(usize, usize)> = (0..nu).flat_map(|i| (0..nv).map(move |j| (i, j))).collect();
    let brown = Exec::default().map(&cells, |&(i, j)| {
        let u1 = u.0 + i as f64 * du;
        let v1 = v.0 + j as f64 * dv;
        brown_bin_mass(field, u1, u1 + du, v1, v1 + dv)
    });
    let inside: f64 = brown.iter().sum();
    let brown_outside = (1.0 - inside).max(0.0);
    let mut l1 = (outside as f64 / n - brown_outside).abs();
    let bins: Vec<BinReport> = cells
        .iter()
        .zip(&brown)
        .map(|(&(iu, iv), &b)| {
            let e = counts[iu * nv + iv] as f64 / n;
            l1 += (e - b).abs();
            BinReport {
                iu,
                iv,
                empirical: e,
                brown: b,
            }
        })
        .collect();
    Comparison {
        bin_box,
        tv_distance: 0.5 * l1,
        clipped_fraction: outside as f64 / n,
        brown_outside,
        bins,
    }
}

/// I.i.d. sample from the Brown measure restricted to the field's window:
/// `u` from the marginal `2 φ w`, then `v` uniform on `(-φ(u), φ(u))`.
pub fn sample_field(field: &DensityField, n: usize, seed: u64) -> Vec<Complex64> {
    let (us, cum) = marginal_cdf(field);
    let total = *cum.last().unwrap_or(&0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let p: f64 = rng.sample(Open01);
            let u = invert_cdf(&us, &cum, p * total);
            let (phi, _) = field.interpolate(u);
            let y: f64 = rng.gen_range(-1.0..1.0);
            Complex64::new(u, y * phi)
        })
        .collect()
}
