//! End-to-end comparison of the general pipeline on the standard Cauchy law
//! against the closed forms in [`crate::cauchy`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::brown_map::{self, map_point, EllipticParams};
use crate::cauchy;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::measure::Measure;
use crate::subordination;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormulaCheck {
    pub formula: String,
    pub points: usize,
    pub max_residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub version: String,
    pub checks: Vec<FormulaCheck>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidateOptions {
    /// Points per grid.
    pub grid_points: usize,
    /// Grids cover `|u| ≤ u_max`.
    pub u_max: f64,
    /// Offset added to every pipeline `v_t` and `φ` value (fault injection).
    pub perturb: f64,
    pub exec: Exec,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            grid_points: 200,
            u_max: 20.0,
            perturb: 0.0,
            exec: Exec::default(),
        }
    }
}

fn grid(n: usize, a: f64) -> Vec<f64> {
    (0..n).map(|k| -a + 2.0 * a * k as f64 / (n - 1).max(1) as f64).collect()
}

fn check<F>(name: &str, threshold: f64, xs: &[f64], exec: Exec, f: F) -> Result<FormulaCheck>
where
    F: Fn(f64) -> Result<f64> + Sync + Send,
{
    let residuals = exec.try_map(xs, |&x| f(x))?;
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    Ok(FormulaCheck {
        formula: name.to_string(),
        points: xs.len(),
        max_residual,
        threshold,
        pass: max_residual <= threshold,
    })
}

/// Runs every oracle-vs-pipeline comparison.
pub fn validate_cauchy(opts: &ValidateOptions) -> Result<ValidationReport> {
    if opts.grid_points < 2 {
        return Err(Error::InvalidParameters("need at least two grid points".into()));
    }
    let m = Measure::cauchy(0.0, 1.0)?;
    let dv = opts.perturb;
    let ex = opts.exec;
    let xs = grid(opts.grid_points, opts.u_max);
    let circ = EllipticParams::circular(1.0)?;
    let ell = EllipticParams::new(0.125, 0.875)?;
    let imag = EllipticParams::imaginary(1.0)?;
    let mut checks = Vec::new();

    checks.push(check("peak height of v_t at u = 0", 1e-10, &[0.25, 1.0, 4.0], ex, |t| {
        Ok((subordination::v_t(&m, t, 0.0)?.v + dv - cauchy::peak_height(t)).abs())
    })?);
    for t in [0.25, 1.0, 4.0] {
        checks.push(check(&format!("cubic height relation for v_t (t = {t})"), 1e-10, &xs, ex, |u| {
            Ok((subordination::v_t(&m, t, u)?.v + dv - cauchy::cauchy_v(t, u)).abs())
        })?);
    }
    checks.push(check("subordination map psi_t = u + u v/(1 + v) (t = 1)", 1e-9, &xs, ex, |u| {
        let fp = subordination::v_t(&m, 1.0, u)?;
        let mut fp = fp;
        fp.v += dv;
        let pipe = if dv == 0.0 {
            subordination::psi_from_flow(&m, &fp)?
        } else {
            u + u * fp.v / (1.0 + fp.v)
        };
        Ok((pipe - cauchy::psi(1.0, u)).abs())
    })?);
    checks.push(check("derivative of psi_t (t = 1)", 1e-8, &xs, ex, |u| {
        Ok((brown_map::psi_prime(&m, 1.0, u)? - cauchy::psi_prime(1.0, u)).abs())
    })?);
    checks.push(check("boundary map f (alpha = 1/8, beta = 7/8)", 1e-9, &xs, ex, |u0| {
        Ok((brown_map::f_ab(&m, &ell, u0)? - cauchy::f_map(0.125, 0.875, u0)).abs())
    })?);
    checks.push(check("circular density (alpha = beta = 1/2)", 1e-8, &xs, ex, |u| {
        Ok((brown_map::brown_density(&m, &circ, u)? - cauchy::cauchy_circular_density(1.0, u)).abs())
    })?);
    checks.push(check("elliptic density (alpha = 1/8, beta = 7/8)", 1e-8, &xs, ex, |u| {
        Ok((brown_map::brown_density(&m, &ell, u)? - cauchy::cauchy_elliptic_density(0.125, 0.875, u)).abs())
    })?);
    checks.push(check("imaginary semicircular density (alpha = 0, beta = 1)", 1e-8, &xs, ex, |u| {
        Ok((brown_map::brown_density(&m, &imag, u)? - cauchy::cauchy_isigma_density(1.0, u)).abs())
    })?);
    checks.push(check("imaginary semicircular boundary phi (beta = 1)", 1e-9, &xs, ex, |u| {
        Ok((brown_map::phi_ab(&m, &imag, u)? + dv - cauchy::cauchy_isigma_phi(1.0, u)).abs())
    })?);
    checks.push(check("elliptic boundary equation (alpha = 1/8, beta = 7/8)", 1e-9, &xs, ex, |u0| {
        let mp = map_point(&m, &ell, u0)?;
        let b = mp.phi + dv;
        let u2 = cauchy::cauchy_elliptic_boundary(0.125, 0.875, b)?;
        Ok((u2 - mp.u * mp.u).abs() / (1.0 + mp.u * mp.u))
    })?);
    checks.push(check("density transfer under U (alpha = 1/8, beta = 7/8)", 1e-8, &xs, ex, |u0| {
        let we = map_point(&m, &ell, u0)?.w.ok_or(Error::OutsideDomain(u0))?;
        let wc = map_point(&m, &circ, u0)?.w.ok_or(Error::OutsideDomain(u0))?;
        let r = ell.rhat();
        let predicted = wc / r / (r + 2.0 * PI * (1.0 - r) * ell.s * wc);
        Ok((we - predicted).abs())
    })?);
    let field = brown_map::density_field_with(&m, &imag, 400, None, ex)?;
    checks.push(FormulaCheck {
        formula: "total mass of the imaginary semicircular field".into(),
        points: field.u0_grid.len(),
        max_residual: (field.mass - 1.0).abs(),
        threshold: 1e-3,
        pass: (field.mass - 1.0).abs() <= 1e-3,
    });
    // Off-axis query must reproduce the on-axis density.
    checks.push(check("density constant on vertical segments", 1e-12, &xs, ex, |u| {
        let w = brown_map::brown_density(&m, &imag, u)?;
        let phi = brown_map::phi_ab(&m, &imag, u)?;
        let w2 = brown_map::brown_density_at(&m, &imag, Complex64::new(u, 0.5 * phi))?;
        Ok((w - w2).abs())
    })?);

    let pass = checks.iter().all(|c| c.pass);
    Ok(ValidationReport {
        version: crate::VERSION.to_string(),
        checks,
        pass,
    })
}

impl ValidationReport {
    pub fn failures(&self) -> impl Iterator<Item = &FormulaCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} {:<58} max residual {:.3e} (threshold {:.0e}, {} points)\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.formula,
                c.max_residual,
                c.threshold,
                c.points
            ));
        }
        out.push_str(if self.pass { "overall: PASS\n" } else { "overall: FAIL\n" });
        out
    }
}
