//! `brown`: command-line front end for brown-core.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use brown_core::brown_map::{self, EllipticParams};
use brown_core::validation::{validate_cauchy, ValidateOptions};
use brown_core::{hj, rmt, subordination, svg, Complex64, Exec, Measure, VERSION};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "brown", version, about = "Brown measures of x0 + elliptic perturbations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Density field on Ω (u0, u, φ, w per grid point).
    Density(Common),
    /// Upper boundary curve of Ω.
    Boundary(Common),
    /// Law of x0 + σ_t.
    Convolve(Common),
    /// Images of grid points of Λ under U and Q.
    Pushforward(Common),
    /// Hamilton–Jacobi characteristic from one starting point.
    Characteristics(Common),
    /// Random-matrix eigenvalues compared with the density field.
    Simulate(Common),
    /// Compare the general pipeline with the Cauchy closed forms.
    ValidateCauchy(Common),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Args, Clone, Debug)]
struct Common {
    /// Measure spec JSON file.
    #[arg(long)]
    measure: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    /// Semicircular time for convolve and characteristics.
    #[arg(long)]
    t: Option<f64>,
    /// `MIN,MAX` window on the real axis.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    window: Option<(f64, f64)>,
    #[arg(long, default_value_t = 256)]
    resolution: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Matrix size for simulate.
    #[arg(long, default_value_t = 200)]
    n: usize,
    /// Histogram bins per axis for simulate.
    #[arg(long, default_value_t = 10)]
    bins: usize,
    /// `U,V` starting point for characteristics.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    lambda0: Option<(f64, f64)>,
    #[arg(long, default_value_t = 1.0)]
    eps0: f64,
    /// Offset added to pipeline heights in validate-cauchy (fault injection).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    perturb: f64,
    /// Run on one thread.
    #[arg(long)]
    sequential: bool,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected A,B, got {s:?}"))?;
    let p = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

/// Everything needed to reproduce an output file.
#[derive(Debug, Clone, Serialize)]
struct RunConfig {
    version: &'static str,
    command: &'static str,
    measure_path: Option<PathBuf>,
    measure: Option<serde_json::Value>,
    params: Option<EllipticParams>,
    t: Option<f64>,
    window: Option<(f64, f64)>,
    resolution: usize,
    output_dir: PathBuf,
    seed: u64,
    format: Format,
    n: usize,
    bins: usize,
    lambda0: Option<(f64, f64)>,
    eps0: f64,
    perturb: f64,
}

enum CliError {
    Usage(String),
    Numeric(brown_core::Error),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "usage error: {s}"),
            CliError::Numeric(e) => write!(f, "numerical failure: {e}"),
            CliError::Io(s) => write!(f, "i/o error: {s}"),
        }
    }
}

impl From<brown_core::Error> for CliError {
    fn from(e: brown_core::Error) -> Self {
        use brown_core::Error::*;
        match e {
            InvalidMeasure(_) | InvalidParameters(_) | NonFiniteInput => CliError::Usage(e.to_string()),
            e => CliError::Numeric(e),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

struct Ctx {
    cfg: RunConfig,
    measure: Option<Measure>,
    exec: Exec,
}

impl Ctx {
    fn new(command: &'static str, c: &Common) -> CliResult<Self> {
        if c.resolution < 16 {
            return Err(CliError::Usage(format!("--resolution {} is below 16", c.resolution)));
        }
        if let Some((a, b)) = c.window {
            if !(a.is_finite() && b.is_finite() && b > a) {
                return Err(CliError::Usage(format!("window [{a}, {b}] is empty")));
            }
        }
        let measure = match &c.measure {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
                Some(Measure::from_json(&text)?)
            }
            None => None,
        };
        let params = if command == "validate-cauchy" {
            None
        } else {
            Some(EllipticParams::new(c.alpha, c.beta)?)
        };
        let cfg = RunConfig {
            version: VERSION,
            command,
            measure_path: c.measure.clone(),
            measure: measure.as_ref().map(|m| serde_json::to_value(m.spec()).unwrap_or_default()),
            params,
            t: c.t,
            window: c.window,
            resolution: c.resolution,
            output_dir: c.out.clone(),
            seed: c.seed,
            format: c.format,
            n: c.n,
            bins: c.bins,
            lambda0: c.lambda0,
            eps0: c.eps0,
            perturb: c.perturb,
        };
        fs::create_dir_all(&c.out).map_err(|e| CliError::Io(format!("{}: {e}", c.out.display())))?;
        let exec = if c.sequential { Exec::Sequential } else { Exec::Parallel };
        Ok(Self { cfg, measure, exec })
    }

    fn measure(&self) -> CliResult<&Measure> {
        self.measure.as_ref().ok_or_else(|| CliError::Usage("--measure is required".into()))
    }

    fn params(&self) -> EllipticParams {
        self.cfg.params.expect("params are set for every command except validate-cauchy")
    }

    fn t(&self) -> CliResult<f64> {
        self.cfg.t.ok_or_else(|| CliError::Usage("--t is required".into()))
    }

    fn header(&self) -> Vec<String> {
        vec![
            format!("brown {VERSION}"),
            format!("config {}", serde_json::to_string(&self.cfg).unwrap_or_default()),
        ]
    }

    fn write(&self, name: &str, content: &str) -> CliResult<PathBuf> {
        let path = self.cfg.output_dir.join(name);
        fs::write(&path, content).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Ok(path)
    }

    /// JSON document carrying the config next to `body`.
    fn write_json(&self, name: &str, body: serde_json::Value) -> CliResult<PathBuf> {
        let doc = json!({ "version": VERSION, "config": self.cfg, "result": body });
        self.write(name, &(serde_json::to_string_pretty(&doc).unwrap_or_default() + "\n"))
    }
}

fn csv(header: &[String], columns: &str, rows: impl Iterator<Item = Vec<f64>>) -> String {
    let mut out = String::new();
    for line in header {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(columns);
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.17e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn report(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn field(ctx: &Ctx) -> CliResult<brown_map::DensityField> {
    let m = ctx.measure()?;
    Ok(brown_map::density_field_with(m, &ctx.params(), ctx.cfg.resolution, ctx.cfg.window, ctx.exec)?)
}

fn u_range(f: &brown_map::DensityField) -> (f64, f64) {
    let lo = f.u_grid.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = f.u_grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

fn cmd_density(ctx: &Ctx) -> CliResult<()> {
    let f = field(ctx)?;
    let mut paths = Vec::new();
    match ctx.cfg.format {
        Format::Json => paths.push(ctx.write_json("density.json", json!({ "summary": f.sidecar(), "field": f }))?),
        fmt => {
            paths.push(ctx.write("density.csv", &f.to_csv(&ctx.header()))?);
            paths.push(ctx.write_json("density.json", f.sidecar())?);
            if fmt == Format::Svg {
                paths.push(ctx.write("density.svg", &svg::heatmap(&f, u_range(&f), &ctx.header()))?);
            }
        }
    }
    println!("mass {:.10} (tail correction {:.3e})", f.mass, f.tail_correction);
    report(&paths);
    Ok(())
}

fn cmd_boundary(ctx: &Ctx) -> CliResult<()> {
    let f = field(ctx)?;
    let rows = || (0..f.u0_grid.len()).map(|i| vec![f.u0_grid[i], f.u_grid[i], f.phi[i]]);
    let mut paths = Vec::new();
    match ctx.cfg.format {
        Format::Json => {
            let pts: Vec<Vec<f64>> = rows().collect();
            paths.push(ctx.write_json("boundary.json", json!({ "columns": ["u0", "u", "phi"], "rows": pts, "summary": f.sidecar() }))?);
        }
        fmt => {
            paths.push(ctx.write("boundary.csv", &csv(&ctx.header(), "u0,u,phi", rows()))?);
            paths.push(ctx.write_json("boundary.json", f.sidecar())?);
            if fmt == Format::Svg {
                let pts = f.boundary();
                paths.push(ctx.write("boundary.svg", &svg::line_plot("Boundary of Ω", &pts, &ctx.header()))?);
            }
        }
    }
    report(&paths);
    Ok(())
}

fn cmd_convolve(ctx: &Ctx) -> CliResult<()> {
    let m = ctx.measure()?;
    let t = ctx.t()?;
    let law = subordination::free_convolution_law(m, t, ctx.cfg.resolution, ctx.cfg.window, ctx.exec)?;
    let max = law.density.iter().cloned().fold(0.0, f64::max);
    let summary = json!({
        "t": t,
        "points": law.x.len(),
        "mass": law.mass,
        "tail_correction": law.tail_correction,
        "max_density": max,
    });
    let mut paths = Vec::new();
    match ctx.cfg.format {
        Format::Json => paths.push(ctx.write_json("convolve.json", json!({ "summary": summary, "law": law }))?),
        fmt => {
            paths.push(ctx.write("convolve.csv", &law.to_csv(&ctx.header()))?);
            paths.push(ctx.write_json("convolve.json", summary)?);
            if fmt == Format::Svg {
                let pts: Vec<(f64, f64)> = law.x.iter().copied().zip(law.density.iter().copied()).collect();
                paths.push(ctx.write("convolve.svg", &svg::line_plot("Density of x0 + σ_t", &pts, &ctx.header()))?);
            }
        }
    }
    println!("mass {:.10}, max density {:.12}", law.mass, max);
    report(&paths);
    Ok(())
}

fn cmd_pushforward(ctx: &Ctx) -> CliResult<()> {
    let m = ctx.measure()?;
    let p = ctx.params();
    let f = field(ctx)?;
    // Five heights per column of Λ: 0, ±v/2 and ±(1 − 1e-6)v.
    let mut pts = Vec::new();
    for i in 0..f.u0_grid.len() {
        if f.w[i].is_none() {
            continue;
        }
        let u0 = f.u0_grid[i];
        let v = subordination::v_t(m, p.s, u0)?.v;
        for k in [-1.0, -0.5, 0.0, 0.5, 1.0] {
            let k: f64 = k;
            pts.push(Complex64::new(u0, k * (1.0 - 1e-6 * k.abs()) * v));
        }
    }
    let rows = ctx.exec.try_map(&pts, |&l0| {
        let l = brown_map::pushforward_u(m, &p, l0)?;
        let q = brown_map::pushforward_q(m, &p, l)?;
        Ok::<_, brown_core::Error>(vec![l0.re, l0.im, l.re, l.im, q])
    })?;
    let mut paths = Vec::new();
    match ctx.cfg.format {
        Format::Json => paths.push(ctx.write_json("pushforward.json", json!({ "columns": ["u0", "v0", "u", "v", "q"], "rows": rows }))?),
        fmt => {
            paths.push(ctx.write("pushforward.csv", &csv(&ctx.header(), "u0,v0,u,v,q", rows.iter().cloned()))?);
            paths.push(ctx.write_json("pushforward.json", json!({ "points": rows.len(), "summary": f.sidecar() }))?);
            if fmt == Format::Svg {
                let cloud: Vec<Complex64> = rows.iter().map(|r| Complex64::new(r[2], r[3])).collect();
                let vmax = f.phi.iter().cloned().fold(0.0, f64::max) * 1.1;
                let b = f.boundary();
                paths.push(ctx.write("pushforward.svg", &svg::scatter(&cloud, Some(&b), (u_range(&f), (-vmax, vmax)), &ctx.header()))?);
            }
        }
    }
    report(&paths);
    Ok(())
}

fn cmd_characteristics(ctx: &Ctx) -> CliResult<()> {
    let m = ctx.measure()?;
    let (u, v) = ctx.cfg.lambda0.ok_or_else(|| CliError::Usage("--lambda0 is required".into()))?;
    let l0 = Complex64::new(u, v);
    let eps0 = ctx.cfg.eps0;
    let mo = hj::initial_momenta(m, l0, eps0)?;
    let tstar = hj::lifetime_tstar(m, l0, eps0)?;
    let t_end = ctx.cfg.t.unwrap_or(tstar);
    if !(t_end > 0.0) {
        return Err(CliError::Usage(format!("--t {t_end} must be positive")));
    }
    if t_end > tstar {
        return Err(brown_core::Error::BeyondLifetime { t: t_end, lifetime: tstar }.into());
    }
    let n = ctx.cfg.resolution;
    let ts: Vec<f64> = (0..n).map(|k| t_end * k as f64 / (n - 1) as f64).collect();
    let states = ctx.exec.try_map(&ts, |&t| hj::flow_from(l0, eps0, &mo, t))?;
    let rows = states.iter().map(|s| {
        let h = s.p_eps.map(|pe| hj::hamiltonian(s.eps, s.p_u, s.p_v, pe)).unwrap_or(f64::NAN);
        vec![s.t, s.u, s.v, s.eps, s.p_u, s.p_v, s.p_eps.unwrap_or(f64::NAN), h]
    });
    let hj_end = hj::hj_value(m, l0, eps0, t_end)?;
    let summary = json!({
        "lambda0": [u, v],
        "eps0": eps0,
        "momenta": mo,
        "lifetime": tstar,
        "t_limit": hj::t_limit(m, l0)?,
        "t_end": t_end,
        "hj_value_end": hj_end,
    });
    let mut paths = Vec::new();
    let columns = "t,u,v,eps,p_u,p_v,p_eps,hamiltonian";
    match ctx.cfg.format {
        Format::Json => {
            let r: Vec<Vec<f64>> = rows.collect();
            let r: Vec<Vec<Option<f64>>> = r.into_iter().map(|row| row.into_iter().map(|x| x.is_finite().then_some(x)).collect()).collect();
            paths.push(ctx.write_json("characteristics.json", json!({ "summary": summary, "columns": columns.split(',').collect::<Vec<_>>(), "rows": r }))?);
        }
        fmt => {
            let r: Vec<Vec<f64>> = rows.collect();
            paths.push(ctx.write("characteristics.csv", &csv(&ctx.header(), columns, r.iter().cloned()))?);
            paths.push(ctx.write_json("characteristics.json", summary)?);
            if fmt == Format::Svg {
                let pts: Vec<(f64, f64)> = r.iter().map(|row| (row[0], row[3])).collect();
                paths.push(ctx.write("characteristics.svg", &svg::line_plot("ε along the characteristic", &pts, &ctx.header()))?);
            }
        }
    }
    println!("lifetime {tstar:.12}, H0 {:.12}", hj_end.h0);
    report(&paths);
    Ok(())
}

fn cmd_simulate(ctx: &Ctx) -> CliResult<()> {
    let m = ctx.measure()?;
    let p = ctx.params();
    if ctx.cfg.n < 2 {
        return Err(CliError::Usage("--n must be at least 2".into()));
    }
    if ctx.cfg.bins < 1 {
        return Err(CliError::Usage("--bins must be positive".into()));
    }
    let cloud = rmt::simulate(m, &p, ctx.cfg.n, ctx.cfg.seed)?;
    let f = field(ctx)?;
    let bin_box = rmt::default_bin_box(&f, ctx.cfg.bins, ctx.cfg.bins);
    let cmp = rmt::cloud_vs_density(&cloud, &f, bin_box);
    let summary = json!({
        "n": cloud.n,
        "seeds": cloud.seeds,
        "backward_error": cloud.backward_error,
        "tv_distance": cmp.tv_distance,
        "clipped_fraction": cmp.clipped_fraction,
        "brown_outside": cmp.brown_outside,
        "bin_box": cmp.bin_box,
        "field_mass": f.mass,
    });
    let mut paths = Vec::new();
    match ctx.cfg.format {
        Format::Json => paths.push(ctx.write_json("simulate.json", json!({ "summary": summary, "bins": cmp.bins, "eigenvalues": cloud.eigenvalues }))?),
        fmt => {
            paths.push(ctx.write("eigenvalues.csv", &cloud.to_csv(&ctx.header()))?);
            paths.push(ctx.write_json("simulate.json", json!({ "summary": summary, "bins": cmp.bins }))?);
            if fmt == Format::Svg {
                let vmax = f.phi.iter().cloned().fold(0.0, f64::max) * 1.2;
                let b = f.boundary();
                let win = (cmp.bin_box.u, (-vmax, vmax));
                paths.push(ctx.write("eigenvalues.svg", &svg::scatter(&cloud.eigenvalues, Some(&b), win, &ctx.header()))?);
            }
        }
    }
    println!("tv {:.6}, clipped fraction {:.6}", cmp.tv_distance, cmp.clipped_fraction);
    report(&paths);
    Ok(())
}

fn cmd_validate(ctx: &Ctx) -> CliResult<bool> {
    let opts = ValidateOptions {
        perturb: ctx.cfg.perturb,
        exec: ctx.exec,
        ..Default::default()
    };
    let rep = validate_cauchy(&opts)?;
    print!("{}", rep.to_text());
    let path = ctx.write_json("validation.json", serde_json::to_value(&rep).unwrap_or_default())?;
    if ctx.cfg.format == Format::Csv {
        let mut out = String::new();
        for line in ctx.header() {
            out.push_str(&format!("# {line}\n"));
        }
        out.push_str("formula,points,max_residual,threshold,pass\n");
        for c in &rep.checks {
            out.push_str(&format!("\"{}\",{},{:.6e},{:.1e},{}\n", c.formula, c.points, c.max_residual, c.threshold, c.pass));
        }
        report(&[ctx.write("validation.csv", &out)?]);
    }
    report(&[path]);
    Ok(rep.pass)
}

fn run(cli: Cli) -> CliResult<bool> {
    let (name, c) = match &cli.cmd {
        Cmd::Density(c) => ("density", c),
        Cmd::Boundary(c) => ("boundary", c),
        Cmd::Convolve(c) => ("convolve", c),
        Cmd::Pushforward(c) => ("pushforward", c),
        Cmd::Characteristics(c) => ("characteristics", c),
        Cmd::Simulate(c) => ("simulate", c),
        Cmd::ValidateCauchy(c) => ("validate-cauchy", c),
    };
    let ctx = Ctx::new(name, c)?;
    match cli.cmd {
        Cmd::Density(_) => cmd_density(&ctx)?,
        Cmd::Boundary(_) => cmd_boundary(&ctx)?,
        Cmd::Convolve(_) => cmd_convolve(&ctx)?,
        Cmd::Pushforward(_) => cmd_pushforward(&ctx)?,
        Cmd::Characteristics(_) => cmd_characteristics(&ctx)?,
        Cmd::Simulate(_) => cmd_simulate(&ctx)?,
        Cmd::ValidateCauchy(_) => return cmd_validate(&ctx),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("validation failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("brown: {e}");
            ExitCode::from(match e {
                CliError::Usage(_) => 2,
                _ => 1,
            })
        }
    }
}
