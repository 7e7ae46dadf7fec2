//! Globally adaptive Gauss–Kronrod (10/21) quadrature for vector-valued
//! integrands on finite intervals.
//!
//! All components share the same panel subdivision. Convergence is judged per
//! component against `max(abs_tol, rel_tol * ∫|f_k|)`, so integrals that cancel
//! to (nearly) zero still terminate.

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_452_182,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: 1e-11,
            abs: 0.0,
            max_panels: 2000,
        }
    }
}

/// Value, error estimate and `∫|f|` for each component.
#[derive(Debug, Clone, Copy)]
pub struct Estimate<const K: usize> {
    pub value: [f64; K],
    pub error: [f64; K],
    pub l1: [f64; K],
    pub panels: usize,
}

impl<const K: usize> Estimate<K> {
    /// Largest ratio of error estimate to the allowed error over components.
    pub fn worst_ratio(&self, tol: &Tolerance) -> f64 {
        (0..K)
            .map(|k| {
                let allowed = tol.abs.max(tol.rel * self.l1[k]);
                if allowed > 0.0 {
                    self.error[k] / allowed
                } else if self.error[k] > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max)
    }

    pub fn converged(&self, tol: &Tolerance) -> bool {
        self.worst_ratio(tol) <= 1.0
    }
}

#[derive(Clone, Copy)]
struct Panel<const K: usize> {
    a: f64,
    b: f64,
    value: [f64; K],
    error: [f64; K],
    l1: [f64; K],
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn gk21<const K: usize, F: Fn(f64) -> [f64; K]>(f: &F, a: f64, b: f64) -> Panel<K> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let mut fv1 = [[0.0; K]; 10];
    let mut fv2 = [[0.0; K]; 10];
    let fc = f(center);
    let mut kron = [0.0; K];
    let mut gauss = [0.0; K];
    let mut res_abs = [0.0; K];
    for k in 0..K {
        kron[k] = fc[k] * WGK[10];
        res_abs[k] = kron[k].abs();
    }
    for j in 0..10 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        for k in 0..K {
            let sum = f1[k] + f2[k];
            kron[k] += WGK[j] * sum;
            res_abs[k] += WGK[j] * (f1[k].abs() + f2[k].abs());
            if j % 2 == 1 {
                gauss[k] += WG[j / 2] * sum;
            }
        }
    }

    let mut value = [0.0; K];
    let mut error = [0.0; K];
    let mut l1 = [0.0; K];
    for k in 0..K {
        let mean = kron[k] * 0.5;
        let mut res_asc = WGK[10] * (fc[k] - mean).abs();
        for j in 0..10 {
            res_asc += WGK[j] * ((fv1[j][k] - mean).abs() + (fv2[j][k] - mean).abs());
        }
        value[k] = kron[k] * half;
        l1[k] = res_abs[k] * abs_half;
        error[k] = rescale_error((kron[k] - gauss[k]) * half, l1[k], res_asc * abs_half);
    }
    Panel {
        a,
        b,
        value,
        error,
        l1,
    }
}

/// Integrates `f` over `[points[0], points[last]]`, starting from one panel
/// per consecutive pair of `points` and bisecting the worst panel until the
/// tolerance is met or `max_panels` is reached.
///
/// The returned estimate always carries the achieved error; callers decide
/// whether a non-converged result is acceptable.
pub fn integrate<const K: usize, F>(f: F, points: &[f64], tol: &Tolerance) -> Estimate<K>
where
    F: Fn(f64) -> [f64; K],
{
    let mut panels: Vec<Panel<K>> = points
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| gk21(&f, w[0], w[1]))
        .collect();

    loop {
        let mut value = [0.0; K];
        let mut error = [0.0; K];
        let mut l1 = [0.0; K];
        for p in &panels {
            for k in 0..K {
                value[k] += p.value[k];
                error[k] += p.error[k];
                l1[k] += p.l1[k];
            }
        }
        let est = Estimate {
            value,
            error,
            l1,
            panels: panels.len(),
        };
        if est.converged(tol) || panels.len() >= tol.max_panels || panels.is_empty() {
            return est;
        }

        let allowed: [f64; K] = std::array::from_fn(|k| tol.abs.max(tol.rel * l1[k]));
        let score = |p: &Panel<K>| {
            (0..K)
                .map(|k| {
                    if allowed[k] > 0.0 {
                        p.error[k] / allowed[k]
                    } else {
                        p.error[k]
                    }
                })
                .fold(0.0, f64::max)
        };
        let (worst, _) = panels
            .iter()
            .enumerate()
            .map(|(i, p)| (i, score(p)))
            .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) {
            // Panel cannot be split further in floating point.
            let mut frozen = p;
            frozen.error = [0.0; K];
            panels.push(frozen);
            continue;
        }
        panels.push(gk21(&f, p.a, mid));
        panels.push(gk21(&f, mid, p.b));
    }
}

/// Scalar convenience wrapper around [`integrate`].
pub fn integrate_scalar<F: Fn(f64) -> f64>(f: F, points: &[f64], tol: &Tolerance) -> (f64, f64) {
    let est = integrate(|x| [f(x)], points, tol);
    (est.value[0], est.error[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let (v, _) = integrate_scalar(|x| x.powi(7) - 3.0 * x * x, &[-1.0, 2.0], &Tolerance::default());
        let exact = (2f64.powi(8) - 1.0) / 8.0 - (8.0 + 1.0);
        assert!((v - exact).abs() < 1e-13);
    }

    #[test]
    fn sharp_lorentzian() {
        let c = 1e-6;
        let (v, _) = integrate_scalar(
            |x| c / (x * x + c * c),
            &[-1.0, 0.0, 1.0],
            &Tolerance::default(),
        );
        let exact = 2.0 * (1.0 / c).atan();
        assert!((v - exact).abs() < 1e-10 * exact, "{v} vs {exact}");
    }

    #[test]
    fn sqrt_endpoint_singularity() {
        let (v, _) = integrate_scalar(|x| (1.0 - x * x).sqrt(), &[-1.0, 1.0], &Tolerance::default());
        assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
    }

    #[test]
    fn cancelling_component_terminates() {
        let est = integrate(|x| [x.sin(), 1.0], &[-3.0, 3.0], &Tolerance::default());
        assert!(est.value[0].abs() < 1e-13);
        assert!((est.value[1] - 6.0).abs() < 1e-13);
        assert!(est.converged(&Tolerance::default()));
    }
}
