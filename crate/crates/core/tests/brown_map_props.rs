use std::f64::consts::PI;

use brown_core::brown_map::{
    auto_window, brown_density, brown_density_at, density_field, f_ab, f_ab_prime, map_point, phi_ab, pushforward_q, EllipticParams,
};
use brown_core::quadrature::{integrate_scalar, Tolerance};
use brown_core::subordination::v_t;
use brown_core::{Complex64, Measure};
use proptest::prelude::*;

mod common;
use common::{bounded_strategy, measure_strategy};

fn params_strategy() -> impl Strategy<Value = EllipticParams> {
    (0.0..2.0f64, 0.05..2.0f64).prop_map(|(a, b)| EllipticParams::new(a, b).unwrap())
}

/// CDF of the centred semicircle law with variance `r`.
fn semicircle_cdf(r: f64, x: f64) -> f64 {
    let x = x.clamp(-2.0 * r.sqrt(), 2.0 * r.sqrt());
    0.5 + x * (4.0 * r - x * x).max(0.0).sqrt() / (4.0 * PI * r) + (x / (2.0 * r.sqrt())).asin() / PI
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn f_is_strictly_increasing(m in measure_strategy(), p in params_strategy()) {
        let (lo, hi) = auto_window(&m, p.s);
        let mut prev = f64::NEG_INFINITY;
        for k in 0..1000 {
            let u0 = lo + (hi - lo) * k as f64 / 999.0;
            let f = f_ab(&m, &p, u0).unwrap();
            prop_assert!(f > prev, "u0 = {u0}: {f} after {prev}");
            prev = f;
        }
    }

    #[test]
    fn strip_mass_is_transported_by_q(var in 0.3..2.0f64, t in 0.2..2.0f64, a in -0.9..0.9f64, len in 0.05..0.9f64) {
        let m = Measure::semicircle(var).unwrap();
        let p = EllipticParams::imaginary(t).unwrap();
        // The support lies inside Λ, so its interior maps into Ω.
        let edge = 2.0 * var.sqrt();
        let (a0, b0) = (a * edge, (a + len).min(0.95) * edge);
        prop_assume!(b0 > a0);
        let (a, b) = (f_ab(&m, &p, a0).unwrap(), f_ab(&m, &p, b0).unwrap());
        let tol = Tolerance { rel: 1e-10, ..Default::default() };
        let (strip, _) = integrate_scalar(
            |u| 2.0 * phi_ab(&m, &p, u).unwrap() * brown_density(&m, &p, u).unwrap(),
            &[a, b],
            &tol,
        );
        let qa = pushforward_q(&m, &p, Complex64::new(a, 0.0)).unwrap();
        let qb = pushforward_q(&m, &p, Complex64::new(b, 0.0)).unwrap();
        let law = semicircle_cdf(var + t, qb) - semicircle_cdf(var + t, qa);
        prop_assert!((strip - law).abs() < 1e-6, "{strip} vs {law}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn imaginary_case_derivative_bounds(m in measure_strategy(), t in 0.05..3.0f64, u0 in -7.0..7.0f64) {
        prop_assume!(v_t(&m, t, u0).unwrap().v > 0.0);
        let p = EllipticParams::imaginary(t).unwrap();
        let d = f_ab_prime(&m, &p, u0).unwrap();
        prop_assert!(d > 0.0 && d < 2.0, "f' = {d}");
    }

    #[test]
    fn density_is_constant_on_vertical_segments(m in measure_strategy(), p in params_strategy(), u0 in -6.0..6.0f64, frac in -0.999..0.999f64) {
        prop_assume!(v_t(&m, p.s, u0).unwrap().v > 0.0);
        let u = f_ab(&m, &p, u0).unwrap();
        let w = brown_density(&m, &p, u).unwrap();
        let phi = phi_ab(&m, &p, u).unwrap();
        let w2 = brown_density_at(&m, &p, Complex64::new(u, frac * phi)).unwrap();
        prop_assert_eq!(w, w2);
    }

    #[test]
    fn density_transfer_from_circular_case(m in measure_strategy(), p in params_strategy(), u0 in -6.0..6.0f64) {
        prop_assume!(v_t(&m, p.s, u0).unwrap().v > 0.0);
        let we = map_point(&m, &p, u0).unwrap().w.unwrap();
        let circ = EllipticParams::circular(p.s).unwrap();
        let wc = map_point(&m, &circ, u0).unwrap().w.unwrap();
        let r = p.rhat();
        let predicted = wc / r / (r + 2.0 * PI * (1.0 - r) * p.s * wc);
        prop_assert!((we - predicted).abs() <= 1e-8 * (1.0 + we.abs()), "{we} vs {predicted}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn real_parts_stay_inside_the_support_hull(m in bounded_strategy(), t in 0.05..3.0f64) {
        let (lo, hi) = m.support();
        let f = density_field(&m, &EllipticParams::imaginary(t).unwrap(), 200, None).unwrap();
        for &u in &f.u_grid {
            prop_assert!(lo < u && u < hi, "{u} outside ({lo}, {hi})");
        }
    }
}
