use brown_core::brown_map::{pushforward_u, EllipticParams};
use brown_core::hj::{flow, hamiltonian, initial_momenta, lifetime_tstar, t_limit, terminal_position};
use brown_core::subordination::{h_map, v_t};
use brown_core::{Complex64, Measure};
use proptest::prelude::*;

mod common;
use common::{atoms_strategy, measure_strategy};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn hamiltonian_is_conserved(m in measure_strategy(), u0 in -5.0..5.0f64, v0 in -2.0..2.0f64, eps0 in 0.01..2.0f64, fracs in prop::collection::vec(0.0..1.0f64, 10)) {
        let l0 = Complex64::new(u0, v0);
        let mo = initial_momenta(&m, l0, eps0).unwrap();
        let h0 = hamiltonian(eps0, mo.p_u0, mo.p_v0, mo.p0);
        let tstar = 1.0 / mo.p0;
        for f in fracs {
            let s = flow(&m, l0, eps0, f * tstar).unwrap();
            let h = hamiltonian(s.eps, s.p_u, s.p_v, s.p_eps.unwrap());
            prop_assert!((h - h0).abs() <= 1e-12 * (1.0 + h0.abs()), "{h} vs {h0}");
        }
        let end = flow(&m, l0, eps0, lifetime_tstar(&m, l0, eps0).unwrap()).unwrap();
        prop_assert_eq!(end.eps, 0.0);
        prop_assert!(end.p_eps.is_none());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn terminal_branches_agree_on_the_boundary(m in measure_strategy(), t in 0.1..3.0f64, u0 in -6.0..6.0f64) {
        let v = v_t(&m, t, u0).unwrap().v;
        prop_assume!(v > 1e-6);
        let l0 = Complex64::new(u0, v);
        let inside = terminal_position(&m, t, l0).unwrap();
        let outside = h_map(&m, -t, l0).unwrap();
        prop_assert!((inside - outside).norm() < 1e-8, "{inside} vs {outside}");
    }

    #[test]
    fn terminal_position_inside_is_u_map(m in measure_strategy(), t in 0.1..3.0f64, u0 in -6.0..6.0f64, frac in -0.99..0.99f64) {
        let v = v_t(&m, t, u0).unwrap().v;
        prop_assume!(v > 0.0);
        let l0 = Complex64::new(u0, frac * v);
        let end = terminal_position(&m, t, l0).unwrap();
        let u = pushforward_u(&m, &EllipticParams::imaginary(t).unwrap(), l0).unwrap();
        prop_assert!((end - u).norm() < 1e-9, "{end} vs {u}");
    }

    #[test]
    fn terminal_position_outside_is_h_map(atoms in atoms_strategy(6), t in 0.1..3.0f64, u0 in -6.0..6.0f64, v0 in -3.0..3.0f64) {
        let m = Measure::atoms(atoms.clone()).unwrap();
        prop_assume!(v0.abs() > v_t(&m, t, u0).unwrap().v + 1e-6);
        let l0 = Complex64::new(u0, v0);
        let g: Complex64 = atoms.iter().map(|&(x, w)| w / (l0 - x)).sum();
        let end = terminal_position(&m, t, l0).unwrap();
        prop_assert!((end - (l0 - t * g)).norm() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn limit_time_dichotomy(m in measure_strategy(), pts in prop::collection::vec((-6.0..6.0f64, -2.5..2.5f64, 0.05..3.0f64), 500)) {
        for (u0, v0, t) in pts {
            let v = v_t(&m, t, u0).unwrap().v;
            // Points within rounding distance of the boundary are undecidable.
            if (v0.abs() - v).abs() < 1e-9 {
                continue;
            }
            let below = t_limit(&m, Complex64::new(u0, v0)).unwrap().is_below(t);
            prop_assert_eq!(below, v0.abs() < v, "u0 = {}, v0 = {}, t = {}, v_t = {}", u0, v0, t, v);
        }
    }
}
