use brown_core::{Complex64, Measure};
use proptest::prelude::*;

mod common;
use common::{atoms_strategy, normalize};

/// Symmetric measures about `c`, paired with `c`.
fn symmetric_strategy() -> impl Strategy<Value = (Measure, f64)> {
    prop_oneof![
        (-3.0..3.0f64, prop::collection::vec((0.1..4.0f64, 0.1..1.0f64), 1..5)).prop_filter_map("distinct offsets", |(c, mut half)| {
            half.sort_by(|a, b| a.0.total_cmp(&b.0));
            if half.windows(2).any(|p| p[1].0 - p[0].0 < 1e-3) {
                return None;
            }
            let atoms = half.iter().flat_map(|&(d, w)| [(c - d, w), (c + d, w)]).collect();
            Some((Measure::atoms(normalize(atoms)?).unwrap(), c))
        }),
        (-3.0..3.0f64, 0.2..3.0f64).prop_map(|(c, g)| (Measure::cauchy(c, g).unwrap(), c)),
        (-3.0..3.0f64, 0.2..3.0f64).prop_map(|(c, a)| (Measure::uniform(c - a, c + a).unwrap(), c)),
        (0.2..3.0f64).prop_map(|v| (Measure::semicircle(v).unwrap(), 0.0)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn atomic_i0_sandwich(atoms in atoms_strategy(8), u in -8.0..8.0f64, v in 0.0..3.0f64, eps in 0.0..2.0f64) {
        prop_assume!(v * v + eps > 1e-6);
        let m = Measure::atoms(atoms.clone()).unwrap();
        let b = m.kernel_bundle(u, v, eps).unwrap();
        let d = |x: f64| (u - x).powi(2) + v * v + eps;
        let dmin = atoms.iter().map(|a| d(a.0)).fold(f64::INFINITY, f64::min);
        let dmax = atoms.iter().map(|a| d(a.0)).fold(0.0, f64::max);
        prop_assert!(b.i0 * dmin <= 1.0 + 1e-12);
        prop_assert!(b.i0 * dmax >= 1.0 - 1e-12);
    }

    #[test]
    fn reflection_symmetry((m, c) in symmetric_strategy(), delta in 0.0..4.0f64, v in 0.05..2.0f64, eps in 0.0..1.0f64) {
        let r = m.kernel_bundle(c + delta, v, eps).unwrap();
        let l = m.kernel_bundle(c - delta, v, eps).unwrap();
        let scale = 1.0 + r.i1.abs() + r.ix.abs();
        prop_assert!((r.i1 + l.i1).abs() <= 1e-10 * scale, "i1: {} vs {}", r.i1, l.i1);
        prop_assert!((r.i0 - l.i0).abs() <= 1e-10 * (1.0 + r.i0));
        prop_assert!((r.ix + l.ix - 2.0 * c * r.i0).abs() <= 1e-10 * (scale + 2.0 * c.abs() * r.i0));
    }

    #[test]
    fn ten_atom_cauchy_transform_is_rational(
        atoms in prop::collection::vec((-5.0..5.0f64, 0.05..1.0f64), 10)
            .prop_filter_map("ten distinct atoms", |a| normalize(a).filter(|a| a.len() == 10)),
        pts in prop::collection::vec((-8.0..8.0f64, 0.05..5.0f64, any::<bool>()), 100),
    ) {
        let m = Measure::atoms(atoms.clone()).unwrap();
        for (re, im, flip) in pts {
            let z = Complex64::new(re, if flip { -im } else { im });
            let exact: Complex64 = atoms.iter().map(|&(x, w)| w / (z - x)).sum();
            let g = m.cauchy_transform(z).unwrap();
            prop_assert!((g - exact).norm() <= 1e-12 * exact.norm().max(1.0), "{z}: {g} vs {exact}");
        }
    }

    #[test]
    fn log_energy_eps_derivative_is_i0(atoms in atoms_strategy(6), u in -6.0..6.0f64, v in -2.0..2.0f64, eps in 0.1..2.0f64) {
        let m = Measure::atoms(atoms).unwrap();
        let l = Complex64::new(u, v);
        let h = 1e-5;
        let fd = (m.log_energy(l, eps + h).unwrap() - m.log_energy(l, eps - h).unwrap()) / (2.0 * h);
        let i0 = m.kernel_bundle(u, v, eps).unwrap().i0;
        prop_assert!((fd - i0).abs() < 1e-6, "{fd} vs {i0}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn log_energy_eps_derivative_continuous(loc in -2.0..2.0f64, g in 0.3..2.0f64, u in -4.0..4.0f64, v in -1.0..1.0f64, eps in 0.1..2.0f64) {
        for m in [Measure::cauchy(loc, g).unwrap(), Measure::uniform(loc - g, loc + g).unwrap()] {
            let l = Complex64::new(u, v);
            let h = 1e-5;
            let fd = (m.log_energy(l, eps + h).unwrap() - m.log_energy(l, eps - h).unwrap()) / (2.0 * h);
            let i0 = m.kernel_bundle(u, v, eps).unwrap().i0;
            prop_assert!((fd - i0).abs() < 1e-6, "{fd} vs {i0}");
        }
    }
}
