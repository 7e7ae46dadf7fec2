#![allow(dead_code)]

use brown_core::Measure;
use proptest::prelude::*;

/// Sorted, merged, normalized atoms; `None` if fewer than two remain.
pub fn normalize(mut raw: Vec<(f64, f64)>) -> Option<Vec<(f64, f64)>> {
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut atoms: Vec<(f64, f64)> = Vec::new();
    for (x, w) in raw {
        match atoms.last_mut() {
            Some(last) if x - last.0 < 1e-3 => last.1 += w,
            _ => atoms.push((x, w)),
        }
    }
    let total: f64 = atoms.iter().map(|a| a.1).sum();
    (atoms.len() >= 2).then(|| atoms.into_iter().map(|(x, w)| (x, w / total)).collect())
}

pub fn atoms_strategy(max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-5.0..5.0f64, 0.05..1.0f64), 2..=max).prop_filter_map("distinct atoms", normalize)
}

/// Measures with bounded support.
pub fn bounded_strategy() -> impl Strategy<Value = Measure> {
    prop_oneof![
        atoms_strategy(7).prop_map(|a| Measure::atoms(a).unwrap()),
        (-2.0..2.0f64, 0.2..2.0f64).prop_map(|(c, a)| Measure::uniform(c - a, c + a).unwrap()),
        (0.2..2.0f64).prop_map(|v| Measure::semicircle(v).unwrap()),
    ]
}

pub fn measure_strategy() -> impl Strategy<Value = Measure> {
    prop_oneof![
        3 => bounded_strategy(),
        1 => (-2.0..2.0f64, 0.2..2.0f64).prop_map(|(c, g)| Measure::cauchy(c, g).unwrap()),
    ]
}
