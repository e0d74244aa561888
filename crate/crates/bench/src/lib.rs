//! Fixtures shared by the criterion benches.

use itframe::{build_grid, make_generator, BoundedSet, Generator, GeneratorKind, TranslateSet};

/// Fejér generator on `[−1/2, 1/2]` with `n` nodes and a jittered lattice of
/// `k` points at step `n/k`.
pub fn fejer_instance(n: usize, k: usize, seed: u64) -> (Generator, TranslateSet) {
    let grid = build_grid(BoundedSet::interval(-0.5, 0.5).expect("valid set"), n).expect("valid grid");
    let g = make_generator(GeneratorKind::Fejer { w: 0.5 }, &grid, 1e-12).expect("valid generator");
    let step = n as f64 / k as f64;
    let lambda = TranslateSet::jittered_lattice(step, 0, k, step / 8.0, seed).expect("valid lattice");
    (g, lambda)
}
