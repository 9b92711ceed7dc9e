//! Seeded random draws shared by the multistart searches, the CLI
//! experiments and the property tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::tensor::{BipartiteOperator, CMatrix, CVector, ProductVector, C64};

/// A ChaCha stream; distinct `stream` values give independent sequences
/// for the same `seed`.
pub fn seeded(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Entries with independent standard normal real and imaginary parts.
pub fn complex_gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Uniformly distributed unit vector.
pub fn unit_vector(rng: &mut impl Rng, len: usize) -> CVector {
    let v = complex_gaussian(rng, len, 1).column(0).into_owned();
    let norm = v.norm();
    v.unscale(norm)
}

pub fn product_vector(rng: &mut impl Rng, m: usize, n: usize) -> ProductVector {
    ProductVector::new(unit_vector(rng, m), unit_vector(rng, n)).expect("nonzero draw")
}

/// GUE-like Hermitian operator.
pub fn hermitian(rng: &mut impl Rng, m: usize, n: usize) -> BipartiteOperator {
    let g = complex_gaussian(rng, m * n, m * n);
    BipartiteOperator::new((&g + g.adjoint()).scale(0.5), m, n).expect("hermitian by construction")
}

/// Random mixed state of full rank.
pub fn density(rng: &mut impl Rng, m: usize, n: usize) -> BipartiteOperator {
    let g = complex_gaussian(rng, m * n, m * n);
    let rho = BipartiteOperator::new(&g * g.adjoint(), m, n).expect("hermitian by construction");
    rho.normalized().expect("positive trace")
}
