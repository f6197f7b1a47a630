//! Shared instance builders for the benchmark suite.

use gabortile::{rat, AxisBox, BoxSet, GaborSpec, RatLattice, RatMatrix};

/// Deterministic integer matrix with entries spread over [-spread, spread].
pub fn dense_integer_matrix(n: usize, spread: i64, seed: i64) -> RatMatrix {
    let mut rows = Vec::with_capacity(n);
    let mut state = seed;
    for _ in 0..n {
        let mut row = Vec::with_capacity(n);
        for _ in 0..n {
            state = state
                .wrapping_mul(6_364_136_223_846_793_005)
                .wrapping_add(1);
            row.push(gabortile::Rat::int(
                (state >> 33) % (2 * spread + 1) - spread,
            ));
        }
        rows.push(row);
    }
    RatMatrix::from_rows(rows)
}

/// The two-cell window over the sheared density-1 lattice.
pub fn rect_shear_spec() -> GaborSpec {
    let window = BoxSet::from_box(
        AxisBox::new(vec![rat(0, 1), rat(0, 1)], vec![rat(2, 1), rat(1, 1)]).unwrap(),
    );
    let gen = RatMatrix::from_blocks(
        &RatMatrix::identity(2),
        &RatMatrix::zero(2, 2),
        &RatMatrix::from_i64(&[&[0, 0], &[1, 0]]),
        &RatMatrix::diagonal(&[rat(1, 2), rat(2, 1)]),
    );
    GaborSpec::new(window, RatLattice::new(gen).unwrap()).unwrap()
}
