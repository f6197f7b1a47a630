//! Shared helpers for the integration suites: a floating quadrature oracle
//! independent of the cyclotomic path, and seeded random instance builders.
#![allow(dead_code)] // each test binary uses its own subset

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gabortile::{AxisBox, BoxSet, GaborSpec, Rat, RatLattice, RatMatrix, RatVec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

/// Random rational with numerator in [-max_num, max_num] and denominator
/// from the given list.
pub fn random_rat(r: &mut ChaCha8Rng, max_num: i64, denominators: &[i64]) -> Rat {
    let den = denominators[r.gen_range(0..denominators.len())];
    let num = r.gen_range(-max_num..=max_num);
    Rat::new(num, den)
}

/// Composite-Simpson quadrature of ∫ e^{-2πiξx} dx over [lo, hi), refined
/// until two consecutive panel counts agree to 1e-12.
fn simpson_phase(xi: f64, lo: f64, hi: f64) -> (f64, f64) {
    let f = |x: f64| {
        let t = -2.0 * std::f64::consts::PI * xi * x;
        (t.cos(), t.sin())
    };
    let eval = |n: usize| {
        let h = (hi - lo) / n as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for k in 0..n {
            let a = lo + k as f64 * h;
            let (f0r, f0i) = f(a);
            let (fmr, fmi) = f(a + h / 2.0);
            let (f1r, f1i) = f(a + h);
            re += h / 6.0 * (f0r + 4.0 * fmr + f1r);
            im += h / 6.0 * (f0i + 4.0 * fmi + f1i);
        }
        (re, im)
    };
    let mut n = 16.max((xi.abs() * (hi - lo) * 8.0) as usize);
    let (mut re, mut im) = eval(n);
    loop {
        n *= 2;
        let (re2, im2) = eval(n);
        if (re - re2).abs() < 1e-12 && (im - im2).abs() < 1e-12 || n > 1 << 20 {
            return (re2, im2);
        }
        re = re2;
        im = im2;
    }
}

/// Quadrature value of the box-union transform at a rational frequency.
pub fn quadrature_ft(set: &BoxSet, xi: &[Rat]) -> (f64, f64) {
    let mut total = (0.0, 0.0);
    for b in set.boxes() {
        let mut term = (1.0, 0.0);
        for j in 0..set.dim() {
            let factor = simpson_phase(xi[j].to_f64(), b.lo()[j].to_f64(), b.hi()[j].to_f64());
            term = (
                term.0 * factor.0 - term.1 * factor.1,
                term.0 * factor.1 + term.1 * factor.0,
            );
        }
        total = (total.0 + term.0, total.1 + term.1);
    }
    total
}

/// Random box with corners on a coarse rational grid inside [-2, 3]^dim.
pub fn random_box(r: &mut ChaCha8Rng, dim: usize) -> AxisBox {
    let denominators = [1, 2, 3];
    loop {
        let lo: RatVec = (0..dim).map(|_| random_rat(r, 4, &denominators)).collect();
        let ok = lo.iter().all(|x| x.to_f64().abs() <= 2.0);
        if !ok {
            continue;
        }
        let hi: RatVec = lo
            .iter()
            .map(|l| l + &random_rat(r, 3, &denominators).abs() + Rat::new(1, 3))
            .collect();
        if let Ok(b) = AxisBox::new(lo, hi) {
            return b;
        }
    }
}

pub fn random_boxset(r: &mut ChaCha8Rng, dim: usize, max_boxes: usize) -> BoxSet {
    let count = r.gen_range(1..=max_boxes);
    BoxSet::from_boxes(dim, (0..count).map(|_| random_box(r, dim)).collect())
}

/// Random unimodular integer matrix: a short product of elementary shears
/// and coordinate swaps.
pub fn random_unimodular(r: &mut ChaCha8Rng, dim: usize) -> RatMatrix {
    let mut m = RatMatrix::identity(dim);
    for _ in 0..r.gen_range(1..=3) {
        let i = r.gen_range(0..dim);
        let mut j = r.gen_range(0..dim);
        if dim > 1 {
            while j == i {
                j = r.gen_range(0..dim);
            }
            let mut shear = RatMatrix::identity(dim);
            shear[(i, j)] = Rat::int(r.gen_range(-2..=2i64));
            m = m.mul(&shear);
        }
    }
    if dim > 1 && r.gen_bool(0.5) {
        let mut swap = RatMatrix::zero(dim, dim);
        swap[(0, 1)] = Rat::one();
        swap[(1, 0)] = Rat::one();
        for k in 2..dim {
            swap[(k, k)] = Rat::one();
        }
        m = m.mul(&swap);
    }
    m
}

/// Random diagonal matrix with positive rational entries.
pub fn random_positive_diagonal(r: &mut ChaCha8Rng, dim: usize) -> RatMatrix {
    let choices = [
        rat(1, 1),
        rat(1, 2),
        rat(2, 1),
        rat(1, 3),
        rat(3, 1),
        rat(3, 2),
        rat(2, 3),
    ];
    RatMatrix::diagonal(
        &(0..dim)
            .map(|_| choices[r.gen_range(0..choices.len())].clone())
            .collect::<Vec<_>>(),
    )
}

/// A multi-tile of exact level `level` for the lattice: the box fundamental
/// domain is cut into vertical slabs and every slab is translated by `level`
/// distinct lattice vectors. Distinct residues keep the translated pieces
/// pairwise disjoint, so the construction is an exact level-`level`
/// multi-tile (and for level 1 an exact fundamental domain).
pub fn random_multitile(r: &mut ChaCha8Rng, lattice: &RatLattice, level: usize) -> BoxSet {
    let canon = lattice.canonicalize();
    let dim = canon.dim();
    let fd = gabortile::box_fundamental_domain(&canon).expect("canonical is lower triangular");
    // Cut the domain along coordinate 0 into up to three slabs.
    let cuts = r.gen_range(0..=2usize);
    let width = &fd.hi()[0] - &fd.lo()[0];
    let mut fractions: Vec<Rat> = (0..cuts)
        .map(|_| {
            let k = r.gen_range(1..=5i64);
            rat(k, 6)
        })
        .collect();
    fractions.sort();
    fractions.dedup();
    let mut bounds = vec![Rat::zero()];
    bounds.extend(fractions.iter().map(|f| f * &width));
    bounds.push(width.clone());
    bounds.dedup();

    let mut pieces = Vec::new();
    for w in bounds.windows(2) {
        if w[0] >= w[1] {
            continue;
        }
        let mut lo = fd.lo().to_vec();
        let mut hi = fd.hi().to_vec();
        lo[0] = w[0].clone();
        hi[0] = w[1].clone();
        let piece = AxisBox::new(lo, hi).unwrap();
        // `level` distinct lattice shifts per slab.
        let mut shifts: Vec<RatVec> = Vec::new();
        while shifts.len() < level {
            let coeffs: RatVec = (0..dim).map(|_| Rat::int(r.gen_range(-2..=2i64))).collect();
            let shift = canon.generator().mul_vec(&coeffs);
            if !shifts.contains(&shift) {
                shifts.push(shift);
            }
        }
        for s in shifts {
            pieces.push(piece.translate(&s));
        }
    }
    BoxSet::from_boxes(dim, pieces)
}

/// Density-1 lower-block spec with integer aᵗb: a is a positive diagonal,
/// b = a⁻ᵗ·w for a random unimodular integer w, and c has small rational
/// entries. The window is a multi-tile of the requested level for a(Z^d)
/// (equivalently b⁻ᵗ(Z^d), as the two lattices coincide here).
pub fn random_integer_product_spec(r: &mut ChaCha8Rng, dim: usize, level: usize) -> GaborSpec {
    let a = random_positive_diagonal(r, dim);
    let w = random_unimodular(r, dim);
    let b = a.inverse_transpose().unwrap().mul(&w);
    let mut c = RatMatrix::zero(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            c[(i, j)] = random_rat(r, 3, &[1, 2, 3]);
        }
    }
    let time_lattice = RatLattice::new(a.clone()).unwrap();
    let window = random_multitile(r, &time_lattice, level);
    let gen = RatMatrix::from_blocks(&a, &RatMatrix::zero(dim, dim), &c, &b);
    GaborSpec::new(window, RatLattice::new(gen).unwrap()).unwrap()
}

/// The truncated 1D comb spec over [[1,0],[c,1]](Z²).
pub fn comb_spec(c: Rat) -> GaborSpec {
    let window = gabortile::dyadic_tail_comb(Some((-3, 3))).unwrap();
    let gen = RatMatrix::from_rows(vec![vec![Rat::one(), Rat::zero()], vec![c, Rat::one()]]);
    GaborSpec::new(window, RatLattice::new(gen).unwrap()).unwrap()
}
