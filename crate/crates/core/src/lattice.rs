//! Full-rank rational lattices: canonical forms, equality, duals, adjoints,
//! densities, kernel lattices, coset systems, and the upper-to-lower
//! triangular conversion for symmetric shift blocks.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{column_hnf, hnf_lower, integer_kernel, RatMatrix};
use crate::rat::{Rat, RatVec};

/// Full-rank lattice `generator(Z^dim)` in R^dim.
///
/// Two values describe the same lattice iff `generator₁⁻¹·generator₂` is an
/// integer matrix of determinant ±1; use [`RatLattice::lattice_equal`] or
/// compare canonical forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LatticeRepr", into = "LatticeRepr")]
pub struct RatLattice {
    dim: usize,
    generator: RatMatrix,
}

#[derive(Serialize, Deserialize)]
struct LatticeRepr {
    dim: usize,
    generator: RatMatrix,
}

impl From<RatLattice> for LatticeRepr {
    fn from(l: RatLattice) -> Self {
        LatticeRepr {
            dim: l.dim,
            generator: l.generator,
        }
    }
}

impl TryFrom<LatticeRepr> for RatLattice {
    type Error = Error;
    fn try_from(r: LatticeRepr) -> Result<Self> {
        if r.generator.rows() != r.dim {
            return Err(Error::DimMismatch(r.generator.rows(), r.dim));
        }
        RatLattice::new(r.generator)
    }
}

impl RatLattice {
    pub fn new(generator: RatMatrix) -> Result<Self> {
        if !generator.is_square() {
            return Err(Error::NotSquare);
        }
        if generator.det()?.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(RatLattice {
            dim: generator.rows(),
            generator,
        })
    }

    pub fn standard(dim: usize) -> Self {
        RatLattice {
            dim,
            generator: RatMatrix::identity(dim),
        }
    }

    pub fn from_diagonal(entries: &[Rat]) -> Result<Self> {
        Self::new(RatMatrix::diagonal(entries))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator(&self) -> &RatMatrix {
        &self.generator
    }

    /// dens(Λ) = |det generator|⁻¹.
    pub fn density(&self) -> Rat {
        self.generator
            .det()
            .expect("generator is square")
            .abs()
            .recip()
            .expect("generator is invertible")
    }

    /// The lattice point with the given integer (or rational) coefficients.
    pub fn point(&self, coeffs: &[Rat]) -> RatVec {
        self.generator.mul_vec(coeffs)
    }

    /// Coefficients of an ambient vector in the generator basis.
    pub fn coefficients(&self, v: &[Rat]) -> RatVec {
        self.generator
            .inverse()
            .expect("generator is invertible")
            .mul_vec(v)
    }

    /// True iff `v` lies on the lattice.
    pub fn contains(&self, v: &[Rat]) -> bool {
        self.coefficients(v).iter().all(Rat::is_integer)
    }

    /// Canonical equivalent generator: lower triangular, positive diagonal,
    /// entries left of the diagonal reduced into [0, diagonal). Idempotent,
    /// and equal lattices canonicalize to the identical matrix.
    ///
    /// Denominators are cleared with their global lcm, the integer matrix is
    /// put in Hermite normal form, and the scale is divided back out.
    pub fn canonicalize(&self) -> RatLattice {
        let q = self.generator.denominator_lcm();
        let scaled = self.generator.scale(&Rat::int(q.clone()));
        let (h, _) = hnf_lower(&scaled).expect("scaled generator is integer and nonsingular");
        let gen = h.scale(&Rat::new(BigInt::one(), q));
        RatLattice {
            dim: self.dim,
            generator: gen,
        }
    }

    /// Canonicalize and also return the unimodular `p` with `generator·p`
    /// equal to the canonical generator.
    pub fn canonicalize_with_transform(&self) -> (RatLattice, RatMatrix) {
        let q = self.generator.denominator_lcm();
        let scaled = self.generator.scale(&Rat::int(q.clone()));
        let (h, p) = hnf_lower(&scaled).expect("scaled generator is integer and nonsingular");
        let gen = h.scale(&Rat::new(BigInt::one(), q));
        (
            RatLattice {
                dim: self.dim,
                generator: gen,
            },
            p,
        )
    }

    /// True iff both generators span the same point set.
    pub fn lattice_equal(&self, other: &RatLattice) -> Result<bool> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        let t = self.generator.inverse()?.mul(&other.generator);
        Ok(t.is_integer_matrix() && t.det()?.abs() == Rat::one())
    }

    /// Dual lattice: generator⁻ᵗ(Z^dim). An involution, and
    /// density(dual) = density⁻¹.
    pub fn dual(&self) -> RatLattice {
        RatLattice {
            dim: self.dim,
            generator: self
                .generator
                .inverse_transpose()
                .expect("generator is invertible"),
        }
    }

    /// Adjoint of a time-frequency lattice in R^{2d}: J⁻¹·generator⁻ᵗ(Z^{2d})
    /// with J the symplectic swap. An involution up to lattice equality; for
    /// a lower-block-triangular generator [[a,0],[c,b]] the result equals
    /// [[b⁻ᵗ,0],[a⁻ᵗcᵗb⁻ᵗ,a⁻ᵗ]](Z^{2d}).
    pub fn adjoint(&self) -> Result<RatLattice> {
        if self.dim % 2 != 0 {
            return Err(Error::OddDimension);
        }
        let d = self.dim / 2;
        let i = RatMatrix::identity(d);
        let o = RatMatrix::zero(d, d);
        // J = [[0, -I], [I, 0]], so J⁻¹ = [[0, I], [-I, 0]].
        let j_inv = RatMatrix::from_blocks(&o, &i, &i.neg(), &o);
        let gen = j_inv.mul(&self.generator.inverse_transpose()?);
        RatLattice::new(gen)
    }
}

/// Canonical generator of the full-rank integer lattice
/// {w ∈ Z^cols : d·w ∈ Z^rows} for a rational matrix `d` of any shape.
pub fn integral_preimage(d: &RatMatrix) -> Result<RatMatrix> {
    let k = d.cols();
    let r = d.rows();
    if r == 0 || d.is_integer_matrix() {
        return Ok(RatMatrix::identity(k));
    }
    let q = d.denominator_lcm();
    let nmat = d.scale(&Rat::int(q.clone()));
    // Solve n·w + q·l = 0 over Z^{k+r}; the w-projection of the kernel is
    // exactly the solution set of n·w ≡ 0 (mod q).
    let mut stacked = RatMatrix::zero(r, k + r);
    for i in 0..r {
        for j in 0..k {
            stacked[(i, j)] = nmat[(i, j)].clone();
        }
        stacked[(i, k + i)] = Rat::int(q.clone());
    }
    let kernel = integer_kernel(&stacked)?;
    debug_assert_eq!(kernel.cols(), k);
    let mut proj = RatMatrix::zero(k, k);
    for i in 0..k {
        for j in 0..k {
            proj[(i, j)] = kernel[(i, j)].clone();
        }
    }
    let (h, _) = hnf_lower(&proj)?;
    Ok(h)
}

/// Kernel lattice of a square rational matrix `d`: the integer lattice
/// {k ∈ Z^n : d·k ∈ Z^n}, returned through its canonical lower-triangular
/// generator with positive diagonal. Always full rank: it contains q·Z^n for
/// q the lcm of the entry denominators.
pub fn kernel_lattice(d: &RatMatrix) -> Result<RatLattice> {
    if !d.is_square() || d.rows() == 0 {
        return Err(Error::NotSquare);
    }
    RatLattice::new(integral_preimage(d)?)
}

/// A complete system of coset representatives of Z^n modulo `m(Z^n)`:
/// exactly |det m| vectors, enumerated lexicographically inside the box
/// ∏[0, h_ii) of the Hermite normal form of `m`.
pub fn coset_reps(m: &RatMatrix) -> Result<Vec<RatVec>> {
    let (h, _) = hnf_lower(m)?;
    let n = h.rows();
    let bounds: Vec<BigInt> = (0..n).map(|i| h[(i, i)].to_integer().unwrap()).collect();
    let mut reps: Vec<RatVec> = vec![Vec::new()];
    for b in &bounds {
        let mut next = Vec::new();
        for r in &reps {
            let mut k = BigInt::zero();
            while &k < b {
                let mut v = r.clone();
                v.push(Rat::int(k.clone()));
                next.push(v);
                k += 1;
            }
        }
        reps = next;
    }
    Ok(reps)
}

/// Result of converting the unit-upper block lattice [[I,d],[0,I]](Z^{2n})
/// into lower-block form [[e⁻ᵗ,0],[x,e]](Z^{2n}).
#[derive(Clone, Debug)]
pub struct UpperToLower {
    /// Generator of the kernel lattice of `d`.
    pub e: RatMatrix,
    /// Integer shift block of the lower-triangular form.
    pub x: RatMatrix,
    /// Integer completion with eᵗ·(z + d·x) = I.
    pub z: RatMatrix,
}

impl UpperToLower {
    /// The 2n×2n generator [[e⁻ᵗ, 0], [x, e]].
    pub fn lower_generator(&self) -> RatMatrix {
        let n = self.e.rows();
        let o = RatMatrix::zero(n, n);
        let e_it = self.e.inverse_transpose().expect("e is invertible");
        RatMatrix::from_blocks(&e_it, &o, &self.x, &self.e)
    }

    /// The unimodular column operation [[z, −d·e], [x, e]] realizing the
    /// conversion, for a given `d`.
    pub fn transform(&self, d: &RatMatrix) -> RatMatrix {
        let de = d.mul(&self.e);
        RatMatrix::from_blocks(&self.z, &de.neg(), &self.x, &self.e)
    }
}

/// Convert [[I,d],[0,I]](Z^{2n}), `d` symmetric rational, into the equal
/// lattice [[e⁻ᵗ,0],[x,e]](Z^{2n}) with integer `e`, `x`.
///
/// `e` generates {k ∈ Z^n : d·k ∈ Z^n}. Each standard basis vector splits as
/// eᵢ = eᵗ·zᵢ + eᵗ·d·γⁱ with γⁱ a coset representative of Z^n mod e(Z^n);
/// the γⁱ assemble into `x` and the zᵢ into `z`.
pub fn ut_to_lt(d: &RatMatrix) -> Result<UpperToLower> {
    if !d.is_square() {
        return Err(Error::NotSquare);
    }
    if !d.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = d.rows();
    let e = kernel_lattice(d)?.generator().clone();
    let et = e.transpose();
    let et_inv = et.inverse()?;
    let etd = et.mul(d);
    debug_assert!(etd.is_integer_matrix());
    let reps = coset_reps(&e)?;

    let mut x = RatMatrix::zero(n, n);
    let mut z = RatMatrix::zero(n, n);
    for i in 0..n {
        let mut unit = vec![Rat::zero(); n];
        unit[i] = Rat::one();
        // The residues eᵗ·d·γ form a complete system mod eᵗ(Z^n), so exactly
        // one representative matches eᵢ.
        let mut found = false;
        for gamma in &reps {
            let shifted: RatVec = unit
                .iter()
                .zip(etd.mul_vec(gamma))
                .map(|(u, w)| u - &w)
                .collect();
            let zi = et_inv.mul_vec(&shifted);
            if zi.iter().all(Rat::is_integer) {
                for r in 0..n {
                    x[(r, i)] = gamma[r].clone();
                    z[(r, i)] = zi[r].clone();
                }
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::TheoremViolation(
                "residues of the kernel-lattice cosets failed to cover a basis vector",
            ));
        }
    }
    let out = UpperToLower { e, x, z };
    debug_assert_eq!(
        out.transform(d).det().unwrap().abs(),
        Rat::one(),
        "conversion transform must be unimodular"
    );
    Ok(out)
}

/// Solve one rational linear Diophantine equation ⟨row, u⟩ = c over u ∈ Z^k.
/// Returns a particular solution and an integer basis of the homogeneous
/// solutions, or None when unsolvable. A zero row is unsolvable unless c = 0,
/// in which case all of Z^k solves it.
pub fn solve_linear_diophantine(row: &[Rat], c: &Rat) -> Option<(Vec<BigInt>, RatMatrix)> {
    let k = row.len();
    if row.iter().all(Rat::is_zero) {
        return if c.is_zero() {
            Some((vec![BigInt::zero(); k], RatMatrix::identity(k)))
        } else {
            None
        };
    }
    // Scale to integers: g·u = m.
    let mut all = row.to_vec();
    all.push(c.clone());
    let q = crate::rat::denominator_lcm(&all);
    let g: Vec<BigInt> = row
        .iter()
        .map(|r| (Rat::int(q.clone()) * r.clone()).to_integer().unwrap())
        .collect();
    let m = (Rat::int(q) * c.clone()).to_integer().unwrap();
    let gm = RatMatrix::from_rows(vec![g.iter().map(|x| Rat::int(x.clone())).collect()]);
    let (h, u) = column_hnf(&gm).expect("integer row");
    let gcd = h[(0, 0)].to_integer().unwrap();
    debug_assert!(gcd.is_positive());
    let (quot, rem) = num_integer::Integer::div_rem(&m, &gcd);
    if !rem.is_zero() {
        return None;
    }
    let particular: Vec<BigInt> = (0..k)
        .map(|i| u[(i, 0)].to_integer().unwrap() * &quot)
        .collect();
    let mut basis = RatMatrix::zero(k, k - 1);
    for j in 1..k {
        for i in 0..k {
            basis[(i, j - 1)] = u[(i, j)].clone();
        }
    }
    Some((particular, basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn lat(rows: &[&[i64]]) -> RatLattice {
        RatLattice::new(RatMatrix::from_i64(rows)).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let l = RatLattice::from_diagonal(&[rat(1, 2), rat(2, 1)]).unwrap();
        assert_eq!(l.canonicalize().generator(), l.generator());

        // [[1/2,1/3],[0,1]] reduces to (1/6)·hnf([[3,2],[0,6]]).
        let g = RatMatrix::from_rows(vec![vec![rat(1, 2), rat(1, 3)], vec![rat(0, 1), rat(1, 1)]]);
        let l = RatLattice::new(g).unwrap();
        let canon = l.canonicalize();
        let expected =
            RatMatrix::from_rows(vec![vec![rat(1, 6), rat(0, 1)], vec![rat(2, 1), rat(3, 1)]]);
        assert!(canon
            .lattice_equal(&RatLattice::new(expected.clone()).unwrap())
            .unwrap());
        assert_eq!(canon.generator(), &expected);
        // Idempotent.
        assert_eq!(canon.canonicalize().generator(), &expected);

        // Unimodular integer generators span Z^2.
        let l = lat(&[&[1, 1], &[1, 2]]);
        let canon = l.canonicalize();
        assert!(canon.lattice_equal(&lat(&[&[1, 0], &[1, 1]])).unwrap());
        assert_eq!(canon.generator(), &RatMatrix::identity(2));
    }

    #[test]
    fn lattice_equality() {
        assert!(RatLattice::standard(2)
            .lattice_equal(&RatLattice::standard(2))
            .unwrap());
        assert!(lat(&[&[1, 1], &[1, 2]])
            .lattice_equal(&lat(&[&[1, 0], &[1, 1]]))
            .unwrap());
        let a = RatLattice::from_diagonal(&[rat(1, 1), rat(2, 1)]).unwrap();
        let b = RatLattice::from_diagonal(&[rat(2, 1), rat(1, 1)]).unwrap();
        assert!(!a.lattice_equal(&b).unwrap());
        assert!(a.lattice_equal(&RatLattice::standard(3)).is_err());
    }

    #[test]
    fn dual_examples() {
        let l = RatLattice::from_diagonal(&[rat(1, 2), rat(2, 1)]).unwrap();
        let d = l.dual();
        assert_eq!(d.generator(), &RatMatrix::diagonal(&[rat(2, 1), rat(1, 2)]));
        assert!(d.dual().lattice_equal(&l).unwrap());
        assert_eq!(l.density(), d.density().recip().unwrap());

        // Dual pairs integrally with the original generators.
        let l = lat(&[&[1, 0], &[1, 1]]);
        let d = l.dual();
        assert_eq!(d.generator(), &RatMatrix::from_i64(&[&[1, -1], &[0, 1]]));
        for i in 0..2 {
            for j in 0..2 {
                let pairing = crate::rat::vec_dot(&l.generator().col(i), &d.generator().col(j));
                assert!(pairing.is_integer());
            }
        }
    }

    #[test]
    fn adjoint_of_standard_lattice() {
        let z4 = RatLattice::standard(4);
        assert!(z4.adjoint().unwrap().lattice_equal(&z4).unwrap());
    }

    #[test]
    fn adjoint_block_formula() {
        // A = I, B = diag(1/2, 2), C = [[0,0],[1,0]].
        let a = RatMatrix::identity(2);
        let b = RatMatrix::diagonal(&[rat(1, 2), rat(2, 1)]);
        let c = RatMatrix::from_i64(&[&[0, 0], &[1, 0]]);
        let o = RatMatrix::zero(2, 2);
        let m = RatMatrix::from_blocks(&a, &o, &c, &b);
        let lambda = RatLattice::new(m).unwrap();
        let adj = lambda.adjoint().unwrap();

        let b_it = b.inverse_transpose().unwrap();
        let expected = RatMatrix::from_blocks(
            &b_it,
            &o,
            &c.transpose().mul(&b_it),
            &RatMatrix::identity(2),
        );
        assert!(adj
            .lattice_equal(&RatLattice::new(expected).unwrap())
            .unwrap());
        // Involution and density preservation at density 1.
        assert!(adj.adjoint().unwrap().lattice_equal(&lambda).unwrap());
        assert_eq!(adj.density(), lambda.density());
    }

    #[test]
    fn adjoint_rejects_odd_dimension() {
        let l = RatLattice::standard(3);
        assert_eq!(l.adjoint(), Err(Error::OddDimension));
    }

    #[test]
    fn density_examples() {
        assert_eq!(RatLattice::standard(4).density(), rat(1, 1));
        let l = RatLattice::from_diagonal(&[rat(2, 1), rat(2, 1)]).unwrap();
        assert_eq!(l.density(), rat(1, 4));
    }

    #[test]
    fn kernel_lattice_examples() {
        let d = RatMatrix::diagonal(&[rat(2, 1), rat(1, 6)]);
        let e = kernel_lattice(&d).unwrap();
        assert_eq!(e.generator(), &RatMatrix::diagonal(&[rat(1, 1), rat(6, 1)]));

        let d = RatMatrix::from_i64(&[&[3, -1], &[0, 5]]);
        assert_eq!(
            kernel_lattice(&d).unwrap().generator(),
            &RatMatrix::identity(2)
        );

        let d = RatMatrix::from_rows(vec![vec![rat(0, 1), rat(1, 2)], vec![rat(1, 2), rat(0, 1)]]);
        assert_eq!(
            kernel_lattice(&d).unwrap().generator(),
            &RatMatrix::diagonal(&[rat(2, 1), rat(2, 1)])
        );
    }

    #[test]
    fn coset_reps_examples() {
        assert_eq!(
            coset_reps(&RatMatrix::identity(2)).unwrap(),
            vec![vec![rat(0, 1), rat(0, 1)]]
        );
        let reps = coset_reps(&RatMatrix::diagonal(&[rat(1, 1), rat(2, 1)])).unwrap();
        assert_eq!(
            reps,
            vec![vec![rat(0, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)],]
        );
        let reps = coset_reps(&RatMatrix::diagonal(&[rat(2, 1), rat(2, 1)])).unwrap();
        assert_eq!(reps.len(), 4);
        // Pairwise distinct mod 2I.
        for i in 0..reps.len() {
            for j in 0..i {
                let diff = crate::rat::vec_sub(&reps[i], &reps[j]);
                assert!(!diff.iter().all(|x| x.is_multiple_of(&rat(2, 1))));
            }
        }
        assert_eq!(
            coset_reps(&RatMatrix::from_i64(&[&[0, 0], &[0, 0]])),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    fn ut_to_lt_zero_shift() {
        let d = RatMatrix::zero(2, 2);
        let conv = ut_to_lt(&d).unwrap();
        assert_eq!(conv.e, RatMatrix::identity(2));
        assert!(conv.x.is_zero_matrix());
    }

    #[test]
    fn ut_to_lt_examples() {
        for d in [
            RatMatrix::diagonal(&[rat(2, 1), rat(1, 6)]),
            RatMatrix::from_rows(vec![vec![rat(0, 1), rat(1, 2)], vec![rat(1, 2), rat(0, 1)]]),
        ] {
            let conv = ut_to_lt(&d).unwrap();
            assert!(conv.e.is_integer_matrix());
            assert!(conv.x.is_integer_matrix());
            let n = d.rows();
            let upper = RatMatrix::from_blocks(
                &RatMatrix::identity(n),
                &d,
                &RatMatrix::zero(n, n),
                &RatMatrix::identity(n),
            );
            let upper = RatLattice::new(upper).unwrap();
            let lower = RatLattice::new(conv.lower_generator()).unwrap();
            assert!(upper.lattice_equal(&lower).unwrap());
            let p = conv.transform(&d);
            assert!(p.is_integer_matrix());
            assert_eq!(p.det().unwrap().abs(), Rat::one());
        }

        // Off-diagonal case pins the full construction.
        let d = RatMatrix::from_rows(vec![vec![rat(0, 1), rat(1, 2)], vec![rat(1, 2), rat(0, 1)]]);
        let conv = ut_to_lt(&d).unwrap();
        assert_eq!(conv.e, RatMatrix::diagonal(&[rat(2, 1), rat(2, 1)]));
        assert_eq!(conv.x, RatMatrix::from_i64(&[&[0, 1], &[1, 0]]));
        assert!(conv.z.is_zero_matrix());
    }

    #[test]
    fn ut_to_lt_rejects_asymmetric() {
        let d = RatMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert_eq!(ut_to_lt(&d).err(), Some(Error::NotSymmetric));
    }

    #[test]
    fn diophantine_solver() {
        let (u0, basis) = solve_linear_diophantine(&[rat(1, 2), rat(1, 3)], &rat(5, 6)).unwrap();
        let check = rat(1, 2) * Rat::int(u0[0].clone()) + rat(1, 3) * Rat::int(u0[1].clone());
        assert_eq!(check, rat(5, 6));
        assert_eq!(basis.cols(), 1);
        let b = basis.col(0);
        assert!((rat(1, 2) * b[0].clone() + rat(1, 3) * b[1].clone()).is_zero());
        assert!(solve_linear_diophantine(&[rat(2, 1)], &rat(1, 3)).is_none());
        assert!(solve_linear_diophantine(&[rat(0, 1)], &rat(1, 1)).is_none());
    }
}
