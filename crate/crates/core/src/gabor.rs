//! The orthonormality verdict engine for Gabor systems generated by a
//! normalized box-union indicator and a rational block-triangular lattice of
//! density 1, plus the structure report (simultaneous fundamental-domain
//! decompositions) and the admissible-shift constraint solver.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::boxset::{fd_decomposition, BoxSet};
use crate::error::{Error, Result};
use crate::fourier::{vanishes_on_affine_lattice, FourierValue, Vanishing};
use crate::lattice::RatLattice;
use crate::matrix::{integer_kernel, solve_linear, RatMatrix};
use crate::rat::{rational_lcm, Rat, RatVec};

/// A (window, time-frequency lattice) problem instance. The lattice lives in
/// R^{2d} and splits into d×d blocks at `block_split = d`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GaborSpec {
    pub window: BoxSet,
    pub lattice: RatLattice,
    pub block_split: usize,
}

impl GaborSpec {
    pub fn new(window: BoxSet, lattice: RatLattice) -> Result<Self> {
        let d = window.dim();
        if lattice.dim() != 2 * d {
            return Err(Error::DimMismatch(lattice.dim(), 2 * d));
        }
        if window.is_empty() {
            return Err(Error::EmptyBox);
        }
        Ok(GaborSpec {
            window,
            lattice,
            block_split: d,
        })
    }

    /// The generator actually used by the checker: the input when already
    /// block lower triangular, otherwise the canonical lower-triangular
    /// equivalent (same lattice, so the verdict is unchanged).
    pub fn checked_generator(&self) -> RatMatrix {
        let d = self.block_split;
        let (_, upper_right, _, _) = self.lattice.generator().split_blocks(d);
        if upper_right.is_zero_matrix() {
            self.lattice.generator().clone()
        } else {
            self.lattice.canonicalize().generator().clone()
        }
    }

    /// Time, shift and frequency blocks (a, c, b) of the checked generator.
    pub fn blocks(&self) -> Result<(RatMatrix, RatMatrix, RatMatrix)> {
        let d = self.block_split;
        let gen = self.checked_generator();
        let (a, upper_right, c, b) = gen.split_blocks(d);
        if !upper_right.is_zero_matrix() {
            return Err(Error::NotBlockTriangular);
        }
        Ok((a, c, b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictStatus {
    Orthonormal,
    NotOrthogonal,
    NotDensityOne,
}

/// Index pair whose inner product fails to vanish, with the exact transform
/// value as certificate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrthogonalityWitness {
    /// Time index m (integer coordinates w.r.t. the checked generator).
    pub m: RatVec,
    /// Frequency index n.
    pub n: RatVec,
    /// a·m, the time shift.
    pub time_shift: RatVec,
    /// c·m + b·n, the frequency at which the overlap transform is nonzero.
    pub frequency: RatVec,
    /// |K ∩ (K + a·m)|.
    pub overlap_measure: Rat,
    /// Exact nonzero transform value.
    pub value: FourierValue,
    /// |⟨π(λ)g, π(λ′)g⟩| up to the dropped unimodular phase.
    pub float_inner_product: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub density: Rat,
    pub witness: Option<OrthogonalityWitness>,
    pub structure: Option<StructureReport>,
}

impl Verdict {
    pub fn is_orthonormal(&self) -> bool {
        self.status == VerdictStatus::Orthonormal
    }
}

/// Simultaneous fundamental-domain decompositions of an orthonormal window:
/// `time_domains` are fundamental domains of a(Z^d), `freq_domains` of
/// b⁻ᵗ(Z^d), with equal counts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructureReport {
    pub level: u64,
    pub time_domains: Vec<BoxSet>,
    pub freq_domains: Vec<BoxSet>,
    pub tiles_and_spectral: bool,
    pub spectrum: Option<RatLattice>,
}

/// Decide whether the Gabor system of |K|^{-1/2}·χ_K over the lattice is an
/// orthonormal basis.
///
/// The lattice must be of density 1. Orthogonality is checked pairwise: the
/// zero time shift needs the window transform to vanish on b(Z^d) ∖ {0}, and
/// every overlapping shift a·m needs the transform of K ∩ (K + a·m) to vanish
/// on c·m + b(Z^d). Orthogonality at density 1 already implies completeness,
/// so no separate completeness computation exists.
pub fn gabor_check(spec: &GaborSpec) -> Result<Verdict> {
    let density = spec.lattice.density();
    if density != Rat::one() {
        return Ok(Verdict {
            status: VerdictStatus::NotDensityOne,
            density,
            witness: None,
            structure: None,
        });
    }
    let d = spec.block_split;
    let (a, c, b) = spec.blocks()?;
    let b_lattice = RatLattice::new(b.clone())?;
    let window = &spec.window;
    let measure = window.measure();

    // Zero time shift: frequencies b·n, n ≠ 0.
    let zero = vec![Rat::zero(); d];
    if let Vanishing::Witness(w) = vanishes_on_affine_lattice(window, &zero, &b_lattice, true)? {
        let float_inner_product = w.value.magnitude() / measure.to_f64();
        return Ok(Verdict {
            status: VerdictStatus::NotOrthogonal,
            density,
            witness: Some(OrthogonalityWitness {
                m: zero.clone(),
                n: w.v.iter().map(|x| Rat::int(x.clone())).collect(),
                time_shift: zero,
                frequency: w.xi,
                overlap_measure: measure,
                value: w.value,
                float_inner_product,
            }),
            structure: None,
        });
    }

    // Nonzero time shifts with overlapping support.
    for m in overlap_candidates(window, &a)? {
        if m.iter().all(Zero::is_zero) {
            continue;
        }
        let m_rat: RatVec = m.iter().map(|x| Rat::int(x.clone())).collect();
        let shift = a.mul_vec(&m_rat);
        let overlap = window.intersect(&window.translate(&shift))?;
        if overlap.is_empty() {
            continue;
        }
        let xi0 = c.mul_vec(&m_rat);
        if let Vanishing::Witness(w) =
            vanishes_on_affine_lattice(&overlap, &xi0, &b_lattice, false)?
        {
            let float_inner_product = w.value.magnitude() / measure.to_f64();
            return Ok(Verdict {
                status: VerdictStatus::NotOrthogonal,
                density,
                witness: Some(OrthogonalityWitness {
                    m: m_rat,
                    n: w.v.iter().map(|x| Rat::int(x.clone())).collect(),
                    time_shift: shift,
                    frequency: w.xi,
                    overlap_measure: overlap.measure(),
                    value: w.value,
                    float_inner_product,
                }),
                structure: None,
            });
        }
    }

    Ok(Verdict {
        status: VerdictStatus::Orthonormal,
        density,
        witness: None,
        structure: None,
    })
}

/// Integer m with a·m inside the difference box bbox(K) − bbox(K); a finite
/// superset of the shifts with |K ∩ (K + a·m)| > 0.
fn overlap_candidates(window: &BoxSet, a: &RatMatrix) -> Result<Vec<Vec<BigInt>>> {
    let d = a.rows();
    let bbox = window.bounding_box().ok_or(Error::EmptyBox)?;
    let diff_lo: RatVec = bbox
        .lo()
        .iter()
        .zip(bbox.hi())
        .map(|(l, h)| l - h)
        .collect();
    let diff_hi: RatVec = bbox
        .hi()
        .iter()
        .zip(bbox.lo())
        .map(|(h, l)| h - l)
        .collect();
    let a_inv = a.inverse()?;
    // Bounding box of the preimage parallelepiped via its corners.
    let mut lo = vec![Rat::zero(); d];
    let mut hi = vec![Rat::zero(); d];
    for corner in 0..(1usize << d) {
        let point: RatVec = (0..d)
            .map(|j| {
                if corner & (1 << j) != 0 {
                    diff_hi[j].clone()
                } else {
                    diff_lo[j].clone()
                }
            })
            .collect();
        let pre = a_inv.mul_vec(&point);
        for j in 0..d {
            if corner == 0 || pre[j] < lo[j] {
                lo[j] = pre[j].clone();
            }
            if corner == 0 || pre[j] > hi[j] {
                hi[j] = pre[j].clone();
            }
        }
    }
    let mut out = Vec::new();
    let mut idx: Vec<BigInt> = lo.iter().map(Rat::ceil).collect();
    let top: Vec<BigInt> = hi.iter().map(Rat::floor).collect();
    if idx.iter().zip(&top).any(|(l, t)| l > t) {
        return Ok(out);
    }
    'outer: loop {
        out.push(idx.clone());
        for j in 0..d {
            idx[j] += 1;
            if idx[j] <= top[j] {
                continue 'outer;
            }
            idx[j] = lo[j].ceil();
        }
        break;
    }
    Ok(out)
}

/// Fundamental-domain structure of an orthonormal verdict: the window splits
/// into N fundamental domains of a(Z^d) and simultaneously into N fundamental
/// domains of b⁻ᵗ(Z^d). When aᵗb is an integer matrix the count is forced to
/// 1 and the window tiles by a(Z^d) with spectrum b(Z^d).
pub fn structure_report(spec: &GaborSpec, verdict: &Verdict) -> Result<StructureReport> {
    if !verdict.is_orthonormal() {
        return Err(Error::Invalid(
            "structure report requires an orthonormal verdict".into(),
        ));
    }
    let (a, _, b) = spec.blocks()?;
    let time_lattice = RatLattice::new(a.clone())?;
    let freq_lattice = RatLattice::new(b.inverse_transpose()?)?;
    let time_domains = fd_decomposition(&spec.window, &time_lattice)?;
    let freq_domains = fd_decomposition(&spec.window, &freq_lattice)?;
    if time_domains.len() != freq_domains.len() {
        return Err(Error::TheoremViolation(
            "time and frequency decompositions have different counts",
        ));
    }
    let level = time_domains.len() as u64;
    if a.transpose().mul(&b).is_integer_matrix() && level != 1 {
        return Err(Error::TheoremViolation(
            "integer aᵗb forces a single common fundamental domain",
        ));
    }
    let tiles_and_spectral = level == 1;
    let spectrum = tiles_and_spectral.then(|| RatLattice::new(b).expect("b is invertible"));
    Ok(StructureReport {
        level,
        time_domains,
        freq_domains,
        tiles_and_spectral,
        spectrum,
    })
}

/// Rescale the time block to the identity: the system over
/// [[a,d],[c,b]](Z^{2d}) with window K is orthonormal iff the system over
/// [[I,a⁻¹d],[aᵗc,aᵗb]](Z^{2d}) with window a⁻¹K is. The window image stays
/// a box union only for monomial `a` (diagonal or permutation-scaled);
/// otherwise the unreduced checker must be used.
pub fn reduce_time_block(spec: &GaborSpec) -> Result<GaborSpec> {
    let d = spec.block_split;
    let (a, dd, c, b) = spec.lattice.generator().split_blocks(d);
    if a.det()?.is_zero() {
        return Err(Error::SingularMatrix);
    }
    if !a.is_monomial() {
        return Err(Error::NonBoxImage);
    }
    let a_inv = a.inverse()?;
    let window = monomial_image(&spec.window, &a_inv)?;
    let at = a.transpose();
    let shear = a_inv.mul(&dd);
    let freq_shift = at.mul(&c);
    let mut freq = at.mul(&b);
    // With no upper shift and a unimodular integer frequency block, a
    // further unimodular column operation normalizes that block to the
    // identity (same lattice).
    if shear.is_zero_matrix() && freq.is_integer_matrix() && freq.det()?.abs() == Rat::one() {
        let t = freq.inverse()?;
        freq = freq.mul(&t);
        debug_assert_eq!(freq, RatMatrix::identity(d));
    }
    let gen = RatMatrix::from_blocks(&RatMatrix::identity(d), &shear, &freq_shift, &freq);
    GaborSpec::new(window, RatLattice::new(gen)?)
}

/// Image of a box union under a monomial matrix. Negative scales flip the
/// half-open ends, which differs from the true image by a null set only.
fn monomial_image(set: &BoxSet, m: &RatMatrix) -> Result<BoxSet> {
    let d = set.dim();
    let mut boxes = Vec::new();
    for b in set.boxes() {
        let mut lo = vec![Rat::zero(); d];
        let mut hi = vec![Rat::zero(); d];
        for i in 0..d {
            let j = (0..d)
                .find(|&j| !m[(i, j)].is_zero())
                .ok_or(Error::SingularMatrix)?;
            let s = &m[(i, j)];
            let x = s * &b.lo()[j];
            let y = s * &b.hi()[j];
            if x <= y {
                lo[i] = x;
                hi[i] = y;
            } else {
                lo[i] = y;
                hi[i] = x;
            }
        }
        boxes.push(crate::boxset::AxisBox::new(lo, hi)?);
    }
    Ok(BoxSet::from_boxes(d, boxes))
}

/// Per-coordinate admissibility of one overlap: the frequency coordinate
/// x = (c·m)_j kills the factorized transform for every n iff x lies on the
/// membership progression but not on the forbidden one.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoordOption {
    pub coord: usize,
    /// x must be an integer multiple of this step (1 / side length).
    pub membership_step: Rat,
    /// x must not be an integer multiple of this step (|b_jj|).
    pub forbidden_step: Rat,
    /// False when no x satisfies both conditions.
    pub feasible: bool,
}

/// Constraints contributed by one overlap shift m (shifts come in ± pairs
/// with identical constraints; only the lexicographically positive one is
/// kept).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShiftConstraint {
    pub m: RatVec,
    pub overlap: BoxSet,
    pub options: Vec<CoordOption>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ShiftVerdict {
    Satisfiable { shift_matrix: RatMatrix },
    Empty,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShiftSolution {
    /// Whether the zero-shift orthogonality (independent of c) holds.
    pub zero_shift_ok: bool,
    pub constraints: Vec<ShiftConstraint>,
    pub verdict: ShiftVerdict,
}

/// Solve for shift matrices c making the system orthonormal, in the
/// factorizable case: d ≤ 2, diagonal b, and every overlap a single box, so
/// the overlap transform splits into per-coordinate interval transforms.
///
/// Each overlap m then demands, for at least one coordinate j, that
/// x = (c·m)_j satisfies x + b_jj·Z ⊆ (1/L_j)·Z ∖ {0}. The disjunctions are
/// resolved by branch enumeration and the resulting linear congruence system
/// over the entries of c is decided exactly.
pub fn admissible_shift_solver(
    window: &BoxSet,
    a: &RatMatrix,
    b: &RatMatrix,
) -> Result<ShiftSolution> {
    let d = window.dim();
    if d > 2 {
        return Err(Error::Invalid(
            "shift solver supports dimensions 1 and 2".into(),
        ));
    }
    if !b.is_diagonal() {
        return Err(Error::NotFactorizable);
    }
    let b_lattice = RatLattice::new(b.clone())?;
    let zero_shift_ok =
        vanishes_on_affine_lattice(window, &vec![Rat::zero(); d], &b_lattice, true)?.holds();

    // Overlaps, deduplicated up to sign.
    let mut constraints: Vec<ShiftConstraint> = Vec::new();
    for m in overlap_candidates(window, a)? {
        if m.iter().all(Zero::is_zero) || !lex_positive(&m) {
            continue;
        }
        let m_rat: RatVec = m.iter().map(|x| Rat::int(x.clone())).collect();
        let shift = a.mul_vec(&m_rat);
        let overlap = window.intersect(&window.translate(&shift))?;
        if overlap.is_empty() {
            continue;
        }
        if overlap.boxes().len() != 1 {
            return Err(Error::NotFactorizable);
        }
        let the_box = &overlap.boxes()[0];
        let options = (0..d)
            .map(|j| {
                let len = the_box.side(j);
                let beta = b[(j, j)].abs();
                let prod = &beta * &len;
                let feasible = prod.is_integer()
                    && prod
                        .to_integer()
                        .map(|g| g.abs() > BigInt::from(1))
                        .unwrap_or(false);
                CoordOption {
                    coord: j,
                    membership_step: len.recip().expect("box sides are positive"),
                    forbidden_step: beta,
                    feasible,
                }
            })
            .collect();
        constraints.push(ShiftConstraint {
            m: m_rat,
            overlap,
            options,
        });
    }

    if !zero_shift_ok {
        return Ok(ShiftSolution {
            zero_shift_ok,
            constraints,
            verdict: ShiftVerdict::Empty,
        });
    }

    // Enumerate branch choices (one feasible coordinate per overlap) and
    // solve each row's congruence system.
    let k = constraints.len();
    if k == 0 {
        return Ok(ShiftSolution {
            zero_shift_ok,
            constraints,
            verdict: ShiftVerdict::Satisfiable {
                shift_matrix: RatMatrix::zero(d, d),
            },
        });
    }
    let mut choice = vec![0usize; k];
    'assignments: loop {
        // Validate the current assignment.
        let mut rows: Vec<Vec<(usize, Rat, Rat)>> = vec![Vec::new(); d];
        let mut ok = true;
        for (i, c) in constraints.iter().enumerate() {
            let opt = &c.options[choice[i]];
            if !opt.feasible {
                ok = false;
                break;
            }
            rows[opt.coord].push((i, opt.membership_step.clone(), opt.forbidden_step.clone()));
        }
        if ok {
            let mut shift_matrix = RatMatrix::zero(d, d);
            let mut all_rows_ok = true;
            for (r, row_constraints) in rows.iter().enumerate() {
                if row_constraints.is_empty() {
                    continue;
                }
                match solve_row_congruences(&constraints, row_constraints)? {
                    Some(y) => {
                        for j in 0..d {
                            shift_matrix[(r, j)] = y[j].clone();
                        }
                    }
                    None => {
                        all_rows_ok = false;
                        break;
                    }
                }
            }
            if all_rows_ok {
                return Ok(ShiftSolution {
                    zero_shift_ok,
                    constraints,
                    verdict: ShiftVerdict::Satisfiable { shift_matrix },
                });
            }
        }
        // Next assignment.
        for i in 0..k {
            choice[i] += 1;
            if choice[i] < constraints[i].options.len() {
                continue 'assignments;
            }
            choice[i] = 0;
        }
        break;
    }
    Ok(ShiftSolution {
        zero_shift_ok,
        constraints,
        verdict: ShiftVerdict::Empty,
    })
}

/// Decide ∃y ∈ Q^d with ⟨m_i, y⟩ ∈ μ_i·Z ∖ β_i·Z for every assigned overlap.
///
/// Substituting t_i = ⟨m_i, y⟩ / μ_i turns the memberships into t ∈ Z^k and
/// the forbidden progressions into t_i ∉ g_i·Z with g_i = β_i/μ_i ∈ Z; the
/// reachable t are exactly the integer points satisfying the Q-linear
/// relations among the scaled overlap vectors, a lattice searched modulo
/// lcm(g_i).
fn solve_row_congruences(
    constraints: &[ShiftConstraint],
    assigned: &[(usize, Rat, Rat)],
) -> Result<Option<RatVec>> {
    let (first, _, _) = assigned.first().expect("caller skips empty rows");
    let d = constraints[*first].m.len();
    let k = assigned.len();
    // Columns c_i = m_i / μ_i; relations among them constrain t.
    let mut cmat = RatMatrix::zero(d, k);
    let mut g = Vec::with_capacity(k);
    for (col, (i, mu, beta)) in assigned.iter().enumerate() {
        for r in 0..d {
            cmat[(r, col)] = &constraints[*i].m[r] / mu;
        }
        let ratio = beta / mu;
        let gi = ratio.to_integer().expect("feasibility guarantees β/μ ∈ Z");
        g.push(gi.abs());
    }
    // Integer relation basis: kernel of c viewed over Z after clearing
    // denominators.
    let q = cmat.denominator_lcm();
    let scaled = cmat.scale(&Rat::int(q));
    let relations = integer_kernel(&scaled)?;
    // t must satisfy relationsᵗ · t = 0; its integer solutions are spanned by
    // the kernel of that transposed system.
    let t_basis = if relations.cols() == 0 {
        RatMatrix::identity(k)
    } else {
        integer_kernel(&relations.transpose())?
    };
    let rho = t_basis.cols();
    if rho == 0 {
        return Ok(None);
    }
    let period = g.iter().fold(Rat::one(), |acc, gi| {
        rational_lcm(&acc, &Rat::int(gi.clone()))
    });
    let period = period
        .to_integer()
        .unwrap()
        .to_i64()
        .ok_or_else(|| Error::Invalid("congruence period too large to enumerate".into()))?;
    let mut s = vec![0i64; rho];
    'search: loop {
        let s_rat: RatVec = s.iter().map(|&x| Rat::int(x)).collect();
        let t = t_basis.mul_vec(&s_rat);
        let admissible = t
            .iter()
            .zip(&g)
            .all(|(ti, gi)| !(ti.clone() / Rat::int(gi.clone())).is_integer());
        if admissible {
            // Recover y from cᵗ·y = t.
            let system = cmat.transpose();
            let y = solve_linear(&system, &t).ok_or(Error::TheoremViolation(
                "reachable t-vector without a rational preimage",
            ))?;
            return Ok(Some(y));
        }
        for i in 0..rho {
            s[i] += 1;
            if s[i] < period {
                continue 'search;
            }
            s[i] = 0;
        }
        break;
    }
    Ok(None)
}

fn lex_positive(v: &[BigInt]) -> bool {
    for x in v {
        if x.is_positive() {
            return true;
        }
        if x.is_negative() {
            return false;
        }
    }
    false
}
