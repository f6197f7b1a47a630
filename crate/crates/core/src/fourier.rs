//! Exact Fourier transforms of box unions at rational frequencies, and the
//! decision procedure for vanishing on a whole affine lattice of frequencies.
//!
//! The transform of a box union at rational ξ factors per coordinate into
//! either a difference of roots of unity (ξ_j ≠ 0) or a side length
//! (ξ_j = 0), divided by ∏ 2πiξ_j over the nonzero coordinates. Only the
//! cyclotomic numerator can vanish, so zero tests are exact.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::boxset::BoxSet;
use crate::cyclo::{check_conductor, CycloNum, DEFAULT_CONDUCTOR_BOUND};
use crate::error::{Error, Result};
use crate::lattice::{coset_reps, integral_preimage, solve_linear_diophantine, RatLattice};
use crate::matrix::RatMatrix;
use crate::rat::{denominator_lcm, vec_add, Rat, RatVec};

/// Exact value of a box-union Fourier transform at a rational frequency:
/// scale · numerator / ∏_{j ∉ zero_coords} (2πi ξ_j), up to a unimodular
/// constant. The value vanishes iff the numerator does (or the scale is 0).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FourierValue {
    pub xi: RatVec,
    pub zero_coords: BTreeSet<usize>,
    pub scale: Rat,
    pub numerator: CycloNum,
}

impl FourierValue {
    pub fn is_zero(&self) -> bool {
        self.scale.is_zero() || self.numerator.is_zero()
    }

    /// Floating-point evaluation (re, im); sanity oracle only.
    pub fn approx(&self) -> (f64, f64) {
        let (mut re, mut im) = self.numerator.approx();
        re *= self.scale.to_f64();
        im *= self.scale.to_f64();
        for (j, x) in self.xi.iter().enumerate() {
            if self.zero_coords.contains(&j) {
                continue;
            }
            // Divide by 2πi·ξ_j.
            let d = 2.0 * std::f64::consts::PI * x.to_f64();
            let (nre, nim) = (im / d, -re / d);
            re = nre;
            im = nim;
        }
        (re, im)
    }

    pub fn magnitude(&self) -> f64 {
        let (re, im) = self.approx();
        (re * re + im * im).sqrt()
    }
}

/// Numerator of the transform with a frozen branch: coordinates in
/// `forced_zero` contribute side lengths, all others the root-of-unity
/// difference, regardless of whether ξ_j happens to vanish. With the branch
/// frozen the numerator is periodic in ξ_j of period `period[j]`.
fn branch_numerator(
    set: &BoxSet,
    xi: &[Rat],
    forced_zero: &BTreeSet<usize>,
    bound: u64,
) -> Result<CycloNum> {
    let dim = set.dim();
    let mut phases: Vec<Rat> = Vec::new();
    for b in set.boxes() {
        for j in 0..dim {
            if forced_zero.contains(&j) {
                continue;
            }
            phases.push(&xi[j] * &b.lo()[j]);
            phases.push(&xi[j] * &b.hi()[j]);
        }
    }
    let conductor = check_conductor(&denominator_lcm(&phases), bound)?;
    let mut total = CycloNum::zero(conductor);
    for b in set.boxes() {
        let mut term = CycloNum::one(conductor);
        let mut length = Rat::one();
        for j in 0..dim {
            if forced_zero.contains(&j) {
                length = length * b.side(j);
            } else {
                let lo_phase = -(&xi[j] * &b.lo()[j]);
                let hi_phase = -(&xi[j] * &b.hi()[j]);
                let factor = CycloNum::unit_phase(conductor, &lo_phase)
                    .sub(&CycloNum::unit_phase(conductor, &hi_phase));
                term = term.mul(&factor);
            }
        }
        total = total.add(&term.scale(&length));
    }
    Ok(total)
}

/// Exact Fourier transform of the indicator of a box union at rational ξ.
pub fn ft_boxset(set: &BoxSet, xi: &[Rat]) -> Result<FourierValue> {
    ft_boxset_bounded(set, xi, DEFAULT_CONDUCTOR_BOUND)
}

pub fn ft_boxset_bounded(set: &BoxSet, xi: &[Rat], bound: u64) -> Result<FourierValue> {
    if xi.len() != set.dim() {
        return Err(Error::DimMismatch(xi.len(), set.dim()));
    }
    let zero_coords: BTreeSet<usize> = (0..set.dim()).filter(|&j| xi[j].is_zero()).collect();
    let numerator = branch_numerator(set, xi, &zero_coords, bound)?;
    // Factor a syntactically rational numerator into the scale so that the
    // pure-measure case reads off directly.
    let (scale, numerator) = match numerator.as_rational() {
        Some(r) => (r, CycloNum::one(1)),
        None => (Rat::one(), numerator),
    };
    Ok(FourierValue {
        xi: xi.to_vec(),
        zero_coords,
        scale,
        numerator,
    })
}

/// Outcome of the all-frequencies vanishing decision.
#[derive(Clone, Debug)]
pub enum Vanishing {
    Holds,
    Witness(VanishWitness),
}

impl Vanishing {
    pub fn holds(&self) -> bool {
        matches!(self, Vanishing::Holds)
    }

    pub fn witness(&self) -> Option<&VanishWitness> {
        match self {
            Vanishing::Holds => None,
            Vanishing::Witness(w) => Some(w),
        }
    }
}

/// A lattice point at which the transform does not vanish.
#[derive(Clone, Debug)]
pub struct VanishWitness {
    /// Integer coordinates of the lattice point.
    pub v: Vec<BigInt>,
    /// The frequency ξ0 + generator·v.
    pub xi: RatVec,
    /// The nonzero transform value there.
    pub value: FourierValue,
}

struct VanishingSearch<'a> {
    set: &'a BoxSet,
    periods: Vec<Rat>,
    exclude_zero: bool,
    bound: u64,
}

struct Family {
    /// ξ(u) = base + dirs·u over u ∈ Z^k.
    base: RatVec,
    dirs: RatMatrix,
    /// v(u) = v_base + v_map·u recovers original lattice coordinates.
    v_base: Vec<BigInt>,
    v_map: RatMatrix,
    /// Coordinates on which ξ vanishes identically over the family.
    forced_zero: BTreeSet<usize>,
    /// Strata coordinates are explored in increasing order so each exact
    /// zero-pattern is handled exactly once.
    min_next: usize,
}

/// Decide whether the transform of `set` vanishes at every point of
/// ξ0 + lattice. With `exclude_zero` the single frequency ξ = 0 is skipped
/// (the Gabor convention that the zero index pair is not tested).
pub fn vanishes_on_affine_lattice(
    set: &BoxSet,
    xi0: &[Rat],
    lattice: &RatLattice,
    exclude_zero: bool,
) -> Result<Vanishing> {
    vanishes_on_affine_lattice_bounded(set, xi0, lattice, exclude_zero, DEFAULT_CONDUCTOR_BOUND)
}

pub fn vanishes_on_affine_lattice_bounded(
    set: &BoxSet,
    xi0: &[Rat],
    lattice: &RatLattice,
    exclude_zero: bool,
    bound: u64,
) -> Result<Vanishing> {
    let dim = set.dim();
    if lattice.dim() != dim {
        return Err(Error::DimMismatch(lattice.dim(), dim));
    }
    if xi0.len() != dim {
        return Err(Error::DimMismatch(xi0.len(), dim));
    }
    if set.is_empty() {
        return Ok(Vanishing::Holds);
    }
    // Per-coordinate periods of the branch-frozen numerator: the lcm of the
    // denominators of the j-th corner coordinates over all boxes.
    let periods: Vec<Rat> = (0..dim)
        .map(|j| {
            let coords: Vec<Rat> = set
                .boxes()
                .iter()
                .flat_map(|b| [b.lo()[j].clone(), b.hi()[j].clone()])
                .collect();
            Rat::int(denominator_lcm(&coords))
        })
        .collect();
    let search = VanishingSearch {
        set,
        periods,
        exclude_zero,
        bound,
    };
    let family = Family {
        base: xi0.to_vec(),
        dirs: lattice.generator().clone(),
        v_base: vec![BigInt::zero(); dim],
        v_map: RatMatrix::identity(dim),
        forced_zero: BTreeSet::new(),
        min_next: 0,
    };
    search.decide(family)
}

impl VanishingSearch<'_> {
    fn dim(&self) -> usize {
        self.set.dim()
    }

    fn decide(&self, mut family: Family) -> Result<Vanishing> {
        let dim = self.dim();
        let k = family.dirs.cols();
        // Coordinates identically zero on the family join the frozen branch.
        for j in 0..dim {
            if family.base[j].is_zero() && family.dirs.row(j).iter().all(Rat::is_zero) {
                family.forced_zero.insert(j);
            }
        }

        if family.forced_zero.len() == dim {
            // ξ ≡ 0 on the whole family.
            if self.exclude_zero {
                return Ok(Vanishing::Holds);
            }
            let value = ft_boxset_bounded(self.set, &family.base, self.bound)?;
            debug_assert!(!value.is_zero(), "a box union has positive measure");
            return Ok(Vanishing::Witness(VanishWitness {
                v: family.v_base.clone(),
                xi: family.base.clone(),
                value,
            }));
        }

        if k == 0 {
            let value = ft_boxset_bounded(self.set, &family.base, self.bound)?;
            if value.is_zero() {
                return Ok(Vanishing::Holds);
            }
            return Ok(Vanishing::Witness(VanishWitness {
                v: family.v_base.clone(),
                xi: family.base.clone(),
                value,
            }));
        }

        // Generic branch: the frozen numerator is invariant under
        // u → u + w whenever (dirs·w)_j ∈ period_j·Z for every live
        // coordinate, so only finitely many residue classes need checking.
        let live: Vec<usize> = (0..dim)
            .filter(|j| !family.forced_zero.contains(j))
            .collect();
        let mut scaled = RatMatrix::zero(live.len(), k);
        for (r, &j) in live.iter().enumerate() {
            for c in 0..k {
                scaled[(r, c)] = &family.dirs[(j, c)] / &self.periods[j];
            }
        }
        let class_lattice = integral_preimage(&scaled)?;
        let reps = coset_reps(&class_lattice)?;
        for rep in &reps {
            let xi_c = vec_add(&family.base, &family.dirs.mul_vec(rep));
            let numerator = branch_numerator(self.set, &xi_c, &family.forced_zero, self.bound)?;
            if !numerator.is_zero() {
                return Ok(Vanishing::Witness(self.locate_witness(
                    &family,
                    rep,
                    &class_lattice,
                )?));
            }
        }

        // Strata: freeze one more coordinate at a time, in increasing order.
        for &j in &live {
            if j < family.min_next {
                continue;
            }
            let row = family.dirs.row(j).to_vec();
            let target = -&family.base[j];
            let Some((u0, basis)) = solve_linear_diophantine(&row, &target) else {
                continue;
            };
            let u0_rat: RatVec = u0.iter().map(|x| Rat::int(x.clone())).collect();
            let base = vec_add(&family.base, &family.dirs.mul_vec(&u0_rat));
            let dirs = family.dirs.mul(&basis);
            let v_shift = family.v_map.mul_vec(&u0_rat);
            let v_base: Vec<BigInt> = family
                .v_base
                .iter()
                .zip(&v_shift)
                .map(|(a, b)| a + b.to_integer().expect("integer reparametrization"))
                .collect();
            let v_map = family.v_map.mul(&basis);
            let mut forced = family.forced_zero.clone();
            forced.insert(j);
            let sub = Family {
                base,
                dirs,
                v_base,
                v_map,
                forced_zero: forced,
                min_next: j + 1,
            };
            match self.decide(sub)? {
                Vanishing::Holds => {}
                witness => return Ok(witness),
            }
        }
        Ok(Vanishing::Holds)
    }

    /// A nonzero generic-branch class contains points whose live coordinates
    /// are all nonzero; walk outward in the class until one is found.
    fn locate_witness(
        &self,
        family: &Family,
        rep: &[Rat],
        class_lattice: &RatMatrix,
    ) -> Result<VanishWitness> {
        let k = class_lattice.rows();
        for radius in 0i64..=64 {
            let mut coeffs = vec![-radius; k];
            loop {
                if coeffs.iter().any(|c| c.abs() == radius) || radius == 0 {
                    let s: RatVec = coeffs.iter().map(|&c| Rat::int(c)).collect();
                    let u = vec_add(rep, &class_lattice.mul_vec(&s));
                    let xi = vec_add(&family.base, &family.dirs.mul_vec(&u));
                    let live_ok = (0..self.dim())
                        .filter(|j| !family.forced_zero.contains(j))
                        .all(|j| !xi[j].is_zero());
                    if live_ok {
                        let v: Vec<BigInt> = family
                            .v_base
                            .iter()
                            .zip(family.v_map.mul_vec(&u))
                            .map(|(a, b)| a + b.to_integer().expect("integer witness"))
                            .collect();
                        let value = ft_boxset_bounded(self.set, &xi, self.bound)?;
                        debug_assert!(!value.is_zero());
                        return Ok(VanishWitness { v, xi, value });
                    }
                }
                // Advance the box enumeration.
                let mut i = 0;
                loop {
                    if i == k {
                        break;
                    }
                    coeffs[i] += 1;
                    if coeffs[i] <= radius {
                        break;
                    }
                    coeffs[i] = -radius;
                    i += 1;
                }
                if i == k {
                    break;
                }
            }
        }
        Err(Error::TheoremViolation(
            "nonzero residue class without an all-live witness point",
        ))
    }
}

/// Multi-tiling level through the frequency-side criterion: the transform
/// vanishes on dual(Γ) ∖ {0} iff the set multi-tiles by Γ, and the level is
/// measure(K) divided by the covolume of Γ (the measure of one tile).
pub fn multitile_level_fourier(set: &BoxSet, lattice: &RatLattice) -> Result<Option<u64>> {
    if set.is_empty() {
        return Ok(None);
    }
    let dual = lattice.dual();
    match vanishes_on_affine_lattice(set, &vec![Rat::zero(); set.dim()], &dual, true)? {
        Vanishing::Witness(_) => Ok(None),
        Vanishing::Holds => {
            let cell = lattice.generator().det()?.abs();
            let level = set.measure() / cell;
            let n = level
                .to_integer()
                .map_err(|_| Error::NonIntegerLevel(level.to_string()))?;
            let n = n
                .to_u64()
                .ok_or(Error::NonIntegerLevel(level.to_string()))?;
            if n == 0 {
                return Err(Error::NonIntegerLevel(level.to_string()));
            }
            Ok(Some(n))
        }
    }
}
