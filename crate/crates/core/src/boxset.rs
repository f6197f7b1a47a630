//! Exact geometry of finite unions of half-open axis-aligned boxes with
//! rational corners: algebra, reduction modulo a lower-triangular lattice,
//! multi-tiling levels, class decompositions, packing shifts, and
//! fundamental-domain splittings.
//!
//! All boxes are half-open ∏[loᵢ, hiᵢ), so almost-everywhere statements about
//! tilings become exact set statements: two box unions agree a.e. iff they
//! are literally the same point set.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::RatLattice;
use crate::rat::{vec_add, vec_neg, vec_sub, Rat, RatVec};

/// Half-open axis-aligned box ∏ᵢ [loᵢ, hiᵢ) with rational corners.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct AxisBox {
    lo: RatVec,
    hi: RatVec,
}

impl AxisBox {
    pub fn new(lo: RatVec, hi: RatVec) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimMismatch(lo.len(), hi.len()));
        }
        if lo.iter().zip(&hi).any(|(l, h)| l >= h) {
            return Err(Error::EmptyBox);
        }
        Ok(AxisBox { lo, hi })
    }

    /// 1D interval [lo, hi).
    pub fn interval(lo: Rat, hi: Rat) -> Result<Self> {
        Self::new(vec![lo], vec![hi])
    }

    pub fn unit_cube(dim: usize) -> Self {
        AxisBox {
            lo: vec![Rat::zero(); dim],
            hi: vec![Rat::one(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[Rat] {
        &self.lo
    }

    pub fn hi(&self) -> &[Rat] {
        &self.hi
    }

    pub fn side(&self, j: usize) -> Rat {
        &self.hi[j] - &self.lo[j]
    }

    pub fn volume(&self) -> Rat {
        (0..self.dim()).map(|j| self.side(j)).product_rat()
    }

    pub fn translate(&self, v: &[Rat]) -> AxisBox {
        AxisBox {
            lo: vec_add(&self.lo, v),
            hi: vec_add(&self.hi, v),
        }
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.lo.iter().zip(x).all(|(l, xi)| l <= xi) && x.iter().zip(&self.hi).all(|(xi, h)| xi < h)
    }

    pub fn intersect(&self, other: &AxisBox) -> Option<AxisBox> {
        let lo: RatVec = self
            .lo
            .iter()
            .zip(&other.lo)
            .map(|(a, b)| a.max(b).clone())
            .collect();
        let hi: RatVec = self
            .hi
            .iter()
            .zip(&other.hi)
            .map(|(a, b)| a.min(b).clone())
            .collect();
        AxisBox::new(lo, hi).ok()
    }
}

trait ProductRat {
    fn product_rat(self) -> Rat;
}

impl<I: Iterator<Item = Rat>> ProductRat for I {
    fn product_rat(self) -> Rat {
        self.fold(Rat::one(), |a, b| a * b)
    }
}

/// Finite disjoint union of half-open boxes. The constructor normalizes any
/// overlapping input into pairwise-disjoint boxes with the same indicator.
///
/// Serializes as `{"dim": d, "boxes": [[["0","2"],["0","1"]], ...]}` with one
/// `[lo, hi]` string pair per coordinate.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "BoxSetRepr", into = "BoxSetRepr")]
pub struct BoxSet {
    dim: usize,
    boxes: Vec<AxisBox>,
}

#[derive(Serialize, Deserialize)]
struct BoxSetRepr {
    dim: usize,
    boxes: Vec<Vec<[Rat; 2]>>,
}

impl From<BoxSet> for BoxSetRepr {
    fn from(k: BoxSet) -> Self {
        BoxSetRepr {
            dim: k.dim,
            boxes: k
                .boxes
                .into_iter()
                .map(|b| {
                    b.lo.iter()
                        .zip(&b.hi)
                        .map(|(l, h)| [l.clone(), h.clone()])
                        .collect()
                })
                .collect(),
        }
    }
}

impl TryFrom<BoxSetRepr> for BoxSet {
    type Error = Error;
    fn try_from(r: BoxSetRepr) -> Result<Self> {
        let boxes = r
            .boxes
            .into_iter()
            .map(|b| {
                if b.len() != r.dim {
                    return Err(Error::DimMismatch(b.len(), r.dim));
                }
                let (lo, hi) = b.into_iter().map(|[l, h]| (l, h)).unzip();
                AxisBox::new(lo, hi)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BoxSet::from_boxes(r.dim, boxes))
    }
}

impl BoxSet {
    pub fn empty(dim: usize) -> Self {
        BoxSet {
            dim,
            boxes: Vec::new(),
        }
    }

    /// Normalize a list of possibly-overlapping boxes into a disjoint union.
    pub fn from_boxes(dim: usize, boxes: Vec<AxisBox>) -> Self {
        assert!(
            boxes.iter().all(|b| b.dim() == dim),
            "box dimension mismatch"
        );
        let cells = overlay(&boxes).into_iter().map(|(cell, _)| cell).collect();
        BoxSet {
            dim,
            boxes: merge_boxes(cells),
        }
    }

    pub fn from_box(b: AxisBox) -> Self {
        let dim = b.dim();
        BoxSet {
            dim,
            boxes: vec![b],
        }
    }

    pub fn unit_cube(dim: usize) -> Self {
        Self::from_box(AxisBox::unit_cube(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boxes(&self) -> &[AxisBox] {
        &self.boxes
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn measure(&self) -> Rat {
        self.boxes.iter().map(AxisBox::volume).sum()
    }

    pub fn translate(&self, v: &[Rat]) -> BoxSet {
        assert_eq!(v.len(), self.dim);
        BoxSet {
            dim: self.dim,
            boxes: self.boxes.iter().map(|b| b.translate(v)).collect(),
        }
    }

    pub fn intersect(&self, other: &BoxSet) -> Result<BoxSet> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        let mut out = Vec::new();
        for a in &self.boxes {
            for b in &other.boxes {
                if let Some(c) = a.intersect(b) {
                    out.push(c);
                }
            }
        }
        Ok(BoxSet {
            dim: self.dim,
            boxes: merge_boxes(out),
        })
    }

    pub fn union(&self, other: &BoxSet) -> Result<BoxSet> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        let mut boxes = self.boxes.clone();
        boxes.extend(other.boxes.iter().cloned());
        Ok(BoxSet::from_boxes(self.dim, boxes))
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.boxes.iter().any(|b| b.contains(x))
    }

    /// Exact equality as point sets (equivalently, a.e. equality).
    pub fn indicator_eq(&self, other: &BoxSet) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let mut all: Vec<AxisBox> = self.boxes.clone();
        all.extend(other.boxes.iter().cloned());
        let n = self.boxes.len();
        for (cell, owners) in overlay(&all) {
            let in_self = owners.iter().any(|&i| i < n);
            let in_other = owners.iter().any(|&i| i >= n);
            if in_self != in_other {
                let _ = cell;
                return false;
            }
        }
        true
    }

    /// Smallest box containing the set, or None when empty.
    pub fn bounding_box(&self) -> Option<AxisBox> {
        let first = self.boxes.first()?;
        let mut lo = first.lo.clone();
        let mut hi = first.hi.clone();
        for b in &self.boxes[1..] {
            for j in 0..self.dim {
                if b.lo[j] < lo[j] {
                    lo[j] = b.lo[j].clone();
                }
                if b.hi[j] > hi[j] {
                    hi[j] = b.hi[j].clone();
                }
            }
        }
        Some(AxisBox { lo, hi })
    }
}

/// Refine a list of boxes against the grid of all their corner coordinates.
/// Returns the covered grid cells with the indices of the input boxes
/// covering each cell. Exact and output-sensitive; no floating point.
fn overlay(boxes: &[AxisBox]) -> Vec<(AxisBox, Vec<usize>)> {
    if boxes.is_empty() {
        return Vec::new();
    }
    let dim = boxes[0].dim();
    let mut cuts: Vec<Vec<Rat>> = vec![Vec::new(); dim];
    for b in boxes {
        for j in 0..dim {
            cuts[j].push(b.lo[j].clone());
            cuts[j].push(b.hi[j].clone());
        }
    }
    for c in &mut cuts {
        c.sort();
        c.dedup();
    }
    let mut cells = Vec::new();
    let mut index = vec![0usize; dim];
    'outer: loop {
        // Current candidate cell.
        let mut lo = Vec::with_capacity(dim);
        let mut hi = Vec::with_capacity(dim);
        let mut valid = true;
        for j in 0..dim {
            if index[j] + 1 >= cuts[j].len() {
                valid = false;
                break;
            }
            lo.push(cuts[j][index[j]].clone());
            hi.push(cuts[j][index[j] + 1].clone());
        }
        if valid {
            let owners: Vec<usize> = boxes
                .iter()
                .enumerate()
                .filter(|(_, b)| (0..dim).all(|j| b.lo[j] <= lo[j] && hi[j] <= b.hi[j]))
                .map(|(i, _)| i)
                .collect();
            if !owners.is_empty() {
                cells.push((AxisBox { lo, hi }, owners));
            }
        }
        // Advance the mixed-radix cell index.
        for j in 0..dim {
            index[j] += 1;
            if index[j] + 1 < cuts[j].len() {
                continue 'outer;
            }
            index[j] = 0;
        }
        break;
    }
    cells
}

/// Greedily merge adjacent boxes that agree in all coordinates but one.
fn merge_boxes(mut boxes: Vec<AxisBox>) -> Vec<AxisBox> {
    boxes.sort();
    loop {
        let mut merged = false;
        'scan: for i in 0..boxes.len() {
            for j in 0..boxes.len() {
                if i == j {
                    continue;
                }
                let dim = boxes[i].dim();
                let mut differ = None;
                for k in 0..dim {
                    if boxes[i].lo[k] != boxes[j].lo[k] || boxes[i].hi[k] != boxes[j].hi[k] {
                        if differ.is_some() {
                            differ = None;
                            break;
                        }
                        differ = Some(k);
                    }
                }
                if let Some(k) = differ {
                    if boxes[i].hi[k] == boxes[j].lo[k] {
                        let mut m = boxes[i].clone();
                        m.hi[k] = boxes[j].hi[k].clone();
                        let hi = i.max(j);
                        let lo = i.min(j);
                        boxes.remove(hi);
                        boxes.remove(lo);
                        boxes.push(m);
                        boxes.sort();
                        merged = true;
                        break 'scan;
                    }
                }
            }
        }
        if !merged {
            return boxes;
        }
    }
}

/// One piece of a reduction modulo a lattice: `reduced` lies inside the box
/// fundamental domain and `reduced + shift` is the original sub-box of the
/// input set, with `shift` a lattice vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedPiece {
    pub reduced: AxisBox,
    pub shift: RatVec,
}

/// The box fundamental domain ∏[0, g_ii) of a lower-triangular generator.
/// Valid for any lower-triangular lattice by the shear-invariance argument:
/// reducing coordinates top to bottom lands every point in the box exactly
/// once.
pub fn box_fundamental_domain(lattice: &RatLattice) -> Result<AxisBox> {
    let g = lattice.generator();
    if !g.is_lower_triangular() {
        return Err(Error::NotLowerTriangular);
    }
    let dim = lattice.dim();
    let hi: RatVec = (0..dim).map(|i| g[(i, i)].abs()).collect();
    AxisBox::new(vec![Rat::zero(); dim], hi)
}

/// Cut `set` along the lattice and translate every piece into the box
/// fundamental domain F = ∏[0, g_ii). The pieces `reduced + shift` partition
/// the input exactly and each `reduced` box lies inside F.
pub fn reduce_mod(set: &BoxSet, lattice: &RatLattice) -> Result<Vec<ReducedPiece>> {
    let g = lattice.generator();
    if !g.is_lower_triangular() {
        return Err(Error::NotLowerTriangular);
    }
    if set.dim() != lattice.dim() {
        return Err(Error::DimMismatch(set.dim(), lattice.dim()));
    }
    let dim = set.dim();
    for i in 0..dim {
        if !g[(i, i)].is_positive() {
            return Err(Error::NotLowerTriangular);
        }
    }
    let mut pieces: Vec<(AxisBox, RatVec)> = set
        .boxes()
        .iter()
        .map(|b| (b.clone(), vec![Rat::zero(); dim]))
        .collect();
    for j in 0..dim {
        let gjj = g[(j, j)].clone();
        let column = g.col(j);
        let mut next = Vec::new();
        for (b, acc) in pieces {
            let k_lo = (&b.lo[j] / &gjj).floor();
            let k_hi = (&b.hi[j] / &gjj).ceil();
            let mut k = k_lo;
            while k < k_hi {
                let cell_lo = Rat::int(k.clone()) * gjj.clone();
                let cell_hi = Rat::int(k.clone() + 1) * gjj.clone();
                let lo_j = b.lo[j].clone().max(cell_lo);
                let hi_j = b.hi[j].clone().min(cell_hi);
                if lo_j < hi_j {
                    let mut piece = b.clone();
                    piece.lo[j] = lo_j;
                    piece.hi[j] = hi_j;
                    // Subtract k·column; only rows ≥ j change.
                    let step: RatVec = column
                        .iter()
                        .map(|c| Rat::int(k.clone()) * c.clone())
                        .collect();
                    let piece = piece.translate(&vec_neg(&step));
                    next.push((piece, vec_add(&acc, &step)));
                }
                k += 1;
            }
        }
        pieces = next;
    }
    Ok(pieces
        .into_iter()
        .map(|(reduced, shift)| ReducedPiece { reduced, shift })
        .collect())
}

/// Multiplicity profile of `set` over the box fundamental domain of the
/// (canonicalized) lattice: for every grid cell of the reduced pieces, how
/// many lattice translates of `set` cover it.
fn multiplicity_cells(set: &BoxSet, lattice: &RatLattice) -> Result<Vec<(AxisBox, Vec<usize>)>> {
    let canon = lattice.canonicalize();
    let pieces = reduce_mod(set, &canon)?;
    let fd = box_fundamental_domain(&canon)?;
    let mut boxes: Vec<AxisBox> = pieces.into_iter().map(|p| p.reduced).collect();
    // Appending F itself makes uncovered regions show up as cells owned only
    // by the sentinel index.
    let sentinel = boxes.len();
    boxes.push(fd);
    Ok(overlay(&boxes)
        .into_iter()
        .map(|(cell, owners)| {
            let count = owners.iter().filter(|&&i| i != sentinel).count();
            (cell, vec![count])
        })
        .collect())
}

/// Exact multi-tiling level of `set` under the lattice: Some(N) iff every
/// point of the fundamental domain is covered by exactly N lattice
/// translates, None otherwise.
pub fn multitile_level_direct(set: &BoxSet, lattice: &RatLattice) -> Result<Option<u64>> {
    if set.is_empty() {
        return Ok(None);
    }
    let cells = multiplicity_cells(set, lattice)?;
    let mut level: Option<usize> = None;
    for (_, counts) in &cells {
        let c = counts[0];
        match level {
            None => level = Some(c),
            Some(l) if l != c => return Ok(None),
            _ => {}
        }
    }
    Ok(level.filter(|&l| l > 0).map(|l| l as u64))
}

/// True iff lattice translates of `set` cover every point at most once.
pub fn is_packing(set: &BoxSet, lattice: &RatLattice) -> Result<bool> {
    if set.is_empty() {
        return Ok(true);
    }
    let cells = multiplicity_cells(set, lattice)?;
    Ok(cells.iter().all(|(_, counts)| counts[0] <= 1))
}

/// One class of the fundamental-domain decomposition: the sub-region of F on
/// which the covering lattice vectors are exactly `shifts`.
#[derive(Clone, Debug)]
pub struct TileClass {
    /// Lattice vectors λ with x + λ ∈ K for every x in `region`; sorted by
    /// their integer coefficient vectors.
    pub shifts: Vec<RatVec>,
    /// Subset of the box fundamental domain.
    pub region: BoxSet,
}

/// Decompose a multi-tile of level N into classes by the covering shift set
/// K(x) = {λ : x + λ ∈ K}. The regions partition the fundamental domain, each
/// class has exactly N shifts, and ⋃ (region + shifts) = K.
pub fn ks_decomposition(set: &BoxSet, lattice: &RatLattice) -> Result<Vec<TileClass>> {
    let level = multitile_level_direct(set, lattice)?.ok_or(Error::NotAMultiTile)?;
    let canon = lattice.canonicalize();
    let pieces = reduce_mod(set, &canon)?;
    let boxes: Vec<AxisBox> = pieces.iter().map(|p| p.reduced.clone()).collect();
    let inv = canon.generator().inverse()?;
    // Group cells by the set of covering shifts, keyed by integer coefficient
    // vectors for a deterministic order.
    let mut classes: BTreeMap<Vec<BigInt>, (Vec<RatVec>, Vec<AxisBox>)> = BTreeMap::new();
    for (cell, owners) in overlay(&boxes) {
        let mut keyed: Vec<(Vec<BigInt>, RatVec)> = owners
            .iter()
            .map(|&i| {
                let shift = pieces[i].shift.clone();
                let coeff: Vec<BigInt> = inv
                    .mul_vec(&shift)
                    .iter()
                    .map(|c| c.to_integer().expect("shift is a lattice vector"))
                    .collect();
                (coeff, shift)
            })
            .collect();
        keyed.sort();
        keyed.dedup_by(|a, b| a.0 == b.0);
        let key: Vec<BigInt> = keyed.iter().flat_map(|(c, _)| c.clone()).collect();
        let entry = classes
            .entry(key)
            .or_insert_with(|| (keyed.iter().map(|(_, s)| s.clone()).collect(), Vec::new()));
        entry.1.push(cell);
    }
    let out: Vec<TileClass> = classes
        .into_values()
        .map(|(shifts, cells)| TileClass {
            shifts,
            region: BoxSet::from_boxes(set.dim(), cells),
        })
        .collect();
    for class in &out {
        if class.shifts.len() != level as usize {
            return Err(Error::TheoremViolation(
                "class size differs from the multi-tile level",
            ));
        }
    }
    Ok(out)
}

/// The constructive packing shift for a bounded multi-tile of level N > 1:
/// the lexicographic maximum over classes of (last − first) covering shift,
/// ordered by integer coefficients. The intersection K ∩ (K + m) is nonempty,
/// consists of distinct residues, and packs by the lattice.
pub fn packing_shift(set: &BoxSet, lattice: &RatLattice) -> Result<RatVec> {
    let level = multitile_level_direct(set, lattice)?.ok_or(Error::NotAMultiTile)?;
    if level <= 1 {
        return Err(Error::LevelOne);
    }
    let canon = lattice.canonicalize();
    let inv = canon.generator().inverse()?;
    let classes = ks_decomposition(set, lattice)?;
    let mut best: Option<(Vec<BigInt>, RatVec)> = None;
    for class in &classes {
        let first = class.shifts.first().expect("classes are nonempty");
        let last = class.shifts.last().expect("classes are nonempty");
        let m = vec_sub(last, first);
        let coeff: Vec<BigInt> = inv
            .mul_vec(&m)
            .iter()
            .map(|c| c.to_integer().expect("lattice vector"))
            .collect();
        match &best {
            None => best = Some((coeff, m)),
            Some((c, _)) if coeff > *c => best = Some((coeff, m)),
            _ => {}
        }
    }
    Ok(best.expect("level > 1 implies at least one class").1)
}

/// Split a multi-tile of level N into N pieces, each an exact fundamental
/// domain of the lattice: the j-th piece collects region + (j-th smallest
/// shift) over all classes.
pub fn fd_decomposition(set: &BoxSet, lattice: &RatLattice) -> Result<Vec<BoxSet>> {
    let level = multitile_level_direct(set, lattice)?.ok_or(Error::NotAMultiTile)?;
    let classes = ks_decomposition(set, lattice)?;
    let mut out = Vec::new();
    for j in 0..level as usize {
        let mut piece = BoxSet::empty(set.dim());
        for class in &classes {
            piece = piece.union(&class.region.translate(&class.shifts[j]))?;
        }
        out.push(piece);
    }
    Ok(out)
}

/// The 1D union ⋃_k (k + I_{|k|}) with I_0 = [0,1) and
/// I_n = [1 − 2^{1−n}, 1 − 2^{−n}), truncated to k ∈ [kmin, kmax]. The full
/// set (window = None) is unbounded and rejected: its packing behaviour is
/// exactly what bounded-set arguments exclude.
pub fn dyadic_tail_comb(window: Option<(i64, i64)>) -> Result<BoxSet> {
    let (kmin, kmax) = window.ok_or(Error::UnboundedSet)?;
    if kmin > kmax {
        return Err(Error::EmptyBox);
    }
    let mut boxes = Vec::new();
    for k in kmin..=kmax {
        let n = k.unsigned_abs() as u32;
        let (lo, hi) = if n == 0 {
            (Rat::zero(), Rat::one())
        } else {
            (
                Rat::one() - Rat::new(2, BigInt::from(2).pow(n)),
                Rat::one() - Rat::new(1, BigInt::from(2).pow(n)),
            )
        };
        boxes.push(AxisBox::interval(lo + Rat::int(k), hi + Rat::int(k))?);
    }
    Ok(BoxSet::from_boxes(1, boxes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::RatMatrix;
    use crate::rat::{rat, vec_from};

    fn boxset_2d(corners: &[[i64; 4]]) -> BoxSet {
        let boxes = corners
            .iter()
            .map(|&[a, b, c, d]| {
                AxisBox::new(
                    vec![Rat::int(a), Rat::int(b)],
                    vec![Rat::int(c), Rat::int(d)],
                )
                .unwrap()
            })
            .collect();
        BoxSet::from_boxes(2, boxes)
    }

    fn rect(ax: Rat, ay: Rat, bx: Rat, by: Rat) -> BoxSet {
        BoxSet::from_box(AxisBox::new(vec![ax, ay], vec![bx, by]).unwrap())
    }

    #[test]
    fn algebra_examples() {
        let k = boxset_2d(&[[0, 0, 2, 1]]);
        assert_eq!(k.measure(), rat(2, 1));
        let shifted = k.translate(&vec_from([1, 0]));
        let inter = k.intersect(&shifted).unwrap();
        assert!(inter.indicator_eq(&boxset_2d(&[[1, 0, 2, 1]])));
    }

    #[test]
    fn normalize_overlapping() {
        let a = AxisBox::new(vec_from([0, 0]), vec_from([2, 2])).unwrap();
        let b = AxisBox::new(vec_from([1, 1]), vec_from([3, 3])).unwrap();
        let k = BoxSet::from_boxes(2, vec![a.clone(), b.clone()]);
        assert_eq!(k.measure(), rat(7, 1));
        // Disjointness of the normalized boxes.
        for (i, x) in k.boxes().iter().enumerate() {
            for y in &k.boxes()[..i] {
                assert!(x.intersect(y).is_none());
            }
        }
        assert!(k.contains(&vec_from([1, 1])));
        assert!(!k.contains(&vec_from([3, 3])));
    }

    #[test]
    fn tail_comb_pieces() {
        let k = dyadic_tail_comb(Some((-3, 3))).unwrap();
        // K ∩ (K+1) = [0,1/2) ∪ [1,3/2).
        let shifted = k.translate(&[Rat::one()]);
        let inter = k.intersect(&shifted).unwrap();
        let expected = BoxSet::from_boxes(
            1,
            vec![
                AxisBox::interval(rat(0, 1), rat(1, 2)).unwrap(),
                AxisBox::interval(rat(1, 1), rat(3, 2)).unwrap(),
            ],
        );
        assert!(inter.indicator_eq(&expected));

        // K ∩ (K+2) = [1/2,3/4) ∪ [1,3/2) ∪ [5/2,11/4).
        let inter2 = k.intersect(&k.translate(&[rat(2, 1)])).unwrap();
        let expected2 = BoxSet::from_boxes(
            1,
            vec![
                AxisBox::interval(rat(1, 2), rat(3, 4)).unwrap(),
                AxisBox::interval(rat(1, 1), rat(3, 2)).unwrap(),
                AxisBox::interval(rat(5, 2), rat(11, 4)).unwrap(),
            ],
        );
        assert!(inter2.indicator_eq(&expected2));

        assert_eq!(dyadic_tail_comb(None), Err(Error::UnboundedSet));
    }

    #[test]
    fn reduce_mod_standard() {
        let k = BoxSet::unit_cube(2);
        let pieces = reduce_mod(&k, &RatLattice::standard(2)).unwrap();
        assert_eq!(pieces.len(), 1);
        assert!(crate::rat::vec_is_zero(&pieces[0].shift));

        let k = boxset_2d(&[[0, 0, 2, 1]]);
        let pieces = reduce_mod(&k, &RatLattice::standard(2)).unwrap();
        assert_eq!(pieces.len(), 2);
        let total: Rat = pieces.iter().map(|p| p.reduced.volume()).sum();
        assert_eq!(total, k.measure());
        for p in &pieces {
            assert!(p.reduced.lo().iter().all(|l| l >= &Rat::zero()));
            assert!(p.reduced.hi().iter().all(|h| h <= &Rat::one()));
        }
    }

    #[test]
    fn reduce_mod_sheared() {
        // Lower-triangular generator with a shear: measure is preserved and
        // reassembly is exact.
        let g = RatMatrix::from_rows(vec![vec![rat(2, 1), rat(0, 1)], vec![rat(5, 3), rat(1, 2)]]);
        let l = RatLattice::new(g).unwrap();
        let k = boxset_2d(&[[0, 0, 2, 1]]);
        let pieces = reduce_mod(&k, &l).unwrap();
        let total: Rat = pieces.iter().map(|p| p.reduced.volume()).sum();
        assert_eq!(total, rat(2, 1));
        // Translate back and compare indicators.
        let reassembled = BoxSet::from_boxes(
            2,
            pieces
                .iter()
                .map(|p| p.reduced.translate(&p.shift))
                .collect(),
        );
        assert!(reassembled.indicator_eq(&k));
        let fd = box_fundamental_domain(&l).unwrap();
        for p in &pieces {
            assert!(fd.intersect(&p.reduced).map(|c| c.volume()) == Some(p.reduced.volume()));
            assert!(l.contains(&p.shift));
        }
    }

    #[test]
    fn reduce_mod_rejects_non_lower_triangular() {
        let g = RatMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        let l = RatLattice::new(g).unwrap();
        assert_eq!(
            reduce_mod(&BoxSet::unit_cube(2), &l).err(),
            Some(Error::NotLowerTriangular)
        );
    }

    #[test]
    fn multitile_levels() {
        let z2 = RatLattice::standard(2);
        assert_eq!(
            multitile_level_direct(&boxset_2d(&[[0, 0, 2, 1]]), &z2).unwrap(),
            Some(2)
        );
        assert_eq!(
            multitile_level_direct(&boxset_2d(&[[0, 0, 2, 2]]), &z2).unwrap(),
            Some(4)
        );
        // B transposed-inverse lattice of diag(1/2, 2) is diag(2, 1/2).
        let b_it = RatLattice::from_diagonal(&[rat(2, 1), rat(1, 2)]).unwrap();
        assert_eq!(
            multitile_level_direct(&boxset_2d(&[[0, 0, 2, 1]]), &b_it).unwrap(),
            Some(2)
        );
        // [0,3/2)×[0,1) is not a multi-tile of Z².
        let k = rect(rat(0, 1), rat(0, 1), rat(3, 2), rat(1, 1));
        assert_eq!(multitile_level_direct(&k, &z2).unwrap(), None);
    }

    #[test]
    fn packing_examples() {
        let z2 = RatLattice::standard(2);
        assert!(is_packing(&BoxSet::unit_cube(2), &z2).unwrap());
        assert!(is_packing(&boxset_2d(&[[1, 0, 2, 1]]), &z2).unwrap());
        let z1 = RatLattice::standard(1);
        let k = BoxSet::from_boxes(
            1,
            vec![
                AxisBox::interval(rat(0, 1), rat(1, 2)).unwrap(),
                AxisBox::interval(rat(1, 1), rat(3, 2)).unwrap(),
            ],
        );
        assert!(!is_packing(&k, &z1).unwrap());
    }

    #[test]
    fn ks_decomposition_examples() {
        let z2 = RatLattice::standard(2);
        let k = boxset_2d(&[[0, 0, 2, 1]]);
        let classes = ks_decomposition(&k, &z2).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].shifts, vec![vec_from([0, 0]), vec_from([1, 0])]);
        assert!(classes[0].region.indicator_eq(&BoxSet::unit_cube(2)));

        let classes = ks_decomposition(&BoxSet::unit_cube(2), &z2).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].shifts, vec![vec_from([0, 0])]);

        // 1D: K = [0,1) ∪ [3/2,5/2) splits into {0,2} on [0,1/2) and {0,1}
        // on [1/2,1).
        let k = BoxSet::from_boxes(
            1,
            vec![
                AxisBox::interval(rat(0, 1), rat(1, 1)).unwrap(),
                AxisBox::interval(rat(3, 2), rat(5, 2)).unwrap(),
            ],
        );
        let classes = ks_decomposition(&k, &RatLattice::standard(1)).unwrap();
        assert_eq!(classes.len(), 2);
        let by_first: BTreeMap<String, (Vec<RatVec>, BoxSet)> = classes
            .into_iter()
            .map(|c| {
                (
                    format!("{}", c.region.boxes()[0].lo()[0]),
                    (c.shifts, c.region),
                )
            })
            .collect();
        let (shifts, region) = &by_first["0"];
        assert_eq!(shifts, &vec![vec![rat(0, 1)], vec![rat(2, 1)]]);
        assert!(region.indicator_eq(&BoxSet::from_box(
            AxisBox::interval(rat(0, 1), rat(1, 2)).unwrap()
        )));
        let (shifts, region) = &by_first["1/2"];
        assert_eq!(shifts, &vec![vec![rat(0, 1)], vec![rat(1, 1)]]);
        assert!(region.indicator_eq(&BoxSet::from_box(
            AxisBox::interval(rat(1, 2), rat(1, 1)).unwrap()
        )));

        // Brute-force oracle: K(x) at rational sample points.
        let k2 = boxset_2d(&[[0, 0, 2, 1]]);
        let classes = ks_decomposition(&k2, &z2).unwrap();
        for class in &classes {
            for b in class.region.boxes() {
                let mid: RatVec = b
                    .lo()
                    .iter()
                    .zip(b.hi())
                    .map(|(l, h)| (l + h) * rat(1, 2))
                    .collect();
                let mut cover: Vec<RatVec> = Vec::new();
                for m in -4..=4i64 {
                    for n in -4..=4i64 {
                        let t = vec_from([m, n]);
                        if k2.contains(&vec_add(&mid, &t)) {
                            cover.push(t);
                        }
                    }
                }
                assert_eq!(cover.len(), class.shifts.len());
                for s in &class.shifts {
                    assert!(cover.contains(s));
                }
            }
        }
    }

    #[test]
    fn packing_shift_examples() {
        let z2 = RatLattice::standard(2);
        let k = boxset_2d(&[[0, 0, 2, 1]]);
        let m = packing_shift(&k, &z2).unwrap();
        assert_eq!(m, vec_from([1, 0]));
        let inter = k.intersect(&k.translate(&m)).unwrap();
        assert!(inter.indicator_eq(&boxset_2d(&[[1, 0, 2, 1]])));
        assert!(is_packing(&inter, &z2).unwrap());

        let k = boxset_2d(&[[0, 0, 2, 2]]);
        let m = packing_shift(&k, &z2).unwrap();
        assert_eq!(m, vec_from([1, 1]));
        let inter = k.intersect(&k.translate(&m)).unwrap();
        assert!(inter.indicator_eq(&boxset_2d(&[[1, 1, 2, 2]])));
        assert!(is_packing(&inter, &z2).unwrap());

        let k = BoxSet::from_boxes(
            1,
            vec![
                AxisBox::interval(rat(0, 1), rat(1, 1)).unwrap(),
                AxisBox::interval(rat(3, 2), rat(5, 2)).unwrap(),
            ],
        );
        let m = packing_shift(&k, &RatLattice::standard(1)).unwrap();
        assert_eq!(m, vec![rat(2, 1)]);
        let inter = k.intersect(&k.translate(&m)).unwrap();
        assert!(is_packing(&inter, &RatLattice::standard(1)).unwrap());
        // Distinct residues: the intersection injects into [0,1).
        let pieces = reduce_mod(&inter, &RatLattice::standard(1)).unwrap();
        let total: Rat = pieces.iter().map(|p| p.reduced.volume()).sum();
        assert_eq!(total, inter.measure());

        assert_eq!(
            packing_shift(&BoxSet::unit_cube(2), &z2).err(),
            Some(Error::LevelOne)
        );
    }

    #[test]
    fn fd_decomposition_examples() {
        let z2 = RatLattice::standard(2);
        let k = boxset_2d(&[[0, 0, 2, 1]]);
        let pieces = fd_decomposition(&k, &z2).unwrap();
        assert_eq!(pieces.len(), 2);
        let mut union = BoxSet::empty(2);
        for p in &pieces {
            assert_eq!(multitile_level_direct(p, &z2).unwrap(), Some(1));
            assert_eq!(p.measure(), rat(1, 1));
            union = union.union(p).unwrap();
        }
        assert!(union.indicator_eq(&k));

        // Same window against diag(2, 1/2): two stacked copies of
        // [0,2)×[0,1/2).
        let b_it = RatLattice::from_diagonal(&[rat(2, 1), rat(1, 2)]).unwrap();
        let pieces = fd_decomposition(&k, &b_it).unwrap();
        assert_eq!(pieces.len(), 2);
        for p in &pieces {
            assert_eq!(multitile_level_direct(p, &b_it).unwrap(), Some(1));
        }
        assert!(pieces[0].indicator_eq(&rect(rat(0, 1), rat(0, 1), rat(2, 1), rat(1, 2))));
        assert!(pieces[1].indicator_eq(&rect(rat(0, 1), rat(1, 2), rat(2, 1), rat(1, 1))));

        let single = fd_decomposition(&BoxSet::unit_cube(2), &z2).unwrap();
        assert_eq!(single.len(), 1);
        assert!(single[0].indicator_eq(&BoxSet::unit_cube(2)));

        assert_eq!(
            fd_decomposition(&rect(rat(0, 1), rat(0, 1), rat(3, 2), rat(1, 1)), &z2).err(),
            Some(Error::NotAMultiTile)
        );
    }

    #[test]
    fn json_round_trip() {
        let k = boxset_2d(&[[0, 0, 2, 1], [3, 0, 4, 2]]);
        let s = serde_json::to_string(&k).unwrap();
        let back: BoxSet = serde_json::from_str(&s).unwrap();
        assert!(k.indicator_eq(&back));
    }
}
