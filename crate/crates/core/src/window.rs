//! Constructive window production for upper-triangular time-frequency
//! lattices [[a,d],[0,a⁻ᵗ]](Z^{2n}) with a⁻¹d symmetric rational: converts
//! the lattice into lower-block form through the kernel-lattice machinery and
//! takes the window as a box fundamental domain of a·e⁻ᵗ(Z^n), then certifies
//! orthonormality through the verdict engine.

use serde::{Deserialize, Serialize};

use crate::boxset::{box_fundamental_domain, BoxSet};
use crate::error::{Error, Result};
use crate::gabor::{gabor_check, structure_report, GaborSpec, Verdict};
use crate::lattice::{ut_to_lt, RatLattice};
use crate::matrix::RatMatrix;

/// A solved instance: the integer conversion data (e, x), the equivalent
/// lower-block-triangular lattice, and a concrete box window.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WindowConstruction {
    pub a: RatMatrix,
    pub d: RatMatrix,
    /// Generator of {k ∈ Z^n : a⁻¹d·k ∈ Z^n}.
    pub e: RatMatrix,
    /// Integer shift block of the converted lattice.
    pub x: RatMatrix,
    /// [[a·e⁻ᵗ, 0], [a⁻ᵗ·x, a⁻ᵗ·e]](Z^{2n}), equal to the input lattice.
    pub equivalent_lattice: RatLattice,
    /// Box fundamental domain of a·e⁻ᵗ(Z^n).
    pub window: BoxSet,
}

impl WindowConstruction {
    /// The input upper-triangular lattice [[a, d], [0, a⁻ᵗ]](Z^{2n}).
    pub fn input_lattice(&self) -> Result<RatLattice> {
        let n = self.a.rows();
        let gen = RatMatrix::from_blocks(
            &self.a,
            &self.d,
            &RatMatrix::zero(n, n),
            &self.a.inverse_transpose()?,
        );
        RatLattice::new(gen)
    }

    pub fn spec(&self) -> Result<GaborSpec> {
        GaborSpec::new(self.window.clone(), self.equivalent_lattice.clone())
    }
}

/// Build a window for the upper-triangular lattice with time block `a` and
/// shift block `d` (frequency block fixed to a⁻ᵗ, the density-1 hypothesis).
///
/// e generates the kernel lattice of a⁻¹d, the conversion yields the equal
/// lattice [[a·e⁻ᵗ, 0], [a⁻ᵗx, a⁻ᵗe]](Z^{2n}), and any fundamental domain of
/// a·e⁻ᵗ(Z^n) is a window; the canonical box domain is used.
pub fn construct_window(a: &RatMatrix, d: &RatMatrix) -> Result<WindowConstruction> {
    if !a.is_square() || !d.is_square() || a.rows() != d.rows() {
        return Err(Error::NotSquare);
    }
    if a.det()?.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let a_inv = a.inverse()?;
    let shear = a_inv.mul(d);
    if !shear.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = a.rows();
    let conv = ut_to_lt(&shear)?;
    let e = conv.e.clone();
    let x = conv.x.clone();
    let a_it = a.inverse_transpose()?;
    let time_block = a.mul(&e.inverse_transpose()?);
    let gen = RatMatrix::from_blocks(
        &time_block,
        &RatMatrix::zero(n, n),
        &a_it.mul(&x),
        &a_it.mul(&e),
    );
    let equivalent_lattice = RatLattice::new(gen)?;
    let time_lattice = RatLattice::new(time_block)?.canonicalize();
    let window = BoxSet::from_box(box_fundamental_domain(&time_lattice)?);
    Ok(WindowConstruction {
        a: a.clone(),
        d: d.clone(),
        e,
        x,
        equivalent_lattice,
        window,
    })
}

/// Certify a construction end to end: the converted lattice equals the input
/// lattice, both route to an orthonormal verdict, and the structure report
/// shows a single common fundamental domain.
pub fn certify_construction(w: &WindowConstruction) -> Result<Verdict> {
    let input = w.input_lattice()?;
    if !input.lattice_equal(&w.equivalent_lattice)? {
        return Err(Error::TheoremViolation(
            "converted lattice differs from the input lattice",
        ));
    }
    let spec = w.spec()?;
    let verdict = gabor_check(&spec)?;
    if !verdict.is_orthonormal() {
        return Ok(verdict);
    }
    // The same window over the original upper-triangular generator: the
    // checker canonicalizes it to an equal lower-triangular generator.
    let original_spec = GaborSpec::new(w.window.clone(), input)?;
    let original = gabor_check(&original_spec)?;
    if original.status != verdict.status {
        return Err(Error::TheoremViolation(
            "verdicts differ between equal lattices",
        ));
    }
    let report = structure_report(&spec, &verdict)?;
    if report.level != 1 {
        return Err(Error::TheoremViolation(
            "constructed window is not a single common fundamental domain",
        ));
    }
    Ok(Verdict {
        structure: Some(report),
        ..verdict
    })
}
