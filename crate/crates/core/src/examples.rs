//! Worked examples used by the CLI, the tests and the benches.

use crate::complex::{FreeComplex, HyperComplex};
use crate::error::Result;
use crate::matrix::Matrix;
use crate::ring::{make_khat, make_laurent, GradedElement, Ring};
use crate::scalar::Coeff;

/// The four-fold hypercube over `K̂` with edge maps `1 − a⊗1`, `1 − 1⊗c`,
/// `1 − d⊗1` and `1 − 1⊗bcd`, and its totalisation.
pub fn khat_square(coeff: Coeff) -> Result<(HyperComplex, Vec<usize>, FreeComplex)> {
    let ring = make_khat(coeff)?;
    let edges = ["1 - a1", "1 - c2", "1 - d1", "1 - b2*c2*d2"]
        .iter()
        .map(|s| GradedElement::parse(&ring, s))
        .collect::<Result<Vec<_>>>()?;
    let v = HyperComplex::scalar_edges(&ring, &edges);
    let order = vec![0, 1, 2, 3];
    let c = v.totalize(&order)?;
    Ok((v, order, c))
}

/// A pinned acyclic complex of coefficient vector spaces in levels 0..=2.
pub fn pinned_d0(ring: &Ring) -> Result<FreeComplex> {
    let d1 = Matrix::parse(ring, &[&["1", "0", "2"], &["0", "1", "3"]])?;
    let d2 = Matrix::parse(ring, &[&["2"], &["3"], &["-1"]])?;
    FreeComplex::new(ring, 0, vec![2, 3, 1], vec![d1, d2])
}

/// `L ⊗_K D₀` over the Laurent ring.
pub fn laurent_tensor_d0(coeff: Coeff) -> Result<FreeComplex> {
    pinned_d0(&make_laurent(coeff)?)
}

pub fn two_term(coeff: Coeff, f: &str) -> Result<FreeComplex> {
    let l = make_laurent(coeff)?;
    Ok(FreeComplex::two_term(&GradedElement::parse(&l, f)?))
}

pub fn one_minus_x(coeff: Coeff) -> Result<FreeComplex> {
    two_term(coeff, "1 - x")
}

pub fn multiplication_by_x(coeff: Coeff) -> Result<FreeComplex> {
    two_term(coeff, "x")
}
