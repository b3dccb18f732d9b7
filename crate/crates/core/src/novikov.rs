//! Truncated arithmetic in the eight Novikov-type completions.
//!
//! Every region carries a linear filtration functional on ℤ². Elements are
//! finite sums of homogeneous terms; truncation at cutoff `N` drops the terms
//! of filtration `> N` and records that something was dropped.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{Degree, GradedElement, Involution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    /// `R_*[y,y⁻¹]⟨⟨x⟩⟩`
    EdgeX,
    /// `R_*[y,y⁻¹]⟨⟨x⁻¹⟩⟩`
    EdgeXInv,
    /// `R_*[x,x⁻¹]⟨⟨y⟩⟩`
    EdgeY,
    /// `R_*[x,x⁻¹]⟨⟨y⁻¹⟩⟩`
    EdgeYInv,
    /// `R_*⟨⟨x^sx, y^sy⟩⟩` with `sx, sy ∈ {1, −1}`.
    Vertex { sx: i8, sy: i8 },
}

impl Region {
    pub const ALL: [Region; 8] = [
        Region::EdgeY,
        Region::EdgeYInv,
        Region::EdgeX,
        Region::EdgeXInv,
        Region::Vertex { sx: 1, sy: 1 },
        Region::Vertex { sx: -1, sy: -1 },
        Region::Vertex { sx: 1, sy: -1 },
        Region::Vertex { sx: -1, sy: 1 },
    ];

    pub fn name(self) -> &'static str {
        match self {
            Region::EdgeX => "nov-x",
            Region::EdgeXInv => "nov-xinv",
            Region::EdgeY => "nov-y",
            Region::EdgeYInv => "nov-yinv",
            Region::Vertex { sx: 1, sy: 1 } => "nov-x-y",
            Region::Vertex { sx: 1, sy: -1 } => "nov-x-yinv",
            Region::Vertex { sx: -1, sy: 1 } => "nov-xinv-y",
            Region::Vertex { .. } => "nov-xinv-yinv",
        }
    }

    pub fn ring_notation(self) -> &'static str {
        match self {
            Region::EdgeX => "R_*[y,y^-1]<<x>>",
            Region::EdgeXInv => "R_*[y,y^-1]<<x^-1>>",
            Region::EdgeY => "R_*[x,x^-1]<<y>>",
            Region::EdgeYInv => "R_*[x,x^-1]<<y^-1>>",
            Region::Vertex { sx: 1, sy: 1 } => "R_*<<x,y>>",
            Region::Vertex { sx: 1, sy: -1 } => "R_*<<x,y^-1>>",
            Region::Vertex { sx: -1, sy: 1 } => "R_*<<x^-1,y>>",
            Region::Vertex { .. } => "R_*<<x^-1,y^-1>>",
        }
    }

    pub fn is_vertex(self) -> bool {
        matches!(self, Region::Vertex { .. })
    }

    /// Coefficients `(fx, fy)` of the filtration functional.
    pub fn functional(self) -> (i64, i64) {
        match self {
            Region::EdgeX => (1, 0),
            Region::EdgeXInv => (-1, 0),
            Region::EdgeY => (0, 1),
            Region::EdgeYInv => (0, -1),
            Region::Vertex { sx, sy } => (sx as i64, sy as i64),
        }
    }

    fn from_functional(f: (i64, i64)) -> Region {
        match f {
            (1, 0) => Region::EdgeX,
            (-1, 0) => Region::EdgeXInv,
            (0, 1) => Region::EdgeY,
            (0, -1) => Region::EdgeYInv,
            (sx, sy) => {
                assert!(sx.abs() == 1 && sy.abs() == 1, "not a region functional");
                Region::Vertex {
                    sx: sx as i8,
                    sy: sy as i8,
                }
            }
        }
    }

    pub fn filtration(self, d: Degree) -> i64 {
        let (fx, fy) = self.functional();
        fx * d.x + fy * d.y
    }

    /// Whether multiplication by a term of degree `d` strictly raises the
    /// filtration while keeping supports inside a shifted completion cone.
    pub fn is_raising_degree(self, d: Degree) -> bool {
        match self {
            Region::Vertex { sx, sy } => {
                let a = sx as i64 * d.x;
                let b = sy as i64 * d.y;
                a >= 0 && b >= 0 && a + b >= 1
            }
            _ => self.filtration(d) >= 1,
        }
    }

    /// The two generalized torus directions: the first is completed, the
    /// second is the remaining coordinate direction.
    pub fn directions(self) -> (Degree, Degree) {
        match self {
            Region::EdgeX => (Degree::E1, Degree::E2),
            Region::EdgeXInv => (-Degree::E1, Degree::E2),
            Region::EdgeY => (Degree::E2, Degree::E1),
            Region::EdgeYInv => (-Degree::E2, Degree::E1),
            Region::Vertex { sx, sy } => (
                Degree::E1.scale(sx as i64),
                Degree::E2.scale(sy as i64),
            ),
        }
    }

    /// The region of the reindexed ring `R̄` with `deg_R̄ = g ∘ deg_R`
    /// corresponding to this region of `R`.
    pub fn reindex(self, g: Involution) -> Region {
        let (fx, fy) = self.functional();
        let gi = g.inverse();
        // f'(v) = f(g⁻¹ v), so f' = (g⁻¹)ᵀ f.
        let c1 = gi.apply(Degree::E1);
        let c2 = gi.apply(Degree::E2);
        let f1 = fx * c1.x + fy * c1.y;
        let f2 = fx * c2.x + fy * c2.y;
        Region::from_functional((f1, f2))
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Region {
    type Err = Error;
    fn from_str(s: &str) -> Result<Region> {
        Region::ALL
            .iter()
            .copied()
            .find(|r| r.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Region::ALL.iter().map(|r| r.name()).collect();
                Error::Parse(format!("unknown region {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

impl Serialize for Region {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Region {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Smallest filtration value of a term, `None` for zero.
pub fn min_filtration(e: &GradedElement, region: Region) -> Option<i64> {
    e.degrees().into_iter().map(|d| region.filtration(d)).min()
}

pub fn matrix_min_filtration(m: &Matrix, region: Region) -> Option<i64> {
    m.entries().filter_map(|(_, _, e)| min_filtration(e, region)).min()
}

/// Drop the terms of filtration `> cutoff`; the flag reports whether any were dropped.
pub fn truncate(e: &GradedElement, region: Region, cutoff: i64) -> (GradedElement, bool) {
    let ring = e.ring();
    let mut leaked = false;
    let p = e.poly().map_terms(|m, c| {
        if region.filtration(ring.monomial_degree(m)) > cutoff {
            leaked = true;
            None
        } else {
            Some((m.clone(), c.clone()))
        }
    });
    (GradedElement::from_poly(ring, p), leaked)
}

pub fn truncate_matrix(m: &Matrix, region: Region, cutoff: i64) -> (Matrix, bool) {
    let mut leaked = false;
    let out = m.map(|e| {
        let (t, l) = truncate(e, region, cutoff);
        leaked |= l;
        t
    });
    (out, leaked)
}

/// A truncated series: exact modulo terms of filtration `> cutoff`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NovikovElement {
    pub value: GradedElement,
    pub region: Region,
    pub cutoff: i64,
    pub leaked: bool,
}

impl NovikovElement {
    pub fn new(value: &GradedElement, region: Region, cutoff: i64) -> Self {
        let (value, leaked) = truncate(value, region, cutoff);
        NovikovElement {
            value,
            region,
            cutoff,
            leaked,
        }
    }

    pub fn mul(&self, other: &NovikovElement) -> NovikovElement {
        let cutoff = self.cutoff.min(other.cutoff);
        let mut r = NovikovElement::new(&self.value.mul(&other.value), self.region, cutoff);
        r.leaked |= self.leaked || other.leaked;
        r
    }

    pub fn add(&self, other: &NovikovElement) -> NovikovElement {
        let cutoff = self.cutoff.min(other.cutoff);
        let mut r = NovikovElement::new(&self.value.add(&other.value), self.region, cutoff);
        r.leaked |= self.leaked || other.leaked;
        r
    }

    pub fn retruncate(&self, cutoff: i64) -> NovikovElement {
        let mut r = NovikovElement::new(&self.value, self.region, cutoff.min(self.cutoff));
        r.leaked |= self.leaked;
        r
    }

    /// True if `self == other` modulo filtration `> n`.
    pub fn agrees_mod(&self, other: &GradedElement, n: i64) -> bool {
        let diff = self.value.sub(other);
        min_filtration(&diff, self.region).is_none_or(|f| f > n)
    }
}

/// Reject an operator with a term that does not raise the filtration.
pub fn check_raising(op: &Matrix, region: Region) -> Result<()> {
    for (_, _, e) in op.entries() {
        for d in e.degrees() {
            if !region.is_raising_degree(d) {
                return Err(Error::NotRaising(d));
            }
        }
    }
    Ok(())
}

/// `P = Σ_k op^k`, the inverse of `id − op` modulo filtration `> cutoff`.
/// Returns `(P, leaked)`.
pub fn geometric_inverse(op: &Matrix, region: Region, cutoff: i64) -> Result<(Matrix, bool)> {
    if op.rows() != op.cols() {
        return Err(Error::Shape("geometric inverse of a non-square operator".into()));
    }
    check_raising(op, region)?;
    let ring = op.ring();
    let n = op.rows();
    let mut sum = Matrix::identity(ring, n);
    let mut power = Matrix::identity(ring, n);
    let mut leaked = false;
    loop {
        let (next, l) = truncate_matrix(&power.mul(op), region, cutoff);
        leaked |= l;
        if next.is_zero() {
            break;
        }
        sum = sum.add(&next);
        power = next;
    }
    Ok((sum, leaked))
}

/// Inverse of a single element modulo filtration `> cutoff`: a homogeneous
/// unit component `t` is chosen so that `1 − t⁻¹f` raises the filtration, and
/// `f⁻¹ = Σ (1 − t⁻¹f)^k t⁻¹`. The result `g` satisfies `f·g ≡ 1` modulo
/// filtration `> cutoff`. Returns `None` if no component works.
pub fn element_inverse(f: &GradedElement, region: Region, cutoff: i64) -> Option<(GradedElement, bool)> {
    let ring = f.ring();
    for (_, t) in f.components() {
        let Some(ti) = t.unit_inverse() else {
            continue;
        };
        let q = GradedElement::one(ring).sub(&ti.mul(f));
        let qm = Matrix::from_rows(ring, vec![vec![q]]);
        // Terms of f with negative filtration pull dropped terms of g below the
        // cutoff, so g is kept to a correspondingly higher filtration.
        let slack = -min_filtration(f, region).unwrap_or(0).min(0);
        let shift = min_filtration(&ti, region).unwrap_or(0).min(0);
        let Ok((p, leaked)) = geometric_inverse(&qm, region, cutoff + slack - shift) else {
            continue;
        };
        let (inv, l2) = truncate(&p.get(0, 0).mul(&ti), region, cutoff + slack);
        return Some((inv, leaked || l2));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_khat, make_laurent};
    use crate::scalar::Coeff;

    const C: Coeff = Coeff::Prime(101);

    #[test]
    fn reindex_regions() {
        let v = Region::Vertex { sx: 1, sy: 1 };
        assert_eq!(v.reindex(Involution::FLIP_X), Region::Vertex { sx: -1, sy: 1 });
        assert_eq!(
            v.reindex(Involution::FLIP_X.compose(&Involution::FLIP_Y)),
            Region::Vertex { sx: -1, sy: -1 }
        );
        assert_eq!(Region::EdgeX.reindex(Involution::SWAP), Region::EdgeY);
        for r in Region::ALL {
            assert_eq!(r.reindex(Involution::IDENTITY), r);
            for g in [Involution::FLIP_X, Involution::SWAP, Involution::ROTATE] {
                assert_eq!(r.reindex(g).reindex(g.inverse()), r);
            }
        }
    }

    #[test]
    fn filtration_is_compatible_with_reindexing() {
        let l = make_laurent(C).unwrap();
        let g = Involution::ROTATE;
        let lb = l.reindexed(g);
        let e = GradedElement::parse(&l, "x^2*y^-1").unwrap();
        for r in Region::ALL {
            let f = min_filtration(&e, r).unwrap();
            let fb = min_filtration(&e.transport(&lb), r.reindex(g)).unwrap();
            assert_eq!(f, fb);
        }
    }

    #[test]
    fn telescoping() {
        let l = make_laurent(C).unwrap();
        let x = Matrix::parse(&l, &[&["x"]]).unwrap();
        let (p, leaked) = geometric_inverse(&x, Region::EdgeX, 8).unwrap();
        assert!(leaked);
        let one_minus_x = GradedElement::parse(&l, "1 - x").unwrap();
        let prod = one_minus_x.mul(p.get(0, 0));
        assert_eq!(prod, GradedElement::parse(&l, "1 - x^9").unwrap());
        let n = NovikovElement::new(&prod, Region::EdgeX, 8);
        assert!(n.value.is_one() && n.leaked);
    }

    #[test]
    fn zero_operator_inverse_is_identity() {
        let l = make_laurent(C).unwrap();
        let z = Matrix::zeros(&l, 2, 2);
        let (p, leaked) = geometric_inverse(&z, Region::EdgeY, 8).unwrap();
        assert!(p.is_identity() && !leaked);
    }

    #[test]
    fn non_raising_rejected() {
        let l = make_laurent(C).unwrap();
        let y = Matrix::parse(&l, &[&["y"]]).unwrap();
        assert!(matches!(
            geometric_inverse(&y, Region::EdgeX, 8),
            Err(Error::NotRaising(d)) if d == Degree::new(0, 1)
        ));
        // Vertex regions need both outward coordinates non-negative.
        let m = Matrix::parse(&l, &[&["x^2*y^-1"]]).unwrap();
        assert!(geometric_inverse(&m, Region::Vertex { sx: 1, sy: 1 }, 8).is_err());
    }

    #[test]
    fn khat_series() {
        let h = make_khat(C).unwrap();
        let a = Matrix::parse(&h, &[&["a1"]]).unwrap();
        let (p, _) = geometric_inverse(&a, Region::EdgeX, 4).unwrap();
        assert_eq!(p.get(0, 0), &GradedElement::parse(&h, "1 + a1 + a1^2 + a1^3 + a1^4").unwrap());
        let bcd = Matrix::parse(&h, &[&["b2*c2*d2"]]).unwrap();
        let (p, _) = geometric_inverse(&bcd, Region::Vertex { sx: 1, sy: -1 }, 2).unwrap();
        assert_eq!(p.get(0, 0).degrees().len(), 3);
    }

    #[test]
    fn element_inverse_chooses_unit_component() {
        let l = make_laurent(C).unwrap();
        let f = GradedElement::parse(&l, "1 - x").unwrap();
        for r in Region::ALL {
            let inv = element_inverse(&f, r, 6);
            let expect = !matches!(r, Region::EdgeY | Region::EdgeYInv);
            assert_eq!(inv.is_some(), expect, "{r}");
            if let Some((g, _)) = inv {
                let n = NovikovElement::new(&f.mul(&g), r, 6);
                assert!(n.value.is_one(), "{r}: {}", n.value);
            }
        }
    }

    #[test]
    fn retruncation_is_coherent() {
        let l = make_laurent(C).unwrap();
        let e = GradedElement::parse(&l, "1 + x + x^2 + x^3 + y").unwrap();
        let a = NovikovElement::new(&e, Region::EdgeX, 3).retruncate(1);
        let b = NovikovElement::new(&e, Region::EdgeX, 1);
        assert_eq!(a.value, b.value);
    }
}
