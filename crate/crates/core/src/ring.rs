//! ℤ²-graded ring instances and their elements.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{self, Monomial, Poly};
use crate::scalar::{Coeff, Scalar};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct Degree {
    pub x: i64,
    pub y: i64,
}

impl Degree {
    pub const ZERO: Degree = Degree { x: 0, y: 0 };
    pub const E1: Degree = Degree { x: 1, y: 0 };
    pub const E2: Degree = Degree { x: 0, y: 1 };

    pub const fn new(x: i64, y: i64) -> Self {
        Degree { x, y }
    }

    /// `max(|x|, |y|)`.
    pub fn amplitude(self) -> i64 {
        self.x.abs().max(self.y.abs())
    }

    pub fn scale(self, k: i64) -> Degree {
        Degree::new(self.x * k, self.y * k)
    }

    pub fn is_zero(self) -> bool {
        self == Degree::ZERO
    }
}

impl From<[i64; 2]> for Degree {
    fn from(a: [i64; 2]) -> Self {
        Degree::new(a[0], a[1])
    }
}

impl From<Degree> for [i64; 2] {
    fn from(d: Degree) -> Self {
        [d.x, d.y]
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, o: Degree) -> Degree {
        Degree::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Degree {
    type Output = Degree;
    fn sub(self, o: Degree) -> Degree {
        Degree::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Degree {
    type Output = Degree;
    fn neg(self) -> Degree {
        Degree::new(-self.x, -self.y)
    }
}

/// An automorphism of ℤ² given by an integer matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Involution {
    m: [[i64; 2]; 2],
}

impl Involution {
    pub const IDENTITY: Involution = Involution { m: [[1, 0], [0, 1]] };
    /// `(x, y) ↦ (−x, y)`
    pub const FLIP_X: Involution = Involution { m: [[-1, 0], [0, 1]] };
    /// `(x, y) ↦ (x, −y)`
    pub const FLIP_Y: Involution = Involution { m: [[1, 0], [0, -1]] };
    /// `(x, y) ↦ (y, x)`
    pub const SWAP: Involution = Involution { m: [[0, 1], [1, 0]] };
    /// `(x, y) ↦ (−y, x)`
    pub const ROTATE: Involution = Involution { m: [[0, -1], [1, 0]] };

    pub fn apply(&self, d: Degree) -> Degree {
        Degree::new(
            self.m[0][0] * d.x + self.m[0][1] * d.y,
            self.m[1][0] * d.x + self.m[1][1] * d.y,
        )
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Involution) -> Involution {
        let mut m = [[0; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..2).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        Involution { m }
    }

    pub fn inverse(&self) -> Involution {
        let [[a, b], [c, d]] = self.m;
        let det = a * d - b * c;
        debug_assert!(det == 1 || det == -1);
        Involution {
            m: [[d * det, -b * det], [-c * det, a * det]],
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Involution::IDENTITY
    }

    /// Parse one of `id`, `flip-x`, `flip-y`, `swap`, `rotate`, or a
    /// comma-separated composite (applied right to left).
    pub fn parse(s: &str) -> Result<Involution> {
        let mut acc = Involution::IDENTITY;
        for part in s.split(',') {
            let g = match part.trim() {
                "id" | "" => Involution::IDENTITY,
                "flip-x" => Involution::FLIP_X,
                "flip-y" => Involution::FLIP_Y,
                "swap" => Involution::SWAP,
                "rotate" => Involution::ROTATE,
                other => return Err(Error::Parse(format!("unknown involution {other:?}"))),
            };
            acc = acc.compose(&g);
        }
        Ok(acc)
    }
}

impl fmt::Display for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.m;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingKind {
    /// `K[x^±1, y^±1]`
    Laurent,
    /// `K[a,b,c,d]/(ab+cd−1)` with a Laurent variable `t` in degree (0,1).
    KBar,
    /// `K̄ ⊗_{K̄₀} K̄` on eight variables.
    KHat,
    /// The polynomial cone `K[x, y]`, graded but not strongly graded.
    PolyCone,
}

impl std::str::FromStr for RingKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<RingKind> {
        RingKind::parse(s)
    }
}

impl RingKind {
    pub fn name(self) -> &'static str {
        match self {
            RingKind::Laurent => "laurent",
            RingKind::KBar => "kbar",
            RingKind::KHat => "khat",
            RingKind::PolyCone => "polycone",
        }
    }

    pub fn parse(s: &str) -> Result<RingKind> {
        match s.trim() {
            "laurent" => Ok(RingKind::Laurent),
            "kbar" => Ok(RingKind::KBar),
            "khat" => Ok(RingKind::KHat),
            "polycone" => Ok(RingKind::PolyCone),
            other => Err(Error::Parse(format!("unknown ring {other:?}"))),
        }
    }
}

#[derive(Debug)]
pub struct RingInstance {
    pub kind: RingKind,
    pub coeff: Coeff,
    pub regrade: Involution,
    npoly: usize,
    nlaurent: usize,
    names: Vec<String>,
    grading: Vec<Degree>,
    basis: Vec<Poly>,
}

pub type Ring = Arc<RingInstance>;

impl PartialEq for RingInstance {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for RingInstance {}

impl RingInstance {
    fn build(
        kind: RingKind,
        coeff: Coeff,
        npoly: usize,
        nlaurent: usize,
        names: &[&str],
        grading: &[(i64, i64)],
        relations: impl FnOnce(&dyn Fn(usize) -> Poly) -> Vec<Poly>,
    ) -> Result<Ring> {
        let var = |i: usize| Poly::var(coeff, npoly, nlaurent, i, 1);
        let rels = relations(&var);
        let basis = if rels.is_empty() {
            Vec::new()
        } else {
            poly::buchberger(&rels)?
        };
        let ring = RingInstance {
            kind,
            coeff,
            regrade: Involution::IDENTITY,
            npoly,
            nlaurent,
            names: names.iter().map(|s| s.to_string()).collect(),
            grading: grading.iter().map(|&(x, y)| Degree::new(x, y)).collect(),
            basis,
        };
        for r in &rels {
            if ring.degrees_of(r).len() > 1 {
                return Err(Error::Internal(format!(
                    "relation {} is not homogeneous",
                    r.fmt_with(&ring.names)
                )));
            }
        }
        Ok(Arc::new(ring))
    }

    pub fn npoly(&self) -> usize {
        self.npoly
    }

    pub fn nlaurent(&self) -> usize {
        self.nlaurent
    }

    pub fn nvars(&self) -> usize {
        self.npoly + self.nlaurent
    }

    pub fn var_names(&self) -> &[String] {
        &self.names
    }

    pub fn var_degree(&self, i: usize) -> Degree {
        self.regrade.apply(self.grading[i])
    }

    pub fn groebner_basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn name(&self) -> String {
        if self.regrade.is_identity() {
            self.kind.name().to_string()
        } else {
            format!("{}{}", self.kind.name(), self.regrade)
        }
    }

    pub fn same(&self, other: &RingInstance) -> bool {
        self.kind == other.kind && self.coeff == other.coeff && self.regrade == other.regrade
    }

    pub fn monomial_degree(&self, m: &Monomial) -> Degree {
        let mut d = Degree::ZERO;
        for (i, &e) in m.exps().iter().enumerate() {
            if e != 0 {
                d = d + self.grading[i].scale(e as i64);
            }
        }
        self.regrade.apply(d)
    }

    fn degrees_of(&self, p: &Poly) -> BTreeSet<Degree> {
        p.terms().map(|(m, _)| self.monomial_degree(m)).collect()
    }

    pub fn normal_form(&self, p: &Poly) -> Poly {
        poly::reduce(p, &self.basis)
    }

    /// True if no leading monomial of the Gröbner basis divides `m`.
    pub fn is_standard(&self, m: &Monomial) -> bool {
        self.basis
            .iter()
            .all(|g| !g.leading().is_some_and(|(lm, _)| lm.divides(m)))
    }

    pub fn zero_poly(&self) -> Poly {
        Poly::zero(self.coeff, self.npoly, self.nlaurent)
    }

    pub fn one_monomial(&self) -> Monomial {
        Monomial::one(self.npoly, self.nlaurent)
    }

    /// Standard monomials of the given degree whose polynomial part has total
    /// degree at most `bound`, with Laurent exponents in `[-bound, bound]`.
    pub fn standard_monomials(&self, deg: Degree, bound: u32) -> Vec<Monomial> {
        let n = self.nvars();
        let mut out = Vec::new();
        let mut exps = vec![0i32; n];
        self.enum_monomials(0, bound as i32, bound as i32, &mut exps, deg, &mut out);
        out.sort();
        out
    }

    fn enum_monomials(
        &self,
        i: usize,
        budget: i32,
        bound: i32,
        exps: &mut Vec<i32>,
        deg: Degree,
        out: &mut Vec<Monomial>,
    ) {
        if i == exps.len() {
            let m = Monomial::new(exps.clone(), self.npoly);
            if self.monomial_degree(&m) == deg && self.is_standard(&m) {
                out.push(m);
            }
            return;
        }
        if i < self.npoly {
            for e in 0..=budget {
                exps[i] = e;
                self.enum_monomials(i + 1, budget - e, bound, exps, deg, out);
            }
        } else {
            for e in -bound..=bound {
                exps[i] = e;
                self.enum_monomials(i + 1, budget, bound, exps, deg, out);
            }
        }
        exps[i] = 0;
    }

    /// Same ring with its grading composed with `g`.
    pub fn reindexed(self: &Ring, g: Involution) -> Ring {
        Arc::new(RingInstance {
            kind: self.kind,
            coeff: self.coeff,
            regrade: g.compose(&self.regrade),
            npoly: self.npoly,
            nlaurent: self.nlaurent,
            names: self.names.clone(),
            grading: self.grading.clone(),
            basis: self.basis.clone(),
        })
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

pub fn make_laurent(coeff: Coeff) -> Result<Ring> {
    RingInstance::build(
        RingKind::Laurent,
        coeff,
        0,
        2,
        &["x", "y"],
        &[(1, 0), (0, 1)],
        |_| Vec::new(),
    )
}

pub fn make_kbar(coeff: Coeff) -> Result<Ring> {
    coeff.check_field()?;
    RingInstance::build(
        RingKind::KBar,
        coeff,
        4,
        1,
        &["a", "b", "c", "d", "t"],
        &[(1, 0), (-1, 0), (1, 0), (-1, 0), (0, 1)],
        |v| {
            let one = Poly::one(coeff, 4, 1);
            vec![v(0).mul(&v(1)).add(&v(2).mul(&v(3))).sub(&one)]
        },
    )
}

pub fn make_khat(coeff: Coeff) -> Result<Ring> {
    coeff.check_field()?;
    RingInstance::build(
        RingKind::KHat,
        coeff,
        8,
        0,
        &["a1", "b1", "c1", "d1", "a2", "b2", "c2", "d2"],
        &[
            (1, 0),
            (-1, 0),
            (1, 0),
            (-1, 0),
            (0, 1),
            (0, -1),
            (0, 1),
            (0, -1),
        ],
        |v| {
            let one = Poly::one(coeff, 8, 0);
            let p = |i: usize, j: usize| v(i).mul(&v(j));
            vec![
                p(0, 1).add(&p(2, 3)).sub(&one),
                p(4, 5).add(&p(6, 7)).sub(&one),
                p(0, 1).sub(&p(4, 5)),
                p(0, 3).sub(&p(4, 7)),
                p(2, 1).sub(&p(6, 5)),
                p(2, 3).sub(&p(6, 7)),
            ]
        },
    )
}

pub fn make_polycone(coeff: Coeff) -> Result<Ring> {
    RingInstance::build(
        RingKind::PolyCone,
        coeff,
        2,
        0,
        &["x", "y"],
        &[(1, 0), (0, 1)],
        |_| Vec::new(),
    )
}

pub fn make_ring(kind: RingKind, coeff: Coeff) -> Result<Ring> {
    match kind {
        RingKind::Laurent => make_laurent(coeff),
        RingKind::KBar => make_kbar(coeff),
        RingKind::KHat => make_khat(coeff),
        RingKind::PolyCone => make_polycone(coeff),
    }
}

/// An element of a ring instance, stored as a normal-form polynomial.
#[derive(Clone, Debug)]
pub struct GradedElement {
    ring: Ring,
    poly: Poly,
}

impl PartialEq for GradedElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same(&other.ring) && self.poly == other.poly
    }
}

impl Eq for GradedElement {}

impl std::hash::Hash for GradedElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.poly.hash(state)
    }
}

impl GradedElement {
    pub fn from_poly(ring: &Ring, p: Poly) -> Self {
        let poly = ring.normal_form(&p);
        GradedElement {
            ring: ring.clone(),
            poly,
        }
    }

    /// Wrap a polynomial already known to be in normal form.
    pub(crate) fn from_normal(ring: &Ring, poly: Poly) -> Self {
        GradedElement {
            ring: ring.clone(),
            poly,
        }
    }

    pub fn zero(ring: &Ring) -> Self {
        Self::from_normal(ring, ring.zero_poly())
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, ring.coeff.one())
    }

    pub fn constant(ring: &Ring, c: Scalar) -> Self {
        Self::from_normal(ring, Poly::constant(ring.coeff, ring.npoly, ring.nlaurent, c))
    }

    pub fn from_i64(ring: &Ring, n: i64) -> Self {
        Self::constant(ring, ring.coeff.from_i64(n))
    }

    pub fn var(ring: &Ring, i: usize) -> Self {
        Self::from_poly(ring, Poly::var(ring.coeff, ring.npoly, ring.nlaurent, i, 1))
    }

    pub fn monomial(ring: &Ring, m: Monomial, c: Scalar) -> Self {
        Self::from_poly(ring, Poly::monomial(ring.coeff, m, c))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.poly.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        self.poly.as_constant()
    }

    fn check(&self, other: &GradedElement) -> Result<()> {
        if self.ring.same(&other.ring) {
            Ok(())
        } else {
            Err(Error::InstanceMismatch(self.ring.name(), other.ring.name()))
        }
    }

    fn assert_same(&self, other: &GradedElement) {
        if let Err(e) = self.check(other) {
            panic!("{e}");
        }
    }

    pub fn try_mul(&self, other: &GradedElement) -> Result<GradedElement> {
        self.check(other)?;
        Ok(self.mul(other))
    }

    pub fn try_add(&self, other: &GradedElement) -> Result<GradedElement> {
        self.check(other)?;
        Ok(self.add(other))
    }

    /// Product; panics on operands from different instances.
    pub fn mul(&self, other: &GradedElement) -> GradedElement {
        self.assert_same(other);
        if self.is_zero() || other.is_zero() {
            return GradedElement::zero(&self.ring);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let p = self.poly.mul(&other.poly);
        GradedElement::from_poly(&self.ring, p)
    }

    pub fn add(&self, other: &GradedElement) -> GradedElement {
        self.assert_same(other);
        Self::from_normal(&self.ring, self.poly.add(&other.poly))
    }

    pub fn sub(&self, other: &GradedElement) -> GradedElement {
        self.assert_same(other);
        Self::from_normal(&self.ring, self.poly.sub(&other.poly))
    }

    pub fn neg(&self) -> GradedElement {
        Self::from_normal(&self.ring, self.poly.neg())
    }

    pub fn scale(&self, c: &Scalar) -> GradedElement {
        Self::from_normal(&self.ring, self.poly.scale(c))
    }

    pub fn pow(&self, k: u32) -> GradedElement {
        let mut r = GradedElement::one(&self.ring);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn degrees(&self) -> BTreeSet<Degree> {
        self.ring.degrees_of(&self.poly)
    }

    /// The unique degree of a nonzero homogeneous element.
    pub fn degree(&self) -> Option<Degree> {
        let d = self.degrees();
        (d.len() == 1).then(|| *d.iter().next().unwrap())
    }

    /// Homogeneous of degree `d`; zero counts as homogeneous of every degree.
    pub fn is_homogeneous_of(&self, d: Degree) -> bool {
        self.poly
            .terms()
            .all(|(m, _)| self.ring.monomial_degree(m) == d)
    }

    pub fn components(&self) -> BTreeMap<Degree, GradedElement> {
        let mut parts: BTreeMap<Degree, Poly> = BTreeMap::new();
        for (m, c) in self.poly.terms() {
            parts
                .entry(self.ring.monomial_degree(m))
                .or_insert_with(|| self.ring.zero_poly())
                .add_term(m.clone(), c.clone());
        }
        parts
            .into_iter()
            .map(|(d, p)| (d, Self::from_normal(&self.ring, p)))
            .collect()
    }

    pub fn component(&self, d: Degree) -> GradedElement {
        let p = self
            .poly
            .map_terms(|m, c| (self.ring.monomial_degree(m) == d).then(|| (m.clone(), c.clone())));
        Self::from_normal(&self.ring, p)
    }

    /// `max(|s|, |t|)` over homogeneous components; zero has amplitude 0.
    pub fn amplitude(&self) -> i64 {
        self.degrees().into_iter().map(Degree::amplitude).max().unwrap_or(0)
    }

    /// Inverse of a homogeneous unit of the form `c · (Laurent monomial)`.
    pub fn unit_inverse(&self) -> Option<GradedElement> {
        if self.poly.len() != 1 {
            return None;
        }
        let (m, c) = self.poly.leading()?;
        let mi = m.inverse()?;
        let ci = c.inv()?;
        Some(Self::from_normal(
            &self.ring,
            Poly::monomial(self.ring.coeff, mi, ci),
        ))
    }

    /// The same element viewed in `ring`, which must share the presentation.
    pub fn transport(&self, ring: &Ring) -> GradedElement {
        debug_assert_eq!(self.ring.kind, ring.kind);
        Self::from_normal(ring, self.poly.clone())
    }

    /// Parse a small expression language: sums of terms like `3/2*x^2*y^-1`.
    pub fn parse(ring: &Ring, s: &str) -> Result<GradedElement> {
        parse_expr(ring, s)
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.poly.fmt_with(&self.ring.names))
    }
}

fn parse_expr(ring: &Ring, s: &str) -> Result<GradedElement> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut acc = ring.zero_poly();
    let bytes = s.as_bytes();
    let mut start = 0;
    let mut terms = Vec::new();
    for i in 0..=bytes.len() {
        let at_split = i == bytes.len()
            || (i > start && (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^');
        if at_split {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    for t in terms {
        let (neg, body) = match t.as_bytes()[0] {
            b'-' => (true, &t[1..]),
            b'+' => (false, &t[1..]),
            _ => (false, t),
        };
        let mut c = ring.coeff.one();
        let mut m = ring.one_monomial();
        for factor in body.split('*') {
            if factor.is_empty() {
                return Err(Error::Parse(format!("empty factor in {s:?}")));
            }
            if factor.as_bytes()[0].is_ascii_digit() {
                let v = Scalar::decode(factor, ring.coeff)?;
                c = &c * &v;
                continue;
            }
            let (name, e) = match factor.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<i32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?,
                ),
                None => (factor, 1),
            };
            let i = ring
                .var_index(name)
                .ok_or_else(|| Error::Parse(format!("unknown variable {name:?} in {}", ring.name())))?;
            if i < ring.npoly && e < 0 {
                return Err(Error::Parse(format!("{name} is not invertible")));
            }
            let mut exps = vec![0; ring.nvars()];
            exps[i] = e;
            m = m.mul(&Monomial::new(exps, ring.npoly));
        }
        if neg {
            c = -c;
        }
        acc.add_term(m, c);
    }
    Ok(GradedElement::from_poly(ring, acc))
}

/// `ring_mul` with the instance check surfaced as an error.
pub fn ring_mul(a: &GradedElement, b: &GradedElement) -> Result<GradedElement> {
    a.try_mul(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c() -> Coeff {
        Coeff::Prime(101)
    }

    #[test]
    fn laurent_unit_inverse() {
        let l = make_laurent(c()).unwrap();
        let x = GradedElement::parse(&l, "x").unwrap();
        let xi = GradedElement::parse(&l, "x^-1").unwrap();
        assert!(x.mul(&xi).is_one());
        assert_eq!(x.unit_inverse().unwrap(), xi);
        let m = GradedElement::parse(&l, "x^2*y^-3").unwrap();
        assert_eq!(m.degree(), Some(Degree::new(2, -3)));
        assert_eq!(m.amplitude(), 3);
    }

    #[test]
    fn kbar_ab() {
        let k = make_kbar(c()).unwrap();
        let a = GradedElement::parse(&k, "a").unwrap();
        let b = GradedElement::parse(&k, "b").unwrap();
        assert_eq!(a.mul(&b), GradedElement::parse(&k, "1 - c*d").unwrap());
        let acd = GradedElement::parse(&k, "a*c*d").unwrap();
        assert_eq!(acd.degree(), Some(Degree::new(1, 0)));
    }

    #[test]
    fn khat_tensor_products() {
        let h = make_khat(c()).unwrap();
        let a1 = GradedElement::parse(&h, "a1").unwrap();
        let c2 = GradedElement::parse(&h, "c2").unwrap();
        let ac = a1.mul(&c2);
        assert_eq!(ac.degree(), Some(Degree::new(1, 1)));
        assert_eq!(ac, GradedElement::parse(&h, "a1*c2").unwrap());
        let bcd = GradedElement::parse(&h, "b2*c2*d2").unwrap();
        assert_eq!(bcd.degree(), Some(Degree::new(0, -1)));
        for (l, r) in [("a1*b1", "a2*b2"), ("a1*d1", "a2*d2"), ("c1*b1", "c2*b2"), ("c1*d1", "c2*d2")] {
            let d = GradedElement::parse(&h, l)
                .unwrap()
                .sub(&GradedElement::parse(&h, r).unwrap());
            assert!(d.is_zero(), "{l} - {r}");
        }
        assert!(poly::is_groebner(h.groebner_basis()));
    }

    #[test]
    fn mixed_instances_rejected() {
        let l = make_laurent(c()).unwrap();
        let k = make_kbar(c()).unwrap();
        let e = ring_mul(&GradedElement::one(&l), &GradedElement::one(&k));
        assert!(matches!(e, Err(Error::InstanceMismatch(_, _))));
        let q = make_laurent(Coeff::Rational).unwrap();
        assert!(GradedElement::one(&l).try_add(&GradedElement::one(&q)).is_err());
    }

    #[test]
    fn involutions() {
        let gs = [
            Involution::FLIP_X,
            Involution::FLIP_Y,
            Involution::SWAP,
            Involution::ROTATE,
        ];
        for g in gs {
            assert!(g.compose(&g.inverse()).is_identity());
        }
        let d = Degree::new(2, 5);
        assert_eq!(Involution::ROTATE.apply(d), Degree::new(-5, 2));
        assert_eq!(
            Involution::FLIP_X.compose(&Involution::FLIP_Y).apply(d),
            Degree::new(-2, -5)
        );
    }

    #[test]
    fn reindexed_laurent_substitutes_inverse() {
        let l = make_laurent(c()).unwrap();
        let r = l.reindexed(Involution::FLIP_X);
        let x = GradedElement::parse(&r, "x").unwrap();
        assert_eq!(x.degree(), Some(Degree::new(-1, 0)));
        let back = r.reindexed(Involution::FLIP_X);
        assert!(back.same(&l));
    }

    #[test]
    fn composite_modulus_for_quotients() {
        assert!(make_kbar(Coeff::Prime(100)).is_err());
    }
}
