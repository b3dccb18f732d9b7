//! Sparse multivariate polynomials with optional Laurent variables, and
//! Buchberger's algorithm for the quotient presentations.
//!
//! The first `npoly` variables carry non-negative exponents and take part in
//! reduction. The remaining variables are Laurent: their exponents are signed
//! and they behave as units, so divisibility ignores them.

use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::{Coeff, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<i32>,
    npoly: u8,
}

impl Monomial {
    pub fn one(npoly: usize, nlaurent: usize) -> Self {
        Monomial {
            exps: vec![0; npoly + nlaurent],
            npoly: npoly as u8,
        }
    }

    pub fn new(exps: Vec<i32>, npoly: usize) -> Self {
        debug_assert!(exps[..npoly].iter().all(|&e| e >= 0));
        Monomial {
            exps,
            npoly: npoly as u8,
        }
    }

    pub fn exps(&self) -> &[i32] {
        &self.exps
    }

    pub fn npoly(&self) -> usize {
        self.npoly as usize
    }

    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    fn poly_degree(&self) -> i64 {
        self.exps[..self.npoly()].iter().map(|&e| e as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
            npoly: self.npoly,
        }
    }

    /// `self / other` if the polynomial part of `other` divides that of `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let n = self.npoly();
        if self.exps[..n].iter().zip(&other.exps[..n]).any(|(a, b)| a < b) {
            return None;
        }
        Some(Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect(),
            npoly: self.npoly,
        })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        let n = self.npoly();
        self.exps[..n].iter().zip(&other.exps[..n]).all(|(a, b)| a <= b)
    }

    fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(&a, &b)| a.max(b)).collect(),
            npoly: self.npoly,
        }
    }

    fn coprime(&self, other: &Monomial) -> bool {
        let n = self.npoly();
        self.exps[..n]
            .iter()
            .zip(&other.exps[..n])
            .all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Laurent inverse; only meaningful when the polynomial part is trivial.
    pub fn inverse(&self) -> Option<Monomial> {
        if self.exps[..self.npoly()].iter().any(|&e| e != 0) {
            return None;
        }
        Some(Monomial {
            exps: self.exps.iter().map(|e| -e).collect(),
            npoly: self.npoly,
        })
    }
}

// Degree-lexicographic on the polynomial part (earlier variables are
// larger), ties broken lexicographically on the Laurent part.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.npoly();
        self.poly_degree()
            .cmp(&other.poly_degree())
            .then_with(|| self.exps[..n].cmp(&other.exps[..n]))
            .then_with(|| self.exps[n..].cmp(&other.exps[n..]))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeff: Coeff,
    npoly: usize,
    nlaurent: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(coeff: Coeff, npoly: usize, nlaurent: usize) -> Self {
        Poly {
            coeff,
            npoly,
            nlaurent,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(coeff: Coeff, npoly: usize, nlaurent: usize, c: Scalar) -> Self {
        Self::monomial(coeff, Monomial::one(npoly, nlaurent), c)
    }

    pub fn one(coeff: Coeff, npoly: usize, nlaurent: usize) -> Self {
        Self::constant(coeff, npoly, nlaurent, coeff.one())
    }

    pub fn monomial(coeff: Coeff, m: Monomial, c: Scalar) -> Self {
        let npoly = m.npoly();
        let nlaurent = m.arity() - npoly;
        let mut p = Poly::zero(coeff, npoly, nlaurent);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn var(coeff: Coeff, npoly: usize, nlaurent: usize, i: usize, e: i32) -> Self {
        let mut m = Monomial::one(npoly, nlaurent);
        m.exps[i] = e;
        Self::monomial(coeff, m, coeff.one())
    }

    pub fn from_terms(
        coeff: Coeff,
        npoly: usize,
        nlaurent: usize,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Self {
        let mut p = Poly::zero(coeff, npoly, nlaurent);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn coeff(&self) -> Coeff {
        self.coeff
    }

    pub fn npoly(&self) -> usize {
        self.npoly
    }

    pub fn nlaurent(&self) -> usize {
        self.nlaurent
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Scalar)> {
        self.terms.into_iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.coeff.zero())
    }

    /// The scalar `c` if this polynomial equals the constant `c`.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(self.coeff.zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), -c);
        }
        r
    }

    pub fn neg(&self) -> Poly {
        let mut r = self.clone();
        for c in r.terms.values_mut() {
            *c = -&*c;
        }
        r
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        if s.is_zero() {
            return Poly::zero(self.coeff, self.npoly, self.nlaurent);
        }
        let mut r = self.clone();
        for c in r.terms.values_mut() {
            *c = &*c * s;
        }
        r
    }

    pub fn mul_term(&self, m: &Monomial, s: &Scalar) -> Poly {
        let mut r = Poly::zero(self.coeff, self.npoly, self.nlaurent);
        if s.is_zero() {
            return r;
        }
        // Multiplying by a monomial is order preserving, so the map stays sorted.
        r.terms = self
            .terms
            .iter()
            .map(|(k, c)| (k.mul(m), c * s))
            .collect();
        r
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut r = Poly::zero(self.coeff, self.npoly, self.nlaurent);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut r = Poly::one(self.coeff, self.npoly, self.nlaurent);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => {
                let inv = c.inv().expect("leading coefficient is invertible");
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Monomial, &Scalar) -> Option<(Monomial, Scalar)>) -> Poly {
        Poly::from_terms(
            self.coeff,
            self.npoly,
            self.nlaurent,
            self.terms.iter().filter_map(|(m, c)| f(m, c)),
        )
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative_repr();
            let abs = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = m
                .exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(j, &e)| {
                    let name = names.get(j).cloned().unwrap_or_else(|| format!("v{j}"));
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&[]))
    }
}

/// Full reduction of `p` modulo a monic basis. With a Gröbner basis the result
/// is the unique normal form.
pub fn reduce(p: &Poly, basis: &[Poly]) -> Poly {
    if basis.is_empty() {
        return p.clone();
    }
    let mut work = p.clone();
    let mut rem = Poly::zero(p.coeff, p.npoly, p.nlaurent);
    while let Some((m, c)) = work.terms.pop_last() {
        let hit = basis.iter().find_map(|g| {
            let (lm, _) = g.leading()?;
            m.div(lm).map(|q| (g, q))
        });
        match hit {
            Some((g, q)) => {
                let lc_inv = g.leading().unwrap().1.inv().unwrap();
                let s = &c * &lc_inv;
                // The leading term cancels against the popped one.
                for (gm, gc) in g.terms.iter().rev().skip(1) {
                    work.add_term(gm.mul(&q), -&(gc * &s));
                }
            }
            None => {
                rem.terms.insert(m, c);
            }
        }
    }
    rem
}

/// Reduction that picks a random reducible term and a random applicable basis
/// element at every step. Used to test confluence.
pub fn reduce_random<R: Rng>(p: &Poly, basis: &[Poly], rng: &mut R) -> Poly {
    let mut work = p.clone();
    loop {
        let mut candidates = Vec::new();
        for m in work.terms.keys() {
            for (gi, g) in basis.iter().enumerate() {
                if let Some((lm, _)) = g.leading() {
                    if lm.divides(m) {
                        candidates.push((m.clone(), gi));
                    }
                }
            }
        }
        let Some((m, gi)) = candidates.choose(rng).cloned() else {
            return work;
        };
        let g = &basis[gi];
        let (lm, lc) = g.leading().unwrap();
        let q = m.div(lm).unwrap();
        let s = &work.coefficient(&m) * &lc.inv().unwrap();
        work = work.sub(&g.mul_term(&q, &s));
    }
}

fn s_poly(f: &Poly, g: &Poly) -> Poly {
    let (lf, cf) = f.leading().unwrap();
    let (lg, cg) = g.leading().unwrap();
    let l = lf.lcm(lg);
    let a = f.mul_term(&l.div(lf).unwrap(), &cf.inv().unwrap());
    let b = g.mul_term(&l.div(lg).unwrap(), &cg.inv().unwrap());
    a.sub(&b)
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
///
/// Generators must not involve the Laurent variables.
pub fn buchberger(gens: &[Poly]) -> Result<Vec<Poly>> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    first.coeff.check_field()?;
    for g in gens {
        if g.terms.keys().any(|m| m.exps[m.npoly()..].iter().any(|&e| e != 0)) {
            return Err(Error::Unsupported(
                "relations may not involve Laurent variables".into(),
            ));
        }
    }
    let mut basis: Vec<Poly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.monic())
        .collect();
    let mut pairs: VecDeque<(usize, usize)> = VecDeque::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push_back((i, j));
        }
    }
    while let Some((i, j)) = pairs.pop_front() {
        let (li, _) = basis[i].leading().unwrap();
        let (lj, _) = basis[j].leading().unwrap();
        if li.coprime(lj) {
            continue;
        }
        let r = reduce(&s_poly(&basis[i], &basis[j]), &basis);
        if r.is_zero() {
            continue;
        }
        if r.as_constant().is_some() {
            // Unit ideal.
            return Ok(vec![Poly::one(first.coeff, first.npoly, first.nlaurent)]);
        }
        basis.push(r.monic());
        let k = basis.len() - 1;
        for i in 0..k {
            pairs.push_back((i, k));
        }
    }
    Ok(interreduce(basis))
}

fn interreduce(mut basis: Vec<Poly>) -> Vec<Poly> {
    // Drop elements whose leading monomial is divisible by another's.
    basis.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    let mut minimal: Vec<Poly> = Vec::new();
    for g in basis {
        let lg = g.leading().unwrap().0.clone();
        if minimal.iter().any(|h| h.leading().unwrap().0.divides(&lg)) {
            continue;
        }
        minimal.retain(|h| !lg.divides(h.leading().unwrap().0));
        minimal.push(g);
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Poly> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let g = &minimal[i];
        let (lm, lc) = g.leading().unwrap();
        let mut tail = g.clone();
        tail.terms.pop_last();
        let mut r = reduce(&tail, &others);
        r.add_term(lm.clone(), lc.clone());
        reduced.push(r.monic());
    }
    reduced.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    reduced
}

/// True if every S-polynomial of `basis` reduces to zero.
pub fn is_groebner(basis: &[Poly]) -> bool {
    for j in 0..basis.len() {
        for i in 0..j {
            if !reduce(&s_poly(&basis[i], &basis[j]), basis).is_zero() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const C: Coeff = Coeff::Prime(101);

    fn v(n: usize, i: usize) -> Poly {
        Poly::var(C, n, 0, i, 1)
    }

    fn kbar_rel() -> Poly {
        let (a, b, c, d) = (v(4, 0), v(4, 1), v(4, 2), v(4, 3));
        a.mul(&b).add(&c.mul(&d)).sub(&Poly::one(C, 4, 0))
    }

    #[test]
    fn principal_ideal_is_its_own_basis() {
        let g = buchberger(&[kbar_rel()]).unwrap();
        assert_eq!(g, vec![kbar_rel()]);
    }

    #[test]
    fn linear_generators() {
        let one = Poly::one(C, 2, 0);
        let gens = [v(2, 0).sub(&one), v(2, 1).sub(&one)];
        let g = buchberger(&gens).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.contains(&gens[0]) && g.contains(&gens[1]));
    }

    #[test]
    fn ab_reduces_to_one_minus_cd() {
        let g = buchberger(&[kbar_rel()]).unwrap();
        let ab = v(4, 0).mul(&v(4, 1));
        let expect = Poly::one(C, 4, 0).sub(&v(4, 2).mul(&v(4, 3)));
        assert_eq!(reduce(&ab, &g), expect);
        let x = v(4, 0).mul(&v(4, 1)).add(&v(4, 2).mul(&v(4, 3))).mul(&v(4, 0));
        assert_eq!(reduce(&x, &g), v(4, 0));
    }

    #[test]
    fn composite_modulus_rejected() {
        let p = Poly::var(Coeff::Prime(12), 1, 0, 0, 1);
        assert!(matches!(buchberger(&[p]), Err(Error::UnsupportedDomain(_))));
    }

    #[test]
    fn laurent_monomial_inverse() {
        let m = Monomial::new(vec![2, -3], 0);
        assert_eq!(m.mul(&m.inverse().unwrap()), Monomial::one(0, 2));
        assert!(Monomial::new(vec![1, 0], 1).inverse().is_none());
    }

    #[test]
    fn random_order_reduction_is_confluent() {
        let g = buchberger(&[kbar_rel()]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let mut p = Poly::zero(C, 4, 0);
            for _ in 0..4 {
                let e: Vec<i32> = (0..4).map(|_| rng.gen_range(0..3)).collect();
                p.add_term(Monomial::new(e, 4), C.from_i64(rng.gen_range(1..101)));
            }
            let a = reduce_random(&p, &g, &mut rng);
            let b = reduce_random(&p, &g, &mut rng);
            assert_eq!(a, b);
            assert_eq!(a, reduce(&p, &g));
        }
    }
}
