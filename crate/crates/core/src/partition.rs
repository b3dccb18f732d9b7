//! Partitions of unity and the strong-grading criterion.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::poly::Monomial;
use crate::ring::{Degree, GradedElement, Ring, RingKind};

/// `1 = Σ u_j v_j` with every `u_j` of degree `rho` and every `v_j` of degree `−rho`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionOfUnity {
    pub rho: Degree,
    pub pairs: Vec<(GradedElement, GradedElement)>,
}

impl PartitionOfUnity {
    pub fn identity(ring: &Ring) -> Self {
        PartitionOfUnity {
            rho: Degree::ZERO,
            pairs: vec![(GradedElement::one(ring), GradedElement::one(ring))],
        }
    }

    pub fn ring(&self) -> &Ring {
        self.pairs[0].0.ring()
    }

    pub fn sum(&self) -> GradedElement {
        let ring = self.ring();
        self.pairs
            .iter()
            .fold(GradedElement::zero(ring), |acc, (u, v)| acc.add(&u.mul(v)))
    }

    pub fn verify(&self) -> Result<()> {
        if self.pairs.is_empty() {
            return Err(Error::Internal("empty partition of unity".into()));
        }
        for (u, v) in &self.pairs {
            if !u.is_homogeneous_of(self.rho) || !v.is_homogeneous_of(-self.rho) {
                return Err(Error::Internal(format!(
                    "pair ({u}, {v}) is not of type ({}, {})",
                    self.rho, -self.rho
                )));
            }
        }
        if !self.sum().is_one() {
            return Err(Error::Internal(format!(
                "partition of type {} sums to {}",
                self.rho,
                self.sum()
            )));
        }
        Ok(())
    }

    /// `1 = Σ_k Σ_j (u_j u'_k)(v'_k v_j)`, of type `p.rho + q.rho`.
    pub fn compose(&self, q: &PartitionOfUnity) -> Result<PartitionOfUnity> {
        let mut pairs = Vec::with_capacity(self.pairs.len() * q.pairs.len());
        for (u, v) in &self.pairs {
            for (u2, v2) in &q.pairs {
                let a = u.try_mul(u2)?;
                let b = v2.try_mul(v)?;
                if !a.is_zero() && !b.is_zero() {
                    pairs.push((a, b));
                }
            }
        }
        let out = PartitionOfUnity {
            rho: self.rho + q.rho,
            pairs,
        };
        out.verify()?;
        Ok(out)
    }

    /// Swap the roles of `u` and `v`.
    pub fn opposite(&self) -> PartitionOfUnity {
        PartitionOfUnity {
            rho: -self.rho,
            pairs: self.pairs.iter().map(|(u, v)| (v.clone(), u.clone())).collect(),
        }
    }

    pub fn describe(&self) -> Vec<(String, String)> {
        self.pairs
            .iter()
            .map(|(u, v)| (u.to_string(), v.to_string()))
            .collect()
    }
}

fn el(ring: &Ring, s: &str) -> GradedElement {
    GradedElement::parse(ring, s).expect("built-in expression")
}

fn pairs(ring: &Ring, rho: Degree, ps: &[(&str, &str)]) -> PartitionOfUnity {
    PartitionOfUnity {
        rho,
        pairs: ps.iter().map(|(u, v)| (el(ring, u), el(ring, v))).collect(),
    }
}

/// Partitions for the unit steps `±e₁`, `±e₂` of the underlying (un-reindexed)
/// grading.
fn unit_step(ring: &Ring, base: Degree) -> Option<PartitionOfUnity> {
    let rho = ring.regrade.apply(base);
    let p = match (ring.kind, base.x, base.y) {
        (RingKind::KBar, 1, 0) => pairs(ring, rho, &[("a", "b"), ("c", "d")]),
        (RingKind::KBar, -1, 0) => pairs(ring, rho, &[("b", "a"), ("d", "c")]),
        (RingKind::KBar, 0, 1) => pairs(ring, rho, &[("t", "t^-1")]),
        (RingKind::KBar, 0, -1) => pairs(ring, rho, &[("t^-1", "t")]),
        (RingKind::KHat, 1, 0) => pairs(ring, rho, &[("a1", "b1"), ("c1", "d1")]),
        (RingKind::KHat, -1, 0) => pairs(ring, rho, &[("b1", "a1"), ("d1", "c1")]),
        (RingKind::KHat, 0, 1) => pairs(ring, rho, &[("a2", "b2"), ("c2", "d2")]),
        (RingKind::KHat, 0, -1) => pairs(ring, rho, &[("b2", "a2"), ("d2", "c2")]),
        _ => return None,
    };
    Some(p)
}

/// A verified partition of unity of type `(rho, −rho)`.
pub fn find_partition(ring: &Ring, rho: Degree) -> Result<PartitionOfUnity> {
    if rho.is_zero() {
        return Ok(PartitionOfUnity::identity(ring));
    }
    let p = match ring.kind {
        RingKind::Laurent => {
            let base = ring.regrade.inverse().apply(rho);
            let u = el(ring, &format!("x^{}*y^{}", base.x, base.y));
            let v = u.unit_inverse().expect("monomial unit");
            PartitionOfUnity {
                rho,
                pairs: vec![(u, v)],
            }
        }
        RingKind::KBar | RingKind::KHat => {
            let base = ring.regrade.inverse().apply(rho);
            let mut acc = PartitionOfUnity::identity(ring);
            let sx = Degree::new(base.x.signum(), 0);
            let sy = Degree::new(0, base.y.signum());
            for _ in 0..base.x.abs() {
                acc = acc.compose(&unit_step(ring, sx).unwrap())?;
            }
            for _ in 0..base.y.abs() {
                acc = acc.compose(&unit_step(ring, sy).unwrap())?;
            }
            acc
        }
        RingKind::PolyCone => return search_partition(ring, rho, 4),
    };
    p.verify()?;
    if p.rho != rho {
        return Err(Error::Internal(format!("constructed type {} for {}", p.rho, rho)));
    }
    Ok(p)
}

/// Exhaustive linear-algebra search for a partition of type `(rho, −rho)`
/// among standard monomials whose polynomial part has degree at most `bound`.
pub fn search_partition(ring: &Ring, rho: Degree, bound: u32) -> Result<PartitionOfUnity> {
    let us = ring.standard_monomials(rho, bound);
    let vs = ring.standard_monomials(-rho, bound);
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    let one = ring.one_monomial();
    index.insert(one.clone(), 0);
    let mut columns = Vec::new();
    for u in &us {
        for v in &vs {
            let p = GradedElement::monomial(ring, u.mul(v), ring.coeff.one());
            let col: Vec<(usize, crate::scalar::Scalar)> = p
                .poly()
                .terms()
                .map(|(m, c)| {
                    let n = index.len();
                    (*index.entry(m.clone()).or_insert(n), c.clone())
                })
                .collect();
            columns.push(col);
        }
    }
    if columns.is_empty() {
        return Err(Error::NoPartition(rho));
    }
    let mut a = Mat::zeros(ring.coeff, index.len(), columns.len());
    for (j, col) in columns.iter().enumerate() {
        for (i, c) in col {
            a.set(*i, j, c.clone());
        }
    }
    let mut b = vec![ring.coeff.zero(); index.len()];
    b[0] = ring.coeff.one();
    let x = a.solve(&b).ok_or(Error::NoPartition(rho))?;
    let mut out = Vec::new();
    for (i, u) in us.iter().enumerate() {
        let mut v = GradedElement::zero(ring);
        for (k, m) in vs.iter().enumerate() {
            let c = &x[i * vs.len() + k];
            if !c.is_zero() {
                v = v.add(&GradedElement::monomial(ring, m.clone(), c.clone()));
            }
        }
        if !v.is_zero() {
            out.push((GradedElement::monomial(ring, u.clone(), ring.coeff.one()), v));
        }
    }
    let p = PartitionOfUnity { rho, pairs: out };
    p.verify()?;
    Ok(p)
}

#[derive(Clone, Debug, Serialize)]
pub struct TypeCheck {
    pub rho: Degree,
    pub pairs: Option<Vec<(String, String)>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StrongGradingReport {
    pub ring: String,
    pub ok: bool,
    pub types: Vec<TypeCheck>,
    pub failures: Vec<Degree>,
}

/// The four types `(±e₁, ∓e₁)`, `(±e₂, ∓e₂)`.
pub const UNIT_TYPES: [Degree; 4] = [
    Degree::new(1, 0),
    Degree::new(-1, 0),
    Degree::new(0, 1),
    Degree::new(0, -1),
];

pub fn check_strongly_graded(ring: &Ring) -> StrongGradingReport {
    let mut types = Vec::new();
    let mut failures = Vec::new();
    for rho in UNIT_TYPES {
        match find_partition(ring, rho) {
            Ok(p) => types.push(TypeCheck {
                rho,
                pairs: Some(p.describe()),
            }),
            Err(_) => {
                failures.push(rho);
                types.push(TypeCheck { rho, pairs: None });
            }
        }
    }
    StrongGradingReport {
        ring: ring.name(),
        ok: failures.is_empty(),
        types,
        failures,
    }
}

/// `π_{λ,ρ}: x ⊗ y ↦ xy` on a formal sum of pure tensors.
pub fn pi_map(
    lambda: Degree,
    rho: Degree,
    tensor: &[(GradedElement, GradedElement)],
) -> Result<GradedElement> {
    let ring = tensor
        .first()
        .map(|(x, _)| x.ring().clone())
        .ok_or_else(|| Error::Shape("empty tensor needs an explicit ring".into()))?;
    let mut acc = GradedElement::zero(&ring);
    for (x, y) in tensor {
        check_deg(x, lambda)?;
        check_deg(y, rho)?;
        acc = acc.add(&x.try_mul(y)?);
    }
    Ok(acc)
}

/// `μ_{λ,ρ}: z ↦ Σ_j α_j ⊗ β_j z` for a partition of type `(λ, −λ)`.
pub fn mu_map(
    lambda: Degree,
    rho: Degree,
    z: &GradedElement,
    p: &PartitionOfUnity,
) -> Result<Vec<(GradedElement, GradedElement)>> {
    if p.rho != lambda {
        return Err(Error::DegreeMismatch {
            expected: lambda,
            found: p.rho,
        });
    }
    check_deg(z, lambda + rho)?;
    p.pairs
        .iter()
        .map(|(a, b)| Ok((a.clone(), b.try_mul(z)?)))
        .collect()
}

/// Canonical representative of a tensor in `R_λ ⊗_{R₀} R_ρ`: every pure tensor
/// `x ⊗ y` is rewritten as `Σ_j u_j ⊗ (v_j x) y`, sliding the degree-zero
/// factor `v_j x` right. The result lists the right factor in each slot `j`.
pub fn canonical_tensor(
    p: &PartitionOfUnity,
    tensor: &[(GradedElement, GradedElement)],
) -> Result<Vec<GradedElement>> {
    let ring = p.ring();
    let mut slots = vec![GradedElement::zero(ring); p.pairs.len()];
    for (x, y) in tensor {
        check_deg(x, p.rho)?;
        for (j, (_, v)) in p.pairs.iter().enumerate() {
            slots[j] = slots[j].add(&v.try_mul(x)?.mul(y));
        }
    }
    Ok(slots)
}

fn check_deg(x: &GradedElement, d: Degree) -> Result<()> {
    if x.is_homogeneous_of(d) {
        Ok(())
    } else {
        Err(Error::DegreeMismatch {
            expected: d,
            found: x.degree().unwrap_or(d),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_kbar, make_khat, make_laurent, make_polycone};
    use crate::scalar::Coeff;

    const C: Coeff = Coeff::Prime(101);

    #[test]
    fn laurent_monomial_partition() {
        let l = make_laurent(C).unwrap();
        let p = find_partition(&l, Degree::new(1, 0)).unwrap();
        assert_eq!(p.describe(), vec![("x".into(), "x^-1".into())]);
    }

    #[test]
    fn kbar_relation_partition() {
        let k = make_kbar(C).unwrap();
        let p = find_partition(&k, Degree::new(1, 0)).unwrap();
        assert_eq!(
            p.describe(),
            vec![("a".to_string(), "b".to_string()), ("c".into(), "d".into())]
        );
        let sq = p.compose(&p).unwrap();
        assert_eq!(sq.pairs.len(), 4);
        assert_eq!(sq.rho, Degree::new(2, 0));
    }

    #[test]
    fn khat_unit_partitions() {
        let h = make_khat(C).unwrap();
        let r = check_strongly_graded(&h);
        assert!(r.ok);
        assert_eq!(
            r.types[0].pairs.as_ref().unwrap(),
            &vec![("a1".to_string(), "b1".to_string()), ("c1".into(), "d1".into())]
        );
    }

    #[test]
    fn cone_is_not_strongly_graded() {
        let p = make_polycone(C).unwrap();
        let r = check_strongly_graded(&p);
        assert!(!r.ok);
        assert!(r.failures.contains(&Degree::new(-1, 0)));
        assert!(find_partition(&p, Degree::ZERO).is_ok());
    }

    #[test]
    fn generic_search_agrees_on_kbar() {
        let k = make_kbar(C).unwrap();
        let p = search_partition(&k, Degree::new(1, 0), 2).unwrap();
        assert!(p.sum().is_one());
        let q = search_partition(&k, Degree::new(-1, 1), 2).unwrap();
        assert!(q.sum().is_one());
    }

    #[test]
    fn identity_partition_is_neutral() {
        let l = make_laurent(C).unwrap();
        let p = find_partition(&l, Degree::new(2, -1)).unwrap();
        let q = p.compose(&PartitionOfUnity::identity(&l)).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn pi_mu_kbar() {
        let k = make_kbar(C).unwrap();
        let a = el(&k, "a");
        let p = find_partition(&k, Degree::new(1, 0)).unwrap();
        let mu = mu_map(Degree::new(1, 0), Degree::ZERO, &a, &p).unwrap();
        assert_eq!(mu[0].1, el(&k, "b*a"));
        assert_eq!(mu[1].1, el(&k, "d*a"));
        assert_eq!(pi_map(Degree::new(1, 0), Degree::ZERO, &mu).unwrap(), a);
        assert!(mu_map(Degree::new(1, 0), Degree::ZERO, &el(&k, "b"), &p).is_err());
    }
}
