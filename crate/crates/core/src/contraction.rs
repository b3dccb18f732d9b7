//! Contraction certificates: a levelwise map `h` with `dh + hd = id` modulo
//! terms of filtration above a cutoff, in one of the eight regions.

use serde::Serialize;

use crate::complex::{FreeComplex, HyperComplex};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::matrix::Matrix;
use crate::novikov::{element_inverse, matrix_min_filtration, truncate_matrix, Region};
use crate::ring::{Degree, GradedElement};

/// `h_n: C_n → C_{n+1}` for every level of a complex, stored from `lo`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub region: Region,
    pub cutoff: i64,
    /// Extra filtration kept in `h` so that `d` cannot pull dropped terms
    /// below the cutoff.
    pub slack: i64,
    pub lo: i64,
    pub maps: Vec<Matrix>,
    pub leaked: bool,
    pub method: String,
}

impl Contraction {
    pub fn at(&self, n: i64) -> Option<&Matrix> {
        if n < self.lo {
            return None;
        }
        self.maps.get((n - self.lo) as usize)
    }

    /// The same contraction with terms of filtration `> n + slack` dropped.
    pub fn retruncate(&self, n: i64) -> Contraction {
        let mut leaked = self.leaked;
        let maps = self
            .maps
            .iter()
            .map(|m| {
                let (t, l) = truncate_matrix(m, self.region, n + self.slack);
                leaked |= l;
                t
            })
            .collect();
        Contraction {
            region: self.region,
            cutoff: n,
            slack: self.slack,
            lo: self.lo,
            maps,
            leaked,
            method: self.method.clone(),
        }
    }
}

/// `max(0, −min filtration of a differential entry)`.
pub fn slack(c: &FreeComplex, region: Region) -> i64 {
    c.levels()
        .filter_map(|n| c.diff_ref(n).and_then(|d| matrix_min_filtration(d, region)))
        .min()
        .map_or(0, |f| (-f).max(0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub level: i64,
    pub row: usize,
    pub col: usize,
    pub degree: Degree,
    pub filtration: i64,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub region: Region,
    pub ring: String,
    pub cutoff: i64,
    pub passed: bool,
    pub method: String,
    pub leaked: bool,
    pub witness: Option<Witness>,
    pub note: Option<String>,
}

impl CertificateReport {
    pub fn failed(region: Region, ring: String, cutoff: i64, method: &str, note: String) -> Self {
        CertificateReport {
            region,
            ring,
            cutoff,
            passed: false,
            method: method.into(),
            leaked: false,
            witness: None,
            note: Some(note),
        }
    }
}

/// Check `d h + h d − id` exactly; every surviving term must have filtration
/// above the cutoff. The first offending term is reported.
pub fn verify_contraction(c: &FreeComplex, h: &Contraction) -> CertificateReport {
    let ring = c.ring();
    let mut witness = None;
    'levels: for n in c.levels() {
        let r = c.rank(n);
        let mut res = Matrix::identity(ring, r).neg();
        if let (Some(d), Some(hn)) = (c.diff_ref(n + 1), h.at(n)) {
            if hn.rows() != c.rank(n + 1) || hn.cols() != r {
                return CertificateReport::failed(h.region, ring.name(), h.cutoff, &h.method, format!("h_{n} has the wrong shape"));
            }
            res = res.add(&d.mul(hn));
        }
        if let (Some(d), Some(hp)) = (c.diff_ref(n), h.at(n - 1)) {
            res = res.add(&hp.mul(d));
        }
        for (row, col, e) in res.entries() {
            for (deg, comp) in e.components() {
                let f = h.region.filtration(deg);
                if f <= h.cutoff {
                    witness = Some(Witness {
                        level: n,
                        row,
                        col,
                        degree: deg,
                        filtration: f,
                        residual: comp.to_string(),
                    });
                    break 'levels;
                }
            }
        }
    }
    CertificateReport {
        region: h.region,
        ring: ring.name(),
        cutoff: h.cutoff,
        passed: witness.is_none(),
        method: h.method.clone(),
        leaked: h.leaked,
        witness,
        note: None,
    }
}

fn constant_mat(m: &Matrix) -> Result<Mat> {
    let coeff = m.ring().coeff;
    let mut out = Mat::zeros(coeff, m.rows(), m.cols());
    for (r, c, e) in m.entries() {
        if e.is_zero() {
            continue;
        }
        let v = e
            .as_constant()
            .ok_or_else(|| Error::Unsupported(format!("entry {e} is not a constant")))?;
        out.set(r, c, v);
    }
    Ok(out)
}

/// Contraction of a complex whose differentials have constant entries,
/// by solving `d h_n = id − h_{n−1} d` level by level. Fails unless the
/// complex of coefficient vector spaces is acyclic.
pub fn scalar_contraction(c: &FreeComplex) -> Result<Vec<Matrix>> {
    let ring = c.ring();
    let coeff = ring.coeff;
    coeff.check_field()?;
    let mut hs: Vec<Mat> = Vec::new();
    for n in c.levels() {
        let r = c.rank(n);
        let mut target = Mat::identity(coeff, r);
        if let (Some(d), Some(hp)) = (c.diff_ref(n), hs.last()) {
            target = target.sub(&hp.mul(&constant_mat(d)?));
        }
        let up = match c.diff_ref(n + 1) {
            Some(d) => constant_mat(d)?,
            None => Mat::zeros(coeff, r, 0),
        };
        let mut h = Mat::zeros(coeff, up.cols(), r);
        for col in 0..r {
            let sol = up
                .solve(&target.column(col))
                .ok_or_else(|| Error::Unsupported(format!("complex is not acyclic at level {n}")))?;
            for (row, v) in sol.into_iter().enumerate() {
                h.set(row, col, v);
            }
        }
        hs.push(h);
    }
    Ok(hs
        .iter()
        .map(|m| {
            let rows = (0..m.rows())
                .map(|r| (0..m.cols()).map(|c| GradedElement::constant(ring, m.get(r, c).clone())).collect())
                .collect();
            if m.rows() == 0 || m.cols() == 0 {
                Matrix::zeros(ring, m.rows(), m.cols())
            } else {
                Matrix::from_rows(ring, rows)
            }
        })
        .collect())
}

pub fn scalar_certificate(c: &FreeComplex, region: Region, cutoff: i64) -> Result<Contraction> {
    Ok(Contraction {
        region,
        cutoff,
        slack: slack(c, region),
        lo: c.lo(),
        maps: scalar_contraction(c)?,
        leaked: false,
        method: "constant-coefficient contraction".into(),
    })
}

/// For a hypercube whose edges in direction `j` are all `f·id` with `f`
/// invertible in the region, `h = Σ sign·f⁻¹·ι_j` contracts the totalisation.
pub fn hypercube_contraction(
    v: &HyperComplex,
    order: &[usize],
    j: usize,
    region: Region,
    cutoff: i64,
) -> Result<Contraction> {
    let ring = v.ring();
    let total = v.totalize(order)?;
    let s = slack(&total, region);
    let mut f: Option<GradedElement> = None;
    for eps in (0..1usize << v.dim()).filter(|e| e & (1 << j) != 0) {
        let e = v.edge(eps, j);
        let fe = e.get(0, 0).clone();
        if e.rows() != e.cols() || e != Matrix::diagonal(ring, e.rows(), &fe) {
            return Err(Error::Unsupported(format!("direction {j} is not scalar at {eps:b}")));
        }
        match &f {
            Some(g) if *g != fe => {
                return Err(Error::Unsupported(format!("direction {j} has different edge maps")))
            }
            _ => f = Some(fe),
        }
    }
    let f = f.ok_or_else(|| Error::Shape("empty hypercube".into()))?;
    let (g, leaked) = element_inverse(&f, region, cutoff + s)
        .ok_or_else(|| Error::Unsupported(format!("{f} is not invertible in {region}")))?;
    let mut maps = Vec::new();
    for n in 0..=v.dim() as i64 {
        let mut h = Matrix::zeros(ring, total.rank(n + 1), total.rank(n));
        for eps in v.positions(n as usize) {
            if eps & (1 << j) != 0 {
                continue;
            }
            let up = eps | (1 << j);
            let sign = HyperComplex::sign(up, j, order);
            let gs = if sign < 0 { g.neg() } else { g.clone() };
            let (r0, c0) = (v.offset(up), v.offset(eps));
            for k in 0..v.rank_at(eps) {
                h.set(r0 + k, c0 + k, gs.clone());
            }
        }
        maps.push(h);
    }
    let (maps, l2): (Vec<Matrix>, Vec<bool>) = maps
        .iter()
        .map(|m| truncate_matrix(m, region, cutoff + s))
        .unzip();
    Ok(Contraction {
        region,
        cutoff,
        slack: s,
        lo: 0,
        maps,
        leaked: leaked || l2.into_iter().any(|x| x),
        method: format!("hypercube direction {j}"),
    })
}

/// First direction whose edge map is invertible in the region.
pub fn hypercube_certificate(
    v: &HyperComplex,
    order: &[usize],
    region: Region,
    cutoff: i64,
) -> Result<Contraction> {
    let mut last = None;
    for j in 0..v.dim() {
        match hypercube_contraction(v, order, j, region, cutoff) {
            Ok(h) => return Ok(h),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::Unsupported("zero-dimensional hypercube".into())))
}
