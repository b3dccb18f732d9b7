//! The diagram `𝒴` of a complex over the face poset, its limit `D`, and the
//! eight-region detector combining contraction certificates with the
//! pipeline into a verdict.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::cech::{face_poset, Face};
use crate::complex::{window_degrees, FreeComplex, HyperComplex};
use crate::contraction::{
    hypercube_certificate, scalar_certificate, slack, verify_contraction, CertificateReport, Contraction,
};
use crate::error::{Error, Result};
use crate::linalg::{betti, Mat};
use crate::matrix::Matrix;
use crate::novikov::{min_filtration, truncate, Region};
use crate::ring::{Degree, GradedElement, RingKind};
use crate::torus::{torus_complex, torus_contraction, TorusData};

/// `𝒴_n = ⊕_{r_n} D(k_n)` with the differentials of `C` acting entrywise.
#[derive(Clone, Debug)]
pub struct YDiagram {
    pub complex: FreeComplex,
    /// `k_n` for `n = lo..=hi`.
    pub k: Vec<i64>,
}

impl YDiagram {
    pub fn k_at(&self, n: i64) -> i64 {
        let lo = self.complex.lo();
        if n < lo {
            return self.k.first().copied().unwrap_or(0);
        }
        self.k.get((n - lo) as usize).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureViolation {
    pub face: Face,
    pub level: i64,
    pub row: usize,
    pub col: usize,
    pub degree: Degree,
}

/// `k_n = Σ_{j>n} a_j`, checked against every face: each entry of `D_n`
/// must carry `R[k_n F + T_F]` into `R[k_{n−1} F + T_F]`.
pub fn build_y(c: &FreeComplex) -> Result<YDiagram> {
    c.validate()?;
    let (lo, hi) = (c.lo(), c.hi());
    let mut k = vec![0; c.ranks().len()];
    for n in (lo..hi).rev() {
        let i = (n - lo) as usize;
        k[i] = k[i + 1] + c.amplitude(n + 1);
    }
    let y = YDiagram { complex: c.clone(), k };
    if let Some(v) = closure_violations(&y).into_iter().next() {
        return Err(Error::Internal(format!(
            "amplitude bug: D_{} entry ({}, {}) of degree {} leaves the region of {}",
            v.level, v.row, v.col, v.degree, v.face
        )));
    }
    Ok(y)
}

/// Entries whose degree shift takes some face region at level `n` outside
/// the region at level `n − 1`. A half-plane `−s·x ≥ −k` survives a shift by
/// `e` exactly when `k_{n−1} ≥ k_n + s·e_x`.
pub fn closure_violations(y: &YDiagram) -> Vec<ClosureViolation> {
    let c = &y.complex;
    let mut out = Vec::new();
    for n in c.lo() + 1..=c.hi() {
        let Some(d) = c.diff_ref(n) else { continue };
        let (kn, km) = (y.k_at(n), y.k_at(n - 1));
        for (row, col, e) in d.entries() {
            for deg in e.degrees() {
                for face in Face::ALL {
                    let (sx, sy) = face.sides();
                    if km < kn + sx * deg.x || km < kn + sy * deg.y {
                        out.push(ClosureViolation {
                            face,
                            level: n,
                            row,
                            col,
                            degree: deg,
                        });
                    }
                }
            }
        }
    }
    out
}

/// `lim 𝒴`: the coefficient complex with basis `e_i x^m`, `m ∈ [−k_n, k_n]²`.
#[derive(Clone, Debug)]
pub struct LimComplex {
    pub lo: i64,
    pub k: Vec<i64>,
    pub basis: Vec<Vec<(usize, Degree)>>,
    pub diffs: Vec<Mat>,
}

impl LimComplex {
    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    pub fn betti(&self) -> Vec<usize> {
        betti(&self.dims(), &self.diffs)
    }

    pub fn is_complex(&self) -> bool {
        self.diffs.windows(2).all(|w| w[0].mul(&w[1]).is_zero())
    }

    /// Restrict to basis elements of total degree `δ`, given basis shifts.
    pub fn piece(&self, shifts: &[Vec<Degree>], delta: Degree) -> (Vec<usize>, Vec<Mat>) {
        let keep: Vec<Vec<usize>> = self
            .basis
            .iter()
            .enumerate()
            .map(|(l, b)| {
                (0..b.len())
                    .filter(|&j| shifts[l][b[j].0] + b[j].1 == delta)
                    .collect()
            })
            .collect();
        let dims = keep.iter().map(Vec::len).collect();
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(l, d)| submatrix(d, &keep[l], &keep[l + 1]))
            .collect();
        (dims, diffs)
    }
}

fn submatrix(m: &Mat, rows: &[usize], cols: &[usize]) -> Mat {
    let mut out = Mat::zeros(m.coeff(), rows.len(), cols.len());
    for (i, &r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            out.set(i, j, m.get(r, c).clone());
        }
    }
    out
}

fn box_basis(rank: usize, k: i64) -> Vec<(usize, Degree)> {
    let mut b = Vec::new();
    for i in 0..rank {
        for m in window_degrees(k) {
            b.push((i, m));
        }
    }
    b
}

/// Box subcomplex with radii `k_n + extra`; `extra = 0` gives `lim 𝒴`.
pub fn box_complex(y: &YDiagram, extra: i64) -> Result<LimComplex> {
    let c = &y.complex;
    let ring = c.ring();
    if ring.kind != RingKind::Laurent {
        return Err(Error::UnsupportedDomain(format!(
            "lim 𝒴 needs one-dimensional components; got {}",
            ring.name()
        )));
    }
    ring.coeff.check_field()?;
    let k: Vec<i64> = y.k.iter().map(|k| k + extra).collect();
    let basis: Vec<Vec<(usize, Degree)>> = c
        .levels()
        .zip(&k)
        .map(|(n, &kn)| box_basis(c.rank(n), kn))
        .collect();
    let mut diffs = Vec::new();
    for n in c.lo() + 1..=c.hi() {
        let l = (n - c.lo()) as usize;
        let index: BTreeMap<(usize, Degree), usize> =
            basis[l - 1].iter().enumerate().map(|(j, &b)| (b, j)).collect();
        let d = c.diff(n);
        let mut m = Mat::zeros(ring.coeff, basis[l - 1].len(), basis[l].len());
        for (col, &(i, mdeg)) in basis[l].iter().enumerate() {
            for row in 0..d.rows() {
                for (deg, comp) in d.get(row, i).components() {
                    let coef = comp
                        .poly()
                        .terms()
                        .next()
                        .map(|(_, c)| c.clone())
                        .expect("non-zero component");
                    let target = index.get(&(row, mdeg + deg)).ok_or_else(|| {
                        Error::Internal(format!("restriction of D_{n} is not closed at {}", mdeg + deg))
                    })?;
                    m.add_to(*target, col, &coef);
                }
            }
        }
        diffs.push(m);
    }
    Ok(LimComplex {
        lo: c.lo(),
        k,
        basis,
        diffs,
    })
}

pub fn lim_y(y: &YDiagram) -> Result<LimComplex> {
    box_complex(y, 0)
}

/// Degree-`δ` piece of the cone of `D → tot Γ(𝒴)`, for gradable `C`.
/// Summands of `tot Γ(𝒴)` in level `m` are `(face x, C-level t, basis i)`
/// with `t − rk x = m`, present when `δ − s_i` lies in `k_t x + T_x`.
fn coaugmentation_cone_piece(
    y: &YDiagram,
    lim: &LimComplex,
    shifts: &[Vec<Degree>],
    delta: Degree,
) -> (Vec<usize>, Vec<Mat>) {
    let c = &y.complex;
    let p = face_poset();
    let coeff = c.ring().coeff;
    let faces = Face::ALL;
    let (dlo, dhi) = (c.lo(), c.hi());
    let tlo = dlo - 2;
    // tot Γ(𝒴) basis per level.
    let tot_basis = |m: i64| -> Vec<(usize, i64, usize)> {
        let mut v = Vec::new();
        for (x, f) in faces.iter().enumerate() {
            let t = m + p.rank[x] as i64;
            if t < dlo || t > dhi {
                continue;
            }
            let region = f.region(y.k_at(t));
            for i in 0..c.rank(t) {
                if region.contains(delta - shifts[(t - dlo) as usize][i]) {
                    v.push((x, t, i));
                }
            }
        }
        v
    };
    let d_basis = |m: i64| -> Vec<usize> {
        if m < dlo || m > dhi {
            return Vec::new();
        }
        let l = (m - dlo) as usize;
        (0..lim.basis[l].len())
            .filter(|&j| shifts[l][lim.basis[l][j].0] + lim.basis[l][j].1 == delta)
            .collect()
    };
    let coef_of = |e: &GradedElement, deg: Degree| {
        e.component(deg).poly().terms().next().map(|(_, c)| c.clone())
    };
    // Cone level m: D_{m−1} ⊕ T_m.
    let mut dims = Vec::new();
    let mut diffs = Vec::new();
    let lo = tlo;
    let hi = dhi + 1;
    for m in lo..=hi {
        dims.push(d_basis(m - 1).len() + tot_basis(m).len());
    }
    for m in lo + 1..=hi {
        let (sd, st) = (d_basis(m - 1), tot_basis(m));
        let (td, tt) = (d_basis(m - 2), tot_basis(m - 1));
        let mut out = Mat::zeros(coeff, td.len() + tt.len(), sd.len() + st.len());
        let tt_index: BTreeMap<(usize, i64, usize), usize> =
            tt.iter().enumerate().map(|(j, &b)| (b, td.len() + j)).collect();
        // −d_D on the D part.
        if m - 1 > dlo {
            let dm = &lim.diffs[(m - 1 - dlo - 1) as usize];
            for (cj, &j) in sd.iter().enumerate() {
                for (ri, &i) in td.iter().enumerate() {
                    let v = dm.get(i, j);
                    if !v.is_zero() {
                        out.set(ri, cj, -v.clone());
                    }
                }
            }
        }
        // Co-augmentation D_{m−1} → T_{m−1} into vertex summands.
        for (cj, &j) in sd.iter().enumerate() {
            let (i, _) = lim.basis[(m - 1 - dlo) as usize][j];
            for x in p.of_rank(0) {
                if let Some(&r) = tt_index.get(&(x, m - 1, i)) {
                    out.set(r, cj, coeff.one());
                }
            }
        }
        // tot Γ differential on the T part.
        for (cj, &(x, t, i)) in st.iter().enumerate() {
            let col = sd.len() + cj;
            if t > dlo {
                let d = c.diff(t);
                let sign = if p.rank[x].is_multiple_of(2) { 1 } else { -1 };
                let src_deg = delta - shifts[(t - dlo) as usize][i];
                for row in 0..d.rows() {
                    let e = d.get(row, i);
                    let tdeg = delta - shifts[(t - 1 - dlo) as usize][row];
                    if let (Some(v), Some(&r)) = (coef_of(e, tdeg - src_deg), tt_index.get(&(x, t - 1, row))) {
                        out.add_to(r, col, &if sign < 0 { -v } else { v });
                    }
                }
            }
            for z in 0..p.len() {
                let v = p.inc(z, x);
                if v == 0 {
                    continue;
                }
                if let Some(&r) = tt_index.get(&(z, t, i)) {
                    out.add_to(r, col, &coeff.from_i64(v));
                }
            }
        }
        diffs.push(out);
    }
    (dims, diffs)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DegreeComparison {
    pub degree: Degree,
    pub c_betti: Vec<usize>,
    pub d_betti: Vec<usize>,
    pub cone_acyclic: bool,
    /// `b_C ≤ b_D` levelwise, as forced by `C` being a homotopy retract of `D`.
    pub retract_bound: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PipelineReport {
    pub lo: i64,
    pub k: Vec<i64>,
    pub closure_ok: bool,
    /// `𝒴^S ≅ C`: the region of `S` is the whole plane at every level.
    pub top_entry_is_c: bool,
    pub d_dims: Vec<usize>,
    pub d_is_complex: bool,
    pub d_betti: Vec<usize>,
    pub gradable: bool,
    pub degreewise: Vec<DegreeComparison>,
    /// `D` and `C` have the same Betti numbers in every degree of the window.
    pub betti_equal: bool,
    pub consistent: bool,
}

pub fn run_pipeline(c: &FreeComplex, window: i64, parallel: bool) -> Result<PipelineReport> {
    let y = build_y(c)?;
    let lim = lim_y(&y)?;
    let closure_ok = closure_violations(&y).is_empty();
    let top_entry_is_c = Face::S.region(0).half_planes.is_empty();
    let d_is_complex = lim.is_complex();
    let shifts = c.basis_shifts();
    let mut degreewise = Vec::new();
    if let Some(sh) = &shifts {
        let f = |delta: &Degree| -> Result<DegreeComparison> {
            let cp = crate::complex::graded_piece(c, *delta)?;
            let c_betti = crate::complex::homology_ranks(&cp)?;
            let (dd, dm) = lim.piece(sh, *delta);
            let d_betti = betti(&dd, &dm);
            let (cd, cm) = coaugmentation_cone_piece(&y, &lim, sh, *delta);
            let cone_acyclic = betti(&cd, &cm).iter().all(|&b| b == 0);
            let retract_bound = c_betti.iter().zip(&d_betti).all(|(a, b)| a <= b);
            Ok(DegreeComparison {
                degree: *delta,
                c_betti,
                d_betti,
                cone_acyclic,
                retract_bound,
            })
        };
        let degs = window_degrees(window);
        degreewise = if parallel {
            degs.par_iter().map(f).collect::<Result<_>>()?
        } else {
            degs.iter().map(f).collect::<Result<_>>()?
        };
    }
    let degreewise_ok = degreewise.iter().all(|d| d.cone_acyclic && d.retract_bound);
    let betti_equal = shifts.is_some() && degreewise.iter().all(|d| d.c_betti == d.d_betti);
    Ok(PipelineReport {
        lo: c.lo(),
        k: y.k.clone(),
        closure_ok,
        top_entry_is_c,
        d_dims: lim.dims(),
        d_is_complex,
        d_betti: lim.betti(),
        gradable: shifts.is_some(),
        degreewise,
        betti_equal,
        consistent: closure_ok && top_entry_is_c && d_is_complex && degreewise_ok,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SupportAudit {
    pub heuristic: bool,
    pub method: String,
    pub window: i64,
    pub support: Vec<Degree>,
    pub full_width: bool,
}

/// Degrees of the window carrying homology. For gradable complexes these are
/// the non-zero Betti degrees; otherwise a degree counts when some monomial
/// cycle `e_i x^δ` is not a boundary in a box subcomplex reaching past the
/// window. Full width means the support spans `[−w, w]` in some coordinate.
pub fn support_audit(c: &FreeComplex, window: i64, parallel: bool) -> Result<SupportAudit> {
    let (support, method): (Vec<Degree>, &str) = if c.basis_shifts().is_some() {
        let t = crate::complex::betti_table(c, window, parallel)?;
        (t.nonzero_degrees(), "graded Betti numbers")
    } else {
        let y = build_y(c)?;
        let margin = 2;
        let bx = box_complex(&y, window + margin)?;
        let coeff = c.ring().coeff;
        let mut found = BTreeSet::new();
        for (l, basis) in bx.basis.iter().enumerate() {
            let out = if l > 0 { Some(&bx.diffs[l - 1]) } else { None };
            let inc = bx.diffs.get(l);
            for (j, &(_, deg)) in basis.iter().enumerate() {
                if deg.x.abs() > window || deg.y.abs() > window || found.contains(&deg) {
                    continue;
                }
                let is_cycle = out.is_none_or(|d| d.column(j).iter().all(|v| v.is_zero()));
                if !is_cycle {
                    continue;
                }
                let mut e = vec![coeff.zero(); basis.len()];
                e[j] = coeff.one();
                let boundary = inc.is_some_and(|d| d.solve(&e).is_some());
                if !boundary {
                    found.insert(deg);
                }
            }
        }
        (found.into_iter().collect(), "monomial cycles in a box subcomplex")
    };
    let span = |f: fn(&Degree) -> i64| {
        support.iter().map(f).min() == Some(-window) && support.iter().map(f).max() == Some(window)
    };
    let full_width = span(|d| d.x) || span(|d| d.y);
    Ok(SupportAudit {
        heuristic: true,
        method: method.into(),
        window,
        support,
        full_width,
    })
}

/// Extra structure that lets the detector build contractions.
#[derive(Clone, Debug, Default)]
pub struct DetectInput {
    pub hypercube: Option<(HyperComplex, Vec<usize>)>,
    pub torus: Option<TorusData>,
    pub user: BTreeMap<Region, Contraction>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "finitely dominated")]
    FinitelyDominated,
    #[serde(rename = "eight certificates ok, pipeline unavailable")]
    CertifiedPartial,
    #[serde(rename = "not finitely dominated (heuristic)")]
    NotFinitelyDominatedHeuristic,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DominationVerdict {
    pub ring: String,
    pub cutoff: i64,
    pub window: i64,
    pub certificates: Vec<CertificateReport>,
    pub all_certified: bool,
    pub pipeline: Option<PipelineReport>,
    pub pipeline_note: Option<String>,
    pub support_audit: Option<SupportAudit>,
    pub verdict: Verdict,
}

/// The truncated geometric series `u⁻¹ Σ_{k≤N} (1 − f u⁻¹)^k` around the unit
/// component of lowest filtration. It is a genuine inverse only when the
/// remaining terms raise the filtration; otherwise the residual is explicit.
fn naive_inverse(f: &GradedElement, region: Region, cutoff: i64) -> Option<GradedElement> {
    let comps = f.components();
    let (_, u) = comps
        .iter()
        .filter(|(_, c)| c.unit_inverse().is_some())
        .min_by_key(|(d, _)| region.filtration(**d))?;
    let ui = u.unit_inverse()?;
    let ring = f.ring();
    let q = GradedElement::one(ring).sub(&f.mul(&ui));
    let mut g = GradedElement::one(ring);
    let mut p = GradedElement::one(ring);
    for _ in 0..cutoff.max(1) {
        p = p.mul(&q);
        g = g.add(&p);
    }
    Some(ui.mul(&g))
}

fn fallback_candidate(c: &FreeComplex, region: Region, cutoff: i64) -> Contraction {
    let ring = c.ring();
    let maps = c
        .levels()
        .map(|n| {
            let mut h = Matrix::zeros(ring, c.rank(n + 1), c.rank(n));
            if c.rank(n) == 1 && c.rank(n + 1) == 1 && c.rank(n - 1) == 0 {
                let f = c.diff(n + 1).get(0, 0).clone();
                if let Some(g) = naive_inverse(&f, region, cutoff) {
                    h.set(0, 0, truncate(&g, region, cutoff + slack(c, region)).0);
                }
            }
            h
        })
        .collect();
    Contraction {
        region,
        cutoff,
        slack: slack(c, region),
        lo: c.lo(),
        maps,
        leaked: false,
        method: "candidate without convergence".into(),
    }
}

fn is_constant(c: &FreeComplex) -> bool {
    c.levels().all(|n| {
        c.diff_ref(n)
            .is_none_or(|d| d.entries().all(|(_, _, e)| e.is_zero() || e.as_constant().is_some()))
    })
}

/// A contraction for one region together with the complex it contracts.
/// `candidate` is set when no route applied and `h` is only a candidate.
#[derive(Clone, Debug)]
pub struct Attempt {
    pub complex: FreeComplex,
    pub contraction: Contraction,
    pub candidate: Option<String>,
}

/// Try user-supplied, torus, hypercube and constant-coefficient
/// contractions in turn, falling back to a candidate whose residual will be
/// reported.
pub fn build_contraction(c: &FreeComplex, input: &DetectInput, region: Region, cutoff: i64) -> Attempt {
    let built = |complex: &FreeComplex, contraction: Contraction| Attempt {
        complex: complex.clone(),
        contraction,
        candidate: None,
    };
    if let Some(h) = input.user.get(&region) {
        return built(c, h.clone());
    }
    let mut notes = Vec::new();
    if let Some(t) = &input.torus {
        match torus_contraction(t, region, cutoff) {
            Ok((tc, h)) => return built(&tc, h),
            Err(e) => notes.push(e.to_string()),
        }
    }
    let cube = input.hypercube.clone().or_else(|| {
        (c.ranks() == [1, 1]).then(|| {
            let f = c.diff(c.lo() + 1).get(0, 0).clone();
            (HyperComplex::scalar_edges(c.ring(), &[f]), vec![0])
        })
    });
    if let Some((v, order)) = &cube {
        match hypercube_certificate(v, order, region, cutoff) {
            Ok(h) => match v.totalize(order) {
                Ok(t) => return built(&t.shift(c.lo()), Contraction { lo: c.lo(), ..h }),
                Err(e) => notes.push(e.to_string()),
            },
            Err(e) => notes.push(e.to_string()),
        }
    }
    if is_constant(c) {
        match scalar_certificate(c, region, cutoff) {
            Ok(h) => return built(c, h),
            Err(e) => notes.push(e.to_string()),
        }
    }
    notes.push("no contraction could be constructed".into());
    Attempt {
        complex: c.clone(),
        contraction: fallback_candidate(c, region, cutoff),
        candidate: Some(notes.join("; ")),
    }
}

pub fn certify_region(c: &FreeComplex, input: &DetectInput, region: Region, cutoff: i64) -> CertificateReport {
    let a = build_contraction(c, input, region, cutoff);
    let mut rep = verify_contraction(&a.complex, &a.contraction);
    rep.note = a.candidate;
    rep
}

pub fn detect(c: &FreeComplex, input: &DetectInput, cutoff: i64, window: i64, parallel: bool) -> Result<DominationVerdict> {
    if cutoff < 1 || window < 1 {
        return Err(Error::Shape("cutoff and window must be at least 1".into()));
    }
    c.validate()?;
    let base = match &input.torus {
        Some(t) => torus_complex(t, (Degree::E1, Degree::E2))?,
        None => c.clone(),
    };
    let certificates: Vec<CertificateReport> = if parallel {
        Region::ALL.par_iter().map(|&r| certify_region(&base, input, r, cutoff)).collect()
    } else {
        Region::ALL.iter().map(|&r| certify_region(&base, input, r, cutoff)).collect()
    };
    let all_certified = certificates.iter().all(|r| r.passed);
    let (pipeline, pipeline_note, support) = if base.ring().kind == RingKind::Laurent {
        let p = run_pipeline(&base, window, parallel)?;
        let a = support_audit(&base, window, parallel)?;
        (Some(p), None, Some(a))
    } else {
        (
            None,
            Some(format!("pipeline needs the Laurent instance; {} gives a partial verdict", base.ring().name())),
            None,
        )
    };
    let verdict = match (&pipeline, &support) {
        _ if all_certified && pipeline.as_ref().is_some_and(|p| p.consistent) => Verdict::FinitelyDominated,
        (None, _) if all_certified => Verdict::CertifiedPartial,
        (_, Some(a)) if a.full_width => Verdict::NotFinitelyDominatedHeuristic,
        _ => Verdict::Inconclusive,
    };
    Ok(DominationVerdict {
        ring: base.ring().name(),
        cutoff,
        window,
        certificates,
        all_certified,
        pipeline,
        pipeline_note,
        support_audit: support,
        verdict,
    })
}

/// Lowest filtration among the entries of a contraction, for diagnostics.
pub fn contraction_min_filtration(h: &Contraction) -> Option<i64> {
    h.maps
        .iter()
        .flat_map(|m| m.entries().filter_map(|(_, _, e)| min_filtration(e, h.region)).collect::<Vec<_>>())
        .min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_laurent, Involution};
    use crate::scalar::Coeff;

    const C: Coeff = Coeff::Prime(101);

    fn one_minus_x() -> FreeComplex {
        let l = make_laurent(C).unwrap();
        FreeComplex::two_term(&GradedElement::parse(&l, "1 - x").unwrap())
    }

    #[test]
    fn k_sequence() {
        let l = make_laurent(C).unwrap();
        let y = build_y(&FreeComplex::concentrated(&l, 3, 2)).unwrap();
        assert_eq!(y.k, vec![0]);
        let y = build_y(&one_minus_x()).unwrap();
        assert_eq!(y.k, vec![1, 0]);
        assert!(closure_violations(&y).is_empty());
    }

    #[test]
    fn broken_k_is_caught() {
        let y = YDiagram {
            complex: one_minus_x(),
            k: vec![0, 0],
        };
        let v = closure_violations(&y);
        assert!(v.iter().any(|v| v.face == Face::Vbr || v.face == Face::Er));
        assert!(v.iter().all(|v| v.face.sides().0 == 1));
    }

    #[test]
    fn lim_dimensions() {
        let l = make_laurent(C).unwrap();
        let y = YDiagram {
            complex: FreeComplex::concentrated(&l, 0, 1),
            k: vec![1],
        };
        assert_eq!(lim_y(&y).unwrap().dims(), vec![9]);
        let lim = lim_y(&build_y(&one_minus_x()).unwrap()).unwrap();
        assert_eq!(lim.dims(), vec![9, 1]);
        assert_eq!(lim.betti(), vec![8, 0]);
    }

    #[test]
    fn multiplication_by_x_is_dominated() {
        let l = make_laurent(C).unwrap();
        let c = FreeComplex::two_term(&GradedElement::parse(&l, "x").unwrap());
        let v = detect(&c, &DetectInput::default(), 8, 2, false).unwrap();
        assert!(v.all_certified);
        let p = v.pipeline.as_ref().unwrap();
        assert!(p.consistent, "{p:?}");
        assert!(!p.betti_equal);
        assert_eq!(p.d_betti, vec![8, 0]);
        assert_eq!(v.verdict, Verdict::FinitelyDominated);
    }

    #[test]
    fn one_minus_x_negative_control() {
        let v = detect(&one_minus_x(), &DetectInput::default(), 8, 2, false).unwrap();
        let failed: Vec<Region> = v.certificates.iter().filter(|r| !r.passed).map(|r| r.region).collect();
        assert_eq!(failed, vec![Region::EdgeY, Region::EdgeYInv]);
        let w = v.certificates.iter().find(|r| !r.passed).unwrap().witness.clone().unwrap();
        assert_eq!(w.degree, Degree::new(9, 0));
        assert!(v.support_audit.as_ref().unwrap().full_width);
        assert_eq!(v.verdict, Verdict::NotFinitelyDominatedHeuristic);
    }

    #[test]
    fn reindexing_permutes_certificates() {
        let c = one_minus_x();
        let v = detect(&c, &DetectInput::default(), 8, 1, false).unwrap();
        for g in [Involution::SWAP, Involution::FLIP_X, Involution::ROTATE] {
            let w = detect(&c.reindex(g), &DetectInput::default(), 8, 1, false).unwrap();
            for r in &v.certificates {
                let image = w.certificates.iter().find(|s| s.region == r.region.reindex(g)).unwrap();
                assert_eq!(image.passed, r.passed, "{g:?} {}", r.region);
            }
            assert_eq!(w.verdict, v.verdict);
        }
    }
}
