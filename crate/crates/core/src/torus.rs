//! Algebraic tori `T(α, β; H)`, the Mather map, canonical resolutions and
//! contractions of tori over the Novikov regions.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{window_degrees, FreeComplex};
use crate::contraction::{scalar_contraction, slack, Contraction};
use crate::error::{Error, Result};
use crate::linalg::{betti, Mat};
use crate::matrix::Matrix;
use crate::novikov::{geometric_inverse, truncate_matrix, Region};
use crate::ring::{Degree, GradedElement, Ring};
use crate::tensor::{GradedMap, TensorVec};

/// The `R₀₀`-complex `D`, acting on `D ⊗_{R₀₀} R`.
#[derive(Clone, Debug)]
pub struct DComplex {
    pub ranks: Vec<usize>,
    /// `diffs[k]`: `D_{lo+k+1} → D_{lo+k}`.
    pub diffs: Vec<GradedMap>,
    /// `D` is free over `R₀₀` and stored at slot 0.
    pub free: bool,
}

/// Data `(C, D, α, β, H)` with `dH + Hd = βα − id`; all levels start at `lo`.
#[derive(Clone, Debug)]
pub struct TorusData {
    pub c: FreeComplex,
    pub d: DComplex,
    pub alpha: Vec<GradedMap>,
    pub beta: Vec<GradedMap>,
    /// `h[k]`: `C_{lo+k} → C_{lo+k+1}`.
    pub h: Vec<GradedMap>,
    pub label: String,
}

pub type TorusVec = [TensorVec; 4];

impl TorusData {
    pub fn new(
        c: FreeComplex,
        d: DComplex,
        alpha: Vec<GradedMap>,
        beta: Vec<GradedMap>,
        h: Vec<GradedMap>,
        label: &str,
    ) -> Result<Self> {
        let n = c.ranks().len();
        if d.ranks.len() != n || alpha.len() != n || beta.len() != n || h.len() != n {
            return Err(Error::Shape("C, D, α, β and H must cover the same levels".into()));
        }
        let t = TorusData {
            c,
            d,
            alpha,
            beta,
            h,
            label: label.into(),
        };
        t.validate(1)?;
        Ok(t)
    }

    /// `T(id, id; 0)` over `C`.
    pub fn canonical(c: &FreeComplex) -> Self {
        let ring = c.ring();
        let levels: Vec<i64> = c.levels().collect();
        let id: Vec<GradedMap> = levels.iter().map(|&n| GradedMap::identity(ring, c.rank(n))).collect();
        let h = levels
            .iter()
            .map(|&n| GradedMap::zero(ring, c.rank(n + 1), c.rank(n)))
            .collect();
        TorusData {
            c: c.clone(),
            d: DComplex {
                ranks: c.ranks().to_vec(),
                diffs: levels[1..].iter().map(|&n| GradedMap::Uniform(c.diff(n))).collect(),
                free: false,
            },
            alpha: id.clone(),
            beta: id,
            h,
            label: "canonical".into(),
        }
    }

    pub fn ring(&self) -> &Ring {
        self.c.ring()
    }

    pub fn lo(&self) -> i64 {
        self.c.lo()
    }

    pub fn hi(&self) -> i64 {
        self.c.hi()
    }

    fn idx(&self, n: i64) -> Option<usize> {
        (n >= self.lo() && n <= self.hi()).then(|| (n - self.lo()) as usize)
    }

    pub fn c_rank(&self, n: i64) -> usize {
        self.c.rank(n)
    }

    pub fn d_rank(&self, n: i64) -> usize {
        self.idx(n).map_or(0, |k| self.d.ranks[k])
    }

    fn zero_d(&self, n: i64) -> TensorVec {
        TensorVec::zero(self.ring(), self.d_rank(n))
    }

    fn zero_c(&self, n: i64) -> TensorVec {
        TensorVec::zero(self.ring(), self.c_rank(n))
    }

    /// `d^D: D_n → D_{n−1}`.
    pub fn d_diff(&self, n: i64, v: &TensorVec) -> TensorVec {
        match (self.idx(n), self.idx(n - 1)) {
            (Some(k), Some(_)) => self.d.diffs[k - 1].apply(v),
            _ => self.zero_d(n - 1),
        }
    }

    pub fn c_diff(&self, n: i64, v: &TensorVec) -> TensorVec {
        match self.c.diff_ref(n) {
            Some(m) => GradedMap::Uniform(m.clone()).apply(v),
            None => self.zero_c(n - 1),
        }
    }

    pub fn alpha_at(&self, n: i64, v: &TensorVec) -> TensorVec {
        self.idx(n).map_or_else(|| self.zero_d(n), |k| self.alpha[k].apply(v))
    }

    pub fn beta_at(&self, n: i64, v: &TensorVec) -> TensorVec {
        self.idx(n).map_or_else(|| self.zero_c(n), |k| self.beta[k].apply(v))
    }

    /// `H: C_n → C_{n+1}`.
    pub fn h_at(&self, n: i64, v: &TensorVec) -> TensorVec {
        match (self.idx(n), self.idx(n + 1)) {
            (Some(k), Some(_)) => self.h[k].apply(v),
            _ => self.zero_c(n + 1),
        }
    }

    /// `α χ_e β` on `D_n`.
    pub fn a_map(&self, n: i64, e: Degree, v: &TensorVec) -> TensorVec {
        self.alpha_at(n, &self.beta_at(n, v).chi(e))
    }

    /// `α (χ₁ H χ₂ − χ₂ H χ₁) β: D_n → D_{n+1}`.
    pub fn k_map(&self, n: i64, dirs: (Degree, Degree), v: &TensorVec) -> TensorVec {
        let b = self.beta_at(n, v);
        let t1 = self.h_at(n, &b.chi(dirs.1)).chi(dirs.0);
        let t2 = self.h_at(n, &b.chi(dirs.0)).chi(dirs.1);
        self.alpha_at(n + 1, &t1.sub(&t2))
    }

    /// Block ranks of `T_n = D_{n−2} ⊕ D_{n−1} ⊕ D_{n−1} ⊕ D_n`.
    pub fn torus_blocks(&self, n: i64) -> [usize; 4] {
        [self.d_rank(n - 2), self.d_rank(n - 1), self.d_rank(n - 1), self.d_rank(n)]
    }

    pub fn torus_levels(&self) -> std::ops::RangeInclusive<i64> {
        self.lo()..=self.hi() + 2
    }

    /// The torus differential `T_n → T_{n−1}` with torus directions `dirs`.
    pub fn torus_d(&self, n: i64, dirs: (Degree, Degree), v: &TorusVec) -> TorusVec {
        let (e1, e2) = dirs;
        let [x0, x1, x2, x3] = v;
        let y0 = self.d_diff(n - 2, x0);
        let y1 = x0.sub(&self.a_map(n - 2, e1, x0)).sub(&self.d_diff(n - 1, x1));
        let y2 = x0.sub(&self.a_map(n - 2, e2, x0)).sub(&self.d_diff(n - 1, x2));
        let y3 = self
            .k_map(n - 2, dirs, x0)
            .add(&x1.sub(&self.a_map(n - 1, e2, x1)))
            .sub(&x2.sub(&self.a_map(n - 1, e1, x2)))
            .add(&self.d_diff(n, x3));
        [y0, y1, y2, y3]
    }

    /// Slot degrees used for generators on the `D` side.
    fn d_slots(&self, window: i64) -> Vec<Degree> {
        if self.d.free {
            vec![Degree::ZERO]
        } else {
            window_degrees(window)
        }
    }

    /// Check `d² = 0` on `D`, the chain-map property of `α`, `β` and the
    /// homotopy `dH + Hd = βα − id` on slot generators with `σ ∈ [−w, w]²`.
    pub fn validate(&self, window: i64) -> Result<()> {
        let ring = self.ring().clone();
        for n in self.c.levels() {
            for sigma in window_degrees(window) {
                for i in 0..self.c_rank(n) {
                    let g = TensorVec::slot(&ring, self.c_rank(n), i, sigma, GradedElement::one(&ring));
                    let lhs = self.d_diff(n, &self.alpha_at(n, &g));
                    let rhs = self.alpha_at(n - 1, &self.c_diff(n, &g));
                    if lhs != rhs {
                        return Err(Error::NotAChainMap(format!("α at level {n}, generator e{i}@{sigma}")));
                    }
                    let hom = self
                        .c_diff(n + 1, &self.h_at(n, &g))
                        .add(&self.h_at(n - 1, &self.c_diff(n, &g)));
                    let ba = self.beta_at(n, &self.alpha_at(n, &g)).sub(&g);
                    if hom != ba {
                        return Err(Error::NotAChainMap(format!(
                            "dH + Hd ≠ βα − id at level {n}, generator e{i}@{sigma}"
                        )));
                    }
                }
            }
            for sigma in self.d_slots(window) {
                for i in 0..self.d_rank(n) {
                    let g = TensorVec::slot(&ring, self.d_rank(n), i, sigma, GradedElement::one(&ring));
                    if !self.d_diff(n - 1, &self.d_diff(n, &g)).is_zero() {
                        return Err(Error::NotAComplex(format!("D at level {n}")));
                    }
                    let lhs = self.c_diff(n, &self.beta_at(n, &g));
                    let rhs = self.beta_at(n - 1, &self.d_diff(n, &g));
                    if lhs != rhs {
                        return Err(Error::NotAChainMap(format!("β at level {n}, generator e{i}@{sigma}")));
                    }
                }
            }
        }
        Ok(())
    }

    fn torus_generators(&self, n: i64, window: i64) -> Vec<(usize, TorusVec)> {
        let ring = self.ring();
        let blocks = self.torus_blocks(n);
        let levels = [n - 2, n - 1, n - 1, n];
        let mut out = Vec::new();
        for b in 0..4 {
            for sigma in self.d_slots(window) {
                for i in 0..blocks[b] {
                    let mut v: TorusVec = std::array::from_fn(|k| TensorVec::zero(ring, self.d_rank(levels[k])));
                    v[b] = TensorVec::slot(ring, blocks[b], i, sigma, GradedElement::one(ring));
                    out.push((b, v));
                }
            }
        }
        out
    }

    /// `d² = 0` on the torus, checked on generators.
    pub fn check_torus(&self, dirs: (Degree, Degree), window: i64) -> Result<usize> {
        let mut count = 0;
        for n in self.torus_levels() {
            for (b, g) in self.torus_generators(n, window) {
                let dd = self.torus_d(n - 1, dirs, &self.torus_d(n, dirs, &g));
                if dd.iter().any(|x| !x.is_zero()) {
                    return Err(Error::NotAComplex(format!("torus d² ≠ 0 at level {n}, block {}", b + 1)));
                }
                count += 1;
            }
        }
        Ok(count)
    }

    /// The Mather map `λ: T(id, id; 0) → T(α, β; H)` at level `n`.
    pub fn mather(&self, n: i64, dirs: (Degree, Degree), v: &TorusVec) -> TorusVec {
        let (m1, m2) = dirs;
        let [x0, x1, x2, x3] = v;
        let y0 = self.alpha_at(n - 2, x0);
        let hx0 = self.h_at(n - 2, x0);
        let y1 = self.alpha_at(n - 1, &hx0.chi(m1)).neg().add(&self.alpha_at(n - 1, x1));
        let y2 = self.alpha_at(n - 1, &hx0.chi(m2)).neg().add(&self.alpha_at(n - 1, x2));
        let k = self
            .h_at(n - 1, &hx0.chi(m2))
            .chi(m1)
            .sub(&self.h_at(n - 1, &hx0.chi(m1)).chi(m2));
        let y3 = self
            .alpha_at(n, &k)
            .add(&self.alpha_at(n, &self.h_at(n - 1, x1).chi(m2)))
            .sub(&self.alpha_at(n, &self.h_at(n - 1, x2).chi(m1)))
            .add(&self.alpha_at(n, x3));
        [y0, y1, y2, y3]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MatherReport {
    pub generators: usize,
    pub chain_map: bool,
    pub triangular: bool,
    pub diagonal_alpha: bool,
    pub failures: Vec<String>,
}

impl MatherReport {
    pub fn ok(&self) -> bool {
        self.chain_map && self.triangular && self.diagonal_alpha
    }
}

/// `λ d = d λ`, lower triangularity and the diagonal `α*`, on generators of
/// `T(id, id; 0)` with slots in `[−w, w]²`.
pub fn mather_map(t: &TorusData, window: i64) -> MatherReport {
    let dirs = (Degree::E1, Degree::E2);
    let source = TorusData::canonical(&t.c);
    let mut rep = MatherReport {
        generators: 0,
        chain_map: true,
        triangular: true,
        diagonal_alpha: true,
        failures: Vec::new(),
    };
    for n in source.torus_levels() {
        let levels = [n - 2, n - 1, n - 1, n];
        for (b, g) in source.torus_generators(n, window) {
            rep.generators += 1;
            let lhs = t.mather(n - 1, dirs, &source.torus_d(n, dirs, &g));
            let rhs = t.torus_d(n, dirs, &t.mather(n, dirs, &g));
            for k in 0..4 {
                if lhs[k] != rhs[k] {
                    rep.chain_map = false;
                    rep.failures.push(format!("λd ≠ dλ at level {n}, source block {}, target block {}", b + 1, k + 1));
                }
            }
            let img = t.mather(n, dirs, &g);
            for k in 0..b {
                if !img[k].is_zero() {
                    rep.triangular = false;
                    rep.failures.push(format!("block ({},{}) of λ is nonzero", k + 1, b + 1));
                }
            }
            if img[b] != t.alpha_at(levels[b], &g[b]) {
                rep.diagonal_alpha = false;
                rep.failures.push(format!("diagonal block {} of λ is not α*", b + 1));
            }
        }
    }
    rep
}

#[derive(Clone, Debug, Serialize)]
pub struct ResolutionReport {
    pub window: i64,
    pub radii: Vec<i64>,
    pub degrees: usize,
    pub max_dimension: usize,
    pub acyclic: bool,
    pub failures: Vec<String>,
}

/// Certify that `cone(κ: T(id, id; 0) → C)` is acyclic in every total degree
/// of the window. The degree-`δ` piece is the union of the finite
/// subcomplexes spanned by the torus cells whose slots lie in boxes growing
/// with the homological level; each such subcomplex is checked exact.
/// Needs a gradable complex over a ring with one monomial per degree.
pub fn canonical_resolution(c: &FreeComplex, window: i64, radii: &[i64]) -> Result<ResolutionReport> {
    let shifts = c
        .basis_shifts()
        .ok_or_else(|| Error::Unsupported("canonical resolution certificate needs a gradable complex".into()))?;
    let ring = c.ring().clone();
    crate::complex::monomial_in_degree(&ring, Degree::ZERO)?
        .ok_or_else(|| Error::Unsupported("ring without unit monomials".into()))?;
    let t = TorusData::canonical(c);
    let dirs = (Degree::E1, Degree::E2);
    let amp = c.levels().map(|n| c.amplitude(n)).max().unwrap_or(0);
    let mut rep = ResolutionReport {
        window,
        radii: radii.to_vec(),
        degrees: 0,
        max_dimension: 0,
        acyclic: true,
        failures: Vec::new(),
    };
    for delta in window_degrees(window) {
        rep.degrees += 1;
        for &r0 in radii {
            let radius = |m: i64| r0 + (c.hi() - m) * amp;
            let piece = cone_piece(&t, &shifts, delta, dirs, radius)?;
            rep.max_dimension = rep.max_dimension.max(piece.0.iter().sum());
            let b = betti(&piece.0, &piece.1);
            if b.iter().any(|&x| x != 0) {
                rep.acyclic = false;
                rep.failures.push(format!("degree {delta}, radius {r0}: homology {b:?}"));
            }
        }
    }
    Ok(rep)
}

type CellKey = (u8, i64, usize, Degree);

/// Finite piece of `cone(κ)_n = T_{n−1} ⊕ C_n` in total degree `delta`.
fn cone_piece(
    t: &TorusData,
    shifts: &[Vec<Degree>],
    delta: Degree,
    dirs: (Degree, Degree),
    radius: impl Fn(i64) -> i64,
) -> Result<(Vec<usize>, Vec<Mat>)> {
    let ring = t.ring().clone();
    let coeff = ring.coeff;
    let shift = |m: i64, i: usize| shifts[(m - t.lo()) as usize][i];
    let inside = |m: i64, s: Degree| {
        let r = radius(m);
        s.x.abs() <= r && s.y.abs() <= r
    };
    // Cells of the torus at level n (blocks 0..4) and C at level n (block 4).
    let cone_lo = t.lo();
    let cone_hi = t.hi() + 3;
    let mut bases: Vec<Vec<CellKey>> = Vec::new();
    for n in cone_lo..=cone_hi {
        let mut cells = Vec::new();
        let tn = n - 1;
        let levels = [tn - 2, tn - 1, tn - 1, tn];
        for (b, &m) in levels.iter().enumerate() {
            if t.c_rank(m) == 0 {
                continue;
            }
            let r = radius(m);
            for x in -r..=r {
                for y in -r..=r {
                    let s = Degree::new(x, y);
                    let corners: Vec<Degree> = match b {
                        0 => vec![s, s - dirs.0, s - dirs.1, s - dirs.0 - dirs.1],
                        1 => vec![s, s - dirs.1],
                        2 => vec![s, s - dirs.0],
                        _ => vec![s],
                    };
                    if corners.iter().all(|&q| inside(m, q)) {
                        for i in 0..t.c_rank(m) {
                            cells.push((b as u8, m, i, s));
                        }
                    }
                }
            }
        }
        for i in 0..t.c_rank(n) {
            cells.push((4, n, i, Degree::ZERO));
        }
        bases.push(cells);
    }
    let index: Vec<BTreeMap<CellKey, usize>> = bases
        .iter()
        .map(|cells| cells.iter().enumerate().map(|(k, c)| (*c, k)).collect())
        .collect();
    let unit = |d: Degree| -> Result<GradedElement> {
        let m = crate::complex::monomial_in_degree(&ring, d)?.expect("unit monomial");
        Ok(GradedElement::monomial(&ring, m, coeff.one()))
    };
    let mut diffs = Vec::new();
    for n in cone_lo + 1..=cone_hi {
        let src = &bases[(n - cone_lo) as usize];
        let tgt = &index[(n - 1 - cone_lo) as usize];
        let mut mat = Mat::zeros(coeff, tgt.len(), src.len());
        let tn = n - 1;
        for (col, &(b, m, i, s)) in src.iter().enumerate() {
            let z = unit(delta - shift(m, i))?;
            let mut out: Vec<(CellKey, GradedElement)> = Vec::new();
            if b == 4 {
                // C part: d_C.
                let v = TensorVec::slot(&ring, t.c_rank(m), i, Degree::ZERO, z);
                for (k, _, e) in t.c_diff(m, &v).slots() {
                    out.push(((4, m - 1, k, Degree::ZERO), e.clone()));
                }
            } else {
                // Torus part: −d_T, and κ on the vertex block.
                let levels = [tn - 2, tn - 1, tn - 1, tn];
                let mut v: TorusVec = std::array::from_fn(|k| TensorVec::zero(&ring, t.c_rank(levels[k])));
                v[b as usize] = TensorVec::slot(&ring, t.c_rank(m), i, s, z.clone());
                let img = t.torus_d(tn, dirs, &v);
                let lv = [tn - 3, tn - 2, tn - 2, tn - 1];
                for (k, part) in img.iter().enumerate() {
                    for (j, sj, e) in part.slots() {
                        out.push(((k as u8, lv[k], j, sj), e.neg()));
                    }
                }
                if b == 3 {
                    out.push(((4, m, i, Degree::ZERO), z));
                }
            }
            for (key, e) in out {
                let (deg_part, c) = {
                    let mut terms = e.poly().terms();
                    let (mono, c) = terms.next().expect("nonzero");
                    debug_assert!(terms.next().is_none());
                    (ring.monomial_degree(mono), c.clone())
                };
                let expect = delta - shift(key.1, key.2);
                if deg_part != expect {
                    return Err(Error::Internal(format!("cone piece left degree {delta}")));
                }
                let row = tgt.get(&key).ok_or_else(|| {
                    Error::Internal(format!("box subcomplex is not closed at cell {key:?}"))
                })?;
                mat.add_to(*row, col, &c);
            }
        }
        diffs.push(mat);
    }
    Ok((bases.iter().map(Vec::len).collect(), diffs))
}

/// The torus as a complex of free `R`-modules when `D` is free over `R₀₀`.
pub fn torus_complex(t: &TorusData, dirs: (Degree, Degree)) -> Result<FreeComplex> {
    if !t.d.free {
        return Err(Error::Unsupported("torus matrices need D free over R₀₀".into()));
    }
    let ring = t.ring().clone();
    let levels: Vec<i64> = t.torus_levels().collect();
    let ranks: Vec<usize> = levels.iter().map(|&n| t.torus_blocks(n).iter().sum()).collect();
    let mut diffs = Vec::new();
    for &n in &levels[1..] {
        let src = t.torus_blocks(n);
        let tgt = t.torus_blocks(n - 1);
        let mut m = Matrix::zeros(&ring, ranks[(n - 1 - t.lo()) as usize], ranks[(n - t.lo()) as usize]);
        let src_lv = [n - 2, n - 1, n - 1, n];
        let mut c0 = 0;
        for b in 0..4 {
            for i in 0..src[b] {
                let mut v: TorusVec = std::array::from_fn(|k| TensorVec::zero(&ring, t.d_rank(src_lv[k])));
                v[b] = TensorVec::slot(&ring, src[b], i, Degree::ZERO, GradedElement::one(&ring));
                let img = t.torus_d(n, dirs, &v);
                let mut r0 = 0;
                for (k, part) in img.iter().enumerate() {
                    for (row, e) in part.to_free()?.into_iter().enumerate() {
                        m.set(r0 + row, c0 + i, e);
                    }
                    r0 += tgt[k];
                }
            }
            c0 += src[b];
        }
        diffs.push(m);
    }
    FreeComplex::new(&ring, t.lo(), ranks, diffs)
}

/// `α χ_e β` on `D_n` as a matrix over `R`.
fn a_matrix(t: &TorusData, n: i64, e: Degree) -> Result<Matrix> {
    let ring = t.ring();
    let r = t.d_rank(n);
    let mut m = Matrix::zeros(ring, r, r);
    for i in 0..r {
        let g = TensorVec::slot(ring, r, i, Degree::ZERO, GradedElement::one(ring));
        for (k, e) in t.a_map(n, e, &g).to_free()?.into_iter().enumerate() {
            m.set(k, i, e);
        }
    }
    Ok(m)
}

/// Contraction of the torus built with the region's directions, from the
/// geometric inverse `P` of `id − αχ₁β`: `p` places `P` and `−P`, `q = dp + pd`
/// is unipotent, and `h = q⁻¹ p` with `q⁻¹ = Σ_{k≤3} (id − q)^k`.
/// Returns the torus complex together with `h`.
pub fn torus_contraction(t: &TorusData, region: Region, cutoff: i64) -> Result<(FreeComplex, Contraction)> {
    let dirs = region.directions();
    let tc = torus_complex(t, dirs)?;
    let ring = t.ring().clone();
    let s = slack(&tc, region);
    // Every product below has at most eight factors with negative filtration.
    let work = cutoff + 8 * s + s;
    let mut p_inv: BTreeMap<i64, Matrix> = BTreeMap::new();
    let mut leaked = false;
    for n in t.lo()..=t.hi() {
        let a = a_matrix(t, n, dirs.0)?;
        let (p, l) = geometric_inverse(&a, region, work)?;
        leaked |= l;
        p_inv.insert(n, p);
    }
    let get_p = |n: i64| p_inv.get(&n).cloned();
    let trunc = |m: &Matrix, leaked: &mut bool| {
        let (x, l) = truncate_matrix(m, region, work);
        *leaked |= l;
        x
    };
    // p_n: T_n → T_{n+1}.
    let mut p: BTreeMap<i64, Matrix> = BTreeMap::new();
    for n in tc.lo() - 1..=tc.hi() + 1 {
        let src = t.torus_blocks(n);
        let tgt = t.torus_blocks(n + 1);
        let mut blocks: Vec<Vec<Option<Matrix>>> = vec![vec![None; 4]; 4];
        if let Some(pm) = get_p(n - 1) {
            blocks[0][1] = Some(pm);
        }
        if let Some(pm) = get_p(n) {
            blocks[2][3] = Some(pm.neg());
        }
        p.insert(n, Matrix::blocks(&ring, &tgt, &src, &blocks));
    }
    let diff = |n: i64| -> Matrix {
        tc.diff_ref(n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(&ring, tc.rank(n - 1), tc.rank(n)))
    };
    let mut maps = Vec::new();
    let mut qinv: BTreeMap<i64, Matrix> = BTreeMap::new();
    for n in tc.lo()..=tc.hi() + 1 {
        let q = trunc(&diff(n + 1).mul(&p[&n]).add(&p[&(n - 1)].mul(&diff(n))), &mut leaked);
        let r = tc.rank(n);
        let nil = Matrix::identity(&ring, r).sub(&q);
        let mut acc = Matrix::identity(&ring, r);
        let mut pow = Matrix::identity(&ring, r);
        for _ in 0..3 {
            pow = trunc(&pow.mul(&nil), &mut leaked);
            acc = acc.add(&pow);
        }
        let fourth = trunc(&pow.mul(&nil), &mut leaked);
        if !fourth.is_zero() {
            return Err(Error::Internal(format!(
                "id − q is not nilpotent of order 4 at torus level {n}"
            )));
        }
        qinv.insert(n, acc);
    }
    for n in tc.levels() {
        let h = trunc(&qinv[&(n + 1)].mul(&p[&n]), &mut leaked);
        let (h, l) = truncate_matrix(&h, region, cutoff + s);
        leaked |= l;
        maps.push(h);
    }
    Ok((
        tc,
        Contraction {
            region,
            cutoff,
            slack: s,
            lo: t.lo(),
            maps,
            leaked,
            method: format!("torus with directions {} and {}", dirs.0, dirs.1),
        },
    ))
}

/// `C = R ⊗_{R₀₀} D₀` for a complex `D₀` with constant entries over a ring
/// with unit monomials, with `α` forgetting units, `β` the inclusion and
/// `H = (βα − id)(h₀ ⊗ 1)` from a contraction `h₀` of `D₀`.
pub fn degree_zero_torus(d0: &FreeComplex) -> Result<TorusData> {
    let ring = d0.ring().clone();
    let h0 = scalar_contraction(d0)?;
    let levels: Vec<i64> = d0.levels().collect();
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    let mut h = Vec::new();
    let unit_defect = |r: usize| -> Result<GradedMap> {
        let a = GradedMap::evaluation(&Matrix::identity(&ring, r))?;
        let b = GradedMap::Uniform(Matrix::identity(&ring, r));
        Ok(b.compose(&a).sub(&GradedMap::identity(&ring, r)))
    };
    for (k, &n) in levels.iter().enumerate() {
        let r = d0.rank(n);
        alpha.push(GradedMap::evaluation(&Matrix::identity(&ring, r))?);
        beta.push(GradedMap::Uniform(Matrix::identity(&ring, r)));
        let r1 = d0.rank(n + 1);
        h.push(if r1 == 0 {
            GradedMap::zero(&ring, 0, r)
        } else {
            unit_defect(r1)?.compose(&GradedMap::Uniform(h0[k].clone()))
        });
    }
    let d = DComplex {
        ranks: d0.ranks().to_vec(),
        diffs: levels[1..].iter().map(|&n| GradedMap::Free(d0.diff(n))).collect(),
        free: true,
    };
    TorusData::new(d0.clone(), d, alpha, beta, h, "degree-zero extension")
}

fn random_element(ring: &Ring, rng: &mut ChaCha8Rng, terms: usize) -> GradedElement {
    let mut e = GradedElement::zero(ring);
    let gens: Vec<GradedElement> = (0..ring.nvars()).map(|i| GradedElement::var(ring, i)).collect();
    for _ in 0..terms {
        let mut t = GradedElement::from_i64(ring, rng.gen_range(-3..=3));
        for _ in 0..rng.gen_range(0..=2) {
            let g = &gens[rng.gen_range(0..gens.len())];
            t = if ring.nlaurent() > 0 && rng.gen_bool(0.3) {
                t.mul(&g.unit_inverse().unwrap_or_else(|| g.clone()))
            } else {
                t.mul(g)
            };
        }
        e = e.add(&t);
    }
    e
}

fn random_matrix(ring: &Ring, rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(ring, rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            if rng.gen_bool(0.6) {
                m.set(r, c, random_element(ring, rng, 1));
            }
        }
    }
    m
}

/// A random complex with `d² = 0` by construction: two or three levels, the
/// three-level ones of Koszul shape `R → R² → R`.
pub fn random_complex(ring: &Ring, rng: &mut ChaCha8Rng) -> FreeComplex {
    if rng.gen_bool(0.5) {
        let (r0, r1) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let d = random_matrix(ring, rng, r0, r1);
        FreeComplex::new(ring, 0, vec![r0, r1], vec![d]).expect("two levels")
    } else {
        let a = random_element(ring, rng, 2);
        let b = random_element(ring, rng, 2);
        let c = random_element(ring, rng, 1);
        let d1 = Matrix::from_rows(ring, vec![vec![a.clone(), b.clone()]]);
        let d2 = Matrix::from_rows(ring, vec![vec![b.mul(&c)], vec![a.mul(&c).neg()]]);
        FreeComplex::new(ring, 0, vec![1, 2, 1], vec![d1, d2]).expect("Koszul shape")
    }
}

/// Seeded torus data with `D = C`, `α = id + dL + Ld`, `β = id + dM + Md`
/// and `H = L + M + M(dL + Ld)`.
pub fn random_torus_data(ring: &Ring, seed: u64) -> TorusData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = random_complex(ring, &mut rng);
    let levels: Vec<i64> = c.levels().collect();
    let up = |rng: &mut ChaCha8Rng, n: i64| random_matrix(ring, rng, c.rank(n + 1), c.rank(n));
    let l: Vec<Matrix> = levels.iter().map(|&n| up(&mut rng, n)).collect();
    let m: Vec<Matrix> = levels.iter().map(|&n| up(&mut rng, n)).collect();
    let at = |v: &[Matrix], n: i64| -> Matrix {
        if n < c.lo() || n > c.hi() {
            Matrix::zeros(ring, c.rank(n + 1), c.rank(n))
        } else {
            v[(n - c.lo()) as usize].clone()
        }
    };
    let d = |n: i64| c.diff(n);
    let homotopy = |v: &[Matrix], n: i64| d(n + 1).mul(&at(v, n)).add(&at(v, n - 1).mul(&d(n)));
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    let mut h = Vec::new();
    for &n in &levels {
        let id = Matrix::identity(ring, c.rank(n));
        let al = homotopy(&l, n);
        alpha.push(GradedMap::Uniform(id.add(&al)));
        beta.push(GradedMap::Uniform(id.add(&homotopy(&m, n))));
        let hn = at(&l, n).add(&at(&m, n)).add(&at(&m, n).mul(&al));
        h.push(GradedMap::Uniform(hn));
    }
    TorusData {
        d: DComplex {
            ranks: c.ranks().to_vec(),
            diffs: levels[1..].iter().map(|&n| GradedMap::Uniform(c.diff(n))).collect(),
            free: false,
        },
        c,
        alpha,
        beta,
        h,
        label: format!("random seed {seed}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::verify_contraction;
    use crate::ring::make_laurent;
    use crate::scalar::Coeff;

    const C: Coeff = Coeff::Prime(101);
    const E: (Degree, Degree) = (Degree::E1, Degree::E2);

    fn acyclic_d0(ring: &Ring) -> FreeComplex {
        let d2 = Matrix::parse(ring, &[&["1"], &["2"]]).unwrap();
        let d1 = Matrix::parse(ring, &[&["2", "-1"]]).unwrap();
        FreeComplex::new(ring, 0, vec![1, 2, 1], vec![d1, d2]).unwrap()
    }

    #[test]
    fn canonical_torus_is_a_complex() {
        let l = make_laurent(C).unwrap();
        let x = GradedElement::parse(&l, "x").unwrap();
        let t = TorusData::canonical(&FreeComplex::two_term(&x));
        t.validate(1).unwrap();
        assert!(t.check_torus(E, 1).unwrap() > 0);
        let rep = mather_map(&t, 1);
        assert!(rep.ok(), "{:?}", rep.failures);
    }

    #[test]
    fn random_tori() {
        let l = make_laurent(C).unwrap();
        for seed in 0..3 {
            let t = random_torus_data(&l, seed);
            t.validate(1).unwrap();
            t.check_torus(E, 1).unwrap();
            let rep = mather_map(&t, 1);
            assert!(rep.ok(), "seed {seed}: {:?}", rep.failures);
        }
    }

    #[test]
    fn degree_zero_torus_contracts() {
        let l = make_laurent(C).unwrap();
        let t = degree_zero_torus(&acyclic_d0(&l)).unwrap();
        assert!(t.h.iter().any(|h| {
            let g = TensorVec::slot(&l, h.cols(), 0, Degree::new(1, 0), GradedElement::one(&l));
            h.cols() > 0 && !h.apply(&g).is_zero()
        }));
        t.check_torus(E, 0).unwrap();
        assert!(mather_map(&t, 1).ok());
        for r in Region::ALL {
            let (tc, h) = torus_contraction(&t, r, 6).unwrap();
            let rep = verify_contraction(&tc, &h);
            assert!(rep.passed, "{r}: {:?}", rep.witness);
        }
    }

    #[test]
    fn resolution_of_rank_one() {
        let l = make_laurent(C).unwrap();
        let c = FreeComplex::concentrated(&l, 0, 1);
        let rep = canonical_resolution(&c, 1, &[1]).unwrap();
        assert!(rep.acyclic, "{:?}", rep.failures);
        let x = GradedElement::parse(&l, "x").unwrap();
        let rep = canonical_resolution(&FreeComplex::two_term(&x), 1, &[1]).unwrap();
        assert!(rep.acyclic, "{:?}", rep.failures);
    }

    #[test]
    fn broken_homotopy_is_rejected() {
        let l = make_laurent(C).unwrap();
        let mut t = random_torus_data(&l, 5);
        t.h = t
            .h
            .iter()
            .map(|h| GradedMap::zero(&l, h.rows(), h.cols()))
            .collect();
        let bad = TorusData::new(t.c.clone(), t.d.clone(), t.alpha.clone(), t.beta.clone(), t.h.clone(), "bad");
        // Unless α and β happen to be inverse, dropping H breaks the identity.
        if let Err(e) = bad {
            assert!(matches!(e, Error::NotAChainMap(_)));
        }
    }
}
