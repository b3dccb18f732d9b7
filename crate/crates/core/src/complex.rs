//! Bounded complexes of finitely generated free graded modules.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::matrix::Matrix;
use crate::poly::Monomial;
use crate::ring::{Degree, GradedElement, Ring, RingKind};

/// `C_lo ← C_{lo+1} ← … ← C_hi`, with `C_n = R^{r_n}` and `D_n: C_n → C_{n−1}`
/// a `r_{n−1} × r_n` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplex {
    ring: Ring,
    lo: i64,
    ranks: Vec<usize>,
    diffs: Vec<Matrix>,
}

impl FreeComplex {
    /// `diffs[k]` is `D_{lo+k+1}`. Shapes are checked, `d² = 0` is not (see
    /// [`FreeComplex::validate`]).
    pub fn new(ring: &Ring, lo: i64, ranks: Vec<usize>, diffs: Vec<Matrix>) -> Result<Self> {
        if diffs.len() + 1 != ranks.len().max(1) {
            return Err(Error::Shape(format!(
                "{} levels need {} differentials, got {}",
                ranks.len(),
                ranks.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if (d.rows(), d.cols()) != (ranks[k], ranks[k + 1]) {
                return Err(Error::Shape(format!(
                    "D_{} is {}x{}, expected {}x{}",
                    lo + k as i64 + 1,
                    d.rows(),
                    d.cols(),
                    ranks[k],
                    ranks[k + 1]
                )));
            }
            if !d.ring().same(ring) {
                return Err(Error::InstanceMismatch(ring.name(), d.ring().name()));
            }
        }
        Ok(FreeComplex {
            ring: ring.clone(),
            lo,
            ranks,
            diffs,
        })
    }

    pub fn zero(ring: &Ring) -> Self {
        FreeComplex {
            ring: ring.clone(),
            lo: 0,
            ranks: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// A single free module of rank `r` in level `n`.
    pub fn concentrated(ring: &Ring, n: i64, r: usize) -> Self {
        FreeComplex {
            ring: ring.clone(),
            lo: n,
            ranks: vec![r],
            diffs: Vec::new(),
        }
    }

    /// `R ←^f R` in levels 0 and 1.
    pub fn two_term(f: &GradedElement) -> Self {
        let ring = f.ring().clone();
        let d = Matrix::from_rows(&ring, vec![vec![f.clone()]]);
        FreeComplex::new(&ring, 0, vec![1, 1], vec![d]).expect("well-shaped")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn levels(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi()
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }

    pub fn rank(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi() {
            return 0;
        }
        self.ranks[(n - self.lo) as usize]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `D_n: C_n → C_{n−1}`; a zero matrix of the right shape outside the range.
    pub fn diff(&self, n: i64) -> Matrix {
        if n > self.lo && n <= self.hi() {
            return self.diffs[(n - self.lo - 1) as usize].clone();
        }
        Matrix::zeros(&self.ring, self.rank(n - 1), self.rank(n))
    }

    pub fn diff_ref(&self, n: i64) -> Option<&Matrix> {
        if n > self.lo && n <= self.hi() {
            Some(&self.diffs[(n - self.lo - 1) as usize])
        } else {
            None
        }
    }

    /// Checks `D_{n−1} D_n = 0`, reporting the first failing entry.
    pub fn validate(&self) -> Result<()> {
        for n in self.lo + 2..=self.hi() {
            let sq = self.diff(n - 1).mul(&self.diff(n));
            if let Some((r, c, e)) = sq.first_nonzero() {
                return Err(Error::NotAComplex(format!(
                    "D_{}·D_{} has entry ({r},{c}) = {e}",
                    n - 1,
                    n
                )));
            }
        }
        Ok(())
    }

    /// `a_n`, the amplitude of `D_n`.
    pub fn amplitude(&self, n: i64) -> i64 {
        self.diff_ref(n).map_or(0, Matrix::amplitude)
    }

    /// Suspension `C[k]` with `C[k]_n = C_{n−k}`; differentials pick up `(−1)^k`.
    pub fn shift(&self, k: i64) -> FreeComplex {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let s = GradedElement::from_i64(&self.ring, sign);
        FreeComplex {
            ring: self.ring.clone(),
            lo: self.lo + k,
            ranks: self.ranks.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(&s)).collect(),
        }
    }

    /// Same matrices viewed over another instance with the same presentation.
    pub fn transport(&self, ring: &Ring) -> FreeComplex {
        FreeComplex {
            ring: ring.clone(),
            lo: self.lo,
            ranks: self.ranks.clone(),
            diffs: self.diffs.iter().map(|d| d.transport(ring)).collect(),
        }
    }

    /// Re-index the grading by a ℤ²-automorphism.
    pub fn reindex(&self, g: crate::ring::Involution) -> FreeComplex {
        self.transport(&self.ring.reindexed(g))
    }

    pub fn identity_map(&self) -> ChainMap {
        ChainMap {
            source: self.clone(),
            target: self.clone(),
            maps: self
                .levels()
                .map(|n| Matrix::identity(&self.ring, self.rank(n)))
                .collect(),
        }
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// Degree shifts making every differential entry homogeneous, if they exist:
    /// `deg D_{ki} = s_i − s_k` for `D_n` from basis `i` of level `n` to basis
    /// `k` of level `n−1`.
    pub fn basis_shifts(&self) -> Option<Vec<Vec<Degree>>> {
        let mut shifts: Vec<Vec<Option<Degree>>> = self.ranks.iter().map(|&r| vec![None; r]).collect();
        let nlev = self.ranks.len();
        for start_l in 0..nlev {
            for start_i in 0..self.ranks[start_l] {
                if shifts[start_l][start_i].is_some() {
                    continue;
                }
                shifts[start_l][start_i] = Some(Degree::ZERO);
                let mut stack = vec![(start_l, start_i)];
                while let Some((l, i)) = stack.pop() {
                    let s = shifts[l][i].unwrap();
                    // Downward: D at level l maps i to rows k at level l−1.
                    if l > 0 {
                        let d = &self.diffs[l - 1];
                        for k in 0..d.rows() {
                            let e = d.get(k, i);
                            if e.is_zero() {
                                continue;
                            }
                            let deg = e.degree()?;
                            let want = s - deg;
                            match shifts[l - 1][k] {
                                Some(t) if t != want => return None,
                                Some(_) => {}
                                None => {
                                    shifts[l - 1][k] = Some(want);
                                    stack.push((l - 1, k));
                                }
                            }
                        }
                    }
                    if l + 1 < nlev {
                        let d = &self.diffs[l];
                        for j in 0..d.cols() {
                            let e = d.get(i, j);
                            if e.is_zero() {
                                continue;
                            }
                            let deg = e.degree()?;
                            let want = s + deg;
                            match shifts[l + 1][j] {
                                Some(t) if t != want => return None,
                                Some(_) => {}
                                None => {
                                    shifts[l + 1][j] = Some(want);
                                    stack.push((l + 1, j));
                                }
                            }
                        }
                    }
                }
            }
        }
        Some(
            shifts
                .into_iter()
                .map(|v| v.into_iter().map(Option::unwrap).collect())
                .collect(),
        )
    }

    pub fn direct_sum(&self, other: &FreeComplex) -> FreeComplex {
        if self.is_zero() && self.ranks.is_empty() {
            return other.clone();
        }
        if other.ranks.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let ranks: Vec<usize> = (lo..=hi).map(|n| self.rank(n) + other.rank(n)).collect();
        let diffs = (lo + 1..=hi)
            .map(|n| {
                Matrix::blocks(
                    &self.ring,
                    &[self.rank(n - 1), other.rank(n - 1)],
                    &[self.rank(n), other.rank(n)],
                    &[
                        vec![Some(self.diff(n)), None],
                        vec![None, Some(other.diff(n))],
                    ],
                )
            })
            .collect();
        FreeComplex {
            ring: self.ring.clone(),
            lo,
            ranks,
            diffs,
        }
    }
}

/// A levelwise map `f_n: S_n → T_n`, stored for the levels of the source.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: FreeComplex,
    pub target: FreeComplex,
    pub maps: Vec<Matrix>,
}

impl ChainMap {
    pub fn new(source: &FreeComplex, target: &FreeComplex, maps: Vec<Matrix>) -> Result<Self> {
        let f = ChainMap {
            source: source.clone(),
            target: target.clone(),
            maps,
        };
        if f.maps.len() != source.ranks.len() {
            return Err(Error::Shape("one matrix per source level expected".into()));
        }
        for n in source.levels() {
            let m = f.at(n);
            if (m.rows(), m.cols()) != (target.rank(n), source.rank(n)) {
                return Err(Error::Shape(format!("f_{n} has the wrong shape")));
            }
        }
        Ok(f)
    }

    pub fn zero(source: &FreeComplex, target: &FreeComplex) -> Self {
        let maps = source
            .levels()
            .map(|n| Matrix::zeros(source.ring(), target.rank(n), source.rank(n)))
            .collect();
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            maps,
        }
    }

    pub fn at(&self, n: i64) -> Matrix {
        if n >= self.source.lo && n <= self.source.hi() {
            self.maps[(n - self.source.lo) as usize].clone()
        } else {
            Matrix::zeros(self.source.ring(), self.target.rank(n), self.source.rank(n))
        }
    }

    /// Checks `d_T f_n = f_{n−1} d_S` for all `n`.
    pub fn check(&self) -> Result<()> {
        let lo = self.source.lo.min(self.target.lo);
        let hi = self.source.hi().max(self.target.hi());
        for n in lo..=hi + 1 {
            let l = self.target.diff(n).mul(&self.at(n));
            let r = self.at(n - 1).mul(&self.source.diff(n));
            if let Some((i, j, e)) = l.sub(&r).first_nonzero() {
                return Err(Error::NotAChainMap(format!(
                    "level {n}: (d f − f d) has entry ({i},{j}) = {e}"
                )));
            }
        }
        Ok(())
    }
}

/// `cone(f)_n = T_n ⊕ S_{n−1}` with `d = [[d_T, f], [0, −d_S]]`.
pub fn mapping_cone(f: &ChainMap) -> Result<FreeComplex> {
    f.check()?;
    let (s, t) = (&f.source, &f.target);
    let ring = s.ring();
    let lo = t.lo.min(s.lo + 1);
    let hi = t.hi().max(s.hi() + 1);
    let ranks: Vec<usize> = (lo..=hi).map(|n| t.rank(n) + s.rank(n - 1)).collect();
    let diffs = (lo + 1..=hi)
        .map(|n| {
            Matrix::blocks(
                ring,
                &[t.rank(n - 1), s.rank(n - 2)],
                &[t.rank(n), s.rank(n - 1)],
                &[
                    vec![Some(t.diff(n)), Some(f.at(n - 1))],
                    vec![None, Some(s.diff(n - 1).neg())],
                ],
            )
        })
        .collect();
    FreeComplex::new(ring, lo, ranks, diffs)
}

/// An `m`-fold complex on the unit cube: a free module `V_ε` for every
/// `ε ∈ {0,1}^m` and edge maps `V_ε → V_{ε−e_j}` whenever `ε_j = 1`.
#[derive(Clone, Debug)]
pub struct HyperComplex {
    ring: Ring,
    dim: usize,
    ranks: Vec<usize>,
    edges: BTreeMap<(usize, usize), Matrix>,
}

impl HyperComplex {
    pub fn new(ring: &Ring, dim: usize, ranks: Vec<usize>) -> Self {
        assert_eq!(ranks.len(), 1 << dim);
        HyperComplex {
            ring: ring.clone(),
            dim,
            ranks,
            edges: BTreeMap::new(),
        }
    }

    /// Rank-one entries with multiplication by `f_j` in direction `j` throughout.
    pub fn scalar_edges(ring: &Ring, edge: &[GradedElement]) -> Self {
        let dim = edge.len();
        let mut v = HyperComplex::new(ring, dim, vec![1; 1 << dim]);
        for eps in 0..1usize << dim {
            for (j, f) in edge.iter().enumerate() {
                if eps & (1 << j) != 0 {
                    v.set_edge(eps, j, Matrix::from_rows(ring, vec![vec![f.clone()]]));
                }
            }
        }
        v
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank_at(&self, eps: usize) -> usize {
        self.ranks[eps]
    }

    /// Edge map out of position `eps` in direction `j` (requires bit `j` set).
    pub fn set_edge(&mut self, eps: usize, j: usize, m: Matrix) {
        assert!(eps & (1 << j) != 0);
        assert_eq!((m.rows(), m.cols()), (self.ranks[eps ^ (1 << j)], self.ranks[eps]));
        self.edges.insert((eps, j), m);
    }

    pub fn edge(&self, eps: usize, j: usize) -> Matrix {
        self.edges.get(&(eps, j)).cloned().unwrap_or_else(|| {
            Matrix::zeros(&self.ring, self.ranks[eps ^ (1 << j)], self.ranks[eps])
        })
    }

    /// Adjacent faces must commute.
    pub fn check_commuting(&self) -> Result<()> {
        for eps in 0..1usize << self.dim {
            for i in 0..self.dim {
                for j in i + 1..self.dim {
                    if eps & (1 << i) == 0 || eps & (1 << j) == 0 {
                        continue;
                    }
                    let a = self.edge(eps ^ (1 << j), i).mul(&self.edge(eps, j));
                    let b = self.edge(eps ^ (1 << i), j).mul(&self.edge(eps, i));
                    if a != b {
                        return Err(Error::NonCommutingFaces(format!(
                            "directions {i},{j} at position {eps:0w$b}",
                            w = self.dim
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Positions of total degree `n`, in increasing bitmask order.
    pub fn positions(&self, n: usize) -> Vec<usize> {
        (0..1usize << self.dim)
            .filter(|e| e.count_ones() as usize == n)
            .collect()
    }

    /// Koszul sign for the edge in direction `j` out of `eps`: the parity of the
    /// number of set directions preceding `j` in `order`.
    pub fn sign(eps: usize, j: usize, order: &[usize]) -> i64 {
        let mut s = 1;
        for &i in order {
            if i == j {
                break;
            }
            if eps & (1 << i) != 0 {
                s = -s;
            }
        }
        s
    }

    pub fn totalize(&self, order: &[usize]) -> Result<FreeComplex> {
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.dim).collect::<Vec<_>>() {
            return Err(Error::Shape("direction order must be a permutation".into()));
        }
        self.check_commuting()?;
        let levels: Vec<Vec<usize>> = (0..=self.dim).map(|n| self.positions(n)).collect();
        let offsets = |pos: &[usize]| {
            let mut off = BTreeMap::new();
            let mut acc = 0;
            for &e in pos {
                off.insert(e, acc);
                acc += self.ranks[e];
            }
            (off, acc)
        };
        let ranks: Vec<usize> = levels.iter().map(|p| offsets(p).1).collect();
        let mut diffs = Vec::new();
        for n in 1..=self.dim {
            let (src_off, _) = offsets(&levels[n]);
            let (tgt_off, _) = offsets(&levels[n - 1]);
            let mut d = Matrix::zeros(&self.ring, ranks[n - 1], ranks[n]);
            for &eps in &levels[n] {
                for j in 0..self.dim {
                    if eps & (1 << j) == 0 {
                        continue;
                    }
                    let tgt = eps ^ (1 << j);
                    let s = Self::sign(eps, j, order);
                    let e = self.edge(eps, j);
                    for r in 0..e.rows() {
                        for c in 0..e.cols() {
                            let v = e.get(r, c);
                            if v.is_zero() {
                                continue;
                            }
                            let v = if s < 0 { v.neg() } else { v.clone() };
                            d.set(tgt_off[&tgt] + r, src_off[&eps] + c, v);
                        }
                    }
                }
            }
            diffs.push(d);
        }
        FreeComplex::new(&self.ring, 0, ranks, diffs)
    }

    /// Basis offset of position `eps` inside its totalisation level.
    pub fn offset(&self, eps: usize) -> usize {
        let n = eps.count_ones() as usize;
        self.positions(n)
            .into_iter()
            .take_while(|&e| e != eps)
            .map(|e| self.ranks[e])
            .sum()
    }
}

/// A degree-`δ` slice of a complex over a ring with finite-dimensional
/// components. For gradable complexes the slice is an honest complex of
/// vector spaces; otherwise each differential is sliced on its own
/// (`gradable == false`) and homology is not defined.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub degree: Degree,
    pub gradable: bool,
    pub lo: i64,
    pub dims: Vec<usize>,
    pub diffs: Vec<Mat>,
    /// For sliced differentials: the `(basis index, monomial degree)` sources.
    pub sources: Vec<Vec<(usize, Degree)>>,
}

impl GradedPiece {
    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.gradable {
            return Ok(());
        }
        for k in 1..self.diffs.len() {
            if !self.diffs[k - 1].mul(&self.diffs[k]).is_zero() {
                return Err(Error::NotAComplex(format!(
                    "piece {} at level {}",
                    self.degree,
                    self.lo + k as i64 + 1
                )));
            }
        }
        Ok(())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, &d)| if (self.lo + i as i64) % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }
}

/// The monomial spanning `R_σ` for rings whose components are at most
/// one-dimensional; `Err` for rings with infinite-dimensional components.
pub fn monomial_in_degree(ring: &Ring, sigma: Degree) -> Result<Option<Monomial>> {
    match ring.kind {
        RingKind::Laurent | RingKind::PolyCone => {
            let base = ring.regrade.inverse().apply(sigma);
            if ring.kind == RingKind::PolyCone && (base.x < 0 || base.y < 0) {
                return Ok(None);
            }
            Ok(Some(Monomial::new(vec![base.x as i32, base.y as i32], ring.npoly())))
        }
        _ => Err(Error::Unsupported(format!(
            "components of {} are infinite-dimensional over the coefficient field",
            ring.name()
        ))),
    }
}

pub fn graded_piece(c: &FreeComplex, deg: Degree) -> Result<GradedPiece> {
    let ring = c.ring();
    monomial_in_degree(ring, Degree::ZERO)?;
    if let Some(shifts) = c.basis_shifts() {
        // Level n, degree δ: basis i contributes the monomial of degree δ − s_i.
        let present: Vec<Vec<usize>> = shifts
            .iter()
            .map(|lv| {
                lv.iter()
                    .enumerate()
                    .filter(|(_, &s)| monomial_in_degree(ring, deg - s).unwrap().is_some())
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let dims: Vec<usize> = present.iter().map(Vec::len).collect();
        let mut diffs = Vec::new();
        for n in c.lo + 1..=c.hi() {
            let l = (n - c.lo) as usize;
            let d = c.diff(n);
            let mut m = Mat::zeros(ring.coeff, dims[l - 1], dims[l]);
            for (ci, &i) in present[l].iter().enumerate() {
                for (ri, &k) in present[l - 1].iter().enumerate() {
                    let e = d.get(k, i);
                    if let Some((_, coef)) = e.poly().terms().next() {
                        m.set(ri, ci, coef.clone());
                    }
                }
            }
            diffs.push(m);
        }
        return Ok(GradedPiece {
            degree: deg,
            gradable: true,
            lo: c.lo,
            dims,
            diffs,
            sources: Vec::new(),
        });
    }
    // Slice each differential: rows are the basis of C_{n−1} in degree δ, columns
    // the monomial multiples of basis elements of C_n hitting degree δ.
    let mut dims = vec![c.rank(c.lo)];
    let mut diffs = Vec::new();
    let mut sources = Vec::new();
    for n in c.lo + 1..=c.hi() {
        let d = c.diff(n);
        let mut srcs: Vec<(usize, Degree)> = Vec::new();
        for i in 0..d.cols() {
            let mut sig: Vec<Degree> = Vec::new();
            for k in 0..d.rows() {
                for comp in d.get(k, i).degrees() {
                    sig.push(deg - comp);
                }
            }
            sig.sort();
            sig.dedup();
            srcs.extend(sig.into_iter().map(|s| (i, s)));
        }
        let mut m = Mat::zeros(ring.coeff, d.rows(), srcs.len());
        for (col, &(i, s)) in srcs.iter().enumerate() {
            for k in 0..d.rows() {
                let comp = d.get(k, i).component(deg - s);
                let coef = comp.poly().terms().next().map(|(_, c)| c.clone());
                if let Some(coef) = coef {
                    m.set(k, col, coef);
                }
            }
        }
        dims.push(srcs.len());
        diffs.push(m);
        sources.push(srcs);
    }
    Ok(GradedPiece {
        degree: deg,
        gradable: false,
        lo: c.lo,
        dims,
        diffs,
        sources,
    })
}

pub fn homology_ranks(p: &GradedPiece) -> Result<Vec<usize>> {
    if !p.gradable {
        return Err(Error::Unsupported(
            "homology of a sliced (non-gradable) piece is not defined".into(),
        ));
    }
    if p.dims.is_empty() {
        return Ok(Vec::new());
    }
    Ok(linalg::betti(&p.dims, &p.diffs))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BettiTable {
    pub lo: i64,
    pub window: i64,
    pub betti: BTreeMap<Degree, Vec<usize>>,
}

impl BettiTable {
    pub fn total(&self) -> usize {
        self.betti.values().flatten().sum()
    }

    pub fn nonzero_degrees(&self) -> Vec<Degree> {
        self.betti
            .iter()
            .filter(|(_, b)| b.iter().any(|&x| x > 0))
            .map(|(d, _)| *d)
            .collect()
    }
}

pub fn window_degrees(w: i64) -> Vec<Degree> {
    let mut out = Vec::with_capacity(((2 * w + 1) * (2 * w + 1)) as usize);
    for x in -w..=w {
        for y in -w..=w {
            out.push(Degree::new(x, y));
        }
    }
    out
}

/// Betti numbers of every graded piece in `[−w, w]²`.
pub fn betti_table(c: &FreeComplex, w: i64, parallel: bool) -> Result<BettiTable> {
    let degs = window_degrees(w);
    let f = |d: &Degree| -> Result<(Degree, Vec<usize>)> {
        Ok((*d, homology_ranks(&graded_piece(c, *d)?)?))
    };
    let rows: Vec<(Degree, Vec<usize>)> = if parallel {
        degs.par_iter().map(f).collect::<Result<_>>()?
    } else {
        degs.iter().map(f).collect::<Result<_>>()?
    };
    Ok(BettiTable {
        lo: c.lo(),
        window: w,
        betti: rows.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_kbar, make_khat, make_laurent};
    use crate::scalar::Coeff;

    const C: Coeff = Coeff::Prime(101);

    #[test]
    fn zero_and_two_term_validate() {
        let l = make_laurent(C).unwrap();
        assert!(FreeComplex::zero(&l).validate().is_ok());
        let f = GradedElement::parse(&l, "1 - x").unwrap();
        assert!(FreeComplex::two_term(&f).validate().is_ok());
    }

    #[test]
    fn kbar_relation_squares_to_zero() {
        let k = make_kbar(C).unwrap();
        let d2 = Matrix::parse(&k, &[&["a", "c"]]).unwrap();
        let d1 = Matrix::parse(&k, &[&["b"], &["d"]]).unwrap();
        let prod = d2.mul(&d1);
        assert_eq!(prod.get(0, 0).to_string(), "1");
        let one = GradedElement::one(&k);
        let d1 = Matrix::from_rows(&k, vec![vec![one.clone()], vec![one.neg()]]);
        let d2 = Matrix::parse(&k, &[&["a*b + c*d - 1", "a*b + c*d - 1"]]).unwrap();
        let c = FreeComplex::new(&k, 0, vec![1, 2, 1], vec![d2, d1]).unwrap();
        assert!(c.validate().is_ok());
    }

    #[test]
    fn bad_square_reported() {
        let l = make_laurent(C).unwrap();
        let d1 = Matrix::parse(&l, &[&["x"]]).unwrap();
        let d2 = Matrix::parse(&l, &[&["y"]]).unwrap();
        let c = FreeComplex::new(&l, 0, vec![1, 1, 1], vec![d1, d2]).unwrap();
        assert!(matches!(c.validate(), Err(Error::NotAComplex(_))));
    }

    #[test]
    fn hypercube_ranks() {
        let l = make_laurent(C).unwrap();
        let z = GradedElement::zero(&l);
        let v = HyperComplex::scalar_edges(&l, &[z.clone(), z]);
        let t = v.totalize(&[0, 1]).unwrap();
        assert_eq!(t.ranks(), &[1, 2, 1]);
        assert!(t.diff(1).is_zero() && t.diff(2).is_zero());
    }

    #[test]
    fn khat_example_totalisation() {
        let h = make_khat(C).unwrap();
        let e: Vec<GradedElement> = ["1 - a1", "1 - c2", "1 - d1", "1 - b2*c2*d2"]
            .iter()
            .map(|s| GradedElement::parse(&h, s).unwrap())
            .collect();
        let v = HyperComplex::scalar_edges(&h, &e);
        let t = v.totalize(&[0, 1, 2, 3]).unwrap();
        assert_eq!(t.ranks(), &[1, 4, 6, 4, 1]);
        assert!(t.validate().is_ok());
        let one = HyperComplex::scalar_edges(&h, &e[..1]).totalize(&[0]).unwrap();
        assert_eq!(one.ranks(), &[1, 1]);
    }

    #[test]
    fn non_commuting_faces_rejected() {
        let l = make_laurent(C).unwrap();
        let mut v = HyperComplex::new(&l, 2, vec![1, 1, 1, 1]);
        v.set_edge(0b11, 0, Matrix::parse(&l, &[&["x"]]).unwrap());
        v.set_edge(0b01, 0, Matrix::parse(&l, &[&["1"]]).unwrap());
        v.set_edge(0b11, 1, Matrix::parse(&l, &[&["1"]]).unwrap());
        v.set_edge(0b10, 1, Matrix::parse(&l, &[&["1"]]).unwrap());
        assert!(matches!(v.totalize(&[0, 1]), Err(Error::NonCommutingFaces(_))));
    }

    #[test]
    fn cones() {
        let l = make_laurent(C).unwrap();
        let c = FreeComplex::concentrated(&l, 0, 1);
        let cone = mapping_cone(&c.identity_map()).unwrap();
        assert!(cone.validate().is_ok());
        let t = betti_table(&cone, 2, false).unwrap();
        assert_eq!(t.total(), 0);
        let z = mapping_cone(&ChainMap::zero(&c, &c)).unwrap();
        assert_eq!(z.ranks(), &[1, 1]);
        assert!(z.diff(1).is_zero());
        let x = FreeComplex::two_term(&GradedElement::parse(&l, "x").unwrap());
        assert_eq!(betti_table(&x, 3, true).unwrap().total(), 0);
    }

    #[test]
    fn one_minus_x_slice() {
        let l = make_laurent(C).unwrap();
        let c = FreeComplex::two_term(&GradedElement::parse(&l, "1 - x").unwrap());
        let p = graded_piece(&c, Degree::ZERO).unwrap();
        assert!(!p.gradable);
        assert_eq!(p.sources[0], vec![(0, Degree::new(-1, 0)), (0, Degree::ZERO)]);
        assert_eq!(p.diffs[0].rank(), 1);
        assert!(homology_ranks(&p).is_err());
    }

    #[test]
    fn infinite_components_rejected() {
        let k = make_kbar(C).unwrap();
        let c = FreeComplex::concentrated(&k, 0, 1);
        assert!(matches!(graded_piece(&c, Degree::ZERO), Err(Error::Unsupported(_))));
    }

    #[test]
    fn amplitudes() {
        let l = make_laurent(C).unwrap();
        let c = FreeComplex::two_term(&GradedElement::parse(&l, "1 - x").unwrap());
        assert_eq!(c.amplitude(1), 1);
        assert_eq!(c.amplitude(5), 0);
    }
}
