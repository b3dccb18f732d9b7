//! Incidence posets, Čech complexes over the faces of the square, the
//! diagrams `D(k)` and `E_F`, and their degreewise exactness certificates.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::complex::{window_degrees, FreeComplex};
use crate::error::{Error, Result};
use crate::linalg::{betti, Mat};
use crate::matrix::Matrix;
use crate::partition::find_partition;
use crate::ring::{Degree, GradedElement, Ring, RingKind};
use crate::scalar::Coeff;

/// Non-empty faces of `S = [−1,1]²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Face {
    Vbl,
    Vbr,
    Vtr,
    Vtl,
    Eb,
    Er,
    Et,
    El,
    S,
}

impl Face {
    pub const ALL: [Face; 9] = [
        Face::Vbl,
        Face::Vbr,
        Face::Vtr,
        Face::Vtl,
        Face::Eb,
        Face::Er,
        Face::Et,
        Face::El,
        Face::S,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Face::Vbl => "v_bl",
            Face::Vbr => "v_br",
            Face::Vtr => "v_tr",
            Face::Vtl => "v_tl",
            Face::Eb => "e_b",
            Face::Er => "e_r",
            Face::Et => "e_t",
            Face::El => "e_l",
            Face::S => "S",
        }
    }

    pub fn parse(s: &str) -> Result<Face> {
        Face::ALL
            .into_iter()
            .find(|f| f.name() == s || f.name().replace('_', "") == s)
            .ok_or_else(|| Error::Parse(format!("unknown face {s:?}")))
    }

    /// Which side of the square the face sits on in each coordinate:
    /// `−1` or `1` if the coordinate is constant on the face, `0` otherwise.
    pub fn sides(self) -> (i64, i64) {
        match self {
            Face::Vbl => (-1, -1),
            Face::Vbr => (1, -1),
            Face::Vtr => (1, 1),
            Face::Vtl => (-1, 1),
            Face::Eb => (0, -1),
            Face::Er => (1, 0),
            Face::Et => (0, 1),
            Face::El => (-1, 0),
            Face::S => (0, 0),
        }
    }

    pub fn dim(self) -> usize {
        let (a, b) = self.sides();
        (a == 0) as usize + (b == 0) as usize
    }

    pub fn barycentre(self) -> Degree {
        let (a, b) = self.sides();
        Degree::new(a, b)
    }

    /// `self ⊆ other`.
    pub fn is_subface_of(self, other: Face) -> bool {
        let (a, b) = self.sides();
        let (c, d) = other.sides();
        (c == 0 || c == a) && (d == 0 || d == b)
    }

    /// All inclusions `F ⊆ G`, including equalities.
    pub fn inclusions() -> Vec<(Face, Face)> {
        let mut out = Vec::new();
        for f in Face::ALL {
            for g in Face::ALL {
                if f.is_subface_of(g) {
                    out.push((f, g));
                }
            }
        }
        out
    }

    /// The region `kF + T_F`: a pinned side `−1` gives `x ≥ −k`, a pinned
    /// side `1` gives `x ≤ k`.
    pub fn region(self, k: i64) -> ConeRegion {
        let (a, b) = self.sides();
        let mut hp = Vec::new();
        if a != 0 {
            hp.push(HalfPlane { a: -a, b: 0, c: -k });
        }
        if b != 0 {
            hp.push(HalfPlane { a: 0, b: -b, c: -k });
        }
        ConeRegion { half_planes: hp }
    }

    /// The barrier cone `T_F`.
    pub fn barrier_cone(self) -> ConeRegion {
        self.region(0)
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `a·x + b·y ≥ c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HalfPlane {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

/// An intersection of half-planes in `ℤ²`, used as a degree support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeRegion {
    pub half_planes: Vec<HalfPlane>,
}

impl ConeRegion {
    pub fn plane() -> Self {
        ConeRegion { half_planes: vec![] }
    }

    pub fn contains(&self, d: Degree) -> bool {
        self.half_planes.iter().all(|h| h.a * d.x + h.b * d.y >= h.c)
    }

    pub fn intersect(&self, other: &ConeRegion) -> ConeRegion {
        let mut hp = self.half_planes.clone();
        hp.extend(other.half_planes.iter().copied());
        ConeRegion { half_planes: hp }
    }
}

/// A ranked poset with incidence numbers.
#[derive(Clone, Debug)]
pub struct IncidencePoset {
    pub names: Vec<String>,
    pub rank: Vec<usize>,
    /// `less[x][y]` iff `y < x`.
    pub less: Vec<Vec<bool>>,
    /// `[x : y]`, zero when absent.
    pub incidence: BTreeMap<(usize, usize), i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncidenceViolation {
    pub axiom: &'static str,
    pub x: String,
    pub y: String,
    pub detail: String,
}

impl fmt::Display for IncidenceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at ({}, {}): {}", self.axiom, self.x, self.y, self.detail)
    }
}

impl IncidencePoset {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn inc(&self, x: usize, y: usize) -> i64 {
        self.incidence.get(&(x, y)).copied().unwrap_or(0)
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn max_rank(&self) -> usize {
        self.rank.iter().copied().max().unwrap_or(0)
    }

    pub fn of_rank(&self, n: usize) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.rank[x] == n).collect()
    }

    /// Exhaustive check of DI1–DI3.
    pub fn validate(&self) -> std::result::Result<(), IncidenceViolation> {
        let n = self.len();
        let viol = |axiom, x: usize, y: usize, detail: String| IncidenceViolation {
            axiom,
            x: self.names[x].clone(),
            y: self.names[y].clone(),
            detail,
        };
        for (&(x, y), &v) in &self.incidence {
            if v != 0 && !(self.less[x][y] && self.rank[y] + 1 == self.rank[x]) {
                return Err(viol("DI1", x, y, format!("[x:y] = {v}")));
            }
        }
        for x in 0..n {
            for z in 0..n {
                if !self.less[x][z] || self.rank[z] + 2 != self.rank[x] {
                    continue;
                }
                let s: i64 = (0..n)
                    .filter(|&y| self.less[x][y] && self.less[y][z])
                    .map(|y| self.inc(x, y) * self.inc(y, z))
                    .sum();
                if s != 0 {
                    return Err(viol("DI2", z, x, format!("sum over the interval is {s}")));
                }
            }
        }
        for x in 0..n {
            if self.rank[x] != 1 {
                continue;
            }
            let s: i64 = (0..n).filter(|&y| self.less[x][y]).map(|y| self.inc(x, y)).sum();
            if s != 0 {
                return Err(viol("DI3", x, x, format!("augmentation sum is {s}")));
            }
        }
        Ok(())
    }
}

/// Face poset of the square with `rk = dim` and incidences from the
/// orientations: `[S : e] = 1`, and an edge gives `+1` to its head vertex and
/// `−1` to its tail.
pub fn face_poset() -> IncidencePoset {
    let faces = Face::ALL;
    let idx = |f: Face| faces.iter().position(|&g| g == f).expect("face");
    let mut less = vec![vec![false; 9]; 9];
    for (a, &f) in faces.iter().enumerate() {
        for (b, &g) in faces.iter().enumerate() {
            less[a][b] = g != f && g.is_subface_of(f);
        }
    }
    let mut incidence = BTreeMap::new();
    for e in [Face::Eb, Face::Er, Face::Et, Face::El] {
        incidence.insert((idx(Face::S), idx(e)), 1);
    }
    for (e, head, tail) in [
        (Face::Eb, Face::Vbr, Face::Vbl),
        (Face::Er, Face::Vtr, Face::Vbr),
        (Face::Et, Face::Vtl, Face::Vtr),
        (Face::El, Face::Vbl, Face::Vtl),
    ] {
        incidence.insert((idx(e), idx(head)), 1);
        incidence.insert((idx(e), idx(tail)), -1);
    }
    IncidencePoset {
        names: faces.iter().map(|f| f.name().to_string()).collect(),
        rank: faces.iter().map(|f| f.dim()).collect(),
        less,
        incidence,
    }
}

/// Flags `P₀ ⊂ … ⊂ P_k` of faces containing `F`, with `rk = k` and
/// `[A : B] = (−1)^j` when `B` omits the `j`-th entry of `A`.
pub fn flag_poset(f: Face) -> (IncidencePoset, Vec<Vec<Face>>) {
    let star: Vec<Face> = Face::ALL.into_iter().filter(|&g| f.is_subface_of(g)).collect();
    let mut flags: Vec<Vec<Face>> = Vec::new();
    fn extend(chain: Vec<Face>, star: &[Face], out: &mut Vec<Vec<Face>>) {
        out.push(chain.clone());
        let top = *chain.last().expect("non-empty");
        for &g in star {
            if g != top && top.is_subface_of(g) {
                let mut c = chain.clone();
                c.push(g);
                extend(c, star, out);
            }
        }
    }
    for &g in &star {
        extend(vec![g], &star, &mut flags);
    }
    flags.sort_by_key(|c| (c.len(), c.clone()));
    let n = flags.len();
    let sub = |a: &[Face], b: &[Face]| b.len() < a.len() && b.iter().all(|x| a.contains(x));
    let mut less = vec![vec![false; n]; n];
    let mut incidence = BTreeMap::new();
    for x in 0..n {
        for y in 0..n {
            if sub(&flags[x], &flags[y]) {
                less[x][y] = true;
                if flags[y].len() + 1 == flags[x].len() {
                    let j = (0..flags[x].len())
                        .find(|&j| !flags[y].contains(&flags[x][j]))
                        .expect("omitted entry");
                    incidence.insert((x, y), if j % 2 == 0 { 1 } else { -1 });
                }
            }
        }
    }
    let poset = IncidencePoset {
        names: flags.iter().map(|c| flag_name(c)).collect(),
        rank: flags.iter().map(|c| c.len() - 1).collect(),
        less,
        incidence,
    };
    (poset, flags)
}

pub fn flag_name(c: &[Face]) -> String {
    let names: Vec<&str> = c.iter().map(|f| f.name()).collect();
    format!("<{}>", names.join(","))
}

/// A diagram over a poset whose entries are `r` copies of a graded piece
/// supported on a region, with inclusions as structure maps. Its degree-`δ`
/// slice is a diagram of coefficient vector spaces.
#[derive(Clone, Debug)]
pub struct RegionDiagram {
    pub poset: IncidencePoset,
    pub entries: Vec<ConeRegion>,
    pub rank: usize,
}

impl RegionDiagram {
    /// `Γ` in degree `δ` augmented by `M_δ` (present iff `aug` contains `δ`),
    /// as dimensions `[M, Γ₀, Γ₋₁, …]` and the maps between them.
    pub fn augmented_piece(&self, aug: Option<&ConeRegion>, delta: Degree, coeff: Coeff) -> (Vec<usize>, Vec<Mat>) {
        let p = &self.poset;
        let r = self.rank;
        let present: Vec<bool> = self.entries.iter().map(|e| e.contains(delta)).collect();
        let top = p.max_rank();
        let mut offsets: Vec<BTreeMap<usize, usize>> = Vec::new();
        let mut dims = Vec::new();
        let m_dim = match aug {
            Some(a) if a.contains(delta) => r,
            _ => 0,
        };
        dims.push(m_dim);
        for n in 0..=top {
            let mut off = BTreeMap::new();
            let mut acc = 0;
            for x in p.of_rank(n) {
                if present[x] {
                    off.insert(x, acc);
                    acc += r;
                }
            }
            offsets.push(off);
            dims.push(acc);
        }
        // Every map goes from position i to i + 1; `betti` expects the reverse
        // orientation, so the sequence is listed from the far end.
        let mut maps = Vec::new();
        let mut kappa = Mat::zeros(coeff, dims[1], dims[0]);
        if m_dim > 0 {
            for &o in offsets[0].values() {
                for i in 0..r {
                    kappa.set(o + i, i, coeff.one());
                }
            }
        }
        maps.push(kappa);
        for n in 0..top {
            let mut d = Mat::zeros(coeff, dims[n + 2], dims[n + 1]);
            for (&y, &oy) in &offsets[n] {
                for (&x, &ox) in &offsets[n + 1] {
                    let v = p.inc(x, y);
                    if v != 0 {
                        for i in 0..r {
                            d.set(ox + i, oy + i, coeff.from_i64(v));
                        }
                    }
                }
            }
            maps.push(d);
        }
        (dims, maps)
    }
}

/// Homology of a cochain-oriented sequence `V₀ → V₁ → …`.
fn cohomology(dims: &[usize], maps: &[Mat]) -> Vec<usize> {
    // `betti` takes maps from position i + 1 to i; reverse the sequence.
    let rdims: Vec<usize> = dims.iter().rev().copied().collect();
    let rmaps: Vec<Mat> = maps.iter().rev().cloned().collect();
    let mut b = betti(&rdims, &rmaps);
    b.reverse();
    b
}

/// `D(k)` for `r` copies: entries `R_*[kF + T_F]` with inclusions.
pub fn build_dk(k: i64, rank: usize) -> RegionDiagram {
    RegionDiagram {
        poset: face_poset(),
        entries: Face::ALL.iter().map(|f| f.region(k)).collect(),
        rank,
    }
}

pub fn central_box(k: i64) -> ConeRegion {
    ConeRegion {
        half_planes: vec![
            HalfPlane { a: 1, b: 0, c: -k },
            HalfPlane { a: -1, b: 0, c: -k },
            HalfPlane { a: 0, b: 1, c: -k },
            HalfPlane { a: 0, b: -1, c: -k },
        ],
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeBetti {
    pub degree: Degree,
    pub dims: Vec<usize>,
    pub betti: Vec<usize>,
    pub kernel0: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CechReport {
    pub ring: String,
    pub k: i64,
    pub rank: usize,
    pub window: i64,
    pub exact: bool,
    pub kernel_total: usize,
    pub degrees: Vec<DegreeBetti>,
    pub failures: Vec<String>,
}

fn require_laurent(ring: &Ring) -> Result<()> {
    if ring.kind != RingKind::Laurent {
        return Err(Error::UnsupportedDomain(format!(
            "degreewise Čech computations need one-dimensional graded pieces; got {}",
            ring.name()
        )));
    }
    ring.coeff.check_field()
}

/// Exactness of `0 ← Γ(D(k))₋₂ ← Γ(D(k))₋₁ ← Γ(D(k))₀ ← ⊕_{[−k,k]²} R_{(x,y)} ← 0`
/// in every degree of the window.
pub fn cech_exactness(ring: &Ring, k: i64, rank: usize, window: i64) -> Result<CechReport> {
    require_laurent(ring)?;
    if k < 0 {
        return Err(Error::Shape("k must be non-negative".into()));
    }
    let diag = build_dk(k, rank);
    let aug = central_box(k);
    let coeff = ring.coeff;
    let mut degrees = Vec::new();
    let mut failures = Vec::new();
    let mut kernel_total = 0;
    for delta in window_degrees(window) {
        let (dims, maps) = diag.augmented_piece(Some(&aug), delta, coeff);
        let b = cohomology(&dims, &maps);
        let kernel0 = dims[1] - maps[1].rank();
        kernel_total += kernel0;
        if b.iter().any(|&x| x != 0) {
            failures.push(format!("degree {delta}: cohomology {b:?}"));
        }
        degrees.push(DegreeBetti {
            degree: delta,
            dims,
            betti: b,
            kernel0,
        });
    }
    Ok(CechReport {
        ring: ring.name(),
        k,
        rank,
        window,
        exact: failures.is_empty(),
        kernel_total,
        degrees,
        failures,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjointCase {
    pub face: Face,
    pub coface: Face,
    pub generators: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjointReport {
    pub ring: String,
    pub k: i64,
    pub window: i64,
    pub cases: Vec<AdjointCase>,
    pub failures: Vec<String>,
}

impl AdjointReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Homogeneous elements of degree `d`: standard monomials, at most `limit`.
fn homogeneous_basis(ring: &Ring, d: Degree, bound: u32, limit: usize) -> Vec<GradedElement> {
    ring.standard_monomials(d, bound)
        .into_iter()
        .take(limit)
        .map(|m| GradedElement::monomial(ring, m, ring.coeff.one()))
        .collect()
}

/// Check `α♯ ∘ β = id` and `β ∘ α♯ = id` for `F ⊆ G`, where `α♯(r ⊗ s) = rs`
/// and `β(x) = Σ u_j ⊗ v_j x` for a partition of type `(k p_F, −k p_F)`.
/// Tensors in `R[kF + T_F] ⊗_{R[T_F]} R[T_G]` are compared through the normal
/// form `r ⊗ s ↦ (v_j r s)_j`, which is balanced over `R[T_F]`.
pub fn adjoint_iso_check(
    ring: &Ring,
    f: Face,
    g: Face,
    k: i64,
    window: i64,
    bound: u32,
    limit: usize,
) -> Result<AdjointCase> {
    if !f.is_subface_of(g) {
        return Err(Error::Shape(format!("{f} is not a face of {g}")));
    }
    let part = find_partition(ring, f.barycentre().scale(k))?;
    let rf = f.region(k);
    let tf = f.barrier_cone();
    let rg = g.region(k);
    let tg = g.barrier_cone();
    let normal = |terms: &[(GradedElement, GradedElement)]| -> Result<Vec<GradedElement>> {
        let mut out = vec![GradedElement::zero(ring); part.pairs.len()];
        for (r, s) in terms {
            for (j, (_, v)) in part.pairs.iter().enumerate() {
                let vr = v.mul(r);
                for d in vr.degrees() {
                    if !tf.contains(d) {
                        return Err(Error::Internal(format!("v_j r has degree {d} outside T_{f}")));
                    }
                }
                out[j] = out[j].add(&vr.mul(s));
            }
        }
        Ok(out)
    };
    let beta = |x: &GradedElement| -> Result<Vec<(GradedElement, GradedElement)>> {
        let mut out = Vec::new();
        for (u, v) in &part.pairs {
            for d in u.degrees() {
                if !rf.contains(d) {
                    return Err(Error::Internal(format!("u_j has degree {d} outside {f}")));
                }
            }
            let vx = v.mul(x);
            for d in vx.degrees() {
                if !tg.contains(d) {
                    return Err(Error::Internal(format!("v_j x has degree {d} outside T_{g}")));
                }
            }
            out.push((u.clone(), vx));
        }
        Ok(out)
    };
    let alpha = |terms: &[(GradedElement, GradedElement)]| {
        terms
            .iter()
            .fold(GradedElement::zero(ring), |acc, (r, s)| acc.add(&r.mul(s)))
    };
    let degrees = window_degrees(window);
    let mut count = 0;
    let mut ok = true;
    for &d in degrees.iter().filter(|d| rg.contains(**d)) {
        for x in homogeneous_basis(ring, d, bound, limit) {
            count += 1;
            if alpha(&beta(&x)?) != x {
                ok = false;
            }
        }
    }
    for &dr in degrees.iter().filter(|d| rf.contains(**d)) {
        for r in homogeneous_basis(ring, dr, bound, limit) {
            for &ds in degrees.iter().filter(|d| tg.contains(**d)) {
                for s in homogeneous_basis(ring, ds, bound, limit) {
                    count += 1;
                    let t = vec![(r.clone(), s.clone())];
                    let back = beta(&alpha(&t))?;
                    if normal(&back)? != normal(&t)? {
                        ok = false;
                    }
                }
            }
        }
    }
    Ok(AdjointCase {
        face: f,
        coface: g,
        generators: count,
        ok,
    })
}

/// Run the adjoint check over every inclusion `F ⊆ G`.
pub fn adjoint_report(ring: &Ring, k: i64, window: i64, bound: u32, limit: usize) -> Result<AdjointReport> {
    let mut cases = Vec::new();
    let mut failures = Vec::new();
    for (f, g) in Face::inclusions() {
        let c = adjoint_iso_check(ring, f, g, k, window, bound, limit)?;
        if !c.ok {
            failures.push(format!("adjoint of {f} ⊆ {g} is not inverse to β"));
        }
        cases.push(c);
    }
    Ok(AdjointReport {
        ring: ring.name(),
        k,
        window,
        cases,
        failures,
    })
}

/// How a completed ring treats one coordinate direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CoordKind {
    Laurent,
    /// Power series in `x^dir`.
    PowerSeries(i64),
    /// Novikov completion in `x^dir`, with the nesting level of the completion.
    Novikov(i64, usize),
}

/// The ring `A⟨τ⟩` of a flag, with a truncation cutoff for Novikov factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagRing {
    pub flag: Vec<Face>,
    pub x: CoordKind,
    pub y: CoordKind,
    pub cutoff: i64,
}

impl FlagRing {
    /// A coordinate pinned by the largest face is a power series variable; one
    /// pinned only by smaller faces is completed Novikov-style; otherwise Laurent.
    pub fn new(flag: &[Face], cutoff: i64) -> Self {
        let coord = |side: fn(Face) -> i64| -> CoordKind {
            let top = *flag.last().expect("non-empty flag");
            if side(top) != 0 {
                return CoordKind::PowerSeries(-side(top));
            }
            match (0..flag.len()).rev().find(|&j| side(flag[j]) != 0) {
                Some(j) => CoordKind::Novikov(-side(flag[j]), j),
                None => CoordKind::Laurent,
            }
        };
        FlagRing {
            flag: flag.to_vec(),
            x: coord(|f| f.sides().0),
            y: coord(|f| f.sides().1),
            cutoff,
        }
    }

    /// Degrees in which the ring has a non-zero component.
    pub fn support(&self) -> ConeRegion {
        let mut hp = Vec::new();
        if let CoordKind::PowerSeries(d) = self.x {
            hp.push(HalfPlane { a: d, b: 0, c: 0 });
        }
        if let CoordKind::PowerSeries(d) = self.y {
            hp.push(HalfPlane { a: 0, b: d, c: 0 });
        }
        ConeRegion { half_planes: hp }
    }

    pub fn notation(&self) -> String {
        let var = |v: &str, d: i64| if d > 0 { v.to_string() } else { format!("{v}^-1") };
        let mut laurent = Vec::new();
        let mut series = Vec::new();
        let mut novikov: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (v, k) in [("x", self.x), ("y", self.y)] {
            match k {
                CoordKind::Laurent => laurent.push(format!("{v},{v}^-1")),
                CoordKind::PowerSeries(d) => series.push(var(v, d)),
                CoordKind::Novikov(d, j) => novikov.entry(j).or_default().push(var(v, d)),
            }
        }
        let mut s = "R_*".to_string();
        if !laurent.is_empty() {
            s += &format!("[{}]", laurent.join(","));
        }
        for group in novikov.values() {
            s += &format!("<<{}>>", group.join(","));
        }
        if !series.is_empty() {
            s += &format!("[[{}]]", series.join(","));
        }
        s
    }
}

/// `E_F`: the flag poset of `st(F)` with the rings `A⟨τ⟩`.
pub fn build_ef(f: Face, cutoff: i64) -> (RegionDiagram, Vec<FlagRing>) {
    let (poset, flags) = flag_poset(f);
    let rings: Vec<FlagRing> = flags.iter().map(|c| FlagRing::new(c, cutoff)).collect();
    let diag = RegionDiagram {
        poset,
        entries: rings.iter().map(FlagRing::support).collect(),
        rank: 1,
    };
    (diag, rings)
}

#[derive(Clone, Debug, Serialize)]
pub struct XiReport {
    pub face: Face,
    pub window: i64,
    pub cutoff: i64,
    pub flags: Vec<String>,
    pub exact: bool,
    pub failures: Vec<String>,
}

/// Degreewise exactness of `0 → A_F → Γ(E_F)₀ → Γ(E_F)₋₁ → Γ(E_F)₋₂ → 0`.
pub fn xi_exactness(f: Face, window: i64, cutoff: i64, coeff: Coeff) -> Result<XiReport> {
    if window > cutoff {
        return Err(Error::Shape(format!("window {window} exceeds the truncation cutoff {cutoff}")));
    }
    let (diag, rings) = build_ef(f, cutoff);
    let mut failures = Vec::new();
    for delta in window_degrees(window) {
        let (dims, maps) = diag.augmented_piece(Some(&f.barrier_cone()), delta, coeff);
        let b = cohomology(&dims, &maps);
        if b.iter().any(|&x| x != 0) {
            failures.push(format!("degree {delta}: dims {dims:?}, cohomology {b:?}"));
        }
    }
    Ok(XiReport {
        face: f,
        window,
        cutoff,
        flags: rings.iter().map(|r| format!("{} = {}", flag_name(&r.flag), r.notation())).collect(),
        exact: failures.is_empty(),
        failures,
    })
}

/// `tot Γ(con(C))`: the constant diagram with value `C` over the face poset,
/// totalised; column `−n` sits in total degree `t − n`.
pub fn tot_gamma_con(c: &FreeComplex) -> Result<FreeComplex> {
    let p = face_poset();
    let ring = c.ring();
    let lo = c.lo() - p.max_rank() as i64;
    let hi = c.hi();
    // Summands of total level m: (face x, C-level t) with t − rk x = m.
    let summands = |m: i64| -> Vec<(usize, i64)> {
        let mut v = Vec::new();
        for x in 0..p.len() {
            let t = m + p.rank[x] as i64;
            if c.rank(t) > 0 {
                v.push((x, t));
            }
        }
        v
    };
    let offsets = |m: i64| -> (BTreeMap<(usize, i64), usize>, usize) {
        let mut off = BTreeMap::new();
        let mut acc = 0;
        for s in summands(m) {
            off.insert(s, acc);
            acc += c.rank(s.1);
        }
        (off, acc)
    };
    let ranks: Vec<usize> = (lo..=hi).map(|m| offsets(m).1).collect();
    let mut diffs = Vec::new();
    for m in lo + 1..=hi {
        let (src, sr) = offsets(m);
        let (tgt, tr) = offsets(m - 1);
        let mut d = Matrix::zeros(ring, tr, sr);
        for (&(x, t), &o) in &src {
            // Vertical: (−1)^{rk x} d_C within the same face.
            if let (Some(dc), Some(&ot)) = (c.diff_ref(t), tgt.get(&(x, t - 1))) {
                let sign = if p.rank[x].is_multiple_of(2) { 1 } else { -1 };
                for (r, col, e) in dc.entries() {
                    if !e.is_zero() {
                        let v = if sign < 0 { e.neg() } else { e.clone() };
                        d.set(ot + r, o + col, v);
                    }
                }
            }
            // Horizontal: [z : x] into faces z of rank rk x + 1, same C-level.
            for z in 0..p.len() {
                let v = p.inc(z, x);
                if v == 0 {
                    continue;
                }
                if let Some(&ot) = tgt.get(&(z, t)) {
                    for i in 0..c.rank(t) {
                        d.set(ot + i, o + i, GradedElement::from_i64(ring, v));
                    }
                }
            }
        }
        diffs.push(d);
    }
    FreeComplex::new(ring, lo, ranks, diffs)
}

/// The co-augmentation `C → tot Γ(con(C))` into the vertex summands, and
/// its mapping cone.
pub fn con_cone(c: &FreeComplex) -> Result<FreeComplex> {
    let tot = tot_gamma_con(c)?;
    let p = face_poset();
    let ring = c.ring();
    let mut maps = Vec::new();
    for n in c.levels() {
        let mut m = Matrix::zeros(ring, tot.rank(n), c.rank(n));
        // Vertices come first in each level, in poset order.
        let mut o = 0;
        for x in 0..p.len() {
            let t = n + p.rank[x] as i64;
            if c.rank(t) == 0 {
                continue;
            }
            if p.rank[x] == 0 {
                for i in 0..c.rank(n) {
                    m.set(o + i, i, GradedElement::one(ring));
                }
            }
            o += c.rank(t);
        }
        maps.push(m);
    }
    let padded = pad(c, tot.lo(), tot.hi());
    let maps = (tot.lo()..=tot.hi())
        .map(|n| {
            if n >= c.lo() && n <= c.hi() {
                maps[(n - c.lo()) as usize].clone()
            } else {
                Matrix::zeros(ring, tot.rank(n), padded.rank(n))
            }
        })
        .collect();
    let f = crate::complex::ChainMap::new(&padded, &tot, maps)?;
    crate::complex::mapping_cone(&f)
}

fn pad(c: &FreeComplex, lo: i64, hi: i64) -> FreeComplex {
    let ring = c.ring();
    let ranks: Vec<usize> = (lo..=hi).map(|n| c.rank(n)).collect();
    let diffs = (lo + 1..=hi)
        .map(|n| {
            c.diff_ref(n)
                .cloned()
                .unwrap_or_else(|| Matrix::zeros(ring, c.rank(n - 1), c.rank(n)))
        })
        .collect();
    FreeComplex::new(ring, lo, ranks, diffs).expect("padding keeps d² = 0")
}

#[derive(Clone, Debug, Serialize)]
pub struct ConReport {
    pub window: i64,
    pub acyclic: bool,
    pub failures: Vec<String>,
}

/// The cone of `C → tot Γ(con(C))` is acyclic in every degree of the window.
pub fn con_acyclicity(c: &FreeComplex, window: i64) -> Result<ConReport> {
    let cone = con_cone(c)?;
    let mut failures = Vec::new();
    for delta in window_degrees(window) {
        let piece = crate::complex::graded_piece(&cone, delta)?;
        let h = crate::complex::homology_ranks(&piece)?;
        if h.iter().any(|&x| x != 0) {
            failures.push(format!("degree {delta}: homology {h:?}"));
        }
    }
    Ok(ConReport {
        window,
        acyclic: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_khat, make_laurent};

    const C: Coeff = Coeff::Prime(101);

    #[test]
    fn face_poset_is_valid() {
        let p = face_poset();
        p.validate().unwrap();
        let e_r = p.index("e_r").unwrap();
        assert_eq!(p.inc(e_r, p.index("v_tr").unwrap()), 1);
        assert_eq!(p.inc(e_r, p.index("v_br").unwrap()), -1);
        assert_eq!(p.inc(p.index("S").unwrap(), p.index("e_t").unwrap()), 1);
        assert_eq!(Face::inclusions().len(), 25);
    }

    #[test]
    fn flipped_sign_breaks_di2() {
        let mut p = face_poset();
        let (eb, vbl) = (p.index("e_b").unwrap(), p.index("v_bl").unwrap());
        p.incidence.insert((eb, vbl), 1);
        let v = p.validate().unwrap_err();
        assert_eq!(v.axiom, "DI2");
        assert_eq!(v.y, "S");
    }

    #[test]
    fn flag_posets_are_valid() {
        for f in Face::ALL {
            let (p, flags) = flag_poset(f);
            p.validate().unwrap_or_else(|e| panic!("{f}: {e}"));
            let expect = match f.dim() {
                0 => 11,
                1 => 3,
                _ => 1,
            };
            assert_eq!(flags.len(), expect);
        }
    }

    #[test]
    fn flag_rings_match_table() {
        let n = |c: &[Face]| FlagRing::new(c, 8).notation();
        assert_eq!(n(&[Face::Vbl]), "R_*[[x,y]]");
        assert_eq!(n(&[Face::Eb]), "R_*[x,x^-1][[y]]");
        assert_eq!(n(&[Face::S]), "R_*[x,x^-1,y,y^-1]");
        assert_eq!(n(&[Face::Vbl, Face::Eb]), "R_*<<x>>[[y]]");
        assert_eq!(n(&[Face::Vbl, Face::S]), "R_*<<x,y>>");
        assert_eq!(n(&[Face::Eb, Face::S]), "R_*[x,x^-1]<<y>>");
        assert_eq!(n(&[Face::Vbl, Face::Eb, Face::S]), "R_*<<x>><<y>>");
        assert_eq!(n(&[Face::Vtl, Face::El]), "R_*<<y^-1>>[[x]]");
        assert_eq!(n(&[Face::Vtr, Face::Er, Face::S]), "R_*<<y^-1>><<x^-1>>");
    }

    #[test]
    fn regions_of_dk() {
        assert!(Face::S.region(0).contains(Degree::new(-7, 9)));
        let el = Face::El.region(1);
        assert!(el.contains(Degree::new(-1, 5)) && !el.contains(Degree::new(-2, 0)));
        let vbr = Face::Vbr.region(2);
        assert!(vbr.contains(Degree::new(2, -2)) && !vbr.contains(Degree::new(3, 0)));
        assert_eq!(Face::Et.barycentre(), Degree::new(0, 1));
    }

    #[test]
    fn cech_dk_small() {
        let l = make_laurent(C).unwrap();
        for k in 0..=1 {
            let rep = cech_exactness(&l, k, 1, k + 2).unwrap();
            assert!(rep.exact, "{:?}", rep.failures);
            assert_eq!(rep.kernel_total, ((2 * k + 1) * (2 * k + 1)) as usize);
        }
        let rep = cech_exactness(&l, 1, 1, 3).unwrap();
        let d = rep.degrees.iter().find(|d| d.degree == Degree::new(2, 0)).unwrap();
        assert_eq!(d.kernel0, 0);
    }

    #[test]
    fn con_of_constant_diagram_ranks() {
        let l = make_laurent(C).unwrap();
        let c = FreeComplex::concentrated(&l, 0, 1);
        let t = tot_gamma_con(&c).unwrap();
        assert_eq!(t.ranks(), &[1, 4, 4]);
        let rep = con_acyclicity(&c, 1).unwrap();
        assert!(rep.acyclic, "{:?}", rep.failures);
    }

    #[test]
    fn xi_edges_and_vertices() {
        for f in Face::ALL {
            let rep = xi_exactness(f, 3, 8, C).unwrap();
            assert!(rep.exact, "{f}: {:?}", rep.failures);
        }
        let (d, _) = build_ef(Face::El, 8);
        let (dims, _) = d.augmented_piece(Some(&Face::El.barrier_cone()), Degree::new(-1, 0), C);
        assert_eq!(dims, vec![0, 1, 1]);
        let (dims, _) = d.augmented_piece(Some(&Face::El.barrier_cone()), Degree::new(2, 0), C);
        assert_eq!(dims, vec![1, 2, 1]);
    }

    #[test]
    fn adjoint_laurent_and_khat() {
        let l = make_laurent(C).unwrap();
        let c = adjoint_iso_check(&l, Face::El, Face::S, 1, 2, 1, 1).unwrap();
        assert!(c.ok && c.generators > 0);
        let h = make_khat(C).unwrap();
        let c = adjoint_iso_check(&h, Face::Vbl, Face::Eb, 1, 1, 1, 2).unwrap();
        assert!(c.ok && c.generators > 0);
    }
}
