use std::time::{Duration, Instant};

use findom::cech::{adjoint_iso_check, adjoint_report, cech_exactness, Face};
use findom::contraction::{hypercube_certificate, scalar_certificate};
use findom::domination::{detect, DetectInput};
use findom::examples::{khat_square, laurent_tensor_d0, one_minus_x};
use findom::partition::find_partition;
use findom::torus::{canonical_resolution, mather_map, random_torus_data};
use findom::{
    check_strongly_graded, make_kbar, make_khat, make_laurent, make_polycone, row_splitting_check, verify_contraction,
    Coeff, Degree, FreeComplex, GradedElement, GradedMap, Matrix, PartitionOfUnity, PureSum, Region, Ring, TensorVec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const P: Coeff = Coeff::Prime(101);

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:.1?}, limit {limit:?}"))
}

fn partition_is_verified(ring: &Ring, p: &PartitionOfUnity) -> bool {
    let sum = p
        .pairs
        .iter()
        .fold(GradedElement::zero(ring), |acc, (u, v)| acc.add(&u.mul(v)));
    sum.is_one()
        && p
            .pairs
            .iter()
            .all(|(u, v)| u.is_homogeneous_of(p.rho) && v.is_homogeneous_of(-p.rho))
}

fn strong_grading() -> Outcome {
    let start = Instant::now();
    let types = [Degree::new(1, 0), Degree::new(-1, 0), Degree::new(0, 1), Degree::new(0, -1)];
    for ring in [make_laurent(P), make_kbar(P), make_khat(P)] {
        let ring = ring.map_err(|e| e.to_string())?;
        let rep = check_strongly_graded(&ring);
        ensure(rep.ok, format!("{} not strongly graded: {:?}", ring.name(), rep.failures))?;
        for rho in types {
            let p = find_partition(&ring, rho).map_err(|e| e.to_string())?;
            ensure(partition_is_verified(&ring, &p), format!("{} partition {rho} fails", ring.name()))?;
        }
    }
    let cone = make_polycone(P).map_err(|e| e.to_string())?;
    let rep = check_strongly_graded(&cone);
    ensure(!rep.ok && rep.failures.contains(&Degree::new(-1, 0)), "polynomial cone should fail at (-1,0)")?;
    within(start, Duration::from_secs(5))?;
    let f: Vec<String> = rep.failures.iter().map(ToString::to_string).collect();
    Ok(format!("Laurent, K̄, K̂ strongly graded; cone fails at {}", f.join(", ")))
}

fn cech() -> Outcome {
    let start = Instant::now();
    let l = make_laurent(P).map_err(|e| e.to_string())?;
    let mut dims = Vec::new();
    for k in 0..=2 {
        let rep = cech_exactness(&l, k, 1, k + 2).map_err(|e| e.to_string())?;
        ensure(rep.exact, format!("k={k}: {:?}", rep.failures))?;
        let want = ((2 * k + 1) * (2 * k + 1)) as usize;
        ensure(rep.kernel_total == want, format!("k={k}: kernel {} != {want}", rep.kernel_total))?;
        dims.push(rep.kernel_total);
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("exact for k=0,1,2; column-0 kernels {dims:?}"))
}

fn adjoint() -> Outcome {
    let l = make_laurent(P).map_err(|e| e.to_string())?;
    let mut n = 0;
    for k in [1, 2] {
        let rep = adjoint_report(&l, k, k + 1, 1, 1).map_err(|e| e.to_string())?;
        ensure(rep.ok(), format!("k={k}: {:?}", rep.failures))?;
        n += rep.cases.len();
    }
    let h = make_khat(P).map_err(|e| e.to_string())?;
    let mut sampled = 0;
    for (f, g) in Face::inclusions() {
        let c = adjoint_iso_check(&h, f, g, 1, 1, 1, 1).map_err(|e| e.to_string())?;
        ensure(c.ok, format!("K̂ {f} ⊆ {g}"))?;
        sampled += c.generators;
    }
    Ok(format!("{n} Laurent cases over 25 inclusions; K̂ sampled on {sampled} generators"))
}

fn rows() -> Outcome {
    let mut gens = 0;
    for ring in [make_laurent(P), make_kbar(P)] {
        let ring = ring.map_err(|e| e.to_string())?;
        let rep = row_splitting_check(&ring, 2, 4, 1).map_err(|e| e.to_string())?;
        ensure(rep.ok(), format!("{}: {:?}", ring.name(), rep.failures))?;
        ensure(rep.quadrants().len() == 4, format!("{}: quadrants {:?}", ring.name(), rep.quadrants()))?;
        gens += rep.generators;
    }
    Ok(format!("βφ + σγ = id, α injective, βα = 0 on {gens} generators, all four quadrants"))
}

fn random_gradable(ring: &Ring, seed: u64) -> FreeComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mono = |rng: &mut ChaCha8Rng| {
        let d = Degree::new(rng.gen_range(-1..=1), rng.gen_range(-1..=1));
        let m = ring.standard_monomials(d, 1)[0].clone();
        GradedElement::monomial(ring, m, ring.coeff.from_i64(rng.gen_range(1..100)))
    };
    let (a, b, c) = (mono(&mut rng), mono(&mut rng), mono(&mut rng));
    let d1 = Matrix::from_rows(ring, vec![vec![a.clone(), b.clone()]]);
    let d2 = Matrix::from_rows(ring, vec![vec![b.mul(&c)], vec![a.mul(&c).neg()]]);
    FreeComplex::new(ring, 0, vec![1, 2, 1], vec![d1, d2]).expect("Koszul shape")
}

fn resolution() -> Outcome {
    let l = make_laurent(P).map_err(|e| e.to_string())?;
    let x = GradedElement::parse(&l, "x").map_err(|e| e.to_string())?;
    let samples = [
        ("rank one", FreeComplex::concentrated(&l, 0, 1)),
        ("·x", FreeComplex::two_term(&x)),
        ("random 3-level", random_gradable(&l, 7)),
    ];
    let mut degs = 0;
    for (name, c) in samples {
        c.validate().map_err(|e| e.to_string())?;
        let rep = canonical_resolution(&c, 4, &[1, 2]).map_err(|e| e.to_string())?;
        ensure(rep.acyclic, format!("{name}: {:?}", rep.failures))?;
        degs += rep.degrees;
    }
    Ok(format!("cone(κ) acyclic in {degs} degree pieces"))
}

fn torus() -> Outcome {
    let l = make_laurent(P).map_err(|e| e.to_string())?;
    let mut nonzero_h = 0;
    for seed in 0..10 {
        let t = random_torus_data(&l, seed);
        t.validate(1).map_err(|e| format!("seed {seed}: {e}"))?;
        t.check_torus((Degree::E1, Degree::E2), 1).map_err(|e| format!("seed {seed}: {e}"))?;
        let rep = mather_map(&t, 1);
        ensure(rep.chain_map, format!("seed {seed}: λ not a chain map {:?}", rep.failures))?;
        ensure(rep.triangular && rep.diagonal_alpha, format!("seed {seed}: {:?}", rep.failures))?;
        if t.h.iter().any(|h| matches!(h, GradedMap::Uniform(m) if !m.is_zero())) {
            nonzero_h += 1;
        }
    }
    ensure(nonzero_h > 0, "every sample had H = 0")?;
    Ok(format!("10 tori with d² = 0, λ a triangular chain map; {nonzero_h} with H ≠ 0"))
}

fn random_tensor(ring: &Ring, rng: &mut ChaCha8Rng) -> TensorVec {
    let mut v = TensorVec::zero(ring, 2);
    for _ in 0..rng.gen_range(1..=3) {
        let sigma = Degree::new(rng.gen_range(-2..=2), rng.gen_range(-2..=2));
        let d = Degree::new(rng.gen_range(-2..=2), rng.gen_range(-2..=2));
        let ms = ring.standard_monomials(d, 2);
        if ms.is_empty() {
            continue;
        }
        let m = ms[rng.gen_range(0..ms.len())].clone();
        let z = GradedElement::monomial(ring, m, ring.coeff.from_i64(rng.gen_range(1..100)));
        v = v.add(&TensorVec::slot(ring, 2, rng.gen_range(0..2), sigma, z));
    }
    v
}

fn chi_laws() -> Outcome {
    let mut n = 0;
    for ring in [make_laurent(P), make_kbar(P)] {
        let ring = ring.map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let deg = |rng: &mut ChaCha8Rng| Degree::new(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        for _ in 0..100 {
            let v = random_tensor(&ring, &mut rng);
            let (r, s) = (deg(&mut rng), deg(&mut rng));
            ensure(v.chi(r).chi(s) == v.chi(r + s), format!("{}: χ_{r}χ_{s}", ring.name()))?;
            ensure(v.chi(r).chi(-r) == v, format!("{}: χ_{r} inverse", ring.name()))?;
            n += 1;
        }
        let x = GradedElement::monomial(&ring, ring.standard_monomials(Degree::E1, 1)[0].clone(), P.one());
        let p = PureSum::single(1, 0, &x, &GradedElement::from_i64(&ring, 5));
        for rho in [Degree::new(1, 0), Degree::new(-1, 2)] {
            let p1 = find_partition(&ring, -rho).map_err(|e| e.to_string())?;
            // Refine by the degree-zero partition {(u_k v_k, 1)} and split with λ = 2.
            let mut p2 = PartitionOfUnity { rho: p1.rho, pairs: Vec::new() };
            let two = GradedElement::from_i64(&ring, 2);
            for (u, v) in &p1.pairs {
                for (a, b) in &p1.pairs {
                    let w = u.mul(&a.mul(b));
                    p2.pairs.push((w.mul(&two), v.clone()));
                    p2.pairs.push((w.neg(), v.clone()));
                }
            }
            ensure(partition_is_verified(&ring, &p2) && p2.pairs.len() > p1.pairs.len(), "second partition")?;
            ensure(
                p.chi_with(&p1).to_tensor() == p.chi_with(&p2).to_tensor(),
                format!("{}: χ_{rho} depends on the partition", ring.name()),
            )?;
        }
    }
    Ok(format!("{n} samples; χ independent of the partition"))
}

fn khat_example() -> Outcome {
    let start = Instant::now();
    let (v, order, c) = khat_square(P).map_err(|e| e.to_string())?;
    for r in Region::ALL {
        let h = hypercube_certificate(&v, &order, r, 8).map_err(|e| format!("{r}: {e}"))?;
        let rep = verify_contraction(&c, &h);
        ensure(rep.passed, format!("{r}: {:?}", rep.witness))?;
    }
    within(start, Duration::from_secs(120))?;
    Ok("all eight certificates pass at N = 8".into())
}

fn round_trip() -> Outcome {
    let c = laurent_tensor_d0(P).map_err(|e| e.to_string())?;
    let v = detect(&c, &DetectInput::default(), 8, 4, true).map_err(|e| e.to_string())?;
    ensure(v.all_certified, "L ⊗ D₀: some certificate failed")?;
    let p = v.pipeline.as_ref().ok_or("no pipeline")?;
    ensure(p.consistent, "pipeline inconsistent")?;
    ensure(p.degreewise.len() == 81 && p.betti_equal, "degreewise Betti numbers differ")?;
    let neg = detect(&one_minus_x(P).map_err(|e| e.to_string())?, &DetectInput::default(), 8, 4, true)
        .map_err(|e| e.to_string())?;
    let failed: Vec<_> = neg.certificates.iter().filter(|r| !r.passed).collect();
    ensure(!failed.is_empty(), "1 − x: every certificate passed")?;
    ensure(failed.iter().all(|r| r.witness.is_some()), "failure without witness")?;
    let audit = neg.support_audit.as_ref().ok_or("no audit")?;
    ensure(audit.full_width, "support audit did not flag 1 − x")?;
    let w = failed[0].witness.as_ref().unwrap();
    Ok(format!(
        "L ⊗ D₀ certified with equal Betti numbers; 1 − x fails in {} regions (witness {} at {}), support flagged",
        failed.len(),
        w.residual,
        w.degree
    ))
}

fn coherence() -> Outcome {
    let (v, order, c) = khat_square(P).map_err(|e| e.to_string())?;
    let d0 = laurent_tensor_d0(P).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for r in Region::ALL {
        let cases = [
            (c.clone(), hypercube_certificate(&v, &order, r, 8).map_err(|e| e.to_string())?),
            (d0.clone(), scalar_certificate(&d0, r, 8).map_err(|e| e.to_string())?),
        ];
        for (cx, h) in cases {
            ensure(verify_contraction(&cx, &h).passed, format!("{r} at N = 8"))?;
            for n in [4, 6] {
                ensure(verify_contraction(&cx, &h.retruncate(n)).passed, format!("{r} at N = {n}"))?;
            }
            checked += 1;
        }
    }
    let neg = one_minus_x(P).map_err(|e| e.to_string())?;
    for cx in [&d0, &neg] {
        let a = detect(cx, &DetectInput::default(), 8, 4, false).map_err(|e| e.to_string())?;
        let b = detect(cx, &DetectInput::default(), 8, 4, true).map_err(|e| e.to_string())?;
        let (a, b) = (serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        ensure(a == b, "sequential and parallel reports differ")?;
    }
    let seq: Vec<String> = Region::ALL
        .iter()
        .map(|&r| serde_json::to_string(&verify_contraction(&c, &hypercube_certificate(&v, &order, r, 8).unwrap())).unwrap())
        .collect();
    let par: Vec<String> = Region::ALL
        .par_iter()
        .map(|&r| serde_json::to_string(&verify_contraction(&c, &hypercube_certificate(&v, &order, r, 8).unwrap())).unwrap())
        .collect();
    ensure(seq == par, "K̂ certificates differ between runs")?;
    Ok(format!("{checked} certificates survive re-truncation to N = 4, 6; reports byte-identical"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("strong grading", strong_grading),
        ("Čech exactness", cech),
        ("adjoint isomorphism", adjoint),
        ("row exactness", rows),
        ("canonical resolution", resolution),
        ("torus algebra", torus),
        ("χ laws", chi_laws),
        ("worked example over K̂", khat_example),
        ("domination round trip", round_trip),
        ("truncation coherence", coherence),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match out {
            Ok(msg) => println!("criterion {:>2} PASS  {name} ({t:.2?}): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({t:.2?}): {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
