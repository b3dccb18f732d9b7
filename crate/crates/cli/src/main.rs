use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use findom::cech::{adjoint_report, cech_exactness, xi_exactness, Face};
use findom::domination::{certify_region, detect, DetectInput};
use findom::examples::khat_square;
use findom::torus::{degree_zero_torus, mather_map, random_torus_data, torus_contraction, TorusData};
use findom::{
    betti_table, check_strongly_graded, make_laurent, make_ring, verify_contraction, Coeff, ComplexFile, Degree,
    Region, RingKind,
};

#[derive(Parser, Debug)]
#[command(name = "findom", version, about = "Finite-domination certificates over strongly Z^2-graded rings")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Coefficient domain: `q` or `zp:<prime>`.
    #[arg(long, global = true, env = "FINDOM_COEFF", default_value = "zp:101")]
    coeff: Coeff,
    /// Print the report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Run windowed checks and regions on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Find and verify partitions of unity of the four unit types.
    CheckStronglyGraded {
        #[arg(long, default_value = "laurent")]
        ring: RingKind,
    },
    /// Degreewise exactness of the augmented Čech complex of D(k).
    CechExactness {
        #[arg(long, default_value_t = 1)]
        k: i64,
        #[arg(long, default_value_t = 4)]
        window: i64,
        #[arg(long, default_value_t = 1)]
        rank: usize,
    },
    /// α♯ and β are mutually inverse for every face inclusion.
    AdjointCheck {
        #[arg(long, default_value = "laurent")]
        ring: RingKind,
        #[arg(long, default_value_t = 1)]
        k: i64,
        #[arg(long, default_value_t = 2)]
        window: i64,
        /// Generators per degree for rings with large components.
        #[arg(long, default_value_t = 2)]
        samples: usize,
    },
    /// Exactness of A_F → Γ(E_F) for one face or all of them.
    XiCheck {
        #[arg(long, default_value = "all")]
        face: String,
        #[arg(long, default_value_t = 4)]
        window: i64,
        #[arg(long, default_value_t = 8)]
        cutoff: i64,
    },
    /// Build an algebraic torus and check d² = 0, the Mather map and its contractions.
    BuildTorus {
        /// Seed for random torus data over the Laurent ring.
        #[arg(long, conflicts_with = "complex")]
        seed: Option<u64>,
        /// Complex file; a constant complex gives the degree-zero torus, any
        /// other gradable complex its canonical resolution.
        #[arg(long)]
        complex: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        cutoff: i64,
        #[arg(long, default_value_t = 1)]
        window: i64,
    },
    /// Contraction certificates in the eight Novikov regions.
    VerifyNovikov {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long, default_value = "all")]
        region: String,
        #[arg(long, default_value_t = 8)]
        cutoff: i64,
    },
    /// Certificates, the 𝒴 pipeline and a verdict.
    Dominate {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long, default_value_t = 8)]
        cutoff: i64,
        #[arg(long, default_value_t = 4)]
        window: i64,
    },
    /// The four-fold complex over K̂ in all eight regions.
    ExamplePaperS2 {
        #[arg(long, default_value_t = 8)]
        cutoff: i64,
    },
    /// Betti numbers of every graded piece in the window.
    Homology {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long, default_value_t = 4)]
        window: i64,
    },
}

struct Outcome {
    ok: bool,
    text: String,
    json: serde_json::Value,
}

fn outcome<T: Serialize>(ok: bool, text: String, report: &T) -> Result<Outcome> {
    Ok(Outcome {
        ok,
        text,
        json: serde_json::to_value(report)?,
    })
}

fn load(path: &Path, coeff: Coeff) -> Result<findom::LoadedComplex> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file = ComplexFile::parse(&text).with_context(|| format!("in {}", path.display()))?;
    Ok(file.load(coeff)?)
}

fn check_params(cutoff: i64, window: i64) -> Result<()> {
    if cutoff < 1 || window < 1 {
        bail!("cutoff and window must be at least 1");
    }
    Ok(())
}

fn regions(spec: &str) -> Result<Vec<Region>> {
    if spec == "all" {
        return Ok(Region::ALL.to_vec());
    }
    spec.split(',').map(|s| Ok(s.trim().parse::<Region>()?)).collect()
}

fn cert_line(r: &findom::CertificateReport) -> String {
    let status = if r.passed { "ok" } else { "FAILED" };
    let mut line = format!("  {:<14} {status:<6} {}", r.region.name(), r.method);
    if let Some(w) = &r.witness {
        line += &format!("; residual {} at degree {} (filtration {})", w.residual, w.degree, w.filtration);
    }
    if let Some(n) = &r.note {
        line += &format!("; {n}");
    }
    line
}

fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    let parallel = !g.sequential;
    g.coeff.check_field()?;
    match &cli.command {
        Command::CheckStronglyGraded { ring } => {
            let r = make_ring(*ring, g.coeff)?;
            let rep = check_strongly_graded(&r);
            let mut text = format!("{}: {}\n", rep.ring, if rep.ok { "strongly graded" } else { "NOT strongly graded" });
            for t in &rep.types {
                match &t.pairs {
                    Some(p) => {
                        let ps: Vec<String> = p.iter().map(|(u, v)| format!("({u}, {v})")).collect();
                        text += &format!("  type {}: {}\n", t.rho, ps.join(" + "));
                    }
                    None => text += &format!("  type {}: no partition\n", t.rho),
                }
            }
            outcome(rep.ok, text, &rep)
        }
        Command::CechExactness { k, window, rank } => {
            let l = make_laurent(g.coeff)?;
            let rep = cech_exactness(&l, *k, *rank, *window)?;
            let text = format!(
                "k = {k}, window {window}: {}; column-0 kernel dimension {}\n{}",
                if rep.exact { "exact" } else { "NOT exact" },
                rep.kernel_total,
                rep.failures.iter().map(|f| format!("  {f}\n")).collect::<String>()
            );
            outcome(rep.exact, text, &rep)
        }
        Command::AdjointCheck { ring, k, window, samples } => {
            let r = make_ring(*ring, g.coeff)?;
            let rep = adjoint_report(&r, *k, *window, 1, *samples)?;
            let gens: usize = rep.cases.iter().map(|c| c.generators).sum();
            let text = format!(
                "{}: {} inclusions, {gens} generators, {}\n",
                rep.ring,
                rep.cases.len(),
                if rep.ok() { "all inverse" } else { "FAILED" }
            );
            outcome(rep.ok(), text, &rep)
        }
        Command::XiCheck { face, window, cutoff } => {
            let faces = if face == "all" { Face::ALL.to_vec() } else { vec![Face::parse(face)?] };
            let mut reps = Vec::new();
            let mut text = String::new();
            for f in faces {
                let rep = xi_exactness(f, *window, *cutoff, g.coeff)?;
                text += &format!("{f}: {}\n", if rep.exact { "exact" } else { "NOT exact" });
                for fl in &rep.flags {
                    text += &format!("  {fl}\n");
                }
                reps.push(rep);
            }
            let ok = reps.iter().all(|r| r.exact);
            outcome(ok, text, &reps)
        }
        Command::BuildTorus { seed, complex, cutoff, window } => {
            check_params(*cutoff, *window)?;
            let t: TorusData = match (seed, complex) {
                (Some(s), _) => random_torus_data(&make_laurent(g.coeff)?, *s),
                (None, Some(p)) => {
                    let c = load(p, g.coeff)?.complex;
                    let constant = c.levels().all(|n| {
                        c.diff_ref(n)
                            .is_none_or(|d| d.entries().all(|(_, _, e)| e.is_zero() || e.as_constant().is_some()))
                    });
                    if constant {
                        degree_zero_torus(&c)?
                    } else {
                        TorusData::canonical(&c)
                    }
                }
                (None, None) => bail!("build-torus needs --seed or --complex"),
            };
            let cells = t.check_torus((Degree::E1, Degree::E2), *window)?;
            let mather = mather_map(&t, *window);
            let certs: Vec<_> = if t.d.free {
                Region::ALL
                    .iter()
                    .map(|&r| match torus_contraction(&t, r, *cutoff) {
                        Ok((tc, h)) => verify_contraction(&tc, &h),
                        Err(e) => findom::CertificateReport::failed(r, t.ring().name(), *cutoff, "torus", e.to_string()),
                    })
                    .collect()
            } else {
                Vec::new()
            };
            let mut text = format!(
                "torus {}: d² = 0 on {cells} generators; Mather map {}\n",
                t.label,
                if mather.ok() { "ok" } else { "FAILED" }
            );
            if !t.d.free {
                text += "  D is not free over the degree-zero ring; no torus certificates\n";
            }
            for c in &certs {
                text += &cert_line(c);
                text.push('\n');
            }
            let ok = mather.ok() && certs.iter().all(|c| c.passed);
            let report = serde_json::json!({
                "label": t.label,
                "generators_checked": cells,
                "mather": mather,
                "certificates": certs,
            });
            outcome(ok, text, &report)
        }
        Command::VerifyNovikov { complex, region, cutoff } => {
            check_params(*cutoff, 1)?;
            let lc = load(complex, g.coeff)?;
            let input = DetectInput {
                hypercube: lc.hypercube.clone(),
                ..Default::default()
            };
            let certs: Vec<_> = regions(region)?
                .into_iter()
                .map(|r| certify_region(&lc.complex, &input, r, *cutoff))
                .collect();
            let text: String = certs.iter().map(|c| cert_line(c) + "\n").collect();
            outcome(certs.iter().all(|c| c.passed), text, &certs)
        }
        Command::Dominate { complex, cutoff, window } => {
            check_params(*cutoff, *window)?;
            let lc = load(complex, g.coeff)?;
            let input = DetectInput {
                hypercube: lc.hypercube.clone(),
                ..Default::default()
            };
            let v = detect(&lc.complex, &input, *cutoff, *window, parallel)?;
            let mut text = format!("{} at cutoff {}:\n", v.ring, v.cutoff);
            for c in &v.certificates {
                text += &cert_line(c);
                text.push('\n');
            }
            if let Some(p) = &v.pipeline {
                text += &format!("pipeline: k = {:?}, dim D = {:?}, betti(D) = {:?}, consistent: {}\n", p.k, p.d_dims, p.d_betti, p.consistent);
            }
            if let Some(n) = &v.pipeline_note {
                text += &format!("pipeline: {n}\n");
            }
            if let Some(a) = &v.support_audit {
                text += &format!(
                    "support audit (heuristic, {}): {} degrees, full width: {}\n",
                    a.method,
                    a.support.len(),
                    a.full_width
                );
            }
            text += &format!("verdict: {}\n", serde_json::to_value(v.verdict)?.as_str().unwrap_or_default());
            outcome(v.all_certified, text, &v)
        }
        Command::ExamplePaperS2 { cutoff } => {
            check_params(*cutoff, 1)?;
            let (v, order, c) = khat_square(g.coeff)?;
            let input = DetectInput {
                hypercube: Some((v, order)),
                ..Default::default()
            };
            let certs: Vec<_> = Region::ALL.iter().map(|&r| certify_region(&c, &input, r, *cutoff)).collect();
            let mut text = format!("four-fold complex over {} (ranks {:?}):\n", c.ring().name(), c.ranks());
            for cr in &certs {
                text += &cert_line(cr);
                text.push('\n');
            }
            outcome(certs.iter().all(|c| c.passed), text, &certs)
        }
        Command::Homology { complex, window } => {
            let lc = load(complex, g.coeff)?;
            let t = betti_table(&lc.complex, *window, parallel)?;
            let mut text = format!("total Betti number in window {window}: {}\n", t.total());
            for (d, b) in t.betti.iter().filter(|(_, b)| b.iter().any(|&x| x > 0)) {
                text += &format!("  {d}: {b:?}\n");
            }
            let report = serde_json::json!({
                "lo": t.lo,
                "window": t.window,
                "total": t.total(),
                "betti": t.betti.iter().map(|(d, b)| (d.to_string(), b.clone())).collect::<std::collections::BTreeMap<_, _>>(),
            });
            outcome(true, text, &report)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let json = serde_json::to_string_pretty(&out.json).expect("report serialises");
            if let Some(p) = &cli.global.report {
                if let Err(e) = std::fs::write(p, format!("{json}\n")) {
                    eprintln!("error: writing {}: {e}", p.display());
                    return ExitCode::from(2);
                }
            }
            if cli.global.json {
                println!("{json}");
            } else {
                print!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn region_lists() {
        assert_eq!(regions("all").unwrap().len(), 8);
        assert_eq!(regions("nov-x, nov-y").unwrap(), vec![Region::EdgeX, Region::EdgeY]);
        assert!(regions("nov-z").is_err());
    }
}
