use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::json;

use lgfree_core::ddmodel::{phi_homomorphism_check, radical_power_check, spec_map_check, Dictionary};
use lgfree_core::element::Element;
use lgfree_core::error::Error;
use lgfree_core::freeness::{
    build_chain_limit, build_chain_successor, cofinal_sequence, construct_staircase, multi_prime_compose,
    smooth_chain_check, verify_staircase, ComposeOptions, FreenessCertificate, StaircaseBase, StaircaseReport,
};
use lgfree_core::group::{semibasic_decompose, GroupPresentation};
use lgfree_core::ordinal::{Ordinal, OrdinalKind};
use lgfree_core::presets::{factorial, limit_q_a, limit_q_group, MAIN_LADDER};
use lgfree_core::schema::{CertificateFile, PresentationFile};
use lgfree_core::space::{cb_rank_of, ClopenBlock};

const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Parser, Debug)]
#[command(name = "lgfree", version, about = "Free-basis certificates for l-groups of integer functions on ordinal spaces")]
struct RunConfig {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the factorial staircase over [0, w] and check its axioms.
    DemoLimitq,
    /// Build a staircase from a presentation and check its axioms.
    VerifyStaircase {
        file: PathBuf,
        /// Starting element; defaults to the first positive generator with a nonzero residue.
        #[arg(long)]
        a0: Option<String>,
        /// Number of staircase elements; defaults to the generator count.
        #[arg(long)]
        count: Option<usize>,
    },
    /// Write a freeness certificate for a presentation.
    ExtractBasis {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        rank: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-check a certificate; exit status 1 names the failing step.
    CertVerify { file: PathBuf },
    /// Coefficients of an element over the generators or a semibasic family.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        element: String,
        #[arg(long, value_enum, default_value_t = Mode::Member)]
        mode: Mode,
    },
    /// Property run of the ideal-function dictionary.
    DdCheck {
        file: PathBuf,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Member,
    Semibasic,
}

fn load_group(path: &Path) -> Result<GroupPresentation> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(PresentationFile::from_json(&text)?.into_group()?)
}

fn print_report(report: &StaircaseReport) {
    let mu: Vec<String> = report
        .mu
        .iter()
        .map(|m| m.map_or("-".into(), |v| v.to_string()))
        .collect();
    println!("mu: {}", mu.join(" "));
    for o in &report.outcomes {
        match &o.violation {
            None => println!("  {}: pass", o.axiom),
            Some(v) => println!("  {}: FAIL at n = {}: {}", o.axiom, v.index, v.detail),
        }
    }
}

fn status(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn demo_limitq() -> Result<ExitCode> {
    let group = limit_q_group(9);
    let amb = &group.ambient;
    for n in 0..4 {
        let a = limit_q_a(amb, n);
        let row = (0..5u64)
            .map(|k| a.eval(&Ordinal::from(k)).map(|v| v.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        println!("a_{n}: {}", row.join(" "));
    }
    let candidate = StaircaseBase {
        ladder: MAIN_LADDER.into(),
        label: amb.ladders[0].labels[0].label.clone(),
        elements: (0..9).map(|n| limit_q_a(amb, n)).collect(),
        divisors: (0..9).map(factorial).collect(),
        residue_targets: (0..9).map(|n| BigRational::new(BigInt::one(), factorial(n))).collect(),
    };
    let d: Vec<String> = candidate.divisors.iter().map(BigInt::to_string).collect();
    println!("d_n: {}", d.join(" "));
    let report = verify_staircase(&candidate, &group)?;
    print_report(&report);
    Ok(status(report.passed()))
}

fn verify_staircase_cmd(file: &Path, a0: Option<&str>, count: Option<usize>) -> Result<ExitCode> {
    let group = load_group(file)?;
    let a0 = match a0 {
        Some(text) => Element::parse(&group.ambient, text)?,
        None => group
            .generators
            .iter()
            .find(|g| g.is_positive() && !g.is_tail_free())
            .cloned()
            .context("no positive generator with a nonzero residue; pass --a0")?,
    };
    let count = count.unwrap_or(group.generators.len()).max(1);
    let base = construct_staircase(&group, &a0, count)?;
    for (n, (a, d)) in base.elements.iter().zip(&base.divisors).enumerate() {
        println!("a_{n} = {a}    d_{n} = {d}");
    }
    let report = verify_staircase(&base, &group)?;
    print_report(&report);
    Ok(status(report.passed()))
}

/// One block per infinite prime, from the previous prime (or 0) up to it.
fn default_blocks(group: &GroupPresentation) -> Result<Vec<ClopenBlock>> {
    let mut low = Ordinal::zero();
    let mut blocks = Vec::new();
    for p in group.ambient.space.infinite_primes() {
        blocks.push(ClopenBlock::new(low, p.clone())?);
        low = p.clone();
    }
    Ok(blocks)
}

fn extract(group: &GroupPresentation, rank: u64) -> Result<FreenessCertificate, Error> {
    let primes = group.ambient.space.infinite_primes();
    if primes.len() == 1 {
        let p = primes.iter().next().expect("one prime");
        let beta = cb_rank_of(p);
        return match beta.classify() {
            OrdinalKind::Limit => {
                let alphas = cofinal_sequence(&beta, rank as usize + 1)?;
                build_chain_limit(group, &alphas, rank as usize)
            }
            _ => build_chain_successor(group, rank),
        };
    }
    let blocks = default_blocks(group).map_err(|e| Error::Precondition(e.to_string()))?;
    multi_prime_compose(group, &blocks, ComposeOptions { depth: rank })
}

fn extract_basis(file: &Path, rank: u64, out: &Path) -> Result<ExitCode> {
    let group = load_group(file)?;
    let cert = extract(&group, rank)?;
    let run = json!({ "command": "extract-basis", "rank": rank, "seed": DEFAULT_SEED });
    let text = CertificateFile::from_certificate(&cert, Some(run)).to_json();
    fs::write(out, text + "\n").with_context(|| format!("writing {}", out.display()))?;
    println!(
        "wrote {} steps, basis of {} elements, {} targets to {}",
        cert.steps.len(),
        cert.final_basis.len(),
        cert.targets.len(),
        out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cert_verify(file: &Path) -> Result<ExitCode> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let cert = CertificateFile::from_json(&text)?.into_certificate()?;
    match smooth_chain_check(&cert) {
        Ok(()) => {
            println!("ok: {} steps, basis of {}", cert.steps.len(), cert.final_basis.len());
            Ok(ExitCode::SUCCESS)
        }
        Err(failure) => {
            println!("FAIL {failure}");
            Ok(ExitCode::from(1))
        }
    }
}

fn listing<K: std::fmt::Display>(m: &BTreeMap<K, BigInt>) -> String {
    let items: Vec<String> = m.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    format!("{{{}}}", items.join(", "))
}

fn decompose(file: &Path, text: &str, mode: Mode) -> Result<ExitCode> {
    let group = load_group(file)?;
    let f = Element::parse(&group.ambient, text)?;
    match mode {
        Mode::Member => match group.member_decompose(&f)? {
            Some(d) => {
                let pts: Vec<String> = d.window.points.iter().map(Ordinal::to_string).collect();
                let named: BTreeMap<String, BigInt> =
                    d.coefficients.into_iter().map(|(i, c)| (format!("g{i}"), c)).collect();
                println!("{}", listing(&named));
                println!("unique: {}", d.unique);
                println!("window: points [{}], {} tail columns", pts.join(", "), d.window.tail_columns.len());
                Ok(ExitCode::SUCCESS)
            }
            None => {
                println!("not a member");
                Ok(ExitCode::from(1))
            }
        },
        Mode::Semibasic => {
            if !f.is_tail_free() {
                bail!(Error::Precondition(format!("{f} has a nonzero residue at infinity")));
            }
            let family = group.semibasic_family(&f)?;
            let coeffs = semibasic_decompose(&f, &family, &f.cb())?;
            println!("{}", listing(&coeffs));
            for (x, q) in &family {
                println!("q[{x}] = {q}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn dd_check(file: &Path, cases: usize, seed: u64) -> Result<ExitCode> {
    let group = load_group(file)?;
    println!("seed: {seed}");
    let laws = phi_homomorphism_check(&Dictionary, &group, cases, seed)?;
    println!("ideal laws: {} cases, {} violations", laws.cases, laws.violations.len());
    for v in &laws.violations {
        println!("  case {} {}: {}", v.case, v.law, v.detail);
    }
    let ratios = if group.generators.iter().all(Element::is_zero) {
        None
    } else {
        Some(radical_power_check(&group, cases, seed)?)
    };
    if let Some(r) = &ratios {
        let bad = r.cases.iter().filter(|c| c.witness.is_none() || !c.minimal).count();
        println!("radical powers: {} cases, {} not minimal", r.cases.len(), bad);
    }
    let mut spec_ok = true;
    for g in &group.generators {
        spec_ok &= spec_map_check(&group, g)?.consistent;
    }
    println!("spec map on generators: {}", if spec_ok { "consistent" } else { "INCONSISTENT" });
    let passed = laws.passed() && ratios.is_none_or(|r| r.passed()) && spec_ok;
    Ok(status(passed))
}

fn run(config: RunConfig) -> Result<ExitCode> {
    match config.command {
        Command::DemoLimitq => demo_limitq(),
        Command::VerifyStaircase { file, a0, count } => verify_staircase_cmd(&file, a0.as_deref(), count),
        Command::ExtractBasis { file, rank, out } => extract_basis(&file, rank, &out),
        Command::CertVerify { file } => cert_verify(&file),
        Command::Decompose { file, element, mode } => decompose(&file, &element, mode),
        Command::DdCheck { file, cases, seed } => dd_check(&file, cases, seed),
    }
}

fn main() -> ExitCode {
    match run(RunConfig::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
