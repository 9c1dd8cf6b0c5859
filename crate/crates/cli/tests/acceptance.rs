//! Acceptance suite. Prints one line per criterion and exits nonzero if any
//! criterion fails. All comparisons are exact; wall-clock limits are listed
//! next to each criterion.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lgfree_core::ddmodel::{
    equal_radical_pair, ideal_product, ideal_sum, phi_homomorphism_check, radical_power_witness, Dictionary,
    IdealFunction,
};
use lgfree_core::element::{Ambient, Element};
use lgfree_core::freeness::{
    build_chain_successor, multi_prime_compose, smooth_chain_check, verify_staircase, CheckSite, ComposeOptions,
    FreenessCertificate, StaircaseBase,
};
use lgfree_core::group::{semibasic_decompose, GroupPresentation};
use lgfree_core::ordinal::Ordinal;
use lgfree_core::presets::{
    discrete_ambient, limit_q_a, limit_q_ambient, limit_q_e, limit_q_group, limit_rank_group, two_prime_group,
    MAIN_LADDER,
};
use lgfree_core::schema::CertificateFile;
use lgfree_core::space::{ClopenBlock, ScatteredSpace};

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

const SEED: u64 = 0x00AC_CE97;

fn o(s: &str) -> Ordinal {
    s.parse().expect("ordinal literal")
}

/// Factorial by repeated multiplication, kept apart from the library's own.
fn fact(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

fn within(start: Instant, limit: Duration) -> Outcome {
    let t = start.elapsed();
    ensure!(t < limit, "took {t:?}, limit {limit:?}");
    Ok(())
}

fn lgfree(args: &[&str]) -> (Option<i32>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lgfree"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code(), String::from_utf8_lossy(&out.stdout).into_owned())
}

// 1 ------------------------------------------------------------------------

fn example_reproduction() -> Outcome {
    let start = Instant::now();
    let (code, text) = lgfree(&["demo-limitq"]);
    ensure!(code == Some(0), "demo-limitq exited with {code:?}");
    let lines: Vec<&str> = text.lines().collect();
    for n in 0..4u64 {
        let row: Vec<String> = (0..5u64)
            .map(|k| if k >= n { (fact(k) / fact(n)).to_string() } else { "0".into() })
            .collect();
        let want = format!("a_{n}: {}", row.join(" "));
        ensure!(lines.get(n as usize) == Some(&want.as_str()), "row {n}: got {:?}, want {want:?}", lines.get(n as usize));
    }
    ensure!(!text.contains("FAIL"), "demo reported a failing axiom:\n{text}");
    within(start, Duration::from_secs(1))?;

    let group = limit_q_group(9);
    let amb = &group.ambient;
    let a: Vec<Element> = (0..=8).map(|n| limit_q_a(amb, n)).collect();
    let base = StaircaseBase {
        ladder: MAIN_LADDER.into(),
        label: "b".into(),
        elements: a.clone(),
        divisors: (0..=8).map(fact).collect(),
        residue_targets: (0..=8).map(|n| BigRational::new(BigInt::one(), fact(n))).collect(),
    };
    let report = verify_staircase(&base, &group).map_err(|e| e.to_string())?;
    ensure!(report.passed(), "staircase axioms: {report:?}");
    for (n, an) in a.iter().enumerate() {
        let n = n as u64;
        ensure!(an.mu(MAIN_LADDER) == Ok(n), "mu(a_{n}) = {:?}", an.mu(MAIN_LADDER));
        let h = &an.scale(&fact(n)) - &a[0];
        for k in n..=n + 6 {
            let v = h.eval(&Ordinal::from(k)).map_err(|e| e.to_string())?;
            ensure!(v.is_zero(), "(n!·a_{n} - a_0)({k}) = {v}");
        }
    }
    Ok(())
}

// 2 ------------------------------------------------------------------------

fn residue_map() -> Outcome {
    let amb = limit_q_ambient();
    let w = Ordinal::omega();
    for n in 0..=8 {
        let r = limit_q_a(&amb, n).residue_at(&w).map_err(|e| e.to_string())?;
        ensure!(r == vec![BigRational::new(BigInt::one(), fact(n))], "residue of a_{n} is {r:?}");
    }
    let mut kernel: Vec<Element> = (0..6).map(|k| limit_q_e(&amb, k)).collect();
    kernel.extend((1..=8).map(|n| &limit_q_a(&amb, n).scale(&fact(n)) - &limit_q_a(&amb, 0)));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..50 {
        let f = (0..4).fold(Element::zero(&amb), |acc, _| {
            &acc + &limit_q_e(&amb, rng.gen_range(0..10)).scale_i64(rng.gen_range(-5..=5))
        });
        kernel.push(f);
    }
    for f in &kernel {
        ensure!(f.is_tail_free(), "{f} should have no tail");
        let r = f.residue_at(&w).map_err(|e| e.to_string())?;
        ensure!(r.iter().all(Zero::is_zero), "kernel element {f} has residue {r:?}");
    }
    Ok(())
}

// 3 ------------------------------------------------------------------------

/// All `ω³·a + ω²·b + ω·c + d` with coefficients `<= bound`, up to `top`, sorted.
fn truncation(top: &Ordinal, bound: u64) -> Vec<Ordinal> {
    let mut pts = vec![top.clone()];
    for a in 0..=bound {
        for b in 0..=bound {
            for c in 0..=bound {
                for d in 0..=bound {
                    let terms: Vec<(Ordinal, u64)> = [(3, a), (2, b), (1, c), (0, d)]
                        .into_iter()
                        .filter(|&(_, k)| k > 0)
                        .map(|(e, k)| (Ordinal::from(e), k))
                        .collect();
                    let x = Ordinal::from_terms(terms).expect("canonical");
                    if x <= *top {
                        pts.push(x);
                    }
                }
            }
        }
    }
    pts.sort();
    pts.dedup();
    pts
}

/// Derived-set ranks by brute force over nested truncations `T_0 ⊂ … ⊂ T_D`.
///
/// A point of `T_i` has rank `> γ` iff points of rank `>= γ` accumulate at it;
/// the interval just below it is probed with the next, finer truncation.
/// Each level resolves one more rank, so `D` levels are exact up to rank `D - 1`.
fn oracle_ranks(top: &Ordinal, base: u64, levels: u64) -> BTreeMap<Ordinal, u64> {
    let sets: Vec<Vec<Ordinal>> = (0..=levels).map(|i| truncation(top, base + i)).collect();
    let mut finer: BTreeMap<Ordinal, u64> = sets[levels as usize].iter().map(|x| (x.clone(), 0)).collect();
    for i in (0..levels as usize).rev() {
        let level = &sets[i];
        let mut ranks = BTreeMap::new();
        for (j, x) in level.iter().enumerate() {
            let rank = if j == 0 {
                0
            } else {
                let z = &level[j - 1];
                finer
                    .range(z.clone()..x.clone())
                    .filter(|(y, _)| *y > z)
                    .map(|(_, r)| r + 1)
                    .max()
                    .unwrap_or(0)
            };
            ranks.insert(x.clone(), rank);
        }
        finer = ranks;
    }
    finer
}

fn cb_oracle() -> Outcome {
    let start = Instant::now();
    for top in ["w", "w*2", "w^2", "w^2*3", "w^3"] {
        let top = o(top);
        let space = ScatteredSpace::new(top.clone(), []).map_err(|e| e.to_string())?;
        let ranks = oracle_ranks(&top, 3, 5);
        for (x, r) in &ranks {
            let got = space.cb_rank(x).map_err(|e| e.to_string())?;
            ensure!(got == Ordinal::from(*r), "top {top}: cb({x}) = {got}, oracle {r}");
        }
    }
    within(start, Duration::from_secs(5))
}

// 4 ------------------------------------------------------------------------

fn semibasic_span_family(top: &str, q: &[(&str, &[(&str, i64)])]) -> (Arc<Ambient>, Vec<(Ordinal, Element)>) {
    let amb = discrete_ambient(o(top));
    let e = |s: &str| Element::basis(&amb, &o(s)).expect("finite prime");
    let fam = q
        .iter()
        .map(|(x, extra)| {
            let q = extra.iter().fold(e(x), |acc, (y, c)| &acc + &e(y).scale_i64(*c));
            (o(x), q)
        })
        .collect();
    (amb, fam)
}

fn semibasic_span_round_trip() -> Outcome {
    let spaces = [
        semibasic_span_family(
            "w+1",
            &[("0", &[]), ("1", &[]), ("2", &[]), ("3", &[]), ("w", &[("1", 1), ("3", 2)]), ("w+1", &[])],
        ),
        semibasic_span_family(
            "w*2+1",
            &[
                ("0", &[]),
                ("1", &[]),
                ("w", &[("0", 3)]),
                ("w+1", &[]),
                ("w*2", &[("w+1", 1), ("1", 1)]),
                ("w*2+1", &[]),
            ],
        ),
        semibasic_span_family(
            "w^2+1",
            &[
                ("0", &[]),
                ("1", &[]),
                ("w", &[("0", 1)]),
                ("w*2", &[("1", 1)]),
                ("w^2", &[("w", 1), ("w*2", 2), ("1", 1)]),
                ("w^2+1", &[]),
            ],
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    for (amb, fam) in &spaces {
        let beta = Ordinal::from(amb.space.cb_rank_space().as_u64().expect("finite") - 1);
        let family: BTreeMap<Ordinal, Element> = fam.iter().cloned().collect();
        let points: Vec<Ordinal> = fam.iter().map(|(x, _)| x.clone()).collect();
        // matrix[i][j] = q_i(points[j]); every q lives on these points.
        let matrix: Vec<Vec<i64>> = fam
            .iter()
            .map(|(_, q)| {
                points
                    .iter()
                    .map(|y| i64::try_from(q.eval(y).expect("finite prime")).expect("small"))
                    .collect()
            })
            .collect();
        for case in 0..500 {
            let c: Vec<i64> = (0..fam.len()).map(|_| rng.gen_range(-2..=2)).collect();
            let f = fam
                .iter()
                .zip(&c)
                .fold(Element::zero(amb), |acc, ((_, q), k)| &acc + &q.scale_i64(*k));
            let got = semibasic_decompose(&f, &family, &beta).map_err(|e| format!("case {case}: {e}"))?;
            let resum = got
                .iter()
                .fold(Element::zero(amb), |acc, (x, k)| &acc + &family[x].scale(k));
            ensure!(resum == f, "case {case}: re-sum {resum} != {f}");

            let values: Vec<i64> = points
                .iter()
                .map(|y| i64::try_from(f.eval(y).expect("finite prime")).expect("small"))
                .collect();
            let solutions = brute_force(&matrix, &values, 2);
            ensure!(solutions.len() == 1, "case {case}: brute force found {} solutions", solutions.len());
            let want: BTreeMap<Ordinal, BigInt> = points
                .iter()
                .zip(&solutions[0])
                .filter(|(_, k)| **k != 0)
                .map(|(x, k)| (x.clone(), BigInt::from(*k)))
                .collect();
            ensure!(got == want, "case {case}: coefficients {got:?}, brute force {want:?}");
        }
    }
    Ok(())
}

/// Every coefficient vector in `[-bound, bound]^n` reproducing `values`.
fn brute_force(matrix: &[Vec<i64>], values: &[i64], bound: i64) -> Vec<Vec<i64>> {
    let n = matrix.len();
    let mut out = Vec::new();
    let mut c = vec![-bound; n];
    loop {
        let hit = (0..values.len()).all(|j| (0..n).map(|i| c[i] * matrix[i][j]).sum::<i64>() == values[j]);
        if hit {
            out.push(c.clone());
        }
        let mut i = 0;
        while i < n && c[i] == bound {
            c[i] = -bound;
            i += 1;
        }
        if i == n {
            return out;
        }
        c[i] += 1;
    }
}

// 5 ------------------------------------------------------------------------

/// Explicit points plus the first dozen points of every ladder.
fn probes(amb: &Ambient, elems: &[&Element]) -> Vec<Ordinal> {
    let mut pts: Vec<Ordinal> = elems.iter().flat_map(|f| f.explicit_points()).collect();
    for l in &amb.ladders {
        pts.extend((0..12).map(|k| l.point(k)));
    }
    pts.sort();
    pts.dedup();
    pts
}

fn lattice_laws() -> Outcome {
    let groups = [limit_q_group(6), two_prime_group(4), limit_rank_group(3)];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let err = |e: lgfree_core::error::Error| e.to_string();
    for g in &groups {
        for case in 0..1000 {
            let f = g.sample(&mut rng, 3, 4);
            let h = g.sample(&mut rng, 3, 4);
            let k = g.sample(&mut rng, 3, 4);
            let (fh, hf) = (f.meet(&h).map_err(err)?, h.meet(&f).map_err(err)?);
            ensure!(fh == hf, "case {case}: meet not commutative");
            ensure!(f.join(&h).map_err(err)? == h.join(&f).map_err(err)?, "case {case}: join not commutative");
            ensure!(&f + &h == &h + &f, "case {case}: sum not commutative");
            ensure!(
                fh.meet(&k).map_err(err)? == f.meet(&h.meet(&k).map_err(err)?).map_err(err)?,
                "case {case}: meet not associative"
            );
            ensure!(
                f.join(&h).map_err(err)?.join(&k).map_err(err)? == f.join(&h.join(&k).map_err(err)?).map_err(err)?,
                "case {case}: join not associative"
            );
            ensure!(&(&f + &h) + &k == &f + &(&h + &k), "case {case}: sum not associative");
            ensure!(f.meet(&f).map_err(err)? == f && f.join(&f).map_err(err)? == f, "case {case}: not idempotent");
            ensure!(f.meet(&f.join(&h).map_err(err)?).map_err(err)? == f, "case {case}: absorption f∧(f∨g)");
            ensure!(f.join(&fh).map_err(err)? == f, "case {case}: absorption f∨(f∧g)");
            let lhs = &f + &h.meet(&k).map_err(err)?;
            let rhs = (&f + &h).meet(&(&f + &k)).map_err(err)?;
            ensure!(lhs == rhs, "case {case}: translation law fails for {f}, {h}, {k}");
            for x in probes(&g.ambient, &[&f, &h]) {
                let (a, b) = (f.eval(&x).map_err(err)?, h.eval(&x).map_err(err)?);
                ensure!(fh.eval(&x).map_err(err)? == a.clone().min(b.clone()), "case {case}: meet at {x}");
            }
        }
    }
    Ok(())
}

// 6 ------------------------------------------------------------------------

fn rank_of_sums() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let discrete = discrete_ambient(o("w*3+2"));
    let d_points: Vec<Ordinal> = ["0", "1", "4", "w", "w+1", "w*2", "w*2+3", "w*3", "w*3+1"]
        .iter()
        .map(|s| o(s))
        .collect();
    let oracle = oracle_ranks(&o("w*3+2"), 4, 3);
    let lq = limit_q_ambient();
    let ladder_rank = oracle_ranks(&o("w"), 3, 3)[&Ordinal::omega()];
    for case in 0..500 {
        let positive = |rng: &mut ChaCha8Rng, tailed: bool| -> Element {
            if tailed {
                let mut f = Element::zero(&lq);
                for _ in 0..rng.gen_range(1..=3) {
                    f = &f + &limit_q_e(&lq, rng.gen_range(0..8)).scale_i64(rng.gen_range(1..=4));
                }
                if rng.gen_bool(0.5) {
                    f = &f + &limit_q_a(&lq, rng.gen_range(0..6));
                }
                f
            } else {
                (0..rng.gen_range(1..=3)).fold(Element::zero(&discrete), |acc, _| {
                    let x = &d_points[rng.gen_range(0..d_points.len())];
                    &acc + &Element::basis(&discrete, x).expect("finite prime").scale_i64(rng.gen_range(1..=4))
                })
            }
        };
        let tailed = case % 2 == 1;
        let (f, g) = (positive(&mut rng, tailed), positive(&mut rng, tailed));
        ensure!(f.is_positive() && g.is_positive(), "case {case}: sample not positive");
        for h in [&f, &g] {
            let want = if tailed {
                if h.is_tail_free() { 0 } else { ladder_rank }
            } else {
                h.explicit_points().iter().map(|x| oracle[x]).max().unwrap_or(0)
            };
            ensure!(h.cb() == Ordinal::from(want), "case {case}: cb({h}) = {}, oracle {want}", h.cb());
        }
        let s = &f + &g;
        ensure!(s.cb() == f.cb().max(g.cb()), "case {case}: cb({s}) != max(cb f, cb g)");
    }
    Ok(())
}

// 7 ------------------------------------------------------------------------

/// Rank over ℚ of the value vectors on `0..=span` plus the residue column.
fn rational_rank(elems: &[Element], span: u64) -> usize {
    let mut rows: Vec<Vec<BigRational>> = elems
        .iter()
        .map(|f| {
            let mut v: Vec<BigRational> = (0..=span)
                .map(|k| BigRational::from_integer(f.eval(&Ordinal::from(k)).expect("finite prime")))
                .collect();
            v.extend(f.residue(0));
            v
        })
        .collect();
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = &rows[r][col] / &pivot[col];
                for c in col..width {
                    let d = &factor * &pivot[c];
                    rows[r][c] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn limit_q_chain() -> Result<FreenessCertificate, String> {
    build_chain_successor(&limit_q_group(10), 6).map_err(|e| e.to_string())
}

fn chain_certification() -> Outcome {
    let start = Instant::now();
    let cert = limit_q_chain()?;
    let amb = cert.ambient.clone();
    let span = 40;
    let mut prev: Vec<Element> = Vec::new();
    for (r, step) in cert.steps.iter().enumerate() {
        ensure!(step.index == Ordinal::from(r as u64), "step {r} has index {}", step.index);
        ensure!(step.torsion_bound == fact(r as u64), "step {r}: bound {} != {r}!", step.torsion_bound);
        let a = step.a_basis(&prev);
        ensure!(rational_rank(&a, span) == a.len(), "step {r}: A is not independent");
        ensure!(rational_rank(&step.basis, span) == step.basis.len(), "step {r}: basis not independent");
        ensure!(step.torsion_witnesses.len() == step.extra.len(), "step {r}: witness count");
        for (g, w) in step.extra.iter().zip(&step.torsion_witnesses) {
            ensure!(w.len() == a.len(), "step {r}: witness length");
            let lhs = a.iter().zip(w).fold(Element::zero(&amb), |acc, (e, c)| &acc + &e.scale(c));
            ensure!(lhs == g.scale(&step.torsion_bound), "step {r}: witness for {g} does not validate");
        }
        prev = step.basis.clone();
    }
    let basis = GroupPresentation::new(amb.clone(), cert.final_basis.clone()).map_err(|e| e.to_string())?;
    for n in 0..=6 {
        for t in [limit_q_a(&amb, n), limit_q_e(&amb, n)] {
            let d = basis.member_decompose(&t).map_err(|e| e.to_string())?;
            let Some(d) = d else {
                return Err(format!("{t} is not in the span of the final basis"));
            };
            ensure!(d.unique, "{t} does not decompose uniquely");
            let resum = d
                .coefficients
                .iter()
                .fold(Element::zero(&amb), |acc, (i, c)| &acc + &cert.final_basis[*i].scale(c));
            ensure!(resum == t, "{t} re-sums to {resum}");
        }
    }
    smooth_chain_check(&cert).map_err(|e| format!("checker: {e}"))?;
    within(start, Duration::from_secs(10))
}

// 8 ------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
enum Mutation {
    DoubleBasisEntry,
    BumpWitness,
    BumpBound,
}

fn mutation_detection() -> Outcome {
    let cert = limit_q_chain()?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let with_extras: Vec<usize> = (0..cert.steps.len()).filter(|&s| !cert.steps[s].extra.is_empty()).collect();
    ensure!(!with_extras.is_empty(), "no step has extra generators");
    for m in 0..20 {
        let kind = [Mutation::DoubleBasisEntry, Mutation::BumpWitness, Mutation::BumpBound][m % 3];
        let mut bad = cert.clone();
        let s = match kind {
            Mutation::DoubleBasisEntry => rng.gen_range(0..bad.steps.len()),
            _ => with_extras[rng.gen_range(0..with_extras.len())],
        };
        let step = &mut bad.steps[s];
        match kind {
            Mutation::DoubleBasisEntry => {
                let i = rng.gen_range(0..step.basis.len());
                step.basis[i] = step.basis[i].scale_i64(2);
            }
            Mutation::BumpWitness => {
                let i = rng.gen_range(0..step.torsion_witnesses.len());
                let j = rng.gen_range(0..step.torsion_witnesses[i].len());
                step.torsion_witnesses[i][j] += 1;
            }
            Mutation::BumpBound => step.torsion_bound += 1,
        }
        ensure!(
            smooth_chain_check(&bad).map_err(|f| f.site) == Err(CheckSite::Step(s)),
            "mutation {m} ({kind:?} at step {s}) not caught at its step by the library checker"
        );
        let path = dir.path().join(format!("m{m}.json"));
        std::fs::write(&path, CertificateFile::from_certificate(&bad, None).to_json()).map_err(|e| e.to_string())?;
        let (code, text) = lgfree(&["cert-verify", path.to_str().expect("utf-8 path")]);
        ensure!(code == Some(1), "mutation {m} ({kind:?} at step {s}): exit {code:?}");
        let reported = text
            .split("step ")
            .nth(1)
            .and_then(|t| t.split(|c: char| !c.is_ascii_digit()).next())
            .and_then(|d| d.parse::<usize>().ok());
        ensure!(reported == Some(s), "mutation {m} ({kind:?} at step {s}): reported {text:?}");
    }
    Ok(())
}

// 9 ------------------------------------------------------------------------

fn dd_facade() -> Outcome {
    let err = |e: lgfree_core::error::Error| e.to_string();
    let group = limit_q_group(6);
    let report = phi_homomorphism_check(&Dictionary, &group, 200, SEED).map_err(err)?;
    ensure!(report.passed(), "law violations: {:?}", report.violations);

    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    for case in 0..200 {
        let i = IdealFunction::new(group.sample(&mut rng, 3, 3));
        let j = IdealFunction::new(group.sample(&mut rng, 3, 3));
        let (p, s) = (ideal_product(&i, &j).map_err(err)?, ideal_sum(&i, &j).map_err(err)?);
        for x in probes(&group.ambient, &[i.inner(), j.inner()]) {
            let (a, b) = (i.inner().eval(&x).map_err(err)?, j.inner().eval(&x).map_err(err)?);
            ensure!(p.inner().eval(&x).map_err(err)? == &a + &b, "case {case}: product at {x}");
            ensure!(s.inner().eval(&x).map_err(err)? == a.min(b), "case {case}: sum at {x}");
        }
    }

    for case in 0..100 {
        let (i, j) = equal_radical_pair(&group, &mut rng).ok_or("no nonzero members")?;
        ensure!(i.inner().support() == j.inner().support(), "case {case}: supports differ");
        let Some(n) = radical_power_witness(&i, &j) else {
            return Err(format!("case {case}: no witness for {i}, {j}"));
        };
        let dominates = |k: u64| j.inner().le(&i.inner().scale_i64(k as i64)).map_err(err);
        ensure!(dominates(n)?, "case {case}: {n}·I does not dominate J");
        ensure!(n >= 1 && !dominates(n - 1)?, "case {case}: {n} is not minimal");
        for x in probes(&group.ambient, &[i.inner(), j.inner()]) {
            let (a, b) = (i.inner().eval(&x).map_err(err)?, j.inner().eval(&x).map_err(err)?);
            ensure!(!a.is_negative() && BigInt::from(n) * &a >= b, "case {case}: probe {x} exceeds the witness");
        }
    }
    Ok(())
}

// 10 -----------------------------------------------------------------------

fn multi_prime() -> Outcome {
    let start = Instant::now();
    let g = two_prime_group(6);
    let blocks = [
        ClopenBlock::new(o("0"), o("w")).map_err(|e| e.to_string())?,
        ClopenBlock::new(o("w"), o("w*2")).map_err(|e| e.to_string())?,
    ];
    let cert = multi_prime_compose(&g, &blocks, ComposeOptions { depth: 4 }).map_err(|e| e.to_string())?;
    smooth_chain_check(&cert).map_err(|e| format!("checker: {e}"))?;
    for (label, idx) in [("left a_0", 0), ("right a_0", 6)] {
        ensure!(cert.targets.contains(&g.generators[idx]), "{label} is not certified");
    }
    within(start, Duration::from_secs(10))
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, fn() -> Outcome); 10] = [
        ("example reproduction", "exact, < 1 s", example_reproduction),
        ("residue map", "exact", residue_map),
        ("cb-rank oracle agreement", "exact, < 5 s", cb_oracle),
        ("span decomposition round trip", "exact, 500 cases per space", semibasic_span_round_trip),
        ("lattice and group laws", "exact, 1000 triples per presentation", lattice_laws),
        ("rank of sums", "exact, 500 pairs", rank_of_sums),
        ("chain certification", "exact, < 10 s", chain_certification),
        ("mutation detection", "20 mutations, 100%", mutation_detection),
        ("ideal-function facade", "exact, 200 + 100 cases", dd_facade),
        ("multi-prime composer", "exact, < 10 s", multi_prime),
    ];
    let mut failed = 0;
    for (n, (name, tolerance, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS  {name} [{tolerance}] ({ms} ms)", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} [{tolerance}] ({ms} ms): {why}", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
