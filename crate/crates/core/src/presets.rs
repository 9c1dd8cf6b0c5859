//! Ready-made ambients and presentations used by the demo, tests and benches.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::element::{Ambient, Element, LabelSpec, Ladder, LadderShape, WeightFamily};
use crate::group::GroupPresentation;
use crate::ordinal::Ordinal;
use crate::space::ScatteredSpace;

pub const MAIN_LADDER: &str = "main";

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `[0, ω]` with `ω` the only infinite prime and ladder `main` at points `0, 1, 2, …`.
pub fn limit_q_ambient() -> Arc<Ambient> {
    let space = ScatteredSpace::new(Ordinal::omega(), [Ordinal::omega()]).expect("valid space");
    let ladder = Ladder::with_default_weights(MAIN_LADDER, Ordinal::omega()).expect("valid ladder");
    Arc::new(Ambient::new(space, vec![ladder]).expect("valid ambient"))
}

/// `a_n(k) = k!/n!` for `k >= n`, zero below.
pub fn limit_q_a(ambient: &Arc<Ambient>, n: u64) -> Element {
    let r = BigRational::new(BigInt::one(), factorial(n));
    Element::tail_term(ambient, MAIN_LADDER, None, r, n).expect("k!/n! is integral from n on")
}

/// `e_k` at the `k`-th point of the main ladder.
pub fn limit_q_e(ambient: &Arc<Ambient>, k: u64) -> Element {
    Element::basis(ambient, &Ordinal::from(k)).expect("naturals are finite primes")
}

/// `[0, ω^ω]` with `ω^ω` infinite, a powers ladder `ω, ω^3, ω^5, …` and two
/// residue labels with weights `k!` and `2^k·k!`.
pub fn limit_rank_ambient() -> Arc<Ambient> {
    let top: Ordinal = Ordinal::omega_pow(Ordinal::omega()).expect("within caps");
    let space = ScatteredSpace::new(top.clone(), [top.clone()]).expect("valid space");
    let shape = LadderShape::Powers {
        base: Ordinal::zero(),
        exp_base: Ordinal::zero(),
        first: 1,
        step: 2,
    };
    let labels = vec![
        LabelSpec {
            label: "b1".into(),
            weight: WeightFamily::factorial(),
        },
        LabelSpec {
            label: "b2".into(),
            weight: WeightFamily::factorial_pow(2).expect("positive base"),
        },
    ];
    let ladder = Ladder::new(MAIN_LADDER, top, Some(shape), labels).expect("valid ladder");
    Arc::new(Ambient::new(space, vec![ladder]).expect("valid ambient"))
}

/// `[0, ω·2]` with infinite primes `ω` and `ω·2`, ladders `left` (points `n`)
/// and `right` (points `ω + n + 1`).
pub fn two_prime_ambient() -> Arc<Ambient> {
    let w = Ordinal::omega();
    let w2 = Ordinal::omega_pow_mul(Ordinal::one(), 2).expect("within caps");
    let space = ScatteredSpace::new(w2.clone(), [w.clone(), w2.clone()]).expect("valid space");
    let left = Ladder::with_default_weights("left", w).expect("valid ladder");
    let right = Ladder::with_default_weights("right", w2).expect("valid ladder");
    Arc::new(Ambient::new(space, vec![left, right]).expect("valid ambient"))
}

/// A tail-free ambient `[0, top]` with no infinite primes.
pub fn discrete_ambient(top: Ordinal) -> Arc<Ambient> {
    let space = ScatteredSpace::new(top, []).expect("valid space");
    Arc::new(Ambient::new(space, vec![]).expect("valid ambient"))
}

/// `⟨a_0, …, a_{count-1}⟩` over [`limit_q_ambient`].
pub fn limit_q_group(count: u64) -> GroupPresentation {
    let amb = limit_q_ambient();
    let gens = (0..count).map(|n| limit_q_a(&amb, n)).collect();
    GroupPresentation::new(amb, gens).expect("same ambient")
}

/// `k ↦ k!/n!` from index `n` on ladder `ladder`.
pub fn factorial_tail(ambient: &Arc<Ambient>, ladder: &str, label: Option<&str>, n: u64) -> Element {
    let r = BigRational::new(BigInt::one(), factorial(n));
    Element::tail_term(ambient, ladder, label, r, n).expect("weights divisible by n! from n on")
}

/// Independent copies of the factorial family on both ladders of
/// [`two_prime_ambient`].
pub fn two_prime_group(count: u64) -> GroupPresentation {
    let amb = two_prime_ambient();
    let gens = ["left", "right"]
        .iter()
        .flat_map(|l| (0..count).map(|n| factorial_tail(&amb, l, None, n)).collect::<Vec<_>>())
        .collect();
    GroupPresentation::new(amb, gens).expect("same ambient")
}

/// Both label families of [`limit_rank_ambient`] for `n < count`, plus the
/// basis elements at `ω^j` for `1 <= j <= 2·count + 2`.
pub fn limit_rank_group(count: u64) -> GroupPresentation {
    let amb = limit_rank_ambient();
    let mut gens: Vec<Element> = ["b1", "b2"]
        .iter()
        .flat_map(|lab| {
            (0..count)
                .map(|n| factorial_tail(&amb, MAIN_LADDER, Some(lab), n))
                .collect::<Vec<_>>()
        })
        .collect();
    for j in 1..=2 * count + 2 {
        let x = Ordinal::omega_pow(Ordinal::from(j)).expect("within caps");
        gens.push(Element::basis(&amb, &x).expect("finite prime"));
    }
    GroupPresentation::new(amb, gens).expect("same ambient")
}
