//! Ideal-function facade: invertible ideals of a domain seen through their
//! valuation functions on a discrete core. Products add, sums take the
//! pointwise minimum, inverses negate.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::element::Element;
use crate::error::{Error, Result};
use crate::group::GroupPresentation;
use crate::ordinal::Ordinal;

/// Ladder indices probed past the last explicit tail start.
const TAIL_PROBES: u64 = 4;

/// `ν_I`: the valuation of `I` at each point of the core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealFunction {
    inner: Element,
}

impl IdealFunction {
    pub fn new(inner: Element) -> Self {
        IdealFunction { inner }
    }

    /// The whole domain: valuation zero everywhere.
    pub fn unit(like: &Element) -> Self {
        IdealFunction::new(Element::zero(like.ambient()))
    }

    pub fn inner(&self) -> &Element {
        &self.inner
    }

    pub fn is_unit(&self) -> bool {
        self.inner.is_zero()
    }

    /// Contained in the domain.
    pub fn is_integral(&self) -> bool {
        self.inner.is_positive()
    }

    /// `self ⊆ other`, i.e. `ν_self ≥ ν_other` (containment reverses the order).
    pub fn contained_in(&self, other: &IdealFunction) -> Result<bool> {
        other.inner.le(&self.inner)
    }
}

impl fmt::Display for IdealFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ν[{}]", self.inner)
    }
}

/// The three ideal operations, abstracted so a faulty dictionary can be fed
/// to the law checker.
pub trait IdealOps {
    fn product(&self, a: &IdealFunction, b: &IdealFunction) -> Result<IdealFunction>;
    fn sum(&self, a: &IdealFunction, b: &IdealFunction) -> Result<IdealFunction>;
    fn inverse(&self, a: &IdealFunction) -> Result<IdealFunction>;
}

/// The faithful dictionary.
#[derive(Debug, Clone, Copy, Default)]
pub struct Dictionary;

impl IdealOps for Dictionary {
    fn product(&self, a: &IdealFunction, b: &IdealFunction) -> Result<IdealFunction> {
        Ok(IdealFunction::new(a.inner.checked_add(&b.inner)?))
    }

    fn sum(&self, a: &IdealFunction, b: &IdealFunction) -> Result<IdealFunction> {
        Ok(IdealFunction::new(a.inner.meet(&b.inner)?))
    }

    fn inverse(&self, a: &IdealFunction) -> Result<IdealFunction> {
        Ok(IdealFunction::new(-&a.inner))
    }
}

pub fn ideal_product(a: &IdealFunction, b: &IdealFunction) -> Result<IdealFunction> {
    Dictionary.product(a, b)
}

pub fn ideal_sum(a: &IdealFunction, b: &IdealFunction) -> Result<IdealFunction> {
    Dictionary.sum(a, b)
}

pub fn ideal_inverse(a: &IdealFunction) -> Result<IdealFunction> {
    Dictionary.inverse(a)
}

/// Least `n` with `I^n ⊆ J` for integral ideals of equal radical.
/// `None` signals distinct radicals.
pub fn radical_power_witness(i: &IdealFunction, j: &IdealFunction) -> Option<u64> {
    i.inner.bounded_ratio_witness(&j.inner)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    Product,
    Sum,
    Idempotence,
    Commutativity,
    Inverse,
    Injectivity,
    OrderReversal,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Law::Product => "product",
            Law::Sum => "sum",
            Law::Idempotence => "idempotence",
            Law::Commutativity => "commutativity",
            Law::Inverse => "inverse",
            Law::Injectivity => "injectivity",
            Law::OrderReversal => "order_reversal",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawViolation {
    pub law: Law,
    pub case: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub cases: usize,
    pub seed: u64,
    pub violations: Vec<LawViolation>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Points where the given elements are compared: explicit points, plus ladder
/// indices up to a few past each tail start.
pub fn probe_points<'a>(elements: impl IntoIterator<Item = &'a Element>) -> Vec<Ordinal> {
    let mut pts = BTreeSet::new();
    for f in elements {
        pts.extend(f.explicit_points());
        for (li, t) in f.tails() {
            let ladder = &f.ambient().ladders[*li];
            pts.extend((0..t.start + TAIL_PROBES).map(|k| ladder.point(k)));
        }
    }
    pts.into_iter().collect()
}

fn values(f: &Element, pts: &[Ordinal]) -> Result<Vec<BigInt>> {
    pts.iter().map(|x| f.eval(x)).collect()
}

/// Runs the homomorphism and lattice laws of `ops` on `cases` random ideal
/// pairs drawn from `group`.
pub fn phi_homomorphism_check<O: IdealOps>(
    ops: &O,
    group: &GroupPresentation,
    cases: usize,
    seed: u64,
) -> Result<LawReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for case in 0..cases {
        let i = IdealFunction::new(group.sample(&mut rng, 3, 3));
        let j = IdealFunction::new(group.sample(&mut rng, 3, 3));
        let mut fail = |law, detail: String| violations.push(LawViolation { law, case, detail });

        let prod = ops.product(&i, &j)?;
        let sum = ops.sum(&i, &j)?;
        let pts = probe_points([i.inner(), j.inner(), prod.inner(), sum.inner()]);
        let (vi, vj) = (values(&i.inner, &pts)?, values(&j.inner, &pts)?);
        let (vp, vs) = (values(&prod.inner, &pts)?, values(&sum.inner, &pts)?);
        for (k, x) in pts.iter().enumerate() {
            if vp[k] != &vi[k] + &vj[k] {
                fail(Law::Product, format!("at {x}: {} + {} != {}", vi[k], vj[k], vp[k]));
            }
            if vs[k] != vi[k].clone().min(vj[k].clone()) {
                fail(Law::Sum, format!("at {x}: min({}, {}) != {}", vi[k], vj[k], vs[k]));
            }
        }
        if ops.sum(&i, &i)? != i {
            fail(Law::Idempotence, format!("I + I != I for {i}"));
        }
        if ops.sum(&j, &i)? != sum {
            fail(Law::Commutativity, format!("I + J != J + I for {i}, {j}"));
        }
        if ops.product(&j, &i)? != prod {
            fail(Law::Commutativity, format!("IJ != JI for {i}, {j}"));
        }
        if !ops.product(&i, &ops.inverse(&i)?)?.is_unit() {
            fail(Law::Inverse, format!("I·I⁻¹ is not the unit for {i}"));
        }
        for (a, b) in [(&i, &j), (&i, &i)] {
            let unit = ops.product(a, &ops.inverse(b)?)?.is_unit();
            if unit != (a == b) {
                fail(Law::Injectivity, format!("I·J⁻¹ unit = {unit} but I == J is {}", a == b));
            }
        }
        // I ⊆ J exactly when I + J = J.
        if i.contained_in(&j)? != (sum == j) {
            fail(Law::OrderReversal, format!("containment disagrees with I + J = J for {i}, {j}"));
        }
    }
    Ok(LawReport {
        cases,
        seed,
        violations,
    })
}

fn abs(f: &Element) -> Element {
    &f.pos_part() - &f.neg_part()
}

/// Two integral ideals with the same radical: `I = |f|` and
/// `J = |f| + (c·|f|) ∧ |g|` for random members `f, g` with `f ≠ 0`.
pub fn equal_radical_pair<R: rand::Rng + ?Sized>(
    group: &GroupPresentation,
    rng: &mut R,
) -> Option<(IdealFunction, IdealFunction)> {
    let f = (0..64).map(|_| group.sample(rng, 3, 3)).find(|f| !f.is_zero())?;
    let i = abs(&f);
    let g = abs(&group.sample(rng, 3, 5));
    let j = &i + &i.scale_i64(rng.gen_range(1..=6)).meet(&g).ok()?;
    Some((IdealFunction::new(i), IdealFunction::new(j)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioCase {
    pub case: usize,
    pub witness: Option<u64>,
    /// `witness` dominates and `witness − 1` does not.
    pub minimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioReport {
    pub seed: u64,
    pub cases: Vec<RatioCase>,
}

impl RatioReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.witness.is_some() && c.minimal)
    }
}

/// Radical-power witnesses on random equal-radical pairs, each checked for
/// domination and minimality by direct comparison.
pub fn radical_power_check(group: &GroupPresentation, cases: usize, seed: u64) -> Result<RatioReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(cases);
    for case in 0..cases {
        let Some((i, j)) = equal_radical_pair(group, &mut rng) else {
            return Err(Error::Precondition("the group has no nonzero members".into()));
        };
        let witness = radical_power_witness(&i, &j);
        let minimal = match witness {
            Some(n) => {
                let pow = |k: u64| IdealFunction::new(i.inner.scale_i64(k as i64));
                pow(n).contained_in(&j)? && (n == 0 || !pow(n - 1).contained_in(&j)?)
            }
            None => false,
        };
        out.push(RatioCase { case, witness, minimal });
    }
    Ok(RatioReport { seed, cases: out })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecMapPoint {
    pub point: Ordinal,
    /// `f ∉ P_x`.
    pub in_open_set: bool,
    /// `x ∈ supp f`, read from the symbolic support.
    pub in_support: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecMapReport {
    pub points: Vec<SpecMapPoint>,
    pub consistent: bool,
}

fn symbolic_support_contains(f: &Element, x: &Ordinal) -> bool {
    let supp = f.support();
    if supp.points.contains(x) {
        return true;
    }
    match f.ambient().locate(x) {
        Some((li, k)) => supp
            .ladders
            .get(&f.ambient().ladders[li].id)
            .is_some_and(|missing| !missing.contains(&k)),
        None => false,
    }
}

/// Compares the prime predicate `f ∉ P_x` with membership in the symbolic
/// support of `f` on every probe point of `f` and the generators.
pub fn spec_map_check(group: &GroupPresentation, f: &Element) -> Result<SpecMapReport> {
    if f.ambient() != &group.ambient {
        return Err(Error::AmbientMismatch);
    }
    let pts = probe_points(group.generators.iter().chain([f]));
    let mut points = Vec::with_capacity(pts.len());
    for x in pts {
        let prime = group.finite_prime(&x)?;
        points.push(SpecMapPoint {
            in_open_set: !prime.contains(f)?,
            in_support: symbolic_support_contains(f, &x),
            point: x,
        });
    }
    let consistent = points.iter().all(|p| p.in_open_set == p.in_support);
    Ok(SpecMapReport { points, consistent })
}
