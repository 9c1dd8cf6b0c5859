//! Finitely generated subgroups of the function group, with membership,
//! prime-ideal predicates, semibasic elements and the rank-descending span
//! decomposition over a semibasic family.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::coords::{combine, ProbeWindow};
use crate::element::{Ambient, Element};
use crate::error::{Error, Result};
use crate::hnf::{self, Hermite};
use crate::ordinal::Ordinal;
use crate::space::cb_rank_of;

/// Default coefficient bound for the semibasic search.
pub const SEMIBASIC_BOUND: i64 = 4;
/// Default number of generators combined by the semibasic search.
pub const SEMIBASIC_TERMS: usize = 3;

#[derive(Debug, Clone)]
pub struct GroupPresentation {
    pub ambient: Arc<Ambient>,
    pub generators: Vec<Element>,
    /// Caller-fixed probe window; computed from the inputs when absent.
    pub window: Option<ProbeWindow>,
}

/// `input = Σ coefficients[i]·generators[i] + residual`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub coefficients: BTreeMap<usize, BigInt>,
    /// Always zero for a successful decomposition; kept so the identity can be checked.
    pub residual: Element,
    pub unique: bool,
    pub window: ProbeWindow,
}

/// Membership predicate of the finite prime `P_x = {f : f(x) = 0}`.
#[derive(Debug, Clone)]
pub struct FinitePrime {
    pub point: Ordinal,
}

impl FinitePrime {
    pub fn contains(&self, f: &Element) -> Result<bool> {
        Ok(f.eval(&self.point)?.is_zero())
    }

    /// Image of `f` in `G/P_x ⊆ ℤ`.
    pub fn residue(&self, f: &Element) -> Result<BigInt> {
        f.eval(&self.point)
    }
}

/// Semibasic family over a window with its evaluation matrix.
#[derive(Debug, Clone)]
pub struct KernelCertificate {
    /// Rank-descending, ties in increasing order.
    pub points: Vec<Ordinal>,
    pub family: Vec<Element>,
    /// `matrix[i][j] = family[i](points[j])`.
    pub matrix: Vec<Vec<BigInt>>,
}

impl KernelCertificate {
    /// Unit diagonal and zeros below it: the independence witness.
    pub fn is_unitriangular(&self) -> bool {
        self.matrix.iter().enumerate().all(|(i, row)| {
            row[i].is_one() && row[..i].iter().all(Zero::is_zero)
        })
    }
}

/// Sorts points by decreasing rank, ties by increasing value.
pub fn rank_descending(points: &mut [Ordinal]) {
    points.sort_by(|a, b| cb_rank_of(b).cmp(&cb_rank_of(a)).then(a.cmp(b)));
}

impl GroupPresentation {
    pub fn new(ambient: Arc<Ambient>, generators: Vec<Element>) -> Result<Self> {
        for g in &generators {
            if g.ambient() != &ambient {
                return Err(Error::AmbientMismatch);
            }
        }
        Ok(GroupPresentation {
            ambient,
            generators,
            window: None,
        })
    }

    pub fn with_window(mut self, window: ProbeWindow) -> Self {
        self.window = Some(window);
        self
    }

    pub fn zero(&self) -> Element {
        Element::zero(&self.ambient)
    }

    /// A random member: between one and `max_terms` generators with nonzero
    /// coefficients in `[-bound, bound]`. Zero when there are no generators.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, max_terms: usize, bound: i64) -> Element {
        let mut f = self.zero();
        if self.generators.is_empty() || max_terms == 0 || bound < 1 {
            return f;
        }
        for _ in 0..rng.gen_range(1..=max_terms) {
            let g = &self.generators[rng.gen_range(0..self.generators.len())];
            let mut c = rng.gen_range(1..=bound);
            if rng.gen_bool(0.5) {
                c = -c;
            }
            f = &f + &g.scale_i64(c);
        }
        f
    }

    fn window_for(&self, extra: &[&Element]) -> Result<ProbeWindow> {
        let all = self.generators.iter().chain(extra.iter().copied());
        match &self.window {
            Some(w) => {
                w.check_covers(all)?;
                Ok(w.clone())
            }
            None => Ok(ProbeWindow::covering(all)),
        }
    }

    /// Integer coordinates of `f` over the generators, or `None` when `f ∉ G`.
    pub fn member_decompose(&self, f: &Element) -> Result<Option<Decomposition>> {
        Ok(self.member_decompose_many(std::slice::from_ref(f))?.pop().flatten())
    }

    /// Decomposes several elements against one Hermite reduction.
    pub fn member_decompose_many(&self, fs: &[Element]) -> Result<Vec<Option<Decomposition>>> {
        let extra: Vec<&Element> = fs.iter().collect();
        let window = self.window_for(&extra)?;
        let m = window.matrix(&self.generators)?;
        let hf: Hermite = hnf::hermite(&m, window.width());
        let unique = hf.rank() == self.generators.len();
        fs.iter()
            .map(|f| {
                let v = window.coords(f)?;
                let Some(sol) = hnf::solve_with(&hf, self.generators.len(), &v) else {
                    return Ok(None);
                };
                let residual = f - &combine(&sol.x, &self.generators, &self.zero());
                debug_assert!(residual.is_zero(), "covering windows are injective");
                if !residual.is_zero() {
                    return Err(Error::AmbiguousProbe(format!("window does not determine {f}")));
                }
                Ok(Some(Decomposition {
                    coefficients: sol
                        .x
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .collect(),
                    residual,
                    unique,
                    window: window.clone(),
                }))
            })
            .collect()
    }

    pub fn contains(&self, f: &Element) -> Result<bool> {
        Ok(self.member_decompose(f)?.is_some())
    }

    /// Rank of the subgroup spanned by the generators.
    pub fn rank(&self) -> Result<usize> {
        let window = self.window_for(&[])?;
        Ok(hnf::rank(&window.matrix(&self.generators)?, window.width()))
    }

    pub fn finite_prime(&self, x: &Ordinal) -> Result<FinitePrime> {
        self.ambient.check_finite_prime(x)?;
        Ok(FinitePrime { point: x.clone() })
    }

    /// Index of the evaluation image `{g(x) : g ∈ G}` in ℤ.
    pub fn residue_index_at(&self, x: &Ordinal) -> Result<BigInt> {
        let mut g = BigInt::zero();
        for gen in &self.generators {
            g = g.gcd(&gen.eval(x)?);
        }
        if g.is_zero() {
            return Err(Error::AllZeroAt(x.clone()));
        }
        Ok(g)
    }

    /// A semibasic element of `G` at `x`.
    ///
    /// Tries `e_x`, then bounded generator combinations, then meets `f ∧ g` of
    /// bounded combinations that stay inside `G`.
    pub fn semibasic_construct(&self, x: &Ordinal) -> Result<Element> {
        self.semibasic_construct_bounded(x, SEMIBASIC_BOUND, SEMIBASIC_TERMS)
    }

    pub fn semibasic_construct_bounded(&self, x: &Ordinal, bound: i64, max_terms: usize) -> Result<Element> {
        self.ambient.check_finite_prime(x)?;
        let ex = Element::basis(&self.ambient, x)?;
        if self.contains(&ex)? {
            return Ok(ex);
        }
        let combos = self.bounded_combinations(bound, max_terms);
        let gamma = cb_rank_of(x);
        let mut peaks = Vec::new();
        let mut units = Vec::new();
        for c in &combos {
            if !c.is_positive() {
                continue;
            }
            let vx = c.eval(x)?;
            if vx.is_one() && c.is_semibasic(x) {
                return Ok(c.clone());
            }
            if vx.is_one() {
                units.push(c.clone());
            }
            if vx.is_positive() && isolates(c, x, &gamma) {
                peaks.push(c.clone());
            }
        }
        for f in &peaks {
            for g in &units {
                let q = f.meet(g)?;
                if q.is_semibasic(x) && self.contains(&q)? {
                    return Ok(q);
                }
            }
        }
        Err(Error::SearchExhausted {
            point: x.clone(),
            bound,
            max_terms,
        })
    }

    /// Nonzero combinations of at most `max_terms` generators with coefficients
    /// in `[-bound, bound]`, fewest terms first, in a fixed order.
    fn bounded_combinations(&self, bound: i64, max_terms: usize) -> Vec<Element> {
        let n = self.generators.len();
        let coeffs: Vec<i64> = (1..=bound).flat_map(|c| [c, -c]).collect();
        let mut out = Vec::new();
        let mut stack: Vec<(usize, Element, usize)> = vec![(0, self.zero(), 0)];
        for terms in 1..=max_terms.min(n) {
            let mut next = Vec::new();
            for (from, acc, used) in stack {
                debug_assert_eq!(used, terms - 1);
                for i in from..n {
                    for &c in &coeffs {
                        let e = &acc + &self.generators[i].scale_i64(c);
                        out.push(e.clone());
                        next.push((i + 1, e, terms));
                    }
                }
            }
            stack = next;
        }
        out
    }

    /// Semibasic family over `points` with its triangular independence witness.
    pub fn kernel_basis_certificate(&self, points: &[Ordinal]) -> Result<KernelCertificate> {
        let mut points = points.to_vec();
        rank_descending(&mut points);
        points.dedup();
        let family = points
            .iter()
            .map(|x| self.semibasic_construct(x))
            .collect::<Result<Vec<_>>>()?;
        let matrix = family
            .iter()
            .map(|q| points.iter().map(|p| q.eval(p)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(KernelCertificate {
            points,
            family,
            matrix,
        })
    }

    /// Generators of the subgroup of `G` whose residues vanish on every label
    /// of ladder `ladder` except `label`.
    /// Semibasic elements at every point the peeling of `f` can reach: the
    /// explicit points of `f`, closed under those of each chosen element.
    pub fn semibasic_family(&self, f: &Element) -> Result<BTreeMap<Ordinal, Element>> {
        let mut family = BTreeMap::new();
        let mut todo: Vec<Ordinal> = f.explicit_points().into_iter().collect();
        while let Some(x) = todo.pop() {
            if family.contains_key(&x) {
                continue;
            }
            let q = self.semibasic_construct(&x)?;
            todo.extend(q.explicit_points().into_iter().filter(|y| !family.contains_key(y)));
            family.insert(x, q);
        }
        Ok(family)
    }

    pub fn label_subgroup(&self, ladder: usize, label: usize) -> Result<Vec<Element>> {
        let n = self.generators.len();
        let width = self.ambient.ladders[ladder].labels.len() - 1;
        let den = self
            .generators
            .iter()
            .flat_map(|g| g.residue(ladder))
            .fold(BigInt::one(), |a, r| a.lcm(r.denom()));
        let scale = BigRational::from_integer(den);
        let m: Vec<Vec<BigInt>> = self
            .generators
            .iter()
            .map(|g| {
                g.residue(ladder)
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != label)
                    .map(|(_, r)| (r * &scale).to_integer())
                    .collect()
            })
            .collect();
        let kernel = if width == 0 {
            (0..n)
                .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
                .collect()
        } else {
            hnf::left_kernel(&m, width)
        };
        Ok(kernel
            .iter()
            .map(|row| combine(row, &self.generators, &self.zero()))
            .filter(|e| !e.is_zero())
            .collect())
    }
}

/// `f` has no support point of rank `>= gamma` other than `x`, tails included.
fn isolates(f: &Element, x: &Ordinal, gamma: &Ordinal) -> bool {
    f.prefix().keys().all(|y| y == x || cb_rank_of(y) < *gamma)
        && f
            .tails()
            .keys()
            .all(|li| !f.ambient().ladders[*li].shape.reaches_rank(gamma))
}

/// Coefficients `c_x` with `f = Σ c_x·q_x`, by peeling off the top-rank slice
/// of the support and recursing on strictly smaller rank.
pub fn semibasic_decompose(
    f: &Element,
    q_family: &BTreeMap<Ordinal, Element>,
    beta: &Ordinal,
) -> Result<BTreeMap<Ordinal, BigInt>> {
    if !f.is_tail_free() {
        return Err(Error::Precondition(format!("{f} has a nonzero residue at infinity")));
    }
    if f.cb() > *beta {
        return Err(Error::Precondition(format!("cb({f}) = {} exceeds {beta}", f.cb())));
    }
    let mut rest = f.clone();
    let mut out = BTreeMap::new();
    while !rest.is_zero() {
        let gamma = rest.cb();
        let slice: Vec<Ordinal> = rest
            .prefix()
            .keys()
            .filter(|p| cb_rank_of(p) == gamma)
            .cloned()
            .collect();
        let mut next = rest.clone();
        for x in &slice {
            let q = q_family.get(x).ok_or_else(|| Error::MissingSemibasic(x.clone()))?;
            if !q.is_positive() || !q.is_semibasic(x) {
                return Err(Error::Precondition(format!("{q} is not semibasic at {x}")));
            }
            let c = rest.eval(x)?;
            next = &next - &q.scale(&c);
            out.insert(x.clone(), c);
        }
        if !next.is_tail_free() {
            return Err(Error::Precondition("semibasic family has tails".into()));
        }
        debug_assert!(next.is_zero() || next.cb() < gamma);
        if !next.is_zero() && next.cb() >= gamma {
            return Err(Error::Precondition(format!(
                "rank did not drop below {gamma}; family is not semibasic"
            )));
        }
        rest = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{discrete_ambient, limit_q_a, limit_q_ambient, limit_q_e};

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn limit_q(n: u64) -> GroupPresentation {
        let amb = limit_q_ambient();
        let gens = (0..n).map(|k| limit_q_a(&amb, k)).collect();
        GroupPresentation::new(amb, gens).unwrap()
    }

    #[test]
    fn decompose_generator_and_basis_element() {
        let g = limit_q(6);
        let d = g.member_decompose(&g.generators[0]).unwrap().unwrap();
        assert_eq!(d.coefficients, BTreeMap::from([(0, BigInt::from(1))]));
        assert!(d.unique && d.residual.is_zero());
        let e1 = limit_q_e(&g.ambient, 1);
        let d = g.member_decompose(&e1).unwrap().unwrap();
        // e_1 = a_1 - 2·a_2
        assert_eq!(d.coefficients, BTreeMap::from([(1, BigInt::from(1)), (2, BigInt::from(-2))]));
        let half = Element::parse(&g.ambient, "tail(ladder=main, r=1/2, start=2)").unwrap();
        assert!(limit_q(2).member_decompose(&half).unwrap().is_none());
    }

    #[test]
    fn ambiguous_window_is_reported() {
        let g = limit_q(4).with_window(ProbeWindow::default());
        assert!(matches!(
            g.member_decompose(&g.generators[1]),
            Err(Error::AmbiguousProbe(_))
        ));
    }

    #[test]
    fn prime_predicates_and_indices() {
        let g = limit_q(4);
        let p0 = g.finite_prime(&o("0")).unwrap();
        assert!(!p0.contains(&g.generators[0]).unwrap());
        assert!(p0.contains(&limit_q_e(&g.ambient, 2)).unwrap());
        assert!(p0.contains(&g.zero()).unwrap());
        assert!(g.finite_prime(&o("w")).is_err());
        assert_eq!(g.residue_index_at(&o("0")).unwrap(), BigInt::from(1));
        let amb = discrete_ambient(o("5"));
        let e3 = Element::basis(&amb, &o("3")).unwrap();
        let two = GroupPresentation::new(amb.clone(), vec![e3.scale_i64(2)]).unwrap();
        assert_eq!(two.residue_index_at(&o("3")).unwrap(), BigInt::from(2));
        let mixed = GroupPresentation::new(amb.clone(), vec![e3.clone(), e3.scale_i64(3)]).unwrap();
        assert_eq!(mixed.residue_index_at(&o("3")).unwrap(), BigInt::from(1));
        assert_eq!(mixed.residue_index_at(&o("4")), Err(Error::AllZeroAt(o("4"))));
    }

    #[test]
    fn semibasic_in_limit_q_is_basis_element() {
        let g = limit_q(5);
        assert_eq!(g.semibasic_construct(&o("2")).unwrap(), limit_q_e(&g.ambient, 2));
    }

    #[test]
    fn semibasic_by_search() {
        let amb = discrete_ambient(o("w*2"));
        let e = |s: &str| Element::basis(&amb, &o(s)).unwrap();
        // Only e_w + e_3 and e_3 generate; e_w is not a member but e_w + e_3 is semibasic at w.
        let g = GroupPresentation::new(amb.clone(), vec![&e("w") + &e("3"), e("3").scale_i64(2)]).unwrap();
        let q = g.semibasic_construct(&o("w")).unwrap();
        assert_eq!(q, &e("w") + &e("3"));
        let none = GroupPresentation::new(amb.clone(), vec![e("w").scale_i64(2)]).unwrap();
        assert!(matches!(none.semibasic_construct(&o("w")), Err(Error::SearchExhausted { .. })));
    }

    #[test]
    fn kernel_certificates() {
        let g = limit_q(5);
        let cert = g.kernel_basis_certificate(&[o("0"), o("1"), o("2")]).unwrap();
        assert_eq!(cert.family, (0..3).map(|k| limit_q_e(&g.ambient, k)).collect::<Vec<_>>());
        assert!(cert.is_unitriangular());
        assert!(g.kernel_basis_certificate(&[]).unwrap().family.is_empty());

        let amb = discrete_ambient(o("w*2"));
        let e = |s: &str| Element::basis(&amb, &o(s)).unwrap();
        let two = GroupPresentation::new(amb.clone(), vec![&e("w") + &e("3"), e("3")]).unwrap();
        let cert = two.kernel_basis_certificate(&[o("3"), o("w")]).unwrap();
        assert_eq!(cert.points, vec![o("w"), o("3")]);
        assert!(cert.is_unitriangular());
    }

    #[test]
    fn semibasic_examples() {
        let amb = discrete_ambient(o("w*2"));
        let e = |s: &str| Element::basis(&amb, &o(s)).unwrap();
        let family: BTreeMap<Ordinal, Element> =
            ["3", "w", "w + 1"].iter().map(|s| (o(s), e(s))).collect();
        assert!(semibasic_decompose(&Element::zero(&amb), &family, &o("1")).unwrap().is_empty());
        let f = &(&e("3").scale_i64(2) - &e("w")) + &e("w + 1");
        let got = semibasic_decompose(&f, &family, &o("1")).unwrap();
        assert_eq!(
            got,
            BTreeMap::from([(o("3"), 2.into()), (o("w"), (-1).into()), (o("w + 1"), 1.into())])
        );
        assert!(semibasic_decompose(&f, &family, &o("0")).is_err());
        let lq = limit_q_ambient();
        assert!(semibasic_decompose(&limit_q_a(&lq, 1), &BTreeMap::new(), &o("1")).is_err());
    }

    #[test]
    fn label_subgroup_single_label_is_everything() {
        let g = limit_q(3);
        assert_eq!(g.label_subgroup(0, 0).unwrap().len(), 3);
    }
}
