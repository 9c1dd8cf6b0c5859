//! Integer-valued functions on the finite primes of a space, in canonical form.
//!
//! An element is a finite map of explicit values plus, per ladder, a tail
//! `k ↦ Σ_λ r_λ·w_λ(k)` valid from a start index on. Canonical form: every tail
//! term is integral at its start, the start is as small as possible, explicit
//! values never sit on a tail's range, and no explicit value is zero.

mod ambient;
mod ladder;
mod literal;
mod weight;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use ambient::Ambient;
pub use ladder::{LabelSpec, Ladder, LadderShape};
pub use weight::{settle, tail_value, terms_integral, WeightFamily};

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::space::{cb_rank_of, ClopenBlock};

/// Raising a tail's start gives up after this many steps.
const MAX_START_RAISE: u64 = 512;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tail {
    /// One coefficient per ladder label, in the ladder's label order.
    pub coeffs: Vec<BigRational>,
    pub start: u64,
}

impl Tail {
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

#[derive(Clone)]
pub struct Element {
    ambient: Arc<Ambient>,
    prefix: BTreeMap<Ordinal, BigInt>,
    tails: BTreeMap<usize, Tail>,
}

/// Symbolic support: isolated points plus, per tail-active ladder, the finitely
/// many ladder indices where the function vanishes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Support {
    pub points: BTreeSet<Ordinal>,
    pub ladders: BTreeMap<String, Vec<u64>>,
}

impl Support {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.ladders.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.ladders.is_empty()
    }
}

impl Element {
    pub fn zero(ambient: &Arc<Ambient>) -> Self {
        Element {
            ambient: ambient.clone(),
            prefix: BTreeMap::new(),
            tails: BTreeMap::new(),
        }
    }

    /// The basis element `e_x`.
    pub fn basis(ambient: &Arc<Ambient>, x: &Ordinal) -> Result<Self> {
        Self::point_value(ambient, x, BigInt::one())
    }

    /// `value·e_x`.
    pub fn point_value(ambient: &Arc<Ambient>, x: &Ordinal, value: BigInt) -> Result<Self> {
        ambient.check_finite_prime(x)?;
        let mut prefix = BTreeMap::new();
        prefix.insert(x.clone(), value);
        Self::from_parts(ambient, prefix, BTreeMap::new())
    }

    /// The function `r·w_label(k)` on ladder indices `k >= start`, zero elsewhere.
    pub fn tail_term(
        ambient: &Arc<Ambient>,
        ladder: &str,
        label: Option<&str>,
        r: BigRational,
        start: u64,
    ) -> Result<Self> {
        let li = ambient.ladder_index(ladder)?;
        let l = &ambient.ladders[li];
        let idx = match label {
            Some(name) => l.label_index(name)?,
            None => 0,
        };
        let mut coeffs = vec![BigRational::zero(); l.labels.len()];
        coeffs[idx] = r;
        Self::from_tail(ambient, li, coeffs, start)
    }

    pub fn from_tail(ambient: &Arc<Ambient>, ladder: usize, coeffs: Vec<BigRational>, start: u64) -> Result<Self> {
        let mut tails = BTreeMap::new();
        tails.insert(ladder, Tail { coeffs, start });
        Self::from_parts(ambient, BTreeMap::new(), tails)
    }

    /// Builds and canonicalizes. Explicit values may not sit on a tail's range.
    pub fn from_parts(
        ambient: &Arc<Ambient>,
        prefix: BTreeMap<Ordinal, BigInt>,
        tails: BTreeMap<usize, Tail>,
    ) -> Result<Self> {
        for p in prefix.keys() {
            ambient.check_finite_prime(p)?;
        }
        for (li, t) in &tails {
            let l = ambient
                .ladders
                .get(*li)
                .ok_or_else(|| Error::UnknownLadder(li.to_string()))?;
            if t.coeffs.len() != l.labels.len() {
                return Err(Error::InvalidLadder {
                    id: l.id.clone(),
                    msg: format!("expected {} tail coefficients", l.labels.len()),
                });
            }
            if let Some(p) = prefix
                .keys()
                .find(|p| l.index_of(p).is_some_and(|k| k >= t.start))
            {
                return Err(Error::Precondition(format!(
                    "explicit value at {p} overlaps the tail on `{}`",
                    l.id
                )));
            }
        }
        let mut e = Element {
            ambient: ambient.clone(),
            prefix,
            tails,
        };
        e.canonicalize()?;
        Ok(e)
    }

    /// The same function over another ambient whose ladders are matched by id.
    pub fn transfer(&self, target: &Arc<Ambient>) -> Result<Element> {
        let mut tails = BTreeMap::new();
        for (li, t) in &self.tails {
            let src = &self.ambient.ladders[*li];
            let dst_i = target.ladder_index(&src.id)?;
            let dst = &target.ladders[dst_i];
            if dst.labels != src.labels || dst.shape != src.shape {
                return Err(Error::AmbientMismatch);
            }
            tails.insert(dst_i, t.clone());
        }
        Self::from_parts(target, self.prefix.clone(), tails)
    }

    fn canonicalize(&mut self) -> Result<()> {
        let ids: Vec<usize> = self.tails.keys().copied().collect();
        for li in ids {
            let ladder = &self.ambient.ladders[li];
            let fams = ladder.families();
            let mut t = self.tails.remove(&li).expect("key listed above");
            if t.is_zero() {
                continue;
            }
            let mut raised = 0;
            while !terms_integral(&fams, &t.coeffs, t.start) {
                let v = tail_value(&fams, &t.coeffs, t.start);
                if !v.is_integer() || raised == MAX_START_RAISE {
                    return Err(Error::NotIntegral {
                        ladder: ladder.id.clone(),
                        start: t.start,
                    });
                }
                self.prefix.insert(ladder.point(t.start), v.to_integer());
                t.start += 1;
                raised += 1;
            }
            while t.start > 0 {
                let k = t.start - 1;
                if !terms_integral(&fams, &t.coeffs, k) {
                    break;
                }
                let p = ladder.point(k);
                let v = tail_value(&fams, &t.coeffs, k).to_integer();
                let cur = self.prefix.get(&p).cloned().unwrap_or_default();
                if v != cur {
                    break;
                }
                self.prefix.remove(&p);
                t.start = k;
            }
            self.tails.insert(li, t);
        }
        self.prefix.retain(|_, v| !v.is_zero());
        Ok(())
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }

    pub fn prefix(&self) -> &BTreeMap<Ordinal, BigInt> {
        &self.prefix
    }

    pub fn tails(&self) -> &BTreeMap<usize, Tail> {
        &self.tails
    }

    pub fn tail_on(&self, ladder: usize) -> Option<&Tail> {
        self.tails.get(&ladder)
    }

    pub fn is_zero(&self) -> bool {
        self.prefix.is_empty() && self.tails.is_empty()
    }

    pub fn is_tail_free(&self) -> bool {
        self.tails.is_empty()
    }

    fn same_ambient(&self, other: &Element) -> Result<()> {
        if Arc::ptr_eq(&self.ambient, &other.ambient) || self.ambient == other.ambient {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    fn formula(&self, li: usize, t: &Tail, k: u64) -> BigInt {
        let fams = self.ambient.ladders[li].families();
        tail_value(&fams, &t.coeffs, k).to_integer()
    }

    /// Value at index `k` of ladder `li`.
    pub fn ladder_value(&self, li: usize, k: u64) -> BigInt {
        match self.tails.get(&li) {
            Some(t) if k >= t.start => self.formula(li, t, k),
            _ => self
                .prefix
                .get(&self.ambient.ladders[li].point(k))
                .cloned()
                .unwrap_or_default(),
        }
    }

    pub fn eval(&self, x: &Ordinal) -> Result<BigInt> {
        self.ambient.check_finite_prime(x)?;
        if let Some((li, k)) = self.ambient.locate(x) {
            if let Some(t) = self.tails.get(&li) {
                if k >= t.start {
                    return Ok(self.formula(li, t, k));
                }
            }
        }
        Ok(self.prefix.get(x).cloned().unwrap_or_default())
    }

    fn max_prefix_index(&self, li: usize) -> Option<u64> {
        let l = &self.ambient.ladders[li];
        self.prefix.keys().filter_map(|p| l.index_of(p)).max()
    }

    /// Pointwise combination. `pick` chooses the result's tail coefficients on a
    /// ladder and an index from which they are valid.
    fn combine(
        &self,
        other: &Element,
        pick: impl Fn(&[WeightFamily], &[BigRational], &[BigRational]) -> (Vec<BigRational>, u64),
        op: impl Fn(&BigInt, &BigInt) -> BigInt,
    ) -> Result<Element> {
        self.same_ambient(other)?;
        let amb = &self.ambient;
        let ladders: BTreeSet<usize> = self.tails.keys().chain(other.tails.keys()).copied().collect();
        let mut tails = BTreeMap::new();
        let mut prefix = BTreeMap::new();
        for &li in &ladders {
            let l = &amb.ladders[li];
            let fams = l.families();
            let zero = vec![BigRational::zero(); fams.len()];
            let ca = self.tails.get(&li).map_or(&zero, |t| &t.coeffs);
            let cb = other.tails.get(&li).map_or(&zero, |t| &t.coeffs);
            let (coeffs, valid_from) = pick(&fams, ca, cb);
            let start = [
                self.tails.get(&li).map_or(0, |t| t.start),
                other.tails.get(&li).map_or(0, |t| t.start),
                valid_from,
                self.max_prefix_index(li).map_or(0, |k| k + 1),
                other.max_prefix_index(li).map_or(0, |k| k + 1),
            ]
            .into_iter()
            .max()
            .unwrap_or(0);
            for k in 0..start {
                let v = op(&self.ladder_value(li, k), &other.ladder_value(li, k));
                prefix.insert(l.point(k), v);
            }
            tails.insert(li, Tail { coeffs, start });
        }
        for p in self.prefix.keys().chain(other.prefix.keys()) {
            if prefix.contains_key(p) {
                continue;
            }
            if let Some((li, _)) = amb.locate(p) {
                if ladders.contains(&li) {
                    continue;
                }
            }
            let a = self.prefix.get(p).cloned().unwrap_or_default();
            let b = other.prefix.get(p).cloned().unwrap_or_default();
            prefix.insert(p.clone(), op(&a, &b));
        }
        let mut e = Element {
            ambient: amb.clone(),
            prefix,
            tails,
        };
        e.canonicalize()?;
        Ok(e)
    }

    pub fn checked_add(&self, other: &Element) -> Result<Element> {
        self.combine(
            other,
            |_, a, b| (a.iter().zip(b).map(|(x, y)| x + y).collect(), 0),
            |a, b| a + b,
        )
    }

    pub fn checked_sub(&self, other: &Element) -> Result<Element> {
        self.combine(
            other,
            |_, a, b| (a.iter().zip(b).map(|(x, y)| x - y).collect(), 0),
            |a, b| a - b,
        )
    }

    fn lattice(&self, other: &Element, want: Ordering) -> Result<Element> {
        self.combine(
            other,
            |fams, a, b| {
                let d: Vec<BigRational> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                let (sign, k) = settle(fams, &d);
                // `want` is Less for meet: keep a when a is eventually below b.
                let keep_a = sign == want || sign == Ordering::Equal;
                (if keep_a { a.to_vec() } else { b.to_vec() }, k)
            },
            |a, b| {
                if a.cmp(b) == want {
                    a.clone()
                } else {
                    b.clone()
                }
            },
        )
    }

    /// Pointwise minimum.
    pub fn meet(&self, other: &Element) -> Result<Element> {
        self.lattice(other, Ordering::Less)
    }

    /// Pointwise maximum.
    pub fn join(&self, other: &Element) -> Result<Element> {
        self.lattice(other, Ordering::Greater)
    }

    /// `f ∨ 0`.
    pub fn pos_part(&self) -> Element {
        self.join(&Element::zero(&self.ambient))
            .expect("same ambient")
    }

    /// `f ∧ 0`, so that `f = f⁺ + f⁻`.
    pub fn neg_part(&self) -> Element {
        self.meet(&Element::zero(&self.ambient))
            .expect("same ambient")
    }

    fn map_values(&self, f: impl Fn(&BigInt) -> BigInt, g: impl Fn(&BigRational) -> BigRational) -> Result<Element> {
        let prefix = self.prefix.iter().map(|(p, v)| (p.clone(), f(v))).collect();
        let tails = self
            .tails
            .iter()
            .map(|(li, t)| {
                (
                    *li,
                    Tail {
                        coeffs: t.coeffs.iter().map(&g).collect(),
                        start: t.start,
                    },
                )
            })
            .collect();
        let mut e = Element {
            ambient: self.ambient.clone(),
            prefix,
            tails,
        };
        e.canonicalize()?;
        Ok(e)
    }

    pub fn scale(&self, c: &BigInt) -> Element {
        let cr = BigRational::from_integer(c.clone());
        self.map_values(|v| v * c, |r| r * &cr)
            .expect("integer multiples of integral tails stay integral")
    }

    pub fn scale_i64(&self, c: i64) -> Element {
        self.scale(&BigInt::from(c))
    }

    /// `f / n`, when every value is divisible by `n`.
    pub fn div_exact(&self, n: &BigInt) -> Result<Element> {
        if n.is_zero() {
            return Err(Error::NotDivisible("0".into()));
        }
        if self.prefix.values().any(|v| !v.is_multiple_of(n)) {
            return Err(Error::NotDivisible(n.to_string()));
        }
        let nr = BigRational::from_integer(n.clone());
        self.map_values(|v| v / n, |r| r / &nr)
            .map_err(|_| Error::NotDivisible(n.to_string()))
    }

    /// `f >= 0` everywhere.
    pub fn is_positive(&self) -> bool {
        if self.prefix.values().any(Signed::is_negative) {
            return false;
        }
        self.tails.iter().all(|(li, t)| {
            let fams = self.ambient.ladders[*li].families();
            let (sign, k) = settle(&fams, &t.coeffs);
            sign == Ordering::Greater && (t.start..k).all(|j| !self.formula(*li, t, j).is_negative())
        })
    }

    /// Pointwise `self <= other`.
    pub fn le(&self, other: &Element) -> Result<bool> {
        Ok(other.checked_sub(self)?.is_positive())
    }

    pub fn support(&self) -> Support {
        let mut s = Support::default();
        for (p, _) in &self.prefix {
            match self.ambient.locate(p) {
                Some((li, _)) if self.tails.contains_key(&li) => {}
                _ => {
                    s.points.insert(p.clone());
                }
            }
        }
        for (li, t) in &self.tails {
            let fams = self.ambient.ladders[*li].families();
            let (_, k) = settle(&fams, &t.coeffs);
            let missing = (0..k.max(t.start))
                .filter(|&j| self.ladder_value(*li, j).is_zero())
                .collect();
            s.ladders.insert(self.ambient.ladders[*li].id.clone(), missing);
        }
        s
    }

    /// Least ladder index where the value is nonzero.
    pub fn mu(&self, ladder: &str) -> Result<u64> {
        self.mu_at(self.ambient.ladder_index(ladder)?)
    }

    pub fn mu_at(&self, li: usize) -> Result<u64> {
        let id = || Error::ZeroOnLadder(self.ambient.ladders[li].id.clone());
        match self.tails.get(&li) {
            None => self.prefix_indices(li).find(|_| true).ok_or_else(id),
            Some(_) => Ok((0..)
                .find(|&k| !self.ladder_value(li, k).is_zero())
                .expect("nonzero tails are eventually nonzero")),
        }
    }

    /// Ladder indices of explicit values on ladder `li`, ascending.
    fn prefix_indices(&self, li: usize) -> impl Iterator<Item = u64> {
        let l = &self.ambient.ladders[li];
        let mut ks: Vec<u64> = self.prefix.keys().filter_map(|p| l.index_of(p)).collect();
        ks.sort_unstable();
        ks.into_iter()
    }

    /// Tail coefficient vector on ladder `li` (zeros when tail-free there).
    pub fn residue(&self, li: usize) -> Vec<BigRational> {
        self.tails.get(&li).map_or_else(
            || vec![BigRational::zero(); self.ambient.ladders[li].labels.len()],
            |t| t.coeffs.clone(),
        )
    }

    /// Residue at an infinite prime, via its ladder.
    pub fn residue_at(&self, p: &Ordinal) -> Result<Vec<BigRational>> {
        Ok(self.residue(self.ambient.ladder_for_target(p)?))
    }

    /// Largest rank over the support, ladder targets included.
    pub fn cb(&self) -> Ordinal {
        self.prefix
            .keys()
            .map(cb_rank_of)
            .chain(self.tails.keys().map(|li| cb_rank_of(&self.ambient.ladders[*li].target)))
            .max()
            .unwrap_or_default()
    }

    /// `q(x) = 1` and no other support point has rank `>= cb(x)`.
    pub fn is_semibasic(&self, x: &Ordinal) -> bool {
        if !self.eval(x).is_ok_and(|v| v.is_one()) {
            return false;
        }
        let gamma = cb_rank_of(x);
        let prefix_ok = self
            .prefix
            .keys()
            .all(|y| y == x || cb_rank_of(y) < gamma);
        // An active tail is nonzero at all but finitely many ladder points, so
        // it meets rank γ infinitely often as soon as the ladder reaches it.
        let tails_ok = self
            .tails
            .keys()
            .all(|li| !self.ambient.ladders[*li].shape.reaches_rank(&gamma));
        prefix_ok && tails_ok
    }

    /// Least `n` with `n·self >= other`, for positive elements of equal support.
    /// `None` when supports differ or the ratio is unbounded.
    pub fn bounded_ratio_witness(&self, other: &Element) -> Option<u64> {
        if self.same_ambient(other).is_err() || !self.is_positive() || !other.is_positive() {
            return None;
        }
        if self.support() != other.support() {
            return None;
        }
        let ratio = |a: &BigInt, b: &BigInt| -> BigInt {
            // ceil(b / a) with a > 0, b >= 0
            b.div_ceil(a)
        };
        // Explicit region: all prefix points and ladder indices below every
        // relevant settling index.
        let mut n = BigInt::one();
        let mut cap = BigInt::zero();
        let mut horizon: BTreeMap<usize, u64> = BTreeMap::new();
        for (li, tf) in &self.tails {
            let tg = other.tails.get(li)?;
            let fams = self.ambient.ladders[*li].families();
            let lead = |c: &[BigRational]| {
                (0..c.len())
                    .filter(|&i| !c[i].is_zero())
                    .max_by(|&a, &b| fams[a].cmp(&fams[b]))
            };
            let (lf, lg) = (lead(&tf.coeffs)?, lead(&tg.coeffs)?);
            if fams[lg] > fams[lf] {
                return None;
            }
            let limit = if lf == lg {
                &tg.coeffs[lg] / &tf.coeffs[lf]
            } else {
                BigRational::zero()
            };
            let m: BigInt = limit.floor().to_integer() + 1;
            let d: Vec<BigRational> = tf
                .coeffs
                .iter()
                .zip(&tg.coeffs)
                .map(|(a, b)| a * BigRational::from_integer(m.clone()) - b)
                .collect();
            let (_, k) = settle(&fams, &d);
            horizon.insert(*li, k.max(tf.start).max(tg.start));
            cap = cap.max(m);
        }
        for (p, v) in &self.prefix {
            n = n.max(ratio(v, &other.eval(p).ok()?));
        }
        for (li, h) in &horizon {
            for k in 0..*h {
                let a = self.ladder_value(*li, k);
                if !a.is_zero() {
                    n = n.max(ratio(&a, &other.ladder_value(*li, k)));
                }
            }
        }
        let top = n.clone().max(cap);
        let mut c = n;
        while c <= top {
            if self.scale(&c).checked_sub(other).ok()?.is_positive() {
                return c.try_into().ok();
            }
            c += 1;
        }
        None
    }

    /// `f · 1_block`.
    pub fn restrict(&self, block: &ClopenBlock) -> Element {
        let amb = &self.ambient;
        let mut prefix: BTreeMap<Ordinal, BigInt> = self
            .prefix
            .iter()
            .filter(|(p, _)| block.contains(p))
            .map(|(p, v)| (p.clone(), v.clone()))
            .collect();
        let mut tails = BTreeMap::new();
        for (li, t) in &self.tails {
            let l = &amb.ladders[*li];
            if block.contains(&l.target) {
                let mut k_in = 0;
                while l.point(k_in) <= block.low {
                    k_in += 1;
                }
                let start = t.start.max(k_in);
                for k in t.start..start {
                    let p = l.point(k);
                    if block.contains(&p) {
                        prefix.insert(p, self.ladder_value(*li, k));
                    }
                }
                tails.insert(*li, Tail { coeffs: t.coeffs.clone(), start });
            } else if l.target > block.high {
                let mut k = t.start;
                while l.point(k) <= block.high {
                    let p = l.point(k);
                    if block.contains(&p) {
                        prefix.insert(p, self.ladder_value(*li, k));
                    }
                    k += 1;
                }
            }
        }
        let mut e = Element {
            ambient: amb.clone(),
            prefix,
            tails,
        };
        e.canonicalize().expect("restriction keeps integral tails");
        e
    }

    /// Finite points where this element's values are stored or where its tail
    /// has not started: every point at which a ladder-free description of the
    /// element would need an explicit value.
    pub fn explicit_points(&self) -> BTreeSet<Ordinal> {
        let mut pts: BTreeSet<Ordinal> = self.prefix.keys().cloned().collect();
        for (li, t) in &self.tails {
            let l = &self.ambient.ladders[*li];
            pts.extend((0..t.start).map(|k| l.point(k)));
        }
        pts
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.same_ambient(other).is_ok() && self.prefix == other.prefix && self.tails == other.tails
    }
}

impl Eq for Element {}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}

impl std::ops::Add for &Element {
    type Output = Element;
    /// Panics on ambient mismatch; see `checked_add`.
    fn add(self, rhs: &Element) -> Element {
        self.checked_add(rhs).expect("elements over one ambient")
    }
}

impl std::ops::Sub for &Element {
    type Output = Element;
    /// Panics on ambient mismatch; see `checked_sub`.
    fn sub(self, rhs: &Element) -> Element {
        self.checked_sub(rhs).expect("elements over one ambient")
    }
}

impl std::ops::Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale_i64(-1)
    }
}
