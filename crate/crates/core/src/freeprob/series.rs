//! Truncated multivariate power series for the moment/cumulant calculus.
//!
//! `FSeries` is a power series in X_1..X_n (or Y_1..Y_n) with exact rational
//! coefficients, allowing finitely many negative exponents (the shifted
//! one-point series carry a single 1/Y term). Validity is tracked per
//! variable: the coefficient of a monomial is exact whenever every exponent
//! is at most the variable's cap; multiplication and composition adjust caps
//! pessimistically, mirroring the Laurent contract of the exact kernel.
//!
//! `PoleSeries` adjoins the canonical double poles 1/(X_a - X_b)^k that the
//! two-point objects carry: a finite map from pole exponent vectors (one
//! slot per unordered variable pair) to regular series. Derivatives and the
//! substitution Y_i = s(X_i) keep that shape.

use crate::algebra::Rational;
use crate::{Error, Result};
use num::{One, Zero};
use smallvec::SmallVec;
use std::collections::BTreeMap;

type Exps = SmallVec<[i64; 3]>;

/// Cap value for exactly-known (polynomial) series.
pub const UNBOUNDED: i64 = i64::MAX / 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FSeries {
    nvars: usize,
    caps: Vec<i64>,
    terms: BTreeMap<Exps, Rational>,
}

impl FSeries {
    pub fn zero(nvars: usize, caps: &[i64]) -> FSeries {
        assert_eq!(caps.len(), nvars);
        FSeries {
            nvars,
            caps: caps.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, caps: &[i64], c: Rational) -> FSeries {
        let mut s = FSeries::zero(nvars, caps);
        if !c.is_zero() {
            s.terms.insert(SmallVec::from_elem(0, nvars), c);
        }
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn caps(&self) -> &[i64] {
        &self.caps
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[i64]) -> Rational {
        assert!(
            exps.iter().zip(self.caps.iter()).all(|(e, c)| e <= c),
            "coefficient beyond the validity caps"
        );
        self.terms
            .get(&SmallVec::from_slice(exps))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn insert(&mut self, exps: &[i64], c: Rational) {
        if c.is_zero() {
            return;
        }
        if exps.iter().zip(self.caps.iter()).any(|(e, cap)| e > cap) {
            return;
        }
        let key = SmallVec::from_slice(exps);
        match self.terms.remove(&key) {
            None => {
                self.terms.insert(key, c);
            }
            Some(prev) => {
                let sum = prev + c;
                if !sum.is_zero() {
                    self.terms.insert(key, sum);
                }
            }
        }
    }

    /// Lowest exponent of variable i over the stored terms (0 when empty).
    pub fn val(&self, i: usize) -> i64 {
        self.terms.keys().map(|e| e[i]).min().unwrap_or(0)
    }

    fn drop_beyond_caps(&mut self) {
        let caps = self.caps.clone();
        self.terms
            .retain(|e, _| e.iter().zip(caps.iter()).all(|(x, c)| x <= c));
    }

    pub fn truncated(&self, caps: &[i64]) -> FSeries {
        let mut s = self.clone();
        for (c, &nc) in s.caps.iter_mut().zip(caps.iter()) {
            *c = (*c).min(nc);
        }
        s.drop_beyond_caps();
        s
    }

    pub fn neg(&self) -> FSeries {
        let mut s = self.clone();
        for c in s.terms.values_mut() {
            *c = -c.clone();
        }
        s
    }

    pub fn scale(&self, c: &Rational) -> FSeries {
        if c.is_zero() {
            let mut s = self.clone();
            s.terms.clear();
            return s;
        }
        let mut s = self.clone();
        for k in s.terms.values_mut() {
            *k *= c;
        }
        s
    }

    pub fn add(&self, other: &FSeries) -> FSeries {
        assert_eq!(self.nvars, other.nvars);
        let caps: Vec<i64> = self
            .caps
            .iter()
            .zip(other.caps.iter())
            .map(|(a, b)| *a.min(b))
            .collect();
        let mut s = FSeries::zero(self.nvars, &caps);
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            s.insert(e, c.clone());
        }
        s
    }

    pub fn sub(&self, other: &FSeries) -> FSeries {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FSeries) -> FSeries {
        assert_eq!(self.nvars, other.nvars);
        let caps: Vec<i64> = (0..self.nvars)
            .map(|i| {
                (self.caps[i] + other.val(i)).min(other.caps[i] + self.val(i))
            })
            .collect();
        let mut s = FSeries::zero(self.nvars, &caps);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exps = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                s.insert(&e, ca * cb);
            }
        }
        s
    }

    /// Multiply by the monomial prod X_i^(shift_i); exact, caps move along.
    pub fn shift(&self, shifts: &[i64]) -> FSeries {
        let caps: Vec<i64> = self
            .caps
            .iter()
            .zip(shifts.iter())
            .map(|(c, s)| c + s)
            .collect();
        let mut s = FSeries::zero(self.nvars, &caps);
        for (e, c) in &self.terms {
            let ne: Exps = e.iter().zip(shifts.iter()).map(|(a, b)| a + b).collect();
            s.insert(&ne, c.clone());
        }
        s
    }

    /// d/dX_i; the cap of variable i drops by one.
    pub fn derivative(&self, i: usize) -> FSeries {
        let mut caps = self.caps.clone();
        caps[i] -= 1;
        let mut s = FSeries::zero(self.nvars, &caps);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            s.insert(&ne, c * Rational::from_integer(e[i].into()));
        }
        s
    }

    /// Multiplicative inverse of a series with nonzero constant term, by
    /// Newton iteration to the series' own caps.
    pub fn invert(&self) -> Result<FSeries> {
        let c0 = self.coeff(&vec![0; self.nvars]);
        if c0.is_zero() {
            return Err(Error::ContractViolation(
                "inverting a series with zero constant term".into(),
            ));
        }
        if self.terms.keys().any(|e| e.iter().any(|&x| x < 0)) {
            return Err(Error::ContractViolation(
                "inverting a series with negative exponents".into(),
            ));
        }
        let mut g = FSeries::constant(self.nvars, &self.caps, c0.recip());
        let two = FSeries::constant(self.nvars, &self.caps, Rational::from_integer(2.into()));
        // each Newton step doubles the correct total degree
        let max_cap = self.caps.iter().copied().max().unwrap_or(0).max(0);
        let steps = (64 - (max_cap as u64 + 1).leading_zeros()) + 1;
        for _ in 0..steps {
            // g <- g (2 - f g), with caps re-pinned to the target
            let fg = self.mul(&g);
            let corr = two.sub(&fg);
            g = g.mul(&corr);
            g.caps = self.caps.clone();
            g.drop_beyond_caps();
        }
        Ok(g)
    }

    /// Substitute X_i -> subs[i] where subs[i] is a series in the variable i
    /// only (valuation >= 1). Negative exponents use the inverse power.
    pub fn compose(&self, subs: &[FSeries]) -> Result<FSeries> {
        assert_eq!(subs.len(), self.nvars);
        let nv = self.nvars;
        // per-variable power tables
        let mut pos_pows: Vec<Vec<FSeries>> = Vec::with_capacity(nv);
        let mut neg_pows: Vec<Vec<FSeries>> = Vec::with_capacity(nv);
        let mut caps = vec![UNBOUNDED; nv];
        for i in 0..nv {
            let s = &subs[i];
            assert_eq!(s.nvars, nv);
            assert!(
                s.terms.keys().all(|e| (0..nv).all(|j| j == i || e[j] == 0)),
                "substitution series must be univariate in its own variable"
            );
            let v = s.val(i);
            assert!(v >= 1 && !s.is_zero(), "substitution needs valuation >= 1");
            let max_e = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
            let min_e = self.terms.keys().map(|e| e[i]).min().unwrap_or(0);
            let mut pp = vec![FSeries::constant(nv, &vec![i64::MAX / 4; nv], Rational::one())];
            for _ in 1..=max_e.max(0) {
                let next = pp.last().unwrap().mul(s);
                pp.push(next);
            }
            let mut np = Vec::new();
            if min_e < 0 {
                // (s / X_i^v)^{-1} exists as a power series; s^{-1} is then a
                // Laurent monomial shift of it
                let unit = s.shift(&unit_shift(nv, i, -v));
                let unit_inv = unit.invert()?;
                let s_inv = unit_inv.shift(&unit_shift(nv, i, -v));
                let mut p = FSeries::constant(nv, &vec![i64::MAX / 4; nv], Rational::one());
                for _ in 0..(-min_e) {
                    p = p.mul(&s_inv);
                    np.push(p.clone());
                }
            }
            // outer truncation error: unknown Y_i-exponents above the cap
            // land at X_i-order > cap (valuation >= 1)
            caps[i] = caps[i].min(self.caps[i]);
            // substitution truncation error: a term Y_i^e contributes at
            // X_i-order >= (e-1) val + cap_s + 1, so only the stored nonzero
            // exponents constrain the result
            let _ = max_e;
            for e in self.terms.keys().map(|e| e[i]).filter(|&e| e != 0) {
                caps[i] = caps[i].min((e - 1) * v + s.caps[i]);
            }
            pos_pows.push(pp);
            neg_pows.push(np);
        }
        let mut out = FSeries::zero(nv, &caps);
        for (e, c) in &self.terms {
            let mut term = FSeries::constant(nv, &vec![i64::MAX / 4; nv], c.clone());
            for i in 0..nv {
                let p = match e[i].cmp(&0) {
                    std::cmp::Ordering::Equal => continue,
                    std::cmp::Ordering::Greater => &pos_pows[i][e[i] as usize],
                    std::cmp::Ordering::Less => &neg_pows[i][(-e[i] - 1) as usize],
                };
                term = term.mul(p);
            }
            term.caps = caps.clone();
            term.drop_beyond_caps();
            out = out.add(&term);
        }
        out.caps = caps;
        out.drop_beyond_caps();
        Ok(out)
    }

    /// Merge slot variables into a smaller variable space: `map[j]` is the
    /// target index of slot j; exponents add on merged variables.
    pub fn merge_vars(&self, target_n: usize, map: &[usize]) -> FSeries {
        assert_eq!(map.len(), self.nvars);
        let mut caps = vec![i64::MAX / 4; target_n];
        for (j, &tgt) in map.iter().enumerate() {
            // other slots mapping to the same target contribute their
            // valuation to the error bookkeeping
            let others: i64 = map
                .iter()
                .enumerate()
                .filter(|&(k, &t)| k != j && t == tgt)
                .map(|(k, _)| self.val(k).min(0))
                .sum();
            caps[tgt] = caps[tgt].min(self.caps[j] + others);
        }
        let mut s = FSeries::zero(target_n, &caps);
        for (e, c) in &self.terms {
            let mut ne: Exps = SmallVec::from_elem(0, target_n);
            for (j, &tgt) in map.iter().enumerate() {
                ne[tgt] += e[j];
            }
            s.insert(&ne, c.clone());
        }
        s
    }

    /// Equality of all coefficients up to the given per-variable order
    /// (both series must be valid that far).
    pub fn agrees_to(&self, other: &FSeries, order: i64) -> bool {
        if self.caps.iter().any(|&c| c < order) || other.caps.iter().any(|&c| c < order) {
            return false;
        }
        let within = |e: &Exps| e.iter().all(|&x| x <= order);
        for (e, c) in &self.terms {
            if within(e) && &other.coeff(e) != c {
                return false;
            }
        }
        for (e, c) in &other.terms {
            if within(e) && &self.coeff(e) != c {
                return false;
            }
        }
        true
    }
}

fn unit_shift(n: usize, i: usize, amount: i64) -> Vec<i64> {
    let mut s = vec![0; n];
    s[i] = amount;
    s
}

/// Index of the unordered pair (a, b) in the pole-exponent vector.
fn pair_index(n: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    // pairs (0,1), (0,2), ..., (0,n-1), (1,2), ...
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

type PoleKey = SmallVec<[u16; 3]>;

/// A regular series plus canonical pole parts sum_k S_k / prod (X_a-X_b)^k.
#[derive(Clone, Debug)]
pub struct PoleSeries {
    nvars: usize,
    parts: BTreeMap<PoleKey, FSeries>,
}

impl PoleSeries {
    pub fn regular(f: FSeries) -> PoleSeries {
        let nvars = f.nvars;
        let mut parts = BTreeMap::new();
        parts.insert(SmallVec::from_elem(0, pair_count(nvars)), f);
        PoleSeries { nvars, parts }
    }

    pub fn zero(nvars: usize, caps: &[i64]) -> PoleSeries {
        PoleSeries::regular(FSeries::zero(nvars, caps))
    }

    /// The series attached to the pole 1/(X_a - X_b)^k.
    pub fn with_pole(f: FSeries, a: usize, b: usize, k: u16) -> PoleSeries {
        let nvars = f.nvars;
        let mut key: PoleKey = SmallVec::from_elem(0, pair_count(nvars));
        key[pair_index(nvars, a, b)] = k;
        let mut parts = BTreeMap::new();
        parts.insert(key, f);
        PoleSeries { nvars, parts }
    }

    fn insert(&mut self, key: PoleKey, f: FSeries) {
        if f.is_zero() {
            return;
        }
        match self.parts.remove(&key) {
            None => {
                self.parts.insert(key, f);
            }
            Some(prev) => {
                self.parts.insert(key, prev.add(&f));
            }
        }
    }

    pub fn add(&self, other: &PoleSeries) -> PoleSeries {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (k, f) in &other.parts {
            out.insert(k.clone(), f.clone());
        }
        out
    }

    pub fn mul(&self, other: &PoleSeries) -> PoleSeries {
        assert_eq!(self.nvars, other.nvars);
        let mut out = PoleSeries {
            nvars: self.nvars,
            parts: BTreeMap::new(),
        };
        for (ka, fa) in &self.parts {
            for (kb, fb) in &other.parts {
                let key: PoleKey = ka.iter().zip(kb.iter()).map(|(x, y)| x + y).collect();
                out.insert(key, fa.mul(fb));
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> PoleSeries {
        let mut out = self.clone();
        for f in out.parts.values_mut() {
            *f = f.scale(c);
        }
        out
    }

    pub fn mul_series(&self, f: &FSeries) -> PoleSeries {
        let mut out = self.clone();
        for g in out.parts.values_mut() {
            *g = g.mul(f);
        }
        out
    }

    /// d/dX_i with the product rule over the pole factors.
    pub fn derivative(&self, i: usize) -> PoleSeries {
        let n = self.nvars;
        let mut out = PoleSeries {
            nvars: n,
            parts: BTreeMap::new(),
        };
        for (key, f) in &self.parts {
            out.insert(key.clone(), f.derivative(i));
            for b in 0..n {
                if b == i {
                    continue;
                }
                let idx = pair_index(n, i, b);
                let k = key[idx];
                if k == 0 {
                    continue;
                }
                // d/dX_i (X_a - X_b)^(-k) with (a, b) ordered: sign -1 when
                // i is the smaller index, +1 otherwise
                let sign: i64 = if i < b { -1 } else { 1 };
                let mut nk = key.clone();
                nk[idx] += 1;
                let c = Rational::from_integer((sign * k as i64).into());
                out.insert(nk, f.scale(&c));
            }
        }
        out
    }

    /// Substitute X_i -> subs[i] (valuation-1 univariate series). Pole
    /// factors convert via (s(X_a) - s(X_b)) = (X_a - X_b) * U_ab with U_ab
    /// invertible; `divided_inverse(a, b)` must supply 1/U_ab.
    pub fn compose(
        &self,
        subs: &[FSeries],
        divided_inverse: &dyn Fn(usize, usize) -> FSeries,
    ) -> Result<PoleSeries> {
        let n = self.nvars;
        let mut out = PoleSeries {
            nvars: n,
            parts: BTreeMap::new(),
        };
        for (key, f) in &self.parts {
            let mut reg = f.compose(subs)?;
            for a in 0..n {
                for b in (a + 1)..n {
                    let k = key[pair_index(n, a, b)];
                    for _ in 0..k {
                        reg = reg.mul(&divided_inverse(a, b));
                    }
                }
            }
            out.insert(key.clone(), reg);
        }
        Ok(out)
    }

    /// Collapse to a regular series valid on the box of per-variable order
    /// `box_cap`. The pole parts of every pair are first combined over the
    /// common (maximal) pole order -- individual orders need not be
    /// divisible, only their combination is -- and the combined numerator is
    /// then divided down exactly. Fails when a genuine pole survives.
    pub fn into_regular(self, box_cap: i64) -> Result<FSeries> {
        let n = self.nvars;
        let zero_key: PoleKey = SmallVec::from_elem(0, pair_count(n));
        let mut acc = FSeries::zero(n, &vec![UNBOUNDED; n]);
        // componentwise maximal pole key over all parts
        let mut target: PoleKey = SmallVec::from_elem(0, pair_count(n));
        for key in self.parts.keys() {
            for (t, k) in target.iter_mut().zip(key.iter()) {
                *t = (*t).max(*k);
            }
        }
        let mut combined: Option<FSeries> = None;
        for (key, f) in self.parts {
            if key == zero_key {
                acc = acc.add(&f.truncated(&vec![box_cap; n]));
                continue;
            }
            if f.is_zero() {
                continue;
            }
            // raise to the common denominator
            let mut raised = f;
            for a in 0..n {
                for b in (a + 1)..n {
                    let idx = pair_index(n, a, b);
                    for _ in key[idx]..target[idx] {
                        raised = raised.mul(&difference(n, a, b));
                    }
                }
            }
            combined = Some(match combined {
                None => raised,
                Some(c) => c.add(&raised),
            });
        }
        if let Some(mut q) = combined {
            for a in 0..n {
                for b in (a + 1)..n {
                    let k = target[pair_index(n, a, b)];
                    if k > 0 {
                        q = divide_by_difference_pow(&q, a, b, k)?;
                    }
                }
            }
            acc = acc.add(&q.truncated(&vec![box_cap; n]));
        }
        if acc.caps.iter().any(|&c| c < box_cap) {
            return Err(Error::TruncationShortfall {
                achievable: acc.caps.iter().copied().min().unwrap_or(0),
                requested: box_cap,
            });
        }
        Ok(acc)
    }

    pub fn regular_part(&self) -> FSeries {
        let zero_key: PoleKey = SmallVec::from_elem(0, pair_count(self.nvars));
        self.parts
            .get(&zero_key)
            .cloned()
            .unwrap_or_else(|| FSeries::zero(self.nvars, &vec![i64::MAX / 4; self.nvars]))
    }

    pub fn pole_part(&self, a: usize, b: usize, k: u16) -> FSeries {
        let mut key: PoleKey = SmallVec::from_elem(0, pair_count(self.nvars));
        key[pair_index(self.nvars, a, b)] = k;
        self.parts
            .get(&key)
            .cloned()
            .unwrap_or_else(|| FSeries::zero(self.nvars, &vec![i64::MAX / 4; self.nvars]))
    }
}

/// The exact binomial X_a - X_b as a series.
fn difference(n: usize, a: usize, b: usize) -> FSeries {
    let mut d = FSeries::zero(n, &vec![UNBOUNDED; n]);
    let mut ea = vec![0i64; n];
    ea[a] = 1;
    d.insert(&ea, Rational::one());
    let mut eb = vec![0i64; n];
    eb[b] = 1;
    d.insert(&eb, -Rational::one());
    d
}

/// Exact division of a truncated series by (X_a - X_b)^k. The quotient of
/// one division step is valid on the triangle p + q <= t - 1 of pair
/// exponents (t = min of the pair caps); after k steps the per-variable
/// caps are set to the largest box inside the remaining triangle.
/// Divisibility is certified stepwise by vanishing diagonal sums.
pub fn divide_by_difference_pow(
    f: &FSeries,
    a: usize,
    b: usize,
    k: u16,
) -> Result<FSeries> {
    let n = f.nvars;
    assert!(
        f.terms.keys().all(|e| e[a] >= 0 && e[b] >= 0),
        "difference division expects nonnegative pair exponents"
    );
    let t = f.caps[a].min(f.caps[b]);
    if t < k as i64 {
        return Err(Error::TruncationShortfall {
            achievable: t,
            requested: k as i64,
        });
    }
    // group terms by the exponents away from the pair
    let mut groups: BTreeMap<Exps, BTreeMap<(i64, i64), Rational>> = BTreeMap::new();
    for (e, c) in &f.terms {
        let mut rest = e.clone();
        let (p, q) = (rest[a], rest[b]);
        rest[a] = 0;
        rest[b] = 0;
        groups.entry(rest).or_default().insert((p, q), c.clone());
    }
    for step in 0..k as i64 {
        let valid = t - step; // entries with p + q <= valid are exact
        let mut next: BTreeMap<Exps, BTreeMap<(i64, i64), Rational>> = BTreeMap::new();
        for (rest, terms) in &groups {
            // the diagonal sums of a divisible table vanish
            let mut by_total: BTreeMap<i64, Rational> = BTreeMap::new();
            for (&(p, q), c) in terms {
                if p + q <= valid {
                    let slot = by_total.entry(p + q).or_insert_with(Rational::zero);
                    *slot += c;
                }
            }
            for (d, sum) in by_total {
                if !sum.is_zero() {
                    return Err(Error::ContractViolation(format!(
                        "pole part is not divisible: diagonal sum {sum} at total \
                         degree {d} (spectators {rest:?})"
                    )));
                }
            }
            // q_{p,q} = sum_{i=0..q} s_{p+1+i, q-i}, for p + q <= valid - 1
            let coeff = |p: i64, q: i64| -> Rational {
                terms.get(&(p, q)).cloned().unwrap_or_else(Rational::zero)
            };
            let max_q = terms.keys().map(|&(_, q)| q).max().unwrap_or(0);
            let max_p = terms.keys().map(|&(p, _)| p).max().unwrap_or(0);
            let mut table: BTreeMap<(i64, i64), Rational> = BTreeMap::new();
            for p in 0..=(max_p.max(1) + max_q) {
                for q in 0..=max_q {
                    if p + q > valid - 1 {
                        continue;
                    }
                    let mut acc = Rational::zero();
                    for i in 0..=q {
                        acc += coeff(p + 1 + i, q - i);
                    }
                    if !acc.is_zero() {
                        table.insert((p, q), acc);
                    }
                }
            }
            if !table.is_empty() {
                next.insert(rest.clone(), table);
            }
        }
        groups = next;
    }
    let mut caps = f.caps.clone();
    let half = (t - k as i64).max(-1) / 2;
    caps[a] = half;
    caps[b] = half;
    let mut out = FSeries::zero(n, &caps);
    for (rest, terms) in &groups {
        for (&(p, q), c) in terms {
            let mut e = rest.clone();
            e[a] = p;
            e[b] = q;
            out.insert(&e, c.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    fn catalan(order: i64) -> FSeries {
        // 1 + X^2 + 2X^4 + 5X^6 + ... built by the fixed point M = 1 + X^2 M^2
        let caps = [order];
        let x2 = {
            let mut s = FSeries::zero(1, &caps);
            s.insert(&[2], int(1));
            s
        };
        let one = FSeries::constant(1, &caps, int(1));
        let mut m = one.clone();
        for _ in 0..=order {
            let mut next = one.add(&x2.mul(&m).mul(&m));
            next.caps = caps.to_vec();
            next.drop_beyond_caps();
            m = next;
        }
        m
    }

    #[test]
    fn catalan_fixed_point() {
        let m = catalan(10);
        assert_eq!(m.coeff(&[0]), int(1));
        assert_eq!(m.coeff(&[2]), int(1));
        assert_eq!(m.coeff(&[4]), int(2));
        assert_eq!(m.coeff(&[6]), int(5));
        assert_eq!(m.coeff(&[8]), int(14));
        assert_eq!(m.coeff(&[10]), int(42));
    }

    #[test]
    fn inversion_and_composition() {
        let caps = [8i64];
        let mut s = FSeries::zero(1, &caps);
        s.insert(&[0], int(1));
        s.insert(&[1], int(-1));
        let inv = s.invert().unwrap();
        // 1/(1 - X) = 1 + X + X^2 + ...
        for k in 0..=8 {
            assert_eq!(inv.coeff(&[k]), int(1));
        }
        // compose X -> X + X^2 into 1/(1-X)
        let mut sub = FSeries::zero(1, &[8]);
        sub.insert(&[1], int(1));
        sub.insert(&[2], int(1));
        let c = inv.compose(&[sub]).unwrap();
        // 1/(1 - X - X^2): Fibonacci coefficients
        let fib = [1, 1, 2, 3, 5, 8, 13, 21];
        for (k, f) in fib.iter().enumerate() {
            assert_eq!(c.coeff(&[k as i64]), int(*f), "order {k}");
        }
    }

    #[test]
    fn negative_exponent_composition() {
        // f(Y) = 1/Y composed with Y = X + X^2: 1/X - 1 + X - X^2 ...
        let mut f = FSeries::zero(1, &[6]);
        f.insert(&[-1], int(1));
        let mut sub = FSeries::zero(1, &[8]);
        sub.insert(&[1], int(1));
        sub.insert(&[2], int(1));
        let c = f.compose(&[sub]).unwrap();
        assert_eq!(c.coeff(&[-1]), int(1));
        assert_eq!(c.coeff(&[0]), int(-1));
        assert_eq!(c.coeff(&[1]), int(1));
        assert_eq!(c.coeff(&[2]), int(-1));
    }

    #[test]
    fn pole_series_derivative() {
        // d/dX_1 [1/(X_1 - X_2)^2] = -2/(X_1 - X_2)^3
        let caps = [6i64, 6];
        let one = FSeries::constant(2, &caps, int(1));
        let p = PoleSeries::with_pole(one, 0, 1, 2);
        let d = p.derivative(0);
        assert_eq!(d.pole_part(0, 1, 3).coeff(&[0, 0]), int(-2));
        let d2 = p.derivative(1);
        assert_eq!(d2.pole_part(0, 1, 3).coeff(&[0, 0]), int(2));
    }

    #[test]
    fn merge_vars_diagonal() {
        let caps = [5i64, 5];
        let mut f = FSeries::zero(2, &caps);
        f.insert(&[1, 0], int(1));
        f.insert(&[0, 1], int(1));
        f.insert(&[1, 1], rat(1, 2));
        let m = f.merge_vars(1, &[0, 0]);
        assert_eq!(m.coeff(&[1]), int(2));
        assert_eq!(m.coeff(&[2]), rat(1, 2));
    }
}
