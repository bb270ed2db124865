//! Truncated Laurent series in a local parameter t, with coefficients that
//! are rational functions of the remaining (spectator) variables.
//!
//! A series represents the expansion of some quantity after the substitution
//! v = center + t. Coefficients are exact for every degree up to
//! `truncation()`; below `min_degree()` they are exactly zero. Arithmetic
//! propagates the guaranteed-valid order pessimistically, so consumers can
//! check whether the window still covers what they need (the residue
//! extraction checks that it covers degree -1).
//!
//! Internally coefficients are held as semi-factored fractions so that the
//! bulk arithmetic is gcd-free; `coeff` performs the one-time reduction to a
//! canonical rational function.

use super::poly::MultiPoly;
use super::rational::Rational;
use super::ratfunc::RatFunc;
use super::semifrac::SemiFrac;
use super::symbol::Symbol;
use num::One;
use std::collections::BTreeMap;
use std::fmt;

/// Truncation value used for exact (polynomial) series.
pub const EXACT: i64 = i64::MAX / 4;

fn cap(t: i64) -> i64 {
    t.min(EXACT)
}

#[derive(Clone)]
pub struct Laurent {
    var: Symbol,
    center: Rational,
    min_degree: i64,
    trunc: i64,
    /// `coeffs[k]` is the coefficient of t^(min_degree + k).
    coeffs: Vec<SemiFrac>,
}

impl Laurent {
    // ---- Constructors ----

    pub fn zero(var: Symbol, center: Rational, trunc: i64) -> Laurent {
        Laurent {
            var,
            center,
            min_degree: 0,
            trunc,
            coeffs: Vec::new(),
        }
    }

    pub fn from_terms(
        var: Symbol,
        center: Rational,
        trunc: i64,
        terms: impl IntoIterator<Item = (i64, RatFunc)>,
    ) -> Laurent {
        Laurent::from_semifrac_terms(
            var,
            center,
            trunc,
            terms
                .into_iter()
                .map(|(d, c)| (d, SemiFrac::from_ratfunc(&c))),
        )
    }

    fn from_semifrac_terms(
        var: Symbol,
        center: Rational,
        trunc: i64,
        terms: impl IntoIterator<Item = (i64, SemiFrac)>,
    ) -> Laurent {
        let mut map: BTreeMap<i64, SemiFrac> = BTreeMap::new();
        for (d, c) in terms {
            assert!(d <= trunc, "term beyond truncation");
            match map.remove(&d) {
                None => {
                    map.insert(d, c);
                }
                Some(prev) => {
                    map.insert(d, prev.add(&c));
                }
            }
        }
        let mut s = Laurent::zero(var, center, trunc);
        if let (Some(&lo), Some(&hi)) = (map.keys().next(), map.keys().next_back()) {
            s.min_degree = lo;
            s.coeffs = (lo..=hi)
                .map(|d| map.remove(&d).unwrap_or_else(SemiFrac::zero))
                .collect();
        }
        s.normalize();
        s
    }

    /// The exact series of the local parameter itself: center + t.
    pub fn local_point(var: Symbol, center: Rational) -> Laurent {
        Laurent::from_terms(
            var,
            center.clone(),
            EXACT,
            [
                (0, RatFunc::constant(center)),
                (1, RatFunc::one()),
            ],
        )
    }

    pub fn constant(var: Symbol, center: Rational, c: RatFunc) -> Laurent {
        Laurent::from_terms(var, center, EXACT, [(0, c)])
    }

    /// Laurent expansion of a rational function in `v` around `center`,
    /// exact to degree `trunc`. Spectator variables stay symbolic inside the
    /// coefficients. The actual leading order is detected exactly.
    pub fn expand(f: &RatFunc, v: Symbol, center: &Rational, trunc: i64) -> Laurent {
        let var = local_param_symbol();
        assert!(
            !f.uses_var(var),
            "rational function already uses the local parameter symbol"
        );
        let num_poly = shifted_univar(f.num(), v, center);
        let den_poly = shifted_univar(f.den(), v, center);
        if num_poly.is_empty() {
            return Laurent::zero(var, center.clone(), EXACT);
        }
        let a = *num_poly.keys().next().unwrap();
        let b = *den_poly.keys().next().expect("denominator is nonzero");
        let lead = a - b;
        if trunc < lead {
            return Laurent::zero(var, center.clone(), trunc);
        }
        let num_series = Laurent::from_semifrac_terms(
            var,
            center.clone(),
            EXACT,
            num_poly.into_iter().map(|(d, p)| (d, SemiFrac::from_poly(p))),
        );
        let den_series = Laurent::from_semifrac_terms(
            var,
            center.clone(),
            EXACT,
            den_poly.into_iter().map(|(d, p)| (d, SemiFrac::from_poly(p))),
        )
        .truncated(trunc - a + 2 * b);
        num_series.mul(&den_series.invert()).truncated(trunc)
    }

    // ---- Queries ----

    pub fn var(&self) -> Symbol {
        self.var
    }

    pub fn center(&self) -> &Rational {
        &self.center
    }

    pub fn truncation(&self) -> i64 {
        self.trunc
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    /// Degree of the first nonzero known coefficient, if any.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|k| self.min_degree + k as i64)
    }

    /// First degree at which the series might be nonzero; trunc+1 when every
    /// known coefficient vanishes.
    fn val_or_after(&self) -> i64 {
        self.valuation().unwrap_or(self.trunc + 1)
    }

    pub fn is_known_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn sf_coeff(&self, d: i64) -> SemiFrac {
        if d < self.min_degree {
            return SemiFrac::zero();
        }
        let k = (d - self.min_degree) as usize;
        self.coeffs.get(k).cloned().unwrap_or_else(SemiFrac::zero)
    }

    /// Coefficient of t^d as a canonical rational function. Panics when d
    /// lies beyond the truncation.
    pub fn coeff(&self, d: i64) -> RatFunc {
        assert!(d <= self.trunc, "coefficient beyond truncation window");
        self.sf_coeff(d).to_ratfunc()
    }

    /// The residue, i.e. the coefficient of t^(-1). Errors when the
    /// truncation window does not reach degree -1.
    pub fn residue(&self) -> Result<RatFunc, crate::Error> {
        if self.trunc < -1 {
            return Err(crate::Error::ContractViolation(format!(
                "residue requested but series is only valid to degree {}",
                self.trunc
            )));
        }
        Ok(self.coeff(-1))
    }

    fn normalize(&mut self) {
        while let Some(c) = self.coeffs.last() {
            if c.is_zero() {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        let lead_zeros = self
            .coeffs
            .iter()
            .take_while(|c| c.is_zero())
            .count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.min_degree += lead_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.min_degree = 0;
        }
        // drop anything beyond the truncation
        if !self.coeffs.is_empty() {
            let max_len = (self.trunc - self.min_degree + 1).max(0) as usize;
            self.coeffs.truncate(max_len);
        }
    }

    fn assert_compatible(&self, other: &Laurent) {
        assert_eq!(self.var, other.var, "series in different local parameters");
        assert_eq!(
            self.center, other.center,
            "series centered at different points"
        );
    }

    // ---- Arithmetic ----

    pub fn neg(&self) -> Laurent {
        let mut s = self.clone();
        for c in &mut s.coeffs {
            *c = c.neg();
        }
        s
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        self.assert_compatible(other);
        let trunc = cap(self.trunc.min(other.trunc));
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| (self.min_degree + k as i64, c.clone()))
            .chain(
                other
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| (other.min_degree + k as i64, c.clone())),
            )
            .filter(|(d, c)| *d <= trunc && !c.is_zero());
        Laurent::from_semifrac_terms(self.var, self.center.clone(), trunc, terms)
    }

    pub fn sub(&self, other: &Laurent) -> Laurent {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        self.assert_compatible(other);
        let va = self.val_or_after();
        let vb = other.val_or_after();
        let trunc = cap(cap(self.trunc + vb).min(cap(other.trunc + va)));
        let mut acc: BTreeMap<i64, SemiFrac> = BTreeMap::new();
        for (ka, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let da = self.min_degree + ka as i64;
            for (kb, cb) in other.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let d = da + other.min_degree + kb as i64;
                if d > trunc {
                    break;
                }
                let p = ca.mul(cb);
                match acc.remove(&d) {
                    None => {
                        acc.insert(d, p);
                    }
                    Some(prev) => {
                        acc.insert(d, prev.add(&p));
                    }
                }
            }
        }
        Laurent::from_semifrac_terms(self.var, self.center.clone(), trunc, acc)
    }

    /// A single coefficient of the product, without materializing it:
    /// sum of a_i * b_j over i + j = d. Errors when the product's validity
    /// window would not cover d.
    pub fn mul_coeff(&self, other: &Laurent, d: i64) -> Result<RatFunc, crate::Error> {
        self.assert_compatible(other);
        let va = self.val_or_after();
        let vb = other.val_or_after();
        let trunc = cap(cap(self.trunc + vb).min(cap(other.trunc + va)));
        if d > trunc {
            return Err(crate::Error::TruncationShortfall {
                achievable: trunc,
                requested: d,
            });
        }
        let mut acc = SemiFrac::zero();
        for (ka, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let da = self.min_degree + ka as i64;
            let db = d - da;
            if db < other.min_degree {
                break;
            }
            if db <= other.trunc {
                let cb = other.sf_coeff(db);
                if !cb.is_zero() {
                    acc = acc.add(&ca.mul(&cb));
                }
            }
        }
        Ok(acc.to_ratfunc())
    }

    pub fn scale(&self, c: &RatFunc) -> Laurent {
        if c.is_zero() {
            return Laurent::zero(self.var, self.center.clone(), EXACT);
        }
        let sf = SemiFrac::from_ratfunc(c);
        let mut s = self.clone();
        for k in &mut s.coeffs {
            *k = k.mul(&sf);
        }
        s.normalize();
        s
    }

    /// Multiply by t^k.
    pub fn shift(&self, k: i64) -> Laurent {
        let mut s = self.clone();
        s.min_degree += k;
        s.trunc = cap(s.trunc + k);
        s
    }

    /// Restrict the validity window (no-op when already tighter).
    pub fn truncated(&self, t: i64) -> Laurent {
        let mut s = self.clone();
        s.trunc = cap(s.trunc.min(t));
        s.normalize();
        s
    }

    /// Multiplicative inverse; panics when every known coefficient is zero.
    pub fn invert(&self) -> Laurent {
        let m = self
            .valuation()
            .expect("inverting a series with no known nonzero coefficient");
        // a single stored term c t^m inverts exactly at any truncation
        if self.coeffs.iter().filter(|c| !c.is_zero()).count() == 1 {
            let trunc = if self.trunc >= EXACT {
                EXACT
            } else {
                cap(self.trunc - 2 * m)
            };
            return Laurent::from_semifrac_terms(
                self.var,
                self.center.clone(),
                trunc,
                [(-m, self.sf_coeff(m).invert())],
            );
        }
        assert!(
            self.trunc < EXACT,
            "inverting an untruncated multi-term series; cap it with truncated() first"
        );
        let rel = self.trunc - m;
        let lead_inv = self.sf_coeff(m).invert();
        let mut inv: Vec<SemiFrac> = Vec::with_capacity(rel as usize + 1);
        inv.push(lead_inv.clone());
        for k in 1..=rel {
            let mut acc = SemiFrac::zero();
            for (j, e) in inv.iter().enumerate().take(k as usize) {
                let c = self.sf_coeff(m + k - j as i64);
                if !c.is_zero() {
                    acc = acc.add(&c.mul(e));
                }
            }
            inv.push(acc.neg().mul(&lead_inv));
        }
        let mut s = Laurent {
            var: self.var,
            center: self.center.clone(),
            min_degree: -m,
            trunc: cap(self.trunc - 2 * m),
            coeffs: inv,
        };
        s.normalize();
        s
    }

    pub fn div(&self, other: &Laurent) -> Laurent {
        self.mul(&other.invert())
    }

    pub fn pow(&self, e: i64) -> Laurent {
        if e == 0 {
            return Laurent::constant(self.var, self.center.clone(), RatFunc::one());
        }
        if e < 0 {
            return self.invert().pow(-e);
        }
        let mut acc: Option<Laurent> = None;
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc.unwrap()
    }

    /// d/dt, termwise.
    pub fn derivative(&self) -> Laurent {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            let d = self.min_degree + k as i64;
            if d != 0 && !c.is_zero() {
                terms.push((d - 1, c.scale_rat(&Rational::from_integer(d.into()))));
            }
        }
        Laurent::from_semifrac_terms(
            self.var,
            self.center.clone(),
            cap(self.trunc - 1),
            terms,
        )
    }

    /// Composition self(t := inner(t)). When `self` has negative-degree terms
    /// the inner series must be invertible; when `self` has a pole the inner
    /// series must vanish at the center (positive valuation).
    pub fn compose(&self, inner: &Laurent) -> Laurent {
        let m = match inner.valuation() {
            Some(m) => m,
            None => {
                // inner is zero: composition keeps only the degree-0 term
                assert!(
                    self.min_degree >= 0,
                    "composing a pole with the zero series"
                );
                return Laurent::from_semifrac_terms(
                    inner.var,
                    inner.center.clone(),
                    EXACT,
                    [(0, self.sf_coeff(0))],
                );
            }
        };
        if self.min_degree < 0 {
            assert!(
                m >= 1,
                "composing a pole with a series that does not vanish at the center"
            );
        }
        let outer_cap = if self.trunc >= EXACT {
            EXACT
        } else {
            cap(m.max(1) * (self.trunc + 1) - 1)
        };
        let mut acc = Laurent::zero(inner.var, inner.center.clone(), EXACT);
        // positive (and zero) powers by Horner, negative powers directly
        let top = self.min_degree + self.coeffs.len() as i64 - 1;
        if top >= 0 {
            let mut horner = Laurent::zero(inner.var, inner.center.clone(), EXACT);
            for d in (0..=top).rev() {
                horner = horner.mul(inner);
                let c = if d >= self.min_degree {
                    self.sf_coeff(d)
                } else {
                    SemiFrac::zero()
                };
                if !c.is_zero() {
                    horner = horner.add(&Laurent::from_semifrac_terms(
                        inner.var,
                        inner.center.clone(),
                        EXACT,
                        [(0, c)],
                    ));
                }
            }
            acc = acc.add(&horner);
        }
        if self.min_degree < 0 {
            let inv = inner.invert();
            let mut p = inv.clone();
            let mut d = -1i64;
            loop {
                if d < self.min_degree {
                    break;
                }
                let c = self.sf_coeff(d);
                if !c.is_zero() {
                    let cl = Laurent::from_semifrac_terms(
                        inner.var,
                        inner.center.clone(),
                        EXACT,
                        [(0, c)],
                    );
                    acc = acc.add(&p.mul(&cl));
                }
                d -= 1;
                if d >= self.min_degree {
                    p = p.mul(&inv);
                }
            }
        }
        acc.truncated(outer_cap)
    }
}

/// The reserved local-parameter symbol used by all expansions.
pub fn local_param_symbol() -> Symbol {
    Symbol::new("t")
}

/// Rewrite `p` as a polynomial in t under v = center + t, returning the map
/// degree-in-t -> coefficient (a polynomial in the spectators).
fn shifted_univar(p: &MultiPoly, v: Symbol, center: &Rational) -> BTreeMap<i64, MultiPoly> {
    let uni = p.as_univar_in(v);
    let mut out: BTreeMap<i64, MultiPoly> = BTreeMap::new();
    for (d, coeff) in uni {
        // (center + t)^d expanded by the binomial theorem
        let mut binom = Rational::one();
        let mut cpow = vec![Rational::one()];
        for _ in 0..d {
            cpow.push(cpow.last().unwrap() * center);
        }
        for k in 0..=d {
            if k > 0 {
                let dk = Rational::from_integer((d - k + 1).into())
                    / Rational::from_integer(k.into());
                binom *= dk;
            }
            let c = coeff.scale(&(binom.clone() * &cpow[(d - k) as usize]));
            if !c.is_zero() {
                let slot = out.entry(k as i64).or_insert_with(MultiPoly::zero);
                *slot = slot.add(&c);
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Evaluate a rational function with Laurent-series values bound to some of
/// its variables; unbound variables stay symbolic inside the coefficients.
pub fn eval_ratfunc_at(f: &RatFunc, bindings: &[(Symbol, &Laurent)]) -> Laurent {
    assert!(!bindings.is_empty(), "no series bindings supplied");
    let template = bindings[0].1;
    for (_, s) in bindings {
        template.assert_compatible(s);
    }
    let mut acc = eval_poly_at(f.num(), bindings, template);
    // dividing factor by factor keeps the inverted series small (typical
    // denominators split into per-variable pieces)
    for factor in f.den().disjoint_factors() {
        let s = eval_poly_at(&factor, bindings, template);
        acc = acc.div(&s);
    }
    acc
}

fn eval_poly_at(p: &MultiPoly, bindings: &[(Symbol, &Laurent)], template: &Laurent) -> Laurent {
    let var = template.var;
    let center = template.center.clone();
    let assigned: Vec<(usize, &Laurent)> = p
        .vars()
        .iter()
        .enumerate()
        .filter_map(|(i, v)| {
            bindings
                .iter()
                .find(|(w, _)| w == v)
                .map(|(_, s)| (i, *s))
        })
        .collect();
    if assigned.is_empty() {
        return Laurent::from_semifrac_terms(
            var,
            center,
            EXACT,
            [(0, SemiFrac::from_poly(p.clone()))],
        );
    }
    let mut powers: BTreeMap<usize, Vec<Laurent>> = BTreeMap::new();
    for &(i, s) in &assigned {
        let maxdeg = p.terms().map(|(m, _)| m.0[i]).max().unwrap_or(0);
        let mut pows = Vec::with_capacity(maxdeg as usize + 1);
        pows.push(Laurent::constant(var, center.clone(), RatFunc::one()));
        for k in 1..=maxdeg {
            let next = pows[(k - 1) as usize].mul(s);
            pows.push(next);
        }
        powers.insert(i, pows);
    }
    let keep: Vec<usize> = (0..p.vars().len())
        .filter(|i| !powers.contains_key(i))
        .collect();
    let kept_vars: Vec<Symbol> = keep.iter().map(|&i| p.vars()[i]).collect();
    let mut acc = Laurent::zero(var, center.clone(), EXACT);
    for (m, c) in p.terms() {
        let kept_exps: Vec<u32> = keep.iter().map(|&i| m.0[i]).collect();
        let scalar = SemiFrac::from_poly(MultiPoly::from_terms(
            kept_vars.clone(),
            [(kept_exps, c.clone())],
        ));
        let mut term = Laurent::from_semifrac_terms(var, center.clone(), EXACT, [(0, scalar)]);
        for (&i, pows) in &powers {
            let e = m.0[i] as usize;
            if e > 0 {
                term = term.mul(&pows[e]);
            }
        }
        acc = acc.add(&term);
    }
    acc
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                if any {
                    write!(f, " + ")?;
                }
                write!(
                    f,
                    "({})*{}^{}",
                    c.to_ratfunc(),
                    self.var,
                    self.min_degree + k as i64
                )?;
                any = true;
            }
        }
        if !any {
            write!(f, "0")?;
        }
        if self.trunc < EXACT {
            write!(f, " + O({}^{})", self.var, self.trunc + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn zsym() -> Symbol {
        Symbol::new("z")
    }
    fn wsym() -> Symbol {
        Symbol::new("w")
    }

    fn expand_at_zero(f: &RatFunc, trunc: i64) -> Laurent {
        Laurent::expand(f, zsym(), &int(0), trunc)
    }

    // ---- expansion ----

    #[test]
    fn geometric_series_with_pole() {
        // 1/(z(z-1)) at 0: -1/t - 1 - t - t^2 - ...
        let z = RatFunc::var(zsym());
        let f = z.mul(&z.sub(&RatFunc::one())).recip();
        let s = expand_at_zero(&f, 1);
        assert_eq!(s.min_degree(), -1);
        assert_eq!(s.coeff(-1), RatFunc::constant(int(-1)));
        assert_eq!(s.coeff(0), RatFunc::constant(int(-1)));
        assert_eq!(s.coeff(1), RatFunc::constant(int(-1)));
    }

    #[test]
    fn monomial_expansion_is_exact() {
        let f = RatFunc::var(zsym()).pow(2);
        let s = expand_at_zero(&f, 5);
        assert_eq!(s.valuation(), Some(2));
        assert_eq!(s.coeff(2), RatFunc::one());
        assert_eq!(s.coeff(3), RatFunc::zero());
    }

    #[test]
    fn spectator_geometric_series() {
        // 1/(w - z) at z = 0: 1/w + t/w^2 + t^2/w^3 + ...
        let w = RatFunc::var(wsym());
        let f = w.sub(&RatFunc::var(zsym())).recip();
        let s = expand_at_zero(&f, 2);
        assert_eq!(s.coeff(0), w.recip());
        assert_eq!(s.coeff(1), w.pow(2).recip());
        assert_eq!(s.coeff(2), w.pow(3).recip());
    }

    #[test]
    fn expansion_at_nonzero_center() {
        // 1/z at z = 1: 1 - t + t^2 - ...
        let f = RatFunc::var(zsym()).recip();
        let s = Laurent::expand(&f, zsym(), &int(1), 3);
        assert_eq!(s.coeff(0), RatFunc::one());
        assert_eq!(s.coeff(1), RatFunc::constant(int(-1)));
        assert_eq!(s.coeff(2), RatFunc::one());
        assert_eq!(s.coeff(3), RatFunc::constant(int(-1)));
    }

    // ---- residues ----

    #[test]
    fn residue_examples() {
        let t = local_param_symbol();
        let one_over_t =
            Laurent::from_terms(t, int(0), EXACT, [(-1, RatFunc::one())]);
        assert_eq!(one_over_t.residue().unwrap(), RatFunc::one());

        let regular = Laurent::from_terms(
            t,
            int(0),
            EXACT,
            [(0, RatFunc::constant(int(3))), (1, RatFunc::constant(int(2)))],
        );
        assert_eq!(regular.residue().unwrap(), RatFunc::zero());

        let w = RatFunc::var(wsym());
        let mixed = Laurent::from_terms(
            t,
            int(0),
            EXACT,
            [
                (-2, w),
                (-1, RatFunc::constant(int(2))),
                (0, RatFunc::constant(int(5))),
            ],
        );
        assert_eq!(mixed.residue().unwrap(), RatFunc::constant(int(2)));
    }

    #[test]
    fn residue_outside_window_is_an_error() {
        let t = local_param_symbol();
        let s = Laurent::zero(t, int(0), -3);
        assert!(s.residue().is_err());
    }

    // ---- arithmetic and composition ----

    #[test]
    fn inversion_round_trip() {
        // (t + t^2) * (t + t^2)^{-1} = 1
        let t = local_param_symbol();
        let s = Laurent::from_terms(
            t,
            int(0),
            8,
            [(1, RatFunc::one()), (2, RatFunc::one())],
        );
        let prod = s.mul(&s.invert());
        assert_eq!(prod.coeff(0), RatFunc::one());
        for d in 1..=prod.truncation() {
            assert_eq!(prod.coeff(d), RatFunc::zero());
        }
    }

    #[test]
    fn compose_pole_with_vanishing_inner() {
        // outer 1/t, inner t + t^2: 1/t - 1 + t - t^2 ...
        let t = local_param_symbol();
        let outer = Laurent::from_terms(t, int(0), EXACT, [(-1, RatFunc::one())]);
        let inner = Laurent::from_terms(
            t,
            int(0),
            6,
            [(1, RatFunc::one()), (2, RatFunc::one())],
        );
        let c = outer.compose(&inner);
        assert_eq!(c.coeff(-1), RatFunc::one());
        assert_eq!(c.coeff(0), RatFunc::constant(int(-1)));
        assert_eq!(c.coeff(1), RatFunc::one());
        assert_eq!(c.coeff(2), RatFunc::constant(int(-1)));
    }

    #[test]
    fn compose_identity() {
        let t = local_param_symbol();
        let outer = Laurent::from_terms(
            t,
            int(0),
            7,
            [(2, RatFunc::one()), (5, RatFunc::constant(rat(1, 3)))],
        );
        let ident = Laurent::from_terms(t, int(0), EXACT, [(1, RatFunc::one())]);
        let c = outer.compose(&ident);
        assert_eq!(c.coeff(2), RatFunc::one());
        assert_eq!(c.coeff(5), RatFunc::constant(rat(1, 3)));
    }

    #[test]
    fn compose_square_with_negation() {
        // outer t^2, inner -t: t^2
        let t = local_param_symbol();
        let outer = Laurent::from_terms(t, int(0), EXACT, [(2, RatFunc::one())]);
        let inner = Laurent::from_terms(t, int(0), EXACT, [(1, RatFunc::constant(int(-1)))]);
        let c = outer.compose(&inner);
        assert_eq!(c.coeff(2), RatFunc::one());
        assert_eq!(c.valuation(), Some(2));
    }

    #[test]
    fn eval_ratfunc_with_spectators() {
        // f(w, z) = 1/(w - z) evaluated at z -> t + t^2 is a series in t
        // with coefficients rational in w.
        let w = RatFunc::var(wsym());
        let f = w.sub(&RatFunc::var(zsym())).recip();
        let t = local_param_symbol();
        let inner = Laurent::from_terms(
            t,
            int(0),
            4,
            [(1, RatFunc::one()), (2, RatFunc::one())],
        );
        let s = eval_ratfunc_at(&f, &[(zsym(), &inner)]);
        assert_eq!(s.coeff(0), w.recip());
        // [t^1] of 1/(w - (t+t^2)) = 1/w^2
        assert_eq!(s.coeff(1), w.pow(2).recip());
        // [t^2]: 1/w^2 + 1/w^3
        assert_eq!(s.coeff(2), w.pow(2).recip().add(&w.pow(3).recip()));
    }

    #[test]
    fn truncation_is_pessimistic_under_mul() {
        let t = local_param_symbol();
        let a = Laurent::from_terms(t, int(0), 3, [(1, RatFunc::one())]);
        let b = Laurent::from_terms(t, int(0), 10, [(2, RatFunc::one())]);
        // valid orders: min(3 + 2, 10 + 1) = 5
        assert_eq!(a.mul(&b).truncation(), 5);
    }
}
