//! Sparse multivariate polynomials over the rationals.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors in graded
//! lexicographic order, so the canonical (serialized) form is the map's
//! iteration order. Each polynomial carries its own sorted variable list;
//! binary operations align variable lists first. Unused variables are pruned
//! so that structurally equal polynomials compare equal.
//!
//! The gcd is a primitive subresultant pseudo-remainder sequence, recursing
//! on the coefficient ring for multivariate inputs.

use super::rational::{rat, rational_gcd, render_rational, Rational};
use super::symbol::Symbol;
use num::bigint::BigInt;
use num::{One, Signed, Zero};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector; ordering is graded-lex (total degree first, then lex).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub SmallVec<[u32; 6]>);

impl Monomial {
    pub fn constant(nvars: usize) -> Monomial {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Componentwise division; `None` when some exponent would go negative.
    fn div(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.0.len(), other.0.len());
        let mut out = SmallVec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A multivariate polynomial with rational coefficients in canonical form:
/// sorted pruned variable list, no stored zero coefficients. The derived
/// ordering is arbitrary but total, for use as a map key.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiPoly {
    vars: Vec<Symbol>,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    // ---- Constructors ----

    pub fn zero() -> MultiPoly {
        MultiPoly {
            vars: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> MultiPoly {
        MultiPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> MultiPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::constant(0), c);
        }
        MultiPoly {
            vars: Vec::new(),
            terms,
        }
    }

    pub fn var(v: Symbol) -> MultiPoly {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(SmallVec::from_slice(&[1])), Rational::one());
        MultiPoly {
            vars: vec![v],
            terms,
        }
    }

    /// Build from raw (exponent vector, coefficient) pairs over `vars`.
    /// Coefficients on equal monomials are summed; the result is normalized.
    pub fn from_terms(
        vars: Vec<Symbol>,
        entries: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> MultiPoly {
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (exps, c) in entries {
            assert_eq!(exps.len(), vars.len(), "exponent vector length mismatch");
            let m = Monomial(SmallVec::from_vec(exps));
            let slot = terms.entry(m).or_insert_with(Rational::zero);
            *slot += c;
        }
        let mut p = MultiPoly { vars, terms };
        p.normalize();
        p
    }

    // ---- Basic queries ----

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            Some(self.terms.values().next().unwrap().clone())
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn vars(&self) -> &[Symbol] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, v: Symbol) -> u32 {
        match self.vars.iter().position(|&w| w == v) {
            None => 0,
            Some(i) => self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0),
        }
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    // ---- Normalization ----

    fn normalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        if self.terms.is_empty() {
            self.vars.clear();
            return;
        }
        // prune variables that no term uses
        let nv = self.vars.len();
        let mut used = vec![false; nv];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        if used.iter().all(|&u| u) {
            return;
        }
        let keep: Vec<usize> = (0..nv).filter(|&i| used[i]).collect();
        self.vars = keep.iter().map(|&i| self.vars[i]).collect();
        let old = std::mem::take(&mut self.terms);
        for (m, c) in old {
            let nm = Monomial(keep.iter().map(|&i| m.0[i]).collect());
            self.terms.insert(nm, c);
        }
    }

    /// Re-express the terms over a superset variable list (sorted).
    fn embed(&self, vars: &[Symbol]) -> BTreeMap<Monomial, Rational> {
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("superset"))
            .collect();
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = SmallVec::from_elem(0u32, vars.len());
            for (j, &exp) in m.0.iter().enumerate() {
                e[idx[j]] = exp;
            }
            out.insert(Monomial(e), c.clone());
        }
        out
    }

    fn merged_vars(a: &MultiPoly, b: &MultiPoly) -> Vec<Symbol> {
        let mut vars = a.vars.clone();
        for &v in &b.vars {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        vars.sort();
        vars
    }

    // ---- Ring operations ----

    pub fn neg(&self) -> MultiPoly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let vars = MultiPoly::merged_vars(self, other);
        let mut terms = self.embed(&vars);
        for (m, c) in other.embed(&vars) {
            let slot = terms.entry(m).or_insert_with(Rational::zero);
            *slot += c;
        }
        let mut p = MultiPoly { vars, terms };
        p.normalize();
        p
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero();
        }
        let vars = MultiPoly::merged_vars(self, other);
        let a = self.embed(&vars);
        let b = other.embed(&vars);
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                let m = ma.mul(mb);
                let prod = ca * cb;
                let slot = terms.entry(m).or_insert_with(Rational::zero);
                *slot += prod;
            }
        }
        let mut p = MultiPoly { vars, terms };
        p.normalize();
        p
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        let terms = self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect();
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    // ---- Calculus and substitution ----

    pub fn derivative(&self, v: Symbol) -> MultiPoly {
        let Some(i) = self.vars.iter().position(|&w| w == v) else {
            return MultiPoly::zero();
        };
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut nm = m.clone();
            nm.0[i] = e - 1;
            terms.insert(nm, c * rat(e as i64, 1));
        }
        let mut p = MultiPoly {
            vars: self.vars.clone(),
            terms,
        };
        p.normalize();
        p
    }

    /// Substitute `v := value` for a rational point; other variables remain.
    pub fn eval_var(&self, v: Symbol, value: &Rational) -> MultiPoly {
        let Some(i) = self.vars.iter().position(|&w| w == v) else {
            return self.clone();
        };
        let mut acc = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut nm = m.clone();
            let e = nm.0[i];
            nm.0[i] = 0;
            let mut factor = Rational::one();
            for _ in 0..e {
                factor *= value;
            }
            let mut t = BTreeMap::new();
            t.insert(nm, c * factor);
            let mut piece = MultiPoly {
                vars: self.vars.clone(),
                terms: t,
            };
            piece.normalize();
            acc = acc.add(&piece);
        }
        acc
    }

    /// Substitute `v := p` for a polynomial, via Horner in `v`.
    pub fn subst(&self, v: Symbol, p: &MultiPoly) -> MultiPoly {
        if !self.vars.contains(&v) {
            return self.clone();
        }
        let coeffs = self.as_univar_in(v);
        let maxdeg = *coeffs.keys().max().unwrap();
        let mut acc = MultiPoly::zero();
        for d in (0..=maxdeg).rev() {
            acc = acc.mul(p);
            if let Some(c) = coeffs.get(&d) {
                acc = acc.add(c);
            }
        }
        acc
    }

    /// View as univariate in `v`: map degree -> coefficient polynomial
    /// (in the remaining variables).
    pub fn as_univar_in(&self, v: Symbol) -> BTreeMap<u32, MultiPoly> {
        let mut out: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        let Some(i) = self.vars.iter().position(|&w| w == v) else {
            if !self.is_zero() {
                out.insert(0, self.clone());
            }
            return out;
        };
        let rest: Vec<Symbol> = self
            .vars
            .iter()
            .copied()
            .filter(|&w| w != v)
            .collect();
        let mut groups: BTreeMap<u32, BTreeMap<Monomial, Rational>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = m.0[i];
            let nm = Monomial(
                m.0.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &e)| e)
                    .collect(),
            );
            groups.entry(d).or_default().insert(nm, c.clone());
        }
        for (d, terms) in groups {
            let mut p = MultiPoly {
                vars: rest.clone(),
                terms,
            };
            p.normalize();
            out.insert(d, p);
        }
        out
    }

    /// Inverse of `as_univar_in`.
    pub fn from_univar_in(v: Symbol, coeffs: &BTreeMap<u32, MultiPoly>) -> MultiPoly {
        let xv = MultiPoly::var(v);
        let mut acc = MultiPoly::zero();
        for (&d, c) in coeffs {
            acc = acc.add(&c.mul(&xv.pow(d)));
        }
        acc
    }

    pub fn leading_coeff_in(&self, v: Symbol) -> MultiPoly {
        let uni = self.as_univar_in(v);
        uni.into_iter()
            .next_back()
            .map(|(_, c)| c)
            .unwrap_or_else(MultiPoly::zero)
    }

    // ---- Content and primitive part ----

    /// Positive rational gcd of all coefficients (0 for the zero polynomial).
    pub fn content(&self) -> Rational {
        let mut c = Rational::zero();
        for k in self.terms.values() {
            c = rational_gcd(&c, k);
            if c.is_one() {
                break;
            }
        }
        c
    }

    /// Write `self = content * primitive` with `primitive` having coprime
    /// integer coefficients and positive graded-lex leading coefficient.
    pub fn primitive_and_content(&self) -> (Rational, MultiPoly) {
        if self.is_zero() {
            return (Rational::zero(), MultiPoly::zero());
        }
        let mut c = self.content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        (c.clone(), self.scale(&c.recip()))
    }

    pub fn primitive_part(&self) -> MultiPoly {
        self.primitive_and_content().1
    }

    // ---- Division ----

    /// Quotient when the division is exact, `None` otherwise.
    pub fn try_exact_div(&self, d: &MultiPoly) -> Option<MultiPoly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(MultiPoly::zero());
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let vars = MultiPoly::merged_vars(self, d);
        let mut rem = self.embed(&vars);
        let dterms = d.embed(&vars);
        let (dlead_m, dlead_c) = dterms.iter().next_back().unwrap();
        let mut q: BTreeMap<Monomial, Rational> = BTreeMap::new();
        while let Some((rm, rc)) = rem.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = rm.div(dlead_m)?;
            let qc = &rc / dlead_c;
            for (m, c) in &dterms {
                let tm = qm.mul(m);
                let slot = rem.entry(tm).or_insert_with(Rational::zero);
                *slot -= &qc * c;
            }
            rem.retain(|_, c| !c.is_zero());
            q.insert(qm, qc);
        }
        let mut p = MultiPoly { vars, terms: q };
        p.normalize();
        Some(p)
    }

    /// Exact division; panics when not exact (use after a gcd).
    pub fn exact_div(&self, d: &MultiPoly) -> MultiPoly {
        self.try_exact_div(d)
            .expect("exact_div: division was not exact")
    }

    pub fn divides(&self, other: &MultiPoly) -> bool {
        other.try_exact_div(self).is_some()
    }

    /// A single-term polynomial as (monomial, coefficient), if it is one.
    fn as_single_term(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Componentwise minimum of all exponent vectors over `vars`.
    fn min_exponents(&self, vars: &[Symbol]) -> Vec<u32> {
        vars.iter()
            .map(|&v| match self.vars.iter().position(|&w| w == v) {
                None => 0,
                Some(i) => self.terms.keys().map(|m| m.0[i]).min().unwrap_or(0),
            })
            .collect()
    }

    // ---- gcd ----

    /// Polynomial gcd, returned integer-primitive with positive graded-lex
    /// leading coefficient. Primitive pseudo-remainder sequence, recursing
    /// on the coefficient ring for multivariate inputs; the rational content
    /// is stripped every step to keep coefficients small.
    pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        if a.is_zero() {
            return b.primitive_part();
        }
        if b.is_zero() {
            return a.primitive_part();
        }
        if a.is_constant() || b.is_constant() {
            return MultiPoly::one();
        }
        // single-term fast path: gcd with c*X^e is X^min(e, min-exps)
        if a.as_single_term().is_some() || b.as_single_term().is_some() {
            let (mono, other) = if a.as_single_term().is_some() {
                (a, b)
            } else {
                (b, a)
            };
            let vars = mono.vars.clone();
            let e_mono = mono.min_exponents(&vars);
            let e_other = other.min_exponents(&vars);
            let exps: Vec<u32> = e_mono
                .iter()
                .zip(e_other.iter())
                .map(|(x, y)| *x.min(y))
                .collect();
            return MultiPoly::from_terms(vars, [(exps, Rational::one())]);
        }
        // common monomial factor comes out first; it keeps the PRS small
        // and handles the frequent z^a*(...) denominators cheaply
        let shared: Vec<Symbol> = a
            .vars
            .iter()
            .copied()
            .filter(|v| b.vars.contains(v))
            .collect();
        if shared.is_empty() {
            return MultiPoly::one();
        }
        let ea = a.min_exponents(&shared);
        let eb = b.min_exponents(&shared);
        let common: Vec<u32> = ea.iter().zip(eb.iter()).map(|(x, y)| *x.min(y)).collect();
        if common.iter().any(|&e| e > 0) {
            let mono = MultiPoly::from_terms(shared.clone(), [(common.clone(), Rational::one())]);
            let ma = MultiPoly::from_terms(shared.clone(), [(ea, Rational::one())]);
            let mb = MultiPoly::from_terms(shared.clone(), [(eb, Rational::one())]);
            let a1 = a.exact_div(&ma);
            let b1 = b.exact_div(&mb);
            return mono.mul(&MultiPoly::gcd(&a1, &b1)).primitive_part();
        }
        // factor each input into pieces with pairwise disjoint variable
        // supports; the gcd then factorizes over pairs, and pairs with
        // disjoint supports are coprime. This turns the frequent separable
        // denominators f(z1)*g(z2)*(z1-z2)^k into univariate problems.
        let fa = a.disjoint_factors();
        let fb = b.disjoint_factors();
        if fa.len() > 1 || fb.len() > 1 {
            let mut acc = MultiPoly::one();
            for ai in &fa {
                for bj in &fb {
                    if ai.vars.iter().any(|v| bj.vars.contains(v)) {
                        acc = acc.mul(&MultiPoly::gcd(ai, bj));
                    }
                }
            }
            return acc.primitive_part();
        }
        let x = *shared.last().unwrap();

        // content-free parts with respect to x
        let (ca, pa) = content_wrt(a, x);
        let (cb, pb) = content_wrt(b, x);
        let cont = MultiPoly::gcd(&ca, &cb);

        // evaluation filter: map every variable except x to a small integer
        // point that preserves both leading x-coefficients. If the univariate
        // images are coprime the primitive parts are coprime (the image of
        // the gcd divides the gcd of the images, with its x-degree intact).
        if pa.vars.len() > 1 || pb.vars.len() > 1 {
            if let Some(true) = images_coprime(&pa, &pb, x) {
                return cont;
            }
        }

        let (mut r0, mut r1) = if pa.degree_in(x) >= pb.degree_in(x) {
            (pa, pb)
        } else {
            (pb, pa)
        };
        let mut guard = 0u32;
        loop {
            guard += 1;
            assert!(
                guard < 10_000,
                "gcd PRS failed to terminate on {a:?} and {b:?}"
            );
            let delta = r0.degree_in(x) - r1.degree_in(x);
            let rem = pseudo_rem(&r0, &r1, x, delta);
            if rem.is_zero() {
                break;
            }
            if rem.degree_in(x) == 0 {
                // gcd is free of x
                return cont;
            }
            let (_, prim) = content_wrt(&rem, x);
            r0 = r1;
            r1 = prim;
        }
        let (_, prim) = content_wrt(&r1, x);
        cont.mul(&prim).primitive_part()
    }

    // ---- Univariate rational roots ----

    /// All rational roots with multiplicities, plus the deflated remainder
    /// (integer-primitive). Rational-root theorem on the integer-cleared
    /// polynomial; the remainder has no rational roots. Panics unless
    /// `self` is univariate in `v` (or constant).
    pub fn rational_roots(&self, v: Symbol) -> (Vec<(Rational, usize)>, MultiPoly) {
        assert!(
            self.vars.is_empty() || self.vars == [v],
            "rational_roots requires a univariate polynomial"
        );
        let mut roots: Vec<(Rational, usize)> = Vec::new();
        if self.is_constant() {
            return (roots, self.primitive_part());
        }
        let mut p = self.primitive_part();
        // root at zero
        let zero_mult = p
            .terms
            .keys()
            .map(|m| m.0.first().copied().unwrap_or(0))
            .min()
            .unwrap_or(0) as usize;
        if zero_mult > 0 {
            let shift = MultiPoly::var(v).pow(zero_mult as u32);
            p = p.exact_div(&shift);
            roots.push((Rational::zero(), zero_mult));
        }
        // candidates p/q: p | trailing, q | leading
        loop {
            if p.is_constant() {
                break;
            }
            let uni = p.as_univar_in(v);
            let trailing = uni.values().next().unwrap().as_constant().unwrap();
            let leading = uni.values().next_back().unwrap().as_constant().unwrap();
            let mut found = None;
            'search: for dn in divisors(trailing.numer()) {
                for dd in divisors(leading.numer()) {
                    for sign in [1i64, -1] {
                        let cand = Rational::new(&dn * BigInt::from(sign), dd.clone());
                        if p.eval_var(v, &cand).is_zero() {
                            found = Some(cand);
                            break 'search;
                        }
                    }
                }
            }
            match found {
                None => break,
                Some(r) => {
                    let lin = MultiPoly::var(v).sub(&MultiPoly::constant(r.clone()));
                    let mut mult = 0usize;
                    while let Some(q) = p.try_exact_div(&lin) {
                        p = q;
                        mult += 1;
                    }
                    roots.push((r, mult));
                }
            }
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        (roots, p.primitive_part())
    }
}

impl MultiPoly {
    /// Factor into polynomials with pairwise disjoint variable supports by
    /// pulling out contents one variable at a time. Returns `[self]` when no
    /// such split exists.
    pub fn disjoint_factors(&self) -> Vec<MultiPoly> {
        if self.vars.len() <= 1 {
            return vec![self.clone()];
        }
        for &v in &self.vars {
            let (cont, prim) = content_wrt(self, v);
            if !cont.is_constant() {
                let mut out = cont.disjoint_factors();
                out.extend(prim.disjoint_factors());
                return out;
            }
        }
        vec![self.clone()]
    }
}

/// Exact splitting p = cont * prim with `prim` x-primitive and
/// integer-primitive (content is the recursive gcd of the coefficient
/// polynomials times the rational content).
fn content_wrt(p: &MultiPoly, x: Symbol) -> (MultiPoly, MultiPoly) {
    if p.vars == [x] || p.is_constant() {
        // univariate: content is the rational content
        let (c, prim) = p.primitive_and_content();
        return (MultiPoly::constant(c), prim);
    }
    let uni = p.as_univar_in(x);
    let mut cont = MultiPoly::zero();
    for c in uni.values() {
        cont = MultiPoly::gcd(&cont, c);
        if cont.is_one() {
            break;
        }
    }
    if cont.is_one() {
        let (c, prim) = p.primitive_and_content();
        return (MultiPoly::constant(c), prim);
    }
    let (c, prim) = p.exact_div(&cont).primitive_and_content();
    (cont.scale(&c), prim)
}

/// Try to certify gcd(a, b) has x-degree zero by evaluating the other
/// variables at a common point. `Some(true)` is a sound certificate;
/// `None`/`Some(false)` mean the test was inconclusive.
fn images_coprime(a: &MultiPoly, b: &MultiPoly, x: Symbol) -> Option<bool> {
    let mut others: Vec<Symbol> = a.vars.iter().chain(b.vars.iter()).copied().collect();
    others.sort();
    others.dedup();
    others.retain(|&v| v != x);
    if others.is_empty() {
        return None;
    }
    'points: for base in [2i64, 3, 5, 7, 11] {
        let mut ia = a.clone();
        let mut ib = b.clone();
        for (k, &v) in others.iter().enumerate() {
            // staggered points avoid accidental symmetry between variables
            let val = rat(base + k as i64, 1);
            ia = ia.eval_var(v, &val);
            ib = ib.eval_var(v, &val);
        }
        if ia.degree_in(x) != a.degree_in(x) || ib.degree_in(x) != b.degree_in(x) {
            continue 'points;
        }
        let g = MultiPoly::gcd(&ia, &ib);
        if g.is_constant() {
            return Some(true);
        }
        return Some(false);
    }
    None
}

/// Pseudo-remainder of `a` by `b` in `x`: lc(b)^(delta+1) * a reduced mod b.
fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, x: Symbol, delta: u32) -> MultiPoly {
    let db = b.degree_in(x);
    let lb = b.leading_coeff_in(x);
    let xv = MultiPoly::var(x);
    let mut r = a.clone();
    let mut steps = 0u32;
    while !r.is_zero() && r.degree_in(x) >= db {
        let dr = r.degree_in(x);
        let lr = r.leading_coeff_in(x);
        r = r.mul(&lb).sub(&lr.mul(b).mul(&xv.pow(dr - db)));
        steps += 1;
    }
    // top up to exactly delta+1 factors of lc(b)
    for _ in steps..=delta {
        r = r.mul(&lb);
    }
    r
}

/// Positive divisors of a big integer, by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

impl fmt::Display for MultiPoly {
    /// Canonical text: terms in descending graded-lex order, "p/q"
    /// coefficients, `*` between factors, `^` for exponents.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.total_degree() == 0 {
                factors.push(render_rational(&mag));
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[i].name().to_owned()),
                    _ => factors.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    fn z() -> Symbol {
        Symbol::new("z")
    }
    fn w() -> Symbol {
        Symbol::new("w")
    }

    fn zp() -> MultiPoly {
        MultiPoly::var(z())
    }
    fn wp() -> MultiPoly {
        MultiPoly::var(w())
    }

    // ---- canonical form ----

    #[test]
    fn unused_variables_are_pruned() {
        let p = zp().mul(&wp()).sub(&zp().mul(&wp())).add(&zp());
        assert_eq!(p.vars(), &[z()]);
        assert_eq!(p, zp());
    }

    #[test]
    fn graded_lex_display_order() {
        // z^2*w + w^3 + z: degrees 3,3,1; lex puts w^3 after z^2*w? graded-lex
        // with vars sorted (w < z): z^2*w has exps (1,2), w^3 has (3,0);
        // same degree, (3,0) > (1,2) lexicographically.
        let p = zp().pow(2).mul(&wp()).add(&wp().pow(3)).add(&zp());
        assert_eq!(p.to_string(), "w^3 + w*z^2 + z");
    }

    #[test]
    fn display_constants_and_signs() {
        let p = zp().pow(2).scale(&rat(-1, 2)).add(&MultiPoly::constant(int(3)));
        assert_eq!(p.to_string(), "-1/2*z^2 + 3");
        assert_eq!(MultiPoly::zero().to_string(), "0");
    }

    // ---- arithmetic ----

    #[test]
    fn distributivity_samples() {
        let f = zp().add(&wp());
        let g = zp().sub(&MultiPoly::one());
        let h = wp().pow(2).add(&zp());
        let lhs = f.add(&g).mul(&h);
        let rhs = f.mul(&h).add(&g.mul(&h));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn subst_shift() {
        // (z+1)^2 = z^2 + 2z + 1
        let p = zp().pow(2);
        let shifted = p.subst(z(), &zp().add(&MultiPoly::one()));
        assert_eq!(
            shifted,
            zp().pow(2).add(&zp().scale(&int(2))).add(&MultiPoly::one())
        );
    }

    // ---- division and gcd ----

    #[test]
    fn exact_division_detects_failure() {
        let p = zp().pow(2).sub(&MultiPoly::one());
        let d = zp().sub(&MultiPoly::one());
        assert_eq!(p.try_exact_div(&d).unwrap(), zp().add(&MultiPoly::one()));
        assert!(p.try_exact_div(&zp()).is_none());
    }

    #[test]
    fn gcd_univariate() {
        // gcd(z^2 - 1, z^2 - 2z + 1) = z - 1
        let a = zp().pow(2).sub(&MultiPoly::one());
        let b = zp().sub(&MultiPoly::one()).pow(2);
        assert_eq!(MultiPoly::gcd(&a, &b), zp().sub(&MultiPoly::one()));
    }

    #[test]
    fn gcd_bivariate() {
        // gcd((z-w)^2 * z, (z-w) * w) = z - w
        let d = zp().sub(&wp());
        let a = d.pow(2).mul(&zp());
        let b = d.mul(&wp());
        let g = MultiPoly::gcd(&a, &b);
        // canonical associate: graded-lex leading over vars [w, z] is the
        // w-monomial, so the positive-leading representative is w - z
        assert_eq!(g, wp().sub(&zp()));
    }

    #[test]
    fn gcd_coprime_is_one() {
        let a = zp().pow(3).add(&MultiPoly::one());
        let b = wp().add(&MultiPoly::one());
        assert_eq!(MultiPoly::gcd(&a, &b), MultiPoly::one());
    }

    // ---- roots ----

    #[test]
    fn rational_roots_with_multiplicity() {
        // z^2 (z-1)^2 (2z+3)
        let p = zp()
            .pow(2)
            .mul(&zp().sub(&MultiPoly::one()).pow(2))
            .mul(&zp().scale(&int(2)).add(&MultiPoly::constant(int(3))));
        let (roots, rest) = p.rational_roots(z());
        assert_eq!(
            roots,
            vec![
                (rat(-3, 2), 1),
                (int(0), 2),
                (int(1), 2),
            ]
        );
        assert!(rest.is_constant());
    }

    #[test]
    fn irrational_roots_left_over() {
        // (z^2 - 2)(z - 3)
        let p = zp()
            .pow(2)
            .sub(&MultiPoly::constant(int(2)))
            .mul(&zp().sub(&MultiPoly::constant(int(3))));
        let (roots, rest) = p.rational_roots(z());
        assert_eq!(roots, vec![(int(3), 1)]);
        assert_eq!(rest, zp().pow(2).sub(&MultiPoly::constant(int(2))));
    }
}
