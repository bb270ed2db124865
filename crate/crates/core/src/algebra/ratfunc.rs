//! Rational functions num/den over the rationals, kept in canonical form.
//!
//! Invariants after construction:
//!   1. gcd(num, den) = 1 (polynomial gcd and content both removed),
//!   2. den is integer-primitive with positive graded-lex leading coefficient,
//!   3. den is nonzero; zero is 0/1.
//!
//! Equality of canonical forms is structural equality, which is what the
//! verification suite asserts on.

use super::poly::MultiPoly;
use super::rational::Rational;
use super::symbol::Symbol;
use num::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> RatFunc {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc {
                num: MultiPoly::zero(),
                den: MultiPoly::one(),
            };
        }
        let t0 = std::time::Instant::now();
        let g = MultiPoly::gcd(&num, &den);
        if std::env::var("TRX_GCD_DEBUG").is_ok() && t0.elapsed().as_millis() > 40 {
            eprintln!(
                "slow gcd {:?}: num {} terms deg {} vars {:?}, den {} terms deg {} | num={} | den={}",
                t0.elapsed(),
                num.num_terms(),
                num.total_degree(),
                num.vars(),
                den.num_terms(),
                den.total_degree(),
                num,
                den
            );
        }
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        let (c, den) = den.primitive_and_content();
        let num = num.scale(&c.recip());
        RatFunc { num, den }
    }

    /// Construct from parts already known to be coprime; only the canonical
    /// denominator scaling is applied.
    fn from_reduced(num: MultiPoly, den: MultiPoly) -> RatFunc {
        if num.is_zero() {
            return RatFunc {
                num,
                den: MultiPoly::one(),
            };
        }
        let (c, den) = den.primitive_and_content();
        RatFunc {
            num: num.scale(&c.recip()),
            den,
        }
    }

    pub fn from_poly(p: MultiPoly) -> RatFunc {
        RatFunc {
            num: p,
            den: MultiPoly::one(),
        }
    }

    pub fn constant(c: Rational) -> RatFunc {
        RatFunc::from_poly(MultiPoly::constant(c))
    }

    pub fn zero() -> RatFunc {
        RatFunc::constant(Rational::zero())
    }

    pub fn one() -> RatFunc {
        RatFunc::constant(Rational::one())
    }

    pub fn var(v: Symbol) -> RatFunc {
        RatFunc::from_poly(MultiPoly::var(v))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn as_poly(&self) -> Option<&MultiPoly> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    /// Sorted union of numerator and denominator variables.
    pub fn variables(&self) -> Vec<Symbol> {
        let mut vars: Vec<Symbol> = self.num.vars().to_vec();
        for &v in self.den.vars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        vars.sort();
        vars
    }

    pub fn uses_var(&self, v: Symbol) -> bool {
        self.num.vars().contains(&v) || self.den.vars().contains(&v)
    }

    // ---- Arithmetic ----

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc {
                num: self.num.add(&other.num),
                den: MultiPoly::one(),
            };
        }
        if self.den == other.den {
            return RatFunc::new(self.num.add(&other.num), self.den.clone());
        }
        // a/b + c/d with g = gcd(b, d): (a*(d/g) + c*(b/g)) / (b*(d/g))
        let g = MultiPoly::gcd(&self.den, &other.den);
        let db = self.den.exact_div(&g);
        let dd = other.den.exact_div(&g);
        let num = self.num.mul(&dd).add(&other.num.mul(&db));
        let den = self.den.mul(&dd);
        RatFunc::new(num, den)
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        // cross-cancel; afterwards every pairing of numerator and denominator
        // parts is coprime, so the product is already reduced
        let g1 = MultiPoly::gcd(&self.num, &other.den);
        let g2 = MultiPoly::gcd(&other.num, &self.den);
        let n1 = self.num.exact_div(&g1);
        let d2 = other.den.exact_div(&g1);
        let n2 = other.num.exact_div(&g2);
        let d1 = self.den.exact_div(&g2);
        RatFunc::from_reduced(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn div(&self, other: &RatFunc) -> RatFunc {
        self.mul(&other.recip())
    }

    pub fn recip(&self) -> RatFunc {
        assert!(!self.is_zero(), "reciprocal of zero rational function");
        RatFunc::from_reduced(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: i64) -> RatFunc {
        match e {
            0 => RatFunc::one(),
            e if e > 0 => {
                let mut acc = RatFunc::one();
                let mut base = self.clone();
                let mut e = e as u64;
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
            e => self.recip().pow(-e),
        }
    }

    // ---- Calculus ----

    /// Exact quotient-rule derivative with respect to `v`.
    pub fn derivative(&self, v: Symbol) -> RatFunc {
        if !self.uses_var(v) {
            return RatFunc::zero();
        }
        let np = self.num.derivative(v);
        let dp = self.den.derivative(v);
        let num = np.mul(&self.den).sub(&self.num.mul(&dp));
        let den = self.den.mul(&self.den);
        RatFunc::new(num, den)
    }

    // ---- Substitution ----

    /// Substitute rational functions for variables; missing variables remain
    /// symbolic. Diagonal substitutions (two variables mapped to the same
    /// target) are allowed when the result stays finite; a vanishing
    /// denominator panics.
    pub fn eval_map(&self, map: &BTreeMap<Symbol, RatFunc>) -> RatFunc {
        let n = poly_eval_map(&self.num, map);
        let d = poly_eval_map(&self.den, map);
        assert!(
            !d.is_zero(),
            "substitution sent the denominator to zero (pole hit)"
        );
        n.div(&d)
    }

    /// Substitute a single variable.
    pub fn subst(&self, v: Symbol, value: &RatFunc) -> RatFunc {
        let mut map = BTreeMap::new();
        map.insert(v, value.clone());
        self.eval_map(&map)
    }

    /// Rename a set of variables (targets must be fresh, pairwise distinct).
    pub fn rename(&self, renames: &[(Symbol, Symbol)]) -> RatFunc {
        let mut map = BTreeMap::new();
        for &(from, to) in renames {
            map.insert(from, RatFunc::var(to));
        }
        self.eval_map(&map)
    }

    /// Evaluate at a rational point in one variable; panics on a pole.
    pub fn eval_var(&self, v: Symbol, value: &Rational) -> RatFunc {
        let n = self.num.eval_var(v, value);
        let d = self.den.eval_var(v, value);
        assert!(!d.is_zero(), "evaluation at a pole");
        RatFunc::new(n, d)
    }
}

/// Evaluate a polynomial with rational-function values for (some of) its
/// variables.
pub fn poly_eval_map(p: &MultiPoly, map: &BTreeMap<Symbol, RatFunc>) -> RatFunc {
    let assigned: Vec<(usize, &RatFunc)> = p
        .vars()
        .iter()
        .enumerate()
        .filter_map(|(i, v)| map.get(v).map(|rf| (i, rf)))
        .collect();
    if assigned.is_empty() {
        return RatFunc::from_poly(p.clone());
    }
    // cache powers of each assigned value
    let mut powers: BTreeMap<usize, Vec<RatFunc>> = BTreeMap::new();
    for &(i, rf) in &assigned {
        let maxdeg = p.terms().map(|(m, _)| m.0[i]).max().unwrap_or(0);
        let mut pows = Vec::with_capacity(maxdeg as usize + 1);
        pows.push(RatFunc::one());
        for k in 1..=maxdeg {
            let next = pows[(k - 1) as usize].mul(rf);
            pows.push(next);
        }
        powers.insert(i, pows);
    }
    let keep: Vec<usize> = (0..p.vars().len())
        .filter(|i| !powers.contains_key(i))
        .collect();
    let kept_vars: Vec<Symbol> = keep.iter().map(|&i| p.vars()[i]).collect();
    let mut acc = RatFunc::zero();
    for (m, c) in p.terms() {
        let kept_exps: Vec<u32> = keep.iter().map(|&i| m.0[i]).collect();
        let base = MultiPoly::from_terms(kept_vars.clone(), [(kept_exps, c.clone())]);
        let mut term = RatFunc::from_poly(base);
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

impl fmt::Display for RatFunc {
    /// Canonical text: `NUM` when the denominator is 1, else `(NUM)/(DEN)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn z() -> Symbol {
        Symbol::new("z")
    }
    fn z1() -> Symbol {
        Symbol::new("z1")
    }
    fn z2() -> Symbol {
        Symbol::new("z2")
    }
    fn rf_var(v: Symbol) -> RatFunc {
        RatFunc::var(v)
    }

    // ---- normalization ----

    #[test]
    fn auto_reduction() {
        // (z^2 - 1)/(z - 1) = z + 1
        let num = MultiPoly::var(z()).pow(2).sub(&MultiPoly::one());
        let den = MultiPoly::var(z()).sub(&MultiPoly::one());
        let f = RatFunc::new(num, den);
        assert_eq!(f, rf_var(z()).add(&RatFunc::one()));
        assert!(f.den().is_one());
    }

    #[test]
    fn denominator_scaling_is_canonical() {
        // 1/(2z) has primitive denominator z and numerator 1/2
        let f = RatFunc::one().div(&rf_var(z()).scale(&int(2)));
        assert_eq!(f.den(), &MultiPoly::var(z()));
        assert_eq!(f.num().as_constant().unwrap(), rat(1, 2));
        // negative leading denominator flips into the numerator
        let g = RatFunc::one().div(&rf_var(z()).scale(&int(-2)));
        assert_eq!(g.den(), &MultiPoly::var(z()));
        assert_eq!(g.num().as_constant().unwrap(), rat(-1, 2));
    }

    #[test]
    fn display_matches_canonical_convention() {
        let f = RatFunc::constant(rat(-105, 2048)).div(&rf_var(z1()).pow(11));
        assert_eq!(f.to_string(), "(-105/2048)/(z1^11)");
    }

    // ---- arithmetic ----

    #[test]
    fn field_identities() {
        let f = rf_var(z1()).add(&RatFunc::one()).div(&rf_var(z2()));
        let g = rf_var(z2()).sub(&rf_var(z1())).recip();
        assert_eq!(f.sub(&f), RatFunc::zero());
        assert_eq!(f.div(&f), RatFunc::one());
        assert_eq!(f.mul(&g).div(&g), f);
        assert_eq!(f.add(&g).sub(&g), f);
    }

    // ---- derivative examples ----

    #[test]
    fn derivative_of_square() {
        let f = rf_var(z()).pow(2);
        assert_eq!(f.derivative(z()), rf_var(z()).scale(&int(2)));
    }

    #[test]
    fn derivative_of_inverse() {
        let f = rf_var(z()).recip();
        assert_eq!(f.derivative(z()), rf_var(z()).pow(2).recip().neg());
    }

    #[test]
    fn derivative_of_bergman_like_kernel() {
        // d/dz1 of 1/(4 z1 z2 (z1-z2)^2) = -(3z1 - z2)/(4 z1^2 z2 (z1-z2)^3)
        let diff = rf_var(z1()).sub(&rf_var(z2()));
        let f = rf_var(z1())
            .mul(&rf_var(z2()))
            .mul(&diff.pow(2))
            .scale(&int(4))
            .recip();
        let expected = RatFunc::new(
            MultiPoly::var(z1())
                .scale(&int(3))
                .sub(&MultiPoly::var(z2()))
                .neg(),
            MultiPoly::var(z1())
                .pow(2)
                .mul(&MultiPoly::var(z2()))
                .mul(&diff.num().pow(3))
                .scale(&int(4)),
        );
        assert_eq!(f.derivative(z1()), expected);
    }

    // ---- substitution ----

    #[test]
    fn rename_and_diagonal_merge() {
        let f = rf_var(z1()).mul(&rf_var(z2()));
        assert_eq!(f.rename(&[(z1(), z()), (z2(), z())]), rf_var(z()).pow(2));
    }

    #[test]
    #[should_panic(expected = "pole")]
    fn diagonal_substitution_into_pole_panics() {
        let f = rf_var(z1()).sub(&rf_var(z2())).recip();
        let _ = f.rename(&[(z2(), z1())]);
    }
}
