//! Semi-factored fractions: a polynomial numerator over a product of
//! polynomial factors kept in factored form.
//!
//! These are the working coefficients of Laurent series. Series arithmetic
//! performs thousands of small additions and multiplications whose operands
//! share a handful of denominator factors (powers of (z - alpha), of x'(z)
//! numerators, and of divided differences). Keeping the denominator factored
//! makes both operations gcd-free: multiplication merges exponent maps, and
//! addition takes the factor-wise maximum as the common denominator. The
//! single full reduction happens when a coefficient is converted back to a
//! canonical rational function.

use super::poly::MultiPoly;
use super::rational::Rational;
use super::ratfunc::RatFunc;
use num::Zero;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct SemiFrac {
    num: MultiPoly,
    /// canonical primitive positive-leading factor -> exponent
    den: BTreeMap<MultiPoly, u32>,
}

impl SemiFrac {
    pub fn zero() -> SemiFrac {
        SemiFrac {
            num: MultiPoly::zero(),
            den: BTreeMap::new(),
        }
    }

    pub fn from_poly(p: MultiPoly) -> SemiFrac {
        SemiFrac {
            num: p,
            den: BTreeMap::new(),
        }
    }

    pub fn from_rational(c: Rational) -> SemiFrac {
        SemiFrac::from_poly(MultiPoly::constant(c))
    }

    pub fn from_ratfunc(f: &RatFunc) -> SemiFrac {
        let mut out = SemiFrac::from_poly(f.num().clone());
        if !f.den().is_one() && !out.is_zero() {
            out.push_factor(f.den(), 1);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize_zero(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
        }
    }

    /// Insert a factor, canonicalizing it to primitive positive-leading and
    /// folding its rational content into the numerator. The factor is
    /// refined into variable-disjoint pieces and, for univariate pieces,
    /// split off its rational roots; finer factors make common denominators
    /// tighter and final trial division nearly complete.
    fn push_factor(&mut self, factor: &MultiPoly, exp: u32) {
        if exp == 0 {
            return;
        }
        let (content, prim) = factor.primitive_and_content();
        let mut scale = Rational::from_integer(1.into());
        for _ in 0..exp {
            scale *= &content;
        }
        self.num = self.num.scale(&scale.recip());
        for piece in prim.disjoint_factors() {
            if piece.is_constant() {
                let c = piece.as_constant().unwrap();
                let mut s = Rational::from_integer(1.into());
                for _ in 0..exp {
                    s *= &c;
                }
                self.num = self.num.scale(&s.recip());
                continue;
            }
            if piece.vars().len() == 1 {
                let v = piece.vars()[0];
                let (roots, rest) = piece.rational_roots(v);
                let mut rebuild = rest.clone();
                for (r, mult) in &roots {
                    let lin = MultiPoly::var(v).sub(&MultiPoly::constant(r.clone()));
                    rebuild = rebuild.mul(&lin.pow(*mult as u32));
                    *self.den.entry(lin).or_insert(0) += exp * *mult as u32;
                }
                if !rest.is_constant() {
                    *self.den.entry(rest).or_insert(0) += exp;
                }
                // exact rational mismatch between the piece and its rebuilt
                // factorization folds into the numerator
                let lambda = piece
                    .exact_div(&rebuild)
                    .as_constant()
                    .expect("factor rebuild differs by a constant");
                let mut s = Rational::from_integer(1.into());
                for _ in 0..exp {
                    s *= &lambda;
                }
                self.num = self.num.scale(&s.recip());
            } else {
                *self.den.entry(piece).or_insert(0) += exp;
            }
        }
    }

    pub fn neg(&self) -> SemiFrac {
        SemiFrac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale_rat(&self, c: &Rational) -> SemiFrac {
        if c.is_zero() {
            return SemiFrac::zero();
        }
        SemiFrac {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &SemiFrac) -> SemiFrac {
        if self.is_zero() || other.is_zero() {
            return SemiFrac::zero();
        }
        let mut den = self.den.clone();
        for (f, e) in &other.den {
            *den.entry(f.clone()).or_insert(0) += e;
        }
        SemiFrac {
            num: self.num.mul(&other.num),
            den,
        }
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> SemiFrac {
        if p.is_zero() {
            return SemiFrac::zero();
        }
        SemiFrac {
            num: self.num.mul(p),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &SemiFrac) -> SemiFrac {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        // common denominator: factor-wise maximum exponent
        let mut den: BTreeMap<MultiPoly, u32> = self.den.clone();
        for (f, e) in &other.den {
            let slot = den.entry(f.clone()).or_insert(0);
            *slot = (*slot).max(*e);
        }
        let mut n1 = self.num.clone();
        let mut n2 = other.num.clone();
        for (f, e) in &den {
            let e1 = self.den.get(f).copied().unwrap_or(0);
            let e2 = other.den.get(f).copied().unwrap_or(0);
            if *e > e1 {
                n1 = n1.mul(&f.pow(e - e1));
            }
            if *e > e2 {
                n2 = n2.mul(&f.pow(e - e2));
            }
        }
        let mut out = SemiFrac {
            num: n1.add(&n2),
            den,
        };
        out.normalize_zero();
        out
    }

    pub fn sub(&self, other: &SemiFrac) -> SemiFrac {
        self.add(&other.neg())
    }

    /// Multiplicative inverse; the numerator becomes the single denominator
    /// factor and the factored denominator is multiplied out.
    pub fn invert(&self) -> SemiFrac {
        assert!(!self.is_zero(), "inverting a zero fraction");
        let mut num = MultiPoly::one();
        for (f, e) in &self.den {
            num = num.mul(&f.pow(*e));
        }
        let mut out = SemiFrac {
            num,
            den: BTreeMap::new(),
        };
        out.push_factor(&self.num, 1);
        out
    }

    /// One-time full reduction to a canonical rational function. Factors are
    /// first cancelled by trial division, then a final gcd catches partial
    /// cancellations.
    pub fn to_ratfunc(&self) -> RatFunc {
        if self.is_zero() {
            return RatFunc::zero();
        }
        let mut num = self.num.clone();
        let mut den = MultiPoly::one();
        for (f, e) in &self.den {
            let mut left = *e;
            while left > 0 {
                match num.try_exact_div(f) {
                    Some(q) => {
                        num = q;
                        left -= 1;
                    }
                    None => break,
                }
            }
            if left > 0 {
                den = den.mul(&f.pow(left));
            }
        }
        RatFunc::new(num, den)
    }
}
