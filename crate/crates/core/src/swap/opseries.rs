//! The operator-series route to the swapped correlators.
//!
//! Everything is assembled inside a truncated polynomial ring in hbar and
//! u_1..u_n over rational functions of z_1..z_n. Per white vertex the
//! exponential factor realizes hbar u S(hbar u d/dx) W_1 - y u as the finite
//! sum of even x-derivatives of the one-point correlators (the (0,1) part
//! cancels against -yu); per black vertex the same S-expansion acts on the
//! higher correlators. Extracting [u_i^m] hands each variable the operator
//! power (-d/dy_i)^m applied to -x'(y_i) times the rest, and the coefficient
//! of the right hbar power is the swapped correlator.
//!
//! The u-truncation is checked for stability by recomputing with the cap
//! raised by two; a disagreement retries once with a larger cap.

use super::SwapContext;
use crate::algebra::{s_coefficient, RatFunc, Rational, Symbol};
use crate::graphs::enumerate_plain;
use crate::{Error, Result};
use smallvec::SmallVec;
use std::collections::BTreeMap;

type Monomial = (u32, SmallVec<[u16; 4]>);

/// Truncated polynomial in (hbar, u_1..u_n) with rational-function
/// coefficients.
#[derive(Clone, Debug)]
struct HUPoly {
    n: usize,
    hbar_cap: u32,
    u_cap: u16,
    terms: BTreeMap<Monomial, RatFunc>,
}

impl HUPoly {
    fn zero(n: usize, hbar_cap: u32, u_cap: u16) -> HUPoly {
        HUPoly {
            n,
            hbar_cap,
            u_cap,
            terms: BTreeMap::new(),
        }
    }

    fn one(n: usize, hbar_cap: u32, u_cap: u16) -> HUPoly {
        let mut p = HUPoly::zero(n, hbar_cap, u_cap);
        p.insert(0, &vec![0u16; n], RatFunc::one());
        p
    }

    fn insert(&mut self, hbar: u32, us: &[u16], f: RatFunc) {
        if f.is_zero() || hbar > self.hbar_cap || us.iter().any(|&u| u > self.u_cap) {
            return;
        }
        let key = (hbar, SmallVec::from_slice(us));
        match self.terms.remove(&key) {
            None => {
                self.terms.insert(key, f);
            }
            Some(prev) => {
                let sum = prev.add(&f);
                if !sum.is_zero() {
                    self.terms.insert(key, sum);
                }
            }
        }
    }

    fn mul(&self, other: &HUPoly) -> HUPoly {
        let mut out = HUPoly::zero(self.n, self.hbar_cap.min(other.hbar_cap), self.u_cap);
        for ((ha, ua), ca) in &self.terms {
            for ((hb, ub), cb) in &other.terms {
                let h = ha + hb;
                if h > out.hbar_cap {
                    continue;
                }
                let us: SmallVec<[u16; 4]> =
                    ua.iter().zip(ub.iter()).map(|(a, b)| a + b).collect();
                if us.iter().any(|&u| u > out.u_cap) {
                    continue;
                }
                out.insert(h, &us, ca.mul(cb));
            }
        }
        out
    }

    /// exp of a polynomial with no constant term and hbar-valuation >= 1.
    fn exp(&self) -> HUPoly {
        assert!(
            self.terms.keys().all(|(h, _)| *h >= 1),
            "exponential needs positive hbar valuation"
        );
        let mut acc = HUPoly::one(self.n, self.hbar_cap, self.u_cap);
        let mut power = HUPoly::one(self.n, self.hbar_cap, self.u_cap);
        let mut factorial = Rational::from_integer(1.into());
        for j in 1..=(self.hbar_cap as u64) {
            power = power.mul(self);
            if power.terms.is_empty() {
                break;
            }
            factorial *= Rational::from_integer(j.into());
            let inv = factorial.recip();
            for (key, c) in &power.terms {
                acc.insert(key.0, &key.1, c.scale(&inv));
            }
        }
        acc
    }
}

impl SwapContext {
    /// The exponent of the white-vertex factor at variable `i`:
    /// sum over (k, g') != (0, 0) of
    ///   s_k hbar^(2k+2g') u_i^(2k+1) (d/dx)^(2k) W_{g',1}(x(z_i)).
    fn white_exponent(&mut self, i: usize, n: usize, hbar_cap: u32, u_cap: u16) -> Result<HUPoly> {
        let mut out = HUPoly::zero(n, hbar_cap, u_cap);
        for k in 0u32.. {
            if 2 * k > hbar_cap || 2 * k + 1 > u_cap as u32 {
                break;
            }
            for gp in 0u32..=(hbar_cap - 2 * k) / 2 {
                if (k, gp) == (0, 0) {
                    continue;
                }
                let f = self
                    .derived_correlator(gp, &[(i, 2 * k)])?
                    .scale(&s_coefficient(k as u64));
                let mut us = vec![0u16; n];
                us[i - 1] = (2 * k + 1) as u16;
                out.insert(2 * k + 2 * gp, &us, f);
            }
        }
        Ok(out)
    }

    /// The black-vertex factor for the label multiset `labels`:
    /// the S-expansions acting on the full genus expansion of W_{|I|},
    /// with the regularized kernel on the equal-label two-point diagonal.
    fn black_factor(
        &mut self,
        labels: &[usize],
        n: usize,
        hbar_cap: u32,
        u_cap: u16,
    ) -> Result<HUPoly> {
        let k = labels.len();
        assert!(k >= 2);
        let mut out = HUPoly::zero(n, hbar_cap, u_cap);
        let base_h = k as u32 - 2;
        let mut orders = vec![0u32; k];
        loop {
            // hbar power carried by the S-factors: sum (2 orders_j + 1)
            let s_h: u32 = orders.iter().map(|&o| 2 * o + 1).sum();
            for gp in 0u32.. {
                let h = 2 * gp + base_h + s_h;
                if h > hbar_cap {
                    break;
                }
                let slots: Vec<(usize, u32)> = labels
                    .iter()
                    .zip(orders.iter())
                    .map(|(&l, &o)| (l, 2 * o))
                    .collect();
                let mut f = self.derived_correlator(gp, &slots)?;
                for &o in &orders {
                    f = f.scale(&s_coefficient(o as u64));
                }
                let mut us = vec![0u16; n];
                for (&l, &o) in labels.iter().zip(orders.iter()) {
                    us[l - 1] += (2 * o + 1) as u16;
                }
                out.insert(h, &us, f);
            }
            // advance the order vector within the hbar budget
            let mut j = 0;
            loop {
                if j == k {
                    return Ok(out);
                }
                orders[j] += 1;
                let s_h: u32 = orders.iter().map(|&o| 2 * o + 1).sum();
                if base_h + s_h <= hbar_cap {
                    break;
                }
                orders[j] = 0;
                j += 1;
            }
        }
    }

    /// Assemble one plain graph's product and extract the swapped-correlator
    /// contribution at the given hbar order.
    fn operator_graph_term(
        &mut self,
        blacks: &[Vec<usize>],
        n: usize,
        hbar_target: u32,
        u_cap: u16,
    ) -> Result<RatFunc> {
        let mut q = HUPoly::one(n, hbar_target, u_cap);
        for i in 1..=n {
            let e = self.white_exponent(i, n, hbar_target, u_cap)?;
            q = q.mul(&e.exp());
        }
        for labels in blacks {
            let c = self.black_factor(labels, n, hbar_target, u_cap)?;
            q = q.mul(&c);
        }
        let mut prefactor = RatFunc::one();
        for i in 1..=n {
            prefactor = prefactor.mul(&self.xprime_of_y(i).neg());
        }
        let mut total = RatFunc::zero();
        for ((h, us), coeff) in &q.terms {
            if *h != hbar_target || us.iter().any(|&u| u == 0) {
                continue;
            }
            let mut term = prefactor.mul(coeff);
            for i in 1..=n {
                term = self.neg_dy_pow(&term, i, us[i - 1] as u32 - 1);
            }
            total = total.add(&term);
        }
        Ok(total)
    }

    fn operator_series_pass(&mut self, g: u32, n: u32, u_cap: u16) -> Result<RatFunc> {
        let hbar_target = 2 * g + 2 * n - 2;
        let graphs = enumerate_plain(n as usize, 2 * g as i64 - 2 + n as i64);
        let mut total = RatFunc::zero();
        for graph in graphs {
            let term =
                self.operator_graph_term(&graph.blacks, n as usize, hbar_target, u_cap)?;
            let aut = Rational::from_integer(graph.automorphism_count().into());
            total = total.add(&term.scale(&aut.recip()));
        }
        Ok(total)
    }

    /// Independent evaluation of the swapped correlator through the operator
    /// series. `(0,1)` returns x(z_1), realizing the convention that lets
    /// the operator sum start one power lower.
    pub fn swap_via_operator_series(&mut self, g: u32, n: u32) -> Result<RatFunc> {
        if (g, n) == (0, 1) {
            return Ok(self.table().x_at(Symbol::z(1)));
        }
        if 2 * g + n < 3 {
            return Err(Error::ContractViolation(
                "the operator series applies for 2g + n - 2 > 0".into(),
            ));
        }
        for attempt in 0..2u16 {
            let n_u = (6 * g as u16 + 3 * n as u16) + 4 * attempt;
            let first = self.operator_series_pass(g, n, n_u + 1)?;
            let second = self.operator_series_pass(g, n, n_u + 3)?;
            if first == second {
                return Ok(first);
            }
        }
        Err(Error::SeriesInstability)
    }

    /// The one-point exponential form: every black vertex is generated by
    /// exp(sum_i Phi_hat_i(x,...,x; hbar, u)/i! - y u), and the genus-g part
    /// is the [hbar^(2g-1)] coefficient.
    pub fn swap_n1_exponential(&mut self, g: u32) -> Result<RatFunc> {
        assert!(g >= 1, "the exponential form is used for positive genus");
        let hbar_target = 2 * g;
        for attempt in 0..2u16 {
            let u_cap = (6 * g as u16 + 4) + 4 * attempt;
            let mut run = |cap: u16| -> Result<RatFunc> {
                let mut exponent = self.white_exponent(1, 1, hbar_target, cap)?;
                let mut i_factorial = Rational::from_integer(1.into());
                for i in 2.. {
                    if 2 * (i as u32) - 2 > hbar_target {
                        break;
                    }
                    i_factorial *= Rational::from_integer(i.into());
                    let labels = vec![1usize; i as usize];
                    let phi = self.black_factor(&labels, 1, hbar_target, cap)?;
                    let inv = i_factorial.recip();
                    for (key, c) in &phi.terms {
                        exponent.insert(key.0, &key.1, c.scale(&inv));
                    }
                }
                let q = exponent.exp();
                let prefactor = self.xprime_of_y(1).neg();
                let mut total = RatFunc::zero();
                for ((h, us), coeff) in &q.terms {
                    if *h != hbar_target || us[0] == 0 {
                        continue;
                    }
                    let term = self.neg_dy_pow(&prefactor.mul(coeff), 1, us[0] as u32 - 1);
                    total = total.add(&term);
                }
                Ok(total)
            };
            let first = run(u_cap)?;
            let second = run(u_cap + 2)?;
            if first == second {
                return Ok(first);
            }
        }
        Err(Error::SeriesInstability)
    }
}

#[cfg(test)]
mod tests {
    use super::super::SwapContext;
    use crate::algebra::{rat, RatFunc, Symbol};
    use crate::curve::catalog;
    use crate::recursion::CorrelatorTable;

    fn ctx(name: &str) -> SwapContext {
        SwapContext::new(CorrelatorTable::new(catalog(name).unwrap()))
    }

    #[test]
    fn zero_one_convention_returns_x() {
        let mut c = ctx("airy");
        let w = c.swap_via_operator_series(0, 1).unwrap();
        assert_eq!(w, RatFunc::var(Symbol::z(1)).pow(2));
    }

    #[test]
    fn airy_operator_series_vanishes() {
        let mut c = ctx("airy");
        for (g, n) in [(1u32, 1u32), (0, 3)] {
            let w = c.swap_via_operator_series(g, n).unwrap();
            assert!(w.is_zero(), "({g},{n}) gave {w}");
        }
    }

    #[test]
    fn reverse_airy_operator_series() {
        let table = CorrelatorTable::new(catalog("airy").unwrap().swap_roles());
        let mut c = SwapContext::new(table);
        let w = c.swap_via_operator_series(2, 1).unwrap();
        assert_eq!(
            w,
            RatFunc::var(Symbol::z(1)).pow(11).recip().scale(&rat(-105, 2048))
        );
    }

    #[test]
    fn airy_exponential_form_vanishes() {
        let mut c = ctx("airy");
        for g in [1u32, 2] {
            let w = c.swap_n1_exponential(g).unwrap();
            assert!(w.is_zero(), "genus {g} gave {w}");
        }
    }

    #[test]
    fn operator_series_matches_graph_form_on_airy() {
        let mut c = ctx("airy");
        for (g, n) in [(1u32, 1u32), (1, 2), (2, 1)] {
            let via_ops = c.swap_via_operator_series(g, n).unwrap();
            let (via_graphs, _) = c.swap_correlator(g, n).unwrap();
            assert_eq!(via_ops, via_graphs, "({g},{n})");
        }
    }
}
