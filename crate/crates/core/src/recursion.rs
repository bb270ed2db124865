//! The correlator engine: residue recursion on the z-plane.
//!
//! Correlators are stored in the function normalization W_{g,n}, related to
//! the recursion's differentials by w_{g,n} = W_{g,n} * prod_i x'(z_i).
//! Conventions: W_{0,1}(x(z)) = y(z) and
//! W_{0,2}(x(z1), x(z2)) = 1/((z1-z2)^2 x'(z1) x'(z2)).
//!
//! Everything is evaluated in the uniformizing variable; "functions of x"
//! never require inverting x. Residues are Laurent coefficients at the
//! ramification points of x, extracted from truncated local expansions with
//! explicit validity bookkeeping and an adaptive retry when the window
//! proves too small.

use crate::algebra::{
    eval_ratfunc_at, rat, Laurent, RatFunc, Rational, Symbol,
};
use crate::curve::{Branch, RamificationPoint, SpectralCurve};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// The Bergman kernel with the differentials stripped: 1/(z1 - z2)^2.
pub fn bergman(z1: Symbol, z2: Symbol) -> RatFunc {
    RatFunc::var(z1).sub(&RatFunc::var(z2)).pow(2).recip()
}

/// Cache of computed correlators for one curve.
#[derive(Clone)]
pub struct CorrelatorTable {
    curve: SpectralCurve,
    entries: BTreeMap<(u32, u32), RatFunc>,
}

impl CorrelatorTable {
    pub fn new(curve: SpectralCurve) -> CorrelatorTable {
        CorrelatorTable {
            curve,
            entries: BTreeMap::new(),
        }
    }

    pub fn curve(&self) -> &SpectralCurve {
        &self.curve
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(u32, u32), &RatFunc)> {
        self.entries.iter()
    }

    pub fn cached(&self, g: u32, n: u32) -> Option<&RatFunc> {
        self.entries.get(&(g, n))
    }

    /// Insert a precomputed entry (used by the persistent cache loader).
    pub fn insert(&mut self, g: u32, n: u32, w: RatFunc) {
        self.entries.insert((g, n), w);
    }

    /// x'(z) renamed to the given variable.
    pub fn xprime(&self, v: Symbol) -> RatFunc {
        self.curve
            .x
            .derivative(self.curve.var())
            .rename(&[(self.curve.var(), v)])
    }

    /// y'(z) renamed to the given variable.
    pub fn yprime(&self, v: Symbol) -> RatFunc {
        self.curve
            .y
            .derivative(self.curve.var())
            .rename(&[(self.curve.var(), v)])
    }

    pub fn x_at(&self, v: Symbol) -> RatFunc {
        self.curve.x.rename(&[(self.curve.var(), v)])
    }

    pub fn y_at(&self, v: Symbol) -> RatFunc {
        self.curve.y.rename(&[(self.curve.var(), v)])
    }

    /// The correlator W_{g,n} as a rational function of z1..zn.
    /// Recursive entries are computed on demand and memoized.
    pub fn correlator(&mut self, g: u32, n: u32) -> Result<RatFunc> {
        if n == 0 {
            return Err(Error::ContractViolation(
                "correlators need at least one point".into(),
            ));
        }
        if let Some(w) = self.entries.get(&(g, n)) {
            return Ok(w.clone());
        }
        let w = match (g, n) {
            (0, 1) => self.y_at(Symbol::z(1)),
            (0, 2) => {
                let z1 = Symbol::z(1);
                let z2 = Symbol::z(2);
                bergman(z1, z2)
                    .div(&self.xprime(z1))
                    .div(&self.xprime(z2))
            }
            _ => self.compute_recursive(g, n)?,
        };
        self.entries.insert((g, n), w.clone());
        Ok(w)
    }

    /// W_{g,k} with its k slots renamed to `vars`.
    fn correlator_renamed(&mut self, g: u32, k: u32, vars: &[Symbol]) -> Result<RatFunc> {
        assert_eq!(vars.len(), k as usize);
        let base = self.correlator(g, k)?;
        let renames: Vec<(Symbol, Symbol)> = (1..=k as usize)
            .map(|i| (Symbol::z(i), vars[i - 1]))
            .collect();
        Ok(base.rename(&renames))
    }

    fn compute_recursive(&mut self, g: u32, n: u32) -> Result<RatFunc> {
        assert!(2 * g + n >= 3, "recursive entry needs 2g + n - 2 > 0");
        // make sure every lower entry exists before the residue loop
        for gp in 0..=g {
            for np in 1..=(n + 1) {
                if 2 * gp + np < 2 * g + n && (gp, np) != (0, 1) {
                    self.correlator(gp, np)?;
                }
            }
        }
        let mut t_order: i64 = 6 * g as i64 + 2 * n as i64 + 4;
        for _attempt in 0..3 {
            match self.residue_pass(g, n, t_order) {
                Ok(w) => {
                    self.assert_symmetric(&w, n);
                    return Ok(w);
                }
                Err(Error::TruncationShortfall { .. }) => {
                    t_order += 4;
                }
                Err(e) => return Err(e),
            }
        }
        Err(Error::TruncationShortfall {
            achievable: t_order - 4,
            requested: -1,
        })
    }

    fn residue_pass(&mut self, g: u32, n: u32, t_order: i64) -> Result<RatFunc> {
        let spectators: Vec<Symbol> = (1..n as usize).map(Symbol::z).collect();
        let new_var = Symbol::z(n as usize);
        let points = self
            .curve
            .ramification_points(Branch::X, t_order)?;
        let slot_q = Symbol::slot(1);
        let slot_s = Symbol::slot(2);
        let mut total = RatFunc::zero();
        for point in &points {
            let res = self.residue_at(
                g,
                n,
                point,
                &spectators,
                new_var,
                slot_q,
                slot_s,
                t_order,
            )?;
            total = total.add(&res);
        }
        // the x'(z_i) prefactors of the lower correlators cancel against the
        // final normalization for every spectator slot; only the new
        // variable's factor remains
        Ok(total.div(&self.xprime(new_var)))
    }

    #[allow(clippy::too_many_arguments)]
    fn residue_at(
        &mut self,
        g: u32,
        n: u32,
        point: &RamificationPoint,
        spectators: &[Symbol],
        new_var: Symbol,
        slot_q: Symbol,
        slot_s: Symbol,
        t_order: i64,
    ) -> Result<RatFunc> {
        let alpha = point.location.clone();
        let t = point.involution.var();
        let q = Laurent::local_point(t, alpha.clone()).truncated(t_order);
        let sigma = if point.involution.truncation() >= t_order {
            point.involution.truncated(t_order)
        } else {
            self.curve.local_involution(point, t_order)?
        };

        // Kernel slice with the x'(q) factor dropped: it cancels against the
        // x'(q) carried by the bracket's correlator differentials, just as
        // the spectator x'(z_i) factors cancel against the final
        // normalization. What remains per point is
        //   (1/2) (1/(z - q) - 1/(z - sigma)) / (y(q) - y(sigma))
        //     * sigma'(q) * x'(sigma) * [sum of W-products].
        let pole = RatFunc::var(new_var)
            .sub(&RatFunc::var(slot_q))
            .recip();
        let inv_q = eval_ratfunc_at(&pole, &[(slot_q, &q)]);
        let inv_s = eval_ratfunc_at(&pole, &[(slot_q, &sigma)]);
        let y_rf = self.curve.y.rename(&[(self.curve.var(), slot_q)]);
        let y_q = eval_ratfunc_at(&y_rf, &[(slot_q, &q)]);
        let y_s = eval_ratfunc_at(&y_rf, &[(slot_q, &sigma)]);
        let kernel = inv_q
            .sub(&inv_s)
            .scale(&RatFunc::constant(rat(1, 2)))
            .div(&y_q.sub(&y_s));

        let xp_rf = self
            .curve
            .x
            .derivative(self.curve.var())
            .rename(&[(self.curve.var(), slot_q)]);
        let xp_s = eval_ratfunc_at(&xp_rf, &[(slot_q, &sigma)]);

        // bracketed combination of lower correlators, in W-normalization
        let mut bracket = Laurent::zero(t, alpha.clone(), t_order);
        if g >= 1 {
            let mut vars: Vec<Symbol> = spectators.to_vec();
            vars.push(slot_q);
            vars.push(slot_s);
            let w = self.correlator_renamed(g - 1, n + 1, &vars)?;
            bracket = bracket.add(&eval_ratfunc_at(
                &w,
                &[(slot_q, &q), (slot_s, &sigma)],
            ));
        }
        let m = spectators.len();
        for g1 in 0..=g {
            let g2 = g - g1;
            for mask in 0u32..(1 << m) {
                let s1: Vec<Symbol> = (0..m)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| spectators[i])
                    .collect();
                let s2: Vec<Symbol> = (0..m)
                    .filter(|i| mask & (1 << i) == 0)
                    .map(|i| spectators[i])
                    .collect();
                if (g1 == 0 && s1.is_empty()) || (g2 == 0 && s2.is_empty()) {
                    continue;
                }
                let mut v1 = s1.clone();
                v1.push(slot_q);
                let mut v2 = s2.clone();
                v2.push(slot_s);
                let w1 = self.correlator_renamed(g1, s1.len() as u32 + 1, &v1)?;
                let w2 = self.correlator_renamed(g2, s2.len() as u32 + 1, &v2)?;
                let t1 = eval_ratfunc_at(&w1, &[(slot_q, &q)]);
                let t2 = eval_ratfunc_at(&w2, &[(slot_s, &sigma)]);
                bracket = bracket.add(&t1.mul(&t2));
            }
        }
        let sigma_factor = sigma.derivative().mul(&xp_s);
        // only the residue coefficient of kernel * bracket * sigma-factor is
        // needed; extract it without materializing the full product
        kernel.mul_coeff(&bracket.mul(&sigma_factor), -1)
    }

    fn assert_symmetric(&self, w: &RatFunc, n: u32) {
        for i in 1..n as usize {
            // adjacent transposition (i, i+1); the transpositions generate
            // the full symmetric group
            let tmp = Symbol::new("swap_tmp");
            let swapped = w
                .rename(&[(Symbol::z(i), tmp)])
                .rename(&[(Symbol::z(i + 1), Symbol::z(i))])
                .rename(&[(tmp, Symbol::z(i + 1))]);
            assert_eq!(
                &swapped, w,
                "computed correlator is not symmetric; recursion is inconsistent"
            );
        }
    }

    /// The regularized diagonal of the two-point correlator:
    /// lim_{z'->z} [ W_{0,2}(x(z), x(z')) - 1/((x(z)-x(z'))^2) ],
    /// as a rational function of the given variable.
    pub fn regularized_diagonal_w02(&mut self, at: Symbol) -> Result<RatFunc> {
        let z1 = Symbol::slot(7);
        let z2 = Symbol::slot(8);
        let w02 = self.correlator(0, 2)?;
        let w02 = w02.rename(&[(Symbol::z(1), z1), (Symbol::z(2), z2)]);
        let x1 = self.x_at(z1);
        let x2 = self.x_at(z2);
        let hat = w02.sub(&x1.sub(&x2).pow(2).recip());
        diagonal_limit(&hat, z1, z2, at)
    }

    /// W-table of the role-swapped curve.
    pub fn swapped(&self) -> Result<CorrelatorTable> {
        // swapping twice returns the original curve; validation of the new
        // x-branch happens lazily when correlators are requested
        Ok(CorrelatorTable::new(self.curve.swap_roles()))
    }

    // ---- engine self-checks used by tests and the verification suite ----

    /// Assert that the denominator of W factors into (z_i - alpha) powers
    /// over x-ramification locations only (for 2g + n - 2 > 0).
    pub fn check_pole_locus(&mut self, g: u32, n: u32) -> Result<()> {
        let w = self.correlator(g, n)?;
        let points = self.curve.ramification_points(Branch::X, 2)?;
        let mut den = w.den().clone();
        for i in 1..=n as usize {
            for p in &points {
                let lin = crate::algebra::MultiPoly::var(Symbol::z(i))
                    .sub(&crate::algebra::MultiPoly::constant(p.location.clone()));
                while let Some(q) = den.try_exact_div(&lin) {
                    den = q;
                }
            }
        }
        if den.is_constant() {
            Ok(())
        } else {
            Err(Error::ContractViolation(format!(
                "pole locus check failed: residual denominator factor {den}"
            )))
        }
    }

    /// Assert the decay of the differential w_{g,n} at infinity in each
    /// variable: numerator degree at most denominator degree minus 2.
    pub fn check_decay(&mut self, g: u32, n: u32) -> Result<()> {
        let vars: Vec<Symbol> = (1..=n as usize).map(Symbol::z).collect();
        let mut w = self.correlator(g, n)?;
        for &v in &vars {
            w = w.mul(&self.xprime(v));
        }
        for &v in &vars {
            let dn = w.num().degree_in(v) as i64;
            let dd = w.den().degree_in(v) as i64;
            if dn > dd - 2 {
                return Err(Error::ContractViolation(format!(
                    "decay check failed in {v}: num degree {dn}, den degree {dd}"
                )));
            }
        }
        Ok(())
    }

    /// Pole order of the differential at each ramification point is at most
    /// 6g - 4 + 2n.
    pub fn check_pole_order(&mut self, g: u32, n: u32) -> Result<()> {
        let bound = 6 * g as i64 - 4 + 2 * n as i64;
        let vars: Vec<Symbol> = (1..=n as usize).map(Symbol::z).collect();
        let mut w = self.correlator(g, n)?;
        for &v in &vars {
            w = w.mul(&self.xprime(v));
        }
        let points = self.curve.ramification_points(Branch::X, 2)?;
        for &v in &vars {
            for p in &points {
                let lin = crate::algebra::MultiPoly::var(v)
                    .sub(&crate::algebra::MultiPoly::constant(p.location.clone()));
                let mut den = w.den().clone();
                let mut ord = 0i64;
                while let Some(q) = den.try_exact_div(&lin) {
                    den = q;
                    ord += 1;
                }
                if ord > bound {
                    return Err(Error::ContractViolation(format!(
                        "pole order {ord} at {} in {v} exceeds bound {bound}",
                        p.location
                    )));
                }
            }
        }
        Ok(())
    }

    /// Recompute a recursive entry with the series window raised by 4 and
    /// assert the identical rational function comes out.
    pub fn check_truncation_stability(&mut self, g: u32, n: u32) -> Result<()> {
        let w = self.correlator(g, n)?;
        if 2 * g + n < 3 {
            return Ok(());
        }
        let t_order = 6 * g as i64 + 2 * n as i64 + 8;
        let again = self.residue_pass(g, n, t_order)?;
        if again == w {
            Ok(())
        } else {
            Err(Error::ContractViolation(format!(
                "raising the series window changed W_{{{g},{n}}}"
            )))
        }
    }
}

/// Limit of f(z1, z2) as z2 -> z1, by expanding in z2 = z1 + eps and taking
/// the constant coefficient; errors if the function has a pole on the
/// diagonal. The result is expressed in the variable `at`.
pub fn diagonal_limit(f: &RatFunc, z1: Symbol, z2: Symbol, at: Symbol) -> Result<RatFunc> {
    let eps = Symbol::new("eps");
    assert!(z1 != eps && z2 != eps && !f.uses_var(eps));
    let shifted = f.subst(z2, &RatFunc::var(z1).add(&RatFunc::var(eps)));
    let series = Laurent::expand(&shifted, eps, &Rational::from_integer(0.into()), 0);
    if let Some(v) = series.valuation() {
        if v < 0 {
            return Err(Error::ContractViolation(format!(
                "diagonal limit does not exist: leading order {v}"
            )));
        }
    }
    Ok(series.coeff(0).rename(&[(z1, at)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;
    use crate::curve::catalog;

    fn airy_table() -> CorrelatorTable {
        CorrelatorTable::new(catalog("airy").unwrap())
    }

    fn z(i: usize) -> RatFunc {
        RatFunc::var(Symbol::z(i))
    }

    // ---- conventions ----

    #[test]
    fn convention_entries() {
        let mut t = airy_table();
        assert_eq!(t.correlator(0, 1).unwrap(), z(1));
        let w02 = t.correlator(0, 2).unwrap();
        let expected = z(1)
            .mul(&z(2))
            .mul(&z(1).sub(&z(2)).pow(2))
            .scale(&int(4))
            .recip();
        assert_eq!(w02, expected);
    }

    #[test]
    fn bergman_kernel_shape() {
        let b = bergman(Symbol::z(1), Symbol::z(2));
        assert_eq!(b, z(1).sub(&z(2)).pow(2).recip());
        // symmetric under swap
        let swapped = b.rename(&[(Symbol::z(1), Symbol::new("tmp_b"))])
            .rename(&[(Symbol::z(2), Symbol::z(1))])
            .rename(&[(Symbol::new("tmp_b"), Symbol::z(2))]);
        assert_eq!(b, swapped);
        // double pole on the diagonal
        let s = Laurent::expand(
            &b.subst(Symbol::z(2), &z(1).add(&RatFunc::var(Symbol::new("eps")))),
            Symbol::new("eps"),
            &int(0),
            0,
        );
        assert_eq!(s.valuation(), Some(-2));
    }

    // ---- the Airy tower ----

    #[test]
    fn airy_w03() {
        let mut t = airy_table();
        let w = t.correlator(0, 3).unwrap();
        let expected = z(1)
            .pow(3)
            .mul(&z(2).pow(3))
            .mul(&z(3).pow(3))
            .scale(&int(16))
            .recip()
            .neg();
        assert_eq!(w, expected);
    }

    #[test]
    fn airy_w11() {
        let mut t = airy_table();
        let w = t.correlator(1, 1).unwrap();
        assert_eq!(w, z(1).pow(5).scale(&int(32)).recip().neg());
    }

    #[test]
    fn airy_w12() {
        let mut t = airy_table();
        let w = t.correlator(1, 2).unwrap();
        // (5 z1^4 + 3 z1^2 z2^2 + 5 z2^4) / (128 z1^7 z2^7)
        let num = z(1)
            .pow(4)
            .scale(&int(5))
            .add(&z(1).pow(2).mul(&z(2).pow(2)).scale(&int(3)))
            .add(&z(2).pow(4).scale(&int(5)));
        let den = z(1).pow(7).mul(&z(2).pow(7)).scale(&int(128));
        assert_eq!(w, num.div(&den));
    }

    #[test]
    fn airy_w21() {
        let mut t = airy_table();
        let w = t.correlator(2, 1).unwrap();
        assert_eq!(w, z(1).pow(11).recip().scale(&crate::algebra::rat(-105, 2048)));
        assert_eq!(w.to_string(), "(-105/2048)/(z1^11)");
    }

    #[test]
    fn airy_regularized_diagonal() {
        let mut t = airy_table();
        let d = t.regularized_diagonal_w02(Symbol::z(1)).unwrap();
        assert_eq!(d, z(1).pow(4).scale(&int(16)).recip());
    }

    #[test]
    fn unramified_x_gives_zero() {
        // swapped Airy: x = z is unramified, every stable correlator vanishes
        let mut t = airy_table().swapped().unwrap();
        for (g, n) in [(0, 3), (1, 1), (1, 2), (2, 1)] {
            assert!(t.correlator(g, n).unwrap().is_zero(), "({g},{n})");
        }
    }

    #[test]
    fn regularized_diagonal_is_zero_for_unramified_x() {
        let mut t = airy_table().swapped().unwrap();
        let d = t.regularized_diagonal_w02(Symbol::z(1)).unwrap();
        assert!(d.is_zero());
    }

    // ---- engine self-checks on Airy ----

    #[test]
    fn airy_invariants() {
        let mut t = airy_table();
        for (g, n) in [(0u32, 3u32), (1, 1), (1, 2), (2, 1)] {
            t.check_pole_locus(g, n).unwrap();
            t.check_decay(g, n).unwrap();
            t.check_pole_order(g, n).unwrap();
            t.check_truncation_stability(g, n).unwrap();
        }
    }

    #[test]
    fn two_sided_swapped_curve_computes_with_newton_involutions() {
        // x = z^3/3 - z ramifies at +-1 with no global involution
        let mut t = CorrelatorTable::new(catalog("two-sided").unwrap())
            .swapped()
            .unwrap();
        for (g, n) in [(0u32, 3u32), (1, 1)] {
            let w = t.correlator(g, n).unwrap();
            assert!(!w.is_zero());
            t.check_pole_locus(g, n).unwrap();
            t.check_decay(g, n).unwrap();
            t.check_truncation_stability(g, n).unwrap();
        }
    }

    #[test]
    fn swapping_twice_restores_the_curve() {
        let t = airy_table();
        let back = t.swapped().unwrap().swapped().unwrap();
        assert_eq!(back.curve().x, t.curve().x);
        assert_eq!(back.curve().y, t.curve().y);
    }
}
