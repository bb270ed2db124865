//! Spectral curves (x(z), y(z)) on the Riemann sphere, their ramification
//! data, and the local Galois involutions at simple ramification points.
//!
//! Both coordinate functions are rational in one uniformizing variable z.
//! Ramification points of a branch are the rational zeros of its derivative's
//! numerator; zeros that are not rational, not simple, or that collide with
//! the other branch's ramification are rejected loudly rather than
//! approximated.

use crate::algebra::{
    eval_ratfunc_at, int, local_param_symbol, Laurent, RatFunc, Rational, Symbol,
};
use crate::{Error, Result};

/// Which coordinate function ramifies.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Branch {
    X,
    Y,
}

/// How the local involution is realized.
#[derive(Clone, Debug)]
pub enum InvolutionMode {
    /// A global rational involution of the curve (e.g. z -> -z or z -> c/z)
    /// that fixes this ramification point; its series is exact to any order.
    ExactGlobal(RatFunc),
    /// Newton iteration on (f(s) - f(q))/(s - q) = 0 in the local parameter.
    NewtonLocal,
}

/// A validated simple ramification point with its local involution.
#[derive(Clone, Debug)]
pub struct RamificationPoint {
    pub location: Rational,
    pub branch: Branch,
    pub mode: InvolutionMode,
    /// sigma(location + t) as a series in t: location - t + c2 t^2 + ...
    pub involution: Laurent,
}

#[derive(Clone, Debug)]
pub struct SpectralCurve {
    pub x: RatFunc,
    pub y: RatFunc,
    pub name: Option<String>,
    var: Symbol,
}

impl SpectralCurve {
    /// Build and validate a curve. Both functions must be univariate in the
    /// same variable and nonconstant.
    pub fn new(x: RatFunc, y: RatFunc, name: Option<String>) -> Result<SpectralCurve> {
        let mut vars = x.variables();
        for v in y.variables() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        if vars.len() != 1 {
            return Err(Error::InvalidCurve(format!(
                "expected exactly one variable, found {vars:?}"
            )));
        }
        let var = vars[0];
        if var == local_param_symbol() {
            return Err(Error::InvalidCurve(
                "the variable t is reserved for local expansions".into(),
            ));
        }
        if x.as_constant().is_some() || y.as_constant().is_some() {
            return Err(Error::InvalidCurve("x and y must be nonconstant".into()));
        }
        if x.derivative(var).is_zero() || y.derivative(var).is_zero() {
            return Err(Error::InvalidCurve("dx and dy must not vanish identically".into()));
        }
        Ok(SpectralCurve { x, y, name, var })
    }

    pub fn var(&self) -> Symbol {
        self.var
    }

    pub fn branch_fn(&self, branch: Branch) -> &RatFunc {
        match branch {
            Branch::X => &self.x,
            Branch::Y => &self.y,
        }
    }

    pub fn other_fn(&self, branch: Branch) -> &RatFunc {
        match branch {
            Branch::X => &self.y,
            Branch::Y => &self.x,
        }
    }

    /// The curve with the roles of x and y exchanged.
    pub fn swap_roles(&self) -> SpectralCurve {
        SpectralCurve {
            x: self.y.clone(),
            y: self.x.clone(),
            name: self.name.as_ref().map(|n| format!("{n}-swapped")),
            var: self.var,
        }
    }

    /// Canonical identification strings (used in cache keys and reports).
    pub fn canonical_strings(&self) -> (String, String) {
        (self.x.to_string(), self.y.to_string())
    }

    /// All ramification points of the chosen branch, validated simple and
    /// rational, with the other function regular and unramified there.
    /// The returned involutions are computed to `series_order`.
    pub fn ramification_points(
        &self,
        branch: Branch,
        series_order: i64,
    ) -> Result<Vec<RamificationPoint>> {
        let f = self.branch_fn(branch);
        let g = self.other_fn(branch);
        let fp = f.derivative(self.var);
        let (roots, leftover) = fp.num().rational_roots(self.var);
        if !leftover.is_constant() {
            return Err(Error::NonRationalRamification {
                factor: leftover.to_string(),
            });
        }
        let mut points = Vec::new();
        for (alpha, mult) in roots {
            if mult != 1 {
                return Err(Error::UnsupportedRamificationProfile(format!(
                    "zero of the differential at {} has multiplicity {}",
                    alpha, mult
                )));
            }
            // other function regular there...
            if g.den().eval_var(self.var, &alpha).is_zero() {
                return Err(Error::AssumptionViolated(format!(
                    "the other coordinate function has a pole at the ramification point {alpha}"
                )));
            }
            // ...and unramified there (this also enforces distinctness of the
            // two branches' ramification loci)
            let gp = g.derivative(self.var);
            if gp.num().eval_var(self.var, &alpha).is_zero() {
                return Err(Error::AssumptionViolated(format!(
                    "both coordinate functions ramify at {alpha}"
                )));
            }
            let (mode, involution) = self.local_involution_at(f, &alpha, series_order)?;
            points.push(RamificationPoint {
                location: alpha,
                branch,
                mode,
                involution,
            });
        }
        Ok(points)
    }

    /// The involution series at one validated point, to the given order.
    pub fn local_involution(
        &self,
        point: &RamificationPoint,
        order: i64,
    ) -> Result<Laurent> {
        match &point.mode {
            InvolutionMode::ExactGlobal(sigma) => Ok(Laurent::expand(
                sigma,
                self.var,
                &point.location,
                order,
            )),
            InvolutionMode::NewtonLocal => {
                let f = self.branch_fn(point.branch);
                let (_, s) = self.newton_involution(f, &point.location, order)?;
                Ok(s)
            }
        }
    }

    fn local_involution_at(
        &self,
        f: &RatFunc,
        alpha: &Rational,
        order: i64,
    ) -> Result<(InvolutionMode, Laurent)> {
        // global candidates sigma(z) = 2 alpha - z and sigma(z) = alpha^2 / z
        let z = RatFunc::var(self.var);
        let reflect = RatFunc::constant(alpha + alpha).sub(&z);
        let mut candidates = vec![reflect];
        if !alpha.eq(&int(0)) {
            candidates.push(RatFunc::constant(alpha * alpha).div(&z));
        }
        for cand in candidates {
            if f.subst(self.var, &cand) == *f {
                let series = Laurent::expand(&cand, self.var, alpha, order);
                return Ok((InvolutionMode::ExactGlobal(cand), series));
            }
        }
        let (mode, series) = self.newton_involution(f, alpha, order)?;
        Ok((mode, series))
    }

    /// Newton iteration for sigma: solve (f(s) - f(q))/(s - q) = 0 as a
    /// series s(t) with q = alpha + t, starting from s = alpha - t.
    fn newton_involution(
        &self,
        f: &RatFunc,
        alpha: &Rational,
        order: i64,
    ) -> Result<(InvolutionMode, Laurent)> {
        let s_sym = Symbol::new("sigma_slot");
        let q_sym = Symbol::new("q_slot");
        let fs = f.rename(&[(self.var, s_sym)]);
        let fq = f.rename(&[(self.var, q_sym)]);
        // (f(s) - f(q)) has numerator divisible by (s - q)
        let diff = fs.sub(&fq);
        let s_minus_q = RatFunc::var(s_sym).sub(&RatFunc::var(q_sym));
        let quot_num = diff
            .num()
            .try_exact_div(s_minus_q.num())
            .expect("f(s) - f(q) is divisible by s - q");
        let g = RatFunc::new(quot_num, diff.den().clone());
        let g_s = g.derivative(s_sym);

        let t = local_param_symbol();
        let q_series = Laurent::local_point(t, alpha.clone()).truncated(order);
        // initial guess alpha - t, correct to first order
        let mut sigma = Laurent::from_terms(
            t,
            alpha.clone(),
            order,
            [
                (0, RatFunc::constant(alpha.clone())),
                (1, RatFunc::constant(int(-1))),
            ],
        );
        let mut correct: i64 = 1;
        while correct < order {
            let gv = eval_ratfunc_at(&g, &[(s_sym, &sigma), (q_sym, &q_series)]);
            let gpv = eval_ratfunc_at(&g_s, &[(s_sym, &sigma), (q_sym, &q_series)]);
            if gpv.valuation() != Some(0) {
                return Err(Error::AssumptionViolated(format!(
                    "Newton iteration for the involution at {alpha} degenerated; \
                     the ramification point is not simple"
                )));
            }
            let step = gv.div(&gpv);
            sigma = sigma.sub(&step);
            correct = (2 * correct + 1).min(order);
        }
        let sigma = sigma.truncated(order);
        // verify f(sigma(q)) = f(q) through the requested order
        let lhs = eval_ratfunc_at(f, &[(self.var, &sigma)]);
        let rhs = eval_ratfunc_at(f, &[(self.var, &q_series)]);
        let resid = lhs.sub(&rhs);
        if !resid.is_known_zero() {
            return Err(Error::AssumptionViolated(format!(
                "involution verification failed at {alpha}: residual {resid:?}"
            )));
        }
        Ok((InvolutionMode::NewtonLocal, sigma))
    }
}

/// The built-in curve catalog.
pub fn catalog(name: &str) -> Result<SpectralCurve> {
    let z = RatFunc::var(Symbol::new("z"));
    let (x, y, label) = match name.to_ascii_lowercase().as_str() {
        "airy" => (z.pow(2), z.clone(), "airy"),
        "gaussian" | "catalan" => (z.add(&z.recip()), z.clone(), "gaussian"),
        "two-sided" | "two_sided" | "twosided" => (
            z.pow(2),
            z.pow(3).scale(&crate::algebra::rat(1, 3)).sub(&z),
            "two-sided",
        ),
        other => {
            return Err(Error::InvalidCurve(format!(
                "unknown catalog curve '{other}' (available: airy, gaussian, two-sided)"
            )))
        }
    };
    SpectralCurve::new(x, y, Some(label.to_owned()))
}

/// Names and definitions of the catalog entries, for listing.
pub fn catalog_entries() -> Vec<(&'static str, &'static str, &'static str)> {
    vec![
        ("airy", "z^2", "z"),
        ("gaussian", "z + 1/z", "z"),
        ("two-sided", "z^2", "1/3*z^3 - z"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn airy() -> SpectralCurve {
        catalog("airy").unwrap()
    }
    fn gaussian() -> SpectralCurve {
        catalog("gaussian").unwrap()
    }
    fn two_sided() -> SpectralCurve {
        catalog("two-sided").unwrap()
    }

    // ---- ramification loci ----

    #[test]
    fn airy_x_ramifies_at_origin() {
        let pts = airy().ramification_points(Branch::X, 6).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].location, int(0));
    }

    #[test]
    fn gaussian_x_ramifies_at_plus_minus_one() {
        let pts = gaussian().ramification_points(Branch::X, 6).unwrap();
        let locs: Vec<_> = pts.iter().map(|p| p.location.clone()).collect();
        assert_eq!(locs, vec![int(-1), int(1)]);
    }

    #[test]
    fn two_sided_y_ramifies_at_plus_minus_one() {
        let pts = two_sided().ramification_points(Branch::Y, 6).unwrap();
        let locs: Vec<_> = pts.iter().map(|p| p.location.clone()).collect();
        assert_eq!(locs, vec![int(-1), int(1)]);
    }

    #[test]
    fn unramified_branch_has_no_points() {
        let pts = airy().ramification_points(Branch::Y, 6).unwrap();
        assert!(pts.is_empty());
    }

    // ---- error paths ----

    #[test]
    fn non_rational_ramification_is_refused() {
        // x = z^3/3 - 2z ramifies at z^2 = 2
        let z = RatFunc::var(Symbol::new("z"));
        let x = z.pow(3).scale(&rat(1, 3)).sub(&z.scale(&int(2)));
        let curve = SpectralCurve::new(x, z.clone(), None).unwrap();
        match curve.ramification_points(Branch::X, 4) {
            Err(Error::NonRationalRamification { factor }) => {
                assert!(factor.contains("z^2"), "factor was {factor}");
            }
            other => panic!("expected NonRationalRamification, got {other:?}"),
        }
    }

    #[test]
    fn non_simple_ramification_is_refused() {
        // x = z^3 has a double zero of dx at 0
        let z = RatFunc::var(Symbol::new("z"));
        let curve = SpectralCurve::new(z.pow(3), z.clone(), None).unwrap();
        assert!(matches!(
            curve.ramification_points(Branch::X, 4),
            Err(Error::UnsupportedRamificationProfile(_))
        ));
    }

    #[test]
    fn coinciding_branch_ramification_is_refused() {
        // x = z^2 and y = z^2 + z^3 both ramify at 0
        let z = RatFunc::var(Symbol::new("z"));
        let curve = SpectralCurve::new(z.pow(2), z.pow(2).add(&z.pow(3)), None).unwrap();
        assert!(matches!(
            curve.ramification_points(Branch::X, 4),
            Err(Error::AssumptionViolated(_))
        ));
    }

    // ---- involutions ----

    #[test]
    fn airy_involution_is_exact_negation() {
        let pts = airy().ramification_points(Branch::X, 10).unwrap();
        let s = &pts[0].involution;
        assert!(matches!(pts[0].mode, InvolutionMode::ExactGlobal(_)));
        assert_eq!(s.coeff(1), RatFunc::constant(int(-1)));
        for d in 2..=8 {
            assert_eq!(s.coeff(d), RatFunc::zero(), "coefficient at degree {d}");
        }
    }

    #[test]
    fn gaussian_involution_is_global_inversion() {
        // at alpha = 1: sigma(1 + t) = 1/(1+t) = 1 - t + t^2 - t^3 + ...
        let pts = gaussian().ramification_points(Branch::X, 8).unwrap();
        let p = pts.iter().find(|p| p.location == int(1)).unwrap();
        assert!(matches!(p.mode, InvolutionMode::ExactGlobal(_)));
        for d in 0..=8 {
            let expected = if d % 2 == 0 { int(1) } else { int(-1) };
            assert_eq!(p.involution.coeff(d), RatFunc::constant(expected));
        }
    }

    #[test]
    fn two_sided_swapped_needs_newton() {
        // x = z^3/3 - z: sigma at alpha = 1 solves sigma^2 + sigma q + q^2 = 3,
        // giving sigma(1+t) = 1 - t - t^2/3 + ...
        let curve = two_sided().swap_roles();
        let pts = curve.ramification_points(Branch::X, 8).unwrap();
        let p = pts.iter().find(|p| p.location == int(1)).unwrap();
        assert!(matches!(p.mode, InvolutionMode::NewtonLocal));
        assert_eq!(p.involution.coeff(0), RatFunc::one());
        assert_eq!(p.involution.coeff(1), RatFunc::constant(int(-1)));
        assert_eq!(p.involution.coeff(2), RatFunc::constant(rat(-1, 3)));
    }

    #[test]
    fn involutions_are_self_inverse() {
        for curve in [airy(), gaussian(), two_sided().swap_roles()] {
            for p in curve.ramification_points(Branch::X, 9).unwrap() {
                let sigma = &p.involution;
                let twice = sigma.compose(&sigma.sub(&Laurent::constant(
                    sigma.var(),
                    p.location.clone(),
                    RatFunc::constant(p.location.clone()),
                )));
                // sigma(sigma(alpha + t)) = alpha + t through the window
                assert_eq!(twice.coeff(0), RatFunc::constant(p.location.clone()));
                assert_eq!(twice.coeff(1), RatFunc::one());
                for d in 2..=twice.truncation().min(7) {
                    assert_eq!(twice.coeff(d), RatFunc::zero(), "degree {d}");
                }
            }
        }
    }

    #[test]
    fn newton_and_global_modes_agree_for_gaussian() {
        let curve = gaussian();
        let pts = curve.ramification_points(Branch::X, 9).unwrap();
        for p in &pts {
            let f = curve.branch_fn(Branch::X);
            let (_, newton) = curve.newton_involution(f, &p.location, 9).unwrap();
            for d in 0..=9 {
                assert_eq!(newton.coeff(d), p.involution.coeff(d), "degree {d}");
            }
        }
    }
}
