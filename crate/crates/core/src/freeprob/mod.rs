//! Higher-order moment/free-cumulant transforms over truncated series.
//!
//! The cumulant table holds C_{g,n}(Y_1..Y_n); moments M_{g,n}(X_1..X_n)
//! come out of the decorated-graph sum with the substitution
//! Y_i = X_i M_1(X_i), the free weights C_{g,k}(Y)/prod Y, and the primed
//! replacement of two-point kernels by C_{0,2} + Y_i Y_j/(Y_i - Y_j)^2 on
//! distinct variables. The identification with a spectral curve's
//! correlators turns exact z-plane functions into these series by expanding
//! the substitutions at a rational point.

pub mod series;

use crate::algebra::{
    eval_ratfunc_at, int, local_param_symbol, s_coefficient, Laurent, RatFunc, Rational, Symbol,
};
use crate::graphs::enumerate_decorated;
use crate::swap::SwapContext;
use crate::{Error, Result};
use num::One;
pub use series::{FSeries, PoleSeries, UNBOUNDED};
use std::collections::BTreeMap;

/// Which generating family to extract from a curve.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IdentifySide {
    Moments,
    Cumulants,
}

/// A table of cumulant series keyed by (g, n); entry (g, n) is a series in
/// n variables. C_{0,1} must have constant term 1.
#[derive(Clone, Debug, Default)]
pub struct CumulantTable {
    pub entries: BTreeMap<(u32, u32), FSeries>,
}

impl CumulantTable {
    pub fn new() -> CumulantTable {
        CumulantTable {
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, g: u32, n: u32, series: FSeries) {
        assert_eq!(series.nvars(), n as usize);
        self.entries.insert((g, n), series);
    }

    /// Semicircle input: the single cumulant kappa_2 = 1 (exact).
    pub fn semicircle() -> CumulantTable {
        let mut t = CumulantTable::new();
        let mut c01 = FSeries::zero(1, &[UNBOUNDED]);
        c01.insert(&[0], int(1));
        c01.insert(&[2], int(1));
        t.insert(0, 1, c01);
        t
    }

    fn get(&self, g: u32, n: u32, caps: &[i64]) -> FSeries {
        match self.entries.get(&(g, n)) {
            Some(s) => s.clone(),
            // absent entries are zero cumulant data (the (0,1) delta must be
            // supplied explicitly)
            None => FSeries::zero(n as usize, caps),
        }
    }
}

/// Solve C_1(X M(X)) = M(X) for the first-order moment series, order by
/// order; the solution is unique and verified by back-substitution.
pub fn solve_first_order(c01: &FSeries, order: i64) -> Result<FSeries> {
    assert_eq!(c01.nvars(), 1);
    if c01.coeff(&[0]) != Rational::one() {
        return Err(Error::ContractViolation(
            "the first-order cumulant series must have constant term 1".into(),
        ));
    }
    let caps = [order];
    let c = c01.truncated(&caps);
    let mut m = FSeries::constant(1, &caps, int(1));
    for _ in 0..=order {
        let sub = m.shift(&[1]).truncated(&caps);
        m = c.compose(&[sub])?.truncated(&caps);
    }
    // back-substitution to the full truncation order
    let sub = m.shift(&[1]).truncated(&caps);
    let back = c.compose(&[sub])?;
    if !back.agrees_to(&m, order) {
        return Err(Error::ContractViolation(
            "first-order solve failed back-substitution".into(),
        ));
    }
    Ok(m)
}

/// Evaluation context carrying the cumulant table and the substitution data
/// derived from it.
pub struct FreeContext {
    pub cumulants: CumulantTable,
    /// working truncation for intermediate arithmetic
    work: i64,
    /// M_1 to double working order (used by divided differences)
    m01: FSeries,
}

impl FreeContext {
    pub fn new(cumulants: CumulantTable, order: i64) -> Result<FreeContext> {
        let work = 2 * order + 12;
        let c01 = cumulants
            .entries
            .get(&(0, 1))
            .ok_or_else(|| Error::ContractViolation("missing the (0,1) cumulant series".into()))?
            .clone();
        let m01 = solve_first_order(&c01, 2 * work + 2)?;
        Ok(FreeContext {
            cumulants,
            work,
            m01,
        })
    }

    pub fn first_order_moments(&self, order: i64) -> FSeries {
        self.m01.truncated(&[order])
    }

    /// Y(X) = X M_1(X), univariate.
    fn y_of_x(&self) -> FSeries {
        self.m01.shift(&[1])
    }

    /// Embed a univariate series into the n-variable space at position i.
    fn embed(u: &FSeries, n: usize, at: usize, caps: &[i64]) -> FSeries {
        let mut s = FSeries::zero(n, caps);
        for (e, c) in u.terms() {
            let mut ne = vec![0i64; n];
            ne[at] = e[0];
            s.insert(&ne, c.clone());
        }
        s
    }

    fn subs(&self, n: usize) -> Vec<FSeries> {
        let caps = vec![self.work; n];
        let y = self.y_of_x();
        (0..n)
            .map(|i| {
                let mut c = vec![i64::MAX / 4; n];
                c[i] = self.work;
                FreeContext::embed(&y.truncated(&[self.work]), n, i, &c)
            })
            .map(|s| s.truncated(&caps.iter().map(|_| i64::MAX / 4).collect::<Vec<_>>()))
            .collect()
    }

    /// (Y(X_a) - Y(X_b)) / (X_a - X_b) as a bivariate-embedded series in the
    /// n-variable space (unit constant term).
    fn divided_difference(&self, n: usize, a: usize, b: usize) -> FSeries {
        let caps = vec![self.work; n];
        let mut u = FSeries::zero(n, &caps);
        for (e, c) in self.y_of_x().terms() {
            let k = e[0];
            // (X_a^k - X_b^k)/(X_a - X_b) = sum_{p+q=k-1} X_a^p X_b^q
            for p in 0..k {
                let mut ne = vec![0i64; n];
                ne[a] = p;
                ne[b] = k - 1 - p;
                u.insert(&ne, c.clone());
            }
        }
        u
    }

    /// The free weight of a decorated black vertex (g_j, D). Distinct-label
    /// two-point vertices carry the primed pole addition; equal-label ones
    /// use the plain series diagonal.
    fn free_weight(&self, g: u32, d: &[(usize, u32)], n: usize) -> Result<PoleSeries> {
        let k = d.len();
        let caps_n = vec![self.work; n];
        let primed = g == 0 && k == 2 && d[0].0 != d[1].0;
        if primed {
            let (i, hi) = (d[0].0 - 1, d[0].1);
            let (j, hj) = (d[1].0 - 1, d[1].1);
            let c02 = self.cumulants.get(0, 2, &[self.work, self.work]);
            // embed slots directly at their labels, divide by Y_i Y_j
            let mut reg = FSeries::zero(n, &caps_n);
            for (e, c) in c02.terms() {
                let mut ne = vec![0i64; n];
                ne[i] = e[0] - 1;
                ne[j] = e[1] - 1;
                reg.insert(&ne, c.clone());
            }
            let mut w = PoleSeries::regular(reg.truncated(&caps_n));
            // plus [Y_i Y_j / (Y_i - Y_j)^2] / (Y_i Y_j) = 1/(Y_i - Y_j)^2
            let one = FSeries::constant(n, &caps_n, int(1));
            w = w.add(&PoleSeries::with_pole(one, i, j, 2));
            // the S-expansion derivatives act on the primed combination
            for (pos, h) in [(i, hi), (j, hj)] {
                for _ in 0..(2 * h) {
                    w = w.derivative(pos);
                }
                w = w.scale(&s_coefficient(h as u64));
            }
            return Ok(w);
        }
        // regular weight: slot space, divide by the slot variables, apply
        // the derivatives per slot, then merge into the labels
        let caps_k = vec![self.work; k];
        let base = self.cumulants.get(g, k as u32, &caps_k);
        let mut f = base.shift(&vec![-1; k]);
        for (j, &(_, h)) in d.iter().enumerate() {
            for _ in 0..(2 * h) {
                f = f.derivative(j);
            }
            f = f.scale(&s_coefficient(h as u64));
        }
        let map: Vec<usize> = d.iter().map(|&(l, _)| l - 1).collect();
        Ok(PoleSeries::regular(f.merge_vars(n, &map)))
    }

    #[doc(hidden)]
    pub fn debug_graph_term(
        &self,
        graph: &crate::graphs::DecoratedGraph,
        n: u32,
    ) -> Result<PoleSeries> {
        let nv = n as usize;
        let caps_n = vec![self.work; nv];
        let subs = self.subs(nv);
        let mut dd_cache: BTreeMap<(usize, usize), FSeries> = BTreeMap::new();
        for a in 0..nv {
            for b in (a + 1)..nv {
                let u = self.divided_difference(nv, a, b);
                dd_cache.insert((a, b), u.invert()?);
            }
        }
        let dd = |a: usize, b: usize| -> FSeries {
            let key = if a < b { (a, b) } else { (b, a) };
            dd_cache.get(&key).unwrap().clone()
        };
        let dydx = self.y_of_x().derivative(0);
        let prefactors: Vec<FSeries> = (0..nv)
            .map(|i| {
                let mut sh = vec![0i64; nv];
                sh[i] = 2;
                FreeContext::embed(&dydx, nv, i, &caps_n).shift(&sh)
            })
            .collect();
        let mut term = PoleSeries::regular(FSeries::constant(nv, &caps_n, int(1)));
        for (gj, d) in &graph.blacks {
            term = term.mul(&self.free_weight(*gj, d, nv)?);
        }
        term = term.compose(&subs, &dd)?;
        for p in &prefactors {
            term = term.mul_series(p);
        }
        for i in 1..=nv {
            let power = graph.valence(i) as u32 + 2 * graph.edge_genus_sum(i) - 1;
            for _ in 0..power {
                term = term.derivative(i - 1);
                let mut sh = vec![0i64; nv];
                sh[i - 1] = 2;
                term = shift_pole_series(&term, &sh);
            }
        }
        let aut = Rational::from_integer(graph.automorphism_count().into());
        Ok(term.scale(&aut.recip()))
    }

    /// The decorated-graph moment-cumulant sum. For (0, 2) the canonical
    /// double pole is subtracted before returning the regular series.
    pub fn moments_from_cumulants(&self, g: u32, n: u32, order: i64) -> Result<FSeries> {
        assert!(
            2 * g + n >= 2 && n >= 1,
            "moments are defined for n >= 1 with (0,1) handled by the first-order solve"
        );
        if (g, n) == (0, 1) {
            return Ok(self.first_order_moments(order));
        }
        let nv = n as usize;
        let caps_n = vec![self.work; nv];
        let subs = self.subs(nv);
        let mut dd_cache: BTreeMap<(usize, usize), FSeries> = BTreeMap::new();
        for a in 0..nv {
            for b in (a + 1)..nv {
                let u = self.divided_difference(nv, a, b);
                dd_cache.insert((a, b), u.invert()?);
            }
        }
        let dd = |a: usize, b: usize| -> FSeries {
            let key = if a < b { (a, b) } else { (b, a) };
            dd_cache.get(&key).unwrap().clone()
        };

        // X_i^2 dY/dX_i, embedded per variable
        let dydx = {
            let y = self.y_of_x();
            y.derivative(0)
        };
        let prefactors: Vec<FSeries> = (0..nv)
            .map(|i| {
                let mut sh = vec![0i64; nv];
                sh[i] = 2;
                FreeContext::embed(&dydx, nv, i, &caps_n).shift(&sh)
            })
            .collect();

        let mut total = PoleSeries::zero(nv, &caps_n);
        for graph in enumerate_decorated(nv, g) {
            let mut term = PoleSeries::regular(FSeries::constant(nv, &caps_n, int(1)));
            for (gj, d) in &graph.blacks {
                term = term.mul(&self.free_weight(*gj, d, nv)?);
            }
            // substitute Y -> X M(X) once per graph
            term = term.compose(&subs, &dd)?;
            for p in &prefactors {
                term = term.mul_series(p);
            }
            for i in 1..=nv {
                let power = graph.valence(i) as u32 + 2 * graph.edge_genus_sum(i) - 1;
                for _ in 0..power {
                    // X^2 d/dX
                    term = term.derivative(i - 1);
                    let mut sh = vec![0i64; nv];
                    sh[i - 1] = 2;
                    term = PoleSeries::regular(FSeries::zero(nv, &caps_n))
                        .add(&shift_pole_series(&term, &sh));
                }
            }
            let aut = Rational::from_integer(graph.automorphism_count().into());
            total = total.add(&term.scale(&aut.recip()));
        }
        if (g, n) == (0, 2) {
            // M prod X = sum - (X_1 X_2) * X_1 X_2 / (X_1 - X_2)^2
            let mut mono = FSeries::zero(nv, &caps_n);
            mono.insert(&[2, 2], int(1));
            total = total.add(&PoleSeries::with_pole(mono.neg(), 0, 1, 2));
        }
        let regular = total.into_regular(order + 1)?;
        let m = regular.shift(&vec![-1; nv]);
        for (i, &c) in m.caps().iter().enumerate() {
            if c < order {
                return Err(Error::TruncationShortfall {
                    achievable: c,
                    requested: order,
                });
            }
            let _ = i;
        }
        Ok(m.truncated(&vec![order; nv]))
    }
}

fn shift_pole_series(p: &PoleSeries, shifts: &[i64]) -> PoleSeries {
    // multiply every part by the monomial (exact)
    let mut mono = FSeries::zero(shifts.len(), &vec![i64::MAX / 4; shifts.len()]);
    mono.insert(shifts, int(1));
    p.mul_series(&mono)
}

/// The shifted one-point series: M~(X) = X M_1(X) and C~(Y) = C_1(Y)/Y,
/// together with the compositional identity C~(M~(X)) = 1/X checked to the
/// given order.
pub fn shifted_series_identity(c01: &FSeries, m01: &FSeries, order: i64) -> Result<bool> {
    let m_tilde = m01.shift(&[1]);
    let c_tilde = c01.shift(&[-1]);
    let composed = c_tilde.compose(&[m_tilde])?;
    let mut expected = FSeries::zero(1, composed.caps());
    expected.insert(&[-1], int(1));
    Ok(composed.agrees_to(&expected, order))
}

/// The second-order moment-cumulant display, checked as a pole-cleared
/// series identity to the given order.
pub fn second_order_relation_holds(
    c01: &FSeries,
    c02: &FSeries,
    order: i64,
) -> Result<bool> {
    let mut table = CumulantTable::new();
    table.insert(0, 1, c01.clone());
    table.insert(0, 2, c02.clone());
    let ctx = FreeContext::new(table, order)?;
    let work = 2 * order + 6;
    let caps2 = vec![work; 2];
    let m02 = ctx.moments_from_cumulants(0, 2, order)?;

    // left side: M_2 + X_1 X_2/(X_1 - X_2)^2
    let mut x1x2 = FSeries::zero(2, &caps2);
    x1x2.insert(&[1, 1], int(1));
    let lhs = PoleSeries::regular(m02.clone()).add(&PoleSeries::with_pole(x1x2, 0, 1, 2));

    // right side: dlog Y/dlog X per variable times (C_2 + Y_1 Y_2/(Y_1-Y_2)^2)
    let subs = ctx.subs(2);
    let mut dd_cache: BTreeMap<(usize, usize), FSeries> = BTreeMap::new();
    dd_cache.insert((0, 1), ctx.divided_difference(2, 0, 1).invert()?);
    let dd = |a: usize, b: usize| -> FSeries {
        let key = if a < b { (a, b) } else { (b, a) };
        dd_cache.get(&key).unwrap().clone()
    };
    // C_2 composed, plus the pole image (Y_1 Y_2) U^{-2} / (X_1 - X_2)^2
    let c02n = c02.truncated(&caps2);
    let mut y1y2 = FSeries::zero(2, &caps2);
    for (e, c) in ctx.y_of_x().terms() {
        for (e2, c2) in ctx.y_of_x().terms() {
            y1y2.insert(&[e[0], e2[0]], c * c2);
        }
    }
    let rhs_inner = PoleSeries::regular(c02n)
        .compose(&subs, &dd)?
        .add(&PoleSeries::with_pole(
            y1y2.mul(&dd(0, 1)).mul(&dd(0, 1)),
            0,
            1,
            2,
        ));
    // dlog Y_i / dlog X_i = X_i Y'(X_i)/Y(X_i) = (M + X M') / M
    let y = ctx.y_of_x();
    let dlog_uni = y
        .derivative(0)
        .shift(&[1])
        .mul(&y.shift(&[-1]).invert()?.shift(&[0]));
    let rhs = rhs_inner
        .mul_series(&FreeContext::embed(&dlog_uni, 2, 0, &caps2))
        .mul_series(&FreeContext::embed(&dlog_uni, 2, 1, &caps2));

    // both sides carry pole representations that are equal only modulo
    // diagonal-divisible promotions; the difference must collapse to zero
    let diff = lhs.add(&rhs.scale(&int(-1)));
    let reg = diff.into_regular(order)?;
    let zero = FSeries::zero(2, &vec![order; 2]);
    Ok(reg.agrees_to(&zero, order))
}

// ---- identification with a spectral curve ----

/// Expand the inverse substitution around a rational point and convert the
/// curve's correlators into moment or cumulant series.
pub fn identify_with_swap(
    ctx: &mut SwapContext,
    side: IdentifySide,
    g: u32,
    n: u32,
    order: i64,
) -> Result<FSeries> {
    let nv = n as usize;
    let work = order + 3;
    let inv = inversion_series(ctx, side, 2 * work + 4)?;
    match side {
        IdentifySide::Moments => match (g, n) {
            (0, 1) => {
                let y = ctx.table().curve().y.clone();
                let h = eval_ratfunc_at(&y, &[(curve_var(ctx), &inv)]);
                let m = laurent_to_fseries(&h, work)?.shift(&[-1]);
                if m.coeff(&[0]) != Rational::one() {
                    return Err(Error::NoExpansionPoint(
                        "the first moment series does not start at 1; the curve is not \
                         normalized as a resolvent"
                            .into(),
                    ));
                }
                Ok(m.truncated(&[order]))
            }
            (0, 2) => {
                let (z1, z2) = (Symbol::z(1), Symbol::z(2));
                let w02 = ctx.table_mut().correlator(0, 2)?;
                let x1 = ctx.table().x_at(z1);
                let x2 = ctx.table().x_at(z2);
                let hat = w02.sub(&x1.sub(&x2).pow(2).recip());
                let f = x1.mul(&x2).mul(&hat);
                let m = eval_multivariate(&f, &[z1, z2], &inv, work)?;
                Ok(m.truncated(&[order, order]))
            }
            _ => {
                let w = ctx.table_mut().correlator(g, n)?;
                let vars: Vec<Symbol> = (1..=nv).map(Symbol::z).collect();
                let h = eval_multivariate(&w, &vars, &inv, work)?;
                Ok(h.shift(&vec![-1; nv]).truncated(&vec![order; nv]))
            }
        },
        IdentifySide::Cumulants => match (g, n) {
            (0, 1) => {
                let x = ctx.table().curve().x.clone();
                let h = eval_ratfunc_at(&x, &[(curve_var(ctx), &inv)]);
                if h.min_degree() < -1 {
                    return Err(Error::NoExpansionPoint(format!(
                        "x has a pole of order {} at the expansion point",
                        -h.min_degree()
                    )));
                }
                let c = laurent_to_fseries(&h, work)?.shift(&[1]);
                if c.coeff(&[0]) != Rational::one() {
                    return Err(Error::NoExpansionPoint(
                        "the cumulant series does not start at 1; x is not dual to 1/y at \
                         the expansion point"
                            .into(),
                    ));
                }
                Ok(c.truncated(&[order]))
            }
            (0, 2) => {
                let (z1, z2) = (Symbol::z(1), Symbol::z(2));
                let yp1 = ctx.table().yprime(z1);
                let yp2 = ctx.table().yprime(z2);
                let by = RatFunc::var(z1)
                    .sub(&RatFunc::var(z2))
                    .pow(2)
                    .recip()
                    .div(&yp1)
                    .div(&yp2);
                let y1 = ctx.table().y_at(z1);
                let y2 = ctx.table().y_at(z2);
                let f = by.sub(&y1.sub(&y2).pow(2).recip());
                let c = eval_multivariate(&f, &[z1, z2], &inv, work)?;
                Ok(c.shift(&[1, 1]).truncated(&[order, order]))
            }
            _ => {
                let (w, _) = ctx.swap_correlator(g, n)?;
                let vars: Vec<Symbol> = (1..=nv).map(Symbol::z).collect();
                let h = eval_multivariate(&w, &vars, &inv, work)?;
                Ok(h.shift(&vec![1; nv]).truncated(&vec![order; nv]))
            }
        },
    }
}

fn curve_var(ctx: &SwapContext) -> Symbol {
    ctx.table().curve().var()
}

/// The inverse substitution series: for the moment side z(T) with
/// 1/x(z(T)) = T, for the cumulant side z(T) with y(z(T)) = T, both around a
/// simple rational point found on the curve.
fn inversion_series(ctx: &SwapContext, side: IdentifySide, order: i64) -> Result<Laurent> {
    let curve = ctx.table().curve();
    let v = curve.var();
    let w = match side {
        IdentifySide::Moments => curve.x.recip(),
        IdentifySide::Cumulants => curve.y.clone(),
    };
    // candidate expansion points: simple rational zeros of w
    let (roots, _) = w.num().rational_roots(v);
    let mut point: Option<Rational> = None;
    for (r, mult) in roots {
        if mult == 1 && !w.den().eval_var(v, &r).is_zero() {
            point = Some(r);
            break;
        }
    }
    let Some(z0) = point else {
        return Err(Error::NoExpansionPoint(match side {
            IdentifySide::Moments => {
                "no simple rational pole of x to expand 1/x around".into()
            }
            IdentifySide::Cumulants => "no simple rational zero of y".into(),
        }));
    };
    // Newton inversion: z(t) with w(z(t)) = t
    let t = local_param_symbol();
    let t_series = Laurent::local_point(t, z0.clone()).truncated(order);
    let ident = t_series
        .sub(&Laurent::constant(t, z0.clone(), RatFunc::constant(z0.clone())));
    let wp = w.derivative(v);
    let mut z_series = Laurent::from_terms(
        t,
        z0.clone(),
        order,
        [
            (0, RatFunc::constant(z0.clone())),
            (1, w.derivative(v).eval_var(v, &z0).recip()),
        ],
    );
    let mut correct = 1i64;
    while correct < order {
        let wz = eval_ratfunc_at(&w, &[(v, &z_series)]);
        let wpz = eval_ratfunc_at(&wp, &[(v, &z_series)]);
        let step = wz.sub(&ident).div(&wpz);
        z_series = z_series.sub(&step);
        correct = (2 * correct + 1).min(order);
    }
    // verify w(z(t)) = t through the window
    let wz = eval_ratfunc_at(&w, &[(v, &z_series)]);
    if !wz.sub(&ident).is_known_zero() {
        return Err(Error::NoExpansionPoint(format!(
            "inversion at {z0} failed verification"
        )));
    }
    Ok(z_series)
}

/// Convert a constant-coefficient Laurent series into a univariate FSeries.
fn laurent_to_fseries(s: &Laurent, cap: i64) -> Result<FSeries> {
    if s.truncation() < cap {
        return Err(Error::TruncationShortfall {
            achievable: s.truncation(),
            requested: cap,
        });
    }
    let mut out = FSeries::zero(1, &[cap]);
    for d in s.min_degree()..=cap {
        let c = s.coeff(d);
        let c = c.as_constant().ok_or_else(|| {
            Error::ContractViolation("expected a constant series coefficient".into())
        })?;
        out.insert(&[d], c);
    }
    Ok(out)
}

/// Evaluate a rational function of z_1..z_n at z_i = inv(X_i); the
/// denominator must not vanish at the expansion point.
fn eval_multivariate(
    f: &RatFunc,
    vars: &[Symbol],
    inv: &Laurent,
    cap: i64,
) -> Result<FSeries> {
    let n = vars.len();
    let caps = vec![cap; n];
    let uni = laurent_to_fseries(inv, cap + 1)?;
    let per_var: Vec<FSeries> = (0..n)
        .map(|i| FreeContext::embed(&uni, n, i, &vec![cap; n]))
        .collect();
    let eval_poly = |p: &crate::algebra::MultiPoly| -> Result<FSeries> {
        let mut pows: Vec<Vec<FSeries>> = Vec::with_capacity(n);
        for (i, v) in vars.iter().enumerate() {
            let maxdeg = p
                .terms()
                .map(|(m, _)| {
                    p.vars()
                        .iter()
                        .position(|w| w == v)
                        .map(|idx| m.0[idx])
                        .unwrap_or(0)
                })
                .max()
                .unwrap_or(0);
            let mut pp = vec![FSeries::constant(n, &vec![i64::MAX / 4; n], int(1))];
            for _ in 1..=maxdeg {
                pp.push(pp.last().unwrap().mul(&per_var[i]).truncated(&caps));
            }
            pows.push(pp);
        }
        let mut acc = FSeries::zero(n, &caps);
        for (m, c) in p.terms() {
            let mut term = FSeries::constant(n, &vec![i64::MAX / 4; n], c.clone());
            for (i, v) in vars.iter().enumerate() {
                let e = p
                    .vars()
                    .iter()
                    .position(|w| w == v)
                    .map(|idx| m.0[idx])
                    .unwrap_or(0);
                if e > 0 {
                    term = term.mul(&pows[i][e as usize]);
                }
            }
            acc = acc.add(&term.truncated(&caps));
        }
        Ok(acc)
    };
    for v in f.variables() {
        assert!(
            vars.contains(&v),
            "unexpected spectator variable {v} in identification"
        );
    }
    let num = eval_poly(f.num())?;
    let den = eval_poly(f.den())?;
    Ok(num.mul(&den.invert()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::curve::catalog;
    use crate::recursion::CorrelatorTable;

    fn fs1(pairs: &[(i64, Rational)], order: i64) -> FSeries {
        let order = if order < 0 { order } else { UNBOUNDED };
        let mut s = FSeries::zero(1, &[order]);
        for (e, c) in pairs {
            s.insert(&[*e], c.clone());
        }
        s
    }

    // ---- first-order solve ----

    #[test]
    fn trivial_cumulants_give_trivial_moments() {
        let c01 = fs1(&[(0, int(1))], 10);
        let m = solve_first_order(&c01, 10).unwrap();
        assert!(m.agrees_to(&fs1(&[(0, int(1))], 10), 10));
    }

    #[test]
    fn semicircle_moments_are_catalan() {
        let c01 = fs1(&[(0, int(1)), (2, int(1))], 12);
        let m = solve_first_order(&c01, 10).unwrap();
        for (k, cat) in [(0i64, 1i64), (2, 1), (4, 2), (6, 5), (8, 14), (10, 42)] {
            assert_eq!(m.coeff(&[k]), int(cat), "order {k}");
        }
        // odd moments vanish
        for k in [1i64, 3, 5, 7, 9] {
            assert_eq!(m.coeff(&[k]), int(0));
        }
    }

    #[test]
    fn single_linear_cumulant_is_geometric() {
        // C_1(Y) = 1 + Y: the fixed point M = 1 + X M(X) is the geometric
        // series (the constant random variable), coefficients all 1
        let c01 = fs1(&[(0, int(1)), (1, int(1))], 10);
        let m = solve_first_order(&c01, 8).unwrap();
        for k in 0i64..=8 {
            assert_eq!(m.coeff(&[k]), int(1), "order {k}");
        }
    }

    // ---- vanishing higher cumulants kill higher moments ----

    #[test]
    fn pure_first_order_data_has_no_higher_moments() {
        let mut table = CumulantTable::new();
        table.insert(0, 1, fs1(&[(0, int(1))], 14));
        let ctx = FreeContext::new(table, 8).unwrap();
        for (g, n) in [(1u32, 1u32), (0, 2), (1, 2), (2, 1)] {
            let m = ctx.moments_from_cumulants(g, n, 6).unwrap();
            assert!(m.is_zero(), "({g},{n}) gave a nonzero series");
        }
    }

    // ---- shifted series ----

    #[test]
    fn shifted_identity_trivial_and_semicircle() {
        let c01 = fs1(&[(0, int(1))], 14);
        let m01 = solve_first_order(&c01, 14).unwrap();
        assert!(shifted_series_identity(&c01, &m01, 10).unwrap());

        let c01 = fs1(&[(0, int(1)), (2, int(1))], 16);
        let m01 = solve_first_order(&c01, 16).unwrap();
        assert!(shifted_series_identity(&c01, &m01, 10).unwrap());
    }

    // ---- second-order display ----

    #[test]
    fn second_order_relation_on_sample_data() {
        let c01 = fs1(&[(0, int(1)), (1, rat(1, 3)), (2, int(2))], 20);
        let mut c02 = FSeries::zero(2, &[UNBOUNDED, UNBOUNDED]);
        c02.insert(&[1, 1], int(1));
        c02.insert(&[1, 2], rat(2, 5));
        c02.insert(&[2, 1], rat(2, 5));
        c02.insert(&[2, 2], int(-1));
        assert!(second_order_relation_holds(&c01, &c02, 6).unwrap());
    }

    // ---- identification on the Gaussian curve ----

    #[test]
    fn gaussian_moment_side_is_catalan() {
        let mut ctx = SwapContext::new(CorrelatorTable::new(catalog("gaussian").unwrap()));
        let m01 = identify_with_swap(&mut ctx, IdentifySide::Moments, 0, 1, 8).unwrap();
        for (k, cat) in [(0i64, 1i64), (2, 1), (4, 2), (6, 5), (8, 14)] {
            assert_eq!(m01.coeff(&[k]), int(cat), "order {k}");
        }
    }

    #[test]
    fn gaussian_cumulant_side_is_semicircle() {
        let mut ctx = SwapContext::new(CorrelatorTable::new(catalog("gaussian").unwrap()));
        let c01 = identify_with_swap(&mut ctx, IdentifySide::Cumulants, 0, 1, 8).unwrap();
        let expected = fs1(&[(0, int(1)), (2, int(1))], 8);
        assert!(c01.agrees_to(&expected, 8), "got {c01:?}");
        // all higher cumulants vanish
        for (g, n) in [(0u32, 2u32), (1, 1), (0, 3)] {
            let c = identify_with_swap(&mut ctx, IdentifySide::Cumulants, g, n, 8).unwrap();
            assert!(c.is_zero(), "({g},{n}) cumulants should vanish, got {c:?}");
        }
    }

    #[test]
    fn airy_identification_is_refused() {
        let mut ctx = SwapContext::new(CorrelatorTable::new(catalog("airy").unwrap()));
        match identify_with_swap(&mut ctx, IdentifySide::Moments, 0, 1, 6) {
            Err(Error::NoExpansionPoint(_)) => {}
            other => panic!("expected NoExpansionPoint, got {other:?}"),
        }
    }

    #[test]
    fn gaussian_cross_pipeline() {
        // contract the full loop: cumulants from the curve, moments via the
        // graph sum, compared against the directly identified moments
        let mut ctx = SwapContext::new(CorrelatorTable::new(catalog("gaussian").unwrap()));
        let order = 8i64;
        let mut table = CumulantTable::new();
        table.insert(
            0,
            1,
            identify_with_swap(&mut ctx, IdentifySide::Cumulants, 0, 1, 4 * order + 28).unwrap(),
        );
        table.insert(
            0,
            2,
            identify_with_swap(&mut ctx, IdentifySide::Cumulants, 0, 2, 2 * order + 12).unwrap(),
        );
        table.insert(
            1,
            1,
            identify_with_swap(&mut ctx, IdentifySide::Cumulants, 1, 1, 2 * order + 12).unwrap(),
        );
        let fctx = FreeContext::new(table, order).unwrap();
        for (g, n) in [(0u32, 2u32), (1, 1)] {
            let via_graphs = fctx.moments_from_cumulants(g, n, order).unwrap();
            let direct = identify_with_swap(&mut ctx, IdentifySide::Moments, g, n, order).unwrap();
            assert!(
                via_graphs.agrees_to(&direct, order),
                "({g},{n}): graphs {via_graphs:?} vs direct {direct:?}"
            );
        }
    }
}
