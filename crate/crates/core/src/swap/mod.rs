//! The x-y swap of correlators, evaluated on the z-plane.
//!
//! Given the correlator table of a curve (x, y), these routines produce the
//! role-swapped correlators W^v_{g,n}(y(z_1),...,y(z_n)) as exact rational
//! functions, without ever inverting x or y: the derivative with respect to
//! y is the operator (1/y'(z)) d/dz acting per variable, and the prefactor
//! x'(y) is x'(z)/y'(z).
//!
//! Four independent evaluation routes are provided: the decorated-graph sum,
//! the operator-series form (see `opseries`), the genus-zero tree sum, and
//! hand-coded transcriptions of the low-order formulas. They must agree
//! exactly, and on curves whose y-branch admits the recursion the result
//! must match the direct recursion on the swapped curve.

pub mod opseries;

use crate::algebra::{rat, s_coefficient, RatFunc, Rational, Symbol};
use crate::graphs::{enumerate_decorated, DecoratedGraph, PlainGraph};
use crate::recursion::{diagonal_limit, CorrelatorTable};
use crate::{Error, Result};

/// Per-graph bookkeeping of one graph-sum evaluation.
#[derive(Clone, Debug)]
pub struct TermReport {
    pub entries: Vec<TermEntry>,
    /// Subtotals keyed by the plain shadow (decorations forgotten, 1-valent
    /// black vertices dropped), in canonical order.
    pub groups: Vec<(PlainGraph, RatFunc)>,
    pub total: RatFunc,
}

#[derive(Clone, Debug)]
pub struct TermEntry {
    pub graph: DecoratedGraph,
    pub aut: u64,
    /// The graph's contribution including its 1/|Aut| factor.
    pub contribution: RatFunc,
    pub running_total: RatFunc,
}

/// Evaluation context around a correlator table.
pub struct SwapContext {
    table: CorrelatorTable,
}

impl SwapContext {
    pub fn new(table: CorrelatorTable) -> SwapContext {
        SwapContext { table }
    }

    pub fn table(&self) -> &CorrelatorTable {
        &self.table
    }

    pub fn table_mut(&mut self) -> &mut CorrelatorTable {
        &mut self.table
    }

    // ---- the operators of the swap formula ----

    /// d/dy acting in the i-th variable: (1/y'(z_i)) d/dz_i.
    pub fn dy(&self, f: &RatFunc, i: usize) -> RatFunc {
        let v = Symbol::z(i);
        f.derivative(v).div(&self.table.yprime(v))
    }

    /// d/dx acting in the i-th variable: (1/x'(z_i)) d/dz_i.
    pub fn dx(&self, f: &RatFunc, i: usize) -> RatFunc {
        let v = Symbol::z(i);
        f.derivative(v).div(&self.table.xprime(v))
    }

    /// Iterated (-d/dy_i)^k.
    pub fn neg_dy_pow(&self, f: &RatFunc, i: usize, k: u32) -> RatFunc {
        let mut out = f.clone();
        for _ in 0..k {
            out = self.dy(&out, i).neg();
        }
        out
    }

    /// x'(y) at the i-th variable: x'(z_i)/y'(z_i).
    pub fn xprime_of_y(&self, i: usize) -> RatFunc {
        let v = Symbol::z(i);
        self.table.xprime(v).div(&self.table.yprime(v))
    }

    /// The regularized two-point diagonal in the i-th variable.
    pub fn w02_hat_diag(&mut self, i: usize) -> Result<RatFunc> {
        self.table.regularized_diagonal_w02(Symbol::z(i))
    }

    /// W_{g,k} with its slots renamed to the given correlator variables
    /// (repeats allowed away from the (0,2) diagonal).
    pub fn correlator_at(&mut self, g: u32, labels: &[usize]) -> Result<RatFunc> {
        let k = labels.len() as u32;
        assert!(
            !(g == 0 && k == 2 && labels[0] == labels[1]),
            "the (0,2) diagonal requires the regularized kernel"
        );
        let base = self.table.correlator(g, k)?;
        // route through fresh slots so crossing renames (z1 -> z2, z2 -> z1)
        // cannot collide
        let slot_renames: Vec<(Symbol, Symbol)> = (1..=labels.len())
            .map(|j| (Symbol::z(j), Symbol::slot(j)))
            .collect();
        let label_renames: Vec<(Symbol, Symbol)> = labels
            .iter()
            .enumerate()
            .map(|(j, &l)| (Symbol::slot(j + 1), Symbol::z(l)))
            .collect();
        Ok(base.rename(&slot_renames).rename(&label_renames))
    }

    /// The weight of a black vertex: take W_{g,k} in independent slots,
    /// apply the even x-derivative of order `orders[j]` in slot j (no
    /// numeric prefactors here), then merge the slots into their labelled
    /// variables. The (0, {(i,h1),(i,h2)}) case starts from the regularized
    /// two-point kernel and takes the diagonal limit after the derivatives.
    pub fn derived_correlator(
        &mut self,
        g: u32,
        slots: &[(usize, u32)],
    ) -> Result<RatFunc> {
        let k = slots.len();
        let regularize = g == 0 && k == 2 && slots[0].0 == slots[1].0;
        let slot_syms: Vec<Symbol> = (1..=k).map(Symbol::slot).collect();
        let mut f = if regularize {
            let w02 = self.table.correlator(0, 2)?;
            let w02 = w02.rename(&[
                (Symbol::z(1), slot_syms[0]),
                (Symbol::z(2), slot_syms[1]),
            ]);
            let x1 = self.table.x_at(slot_syms[0]);
            let x2 = self.table.x_at(slot_syms[1]);
            w02.sub(&x1.sub(&x2).pow(2).recip())
        } else {
            let base = self.table.correlator(g, k as u32)?;
            let renames: Vec<(Symbol, Symbol)> = (1..=k)
                .map(|j| (Symbol::z(j), slot_syms[j - 1]))
                .collect();
            base.rename(&renames)
        };
        for (j, &(_, order)) in slots.iter().enumerate() {
            let s = slot_syms[j];
            let xp = self.table.xprime(s);
            for _ in 0..order {
                f = f.derivative(s).div(&xp);
            }
        }
        if regularize {
            diagonal_limit(&f, slot_syms[0], slot_syms[1], Symbol::z(slots[0].0))
        } else {
            let renames: Vec<(Symbol, Symbol)> = slots
                .iter()
                .enumerate()
                .map(|(j, &(l, _))| (slot_syms[j], Symbol::z(l)))
                .collect();
            Ok(f.rename(&renames))
        }
    }

    /// The weight of a decorated black vertex (g_i, D): the S-expansion
    /// coefficients 1/(2^(2h) (2h+1)!) times the even derivatives.
    pub fn weight(&mut self, g: u32, d: &[(usize, u32)]) -> Result<RatFunc> {
        let slots: Vec<(usize, u32)> = d.iter().map(|&(l, h)| (l, 2 * h)).collect();
        let mut f = self.derived_correlator(g, &slots)?;
        for &(_, h) in d {
            f = f.scale(&s_coefficient(h as u64));
        }
        Ok(f)
    }

    // ---- the decorated-graph form ----

    /// The swapped correlator W^v_{g,n}(y(z_1),...,y(z_n)) as the sum over
    /// decorated graphs, together with the per-graph report.
    pub fn swap_correlator(&mut self, g: u32, n: u32) -> Result<(RatFunc, TermReport)> {
        if 2 * g + n < 3 {
            return Err(Error::ContractViolation(
                "the swap formula applies for 2g + n - 2 > 0".into(),
            ));
        }
        let graphs = enumerate_decorated(n as usize, g);
        let mut entries = Vec::new();
        let mut total = RatFunc::zero();
        for graph in graphs {
            let contribution = self.graph_contribution(&graph)?;
            total = total.add(&contribution);
            entries.push(TermEntry {
                aut: graph.automorphism_count(),
                contribution,
                running_total: total.clone(),
                graph,
            });
        }
        // group by plain shadow, in the shadows' canonical order
        let mut groups: Vec<(PlainGraph, RatFunc)> = Vec::new();
        for e in &entries {
            let shadow = e.graph.shadow();
            match groups.iter_mut().find(|(p, _)| *p == shadow) {
                Some((_, sum)) => *sum = sum.add(&e.contribution),
                None => groups.push((shadow, e.contribution.clone())),
            }
        }
        groups.sort_by(|a, b| a.0.cmp(&b.0));
        let report = TermReport {
            entries,
            groups,
            total: total.clone(),
        };
        Ok((total, report))
    }

    fn graph_contribution(&mut self, graph: &DecoratedGraph) -> Result<RatFunc> {
        let n = graph.n;
        let mut term = RatFunc::one();
        for (gi, d) in &graph.blacks {
            term = term.mul(&self.weight(*gi, d)?);
        }
        for i in 1..=n {
            term = term.mul(&self.xprime_of_y(i).neg());
        }
        for i in 1..=n {
            let power = graph.valence(i) as u32 + 2 * graph.edge_genus_sum(i) - 1;
            term = self.neg_dy_pow(&term, i, power);
        }
        let aut = Rational::from_integer(graph.automorphism_count().into());
        Ok(term.scale(&aut.recip()))
    }

    // ---- the genus-zero tree form ----

    /// Genus zero: only trees contribute and every weight is a plain
    /// genus-zero correlator.
    pub fn swap_genus0_tree(&mut self, n: u32) -> Result<RatFunc> {
        assert!(n >= 3, "the tree form starts at three points");
        let trees = enumerate_decorated(n as usize, 0);
        let mut total = RatFunc::zero();
        for tree in trees {
            debug_assert_eq!(tree.betti1(), 0);
            let mut term = RatFunc::one();
            for (_, d) in &tree.blacks {
                let labels: Vec<usize> = d.iter().map(|&(l, _)| l).collect();
                term = term.mul(&self.correlator_at(0, &labels)?);
            }
            for i in 1..=n as usize {
                term = term.mul(&self.xprime_of_y(i).neg());
            }
            for i in 1..=n as usize {
                let power = tree.valence(i) as u32 - 1;
                term = self.neg_dy_pow(&term, i, power);
            }
            let aut = Rational::from_integer(tree.automorphism_count().into());
            total = total.add(&term.scale(&aut.recip()));
        }
        Ok(total)
    }

    // ---- hand-coded low-order formulas ----

    /// Literal transcriptions of the printed one- and two-point formulas,
    /// kept as an independent oracle against the graph sum.
    pub fn hand_coded_reference(&mut self, g: u32, n: u32) -> Result<RatFunc> {
        match (g, n) {
            (1, 1) => self.hand_11(),
            (1, 2) => self.hand_12(),
            (2, 1) => self.hand_21().map(|parts| {
                parts
                    .into_iter()
                    .fold(RatFunc::zero(), |acc, p| acc.add(&p))
            }),
            _ => Err(Error::ContractViolation(format!(
                "no hand-coded formula for ({g},{n})"
            ))),
        }
    }

    /// W^v_{1,1}(y) = -x'(y) W_{1,1}(x(y)) - (1/24) d^3/dy^3 (1/x'(y))
    ///               + (1/2) d/dy [x'(y) What_{0,2}(x,x)].
    fn hand_11(&mut self) -> Result<RatFunc> {
        let xp = self.xprime_of_y(1);
        let w11 = self.correlator_at(1, &[1])?;
        let hat = self.w02_hat_diag(1)?;
        let t1 = xp.mul(&w11).neg();
        let t2 = self.dy(&self.dy(&self.dy(&xp.recip(), 1), 1), 1).scale(&rat(-1, 24));
        let t3 = self.dy(&xp.mul(&hat), 1).scale(&rat(1, 2));
        Ok(t1.add(&t2).add(&t3))
    }

    /// The two-point genus-one formula; the second three-point term carries
    /// d/dy_2 (the printed source's d/dy_1 on that term is a typo that would
    /// break the 1 <-> 2 symmetry of the result).
    fn hand_12(&mut self) -> Result<RatFunc> {
        let xp1 = self.xprime_of_y(1);
        let xp2 = self.xprime_of_y(2);
        let both = xp1.mul(&xp2);
        let w02 = self.correlator_at(0, &[1, 2])?;
        let w11_1 = self.correlator_at(1, &[1])?;
        let w11_2 = self.correlator_at(1, &[2])?;
        let w12 = self.correlator_at(1, &[1, 2])?;
        let ddx_y = |ctx: &mut Self, i: usize| -> Result<RatFunc> {
            // d^2 y / dx^2 at variable i, i.e. d/dx of 1/x'(y)
            let y = ctx.table.y_at(Symbol::z(i));
            Ok(ctx.dx(&ctx.dx(&y, i), i))
        };
        let d2y1 = ddx_y(self, 1)?;
        let d2y2 = ddx_y(self, 2)?;
        let w03_112 = self.correlator_at(0, &[1, 1, 2])?;
        let w03_122 = self.correlator_at(0, &[1, 2, 2])?;
        let hat1 = self.w02_hat_diag(1)?;
        let hat2 = self.w02_hat_diag(2)?;
        // d^2/dx_1^2 W_{0,2}(x_1, x_2)
        let d2w02_1 = self.dx(&self.dx(&w02, 1), 1);
        let d2w02_2 = self.dx(&self.dx(&w02, 2), 2);

        let mut total = both.mul(&w12);
        total = total.add(
            &self
                .dy(&both.mul(&w11_1).mul(&w02), 1)
                .neg(),
        );
        total = total.add(
            &self
                .dy(&both.mul(&w11_2).mul(&w02), 2)
                .neg(),
        );
        let t = both.mul(&d2y1).mul(&w02);
        total = total.add(
            &self
                .dy(&self.dy(&self.dy(&t, 1), 1), 1)
                .scale(&rat(-1, 24)),
        );
        let t = both.mul(&d2y2).mul(&w02);
        total = total.add(
            &self
                .dy(&self.dy(&self.dy(&t, 2), 2), 2)
                .scale(&rat(-1, 24)),
        );
        let t = both.mul(&d2w02_1);
        total = total.add(&self.dy(&self.dy(&t, 1), 1).scale(&rat(1, 24)));
        let t = both.mul(&d2w02_2);
        total = total.add(&self.dy(&self.dy(&t, 2), 2).scale(&rat(1, 24)));
        // three-point terms
        let t = both.mul(&w03_112);
        total = total.add(&self.dy(&t, 1).scale(&rat(-1, 2)));
        let t = both.mul(&w03_122);
        total = total.add(&self.dy(&t, 2).scale(&rat(-1, 2)));
        // parallel-edge two-point terms
        let t = both.mul(&w02).mul(&hat1);
        total = total.add(&self.dy(&self.dy(&t, 1), 1).scale(&rat(1, 2)));
        let t = both.mul(&w02).mul(&hat2);
        total = total.add(&self.dy(&self.dy(&t, 2), 2).scale(&rat(1, 2)));
        // double-edge term
        let t = both.mul(&w02).mul(&w02);
        total = total.add(
            &self
                .dy(&self.dy(&t, 1), 2)
                .scale(&rat(1, 2)),
        );
        Ok(total)
    }

    /// The four printed term groups of the one-point genus-two formula, in
    /// order (the last two are the two parallel-edge graph contributions).
    pub fn hand_21(&mut self) -> Result<Vec<RatFunc>> {
        let xp = self.xprime_of_y(1);
        let y = self.table.y_at(Symbol::z(1));
        let w11 = self.correlator_at(1, &[1])?;
        let w21 = self.correlator_at(2, &[1])?;
        let w12_diag = self.correlator_at(1, &[1, 1])?;
        let w03_diag = self.correlator_at(0, &[1, 1, 1])?;
        let hat = self.w02_hat_diag(1)?;
        let d2y = self.dx(&self.dx(&y, 1), 1);
        let d4y = self.dx(&self.dx(&d2y.clone(), 1), 1);
        let d2w11 = self.dx(&self.dx(&w11, 1), 1);
        // d^2/dx^2 on the first slot of the regularized kernel, then the
        // diagonal
        let hat_d2_slot1 = {
            let f = self.derived_correlator(0, &[(1, 2), (1, 0)])?;
            f
        };

        let dy1 = |ctx: &mut Self, f: &RatFunc, k: u32| -> RatFunc {
            let mut out = f.clone();
            for _ in 0..k {
                out = ctx.dy(&out, 1);
            }
            out
        };

        // first group: the six pure one-point terms
        let mut g1 = xp.mul(&w21).neg();
        g1 = g1.add(&dy1(self, &xp.mul(&d2w11), 2).scale(&rat(-1, 24)));
        g1 = g1.add(&dy1(self, &xp.mul(&d4y), 4).scale(&rat(-1, 1920)));
        g1 = g1.add(&dy1(self, &xp.mul(&w11).mul(&w11), 1).scale(&rat(1, 2)));
        g1 = g1.add(&dy1(self, &xp.mul(&w11).mul(&d2y), 3).scale(&rat(1, 24)));
        g1 = g1.add(&dy1(self, &xp.mul(&d2y).mul(&d2y), 5).scale(&rat(1, 1152)));

        // second group
        let mut g2 = dy1(self, &xp.mul(&w12_diag), 1).scale(&rat(1, 2));
        g2 = g2.add(&dy1(self, &xp.mul(&hat).mul(&w11), 2).scale(&rat(-1, 2)));
        g2 = g2.add(&dy1(self, &xp.mul(&hat).mul(&d2y), 4).scale(&rat(-1, 48)));
        g2 = g2.add(&dy1(self, &xp.mul(&hat_d2_slot1), 3).scale(&rat(1, 24)));

        // third and fourth groups
        let g3 = dy1(self, &xp.mul(&hat).mul(&hat), 3).scale(&rat(1, 8));
        let g4 = dy1(self, &xp.mul(&w03_diag), 2).scale(&rat(-1, 6));

        Ok(vec![g1, g2, g3, g4])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;
    use crate::curve::catalog;

    fn airy_ctx() -> SwapContext {
        SwapContext::new(CorrelatorTable::new(catalog("airy").unwrap()))
    }

    fn z(i: usize) -> RatFunc {
        RatFunc::var(Symbol::z(i))
    }

    // ---- weights ----

    #[test]
    fn weight_identity_coefficient() {
        // h = 0 on two distinct labels is the plain two-point correlator
        let mut ctx = airy_ctx();
        let w = ctx.weight(0, &[(1, 0), (2, 0)]).unwrap();
        let expected = ctx.table_mut().correlator(0, 2).unwrap();
        assert_eq!(w, expected);
    }

    #[test]
    fn weight_regularized_diagonal() {
        let mut ctx = airy_ctx();
        let w = ctx.weight(0, &[(1, 0), (1, 0)]).unwrap();
        assert_eq!(w, z(1).pow(4).scale(&int(16)).recip());
    }

    #[test]
    fn weight_with_edge_genus() {
        // (1/24) d^2/dx^2 W_{1,1} on the Airy curve
        let mut ctx = airy_ctx();
        let w = ctx.weight(1, &[(1, 1)]).unwrap();
        assert_eq!(
            w,
            z(1).pow(9).recip().scale(&rat(-35, 3072))
        );
    }

    // ---- the Airy vanishing ----

    #[test]
    fn airy_swap_vanishes_low_orders() {
        let mut ctx = airy_ctx();
        for (g, n) in [(1u32, 1u32), (0, 3)] {
            let (w, _) = ctx.swap_correlator(g, n).unwrap();
            assert!(w.is_zero(), "({g},{n}) gave {w}");
        }
    }

    #[test]
    fn airy_hand_coded_11_vanishes() {
        let mut ctx = airy_ctx();
        assert!(ctx.hand_coded_reference(1, 1).unwrap().is_zero());
    }

    #[test]
    fn airy_21_groups() {
        let mut ctx = airy_ctx();
        let parts = ctx.hand_21().unwrap();
        let z10 = z(1).pow(10).recip();
        assert_eq!(parts[0], z10.scale(&rat(87, 32)));
        assert_eq!(parts[1], z10.scale(&rat(-477, 128)));
        assert_eq!(parts[2], z10.scale(&rat(-63, 128)));
        assert_eq!(parts[3], z10.scale(&rat(3, 2)));
        let total = parts.iter().fold(RatFunc::zero(), |a, p| a.add(p));
        assert!(total.is_zero());
    }

    #[test]
    fn airy_swap_21_group_subtotals() {
        let mut ctx = airy_ctx();
        let (total, report) = ctx.swap_correlator(2, 1).unwrap();
        assert!(total.is_zero());
        let z10 = z(1).pow(10).recip();
        let expect = [
            rat(87, 32),
            rat(-477, 128),
            rat(-63, 128),
            rat(3, 2),
        ];
        assert_eq!(report.groups.len(), 4);
        // groups are keyed by plain shadows in canonical order: empty graph,
        // one 2-valent black, two 2-valent blacks, one 3-valent black
        for ((_, sum), c) in report.groups.iter().zip(expect.iter()) {
            assert_eq!(sum, &z10.scale(c));
        }
    }

    #[test]
    fn reverse_airy_recovers_w21() {
        // swapped-Airy input: all stable correlators vanish; the swap must
        // reproduce the Airy W_{2,1}
        let table = CorrelatorTable::new(catalog("airy").unwrap().swap_roles());
        let mut ctx = SwapContext::new(table);
        let (w, report) = ctx.swap_correlator(2, 1).unwrap();
        assert_eq!(w, z(1).pow(11).recip().scale(&rat(-105, 2048)));
        // the single surviving decorated graph: two 1-valent blacks with
        // h = 1 edges
        let nonzero: Vec<_> = report
            .entries
            .iter()
            .filter(|e| !e.contribution.is_zero())
            .collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(nonzero[0].aut, 2);
    }
}
