//! Connected bicoloured graphs: the plain family (labelled white vertices,
//! black vertices of valence >= 2) and the decorated family where every
//! black vertex carries a genus and every edge an integer h >= 0.
//!
//! A graph is completely characterised by the multiset of its black-vertex
//! descriptors, so isomorphism testing is multiset equality and the
//! canonical form is a sorted nested list. Automorphism counts come from the
//! multiset structure: permutations of identical black vertices times
//! permutations of parallel edges carrying identical decorations.

use std::collections::BTreeSet;

/// A black vertex of a decorated graph: (genus, sorted multiset of
/// (white-label, edge-genus) pairs). Labels count from 1.
pub type BlackVertex = (u32, Vec<(usize, u32)>);

/// Element of the decorated family for a given (n, g); black vertices and
/// their edge lists are kept sorted, so equality is isomorphism.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct DecoratedGraph {
    pub n: usize,
    pub blacks: Vec<BlackVertex>,
}

/// Element of the plain family: black vertices are multisets of white
/// labels, each of size >= 2.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct PlainGraph {
    pub n: usize,
    pub blacks: Vec<Vec<usize>>,
}

impl DecoratedGraph {
    pub fn edge_count(&self) -> usize {
        self.blacks.iter().map(|(_, d)| d.len()).sum()
    }

    /// First Betti number E - V + 1 of the connected graph.
    pub fn betti1(&self) -> i64 {
        let e = self.edge_count() as i64;
        let v = (self.n + self.blacks.len()) as i64;
        e - v + 1
    }

    /// Total genus: sum of vertex genera, edge genera, and the Betti number.
    pub fn genus(&self) -> i64 {
        let decorations: i64 = self
            .blacks
            .iter()
            .map(|(g, d)| *g as i64 + d.iter().map(|&(_, h)| h as i64).sum::<i64>())
            .sum();
        decorations + self.betti1()
    }

    /// Valence of white vertex `i` (1-based).
    pub fn valence(&self, i: usize) -> usize {
        self.blacks
            .iter()
            .map(|(_, d)| d.iter().filter(|&&(l, _)| l == i).count())
            .sum()
    }

    /// Sum of edge genera over the edges adjacent to white vertex `i`.
    pub fn edge_genus_sum(&self, i: usize) -> u32 {
        self.blacks
            .iter()
            .map(|(_, d)| {
                d.iter()
                    .filter(|&&(l, _)| l == i)
                    .map(|&(_, h)| h)
                    .sum::<u32>()
            })
            .sum()
    }

    /// |Aut|: identical black vertices may be permuted, and within one black
    /// vertex the parallel edges carrying the same (label, h) decoration may
    /// be permuted.
    pub fn automorphism_count(&self) -> u64 {
        let mut aut = multiset_class_factorial(&self.blacks);
        for (_, d) in &self.blacks {
            aut *= multiset_class_factorial(d);
        }
        aut
    }

    /// The plain graph obtained by forgetting decorations and deleting the
    /// 1-valent black vertices (those are generated by the operator
    /// exponential, not by the plain family).
    pub fn shadow(&self) -> PlainGraph {
        let blacks: Vec<Vec<usize>> = self
            .blacks
            .iter()
            .filter(|(_, d)| d.len() >= 2)
            .map(|(_, d)| d.iter().map(|&(l, _)| l).collect())
            .collect();
        let mut p = PlainGraph {
            n: self.n,
            blacks,
        };
        p.blacks.sort();
        p
    }

    /// One-line canonical rendering used by the CLI listing.
    pub fn render(&self) -> String {
        let blacks: Vec<String> = self
            .blacks
            .iter()
            .map(|(g, d)| {
                let edges: Vec<String> =
                    d.iter().map(|(l, h)| format!("({l},{h})")).collect();
                format!("({g},[{}])", edges.join(","))
            })
            .collect();
        format!(
            "g={}, b1={}, aut={}, blacks=[{}]",
            self.genus(),
            self.betti1(),
            self.automorphism_count(),
            blacks.join(",")
        )
    }
}

impl PlainGraph {
    pub fn edge_count(&self) -> usize {
        self.blacks.iter().map(|d| d.len()).sum()
    }

    pub fn betti1(&self) -> i64 {
        let e = self.edge_count() as i64;
        let v = (self.n + self.blacks.len()) as i64;
        e - v + 1
    }

    pub fn valence(&self, i: usize) -> usize {
        self.blacks
            .iter()
            .map(|d| d.iter().filter(|&&l| l == i).count())
            .sum()
    }

    /// Minimal power of the genus expansion parameter this graph can
    /// contribute at: 2*b1 + n - 2 (all decorations zero).
    pub fn min_euler_order(&self) -> i64 {
        2 * self.betti1() + self.n as i64 - 2
    }

    pub fn automorphism_count(&self) -> u64 {
        let mut aut = multiset_class_factorial(&self.blacks);
        for d in &self.blacks {
            aut *= multiset_class_factorial(d);
        }
        aut
    }
}

fn multiset_class_factorial<T: Eq>(sorted: &[T]) -> u64 {
    let mut aut = 1u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
            aut *= run;
        } else {
            run = 1;
        }
    }
    aut
}

/// Complete duplicate-free enumeration of the decorated family for (n, g).
///
/// Callers of the swap formula use 2g - 2 + n > 0; the boundary cases
/// (n, 0) with n <= 2 are meaningful too (the empty graph for n = 1 and the
/// single tree for n = 2) and are produced for the shadow construction.
pub fn enumerate_decorated(n: usize, g: u32) -> Vec<DecoratedGraph> {
    assert!(n >= 1, "need at least one white vertex");
    // Per black vertex, weight w := g_i + sum(h_j + 1) - 1. The Euler
    // condition chi <= 0 is exactly w >= 1, and summing over black vertices
    // gives sum(w) = g + n - 1 identically, so enumeration is a partition
    // of that budget into descriptor weights.
    let budget = g as i64 + n as i64 - 1;
    let mut out = Vec::new();
    if budget == 0 {
        // no black vertices at all; connected only for n = 1
        if n == 1 {
            out.push(DecoratedGraph {
                n,
                blacks: Vec::new(),
            });
        }
        return out;
    }
    let descriptors = descriptors_up_to_weight(n, budget);
    let mut current: Vec<usize> = Vec::new();
    multisets_with_budget(&descriptors, budget, 0, &mut current, &mut |chosen| {
        let blacks: Vec<BlackVertex> = chosen
            .iter()
            .map(|&i| descriptors[i].1.clone())
            .collect();
        let graph = DecoratedGraph { n, blacks };
        if graph.betti1() >= 0 && is_connected(&graph) {
            debug_assert_eq!(graph.genus(), g as i64);
            out.push(graph);
        }
    });
    out.sort();
    out.dedup();
    out
}

/// All descriptors (weight, black vertex) with 1 <= weight <= max_weight.
fn descriptors_up_to_weight(n: usize, max_weight: i64) -> Vec<(i64, BlackVertex)> {
    let mut out = Vec::new();
    for w in 1..=max_weight {
        for g_i in 0..=w {
            let edge_budget = (w + 1 - g_i) as u32;
            if edge_budget == 0 {
                continue;
            }
            let mut edges: Vec<(usize, u32)> = Vec::new();
            edge_multisets(n, edge_budget, (1, 0), &mut edges, &mut |d| {
                out.push((w, (g_i as u32, d.to_vec())));
            });
        }
    }
    // deterministic order
    out.sort();
    out.dedup();
    out
}

/// Multisets of (label, h) with sum(h + 1) = budget, emitted in
/// non-decreasing (label, h) order starting at `min`.
fn edge_multisets(
    n: usize,
    budget: u32,
    min: (usize, u32),
    acc: &mut Vec<(usize, u32)>,
    emit: &mut impl FnMut(&[(usize, u32)]),
) {
    if budget == 0 {
        emit(acc);
        return;
    }
    for label in 1..=n {
        for h in 0..budget {
            let pair = (label, h);
            if pair < min || h + 1 > budget {
                continue;
            }
            acc.push(pair);
            edge_multisets(n, budget - (h + 1), pair, acc, emit);
            acc.pop();
        }
    }
}

/// Multisets of descriptor indices with total weight exactly `budget`,
/// indices non-decreasing.
fn multisets_with_budget(
    descriptors: &[(i64, BlackVertex)],
    budget: i64,
    from: usize,
    acc: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if budget == 0 {
        emit(acc);
        return;
    }
    for i in from..descriptors.len() {
        let w = descriptors[i].0;
        if w <= budget {
            acc.push(i);
            multisets_with_budget(descriptors, budget - w, i, acc, emit);
            acc.pop();
        }
    }
}

fn is_connected(g: &DecoratedGraph) -> bool {
    // union-find over n white vertices and the black vertices
    let total = g.n + g.blacks.len();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (b, (_, d)) in g.blacks.iter().enumerate() {
        for &(label, _) in d {
            let a = find(&mut parent, label - 1);
            let c = find(&mut parent, g.n + b);
            parent[a] = c;
        }
    }
    let root = find(&mut parent, 0);
    (0..total).all(|i| find(&mut parent, i) == root)
}

/// All plain graphs whose minimal contribution order is at most `max_euler`,
/// obtained as decoration-forgetting shadows of the decorated enumeration.
pub fn enumerate_plain(n: usize, max_euler: i64) -> Vec<PlainGraph> {
    let mut seen: BTreeSet<PlainGraph> = BTreeSet::new();
    let mut g = 0i64;
    while 2 * g - 2 + (n as i64) <= max_euler {
        for d in enumerate_decorated(n, g as u32) {
            seen.insert(d.shadow());
        }
        g += 1;
    }
    seen.into_iter()
        .filter(|p| p.min_euler_order() <= max_euler)
        .collect()
}

/// Exhaustive |Aut| count over all decoration-preserving edge bijections,
/// for cross-checking the multiset formula on small graphs.
pub fn automorphisms_brute_force(g: &DecoratedGraph) -> u64 {
    // edges as (black index, label, h)
    let mut edges: Vec<(usize, usize, u32)> = Vec::new();
    for (b, (_, d)) in g.blacks.iter().enumerate() {
        for &(l, h) in d {
            edges.push((b, l, h));
        }
    }
    let m = edges.len();
    if m == 0 {
        return 1;
    }
    let mut perm: Vec<usize> = (0..m).collect();
    let mut count = 0u64;
    permute(&mut perm, 0, &mut |p| {
        // decorations preserved edge by edge
        for (i, &j) in p.iter().enumerate() {
            if edges[i].1 != edges[j].1 || edges[i].2 != edges[j].2 {
                return;
            }
        }
        // the partition into black vertices must be preserved and the
        // induced black map must preserve vertex genus
        let mut image: Vec<Option<usize>> = vec![None; g.blacks.len()];
        for (i, &j) in p.iter().enumerate() {
            let (bi, bj) = (edges[i].0, edges[j].0);
            match image[bi] {
                None => image[bi] = Some(bj),
                Some(prev) if prev == bj => {}
                Some(_) => return,
            }
        }
        // injectivity on blacks with edges, genus preserved, edge counts match
        let mut hit = vec![false; g.blacks.len()];
        for (bi, img) in image.iter().enumerate() {
            if let Some(bj) = img {
                if hit[*bj] {
                    return;
                }
                hit[*bj] = true;
                if g.blacks[bi].0 != g.blacks[*bj].0
                    || g.blacks[bi].1.len() != g.blacks[*bj].1.len()
                {
                    return;
                }
            }
        }
        count += 1;
    });
    count
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decorated(n: usize, blacks: Vec<BlackVertex>) -> DecoratedGraph {
        let mut blacks = blacks;
        for (_, d) in blacks.iter_mut() {
            d.sort();
        }
        blacks.sort();
        DecoratedGraph { n, blacks }
    }

    // ---- enumeration counts ----

    #[test]
    fn one_point_genus_one_has_three_graphs() {
        // the three contributions behind the genus-1 one-point swap formula:
        // a genus-1 black vertex, an h=1 edge, and a parallel-edge loop
        let graphs = enumerate_decorated(1, 1);
        assert_eq!(graphs.len(), 3);
        assert!(graphs.contains(&decorated(1, vec![(1, vec![(1, 0)])])));
        assert!(graphs.contains(&decorated(1, vec![(0, vec![(1, 1)])])));
        assert!(graphs.contains(&decorated(1, vec![(0, vec![(1, 0), (1, 0)])])));
    }

    #[test]
    fn one_point_genus_two_has_twelve_graphs_split_by_betti() {
        let graphs = enumerate_decorated(1, 2);
        assert_eq!(graphs.len(), 12);
        let by_betti = |b: i64| graphs.iter().filter(|g| g.betti1() == b).count();
        assert_eq!(by_betti(0), 6);
        assert_eq!(by_betti(1), 4);
        assert_eq!(by_betti(2), 2);
    }

    #[test]
    fn genus_zero_enumeration_yields_trees() {
        for n in [3usize, 4] {
            let graphs = enumerate_decorated(n, 0);
            assert!(!graphs.is_empty());
            for g in &graphs {
                assert_eq!(g.betti1(), 0, "genus-zero graphs are trees");
                assert!(g
                    .blacks
                    .iter()
                    .all(|(gi, d)| *gi == 0 && d.iter().all(|&(_, h)| h == 0)));
            }
        }
        // n = 3: one 3-valent black vertex, plus three labelled chains
        assert_eq!(enumerate_decorated(3, 0).len(), 4);
    }

    #[test]
    fn every_graph_satisfies_the_defining_conditions() {
        for (n, g) in [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1)] {
            for gr in enumerate_decorated(n, g) {
                assert_eq!(gr.genus(), g as i64);
                assert!(gr.betti1() >= 0);
                for (gi, d) in &gr.blacks {
                    assert!(!d.is_empty());
                    let chi = 2i64
                        - *gi as i64
                        - d.iter().map(|&(_, h)| h as i64 + 1).sum::<i64>();
                    assert!(chi <= 0, "Euler condition violated");
                    for &(l, _) in d {
                        assert!((1..=n).contains(&l));
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_forms_are_pairwise_distinct() {
        for (n, g) in [(1, 2), (2, 1), (2, 2)] {
            let graphs = enumerate_decorated(n, g);
            let rendered: BTreeSet<String> =
                graphs.iter().map(|g| format!("{g:?}")).collect();
            assert_eq!(rendered.len(), graphs.len());
        }
    }

    // ---- plain graphs ----

    #[test]
    fn one_point_low_order_plain_graphs() {
        // order 1: the bare white vertex and one 2-valent black vertex
        let graphs = enumerate_plain(1, 1);
        assert_eq!(graphs.len(), 2);
        assert!(graphs.iter().any(|g| g.blacks.is_empty()));
        assert!(graphs.iter().any(|g| g.blacks == vec![vec![1, 1]]));
    }

    #[test]
    fn one_point_order_three_reproduces_the_four_shapes() {
        let graphs = enumerate_plain(1, 3);
        let expected: Vec<Vec<Vec<usize>>> = vec![
            vec![],
            vec![vec![1, 1]],
            vec![vec![1, 1], vec![1, 1]],
            vec![vec![1, 1, 1]],
        ];
        assert_eq!(graphs.len(), 4);
        for e in expected {
            assert!(graphs.iter().any(|g| g.blacks == e), "missing {e:?}");
        }
    }

    #[test]
    fn two_point_order_two_has_six_graphs() {
        let graphs = enumerate_plain(2, 2);
        assert_eq!(graphs.len(), 6);
        let tree = graphs
            .iter()
            .find(|g| g.blacks == vec![vec![1, 2]])
            .expect("tree present");
        assert_eq!(tree.automorphism_count(), 1);
        for g in &graphs {
            if g.blacks != vec![vec![1, 2]] {
                assert_eq!(g.automorphism_count(), 2, "graph {g:?}");
            }
        }
    }

    // ---- automorphisms and betti ----

    #[test]
    fn automorphism_counts_of_the_one_point_shapes() {
        // the four one-point shapes have |Aut| = 1, 2, 8, 6
        let lone = PlainGraph {
            n: 1,
            blacks: vec![],
        };
        let two = PlainGraph {
            n: 1,
            blacks: vec![vec![1, 1]],
        };
        let pair = PlainGraph {
            n: 1,
            blacks: vec![vec![1, 1], vec![1, 1]],
        };
        let triple = PlainGraph {
            n: 1,
            blacks: vec![vec![1, 1, 1]],
        };
        assert_eq!(lone.automorphism_count(), 1);
        assert_eq!(two.automorphism_count(), 2);
        assert_eq!(pair.automorphism_count(), 8);
        assert_eq!(triple.automorphism_count(), 6);
    }

    #[test]
    fn betti_numbers() {
        let triple = decorated(1, vec![(0, vec![(1, 0), (1, 0), (1, 0)])]);
        assert_eq!(triple.betti1(), 2);
        for t in enumerate_decorated(3, 0) {
            assert_eq!(t.betti1(), 0);
        }
        let two = decorated(1, vec![(0, vec![(1, 0), (1, 0)])]);
        assert_eq!(two.betti1(), 1);
    }

    #[test]
    fn brute_force_agreement_on_small_graphs() {
        for (n, g) in [(1u32, 1usize), (2, 1), (1, 2), (2, 2), (3, 1)] {
            let (n, g) = (g, n); // (n, g) pairs above are (g, n); swap
            for gr in enumerate_decorated(n, g as u32) {
                if gr.edge_count() <= 5 {
                    assert_eq!(
                        gr.automorphism_count(),
                        automorphisms_brute_force(&gr),
                        "graph {gr:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn decorated_aut_distinguishes_edge_decorations() {
        // parallel edges with equal h: swap allowed
        let same = decorated(1, vec![(0, vec![(1, 1), (1, 1)])]);
        assert_eq!(same.automorphism_count(), 2);
        // parallel edges with different h: no swap
        let diff = decorated(1, vec![(0, vec![(1, 1), (1, 0)])]);
        assert_eq!(diff.automorphism_count(), 1);
    }

    #[test]
    fn shadow_drops_one_valent_blacks() {
        let g = decorated(
            2,
            vec![(1, vec![(1, 0)]), (0, vec![(1, 0), (2, 0)])],
        );
        let s = g.shadow();
        assert_eq!(s.blacks, vec![vec![1, 2]]);
    }
}
