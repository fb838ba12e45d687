//! Maximal chains of a distributive lattice, their monomials, the
//! equal-rank exchange graph, Krull dimension, and for planar lattices the
//! lattice of maximal chains ordered by "weakly above-left".

use crate::lattice::{DistLattice, GridEmbedding};
use crate::linalg;
use crate::monomial::Monomial;
use crate::poset::{bit, Poset};
use crate::scalar::ExactInt;
use crate::{Error, Result};
use std::cmp::Ordering;
use std::collections::HashMap;

/// `c_0 ⋖ c_1 ⋖ … ⋖ c_{r+1}`, one element per rank, from bottom to top.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MaximalChain {
    pub elems: Vec<usize>,
}

impl MaximalChain {
    /// Elements strictly between bottom and top.
    pub fn interior(&self) -> &[usize] {
        let n = self.elems.len();
        if n <= 2 {
            &[]
        } else {
            &self.elems[1..n - 1]
        }
    }

    /// `t_C`: the product of the interior elements, variables indexed by label.
    pub fn monomial(&self) -> Monomial {
        Monomial::new(self.interior().to_vec())
    }

    pub fn is_valid_in(&self, l: &DistLattice) -> bool {
        self.elems.first() == Some(&l.bottom())
            && self.elems.last() == Some(&l.top())
            && self.elems.len() == l.height() + 1
            && self.elems.windows(2).all(|w| l.upper_covers(w[0]).contains(&w[1]))
    }

    pub fn labels(&self, l: &DistLattice) -> Vec<String> {
        self.elems.iter().map(|&t| l.label(t)).collect()
    }
}

pub fn chain_monomial(c: &MaximalChain) -> Monomial {
    c.monomial()
}

/// All maximal chains by depth-first search along upper covers. Covers are
/// visited in label order, so the output is lexicographic in the label
/// sequences.
pub fn maximal_chains(l: &DistLattice, max_chains: usize) -> Result<Vec<MaximalChain>> {
    let mut out = Vec::new();
    let mut path = vec![l.bottom()];
    fn dfs(
        l: &DistLattice,
        path: &mut Vec<usize>,
        out: &mut Vec<MaximalChain>,
        cap: usize,
    ) -> Result<()> {
        let last = *path.last().unwrap();
        if last == l.top() {
            if out.len() == cap {
                return Err(Error::Budget { budget: "max_chains", limit: cap });
            }
            out.push(MaximalChain { elems: path.clone() });
            return Ok(());
        }
        for &next in l.upper_covers(last) {
            path.push(next);
            dfs(l, path, out, cap)?;
            path.pop();
        }
        Ok(())
    }
    dfs(l, &mut path, &mut out, max_chains)?;
    Ok(out)
}

/// Graph on all lattice elements joining equal-rank `u`, `v` whose join sits
/// one rank higher.
#[derive(Debug, Clone)]
pub struct ChainGraph {
    pub edges: Vec<(usize, usize)>,
    pub component: Vec<usize>,
    pub components: usize,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

pub fn chain_graph(l: &DistLattice) -> Result<ChainGraph> {
    let n = l.len();
    let mut edges = Vec::new();
    let mut uf = UnionFind::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if l.rank(u) == l.rank(v) && l.rank(l.join(u, v)) == l.rank(u) + 1 {
                edges.push((u, v));
                uf.union(u, v);
            }
        }
    }
    let mut ids = HashMap::new();
    let component: Vec<usize> = (0..n)
        .map(|t| {
            let root = uf.find(t);
            let next = ids.len();
            *ids.entry(root).or_insert(next)
        })
        .collect();
    let components = ids.len();
    if components != l.height() + 1 {
        return Err(Error::Consistency(format!(
            "exchange graph has {components} components, expected {}",
            l.height() + 1
        )));
    }
    Ok(ChainGraph { edges, component, components })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KrullDimension {
    pub dim: usize,
    pub by_formula: usize,
    pub by_rank: usize,
}

/// `|L| - |P|`, checked against the rank of the chain exponent vectors.
///
/// Each exponent vector is extended by a constant 1 coordinate. For chains of
/// positive length this leaves the rank unchanged (every row sums to the same
/// `r`); for the one-element poset it accounts for the single generator `1`.
pub fn krull_dimension_with<T: ExactInt>(
    l: &DistLattice,
    chains: &[MaximalChain],
) -> Result<KrullDimension> {
    let by_formula = l.len() - l.height();
    let rows: Vec<Vec<i64>> = chains
        .iter()
        .map(|c| {
            let mut row = vec![0i64; l.len() + 1];
            for &t in c.interior() {
                row[t] += 1;
            }
            row[l.len()] = 1;
            row
        })
        .collect();
    let by_rank = linalg::rank::<T>(&rows)?;
    if by_rank != by_formula {
        return Err(Error::Consistency(format!(
            "exponent rank {by_rank} differs from |L| - |P| = {by_formula}"
        )));
    }
    Ok(KrullDimension { dim: by_rank, by_formula, by_rank })
}

pub fn krull_dimension(l: &DistLattice, max_chains: usize) -> Result<KrullDimension> {
    let chains = maximal_chains(l, max_chains)?;
    krull_dimension_with::<num_bigint::BigInt>(l, &chains)
}

/// Outcome of comparing two maximal chains rank by rank under the grid order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainOrder {
    Less,
    Greater,
    Equal,
    /// `rank` is the largest rank up to which the truncations are comparable;
    /// both chains pass through `element` there.
    Incomparable { rank: usize, element: usize },
}

fn cmp_prefix(c: &MaximalChain, d: &MaximalChain, g: &GridEmbedding, upto: usize) -> Option<Ordering> {
    let mut seen_less = false;
    let mut seen_greater = false;
    for k in 0..=upto {
        match g.total_cmp(c.elems[k], d.elems[k]) {
            Ordering::Less => seen_less = true,
            Ordering::Greater => seen_greater = true,
            Ordering::Equal => {}
        }
    }
    match (seen_less, seen_greater) {
        (false, false) => Some(Ordering::Equal),
        (true, false) => Some(Ordering::Less),
        (false, true) => Some(Ordering::Greater),
        (true, true) => None,
    }
}

pub fn chain_compare(c: &MaximalChain, d: &MaximalChain, g: &GridEmbedding) -> Result<ChainOrder> {
    if c.elems.len() != d.elems.len() {
        return Err(Error::Invalid("chains of different lengths".into()));
    }
    let last = c.elems.len() - 1;
    match cmp_prefix(c, d, g, last) {
        Some(Ordering::Less) => Ok(ChainOrder::Less),
        Some(Ordering::Greater) => Ok(ChainOrder::Greater),
        Some(Ordering::Equal) => Ok(ChainOrder::Equal),
        None => {
            let rank = (0..=last)
                .rev()
                .find(|&k| cmp_prefix(c, d, g, k).is_some())
                .expect("rank 0 prefixes always agree");
            if c.elems[rank] != d.elems[rank] {
                return Err(Error::Consistency("chains do not meet at their traversing point".into()));
            }
            Ok(ChainOrder::Incomparable { rank, element: c.elems[rank] })
        }
    }
}

fn rankwise(
    l: &DistLattice,
    c: &MaximalChain,
    d: &MaximalChain,
    g: &GridEmbedding,
    pick_max: bool,
) -> Result<MaximalChain> {
    let elems: Vec<usize> = c
        .elems
        .iter()
        .zip(&d.elems)
        .map(|(&x, &y)| {
            let x_first = g.total_cmp(x, y) != Ordering::Greater;
            if x_first != pick_max {
                x
            } else {
                y
            }
        })
        .collect();
    let out = MaximalChain { elems };
    if !out.is_valid_in(l) {
        return Err(Error::Consistency("rank-wise extremum is not a maximal chain".into()));
    }
    Ok(out)
}

/// Rank-wise minimum under the grid total order.
pub fn chain_meet(l: &DistLattice, c: &MaximalChain, d: &MaximalChain, g: &GridEmbedding) -> Result<MaximalChain> {
    rankwise(l, c, d, g, false)
}

/// Rank-wise maximum under the grid total order.
pub fn chain_join(l: &DistLattice, c: &MaximalChain, d: &MaximalChain, g: &GridEmbedding) -> Result<MaximalChain> {
    rankwise(l, c, d, g, true)
}

/// Sort key refining the chain order: the sequence of grid keys.
pub fn grid_sort_key(c: &MaximalChain, g: &GridEmbedding) -> Vec<(usize, usize)> {
    c.elems.iter().map(|&t| g.key(t)).collect()
}

/// The maximal chains of a planar lattice as a distributive lattice.
#[derive(Debug, Clone)]
pub struct ChainLattice {
    /// Chains sorted lexicographically by grid keys, a linear extension of
    /// the chain order.
    pub chains: Vec<MaximalChain>,
    pub grid: GridEmbedding,
    index: HashMap<Vec<usize>, usize>,
    lower: Vec<Vec<usize>>,
    /// Join-irreducible chains, in chain order.
    pub join_irreducibles: Vec<usize>,
    /// The cell (lattice element with two lower covers) added by each
    /// join-irreducible.
    pub ji_cells: Vec<usize>,
    /// For each chain, the set of join-irreducibles below it.
    pub ideal_masks: Vec<u64>,
    /// Join-irreducibles as a poset, in the order of `join_irreducibles`.
    pub ji_poset: Poset,
}

impl ChainLattice {
    pub fn new(l: &DistLattice, max_chains: usize) -> Result<Self> {
        let grid = l.grid_embedding()?;
        let mut chains = maximal_chains(l, max_chains)?;
        chains.sort_by_cached_key(|c| grid_sort_key(c, &grid));
        let index: HashMap<Vec<usize>, usize> =
            chains.iter().enumerate().map(|(i, c)| (c.elems.clone(), i)).collect();
        let r = l.height();
        let mut lower = vec![Vec::new(); chains.len()];
        let mut flipped_at = vec![Vec::new(); chains.len()];
        for (i, c) in chains.iter().enumerate() {
            for k in 1..r {
                let (below, here, above) = (c.elems[k - 1], c.elems[k], c.elems[k + 1]);
                for &e in l.upper_covers(below) {
                    if e != here && l.upper_covers(e).contains(&above) && grid.total_cmp(e, here) == Ordering::Less {
                        let mut elems = c.elems.clone();
                        elems[k] = e;
                        let j = index[&elems];
                        lower[i].push(j);
                        flipped_at[i].push(k);
                    }
                }
            }
        }
        let join_irreducibles: Vec<usize> = (0..chains.len()).filter(|&i| lower[i].len() == 1).collect();
        if join_irreducibles.len() > 64 {
            return Err(Error::Invalid("more than 64 cells".into()));
        }
        let ji_cells: Vec<usize> = join_irreducibles
            .iter()
            .map(|&i| chains[i].elems[flipped_at[i][0] + 1])
            .collect();
        let leq = |a: usize, b: usize| {
            chains[a]
                .elems
                .iter()
                .zip(&chains[b].elems)
                .all(|(&x, &y)| grid.total_cmp(x, y) != Ordering::Greater)
        };
        let mut rel = Vec::new();
        for (x, &a) in join_irreducibles.iter().enumerate() {
            for (y, &b) in join_irreducibles.iter().enumerate() {
                if x != y && leq(a, b) {
                    rel.push((x, y));
                }
            }
        }
        let ji_poset = Poset::from_relations(join_irreducibles.len(), &rel)?;
        let ideal_masks: Vec<u64> = (0..chains.len())
            .map(|c| {
                join_irreducibles
                    .iter()
                    .enumerate()
                    .filter(|&(_, &j)| leq(j, c))
                    .fold(0u64, |m, (x, _)| m | bit(x))
            })
            .collect();
        let out = ChainLattice {
            chains,
            grid,
            index,
            lower,
            join_irreducibles,
            ji_cells,
            ideal_masks,
            ji_poset,
        };
        out.validate()?;
        Ok(out)
    }

    /// Check that chains correspond bijectively and order-isomorphically to
    /// the ideals of the join-irreducible poset, and that the latter is the
    /// cell poset of the grid.
    fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Consistency(format!("chain lattice: {msg}")));
        let jp = DistLattice::birkhoff(&self.ji_poset, self.chains.len() + 1)?;
        if jp.len() != self.chains.len() {
            return fail("size differs from the ideal lattice of its join-irreducibles");
        }
        for (i, &m) in self.ideal_masks.iter().enumerate() {
            if jp.index_of(m).is_none() {
                return fail("join-irreducibles below a chain do not form an ideal");
            }
            for (j, &n) in self.ideal_masks.iter().enumerate() {
                if (m & !n == 0) != self.leq(i, j) {
                    return fail("ideal map is not an order isomorphism");
                }
            }
        }
        let mut cells = self.ji_cells.clone();
        cells.sort_unstable();
        let mut expected = self.grid.cells().to_vec();
        expected.sort_unstable();
        if cells != expected {
            return fail("join-irreducibles do not match the cells of the grid");
        }
        for (x, &cx) in self.ji_cells.iter().enumerate() {
            for (y, &cy) in self.ji_cells.iter().enumerate() {
                if self.ji_poset.leq(x, y) != cell_leq(&self.grid, cx, cy) {
                    return fail("join-irreducible order differs from the cell order");
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn index_of(&self, c: &MaximalChain) -> Option<usize> {
        self.index.get(&c.elems).copied()
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.lower[i]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.chains[a]
            .elems
            .iter()
            .zip(&self.chains[b].elems)
            .all(|(&x, &y)| self.grid.total_cmp(x, y) != Ordering::Greater)
    }

    pub fn meet(&self, l: &DistLattice, a: usize, b: usize) -> Result<usize> {
        let m = chain_meet(l, &self.chains[a], &self.chains[b], &self.grid)?;
        self.index_of(&m).ok_or_else(|| Error::Consistency("meet is not a chain".into()))
    }

    pub fn join(&self, l: &DistLattice, a: usize, b: usize) -> Result<usize> {
        let m = chain_join(l, &self.chains[a], &self.chains[b], &self.grid)?;
        self.index_of(&m).ok_or_else(|| Error::Consistency("join is not a chain".into()))
    }

    /// The Young diagram cut by chain `i` from the top-left of the bounding
    /// rectangle, as row lengths from the top row down (trailing zeros
    /// dropped).
    pub fn young_diagram(&self, i: usize) -> Vec<usize> {
        let g = &self.grid;
        // Row `row` spans heights b-row-1 ..= b-row; its length is the x at
        // which the path first reaches height b-row.
        let pts: Vec<(usize, usize)> = self.chains[i].elems.iter().map(|&t| g.coord(t)).collect();
        let mut rows: Vec<usize> = (0..g.b)
            .map(|row| {
                let j_top = g.b - row;
                pts.iter().find(|&&(_, j)| j == j_top).map_or(0, |&(x, _)| x)
            })
            .collect();
        while rows.last() == Some(&0) {
            rows.pop();
        }
        rows
    }
}

/// Order on cells: `x` precedes `y` when `x` is weakly above and to the left.
pub fn cell_leq(g: &GridEmbedding, x: usize, y: usize) -> bool {
    let ((i1, j1), (i2, j2)) = (g.coord(x), g.coord(y));
    i1 <= i2 && j1 >= j2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::tests::{lattice, N4, CROSSED};

    fn chain_of(l: &DistLattice, g: &GridEmbedding, pts: &[(usize, usize)]) -> MaximalChain {
        let mut elems = vec![l.bottom()];
        elems.extend(pts.iter().map(|&(i, j)| g.element_at(i, j).unwrap()));
        elems.push(l.top());
        MaximalChain { elems }
    }

    #[test]
    fn n4_chains() {
        let l = lattice(N4);
        let chains = maximal_chains(&l, 100).unwrap();
        let monos: Vec<String> = chains
            .iter()
            .map(|c| c.monomial().display_with(|v| format!("t{v}")))
            .collect();
        assert_eq!(monos, ["t1t3t5", "t1t3t6", "t2t3t5", "t2t3t6", "t2t4t6"]);
        let mut sorted = chains.clone();
        sorted.sort();
        assert_eq!(sorted, chains);
    }

    #[test]
    fn chain_counts() {
        let c = DistLattice::birkhoff(&Poset::chain(3), 100).unwrap();
        assert_eq!(maximal_chains(&c, 100).unwrap().len(), 1);
        let b3 = DistLattice::birkhoff(&Poset::antichain(3), 100).unwrap();
        assert_eq!(maximal_chains(&b3, 100).unwrap().len(), 6);
        assert!(maximal_chains(&b3, 5).unwrap_err().is_budget());
        let two = DistLattice::birkhoff(&Poset::chain(1), 100).unwrap();
        let only = maximal_chains(&two, 10).unwrap();
        assert_eq!(only[0].monomial().degree(), 0);
    }

    #[test]
    fn exchange_graph_examples() {
        let l = lattice(N4);
        let g = chain_graph(&l).unwrap();
        assert_eq!(g.components, 5);
        assert!(g.edges.contains(&(1, 2)));
        let c = DistLattice::birkhoff(&Poset::chain(4), 100).unwrap();
        let gc = chain_graph(&c).unwrap();
        assert!(gc.edges.is_empty());
        assert_eq!(gc.components, 5);
        let b3 = DistLattice::birkhoff(&Poset::antichain(3), 100).unwrap();
        let gb = chain_graph(&b3).unwrap();
        assert_eq!(gb.components, 4);
        for pair in [(1, 2), (1, 3), (2, 3)] {
            assert!(gb.edges.contains(&pair));
        }
    }

    #[test]
    fn exchange_graph_matches_chain_differences() {
        for p in [Poset::antichain(3), crate::parse_poset(N4).unwrap(), Poset::two_chains(2, 2)] {
            let l = DistLattice::birkhoff(&p, 100).unwrap();
            let chains = maximal_chains(&l, 100).unwrap();
            let mut brute = std::collections::BTreeSet::new();
            for a in &chains {
                for b in &chains {
                    let only_a: Vec<_> = a.elems.iter().filter(|x| !b.elems.contains(x)).collect();
                    let only_b: Vec<_> = b.elems.iter().filter(|x| !a.elems.contains(x)).collect();
                    if only_a.len() == 1 && only_b.len() == 1 {
                        let (x, y) = (*only_a[0], *only_b[0]);
                        brute.insert((x.min(y), x.max(y)));
                    }
                }
            }
            let g = chain_graph(&l).unwrap();
            assert_eq!(g.edges.into_iter().collect::<std::collections::BTreeSet<_>>(), brute);
        }
    }

    #[test]
    fn krull_examples() {
        let k = krull_dimension(&lattice(N4), 100).unwrap();
        assert_eq!((k.dim, k.by_formula, k.by_rank), (4, 4, 4));
        let c = DistLattice::birkhoff(&Poset::chain(5), 100).unwrap();
        assert_eq!(krull_dimension(&c, 100).unwrap().dim, 1);
        assert_eq!(krull_dimension(&lattice(CROSSED), 1000).unwrap().dim, 9);
        let one = DistLattice::birkhoff(&Poset::chain(1), 100).unwrap();
        assert_eq!(krull_dimension(&one, 10).unwrap().dim, 1);
    }

    #[test]
    fn grid_chain_example() {
        let l = lattice(CROSSED);
        let g = l.grid_embedding().unwrap();
        let c = chain_of(&l, &g, &[(0, 1), (1, 1), (2, 1), (3, 1), (3, 2), (4, 2)]);
        let d = chain_of(&l, &g, &[(1, 0), (2, 0), (2, 1), (2, 2), (2, 3), (3, 3)]);
        let mono = c.interior().iter().map(|&t| g.grid_label(t)).collect::<Vec<_>>().join("");
        assert_eq!(mono, "t01t11t21t31t32t42");
        match chain_compare(&c, &d, &g).unwrap() {
            ChainOrder::Incomparable { element, .. } => assert_eq!(g.coord(element), (2, 1)),
            other => panic!("expected incomparable, got {other:?}"),
        }
        assert_eq!(chain_compare(&c, &c, &g).unwrap(), ChainOrder::Equal);
        let meet = chain_meet(&l, &c, &d, &g).unwrap();
        let join = chain_join(&l, &c, &d, &g).unwrap();
        assert_eq!(meet, chain_of(&l, &g, &[(0, 1), (1, 1), (2, 1), (2, 2), (2, 3), (3, 3)]));
        assert_eq!(join, chain_of(&l, &g, &[(1, 0), (2, 0), (2, 1), (3, 1), (3, 2), (4, 2)]));
        assert_eq!(chain_meet(&l, &c, &c, &g).unwrap(), c);
    }

    #[test]
    fn crossed_chain_lattice() {
        let l = lattice(CROSSED);
        let cl = ChainLattice::new(&l, 1000).unwrap();
        assert_eq!(cl.len(), 27);
        assert_eq!(cl.ji_poset.len(), 8);
        assert_eq!(cl.young_diagram(0), vec![2, 1]);
        assert_eq!(cl.young_diagram(cl.len() - 1), vec![4, 4, 3]);
        let first = &cl.chains[0];
        let last = &cl.chains[cl.len() - 1];
        assert_eq!(chain_compare(first, last, &cl.grid).unwrap(), ChainOrder::Less);
        for d in 0..cl.len() {
            assert_eq!(cl.meet(&l, 0, d).unwrap(), 0);
        }
        // the example chains C, D and their meet/join as Young diagrams
        let g = &cl.grid;
        let c = chain_of(&l, g, &[(0, 1), (1, 1), (2, 1), (3, 1), (3, 2), (4, 2)]);
        let d = chain_of(&l, g, &[(1, 0), (2, 0), (2, 1), (2, 2), (2, 3), (3, 3)]);
        let (ci, di) = (cl.index_of(&c).unwrap(), cl.index_of(&d).unwrap());
        assert_eq!(cl.young_diagram(ci), vec![4, 3]);
        assert_eq!(cl.young_diagram(di), vec![2, 2, 2]);
        assert_eq!(cl.young_diagram(cl.meet(&l, ci, di).unwrap()), vec![2, 2]);
        assert_eq!(cl.young_diagram(cl.join(&l, ci, di).unwrap()), vec![4, 3, 2]);
    }

    #[test]
    fn flip_covers_are_the_transitive_reduction() {
        let l = lattice(CROSSED);
        let cl = ChainLattice::new(&l, 1000).unwrap();
        for b in 0..cl.len() {
            let mut reduction: Vec<usize> = (0..cl.len())
                .filter(|&a| {
                    a != b
                        && cl.leq(a, b)
                        && !(0..cl.len()).any(|m| m != a && m != b && cl.leq(a, m) && cl.leq(m, b))
                })
                .collect();
            let mut flips = cl.lower_covers(b).to_vec();
            reduction.sort_unstable();
            flips.sort_unstable();
            assert_eq!(reduction, flips);
        }
    }

    #[test]
    fn rectangle_chain_lattice_is_young_box() {
        for (a, b) in [(1, 1), (2, 2), (2, 3), (3, 3)] {
            let l = DistLattice::birkhoff(&Poset::two_chains(a, b), 1000).unwrap();
            let cl = ChainLattice::new(&l, 1000).unwrap();
            assert_eq!(cl.len() as u64, crate::scalar::binomial::<u64>(a + b, a).unwrap());
            assert_eq!(cl.ji_poset.len(), a * b);
        }
        let c = DistLattice::birkhoff(&Poset::chain(3), 100).unwrap();
        assert_eq!(ChainLattice::new(&c, 10).unwrap().len(), 1);
    }
}
