//! The distributive lattice `J(P)` of order ideals of a poset, with its
//! canonical labelling `t_0 .. t_{s+1}` and, for width at most two, the
//! embedding into the integer grid.

use crate::poset::{bit, bits, Poset};
use crate::{Error, Result};
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

#[derive(Debug, Clone)]
pub struct DistLattice {
    source: Poset,
    ideals: Vec<u64>,
    index: HashMap<u64, usize>,
    lower: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
}

impl DistLattice {
    /// Enumerate all downsets of `p` by breadth-first search from the empty
    /// ideal. Elements are labelled in (cardinality, bitmask) order.
    pub fn birkhoff(p: &Poset, max_ideals: usize) -> Result<Self> {
        let mut seen: HashSet<u64> = HashSet::new();
        let mut queue = VecDeque::from([0u64]);
        seen.insert(0);
        while let Some(ideal) = queue.pop_front() {
            for v in bits(p.addable(ideal)) {
                let next = ideal | bit(v);
                if seen.insert(next) {
                    if seen.len() > max_ideals {
                        return Err(Error::Budget { budget: "max_ideals", limit: max_ideals });
                    }
                    queue.push_back(next);
                }
            }
        }
        let mut ideals: Vec<u64> = seen.into_iter().collect();
        ideals.sort_by_key(|&m| (m.count_ones(), m));
        let index: HashMap<u64, usize> = ideals.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut lower = vec![Vec::new(); ideals.len()];
        let mut upper = vec![Vec::new(); ideals.len()];
        for (i, &m) in ideals.iter().enumerate() {
            for v in bits(p.addable(m)) {
                let j = index[&(m | bit(v))];
                upper[i].push(j);
                lower[j].push(i);
            }
        }
        for list in upper.iter_mut().chain(lower.iter_mut()) {
            list.sort_unstable();
        }
        Ok(DistLattice { source: p.clone(), ideals, index, lower, upper })
    }

    pub fn source(&self) -> &Poset {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn ideal(&self, t: usize) -> u64 {
        self.ideals[t]
    }

    pub fn ideals(&self) -> &[u64] {
        &self.ideals
    }

    pub fn index_of(&self, ideal: u64) -> Option<usize> {
        self.index.get(&ideal).copied()
    }

    pub fn rank(&self, t: usize) -> usize {
        self.ideals[t].count_ones() as usize
    }

    /// Rank of the top element, i.e. `|P|`.
    pub fn height(&self) -> usize {
        self.source.len()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.ideals.len() - 1
    }

    pub fn lower_covers(&self, t: usize) -> &[usize] {
        &self.lower[t]
    }

    pub fn upper_covers(&self, t: usize) -> &[usize] {
        &self.upper[t]
    }

    /// All cover pairs `(u, v)` with `u` covered by `v`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|u| self.upper[u].iter().map(move |&v| (u, v)))
            .collect()
    }

    pub fn leq(&self, u: usize, v: usize) -> bool {
        self.ideals[u] & !self.ideals[v] == 0
    }

    pub fn meet(&self, u: usize, v: usize) -> usize {
        self.index[&(self.ideals[u] & self.ideals[v])]
    }

    pub fn join(&self, u: usize, v: usize) -> usize {
        self.index[&(self.ideals[u] | self.ideals[v])]
    }

    /// Elements of a given rank, in label order.
    pub fn rank_level(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&t| self.rank(t) == k)
    }

    /// Elements covering exactly one element.
    pub fn join_irreducible_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&t| self.lower[t].len() == 1).collect()
    }

    /// The induced subposet of join-irreducibles. Each is a principal ideal
    /// and is named after its generating element of the source poset.
    pub fn join_irreducibles(&self) -> Poset {
        let ji = self.join_irreducible_elements();
        let names = ji
            .iter()
            .map(|&t| {
                let m = self.ideals[t];
                let top = bits(m)
                    .find(|&x| self.source.down_set(x) == m)
                    .expect("join-irreducible ideals are principal");
                self.source.name(top).to_string()
            })
            .collect();
        let mut rel = Vec::new();
        for (i, &u) in ji.iter().enumerate() {
            for (j, &v) in ji.iter().enumerate() {
                if i != j && self.leq(u, v) {
                    rel.push((i, j));
                }
            }
        }
        Poset::new(names, &rel).expect("inclusion order is a partial order")
    }

    pub fn width(&self) -> usize {
        self.source.width().0
    }

    pub fn is_planar(&self) -> bool {
        self.width() <= 2
    }

    pub fn grid_embedding(&self) -> Result<GridEmbedding> {
        GridEmbedding::new(self)
    }

    pub fn label(&self, t: usize) -> String {
        format!("t{t}")
    }

    /// Names of the source elements contained in the ideal `t`.
    pub fn ideal_names(&self, t: usize) -> Vec<String> {
        bits(self.ideals[t]).map(|x| self.source.name(x).to_string()).collect()
    }

    /// Hasse diagram in Graphviz DOT syntax, bottom to top.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=plaintext];\n");
        for t in 0..self.len() {
            let _ = writeln!(s, "  t{t} [label=\"t{t} {{{}}}\"];", self.ideal_names(t).join(","));
        }
        for (u, v) in self.covers() {
            let _ = writeln!(s, "  t{u} -> t{v} [arrowhead=none];");
        }
        s.push_str("}\n");
        s
    }
}

/// Coordinates `(i, j) = (|I ∩ A|, |I ∩ B|)` for a planar lattice, where
/// `A`, `B` are the two chains of the canonical chain decomposition.
#[derive(Debug, Clone)]
pub struct GridEmbedding {
    pub a: usize,
    pub b: usize,
    pub chain_a: Vec<usize>,
    pub chain_b: Vec<usize>,
    coord: Vec<(usize, usize)>,
    at: HashMap<(usize, usize), usize>,
    cells: Vec<usize>,
}

impl GridEmbedding {
    fn new(l: &DistLattice) -> Result<Self> {
        let p = l.source();
        let decomposition = p.chain_decomposition();
        if decomposition.chains.len() > 2 {
            return Err(Error::NonPlanar { width: decomposition.chains.len() });
        }
        let mut chains = decomposition.chains.into_iter();
        let chain_a = chains.next().unwrap_or_default();
        let chain_b = chains.next().unwrap_or_default();
        let mask_a = chain_a.iter().fold(0u64, |m, &x| m | bit(x));
        let mask_b = chain_b.iter().fold(0u64, |m, &x| m | bit(x));
        let coord: Vec<(usize, usize)> = l
            .ideals()
            .iter()
            .map(|&m| ((m & mask_a).count_ones() as usize, (m & mask_b).count_ones() as usize))
            .collect();
        let at: HashMap<_, _> = coord.iter().enumerate().map(|(t, &c)| (c, t)).collect();
        if at.len() != coord.len() {
            return Err(Error::Consistency("grid coordinates are not injective".into()));
        }
        let cells = (0..l.len()).filter(|&t| l.lower_covers(t).len() == 2).collect();
        Ok(GridEmbedding { a: chain_a.len(), b: chain_b.len(), chain_a, chain_b, coord, at, cells })
    }

    pub fn coord(&self, t: usize) -> (usize, usize) {
        self.coord[t]
    }

    pub fn element_at(&self, i: usize, j: usize) -> Option<usize> {
        self.at.get(&(i, j)).copied()
    }

    /// Sort key of the total order on labels: by rank, then by the first
    /// coordinate.
    pub fn key(&self, t: usize) -> (usize, usize) {
        let (i, j) = self.coord[t];
        (i + j, i)
    }

    pub fn total_cmp(&self, u: usize, v: usize) -> std::cmp::Ordering {
        self.key(u).cmp(&self.key(v))
    }

    /// Lattice elements with exactly two lower covers; each is the top-right
    /// corner of one unit cell of the embedding.
    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn grid_label(&self, t: usize) -> String {
        let (i, j) = self.coord[t];
        format!("t{i}{j}")
    }
}
