//! Induced cycles in the cover graph between two adjacent ranks, and the
//! degree-`s` binomials they force among the minimal generators.

use crate::chains::{maximal_chains, MaximalChain};
use crate::lattice::DistLattice;
use crate::monomial::Monomial;
use crate::poset::{bit, bits, Poset};
use crate::toric::{fiber, fiber_components, Binomial, GeneratorMap};
use crate::{Error, Result};
use std::collections::{BTreeSet, HashMap};

/// The lexicographically first antichain of size `n`.
pub fn find_antichain(p: &Poset, n: usize) -> Result<Vec<usize>> {
    let width = p.width().0;
    if width < n {
        return Err(Error::WidthTooSmall { width, requested: n });
    }
    fn go(p: &Poset, from: usize, n: usize, acc: &mut Vec<usize>) -> bool {
        if acc.len() == n {
            return true;
        }
        for x in from..p.len() {
            if acc.iter().all(|&y| !p.comparable(x, y)) {
                acc.push(x);
                if go(p, x + 1, n, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    let mut acc = Vec::with_capacity(n);
    if go(p, 0, n, &mut acc) {
        Ok(acc)
    } else {
        Err(Error::Consistency(format!("no antichain of size {n} below width {width}")))
    }
}

/// An induced cycle `t_1 ⋖ t_{1,2} ⋗ t_2 ⋖ … ⋗ t_s ⋖ t_{s,1} ⋗ t_1` on ranks
/// `a` and `a + 1`, with the two families of chains through its matchings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    pub antichain: Option<Vec<usize>>,
    /// `I = (p_1, …, p_n) \ {p_1, …, p_n}` for the antichain construction.
    pub base_ideal: Option<u64>,
    pub rank_a: usize,
    /// `t_1, …, t_s`.
    pub low: Vec<usize>,
    /// `t_{1,2}, …, t_{s,1}`; `high[i]` covers `low[i]` and `low[i+1]`.
    pub high: Vec<usize>,
    /// `C_i` runs through `low[i]` then `high[i]`.
    pub chains_c: Vec<MaximalChain>,
    /// `Ĉ_i` runs through `low[i]` then `high[i-1]`.
    pub chains_chat: Vec<MaximalChain>,
}

/// Greedy descent to the bottom along the lower cover of smallest label.
fn extend_down(l: &DistLattice, t: usize) -> Vec<usize> {
    let mut path = vec![t];
    let mut x = t;
    while let Some(&y) = l.lower_covers(x).iter().min() {
        path.push(y);
        x = y;
    }
    path.reverse();
    path
}

fn extend_up(l: &DistLattice, t: usize) -> Vec<usize> {
    let mut path = vec![t];
    let mut x = t;
    while let Some(&y) = l.upper_covers(x).iter().min() {
        path.push(y);
        x = y;
    }
    path
}

fn covers(l: &DistLattice, lo: usize, hi: usize) -> bool {
    l.upper_covers(lo).contains(&hi)
}

impl CycleWitness {
    /// Check the induced-cycle property and extend both matchings to
    /// maximal chains.
    pub fn from_cycle(l: &DistLattice, low: Vec<usize>, high: Vec<usize>) -> Result<Self> {
        let s = low.len();
        if s < 3 {
            return Err(Error::CycleTooShort(s));
        }
        if high.len() != s {
            return Err(Error::Invalid("cycle needs as many high as low elements".into()));
        }
        let distinct: BTreeSet<usize> = low.iter().chain(&high).copied().collect();
        if distinct.len() != 2 * s || low.iter().chain(&high).any(|&t| t >= l.len()) {
            return Err(Error::Invalid("cycle elements must be distinct lattice elements".into()));
        }
        let a = l.rank(low[0]);
        if low.iter().any(|&t| l.rank(t) != a) || high.iter().any(|&t| l.rank(t) != a + 1) {
            return Err(Error::Invalid(format!("cycle must sit on ranks {a} and {}", a + 1)));
        }
        for i in 0..s {
            if !covers(l, low[i], high[i]) || !covers(l, low[(i + 1) % s], high[i]) {
                return Err(Error::Invalid(format!("missing cycle edge at position {}", i + 1)));
            }
        }
        let edges = low.iter().map(|&t| high.iter().filter(|&&h| covers(l, t, h)).count()).sum::<usize>();
        if edges != 2 * s {
            return Err(Error::Invalid(format!("cycle has {} chords", edges - 2 * s)));
        }
        let chain = |lo: usize, hi: usize| {
            let mut elems = extend_down(l, lo);
            elems.extend(extend_up(l, hi));
            MaximalChain { elems }
        };
        let chains_c = (0..s).map(|i| chain(low[i], high[i])).collect();
        let chains_chat = (0..s).map(|i| chain(low[i], high[(i + s - 1) % s])).collect();
        Ok(CycleWitness {
            antichain: None,
            base_ideal: None,
            rank_a: a,
            low,
            high,
            chains_c,
            chains_chat,
        })
    }

    pub fn degree(&self) -> usize {
        self.low.len()
    }

    pub fn monomial_c(&self) -> Monomial {
        product(&self.chains_c)
    }

    pub fn monomial_chat(&self) -> Monomial {
        product(&self.chains_chat)
    }

    /// `T_{C_1}⋯T_{C_s} - T_{Ĉ_1}⋯T_{Ĉ_s}` in the variables of `g`, whose
    /// generators are the chain monomials in label-lex order.
    pub fn binomial(&self, g: &GeneratorMap) -> Result<Binomial> {
        let index: HashMap<&Monomial, usize> = g.generators().iter().enumerate().map(|(i, u)| (u, i)).collect();
        let exps = |chains: &[MaximalChain]| -> Result<Vec<u32>> {
            let mut e = vec![0u32; g.len()];
            for c in chains {
                let i = index
                    .get(&c.monomial())
                    .ok_or_else(|| Error::Invalid("witness chain is not a generator".into()))?;
                e[*i] += 1;
            }
            Ok(e)
        };
        Binomial::new(g, exps(&self.chains_c)?, exps(&self.chains_chat)?)
    }
}

fn product(chains: &[MaximalChain]) -> Monomial {
    chains.iter().fold(Monomial::one(), |acc, c| acc.mul(&c.monomial()))
}

/// The antichain construction: `t_i = I ∪ {p_i}` and
/// `t_{i,i+1} = I ∪ {p_i, p_{i+1}}`.
pub fn build_cycle_witness(l: &DistLattice, antichain: &[usize]) -> Result<CycleWitness> {
    let p = l.source();
    let s = antichain.len();
    if s < 3 {
        return Err(Error::CycleTooShort(s));
    }
    let mask = antichain.iter().fold(0u64, |m, &x| m | bit(x));
    if antichain.iter().any(|&x| x >= p.len()) || mask.count_ones() as usize != s || !p.is_antichain(mask) {
        return Err(Error::Invalid("elements do not form an antichain".into()));
    }
    let base = p.downset_of(mask) & !mask;
    let find = |m: u64| l.index_of(m).ok_or_else(|| Error::Consistency("ideal missing from lattice".into()));
    let low = antichain.iter().map(|&x| find(base | bit(x))).collect::<Result<Vec<_>>>()?;
    let high = (0..s)
        .map(|i| find(base | bit(antichain[i]) | bit(antichain[(i + 1) % s])))
        .collect::<Result<Vec<_>>>()?;
    let mut w = CycleWitness::from_cycle(l, low, high)
        .map_err(|e| Error::Consistency(format!("antichain construction failed: {e}")))?;
    w.antichain = Some(antichain.to_vec());
    w.base_ideal = Some(base);
    Ok(w)
}

/// Parse a cycle given as alternating low and high elements, each written
/// as comma-separated names of source elements (`-` for the empty ideal).
/// Lines starting with `#` are ignored.
pub fn parse_cycle(l: &DistLattice, text: &str) -> Result<(Vec<usize>, Vec<usize>)> {
    let p = l.source();
    let mut elems = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        for tok in line.split_whitespace() {
            let mut mask = 0u64;
            if tok != "-" {
                for name in tok.split(',') {
                    let x = p.index_of(name).ok_or_else(|| Error::Parse {
                        line: lineno + 1,
                        message: format!("unknown element `{name}`"),
                    })?;
                    mask |= bit(x);
                }
            }
            let t = l.index_of(mask).ok_or_else(|| Error::Parse {
                line: lineno + 1,
                message: format!("`{tok}` is not an order ideal"),
            })?;
            elems.push(t);
        }
    }
    if elems.len() % 2 != 0 {
        return Err(Error::Parse { line: 0, message: "cycle needs an even number of elements".into() });
    }
    let low = elems.iter().step_by(2).copied().collect();
    let high = elems.iter().skip(1).step_by(2).copied().collect();
    Ok((low, high))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    pub in_kernel: bool,
    pub minimal: bool,
    pub fiber_size: usize,
    pub components: usize,
    /// Every fiber point meets ranks `a`, `a + 1` in one of the two perfect
    /// matchings of the cycle.
    pub restriction_holds: bool,
}

/// Enumerate the fiber of the witness monomial and check that `C` and `Ĉ`
/// lie in different components under moves of lower degree.
pub fn verify_witness(l: &DistLattice, w: &CycleWitness, max_chains: usize, node_cap: usize) -> Result<WitnessReport> {
    let target = w.monomial_c();
    let in_kernel = target == w.monomial_chat();
    let chains = maximal_chains(l, max_chains)?;
    let g = GeneratorMap::new(chains.iter().map(|c| c.monomial()).collect(), l.len())?;
    if !in_kernel {
        return Ok(WitnessReport { in_kernel, minimal: false, fiber_size: 0, components: 0, restriction_holds: false });
    }
    let b = w.binomial(&g)?;
    let points = fiber(&g, &target, w.degree(), node_cap)?;
    let (comp, components) = fiber_components(&points);
    let find = |e: &Vec<u32>| points.iter().position(|p| p == e);
    let (Some(ic), Some(ih)) = (find(&b.plus), find(&b.minus)) else {
        return Err(Error::Consistency("witness terms missing from their fiber".into()));
    };
    let s = w.degree();
    let a = w.rank_a;
    let matching = |shift: usize| -> BTreeSet<(usize, usize)> {
        (0..s).map(|i| (w.low[i], w.high[(i + s - shift) % s])).collect()
    };
    let (m1, m2) = (matching(0), matching(1));
    let restriction_holds = points.iter().all(|e| {
        let pairs: BTreeSet<(usize, usize)> = e
            .iter()
            .enumerate()
            .filter(|&(_, &k)| k > 0)
            .map(|(i, _)| (chains[i].elems[a], chains[i].elems[a + 1]))
            .collect();
        // a repeated chain would repeat a low element, which the target forbids
        e.iter().all(|&k| k <= 1) && (pairs == m1 || pairs == m2)
    });
    Ok(WitnessReport {
        in_kernel,
        minimal: comp[ic] != comp[ih],
        fiber_size: points.len(),
        components,
        restriction_holds,
    })
}

/// Longest induced cycle in the cover graph between ranks `a` and `a + 1`,
/// by exhaustive search over induced paths from each smallest low vertex.
/// Returns `(low, high)` in cycle order, or `None` if the graph is a forest.
pub fn longest_induced_cycle(l: &DistLattice, a: usize, node_cap: usize) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    let low: Vec<usize> = l.rank_level(a).collect();
    let high: Vec<usize> = l.rank_level(a + 1).collect();
    let verts: Vec<usize> = low.iter().chain(&high).copied().collect();
    if verts.len() > 64 {
        return Err(Error::Budget { budget: "cycle_search_vertices", limit: 64 });
    }
    let pos: HashMap<usize, usize> = verts.iter().enumerate().map(|(k, &t)| (t, k)).collect();
    let mut adj = vec![0u64; verts.len()];
    for &t in &low {
        for &h in l.upper_covers(t) {
            if let Some(&k) = pos.get(&h) {
                adj[pos[&t]] |= bit(k);
                adj[k] |= bit(pos[&t]);
            }
        }
    }
    let mut best: Option<Vec<usize>> = None;
    let mut nodes = 0usize;

    // path[0] is the smallest vertex of the cycle; path vertices other than
    // the endpoints have no neighbours on the path besides their two
    // path neighbours
    fn go(
        adj: &[u64],
        path: &mut Vec<usize>,
        on_path: u64,
        nodes: &mut usize,
        cap: usize,
        best: &mut Option<Vec<usize>>,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > cap {
            return Err(Error::Budget { budget: "max_fiber_nodes", limit: cap });
        }
        let start = path[0];
        let last = *path.last().unwrap();
        let interior = on_path & !bit(start) & !bit(last);
        for w in bits(adj[last] & !on_path) {
            if w < start || adj[w] & interior != 0 {
                continue;
            }
            if path.len() >= 2 && adj[w] & bit(start) != 0 {
                if path.len() >= 5 && best.as_ref().is_none_or(|b| path.len() + 1 > b.len()) {
                    let mut cycle = path.clone();
                    cycle.push(w);
                    *best = Some(cycle);
                }
                continue;
            }
            path.push(w);
            go(adj, path, on_path | bit(w), nodes, cap, best)?;
            path.pop();
        }
        Ok(())
    }

    for s in 0..low.len() {
        let mut path = vec![s];
        go(&adj, &mut path, bit(s), &mut nodes, node_cap, &mut best)?;
    }
    Ok(best.map(|cycle| {
        let lo = cycle.iter().step_by(2).map(|&k| verts[k]).collect();
        let hi = cycle.iter().skip(1).step_by(2).map(|&k| verts[k]).collect();
        (lo, hi)
    }))
}
