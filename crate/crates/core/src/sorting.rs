//! The sorting operator on pairs of equal-degree monomials, sortable sets,
//! their quadratic sorting relations, and the realisation of Hibi relations
//! as sorting relations.

use crate::lattice::{DistLattice, GridEmbedding};
use crate::monomial::Monomial;
use crate::poset::{bit, Poset};
use crate::{Error, Result};
use std::collections::{BTreeSet, HashMap};

/// A total order on variables, given as the position of each variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortContext {
    position: Vec<usize>,
}

impl SortContext {
    /// Variables ordered by index.
    pub fn natural(nvars: usize) -> Self {
        SortContext { position: (0..nvars).collect() }
    }

    /// Variables ordered by `keys`, ties broken by index.
    pub fn from_keys<K: Ord>(keys: &[K]) -> Self {
        let mut order: Vec<usize> = (0..keys.len()).collect();
        order.sort_by(|&a, &b| keys[a].cmp(&keys[b]).then(a.cmp(&b)));
        let mut position = vec![0; keys.len()];
        for (p, &v) in order.iter().enumerate() {
            position[v] = p;
        }
        SortContext { position }
    }

    /// Variable order for chain monomials: the grid order for planar
    /// lattices, otherwise label order (which is already rank-first).
    pub fn for_lattice(l: &DistLattice, grid: Option<&GridEmbedding>) -> Self {
        match grid {
            Some(g) => {
                let keys: Vec<_> = (0..l.len()).map(|t| g.key(t)).collect();
                Self::from_keys(&keys)
            }
            None => Self::natural(l.len()),
        }
    }

    pub fn position(&self, var: usize) -> usize {
        self.position[var]
    }

    pub fn len(&self) -> usize {
        self.position.len()
    }

    pub fn is_empty(&self) -> bool {
        self.position.is_empty()
    }
}

/// Sort the concatenated word of `u·v` and split it into the odd and even
/// letters.
pub fn sort_pair(u: &Monomial, v: &Monomial, ctx: &SortContext) -> Result<(Monomial, Monomial)> {
    if u.degree() != v.degree() {
        return Err(Error::DegreeMismatch { left: u.degree(), right: v.degree() });
    }
    let mut word: Vec<usize> = u.vars().iter().chain(v.vars()).copied().collect();
    word.sort_by_key(|&x| (ctx.position(x), x));
    let odd = word.iter().step_by(2).copied().collect();
    let even = word.iter().skip(1).step_by(2).copied().collect();
    Ok((Monomial::new(odd), Monomial::new(even)))
}

pub fn is_sorted_pair(u: &Monomial, v: &Monomial, ctx: &SortContext) -> Result<bool> {
    let (a, b) = sort_pair(u, v, ctx)?;
    Ok((a == *u && b == *v) || (a == *v && b == *u))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortableCheck {
    pub sortable: bool,
    /// A pair of indices whose sorting leaves the set.
    pub witness: Option<(usize, usize)>,
}

fn index_of(set: &[Monomial]) -> HashMap<&Monomial, usize> {
    set.iter().enumerate().map(|(i, m)| (m, i)).collect()
}

pub fn is_sortable_set(set: &[Monomial], ctx: &SortContext) -> Result<SortableCheck> {
    let idx = index_of(set);
    for i in 0..set.len() {
        for j in i..set.len() {
            let (a, b) = sort_pair(&set[i], &set[j], ctx)?;
            if !idx.contains_key(&a) || !idx.contains_key(&b) {
                return Ok(SortableCheck { sortable: false, witness: Some((i, j)) });
            }
        }
    }
    Ok(SortableCheck { sortable: true, witness: None })
}

/// `{i, j}` unsorted with `sort(u_i, u_j) = (u_k, u_l)`; indices are 0-based
/// positions in the generating set and `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SortingRelation {
    pub lhs: (usize, usize),
    pub rhs: (usize, usize),
}

/// One relation per unsorted unordered pair, in lexicographic order of `lhs`.
pub fn sorting_relations(set: &[Monomial], ctx: &SortContext) -> Result<Vec<SortingRelation>> {
    let idx = index_of(set);
    let mut out = Vec::new();
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            let (a, b) = sort_pair(&set[i], &set[j], ctx)?;
            let (Some(&k), Some(&l)) = (idx.get(&a), idx.get(&b)) else {
                return Err(Error::NotSortable(i, j));
            };
            if (k, l) != (i, j) && (k, l) != (j, i) {
                out.push(SortingRelation { lhs: (i, j), rhs: (k, l) });
            }
        }
    }
    Ok(out)
}

/// Monomials `m_I = x^(1)_{k_1} ⋯ x^(n)_{k_n}` with `k_i = |I ∩ A_i|` for a
/// fixed minimum chain decomposition `A_1, …, A_n`.
#[derive(Debug, Clone)]
pub struct HibiMonomials {
    pub chains: Vec<Vec<usize>>,
    /// Variable `offsets[b] + k` stands for `x^(b+1)_k`.
    pub offsets: Vec<usize>,
    pub nvars: usize,
    /// Indexed by lattice label.
    pub monomials: Vec<Monomial>,
}

impl HibiMonomials {
    pub fn var_name(&self, var: usize) -> String {
        let block = self.offsets.iter().rposition(|&o| o <= var).unwrap_or(0);
        format!("x{}_{}", block + 1, var - self.offsets[block])
    }

    pub fn context(&self) -> SortContext {
        SortContext::natural(self.nvars)
    }
}

pub fn hibi_sort_monomials(l: &DistLattice) -> HibiMonomials {
    let p: &Poset = l.source();
    let chains = p.chain_decomposition().chains;
    let masks: Vec<u64> = chains.iter().map(|c| c.iter().fold(0, |m, &x| m | bit(x))).collect();
    let mut offsets = Vec::with_capacity(chains.len());
    let mut nvars = 0;
    for c in &chains {
        offsets.push(nvars);
        nvars += c.len() + 1;
    }
    let monomials = l
        .ideals()
        .iter()
        .map(|&ideal| {
            Monomial::new(
                masks
                    .iter()
                    .zip(&offsets)
                    .map(|(&m, &o)| o + (ideal & m).count_ones() as usize)
                    .collect(),
            )
        })
        .collect();
    HibiMonomials { chains, offsets, nvars, monomials }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HibiReport {
    pub holds: bool,
    pub pairs_checked: usize,
    pub relations: usize,
    /// Ideal labels `(I, J)` where the sorting disagrees with `(I∧J, I∨J)`.
    pub counterexample: Option<(usize, usize)>,
}

/// Check that sorting `(m_I, m_J)` gives `(m_{I∧J}, m_{I∨J})` for all pairs,
/// that the set is sortable, and that the sorting relations coincide with
/// the Hibi relations.
pub fn verify_hibi_sorting(l: &DistLattice) -> Result<HibiReport> {
    let h = hibi_sort_monomials(l);
    let ctx = h.context();
    let mut pairs = 0;
    let distinct: BTreeSet<&Monomial> = h.monomials.iter().collect();
    if distinct.len() != h.monomials.len() {
        return Err(Error::Consistency("Hibi monomial assignment is not injective".into()));
    }
    for i in 0..l.len() {
        for j in i..l.len() {
            pairs += 1;
            let sorted = sort_pair(&h.monomials[i], &h.monomials[j], &ctx)?;
            let expect = (h.monomials[l.meet(i, j)].clone(), h.monomials[l.join(i, j)].clone());
            if sorted != expect {
                return Ok(HibiReport { holds: false, pairs_checked: pairs, relations: 0, counterexample: Some((i, j)) });
            }
        }
    }
    if !is_sortable_set(&h.monomials, &ctx)?.sortable {
        return Ok(HibiReport { holds: false, pairs_checked: pairs, relations: 0, counterexample: None });
    }
    let sorting: BTreeSet<SortingRelation> = sorting_relations(&h.monomials, &ctx)?.into_iter().collect();
    let mut hibi = BTreeSet::new();
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            if !l.leq(i, j) && !l.leq(j, i) {
                hibi.insert(SortingRelation { lhs: (i, j), rhs: (l.meet(i, j), l.join(i, j)) });
            }
        }
    }
    let holds = sorting == hibi;
    Ok(HibiReport { holds, pairs_checked: pairs, relations: sorting.len(), counterexample: None })
}
