//! Toric ideals of monomial subalgebras `K[u_1, …, u_m]`: fibers of the map
//! `T_i ↦ u_i`, graded minimal generators, Buchberger completion on pure
//! binomials, and graded dimensions by counting images.

use crate::chains::{grid_sort_key, maximal_chains};
use crate::lattice::DistLattice;
use crate::monomial::Monomial;
use crate::scalar::binomial;
use crate::sorting::SortingRelation;
use crate::{Error, Result};
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};

/// What is known in advance about the largest degree of a minimal generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DegreeBound {
    pub lower: usize,
    pub upper: Option<usize>,
}

/// Generators `u_1, …, u_m` of one common degree, with a DegRevLex priority
/// on the `T_i`.
#[derive(Debug, Clone)]
pub struct GeneratorMap {
    generators: Vec<Monomial>,
    nvars: usize,
    degree: usize,
    /// `priority[i] = p` means `T_i` is the `(p+1)`-th largest variable.
    priority: Vec<usize>,
    /// Variables from largest to smallest.
    order: Vec<usize>,
    containing: Vec<Vec<usize>>,
    pub bound: DegreeBound,
    /// Planarity of the lattice, for chain algebras.
    pub planar: Option<bool>,
}

impl GeneratorMap {
    pub fn new(generators: Vec<Monomial>, nvars: usize) -> Result<Self> {
        let degree = generators.first().map_or(0, |u| u.degree());
        for u in &generators {
            if u.degree() != degree {
                return Err(Error::DegreeMismatch { left: degree, right: u.degree() });
            }
            if u.max_var().is_some_and(|v| v >= nvars) {
                return Err(Error::Invalid(format!("variable out of range in generator of {nvars} variables")));
            }
        }
        if generators.iter().collect::<HashSet<_>>().len() != generators.len() {
            return Err(Error::Invalid("generators must be distinct".into()));
        }
        let mut containing = vec![Vec::new(); nvars];
        for (i, u) in generators.iter().enumerate() {
            let mut vs = u.vars().to_vec();
            vs.dedup();
            for v in vs {
                containing[v].push(i);
            }
        }
        let m = generators.len();
        Ok(GeneratorMap {
            generators,
            nvars,
            degree,
            priority: (0..m).collect(),
            order: (0..m).collect(),
            containing,
            bound: DegreeBound::default(),
            planar: None,
        })
    }

    pub fn with_priority(mut self, priority: Vec<usize>) -> Result<Self> {
        let m = self.generators.len();
        let mut order = vec![usize::MAX; m];
        if priority.len() != m {
            return Err(Error::Invalid("priority length differs from generator count".into()));
        }
        for (i, &p) in priority.iter().enumerate() {
            if p >= m || order[p] != usize::MAX {
                return Err(Error::Invalid("priority is not a permutation".into()));
            }
            order[p] = i;
        }
        self.priority = priority;
        self.order = order;
        Ok(self)
    }

    /// The chain algebra of `l`: generators are maximal-chain monomials in
    /// label-lex order. For planar lattices the DegRevLex priority follows the
    /// grid order of chains, which refines the chain order.
    pub fn chain_algebra(l: &DistLattice, max_chains: usize) -> Result<Self> {
        let chains = maximal_chains(l, max_chains)?;
        let gens = chains.iter().map(|c| c.monomial()).collect();
        let width = l.source().width().0;
        let mut g = GeneratorMap::new(gens, l.len())?;
        g.planar = Some(width <= 2);
        g.bound = match width {
            0 | 1 => DegreeBound { lower: 0, upper: Some(1) },
            2 => DegreeBound { lower: 2, upper: Some(2) },
            n => DegreeBound { lower: n, upper: None },
        };
        if let Ok(grid) = l.grid_embedding() {
            let mut by_grid: Vec<usize> = (0..chains.len()).collect();
            by_grid.sort_by_cached_key(|&i| grid_sort_key(&chains[i], &grid));
            let mut priority = vec![0; chains.len()];
            for (p, &i) in by_grid.iter().enumerate() {
                priority[i] = p;
            }
            g = g.with_priority(priority)?;
        }
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn priority(&self) -> &[usize] {
        &self.priority
    }

    /// `∏ u_i^{e_i}` as an exponent vector over the ambient variables.
    pub fn image_exponents(&self, exps: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32; self.nvars];
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 {
                for &v in self.generators[i].vars() {
                    out[v] += e;
                }
            }
        }
        out
    }

    pub fn image(&self, exps: &[u32]) -> Monomial {
        Monomial::from_exponents(&self.image_exponents(exps))
    }

    /// DegRevLex: higher degree first, then the monomial with the smaller
    /// exponent at the smallest variable where they differ is larger.
    pub fn cmp_terms(&self, a: &[u32], b: &[u32]) -> Ordering {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        if da != db {
            return da.cmp(&db);
        }
        for &v in self.order.iter().rev() {
            if a[v] != b[v] {
                return b[v].cmp(&a[v]);
            }
        }
        Ordering::Equal
    }

    pub fn term_name(&self, exps: &[u32]) -> String {
        let mut s = String::new();
        for (i, &e) in exps.iter().enumerate() {
            match e {
                0 => {}
                1 => s += &format!("T{}", i + 1),
                _ => s += &format!("T{}^{}", i + 1, e),
            }
        }
        if s.is_empty() {
            "1".into()
        } else {
            s
        }
    }
}

/// `T^plus - T^minus`, with `plus` the leading term once oriented.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Binomial {
    pub plus: Vec<u32>,
    pub minus: Vec<u32>,
}

impl Binomial {
    /// Checks that both sides have the same image and disjoint supports, and
    /// orients the larger term first.
    pub fn new(g: &GeneratorMap, plus: Vec<u32>, minus: Vec<u32>) -> Result<Self> {
        if plus.len() != g.len() || minus.len() != g.len() {
            return Err(Error::Invalid("exponent vector length differs from generator count".into()));
        }
        if g.image_exponents(&plus) != g.image_exponents(&minus) {
            return Err(Error::Invalid(format!(
                "{} - {} is not in the kernel",
                g.term_name(&plus),
                g.term_name(&minus)
            )));
        }
        if plus.iter().zip(&minus).any(|(&a, &b)| a > 0 && b > 0) {
            return Err(Error::Invalid("binomial sides share a variable".into()));
        }
        Ok(Self::oriented(g, plus, minus))
    }

    fn oriented(g: &GeneratorMap, plus: Vec<u32>, minus: Vec<u32>) -> Self {
        if g.cmp_terms(&plus, &minus) == Ordering::Less {
            Binomial { plus: minus, minus: plus }
        } else {
            Binomial { plus, minus }
        }
    }

    pub fn degree(&self) -> usize {
        self.plus.iter().sum::<u32>() as usize
    }

    pub fn display(&self, g: &GeneratorMap) -> String {
        format!("{} - {}", g.term_name(&self.plus), g.term_name(&self.minus))
    }

    /// Sides as sorted lists of 1-based generator indices with repetition.
    pub fn sides_one_based(&self) -> (Vec<usize>, Vec<usize>) {
        let expand = |e: &[u32]| {
            e.iter()
                .enumerate()
                .flat_map(|(i, &k)| std::iter::repeat_n(i + 1, k as usize))
                .collect()
        };
        (expand(&self.plus), expand(&self.minus))
    }
}

fn exps_of(multiset: &[usize], m: usize) -> Vec<u32> {
    let mut e = vec![0u32; m];
    for &i in multiset {
        e[i] += 1;
    }
    e
}

fn fiber_budget(limit: usize) -> Error {
    Error::Budget { budget: "max_fiber_nodes", limit }
}

/// All exponent vectors of degree `d` mapping to `target`, by repeatedly
/// peeling the lowest remaining variable. Generators containing that
/// variable are taken in non-decreasing index while it stays lowest, so each
/// multiset is produced once.
pub fn fiber(g: &GeneratorMap, target: &Monomial, d: usize, node_cap: usize) -> Result<Vec<Vec<u32>>> {
    if target.degree() != d * g.degree() || target.max_var().is_some_and(|v| v >= g.nvars) {
        return Ok(Vec::new());
    }
    let mut rest = target.exponents(g.nvars);
    let gen_exps: Vec<Vec<u32>> = g.generators.iter().map(|u| u.exponents(g.nvars)).collect();
    let mut chosen = Vec::with_capacity(d);
    let mut out = Vec::new();
    let mut nodes = 0usize;

    #[allow(clippy::too_many_arguments)]
    fn go(
        g: &GeneratorMap,
        gen_exps: &[Vec<u32>],
        rest: &mut [u32],
        chosen: &mut Vec<usize>,
        last: Option<(usize, usize)>,
        d: usize,
        nodes: &mut usize,
        cap: usize,
        out: &mut Vec<Vec<u32>>,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > cap {
            return Err(fiber_budget(cap));
        }
        if chosen.len() == d {
            out.push(exps_of(chosen, g.len()));
            return Ok(());
        }
        let Some(v) = rest.iter().position(|&e| e > 0) else {
            return Ok(());
        };
        let start = match last {
            Some((lv, li)) if lv == v => li,
            _ => 0,
        };
        for &i in &g.containing[v] {
            if i < start || gen_exps[i].iter().zip(rest.iter()).any(|(&a, &b)| a > b) {
                continue;
            }
            for (r, &a) in rest.iter_mut().zip(&gen_exps[i]) {
                *r -= a;
            }
            chosen.push(i);
            go(g, gen_exps, rest, chosen, Some((v, i)), d, nodes, cap, out)?;
            chosen.pop();
            for (r, &a) in rest.iter_mut().zip(&gen_exps[i]) {
                *r += a;
            }
        }
        Ok(())
    }

    go(g, &gen_exps, &mut rest, &mut chosen, None, d, &mut nodes, node_cap, &mut out)?;
    out.sort();
    Ok(out)
}

/// Components of a fiber under moves of lower degree: two points are joined
/// when they share a generator. Returns a component id per point (ids
/// numbered by first occurrence) and the component count.
pub fn fiber_components(points: &[Vec<u32>]) -> (Vec<usize>, usize) {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let m = points.first().map_or(0, |p| p.len());
    for i in 0..m {
        let mut first = None;
        for (k, p) in points.iter().enumerate() {
            if p[i] > 0 {
                match first {
                    None => first = Some(k),
                    Some(f) => {
                        let (a, b) = (find(&mut parent, f), find(&mut parent, k));
                        parent[a] = b;
                    }
                }
            }
        }
    }
    let mut ids = HashMap::new();
    let comp: Vec<usize> = (0..n)
        .map(|k| {
            let r = find(&mut parent, k);
            let next = ids.len();
            *ids.entry(r).or_insert(next)
        })
        .collect();
    (comp, ids.len())
}

/// Degree-`d` points grouped by image, each group sorted; only groups with
/// at least two points are kept.
fn fibers_of_degree(g: &GeneratorMap, d: usize, cap: usize) -> Result<Vec<Vec<Vec<u32>>>> {
    let m = g.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let total: u128 = binomial::<u128>(m + d - 1, d).map_err(|_| fiber_budget(cap))?;
    if total > cap as u128 {
        return Err(fiber_budget(cap));
    }
    let gen_exps: Vec<Vec<u8>> = g
        .generators
        .iter()
        .map(|u| u.exponents(g.nvars).into_iter().map(|e| e as u8).collect())
        .collect();
    let mut groups: HashMap<Vec<u8>, Vec<Vec<u32>>> = HashMap::new();
    let mut chosen = Vec::with_capacity(d);
    let mut image = vec![0u8; g.nvars];

    fn go(
        gen_exps: &[Vec<u8>],
        chosen: &mut Vec<usize>,
        image: &mut [u8],
        from: usize,
        d: usize,
        groups: &mut HashMap<Vec<u8>, Vec<Vec<u32>>>,
    ) {
        if chosen.len() == d {
            groups.entry(image.to_vec()).or_default().push(exps_of(chosen, gen_exps.len()));
            return;
        }
        for i in from..gen_exps.len() {
            for (a, &b) in image.iter_mut().zip(&gen_exps[i]) {
                *a += b;
            }
            chosen.push(i);
            go(gen_exps, chosen, image, i, d, groups);
            chosen.pop();
            for (a, &b) in image.iter_mut().zip(&gen_exps[i]) {
                *a -= b;
            }
        }
    }

    if d > u8::MAX as usize {
        return Err(Error::Invalid("degree too large".into()));
    }
    go(&gen_exps, &mut chosen, &mut image, 0, d, &mut groups);
    let mut fibers: Vec<Vec<Vec<u32>>> = groups.into_values().filter(|f| f.len() > 1).collect();
    for f in &mut fibers {
        f.sort();
    }
    fibers.sort();
    Ok(fibers)
}

/// For each extra component of a fiber, a binomial joining it to the
/// component of the fiber's first point. Representatives are the first
/// point of each component.
fn fiber_generators(g: &GeneratorMap, points: &[Vec<u32>]) -> Vec<Binomial> {
    let (comp, count) = fiber_components(points);
    let mut reps = vec![usize::MAX; count];
    for (k, &c) in comp.iter().enumerate() {
        if reps[c] == usize::MAX {
            reps[c] = k;
        }
    }
    reps[1..]
        .iter()
        .map(|&k| Binomial::oriented(g, points[reps[0]].clone(), points[k].clone()))
        .collect()
}

/// A graded minimal generating set up to `max_degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovBasis {
    pub by_degree: BTreeMap<usize, Vec<Binomial>>,
    pub max_degree: usize,
    /// Generators of degree above `max_degree` cannot be ruled out.
    pub truncated: bool,
}

impl MarkovBasis {
    pub fn degree_profile(&self) -> BTreeMap<usize, usize> {
        self.by_degree.iter().map(|(&d, v)| (d, v.len())).collect()
    }

    pub fn all(&self) -> impl Iterator<Item = &Binomial> {
        self.by_degree.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.by_degree.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_generator_degree(&self) -> Option<usize> {
        self.by_degree.iter().filter(|(_, v)| !v.is_empty()).map(|(&d, _)| d).max()
    }
}

/// Scan every fiber of degree `2..=max_degree`. A degree-`d` fiber with `c`
/// components contributes `c - 1` minimal generators.
pub fn minimal_generators(g: &GeneratorMap, max_degree: usize, node_cap: usize) -> Result<MarkovBasis> {
    let mut by_degree = BTreeMap::new();
    for d in 2..=max_degree {
        let fibers = fibers_of_degree(g, d, node_cap)?;
        let mut gens: Vec<Binomial> = fibers.par_iter().flat_map_iter(|f| fiber_generators(g, f)).collect();
        gens.sort_by(|a, b| g.cmp_terms(&b.plus, &a.plus).then_with(|| a.cmp(b)));
        if !gens.is_empty() {
            by_degree.insert(d, gens);
        }
    }
    let truncated = max_degree < g.bound.lower || g.bound.upper.is_none_or(|u| max_degree < u);
    Ok(MarkovBasis { by_degree, max_degree, truncated })
}

/// No minimal generator of degree `≥ 3` up to `max_degree`. For chain
/// algebras the answer must match planarity once the scan reaches the
/// width.
pub fn is_quadratically_generated(g: &GeneratorMap, max_degree: usize, node_cap: usize) -> Result<bool> {
    let basis = minimal_generators(g, max_degree, node_cap)?;
    let quadratic = basis.by_degree.keys().all(|&d| d <= 2);
    if let Some(planar) = g.planar {
        if max_degree >= g.bound.lower.max(3) && quadratic != planar {
            return Err(Error::Consistency(format!(
                "quadratic generation ({quadratic}) disagrees with planarity ({planar})"
            )));
        }
    }
    Ok(quadratic)
}

/// `dim K[B]_d`: distinct products of `d` generators.
pub fn hilbert_by_fibers(g: &GeneratorMap, d: usize, node_cap: usize) -> Result<usize> {
    let gen_exps: Vec<Vec<u16>> = g
        .generators
        .iter()
        .map(|u| u.exponents(g.nvars).into_iter().map(|e| e as u16).collect())
        .collect();
    let mut level: HashSet<Vec<u16>> = HashSet::from([vec![0u16; g.nvars]]);
    for _ in 0..d {
        let mut next = HashSet::new();
        for img in &level {
            for u in &gen_exps {
                next.insert(img.iter().zip(u).map(|(a, b)| a + b).collect::<Vec<u16>>());
                if next.len() > node_cap {
                    return Err(fiber_budget(node_cap));
                }
            }
        }
        level = next;
    }
    Ok(level.len())
}

/// Quadratic binomials `T_i T_j - T_k T_l` from sorting relations.
pub fn sorting_binomials(g: &GeneratorMap, rels: &[SortingRelation]) -> Result<Vec<Binomial>> {
    rels.iter()
        .map(|r| {
            let m = g.len();
            Binomial::new(g, exps_of(&[r.lhs.0, r.lhs.1], m), exps_of(&[r.rhs.0, r.rhs.1], m))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerReport {
    /// The reduced Gröbner basis, sorted by leading term (largest first).
    pub basis: Vec<Binomial>,
    /// Every S-binomial of the input reduces to zero modulo the input.
    pub input_is_groebner: bool,
    /// Additionally no term of an input binomial is divisible by the
    /// leading term of another.
    pub input_is_reduced: bool,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Rewrite `x` to its normal form modulo the leading terms of `basis`.
fn normal_form(basis: &[Binomial], mut x: Vec<u32>) -> Vec<u32> {
    'outer: loop {
        for b in basis {
            if divides(&b.plus, &x) {
                for ((xi, &p), &q) in x.iter_mut().zip(&b.plus).zip(&b.minus) {
                    *xi = *xi - p + q;
                }
                continue 'outer;
            }
        }
        return x;
    }
}

fn reduce(g: &GeneratorMap, basis: &[Binomial], plus: Vec<u32>, minus: Vec<u32>) -> Option<Binomial> {
    let a = normal_form(basis, plus);
    let b = normal_form(basis, minus);
    if a == b {
        return None;
    }
    // cancel the common factor so the sides stay coprime
    let (a, b): (Vec<u32>, Vec<u32>) = a.iter().zip(&b).map(|(&x, &y)| (x - x.min(y), y - x.min(y))).unzip();
    Some(Binomial::oriented(g, a, b))
}

fn s_pair(f: &Binomial, h: &Binomial) -> Option<(Vec<u32>, Vec<u32>)> {
    if f.plus.iter().zip(&h.plus).all(|(&a, &b)| a == 0 || b == 0) {
        // coprime leading terms reduce to zero
        return None;
    }
    let lcm: Vec<u32> = f.plus.iter().zip(&h.plus).map(|(&a, &b)| a.max(b)).collect();
    let left = lcm.iter().zip(&f.plus).zip(&f.minus).map(|((&l, &p), &q)| l - p + q).collect();
    let right = lcm.iter().zip(&h.plus).zip(&h.minus).map(|((&l, &p), &q)| l - p + q).collect();
    Some((left, right))
}

/// Complete `input` to the reduced Gröbner basis of the ideal it generates
/// under the DegRevLex order of `g`. Pairs are processed in a fixed queue
/// order.
pub fn buchberger(g: &GeneratorMap, input: &[Binomial], max_basis: usize) -> Result<GroebnerReport> {
    let input: Vec<Binomial> = input.iter().map(|b| Binomial::oriented(g, b.plus.clone(), b.minus.clone())).collect();
    let input_is_groebner = (0..input.len()).all(|i| {
        (i + 1..input.len()).all(|j| match s_pair(&input[i], &input[j]) {
            None => true,
            Some((a, b)) => reduce(g, &input, a, b).is_none(),
        })
    });
    let input_is_reduced = input_is_groebner
        && (0..input.len()).all(|i| {
            (0..input.len()).all(|j| i == j || (!divides(&input[j].plus, &input[i].plus) && !divides(&input[j].plus, &input[i].minus)))
        });

    let mut basis: Vec<Binomial> = Vec::new();
    for b in &input {
        if let Some(r) = reduce(g, &basis, b.plus.clone(), b.minus.clone()) {
            basis.push(r);
        }
    }
    let mut pairs: std::collections::VecDeque<(usize, usize)> =
        (0..basis.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    while let Some((i, j)) = pairs.pop_front() {
        let Some((a, b)) = s_pair(&basis[i], &basis[j]) else { continue };
        if let Some(r) = reduce(g, &basis, a, b) {
            if basis.len() >= max_basis {
                return Err(Error::Budget { budget: "max_basis", limit: max_basis });
            }
            let k = basis.len();
            basis.push(r);
            pairs.extend((0..k).map(|i| (i, k)));
        }
    }

    // drop redundant leading terms, then reduce tails
    let mut minimal: Vec<Binomial> = Vec::new();
    for (i, b) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, c)| {
            j != i && divides(&c.plus, &b.plus) && (c.plus != b.plus || j < i)
        });
        if !redundant {
            minimal.push(b.clone());
        }
    }
    let mut reduced: Vec<Binomial> = minimal
        .iter()
        .map(|b| {
            let tail = normal_form(&minimal, b.minus.clone());
            Binomial { plus: b.plus.clone(), minus: tail }
        })
        .collect();
    reduced.sort_by(|a, b| g.cmp_terms(&b.plus, &a.plus));
    Ok(GroebnerReport { basis: reduced, input_is_groebner, input_is_reduced })
}

/// Every leading term is squarefree.
pub fn initial_ideal_squarefree(groebner: &[Binomial]) -> bool {
    groebner.iter().all(|b| b.plus.iter().all(|&e| e <= 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::tests::{lattice, N4, CROSSED};
    use crate::poset::Poset;
    use crate::sorting::{sorting_relations, SortContext};
    use proptest::prelude::*;

    const CAP: usize = 10_000_000;

    fn chain_map(l: &DistLattice) -> GeneratorMap {
        GeneratorMap::chain_algebra(l, 100_000).unwrap()
    }

    fn boolean(n: usize) -> DistLattice {
        DistLattice::birkhoff(&Poset::antichain(n), 1 << 10).unwrap()
    }

    /// All degree-`d` exponent vectors over `m` generators.
    fn all_multisets(m: usize, d: usize) -> Vec<Vec<u32>> {
        if m == 0 {
            return if d == 0 { vec![vec![]] } else { vec![] };
        }
        let mut out = Vec::new();
        for e in 0..=d {
            for mut rest in all_multisets(m - 1, d - e) {
                rest.insert(0, e as u32);
                out.push(rest);
            }
        }
        out
    }

    /// `dim I_d - dim (T_1, …, T_m) I_{d-1}` by exact ranks over all
    /// degree-`d` exponent vectors.
    fn generator_count_oracle(g: &GeneratorMap, d: usize) -> usize {
        let m = g.len();
        let cols = all_multisets(m, d);
        let col: HashMap<&Vec<u32>, usize> = cols.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut images: HashSet<Monomial> = HashSet::new();
        for c in &cols {
            images.insert(g.image(c));
        }
        let dim_id = cols.len() - images.len();
        let mut rows = Vec::new();
        let lower = all_multisets(m, d - 1);
        for p in &lower {
            for q in &lower {
                if p < q && g.image(p) == g.image(q) {
                    for i in 0..m {
                        let mut row = vec![0i64; cols.len()];
                        let (mut a, mut b) = (p.clone(), q.clone());
                        a[i] += 1;
                        b[i] += 1;
                        row[col[&a]] += 1;
                        row[col[&b]] -= 1;
                        rows.push(row);
                    }
                }
            }
        }
        dim_id - crate::linalg::exact_rank(&rows)
    }

    #[test]
    fn oracle_agrees_on_small_algebras() {
        for (text, top) in [(N4, 3), (CROSSED, 2)] {
            let g = chain_map(&lattice(text));
            let basis = minimal_generators(&g, top, CAP).unwrap();
            for d in 2..=top {
                assert_eq!(basis.degree_profile().get(&d).copied().unwrap_or(0), generator_count_oracle(&g, d));
            }
        }
    }

    #[test]
    fn n4_fiber_and_relation() {
        let l = lattice(N4);
        let g = chain_map(&l);
        assert_eq!(g.len(), 5);
        let target = Monomial::new(vec![1, 2, 3, 3, 5, 6]);
        let f = fiber(&g, &target, 2, CAP).unwrap();
        let names: Vec<_> = f.iter().map(|e| g.term_name(e)).collect();
        assert_eq!(names, vec!["T2T3", "T1T4"]);
        let basis = minimal_generators(&g, 4, CAP).unwrap();
        assert_eq!(basis.degree_profile(), BTreeMap::from([(2, 1)]));
        let b = &basis.by_degree[&2][0];
        assert_eq!(b.display(&g), "T2T3 - T1T4");
        assert!(!basis.truncated);
        assert!(is_quadratically_generated(&g, 3, CAP).unwrap());
    }

    #[test]
    fn degree_one_fibers_are_points() {
        let l = lattice(CROSSED);
        let g = chain_map(&l);
        for u in g.generators() {
            assert_eq!(fiber(&g, u, 1, CAP).unwrap().len(), 1);
        }
        assert!(fiber(&g, &Monomial::new(vec![0]), 1, CAP).unwrap().is_empty());
    }

    #[test]
    fn boolean_three_full_fiber_matches_brute_force() {
        let l = boolean(3);
        let g = chain_map(&l);
        assert_eq!(g.len(), 6);
        let target = g.image(&[1; 6]);
        let f = fiber(&g, &target, 6, CAP).unwrap();
        let mut brute: Vec<Vec<u32>> = all_multisets(6, 6).into_iter().filter(|e| g.image(e) == target).collect();
        brute.sort();
        assert_eq!(all_multisets(6, 6).len(), 462);
        assert_eq!(f, brute);
    }

    #[test]
    fn boolean_three_degrees() {
        let g = chain_map(&boolean(3));
        let basis = minimal_generators(&g, 4, CAP).unwrap();
        let profile = basis.degree_profile();
        // no two chains can swap a single element, so nothing in degree 2
        assert_eq!(profile.keys().copied().collect::<Vec<_>>(), vec![3]);
        assert_eq!(profile[&3], generator_count_oracle(&g, 3));
        assert_eq!(0, generator_count_oracle(&g, 2));
        assert_eq!(0, generator_count_oracle(&g, 4));
        assert!(basis.truncated);
        assert!(!is_quadratically_generated(&g, 3, CAP).unwrap());
        for b in basis.all() {
            assert_eq!(g.image(&b.plus), g.image(&b.minus));
        }
    }

    #[test]
    fn trivial_algebras() {
        let g = GeneratorMap::new(vec![Monomial::new(vec![0, 1])], 2).unwrap();
        assert!(minimal_generators(&g, 4, CAP).unwrap().is_empty());
        let l = DistLattice::birkhoff(&Poset::chain(1), 10).unwrap();
        let basis = minimal_generators(&chain_map(&l), 2, CAP).unwrap();
        assert!(basis.is_empty() && !basis.truncated);
        assert_eq!(hilbert_by_fibers(&g, 0, CAP).unwrap(), 1);
        assert!(buchberger(&g, &[], 10).unwrap().basis.is_empty());
        assert!(initial_ideal_squarefree(&[]));
    }

    #[test]
    fn mismatched_generators_are_rejected() {
        let gens = vec![Monomial::new(vec![0]), Monomial::new(vec![0, 1])];
        assert!(matches!(GeneratorMap::new(gens, 2), Err(Error::DegreeMismatch { .. })));
        let g = GeneratorMap::new(vec![Monomial::new(vec![0]), Monomial::new(vec![1])], 2).unwrap();
        assert!(Binomial::new(&g, vec![1, 0], vec![0, 1]).is_err());
    }

    #[test]
    fn n4_sorting_relation_is_reduced_groebner() {
        let l = lattice(N4);
        let g = chain_map(&l);
        let rels = sorting_relations(g.generators(), &SortContext::natural(l.len())).unwrap();
        let bins = sorting_binomials(&g, &rels).unwrap();
        let report = buchberger(&g, &bins, 1000).unwrap();
        assert!(report.input_is_groebner && report.input_is_reduced);
        assert_eq!(report.basis.len(), 1);
        assert_eq!(g.term_name(&report.basis[0].plus), "T2T3");
        assert!(initial_ideal_squarefree(&report.basis));
    }

    #[test]
    fn crossed_is_quadratic_with_sorting_groebner_basis() {
        let l = lattice(CROSSED);
        let g = chain_map(&l);
        let basis = minimal_generators(&g, 3, CAP).unwrap();
        assert!(!basis.by_degree.contains_key(&3));
        let grid = l.grid_embedding().unwrap();
        let ctx = SortContext::for_lattice(&l, Some(&grid));
        let rels = sorting_relations(g.generators(), &ctx).unwrap();
        assert_eq!(rels.len(), basis.by_degree[&2].len());
        let report = buchberger(&g, &sorting_binomials(&g, &rels).unwrap(), 10_000).unwrap();
        assert!(report.input_is_groebner && report.input_is_reduced);
        assert_eq!(report.basis.len(), rels.len());
        // the leading term is always the unsorted pair
        let unsorted: HashSet<Vec<u32>> = rels.iter().map(|r| exps_of(&[r.lhs.0, r.lhs.1], g.len())).collect();
        assert!(report.basis.iter().all(|b| unsorted.contains(&b.plus)));
    }

    #[test]
    fn non_groebner_input_is_completed() {
        // twisted cubic: s^3, s^2t, st^2, t^3
        let gens = vec![
            Monomial::new(vec![0, 0, 0]),
            Monomial::new(vec![0, 0, 1]),
            Monomial::new(vec![0, 1, 1]),
            Monomial::new(vec![1, 1, 1]),
        ];
        let g = GeneratorMap::new(gens, 2).unwrap();
        let basis = minimal_generators(&g, 3, CAP).unwrap();
        assert_eq!(basis.degree_profile(), BTreeMap::from([(2, 3)]));
        let only_two: Vec<Binomial> = basis.by_degree[&2][..2].to_vec();
        let report = buchberger(&g, &only_two, 100).unwrap();
        assert!(!report.input_is_groebner);
        let full = buchberger(&g, &basis.by_degree[&2], 100).unwrap();
        assert_eq!(full.basis.len(), 3);
        // every kernel element of degree 2 reduces to zero
        for f in fibers_of_degree(&g, 2, CAP).unwrap() {
            for p in &f[1..] {
                assert_eq!(normal_form(&full.basis, f[0].clone()), normal_form(&full.basis, p.clone()));
            }
        }
    }

    #[test]
    fn rectangle_counts() {
        let l = DistLattice::birkhoff(&Poset::two_chains(2, 2), 100).unwrap();
        let g = chain_map(&l);
        assert_eq!(hilbert_by_fibers(&g, 1, CAP).unwrap(), 6);
        assert_eq!(hilbert_by_fibers(&g, 2, CAP).unwrap(), 20);
    }

    #[test]
    fn budget_is_enforced() {
        let g = chain_map(&boolean(3));
        assert!(minimal_generators(&g, 6, 100).unwrap_err().is_budget());
        assert!(fiber(&g, &g.image(&[1; 6]), 6, 5).unwrap_err().is_budget());
    }

    proptest! {
        #[test]
        fn fiber_matches_scan(seed in proptest::collection::vec(0u32..3, 5)) {
            let l = lattice(N4);
            let g = chain_map(&l);
            let d = seed.iter().sum::<u32>() as usize;
            let target = g.image(&seed);
            let mut brute: Vec<Vec<u32>> =
                all_multisets(5, d).into_iter().filter(|e| g.image(e) == target).collect();
            brute.sort();
            prop_assert_eq!(fiber(&g, &target, d, CAP).unwrap(), brute);
        }
    }
}
