//! Finite posets on at most 64 elements.
//!
//! Elements are identified by their declaration index; the order relation is
//! kept as a pair of bit-matrices (`up[u]` holds every `v` with `u <= v`,
//! `down[v]` the transpose), so ideals and antichains are plain `u64` masks.

use crate::{Error, Result};
use std::collections::HashMap;
use std::fmt::Write as _;

pub const MAX_ELEMENTS: usize = 64;

#[inline]
pub(crate) fn bit(i: usize) -> u64 {
    1u64 << i
}

/// Iterate the set bits of a mask in increasing order.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    covers: Vec<(usize, usize)>,
    up: Vec<u64>,
    down: Vec<u64>,
}

/// A partition of the ground set into chains, each listed bottom to top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainDecomposition {
    pub chains: Vec<Vec<usize>>,
}

impl ChainDecomposition {
    /// Index of the chain containing `x` and the position of `x` in it.
    pub fn locate(&self, x: usize) -> Option<(usize, usize)> {
        self.chains
            .iter()
            .enumerate()
            .find_map(|(c, chain)| chain.iter().position(|&y| y == x).map(|p| (c, p)))
    }

    pub fn masks(&self) -> Vec<u64> {
        self.chains
            .iter()
            .map(|c| c.iter().fold(0, |m, &x| m | bit(x)))
            .collect()
    }
}

impl Poset {
    /// Build a poset from names and a list of relations `u < v` (not
    /// necessarily covers). The relation is closed transitively and reduced
    /// back to its cover pairs.
    pub fn new(names: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        if n > MAX_ELEMENTS {
            return Err(Error::Invalid(format!(
                "posets are limited to {MAX_ELEMENTS} elements, got {n}"
            )));
        }
        let mut seen = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if seen.insert(name.as_str(), i).is_some() {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        let mut up: Vec<u64> = (0..n).map(bit).collect();
        for &(u, v) in relations {
            if u >= n || v >= n {
                return Err(Error::Invalid(format!("relation ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::Cycle(names[u].clone()));
            }
            up[u] |= bit(v);
        }
        // Warshall closure on bit rows.
        for k in 0..n {
            for u in 0..n {
                if up[u] & bit(k) != 0 {
                    up[u] |= up[k];
                }
            }
        }
        let mut down = vec![0u64; n];
        for (u, &above) in up.iter().enumerate() {
            for v in bits(above) {
                down[v] |= bit(u);
            }
        }
        for u in 0..n {
            let both = (up[u] & down[u]) & !bit(u);
            if both != 0 {
                return Err(Error::Cycle(names[u].clone()));
            }
        }
        let mut covers = Vec::new();
        for (u, &above) in up.iter().enumerate() {
            let strict_up = above & !bit(u);
            for v in bits(strict_up) {
                let between = strict_up & (down[v] & !bit(v));
                if between == 0 {
                    covers.push((u, v));
                }
            }
        }
        Ok(Poset { names, covers, up, down })
    }

    /// Elements named `0..n` with the given relations.
    pub fn from_relations(n: usize, relations: &[(usize, usize)]) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()).collect(), relations)
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_relations(n, &[]).expect("antichain is a valid poset")
    }

    pub fn chain(n: usize) -> Self {
        let rel: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_relations(n, &rel).expect("chain is a valid poset")
    }

    /// Two chains of lengths `a` and `b` with no relation between them.
    pub fn two_chains(a: usize, b: usize) -> Self {
        let mut names: Vec<String> = (1..=a).map(|i| i.to_string()).collect();
        names.extend((1..=b).map(|i| format!("{i}'")));
        let mut rel: Vec<_> = (1..a).map(|i| (i - 1, i)).collect();
        rel.extend((1..b).map(|i| (a + i - 1, a + i)));
        Self::new(names, &rel).expect("two chains form a valid poset")
    }

    /// Disjoint union; the elements of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &Poset) -> Result<Self> {
        let off = self.len();
        let mut names = self.names.clone();
        names.extend(other.names.iter().map(|s| {
            if self.names.contains(s) {
                format!("{s}~")
            } else {
                s.clone()
            }
        }));
        let mut rel = self.covers.clone();
        rel.extend(other.covers.iter().map(|&(u, v)| (u + off, v + off)));
        Self::new(names, &rel)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn full_mask(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            bit(self.len()) - 1
        }
    }

    #[inline]
    pub fn leq(&self, u: usize, v: usize) -> bool {
        self.up[u] & bit(v) != 0
    }

    #[inline]
    pub fn lt(&self, u: usize, v: usize) -> bool {
        u != v && self.leq(u, v)
    }

    #[inline]
    pub fn comparable(&self, u: usize, v: usize) -> bool {
        self.leq(u, v) || self.leq(v, u)
    }

    /// `{u : u <= v}`
    pub fn down_set(&self, v: usize) -> u64 {
        self.down[v]
    }

    /// `{w : v <= w}`
    pub fn up_set(&self, v: usize) -> u64 {
        self.up[v]
    }

    pub fn is_downset(&self, mask: u64) -> bool {
        bits(mask).all(|v| self.down[v] & !mask == 0)
    }

    pub fn is_antichain(&self, mask: u64) -> bool {
        bits(mask).all(|v| (self.up[v] | self.down[v]) & mask == bit(v))
    }

    /// Smallest downset containing `mask`.
    pub fn downset_of(&self, mask: u64) -> u64 {
        bits(mask).fold(0, |acc, v| acc | self.down[v])
    }

    /// Minimal elements of the complement of `mask` that can be added while
    /// keeping a downset.
    pub fn addable(&self, ideal: u64) -> u64 {
        let mut out = 0;
        for v in bits(self.full_mask() & !ideal) {
            if self.down[v] & !bit(v) & !ideal == 0 {
                out |= bit(v);
            }
        }
        out
    }

    /// Length (number of elements) of the longest chain.
    pub fn height(&self) -> usize {
        self.levels().into_iter().max().map_or(0, |h| h + 1)
    }

    /// For every element, the number of elements in the longest chain strictly
    /// below it.
    pub fn levels(&self) -> Vec<usize> {
        let mut level = vec![0usize; self.len()];
        for v in self.topological_order() {
            for &(u, w) in &self.covers {
                if w == v {
                    level[v] = level[v].max(level[u] + 1);
                }
            }
        }
        level
    }

    /// A linear extension: elements sorted by the size of their down-set,
    /// ties broken by index.
    pub fn topological_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&v| (self.down[v].count_ones(), v));
        order
    }

    /// Induced subposet on the elements of `mask`, in increasing index order.
    pub fn induced(&self, mask: u64) -> Poset {
        let elems: Vec<usize> = bits(mask).collect();
        let names = elems.iter().map(|&e| self.names[e].clone()).collect();
        let mut rel = Vec::new();
        for (i, &u) in elems.iter().enumerate() {
            for (j, &v) in elems.iter().enumerate() {
                if self.lt(u, v) {
                    rel.push((i, j));
                }
            }
        }
        Poset::new(names, &rel).expect("induced subposet of a valid poset")
    }

    /// Maximum matching on the strict comparability relation, `mate[u] = v`
    /// meaning the edge `u < v` is used. Kuhn's algorithm, candidates tried in
    /// index order for determinism.
    fn comparability_matching(&self) -> Vec<Option<usize>> {
        let n = self.len();
        let mut mate_left: Vec<Option<usize>> = vec![None; n];
        let mut mate_right: Vec<Option<usize>> = vec![None; n];
        fn augment(
            p: &Poset,
            u: usize,
            seen: &mut u64,
            ml: &mut [Option<usize>],
            mr: &mut [Option<usize>],
        ) -> bool {
            for v in bits(p.up[u] & !bit(u)) {
                if *seen & bit(v) != 0 {
                    continue;
                }
                *seen |= bit(v);
                if mr[v].is_none() || augment(p, mr[v].unwrap(), seen, ml, mr) {
                    ml[u] = Some(v);
                    mr[v] = Some(u);
                    return true;
                }
            }
            false
        }
        for u in 0..n {
            let mut seen = 0u64;
            augment(self, u, &mut seen, &mut mate_left, &mut mate_right);
        }
        mate_left
    }

    /// Width and a maximum antichain, read off a minimum vertex cover of the
    /// comparability matching (König).
    pub fn width(&self) -> (usize, Vec<usize>) {
        let n = self.len();
        if n == 0 {
            return (0, Vec::new());
        }
        let mate = self.comparability_matching();
        // Alternating reachability from unmatched left vertices.
        let mut z_left = 0u64;
        let mut z_right = 0u64;
        let mut stack: Vec<usize> = (0..n).filter(|&u| mate[u].is_none()).collect();
        for &u in &stack {
            z_left |= bit(u);
        }
        let mut owner = vec![None; n];
        for (u, m) in mate.iter().enumerate() {
            if let Some(v) = m {
                owner[*v] = Some(u);
            }
        }
        while let Some(u) = stack.pop() {
            for v in bits(self.up[u] & !bit(u)) {
                if mate[u] == Some(v) || z_right & bit(v) != 0 {
                    continue;
                }
                z_right |= bit(v);
                if let Some(w) = owner[v] {
                    if z_left & bit(w) == 0 {
                        z_left |= bit(w);
                        stack.push(w);
                    }
                }
            }
        }
        let antichain: Vec<usize> = (0..n)
            .filter(|&x| z_left & bit(x) != 0 && z_right & bit(x) == 0)
            .collect();
        let matching = mate.iter().flatten().count();
        debug_assert_eq!(antichain.len(), n - matching);
        (n - matching, antichain)
    }

    /// Minimum chain partition recovered from the same matching as
    /// [`Poset::width`]. Chains are ordered by their least element.
    pub fn chain_decomposition(&self) -> ChainDecomposition {
        let n = self.len();
        let mate = self.comparability_matching();
        let mut has_pred = 0u64;
        for v in mate.iter().flatten() {
            has_pred |= bit(*v);
        }
        let mut chains = Vec::new();
        for start in 0..n {
            if has_pred & bit(start) != 0 {
                continue;
            }
            let mut chain = vec![start];
            let mut cur = start;
            while let Some(next) = mate[cur] {
                chain.push(next);
                cur = next;
            }
            chains.push(chain);
        }
        ChainDecomposition { chains }
    }

    /// Lazily enumerate linear extensions as element sequences in
    /// lexicographic order. The extension `w` assigns `w(seq[i]) = i + 1`.
    pub fn linear_extensions(&self) -> LinearExtensions<'_> {
        LinearExtensions {
            poset: self,
            prefix: Vec::with_capacity(self.len()),
            placed: 0,
            cursor: vec![0; self.len() + 1],
            done: false,
        }
    }

    /// Collect all linear extensions, failing once more than `cap` exist.
    pub fn linear_extensions_capped(&self, cap: usize) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        for ext in self.linear_extensions() {
            if out.len() == cap {
                return Err(Error::Budget { budget: "linear_extensions", limit: cap });
            }
            out.push(ext);
        }
        Ok(out)
    }

    /// Canonical form up to isomorphism: elements are first sorted by the
    /// invariant (level, down-set size, up-set size); the relation matrix is
    /// then minimised over permutations inside blocks of equal invariants.
    pub fn canonical_form(&self) -> Result<CanonicalForm> {
        const MAX_PERMUTATIONS: u128 = 5_000_000;
        let n = self.len();
        let levels = self.levels();
        let inv: Vec<(usize, u32, u32)> = (0..n)
            .map(|v| (levels[v], self.down[v].count_ones(), self.up[v].count_ones()))
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (inv[v], v));
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for &v in &order {
            match blocks.last_mut() {
                Some(b) if inv[b[0]] == inv[v] => b.push(v),
                _ => blocks.push(vec![v]),
            }
        }
        let total: u128 = blocks
            .iter()
            .map(|b| (1..=b.len() as u128).product::<u128>())
            .try_fold(1u128, |acc, f| acc.checked_mul(f))
            .unwrap_or(u128::MAX);
        if total > MAX_PERMUTATIONS {
            return Err(Error::Budget { budget: "canonical_form", limit: MAX_PERMUTATIONS as usize });
        }
        let mut best: Option<Vec<u64>> = None;
        let mut current = blocks.clone();
        loop {
            let seq: Vec<usize> = current.iter().flatten().copied().collect();
            let mut pos = vec![0usize; n];
            for (i, &v) in seq.iter().enumerate() {
                pos[v] = i;
            }
            let rows: Vec<u64> = seq
                .iter()
                .map(|&u| bits(self.up[u] & !bit(u)).fold(0u64, |m, v| m | bit(pos[v])))
                .collect();
            if best.as_ref().is_none_or(|b| rows < *b) {
                best = Some(rows);
            }
            // Odometer over per-block permutations.
            let mut k = current.len();
            loop {
                if k == 0 {
                    let mut sorted_inv: Vec<_> = inv.clone();
                    sorted_inv.sort();
                    return Ok(CanonicalForm { invariants: sorted_inv, rows: best.unwrap_or_default() });
                }
                k -= 1;
                if next_permutation(&mut current[k]) {
                    break;
                }
                // wrapped around to sorted order; carry to the previous block
            }
        }
    }

    pub fn is_isomorphic(&self, other: &Poset) -> Result<bool> {
        if self.len() != other.len() || self.covers.len() != other.covers.len() {
            return Ok(false);
        }
        Ok(self.canonical_form()? == other.canonical_form()?)
    }

    /// Compact text encoding `n:u<v,...` over cover pairs, used to name
    /// posets in reports.
    pub fn encoding(&self) -> String {
        let mut s = format!("{}:", self.len());
        for (i, (u, v)) in self.covers.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{u}<{v}");
        }
        s
    }

    /// Render in the poset file format accepted by [`parse_poset`].
    pub fn to_poset_file(&self) -> String {
        let mut s = String::from("elements");
        for n in &self.names {
            s.push(' ');
            s.push_str(n);
        }
        s.push('\n');
        for &(u, v) in &self.covers {
            let _ = writeln!(s, "cover {} {}", self.names[u], self.names[v]);
        }
        s
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    invariants: Vec<(usize, u32, u32)>,
    rows: Vec<u64>,
}

pub struct LinearExtensions<'a> {
    poset: &'a Poset,
    prefix: Vec<usize>,
    placed: u64,
    cursor: Vec<usize>,
    done: bool,
}

impl LinearExtensions<'_> {
    fn pop(&mut self) {
        match self.prefix.pop() {
            Some(x) => self.placed &= !bit(x),
            None => self.done = true,
        }
    }
}

impl Iterator for LinearExtensions<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let n = self.poset.len();
        while !self.done {
            let depth = self.prefix.len();
            if depth == n {
                let out = self.prefix.clone();
                self.pop();
                return Some(out);
            }
            let start = self.cursor[depth];
            let found = (start..n).find(|&x| {
                self.placed & bit(x) == 0 && self.poset.down[x] & !bit(x) & !self.placed == 0
            });
            match found {
                Some(x) => {
                    self.cursor[depth] = x + 1;
                    self.prefix.push(x);
                    self.placed |= bit(x);
                    self.cursor[depth + 1] = 0;
                }
                None => {
                    self.cursor[depth] = 0;
                    self.pop();
                }
            }
        }
        None
    }
}

/// Parse the line-oriented poset format:
///
/// ```text
/// # comment
/// elements a b c d
/// cover a c
/// ```
pub fn parse_poset(text: &str) -> Result<Poset> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut rel = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let mut toks = content.split_whitespace();
        let keyword = toks.next().unwrap_or_default();
        match keyword {
            "elements" => {
                let mut any = false;
                for tok in toks {
                    any = true;
                    if index.insert(tok.to_string(), names.len()).is_some() {
                        return Err(Error::DuplicateName(tok.to_string()));
                    }
                    names.push(tok.to_string());
                }
                if !any {
                    return Err(Error::Parse { line, message: "`elements` needs at least one name".into() });
                }
            }
            "cover" => {
                let args: Vec<&str> = toks.collect();
                if args.len() != 2 {
                    return Err(Error::Parse {
                        line,
                        message: format!("`cover` takes exactly two names, got {}", args.len()),
                    });
                }
                let lookup = |name: &str| {
                    index.get(name).copied().ok_or_else(|| Error::Parse {
                        line,
                        message: format!("unknown element `{name}`"),
                    })
                };
                let (u, v) = (lookup(args[0])?, lookup(args[1])?);
                if u == v {
                    return Err(Error::Cycle(args[0].to_string()));
                }
                rel.push((u, v));
            }
            other => {
                return Err(Error::Parse { line, message: format!("unknown directive `{other}`") });
            }
        }
    }
    Poset::new(names, &rel)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const N4: &str = "elements a b c d\ncover a c\ncover b c\ncover b d\n";

    fn brute_width(p: &Poset) -> usize {
        (0..(1u64 << p.len()))
            .filter(|&m| p.is_antichain(m))
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    fn brute_linear_extensions(p: &Poset) -> usize {
        let mut perm: Vec<usize> = (0..p.len()).collect();
        let mut count = 0;
        loop {
            let ok = (0..perm.len())
                .all(|i| (i + 1..perm.len()).all(|j| !p.lt(perm[j], perm[i])));
            if ok {
                count += 1;
            }
            if !next_permutation(&mut perm) {
                return count;
            }
        }
    }

    #[test]
    fn parses_n4() {
        let p = parse_poset(N4).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.covers(), &[(0, 2), (1, 2), (1, 3)]);
        assert!(p.leq(1, 3) && !p.leq(0, 3));
    }

    #[test]
    fn singleton_and_errors() {
        let p = parse_poset("elements a").unwrap();
        assert!(p.leq(0, 0));
        assert_eq!(p.covers().len(), 0);
        assert!(matches!(
            parse_poset("elements a b\ncover a b\ncover b a"),
            Err(Error::Cycle(_))
        ));
        assert!(matches!(parse_poset("elements a a"), Err(Error::DuplicateName(_))));
        assert!(matches!(
            parse_poset("elements a\ncover a z"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_poset("elements a\nfoo"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_poset("# c\n\nelements a b\ncover a"), Err(Error::Parse { line: 4, .. })));
    }

    #[test]
    fn redundant_relations_are_reduced() {
        let p = parse_poset("elements x y z\ncover x y\ncover y z\ncover x z").unwrap();
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn width_examples() {
        let p = parse_poset(N4).unwrap();
        let (w, anti) = p.width();
        assert_eq!(w, 2);
        assert_eq!(w, brute_width(&p));
        let mask = anti.iter().fold(0, |m, &x| m | bit(x));
        assert!(p.is_antichain(mask) && anti.len() == 2);
        assert_eq!(Poset::antichain(5).width().0, 5);
        assert_eq!(Poset::chain(4).width().0, 1);
    }

    #[test]
    fn chain_decomposition_examples() {
        let p = parse_poset(N4).unwrap();
        assert_eq!(p.chain_decomposition().chains, vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(Poset::chain(3).chain_decomposition().chains, vec![vec![0, 1, 2]]);
        assert_eq!(
            Poset::antichain(3).chain_decomposition().chains,
            vec![vec![0], vec![1], vec![2]]
        );
    }

    #[test]
    fn linear_extension_examples() {
        assert_eq!(Poset::antichain(3).linear_extensions().count(), 6);
        assert_eq!(Poset::chain(3).linear_extensions().count(), 1);
        let p = parse_poset(N4).unwrap();
        assert_eq!(brute_linear_extensions(&p), 5);
        let exts: Vec<_> = p.linear_extensions().collect();
        assert_eq!(exts.len(), 5);
        let mut sorted = exts.clone();
        sorted.sort();
        assert_eq!(exts, sorted);
        assert!(matches!(
            Poset::antichain(4).linear_extensions_capped(10),
            Err(Error::Budget { .. })
        ));
        assert_eq!(Poset::antichain(0).linear_extensions().count(), 1);
    }

    #[test]
    fn two_chain_union_counts_binomials() {
        for j in 0..=5 {
            for k in 0..=5 {
                let p = Poset::chain(j).disjoint_union(&Poset::chain(k)).unwrap();
                let expect = crate::scalar::binomial::<u64>(j + k, j).unwrap() as usize;
                assert_eq!(p.linear_extensions().count(), expect, "j={j} k={k}");
            }
        }
    }

    #[test]
    fn canonical_form_detects_isomorphism() {
        let a = Poset::from_relations(3, &[(0, 2), (1, 2)]).unwrap();
        let b = Poset::from_relations(3, &[(2, 0), (1, 0)]).unwrap();
        let c = Poset::from_relations(3, &[(0, 1), (0, 2)]).unwrap();
        assert!(a.is_isomorphic(&b).unwrap());
        assert!(!a.is_isomorphic(&c).unwrap());
    }

    #[test]
    fn roundtrip_file_format() {
        let p = Poset::two_chains(3, 2);
        let q = parse_poset(&p.to_poset_file()).unwrap();
        assert_eq!(p, q);
    }
}
