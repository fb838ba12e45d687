//! Hilbert series of planar chain algebras. The numerator counts standard
//! Young tableaux of the cell shape by ascents; oracles count descents of
//! linear extensions and weakly increasing tuples of lattice paths.

use crate::chains::ChainLattice;
use crate::lattice::{DistLattice, GridEmbedding};
use crate::poset::Poset;
use crate::scalar::{add, binomial, mul, Count};
use crate::{Error, Result};
use std::collections::{BTreeSet, HashMap};

/// `h(z) / (1 - z)^denom_power`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series<C> {
    pub h: Vec<C>,
    pub denom_power: usize,
}

impl<C: Count> Series<C> {
    /// Coefficient of `z^k`: `sum_i h_i C(k - i + D - 1, D - 1)`.
    pub fn coefficient(&self, k: usize) -> Result<C> {
        let d = self.denom_power;
        let mut total = C::zero();
        for (i, hi) in self.h.iter().enumerate().take(k + 1) {
            let c = if d == 0 {
                if k == i { C::one() } else { C::zero() }
            } else {
                binomial::<C>(k - i + d - 1, d - 1)?
            };
            total = add(&total, &mul(hi, &c, "hilbert coefficient")?, "hilbert coefficient")?;
        }
        Ok(total)
    }

    pub fn is_symmetric(&self) -> bool {
        self.h.iter().eq(self.h.iter().rev())
    }
}

/// Cells in matrix coordinates `(row, col)`, top row first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewShape {
    cells: Vec<(usize, usize)>,
}

impl SkewShape {
    /// Cells sorted row-major; rejects sets that are not a difference of two
    /// Young diagrams.
    pub fn new(cells: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let cells: BTreeSet<(usize, usize)> = cells.into_iter().collect();
        let mut rows: Vec<(usize, usize, usize)> = Vec::new();
        for &(r, c) in &cells {
            match rows.last_mut() {
                Some((row, _, end)) if *row == r => {
                    if c != *end + 1 {
                        return Err(Error::Invalid(format!("row {r} is not contiguous")));
                    }
                    *end = c;
                }
                _ => rows.push((r, c, c)),
            }
        }
        for w in rows.windows(2) {
            let ((r0, s0, e0), (r1, s1, e1)) = (w[0], w[1]);
            // rows may be empty where every lattice path shares a segment
            if s1 > s0 || e1 > e0 || (r1 > r0 + 1 && e1 + 1 > s0) {
                return Err(Error::Invalid("cells do not form a skew shape".into()));
            }
        }
        Ok(SkewShape { cells: cells.into_iter().collect() })
    }

    pub fn rectangle(rows: usize, cols: usize) -> Self {
        SkewShape { cells: (0..rows).flat_map(|r| (0..cols).map(move |c| (r, c))).collect() }
    }

    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Number of cells in each row, top row first.
    pub fn row_lengths(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        let mut last = None;
        for &(r, _) in &self.cells {
            if last == Some(r) {
                *out.last_mut().unwrap() += 1;
            } else {
                out.push(1);
                last = Some(r);
            }
        }
        out
    }

    /// The cells as a poset ordered down and right, elements `p1, p2, …` in
    /// row-major order.
    pub fn cell_poset(&self) -> Poset {
        let mut rel = Vec::new();
        for (k, &(r, c)) in self.cells.iter().enumerate() {
            for (m, &(r2, c2)) in self.cells.iter().enumerate() {
                if k != m && r <= r2 && c <= c2 {
                    rel.push((k, m));
                }
            }
        }
        let names = (1..=self.cells.len()).map(|k| format!("p{k}")).collect();
        Poset::new(names, &rel).expect("cell adjacency is acyclic")
    }
}

/// The cell of grid element `(i, j)` is the unit square with top-right
/// corner there; it goes to row `b - j`, column `i - 1`.
pub fn skew_shape(g: &GridEmbedding) -> Result<SkewShape> {
    SkewShape::new(g.cells().iter().map(|&t| {
        let (i, j) = g.coord(t);
        (g.b - j, i - 1)
    }))
}

fn syt_budget(shape: &SkewShape, max_cells: usize) -> Result<()> {
    if shape.len() > max_cells || shape.len() > 63 {
        return Err(Error::Budget { budget: "max_syt_cells", limit: max_cells });
    }
    Ok(())
}

/// `result[k]` = number of SYT of the shape in which `i + 1` lies in a row
/// strictly above `i` for exactly `k` values of `i`.
///
/// Dynamic programming over filled subsets (order ideals of the cell poset)
/// and the row of the last entry.
pub fn syt_ascents<C: Count>(shape: &SkewShape, max_cells: usize) -> Result<Vec<C>> {
    syt_budget(shape, max_cells)?;
    let d = shape.len();
    if d == 0 {
        return Ok(vec![C::one()]);
    }
    let p = shape.cell_poset();
    let rows: Vec<usize> = shape.cells.iter().map(|&(r, _)| r).collect();
    // state: (filled mask, index of the last filled cell) -> counts by ascents
    let mut layer: HashMap<(u64, usize), Vec<C>> = HashMap::new();
    for k in 0..d {
        if p.down_set(k) == 1 << k {
            layer.insert((1 << k, k), vec![C::one()]);
        }
    }
    for _ in 1..d {
        let mut next: HashMap<(u64, usize), Vec<C>> = HashMap::new();
        for ((mask, last), counts) in &layer {
            let mut free = p.addable(*mask);
            while free != 0 {
                let k = free.trailing_zeros() as usize;
                free &= free - 1;
                let shift = usize::from(rows[k] < rows[*last]);
                let slot = next.entry((mask | 1 << k, k)).or_default();
                if slot.len() < counts.len() + shift {
                    slot.resize(counts.len() + shift, C::zero());
                }
                for (a, c) in counts.iter().enumerate() {
                    slot[a + shift] = add(&slot[a + shift], c, "SYT count")?;
                }
            }
        }
        layer = next;
    }
    let mut out: Vec<C> = Vec::new();
    for counts in layer.values() {
        if out.len() < counts.len() {
            out.resize(counts.len(), C::zero());
        }
        for (a, c) in counts.iter().enumerate() {
            out[a] = add(&out[a], c, "SYT count")?;
        }
    }
    while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    Ok(out)
}

/// Number of maximal chains of `l`, by counting paths in the cover graph.
pub fn chain_count<C: Count>(l: &DistLattice) -> Result<C> {
    let mut paths = vec![C::zero(); l.len()];
    paths[l.bottom()] = C::one();
    // labels are sorted by rank, so covers always point forward
    for t in 0..l.len() {
        for &u in l.upper_covers(t) {
            paths[u] = add(&paths[u], &paths[t], "chain count")?;
        }
    }
    Ok(paths[l.top()].clone())
}

/// `h / (1 - z)^(d + 1)` with `h` the SYT ascent counts of the cell shape.
pub fn hilbert_series<C: Count>(l: &DistLattice, max_cells: usize) -> Result<Series<C>> {
    let g = l.grid_embedding()?;
    let shape = skew_shape(&g)?;
    let h = syt_ascents::<C>(&shape, max_cells)?;
    let series = Series { h, denom_power: shape.len() + 1 };
    if series.h[0] != C::one() {
        return Err(Error::Consistency("h_0 differs from 1".into()));
    }
    let chains = chain_count::<C>(l)?;
    if series.coefficient(1)? != chains {
        return Err(Error::Consistency(format!(
            "degree-one coefficient {} differs from the chain count {chains}",
            series.coefficient(1)?
        )));
    }
    Ok(series)
}

/// Descent counts over linear extensions of the cell poset, labelled row by
/// row from the top. `cap` bounds the number of extensions visited.
pub fn descents_oracle<C: Count>(l: &DistLattice, cap: usize) -> Result<Vec<C>> {
    let shape = skew_shape(&l.grid_embedding()?)?;
    descents_of_shape(&shape, cap)
}

pub fn descents_of_shape<C: Count>(shape: &SkewShape, cap: usize) -> Result<Vec<C>> {
    let p = shape.cell_poset();
    let mut out: Vec<C> = vec![C::zero(); shape.len().max(1)];
    for (seen, w) in p.linear_extensions().enumerate() {
        if seen == cap {
            return Err(Error::Budget { budget: "linear_extensions", limit: cap });
        }
        let des = w.windows(2).filter(|x| x[0] > x[1]).count();
        out[des] = add(&out[des], &C::one(), "descent count")?;
    }
    while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    Ok(out)
}

/// Weakly increasing `k`-tuples of maximal chains in the chain order.
pub fn nontraversing_count<C: Count>(lc: &ChainLattice, k: usize) -> Result<C> {
    let n = lc.len();
    if k == 0 {
        return Ok(C::one());
    }
    // chains are stored in a linear extension of the chain order
    let below: Vec<Vec<usize>> = (0..n).map(|b| (0..=b).filter(|&a| lc.leq(a, b)).collect()).collect();
    let mut f = vec![C::one(); n];
    for _ in 1..k {
        let mut g = vec![C::zero(); n];
        for b in 0..n {
            for &a in &below[b] {
                g[b] = add(&g[b], &f[a], "multichain count")?;
            }
        }
        f = g;
    }
    f.iter().try_fold(C::zero(), |acc, x| add(&acc, x, "multichain count"))
}

/// All maximal chains of the cell poset have the same length.
pub fn is_pure(p: &Poset) -> bool {
    let n = p.len();
    let mut ups = vec![Vec::new(); n];
    for &(u, v) in p.covers() {
        ups[u].push(v);
    }
    // (shortest, longest) path length to a maximal element
    let mut span = vec![(0usize, 0usize); n];
    for &v in p.topological_order().iter().rev() {
        if let Some(lo) = ups[v].iter().map(|&w| span[w].0 + 1).min() {
            let hi = ups[v].iter().map(|&w| span[w].1 + 1).max().unwrap();
            span[v] = (lo, hi);
        }
    }
    let minimal: Vec<usize> = (0..n).filter(|&v| p.down_set(v).count_ones() == 1).collect();
    let lengths: BTreeSet<usize> = minimal.iter().flat_map(|&v| [span[v].0, span[v].1]).collect();
    lengths.len() <= 1
}

/// Purity of the cell poset of a planar lattice.
pub fn is_gorenstein(l: &DistLattice) -> Result<bool> {
    let shape = skew_shape(&l.grid_embedding()?)?;
    Ok(is_pure(&shape.cell_poset()))
}

/// The h-polynomial of the `a × b` rectangle lattice.
pub fn narayana_polynomial<C: Count>(a: usize, b: usize, max_cells: usize) -> Result<Vec<C>> {
    syt_ascents(&SkewShape::rectangle(a, b), max_cells)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Unimodality {
    pub unimodal: bool,
    /// Index of the first maximum.
    pub peak: usize,
}

pub fn unimodality_report<C: Ord>(h: &[C]) -> Unimodality {
    let peak = (0..h.len()).fold(0, |best, i| if h[i] > h[best] { i } else { best });
    let unimodal = h.is_empty()
        || (h[..=peak].windows(2).all(|w| w[0] <= w[1]) && h[peak..].windows(2).all(|w| w[0] >= w[1]));
    Unimodality { unimodal, peak }
}
