//! Acceptance suite: one line per criterion, exit status 1 if any blocking
//! criterion fails. Every comparison is exact integer equality; the only
//! pinned tolerances are the wall-clock limits in `main`.

use chainlat::chains::{chain_graph, chain_join, chain_meet, maximal_chains};
use chainlat::corpus::generate;
use chainlat::hilbert::{
    descents_oracle, hilbert_series, is_gorenstein, narayana_polynomial, nontraversing_count, skew_shape,
    syt_ascents,
};
use chainlat::chains::ChainLattice;
use chainlat::linalg::exact_rank;
use chainlat::nonplanar::{parse_cycle, verify_witness, CycleWitness};
use chainlat::sorting::{
    hibi_sort_monomials, is_sortable_set, sort_pair, sorting_relations, verify_hibi_sorting, SortContext,
    SortingRelation,
};
use chainlat::toric::{
    buchberger, hilbert_by_fibers, minimal_generators, sorting_binomials, Binomial, GeneratorMap,
};
use chainlat::{parse_poset, Budgets, DistLattice, Monomial, Poset};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

/// Highest degree scanned for B3 and B4.
const SCAN_B3: usize = 8;
const SCAN_B4: usize = 6;
/// Largest poset size in the corpus.
const CORPUS_MAX: usize = 5;
/// Gröbner certification runs on planar lattices with at most this many chains.
const GB_CHAIN_LIMIT: usize = 20;

type Outcome = Result<String, String>;

struct Criterion {
    id: usize,
    title: &'static str,
    limit: Duration,
    /// A failure of a non-blocking criterion is reported but does not fail
    /// the suite.
    blocking: bool,
    run: fn() -> Outcome,
}

fn fixture(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn lattice_of(p: &Poset) -> DistLattice {
    DistLattice::birkhoff(p, Budgets::default().max_ideals).expect("lattice within budget")
}

fn fixture_lattice(name: &str) -> DistLattice {
    lattice_of(&parse_poset(&fixture(name)).expect("fixture parses"))
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn chain_map(l: &DistLattice) -> GeneratorMap {
    GeneratorMap::chain_algebra(l, Budgets::default().max_chains).expect("chain algebra")
}

fn corpus() -> Vec<Poset> {
    generate(CORPUS_MAX).expect("corpus")
}

fn criterion_1() -> Outcome {
    let l = fixture_lattice("n4.poset");
    let g = chain_map(&l);
    let gens: Vec<String> = g.generators().iter().map(|u| u.display_with(|v| format!("t{v}"))).collect();
    ensure!(gens == ["t1t3t5", "t1t3t6", "t2t3t5", "t2t3t6", "t2t4t6"], "generators {gens:?}");
    let basis = minimal_generators(&g, 4, Budgets::default().max_fiber_nodes).map_err(|e| e.to_string())?;
    let all: Vec<String> = basis.all().map(|b| b.display(&g)).collect();
    ensure!(all == ["T2T3 - T1T4"], "minimal generators {all:?}");
    let k = chainlat::chains::krull_dimension(&l, 100).map_err(|e| e.to_string())?;
    ensure!(k.by_formula == 4 && k.by_rank == 4, "Krull dimension {k:?}");
    Ok("5 generators, T2T3 - T1T4, dim 4".into())
}

fn criterion_2() -> Outcome {
    let posets = corpus();
    for p in &posets {
        let l = lattice_of(p);
        let chains = maximal_chains(&l, Budgets::default().max_chains).map_err(|e| e.to_string())?;
        // exponent vectors with a constant column, rank by exact elimination
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
        let rank = exact_rank(&rows);
        ensure!(rank == l.len() - p.len(), "{}: rank {rank}, |L| - |P| = {}", p.encoding(), l.len() - p.len());
        let g = chain_graph(&l).map_err(|e| format!("{}: {e}", p.encoding()))?;
        ensure!(g.components == p.len() + 1, "{}: {} components", p.encoding(), g.components);
    }
    Ok(format!("{} posets", posets.len()))
}

fn criterion_3() -> Outcome {
    let l = fixture_lattice("crossed.poset");
    let s = hilbert_series::<u64>(&l, Budgets::default().max_syt_cells).map_err(|e| e.to_string())?;
    ensure!(s.h == [1, 18, 65, 65, 18, 1], "h = {:?}", s.h);
    ensure!(s.denom_power == 9, "denominator power {}", s.denom_power);
    ensure!(is_gorenstein(&l).map_err(|e| e.to_string())?, "not Gorenstein");
    let lc = ChainLattice::new(&l, 1000).map_err(|e| e.to_string())?;
    let g = chain_map(&l);
    let mut coeffs = Vec::new();
    for k in 1..=3 {
        let c = s.coefficient(k).map_err(|e| e.to_string())?;
        let paths = nontraversing_count::<u64>(&lc, k).map_err(|e| e.to_string())?;
        let fibers = hilbert_by_fibers(&g, k, Budgets::default().max_fiber_nodes).map_err(|e| e.to_string())? as u64;
        ensure!(c == paths && c == fibers, "degree {k}: series {c}, paths {paths}, fibers {fibers}");
        coeffs.push(c);
    }
    Ok(format!("h = (1,18,65,65,18,1)/(1-z)^9, coefficients {coeffs:?}"))
}

fn planar_lattices() -> Vec<(Poset, DistLattice)> {
    corpus().into_iter().filter(|p| p.width().0 <= 2).map(|p| {
        let l = lattice_of(&p);
        (p, l)
    }).collect()
}

fn criterion_4() -> Outcome {
    let mut planar = planar_lattices();
    planar.push((Poset::antichain(0), fixture_lattice("crossed.poset")));
    for (p, l) in &planar {
        let shape = skew_shape(&l.grid_embedding().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let asc = syt_ascents::<u64>(&shape, Budgets::default().max_syt_cells).map_err(|e| e.to_string())?;
        let des = descents_oracle::<u64>(l, 10_000_000).map_err(|e| e.to_string())?;
        ensure!(asc == des, "{}: ascents {asc:?}, descents {des:?}", p.encoding());
    }
    Ok(format!("{} planar lattices", planar.len()))
}

fn criterion_5() -> Outcome {
    let planar = planar_lattices();
    let mut certified = 0;
    for (p, l) in &planar {
        let grid = l.grid_embedding().map_err(|e| e.to_string())?;
        let ctx = SortContext::for_lattice(l, Some(&grid));
        let chains = maximal_chains(l, 100_000).map_err(|e| e.to_string())?;
        let monos: Vec<Monomial> = chains.iter().map(|c| c.monomial()).collect();
        ensure!(is_sortable_set(&monos, &ctx).map_err(|e| e.to_string())?.sortable, "{}: not sortable", p.encoding());
        for c in &chains {
            for d in &chains {
                let sorted = sort_pair(&c.monomial(), &d.monomial(), &ctx).map_err(|e| e.to_string())?;
                let meet = chain_meet(l, c, d, &grid).map_err(|e| e.to_string())?.monomial();
                let join = chain_join(l, c, d, &grid).map_err(|e| e.to_string())?.monomial();
                ensure!(sorted == (meet, join), "{}: sort differs from meet/join", p.encoding());
            }
        }
        if chains.len() <= GB_CHAIN_LIMIT {
            let g = chain_map(l);
            let rels = sorting_relations(g.generators(), &ctx).map_err(|e| e.to_string())?;
            let bins = sorting_binomials(&g, &rels).map_err(|e| e.to_string())?;
            let r = buchberger(&g, &bins, 10_000).map_err(|e| e.to_string())?;
            ensure!(r.input_is_groebner && r.input_is_reduced, "{}: sorting relations are not a reduced GB", p.encoding());
            certified += 1;
        }
    }
    Ok(format!("{} planar lattices, {certified} GB-certified", planar.len()))
}

fn criterion_6() -> Outcome {
    let cap = Budgets::default().max_fiber_nodes;
    let mut checked = 0;
    for p in corpus() {
        let n = p.width().0;
        if !(3..=4).contains(&n) {
            continue;
        }
        let g = chain_map(&lattice_of(&p));
        let basis = minimal_generators(&g, n, cap).map_err(|e| e.to_string())?;
        let quadratic = basis.by_degree.keys().all(|&d| d <= 2);
        ensure!(!quadratic, "{}: quadratically generated", p.encoding());
        ensure!(basis.by_degree.contains_key(&n), "{}: no generator of degree {n}", p.encoding());
        checked += 1;
    }
    let mut profiles = Vec::new();
    for (file, n, scan) in [("b3.poset", 3, SCAN_B3), ("b4.poset", 4, SCAN_B4)] {
        let g = chain_map(&fixture_lattice(file));
        let basis = minimal_generators(&g, scan, cap).map_err(|e| e.to_string())?;
        let top = basis.max_generator_degree();
        ensure!(top == Some(n), "B{n}: top degree {top:?} within degree {scan}");
        profiles.push(format!("B{n} {:?}", basis.degree_profile()));
    }
    Ok(format!("{checked} posets of width 3-4; {}", profiles.join("; ")))
}

fn criterion_7() -> Outcome {
    let l = fixture_lattice("b5.poset");
    let (low, high) = parse_cycle(&l, &fixture("b5_cycle12.txt")).map_err(|e| e.to_string())?;
    let w = CycleWitness::from_cycle(&l, low, high).map_err(|e| e.to_string())?;
    ensure!(w.degree() == 6 && w.rank_a == 2, "cycle of length {} at rank {}", 2 * w.degree(), w.rank_a);
    let b = Budgets::default();
    let r = verify_witness(&l, &w, b.max_chains, b.max_fiber_nodes).map_err(|e| e.to_string())?;
    ensure!(r.in_kernel && r.minimal, "{r:?}");
    Ok(format!("12-cycle; fiber of {} points in {} components", r.fiber_size, r.components))
}

fn criterion_8() -> Outcome {
    let posets: Vec<Poset> = corpus().into_iter().filter(|p| p.len() <= 4).collect();
    let mut relations = 0;
    for p in &posets {
        let l = lattice_of(p);
        let r = verify_hibi_sorting(&l).map_err(|e| e.to_string())?;
        ensure!(r.holds, "{}: {:?}", p.encoding(), r.counterexample);
        relations += r.relations;
    }
    let l = fixture_lattice("b3.poset");
    let h = hibi_sort_monomials(&l);
    let name = |m: &Monomial| m.display_with(|v| h.var_name(v));
    let find = |s: &str| h.monomials.iter().position(|m| name(m) == s).ok_or(format!("missing {s}"));
    let (i, j) = (find("x1_1x2_0x3_0")?, find("x1_0x2_1x3_1")?);
    let sorted = sort_pair(&h.monomials[i], &h.monomials[j], &h.context()).map_err(|e| e.to_string())?;
    ensure!(
        (name(&sorted.0), name(&sorted.1)) == ("x1_0x2_0x3_0".into(), "x1_1x2_1x3_1".into()),
        "B3 relation sorts to {sorted:?}"
    );
    Ok(format!("{} posets, {relations} relations", posets.len()))
}

fn graded_dims(g: &GeneratorMap, top: usize) -> Result<Vec<usize>, String> {
    (0..=top).map(|d| hilbert_by_fibers(g, d, 1_000_000).map_err(|e| e.to_string())).collect()
}

fn criterion_9() -> Outcome {
    // x, y, z, w = 0..4; xy, xz, xw, yz, yw, zw
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let set: Vec<Monomial> = pairs.iter().map(|&(a, b)| Monomial::new(vec![a, b])).collect();
    let ctx = SortContext::natural(4);
    ensure!(is_sortable_set(&set, &ctx).map_err(|e| e.to_string())?.sortable, "not sortable");
    let rels = sorting_relations(&set, &ctx).map_err(|e| e.to_string())?;
    let expect = [SortingRelation { lhs: (0, 5), rhs: (1, 4) }, SortingRelation { lhs: (2, 3), rhs: (1, 4) }];
    ensure!(rels == expect, "relations {rels:?}");
    let g = GeneratorMap::new(set.clone(), 4).map_err(|e| e.to_string())?;
    let shown: Vec<String> = sorting_binomials(&g, &rels)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|b: &Binomial| b.display(&g))
        .collect();
    let rows: Vec<Vec<i64>> = set.iter().map(|m| m.exponents(4).into_iter().map(i64::from).collect()).collect();
    let dim = exact_rank(&rows);
    ensure!(dim == 4, "Krull dimension {dim}");
    let veronese = graded_dims(&g, 3)?;
    let hibi3 = chainlat::corpus::posets_of_size(3).map_err(|e| e.to_string())?;
    ensure!(hibi3.len() == 5, "{} posets on 3 elements", hibi3.len());
    for p in &hibi3 {
        let h = hibi_sort_monomials(&lattice_of(p));
        let gh = GeneratorMap::new(h.monomials.clone(), h.nvars).map_err(|e| e.to_string())?;
        let dims = graded_dims(&gh, 3)?;
        ensure!(dims != veronese, "{} has the same graded dimensions {dims:?}", p.encoding());
    }
    Ok(format!("{}; dims {veronese:?}", shown.join(", ")))
}

/// Hook-length formula for the number of SYT of an `a × b` rectangle.
fn hook_length_count(a: usize, b: usize) -> u64 {
    let mut num: u128 = (1..=(a * b) as u128).product();
    for r in 0..a {
        for c in 0..b {
            num /= ((a - r - 1) + (b - c - 1) + 1) as u128;
        }
    }
    num as u64
}

fn criterion_10() -> Outcome {
    let planar = planar_lattices();
    for (p, l) in &planar {
        let shape = skew_shape(&l.grid_embedding().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure!(l.len() - p.len() == shape.len() + 1, "{}: {} cells", p.encoding(), shape.len());
    }
    let mut sums = Vec::new();
    for a in 1..=3 {
        for b in 1..=3 {
            let h = narayana_polynomial::<u64>(a, b, 16).map_err(|e| e.to_string())?;
            ensure!(h.iter().eq(h.iter().rev()), "{a}x{b}: h = {h:?} not symmetric");
            let total: u64 = h.iter().sum();
            ensure!(total == hook_length_count(a, b), "{a}x{b}: sum {total}");
            sums.push(total);
        }
    }
    Ok(format!("{} planar lattices; rectangle SYT counts {sums:?}", planar.len()))
}

fn criterion_11() -> Outcome {
    let cap = Budgets::default().max_fiber_nodes;
    let mut seen = 0;
    let mut flagged = Vec::new();
    let mut scan = |name: String, g: &GeneratorMap, top: usize| -> Result<(), String> {
        let basis = minimal_generators(g, top, cap).map_err(|e| e.to_string())?;
        for b in basis.all() {
            seen += 1;
            if b.plus.iter().chain(&b.minus).any(|&e| e > 1) {
                flagged.push(format!("{name}: {}", b.display(g)));
            }
        }
        Ok(())
    };
    for p in corpus() {
        let n = p.width().0;
        if n <= 4 {
            scan(p.encoding(), &chain_map(&lattice_of(&p)), n.max(2))?;
        }
    }
    scan("B3".into(), &chain_map(&fixture_lattice("b3.poset")), SCAN_B3)?;
    scan("B4".into(), &chain_map(&fixture_lattice("b4.poset")), SCAN_B4)?;
    if flagged.is_empty() {
        Ok(format!("{seen} minimal generators, all squarefree"))
    } else {
        Err(format!("{} of {seen} need review: {}", flagged.len(), flagged.join("; ")))
    }
}

fn main() {
    let criteria = [
        Criterion { id: 1, title: "worked example", limit: Duration::from_secs(1), blocking: true, run: criterion_1 },
        Criterion { id: 2, title: "dimension formula on the corpus", limit: Duration::from_secs(60), blocking: true, run: criterion_2 },
        Criterion { id: 3, title: "Hilbert series golden", limit: Duration::from_secs(30), blocking: true, run: criterion_3 },
        Criterion { id: 4, title: "ascents = descents", limit: Duration::from_secs(60), blocking: true, run: criterion_4 },
        Criterion { id: 5, title: "planar sorting and Groebner bases", limit: Duration::from_secs(120), blocking: true, run: criterion_5 },
        Criterion { id: 6, title: "non-planar generator degrees", limit: Duration::from_secs(600), blocking: true, run: criterion_6 },
        Criterion { id: 7, title: "B5 degree-six witness", limit: Duration::from_secs(600), blocking: true, run: criterion_7 },
        Criterion { id: 8, title: "Hibi relations are sorting relations", limit: Duration::from_secs(60), blocking: true, run: criterion_8 },
        Criterion { id: 9, title: "Veronese non-example", limit: Duration::from_secs(30), blocking: true, run: criterion_9 },
        Criterion { id: 10, title: "cells and rectangles", limit: Duration::from_secs(30), blocking: true, run: criterion_10 },
        Criterion { id: 11, title: "squarefree generators (observation)", limit: Duration::from_secs(600), blocking: false, run: criterion_11 },
    ];
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in &criteria {
        if !filter.is_empty() && !filter.contains(&c.id) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.limit => Err(format!("{detail}; exceeded {:?}", c.limit)),
            other => other,
        };
        let (tag, detail) = match (&outcome, c.blocking) {
            (Ok(d), _) => ("PASS", d.clone()),
            (Err(d), true) => ("FAIL", d.clone()),
            (Err(d), false) => ("FLAG", d.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {tag} {:>8.2}s  {}: {detail}", c.id, elapsed.as_secs_f64(), c.title);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
