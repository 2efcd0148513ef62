//! Confusability graphs and exact maximum-code search at desk scale: the
//! vertices are all arrays of one shape, edges join pairs whose error balls
//! intersect, and a maximum code is a maximum independent set.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::balls::{BallCache, BallKind};
use crate::codes::{redundancy, Code, Redundancy};
use crate::error::{Error, Result};
use crate::tensor::{Alphabet, EditVector, NdArray, Shape, Universe};

pub const DEFAULT_VERTEX_BUDGET: u128 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Deletion,
    Insdel,
}

impl std::fmt::Display for GraphKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphKind::Deletion => f.write_str("del"),
            GraphKind::Insdel => f.write_str("insdel"),
        }
    }
}

/// Undirected, loop-free graph on every array of one shape and alphabet;
/// an edge means the two error balls intersect.
#[derive(Debug, Clone)]
pub struct ConfusabilityGraph {
    alphabet: Alphabet,
    shape: Shape,
    t: EditVector,
    kind: GraphKind,
    vertices: Vec<NdArray>,
    adj: Vec<Vec<u64>>,
    edges: u64,
}

impl ConfusabilityGraph {
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn parameter(&self) -> &EditVector {
        &self.t
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    /// Vertices in ascending array order.
    pub fn vertices(&self) -> &[NdArray] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> u64 {
        self.edges
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a][b / 64] >> (b % 64) & 1 == 1
    }

    /// Same edge set as another graph (vertex sets must already agree).
    pub fn same_edges(&self, other: &ConfusabilityGraph) -> bool {
        self.adj == other.adj
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        for (k, &a) in set.iter().enumerate() {
            for &b in &set[k + 1..] {
                if self.adjacent(a, b) {
                    return false;
                }
            }
        }
        true
    }

    /// No vertex outside the set can be added without closing an edge.
    pub fn is_maximal_independent(&self, set: &[usize]) -> bool {
        if !self.is_independent(set) {
            return false;
        }
        'outer: for v in 0..self.vertex_count() {
            if set.contains(&v) {
                continue;
            }
            for &a in set {
                if self.adjacent(a, v) {
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }
}

/// Build the complete confusability graph, grouping ball members so each
/// ball is enumerated once.
pub fn build_graph(
    q: Alphabet,
    shape: &Shape,
    t: &EditVector,
    kind: GraphKind,
    vertex_budget: u128,
    cache: &BallCache,
) -> Result<ConfusabilityGraph> {
    shape.check_edit_vector(t)?;
    if kind == GraphKind::Deletion {
        shape.shrunk(t)?;
    }
    let universe = Universe::new(q, shape.clone());
    let count = universe.count()?;
    if count > vertex_budget {
        return Err(Error::BudgetExceeded {
            count,
            budget: vertex_budget,
        });
    }
    let vertices: Vec<NdArray> = universe.iter().collect();
    let n = vertices.len();
    let ball_kind = match kind {
        GraphKind::Deletion => BallKind::Deletion,
        GraphKind::Insdel => BallKind::Insdel,
    };
    let mut groups: HashMap<NdArray, Vec<u32>> = HashMap::new();
    for (vi, v) in vertices.iter().enumerate() {
        let ball = cache.ball(ball_kind, v, t)?;
        for m in ball.members() {
            groups.entry(m.clone()).or_default().push(vi as u32);
        }
    }
    let words = n.div_ceil(64);
    let mut adj = vec![vec![0u64; words]; n];
    for centers in groups.values() {
        if centers.len() < 2 {
            continue;
        }
        let mut mask = vec![0u64; words];
        for &c in centers {
            mask[c as usize / 64] |= 1 << (c as usize % 64);
        }
        for &c in centers {
            let row = &mut adj[c as usize];
            for (w, &m) in mask.iter().enumerate() {
                row[w] |= m;
            }
        }
    }
    let mut edges = 0u64;
    for (v, row) in adj.iter_mut().enumerate() {
        row[v / 64] &= !(1 << (v % 64));
        edges += row.iter().map(|w| w.count_ones() as u64).sum::<u64>();
    }
    Ok(ConfusabilityGraph {
        alphabet: q,
        shape: shape.clone(),
        t: t.clone(),
        kind,
        vertices,
        adj,
        edges: edges / 2,
    })
}

struct CliqueSearch<'a> {
    comp: &'a [Vec<u64>],
    words: usize,
    best: Vec<usize>,
    exact: bool,
    deadline: Option<Instant>,
    target: Option<usize>,
}

fn iter_bits(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(w, &bits)| {
        std::iter::successors(
            if bits == 0 { None } else { Some(bits) },
            |&b| {
                let b = b & (b - 1);
                if b == 0 {
                    None
                } else {
                    Some(b)
                }
            },
        )
        .map(move |b| w * 64 + b.trailing_zeros() as usize)
    })
}

impl<'a> CliqueSearch<'a> {
    fn timed_out(&mut self) -> bool {
        if let Some(deadline) = self.deadline {
            if Instant::now() > deadline {
                self.exact = false;
                return true;
            }
        }
        false
    }

    /// Greedy coloring of the candidate set; returns `(vertex, color)` in
    /// ascending color order, so iterating from the back visits the most
    /// constrained vertices first.
    fn color_sort(&self, cand: &[u64]) -> Vec<(usize, usize)> {
        let mut classes: Vec<Vec<u64>> = Vec::new();
        let mut colored: Vec<(usize, usize)> = Vec::new();
        for v in iter_bits(cand) {
            let mut placed = None;
            for (ci, class) in classes.iter().enumerate() {
                let clash = class
                    .iter()
                    .zip(&self.comp[v])
                    .any(|(&c, &n)| c & n != 0);
                if !clash {
                    placed = Some(ci);
                    break;
                }
            }
            let ci = match placed {
                Some(ci) => ci,
                None => {
                    classes.push(vec![0u64; self.words]);
                    classes.len() - 1
                }
            };
            classes[ci][v / 64] |= 1 << (v % 64);
            colored.push((v, ci + 1));
        }
        colored.sort_by_key(|&(v, c)| (c, v));
        colored
    }

    fn expand(&mut self, stack: &mut Vec<usize>, cand: Vec<u64>) {
        if self.timed_out() {
            return;
        }
        if let Some(target) = self.target {
            if self.best.len() >= target {
                return;
            }
        }
        let colored = self.color_sort(&cand);
        let mut cand = cand;
        for (v, color) in colored.into_iter().rev() {
            if stack.len() + color <= self.best.len() {
                return;
            }
            stack.push(v);
            let next: Vec<u64> = cand
                .iter()
                .zip(&self.comp[v])
                .map(|(&c, &n)| c & n)
                .collect();
            if next.iter().all(|&w| w == 0) {
                if stack.len() > self.best.len() {
                    self.best = stack.clone();
                }
            } else {
                self.expand(stack, next);
            }
            stack.pop();
            cand[v / 64] &= !(1 << (v % 64));
        }
    }
}

fn complement_rows(adj: &[Vec<u64>], n: usize) -> Vec<Vec<u64>> {
    let words = n.div_ceil(64);
    (0..n)
        .map(|v| {
            let mut row: Vec<u64> = adj[v].iter().map(|&w| !w).collect();
            row[v / 64] &= !(1 << (v % 64));
            if n % 64 != 0 {
                let last = words - 1;
                row[last] &= (1u64 << (n % 64)) - 1;
            }
            row
        })
        .collect()
}

fn greedy_independent(adj: &[Vec<u64>], n: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    'outer: for v in 0..n {
        for &c in &chosen {
            if adj[c][v / 64] >> (v % 64) & 1 == 1 {
                continue 'outer;
            }
        }
        chosen.push(v);
    }
    chosen
}

/// Exact maximum independent set by branch and bound (maximum clique on the
/// complement with a greedy coloring bound), then a forcing pass that turns
/// the size into the lexicographically least maximum witness.
fn max_independent_set(
    adj: &[Vec<u64>],
    n: usize,
    deadline: Option<Instant>,
) -> (Vec<usize>, bool) {
    if n == 0 {
        return (Vec::new(), true);
    }
    let comp = complement_rows(adj, n);
    let words = n.div_ceil(64);
    let full: Vec<u64> = {
        let mut f = vec![u64::MAX; words];
        if n % 64 != 0 {
            f[words - 1] = (1u64 << (n % 64)) - 1;
        }
        f
    };
    let mut search = CliqueSearch {
        comp: &comp,
        words,
        best: greedy_independent(adj, n),
        exact: true,
        deadline,
        target: None,
    };
    search.expand(&mut Vec::new(), full.clone());
    let size = search.best.len();
    let mut exact = search.exact;
    if !exact {
        return (search.best, false);
    }

    // lexicographically least witness of the proven size
    let mut chosen: Vec<usize> = Vec::new();
    let mut allowed = full;
    for v in 0..n {
        if allowed[v / 64] >> (v % 64) & 1 != 1 {
            continue;
        }
        let mut next_allowed: Vec<u64> = allowed
            .iter()
            .zip(&comp[v])
            .map(|(&a, &c)| a & c)
            .collect();
        // future picks must be larger than v to keep the set sorted
        for w in 0..words {
            let lo = w * 64;
            if lo + 64 <= v + 1 {
                next_allowed[w] = 0;
            } else if lo <= v {
                next_allowed[w] &= !((1u64 << ((v + 1 - lo).min(64)) as u32).wrapping_sub(1));
            }
        }
        let needed = size - chosen.len() - 1;
        let feasible = if needed == 0 {
            true
        } else {
            let mut probe = CliqueSearch {
                comp: &comp,
                words,
                best: Vec::new(),
                exact: true,
                deadline,
                target: Some(needed),
            };
            probe.expand(&mut Vec::new(), next_allowed.clone());
            if !probe.exact {
                exact = false;
                break;
            }
            probe.best.len() >= needed
        };
        if feasible {
            chosen.push(v);
            allowed = next_allowed;
            if chosen.len() == size {
                break;
            }
        } else {
            allowed[v / 64] &= !(1 << (v % 64));
        }
    }
    if chosen.len() == size {
        (chosen, exact)
    } else {
        (search.best, false)
    }
}

/// Reference oracle: scan every subset by bitmask. Only for graphs small
/// enough to enumerate completely.
pub fn max_independent_set_exhaustive(graph: &ConfusabilityGraph) -> Result<usize> {
    let n = graph.vertex_count();
    if n > 24 {
        return Err(Error::BudgetExceeded {
            count: 1u128 << n,
            budget: 1 << 24,
        });
    }
    let mut best = 0usize;
    for mask in 0u32..(1u32 << n) {
        if (mask.count_ones() as usize) <= best {
            continue;
        }
        let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if graph.is_independent(&set) {
            best = set.len();
        }
    }
    Ok(best)
}

#[derive(Debug, Clone)]
pub struct MaxCode {
    pub size: usize,
    pub code: Code,
    /// False when a time limit interrupted the search; the reported code is
    /// then only the best one found.
    pub exact: bool,
}

/// Exact maximum code (maximum independent set) of a confusability graph.
pub fn max_code(graph: &ConfusabilityGraph, time_limit: Option<Duration>) -> Result<MaxCode> {
    let deadline = time_limit.map(|d| Instant::now() + d);
    let (set, exact) = max_independent_set(&graph.adj, graph.vertex_count(), deadline);
    let words: Vec<NdArray> = set.iter().map(|&v| graph.vertices[v].clone()).collect();
    let code = Code::new(words)?;
    if !graph.is_independent(&set) {
        return Err(Error::VerificationFailure(
            "maximum-code search returned a dependent set".into(),
        ));
    }
    if exact && !graph.is_maximal_independent(&set) {
        return Err(Error::VerificationFailure(
            "maximum-code search returned a non-maximal set".into(),
        ));
    }
    Ok(MaxCode {
        size: set.len(),
        code,
        exact,
    })
}

/// One row of the redundancy table.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub q: u64,
    pub shape: Shape,
    pub t: EditVector,
    pub vertices: u128,
    pub edges: u64,
    pub del_size: usize,
    pub del_exact: bool,
    pub insdel_size: usize,
    pub insdel_exact: bool,
    pub redundancy: Redundancy,
    pub sizes_match: bool,
}

/// Compute maximum code sizes under deletion and insdel confusability for
/// each `(shape, t)` row. The two graphs must coincide edge for edge; a
/// divergence would contradict the insdel equivalence and fails the build
/// rather than being reported quietly.
pub fn redundancy_table(
    q: Alphabet,
    rows: &[(Shape, EditVector)],
    vertex_budget: u128,
    time_limit: Option<Duration>,
    cache: &BallCache,
) -> Result<Vec<TableRow>> {
    let mut out = Vec::with_capacity(rows.len());
    for (shape, t) in rows {
        let del = build_graph(q, shape, t, GraphKind::Deletion, vertex_budget, cache)?;
        let insdel = build_graph(q, shape, t, GraphKind::Insdel, vertex_budget, cache)?;
        if !del.same_edges(&insdel) {
            return Err(Error::VerificationFailure(format!(
                "deletion and insdel confusability graphs differ at shape {shape}, t {t}"
            )));
        }
        let del_best = max_code(&del, time_limit)?;
        let insdel_best = max_code(&insdel, time_limit)?;
        let redundancy = redundancy(shape.volume()?, q, del_best.size as u128)?;
        out.push(TableRow {
            q: q.size(),
            shape: shape.clone(),
            t: t.clone(),
            vertices: del.vertex_count() as u128,
            edges: del.edge_count(),
            del_size: del_best.size,
            del_exact: del_best.exact,
            insdel_size: insdel_best.size,
            insdel_exact: insdel_best.exact,
            redundancy,
            sizes_match: del_best.size == insdel_best.size,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph_from_edges(n: usize, edges: &[(usize, usize)]) -> ConfusabilityGraph {
        let q = Alphabet::new(2).unwrap();
        let shape = Shape::new(vec![n]);
        let words = n.div_ceil(64);
        let mut adj = vec![vec![0u64; words]; n];
        for &(a, b) in edges {
            adj[a][b / 64] |= 1 << (b % 64);
            adj[b][a / 64] |= 1 << (a % 64);
        }
        // vertices are placeholders; only the adjacency matters here
        let vertices: Vec<NdArray> = (0..n)
            .map(|i| {
                let mut data = vec![0u64; n];
                data[i] = 1;
                NdArray::new(q, shape.clone(), data).unwrap()
            })
            .collect();
        ConfusabilityGraph {
            alphabet: q,
            shape,
            t: EditVector::new(vec![0]),
            kind: GraphKind::Deletion,
            vertices,
            adj,
            edges: edges.len() as u64,
        }
    }

    #[test]
    fn edgeless_graph_keeps_every_vertex() {
        let g = graph_from_edges(5, &[]);
        let best = max_code(&g, None).unwrap();
        assert_eq!(best.size, 5);
        assert!(best.exact);
    }

    #[test]
    fn complete_graph_keeps_one_vertex() {
        let edges: Vec<(usize, usize)> = (0..4)
            .flat_map(|a| (a + 1..4).map(move |b| (a, b)))
            .collect();
        let g = graph_from_edges(4, &edges);
        let best = max_code(&g, None).unwrap();
        assert_eq!(best.size, 1);
    }

    #[test]
    fn witness_is_lexicographically_least() {
        // a 5-cycle has MIS size 2; the least witness is {0, 2}
        let g = graph_from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let best = max_code(&g, None).unwrap();
        assert_eq!(best.size, 2);
        let picked: Vec<usize> = (0..5)
            .filter(|&v| best.code.words().contains(&g.vertices()[v]))
            .collect();
        assert_eq!(picked, vec![0, 2]);
    }

    #[test]
    fn branch_and_bound_matches_enumeration_on_random_graphs() {
        // deterministic pseudo-random graphs
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for n in [6usize, 10, 14] {
            for _ in 0..5 {
                let mut edges = Vec::new();
                for a in 0..n {
                    for b in a + 1..n {
                        if next() % 100 < 35 {
                            edges.push((a, b));
                        }
                    }
                }
                let g = graph_from_edges(n, &edges);
                let best = max_code(&g, None).unwrap();
                assert!(best.exact);
                assert_eq!(best.size, max_independent_set_exhaustive(&g).unwrap());
            }
        }
    }

    #[test]
    fn zero_t_graph_is_edgeless() {
        let cache = BallCache::new();
        let q = Alphabet::new(2).unwrap();
        let shape = Shape::new(vec![2, 2]);
        let g = build_graph(
            q,
            &shape,
            &EditVector::zero(2),
            GraphKind::Deletion,
            DEFAULT_VERTEX_BUDGET,
            &cache,
        )
        .unwrap();
        assert_eq!(g.edge_count(), 0);
        let best = max_code(&g, None).unwrap();
        assert_eq!(best.size, 16);
    }
}
