//! Constructive witnesses: given a common deletion descendant of two arrays,
//! build a common insertion ancestor. The constructions mirror the
//! equivalence arguments step by step — a unit-vector swap solved by
//! projection down to two dimensions, a (d+1)x(d+1) grid for simultaneous
//! one-per-axis edits, chain decompositions for uniform counts, and the
//! chain-of-swaps machinery for a uniform count plus one extra deletion.
//!
//! Constructors never self-certify: every returned array is re-validated by
//! independent ball-membership checks, and a failed re-validation is a
//! verification failure, never a silent fallback.

use crate::balls::{common_insertion_witness, deletion_yields, insertion_yields, BallCache, BallKind};
use crate::error::{Error, Result};
use crate::tensor::{EditVector, NdArray, Universe};

fn unit(axis: usize, d: usize) -> EditVector {
    EditVector::unit(axis, d).expect("axis checked by caller")
}

/// Given `shared` obtainable from `x` by one `x_i`-deletion and from `y` by
/// one `x_j`-deletion, return an array obtainable from `x` by one
/// `x_j`-insertion and from `y` by one `x_i`-insertion.
///
/// For `d >= 3` with `i != j` the problem is projected along an axis outside
/// `{i, j}` and solved recursively; the remaining base cases (`d = 2`, or
/// `i = j`) are solved by exhaustive intersection of the two single-insertion
/// balls. An empty intersection in a base case would falsify the underlying
/// equivalence and is escalated as a verification failure.
pub fn witness_swap(
    x: &NdArray,
    y: &NdArray,
    i: usize,
    j: usize,
    shared: &NdArray,
    cache: &BallCache,
) -> Result<NdArray> {
    let d = x.dim();
    x.shape().check_axis(i)?;
    x.shape().check_axis(j)?;
    if y.dim() != d {
        return Err(Error::ShapeMismatch(format!(
            "arrays of dimension {} and {}",
            d,
            y.dim()
        )));
    }
    let ei = unit(i, d);
    let ej = unit(j, d);
    if shared.shape().grown(&ei)? != *x.shape() || shared.shape().grown(&ej)? != *y.shape() {
        return Err(Error::Precondition(format!(
            "shapes {} / {} are not the shared shape {} grown by e_{i} / e_{j}",
            x.shape(),
            y.shape(),
            shared.shape()
        )));
    }
    if !deletion_yields(x, &ei, shared)? || !deletion_yields(y, &ej, shared)? {
        return Err(Error::Precondition(
            "shared array is not a common deletion descendant".into(),
        ));
    }
    let witness = swap_search(x, y, i, j, shared, cache)?;
    if !insertion_yields(x, &ej, &witness)? || !insertion_yields(y, &ei, &witness)? {
        return Err(Error::VerificationFailure(
            "swap witness failed ball-membership re-validation".into(),
        ));
    }
    Ok(witness)
}

fn swap_search(
    x: &NdArray,
    y: &NdArray,
    i: usize,
    j: usize,
    shared: &NdArray,
    cache: &BallCache,
) -> Result<NdArray> {
    let d = x.dim();
    if d >= 3 && i != j {
        let kappa = (1..=d)
            .rev()
            .find(|&a| a != i && a != j && x.shape().dims()[a - 1] >= 1);
        if let Some(kappa) = kappa {
            let extent = x.shape().extent(kappa)?;
            let xp = x.project(kappa)?;
            let yp = y.project(kappa)?;
            let sp = shared.project(kappa)?;
            let ip = if i > kappa { i - 1 } else { i };
            let jp = if j > kappa { j - 1 } else { j };
            let wp = swap_search(&xp, &yp, ip, jp, &sp, cache)?;
            let w = wp.inverse_project(kappa, x.alphabet(), extent)?;
            let ei = unit(i, d);
            let ej = unit(j, d);
            if !insertion_yields(x, &ej, &w)? || !insertion_yields(y, &ei, &w)? {
                return Err(Error::VerificationFailure(format!(
                    "projection along axis {kappa} produced an invalid swap witness"
                )));
            }
            return Ok(w);
        }
    }
    let ei = unit(i, d);
    let ej = unit(j, d);
    let bx = cache.ball(BallKind::Insertion, x, &ej)?;
    let by = cache.ball(BallKind::Insertion, y, &ei)?;
    match bx.intersection_witness(&by) {
        Some(w) => Ok(w.clone()),
        None => Err(Error::VerificationFailure(format!(
            "no common insertion ancestor for a confusable pair (i={i}, j={j}, d={d})"
        ))),
    }
}

/// Brute-force route for the swap: intersect the two single-insertion balls
/// directly in d dimensions. Exists so the projection recursion has an
/// independent route to agree with.
pub fn witness_swap_exhaustive(
    x: &NdArray,
    y: &NdArray,
    i: usize,
    j: usize,
    cache: &BallCache,
) -> Result<Option<NdArray>> {
    let d = x.dim();
    let bx = cache.ball(BallKind::Insertion, x, &unit(j, d))?;
    let by = cache.ball(BallKind::Insertion, y, &unit(i, d))?;
    Ok(bx.intersection_witness(&by).cloned())
}

/// The grid of intermediate arrays certifying that two arrays with a common
/// one-per-axis deletion descendant have a common one-per-axis insertion
/// ancestor. `cell(i, j)` holds the array `X^{i,j}`; `cell(d, 0)` and
/// `cell(0, d)` are the inputs, `cell(0, 0)` the shared descendant and
/// `cell(d, d)` the produced ancestor.
#[derive(Debug, Clone)]
pub struct WitnessGrid {
    deletion_order: Vec<usize>,
    cells: Vec<Vec<NdArray>>,
}

impl WitnessGrid {
    pub fn dim(&self) -> usize {
        self.cells.len() - 1
    }

    /// Axis deleted first, second, ... along both border chains.
    pub fn deletion_order(&self) -> &[usize] {
        &self.deletion_order
    }

    pub fn cell(&self, i: usize, j: usize) -> &NdArray {
        &self.cells[i][j]
    }

    /// Axis label of the edges between rows (or columns) `k-1` and `k`.
    fn edge_axis(&self, k: usize) -> usize {
        self.deletion_order[self.dim() - k]
    }

    /// Check every adjacency of the grid by ball membership: each cell is a
    /// single-hyperplane deletion of its upper and right neighbors, with the
    /// axis labels dictated by the deletion order.
    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..=d {
                let axis = self.edge_axis(i + 1);
                if !deletion_yields(&self.cells[i + 1][j], &unit(axis, d), &self.cells[i][j])? {
                    return Err(Error::VerificationFailure(format!(
                        "grid cell ({i},{j}) is not an x_{axis}-deletion of cell ({},{j})",
                        i + 1
                    )));
                }
            }
        }
        for j in 0..d {
            for i in 0..=d {
                let axis = self.edge_axis(j + 1);
                if !deletion_yields(&self.cells[i][j + 1], &unit(axis, d), &self.cells[i][j])? {
                    return Err(Error::VerificationFailure(format!(
                        "grid cell ({i},{j}) is not an x_{axis}-deletion of cell ({i},{})",
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A deletion path `top -> ... -> bottom` whose k-th step deletes along
/// `axes[k]`; found by position search. Pure deletions commute across
/// orders, so a path exists for every axis order whenever `bottom` is
/// reachable at all.
fn deletion_path(top: &NdArray, bottom: &NdArray, axes: &[usize]) -> Result<Option<Vec<NdArray>>> {
    fn rec(current: NdArray, bottom: &NdArray, axes: &[usize], acc: &mut Vec<NdArray>) -> Result<bool> {
        if axes.is_empty() {
            return Ok(&current == bottom);
        }
        let axis = axes[0];
        for pos in 1..=current.shape().extent(axis)? {
            let child = current.delete_hyperplane(axis, pos)?;
            acc.push(child.clone());
            if rec(child, bottom, &axes[1..], acc)? {
                return Ok(true);
            }
            acc.pop();
        }
        Ok(false)
    }
    let mut acc = vec![top.clone()];
    if rec(top.clone(), bottom, axes, &mut acc)? {
        Ok(Some(acc))
    } else {
        Ok(None)
    }
}

/// Build the full grid for two arrays with a shared one-per-axis deletion
/// descendant, deleting axis `d` first, then `d-1`, down to axis 1.
pub fn grid_witness_ones(
    x: &NdArray,
    y: &NdArray,
    shared: &NdArray,
    cache: &BallCache,
) -> Result<(NdArray, WitnessGrid)> {
    let order: Vec<usize> = (1..=x.dim()).rev().collect();
    grid_witness_ones_with_order(x, y, shared, &order, cache)
}

/// Same construction under any fixed deletion order; the equivalence proof
/// remarks that the order is immaterial, and this entry point lets tests
/// check that empirically.
pub fn grid_witness_ones_with_order(
    x: &NdArray,
    y: &NdArray,
    shared: &NdArray,
    deletion_order: &[usize],
    cache: &BallCache,
) -> Result<(NdArray, WitnessGrid)> {
    let d = x.dim();
    let ones = EditVector::uniform(1, d);
    let mut seen = vec![false; d];
    if deletion_order.len() != d || !deletion_order.iter().all(|&a| {
        if a == 0 || a > d || seen[a - 1] {
            false
        } else {
            seen[a - 1] = true;
            true
        }
    }) {
        return Err(Error::InvalidParameter(format!(
            "deletion order {deletion_order:?} is not a permutation of 1..={d}"
        )));
    }
    if shared.shape().grown(&ones)? != *x.shape() || x.shape() != y.shape() {
        return Err(Error::Precondition(format!(
            "expected both arrays of shape {} and shared of shape {}",
            x.shape(),
            shared.shape()
        )));
    }
    if !deletion_yields(x, &ones, shared)? || !deletion_yields(y, &ones, shared)? {
        return Err(Error::Precondition(
            "shared array is not a common one-per-axis deletion descendant".into(),
        ));
    }

    let x_chain = deletion_path(x, shared, deletion_order)?.ok_or_else(|| {
        Error::VerificationFailure("no deletion path realizes the shared array from x".into())
    })?;
    let y_chain = deletion_path(y, shared, deletion_order)?.ok_or_else(|| {
        Error::VerificationFailure("no deletion path realizes the shared array from y".into())
    })?;

    // cells[i][j] with the borders taken from the two chains: the chain entry
    // at distance k from the top sits at grid index d - k.
    let placeholder = shared.clone();
    let mut cells: Vec<Vec<NdArray>> = vec![vec![placeholder; d + 1]; d + 1];
    for (k, a) in x_chain.iter().enumerate() {
        cells[d - k][0] = a.clone();
    }
    for (k, a) in y_chain.iter().enumerate() {
        cells[0][d - k] = a.clone();
    }
    let edge_axis = |k: usize| deletion_order[d - k];
    for j in 0..d {
        for i in 0..d {
            let w = witness_swap(
                &cells[i + 1][j],
                &cells[i][j + 1],
                edge_axis(i + 1),
                edge_axis(j + 1),
                &cells[i][j],
                cache,
            )?;
            cells[i + 1][j + 1] = w;
        }
    }
    let grid = WitnessGrid {
        deletion_order: deletion_order.to_vec(),
        cells,
    };
    grid.validate()?;
    let result = grid.cell(d, d).clone();
    if !insertion_yields(x, &ones, &result)? || !insertion_yields(y, &ones, &result)? {
        return Err(Error::VerificationFailure(
            "grid corner failed insertion-ball re-validation".into(),
        ));
    }
    Ok((result, grid))
}

/// How consecutive arrays of a [`WitnessChain`] are related.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainRelation {
    /// Consecutive arrays have intersecting one-per-axis deletion balls.
    SharedDeletionChild,
    /// Consecutive arrays have intersecting one-per-axis insertion balls.
    SharedInsertionParent,
    /// Step k deletes one hyperplane along `axes[k]`.
    DeletionSteps(Vec<usize>),
    /// Step k inserts one hyperplane along `axes[k]`.
    InsertionSteps(Vec<usize>),
}

/// A sequence of arrays with one declared relation between consecutive
/// entries, machine-checkable through the balls module.
#[derive(Debug, Clone)]
pub struct WitnessChain {
    relation: ChainRelation,
    nodes: Vec<NdArray>,
}

impl WitnessChain {
    pub fn new(relation: ChainRelation, nodes: Vec<NdArray>) -> Self {
        WitnessChain { relation, nodes }
    }

    pub fn relation(&self) -> &ChainRelation {
        &self.relation
    }

    pub fn nodes(&self) -> &[NdArray] {
        &self.nodes
    }

    /// The arrays strictly between the two endpoints.
    pub fn intermediates(&self) -> &[NdArray] {
        &self.nodes[1..self.nodes.len() - 1]
    }

    /// Re-check every consecutive relation independently of however the
    /// chain was produced.
    pub fn validate(&self, cache: &BallCache) -> Result<()> {
        match &self.relation {
            ChainRelation::SharedDeletionChild => {
                for (k, w) in self.nodes.windows(2).enumerate() {
                    let d = w[0].dim();
                    let ones = EditVector::uniform(1, d);
                    let a = cache.ball(BallKind::Deletion, &w[0], &ones)?;
                    let b = cache.ball(BallKind::Deletion, &w[1], &ones)?;
                    if a.intersection_witness(&b).is_none() {
                        return Err(Error::VerificationFailure(format!(
                            "chain link {k} has no shared deletion child"
                        )));
                    }
                }
            }
            ChainRelation::SharedInsertionParent => {
                for (k, w) in self.nodes.windows(2).enumerate() {
                    let d = w[0].dim();
                    let ones = EditVector::uniform(1, d);
                    if common_insertion_witness(&w[0], &ones, &w[1], &ones)?.is_none() {
                        return Err(Error::VerificationFailure(format!(
                            "chain link {k} has no shared insertion parent"
                        )));
                    }
                }
            }
            ChainRelation::DeletionSteps(axes) => {
                if axes.len() + 1 != self.nodes.len() {
                    return Err(Error::VerificationFailure("chain length mismatch".into()));
                }
                for (k, w) in self.nodes.windows(2).enumerate() {
                    let e = unit(axes[k], w[0].dim());
                    if !deletion_yields(&w[0], &e, &w[1])? {
                        return Err(Error::VerificationFailure(format!(
                            "chain step {k} is not an x_{}-deletion",
                            axes[k]
                        )));
                    }
                }
            }
            ChainRelation::InsertionSteps(axes) => {
                if axes.len() + 1 != self.nodes.len() {
                    return Err(Error::VerificationFailure("chain length mismatch".into()));
                }
                for (k, w) in self.nodes.windows(2).enumerate() {
                    let e = unit(axes[k], w[0].dim());
                    if !insertion_yields(&w[0], &e, &w[1])? {
                        return Err(Error::VerificationFailure(format!(
                            "chain step {k} is not an x_{}-insertion",
                            axes[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

const FALLBACK_SEARCH_CAP: u128 = 1 << 22;

/// Decompose a confusable pair under uniform per-axis count `t` into a chain
/// of arrays whose consecutive one-per-axis deletion balls intersect. The
/// endpoints are included; the `t - 1` produced arrays sit between them.
///
/// The chain is found by peeling one round of deletions off both endpoints
/// and recursing, exactly as in the inductive argument; if the peel fails an
/// exhaustive search over candidate intermediates runs before the failure is
/// escalated.
pub fn chain_decompose_del(
    x1: &NdArray,
    xlast: &NdArray,
    t: usize,
    cache: &BallCache,
) -> Result<WitnessChain> {
    let d = x1.dim();
    if t == 0 {
        return Err(Error::InvalidParameter("chain decomposition needs t >= 1".into()));
    }
    if x1.shape() != xlast.shape() || x1.alphabet() != xlast.alphabet() {
        return Err(Error::Precondition("chain endpoints must share shape and alphabet".into()));
    }
    let tvec = EditVector::uniform(t, d);
    let b1 = cache.ball(BallKind::Deletion, x1, &tvec)?;
    let bl = cache.ball(BallKind::Deletion, xlast, &tvec)?;
    let shared = b1
        .intersection_witness(&bl)
        .ok_or_else(|| Error::Precondition("endpoints are not t1-confusable".into()))?
        .clone();

    let chain = match chain_del_peel(x1, xlast, t, &shared, cache) {
        Ok(chain) => chain,
        Err(_) => chain_del_fallback(x1, xlast, t, cache)?,
    };
    chain.validate(cache)?;
    Ok(chain)
}

fn chain_del_peel(
    x1: &NdArray,
    xlast: &NdArray,
    t: usize,
    shared: &NdArray,
    cache: &BallCache,
) -> Result<WitnessChain> {
    let d = x1.dim();
    let ones = EditVector::uniform(1, d);
    if t == 1 {
        return Ok(WitnessChain::new(
            ChainRelation::SharedDeletionChild,
            vec![x1.clone(), xlast.clone()],
        ));
    }
    let shrink = EditVector::uniform(t - 1, d);
    let pick = |end: &NdArray| -> Result<NdArray> {
        let ball = cache.ball(BallKind::Deletion, end, &ones)?;
        for z in ball.members() {
            if deletion_yields(z, &shrink, shared)? {
                return Ok(z.clone());
            }
        }
        Err(Error::VerificationFailure(
            "no one-per-axis deletion of an endpoint stays above the shared array".into(),
        ))
    };
    let xbar_first = pick(x1)?;
    let xbar_last = pick(xlast)?;
    let sub = {
        let b1 = cache.ball(BallKind::Deletion, &xbar_first, &shrink)?;
        let bl = cache.ball(BallKind::Deletion, &xbar_last, &shrink)?;
        let sub_shared = b1.intersection_witness(&bl).ok_or_else(|| {
            Error::VerificationFailure("peeled endpoints lost their shared descendant".into())
        })?;
        debug_assert!(deletion_yields(&xbar_first, &shrink, shared).unwrap_or(false));
        let sub_shared = sub_shared.clone();
        chain_del_peel(&xbar_first, &xbar_last, t - 1, &sub_shared, cache)?
    };
    let mut nodes = vec![x1.clone()];
    for w in sub.nodes().windows(2) {
        let a = cache.ball(BallKind::Deletion, &w[0], &ones)?;
        let b = cache.ball(BallKind::Deletion, &w[1], &ones)?;
        let link_child = a
            .intersection_witness(&b)
            .ok_or_else(|| Error::VerificationFailure("sub-chain link lost its child".into()))?
            .clone();
        let (lifted, _) = grid_witness_ones(&w[0], &w[1], &link_child, cache)?;
        nodes.push(lifted);
    }
    nodes.push(xlast.clone());
    Ok(WitnessChain::new(ChainRelation::SharedDeletionChild, nodes))
}

fn chain_del_fallback(
    x1: &NdArray,
    xlast: &NdArray,
    t: usize,
    cache: &BallCache,
) -> Result<WitnessChain> {
    let d = x1.dim();
    let ones = EditVector::uniform(1, d);
    if t == 1 {
        return Ok(WitnessChain::new(
            ChainRelation::SharedDeletionChild,
            vec![x1.clone(), xlast.clone()],
        ));
    }
    let universe = Universe::new(x1.alphabet(), x1.shape().clone());
    let count = universe.count()?;
    if count > FALLBACK_SEARCH_CAP {
        return Err(Error::VerificationFailure(format!(
            "chain fallback search space of {count} arrays exceeds {FALLBACK_SEARCH_CAP}"
        )));
    }
    let shrink = EditVector::uniform(t - 1, d);
    let b1 = cache.ball(BallKind::Deletion, x1, &ones)?;
    for z in universe.iter() {
        let bz1 = cache.ball(BallKind::Deletion, &z, &ones)?;
        if b1.intersection_witness(&bz1).is_none() {
            continue;
        }
        let bz = cache.ball(BallKind::Deletion, &z, &shrink)?;
        let bl = cache.ball(BallKind::Deletion, xlast, &shrink)?;
        if bz.intersection_witness(&bl).is_none() {
            continue;
        }
        let rest = chain_del_fallback(&z, xlast, t - 1, cache)?;
        let mut nodes = vec![x1.clone()];
        nodes.extend(rest.nodes().iter().cloned());
        return Ok(WitnessChain::new(ChainRelation::SharedDeletionChild, nodes));
    }
    Err(Error::VerificationFailure(
        "exhaustive search found no chain of intermediates".into(),
    ))
}

/// Insertion analogue of [`chain_decompose_del`]: the endpoints must have
/// intersecting uniform-t insertion balls, and the produced intermediates
/// link consecutively through shared one-per-axis insertion parents.
pub fn chain_decompose_ins(
    x1: &NdArray,
    xlast: &NdArray,
    t: usize,
    cache: &BallCache,
) -> Result<WitnessChain> {
    let d = x1.dim();
    if t == 0 {
        return Err(Error::InvalidParameter("chain decomposition needs t >= 1".into()));
    }
    if x1.shape() != xlast.shape() || x1.alphabet() != xlast.alphabet() {
        return Err(Error::Precondition("chain endpoints must share shape and alphabet".into()));
    }
    let tvec = EditVector::uniform(t, d);
    let shared = common_insertion_witness(x1, &tvec, xlast, &tvec)?
        .ok_or_else(|| Error::Precondition("endpoints are not t1-insertion-confusable".into()))?;
    let chain = match chain_ins_peel(x1, xlast, t, &shared, cache) {
        Ok(chain) => chain,
        Err(_) => chain_ins_fallback(x1, xlast, t, cache)?,
    };
    chain.validate(cache)?;
    Ok(chain)
}

fn chain_ins_peel(
    x1: &NdArray,
    xlast: &NdArray,
    t: usize,
    shared: &NdArray,
    cache: &BallCache,
) -> Result<WitnessChain> {
    let d = x1.dim();
    let ones = EditVector::uniform(1, d);
    if t == 1 {
        return Ok(WitnessChain::new(
            ChainRelation::SharedInsertionParent,
            vec![x1.clone(), xlast.clone()],
        ));
    }
    let shrink = EditVector::uniform(t - 1, d);
    let candidates = cache.ball(BallKind::Deletion, shared, &shrink)?;
    let pick = |end: &NdArray| -> Result<NdArray> {
        for z in candidates.members() {
            if insertion_yields(end, &ones, z)? {
                return Ok(z.clone());
            }
        }
        Err(Error::VerificationFailure(
            "no one-per-axis insertion of an endpoint stays below the shared parent".into(),
        ))
    };
    let xbar_first = pick(x1)?;
    let xbar_last = pick(xlast)?;
    let sub = chain_ins_peel(&xbar_first, &xbar_last, t - 1, shared, cache)?;
    let mut nodes = vec![x1.clone()];
    for w in sub.nodes().windows(2) {
        // the reverse direction: a shared insertion parent forces a shared
        // deletion child, found here by direct intersection of the balls
        let a = cache.ball(BallKind::Deletion, &w[0], &ones)?;
        let b = cache.ball(BallKind::Deletion, &w[1], &ones)?;
        let child = a
            .intersection_witness(&b)
            .ok_or_else(|| {
                Error::VerificationFailure(
                    "insertion-linked pair has no shared deletion child".into(),
                )
            })?
            .clone();
        nodes.push(child);
    }
    nodes.push(xlast.clone());
    Ok(WitnessChain::new(ChainRelation::SharedInsertionParent, nodes))
}

fn chain_ins_fallback(
    x1: &NdArray,
    xlast: &NdArray,
    t: usize,
    cache: &BallCache,
) -> Result<WitnessChain> {
    let d = x1.dim();
    let ones = EditVector::uniform(1, d);
    if t == 1 {
        return Ok(WitnessChain::new(
            ChainRelation::SharedInsertionParent,
            vec![x1.clone(), xlast.clone()],
        ));
    }
    let universe = Universe::new(x1.alphabet(), x1.shape().clone());
    let count = universe.count()?;
    if count > FALLBACK_SEARCH_CAP {
        return Err(Error::VerificationFailure(format!(
            "chain fallback search space of {count} arrays exceeds {FALLBACK_SEARCH_CAP}"
        )));
    }
    let shrink = EditVector::uniform(t - 1, d);
    for z in universe.iter() {
        if common_insertion_witness(x1, &ones, &z, &ones)?.is_none() {
            continue;
        }
        if common_insertion_witness(&z, &shrink, xlast, &shrink)?.is_none() {
            continue;
        }
        let rest = chain_ins_fallback(&z, xlast, t - 1, cache)?;
        let mut nodes = vec![x1.clone()];
        nodes.extend(rest.nodes().iter().cloned());
        return Ok(WitnessChain::new(ChainRelation::SharedInsertionParent, nodes));
    }
    Err(Error::VerificationFailure(
        "exhaustive search found no insertion chain of intermediates".into(),
    ))
}

/// Produce a common uniform-t insertion ancestor of a t1-confusable pair by
/// composing the chain decomposition with per-link grid lifts: decompose
/// into one-per-axis links, lift every link to a shared insertion parent,
/// and repeat one level up until a single array remains.
pub fn uniform_insertion_witness(
    x: &NdArray,
    y: &NdArray,
    t: usize,
    cache: &BallCache,
) -> Result<NdArray> {
    let d = x.dim();
    if t == 0 {
        if x == y {
            return Ok(x.clone());
        }
        return Err(Error::Precondition("t = 0 needs equal arrays".into()));
    }
    let chain = chain_decompose_del(x, y, t, cache)?;
    let mut level: Vec<NdArray> = chain.nodes().to_vec();
    while level.len() > 1 {
        let mut lifted = Vec::with_capacity(level.len() - 1);
        for w in level.windows(2) {
            let dd = w[0].dim();
            let ones = EditVector::uniform(1, dd);
            let a = cache.ball(BallKind::Deletion, &w[0], &ones)?;
            let b = cache.ball(BallKind::Deletion, &w[1], &ones)?;
            let child = a
                .intersection_witness(&b)
                .ok_or_else(|| Error::VerificationFailure("chain level lost a link".into()))?
                .clone();
            let (parent, _) = grid_witness_ones(&w[0], &w[1], &child, cache)?;
            lifted.push(parent);
        }
        level = lifted;
    }
    let witness = level.pop().expect("non-empty level");
    let tvec = EditVector::uniform(t, d);
    if !insertion_yields(x, &tvec, &witness)? || !insertion_yields(y, &tvec, &witness)? {
        return Err(Error::VerificationFailure(
            "composed chain witness failed insertion-ball re-validation".into(),
        ));
    }
    Ok(witness)
}

/// The chains produced while building a common insertion ancestor for a
/// uniform count plus one extra deletion on a single axis.
#[derive(Debug, Clone)]
pub struct AugmentedWitness {
    pub result: NdArray,
    pub down_from_x: WitnessChain,
    pub down_from_y: WitnessChain,
    pub up_from_base: WitnessChain,
    pub up_from_y: WitnessChain,
}

/// Constructive route for the edit vector `t*1 + e_kappa`: given `shared`
/// in both `(t1 + e_kappa)`-deletion balls, produce a common
/// `(t1 + e_kappa)`-insertion ancestor by chaining unit swaps along a fixed
/// deletion order, lifting the uniform part through the chain pipeline, and
/// chaining swaps back up.
pub fn augmented_uniform_insertion_witness(
    x: &NdArray,
    y: &NdArray,
    t: usize,
    kappa: usize,
    shared: &NdArray,
    cache: &BallCache,
) -> Result<AugmentedWitness> {
    let d = x.dim();
    x.shape().check_axis(kappa)?;
    if x.shape() != y.shape() || x.alphabet() != y.alphabet() {
        return Err(Error::Precondition("arrays must share shape and alphabet".into()));
    }
    let ek = unit(kappa, d);
    let tvec = EditVector::uniform(t, d).plus(&ek);
    if !deletion_yields(x, &tvec, shared)? || !deletion_yields(y, &tvec, shared)? {
        return Err(Error::Precondition(
            "shared array is not a common descendant under t1 + e_kappa".into(),
        ));
    }

    // axis sequence for the uniform part, ending on kappa
    let mut order: Vec<usize> = Vec::with_capacity(d * t);
    for a in (1..=d).rev() {
        if a != kappa {
            for _ in 0..t {
                order.push(a);
            }
        }
    }
    for _ in 0..t {
        order.push(kappa);
    }

    // path from y: one extra kappa-deletion, then the uniform deletions
    let mut y_axes = vec![kappa];
    y_axes.extend_from_slice(&order);
    let c_chain = deletion_path(y, shared, &y_axes)?
        .ok_or_else(|| Error::VerificationFailure("no deletion path from y to the shared array".into()))?;

    // path from x: uniform deletions first, the extra kappa-deletion last
    let mut x_axes = order.clone();
    x_axes.push(kappa);
    let x_path = deletion_path(x, shared, &x_axes)?
        .ok_or_else(|| Error::VerificationFailure("no deletion path from x to the shared array".into()))?;
    let uniform_stop = x_path[x_path.len() - 2].clone();

    // climb from the shared array back to full shape through unit swaps
    let k = d * t;
    let mut b = uniform_stop.clone();
    for s in (1..=k).rev() {
        // c_chain[s + 1] = shared descendant of b and c_chain[s]
        let swapped = witness_swap(&b, &c_chain[s], kappa, order[s - 1], &c_chain[s + 1], cache)?;
        b = swapped;
    }
    let base = b;

    let up_core = if t == 0 {
        base.clone()
    } else {
        uniform_insertion_witness(x, &base, t, cache)?
    };

    // insertion order from base to the lifted array, ending on kappa
    let mut down_axes = order.clone();
    down_axes.reverse();
    let f_path_down = deletion_path(&up_core, &base, &down_axes)?.ok_or_else(|| {
        Error::VerificationFailure("no deletion path from the lifted array to the base".into())
    })?;
    let f_chain: Vec<NdArray> = f_path_down.into_iter().rev().collect();

    let mut g = witness_swap(&base, y, kappa, kappa, &c_chain[1], cache)?;
    let mut g_nodes = vec![y.clone(), g.clone()];
    for s in 1..=k {
        g = witness_swap(&f_chain[s], &g, order[s - 1], kappa, &f_chain[s - 1], cache)?;
        g_nodes.push(g.clone());
    }

    if !insertion_yields(x, &tvec, &g)? || !insertion_yields(y, &tvec, &g)? {
        return Err(Error::VerificationFailure(
            "augmented witness failed insertion-ball re-validation".into(),
        ));
    }

    Ok(AugmentedWitness {
        result: g.clone(),
        down_from_x: WitnessChain::new(ChainRelation::DeletionSteps(x_axes), x_path),
        down_from_y: WitnessChain::new(ChainRelation::DeletionSteps(y_axes), c_chain),
        up_from_base: WitnessChain::new(ChainRelation::InsertionSteps(order.clone()), f_chain),
        up_from_y: WitnessChain::new(
            ChainRelation::InsertionSteps({
                let mut axes = vec![kappa];
                axes.extend(order.iter().copied());
                axes
            }),
            g_nodes,
        ),
    })
}
