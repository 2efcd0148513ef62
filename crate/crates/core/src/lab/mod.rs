//! Witness constructions and exhaustive verifiers for the insertion/deletion
//! equivalence statements, including the fixed two-dimensional pair showing
//! that correcting column deletions and correcting row deletions are
//! genuinely different properties.

pub mod verify;
pub mod witness;

pub use verify::{
    verify_chain_del, verify_chain_ins, verify_general_equivalence, verify_insdel_axis,
    verify_insdel_equivalence, verify_projection_claim, verify_scalar_equivalence,
    verify_swap_lemma, verify_uniform_equivalence, CounterInstance, EditCase, VerifyConfig,
    VerifyOutcome, DEFAULT_BUDGET,
};
pub use witness::{
    augmented_uniform_insertion_witness, chain_decompose_del, chain_decompose_ins,
    grid_witness_ones, grid_witness_ones_with_order, uniform_insertion_witness, witness_swap,
    witness_swap_exhaustive, AugmentedWitness, ChainRelation, WitnessChain, WitnessGrid,
};

use crate::balls::{BallCache, BallKind};
use crate::error::{Error, Result};
use crate::tensor::{Alphabet, EditVector, NdArray, Shape};

/// Split an edit vector into its uniform part and the leftover counts:
/// `t = t_min * 1 + residual` with `residual` zero on the reported axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditDecomposition {
    /// Least axis attaining the minimum count.
    pub axis: usize,
    /// The minimum count over the axes.
    pub uniform: usize,
    /// `t - uniform * 1`; zero at `axis`.
    pub residual: EditVector,
    /// `d * uniform`, the number of single edits in the uniform part.
    pub uniform_steps: usize,
    /// Sum of the residual counts.
    pub residual_total: usize,
}

pub fn decompose_edit_vector(t: &EditVector) -> EditDecomposition {
    let d = t.dim();
    let uniform = t.counts().iter().copied().min().unwrap_or(0);
    let axis = t
        .counts()
        .iter()
        .position(|&c| c == uniform)
        .map(|p| p + 1)
        .unwrap_or(1);
    let residual = t.minus(&EditVector::uniform(uniform, d));
    let residual_total = residual.sum();
    EditDecomposition {
        axis,
        uniform,
        residual,
        uniform_steps: d * uniform,
        residual_total,
    }
}

fn two_dim(q: u64, cols: &[[u64; 3]]) -> NdArray {
    let data: Vec<u64> = cols.iter().flatten().copied().collect();
    NdArray::new(
        Alphabet::new(q).expect("alphabet"),
        Shape::new(vec![cols.len(), 3]),
        data,
    )
    .expect("fixed array")
}

/// The fixed 3x3 pair and their common column-deletion descendant: deleting
/// the second column of either array gives the same 2x3 array, while no row
/// deletion can confuse them. Axis 1 indexes columns, axis 2 rows.
pub fn counterexample_arrays() -> (NdArray, NdArray, NdArray) {
    let x = two_dim(2, &[[1, 0, 0], [1, 1, 1], [1, 0, 1]]);
    let y = two_dim(2, &[[1, 0, 0], [0, 1, 0], [1, 0, 1]]);
    let d = two_dim(2, &[[1, 0, 0], [1, 0, 1]]);
    (x, y, d)
}

#[derive(Debug, Clone)]
pub struct CounterexampleReport {
    pub x: NdArray,
    pub y: NdArray,
    pub shared: NdArray,
    pub notes: Vec<String>,
}

/// Re-derive every property of the fixed pair and fail loudly on any
/// mismatch: the shared array arises from both by deleting the second
/// column, it lies in both (1,0)-deletion balls, and the (0,1)-deletion
/// balls are disjoint.
pub fn counterexample_reproduce(cache: &BallCache) -> Result<CounterexampleReport> {
    let (x, y, shared) = counterexample_arrays();
    let mut notes = Vec::new();

    let from_x = x.delete_hyperplane(1, 2)?;
    let from_y = y.delete_hyperplane(1, 2)?;
    if from_x != shared || from_y != shared {
        return Err(Error::VerificationFailure(
            "deleting the second column does not give the expected array".into(),
        ));
    }
    notes.push("second-column deletions of both arrays coincide".into());

    let col = EditVector::new(vec![1, 0]);
    let bx = cache.ball(BallKind::Deletion, &x, &col)?;
    let by = cache.ball(BallKind::Deletion, &y, &col)?;
    if !bx.contains(&shared) || !by.contains(&shared) {
        return Err(Error::VerificationFailure(
            "shared array missing from a (1,0)-deletion ball".into(),
        ));
    }
    match bx.intersection_witness(&by) {
        Some(w) if w == &shared => notes.push("(1,0)-deletion balls intersect exactly in the shared array".into()),
        Some(_) => notes.push("(1,0)-deletion balls intersect".into()),
        None => {
            return Err(Error::VerificationFailure(
                "(1,0)-deletion balls unexpectedly disjoint".into(),
            ))
        }
    }

    let row = EditVector::new(vec![0, 1]);
    let rx = cache.ball(BallKind::Deletion, &x, &row)?;
    let ry = cache.ball(BallKind::Deletion, &y, &row)?;
    if rx.intersection_witness(&ry).is_some() {
        return Err(Error::VerificationFailure(
            "(0,1)-deletion balls unexpectedly intersect".into(),
        ));
    }
    notes.push("(0,1)-deletion balls are disjoint".into());

    Ok(CounterexampleReport {
        x,
        y,
        shared,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompose_reports_min_axis_and_residual() {
        let d = decompose_edit_vector(&EditVector::new(vec![2, 3, 2]));
        assert_eq!(d.axis, 1);
        assert_eq!(d.uniform, 2);
        assert_eq!(d.residual, EditVector::new(vec![0, 1, 0]));
        assert_eq!(d.uniform_steps, 6);
        assert_eq!(d.residual_total, 1);
    }

    #[test]
    fn decompose_uniform_vector_has_zero_residual() {
        let d = decompose_edit_vector(&EditVector::uniform(3, 2));
        assert_eq!(d.uniform, 3);
        assert!(d.residual.is_zero());
    }

    #[test]
    fn decompose_with_zero_min() {
        let d = decompose_edit_vector(&EditVector::new(vec![0, 5]));
        assert_eq!(d.axis, 1);
        assert_eq!(d.uniform, 0);
        assert_eq!(d.residual, EditVector::new(vec![0, 5]));
        assert_eq!(d.uniform_steps, 0);
        assert_eq!(d.residual_total, 5);
    }

    #[test]
    fn counterexample_reproduces() {
        let cache = BallCache::new();
        let report = counterexample_reproduce(&cache).unwrap();
        assert_eq!(report.notes.len(), 3);
    }
}
