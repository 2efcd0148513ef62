//! Codes over one shape and alphabet, and the correcting-code predicates:
//! a code corrects a class of edits exactly when the corresponding error
//! balls of distinct codewords are pairwise disjoint.

use rayon::prelude::*;

use crate::balls::{BallCache, BallKind};
use crate::error::{Error, Result};
use crate::tensor::{Alphabet, EditVector, NdArray, Shape};

/// A finite set of distinct arrays of one common shape and alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    alphabet: Alphabet,
    shape: Shape,
    words: Vec<NdArray>,
}

impl Code {
    pub fn new(words: Vec<NdArray>) -> Result<Self> {
        let Some(first) = words.first() else {
            return Err(Error::EmptyCode);
        };
        let alphabet = first.alphabet();
        let shape = first.shape().clone();
        for w in &words {
            if w.alphabet() != alphabet {
                return Err(Error::AlphabetMismatch(alphabet.size(), w.alphabet().size()));
            }
            if w.shape() != &shape {
                return Err(Error::ShapeMismatch(format!(
                    "codeword shape {} differs from {shape}",
                    w.shape()
                )));
            }
        }
        let mut words = words;
        words.sort();
        words.dedup();
        Ok(Code {
            alphabet,
            shape,
            words,
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Codewords in ascending order.
    pub fn words(&self) -> &[NdArray] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Total symbol count minus `log_q` of the code size.
    pub fn redundancy(&self) -> Result<Redundancy> {
        redundancy(self.shape.volume()?, self.alphabet, self.words.len() as u128)
    }
}

/// Redundancy `volume - log_q(size)`, exact when the log is rational with a
/// small denominator, otherwise a double.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Redundancy {
    Exact { num: i128, den: u32 },
    Approx(f64),
}

impl Redundancy {
    pub fn value(&self) -> f64 {
        match *self {
            Redundancy::Exact { num, den } => num as f64 / den as f64,
            Redundancy::Approx(v) => v,
        }
    }
}

impl std::fmt::Display for Redundancy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Redundancy::Exact { num, den } if den == 1 => write!(f, "{num}"),
            Redundancy::Exact { num, den } => write!(f, "{num}/{den}"),
            Redundancy::Approx(v) => write!(f, "{v:.6}"),
        }
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Redundancy of a size-`size` code with `volume` total symbols over `q`.
pub fn redundancy(volume: usize, q: Alphabet, size: u128) -> Result<Redundancy> {
    if size == 0 {
        return Err(Error::EmptyCode);
    }
    let qv = u128::from(q.size());
    // exact when size^den == q^num for small den
    for den in 1u32..=16 {
        let mut power: u128 = 1;
        let mut overflow = false;
        for _ in 0..den {
            match power.checked_mul(size) {
                Some(p) => power = p,
                None => {
                    overflow = true;
                    break;
                }
            }
        }
        if overflow {
            break;
        }
        let mut rest = power;
        let mut log: u32 = 0;
        while rest > 1 && rest % qv == 0 {
            rest /= qv;
            log += 1;
        }
        if rest == 1 {
            let num = (volume as i128) * i128::from(den) - i128::from(log);
            let g = gcd(num.unsigned_abs(), u128::from(den)) as u32;
            return Ok(Redundancy::Exact {
                num: num / i128::from(g.max(1)),
                den: den / g.max(1),
            });
        }
    }
    let approx = volume as f64 - (size as f64).ln() / (q.size() as f64).ln();
    Ok(Redundancy::Approx(approx))
}

/// Two codewords and an array lying in both of their error balls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusingTriple {
    pub x: NdArray,
    pub y: NdArray,
    pub shared: NdArray,
}

/// Outcome of a correcting-code check; `NotCorrecting` carries the least
/// confusing triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeVerdict {
    Correcting,
    NotCorrecting(Box<ConfusingTriple>),
}

impl CodeVerdict {
    pub fn is_correcting(&self) -> bool {
        matches!(self, CodeVerdict::Correcting)
    }

    pub fn triple(&self) -> Option<&ConfusingTriple> {
        match self {
            CodeVerdict::Correcting => None,
            CodeVerdict::NotCorrecting(t) => Some(t),
        }
    }
}

/// Pairwise ball-disjointness over the (sorted) codewords. Word pairs are
/// scanned in lexicographic order and the first confusing pair wins, so the
/// reported triple is reproducible.
fn pairwise_disjoint(code: &Code, kind: BallKind, t: &EditVector, cache: &BallCache) -> Result<CodeVerdict> {
    let words = code.words();
    let n = words.len();
    let balls = words
        .iter()
        .map(|w| cache.ball(kind, w, t))
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let hit = pairs
        .par_iter()
        .find_first(|(i, j)| balls[*i].intersection_witness(&balls[*j]).is_some());
    match hit {
        None => Ok(CodeVerdict::Correcting),
        Some(&(i, j)) => {
            let shared = balls[i]
                .intersection_witness(&balls[j])
                .expect("witness vanished on recheck")
                .clone();
            Ok(CodeVerdict::NotCorrecting(Box::new(ConfusingTriple {
                x: words[i].clone(),
                y: words[j].clone(),
                shared,
            })))
        }
    }
}

/// Can the code correct any t-deletion? True iff all pairwise deletion
/// balls are disjoint.
pub fn is_deletion_correcting(code: &Code, t: &EditVector, cache: &BallCache) -> Result<CodeVerdict> {
    code.shape().shrunk(t)?;
    pairwise_disjoint(code, BallKind::Deletion, t, cache)
}

/// Can the code correct any t-insertion?
pub fn is_insertion_correcting(code: &Code, t: &EditVector, cache: &BallCache) -> Result<CodeVerdict> {
    code.shape().check_edit_vector(t)?;
    pairwise_disjoint(code, BallKind::Insertion, t, cache)
}

/// Can the code correct any t-insdel, i.e. any adversarial interleaving of
/// per-axis insertions and deletions totalling t?
pub fn is_insdel_correcting(code: &Code, t: &EditVector, cache: &BallCache) -> Result<CodeVerdict> {
    code.shape().check_edit_vector(t)?;
    pairwise_disjoint(code, BallKind::Insdel, t, cache)
}

/// All length-`d` vectors of non-negative integers summing to `total`, in
/// lexicographic order.
pub fn compositions(total: usize, d: usize) -> Vec<EditVector> {
    fn rec(total: usize, slots: usize, current: &mut Vec<usize>, out: &mut Vec<EditVector>) {
        if slots == 1 {
            current.push(total);
            out.push(EditVector::new(current.clone()));
            current.pop();
            return;
        }
        for first in 0..=total {
            current.push(first);
            rec(total - first, slots - 1, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    if d > 0 {
        rec(total, d, &mut Vec::new(), &mut out);
    }
    out
}

/// Outcome of a scalar-t check; a failure names the composition that fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScalarVerdict {
    Correcting,
    NotCorrecting {
        composition: EditVector,
        triple: Box<ConfusingTriple>,
    },
}

impl ScalarVerdict {
    pub fn is_correcting(&self) -> bool {
        matches!(self, ScalarVerdict::Correcting)
    }
}

/// A scalar t-deletion is the collection of all t-deletions whose per-axis
/// counts sum to t. Distinct compositions leave distinct received shapes, so
/// a decoder can never confuse arrays coming from different compositions;
/// the predicate is therefore the conjunction over all shape-feasible
/// compositions.
pub fn is_scalar_deletion_correcting(code: &Code, t: usize, cache: &BallCache) -> Result<ScalarVerdict> {
    for composition in compositions(t, code.shape().dim()) {
        if code.shape().shrunk(&composition).is_err() {
            continue;
        }
        if let CodeVerdict::NotCorrecting(triple) = is_deletion_correcting(code, &composition, cache)? {
            return Ok(ScalarVerdict::NotCorrecting { composition, triple });
        }
    }
    Ok(ScalarVerdict::Correcting)
}

/// Scalar-t insertion analogue; every composition is feasible.
pub fn is_scalar_insertion_correcting(code: &Code, t: usize, cache: &BallCache) -> Result<ScalarVerdict> {
    for composition in compositions(t, code.shape().dim()) {
        if let CodeVerdict::NotCorrecting(triple) = is_insertion_correcting(code, &composition, cache)? {
            return Ok(ScalarVerdict::NotCorrecting { composition, triple });
        }
    }
    Ok(ScalarVerdict::Correcting)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arr(q: u64, dims: &[usize], data: &[u64]) -> NdArray {
        NdArray::new(Alphabet::new(q).unwrap(), Shape::new(dims.to_vec()), data.to_vec()).unwrap()
    }

    #[test]
    fn code_dedups_and_sorts() {
        let a = arr(2, &[2], &[0, 1]);
        let b = arr(2, &[2], &[1, 0]);
        let code = Code::new(vec![b.clone(), a.clone(), a.clone()]).unwrap();
        assert_eq!(code.words(), &[a, b]);
    }

    #[test]
    fn code_rejects_mixed_shapes_and_empty() {
        assert!(matches!(Code::new(vec![]), Err(Error::EmptyCode)));
        let a = arr(2, &[2], &[0, 1]);
        let b = arr(2, &[3], &[1, 0, 0]);
        assert!(Code::new(vec![a, b]).is_err());
    }

    #[test]
    fn redundancy_exact_for_power_of_q_sizes() {
        let q = Alphabet::new(2).unwrap();
        assert_eq!(redundancy(9, q, 8).unwrap(), Redundancy::Exact { num: 6, den: 1 });
        assert_eq!(redundancy(4, q, 1).unwrap(), Redundancy::Exact { num: 4, den: 1 });
        // log_2(2^(3/2)) is not hit by small denominators unless size^2 = 2^3
        match redundancy(2, q, 3).unwrap() {
            Redundancy::Approx(v) => assert!((v - (2.0 - 3f64.log2())).abs() < 1e-12),
            other => panic!("expected approx, got {other:?}"),
        }
    }

    #[test]
    fn singleton_codes_correct_everything_feasible() {
        let cache = BallCache::new();
        let code = Code::new(vec![arr(2, &[2, 2], &[0, 1, 1, 0])]).unwrap();
        let t = EditVector::new(vec![1, 1]);
        assert!(is_deletion_correcting(&code, &t, &cache).unwrap().is_correcting());
        assert!(is_insertion_correcting(&code, &t, &cache).unwrap().is_correcting());
        assert!(is_insdel_correcting(&code, &t, &cache).unwrap().is_correcting());
        assert!(is_scalar_deletion_correcting(&code, 2, &cache).unwrap().is_correcting());
    }

    #[test]
    fn scalar_zero_is_always_correcting() {
        let cache = BallCache::new();
        let code = Code::new(vec![arr(2, &[2], &[0, 1]), arr(2, &[2], &[1, 0])]).unwrap();
        assert!(is_scalar_deletion_correcting(&code, 0, &cache).unwrap().is_correcting());
        assert!(is_scalar_insertion_correcting(&code, 0, &cache).unwrap().is_correcting());
    }

    #[test]
    fn compositions_enumerate_lexicographically() {
        let comps = compositions(2, 2);
        let expect: Vec<EditVector> = vec![
            EditVector::new(vec![0, 2]),
            EditVector::new(vec![1, 1]),
            EditVector::new(vec![2, 0]),
        ];
        assert_eq!(comps, expect);
    }

    #[test]
    fn scalar_correcting_implies_every_composition() {
        let cache = BallCache::new();
        let code = Code::new(vec![
            arr(2, &[2, 2], &[0, 0, 0, 0]),
            arr(2, &[2, 2], &[1, 1, 1, 1]),
        ])
        .unwrap();
        if is_scalar_deletion_correcting(&code, 1, &cache).unwrap().is_correcting() {
            for composition in compositions(1, 2) {
                assert!(is_deletion_correcting(&code, &composition, &cache)
                    .unwrap()
                    .is_correcting());
            }
        }
    }
}
