//! Exhaustive (or seeded-sample) verification of the equivalence statements
//! over all array pairs at a given shape and alphabet.
//!
//! Every verifier evaluates a left-hand and a right-hand predicate per pair
//! and reports the counts, the first counterinstance in enumeration order,
//! and whether the biconditional held everywhere. Runs whose pair count
//! exceeds the budget refuse to run without an explicit seed; with a seed
//! they check a uniform sample of pairs and say so in the outcome.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::balls::{common_insertion_witness, BallCache, BallKind};
use crate::error::{Error, Result};
use crate::tensor::{Alphabet, EditVector, NdArray, Shape, Universe};

pub const DEFAULT_BUDGET: u128 = 1 << 20;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Maximum number of pair checks per run.
    pub budget: u128,
    /// Seed for sampling when the pair count exceeds the budget. Sampling
    /// without a seed is an error, never a silent default.
    pub seed: Option<u64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            budget: DEFAULT_BUDGET,
            seed: None,
        }
    }
}

/// A pair on which the two sides of a biconditional disagree.
#[derive(Debug, Clone)]
pub struct CounterInstance {
    pub x: NdArray,
    pub y: NdArray,
    pub lhs: bool,
    pub rhs: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub statement: String,
    pub params: Vec<(String, String)>,
    pub pass: bool,
    pub total_pairs: u128,
    pub checked_pairs: u128,
    pub sampled: bool,
    pub seed: Option<u64>,
    pub lhs_holds: u128,
    pub rhs_holds: u128,
    pub mismatches: u128,
    pub counterinstance: Option<CounterInstance>,
    pub notes: Vec<String>,
}

impl VerifyOutcome {
    fn empty(statement: &str, params: Vec<(String, String)>) -> Self {
        VerifyOutcome {
            statement: statement.to_string(),
            params,
            pass: true,
            total_pairs: 0,
            checked_pairs: 0,
            sampled: false,
            seed: None,
            lhs_holds: 0,
            rhs_holds: 0,
            mismatches: 0,
            counterinstance: None,
            notes: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EditCase {
    Deletion,
    Insertion,
    Both,
}

impl std::str::FromStr for EditCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "del" | "deletion" => Ok(EditCase::Deletion),
            "ins" | "insertion" => Ok(EditCase::Insertion),
            "both" => Ok(EditCase::Both),
            other => Err(Error::InvalidParameter(format!("unknown case {other:?}"))),
        }
    }
}

/// Universes up to this size are materialized once instead of re-deriving
/// arrays from their rank on every pair check.
const MATERIALIZE_CAP: u128 = 1 << 16;

struct Side {
    universe: Universe,
    items: Option<Vec<NdArray>>,
}

impl Side {
    fn new(universe: Universe) -> Result<Side> {
        let count = universe.count()?;
        let items = if count <= MATERIALIZE_CAP {
            Some(universe.iter().collect())
        } else {
            None
        };
        Ok(Side { universe, items })
    }

    fn count(&self) -> Result<u128> {
        self.universe.count()
    }

    fn with<T>(&self, index: u128, f: impl FnOnce(&NdArray) -> Result<T>) -> Result<T> {
        match &self.items {
            Some(items) => f(&items[index as usize]),
            None => f(&self.universe.array_at(index)?),
        }
    }
}

/// Pair domain: unordered distinct pairs of one universe, or the full
/// product of two universes when the two sides have different shapes.
enum Domain {
    Same(Side),
    Product(Side, Side),
}

impl Domain {
    fn same(q: Alphabet, shape: Shape) -> Result<Domain> {
        Ok(Domain::Same(Side::new(Universe::new(q, shape))?))
    }

    fn product(q: Alphabet, s1: Shape, s2: Shape) -> Result<Domain> {
        Ok(Domain::Product(
            Side::new(Universe::new(q, s1))?,
            Side::new(Universe::new(q, s2))?,
        ))
    }

    fn total(&self) -> Result<u128> {
        match self {
            Domain::Same(u) => {
                let n = u.count()?;
                Ok(n * n.saturating_sub(1) / 2)
            }
            Domain::Product(a, b) => Ok(a.count()? * b.count()?),
        }
    }

    /// Indices of the two sides for a pair index.
    fn split(&self, index: u128) -> Result<(u128, u128)> {
        match self {
            Domain::Same(u) => Ok(decode_unordered(index, u.count()?)),
            Domain::Product(_, b) => {
                let nb = b.count()?;
                Ok((index / nb, index % nb))
            }
        }
    }

    fn with_pair<T>(
        &self,
        index: u128,
        f: impl FnOnce(u128, u128, &NdArray, &NdArray) -> Result<T>,
    ) -> Result<T> {
        let (i, j) = self.split(index)?;
        match self {
            Domain::Same(u) => u.with(i, |x| u.with(j, |y| f(i, j, x, y))),
            Domain::Product(a, b) => a.with(i, |x| b.with(j, |y| f(i, j, x, y))),
        }
    }

    fn pair(&self, index: u128) -> Result<(NdArray, NdArray)> {
        self.with_pair(index, |_, _, x, y| Ok((x.clone(), y.clone())))
    }
}

/// Per-universe ball table: materialized up front for small universes so the
/// pair loop never goes through the keyed cache, lazily computed otherwise.
enum BallTable {
    Pre(Vec<std::sync::Arc<crate::balls::Ball>>),
    Lazy(BallKind, EditVector),
}

impl BallTable {
    fn build(side_of: &Domain, which: usize, kind: BallKind, t: &EditVector, cache: &BallCache) -> Result<BallTable> {
        let side = match (side_of, which) {
            (Domain::Same(u), _) => u,
            (Domain::Product(a, _), 0) => a,
            (Domain::Product(_, b), _) => b,
        };
        match &side.items {
            Some(items) => {
                let balls = items
                    .par_iter()
                    .map(|a| cache.ball(kind, a, t))
                    .collect::<Result<Vec<_>>>()?;
                Ok(BallTable::Pre(balls))
            }
            None => Ok(BallTable::Lazy(kind, t.clone())),
        }
    }

    fn get(
        &self,
        index: u128,
        array: &NdArray,
        cache: &BallCache,
    ) -> Result<std::sync::Arc<crate::balls::Ball>> {
        match self {
            BallTable::Pre(balls) => Ok(balls[index as usize].clone()),
            BallTable::Lazy(kind, t) => cache.ball(*kind, array, t),
        }
    }
}

/// Invert the lexicographic enumeration of unordered pairs `(i, j)`,
/// `i < j`, of `{0, .., n-1}`.
fn decode_unordered(index: u128, n: u128) -> (u128, u128) {
    // pairs with first coordinate < i: f(i) = i*n - i*(i+1)/2
    let f = |i: u128| i * n - i * (i + 1) / 2;
    let (mut lo, mut hi) = (0u128, n - 1);
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        if f(mid) <= index {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let i = lo;
    let j = i + 1 + (index - f(i));
    (i, j)
}

#[derive(Debug, Clone, Default)]
struct ScanAcc {
    checked: u128,
    lhs: u128,
    rhs: u128,
    mismatches: u128,
    first: Option<(u128, bool, bool)>,
}

impl ScanAcc {
    fn merge(mut self, other: ScanAcc) -> ScanAcc {
        self.checked += other.checked;
        self.lhs += other.lhs;
        self.rhs += other.rhs;
        self.mismatches += other.mismatches;
        self.first = match (self.first, other.first) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }
}

struct Scan {
    total: u128,
    sampled: bool,
    acc: ScanAcc,
    counterinstance: Option<CounterInstance>,
}

fn scan(
    domain: &Domain,
    cfg: &VerifyConfig,
    check: impl Fn(u128, u128, &NdArray, &NdArray) -> Result<(bool, bool)> + Sync,
) -> Result<Scan> {
    let total = domain.total()?;
    let indices: Vec<u128> = if total <= cfg.budget {
        (0..total).collect()
    } else {
        let Some(seed) = cfg.seed else {
            return Err(Error::SeedRequired {
                count: total,
                budget: cfg.budget,
            });
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..cfg.budget).map(|_| rng.gen_range(0..total)).collect()
    };
    let sampled = total > cfg.budget;
    let acc = indices
        .par_iter()
        .try_fold(ScanAcc::default, |mut acc, &index| -> Result<ScanAcc> {
            let (lhs, rhs) = domain.with_pair(index, |i, j, x, y| check(i, j, x, y))?;
            acc.checked += 1;
            if lhs {
                acc.lhs += 1;
            }
            if rhs {
                acc.rhs += 1;
            }
            if lhs != rhs {
                acc.mismatches += 1;
                if acc.first.map_or(true, |(p, _, _)| index < p) {
                    acc.first = Some((index, lhs, rhs));
                }
            }
            Ok(acc)
        })
        .try_reduce(ScanAcc::default, |a, b| Ok(a.merge(b)))?;
    let counterinstance = match acc.first {
        None => None,
        Some((index, lhs, rhs)) => {
            let (x, y) = domain.pair(index)?;
            Some(CounterInstance {
                x,
                y,
                lhs,
                rhs,
                detail: None,
            })
        }
    };
    Ok(Scan {
        total,
        sampled,
        acc,
        counterinstance,
    })
}

fn finish(statement: &str, params: Vec<(String, String)>, cfg: &VerifyConfig, scan: Scan) -> VerifyOutcome {
    VerifyOutcome {
        statement: statement.to_string(),
        params,
        pass: scan.acc.mismatches == 0,
        total_pairs: scan.total,
        checked_pairs: scan.acc.checked,
        sampled: scan.sampled,
        seed: if scan.sampled { cfg.seed } else { None },
        lhs_holds: scan.acc.lhs,
        rhs_holds: scan.acc.rhs,
        mismatches: scan.acc.mismatches,
        counterinstance: scan.counterinstance,
        notes: Vec::new(),
    }
}

