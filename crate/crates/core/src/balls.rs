//! Enumeration and membership for deletion balls, insertion balls and
//! insdel balls, plus the pairwise intersection primitives that the
//! correcting-code predicates and the verifiers are built on.
//!
//! A deletion ball is enumerated directly from its characterization as the
//! set of restrictions of the center to kept-position subsets: deleting
//! `t_i` hyperplanes per axis, in any order and at any positions, is the
//! same as keeping `n_i - t_i` positions per axis. Order irrelevance is not
//! assumed silently; the test suite re-derives balls by literal sequential
//! edits under every axis order and compares.
//!
//! The insdel ball is the union over every componentwise split
//! `t = t_ins + t_del` and every interleaving of the single-hyperplane
//! edits. Interleavings genuinely matter on degenerate shapes: inserting on
//! an axis of extent 0 and then deleting the inserted hyperplane reaches the
//! center itself, which the "all deletions first" composition cannot do (it
//! has nothing to delete). On shapes with `t_del_i <= n_i` for every axis the
//! two agree; `insdel_ball_deletions_first` exposes the composition so the
//! claim can be checked rather than believed.

use std::collections::{BTreeSet, HashSet};
use std::path::PathBuf;
use std::sync::Arc;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::tensor::{subsets, Alphabet, EditVector, HyperplaneSlice, NdArray, Shape, Universe};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BallKind {
    Deletion,
    Insertion,
    Insdel,
}

impl std::fmt::Display for BallKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BallKind::Deletion => "del",
            BallKind::Insertion => "ins",
            BallKind::Insdel => "insdel",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for BallKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "del" | "deletion" => Ok(BallKind::Deletion),
            "ins" | "insertion" => Ok(BallKind::Insertion),
            "insdel" => Ok(BallKind::Insdel),
            other => Err(Error::InvalidParameter(format!("unknown ball kind {other:?}"))),
        }
    }
}

/// A materialized edit ball: the deduplicated set of arrays reachable from
/// `center` under the given kind and per-axis counts. Members are kept
/// sorted, so the least common member of two balls is well defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    center: NdArray,
    kind: BallKind,
    parameter: EditVector,
    members: Vec<NdArray>,
}

impl Ball {
    fn from_set(center: NdArray, kind: BallKind, parameter: EditVector, set: BTreeSet<NdArray>) -> Self {
        Ball {
            center,
            kind,
            parameter,
            members: set.into_iter().collect(),
        }
    }

    pub fn center(&self) -> &NdArray {
        &self.center
    }

    pub fn kind(&self) -> BallKind {
        self.kind
    }

    pub fn parameter(&self) -> &EditVector {
        &self.parameter
    }

    /// Members in ascending order.
    pub fn members(&self) -> &[NdArray] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, a: &NdArray) -> bool {
        self.members.binary_search(a).is_ok()
    }

    /// The least array lying in both balls, if any.
    pub fn intersection_witness<'a>(&'a self, other: &Ball) -> Option<&'a NdArray> {
        let (mut i, mut j) = (0, 0);
        while i < self.members.len() && j < other.members.len() {
            match self.members[i].cmp(&other.members[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return Some(&self.members[i]),
            }
        }
        None
    }
}

/// True when the member sets share at least one array.
pub fn ball_intersects(a: &Ball, b: &Ball) -> bool {
    a.intersection_witness(b).is_some()
}

fn for_each_kept_combo(
    shape: &Shape,
    kept_sizes: &[usize],
    mut f: impl FnMut(&[Vec<usize>]) -> Result<bool>,
) -> Result<()> {
    let per_axis: Vec<Vec<Vec<usize>>> = shape
        .dims()
        .iter()
        .zip(kept_sizes)
        .map(|(&n, &k)| subsets(n, k))
        .collect();
    let d = per_axis.len();
    let mut idx = vec![0usize; d];
    loop {
        let kept: Vec<Vec<usize>> = idx
            .iter()
            .enumerate()
            .map(|(a, &i)| per_axis[a][i].clone())
            .collect();
        if !f(&kept)? {
            return Ok(());
        }
        let mut a = d;
        loop {
            if a == 0 {
                return Ok(());
            }
            a -= 1;
            idx[a] += 1;
            if idx[a] < per_axis[a].len() {
                break;
            }
            idx[a] = 0;
        }
    }
}

/// The set of arrays reachable from `x` by `t_i` hyperplane deletions per
/// axis, at any positions and in any order.
pub fn deletion_ball(x: &NdArray, t: &EditVector) -> Result<Ball> {
    let target = x.shape().shrunk(t)?;
    let kept_sizes: Vec<usize> = target.dims().to_vec();
    let mut set = BTreeSet::new();
    for_each_kept_combo(x.shape(), &kept_sizes, |kept| {
        set.insert(x.restrict(kept)?);
        Ok(true)
    })?;
    Ok(Ball::from_set(x.clone(), BallKind::Deletion, t.clone(), set))
}

/// The set of arrays reachable from `x` by `t_i` hyperplane insertions per
/// axis, with arbitrary slice contents and positions.
pub fn insertion_ball(x: &NdArray, t: &EditVector) -> Result<Ball> {
    let target = x.shape().grown(t)?;
    let volume = target.volume()?;
    let d = x.dim();
    let q = x.alphabet().size();
    let target_dims = target.dims().to_vec();
    let mut set = BTreeSet::new();
    let kept_sizes: Vec<usize> = x.shape().dims().to_vec();
    for_each_kept_combo(&target, &kept_sizes, |kept| {
        // place x on the kept slots, then run every filling of the rest
        let mut template = vec![0u64; volume];
        let mut is_kept = vec![false; volume];
        if x.shape().volume()? > 0 {
            let mut coords = vec![0usize; d];
            loop {
                let mut offset = 0usize;
                for (a, &c) in coords.iter().enumerate() {
                    offset = offset * target_dims[a] + (kept[a][c] - 1);
                }
                let mut xoffset = 0usize;
                for (a, &c) in coords.iter().enumerate() {
                    xoffset = xoffset * kept_sizes[a] + c;
                }
                template[offset] = x.data()[xoffset];
                is_kept[offset] = true;
                let mut a = d;
                loop {
                    if a == 0 {
                        break;
                    }
                    a -= 1;
                    coords[a] += 1;
                    if coords[a] < kept_sizes[a] {
                        break;
                    }
                    coords[a] = 0;
                }
                if coords.iter().all(|&c| c == 0) {
                    break;
                }
            }
        } else {
            // x has no entries; every slot is free
        }
        let free: Vec<usize> = (0..volume).filter(|&o| !is_kept[o]).collect();
        let mut fill = vec![0u64; free.len()];
        loop {
            let mut data = template.clone();
            for (slot, &offset) in free.iter().enumerate() {
                data[offset] = fill[slot];
            }
            set.insert(NdArray::new(x.alphabet(), target.clone(), data)?);
            let mut slot = free.len();
            loop {
                if slot == 0 {
                    return Ok(true);
                }
                slot -= 1;
                fill[slot] += 1;
                if fill[slot] < q {
                    break;
                }
                fill[slot] = 0;
            }
        }
    })?;
    Ok(Ball::from_set(x.clone(), BallKind::Insertion, t.clone(), set))
}

/// All componentwise splits `t = ins + del`.
pub fn splits(t: &EditVector) -> Vec<(EditVector, EditVector)> {
    let d = t.dim();
    let mut out = Vec::new();
    let mut ins = vec![0usize; d];
    loop {
        let ins_v = EditVector::new(ins.clone());
        let del_v = t.minus(&ins_v);
        out.push((ins_v, del_v));
        let mut a = d;
        loop {
            if a == 0 {
                return out;
            }
            a -= 1;
            ins[a] += 1;
            if ins[a] <= t.get(a + 1) {
                break;
            }
            ins[a] = 0;
        }
    }
}

fn split_members(x: &NdArray, ins: &EditVector, del: &EditVector) -> Result<BTreeSet<NdArray>> {
    let mut out = BTreeSet::new();
    let mut seen: HashSet<(NdArray, Vec<usize>, Vec<usize>)> = HashSet::new();
    let mut stack = vec![(x.clone(), ins.counts().to_vec(), del.counts().to_vec())];
    seen.insert((x.clone(), ins.counts().to_vec(), del.counts().to_vec()));
    while let Some((a, ins_rem, del_rem)) = stack.pop() {
        if ins_rem.iter().all(|&c| c == 0) && del_rem.iter().all(|&c| c == 0) {
            out.insert(a);
            continue;
        }
        for axis in 1..=a.dim() {
            if del_rem[axis - 1] > 0 && a.shape().extent(axis)? > 0 {
                let mut next_del = del_rem.clone();
                next_del[axis - 1] -= 1;
                for pos in 1..=a.shape().extent(axis)? {
                    let child = a.delete_hyperplane(axis, pos)?;
                    let key = (child, ins_rem.clone(), next_del.clone());
                    if seen.insert(key.clone()) {
                        stack.push(key);
                    }
                }
            }
            if ins_rem[axis - 1] > 0 {
                let mut next_ins = ins_rem.clone();
                next_ins[axis - 1] -= 1;
                let slice_shape = a.shape().without_axis(axis)?;
                for values in Universe::new(a.alphabet(), slice_shape).iter() {
                    let slice = HyperplaneSlice::new(axis, values);
                    for pos in 1..=a.shape().extent(axis)? + 1 {
                        let child = a.insert_hyperplane(axis, pos, &slice)?;
                        let key = (child, next_ins.clone(), del_rem.clone());
                        if seen.insert(key.clone()) {
                            stack.push(key);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The t-insdel ball: the union, over every split `t = ins + del` and every
/// interleaving of the individual edits, of the reachable arrays. Members of
/// different splits have different shapes, so the ball mixes shapes.
pub fn insdel_ball(x: &NdArray, t: &EditVector) -> Result<Ball> {
    x.shape().check_edit_vector(t)?;
    let mut set = BTreeSet::new();
    for (ins, del) in splits(t) {
        set.extend(split_members(x, &ins, &del)?);
    }
    Ok(Ball::from_set(x.clone(), BallKind::Insdel, t.clone(), set))
}

/// The "all deletions first, then all insertions" composition. Differs from
/// `insdel_ball` exactly on splits whose deletions do not fit the original
/// shape (e.g. the center itself is reachable from an extent-0 axis by
/// insert-then-delete but not by delete-then-insert).
pub fn insdel_ball_deletions_first(x: &NdArray, t: &EditVector) -> Result<Ball> {
    x.shape().check_edit_vector(t)?;
    let mut set = BTreeSet::new();
    for (ins, del) in splits(t) {
        if x.shape().shrunk(&del).is_err() {
            continue;
        }
        for d in deletion_ball(x, &del)?.members() {
            set.extend(insertion_ball(d, &ins)?.members().iter().cloned());
        }
    }
    Ok(Ball::from_set(x.clone(), BallKind::Insdel, t.clone(), set))
}

pub fn ball_of_kind(kind: BallKind, x: &NdArray, t: &EditVector) -> Result<Ball> {
    match kind {
        BallKind::Deletion => deletion_ball(x, t),
        BallKind::Insertion => insertion_ball(x, t),
        BallKind::Insdel => insdel_ball(x, t),
    }
}

fn restriction_equals(big: &NdArray, kept: &[Vec<usize>], small: &NdArray) -> bool {
    let d = big.dim();
    let small_dims: Vec<usize> = kept.iter().map(|k| k.len()).collect();
    debug_assert_eq!(small.shape().dims(), &small_dims[..]);
    let volume: usize = small_dims.iter().product();
    if volume == 0 {
        return true;
    }
    let big_dims = big.shape().dims();
    let mut coords = vec![0usize; d];
    loop {
        let mut big_offset = 0usize;
        let mut small_offset = 0usize;
        for a in 0..d {
            big_offset = big_offset * big_dims[a] + (kept[a][coords[a]] - 1);
            small_offset = small_offset * small_dims[a] + coords[a];
        }
        if big.data()[big_offset] != small.data()[small_offset] {
            return false;
        }
        let mut a = d;
        loop {
            if a == 0 {
                return true;
            }
            a -= 1;
            coords[a] += 1;
            if coords[a] < small_dims[a] {
                break;
            }
            coords[a] = 0;
        }
    }
}

/// Does a t-deletion of `x` yield `candidate`? Decided without enumerating
/// the ball: some kept-position restriction of `x` must equal `candidate`.
pub fn deletion_yields(x: &NdArray, t: &EditVector, candidate: &NdArray) -> Result<bool> {
    let target = x.shape().shrunk(t)?;
    if candidate.shape() != &target || candidate.alphabet() != x.alphabet() {
        return Ok(false);
    }
    let mut found = false;
    for_each_kept_combo(x.shape(), target.dims(), |kept| {
        if restriction_equals(x, kept, candidate) {
            found = true;
            return Ok(false);
        }
        Ok(true)
    })?;
    Ok(found)
}

/// Does a t-insertion into `x` yield `candidate`? Equivalent to `candidate`
/// restricting to `x` on some kept-position subsets.
pub fn insertion_yields(x: &NdArray, t: &EditVector, candidate: &NdArray) -> Result<bool> {
    let target = x.shape().grown(t)?;
    if candidate.shape() != &target || candidate.alphabet() != x.alphabet() {
        return Ok(false);
    }
    let mut found = false;
    for_each_kept_combo(&target, x.shape().dims(), |kept| {
        if restriction_equals(candidate, kept, x) {
            found = true;
            return Ok(false);
        }
        Ok(true)
    })?;
    Ok(found)
}

/// Search for one array obtainable both as an `sx`-insertion into `x` and an
/// `sy`-insertion into `y`, without materializing either insertion ball.
///
/// A common result `Z` exists iff kept-position subsets can be chosen for
/// both sides so that `x` and `y` agree on every doubly-kept cell; the free
/// cells of the first consistent choice are filled with 0, so the witness is
/// deterministic.
pub fn common_insertion_witness(
    x: &NdArray,
    sx: &EditVector,
    y: &NdArray,
    sy: &EditVector,
) -> Result<Option<NdArray>> {
    if x.alphabet() != y.alphabet() {
        return Err(Error::AlphabetMismatch(x.alphabet().size(), y.alphabet().size()));
    }
    let target = x.shape().grown(sx)?;
    let target_y = y.shape().grown(sy)?;
    if target != target_y {
        return Err(Error::ShapeMismatch(format!(
            "insertion targets differ: {target} vs {target_y}"
        )));
    }
    let d = x.dim();
    let target_dims = target.dims().to_vec();
    let x_dims = x.shape().dims().to_vec();
    let y_dims = y.shape().dims().to_vec();

    let x_choices: Vec<Vec<Vec<usize>>> = (0..d)
        .map(|a| subsets(target_dims[a], x_dims[a]))
        .collect();
    let y_choices: Vec<Vec<Vec<usize>>> = (0..d)
        .map(|a| subsets(target_dims[a], y_dims[a]))
        .collect();

    let mut xi = vec![0usize; d];
    loop {
        let kept_x: Vec<&Vec<usize>> = (0..d).map(|a| &x_choices[a][xi[a]]).collect();
        let mut yi = vec![0usize; d];
        'y_combo: loop {
            let kept_y: Vec<&Vec<usize>> = (0..d).map(|a| &y_choices[a][yi[a]]).collect();
            // per axis, the doubly-kept slots with their coordinates in x and y
            let mut common: Vec<Vec<(usize, usize)>> = Vec::with_capacity(d);
            for a in 0..d {
                let (mut i, mut j) = (0, 0);
                let mut slots = Vec::new();
                while i < kept_x[a].len() && j < kept_y[a].len() {
                    match kept_x[a][i].cmp(&kept_y[a][j]) {
                        std::cmp::Ordering::Less => i += 1,
                        std::cmp::Ordering::Greater => j += 1,
                        std::cmp::Ordering::Equal => {
                            slots.push((i, j));
                            i += 1;
                            j += 1;
                        }
                    }
                }
                common.push(slots);
            }
            let consistent = if common.iter().any(|c| c.is_empty()) {
                true
            } else {
                let mut idx = vec![0usize; d];
                'cells: loop {
                    let mut xo = 0usize;
                    let mut yo = 0usize;
                    for a in 0..d {
                        let (cx, cy) = common[a][idx[a]];
                        xo = xo * x_dims[a] + cx;
                        yo = yo * y_dims[a] + cy;
                    }
                    if x.data()[xo] != y.data()[yo] {
                        break 'cells false;
                    }
                    let mut a = d;
                    loop {
                        if a == 0 {
                            break 'cells true;
                        }
                        a -= 1;
                        idx[a] += 1;
                        if idx[a] < common[a].len() {
                            break;
                        }
                        idx[a] = 0;
                    }
                }
            };
            if consistent {
                let volume = target.volume()?;
                let mut data = vec![0u64; volume];
                write_into(&mut data, &target_dims, x, &kept_x);
                write_into(&mut data, &target_dims, y, &kept_y);
                return Ok(Some(NdArray::new(x.alphabet(), target, data)?));
            }
            // advance y combo
            let mut a = d;
            loop {
                if a == 0 {
                    break 'y_combo;
                }
                a -= 1;
                yi[a] += 1;
                if yi[a] < y_choices[a].len() {
                    break;
                }
                yi[a] = 0;
            }
        }
        let mut a = d;
        loop {
            if a == 0 {
                return Ok(None);
            }
            a -= 1;
            xi[a] += 1;
            if xi[a] < x_choices[a].len() {
                break;
            }
            xi[a] = 0;
        }
    }
}

fn write_into(data: &mut [u64], target_dims: &[usize], src: &NdArray, kept: &[&Vec<usize>]) {
    let d = src.dim();
    let src_dims = src.shape().dims();
    if src.data().is_empty() {
        return;
    }
    let mut coords = vec![0usize; d];
    loop {
        let mut offset = 0usize;
        let mut src_offset = 0usize;
        for a in 0..d {
            offset = offset * target_dims[a] + (kept[a][coords[a]] - 1);
            src_offset = src_offset * src_dims[a] + coords[a];
        }
        data[offset] = src.data()[src_offset];
        let mut a = d;
        loop {
            if a == 0 {
                return;
            }
            a -= 1;
            coords[a] += 1;
            if coords[a] < src_dims[a] {
                break;
            }
            coords[a] = 0;
        }
    }
}

/// One single-hyperplane edit of an edit script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EditStep {
    Delete { axis: usize, pos: usize },
    Insert { axis: usize, pos: usize, slice: HyperplaneSlice },
}

/// An ordered sequence of single-hyperplane edits; each step must be valid
/// against the running shape when applied.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EditScript(Vec<EditStep>);

impl EditScript {
    pub fn new(steps: Vec<EditStep>) -> Self {
        EditScript(steps)
    }

    pub fn steps(&self) -> &[EditStep] {
        &self.0
    }

    pub fn apply(&self, x: &NdArray) -> Result<NdArray> {
        let mut out = x.clone();
        for step in &self.0 {
            out = match step {
                EditStep::Delete { axis, pos } => out.delete_hyperplane(*axis, *pos)?,
                EditStep::Insert { axis, pos, slice } => out.insert_hyperplane(*axis, *pos, slice)?,
            };
        }
        Ok(out)
    }

    /// Per-axis deletion counts of the script.
    pub fn deletion_counts(&self, d: usize) -> EditVector {
        let mut counts = vec![0usize; d];
        for step in &self.0 {
            if let EditStep::Delete { axis, .. } = step {
                counts[axis - 1] += 1;
            }
        }
        EditVector::new(counts)
    }

    /// Per-axis insertion counts of the script.
    pub fn insertion_counts(&self, d: usize) -> EditVector {
        let mut counts = vec![0usize; d];
        for step in &self.0 {
            if let EditStep::Insert { axis, .. } = step {
                counts[axis - 1] += 1;
            }
        }
        EditVector::new(counts)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct CacheKey {
    kind: BallKind,
    t: EditVector,
    center: NdArray,
}

#[derive(Serialize, Deserialize)]
struct ArrayRecord {
    n: Vec<usize>,
    entries: Vec<u64>,
}

impl ArrayRecord {
    fn of(a: &NdArray) -> Self {
        ArrayRecord {
            n: a.shape().dims().to_vec(),
            entries: a.data().to_vec(),
        }
    }

    fn restore(&self, q: Alphabet) -> Result<NdArray> {
        NdArray::new(q, Shape::new(self.n.clone()), self.entries.clone())
    }
}

#[derive(Serialize, Deserialize)]
struct BallRecord {
    kind: String,
    t: Vec<usize>,
    q: u64,
    center: ArrayRecord,
    members: Vec<ArrayRecord>,
}

/// Memoization cache for balls, keyed by `(kind, t, center)`. Safe for
/// concurrent readers and idempotent concurrent inserts. An optional disk
/// directory persists balls across runs; unreadable cache files are treated
/// as misses and recomputed.
#[derive(Debug, Default)]
pub struct BallCache {
    mem: DashMap<CacheKey, Arc<Ball>>,
    disk: Option<PathBuf>,
}

impl BallCache {
    pub fn new() -> Self {
        BallCache {
            mem: DashMap::new(),
            disk: None,
        }
    }

    pub fn with_disk(dir: PathBuf) -> Self {
        BallCache {
            mem: DashMap::new(),
            disk: Some(dir),
        }
    }

    pub fn len(&self) -> usize {
        self.mem.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mem.is_empty()
    }

    pub fn ball(&self, kind: BallKind, center: &NdArray, t: &EditVector) -> Result<Arc<Ball>> {
        let key = CacheKey {
            kind,
            t: t.clone(),
            center: center.clone(),
        };
        if let Some(hit) = self.mem.get(&key) {
            return Ok(hit.clone());
        }
        if let Some(ball) = self.load(&key)? {
            let ball = Arc::new(ball);
            self.mem.insert(key, ball.clone());
            return Ok(ball);
        }
        let ball = Arc::new(ball_of_kind(kind, center, t)?);
        self.store(&key, &ball)?;
        self.mem.insert(key, ball.clone());
        Ok(ball)
    }

    fn file_for(&self, key: &CacheKey) -> Option<PathBuf> {
        let dir = self.disk.as_ref()?;
        let mut hasher = Sha256::new();
        hasher.update(format!("v1|{}|{}|{}|", key.kind, key.t, key.center.alphabet()));
        hasher.update(format!("{:?}|{:?}", key.center.shape().dims(), key.center.data()));
        let digest = hasher.finalize();
        let mut name = String::with_capacity(68);
        for byte in digest {
            name.push_str(&format!("{byte:02x}"));
        }
        name.push_str(".json");
        Some(dir.join(name))
    }

    fn load(&self, key: &CacheKey) -> Result<Option<Ball>> {
        let Some(path) = self.file_for(key) else {
            return Ok(None);
        };
        let Ok(bytes) = std::fs::read(&path) else {
            return Ok(None);
        };
        let Ok(record) = serde_json::from_slice::<BallRecord>(&bytes) else {
            return Ok(None);
        };
        let q = key.center.alphabet();
        if record.kind != key.kind.to_string()
            || record.t != key.t.counts()
            || record.q != q.size()
            || record.center.n != key.center.shape().dims()
            || record.center.entries != key.center.data()
        {
            return Ok(None);
        }
        let mut members = Vec::with_capacity(record.members.len());
        for m in &record.members {
            match m.restore(q) {
                Ok(a) => members.push(a),
                Err(_) => return Ok(None),
            }
        }
        Ok(Some(Ball {
            center: key.center.clone(),
            kind: key.kind,
            parameter: key.t.clone(),
            members,
        }))
    }

    fn store(&self, key: &CacheKey, ball: &Ball) -> Result<()> {
        let Some(path) = self.file_for(key) else {
            return Ok(());
        };
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| Error::CacheIo(e.to_string()))?;
        }
        let record = BallRecord {
            kind: key.kind.to_string(),
            t: key.t.counts().to_vec(),
            q: key.center.alphabet().size(),
            center: ArrayRecord::of(&key.center),
            members: ball.members.iter().map(ArrayRecord::of).collect(),
        };
        let bytes = serde_json::to_vec(&record).map_err(|e| Error::CacheIo(e.to_string()))?;
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, bytes).map_err(|e| Error::CacheIo(e.to_string()))?;
        std::fs::rename(&tmp, &path).map_err(|e| Error::CacheIo(e.to_string()))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{Alphabet, Shape};

    fn arr(q: u64, dims: &[usize], data: &[u64]) -> NdArray {
        NdArray::new(Alphabet::new(q).unwrap(), Shape::new(dims.to_vec()), data.to_vec()).unwrap()
    }

    fn vector(q: u64, bits: &[u64]) -> NdArray {
        arr(q, &[bits.len()], bits)
    }

    #[test]
    fn deletion_ball_of_0011() {
        let x = vector(2, &[0, 0, 1, 1]);
        let ball = deletion_ball(&x, &EditVector::new(vec![1])).unwrap();
        assert_eq!(ball.members(), &[vector(2, &[0, 0, 1]), vector(2, &[0, 1, 1])]);
    }

    #[test]
    fn zero_vector_balls_are_singletons() {
        let x = arr(2, &[2, 2], &[0, 1, 1, 0]);
        let t = EditVector::zero(2);
        for kind in [BallKind::Deletion, BallKind::Insertion, BallKind::Insdel] {
            let ball = ball_of_kind(kind, &x, &t).unwrap();
            assert_eq!(ball.members(), std::slice::from_ref(&x));
        }
    }

    #[test]
    fn insertion_ball_of_single_zero() {
        let x = vector(2, &[0]);
        let ball = insertion_ball(&x, &EditVector::new(vec![1])).unwrap();
        assert_eq!(
            ball.members(),
            &[vector(2, &[0, 0]), vector(2, &[0, 1]), vector(2, &[1, 0])]
        );
    }

    #[test]
    fn deletion_ball_rejects_oversized_t() {
        let x = vector(2, &[0, 1]);
        assert!(matches!(
            deletion_ball(&x, &EditVector::new(vec![3])),
            Err(Error::InfeasibleDeletion { .. })
        ));
    }

    #[test]
    fn insdel_ball_of_01_with_one_edit() {
        let x = vector(2, &[0, 1]);
        let ball = insdel_ball(&x, &EditVector::new(vec![1])).unwrap();
        let expected: Vec<NdArray> = vec![
            vector(2, &[0]),
            vector(2, &[1]),
            vector(2, &[0, 0, 1]),
            vector(2, &[0, 1, 0]),
            vector(2, &[0, 1, 1]),
            vector(2, &[1, 0, 1]),
        ]
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
        assert_eq!(ball.members(), &expected[..]);
    }

    #[test]
    fn insdel_shapes_identify_the_split() {
        let x = arr(2, &[2, 2], &[0, 1, 1, 0]);
        let t = EditVector::new(vec![1, 1]);
        let ball = insdel_ball(&x, &t).unwrap();
        for m in ball.members() {
            let mut feasible = 0;
            for (ins, del) in splits(&t) {
                if let Ok(shrunk) = x.shape().shrunk(&del) {
                    if shrunk.grown(&ins).unwrap() == *m.shape() {
                        feasible += 1;
                    }
                }
            }
            assert_eq!(feasible, 1, "shape {} should pin the split", m.shape());
        }
    }

    #[test]
    fn interleavings_reach_more_than_deletions_first_on_degenerate_shapes() {
        // insert-then-delete on an extent-0 axis reaches the center itself
        let x = arr(2, &[0], &[]);
        let t = EditVector::new(vec![2]);
        let full = insdel_ball(&x, &t).unwrap();
        let composed = insdel_ball_deletions_first(&x, &t).unwrap();
        assert!(full.contains(&x));
        assert!(!composed.contains(&x));
    }

    #[test]
    fn common_insertion_witness_matches_materialized_balls() {
        let q = Alphabet::new(2).unwrap();
        let shape = Shape::new(vec![2, 2]);
        let universe: Vec<NdArray> = Universe::new(q, shape).iter().collect();
        let t = EditVector::new(vec![1, 1]);
        for x in &universe {
            let bx = insertion_ball(x, &t).unwrap();
            for y in &universe {
                let by = insertion_ball(y, &t).unwrap();
                let direct = bx.intersection_witness(&by).is_some();
                let fast = common_insertion_witness(x, &t, y, &t).unwrap();
                assert_eq!(direct, fast.is_some());
                if let Some(w) = fast {
                    assert!(insertion_yields(x, &t, &w).unwrap());
                    assert!(insertion_yields(y, &t, &w).unwrap());
                }
            }
        }
    }

    #[test]
    fn edit_script_respects_shape_law() {
        let x = arr(2, &[2, 2], &[0, 1, 1, 0]);
        let slice = HyperplaneSlice::new(2, arr(2, &[1], &[1]));
        let script = EditScript::new(vec![
            EditStep::Delete { axis: 1, pos: 2 },
            EditStep::Insert { axis: 2, pos: 1, slice },
            EditStep::Delete { axis: 2, pos: 3 },
        ]);
        let result = script.apply(&x).unwrap();
        let dels = script.deletion_counts(2);
        let inss = script.insertion_counts(2);
        for axis in 1..=2 {
            assert_eq!(
                result.shape().extent(axis).unwrap(),
                x.shape().extent(axis).unwrap() + inss.get(axis) - dels.get(axis)
            );
        }
    }

    #[test]
    fn cache_is_idempotent_and_hits() {
        let cache = BallCache::new();
        let x = vector(2, &[0, 0, 1, 1]);
        let t = EditVector::new(vec![1]);
        let a = cache.ball(BallKind::Deletion, &x, &t).unwrap();
        let b = cache.ball(BallKind::Deletion, &x, &t).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(cache.len(), 1);
    }
}
