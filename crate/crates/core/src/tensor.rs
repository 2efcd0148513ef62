//! d-dimensional q-ary arrays and the primitive operations on them:
//! single-hyperplane deletion and insertion, axis projection and expansion.
//!
//! Conventions used throughout the crate:
//!
//! * Axes and positions are 1-based, so an array of shape `(n_1, ..., n_d)`
//!   has axes `1..=d` and positions `1..=n_i` along axis `i`.
//! * Entries are stored row-major with axis 1 slowest.
//! * Projecting along axis `j` encodes the length-`n_j` fiber `(s_1, ..., s_m)`
//!   as the integer `sum s_x * q^(x-1)`, i.e. coordinate 1 is the least
//!   significant digit. Any fixed bijection would do; this one is chosen once
//!   so that projections, expansions and file formats agree.

use crate::error::{Error, Result};

/// Symbols are plain integers `0..q`. Projected alphabets can reach `q^n`,
/// so the symbol type must be wide; `u64` covers every desk-scale run and
/// power computations are checked rather than assumed.
pub type Symbol = u64;

/// A `q`-ary alphabet `{0, ..., q-1}` with `q >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alphabet(u64);

impl Alphabet {
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::AlphabetTooSmall(q));
        }
        Ok(Alphabet(q))
    }

    pub fn size(self) -> u64 {
        self.0
    }

    /// The alphabet of size `q^exponent`, used by projections.
    pub fn pow(self, exponent: usize) -> Result<Self> {
        if exponent == 0 {
            return Err(Error::AlphabetTooSmall(1));
        }
        let exp = u32::try_from(exponent).map_err(|_| Error::AlphabetOverflow {
            base: self.0,
            exponent,
        })?;
        let q = self.0.checked_pow(exp).ok_or(Error::AlphabetOverflow {
            base: self.0,
            exponent,
        })?;
        Alphabet::new(q)
    }

    fn check_symbol(self, symbol: Symbol) -> Result<()> {
        if symbol >= self.0 {
            return Err(Error::SymbolOutOfRange {
                symbol,
                alphabet: self.0,
            });
        }
        Ok(())
    }
}

impl std::fmt::Display for Alphabet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Extents `(n_1, ..., n_d)` of a d-dimensional array. Extents may be zero
/// (an array can lose a whole axis to deletions); a 0-dimensional shape is
/// only used for the values of a hyperplane slice of a vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shape(Vec<usize>);

impl Shape {
    pub fn new(dims: Vec<usize>) -> Self {
        Shape(dims)
    }

    pub fn dims(&self) -> &[usize] {
        &self.0
    }

    /// Number of axes.
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn check_axis(&self, axis: usize) -> Result<()> {
        if axis == 0 || axis > self.dim() {
            return Err(Error::AxisOutOfRange {
                axis,
                dim: self.dim(),
            });
        }
        Ok(())
    }

    /// Extent along a 1-based axis.
    pub fn extent(&self, axis: usize) -> Result<usize> {
        self.check_axis(axis)?;
        Ok(self.0[axis - 1])
    }

    /// Total number of entries, i.e. the product of all extents.
    pub fn volume(&self) -> Result<usize> {
        self.0
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .ok_or(Error::VolumeOverflow)
    }

    pub fn without_axis(&self, axis: usize) -> Result<Shape> {
        self.check_axis(axis)?;
        let mut dims = self.0.clone();
        dims.remove(axis - 1);
        Ok(Shape(dims))
    }

    /// Insert a new axis of the given extent so that it becomes axis `axis`.
    pub fn with_axis(&self, axis: usize, extent: usize) -> Result<Shape> {
        if axis == 0 || axis > self.dim() + 1 {
            return Err(Error::AxisOutOfRange {
                axis,
                dim: self.dim() + 1,
            });
        }
        let mut dims = self.0.clone();
        dims.insert(axis - 1, extent);
        Ok(Shape(dims))
    }

    fn resized(&self, axis: usize, extent: usize) -> Shape {
        let mut dims = self.0.clone();
        dims[axis - 1] = extent;
        Shape(dims)
    }

    pub fn check_edit_vector(&self, t: &EditVector) -> Result<()> {
        if t.dim() != self.dim() {
            return Err(Error::EditVectorDim {
                got: t.dim(),
                want: self.dim(),
            });
        }
        Ok(())
    }

    /// Shape after `t_i` insertions per axis.
    pub fn grown(&self, t: &EditVector) -> Result<Shape> {
        self.check_edit_vector(t)?;
        Ok(Shape(
            self.0.iter().zip(t.counts()).map(|(&n, &c)| n + c).collect(),
        ))
    }

    /// Shape after `t_i` deletions per axis; fails if some `t_i` exceeds `n_i`.
    pub fn shrunk(&self, t: &EditVector) -> Result<Shape> {
        self.check_edit_vector(t)?;
        let mut dims = Vec::with_capacity(self.dim());
        for (axis0, (&n, &c)) in self.0.iter().zip(t.counts()).enumerate() {
            if c > n {
                return Err(Error::InfeasibleDeletion {
                    axis: axis0 + 1,
                    t: c,
                    extent: n,
                });
            }
            dims.push(n - c);
        }
        Ok(Shape(dims))
    }
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|n| n.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A length-d vector of non-negative per-axis edit counts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EditVector(Vec<usize>);

impl EditVector {
    pub fn new(counts: Vec<usize>) -> Self {
        EditVector(counts)
    }

    pub fn zero(d: usize) -> Self {
        EditVector(vec![0; d])
    }

    /// `e_i`: all zeros with a single 1 at the 1-based axis.
    pub fn unit(axis: usize, d: usize) -> Result<Self> {
        if axis == 0 || axis > d {
            return Err(Error::AxisOutOfRange { axis, dim: d });
        }
        let mut counts = vec![0; d];
        counts[axis - 1] = 1;
        Ok(EditVector(counts))
    }

    /// `t * 1`: the same count on every axis.
    pub fn uniform(t: usize, d: usize) -> Self {
        EditVector(vec![t; d])
    }

    /// A single-axis vector `r * e_axis`.
    pub fn single_axis(axis: usize, r: usize, d: usize) -> Result<Self> {
        if axis == 0 || axis > d {
            return Err(Error::AxisOutOfRange { axis, dim: d });
        }
        let mut counts = vec![0; d];
        counts[axis - 1] = r;
        Ok(EditVector(counts))
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Count for a 1-based axis.
    pub fn get(&self, axis: usize) -> usize {
        self.0[axis - 1]
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Componentwise comparison.
    pub fn le(&self, other: &EditVector) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn plus(&self, other: &EditVector) -> EditVector {
        EditVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; requires `other <= self`.
    pub fn minus(&self, other: &EditVector) -> EditVector {
        EditVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// The vector with the entry at the 1-based `axis` removed, written
    /// `P_axis(t)` for the projection claim.
    pub fn without_axis(&self, axis: usize) -> Result<EditVector> {
        if axis == 0 || axis > self.dim() {
            return Err(Error::AxisOutOfRange {
                axis,
                dim: self.dim(),
            });
        }
        let mut counts = self.0.clone();
        counts.remove(axis - 1);
        Ok(EditVector(counts))
    }
}

impl std::fmt::Display for EditVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|n| n.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl std::str::FromStr for EditVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let counts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidParameter(format!("bad edit vector entry {p:?}")))
            })
            .collect::<Result<Vec<usize>>>()?;
        if counts.is_empty() {
            return Err(Error::InvalidParameter("empty edit vector".into()));
        }
        Ok(EditVector(counts))
    }
}

/// A d-dimensional array over `{0, ..., q-1}` with explicit shape.
///
/// Equality is structural: alphabet, shape and every entry. Arrays of
/// different shapes are never equal, which is what mixed-shape insdel balls
/// rely on. The derived order (alphabet, then shape, then row-major entries)
/// is the "lexicographically least" order used for reproducible witnesses.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NdArray {
    alphabet: Alphabet,
    shape: Shape,
    data: Vec<Symbol>,
}

impl NdArray {
    pub fn new(alphabet: Alphabet, shape: Shape, data: Vec<Symbol>) -> Result<Self> {
        let volume = shape.volume()?;
        if data.len() != volume {
            return Err(Error::WrongVolume {
                got: data.len(),
                want: volume,
            });
        }
        for &s in &data {
            alphabet.check_symbol(s)?;
        }
        Ok(NdArray {
            alphabet,
            shape,
            data,
        })
    }

    /// The all-`symbol` array of the given shape.
    pub fn filled(alphabet: Alphabet, shape: Shape, symbol: Symbol) -> Result<Self> {
        alphabet.check_symbol(symbol)?;
        let volume = shape.volume()?;
        Ok(NdArray {
            alphabet,
            shape,
            data: vec![symbol; volume],
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    pub fn data(&self) -> &[Symbol] {
        &self.data
    }

    /// `(outer, inner)` block counts around a 0-based axis: the storage is
    /// `outer` blocks of `extent * inner` entries, the plane at position `x`
    /// occupying the `x`-th `inner`-chunk of each block.
    fn blocks(&self, axis0: usize) -> (usize, usize) {
        let dims = self.shape.dims();
        let outer = dims[..axis0].iter().product();
        let inner = dims[axis0 + 1..].iter().product();
        (outer, inner)
    }

    /// Entry at 1-based coordinates.
    pub fn get(&self, coords: &[usize]) -> Result<Symbol> {
        if coords.len() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} coordinates for a {}-dimensional array",
                coords.len(),
                self.dim()
            )));
        }
        let mut offset = 0usize;
        for (axis0, (&c, &n)) in coords.iter().zip(self.shape.dims()).enumerate() {
            if c == 0 || c > n {
                return Err(Error::PositionOutOfRange {
                    axis: axis0 + 1,
                    pos: c,
                    max: n,
                });
            }
            offset = offset * n + (c - 1);
        }
        Ok(self.data[offset])
    }

    fn check_pos(&self, axis: usize, pos: usize, max: usize) -> Result<()> {
        if pos == 0 || pos > max {
            return Err(Error::PositionOutOfRange { axis, pos, max });
        }
        Ok(())
    }

    /// Delete the hyperplane at `pos` along `axis` (an `x_axis`-deletion);
    /// higher positions shift down by one and the extent drops by one.
    pub fn delete_hyperplane(&self, axis: usize, pos: usize) -> Result<NdArray> {
        self.shape.check_axis(axis)?;
        let extent = self.shape.extent(axis)?;
        if extent == 0 {
            return Err(Error::EmptyAxis(axis));
        }
        self.check_pos(axis, pos, extent)?;
        let (outer, inner) = self.blocks(axis - 1);
        let mut data = Vec::with_capacity(outer * (extent - 1) * inner);
        for o in 0..outer {
            let base = o * extent * inner;
            for x in 0..extent {
                if x + 1 == pos {
                    continue;
                }
                let start = base + x * inner;
                data.extend_from_slice(&self.data[start..start + inner]);
            }
        }
        NdArray::new(self.alphabet, self.shape.resized(axis, extent - 1), data)
    }

    /// The hyperplane at `pos` along `axis`, as a slice that can be
    /// re-inserted elsewhere.
    pub fn hyperplane(&self, axis: usize, pos: usize) -> Result<HyperplaneSlice> {
        self.shape.check_axis(axis)?;
        let extent = self.shape.extent(axis)?;
        if extent == 0 {
            return Err(Error::EmptyAxis(axis));
        }
        self.check_pos(axis, pos, extent)?;
        let (outer, inner) = self.blocks(axis - 1);
        let mut data = Vec::with_capacity(outer * inner);
        for o in 0..outer {
            let start = o * extent * inner + (pos - 1) * inner;
            data.extend_from_slice(&self.data[start..start + inner]);
        }
        let values = NdArray::new(self.alphabet, self.shape.without_axis(axis)?, data)?;
        Ok(HyperplaneSlice { axis, values })
    }

    /// Insert `slice` so that it becomes the hyperplane at `pos` along
    /// `axis`; `delete_hyperplane(result, axis, pos)` gives back `self`.
    pub fn insert_hyperplane(&self, axis: usize, pos: usize, slice: &HyperplaneSlice) -> Result<NdArray> {
        self.shape.check_axis(axis)?;
        if slice.axis != axis {
            return Err(Error::ShapeMismatch(format!(
                "slice is for axis {}, insertion on axis {axis}",
                slice.axis
            )));
        }
        if slice.values.alphabet != self.alphabet {
            return Err(Error::AlphabetMismatch(
                slice.values.alphabet.size(),
                self.alphabet.size(),
            ));
        }
        let expected = self.shape.without_axis(axis)?;
        if slice.values.shape != expected {
            return Err(Error::ShapeMismatch(format!(
                "slice shape {} does not match {expected}",
                slice.values.shape
            )));
        }
        let extent = self.shape.extent(axis)?;
        self.check_pos(axis, pos, extent + 1)?;
        let (outer, inner) = self.blocks(axis - 1);
        let mut data = Vec::with_capacity(outer * (extent + 1) * inner);
        for o in 0..outer {
            let base = o * extent * inner;
            let slice_start = o * inner;
            for x in 0..=extent {
                if x + 1 == pos {
                    data.extend_from_slice(&slice.values.data[slice_start..slice_start + inner]);
                }
                if x < extent {
                    let start = base + x * inner;
                    data.extend_from_slice(&self.data[start..start + inner]);
                }
            }
        }
        NdArray::new(self.alphabet, self.shape.resized(axis, extent + 1), data)
    }

    /// Project along `axis`: collapse that axis by encoding each fiber as a
    /// single symbol over the alphabet of size `q^extent`. The order of the
    /// remaining axes is preserved.
    pub fn project(&self, axis: usize) -> Result<NdArray> {
        if self.dim() <= 1 {
            return Err(Error::ProjectToScalar(self.dim()));
        }
        self.shape.check_axis(axis)?;
        let extent = self.shape.extent(axis)?;
        if extent == 0 {
            return Err(Error::EmptyAxis(axis));
        }
        let big = self.alphabet.pow(extent)?;
        let q = u128::from(self.alphabet.size());
        let (outer, inner) = self.blocks(axis - 1);
        let mut data = Vec::with_capacity(outer * inner);
        for o in 0..outer {
            let base = o * extent * inner;
            for i in 0..inner {
                let mut sym: u128 = 0;
                let mut weight: u128 = 1;
                for x in 0..extent {
                    sym += u128::from(self.data[base + x * inner + i]) * weight;
                    weight *= q;
                }
                data.push(sym as Symbol);
            }
        }
        NdArray::new(big, self.shape.without_axis(axis)?, data)
    }

    /// Inverse projection (expansion): split each symbol of an array over
    /// `base^extent` into `extent` base-`q` digits along a new `axis`.
    pub fn inverse_project(&self, axis: usize, base: Alphabet, extent: usize) -> Result<NdArray> {
        let expected = base.pow(extent)?;
        if expected != self.alphabet {
            return Err(Error::AlphabetNotPower {
                alphabet: self.alphabet.size(),
                base: base.size(),
                extent,
            });
        }
        let shape = self.shape.with_axis(axis, extent)?;
        let q = base.size();
        let (outer, inner) = {
            let dims = shape.dims();
            let outer: usize = dims[..axis - 1].iter().product();
            let inner: usize = dims[axis..].iter().product();
            (outer, inner)
        };
        let mut data = vec![0; outer * extent * inner];
        for o in 0..outer {
            for i in 0..inner {
                let mut sym = self.data[o * inner + i];
                for x in 0..extent {
                    data[o * extent * inner + x * inner + i] = sym % q;
                    sym /= q;
                }
            }
        }
        NdArray::new(base, shape, data)
    }

    /// Sequential projections along every axis in `axes` (a proper subset of
    /// the axes), applied in descending order so the indices stay valid.
    pub fn project_multi(&self, axes: &[usize]) -> Result<NdArray> {
        let mut sorted = axes.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != axes.len() {
            return Err(Error::InvalidParameter("duplicate axis in projection set".into()));
        }
        for &a in &sorted {
            self.shape.check_axis(a)?;
        }
        if sorted.len() == self.dim() {
            return Err(Error::ProjectAllAxes);
        }
        let mut out = self.clone();
        for &a in sorted.iter().rev() {
            out = out.project(a)?;
        }
        Ok(out)
    }

    /// Undo `project_multi`: re-expand the axes (ascending, paired with their
    /// original extents) over the original `base` alphabet.
    pub fn inverse_project_multi(&self, axes: &[(usize, usize)], base: Alphabet) -> Result<NdArray> {
        let mut out = self.clone();
        for (idx, &(axis, extent)) in axes.iter().enumerate() {
            let mut inner_base = base;
            for &(_, later_extent) in &axes[idx + 1..] {
                inner_base = inner_base.pow(later_extent)?;
            }
            out = out.inverse_project(axis, inner_base, extent)?;
        }
        Ok(out)
    }

    /// Restriction to the given kept positions (1-based, strictly increasing,
    /// one list per axis). This is exactly the result of deleting the
    /// complementary hyperplanes, in any order.
    pub fn restrict(&self, kept: &[Vec<usize>]) -> Result<NdArray> {
        if kept.len() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} position lists for a {}-dimensional array",
                kept.len(),
                self.dim()
            )));
        }
        let dims: Vec<usize> = kept.iter().map(|k| k.len()).collect();
        let shape = Shape::new(dims);
        let volume = shape.volume()?;
        let mut data = Vec::with_capacity(volume);
        if volume > 0 {
            let mut coords = vec![0usize; self.dim()];
            loop {
                let mut offset = 0usize;
                for (axis0, &c) in coords.iter().enumerate() {
                    let pos = kept[axis0][c];
                    self.check_pos(axis0 + 1, pos, self.shape.dims()[axis0])?;
                    offset = offset * self.shape.dims()[axis0] + (pos - 1);
                }
                data.push(self.data[offset]);
                let mut axis0 = self.dim();
                loop {
                    if axis0 == 0 {
                        return NdArray::new(self.alphabet, shape, data);
                    }
                    axis0 -= 1;
                    coords[axis0] += 1;
                    if coords[axis0] < kept[axis0].len() {
                        break;
                    }
                    coords[axis0] = 0;
                }
            }
        }
        NdArray::new(self.alphabet, shape, data)
    }

    /// Rank of this array within the lexicographic enumeration of all arrays
    /// of its alphabet and shape; `None` if it does not fit in a `u128`.
    pub fn rank(&self) -> Option<u128> {
        let q = u128::from(self.alphabet.size());
        let mut rank: u128 = 0;
        for &s in &self.data {
            rank = rank.checked_mul(q)?.checked_add(u128::from(s))?;
        }
        Some(rank)
    }
}

impl std::fmt::Display for NdArray {
    /// Compact one-line rendering `q=2 (3,3) [1 0 0 1 1 1 1 0 1]`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let entries: Vec<String> = self.data.iter().map(|s| s.to_string()).collect();
        write!(f, "q={} {} [{}]", self.alphabet, self.shape, entries.join(" "))
    }
}

/// A (d-1)-dimensional hyperplane tied to the axis it is orthogonal to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HyperplaneSlice {
    axis: usize,
    values: NdArray,
}

impl HyperplaneSlice {
    pub fn new(axis: usize, values: NdArray) -> Self {
        HyperplaneSlice { axis, values }
    }

    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn values(&self) -> &NdArray {
        &self.values
    }
}

/// The set of all arrays of one alphabet and shape, enumerable in
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct Universe {
    alphabet: Alphabet,
    shape: Shape,
}

impl Universe {
    pub fn new(alphabet: Alphabet, shape: Shape) -> Self {
        Universe { alphabet, shape }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// `q^volume`, or an error when it does not fit in a `u128`.
    pub fn count(&self) -> Result<u128> {
        let volume = self.shape.volume()?;
        let q = u128::from(self.alphabet.size());
        let mut count: u128 = 1;
        for _ in 0..volume {
            count = count.checked_mul(q).ok_or(Error::VolumeOverflow)?;
        }
        Ok(count)
    }

    /// The array at the given lexicographic rank.
    pub fn array_at(&self, rank: u128) -> Result<NdArray> {
        let volume = self.shape.volume()?;
        let q = u128::from(self.alphabet.size());
        let mut data = vec![0 as Symbol; volume];
        let mut rest = rank;
        for slot in (0..volume).rev() {
            data[slot] = (rest % q) as Symbol;
            rest /= q;
        }
        if rest != 0 {
            return Err(Error::InvalidParameter(format!(
                "rank {rank} out of range for universe of {} arrays",
                self.count()?
            )));
        }
        NdArray::new(self.alphabet, self.shape.clone(), data)
    }

    pub fn iter(&self) -> UniverseIter {
        UniverseIter {
            universe: self.clone(),
            next: Some(vec![0; self.shape.volume().unwrap_or(0)]),
        }
    }
}

pub struct UniverseIter {
    universe: Universe,
    next: Option<Vec<Symbol>>,
}

impl Iterator for UniverseIter {
    type Item = NdArray;

    fn next(&mut self) -> Option<NdArray> {
        let data = self.next.take()?;
        let item = NdArray {
            alphabet: self.universe.alphabet,
            shape: self.universe.shape.clone(),
            data: data.clone(),
        };
        let q = self.universe.alphabet.size();
        let mut data = data;
        let mut slot = data.len();
        loop {
            if slot == 0 {
                self.next = None;
                break;
            }
            slot -= 1;
            data[slot] += 1;
            if data[slot] < q {
                self.next = Some(data);
                break;
            }
            data[slot] = 0;
        }
        Some(item)
    }
}

/// Call `f` with every size-`k` subset of `{1, ..., n}` in lexicographic
/// order; stops early when `f` returns `false`.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(n: usize, k: usize, start: usize, current: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if current.len() == k {
            return f(current);
        }
        let remaining = k - current.len();
        for v in start..=n.saturating_sub(remaining - 1) {
            current.push(v);
            if !rec(n, k, v + 1, current, f) {
                current.pop();
                return false;
            }
            current.pop();
        }
        true
    }
    if k > n {
        return true;
    }
    let mut current = Vec::with_capacity(k);
    rec(n, k, 1, &mut current, &mut f)
}

/// All size-`k` subsets of `{1, ..., n}` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_subset(n, k, |s| {
        out.push(s.to_vec());
        true
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arr(q: u64, dims: &[usize], data: &[u64]) -> NdArray {
        NdArray::new(Alphabet::new(q).unwrap(), Shape::new(dims.to_vec()), data.to_vec()).unwrap()
    }

    #[test]
    fn delete_shifts_higher_positions_down() {
        // X(1,1)=0 X(1,2)=1 X(2,1)=1 X(2,2)=0
        let x = arr(2, &[2, 2], &[0, 1, 1, 0]);
        let d = x.delete_hyperplane(1, 1).unwrap();
        assert_eq!(d, arr(2, &[1, 2], &[1, 0]));
    }

    #[test]
    fn delete_last_plane_of_a_vector_leaves_an_empty_axis() {
        let x = arr(2, &[1], &[0]);
        let d = x.delete_hyperplane(1, 1).unwrap();
        assert_eq!(d.shape().dims(), &[0]);
        assert!(d.data().is_empty());
        assert!(matches!(d.delete_hyperplane(1, 1), Err(Error::EmptyAxis(1))));
    }

    #[test]
    fn delete_rejects_bad_axis_and_position() {
        let x = arr(2, &[2, 2], &[0, 1, 1, 0]);
        assert!(matches!(
            x.delete_hyperplane(3, 1),
            Err(Error::AxisOutOfRange { axis: 3, dim: 2 })
        ));
        assert!(matches!(
            x.delete_hyperplane(1, 0),
            Err(Error::PositionOutOfRange { .. })
        ));
        assert!(matches!(
            x.delete_hyperplane(1, 3),
            Err(Error::PositionOutOfRange { .. })
        ));
    }

    #[test]
    fn insert_is_the_inverse_of_delete() {
        let x = arr(2, &[1, 2], &[1, 0]);
        let slice = HyperplaneSlice::new(1, arr(2, &[2], &[0, 1]));
        let y = x.insert_hyperplane(1, 1, &slice).unwrap();
        assert_eq!(y, arr(2, &[2, 2], &[0, 1, 1, 0]));
        assert_eq!(y.delete_hyperplane(1, 1).unwrap(), x);
    }

    #[test]
    fn insert_rejects_mismatched_slice() {
        let x = arr(2, &[1, 2], &[1, 0]);
        let wrong_axis = HyperplaneSlice::new(2, arr(2, &[2], &[0, 1]));
        assert!(x.insert_hyperplane(1, 1, &wrong_axis).is_err());
        let wrong_shape = HyperplaneSlice::new(1, arr(2, &[3], &[0, 1, 0]));
        assert!(x.insert_hyperplane(1, 1, &wrong_shape).is_err());
        let slice = HyperplaneSlice::new(1, arr(2, &[2], &[0, 1]));
        assert!(x.insert_hyperplane(1, 3, &slice).is_err());
    }

    #[test]
    fn project_encodes_fibers_least_significant_first() {
        let x = arr(2, &[2, 2], &[0, 1, 1, 0]);
        let p = x.project(2).unwrap();
        assert_eq!(p.alphabet().size(), 4);
        assert_eq!(p.shape().dims(), &[2]);
        // fiber (0,1) -> 0*1 + 1*2 = 2, fiber (1,0) -> 1*1 + 0*2 = 1
        assert_eq!(p.data(), &[2, 1]);
    }

    #[test]
    fn projection_round_trips() {
        let x = arr(3, &[2, 3], &[0, 1, 2, 2, 1, 0]);
        for axis in 1..=2 {
            let p = x.project(axis).unwrap();
            let back = p
                .inverse_project(axis, x.alphabet(), x.shape().extent(axis).unwrap())
                .unwrap();
            assert_eq!(back, x);
        }
    }

    #[test]
    fn project_rejects_vectors_and_empty_axes() {
        let v = arr(2, &[3], &[0, 1, 0]);
        assert!(matches!(v.project(1), Err(Error::ProjectToScalar(1))));
        let e = arr(2, &[0, 2], &[]);
        assert!(matches!(e.project(1), Err(Error::EmptyAxis(1))));
    }

    #[test]
    fn project_multi_empty_set_is_identity() {
        let x = arr(2, &[2, 2], &[0, 1, 1, 0]);
        assert_eq!(x.project_multi(&[]).unwrap(), x);
        assert!(matches!(x.project_multi(&[1, 2]), Err(Error::ProjectAllAxes)));
    }

    #[test]
    fn project_multi_shape_and_alphabet() {
        let x = NdArray::filled(Alphabet::new(2).unwrap(), Shape::new(vec![2, 2, 2]), 1).unwrap();
        let p = x.project_multi(&[1, 2]).unwrap();
        assert_eq!(p.shape().dims(), &[2]);
        assert_eq!(p.alphabet().size(), 16);
        let back = p
            .inverse_project_multi(&[(1, 2), (2, 2)], Alphabet::new(2).unwrap())
            .unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn restrict_matches_sequential_deletion() {
        let x = arr(2, &[3, 3], &[1, 0, 0, 1, 1, 1, 1, 0, 1]);
        let r = x.restrict(&[vec![1, 3], vec![1, 2, 3]]).unwrap();
        let d = x.delete_hyperplane(1, 2).unwrap();
        assert_eq!(r, d);
    }

    #[test]
    fn universe_enumerates_in_rank_order() {
        let u = Universe::new(Alphabet::new(2).unwrap(), Shape::new(vec![2]));
        let all: Vec<NdArray> = u.iter().collect();
        assert_eq!(all.len(), 4);
        for (rank, a) in all.iter().enumerate() {
            assert_eq!(a.rank(), Some(rank as u128));
            assert_eq!(&u.array_at(rank as u128).unwrap(), a);
        }
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn empty_shape_universe_has_one_array() {
        let u = Universe::new(Alphabet::new(2).unwrap(), Shape::new(vec![0, 2]));
        assert_eq!(u.count().unwrap(), 1);
        assert_eq!(u.iter().count(), 1);
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(
            subsets(4, 2),
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
    }
}
