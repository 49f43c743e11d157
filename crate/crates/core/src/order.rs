//! Finite posets and lattices over element indices `0..n`.
//!
//! Up-sets and down-sets are kept as bitsets twice: once indexed by element
//! and once indexed by position in a linear extension. In extension space
//! the least upper bound of two elements, when it exists, is the first bit
//! of the intersection of their up-sets, so bound search is a word scan.

use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::BitSet;
pub use crate::error::BoundKind;

/// A violated partial-order axiom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PosetViolation {
    Reflexivity(usize),
    /// `a ⪯ b` and `b ⪯ a` with `a != b`.
    Antisymmetry(usize, usize),
    /// `a ⪯ b` and `b ⪯ c` but not `a ⪯ c`.
    Transitivity(usize, usize, usize),
}

#[derive(Debug, Clone)]
pub struct FinitePoset {
    up: Vec<BitSet>,
    down: Vec<BitSet>,
    /// extension[p] is the element at position p of the linear extension.
    extension: Vec<usize>,
    up_ext: Vec<BitSet>,
    down_ext: Vec<BitSet>,
    lower_covers: Vec<Vec<usize>>,
    upper_covers: Vec<Vec<usize>>,
}

impl FinitePoset {
    /// Builds the poset of `le` on `0..n`, checking every axiom exhaustively.
    pub fn from_relation(n: usize, mut le: impl FnMut(usize, usize) -> bool) -> Result<Self, PosetViolation> {
        let mut up = vec![BitSet::new(n); n];
        let mut down = vec![BitSet::new(n); n];
        for (a, row) in up.iter_mut().enumerate() {
            for (b, col) in down.iter_mut().enumerate() {
                if le(a, b) {
                    row.insert(b);
                    col.insert(a);
                }
            }
        }
        for a in 0..n {
            if !up[a].contains(a) {
                return Err(PosetViolation::Reflexivity(a));
            }
            for b in up[a].iter() {
                if b != a && up[b].contains(a) {
                    return Err(PosetViolation::Antisymmetry(a, b));
                }
            }
        }
        // Transitivity over all triples: up[b] ⊆ up[a] whenever a ⪯ b.
        for a in 0..n {
            for b in up[a].iter() {
                if !up[b].is_subset(&up[a]) {
                    let c = up[b].iter().find(|&c| !up[a].contains(c)).unwrap();
                    return Err(PosetViolation::Transitivity(a, b, c));
                }
            }
        }
        Ok(Self::from_sets(up, down))
    }

    fn from_sets(up: Vec<BitSet>, down: Vec<BitSet>) -> Self {
        let n = up.len();
        // a < b implies |down(a)| < |down(b)|, so sorting by down-set size
        // gives a linear extension.
        let down_sizes: Vec<usize> = down.iter().map(BitSet::count).collect();
        let mut extension: Vec<usize> = (0..n).collect();
        extension.sort_by_key(|&x| (down_sizes[x], x));
        let mut position = vec![0; n];
        for (p, &x) in extension.iter().enumerate() {
            position[x] = p;
        }
        let relabel = |set: &BitSet| {
            let mut out = BitSet::new(n);
            for x in set.iter() {
                out.insert(position[x]);
            }
            out
        };
        let up_ext: Vec<BitSet> = up.iter().map(relabel).collect();
        let down_ext: Vec<BitSet> = down.iter().map(relabel).collect();

        // b covers a iff a < b and nothing lies strictly between them,
        // i.e. up(a) ∩ down(b) = {a, b}.
        let mut lower_covers = vec![Vec::new(); n];
        let mut upper_covers = vec![Vec::new(); n];
        for a in 0..n {
            for b in up[a].iter() {
                if b != a && up[a].intersection(&down[b]).count() == 2 {
                    upper_covers[a].push(b);
                    lower_covers[b].push(a);
                }
            }
        }
        FinitePoset { up, down, extension, up_ext, down_ext, lower_covers, upper_covers }
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    #[inline]
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    pub fn upper_set(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.up[a].iter()
    }

    pub fn lower_set(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.down[a].iter()
    }

    pub fn lower_covers(&self, a: usize) -> &[usize] {
        &self.lower_covers[a]
    }

    pub fn upper_covers(&self, a: usize) -> &[usize] {
        &self.upper_covers[a]
    }

    /// Cover pairs `(lower, upper)` sorted lexicographically.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .upper_covers
            .iter()
            .enumerate()
            .flat_map(|(a, ups)| ups.iter().map(move |&b| (a, b)))
            .collect();
        edges.sort_unstable();
        edges
    }

    /// Elements sorted so that every element precedes the ones above it.
    pub fn linear_extension(&self) -> &[usize] {
        &self.extension
    }

    /// The least element, if any.
    pub fn bottom(&self) -> Option<usize> {
        let candidate = *self.extension.first()?;
        (self.up[candidate].count() == self.len()).then_some(candidate)
    }

    /// The greatest element, if any.
    pub fn top(&self) -> Option<usize> {
        let candidate = *self.extension.last()?;
        (self.down[candidate].count() == self.len()).then_some(candidate)
    }

    /// `[lo, hi]`, or `None` when `lo ⪯ hi` fails.
    pub fn interval(&self, lo: usize, hi: usize) -> Option<Vec<usize>> {
        self.le(lo, hi).then(|| self.up[lo].intersection(&self.down[hi]).iter().collect())
    }

    /// The first incomparable pair `(a, b)` with `a < b` as indices.
    pub fn incomparable_pair(&self) -> Option<(usize, usize)> {
        (0..self.len()).find_map(|a| ((a + 1)..self.len()).find(|&b| !self.comparable(a, b)).map(|b| (a, b)))
    }

    /// Elements with exactly one lower cover.
    pub fn single_lower_cover_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.lower_covers[x].len() == 1).collect()
    }

    /// Least upper bound, or `None` when there is none or several minimal ones.
    pub fn least_upper_bound(&self, a: usize, b: usize) -> Option<usize> {
        let p = self.up_ext[a].first_common(&self.up_ext[b])?;
        let t = self.extension[p];
        self.up_ext[a].intersection_equals(&self.up_ext[b], &self.up_ext[t]).then_some(t)
    }

    pub fn greatest_lower_bound(&self, a: usize, b: usize) -> Option<usize> {
        let p = self.down_ext[a].last_common(&self.down_ext[b])?;
        let t = self.extension[p];
        self.down_ext[a].intersection_equals(&self.down_ext[b], &self.down_ext[t]).then_some(t)
    }

    /// Minimal common upper bounds (or maximal common lower bounds).
    pub fn extremal_bounds(&self, a: usize, b: usize, kind: BoundKind) -> Vec<usize> {
        match kind {
            BoundKind::Upper => {
                let common = self.up[a].intersection(&self.up[b]);
                common.iter().filter(|&t| self.down[t].intersection(&common).count() == 1).collect()
            }
            BoundKind::Lower => {
                let common = self.down[a].intersection(&self.down[b]);
                common.iter().filter(|&t| self.up[t].intersection(&common).count() == 1).collect()
            }
        }
    }

    /// The subposet induced on `elements`, re-indexed by their order in the slice.
    pub fn subposet(&self, elements: &[usize]) -> FinitePoset {
        FinitePoset::from_relation(elements.len(), |i, j| self.le(elements[i], elements[j]))
            .expect("an induced subrelation of a partial order is a partial order")
    }
}

/// A pair lacking a unique least upper or greatest lower bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeFailure {
    pub left: usize,
    pub right: usize,
    pub bound: BoundKind,
    pub candidates: Vec<usize>,
}

/// The two five-element lattices whose absence characterizes distributivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForbiddenShape {
    /// The pentagon: `bottom < a < b < top`, with `c` incomparable to `a` and `b`.
    N5,
    /// The diamond: three pairwise incomparable middle elements.
    M3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForbiddenSublattice {
    pub shape: ForbiddenShape,
    pub bottom: usize,
    /// For N5: `[a, b, c]` with `a < b`. For M3: the three atoms.
    pub middle: [usize; 3],
    pub top: usize,
}

impl ForbiddenSublattice {
    pub fn elements(&self) -> [usize; 5] {
        [self.bottom, self.middle[0], self.middle[1], self.middle[2], self.top]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributivityReport {
    pub distributive: bool,
    /// `(x, y, z)` with `x ∧ (y ∨ z) != (x ∧ y) ∨ (x ∧ z)`.
    pub witness: Option<[usize; 3]>,
    pub sublattice_witness: Option<ForbiddenSublattice>,
}

#[derive(Debug, Clone)]
pub struct FiniteLattice {
    poset: FinitePoset,
    meet: Vec<u32>,
    join: Vec<u32>,
    bottom: usize,
    top: usize,
}

impl FiniteLattice {
    /// Computes meet and join tables, failing on the first pair (in index
    /// order) without a unique bound.
    pub fn from_poset(poset: FinitePoset) -> Result<Self, LatticeFailure> {
        let n = poset.len();
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for a in 0..n {
            for b in a..n {
                let j = poset.least_upper_bound(a, b).ok_or_else(|| LatticeFailure {
                    left: a,
                    right: b,
                    bound: BoundKind::Upper,
                    candidates: poset.extremal_bounds(a, b, BoundKind::Upper),
                })?;
                let m = poset.greatest_lower_bound(a, b).ok_or_else(|| LatticeFailure {
                    left: a,
                    right: b,
                    bound: BoundKind::Lower,
                    candidates: poset.extremal_bounds(a, b, BoundKind::Lower),
                })?;
                join[a * n + b] = j as u32;
                join[b * n + a] = j as u32;
                meet[a * n + b] = m as u32;
                meet[b * n + a] = m as u32;
            }
        }
        // Every pair has bounds, so a non-empty poset has a bottom and a top.
        let bottom = poset.bottom().expect("finite lattice has a bottom");
        let top = poset.top().expect("finite lattice has a top");
        Ok(FiniteLattice { poset, meet, join, bottom, top })
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b] as usize
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b] as usize
    }

    /// Join of all `items`; the bottom for an empty iterator.
    pub fn join_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Join-irreducibles as the elements with exactly one lower cover.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        self.poset.single_lower_cover_elements()
    }

    /// Join-irreducibles from the definition: `j != 0` and `x ∨ y = j`
    /// implies `x = j` or `y = j`.
    pub fn join_irreducibles_algebraic(&self) -> Vec<usize> {
        let n = self.len();
        let mut reducible = vec![false; n];
        reducible[self.bottom] = true;
        for x in 0..n {
            for y in (x + 1)..n {
                let j = self.join(x, y);
                if j != x && j != y {
                    reducible[j] = true;
                }
            }
        }
        (0..n).filter(|&j| !reducible[j]).collect()
    }

    /// Exhaustive check of `x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)` over all triples.
    ///
    /// On failure the sublattice generated by the failing triple is searched
    /// for an N5 or M3.
    pub fn check_distributive(&self) -> DistributivityReport {
        let n = self.len();
        for x in 0..n {
            let meet_row = &self.meet[x * n..(x + 1) * n];
            for y in 0..n {
                let xy = meet_row[y] as usize;
                let join_xy = &self.join[xy * n..(xy + 1) * n];
                for z in (y + 1)..n {
                    let lhs = meet_row[self.join[y * n + z] as usize];
                    let rhs = join_xy[meet_row[z] as usize];
                    if lhs != rhs {
                        let generated = self.generated_sublattice(&[x, y, z]);
                        return DistributivityReport {
                            distributive: false,
                            witness: Some([x, y, z]),
                            sublattice_witness: self.find_forbidden(&generated),
                        };
                    }
                }
            }
        }
        DistributivityReport { distributive: true, witness: None, sublattice_witness: None }
    }

    /// Closure of `seeds` under meet and join, sorted by index.
    pub fn generated_sublattice(&self, seeds: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.len()];
        let mut members: Vec<usize> = Vec::new();
        for &s in seeds {
            if !inside[s] {
                inside[s] = true;
                members.push(s);
            }
        }
        let mut changed = true;
        while changed {
            changed = false;
            let snapshot = members.clone();
            for (i, &a) in snapshot.iter().enumerate() {
                for &b in &snapshot[i + 1..] {
                    for t in [self.meet(a, b), self.join(a, b)] {
                        if !inside[t] {
                            inside[t] = true;
                            members.push(t);
                            changed = true;
                        }
                    }
                }
            }
        }
        members.sort_unstable();
        members
    }

    /// Searches `within` for five elements forming an N5 or M3 sublattice
    /// (closed under this lattice's meet and join).
    pub fn find_forbidden(&self, within: &[usize]) -> Option<ForbiddenSublattice> {
        let p = &self.poset;
        for &a in within {
            for &b in within {
                if !p.lt(a, b) {
                    continue;
                }
                for &c in within {
                    if p.comparable(a, c) || p.comparable(b, c) {
                        continue;
                    }
                    let (top, bottom) = (self.join(a, c), self.meet(a, c));
                    if self.join(b, c) == top && self.meet(b, c) == bottom {
                        return Some(ForbiddenSublattice { shape: ForbiddenShape::N5, bottom, middle: [a, b, c], top });
                    }
                }
            }
        }
        for (i, &a) in within.iter().enumerate() {
            for (j, &b) in within.iter().enumerate().skip(i + 1) {
                if p.comparable(a, b) {
                    continue;
                }
                let (top, bottom) = (self.join(a, b), self.meet(a, b));
                for &c in &within[j + 1..] {
                    if p.comparable(a, c) || p.comparable(b, c) {
                        continue;
                    }
                    if [self.join(a, c), self.join(b, c)] == [top; 2]
                        && [self.meet(a, c), self.meet(b, c)] == [bottom; 2]
                    {
                        return Some(ForbiddenSublattice { shape: ForbiddenShape::M3, bottom, middle: [a, b, c], top });
                    }
                }
            }
        }
        None
    }

    /// Maximal elements of `{j ∈ irreducibles : j ⪯ x}`, sorted by index.
    pub fn maximal_irreducibles_below(&self, x: usize, irreducibles: &[usize]) -> Vec<usize> {
        let below: Vec<usize> = irreducibles.iter().copied().filter(|&j| self.poset.le(j, x)).collect();
        below
            .iter()
            .copied()
            .filter(|&j| !below.iter().any(|&k| self.poset.lt(j, k)))
            .collect()
    }
}
