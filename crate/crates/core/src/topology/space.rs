use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::topology::{PointSet, SpaceMap, MAX_POINTS};

/// A finite topological space, stored as its full family of open sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteSpace {
    n: usize,
    /// Sorted, deduplicated, closed under pairwise union and intersection.
    opens: Vec<PointSet>,
}

impl FiniteSpace {
    /// Builds a space from a family of open sets. The empty set and the
    /// whole space are added if missing; duplicates are dropped. The family
    /// must be closed under pairwise unions and intersections.
    pub fn new(n: usize, opens: impl IntoIterator<Item = PointSet>) -> Result<Self> {
        if n > MAX_POINTS {
            return Err(Error::TooManyPoints(n));
        }
        let mut set = BTreeSet::new();
        set.insert(PointSet::empty(n));
        set.insert(PointSet::full(n));
        for o in opens {
            if o.width() != n {
                return Err(Error::WidthMismatch {
                    expected: n,
                    found: o.width(),
                });
            }
            set.insert(o);
        }
        let opens: Vec<PointSet> = set.into_iter().collect();
        let lookup: HashSet<u64> = opens.iter().map(|o| o.bits()).collect();
        for (i, a) in opens.iter().enumerate() {
            for b in &opens[i + 1..] {
                if !lookup.contains(&(a.bits() | b.bits())) {
                    return Err(Error::InvalidTopology(format!(
                        "union of {a} and {b} is not open"
                    )));
                }
                if !lookup.contains(&(a.bits() & b.bits())) {
                    return Err(Error::InvalidTopology(format!(
                        "intersection of {a} and {b} is not open"
                    )));
                }
            }
        }
        Ok(FiniteSpace { n, opens })
    }

    /// Convenience constructor from point lists.
    pub fn from_lists(n: usize, opens: &[&[usize]]) -> Result<Self> {
        let sets = opens
            .iter()
            .map(|o| PointSet::from_points(n, o.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        FiniteSpace::new(n, sets)
    }

    /// The coarsest topology in which every set of `subbase` is open.
    pub fn generated_by(n: usize, subbase: impl IntoIterator<Item = PointSet>) -> Result<Self> {
        if n > 20 {
            return Err(Error::TooManyPoints(n));
        }
        let subbase: Vec<PointSet> = subbase.into_iter().collect();
        if let Some(s) = subbase.iter().find(|s| s.width() != n) {
            return Err(Error::WidthMismatch {
                expected: n,
                found: s.width(),
            });
        }
        // minimal open neighbourhood of each point
        let minimal: Vec<PointSet> = (0..n)
            .map(|x| {
                subbase
                    .iter()
                    .filter(|s| s.contains(x))
                    .fold(PointSet::full(n), |acc, s| acc.intersection(s))
            })
            .collect();
        let opens = PointSet::all_subsets(n)
            .filter(|s| s.iter().all(|x| minimal[x].is_subset(s)))
            .collect::<Vec<_>>();
        Ok(FiniteSpace { n, opens })
    }

    pub fn discrete(n: usize) -> Self {
        assert!(n <= 20, "discrete space on {n} points is too large to materialise");
        FiniteSpace {
            n,
            opens: PointSet::all_subsets(n).collect(),
        }
    }

    pub fn indiscrete(n: usize) -> Self {
        let mut opens = vec![PointSet::empty(n), PointSet::full(n)];
        opens.dedup();
        FiniteSpace { n, opens }
    }

    /// Points `{0, 1}` with `{0}` the only nontrivial open set.
    pub fn sierpinski() -> Self {
        FiniteSpace::from_lists(2, &[&[0]]).expect("valid topology")
    }

    /// Disjoint sum: the points of `other` are shifted by `self.len()`.
    pub fn disjoint_union(&self, other: &FiniteSpace) -> Result<Self> {
        let n = self.n + other.n;
        if n > MAX_POINTS {
            return Err(Error::TooManyPoints(n));
        }
        let mut opens = Vec::with_capacity(self.opens.len() * other.opens.len());
        for a in &self.opens {
            for b in &other.opens {
                opens.push(PointSet::from_bits(n, a.bits() | b.bits() << self.n)?);
            }
        }
        opens.sort();
        Ok(FiniteSpace { n, opens })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::empty(self.n)
    }

    pub fn full_set(&self) -> PointSet {
        PointSet::full(self.n)
    }

    pub fn set(&self, points: &[usize]) -> Result<PointSet> {
        PointSet::from_points(self.n, points.iter().copied())
    }

    pub(crate) fn check(&self, s: &PointSet) -> Result<()> {
        if s.width() == self.n {
            Ok(())
        } else {
            Err(Error::WidthMismatch {
                expected: self.n,
                found: s.width(),
            })
        }
    }

    pub(crate) fn check_point(&self, x: usize) -> Result<()> {
        if x < self.n {
            Ok(())
        } else {
            Err(Error::PointOutOfRange { point: x, n: self.n })
        }
    }

    pub fn is_open(&self, s: &PointSet) -> bool {
        s.width() == self.n && self.opens.binary_search(s).is_ok()
    }

    pub fn is_closed(&self, s: &PointSet) -> bool {
        self.is_open(&s.complement())
    }

    pub fn is_clopen(&self, s: &PointSet) -> bool {
        self.is_open(s) && self.is_closed(s)
    }

    /// Largest open subset of `s`.
    pub fn interior(&self, s: &PointSet) -> Result<PointSet> {
        self.check(s)?;
        Ok(self.interior_unchecked(s))
    }

    pub(crate) fn interior_unchecked(&self, s: &PointSet) -> PointSet {
        self.opens
            .iter()
            .filter(|o| o.is_subset(s))
            .fold(PointSet::empty(self.n), |acc, o| acc.union(o))
    }

    pub fn closure(&self, s: &PointSet) -> Result<PointSet> {
        self.check(s)?;
        Ok(self.closure_unchecked(s))
    }

    pub(crate) fn closure_unchecked(&self, s: &PointSet) -> PointSet {
        self.interior_unchecked(&s.complement()).complement()
    }

    pub fn boundary(&self, s: &PointSet) -> Result<PointSet> {
        Ok(self.closure(s)?.difference(&self.interior(s)?))
    }

    pub fn is_regular_open(&self, s: &PointSet) -> Result<bool> {
        self.check(s)?;
        Ok(self.interior_unchecked(&self.closure_unchecked(s)) == *s)
    }

    pub fn is_regular_closed(&self, s: &PointSet) -> Result<bool> {
        self.check(s)?;
        Ok(self.closure_unchecked(&self.interior_unchecked(s)) == *s)
    }

    fn require_ro(&self, s: &PointSet) -> Result<()> {
        if self.is_regular_open(s)? {
            Ok(())
        } else {
            Err(Error::NotRegularOpen(s.to_vec()))
        }
    }

    fn require_rc(&self, s: &PointSet) -> Result<()> {
        if self.is_regular_closed(s)? {
            Ok(())
        } else {
            Err(Error::NotRegularClosed(s.to_vec()))
        }
    }

    /// `int cl (u ∪ v)`
    pub fn ro_join(&self, u: &PointSet, v: &PointSet) -> Result<PointSet> {
        self.require_ro(u)?;
        self.require_ro(v)?;
        Ok(self.interior_unchecked(&self.closure_unchecked(&u.union(v))))
    }

    pub fn ro_meet(&self, u: &PointSet, v: &PointSet) -> Result<PointSet> {
        self.require_ro(u)?;
        self.require_ro(v)?;
        Ok(u.intersection(v))
    }

    pub fn rc_join(&self, f: &PointSet, g: &PointSet) -> Result<PointSet> {
        self.require_rc(f)?;
        self.require_rc(g)?;
        Ok(f.union(g))
    }

    /// `cl int (f ∩ g)`
    pub fn rc_meet(&self, f: &PointSet, g: &PointSet) -> Result<PointSet> {
        self.require_rc(f)?;
        self.require_rc(g)?;
        Ok(self.closure_unchecked(&self.interior_unchecked(&f.intersection(g))))
    }

    pub fn regular_open_sets(&self) -> Vec<PointSet> {
        self.opens
            .iter()
            .copied()
            .filter(|o| self.interior_unchecked(&self.closure_unchecked(o)) == *o)
            .collect()
    }

    pub fn regular_closed_sets(&self) -> Vec<PointSet> {
        let mut sets: Vec<PointSet> = self
            .regular_open_sets()
            .iter()
            .map(PointSet::complement)
            .collect();
        sets.sort();
        sets
    }

    pub fn clopen_sets(&self) -> Vec<PointSet> {
        self.opens
            .iter()
            .copied()
            .filter(|o| self.is_closed(o))
            .collect()
    }

    /// Smallest open set containing `x`.
    pub fn minimal_neighbourhood(&self, x: usize) -> Result<PointSet> {
        self.check_point(x)?;
        Ok(self
            .opens
            .iter()
            .filter(|o| o.contains(x))
            .fold(self.full_set(), |acc, o| acc.intersection(o)))
    }

    /// Specialization preorder: `x ≤ y` iff `x ∈ cl{y}`.
    pub fn specializes(&self, x: usize, y: usize) -> Result<bool> {
        self.check_point(y)?;
        self.check_point(x)?;
        Ok(self
            .closure_unchecked(&PointSet::singleton(self.n, y))
            .contains(x))
    }

    pub fn is_discrete(&self) -> bool {
        self.opens.len() as u128 == 1u128 << self.n
    }

    /// On a finite space Hausdorff means discrete.
    pub fn is_hausdorff(&self) -> bool {
        self.is_discrete()
    }

    /// Open sets of the subspace `s`, as subsets of the ambient points.
    pub fn relative_opens(&self, s: &PointSet) -> Result<Vec<PointSet>> {
        self.check(s)?;
        let set: BTreeSet<PointSet> = self.opens.iter().map(|o| o.intersection(s)).collect();
        Ok(set.into_iter().collect())
    }

    /// A subset is connected when no relatively open proper nonempty part
    /// of it has a relatively open complement.
    pub fn is_connected_subset(&self, s: &PointSet) -> Result<bool> {
        let rel = self.relative_opens(s)?;
        let lookup: HashSet<u64> = rel.iter().map(|r| r.bits()).collect();
        Ok(!rel.iter().any(|a| {
            !a.is_empty() && a != s && lookup.contains(&s.difference(a).bits())
        }))
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_subset(&self.full_set())
            .expect("full set has matching width")
    }

    /// Connected components, ordered by smallest point.
    ///
    /// Starts from singletons and merges two classes whenever their union is
    /// connected; on a finite space this reaches the components.
    pub fn connected_components(&self) -> Vec<PointSet> {
        let mut classes: Vec<PointSet> = (0..self.n)
            .map(|x| PointSet::singleton(self.n, x))
            .collect();
        'outer: loop {
            for i in 0..classes.len() {
                for j in i + 1..classes.len() {
                    let merged = classes[i].union(&classes[j]);
                    if self
                        .is_connected_subset(&merged)
                        .expect("width checked")
                    {
                        classes[i] = merged;
                        classes.remove(j);
                        continue 'outer;
                    }
                }
            }
            break;
        }
        classes.sort_by_key(|c| c.first());
        classes
    }

    /// Classes of points lying in exactly the same clopen sets.
    pub fn quasicomponents(&self) -> Vec<PointSet> {
        let clopens = self.clopen_sets();
        let mut classes: Vec<PointSet> = Vec::new();
        let mut assigned = PointSet::empty(self.n);
        for x in 0..self.n {
            if assigned.contains(x) {
                continue;
            }
            let class = clopens
                .iter()
                .filter(|c| c.contains(x))
                .fold(self.full_set(), |acc, c| acc.intersection(c));
            assigned = assigned.union(&class);
            classes.push(class);
        }
        classes
    }

    /// Quotient by a partition of the points, with the quotient topology.
    /// Classes are numbered in the given order.
    pub fn quotient(&self, classes: &[PointSet]) -> Result<(FiniteSpace, SpaceMap)> {
        let k = classes.len();
        if k > 20 {
            return Err(Error::TooManyPoints(k));
        }
        let mut assignment = vec![usize::MAX; self.n];
        for (ci, c) in classes.iter().enumerate() {
            self.check(c)?;
            for x in c.iter() {
                if assignment[x] != usize::MAX {
                    return Err(Error::Precondition(format!("point {x} in two classes")));
                }
                assignment[x] = ci;
            }
        }
        if let Some(x) = assignment.iter().position(|&a| a == usize::MAX) {
            return Err(Error::Precondition(format!("point {x} in no class")));
        }
        let opens = PointSet::all_subsets(k)
            .filter(|q| {
                let pre = q
                    .iter()
                    .fold(self.empty_set(), |acc, ci| acc.union(&classes[ci]));
                self.is_open(&pre)
            })
            .collect();
        let quotient = FiniteSpace { n: k, opens };
        let map = SpaceMap::new(self.clone(), quotient.clone(), assignment)?;
        Ok((quotient, map))
    }

    /// Quotient by connected components together with the quotient map.
    pub fn component_quotient(&self) -> (FiniteSpace, SpaceMap) {
        self.quotient(&self.connected_components())
            .expect("components partition the space")
    }

    pub fn quasicomponent_quotient(&self) -> (FiniteSpace, SpaceMap) {
        self.quotient(&self.quasicomponents())
            .expect("quasicomponents partition the space")
    }

    /// Number of open sets containing each point.
    pub fn open_counts(&self) -> Vec<usize> {
        (0..self.n)
            .map(|x| self.opens.iter().filter(|o| o.contains(x)).count())
            .collect()
    }

    /// DOT graph of the specialization preorder: an edge `x -> y` whenever
    /// `x ∈ cl{y}` and `x ≠ y`.
    pub fn specialization_dot(&self) -> String {
        let mut out = String::from("digraph specialization {\n");
        for x in 0..self.n {
            let _ = writeln!(out, "  {x};");
        }
        for y in 0..self.n {
            let cl = self.closure_unchecked(&PointSet::singleton(self.n, y));
            for x in cl.iter().filter(|&x| x != y) {
                let _ = writeln!(out, "  {x} -> {y};");
            }
        }
        out.push_str("}\n");
        out
    }
}
