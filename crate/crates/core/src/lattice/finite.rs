use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::{FnFamily, ValueGrid};
use crate::topology::{FiniteSpace, PointSet};

/// Where a lattice's elements come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Provenance {
    /// Regularly open sets.
    Ro,
    /// Regularly closed sets.
    Rc,
    /// Zero-set closures `ρ(f)` of a function family.
    Theta,
    /// Support interiors `σ(f)` of a function family.
    Sigma,
    /// Given by operation tables only.
    Abstract,
}

impl Provenance {
    pub fn is_set_based(&self) -> bool {
        !matches!(self, Provenance::Abstract)
    }
}

/// A bounded finite lattice with explicit join and meet tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    provenance: Provenance,
    /// Underlying sets for set-based provenance, sorted; empty for abstract
    /// lattices.
    sets: Vec<PointSet>,
    size: usize,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl FiniteLattice {
    /// Builds an abstract lattice from square operation tables, checking the
    /// lattice axioms and boundedness. Distributivity is not required here.
    pub fn from_tables(join: Vec<Vec<usize>>, meet: Vec<Vec<usize>>) -> Result<Self> {
        let m = join.len();
        if m == 0 {
            return Err(Error::InvalidLattice("no elements".into()));
        }
        if meet.len() != m || join.iter().chain(&meet).any(|row| row.len() != m) {
            return Err(Error::InvalidLattice("tables are not square of equal size".into()));
        }
        if join.iter().chain(&meet).flatten().any(|&v| v >= m) {
            return Err(Error::InvalidLattice("table entry out of range".into()));
        }
        let flat = |t: Vec<Vec<usize>>| t.into_iter().flatten().collect::<Vec<_>>();
        Self::from_flat(Provenance::Abstract, Vec::new(), m, flat(join), flat(meet))
    }

    fn from_flat(
        provenance: Provenance,
        sets: Vec<PointSet>,
        size: usize,
        join: Vec<usize>,
        meet: Vec<usize>,
    ) -> Result<Self> {
        let mut lattice = FiniteLattice {
            provenance,
            sets,
            size,
            join,
            meet,
            bottom: 0,
            top: 0,
        };
        lattice.check_axioms().map_err(Error::InvalidLattice)?;
        let m = size;
        lattice.bottom = (0..m)
            .find(|&b| (0..m).all(|a| lattice.join(b, a) == a))
            .ok_or_else(|| Error::InvalidLattice("no bottom element".into()))?;
        lattice.top = (0..m)
            .find(|&t| (0..m).all(|a| lattice.meet(t, a) == a))
            .ok_or_else(|| Error::InvalidLattice("no top element".into()))?;
        Ok(lattice)
    }

    /// Lattice of the given sets under the given operations. The family must
    /// be closed under both operations, and the result must be distributive.
    pub fn from_sets(
        provenance: Provenance,
        sets: impl IntoIterator<Item = PointSet>,
        join: impl Fn(&PointSet, &PointSet) -> Result<PointSet>,
        meet: impl Fn(&PointSet, &PointSet) -> Result<PointSet>,
    ) -> Result<Self> {
        let sets: Vec<PointSet> = sets.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let m = sets.len();
        let lookup = |s: PointSet| {
            sets.binary_search(&s)
                .map_err(|_| Error::InvalidLattice(format!("family not closed: {s} missing")))
        };
        let mut jt = Vec::with_capacity(m * m);
        let mut mt = Vec::with_capacity(m * m);
        for a in &sets {
            for b in &sets {
                jt.push(lookup(join(a, b)?)?);
                mt.push(lookup(meet(a, b)?)?);
            }
        }
        let lattice = Self::from_flat(provenance, sets, m, jt, mt)?;
        if !lattice.is_distributive() {
            return Err(Error::NotDistributive);
        }
        Ok(lattice)
    }

    /// All regularly open sets with `U ∨ V = int cl (U ∪ V)`, `U ∧ V = U ∩ V`.
    pub fn from_ro(space: &FiniteSpace) -> Self {
        Self::from_sets(
            Provenance::Ro,
            space.regular_open_sets(),
            |a, b| space.ro_join(a, b),
            |a, b| space.ro_meet(a, b),
        )
        .expect("regular open sets form a distributive lattice")
    }

    /// All regularly closed sets with `F ∨ G = F ∪ G`, `F ∧ G = cl int (F ∩ G)`.
    pub fn from_rc(space: &FiniteSpace) -> Self {
        Self::from_sets(
            Provenance::Rc,
            space.regular_closed_sets(),
            |a, b| space.rc_join(a, b),
            |a, b| space.rc_meet(a, b),
        )
        .expect("regular closed sets form a distributive lattice")
    }

    /// `{σ(f) : f ∈ family}` under the regular-open operations.
    pub fn sigma_of_family(family: &FnFamily) -> Result<Self> {
        let space = family.space();
        Self::from_sets(
            Provenance::Sigma,
            family.functions().iter().map(|f| f.sigma()),
            |a, b| space.ro_join(a, b),
            |a, b| space.ro_meet(a, b),
        )
    }

    /// `Θ = {ρ(f) : f ∈ family}` under the regular-closed operations.
    pub fn theta_of_family(family: &FnFamily) -> Result<Self> {
        let space = family.space();
        Self::from_sets(
            Provenance::Theta,
            family.functions().iter().map(|f| f.rho()),
            |a, b| space.rc_join(a, b),
            |a, b| space.rc_meet(a, b),
        )
    }

    /// The chain `0 < 1 < … < k-1`.
    pub fn chain(k: usize) -> Self {
        let join = (0..k).map(|a| (0..k).map(|b| a.max(b)).collect()).collect();
        let meet = (0..k).map(|a| (0..k).map(|b| a.min(b)).collect()).collect();
        Self::from_tables(join, meet).expect("chains are lattices")
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size + b]
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size + b]
    }

    /// Lattice order: `a ≤ b` iff `a ∧ b = a`.
    #[inline]
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.meet(a, b) == a
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Underlying sets (empty for abstract lattices).
    pub fn sets(&self) -> &[PointSet] {
        &self.sets
    }

    pub fn set(&self, a: usize) -> Option<&PointSet> {
        self.sets.get(a)
    }

    pub fn index_of_set(&self, s: &PointSet) -> Option<usize> {
        self.sets.binary_search(s).ok()
    }

    fn check_axioms(&self) -> std::result::Result<(), String> {
        let m = self.size;
        for a in 0..m {
            if self.join(a, a) != a || self.meet(a, a) != a {
                return Err(format!("idempotence fails at {a}"));
            }
            for b in 0..m {
                if self.join(a, b) != self.join(b, a) || self.meet(a, b) != self.meet(b, a) {
                    return Err(format!("commutativity fails at ({a},{b})"));
                }
                if self.join(a, self.meet(a, b)) != a || self.meet(a, self.join(a, b)) != a {
                    return Err(format!("absorption fails at ({a},{b})"));
                }
                if (self.meet(a, b) == a) != (self.join(a, b) == b) {
                    return Err(format!("order from meet and join disagree at ({a},{b})"));
                }
                for c in 0..m {
                    if self.join(a, self.join(b, c)) != self.join(self.join(a, b), c)
                        || self.meet(a, self.meet(b, c)) != self.meet(self.meet(a, b), c)
                    {
                        return Err(format!("associativity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Both distributive laws on every triple.
    pub fn is_distributive(&self) -> bool {
        self.distributivity_violation().is_none()
    }

    pub fn distributivity_violation(&self) -> Option<(usize, usize, usize)> {
        let m = self.size;
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let l1 = self.meet(a, self.join(b, c));
                    let r1 = self.join(self.meet(a, b), self.meet(a, c));
                    let l2 = self.join(a, self.meet(b, c));
                    let r2 = self.meet(self.join(a, b), self.join(a, c));
                    if l1 != r1 || l2 != r2 {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// First triple violating absorption or distributivity, if any.
    pub fn law_violation(&self) -> Option<(usize, usize, usize)> {
        let m = self.size;
        for a in 0..m {
            for b in 0..m {
                if self.join(a, self.meet(a, b)) != a || self.meet(a, self.join(a, b)) != a {
                    return Some((a, b, b));
                }
            }
        }
        self.distributivity_violation()
    }

    /// For set-based lattices: whether the lattice order is set inclusion.
    pub fn order_is_inclusion(&self) -> bool {
        if !self.provenance.is_set_based() {
            return false;
        }
        (0..self.size).all(|a| {
            (0..self.size).all(|b| self.le(a, b) == self.sets[a].is_subset(&self.sets[b]))
        })
    }

    /// Whether `self` is a sublattice of `other`: every set is present there
    /// and the operations agree.
    pub fn is_sublattice_of(&self, other: &FiniteLattice) -> bool {
        let Some(map) = self
            .sets
            .iter()
            .map(|s| other.index_of_set(s))
            .collect::<Option<Vec<_>>>()
        else {
            return false;
        };
        (0..self.size).all(|a| {
            (0..self.size).all(|b| {
                map[self.join(a, b)] == other.join(map[a], map[b])
                    && map[self.meet(a, b)] == other.meet(map[a], map[b])
            })
        })
    }

    /// Elements covering `a`.
    pub fn covers(&self, a: usize) -> Vec<usize> {
        (0..self.size)
            .filter(|&b| b != a && self.le(a, b))
            .filter(|&b| {
                !(0..self.size).any(|c| c != a && c != b && self.le(a, c) && self.le(c, b))
            })
            .collect()
    }

    pub fn atoms(&self) -> Vec<usize> {
        self.covers(self.bottom)
    }

    fn label(&self, a: usize) -> String {
        match self.sets.get(a) {
            Some(s) => s.to_string(),
            None => a.to_string(),
        }
    }

    /// DOT rendering of the Hasse diagram (edges point upward).
    pub fn hasse_dot(&self) -> String {
        let mut out = String::from("digraph lattice {\n  rankdir=BT;\n");
        for a in 0..self.size {
            let _ = writeln!(out, "  {a} [label=\"{}\"];", self.label(a));
        }
        for a in 0..self.size {
            for b in self.covers(a) {
                let _ = writeln!(out, "  {a} -> {b};");
            }
        }
        out.push_str("}\n");
        out
    }

    /// `{"elements": [...], "join": [[...]], "meet": [[...]]}`; set-based
    /// elements are point lists, abstract ones their indices.
    pub fn to_json(&self) -> serde_json::Value {
        let elements: Vec<serde_json::Value> = (0..self.size)
            .map(|a| match self.sets.get(a) {
                Some(s) => serde_json::json!(s.to_vec()),
                None => serde_json::json!(a),
            })
            .collect();
        let table = |t: &[usize]| -> Vec<Vec<usize>> {
            t.chunks(self.size.max(1)).map(|r| r.to_vec()).collect()
        };
        serde_json::json!({
            "provenance": self.provenance,
            "elements": elements,
            "join": table(&self.join),
            "meet": table(&self.meet),
            "bottom": self.bottom,
            "top": self.top,
        })
    }
}

/// `Θ(X)` for the grid family on `space`.
pub fn theta_lattice(space: &FiniteSpace, grid: &ValueGrid) -> Result<FiniteLattice> {
    FiniteLattice::theta_of_family(&grid_family(space, grid)?)
}

/// `{σ(f)}` for the grid family on `space`.
pub fn sigma_lattice(space: &FiniteSpace, grid: &ValueGrid) -> Result<FiniteLattice> {
    FiniteLattice::sigma_of_family(&grid_family(space, grid)?)
}

fn grid_family(space: &FiniteSpace, grid: &ValueGrid) -> Result<FnFamily> {
    if grid.len() < 2 {
        return Err(Error::InvalidGrid("at least one nonzero value is required".into()));
    }
    FnFamily::from_grid(std::sync::Arc::new(space.clone()), grid.clone())
}

/// Every lattice whose elements are `0..m`, with `0` the bottom, `m-1` the
/// top, and the order extending the natural order of indices. Every finite
/// lattice of size `m` is isomorphic to at least one of these.
pub fn small_lattices(m: usize) -> Vec<FiniteLattice> {
    if m == 0 {
        return Vec::new();
    }
    if m == 1 {
        return vec![FiniteLattice::from_tables(vec![vec![0]], vec![vec![0]]).expect("trivial lattice")];
    }
    let inner: Vec<(usize, usize)> = (1..m - 1)
        .flat_map(|i| (i + 1..m - 1).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for code in 0u64..(1 << inner.len()) {
        let mut le = vec![vec![false; m]; m];
        for (a, row) in le.iter_mut().enumerate() {
            row[a] = true;
            row[m - 1] = true;
        }
        for row in le.iter_mut() {
            row[0] = false;
        }
        le[0].fill(true);
        for (k, &(i, j)) in inner.iter().enumerate() {
            if code >> k & 1 == 1 {
                le[i][j] = true;
            }
        }
        let transitive = (0..m).all(|a| {
            (0..m).all(|b| !le[a][b] || (0..m).all(|c| !le[b][c] || le[a][c]))
        });
        if !transitive {
            continue;
        }
        let bound = |a: usize, b: usize, upper: bool| -> Option<usize> {
            let cands: Vec<usize> = (0..m)
                .filter(|&c| if upper { le[a][c] && le[b][c] } else { le[c][a] && le[c][b] })
                .collect();
            cands.iter().copied().find(|&c| {
                cands
                    .iter()
                    .all(|&d| if upper { le[c][d] } else { le[d][c] })
            })
        };
        let mut join = vec![vec![0; m]; m];
        let mut meet = vec![vec![0; m]; m];
        let mut ok = true;
        'fill: for a in 0..m {
            for b in 0..m {
                match (bound(a, b, true), bound(a, b, false)) {
                    (Some(j), Some(mt)) => {
                        join[a][b] = j;
                        meet[a][b] = mt;
                    }
                    _ => {
                        ok = false;
                        break 'fill;
                    }
                }
            }
        }
        if ok {
            out.push(FiniteLattice::from_tables(join, meet).expect("order-derived tables form a lattice"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ro_rc_examples() {
        let d3 = FiniteSpace::discrete(3);
        assert_eq!(FiniteLattice::from_ro(&d3).len(), 8);
        assert_eq!(FiniteLattice::from_rc(&d3).len(), 8);
        let sp = FiniteSpace::sierpinski();
        let ro = FiniteLattice::from_ro(&sp);
        assert_eq!(ro.sets(), &[sp.empty_set(), sp.full_set()]);
        assert_eq!(FiniteLattice::from_rc(&sp).sets(), &[sp.empty_set(), sp.full_set()]);
        assert_eq!(FiniteLattice::from_ro(&FiniteSpace::discrete(1)).len(), 2);
        assert!(ro.order_is_inclusion());
    }

    #[test]
    fn theta_examples() {
        let d3 = FiniteSpace::discrete(3);
        let theta = theta_lattice(&d3, &ValueGrid::binary()).unwrap();
        assert_eq!(theta.sets().to_vec(), PointSet::all_subsets(3).collect::<Vec<_>>());
        let sp = FiniteSpace::sierpinski();
        let g = ValueGrid::from_ints(&[-1, 0, 5]).unwrap();
        assert_eq!(theta_lattice(&sp, &g).unwrap().len(), 2);
        assert_eq!(theta_lattice(&FiniteSpace::discrete(1), &g).unwrap().len(), 2);
        let only_zero = ValueGrid::from_ints(&[0]).unwrap();
        assert!(matches!(theta_lattice(&d3, &only_zero), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn theta_is_sublattice_of_rc_and_dual_to_sigma() {
        let g = ValueGrid::from_ints(&[0, 1, 2]).unwrap();
        for space in crate::topology::small_spaces(4).unwrap() {
            let theta = theta_lattice(&space, &g).unwrap();
            let sigma = sigma_lattice(&space, &g).unwrap();
            assert!(theta.is_sublattice_of(&FiniteLattice::from_rc(&space)));
            assert!(sigma.is_sublattice_of(&FiniteLattice::from_ro(&space)));
            let mut dual: Vec<PointSet> = sigma.sets().iter().map(|s| s.complement()).collect();
            dual.sort();
            assert_eq!(theta.sets(), dual.as_slice());
            // grid independence once a nonzero value is present
            let g2 = ValueGrid::from_ints(&[-3, 0]).unwrap();
            assert_eq!(theta_lattice(&space, &g2).unwrap(), theta);
            assert_eq!(theta.sets(), space.clopen_sets().as_slice());
        }
    }

    #[test]
    fn table_validation() {
        assert!(FiniteLattice::from_tables(vec![vec![0, 1], vec![1, 1]], vec![vec![0, 0], vec![0, 0]]).is_err());
        let chain = FiniteLattice::chain(3);
        assert_eq!((chain.bottom(), chain.top()), (0, 2));
        assert!(chain.is_distributive());
        assert_eq!(chain.atoms(), vec![1]);
    }

    #[test]
    fn small_lattice_census() {
        // sizes 1..=5 contain (up to isomorphism) 1, 1, 1, 2, 5 lattices;
        // the labelled enumeration may repeat shapes but must include the
        // two non-distributive ones at size five
        for m in 1..=5 {
            assert!(!small_lattices(m).is_empty());
        }
        assert_eq!(small_lattices(4).len(), 2);
        let five = small_lattices(5);
        assert!(five.iter().filter(|l| !l.is_distributive()).count() >= 2);
    }
}
