use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::lattice::{Filter, FiniteLattice};
use crate::topology::{FiniteSpace, PointSet, MAX_POINTS};

/// Which basic open sets topologize a set of filters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseKind {
    /// `U_a = {F : a ∉ F}`
    Excluding,
    /// `V_a = {F : a ∈ F}`, the Zariski-style base; only for comparison.
    Zariski,
}

/// A set of filters of a lattice with the topology generated by a base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumSpace {
    carrier: Vec<Filter>,
    base: Vec<PointSet>,
    topology: FiniteSpace,
}

impl SpectrumSpace {
    /// Topologizes `carrier` (filters of `lattice`) by the given base,
    /// closing it under unions and then intersections.
    pub fn new(lattice: &FiniteLattice, carrier: Vec<Filter>, kind: BaseKind) -> Result<Self> {
        let k = carrier.len();
        if k > MAX_POINTS {
            return Err(Error::TooManyPoints(k));
        }
        let base: Vec<PointSet> = (0..lattice.len())
            .map(|a| {
                PointSet::from_points(
                    k,
                    (0..k).filter(|&i| match kind {
                        BaseKind::Excluding => !carrier[i].contains(a),
                        BaseKind::Zariski => carrier[i].contains(a),
                    }),
                )
            })
            .collect::<Result<_>>()?;
        let mut family: BTreeSet<PointSet> = base.iter().copied().collect();
        family.insert(PointSet::empty(k));
        family.insert(PointSet::full(k));
        close_under(&mut family, |a, b| a.union(b));
        close_under(&mut family, |a, b| a.intersection(b));
        let topology = FiniteSpace::new(k, family)?;
        Ok(SpectrumSpace {
            carrier,
            base,
            topology,
        })
    }

    pub fn carrier(&self) -> &[Filter] {
        &self.carrier
    }

    pub fn topology(&self) -> &FiniteSpace {
        &self.topology
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    /// Basic open set of element `a`.
    pub fn base_set(&self, a: usize) -> PointSet {
        self.base[a]
    }

    pub fn position(&self, f: &Filter) -> Option<usize> {
        self.carrier.iter().position(|c| c == f)
    }

    /// Pairs `(a, b)` with `U_a ∩ U_b ≠ U_{a∨b}`.
    pub fn base_identity_violations(&self, lattice: &FiniteLattice) -> Vec<(usize, usize)> {
        let m = lattice.len();
        let mut out = Vec::new();
        for a in 0..m {
            for b in 0..m {
                if self.base[a].intersection(&self.base[b]) != self.base[lattice.join(a, b)] {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

fn close_under(family: &mut BTreeSet<PointSet>, op: impl Fn(&PointSet, &PointSet) -> PointSet) {
    loop {
        let items: Vec<PointSet> = family.iter().copied().collect();
        let before = family.len();
        for (i, a) in items.iter().enumerate() {
            for b in &items[i + 1..] {
                family.insert(op(a, b));
            }
        }
        if family.len() == before {
            return;
        }
    }
}

fn require_distributive(lattice: &FiniteLattice) -> Result<()> {
    if lattice.is_distributive() {
        Ok(())
    } else {
        Err(Error::NotDistributive)
    }
}

/// Prime filters with the topology generated by `U_a = {F : a ∉ F}`.
pub fn spectrum(lattice: &FiniteLattice) -> Result<SpectrumSpace> {
    require_distributive(lattice)?;
    SpectrumSpace::new(lattice, lattice.all_prime_filters(), BaseKind::Excluding)
}

/// Ultrafilters with the subspace topology of the spectrum.
pub fn ult_space(lattice: &FiniteLattice) -> Result<SpectrumSpace> {
    require_distributive(lattice)?;
    SpectrumSpace::new(lattice, lattice.all_ultrafilters(), BaseKind::Excluding)
}

/// Prime filters with the Zariski-style base `V_a = {F : a ∈ F}`.
pub fn zariski_spectrum(lattice: &FiniteLattice) -> Result<SpectrumSpace> {
    require_distributive(lattice)?;
    SpectrumSpace::new(lattice, lattice.all_prime_filters(), BaseKind::Zariski)
}
