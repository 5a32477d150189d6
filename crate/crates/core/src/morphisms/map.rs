use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::{FnFamily, ScalarFn};

/// Which half of the isomorphism condition a witness pair breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// `f ⪯ g` in the source but `Tf ⋠ Tg`.
    Forward,
    /// `Tf ⪯ Tg` in the target but `f ⋠ g`.
    Inverse,
}

/// A failing pair of source indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub direction: Direction,
    pub f: usize,
    pub g: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MapFlags {
    pub bijective: bool,
    pub forward_preserving: bool,
    pub inverse_preserving: bool,
}

/// A map between two function families, given by indices.
#[derive(Clone, Debug)]
pub struct CompatMap {
    source: Arc<FnFamily>,
    target: Arc<FnFamily>,
    assignment: Vec<usize>,
    flags: MapFlags,
    forward_witness: Option<(usize, usize)>,
    inverse_witness: Option<(usize, usize)>,
}

impl CompatMap {
    pub fn new(source: Arc<FnFamily>, target: Arc<FnFamily>, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != source.len() {
            return Err(Error::LengthMismatch {
                expected: source.len(),
                found: assignment.len(),
            });
        }
        if let Some(&j) = assignment.iter().find(|&&j| j >= target.len()) {
            return Err(Error::NotInFamily(format!("index {j} of a family of {}", target.len())));
        }
        let n = source.len();
        let mut hit = vec![false; target.len()];
        let mut injective = true;
        for &j in &assignment {
            injective &= !std::mem::replace(&mut hit[j], true);
        }
        let bijective = injective && n == target.len();

        let mut forward_witness = None;
        let mut inverse_witness = None;
        'pairs: for f in 0..n {
            for g in 0..n {
                let before = source.le(f, g);
                let after = target.le(assignment[f], assignment[g]);
                if before && !after && forward_witness.is_none() {
                    forward_witness = Some((f, g));
                }
                if after && !before && inverse_witness.is_none() {
                    inverse_witness = Some((f, g));
                }
                if forward_witness.is_some() && inverse_witness.is_some() {
                    break 'pairs;
                }
            }
        }
        let flags = MapFlags {
            bijective,
            forward_preserving: forward_witness.is_none(),
            inverse_preserving: bijective && inverse_witness.is_none(),
        };
        Ok(CompatMap {
            source,
            target,
            assignment,
            flags,
            forward_witness,
            inverse_witness,
        })
    }

    /// Builds the map `f ↦ image(f)`, looking every image up in `target`.
    pub fn from_fn(
        source: Arc<FnFamily>,
        target: Arc<FnFamily>,
        mut image: impl FnMut(&ScalarFn) -> Result<ScalarFn>,
    ) -> Result<Self> {
        let assignment = source
            .functions()
            .iter()
            .map(|f| {
                let g = image(f)?;
                target
                    .index_of_values(g.values())
                    .ok_or_else(|| Error::NotInFamily(g.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, assignment)
    }

    pub fn identity(family: Arc<FnFamily>) -> Self {
        let assignment = (0..family.len()).collect();
        Self::new(family.clone(), family, assignment).expect("identity is well formed")
    }

    pub fn source(&self) -> &Arc<FnFamily> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FnFamily> {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn flags(&self) -> MapFlags {
        self.flags
    }

    pub fn apply(&self, f: usize) -> usize {
        self.assignment[f]
    }

    pub fn image(&self, f: usize) -> &ScalarFn {
        self.target.get(self.assignment[f])
    }

    /// `f ⪯ g` implies `Tf ⪯ Tg`.
    pub fn is_compat_morphism(&self) -> bool {
        self.flags.forward_preserving
    }

    /// Bijective, and both the map and its inverse preserve `⪯`.
    pub fn is_compat_iso(&self) -> bool {
        self.flags.bijective && self.flags.forward_preserving && self.flags.inverse_preserving
    }

    /// Lexicographically first pair breaking the morphism condition.
    pub fn morphism_witness(&self) -> Option<Witness> {
        self.forward_witness.map(|(f, g)| Witness {
            direction: Direction::Forward,
            f,
            g,
        })
    }

    /// First pair breaking the isomorphism condition. A map that is
    /// injective but not onto has no such pair and still is no isomorphism.
    pub fn iso_witness(&self) -> Option<Witness> {
        self.morphism_witness().or(self.inverse_witness.map(|(f, g)| Witness {
            direction: Direction::Inverse,
            f,
            g,
        }))
    }

    /// Identity assignment between families with the same members.
    pub fn is_identity(&self) -> bool {
        self.source.same_members(&self.target)
            && self.assignment.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `next ∘ self`
    pub fn then(&self, next: &CompatMap) -> Result<CompatMap> {
        if !self.target.same_members(&next.source) {
            return Err(Error::SpaceMismatch);
        }
        let assignment = self.assignment.iter().map(|&j| next.assignment[j]).collect();
        CompatMap::new(self.source.clone(), next.target.clone(), assignment)
    }

    pub fn inverse(&self) -> Result<CompatMap> {
        if !self.flags.bijective {
            return Err(Error::NotBijective(format!(
                "{} functions mapped into a family of {}",
                self.source.len(),
                self.target.len()
            )));
        }
        let mut inv = vec![0; self.target.len()];
        for (i, &j) in self.assignment.iter().enumerate() {
            inv[j] = i;
        }
        CompatMap::new(self.target.clone(), self.source.clone(), inv)
    }

    /// The same map read into another family holding the same images.
    pub fn retarget(&self, target: Arc<FnFamily>) -> Result<CompatMap> {
        let assignment = (0..self.source.len())
            .map(|i| {
                let g = self.image(i);
                target
                    .index_of_values(g.values())
                    .ok_or_else(|| Error::NotInFamily(g.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        CompatMap::new(self.source.clone(), target, assignment)
    }

    /// Fails with the first witness unless the map is an isomorphism.
    pub fn require_iso(self) -> Result<Self> {
        if self.is_compat_iso() {
            return Ok(self);
        }
        let detail = match self.iso_witness() {
            Some(w) => format!(
                "{:?} pair {} , {}",
                w.direction,
                self.source.get(w.f),
                self.source.get(w.g)
            ),
            None => "map is not a bijection".to_string(),
        };
        Err(Error::NotAnIsomorphism(detail))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{int, ValueGrid};
    use crate::topology::FiniteSpace;

    fn family(space: FiniteSpace, grid: &[i64]) -> Arc<FnFamily> {
        Arc::new(FnFamily::from_grid(Arc::new(space), ValueGrid::from_ints(grid).unwrap()).unwrap())
    }

    fn index(fam: &FnFamily, values: &[i64]) -> usize {
        let v: Vec<_> = values.iter().map(|&x| int(x)).collect();
        fam.index_of_values(&v).unwrap()
    }

    #[test]
    fn identity_is_an_isomorphism() {
        let fam = family(FiniteSpace::discrete(2), &[-1, 0, 1]);
        let id = CompatMap::identity(fam);
        assert!(id.is_compat_morphism());
        assert!(id.is_compat_iso());
        assert!(id.is_identity());
        assert_eq!(id.iso_witness(), None);
    }

    #[test]
    fn one_point_into_two_points() {
        // zero-fixing bijection from a 4-member one-point family onto the
        // 4-member family of the discrete two-point space
        let a = family(FiniteSpace::discrete(1), &[0, 1, 2, 3]);
        let b = family(FiniteSpace::discrete(2), &[0, 1]);
        let map = CompatMap::new(a.clone(), b, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(a.zero_index(), 0);
        assert!(map.flags().bijective);
        assert!(map.is_compat_morphism());
        assert!(!map.is_compat_iso());
        assert_eq!(map.iso_witness().unwrap().direction, Direction::Inverse);
    }

    #[test]
    fn collapsing_a_constant_to_zero() {
        let fam = family(FiniteSpace::discrete(2), &[0, 1]);
        let one = index(&fam, &[1, 1]);
        let mut assignment: Vec<usize> = (0..fam.len()).collect();
        assignment[one] = fam.zero_index();
        let map = CompatMap::new(fam.clone(), fam.clone(), assignment).unwrap();
        assert!(!map.is_compat_morphism());
        let w = map.morphism_witness().unwrap();
        assert_eq!((w.f, w.g), (index(&fam, &[0, 1]), one));
    }

    #[test]
    fn composition_and_inverse() {
        let fam = family(FiniteSpace::discrete(2), &[0, 1]);
        let swap: Vec<usize> = fam
            .functions()
            .iter()
            .map(|f| fam.index_of_values(&[f.value(1).clone(), f.value(0).clone()]).unwrap())
            .collect();
        let t = CompatMap::new(fam.clone(), fam.clone(), swap).unwrap();
        assert!(t.is_compat_iso());
        assert!(!t.is_identity());
        assert!(t.then(&t).unwrap().is_identity());
        assert_eq!(t.inverse().unwrap().assignment(), t.assignment());
        let other = family(FiniteSpace::discrete(3), &[0, 1]);
        assert_eq!(t.then(&CompatMap::identity(other)).unwrap_err(), Error::SpaceMismatch);
    }

    #[test]
    fn rejects_bad_indices() {
        let fam = family(FiniteSpace::discrete(1), &[0, 1]);
        assert!(matches!(
            CompatMap::new(fam.clone(), fam.clone(), vec![0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            CompatMap::new(fam.clone(), fam, vec![0, 5]),
            Err(Error::NotInFamily(_))
        ));
    }
}
