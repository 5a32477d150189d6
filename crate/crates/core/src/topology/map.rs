use crate::error::{Error, Result};
use crate::topology::{FiniteSpace, PointSet};

/// A map of points between two finite spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceMap {
    source: FiniteSpace,
    target: FiniteSpace,
    assignment: Vec<usize>,
}

impl SpaceMap {
    pub fn new(source: FiniteSpace, target: FiniteSpace, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != source.len() {
            return Err(Error::LengthMismatch {
                expected: source.len(),
                found: assignment.len(),
            });
        }
        if let Some(&p) = assignment.iter().find(|&&p| p >= target.len()) {
            return Err(Error::PointOutOfRange {
                point: p,
                n: target.len(),
            });
        }
        Ok(SpaceMap {
            source,
            target,
            assignment,
        })
    }

    pub fn identity(space: &FiniteSpace) -> Self {
        SpaceMap {
            source: space.clone(),
            target: space.clone(),
            assignment: (0..space.len()).collect(),
        }
    }

    pub fn source(&self) -> &FiniteSpace {
        &self.source
    }

    pub fn target(&self) -> &FiniteSpace {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn apply(&self, x: usize) -> usize {
        self.assignment[x]
    }

    pub fn image(&self, s: &PointSet) -> PointSet {
        PointSet::from_points(self.target.len(), s.iter().map(|x| self.assignment[x]))
            .expect("assignment in range")
    }

    pub fn preimage(&self, s: &PointSet) -> PointSet {
        PointSet::from_points(
            self.source.len(),
            (0..self.source.len()).filter(|&x| s.contains(self.assignment[x])),
        )
        .expect("source points in range")
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.assignment
            .iter()
            .all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        for &y in &self.assignment {
            seen[y] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.source.len() == self.target.len() && self.is_injective()
    }

    pub fn is_continuous(&self) -> bool {
        self.target
            .opens()
            .iter()
            .all(|o| self.source.is_open(&self.preimage(o)))
    }

    pub fn is_open_map(&self) -> bool {
        self.source
            .opens()
            .iter()
            .all(|o| self.target.is_open(&self.image(o)))
    }

    pub fn is_homeomorphism(&self) -> bool {
        self.is_bijective() && self.is_continuous() && self.is_open_map()
    }

    /// `next ∘ self`
    pub fn then(&self, next: &SpaceMap) -> Result<SpaceMap> {
        if self.target != next.source {
            return Err(Error::SpaceMismatch);
        }
        Ok(SpaceMap {
            source: self.source.clone(),
            target: next.target.clone(),
            assignment: self.assignment.iter().map(|&y| next.assignment[y]).collect(),
        })
    }

    pub fn inverse(&self) -> Result<SpaceMap> {
        if !self.is_bijective() {
            return Err(Error::NotBijective("space map".into()));
        }
        let mut inv = vec![0; self.target.len()];
        for (x, &y) in self.assignment.iter().enumerate() {
            inv[y] = x;
        }
        Ok(SpaceMap {
            source: self.target.clone(),
            target: self.source.clone(),
            assignment: inv,
        })
    }
}
