use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::functions::{int, ratio, FnFamily, Rational, ValueGrid};
use crate::morphisms::{
    from_homeomorphism, gl_shuffle, kaplansky_shift, value_relabel, CompatMap, Monotone, PointwiseOrderMap,
};
use crate::topology::{FiniteSpace, SpaceMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsoKind {
    Homeomorphism,
    ValueRelabel,
    GlShuffle,
    Kaplansky,
    Composition,
}

impl IsoKind {
    pub const ALL: [IsoKind; 5] = [
        IsoKind::Homeomorphism,
        IsoKind::ValueRelabel,
        IsoKind::GlShuffle,
        IsoKind::Kaplansky,
        IsoKind::Composition,
    ];
}

/// A generated compatibility isomorphism and the point map it should induce.
#[derive(Clone, Debug)]
pub struct GeneratedIso {
    pub kind: IsoKind,
    pub map: CompatMap,
    pub expected: SpaceMap,
}

pub(crate) fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub(crate) fn random_monotone(rng: &mut ChaCha8Rng) -> Monotone {
    let slopes = [ratio(1, 2), int(1), int(2), int(3)];
    let slope = |rng: &mut ChaCha8Rng| slopes.choose(rng).expect("nonempty").clone();
    Monotone::new(slope(rng), slope(rng), int(rng.gen_range(-2..=2))).expect("positive slopes")
}

/// Seeded source of isomorphisms between grid families on discrete spaces.
pub struct IsoGenerator {
    rng: ChaCha8Rng,
    grid: ValueGrid,
    max_points: usize,
    families: HashMap<usize, Arc<FnFamily>>,
}

impl IsoGenerator {
    pub fn new(seed: u64, grid: ValueGrid, max_points: usize) -> Self {
        IsoGenerator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            grid,
            max_points: max_points.max(1),
            families: HashMap::new(),
        }
    }

    pub fn family(&mut self, n: usize) -> Result<Arc<FnFamily>> {
        if let Some(f) = self.families.get(&n) {
            return Ok(f.clone());
        }
        let fam = Arc::new(FnFamily::from_grid(Arc::new(FiniteSpace::discrete(n)), self.grid.clone())?);
        self.families.insert(n, fam.clone());
        Ok(fam)
    }

    fn points(&mut self) -> usize {
        self.rng.gen_range(1..=self.max_points)
    }

    fn permutation_map(&mut self, n: usize) -> SpaceMap {
        let d = FiniteSpace::discrete(n);
        let p = random_permutation(&mut self.rng, n);
        SpaceMap::new(d.clone(), d, p).expect("permutation of points")
    }

    pub fn homeomorphism(&mut self, n: usize) -> Result<GeneratedIso> {
        let fam = self.family(n)?;
        let phi = self.permutation_map(n);
        Ok(GeneratedIso {
            kind: IsoKind::Homeomorphism,
            map: from_homeomorphism(&phi, fam.clone(), fam)?,
            expected: phi,
        })
    }

    pub fn value_relabel(&mut self, n: usize) -> Result<GeneratedIso> {
        let fam = self.family(n)?;
        let nonzero: Vec<Rational> = self.grid.nonzero().cloned().collect();
        let perm = random_permutation(&mut self.rng, nonzero.len());
        let mut alpha: BTreeMap<Rational, Rational> =
            nonzero.iter().zip(&perm).map(|(v, &p)| (v.clone(), nonzero[p].clone())).collect();
        alpha.insert(int(0), int(0));
        Ok(GeneratedIso {
            kind: IsoKind::ValueRelabel,
            map: value_relabel(&alpha, fam.clone())?,
            expected: SpaceMap::identity(fam.space()),
        })
    }

    /// Shuffles are only generated on the connected one-point space.
    pub fn gl_shuffle(&mut self) -> Result<GeneratedIso> {
        let fam = self.family(1)?;
        let k = fam.invertible_indices().len();
        let perm = random_permutation(&mut self.rng, k);
        Ok(GeneratedIso {
            kind: IsoKind::GlShuffle,
            map: gl_shuffle(&perm, fam.clone())?,
            expected: SpaceMap::identity(fam.space()),
        })
    }

    pub fn kaplansky(&mut self, n: usize) -> Result<GeneratedIso> {
        let fam = self.family(n)?;
        let phi = self.permutation_map(n);
        let h: Vec<Monotone> = (0..n).map(|_| random_monotone(&mut self.rng)).collect();
        let s = PointwiseOrderMap::composed(fam, &phi, &h)?;
        Ok(GeneratedIso {
            kind: IsoKind::Kaplansky,
            map: kaplansky_shift(&s)?,
            expected: phi,
        })
    }

    /// A map between grid families followed by any generated map out of the
    /// same family.
    pub fn composable_pair(&mut self, n: usize) -> Result<(GeneratedIso, GeneratedIso)> {
        let first = match (n, self.rng.gen_range(0..3)) {
            (1, 2) => self.gl_shuffle()?,
            (_, 0) => self.value_relabel(n)?,
            _ => self.homeomorphism(n)?,
        };
        let second = match (n, self.rng.gen_range(0..4)) {
            (1, 3) => self.gl_shuffle()?,
            (_, 0) => self.value_relabel(n)?,
            (_, 1) => self.kaplansky(n)?,
            _ => self.homeomorphism(n)?,
        };
        Ok((first, second))
    }

    pub fn composition(&mut self, n: usize) -> Result<GeneratedIso> {
        let (first, second) = self.composable_pair(n)?;
        Ok(GeneratedIso {
            kind: IsoKind::Composition,
            map: first.map.then(&second.map)?,
            expected: first.expected.then(&second.expected)?,
        })
    }

    pub fn generate(&mut self, kind: IsoKind) -> Result<GeneratedIso> {
        let n = self.points();
        match kind {
            IsoKind::Homeomorphism => self.homeomorphism(n),
            IsoKind::ValueRelabel => self.value_relabel(n),
            IsoKind::GlShuffle => self.gl_shuffle(),
            IsoKind::Kaplansky => self.kaplansky(n),
            IsoKind::Composition => self.composition(n),
        }
    }

    /// `count` isomorphisms cycling through every kind.
    pub fn batch(&mut self, count: usize) -> Result<Vec<GeneratedIso>> {
        (0..count)
            .map(|i| self.generate(IsoKind::ALL[i % IsoKind::ALL.len()]))
            .collect()
    }

    /// A pair `(T₁, T₂)` with `T₂ ∘ T₁` defined, on a random number of points.
    pub fn random_composable_pair(&mut self) -> Result<(GeneratedIso, GeneratedIso)> {
        let n = self.points();
        self.composable_pair(n)
    }
}
