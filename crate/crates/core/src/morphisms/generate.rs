use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::functions::{FnFamily, Rational, ScalarFn};
use crate::morphisms::{CompatMap, Witness};
use crate::topology::{FiniteSpace, SpaceMap};

/// `f ↦ f ∘ φ⁻¹`, i.e. `(Tf)(φ(x)) = f(x)`.
pub fn from_homeomorphism(phi: &SpaceMap, source: Arc<FnFamily>, target: Arc<FnFamily>) -> Result<CompatMap> {
    if phi.source() != source.space().as_ref() || phi.target() != target.space().as_ref() {
        return Err(Error::SpaceMismatch);
    }
    if !phi.is_homeomorphism() {
        return Err(Error::Precondition("point map is not a homeomorphism".into()));
    }
    let m = phi.target().len();
    let space = target.space().clone();
    CompatMap::from_fn(source, target, |f| {
        let mut values = vec![Rational::zero(); m];
        for (x, v) in f.values().iter().enumerate() {
            values[phi.apply(x)] = v.clone();
        }
        ScalarFn::new(space.clone(), values)
    })?
    .require_iso()
}

/// `f ↦ α ∘ f` for a bijection `α` of the family's grid fixing 0.
pub fn value_relabel(alpha: &BTreeMap<Rational, Rational>, family: Arc<FnFamily>) -> Result<CompatMap> {
    let grid = family
        .grid()
        .ok_or_else(|| Error::Precondition("relabeling needs a grid family".into()))?;
    if alpha.get(&Rational::zero()).is_none_or(|v| !v.is_zero()) {
        return Err(Error::Precondition("relabeling must fix 0".into()));
    }
    if alpha.len() != grid.len() || grid.values().iter().any(|v| !alpha.contains_key(v)) {
        return Err(Error::InvalidGrid(format!("relabeling domain differs from {grid}")));
    }
    if alpha.values().any(|v| !grid.contains(v)) {
        return Err(Error::InvalidGrid(format!("relabeling is not closed on {grid}")));
    }
    let mut image: Vec<&Rational> = alpha.values().collect();
    image.sort();
    image.dedup();
    if image.len() != alpha.len() {
        return Err(Error::NotBijective("relabeling repeats a value".into()));
    }
    let space = family.space().clone();
    CompatMap::from_fn(family.clone(), family, |f| {
        ScalarFn::new(space.clone(), f.values().iter().map(|v| alpha[v].clone()).collect())
    })?
    .require_iso()
}

/// Permutes the nowhere-zero members and fixes everything else:
/// `invertible[i] ↦ invertible[perm[i]]`. Only accepted on connected spaces.
pub fn gl_shuffle(perm: &[usize], family: Arc<FnFamily>) -> Result<CompatMap> {
    if !family.space().is_connected() {
        return Err(Error::Precondition("space is not connected".into()));
    }
    gl_shuffle_unchecked(perm, family)?.require_iso()
}

/// The shuffle without the connectivity requirement and without
/// verification; used to exhibit failures on disconnected spaces.
pub fn gl_shuffle_unchecked(perm: &[usize], family: Arc<FnFamily>) -> Result<CompatMap> {
    let inv = family.invertible_indices();
    if perm.len() != inv.len() {
        return Err(Error::LengthMismatch {
            expected: inv.len(),
            found: perm.len(),
        });
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
            return Err(Error::NotBijective(format!("{perm:?} is not a permutation")));
        }
    }
    let mut assignment: Vec<usize> = (0..family.len()).collect();
    for (i, &p) in perm.iter().enumerate() {
        assignment[inv[i]] = inv[p];
    }
    CompatMap::new(family.clone(), family, assignment)
}

/// A transposition of two nowhere-zero members that breaks `⪯`, together
/// with the failing pair. `None` when every transposition is harmless,
/// which is the case on connected spaces.
pub fn disconnected_shuffle_witness(family: Arc<FnFamily>) -> Result<Option<(Vec<usize>, Witness)>> {
    let k = family.invertible_indices().len();
    for a in 0..k {
        for b in a + 1..k {
            let mut perm: Vec<usize> = (0..k).collect();
            perm.swap(a, b);
            let map = gl_shuffle_unchecked(&perm, family.clone())?;
            if let Some(w) = map.morphism_witness() {
                return Ok(Some((perm, w)));
            }
        }
    }
    Ok(None)
}

/// Strictly increasing `t ↦ slope·t + shift`, with separate slopes for
/// negative and nonnegative `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monotone {
    pub neg_slope: Rational,
    pub pos_slope: Rational,
    pub shift: Rational,
}

impl Monotone {
    pub fn new(neg_slope: Rational, pos_slope: Rational, shift: Rational) -> Result<Self> {
        if !neg_slope.is_positive() || !pos_slope.is_positive() {
            return Err(Error::Precondition("slopes must be positive".into()));
        }
        Ok(Monotone {
            neg_slope,
            pos_slope,
            shift,
        })
    }

    pub fn translation(shift: Rational) -> Self {
        Monotone {
            neg_slope: Rational::from_integer(1.into()),
            pos_slope: Rational::from_integer(1.into()),
            shift,
        }
    }

    pub fn apply(&self, t: &Rational) -> Rational {
        let slope = if t.is_negative() { &self.neg_slope } else { &self.pos_slope };
        slope * t + &self.shift
    }
}

/// A bijection from a family onto a list of functions that preserves the
/// pointwise order in both directions.
#[derive(Clone, Debug)]
pub struct PointwiseOrderMap {
    source: Arc<FnFamily>,
    images: Vec<ScalarFn>,
}

impl PointwiseOrderMap {
    pub fn new(source: Arc<FnFamily>, images: Vec<ScalarFn>) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::LengthMismatch {
                expected: source.len(),
                found: images.len(),
            });
        }
        if let Some(first) = images.first() {
            if images.iter().any(|g| !g.same_space(first)) {
                return Err(Error::SpaceMismatch);
            }
        }
        let n = images.len();
        for i in 0..n {
            for j in 0..n {
                if i != j && images[i] == images[j] {
                    return Err(Error::NotBijective(format!("{} is hit twice", images[i])));
                }
                let before = source.get(i).pointwise_le(source.get(j))?;
                let after = images[i].pointwise_le(&images[j])?;
                if before != after {
                    return Err(Error::NotAnIsomorphism(format!(
                        "pointwise order between {} and {} not preserved",
                        source.get(i),
                        source.get(j)
                    )));
                }
            }
        }
        Ok(PointwiseOrderMap { source, images })
    }

    pub fn identity(source: Arc<FnFamily>) -> Self {
        let images = source.functions().to_vec();
        PointwiseOrderMap { source, images }
    }

    /// `(Sf)(y) = h_y(f(φ⁻¹(y)))`.
    pub fn composed(source: Arc<FnFamily>, phi: &SpaceMap, h: &[Monotone]) -> Result<Self> {
        if phi.source() != source.space().as_ref() {
            return Err(Error::SpaceMismatch);
        }
        if !phi.is_homeomorphism() {
            return Err(Error::Precondition("point map is not a homeomorphism".into()));
        }
        let target = Arc::new(phi.target().clone());
        if h.len() != target.len() {
            return Err(Error::LengthMismatch {
                expected: target.len(),
                found: h.len(),
            });
        }
        let inv = phi.inverse()?;
        let images = source
            .functions()
            .iter()
            .map(|f| {
                let values = (0..target.len())
                    .map(|y| h[y].apply(f.value(inv.apply(y))))
                    .collect();
                ScalarFn::new(target.clone(), values)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, images)
    }

    pub fn source(&self) -> &Arc<FnFamily> {
        &self.source
    }

    pub fn images(&self) -> &[ScalarFn] {
        &self.images
    }

    pub fn target_space(&self) -> Arc<FiniteSpace> {
        self.images[self.source.zero_index()].space().clone()
    }
}

/// `Tf = Sf − S0`, onto the family of all such differences.
pub fn kaplansky_shift(s: &PointwiseOrderMap) -> Result<CompatMap> {
    let s0 = &s.images[s.source.zero_index()];
    let shifted = s
        .images
        .iter()
        .map(|g| g.sub(s0))
        .collect::<Result<Vec<_>>>()?;
    let target = Arc::new(FnFamily::from_functions(s.target_space(), shifted)?);
    let assignment = (0..s.source.len()).collect();
    CompatMap::new(s.source.clone(), target, assignment)?.require_iso()
}
