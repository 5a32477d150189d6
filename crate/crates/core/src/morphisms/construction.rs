use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::{FnFamily, Rational, ScalarFn};
use crate::morphisms::CompatMap;
use crate::topology::PointSet;

/// Tally of the pairs `f ⪯ g` by position relative to
/// `𝒜 = {f : f(x) ≠ 0 for all x ∈ F}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConstructionTrace {
    pub comparable_pairs: usize,
    /// `g ∉ 𝒜`, hence `f ∉ 𝒜`; both are fixed.
    pub outside: usize,
    /// `f, g ∈ 𝒜`; they must agree on `F`.
    pub both_inside: usize,
    /// `g ∈ 𝒜`, `f ∉ 𝒜`; `f` must vanish on `F`.
    pub mixed: usize,
    /// `f ∈ 𝒜`, `g ∉ 𝒜`; should never occur.
    pub reversed: usize,
    /// Pairs where the restriction to `F` behaves otherwise.
    pub restriction_failures: usize,
    /// Members of 𝒜 moved by the construction.
    pub moved: usize,
    /// Members outside 𝒜 moved by the construction.
    pub moved_outside: usize,
}

impl ConstructionTrace {
    pub fn is_clean(&self) -> bool {
        self.reversed == 0 && self.restriction_failures == 0 && self.moved_outside == 0
    }
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub map: CompatMap,
    pub component: PointSet,
    pub trace: ConstructionTrace,
}

/// Swaps the restrictions `f̃₁` and `f̃₂` to the component `F` among members
/// that vanish nowhere on `F`, leaving all other values alone.
///
/// `f1` and `f2` list values at the points of `F` in increasing order.
pub fn discont_construction(
    family: Arc<FnFamily>,
    component: PointSet,
    f1: &[Rational],
    f2: &[Rational],
) -> Result<Construction> {
    let space = family.space().clone();
    let interior = space.interior(&component)?;
    if interior.is_empty() {
        return Err(Error::Precondition(format!("{component} has empty interior")));
    }
    if !space.connected_components().contains(&component) {
        return Err(Error::Precondition(format!("{component} is not a connected component")));
    }
    let points = component.to_vec();
    for f in [f1, f2] {
        if f.len() != points.len() {
            return Err(Error::LengthMismatch {
                expected: points.len(),
                found: f.len(),
            });
        }
        if f.iter().any(|v| v.is_zero()) {
            return Err(Error::Precondition("replacement vanishes somewhere on the component".into()));
        }
        if !continuous_on(&space, &component, &points, f)? {
            return Err(Error::Precondition("replacement is not continuous on the component".into()));
        }
    }
    let boundary = space.boundary(&component)?;
    for (k, &x) in points.iter().enumerate() {
        if boundary.contains(x) && f1[k] != f2[k] {
            return Err(Error::Precondition(format!("replacements differ at boundary point {x}")));
        }
    }

    let in_a = |f: &ScalarFn| points.iter().all(|&x| !f.value(x).is_zero());
    let restriction = |f: &ScalarFn| -> Vec<Rational> { points.iter().map(|&x| f.value(x).clone()).collect() };
    let map = CompatMap::from_fn(family.clone(), family.clone(), |f| {
        let r = restriction(f);
        let replacement = if !in_a(f) {
            None
        } else if r == f1 {
            Some(f2)
        } else if r == f2 {
            Some(f1)
        } else {
            None
        };
        let mut values = f.values().to_vec();
        if let Some(new) = replacement {
            for (k, &x) in points.iter().enumerate() {
                values[x] = new[k].clone();
            }
        }
        ScalarFn::new(space.clone(), values)
    })?;

    let mut trace = ConstructionTrace::default();
    let n = family.len();
    let member: Vec<bool> = family.functions().iter().map(in_a).collect();
    for (i, f) in family.functions().iter().enumerate() {
        if map.apply(i) != i {
            if member[i] {
                trace.moved += 1;
            } else {
                trace.moved_outside += 1;
            }
        }
        for j in 0..n {
            if !family.le(i, j) {
                continue;
            }
            trace.comparable_pairs += 1;
            let g = family.get(j);
            match (member[i], member[j]) {
                (_, false) => {
                    trace.outside += 1;
                    if member[i] {
                        trace.reversed += 1;
                    }
                }
                (true, true) => {
                    trace.both_inside += 1;
                    if restriction(f) != restriction(g) {
                        trace.restriction_failures += 1;
                    }
                }
                (false, true) => {
                    trace.mixed += 1;
                    if points.iter().any(|&x| !f.value(x).is_zero()) {
                        trace.restriction_failures += 1;
                    }
                }
            }
        }
    }
    let map = map.require_iso()?;
    Ok(Construction {
        map,
        component,
        trace,
    })
}

/// Fibers of `values` (indexed like `points`) are relatively open in `set`.
fn continuous_on(
    space: &crate::topology::FiniteSpace,
    set: &PointSet,
    points: &[usize],
    values: &[Rational],
) -> Result<bool> {
    let rel = space.relative_opens(set)?;
    let n = space.len();
    Ok(values.iter().all(|v| {
        let fiber = PointSet::from_points(
            n,
            points.iter().zip(values).filter(|(_, w)| *w == v).map(|(&x, _)| x),
        )
        .expect("points in range");
        rel.contains(&fiber)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{int, ValueGrid};
    use crate::topology::FiniteSpace;

    fn family(space: FiniteSpace, grid: &[i64]) -> Arc<FnFamily> {
        Arc::new(FnFamily::from_grid(Arc::new(space), ValueGrid::from_ints(grid).unwrap()).unwrap())
    }

    #[test]
    fn discrete_three_singleton() {
        let fam = family(FiniteSpace::discrete(3), &[0, 1, 2]);
        let f = PointSet::singleton(3, 0);
        let c = discont_construction(fam.clone(), f, &[int(1)], &[int(2)]).unwrap();
        assert!(c.map.is_compat_iso());
        assert!(!c.map.is_identity());
        assert!(c.trace.is_clean());
        // members with f(0) ∈ {1, 2} are exactly the moved ones
        assert_eq!(c.trace.moved, 18);
        assert!(c.trace.outside > 0 && c.trace.both_inside > 0 && c.trace.mixed > 0);
        let before = fam.index_of_values(&[int(1), int(0), int(2)]).unwrap();
        assert_eq!(c.map.image(before).values(), &[int(2), int(0), int(2)]);
    }

    #[test]
    fn equal_replacements_give_identity() {
        let fam = family(FiniteSpace::discrete(2), &[0, 1, 2]);
        let c = discont_construction(fam, PointSet::singleton(2, 1), &[int(2)], &[int(2)]).unwrap();
        assert!(c.map.is_identity());
    }

    #[test]
    fn preconditions() {
        let s = family(FiniteSpace::sierpinski(), &[0, 1, 2]);
        // the closed point has empty interior
        assert!(matches!(
            discont_construction(s.clone(), PointSet::singleton(2, 1), &[int(1)], &[int(2)]),
            Err(Error::Precondition(m)) if m.contains("interior")
        ));
        // {0} is open but not a component
        assert!(matches!(
            discont_construction(s.clone(), PointSet::singleton(2, 0), &[int(1)], &[int(2)]),
            Err(Error::Precondition(m)) if m.contains("component")
        ));
        let full = PointSet::full(2);
        assert!(matches!(
            discont_construction(s.clone(), full, &[int(1), int(0)], &[int(2), int(2)]),
            Err(Error::Precondition(m)) if m.contains("vanishes")
        ));
        assert!(matches!(
            discont_construction(s.clone(), full, &[int(1), int(2)], &[int(2), int(2)]),
            Err(Error::Precondition(m)) if m.contains("continuous")
        ));
        assert!(matches!(
            discont_construction(s, full, &[int(1)], &[int(2)]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn non_discrete_component() {
        // Sierpiński pair {0,1} next to an isolated point 2
        let space = FiniteSpace::sierpinski().disjoint_union(&FiniteSpace::discrete(1)).unwrap();
        let fam = family(space, &[-1, 0, 1, 2]);
        let f = PointSet::from_points(3, [0, 1]).unwrap();
        let c = discont_construction(fam, f, &[int(-1), int(-1)], &[int(2), int(2)]).unwrap();
        assert!(c.map.is_compat_iso() && !c.map.is_identity());
        assert!(c.trace.is_clean());
    }
}
