use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::Result;
use crate::functions::{FnFamily, Rational};
use crate::morphisms::CompatMap;
use crate::topology::PointSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdditiveKind {
    OrthogonalityLost,
    OrthogonalityCreated,
    SumNotPreserved,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct AdditiveViolation {
    pub kind: AdditiveKind,
    pub f: usize,
    pub g: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AdditiveReport {
    pub pairs: usize,
    pub orthogonal_pairs: usize,
    pub sums_checked: usize,
    pub violations: Vec<AdditiveViolation>,
}

impl AdditiveReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every pair: `f·g = 0 ⟺ Tf·Tg = 0`, and for orthogonal pairs with
/// `f + g` in the source family, `T(f + g) = Tf + Tg`.
pub fn check_additive_lemma(t: &CompatMap) -> Result<AdditiveReport> {
    let src = t.source();
    let n = src.len();
    let mut report = AdditiveReport::default();
    for i in 0..n {
        let f = src.get(i);
        for j in 0..n {
            let g = src.get(j);
            report.pairs += 1;
            let before = f.is_orthogonal(g)?;
            let after = t.image(i).is_orthogonal(t.image(j))?;
            if before && !after {
                report.violations.push(AdditiveViolation {
                    kind: AdditiveKind::OrthogonalityLost,
                    f: i,
                    g: j,
                });
            }
            if after && !before {
                report.violations.push(AdditiveViolation {
                    kind: AdditiveKind::OrthogonalityCreated,
                    f: i,
                    g: j,
                });
            }
            if !before {
                continue;
            }
            report.orthogonal_pairs += 1;
            let sum = f.add(g)?;
            if let Some(k) = src.index_of_values(sum.values()) {
                report.sums_checked += 1;
                if *t.image(k) != t.image(i).add(t.image(j))? {
                    report.violations.push(AdditiveViolation {
                        kind: AdditiveKind::SumNotPreserved,
                        f: i,
                        g: j,
                    });
                }
            }
        }
    }
    report.violations.sort();
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClopenKind {
    /// No member has `σ(f) = U`.
    TauUndefined,
    /// Members with equal `σ` have images with different `σ`.
    TauNotWellDefined,
    ImageNotClopen,
    ComplementMismatch,
    /// `f = g` on `U` but `Tf ≠ Tg` on `τ(U)`.
    AgreementLost,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ClopenViolation {
    pub kind: ClopenKind,
    pub set: Vec<usize>,
    pub f: Option<usize>,
    pub g: Option<usize>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ClopenReport {
    pub clopens: usize,
    /// `(U, τ(U))` for every clopen `U` on which `τ` is defined.
    pub tau: Vec<(Vec<usize>, Vec<usize>)>,
    pub violations: Vec<ClopenViolation>,
}

impl ClopenReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `τ(σ(f)) = σ(Tf)` on the σ-sets that occur in the source family, or the
/// first pair showing it is not a function.
pub fn sigma_table(t: &CompatMap) -> std::result::Result<HashMap<PointSet, PointSet>, (usize, usize)> {
    let mut table: HashMap<PointSet, (PointSet, usize)> = HashMap::new();
    for (i, f) in t.source().functions().iter().enumerate() {
        let image = t.image(i).sigma();
        match table.get(&f.sigma()) {
            Some(&(prev, k)) if prev != image => return Err((k, i)),
            Some(_) => {}
            None => {
                table.insert(f.sigma(), (image, i));
            }
        }
    }
    Ok(table.into_iter().map(|(k, (v, _))| (k, v)).collect())
}

/// For every clopen `U`: `τ(U)` is clopen, `τ(X∖U) = Y∖τ(U)`, and members
/// agreeing on `U` have images agreeing on `τ(U)`.
pub fn check_clopen_props(t: &CompatMap) -> Result<ClopenReport> {
    let src = t.source();
    let x = src.space();
    let y = t.target().space();
    let mut report = ClopenReport::default();
    let table = match sigma_table(t) {
        Ok(table) => table,
        Err((f, g)) => {
            report.violations.push(ClopenViolation {
                kind: ClopenKind::TauNotWellDefined,
                set: src.get(f).sigma().to_vec(),
                f: Some(f),
                g: Some(g),
            });
            return Ok(report);
        }
    };
    for u in x.clopen_sets() {
        report.clopens += 1;
        let violation = |kind, f, g| ClopenViolation {
            kind,
            set: u.to_vec(),
            f,
            g,
        };
        let Some(&tu) = table.get(&u) else {
            report.violations.push(violation(ClopenKind::TauUndefined, None, None));
            continue;
        };
        report.tau.push((u.to_vec(), tu.to_vec()));
        if !y.is_clopen(&tu) {
            report.violations.push(violation(ClopenKind::ImageNotClopen, None, None));
        }
        if table.get(&u.complement()) != Some(&tu.complement()) {
            report.violations.push(violation(ClopenKind::ComplementMismatch, None, None));
        }
        let mut groups: HashMap<Vec<Rational>, usize> = HashMap::new();
        for (i, f) in src.functions().iter().enumerate() {
            let first = *groups.entry(f.restrict(&u)).or_insert(i);
            if first != i && !t.image(first).agrees_on(t.image(i), &tu) {
                report
                    .violations
                    .push(violation(ClopenKind::AgreementLost, Some(first), Some(i)));
            }
        }
    }
    report.violations.sort();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectedViolation {
    pub set: Vec<usize>,
    pub f: usize,
    pub g: usize,
}

/// For every connected nonempty `F`, every `f` vanishing nowhere on `F`
/// and every `g ⪯ f`: `g = f` on all of `F` or `g = 0` on all of `F`.
/// Returns the number of triples checked and the failures.
pub fn connected_restriction_violations(family: &FnFamily) -> Result<(usize, Vec<ConnectedViolation>)> {
    let space = family.space();
    let mut checked = 0;
    let mut out = Vec::new();
    for set in PointSet::all_subsets(space.len()) {
        if set.is_empty() || !space.is_connected_subset(&set)? {
            continue;
        }
        for (fi, f) in family.functions().iter().enumerate() {
            if set.iter().any(|x| f.value(x).is_zero()) {
                continue;
            }
            for (gi, g) in family.functions().iter().enumerate() {
                if !family.le(gi, fi) {
                    continue;
                }
                checked += 1;
                let equal = set.iter().all(|x| g.value(x) == f.value(x));
                let zero = set.iter().all(|x| g.value(x).is_zero());
                if !(equal || zero) {
                    out.push(ConnectedViolation {
                        set: set.to_vec(),
                        f: fi,
                        g: gi,
                    });
                }
            }
        }
    }
    Ok((checked, out))
}

/// Invariants of `(family, ⪯)` that any compatibility isomorphism must
/// preserve, compared between two families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionCertificate {
    pub source_size: usize,
    pub target_size: usize,
    /// Sorted sizes of the down-sets `{g : g ⪯ f}`.
    pub source_profile: Vec<usize>,
    pub target_profile: Vec<usize>,
    pub cardinality_mismatch: bool,
    pub profile_mismatch: bool,
}

impl ObstructionCertificate {
    /// Whether the invariants rule out every compatibility isomorphism.
    pub fn excludes_isomorphism(&self) -> bool {
        self.cardinality_mismatch || self.profile_mismatch
    }
}

pub fn isomorphism_obstructions(a: &FnFamily, b: &FnFamily) -> ObstructionCertificate {
    let profile = |fam: &FnFamily| {
        let mut p = fam.down_set_sizes();
        p.sort_unstable();
        p
    };
    let source_profile = profile(a);
    let target_profile = profile(b);
    ObstructionCertificate {
        source_size: a.len(),
        target_size: b.len(),
        cardinality_mismatch: a.len() != b.len(),
        profile_mismatch: source_profile != target_profile,
        source_profile,
        target_profile,
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::functions::{int, ValueGrid};
    use crate::morphisms::{from_homeomorphism, value_relabel};
    use crate::topology::{FiniteSpace, SpaceMap};

    fn family(space: FiniteSpace, grid: &[i64]) -> Arc<FnFamily> {
        Arc::new(FnFamily::from_grid(Arc::new(space), ValueGrid::from_ints(grid).unwrap()).unwrap())
    }

    #[test]
    fn identity_reports_are_clean() {
        let fam = family(FiniteSpace::discrete(2), &[-1, 0, 1, 2]);
        let id = CompatMap::identity(fam);
        assert!(check_additive_lemma(&id).unwrap().is_clean());
        let r = check_clopen_props(&id).unwrap();
        assert!(r.is_clean());
        assert_eq!(r.clopens, 4);
        assert!(r.tau.iter().all(|(u, v)| u == v));
    }

    #[test]
    fn relabel_and_homeomorphism_are_clean() {
        let d3 = FiniteSpace::discrete(3);
        let fam = family(d3.clone(), &[-1, 0, 1, 2]);
        let alpha = [(-1, 2), (0, 0), (1, -1), (2, 1)]
            .iter()
            .map(|&(a, b)| (int(a), int(b)))
            .collect();
        let t = value_relabel(&alpha, fam.clone()).unwrap();
        assert!(check_additive_lemma(&t).unwrap().is_clean());

        let phi = SpaceMap::new(d3.clone(), d3, vec![2, 0, 1]).unwrap();
        let t = from_homeomorphism(&phi, fam.clone(), fam).unwrap();
        assert!(check_additive_lemma(&t).unwrap().is_clean());
        let r = check_clopen_props(&t).unwrap();
        assert!(r.is_clean());
        for (u, v) in &r.tau {
            let mut image: Vec<usize> = u.iter().map(|&x| phi.apply(x)).collect();
            image.sort_unstable();
            assert_eq!(&image, v);
        }
    }

    #[test]
    fn corrupted_map_is_caught() {
        // swap (1,0) with (1,1): zero-fixing and bijective, but it moves
        // supports around
        let fam = family(FiniteSpace::discrete(2), &[0, 1]);
        let a = fam.index_of_values(&[int(1), int(0)]).unwrap();
        let b = fam.index_of_values(&[int(1), int(1)]).unwrap();
        let mut assignment: Vec<usize> = (0..fam.len()).collect();
        assignment.swap(a, b);
        let bad = CompatMap::new(fam.clone(), fam, assignment).unwrap();
        let r = check_additive_lemma(&bad).unwrap();
        assert!(!r.is_clean());
        assert!(r.violations.iter().any(|v| v.kind == AdditiveKind::OrthogonalityLost));
        assert!(!check_clopen_props(&bad).unwrap().is_clean());
    }

    #[test]
    fn connected_restrictions_hold_on_small_spaces() {
        let grid = ValueGrid::from_ints(&[-1, 0, 1, 2]).unwrap();
        for space in crate::topology::small_spaces(3).unwrap() {
            let fam = FnFamily::from_grid(Arc::new(space), grid.clone()).unwrap();
            let (checked, bad) = connected_restriction_violations(&fam).unwrap();
            assert!(checked > 0);
            assert!(bad.is_empty());
        }
    }

    #[test]
    fn two_versus_three_points() {
        let a = family(FiniteSpace::discrete(2), &[0, 1]);
        let b = family(FiniteSpace::discrete(3), &[0, 1]);
        let c = isomorphism_obstructions(&a, &b);
        assert_eq!((c.source_size, c.target_size), (4, 8));
        assert_eq!(c.source_profile, vec![1, 2, 2, 4]);
        assert_eq!(c.target_profile, vec![1, 2, 2, 2, 4, 4, 4, 8]);
        assert!(c.excludes_isomorphism());
        assert!(!isomorphism_obstructions(&a, &a).excludes_isomorphism());
    }
}
