//! Recovering points from the lattice `Θ(X)` of zero-set closures, and
//! turning a compatibility isomorphism into a homeomorphism.
//!
//! On a finite space `Θ(X)` is the algebra of clopen sets, so its
//! ultrafilters correspond to components. For discrete spaces
//! `Υ(x) = 𝒰_x = {F ∈ Θ(X) : x ∈ F}` is a homeomorphism onto the
//! ultrafilter space; in general `Υ` factors through a homeomorphism from
//! the quasicomponent quotient.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::{FnFamily, ValueGrid};
use crate::lattice::{order_iso_is_lattice_iso, ult_space, Filter, FiniteLattice, SpectrumSpace};
use crate::morphisms::CompatMap;
use crate::topology::{FiniteSpace, PointSet, SpaceMap};

/// Stages of the reconstruction pipeline, used to locate failures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Precondition,
    Tau,
    Vartheta,
    LatticeIso,
    UltrafilterMap,
    Upsilon,
    Homeomorphism,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Precondition => "precondition",
            Stage::Tau => "tau",
            Stage::Vartheta => "vartheta",
            Stage::LatticeIso => "lattice-iso",
            Stage::UltrafilterMap => "ultrafilter-map",
            Stage::Upsilon => "upsilon",
            Stage::Homeomorphism => "homeomorphism",
        };
        f.write_str(s)
    }
}

fn fail(stage: Stage, detail: impl Into<String>) -> Error {
    Error::Pipeline {
        stage,
        detail: detail.into(),
    }
}

/// `𝒰_x` as a set of elements of `theta`.
pub fn upsilon_filter(theta: &FiniteLattice, x: usize) -> Result<Filter> {
    let sets = theta.sets();
    let n = sets.first().map_or(0, |s| s.width());
    if x >= n {
        return Err(Error::PointOutOfRange { point: x, n });
    }
    Ok(Filter::from_members(
        theta,
        (0..theta.len()).filter(|&a| sets[a].contains(x)),
    ))
}

/// `𝒰_x` in `Θ(X)` computed from the grid family.
pub fn upsilon(space: &FiniteSpace, grid: &ValueGrid, x: usize) -> Result<Filter> {
    space.check_point(x)?;
    let theta = crate::lattice::theta_lattice(space, grid)?;
    upsilon_filter(&theta, x)
}

/// `Υ` as a point map into the ultrafilter space, or the first point whose
/// filter is not an ultrafilter.
fn upsilon_map(space: &FiniteSpace, theta: &FiniteLattice, ult: &SpectrumSpace) -> Result<SpaceMap> {
    let assignment = (0..space.len())
        .map(|x| {
            let u = upsilon_filter(theta, x)?;
            ult.position(&u)
                .ok_or_else(|| fail(Stage::Upsilon, format!("filter of point {x} is not an ultrafilter")))
        })
        .collect::<Result<Vec<_>>>()?;
    SpaceMap::new(space.clone(), ult.topology().clone(), assignment)
}

/// Everything computed by [`reconstruct`].
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub space: FiniteSpace,
    pub grid: ValueGrid,
    pub theta: FiniteLattice,
    pub ultrafilters: SpectrumSpace,
    pub upsilon: SpaceMap,
    pub quotient: FiniteSpace,
    /// Quasicomponent quotient to ultrafilter space, when `Υ` factors
    /// through a homeomorphism.
    pub quotient_map: Option<SpaceMap>,
    pub report: ReconstructionReport,
}

/// Serializable summary of a reconstruction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReconstructionReport {
    pub points: usize,
    pub grid: String,
    pub theta_size: usize,
    pub ultrafilter_count: usize,
    pub quasicomponents: usize,
    /// Index of `𝒰_x` among the ultrafilters, for every point `x`.
    pub upsilon: Vec<usize>,
    pub upsilon_continuous: bool,
    pub upsilon_open: bool,
    pub upsilon_injective: bool,
    pub upsilon_surjective: bool,
    pub upsilon_homeomorphism: bool,
    pub space_discrete: bool,
    pub ultrafilter_space_discrete: bool,
    pub base_identity_holds: bool,
    pub quotient_homeomorphism: bool,
    /// `Υ` is a homeomorphism for discrete spaces, and the induced map from
    /// the quasicomponent quotient is a homeomorphism in every case.
    pub verified: bool,
}

pub fn reconstruct(space: &FiniteSpace, grid: &ValueGrid) -> Result<Reconstruction> {
    let theta = crate::lattice::theta_lattice(space, grid)?;
    let ultrafilters = ult_space(&theta)?;
    let upsilon = upsilon_map(space, &theta, &ultrafilters)?;
    let (quotient, q) = space.quasicomponent_quotient();

    // Υ is constant on classes exactly when it factors through q
    let mut induced = vec![usize::MAX; quotient.len()];
    let mut factors = true;
    for x in 0..space.len() {
        let c = q.apply(x);
        if induced[c] == usize::MAX {
            induced[c] = upsilon.apply(x);
        } else {
            factors &= induced[c] == upsilon.apply(x);
        }
    }
    let quotient_map = if factors {
        Some(SpaceMap::new(quotient.clone(), ultrafilters.topology().clone(), induced)?)
    } else {
        None
    };
    let quotient_homeomorphism = quotient_map.as_ref().is_some_and(|m| m.is_homeomorphism());

    let space_discrete = space.is_discrete();
    let upsilon_homeomorphism = upsilon.is_homeomorphism();
    let base_identity_holds = ultrafilters.base_identity_violations(&theta).is_empty();
    let verified =
        quotient_homeomorphism && base_identity_holds && (!space_discrete || upsilon_homeomorphism);
    let report = ReconstructionReport {
        points: space.len(),
        grid: grid.to_string(),
        theta_size: theta.len(),
        ultrafilter_count: ultrafilters.len(),
        quasicomponents: quotient.len(),
        upsilon: upsilon.assignment().to_vec(),
        upsilon_continuous: upsilon.is_continuous(),
        upsilon_open: upsilon.is_open_map(),
        upsilon_injective: upsilon.is_injective(),
        upsilon_surjective: upsilon.is_surjective(),
        upsilon_homeomorphism,
        space_discrete,
        ultrafilter_space_discrete: ultrafilters.topology().is_discrete(),
        base_identity_holds,
        quotient_homeomorphism,
        verified,
    };
    Ok(Reconstruction {
        space: space.clone(),
        grid: grid.clone(),
        theta,
        ultrafilters,
        upsilon,
        quotient,
        quotient_map,
        report,
    })
}

/// An inclusion-preserving bijection between two set lattices.
#[derive(Clone, Debug)]
pub struct SetMap {
    pub source: FiniteLattice,
    pub target: FiniteLattice,
    /// Element index to element index.
    pub map: Vec<usize>,
}

impl SetMap {
    pub fn apply(&self, s: &PointSet) -> Option<PointSet> {
        let a = self.source.index_of_set(s)?;
        self.target.set(self.map[a]).copied()
    }
}

fn set_map(
    t: &CompatMap,
    stage: Stage,
    source: FiniteLattice,
    target: FiniteLattice,
    key: impl Fn(&crate::functions::ScalarFn) -> PointSet,
) -> Result<SetMap> {
    if !t.is_compat_iso() {
        return Err(Error::NotAnIsomorphism(format!("{:?}", t.iso_witness())));
    }
    let mut map = vec![usize::MAX; source.len()];
    let mut witness = vec![0; source.len()];
    for (i, f) in t.source().functions().iter().enumerate() {
        let a = source.index_of_set(&key(f)).expect("lattice built from the family");
        let b = target.index_of_set(&key(t.image(i))).expect("lattice built from the family");
        if map[a] == usize::MAX {
            map[a] = b;
            witness[a] = i;
        } else if map[a] != b {
            let g = witness[a];
            return Err(Error::WellDefinedness(format!(
                "{stage}: {} and {} share a set but their images do not",
                t.source().get(g),
                f
            )));
        }
    }
    let mut hit = vec![false; target.len()];
    for &b in &map {
        if std::mem::replace(&mut hit[b], true) {
            return Err(Error::NotBijective(format!("{stage}: two sets share an image")));
        }
    }
    if source.len() != target.len() {
        return Err(Error::NotBijective(format!("{stage}: lattices differ in size")));
    }
    let sets_s = source.sets();
    let sets_t = target.sets();
    for a in 0..source.len() {
        for b in 0..source.len() {
            let before = sets_s[a].is_subset(&sets_s[b]);
            let after = sets_t[map[a]].is_subset(&sets_t[map[b]]);
            if before != after {
                return Err(Error::WellDefinedness(format!(
                    "{stage}: inclusion between {} and {} not preserved",
                    sets_s[a], sets_s[b]
                )));
            }
        }
    }
    Ok(SetMap { source, target, map })
}

/// `τ(σ(f)) = σ(Tf)` between the σ-lattices of the two families.
pub fn tau_map(t: &CompatMap) -> Result<SetMap> {
    let source = FiniteLattice::sigma_of_family(t.source())?;
    let target = FiniteLattice::sigma_of_family(t.target())?;
    set_map(t, Stage::Tau, source, target, |f| f.sigma())
}

/// `ϑ(ρ(f)) = ρ(Tf)` between `Θ(X)` and `Θ(Y)`.
pub fn vartheta_map(t: &CompatMap) -> Result<SetMap> {
    let source = FiniteLattice::theta_of_family(t.source())?;
    let target = FiniteLattice::theta_of_family(t.target())?;
    set_map(t, Stage::Vartheta, source, target, |f| f.rho())
}

/// Stage-by-stage outcome of [`induced_homeomorphism`].
#[derive(Clone, Debug, Default, Serialize)]
pub struct PipelineReport {
    pub precondition: bool,
    pub vartheta: bool,
    pub lattice_iso: bool,
    pub ultrafilter_map: bool,
    pub upsilon: bool,
    pub homeomorphism: bool,
    pub theta_sizes: (usize, usize),
    pub ultrafilter_count: usize,
    pub assignment: Option<Vec<usize>>,
    pub failed_stage: Option<Stage>,
    pub error: Option<String>,
}

impl PipelineReport {
    pub fn succeeded(&self) -> bool {
        self.homeomorphism
    }
}

/// Runs the pipeline and records how far it got.
pub fn run_pipeline(t: &CompatMap) -> PipelineReport {
    let mut report = PipelineReport::default();
    match pipeline(t, &mut report) {
        Ok(h) => report.assignment = Some(h.assignment().to_vec()),
        Err(e) => {
            report.failed_stage = Some(match &e {
                Error::Pipeline { stage, .. } => *stage,
                _ => Stage::Precondition,
            });
            report.error = Some(e.to_string());
        }
    }
    report
}

/// The homeomorphism `Υ_Y⁻¹ ∘ (𝒰 ↦ ϑ[𝒰]) ∘ Υ_X` induced by a compatibility
/// isomorphism between families on discrete spaces.
pub fn induced_homeomorphism(t: &CompatMap) -> Result<SpaceMap> {
    let mut scratch = PipelineReport::default();
    pipeline(t, &mut scratch)
}

fn pipeline(t: &CompatMap, report: &mut PipelineReport) -> Result<SpaceMap> {
    let x: &Arc<FiniteSpace> = t.source().space();
    let y: &Arc<FiniteSpace> = t.target().space();
    if t.source().len() != t.target().len() {
        return Err(fail(
            Stage::Precondition,
            format!("families of {} and {} functions admit no bijection", t.source().len(), t.target().len()),
        ));
    }
    if !t.is_compat_iso() {
        return Err(fail(
            Stage::Precondition,
            format!("not a compatibility isomorphism, witness {:?}", t.iso_witness()),
        ));
    }
    if !x.is_discrete() || !y.is_discrete() {
        return Err(fail(Stage::Precondition, "both spaces must be discrete"));
    }
    report.precondition = true;

    let theta = vartheta_map(t).map_err(|e| fail(Stage::Vartheta, e.to_string()))?;
    report.vartheta = true;
    report.theta_sizes = (theta.source.len(), theta.target.len());

    let is_iso = order_iso_is_lattice_iso(&theta.map, &theta.source, &theta.target)
        .map_err(|e| fail(Stage::LatticeIso, e.to_string()))?;
    if !is_iso {
        return Err(fail(Stage::LatticeIso, "ϑ does not respect the lattice order"));
    }
    report.lattice_iso = true;

    let ult_x = ult_space(&theta.source).map_err(|e| fail(Stage::UltrafilterMap, e.to_string()))?;
    let ult_y = ult_space(&theta.target).map_err(|e| fail(Stage::UltrafilterMap, e.to_string()))?;
    report.ultrafilter_count = ult_x.len();
    let assignment = ult_x
        .carrier()
        .iter()
        .map(|u| {
            let image = Filter::from_members(&theta.target, u.members().map(|a| theta.map[a]));
            if !theta.target.is_maximal_filter(&image) {
                return Err(fail(Stage::UltrafilterMap, format!("image of {u:?} is not maximal")));
            }
            ult_y
                .position(&image)
                .ok_or_else(|| fail(Stage::UltrafilterMap, format!("image of {u:?} missing")))
        })
        .collect::<Result<Vec<_>>>()?;
    let ult_map = SpaceMap::new(ult_x.topology().clone(), ult_y.topology().clone(), assignment)?;
    if !ult_map.is_homeomorphism() {
        return Err(fail(Stage::UltrafilterMap, "ultrafilter spaces are not matched homeomorphically"));
    }
    report.ultrafilter_map = true;

    let ups_x = upsilon_map(x, &theta.source, &ult_x)?;
    let ups_y = upsilon_map(y, &theta.target, &ult_y)?;
    if !ups_x.is_homeomorphism() || !ups_y.is_homeomorphism() {
        return Err(fail(Stage::Upsilon, "Υ is not a homeomorphism"));
    }
    report.upsilon = true;

    let h = ups_x
        .then(&ult_map)
        .and_then(|m| m.then(&ups_y.inverse()?))
        .map_err(|e| fail(Stage::Homeomorphism, e.to_string()))?;
    if !h.is_homeomorphism() {
        return Err(fail(Stage::Homeomorphism, "composite is not a homeomorphism"));
    }
    report.homeomorphism = true;
    Ok(h)
}

/// `h(T₂ ∘ T₁) = h(T₂) ∘ h(T₁)`.
pub fn functoriality_holds(t1: &CompatMap, t2: &CompatMap) -> Result<bool> {
    let composite = induced_homeomorphism(&t1.then(t2)?)?;
    let separate = induced_homeomorphism(t1)?.then(&induced_homeomorphism(t2)?)?;
    Ok(composite == separate)
}

/// The grid family of a space, shared by reference.
pub fn grid_family(space: &FiniteSpace, grid: &ValueGrid) -> Result<Arc<FnFamily>> {
    Ok(Arc::new(FnFamily::from_grid(Arc::new(space.clone()), grid.clone())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::int;
    use crate::morphisms::{from_homeomorphism, gl_shuffle, value_relabel};

    #[test]
    fn one_point_space() {
        let u = upsilon(&FiniteSpace::discrete(1), &ValueGrid::binary(), 0).unwrap();
        assert_eq!(u.len(), 1);
        let r = reconstruct(&FiniteSpace::discrete(1), &ValueGrid::binary()).unwrap();
        assert!(r.report.verified);
        assert_eq!(r.report.ultrafilter_count, 1);
    }

    #[test]
    fn discrete_three_point_filter() {
        let d3 = FiniteSpace::discrete(3);
        let theta = crate::lattice::theta_lattice(&d3, &ValueGrid::binary()).unwrap();
        let u = upsilon_filter(&theta, 1).unwrap();
        let members: Vec<PointSet> = u.members().map(|a| *theta.set(a).unwrap()).collect();
        assert_eq!(members.len(), 4);
        assert!(members.iter().all(|s| s.contains(1)));
        assert!(theta.is_maximal_filter(&u));
        assert!(matches!(upsilon(&d3, &ValueGrid::binary(), 3), Err(Error::PointOutOfRange { .. })));
    }

    #[test]
    fn sierpinski_collapses_to_a_point() {
        let s = FiniteSpace::sierpinski();
        for x in 0..2 {
            assert_eq!(upsilon(&s, &ValueGrid::binary(), x).unwrap().len(), 1);
        }
        let r = reconstruct(&s, &ValueGrid::from_ints(&[0, 1, 2]).unwrap()).unwrap();
        assert_eq!(r.report.ultrafilter_count, 1);
        assert_eq!(r.report.quasicomponents, 1);
        assert!(r.report.verified);
        assert!(!r.report.upsilon_injective);
        assert!(!r.report.upsilon_homeomorphism);
    }

    #[test]
    fn two_sierpinski_copies() {
        let s = FiniteSpace::sierpinski();
        let two = s.disjoint_union(&s).unwrap();
        let r = reconstruct(&two, &ValueGrid::binary()).unwrap();
        assert_eq!(r.report.ultrafilter_count, 2);
        assert!(r.report.ultrafilter_space_discrete);
        assert!(r.report.verified);
    }

    #[test]
    fn discrete_spaces_up_to_six() {
        for n in 1..=6 {
            let r = reconstruct(&FiniteSpace::discrete(n), &ValueGrid::binary()).unwrap();
            assert!(r.report.verified && r.report.upsilon_homeomorphism, "n = {n}");
            assert_eq!(r.report.ultrafilter_count, n);
        }
    }

    #[test]
    fn tau_examples() {
        let d2 = FiniteSpace::discrete(2);
        let fam = grid_family(&d2, &ValueGrid::from_ints(&[0, 1, 2]).unwrap()).unwrap();
        let id = tau_map(&CompatMap::identity(fam.clone())).unwrap();
        assert!(id.map.iter().enumerate().all(|(i, &j)| i == j));

        let swap = SpaceMap::new(d2.clone(), d2.clone(), vec![1, 0]).unwrap();
        let t = from_homeomorphism(&swap, fam.clone(), fam.clone()).unwrap();
        let tau = tau_map(&t).unwrap();
        for s in PointSet::all_subsets(2) {
            assert_eq!(tau.apply(&s), Some(swap.image(&s)));
        }

        let alpha = [(0, 0), (1, 2), (2, 1)].iter().map(|&(a, b)| (int(a), int(b))).collect();
        let t = value_relabel(&alpha, fam).unwrap();
        let tau = tau_map(&t).unwrap();
        assert!(tau.map.iter().enumerate().all(|(i, &j)| i == j));
        let theta = vartheta_map(&t).unwrap();
        assert!(theta.map.iter().enumerate().all(|(i, &j)| i == j));
    }

    #[test]
    fn pipeline_recovers_generators() {
        let d3 = FiniteSpace::discrete(3);
        let fam = grid_family(&d3, &ValueGrid::from_ints(&[-1, 0, 1, 2]).unwrap()).unwrap();
        assert_eq!(
            induced_homeomorphism(&CompatMap::identity(fam.clone())).unwrap(),
            SpaceMap::identity(&d3)
        );
        let phi = SpaceMap::new(d3.clone(), d3.clone(), vec![2, 0, 1]).unwrap();
        let t = from_homeomorphism(&phi, fam.clone(), fam.clone()).unwrap();
        assert_eq!(induced_homeomorphism(&t).unwrap(), phi);

        let one = grid_family(&FiniteSpace::discrete(1), &ValueGrid::from_ints(&[-1, 0, 1, 2]).unwrap()).unwrap();
        let shuffle = gl_shuffle(&[1, 2, 0], one.clone()).unwrap();
        assert_eq!(induced_homeomorphism(&shuffle).unwrap(), SpaceMap::identity(one.space()));

        let report = run_pipeline(&t);
        assert!(report.succeeded());
        assert_eq!(report.assignment.as_deref(), Some(&[2, 0, 1][..]));
        assert_eq!(report.theta_sizes, (8, 8));
    }

    #[test]
    fn functoriality_on_a_pair() {
        let d3 = FiniteSpace::discrete(3);
        let fam = grid_family(&d3, &ValueGrid::binary()).unwrap();
        let a = SpaceMap::new(d3.clone(), d3.clone(), vec![1, 0, 2]).unwrap();
        let b = SpaceMap::new(d3.clone(), d3.clone(), vec![0, 2, 1]).unwrap();
        let t1 = from_homeomorphism(&a, fam.clone(), fam.clone()).unwrap();
        let t2 = from_homeomorphism(&b, fam.clone(), fam).unwrap();
        assert!(functoriality_holds(&t1, &t2).unwrap());
    }

    #[test]
    fn pipeline_rejects_size_mismatch() {
        let a = grid_family(&FiniteSpace::discrete(2), &ValueGrid::binary()).unwrap();
        let b = grid_family(&FiniteSpace::discrete(3), &ValueGrid::binary()).unwrap();
        let claimed = CompatMap::new(a, b, vec![0, 1, 2, 3]).unwrap();
        let report = run_pipeline(&claimed);
        assert!(!report.succeeded());
        assert_eq!(report.failed_stage, Some(Stage::Precondition));
        assert!(matches!(
            induced_homeomorphism(&claimed),
            Err(Error::Pipeline { stage: Stage::Precondition, .. })
        ));
    }
}
