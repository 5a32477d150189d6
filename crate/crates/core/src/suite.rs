//! Exhaustive and seeded sweeps over small models, one per acceptance
//! criterion.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::Result;
use crate::functions::{int, FnFamily, Rational, ValueGrid};
use crate::lattice::{spectrum, ult_space, FiniteLattice};
use crate::morphisms::{
    check_additive_lemma, check_clopen_props, check_corollary_suites, connected_restriction_violations,
    discont_construction, isomorphism_obstructions, CompatMap, CorollaryConfig, GeneratedIso, IsoGenerator,
    SuiteStatus,
};
use crate::reconstruction::{functoriality_holds, reconstruct, run_pipeline, tau_map, vartheta_map, Stage};
use crate::topology::{all_topologies, find_homeomorphism, small_spaces, FiniteSpace, PointSet};

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Largest space in the topology sweeps.
    pub max_points: usize,
    /// Largest discrete space for the point-recovery check.
    pub discrete_max: usize,
    /// Largest discrete space for generated isomorphisms.
    pub iso_max_points: usize,
    pub grid: ValueGrid,
    pub seed: u64,
    pub iso_count: usize,
    pub functoriality_pairs: usize,
    /// Budget for the order-equivalence sweep.
    pub time_limit: Duration,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_points: 4,
            discrete_max: 6,
            iso_max_points: 4,
            grid: ValueGrid::from_ints(&[-1, 0, 1, 2]).expect("valid grid"),
            seed: 0,
            iso_count: 240,
            functoriality_pairs: 50,
            time_limit: Duration::from_secs(120),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_secs: f64,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} criterion {:>2} {}: {} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed_secs
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub criteria: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

fn timed(id: u8, name: &str, body: impl FnOnce() -> Result<(bool, String)>) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = body().unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult {
        id,
        name: name.to_string(),
        passed,
        detail,
        elapsed_secs: start.elapsed().as_secs_f64(),
    }
}

fn grid_family(space: &FiniteSpace, grid: &ValueGrid) -> Result<FnFamily> {
    FnFamily::from_grid(Arc::new(space.clone()), grid.clone())
}

fn labeled_spaces(max_points: usize) -> Result<Vec<FiniteSpace>> {
    let mut out = Vec::new();
    for n in 1..=max_points {
        out.extend(all_topologies(n)?);
    }
    Ok(out)
}

/// `compat_le` and `f·g = f²` agree on every pair of every grid family.
pub fn criterion_1(config: &SuiteConfig) -> CriterionResult {
    let start = Instant::now();
    let mut result = timed(1, "order-oracle-equivalence", || {
        let mut pairs = 0usize;
        let mut discrepancies = 0usize;
        let spaces = small_spaces(config.max_points)?;
        for space in &spaces {
            let fam = grid_family(space, &config.grid)?;
            for f in fam.functions() {
                for g in fam.functions() {
                    pairs += 1;
                    if f.compat_le(g)? != f.compat_le_alg(g)? {
                        discrepancies += 1;
                    }
                }
            }
        }
        Ok((
            discrepancies == 0,
            format!("{} spaces, {pairs} pairs, {discrepancies} discrepancies", spaces.len()),
        ))
    });
    let elapsed = start.elapsed();
    if elapsed > config.time_limit {
        result.passed = false;
        result.detail += &format!(", over the {}s budget", config.time_limit.as_secs());
    }
    result
}

/// σ/ρ join and meet identities, complementation and orthogonality on every
/// pair, and the lattice laws of RO(X) and RC(X).
pub fn criterion_2(config: &SuiteConfig) -> CriterionResult {
    timed(2, "sigma-rho-lattice-identities", || {
        let mut pairs = 0usize;
        let mut failures = Vec::new();
        let spaces = small_spaces(config.max_points)?;
        for (k, space) in spaces.iter().enumerate() {
            let fam = grid_family(space, &config.grid)?;
            for f in fam.functions() {
                if f.rho() != f.sigma().complement() {
                    failures.push(format!("space {k}: ρ({f}) is not the complement of σ"));
                }
                for g in fam.functions() {
                    pairs += 1;
                    let sum = f.abs().add(&g.abs())?;
                    let prod = f.mul(g)?;
                    let (sf, sg, rf, rg) = (f.sigma(), g.sigma(), f.rho(), g.rho());
                    let ok = space.ro_join(&sf, &sg)? == sum.sigma()
                        && space.ro_meet(&sf, &sg)? == prod.sigma()
                        && space.rc_meet(&rf, &rg)? == sum.rho()
                        && space.rc_join(&rf, &rg)? == prod.rho()
                        && f.is_orthogonal(g)? == sf.is_disjoint(&sg);
                    if !ok {
                        failures.push(format!("space {k}: identity fails for {f}, {g}"));
                    }
                }
            }
            for (label, lattice) in [("RO", FiniteLattice::from_ro(space)), ("RC", FiniteLattice::from_rc(space))] {
                if let Some(t) = lattice.law_violation() {
                    failures.push(format!("space {k}: {label} law fails at {t:?}"));
                }
            }
        }
        Ok((
            failures.is_empty(),
            match failures.first() {
                None => format!("{} spaces, {pairs} pairs, 0 violations", spaces.len()),
                Some(first) => format!("{} violations, first: {first}", failures.len()),
            },
        ))
    })
}

/// Characterisations of `⪯` through positive and negative parts, and for
/// functions of one sign, on discrete spaces.
pub fn criterion_3(_config: &SuiteConfig) -> CriterionResult {
    timed(3, "positive-negative-parts", || {
        let grid = ValueGrid::from_ints(&[-2, -1, 0, 1, 2])?;
        let mut checked = [0usize; 3];
        let mut violations = 0usize;
        for n in 1..=3 {
            let fam = grid_family(&FiniteSpace::discrete(n), &grid)?;
            for (i, f) in fam.functions().iter().enumerate() {
                for (j, g) in fam.functions().iter().enumerate() {
                    let le = fam.le(i, j);
                    checked[0] += 1;
                    let parts = f.pos_part().compat_le(&g.pos_part())? && f.neg_part().compat_le(&g.neg_part())?;
                    violations += usize::from(le != parts);
                    if f.is_nonnegative() && g.is_nonnegative() {
                        checked[1] += 1;
                        let rhs = f.pointwise_le(g)? && g.pointwise_le(&g.sub(f)?.pmax(f)?)?;
                        violations += usize::from(le != rhs);
                    }
                    if f.is_nonpositive() && g.is_nonpositive() {
                        checked[2] += 1;
                        let rhs = g.pointwise_le(f)? && g.sub(f)?.pmin(f)?.pointwise_le(g)?;
                        violations += usize::from(le != rhs);
                    }
                }
            }
        }
        Ok((
            violations == 0,
            format!(
                "{} / {} / {} pairs for parts i / ii / iii, {violations} violations",
                checked[0], checked[1], checked[2]
            ),
        ))
    })
}

/// `Υ` is a homeomorphism on discrete spaces, and on every labeled space the
/// ultrafilter space is the discrete component quotient.
pub fn criterion_4(config: &SuiteConfig) -> CriterionResult {
    timed(4, "point-recovery", || {
        let binary = ValueGrid::binary();
        let mut failures = Vec::new();
        for n in 1..=config.discrete_max {
            let r = reconstruct(&FiniteSpace::discrete(n), &binary)?.report;
            let ok = r.upsilon_injective
                && r.upsilon_surjective
                && r.upsilon_continuous
                && r.upsilon_open
                && r.upsilon_homeomorphism
                && r.verified;
            if !ok {
                failures.push(format!("discrete {n}"));
            }
        }
        let spaces = labeled_spaces(config.max_points)?;
        for (k, space) in spaces.iter().enumerate() {
            let r = reconstruct(space, &binary)?;
            let (components, _) = space.component_quotient();
            let ok = r.report.ultrafilter_count == space.quasicomponents().len()
                && r.report.ultrafilter_space_discrete
                && r.report.verified
                && find_homeomorphism(r.ultrafilters.topology(), &components).is_some();
            if !ok {
                failures.push(format!("labeled space {k} on {} points", space.len()));
            }
        }
        Ok((
            failures.is_empty(),
            format!(
                "discrete 1..={}, {} labeled spaces, {} failures{}",
                config.discrete_max,
                spaces.len(),
                failures.len(),
                failures.first().map(|f| format!(", first: {f}")).unwrap_or_default()
            ),
        ))
    })
}

/// `U_a ∩ U_b = U_{a∨b}` on the spectrum and the ultrafilter space of every
/// lattice built by the previous sweeps.
pub fn criterion_5(config: &SuiteConfig) -> CriterionResult {
    timed(5, "spectrum-base-identity", || {
        let binary = ValueGrid::binary();
        let mut lattices = Vec::new();
        for space in small_spaces(config.max_points)? {
            let fam = grid_family(&space, &config.grid)?;
            lattices.push(FiniteLattice::from_ro(&space));
            lattices.push(FiniteLattice::from_rc(&space));
            lattices.push(FiniteLattice::theta_of_family(&fam)?);
            lattices.push(FiniteLattice::sigma_of_family(&fam)?);
        }
        for n in 1..=config.discrete_max {
            lattices.push(crate::lattice::theta_lattice(&FiniteSpace::discrete(n), &binary)?);
        }
        for space in labeled_spaces(config.max_points)? {
            lattices.push(crate::lattice::theta_lattice(&space, &binary)?);
        }
        let mut violations = 0;
        for l in &lattices {
            violations += spectrum(l)?.base_identity_violations(l).len();
            violations += ult_space(l)?.base_identity_violations(l).len();
        }
        Ok((
            violations == 0,
            format!("{} lattices, {violations} violations", lattices.len()),
        ))
    })
}

/// The seeded isomorphisms used by the pipeline and structural criteria.
pub fn generated_isomorphisms(config: &SuiteConfig) -> Result<Vec<GeneratedIso>> {
    IsoGenerator::new(config.seed, config.grid.clone(), config.iso_max_points).batch(config.iso_count)
}

/// Every generated isomorphism induces the homeomorphism it was built from,
/// and the construction is functorial.
pub fn criterion_6(config: &SuiteConfig) -> CriterionResult {
    timed(6, "induced-homeomorphism", || {
        let isos = generated_isomorphisms(config)?;
        let mut per_kind: BTreeMap<String, usize> = BTreeMap::new();
        let mut failures = Vec::new();
        for (k, g) in isos.iter().enumerate() {
            *per_kind.entry(format!("{:?}", g.kind)).or_default() += 1;
            let sets_ok = tau_map(&g.map).is_ok() && vartheta_map(&g.map).is_ok();
            let report = run_pipeline(&g.map);
            let recovered = report.assignment.as_deref() == Some(g.expected.assignment());
            if !(sets_ok && report.succeeded() && recovered) {
                failures.push(format!("#{k} {:?}: {:?}", g.kind, report.error));
            }
        }
        let mut gen = IsoGenerator::new(config.seed ^ 0x5eed, config.grid.clone(), config.iso_max_points);
        let mut functorial = 0;
        for _ in 0..config.functoriality_pairs {
            let (a, b) = gen.random_composable_pair()?;
            if functoriality_holds(&a.map, &b.map)? {
                functorial += 1;
            }
        }
        let passed = failures.is_empty()
            && isos.len() >= 200
            && functorial == config.functoriality_pairs
            && config.functoriality_pairs >= 50;
        Ok((
            passed,
            format!(
                "{} isomorphisms {per_kind:?}, {} failures, functoriality {functorial}/{}",
                isos.len(),
                failures.len(),
                config.functoriality_pairs
            ),
        ))
    })
}

/// No compatibility isomorphism between the grid families of discrete
/// spaces of sizes 2 and 3.
pub fn criterion_7(_config: &SuiteConfig) -> CriterionResult {
    timed(7, "size-obstruction", || {
        let binary = ValueGrid::binary();
        let a = Arc::new(grid_family(&FiniteSpace::discrete(2), &binary)?);
        let b = Arc::new(grid_family(&FiniteSpace::discrete(3), &binary)?);
        let cert = isomorphism_obstructions(&a, &b);
        let claimed = CompatMap::new(a.clone(), b.clone(), (0..a.len()).collect())?;
        let report = run_pipeline(&claimed);
        let rejected = !report.succeeded() && report.failed_stage == Some(Stage::Precondition);
        let passed = cert.excludes_isomorphism()
            && cert.cardinality_mismatch
            && cert.profile_mismatch
            && cert.source_size == 4
            && cert.target_size == 8
            && rejected;
        Ok((
            passed,
            format!(
                "sizes {} vs {}, profiles {:?} vs {:?}, claimed map stopped at {}",
                cert.source_size,
                cert.target_size,
                cert.source_profile,
                cert.target_profile,
                report.failed_stage.map_or("no stage".to_string(), |s| s.to_string())
            ),
        ))
    })
}

/// Orthogonality, additivity and clopen-set checks on every generated
/// isomorphism, plus the connected-restriction enumeration.
pub fn criterion_8(config: &SuiteConfig) -> CriterionResult {
    timed(8, "structural-propositions", || {
        let isos = generated_isomorphisms(config)?;
        let mut dirty = 0;
        for g in &isos {
            let additive = check_additive_lemma(&g.map)?;
            let clopen = check_clopen_props(&g.map)?;
            dirty += usize::from(!(additive.is_clean() && clopen.is_clean()));
        }
        let mut triples = 0;
        let mut connected_violations = 0;
        let spaces = small_spaces(config.max_points)?;
        for space in &spaces {
            let (checked, v) = connected_restriction_violations(&grid_family(space, &config.grid)?)?;
            triples += checked;
            connected_violations += v.len();
        }
        Ok((
            dirty == 0 && connected_violations == 0,
            format!(
                "{} isomorphisms with {dirty} dirty reports, {triples} connected triples on {} spaces with {connected_violations} violations",
                isos.len(),
                spaces.len()
            ),
        ))
    })
}

/// A component `F` of a grid family's space and two replacement
/// restrictions to swap on it.
#[derive(Clone, Debug)]
pub struct ConstructionInstance {
    pub name: String,
    pub family: Arc<FnFamily>,
    pub component: PointSet,
    pub f1: Vec<Rational>,
    pub f2: Vec<Rational>,
}

/// Bundled instances of the component-swap construction.
pub fn construction_instances() -> Result<Vec<ConstructionInstance>> {
    let sierpinski = FiniteSpace::sierpinski();
    let with_point = sierpinski.disjoint_union(&FiniteSpace::discrete(1))?;
    let two_copies = sierpinski.disjoint_union(&sierpinski)?;
    let fam = |s: &FiniteSpace, g: &[i64]| -> Result<Arc<FnFamily>> {
        Ok(Arc::new(grid_family(s, &ValueGrid::from_ints(g)?)?))
    };
    let instance = |name: &str, family, component, f1: &[i64], f2: &[i64]| ConstructionInstance {
        name: name.into(),
        family,
        component,
        f1: f1.iter().copied().map(int).collect(),
        f2: f2.iter().copied().map(int).collect(),
    };
    Ok(vec![
        instance(
            "discrete 3, F = {0}",
            fam(&FiniteSpace::discrete(3), &[0, 1, 2])?,
            PointSet::singleton(3, 0),
            &[1],
            &[2],
        ),
        instance(
            "sierpinski + point, F = {0,1}",
            fam(&with_point, &[-1, 0, 1, 2])?,
            PointSet::from_points(3, [0, 1])?,
            &[-1, -1],
            &[2, 2],
        ),
        instance(
            "two sierpinski copies, F = {2,3}",
            fam(&two_copies, &[-1, 0, 1, 2])?,
            PointSet::from_points(4, [2, 3])?,
            &[1, 1],
            &[-1, -1],
        ),
    ])
}

pub fn criterion_9(_config: &SuiteConfig) -> CriterionResult {
    timed(9, "component-swap-construction", || {
        let instances = construction_instances()?;
        let mut lines = Vec::new();
        let mut passed = instances.len() >= 3;
        for inst in instances {
            let c = discont_construction(inst.family, inst.component, &inst.f1, &inst.f2)?;
            let ok = c.map.is_compat_iso() && !c.map.is_identity() && c.trace.is_clean() && c.trace.moved > 0;
            passed &= ok;
            lines.push(format!("{}: {} moved", inst.name, c.trace.moved));
        }
        Ok((passed, lines.join("; ")))
    })
}

pub fn criterion_10(config: &SuiteConfig) -> CriterionResult {
    timed(10, "corollary-suites", || {
        let report = check_corollary_suites(&CorollaryConfig {
            seed: config.seed,
            ..CorollaryConfig::default()
        })?;
        let passed = !report.has_failures() && report.suites.iter().any(|s| s.status == SuiteStatus::Passed);
        let failed: Vec<&str> = report
            .suites
            .iter()
            .filter(|s| s.status == SuiteStatus::Failed)
            .map(|s| s.name.as_str())
            .collect();
        Ok((
            passed,
            format!(
                "{} suites, failed {:?}, vacuous {:?}",
                report.suites.len(),
                failed,
                report.vacuous()
            ),
        ))
    })
}

pub fn run_criterion(id: u8, config: &SuiteConfig) -> Option<CriterionResult> {
    Some(match id {
        1 => criterion_1(config),
        2 => criterion_2(config),
        3 => criterion_3(config),
        4 => criterion_4(config),
        5 => criterion_5(config),
        6 => criterion_6(config),
        7 => criterion_7(config),
        8 => criterion_8(config),
        9 => criterion_9(config),
        10 => criterion_10(config),
        _ => return None,
    })
}

pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    SuiteReport {
        seed: config.seed,
        criteria: (1..=10).filter_map(|id| run_criterion(id, config)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            max_points: 2,
            discrete_max: 3,
            iso_max_points: 2,
            iso_count: 10,
            functoriality_pairs: 5,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn cheap_criteria_pass_on_small_bounds() {
        let config = small();
        for id in [1, 2, 4, 5, 7, 8, 9] {
            let r = run_criterion(id, &config).unwrap();
            assert!(r.passed, "{r}");
        }
        assert!(run_criterion(11, &config).is_none());
    }

    #[test]
    fn undersized_batches_fail_honestly() {
        let r = criterion_6(&small());
        assert!(!r.passed, "{r}");
        assert!(r.detail.contains("0 failures"), "{r}");
    }

    #[test]
    fn result_line_format() {
        let r = CriterionResult {
            id: 3,
            name: "x".into(),
            passed: true,
            detail: "d".into(),
            elapsed_secs: 0.5,
        };
        assert_eq!(r.to_string(), "PASS criterion  3 x: d (0.50s)");
    }
}
