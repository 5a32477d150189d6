use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::functions::{format_rational, int, ratio, FnFamily, Rational, ScalarFn, ValueGrid};
use crate::morphisms::random::{random_monotone, random_permutation};
use crate::morphisms::{from_homeomorphism, kaplansky_shift, value_relabel, CompatMap, PointwiseOrderMap};
use crate::topology::{FiniteSpace, SpaceMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteStatus {
    Passed,
    /// Only trivial instances exist, so nothing nontrivial was tested.
    Vacuous,
    Failed,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub instances: usize,
    pub nontrivial: usize,
    pub probes: usize,
    pub violations: Vec<String>,
    pub status: SuiteStatus,
}

impl SuiteOutcome {
    fn new(name: impl Into<String>) -> Self {
        SuiteOutcome {
            name: name.into(),
            instances: 0,
            nontrivial: 0,
            probes: 0,
            violations: Vec::new(),
            status: SuiteStatus::Passed,
        }
    }

    fn finish(mut self) -> Self {
        self.violations.sort();
        self.status = if !self.violations.is_empty() {
            SuiteStatus::Failed
        } else if self.nontrivial == 0 {
            SuiteStatus::Vacuous
        } else {
            SuiteStatus::Passed
        };
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CorollaryReport {
    pub suites: Vec<SuiteOutcome>,
}

impl CorollaryReport {
    pub fn has_failures(&self) -> bool {
        self.suites.iter().any(|s| s.status == SuiteStatus::Failed)
    }

    pub fn vacuous(&self) -> Vec<&str> {
        self.suites
            .iter()
            .filter(|s| s.status == SuiteStatus::Vacuous)
            .map(|s| s.name.as_str())
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct CorollaryConfig {
    /// Point counts of the discrete spaces.
    pub sizes: Vec<usize>,
    pub grids: Vec<ValueGrid>,
    pub trials: usize,
    pub seed: u64,
}

impl Default for CorollaryConfig {
    fn default() -> Self {
        CorollaryConfig {
            sizes: vec![1, 2, 3],
            grids: vec![
                ValueGrid::binary(),
                ValueGrid::from_ints(&[-1, 0, 1, 2]).unwrap(),
                ValueGrid::from_ints(&[-2, -1, 0, 1, 2]).unwrap(),
            ],
            trials: 4,
            seed: 0,
        }
    }
}

/// Runs the multiplicative, pointwise-order and monomial suites over
/// discrete spaces.
pub fn check_corollary_suites(config: &CorollaryConfig) -> Result<CorollaryReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut suites = Vec::new();

    let mut ring = SuiteOutcome::new("ring-isomorphisms-from-homeomorphisms");
    let mut rational = SuiteOutcome::new("multiplicative-bijections-of-rationals");
    let mut order = SuiteOutcome::new("pointwise-order-shifts");
    let mut monomial = SuiteOutcome::new("monomial-disjointness-preserving");
    for grid in &config.grids {
        let mut relabel = SuiteOutcome::new(format!("multiplicative-relabelings-of-{grid}"));
        let alphas = multiplicative_relabelings(grid);
        for &n in &config.sizes {
            let space = Arc::new(FiniteSpace::discrete(n));
            let fam = Arc::new(FnFamily::from_grid(space.clone(), grid.clone())?);
            let d = FiniteSpace::discrete(n);

            for alpha in &alphas {
                let t = value_relabel(alpha, fam.clone())?;
                relabel.instances += 1;
                relabel.nontrivial += usize::from(alpha.iter().any(|(a, b)| a != b));
                probe_family_map(&t, &mut relabel)?;
            }

            for _ in 0..config.trials {
                let phi = SpaceMap::new(d.clone(), d.clone(), random_permutation(&mut rng, n))?;
                let t = from_homeomorphism(&phi, fam.clone(), fam.clone())?;
                ring.instances += 1;
                ring.nontrivial += usize::from(!t.is_identity());
                probe_family_map(&t, &mut ring)?;

                let alpha = RationalMultiplicative::random(&mut rng);
                let phi = SpaceMap::new(d.clone(), d.clone(), random_permutation(&mut rng, n))?;
                rational.instances += 1;
                let images = fam
                    .functions()
                    .iter()
                    .map(|f| alpha.apply_fn(f, &phi))
                    .collect::<Result<Vec<_>>>()?;
                rational.nontrivial += usize::from(images.iter().zip(fam.functions()).any(|(a, b)| a != b));
                probe_pointwise_map(&fam, &images, &mut rational, &format!("{alpha} after {phi:?}"))?;

                let h: Vec<_> = (0..n).map(|_| random_monotone(&mut rng)).collect();
                let phi = SpaceMap::new(d.clone(), d.clone(), random_permutation(&mut rng, n))?;
                let s = PointwiseOrderMap::composed(fam.clone(), &phi, &h)?;
                order.instances += 1;
                match kaplansky_shift(&s) {
                    Ok(t) => {
                        order.nontrivial += usize::from(!t.is_identity());
                        order.probes += t.source().len() * t.source().len();
                        if t.image(t.source().zero_index()).values().iter().any(|v| !v.is_zero()) {
                            order.violations.push(format!("T0 ≠ 0 for {h:?}"));
                        }
                    }
                    Err(e) => order.violations.push(format!("{h:?} after {phi:?}: {e}")),
                }

                let weights: Vec<Rational> = (0..n).map(|_| random_weight(&mut rng)).collect();
                let phi = SpaceMap::new(d.clone(), d.clone(), random_permutation(&mut rng, n))?;
                let m = Monomial::new(phi, weights);
                monomial.instances += 1;
                monomial.nontrivial += usize::from(!m.is_identity());
                probe_monomial(&fam, &m, &mut monomial)?;
            }
            if n == 2 {
                // diag(2, −3) after the swap
                let swap = SpaceMap::new(d.clone(), d.clone(), vec![1, 0])?;
                let m = Monomial::new(swap, vec![int(2), int(-3)]);
                monomial.instances += 1;
                monomial.nontrivial += 1;
                probe_monomial(&fam, &m, &mut monomial)?;
            }
        }
        suites.push(relabel.finish());
    }
    suites.push(ring.finish());
    suites.push(rational.finish());
    suites.push(order.finish());
    suites.push(monomial.finish());
    Ok(CorollaryReport { suites })
}

/// Zero-fixing bijections `α` of the grid with `α(ab) = α(a)α(b)` whenever
/// `a`, `b` and `ab` all lie in the grid.
pub fn multiplicative_relabelings(grid: &ValueGrid) -> Vec<BTreeMap<Rational, Rational>> {
    let nonzero: Vec<Rational> = grid.nonzero().cloned().collect();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..nonzero.len()).collect();
    permutations(&mut perm, 0, &mut |p| {
        let mut alpha: BTreeMap<Rational, Rational> =
            nonzero.iter().zip(p).map(|(v, &i)| (v.clone(), nonzero[i].clone())).collect();
        alpha.insert(Rational::zero(), Rational::zero());
        let multiplicative = grid.values().iter().all(|a| {
            grid.values().iter().all(|b| {
                let ab = a * b;
                !grid.contains(&ab) || alpha[&ab] == &alpha[a] * &alpha[b]
            })
        });
        if multiplicative {
            out.push(alpha);
        }
    });
    out
}

fn permutations(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, visit);
        p.swap(k, i);
    }
}

/// Checks a map between grid families against the algebraic description of
/// `⪯`: `fg = f²` forces `Tf·Tg = (Tf)²`, products and sums that stay in
/// the family are preserved, and the map is a compatibility isomorphism.
fn probe_family_map(t: &CompatMap, out: &mut SuiteOutcome) -> Result<()> {
    let src = t.source();
    if !t.is_compat_iso() {
        out.violations.push(format!("not a compatibility isomorphism: {:?}", t.iso_witness()));
    }
    for (i, f) in src.functions().iter().enumerate() {
        for (j, g) in src.functions().iter().enumerate() {
            out.probes += 1;
            let (tf, tg) = (t.image(i), t.image(j));
            let fg = f.mul(g)?;
            if let Some(k) = src.index_of(&fg) {
                if *t.image(k) != tf.mul(tg)? {
                    out.violations.push(format!("T({f}·{g}) ≠ T{f}·T{g}"));
                }
            }
            if f.compat_le_alg(g)? && tf.mul(tg)? != tf.mul(tf)? {
                out.violations.push(format!("{f} ⪯ {g} but T{f}·T{g} ≠ (T{f})²"));
            }
        }
    }
    Ok(())
}

/// Same checks for a map given by its images, which may leave every grid.
fn probe_pointwise_map(fam: &Arc<FnFamily>, images: &[ScalarFn], out: &mut SuiteOutcome, label: &str) -> Result<()> {
    let target = Arc::new(FnFamily::from_functions(images[0].space().clone(), images.to_vec())?);
    let t = CompatMap::new(fam.clone(), target, (0..fam.len()).collect())?;
    if !t.is_compat_iso() {
        out.violations.push(format!("{label}: not a compatibility isomorphism: {:?}", t.iso_witness()));
    }
    for (i, f) in fam.functions().iter().enumerate() {
        for (j, g) in fam.functions().iter().enumerate() {
            out.probes += 1;
            let (tf, tg) = (&images[i], &images[j]);
            let fg = f.mul(g)?;
            if let Some(k) = fam.index_of(&fg) {
                if images[k] != tf.mul(tg)? {
                    out.violations.push(format!("{label}: T({f}·{g}) ≠ T{f}·T{g}"));
                }
            }
            let before = f.compat_le_alg(g)?;
            let after = tf.mul(tg)? == tf.mul(tf)?;
            if before != after || after != tf.compat_le(tg)? {
                out.violations.push(format!("{label}: order differs on {f}, {g}"));
            }
        }
    }
    Ok(())
}

const PRIMES: [i64; 4] = [2, 3, 5, 7];

/// A multiplicative bijection of ℚ: permutes the primes 2, 3, 5, 7 and
/// flips the sign once for every odd power of a marked prime.
#[derive(Clone, Debug)]
pub struct RationalMultiplicative {
    prime_image: [i64; 4],
    sign_flip: [bool; 4],
}

impl RationalMultiplicative {
    pub fn new(prime_image: [i64; 4], sign_flip: [bool; 4]) -> Self {
        RationalMultiplicative {
            prime_image,
            sign_flip,
        }
    }

    fn random(rng: &mut ChaCha8Rng) -> Self {
        let mut image = PRIMES;
        image.shuffle(rng);
        let flips = [rng.gen(), rng.gen(), rng.gen(), rng.gen()];
        Self::new(image, flips)
    }

    fn apply_int(&self, mut m: BigInt) -> (BigInt, bool) {
        let mut out = BigInt::one();
        let mut flip = false;
        for (k, &p) in PRIMES.iter().enumerate() {
            let p = BigInt::from(p);
            while (&m % &p).is_zero() {
                m /= &p;
                out *= self.prime_image[k];
                flip ^= self.sign_flip[k];
            }
        }
        (out * m, flip)
    }

    pub fn apply(&self, v: &Rational) -> Rational {
        if v.is_zero() {
            return Rational::zero();
        }
        let (num, f1) = self.apply_int(v.numer().abs());
        let (den, f2) = self.apply_int(v.denom().clone());
        let magnitude = Rational::new(num, den);
        if v.is_negative() ^ f1 ^ f2 {
            -magnitude
        } else {
            magnitude
        }
    }

    /// `(Tf)(φ(x)) = α(f(x))`.
    fn apply_fn(&self, f: &ScalarFn, phi: &SpaceMap) -> Result<ScalarFn> {
        let mut values = vec![Rational::zero(); f.values().len()];
        for (x, v) in f.values().iter().enumerate() {
            values[phi.apply(x)] = self.apply(v);
        }
        ScalarFn::new(Arc::new(phi.target().clone()), values)
    }
}

impl std::fmt::Display for RationalMultiplicative {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = PRIMES
            .iter()
            .zip(self.prime_image.iter().zip(&self.sign_flip))
            .map(|(p, (q, s))| format!("{p}→{}{q}", if *s { "-" } else { "" }))
            .collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

fn random_weight(rng: &mut ChaCha8Rng) -> Rational {
    let choices = [int(1), int(-1), int(2), int(-3), ratio(1, 2), ratio(-2, 3)];
    choices.choose(rng).expect("nonempty").clone()
}

/// `(Tf)(φ(x)) = w_{φ(x)} · f(x)`: a permutation followed by nonzero
/// scalings, the linear disjointness-preserving bijections on `ℚⁿ`.
#[derive(Clone, Debug)]
pub struct Monomial {
    phi: SpaceMap,
    weights: Vec<Rational>,
}

impl Monomial {
    pub fn new(phi: SpaceMap, weights: Vec<Rational>) -> Self {
        assert!(weights.iter().all(|w| !w.is_zero()), "weights must be nonzero");
        Monomial { phi, weights }
    }

    pub fn is_identity(&self) -> bool {
        self.phi.assignment().iter().enumerate().all(|(i, &j)| i == j) && self.weights.iter().all(|w| w.is_one())
    }

    pub fn apply(&self, f: &ScalarFn) -> Result<ScalarFn> {
        let mut values = vec![Rational::zero(); f.values().len()];
        for (x, v) in f.values().iter().enumerate() {
            let y = self.phi.apply(x);
            values[y] = &self.weights[y] * v;
        }
        ScalarFn::new(Arc::new(self.phi.target().clone()), values)
    }
}

/// The chain `f ⪯ g ⇒ (g−f)·f = 0 ⇒ T(g−f)·Tf = 0 ⇒ Tg = T(g−f) + Tf ⪰ Tf`
/// and disjointness preservation, over every pair of the family.
fn probe_monomial(fam: &FnFamily, m: &Monomial, out: &mut SuiteOutcome) -> Result<()> {
    let images = fam.functions().iter().map(|f| m.apply(f)).collect::<Result<Vec<_>>>()?;
    let label = |f: &ScalarFn, g: &ScalarFn| {
        let w: Vec<String> = m.weights.iter().map(format_rational).collect();
        format!("w=[{}] φ={:?} on {f}, {g}", w.join(","), m.phi.assignment())
    };
    for (i, f) in fam.functions().iter().enumerate() {
        for (j, g) in fam.functions().iter().enumerate() {
            out.probes += 1;
            let (tf, tg) = (&images[i], &images[j]);
            if f.is_orthogonal(g)? && !tf.is_orthogonal(tg)? {
                out.violations.push(format!("disjointness lost: {}", label(f, g)));
            }
            if !f.compat_le(g)? {
                continue;
            }
            let diff = g.sub(f)?;
            if !diff.mul(f)?.is_zero() {
                out.violations.push(format!("(g−f)·f ≠ 0: {}", label(f, g)));
                continue;
            }
            let tdiff = m.apply(&diff)?;
            if !tdiff.mul(tf)?.is_zero() {
                out.violations.push(format!("T(g−f)·Tf ≠ 0: {}", label(f, g)));
            }
            if tdiff.add(tf)? != *tg {
                out.violations.push(format!("T(g−f) + Tf ≠ Tg: {}", label(f, g)));
            }
            if !tf.compat_le(tg)? {
                out.violations.push(format!("Tf ⋠ Tg: {}", label(f, g)));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabelings_on_small_grids() {
        assert_eq!(multiplicative_relabelings(&ValueGrid::binary()).len(), 1);
        assert_eq!(multiplicative_relabelings(&ValueGrid::from_ints(&[-1, 0, 1, 2]).unwrap()).len(), 1);
        let five = multiplicative_relabelings(&ValueGrid::from_ints(&[-2, -1, 0, 1, 2]).unwrap());
        assert_eq!(five.len(), 2);
        assert!(five.iter().any(|a| a[&int(2)] == int(-2)));
    }

    #[test]
    fn rational_map_is_multiplicative() {
        let alpha = RationalMultiplicative::new([3, 2, 7, 5], [true, false, false, true]);
        let samples = [ratio(4, 9), ratio(-5, 6), int(0), int(1), int(-1), ratio(11, 14), int(12)];
        for a in &samples {
            for b in &samples {
                assert_eq!(alpha.apply(&(a * b)), alpha.apply(a) * alpha.apply(b));
            }
        }
        assert_eq!(alpha.apply(&int(2)), int(-3));
        assert_eq!(alpha.apply(&ratio(1, 7)), ratio(-1, 5));
    }

    #[test]
    fn monomial_example_on_two_points() {
        let d = FiniteSpace::discrete(2);
        let fam = FnFamily::from_grid(Arc::new(d.clone()), ValueGrid::from_ints(&[-1, 0, 1, 2]).unwrap()).unwrap();
        let m = Monomial::new(SpaceMap::new(d.clone(), d, vec![1, 0]).unwrap(), vec![int(2), int(-3)]);
        let f = fam.get(fam.index_of_values(&[int(1), int(2)]).unwrap());
        assert_eq!(m.apply(f).unwrap().values(), &[int(4), int(-3)]);
        let mut out = SuiteOutcome::new("example");
        probe_monomial(&fam, &m, &mut out).unwrap();
        assert!(out.violations.is_empty());
        assert_eq!(out.probes, 256);
    }

    #[test]
    fn default_suites_pass_and_name_vacuous_ones() {
        let report = check_corollary_suites(&CorollaryConfig::default()).unwrap();
        assert!(!report.has_failures(), "{report:#?}");
        let vacuous = report.vacuous();
        assert!(vacuous.contains(&"multiplicative-relabelings-of-{0,1}"));
        assert!(!vacuous.contains(&"multiplicative-relabelings-of-{-2,-1,0,1,2}"));
    }
}
