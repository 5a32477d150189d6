use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::functions::scalar::{format_rational, Rational};
use crate::topology::{FiniteSpace, PointSet};

/// Returns the first fiber that is not open, as `(value, fiber)`.
fn first_bad_fiber(space: &FiniteSpace, values: &[Rational]) -> Option<(Rational, PointSet)> {
    let n = space.len();
    let mut fibers: BTreeMap<&Rational, PointSet> = BTreeMap::new();
    for (x, v) in values.iter().enumerate() {
        let entry = fibers.entry(v).or_insert_with(|| PointSet::empty(n));
        *entry = entry.with(x);
    }
    fibers
        .into_iter()
        .find(|(_, fiber)| !space.is_open(fiber))
        .map(|(v, fiber)| (v.clone(), fiber))
}

/// Continuity test for a raw value vector: every fiber must be open.
///
/// Only finitely many distinct values are attained, so around each value
/// there is an open interval missing all the others; its preimage is the
/// fiber. Conversely every open set of reals pulls back to a union of
/// fibers. Hence continuity is equivalent to all fibers being open.
pub fn is_continuous(space: &FiniteSpace, values: &[Rational]) -> Result<bool> {
    if values.len() != space.len() {
        return Err(Error::LengthMismatch {
            expected: space.len(),
            found: values.len(),
        });
    }
    Ok(first_bad_fiber(space, values).is_none())
}

/// Second continuity test: the preimage of every open interval whose
/// endpoints sit in the gaps between attained values (or beyond them) must
/// be open.
pub fn is_continuous_by_intervals(space: &FiniteSpace, values: &[Rational]) -> Result<bool> {
    if values.len() != space.len() {
        return Err(Error::LengthMismatch {
            expected: space.len(),
            found: values.len(),
        });
    }
    let mut attained: Vec<&Rational> = values.iter().collect();
    attained.sort();
    attained.dedup();
    if attained.is_empty() {
        return Ok(true);
    }
    let one = Rational::from_integer(1.into());
    let two = Rational::from_integer(2.into());
    let mut cuts = vec![attained[0] - &one];
    for w in attained.windows(2) {
        cuts.push((w[0] + w[1]) / &two);
    }
    cuts.push(attained[attained.len() - 1] + &one);
    for lo in 0..cuts.len() {
        for hi in lo + 1..cuts.len() {
            let pre = PointSet::from_points(
                space.len(),
                (0..values.len()).filter(|&x| values[x] > cuts[lo] && values[x] < cuts[hi]),
            )?;
            if !space.is_open(&pre) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A continuous, exact-rational-valued function on a finite space.
#[derive(Clone)]
pub struct ScalarFn {
    space: Arc<FiniteSpace>,
    values: Vec<Rational>,
    nonzero: PointSet,
}

impl ScalarFn {
    pub fn new(space: Arc<FiniteSpace>, values: Vec<Rational>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::LengthMismatch {
                expected: space.len(),
                found: values.len(),
            });
        }
        if let Some((v, fiber)) = first_bad_fiber(&space, &values) {
            return Err(Error::Discontinuous {
                value: format_rational(&v),
                fiber: fiber.to_vec(),
            });
        }
        Ok(Self::new_unchecked(space, values))
    }

    pub(crate) fn new_unchecked(space: Arc<FiniteSpace>, values: Vec<Rational>) -> Self {
        let nonzero = PointSet::from_points(
            space.len(),
            values.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(x, _)| x),
        )
        .expect("in range");
        ScalarFn {
            space,
            values,
            nonzero,
        }
    }

    pub fn constant(space: Arc<FiniteSpace>, value: Rational) -> Self {
        let values = vec![value; space.len()];
        Self::new_unchecked(space, values)
    }

    pub fn zero(space: Arc<FiniteSpace>) -> Self {
        Self::constant(space, Rational::zero())
    }

    /// `value` on `set`, zero elsewhere; continuous only for clopen `set`.
    pub fn indicator(space: Arc<FiniteSpace>, set: &PointSet, value: Rational) -> Result<Self> {
        space.check(set)?;
        let values = (0..space.len())
            .map(|x| if set.contains(x) { value.clone() } else { Rational::zero() })
            .collect();
        ScalarFn::new(space, values)
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, x: usize) -> &Rational {
        &self.values[x]
    }

    pub fn same_space(&self, other: &ScalarFn) -> bool {
        Arc::ptr_eq(&self.space, &other.space) || *self.space == *other.space
    }

    fn require_same_space(&self, other: &ScalarFn) -> Result<()> {
        if self.same_space(other) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// `{x : f(x) ≠ 0}`
    pub fn nonzero_set(&self) -> PointSet {
        self.nonzero
    }

    pub fn zero_set(&self) -> PointSet {
        self.nonzero.complement()
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero.is_empty()
    }

    pub fn is_nowhere_zero(&self) -> bool {
        self.nonzero.is_full()
    }

    /// Closure of the nonzero set.
    pub fn support(&self) -> PointSet {
        self.space.closure_unchecked(&self.nonzero)
    }

    /// Interior of the support.
    pub fn sigma(&self) -> PointSet {
        self.space.interior_unchecked(&self.support())
    }

    /// Closure of the interior of the zero set.
    pub fn rho(&self) -> PointSet {
        self.space
            .closure_unchecked(&self.space.interior_unchecked(&self.zero_set()))
    }

    /// Compatibility ordering: `self ⪯ other` iff `other` agrees with `self`
    /// on the support of `self`.
    pub fn compat_le(&self, other: &ScalarFn) -> Result<bool> {
        self.require_same_space(other)?;
        Ok(self
            .support()
            .iter()
            .all(|x| self.values[x] == other.values[x]))
    }

    /// Algebraic form of the compatibility ordering: `f·g = f²`.
    pub fn compat_le_alg(&self, other: &ScalarFn) -> Result<bool> {
        self.require_same_space(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .all(|(f, g)| f * g == f * f))
    }

    fn zip_with(&self, other: &ScalarFn, op: impl Fn(&Rational, &Rational) -> Rational) -> Result<ScalarFn> {
        self.require_same_space(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| op(a, b))
            .collect();
        ScalarFn::new(self.space.clone(), values)
    }

    fn map_values(&self, op: impl Fn(&Rational) -> Rational) -> ScalarFn {
        let values = self.values.iter().map(op).collect();
        ScalarFn::new(self.space.clone(), values).expect("fibers of a function of f are unions of fibers of f")
    }

    pub fn add(&self, other: &ScalarFn) -> Result<ScalarFn> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ScalarFn) -> Result<ScalarFn> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &ScalarFn) -> Result<ScalarFn> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn pmin(&self, other: &ScalarFn) -> Result<ScalarFn> {
        self.zip_with(other, |a, b| a.min(b).clone())
    }

    pub fn pmax(&self, other: &ScalarFn) -> Result<ScalarFn> {
        self.zip_with(other, |a, b| a.max(b).clone())
    }

    pub fn neg(&self) -> ScalarFn {
        self.map_values(|v| -v)
    }

    pub fn abs(&self) -> ScalarFn {
        self.map_values(|v| v.abs())
    }

    /// `max{f, 0}`
    pub fn pos_part(&self) -> ScalarFn {
        self.map_values(|v| if v.is_positive() { v.clone() } else { Rational::zero() })
    }

    /// `−min{f, 0}`
    pub fn neg_part(&self) -> ScalarFn {
        self.map_values(|v| if v.is_negative() { -v } else { Rational::zero() })
    }

    /// Pointwise `self ≤ other`.
    pub fn pointwise_le(&self, other: &ScalarFn) -> Result<bool> {
        self.require_same_space(other)?;
        Ok(self.values.iter().zip(&other.values).all(|(a, b)| a <= b))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    pub fn is_nonpositive(&self) -> bool {
        self.values.iter().all(|v| !v.is_positive())
    }

    /// `f·g = 0`
    pub fn is_orthogonal(&self, other: &ScalarFn) -> Result<bool> {
        self.require_same_space(other)?;
        Ok(self.nonzero.is_disjoint(&other.nonzero))
    }

    /// Supremum of two orthogonal functions in the compatibility ordering.
    pub fn compat_sup(&self, other: &ScalarFn) -> Result<ScalarFn> {
        if !self.is_orthogonal(other)? {
            return Err(Error::NotOrthogonal);
        }
        self.add(other)
    }

    /// Restriction to the points of `set`, in increasing point order.
    pub fn restrict(&self, set: &PointSet) -> Vec<Rational> {
        set.iter().map(|x| self.values[x].clone()).collect()
    }

    pub fn agrees_on(&self, other: &ScalarFn, set: &PointSet) -> bool {
        set.iter().all(|x| self.values[x] == other.values[x])
    }
}

impl PartialEq for ScalarFn {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values && self.same_space(other)
    }
}

impl Eq for ScalarFn {}

impl Hash for ScalarFn {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.values.hash(state);
    }
}

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(","))
    }
}
