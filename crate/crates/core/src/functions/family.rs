use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::functions::scalar::{Rational, ValueGrid};
use crate::functions::ScalarFn;
use crate::topology::FiniteSpace;

/// Default bound on the number of functions an enumeration may produce.
pub const DEFAULT_FAMILY_CAP: usize = 1_000_000;

/// All continuous functions `space → grid`.
///
/// Continuous functions are exactly those constant on each quasicomponent,
/// so the family has `|grid|^k` members for `k` quasicomponents. The order is
/// lexicographic in grid index over the point-value vector.
pub fn enumerate_family(space: &Arc<FiniteSpace>, grid: &ValueGrid, cap: usize) -> Result<Vec<ScalarFn>> {
    // quasicomponents come out ordered by smallest point, which makes
    // lexicographic order on class values agree with point order
    let classes = space.quasicomponents();
    let k = classes.len() as u32;
    let count = (grid.len() as u128).checked_pow(k);
    match count {
        Some(c) if c <= cap as u128 => {}
        _ => {
            return Err(Error::FamilyOverflow {
                count: count.map_or_else(|| format!("{}^{}", grid.len(), k), |c| c.to_string()),
                cap,
            })
        }
    }
    let n = space.len();
    let mut class_of = vec![0; n];
    for (ci, c) in classes.iter().enumerate() {
        for x in c.iter() {
            class_of[x] = ci;
        }
    }
    let mut out = Vec::with_capacity(count.unwrap_or(0) as usize);
    let mut digits = vec![0usize; classes.len()];
    loop {
        let values = (0..n)
            .map(|x| grid.values()[digits[class_of[x]]].clone())
            .collect();
        out.push(ScalarFn::new_unchecked(space.clone(), values));
        // odometer with the last class varying fastest
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < grid.len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// An indexed family of functions on one space, always containing zero.
///
/// Grid families hold every continuous grid-valued function; explicit
/// families hold an arbitrary list (for instance the image of a map).
#[derive(Debug)]
pub struct FnFamily {
    space: Arc<FiniteSpace>,
    grid: Option<ValueGrid>,
    functions: Vec<ScalarFn>,
    index: HashMap<Vec<Rational>, usize>,
    zero: usize,
    order: OnceLock<FixedBitSet>,
}

impl FnFamily {
    pub fn from_grid(space: Arc<FiniteSpace>, grid: ValueGrid) -> Result<Self> {
        Self::from_grid_capped(space, grid, DEFAULT_FAMILY_CAP)
    }

    pub fn from_grid_capped(space: Arc<FiniteSpace>, grid: ValueGrid, cap: usize) -> Result<Self> {
        let functions = enumerate_family(&space, &grid, cap)?;
        let mut family = Self::build(space, functions)?;
        family.grid = Some(grid);
        Ok(family)
    }

    /// A family given by an explicit list; it must contain the zero function
    /// and no duplicates.
    pub fn from_functions(space: Arc<FiniteSpace>, functions: Vec<ScalarFn>) -> Result<Self> {
        if functions
            .iter()
            .any(|f| !(Arc::ptr_eq(f.space(), &space) || **f.space() == *space))
        {
            return Err(Error::SpaceMismatch);
        }
        Self::build(space, functions)
    }

    fn build(space: Arc<FiniteSpace>, functions: Vec<ScalarFn>) -> Result<Self> {
        let mut index = HashMap::with_capacity(functions.len());
        for (i, f) in functions.iter().enumerate() {
            if index.insert(f.values().to_vec(), i).is_some() {
                return Err(Error::Precondition(format!("duplicate function {f}")));
            }
        }
        let zero_values = vec![Rational::zero(); space.len()];
        let zero = *index
            .get(&zero_values)
            .ok_or_else(|| Error::Precondition("family lacks the zero function".into()))?;
        Ok(FnFamily {
            space,
            grid: None,
            functions,
            index,
            zero,
            order: OnceLock::new(),
        })
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    /// Same space and the same functions in the same order.
    pub fn same_members(&self, other: &FnFamily) -> bool {
        std::ptr::eq(self, other)
            || (*self.space == *other.space
                && self.functions.len() == other.functions.len()
                && self
                    .functions
                    .iter()
                    .zip(&other.functions)
                    .all(|(f, g)| f.values() == g.values()))
    }

    pub fn grid(&self) -> Option<&ValueGrid> {
        self.grid.as_ref()
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn functions(&self) -> &[ScalarFn] {
        &self.functions
    }

    pub fn get(&self, i: usize) -> &ScalarFn {
        &self.functions[i]
    }

    pub fn zero_index(&self) -> usize {
        self.zero
    }

    pub fn index_of_values(&self, values: &[Rational]) -> Option<usize> {
        self.index.get(values).copied()
    }

    pub fn index_of(&self, f: &ScalarFn) -> Option<usize> {
        if !f.same_space(&self.functions[self.zero]) {
            return None;
        }
        self.index_of_values(f.values())
    }

    /// Indices of nowhere-zero members (the invertible elements).
    pub fn invertible_indices(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.functions[i].is_nowhere_zero())
            .collect()
    }

    fn order_matrix(&self) -> &FixedBitSet {
        self.order.get_or_init(|| {
            let n = self.len();
            let mut bits = FixedBitSet::with_capacity(n * n);
            for (i, f) in self.functions.iter().enumerate() {
                let support = f.support();
                for (j, g) in self.functions.iter().enumerate() {
                    if support.iter().all(|x| f.value(x) == g.value(x)) {
                        bits.insert(i * n + j);
                    }
                }
            }
            bits
        })
    }

    /// `functions[i] ⪯ functions[j]`, from a cached relation table.
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.order_matrix().contains(i * self.len() + j)
    }

    /// Size of the down-set `{g : g ⪯ f}` of every member.
    pub fn down_set_sizes(&self) -> Vec<usize> {
        (0..self.len())
            .map(|j| (0..self.len()).filter(|&i| self.le(i, j)).count())
            .collect()
    }

    /// Whether `candidate` is the least common upper bound of `f` and `g`
    /// among the members of this family.
    pub fn is_least_upper_bound(&self, f: usize, g: usize, candidate: &ScalarFn) -> Result<bool> {
        let c = self
            .index_of(candidate)
            .ok_or_else(|| Error::NotInFamily(candidate.to_string()))?;
        if !(self.le(f, c) && self.le(g, c)) {
            return Ok(false);
        }
        Ok((0..self.len())
            .filter(|&u| self.le(f, u) && self.le(g, u))
            .all(|u| self.le(c, u)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::scalar::int;

    fn space(s: FiniteSpace) -> Arc<FiniteSpace> {
        Arc::new(s)
    }

    #[test]
    fn family_sizes() {
        let g = ValueGrid::binary();
        assert_eq!(enumerate_family(&space(FiniteSpace::discrete(1)), &g, 10).unwrap().len(), 2);
        assert_eq!(enumerate_family(&space(FiniteSpace::discrete(2)), &g, 10).unwrap().len(), 4);
        let sp = enumerate_family(&space(FiniteSpace::sierpinski()), &g, 10).unwrap();
        assert_eq!(sp.len(), 2);
        assert!(sp.iter().all(|f| f.value(0) == f.value(1)));
        let g3 = ValueGrid::from_ints(&[-1, 0, 1]).unwrap();
        assert_eq!(enumerate_family(&space(FiniteSpace::discrete(4)), &g3, 100).unwrap().len(), 81);
    }

    #[test]
    fn enumeration_is_lexicographic_in_grid_index() {
        let g = ValueGrid::from_ints(&[-1, 0, 2]).unwrap();
        let s = space(FiniteSpace::discrete(1).disjoint_union(&FiniteSpace::sierpinski()).unwrap());
        let fam = enumerate_family(&s, &g, 100).unwrap();
        let keys: Vec<Vec<usize>> = fam
            .iter()
            .map(|f| f.values().iter().map(|v| g.index_of(v).unwrap()).collect())
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(fam.len(), 9);
    }

    #[test]
    fn overflow_is_an_error() {
        let g = ValueGrid::from_ints(&[0, 1, 2]).unwrap();
        let err = enumerate_family(&space(FiniteSpace::discrete(5)), &g, 200).unwrap_err();
        assert_eq!(err, Error::FamilyOverflow { count: "243".into(), cap: 200 });
    }

    #[test]
    fn explicit_family_needs_zero() {
        let s = space(FiniteSpace::discrete(1));
        let one = ScalarFn::constant(s.clone(), int(1));
        assert!(FnFamily::from_functions(s.clone(), vec![one.clone()]).is_err());
        assert!(FnFamily::from_functions(s.clone(), vec![one.clone(), one.clone(), ScalarFn::zero(s.clone())]).is_err());
        let fam = FnFamily::from_functions(s.clone(), vec![one, ScalarFn::zero(s)]).unwrap();
        assert_eq!(fam.zero_index(), 1);
        assert!(fam.le(1, 0) && !fam.le(0, 1));
    }

    #[test]
    fn down_sets_on_two_points() {
        let fam = FnFamily::from_grid(space(FiniteSpace::discrete(2)), ValueGrid::binary()).unwrap();
        let mut sizes = fam.down_set_sizes();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 2, 4]);
    }
}
