use std::fmt;

use fixedbitset::FixedBitSet;

use crate::lattice::FiniteLattice;

/// A set of lattice elements, stored as a bit vector over element indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Filter {
    members: FixedBitSet,
}

/// Lexicographic on the sorted member lists.
impl Ord for Filter {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.members().cmp(other.members())
    }
}

impl PartialOrd for Filter {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Filter {
    pub fn from_members(lattice: &FiniteLattice, members: impl IntoIterator<Item = usize>) -> Self {
        let mut bits = FixedBitSet::with_capacity(lattice.len());
        for a in members {
            bits.insert(a);
        }
        Filter { members: bits }
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.contains(a)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    pub fn is_subset(&self, other: &Filter) -> bool {
        self.members.is_subset(&other.members)
    }
}

impl fmt::Debug for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members()).finish()
    }
}

impl FiniteLattice {
    /// `↑a`
    pub fn principal_filter(&self, a: usize) -> Filter {
        Filter::from_members(self, (0..self.len()).filter(|&b| self.le(a, b)))
    }

    /// Nonempty, upward closed, closed under meets, and proper.
    pub fn is_filter(&self, f: &Filter) -> bool {
        let m = self.len();
        if f.is_empty() || f.contains(self.bottom()) {
            return false;
        }
        f.members().all(|a| {
            (0..m).all(|b| !self.le(a, b) || f.contains(b))
                && f.members().all(|b| f.contains(self.meet(a, b)))
        })
    }

    /// A filter that also splits joins: `a ∨ b ∈ F` forces `a ∈ F` or `b ∈ F`.
    pub fn is_prime_filter(&self, f: &Filter) -> bool {
        let m = self.len();
        self.is_filter(f)
            && (0..m).all(|a| {
                (0..m).all(|b| !f.contains(self.join(a, b)) || f.contains(a) || f.contains(b))
            })
    }

    /// Smallest upward-closed, meet-closed set containing `seed`; it may
    /// contain the bottom element.
    pub fn generated_filter(&self, seed: impl IntoIterator<Item = usize>) -> Filter {
        let seed: Vec<usize> = seed.into_iter().collect();
        if seed.is_empty() {
            return Filter::from_members(self, [self.top()]);
        }
        let glb = seed[1..].iter().fold(seed[0], |acc, &b| self.meet(acc, b));
        self.principal_filter(glb)
    }

    /// Whether no one-element extension of `f` generates a proper filter.
    pub fn is_maximal_filter(&self, f: &Filter) -> bool {
        self.is_filter(f)
            && (0..self.len()).filter(|&e| !f.contains(e)).all(|e| {
                self.generated_filter(f.members().chain([e]))
                    .contains(self.bottom())
            })
    }

    /// Every proper filter. In a finite lattice each filter is the principal
    /// filter of the meet of its members, so seeding with each non-bottom
    /// element finds them all. Sorted canonically.
    pub fn all_filters(&self) -> Vec<Filter> {
        let mut out: Vec<Filter> = (0..self.len())
            .filter(|&a| a != self.bottom())
            .map(|a| self.principal_filter(a))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn all_prime_filters(&self) -> Vec<Filter> {
        self.all_filters()
            .into_iter()
            .filter(|f| self.is_prime_filter(f))
            .collect()
    }

    pub fn all_ultrafilters(&self) -> Vec<Filter> {
        self.all_filters()
            .into_iter()
            .filter(|f| self.is_maximal_filter(f))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::FiniteSpace;

    /// Brute-force filter enumeration over every subset of elements.
    fn filters_by_brute_force(l: &FiniteLattice) -> Vec<Filter> {
        let m = l.len();
        let mut out: Vec<Filter> = (0u64..1 << m)
            .map(|code| Filter::from_members(l, (0..m).filter(|&a| code >> a & 1 == 1)))
            .filter(|f| l.is_filter(f))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn two_element_lattice() {
        let l = FiniteLattice::chain(2);
        let ult = l.all_ultrafilters();
        assert_eq!(ult.len(), 1);
        assert_eq!(ult[0].members().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn powerset_of_three() {
        let l = FiniteLattice::from_ro(&FiniteSpace::discrete(3));
        let ult = l.all_ultrafilters();
        assert_eq!(ult.len(), 3);
        for u in &ult {
            let atoms: Vec<usize> = u.members().filter(|&a| l.set(a).unwrap().len() == 1).collect();
            assert_eq!(atoms.len(), 1);
            assert_eq!(*u, l.principal_filter(atoms[0]));
        }
        assert_eq!(l.all_prime_filters(), ult);
    }

    #[test]
    fn three_chain() {
        let l = FiniteLattice::chain(3);
        let primes = l.all_prime_filters();
        let as_vecs: Vec<Vec<usize>> = primes.iter().map(|f| f.members().collect()).collect();
        assert_eq!(as_vecs, vec![vec![1, 2], vec![2]]);
        let ult: Vec<Vec<usize>> = l.all_ultrafilters().iter().map(|f| f.members().collect()).collect();
        assert_eq!(ult, vec![vec![1, 2]]);
    }

    #[test]
    fn seeded_enumeration_matches_brute_force() {
        for m in 1..=5 {
            for l in crate::lattice::small_lattices(m) {
                assert_eq!(l.all_filters(), filters_by_brute_force(&l));
            }
        }
        let l = FiniteLattice::from_rc(&FiniteSpace::discrete(3));
        assert_eq!(l.all_filters(), filters_by_brute_force(&l));
    }

    #[test]
    fn ultrafilters_are_prime_in_distributive_lattices() {
        for space in crate::topology::small_spaces(4).unwrap() {
            for l in [FiniteLattice::from_ro(&space), FiniteLattice::from_rc(&space)] {
                for u in l.all_ultrafilters() {
                    assert!(l.is_prime_filter(&u));
                }
            }
        }
    }

    #[test]
    fn diamond_m3_has_non_prime_ultrafilters() {
        // in the non-distributive M3 the atoms' filters are maximal but the
        // top is the join of the other two atoms
        let m3 = crate::lattice::small_lattices(5)
            .into_iter()
            .find(|l| l.atoms().len() == 3)
            .unwrap();
        let ult = m3.all_ultrafilters();
        assert_eq!(ult.len(), 3);
        assert!(ult.iter().all(|u| !m3.is_prime_filter(u)));
    }
}
