//! Enumeration of all topologies on a small point set.
//!
//! Topologies on a finite set correspond one-to-one with preorders (the
//! open sets are exactly the up-sets), so we enumerate preorders and read
//! off their up-set families.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::topology::{FiniteSpace, PointSet};

/// Largest point count accepted by the enumerators.
pub const MAX_ENUMERATION_POINTS: usize = 5;

/// Every topology on `n` labelled points.
pub fn all_topologies(n: usize) -> Result<Vec<FiniteSpace>> {
    if n > MAX_ENUMERATION_POINTS {
        return Err(Error::TooManyPoints(n));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    let mut out = Vec::new();
    for code in 0u64..(1u64 << pairs.len()) {
        // up[x]: bit y set when x ≤ y
        let mut up = vec![0u64; n];
        for (x, u) in up.iter_mut().enumerate() {
            *u |= 1 << x;
        }
        for (i, &(x, y)) in pairs.iter().enumerate() {
            if code >> i & 1 == 1 {
                up[x] |= 1 << y;
            }
        }
        let transitive = (0..n).all(|x| {
            (0..n)
                .filter(|&y| up[x] >> y & 1 == 1)
                .all(|y| up[y] & !up[x] == 0)
        });
        if !transitive {
            continue;
        }
        let opens = PointSet::all_subsets(n).filter(|s| s.iter().all(|x| up[x] & !s.bits() == 0));
        out.push(FiniteSpace::new(n, opens)?);
    }
    Ok(out)
}

fn canonical_key(space: &FiniteSpace, perms: &[Vec<usize>]) -> Vec<u64> {
    perms
        .iter()
        .map(|p| {
            let mut key: Vec<u64> = space
                .opens()
                .iter()
                .map(|o| o.iter().fold(0u64, |acc, x| acc | 1 << p[x]))
                .collect();
            key.sort_unstable();
            key
        })
        .min()
        .unwrap_or_default()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for x in 0..n {
            if !prefix.contains(&x) {
                prefix.push(x);
                go(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), n, &mut out);
    out
}

/// One representative per homeomorphism class of topologies on `n` points.
pub fn topologies_up_to_homeomorphism(n: usize) -> Result<Vec<FiniteSpace>> {
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for space in all_topologies(n)? {
        if seen.insert(canonical_key(&space, &perms)) {
            out.push(space);
        }
    }
    Ok(out)
}

/// Representatives for every point count in `1..=max_points`.
pub fn small_spaces(max_points: usize) -> Result<Vec<FiniteSpace>> {
    let mut out = Vec::new();
    for n in 1..=max_points {
        out.extend(topologies_up_to_homeomorphism(n)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::find_homeomorphism;

    #[test]
    fn labelled_topology_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| all_topologies(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29, 355]);
    }

    #[test]
    fn unlabelled_topology_counts() {
        let counts: Vec<usize> = (1..=4)
            .map(|n| topologies_up_to_homeomorphism(n).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 3, 9, 33]);
    }

    #[test]
    fn representatives_are_pairwise_non_homeomorphic() {
        let reps = topologies_up_to_homeomorphism(3).unwrap();
        for (i, a) in reps.iter().enumerate() {
            for (j, b) in reps.iter().enumerate() {
                assert_eq!(find_homeomorphism(a, b).is_some(), i == j);
            }
        }
    }

    #[test]
    fn rejects_large_requests() {
        assert_eq!(all_topologies(6).unwrap_err(), Error::TooManyPoints(6));
    }
}
