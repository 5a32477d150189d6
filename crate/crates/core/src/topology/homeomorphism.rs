//! Exhaustive homeomorphism search between finite spaces.
//!
//! Candidates are pruned by point count, open-set count, the number of open
//! sets containing each point, and consistency with the specialization
//! preorder (which a homeomorphism must preserve in both directions). Any
//! complete assignment is verified against the full open families.

use crate::topology::{FiniteSpace, PointSet, SpaceMap};

struct Profile {
    counts: Vec<usize>,
    /// `below[x]` has bit `y` set when `y ∈ cl{x}`
    below: Vec<u64>,
}

fn profile(space: &FiniteSpace) -> Profile {
    let n = space.len();
    let below = (0..n)
        .map(|x| {
            space
                .closure_unchecked(&PointSet::singleton(n, x))
                .bits()
        })
        .collect();
    Profile {
        counts: space.open_counts(),
        below,
    }
}

/// Finds a homeomorphism `a → b`, or `None` when the spaces are not
/// homeomorphic.
pub fn find_homeomorphism(a: &FiniteSpace, b: &FiniteSpace) -> Option<SpaceMap> {
    if a.len() != b.len() || a.opens().len() != b.opens().len() {
        return None;
    }
    let pa = profile(a);
    let pb = profile(b);
    let mut sorted_a = pa.counts.clone();
    let mut sorted_b = pb.counts.clone();
    sorted_a.sort_unstable();
    sorted_b.sort_unstable();
    if sorted_a != sorted_b {
        return None;
    }
    let n = a.len();
    let mut assignment = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut result = None;
    search(a, b, &pa, &pb, 0, &mut assignment, &mut used, &mut result);
    result
}

#[allow(clippy::too_many_arguments)]
fn search(
    a: &FiniteSpace,
    b: &FiniteSpace,
    pa: &Profile,
    pb: &Profile,
    x: usize,
    assignment: &mut Vec<usize>,
    used: &mut Vec<bool>,
    result: &mut Option<SpaceMap>,
) -> bool {
    let n = a.len();
    if x == n {
        let map = SpaceMap::new(a.clone(), b.clone(), assignment.clone())
            .expect("assignment is total and in range");
        if map.is_homeomorphism() {
            *result = Some(map);
            return true;
        }
        return false;
    }
    for y in 0..n {
        if used[y] || pa.counts[x] != pb.counts[y] {
            continue;
        }
        let consistent = (0..x).all(|z| {
            let w = assignment[z];
            (pa.below[x] >> z & 1) == (pb.below[y] >> w & 1)
                && (pa.below[z] >> x & 1) == (pb.below[w] >> y & 1)
        });
        if !consistent {
            continue;
        }
        assignment[x] = y;
        used[y] = true;
        if search(a, b, pa, pb, x + 1, assignment, used, result) {
            return true;
        }
        used[y] = false;
        assignment[x] = usize::MAX;
    }
    false
}
