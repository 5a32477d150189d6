use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;

fn require_bijection(map: &[usize], a: &FiniteLattice, b: &FiniteLattice) -> Result<()> {
    if map.len() != a.len() || a.len() != b.len() {
        return Err(Error::NotBijective(format!(
            "{} images for lattices of sizes {} and {}",
            map.len(),
            a.len(),
            b.len()
        )));
    }
    let mut seen = vec![false; b.len()];
    for &y in map {
        if y >= b.len() || std::mem::replace(&mut seen[y], true) {
            return Err(Error::NotBijective(format!("image {y} repeated or out of range")));
        }
    }
    Ok(())
}

/// Whether the bijection `map` preserves joins and meets.
pub fn is_lattice_isomorphism(map: &[usize], a: &FiniteLattice, b: &FiniteLattice) -> Result<bool> {
    require_bijection(map, a, b)?;
    let m = a.len();
    Ok((0..m).all(|x| {
        (0..m).all(|y| {
            map[a.join(x, y)] == b.join(map[x], map[y]) && map[a.meet(x, y)] == b.meet(map[x], map[y])
        })
    }))
}

/// Decides whether `map` is a lattice isomorphism looking only at the order:
/// both `map` and its inverse must be monotone. The operation-based answer
/// is computed as well and any disagreement is reported as an error.
pub fn order_iso_is_lattice_iso(map: &[usize], a: &FiniteLattice, b: &FiniteLattice) -> Result<bool> {
    require_bijection(map, a, b)?;
    let m = a.len();
    let order = (0..m).all(|x| (0..m).all(|y| a.le(x, y) == b.le(map[x], map[y])));
    let ops = is_lattice_isomorphism(map, a, b)?;
    if order != ops {
        return Err(Error::InvalidLattice(format!(
            "order test says {order}, operation test says {ops}"
        )));
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::FiniteSpace;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn identity_and_bounds() {
        let l = FiniteLattice::from_ro(&FiniteSpace::discrete(2));
        let id: Vec<usize> = (0..l.len()).collect();
        assert!(is_lattice_isomorphism(&id, &l, &l).unwrap());
        let two = FiniteLattice::chain(2);
        assert!(order_iso_is_lattice_iso(&[0, 1], &two, &two).unwrap());
    }

    #[test]
    fn powerset_of_two_atom_swaps() {
        // sets sorted: {} {0} {1} {0,1}
        let l = FiniteLattice::from_ro(&FiniteSpace::discrete(2));
        assert!(is_lattice_isomorphism(&[0, 2, 1, 3], &l, &l).unwrap());
        assert!(!is_lattice_isomorphism(&[0, 3, 2, 1], &l, &l).unwrap());
        assert!(!order_iso_is_lattice_iso(&[0, 3, 2, 1], &l, &l).unwrap());
    }

    #[test]
    fn rejects_non_bijections() {
        let l = FiniteLattice::chain(3);
        assert!(matches!(is_lattice_isomorphism(&[0, 0, 2], &l, &l), Err(Error::NotBijective(_))));
        assert!(matches!(is_lattice_isomorphism(&[0, 1], &l, &l), Err(Error::NotBijective(_))));
    }

    #[test]
    fn order_and_operations_agree_on_small_lattices() {
        for m in 1..=5 {
            let lattices = crate::lattice::small_lattices(m);
            let perms = permutations(m);
            for a in &lattices {
                for b in &lattices {
                    for p in &perms {
                        order_iso_is_lattice_iso(p, a, b).unwrap();
                    }
                }
            }
        }
    }
}
