//! Exact-rational continuous functions on finite spaces and the
//! compatibility ordering `f ⪯ g` (`g` agrees with `f` on the support of `f`).

mod family;
mod function;
mod scalar;

pub use family::{enumerate_family, FnFamily, DEFAULT_FAMILY_CAP};
pub use function::{is_continuous, is_continuous_by_intervals, ScalarFn};
pub use scalar::{format_rational, int, parse_rational, ratio, Rational, ValueGrid};

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::error::Error;
    use crate::topology::{all_topologies, FiniteSpace, PointSet};

    fn f(space: &Arc<FiniteSpace>, values: &[i64]) -> ScalarFn {
        ScalarFn::new(space.clone(), values.iter().map(|&v| int(v)).collect()).unwrap()
    }

    fn discrete(n: usize) -> Arc<FiniteSpace> {
        Arc::new(FiniteSpace::discrete(n))
    }

    #[test]
    fn continuity_examples() {
        let sp = FiniteSpace::sierpinski();
        assert!(!is_continuous(&sp, &[int(1), int(0)]).unwrap());
        assert!(is_continuous(&sp, &[int(3), int(3)]).unwrap());
        assert!(is_continuous(&FiniteSpace::discrete(3), &[int(1), int(-4), ratio(1, 3)]).unwrap());
        assert_eq!(
            is_continuous(&sp, &[int(1)]),
            Err(Error::LengthMismatch { expected: 2, found: 1 })
        );
        let err = ScalarFn::new(Arc::new(sp), vec![int(1), int(0)]).unwrap_err();
        assert_eq!(
            err,
            Error::Discontinuous { value: "0".into(), fiber: vec![1] }
        );
    }

    #[test]
    fn continuity_criteria_agree() {
        let grid = [int(-1), int(0), int(2)];
        for space in (1..=3).flat_map(|n| all_topologies(n).unwrap()) {
            let n = space.len();
            for code in 0..3usize.pow(n as u32) {
                let values: Vec<Rational> =
                    (0..n).map(|x| grid[code / 3usize.pow(x as u32) % 3].clone()).collect();
                assert_eq!(
                    is_continuous(&space, &values).unwrap(),
                    is_continuous_by_intervals(&space, &values).unwrap()
                );
            }
        }
    }

    #[test]
    fn support_sigma_rho_examples() {
        let d = discrete(3);
        let zero = ScalarFn::zero(d.clone());
        assert!(zero.support().is_empty() && zero.sigma().is_empty());
        assert!(zero.rho().is_full());
        let one = ScalarFn::constant(d.clone(), int(-2));
        assert!(one.sigma().is_full() && one.rho().is_empty());
        let g = f(&d, &[1, 0, 0]);
        assert_eq!(g.support().to_vec(), vec![0]);
        assert_eq!(g.sigma().to_vec(), vec![0]);
        assert_eq!(g.rho().to_vec(), vec![1, 2]);
    }

    #[test]
    fn compat_le_examples() {
        let d = discrete(3);
        let a = f(&d, &[1, 0, 0]);
        assert!(a.compat_le(&f(&d, &[1, 2, 0])).unwrap());
        assert!(!a.compat_le(&f(&d, &[2, 2, 0])).unwrap());
        assert!(a.compat_le_alg(&f(&d, &[1, 2, 0])).unwrap());
        assert!(!a.compat_le_alg(&f(&d, &[2, 2, 0])).unwrap());
        assert!(ScalarFn::zero(d.clone()).compat_le(&a).unwrap());
        assert!(a.compat_le(&a).unwrap() && a.compat_le_alg(&a).unwrap());
        let two = discrete(2);
        let (p, q) = (f(&two, &[1, 0]), f(&two, &[0, 1]));
        assert!(!p.compat_le_alg(&q).unwrap());
        assert!(!p.compat_le(&q).unwrap());
        assert_eq!(p.compat_le(&a), Err(Error::SpaceMismatch));
    }

    #[test]
    fn one_point_space_order_is_flat() {
        let pt = discrete(1);
        let grid = ValueGrid::from_ints(&[-2, -1, 0, 1, 2]).unwrap();
        let fam = enumerate_family(&pt, &grid, 100).unwrap();
        for a in &fam {
            for b in &fam {
                assert_eq!(a.compat_le(b).unwrap(), a == b || a.is_zero());
            }
        }
    }

    #[test]
    fn pointwise_examples() {
        let two = discrete(2);
        let g = f(&two, &[-1, 2]);
        assert_eq!(g.abs(), f(&two, &[1, 2]));
        assert_eq!(g.pos_part().sub(&g.neg_part()).unwrap(), g);
        assert_eq!(g.pmax(&ScalarFn::zero(two.clone())).unwrap(), g.pos_part());
        assert_eq!(g.pmin(&ScalarFn::zero(two.clone())).unwrap(), g.neg_part().neg());
        assert_eq!(g.mul(&g).unwrap(), f(&two, &[1, 4]));
        assert_eq!(g.add(&g.neg()).unwrap(), ScalarFn::zero(two.clone()));
    }

    #[test]
    fn orthogonality_and_sup() {
        let d = discrete(3);
        let h = f(&d, &[1, 1, 0]);
        assert!(h.is_orthogonal(&ScalarFn::zero(d.clone())).unwrap());
        assert!(!h.is_orthogonal(&f(&d, &[0, 1, 1])).unwrap());
        let u = PointSet::from_points(3, [0]).unwrap();
        let v = PointSet::from_points(3, [2]).unwrap();
        let iu = ScalarFn::indicator(d.clone(), &u, int(1)).unwrap();
        let iv = ScalarFn::indicator(d.clone(), &v, int(1)).unwrap();
        assert!(iu.is_orthogonal(&iv).unwrap());
        assert_eq!(
            iu.compat_sup(&iv).unwrap(),
            ScalarFn::indicator(d.clone(), &u.union(&v), int(1)).unwrap()
        );
        assert_eq!(h.compat_sup(&ScalarFn::zero(d.clone())).unwrap(), h);
        assert_eq!(h.compat_sup(&h), Err(Error::NotOrthogonal));
        let two = discrete(2);
        let s = f(&two, &[3, 0]).compat_sup(&f(&two, &[0, -2])).unwrap();
        assert_eq!(s, f(&two, &[3, -2]));
    }

    #[test]
    fn sup_is_least_in_family() {
        let two = discrete(2);
        let fam = FnFamily::from_grid(two.clone(), ValueGrid::from_ints(&[-2, 0, 1, 3]).unwrap()).unwrap();
        for i in 0..fam.len() {
            for j in 0..fam.len() {
                let (a, b) = (fam.get(i), fam.get(j));
                if a.is_orthogonal(b).unwrap() {
                    let s = a.compat_sup(b).unwrap();
                    assert!(fam.is_least_upper_bound(i, j, &s).unwrap());
                }
            }
        }
    }

    /// Sweep of the order-theoretic facts over every topology on at most
    /// three points with a four-value grid.
    #[test]
    fn order_and_lattice_identities() {
        let grid = ValueGrid::from_ints(&[-1, 0, 1, 2]).unwrap();
        for space in (1..=3).flat_map(|n| all_topologies(n).unwrap()) {
            let space = Arc::new(space);
            let fam = enumerate_family(&space, &grid, 10_000).unwrap();
            let zero = ScalarFn::zero(space.clone());
            for a in &fam {
                assert!(zero.compat_le(a).unwrap());
                assert_eq!(a.rho(), a.sigma().complement());
                for b in &fam {
                    let le = a.compat_le(b).unwrap();
                    assert_eq!(le, a.compat_le_alg(b).unwrap());
                    if le && b.compat_le(a).unwrap() {
                        assert_eq!(a, b);
                    }
                    assert_eq!(
                        a.is_orthogonal(b).unwrap(),
                        a.sigma().is_disjoint(&b.sigma())
                    );
                    let sum = a.abs().add(&b.abs()).unwrap();
                    let prod = a.mul(b).unwrap();
                    assert_eq!(space.ro_join(&a.sigma(), &b.sigma()).unwrap(), sum.sigma());
                    assert_eq!(space.ro_meet(&a.sigma(), &b.sigma()).unwrap(), prod.sigma());
                    assert_eq!(space.rc_meet(&a.rho(), &b.rho()).unwrap(), sum.rho());
                    assert_eq!(space.rc_join(&a.rho(), &b.rho()).unwrap(), prod.rho());
                    if le {
                        for c in fam.iter().filter(|c| b.compat_le(c).unwrap()) {
                            assert!(a.compat_le(c).unwrap());
                        }
                    }
                }
            }
        }
    }
}
