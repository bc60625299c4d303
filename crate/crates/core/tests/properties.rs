use asymlin::bilinear_ops::{
    adjoint_norm_check, arens_norm_check, bilin_norm, form_sup, form_sup_lp, operator_distance, precompact_class,
    rescaling_equivalence_check, sym_norm, BallData, BilinearOp,
};
use asymlin::linear_ops::{op_norm_between, LinearOp};
use asymlin::rational::{add, int, ratio, scale, Extended, Matrix, Rational, Vector};
use asymlin::{AsymNorm, Caps, Exec};
use proptest::prelude::*;

fn small() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| ratio(n, d))
}

fn vector(dim: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(small(), dim)
}

fn norm(dim: usize) -> impl Strategy<Value = AsymNorm> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, dim), 2..=4).prop_filter_map("not an asymmetric norm", move |rows| {
        let gens = rows.into_iter().map(|r| r.into_iter().map(int).collect()).collect();
        AsymNorm::new(dim, gens).ok()
    })
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(vector(cols), rows)
}

fn bilinear() -> impl Strategy<Value = BilinearOp> {
    (1usize..=2, 1usize..=2, 1usize..=2)
        .prop_flat_map(|(d1, d2, dz)| (norm(d1), norm(d2), norm(dz), prop::collection::vec(matrix(d1, d2), dz)))
        .prop_map(|(p1, p2, q, t)| BilinearOp::new(t, p1, p2, q).unwrap())
}

fn linear() -> impl Strategy<Value = LinearOp> {
    (1usize..=3, 1usize..=3)
        .prop_flat_map(|(n, m)| (norm(n), norm(m), matrix(m, n)))
        .prop_map(|(p, q, a)| LinearOp::new(a, p, q).unwrap())
}

fn caps() -> Caps {
    Caps::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_axioms(p in norm(3), x in vector(3), y in vector(3), t in 0i64..=5) {
        let t = int(t);
        prop_assert!(p.value(&add(&x, &y)) <= p.value(&x) + p.value(&y));
        prop_assert_eq!(p.value(&scale(&t, &x)), &t * p.value(&x));
        prop_assert!(p.value(&x) >= int(0));
        prop_assert_eq!(p.conjugate().conjugate().value(&x), p.value(&x));
        let pbar = p.conjugate();
        prop_assert_eq!(p.symmetrize().value(&x), p.value(&x).max(pbar.value(&x)));
        prop_assert_eq!(pbar.quasi_metric(&x, &y).unwrap(), p.quasi_metric(&y, &x).unwrap());
    }

    #[test]
    fn linear_norm_identities(a in linear(), x in vector(3)) {
        let n = a.norm().value;
        prop_assert_eq!(&n, &a.conjugate_norm().value);
        prop_assert_eq!(a.sup_over_conjugate_ball().value, a.sup_of_conjugate_target().value);
        prop_assert!(a.symmetric_norm().value <= n);
        let x = &x[..a.source().dim()];
        if let Extended::Finite(beta) = &n {
            prop_assert!(a.semi_lipschitz_at(beta, x));
            let adj = a.adjoint(&caps()).unwrap();
            prop_assert_eq!(adj.norm(), n.clone());
        } else {
            prop_assert_eq!(a.adjoint(&caps()).unwrap().norm(), Extended::Infinite);
        }
    }

    #[test]
    fn linear_norm_scales(a in linear(), t in 0i64..=4) {
        let t = int(t);
        prop_assert_eq!(a.scaled(&t).norm().value, a.norm().value.scale(&t));
    }

    #[test]
    fn bilinear_norm_bounds(t in bilinear(), x in vector(2), y in vector(2)) {
        let (d1, d2, _) = t.dims();
        let (x, y) = (&x[..d1], &y[..d2]);
        let n = bilin_norm(&t, &caps(), Exec::Parallel).unwrap();
        let s = sym_norm(&t, &caps(), Exec::Parallel).unwrap();
        prop_assert!(Extended::Finite(s) <= n);
        if let Extended::Finite(beta) = &n {
            let bound = beta * t.source1().value(x) * t.source2().value(y);
            prop_assert!(t.target().value(&t.apply(x, y)) <= bound);
        }
        prop_assert_eq!(n, bilin_norm(&t, &caps(), Exec::Sequential).unwrap());
    }

    #[test]
    fn form_sup_routes_agree(t in bilinear(), psi in vector(2)) {
        let (d1, d2, dz) = t.dims();
        let f = asymlin::bilinear_ops::contract_target(t.tensor(), &psi[..dz], d1, d2);
        let b1 = BallData::of(t.source1(), &caps()).unwrap();
        let b2 = BallData::of(t.source2(), &caps()).unwrap();
        prop_assert_eq!(form_sup(&f, &b1, &b2, Exec::Sequential).value, form_sup_lp(&f, t.source1(), &b2));
    }

    #[test]
    fn bilinear_norm_homogeneous_and_subadditive(s in bilinear(), c in 0i64..=3) {
        let c = int(c);
        let n = bilin_norm(&s, &caps(), Exec::Parallel).unwrap();
        prop_assert_eq!(bilin_norm(&s.scaled(&c), &caps(), Exec::Parallel).unwrap(), n.scale(&c));
        let doubled = s.add(&s.scaled(&ratio(1, 2))).unwrap();
        let lhs = bilin_norm(&doubled, &caps(), Exec::Parallel).unwrap();
        prop_assert!(lhs <= n.add(&n.scale(&ratio(1, 2))));
    }

    #[test]
    fn adjoint_and_arens(t in bilinear()) {
        prop_assert!(adjoint_norm_check(&t, &caps(), Exec::Parallel).unwrap().holds());
        prop_assert!(arens_norm_check(&t, &caps(), Exec::Parallel).unwrap().holds());
    }

    #[test]
    fn rescaling_conditions_agree(t in bilinear(), beta in 0i64..=6, r in prop::sample::select(vec![ratio(1, 2), int(1), int(3)])) {
        let v = rescaling_equivalence_check(&t, &int(beta), &r, &caps(), Exec::Parallel).unwrap();
        prop_assert!(v.agree());
    }

    #[test]
    fn symmetric_distance_is_a_metric(a in bilinear(), m1 in matrix(2, 2), m2 in matrix(2, 2)) {
        let (d1, d2, dz) = a.dims();
        let cut = |m: &Matrix| -> Matrix { m[..d1].iter().map(|r| r[..d2].to_vec()).collect() };
        let b = BilinearOp::new(vec![cut(&m1); dz], a.source1().clone(), a.source2().clone(), a.target().clone()).unwrap();
        let c = BilinearOp::new(vec![cut(&m2); dz], a.source1().clone(), a.source2().clone(), a.target().clone()).unwrap();
        let d = |x: &BilinearOp, y: &BilinearOp| operator_distance(x, y, &caps(), Exec::Parallel).unwrap();
        let ab = d(&a, &b);
        prop_assert_eq!(&ab.symmetric, &d(&b, &a).symmetric);
        prop_assert!(ab.forward <= ab.symmetric);
        prop_assert!(ab.symmetric <= d(&a, &c).symmetric.add(&d(&c, &b).symmetric));
        prop_assert_eq!(d(&a, &a).symmetric, Extended::zero());
    }

    #[test]
    fn precompact_implications(t in bilinear()) {
        let (d1, d2, _) = t.dims();
        prop_assume!(d1 + d2 <= 3);
        let c = precompact_class(&t, &int(1), &caps(), Exec::Parallel, 0).unwrap();
        prop_assert!(c.implications_hold());
        // q and q^s precompactness coincide for bilinear images of polyhedral balls.
        prop_assert_eq!(c.q.is_refuted(), c.qs.is_refuted());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn argmax_invariant_under_target_scaling(p in norm(2), q in norm(2), a in matrix(2, 2), c in 1i64..=5) {
        let base = op_norm_between(&a, &p, &q);
        let scaled = op_norm_between(&a, &p, &q.scaled(&int(c)).unwrap());
        prop_assert_eq!(scaled.value, base.value.scale(&int(c)));
        prop_assert_eq!(scaled.witness, base.witness);
    }

    #[test]
    fn distance_translation(a in bilinear()) {
        let z = a.scaled(&int(0));
        let d = operator_distance(&z, &a, &caps(), Exec::Parallel).unwrap();
        prop_assert_eq!(d.forward, bilin_norm(&a, &caps(), Exec::Parallel).unwrap());
        let back = operator_distance(&a, &z, &caps(), Exec::Parallel).unwrap();
        prop_assert_eq!(back.forward, bilin_norm(&z.sub(&a).unwrap(), &caps(), Exec::Parallel).unwrap());
    }
}
