use hypersym::hypfun::{f11_eval_exact, f11_series, verify_recursion, Params1F1, Recursion};
use hypersym::identities::{catalogue, verify_formal, verify_numeric, NumericPoint, Orders, ParamPoint, Variant};
use hypersym::liealg::{apply, build_catalogue, expected_action, operator, verify_action, BasisFamily, DiffOperator, Family, OperatorId};
use hypersym::{ExactScalar, Frame, MultiSeries, Var};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> ExactScalar {
    ExactScalar::new(n, d)
}

fn small_rational() -> impl Strategy<Value = ExactScalar> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

/// `a ≡ 1/3`, `b ≡ 1/5`, `c ≡ 2/7 (mod 1)`: no parameter, and no difference
/// `b - a`, is ever an integer, so every shifted basis constant is finite.
fn abc() -> impl Strategy<Value = (ExactScalar, ExactScalar, ExactScalar)> {
    (1i64..=10, 1i64..=10, 1i64..=10).prop_map(|(i, j, k)| (q(3 * i + 1, 3), q(5 * j + 1, 5), q(7 * k + 2, 7)))
}

fn frame() -> Frame {
    Frame::new(&[(Var::X, 4), (Var::Y, 3)])
}

fn series() -> impl Strategy<Value = MultiSeries> {
    proptest::collection::vec(((0u32..=4, 0u32..=3), small_rational()), 0..8).prop_map(|terms| {
        let f = frame();
        terms.into_iter().fold(MultiSeries::zero(&f), |acc, ((i, j), c)| {
            acc.add(&MultiSeries::monomial(&f, &[(Var::X, i), (Var::Y, j)], c).unwrap()).unwrap()
        })
    })
}

fn catalogue_ops() -> Vec<DiffOperator> {
    build_catalogue().into_values().collect()
}

fn op_index() -> impl Strategy<Value = usize> {
    0..catalogue_ops().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_ring_laws(f in series(), g in series(), h in series()) {
        prop_assert_eq!(f.add(&g).unwrap(), g.add(&f).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap().mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
        let lhs = f.mul(&g.add(&h).unwrap()).unwrap();
        let rhs = f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(f.sub(&f).unwrap().is_zero());
    }

    #[test]
    fn leibniz_rule(f in series(), g in series()) {
        // d(fg) is trusted one order below the caps
        let lower = Frame::new(&[(Var::X, 3), (Var::Y, 3)]);
        let lhs = f.mul(&g).unwrap().derivative(Var::X).unwrap().truncate(&lower).unwrap();
        let (fl, gl) = (f.truncate(&lower).unwrap(), g.truncate(&lower).unwrap());
        let rhs = f.derivative(Var::X).unwrap().mul(&gl).unwrap()
            .add(&fl.mul(&g.derivative(Var::X).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn commutator_antisymmetric_and_bilinear(i in op_index(), j in op_index(), k in op_index(), s in small_rational()) {
        let ops = catalogue_ops();
        let (a, b, c) = (&ops[i], &ops[j], &ops[k]);
        let ab = a.commutator(b).unwrap();
        prop_assert!(ab.add(&b.commutator(a).unwrap()).is_zero());
        let lhs = a.scale(&s).add(c).commutator(b).unwrap();
        let rhs = ab.scale(&s).add(&c.commutator(b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jacobi_identity(i in op_index(), j in op_index(), k in op_index()) {
        let ops = catalogue_ops();
        let (a, b, c) = (&ops[i], &ops[j], &ops[k]);
        let sum = a.commutator(&b.commutator(c).unwrap()).unwrap()
            .add(&b.commutator(&c.commutator(a).unwrap()).unwrap())
            .add(&c.commutator(&a.commutator(b).unwrap()).unwrap());
        prop_assert!(sum.is_zero(), "{}", sum);
    }

    #[test]
    fn every_action_holds((a, b, c) in abc()) {
        let families = [
            BasisFamily::F11Normalized(Params1F1::new(a.clone(), b.clone()).unwrap()),
            BasisFamily::Psi2(hypersym::hypfun::ParamsPsi2::new(a, b, c).unwrap()),
        ];
        for fam in &families {
            for &id in fam.family().operators() {
                let r = verify_action(id, fam, 6).unwrap();
                prop_assert!(r.passed(), "{} on {}: {:?}", id, fam.params_string(), r.witness);
            }
        }
    }

    #[test]
    fn action_is_linear((a, b, _) in abc(), s in small_rational(), t in small_rational()) {
        let fam = BasisFamily::F11Normalized(Params1F1::new(a, b).unwrap());
        let f = fam.realize(6);
        let (p, r) = (operator(Family::F11, OperatorId::Ia).unwrap(), operator(Family::F11, OperatorId::Ib).unwrap());
        let lhs = apply(&p.scale(&s).add(&r.scale(&t)), &f).unwrap();
        let rhs = apply(&p, &f).unwrap().scale(&s).add_aligned(&apply(&r, &f).unwrap().scale(&t)).unwrap();
        prop_assert!(lhs.same_prefactor(&rhs) || lhs.body.is_zero());
        prop_assert_eq!(lhs.body, rhs.body);
    }

    #[test]
    fn raising_twice_composes((a, b, _) in abc()) {
        let fam = BasisFamily::F11Normalized(Params1F1::new(a, b).unwrap());
        let ea = operator(Family::F11, OperatorId::Ea).unwrap();
        let once = expected_action(OperatorId::Ea, &fam).unwrap();
        let mid = fam.shifted(once.shift).unwrap();
        let again = expected_action(OperatorId::Ea, &mid).unwrap();
        let twice = apply(&ea, &apply(&ea, &fam.realize(8)).unwrap()).unwrap();
        let target = mid.shifted(again.shift).unwrap().realize(8).scale(&(once.coefficient * &again.coefficient));
        prop_assert!(twice.same_prefactor(&target));
        let frame = twice.body.frame().clone();
        prop_assert_eq!(twice.body, target.body.truncate(&frame).unwrap());
    }

    #[test]
    fn recursions_hold((a, b, _) in abc()) {
        let p = Params1F1::new(a, b).unwrap();
        for rel in Recursion::ALL {
            prop_assert!(verify_recursion(rel, &p, 10).unwrap().is_zero(), "{}", rel);
        }
    }

    #[test]
    fn partial_sums_refine((a, b, _) in abc(), x in small_rational()) {
        // raising the order by one adds exactly the next term
        let p = Params1F1::new(a, b).unwrap();
        let s = f11_series(&p, 8);
        for m in 0..8u32 {
            let step = f11_eval_exact(&p, &x, m + 1) - f11_eval_exact(&p, &x, m);
            prop_assert_eq!(step, s.coeff(&[(Var::X, m + 1)]) * x.pow(m as i32 + 1));
        }
    }
}

#[test]
fn formal_verdict_is_stable_under_more_terms() {
    let point = &ParamPoint::defaults()[0];
    for rec in catalogue() {
        let base = Orders::default_for(rec.family());
        let small = verify_formal(&rec, point, Orders::new(base.n.min(3), base.m.min(6))).unwrap();
        let big = verify_formal(&rec, point, base).unwrap();
        // a verified identity never breaks at higher order; a mismatch seen
        // early keeps the same first witness
        if big.is_verified() {
            assert!(small.is_verified(), "{} {}", rec.id, rec.variant);
        }
        if let Some(w) = small.witness() {
            assert_eq!(big.witness(), Some(w), "{} {}", rec.id, rec.variant);
        }
    }
}

#[test]
fn witnesses_are_reproducible() {
    let point = &ParamPoint::defaults()[1];
    for rec in catalogue().into_iter().filter(|r| r.variant == Variant::AsStated) {
        let orders = Orders::default_for(rec.family());
        assert_eq!(verify_formal(&rec, point, orders).unwrap(), verify_formal(&rec, point, orders).unwrap());
    }
}

#[test]
fn formal_implies_numeric() {
    for point in ParamPoint::defaults() {
        for rec in catalogue() {
            if !verify_formal(&rec, &point, Orders::default_for(rec.family())).unwrap().is_verified() {
                continue;
            }
            for chi in [0.05, 0.1, 0.25] {
                let out = verify_numeric(&rec, &point, NumericPoint::default(), chi, 1e-8, 10_000).unwrap();
                assert!(out.is_verified(), "{} {} {} χ={chi}: {:?}", rec.id, rec.variant, point, out);
            }
        }
    }
}
