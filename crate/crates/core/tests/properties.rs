use proptest::prelude::*;

use osf_core::lp::{self, Feasibility};
use osf_core::oracle;
use osf_core::rational::{format_rational, one, parse_rational, rat, zero};
use osf_core::{
    embed, extreme_points, homotopy, in_hull, minkowski_combination, retraction, ClosedSubset, FiniteSpace,
    Functional, Measure, MeasurePolytope, PointMap, Rational, TestFunction,
};

fn space(n: usize) -> FiniteSpace {
    FiniteSpace::with_size("x", n)
}

fn measure_on(n: usize) -> impl Strategy<Value = Measure> {
    prop::collection::vec(0u32..6, n)
        .prop_filter("some mass", |w| w.iter().any(|&x| x > 0))
        .prop_map(move |raw| {
            let total: u32 = raw.iter().sum();
            let weights = raw.iter().map(|&w| rat(w as i64, total as i64)).collect();
            Measure::new(space(n), weights).unwrap()
        })
}

fn generators_on(n: usize, max: usize) -> impl Strategy<Value = Vec<Measure>> {
    prop::collection::vec(measure_on(n), 1..=max)
}

fn test_function_on(n: usize) -> impl Strategy<Value = TestFunction> {
    prop::collection::vec((-12i64..=12, 1i64..=4), n)
        .prop_map(move |v| TestFunction::new(space(n), v.into_iter().map(|(p, q)| rat(p, q)).collect()).unwrap())
}

fn unit_t() -> impl Strategy<Value = Rational> {
    (0i64..=6).prop_map(|k| rat(k, 6))
}

fn map_between(m: usize, k: usize) -> impl Strategy<Value = PointMap> {
    prop::collection::vec(0..k, m).prop_map(move |t| PointMap::new(space(m), space(k), t).unwrap())
}

/// Weight vectors of a random `OS_f` instance: each generator has a dominant atom.
fn pf_measure_on(n: usize) -> impl Strategy<Value = Measure> {
    measure_on(n).prop_filter("in P_f", Measure::is_in_pf)
}

fn max_eval(gens: &[Measure], phi: &TestFunction) -> Rational {
    gens.iter().map(|g| g.eval(phi).unwrap()).max().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rationals_round_trip(p in -1000i64..1000, q in 1i64..1000) {
        let v = rat(p, q);
        prop_assert_eq!(parse_rational(&format_rational(&v)).unwrap(), v);
    }

    #[test]
    fn in_hull_agrees_with_enumeration((gens, xi) in (1usize..=4).prop_flat_map(|n| (generators_on(n, 5), measure_on(n)))) {
        prop_assert_eq!(in_hull(&xi, &gens).unwrap(), oracle::hull_contains(&xi, &gens));
        for g in &gens {
            prop_assert!(in_hull(g, &gens).unwrap());
        }
    }

    #[test]
    fn extreme_points_agree_with_enumeration(gens in (1usize..=4).prop_flat_map(|n| generators_on(n, 6))) {
        let fast = extreme_points(&gens);
        prop_assert_eq!(&fast, &oracle::vertices(&gens));
        prop_assert_eq!(extreme_points(&fast), fast.clone());
        prop_assert!(fast.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn support_value_is_generator_max(
        (gens, phi) in (1usize..=5).prop_flat_map(|n| (generators_on(n, 6), test_function_on(n)))
    ) {
        let mu = Functional::from_generators(gens[0].space(), gens.clone()).unwrap();
        prop_assert_eq!(mu.eval(&phi).unwrap(), max_eval(&gens, &phi));
    }

    #[test]
    fn minkowski_matches_enumeration(
        (p, q) in (1usize..=3).prop_flat_map(|n| (generators_on(n, 3), generators_on(n, 3))),
        t in unit_t(),
    ) {
        let pp = MeasurePolytope::new(p.clone()).unwrap();
        let qq = MeasurePolytope::new(q.clone()).unwrap();
        let sum = minkowski_combination(&pp, &qq, &t).unwrap();
        let expected = oracle::minkowski_vertices(pp.vertices(), qq.vertices(), &t);
        prop_assert_eq!(sum.vertices(), expected.as_slice());
    }

    #[test]
    fn convex_combination_is_pointwise(
        (p, q, phi) in (1usize..=4).prop_flat_map(|n| (generators_on(n, 3), generators_on(n, 3), test_function_on(n))),
        t in unit_t(),
    ) {
        let x = p[0].space().clone();
        let mu = Functional::from_generators(&x, p).unwrap();
        let nu = Functional::from_generators(&x, q).unwrap();
        let mix = mu.convex_combination(&nu, &t).unwrap();
        let expected = (one() - &t) * mu.eval(&phi).unwrap() + &t * nu.eval(&phi).unwrap();
        prop_assert_eq!(mix.eval(&phi).unwrap(), expected);
    }

    #[test]
    fn separation_witnesses_inequality((p, q) in (1usize..=3).prop_flat_map(|n| (generators_on(n, 3), generators_on(n, 3)))) {
        let x = p[0].space().clone();
        let mu = Functional::from_generators(&x, p).unwrap();
        let nu = Functional::from_generators(&x, q).unwrap();
        match mu.separating_function(&nu).unwrap() {
            Some(phi) => {
                prop_assert!(mu != nu);
                prop_assert_ne!(mu.eval(&phi).unwrap(), nu.eval(&phi).unwrap());
            }
            None => prop_assert_eq!(&mu, &nu),
        }
    }

    #[test]
    fn pushforward_commutes_with_evaluation(
        (gens, f, phi) in (1usize..=4, 1usize..=4).prop_flat_map(|(m, k)| (generators_on(m, 4), map_between(m, k), test_function_on(k)))
    ) {
        let mu = Functional::from_generators(f.source(), gens).unwrap();
        let pushed = mu.pushforward(&f).unwrap();
        prop_assert_eq!(pushed.eval(&phi).unwrap(), mu.eval(&phi.pull_back(&f).unwrap()).unwrap());
        prop_assert_eq!(pushed.support(), f.image(&mu.support()));
    }

    #[test]
    fn pushforward_is_functorial(
        (gens, f, g) in (1usize..=3, 1usize..=3, 1usize..=3).prop_flat_map(|(m, k, l)| (generators_on(m, 4), map_between(m, k), map_between(k, l)))
    ) {
        let mu = Functional::from_generators(f.source(), gens).unwrap();
        prop_assert_eq!(mu.pushforward(&PointMap::identity(f.source())).unwrap(), mu.clone());
        let direct = mu.pushforward(&f.then(&g).unwrap()).unwrap();
        prop_assert_eq!(direct, mu.pushforward(&f).unwrap().pushforward(&g).unwrap());
    }

    #[test]
    fn osf_is_stable_under_pushforward(
        (gens, f) in (1usize..=4, 1usize..=4).prop_flat_map(|(m, k)| (prop::collection::vec(pf_measure_on(m), 1..=3), map_between(m, k)))
    ) {
        let mu = Functional::from_generators(f.source(), gens).unwrap();
        prop_assert!(mu.is_in_osf());
        prop_assert!(mu.pushforward(&f).unwrap().is_in_osf());
    }

    #[test]
    fn dominance_matches_oracle(xi in (1usize..=6).prop_flat_map(measure_on)) {
        prop_assert_eq!(xi.is_in_pf(), oracle::in_pf(&xi));
        let dominant = oracle::dominant_atoms(&xi);
        prop_assert!(dominant.len() <= 1);
        match xi.dominant_atom() {
            Ok(x) => prop_assert_eq!(vec![x], dominant),
            Err(_) => prop_assert!(dominant.is_empty()),
        }
    }

    #[test]
    fn homotopy_endpoints((gens, t) in ((1usize..=4).prop_flat_map(|n| prop::collection::vec(pf_measure_on(n), 1..=3)), unit_t())) {
        let x = gens[0].space().clone();
        let mu = Functional::from_generators(&x, gens).unwrap();
        let fixed = embed(&retraction(&mu).unwrap());
        prop_assert_eq!(homotopy(&mu, &zero()).unwrap(), mu.clone());
        prop_assert_eq!(homotopy(&mu, &one()).unwrap(), fixed.clone());
        prop_assert_eq!(homotopy(&fixed, &t).unwrap(), fixed);
    }

    #[test]
    fn retraction_inverts_embedding(n in 1usize..=6, mask in 1u64..64) {
        let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        prop_assume!(!members.is_empty());
        let f = ClosedSubset::new(&space(n), members).unwrap();
        prop_assert_eq!(retraction(&embed(&f)).unwrap(), f);
    }

    #[test]
    fn lp_answers_carry_valid_certificates(
        rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..=4),
        rhs in prop::collection::vec(-3i64..=3, 4),
    ) {
        let a: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&v| rat(v, 1)).collect()).collect();
        let b: Vec<Rational> = rhs[..a.len()].iter().map(|&v| rat(v, 1)).collect();
        match lp::solve(&a, &b) {
            Feasibility::Feasible(x) => {
                prop_assert!(x.iter().all(|v| *v >= zero()));
                for (row, bi) in a.iter().zip(&b) {
                    let lhs: Rational = row.iter().zip(&x).map(|(p, q)| p * q).sum();
                    prop_assert_eq!(&lhs, bi);
                }
            }
            Feasibility::Infeasible(y) => {
                for j in 0..4 {
                    let col: Rational = a.iter().zip(&y).map(|(r, yi)| &r[j] * yi).sum();
                    prop_assert!(col <= zero());
                }
                let yb: Rational = b.iter().zip(&y).map(|(p, q)| p * q).sum();
                prop_assert!(yb > zero());
            }
        }
    }
}
