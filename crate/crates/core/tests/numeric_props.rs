use analogia::numeric::{
    analogy_holds, generalized_mean, q_distance, scalar_analogy_holds, sol, solve_power, SolvePowerOptions,
};
use analogia::regression::ApModel;
use analogia::{PowerProfile, Tolerance};
use proptest::prelude::*;

fn tol() -> Tolerance {
    Tolerance::new(1e-8, 1e-12).unwrap()
}

fn positive() -> impl Strategy<Value = f64> {
    0.05f64..20.0
}

/// `b^p + c^p - a^p` when it leaves room for a solution.
fn solve_d(a: f64, b: f64, c: f64, p: f64) -> Option<f64> {
    if p == 0.0 {
        return Some(b * c / a);
    }
    let r = b.powf(p) + c.powf(p) - a.powf(p);
    (r > 1e-6 * b.powf(p).max(c.powf(p))).then(|| r.powf(1.0 / p))
}

proptest! {
    #[test]
    fn mean_is_monotone_in_power(vals in prop::collection::vec(positive(), 1..6), p1 in -4.0f64..4.0, dp in 0.0f64..3.0) {
        let lo = generalized_mean(&vals, p1).unwrap();
        let hi = generalized_mean(&vals, p1 + dp).unwrap();
        prop_assert!(lo <= hi * (1.0 + 1e-12));
        let min = vals.iter().copied().fold(f64::MAX, f64::min);
        let max = vals.iter().copied().fold(f64::MIN, f64::max);
        prop_assert!(min * (1.0 - 1e-12) <= lo && hi <= max * (1.0 + 1e-12));
    }

    #[test]
    fn mean_is_symmetric_and_homogeneous(vals in prop::collection::vec(positive(), 2..6), p in -3.0f64..3.0, k in 0.1f64..10.0) {
        let m = generalized_mean(&vals, p).unwrap();
        let mut rev = vals.clone();
        rev.reverse();
        prop_assert!((generalized_mean(&rev, p).unwrap() - m).abs() <= 1e-12 * m);
        let scaled: Vec<f64> = vals.iter().map(|v| v * k).collect();
        prop_assert!((generalized_mean(&scaled, p).unwrap() - k * m).abs() <= 1e-11 * k * m);
    }

    #[test]
    fn analogy_symmetries(a in positive(), b in positive(), c in positive(), p in -2.0f64..3.0) {
        let Some(d) = solve_d(a, b, c, p) else { return Ok(()) };
        let t = tol();
        prop_assert!(scalar_analogy_holds(a, b, c, d, p, t).unwrap());
        // symmetry, central permutation and their compositions
        prop_assert!(scalar_analogy_holds(c, d, a, b, p, t).unwrap());
        prop_assert!(scalar_analogy_holds(a, c, b, d, p, t).unwrap());
        prop_assert!(scalar_analogy_holds(d, b, c, a, p, t).unwrap());
        prop_assert!(scalar_analogy_holds(b, a, d, c, p, t).unwrap());
    }

    #[test]
    fn analogy_reflexivity(a in positive(), b in positive(), p in -3.0f64..3.0) {
        prop_assert!(scalar_analogy_holds(a, b, a, b, p, tol()).unwrap());
        prop_assert!(scalar_analogy_holds(a, a, b, b, p, tol()).unwrap());
    }

    #[test]
    fn analogy_transitivity(a in positive(), b in positive(), c in positive(), e in positive(), p in 0.2f64..3.0) {
        // a:b::c:d and c:d::e:f imply a:b::e:f
        let Some(d) = solve_d(a, b, c, p) else { return Ok(()) };
        let Some(f) = solve_d(c, d, e, p) else { return Ok(()) };
        prop_assert!(scalar_analogy_holds(a, b, e, f, p, Tolerance::new(1e-7, 1e-10).unwrap()).unwrap());
    }

    #[test]
    fn sol_round_trip(a in positive(), b in positive(), c in positive(), q in 0.2f64..4.0) {
        match sol(a, b, c, q).unwrap() {
            Some(d) => prop_assert!(scalar_analogy_holds(a, b, c, d, q, tol()).unwrap()),
            None => prop_assert!(a.powf(q) > b.powf(q) + c.powf(q)),
        }
    }

    #[test]
    fn sol_with_equal_ends_returns_the_other(b in positive(), c in positive(), q in 0.2f64..4.0) {
        let d = sol(b, b, c, q).unwrap().unwrap();
        prop_assert!((d - c).abs() <= 1e-9 * c.max(b), "{} vs {}", d, c);
    }

    #[test]
    fn solve_power_recovers_generating_power(a in 0.5f64..2.0, gap1 in 0.1f64..3.0, gap2 in 0.0f64..3.0, p in -2.0f64..3.0) {
        let (b, c) = (a + gap1, a + gap1 + gap2);
        let Some(d) = solve_d(a, b, c, p) else { return Ok(()) };
        let found = solve_power(a, b, c, d, SolvePowerOptions::default()).unwrap();
        let lhs = generalized_mean(&[a, d], found).unwrap();
        let rhs = generalized_mean(&[b, c], found).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs);
        prop_assert!((found - p).abs() < 1e-5, "{} vs {}", found, p);
    }

    #[test]
    fn q_distance_identity_and_symmetry(x in 0.0f64..50.0, y in 0.0f64..50.0, q in 0.2f64..4.0) {
        prop_assert_eq!(q_distance(x, x, q).unwrap(), 0.0);
        prop_assert_eq!(q_distance(x, y, q).unwrap(), q_distance(y, x, q).unwrap());
        if x != y {
            prop_assert!(q_distance(x, y, q).unwrap() > 0.0);
        }
    }

    /// An AP model for `(p; q)` conjugated by `x ↦ x^{p'}` inside and `y ↦ y^{1/q'}` outside
    /// maps `p ⊙ p'` analogies to `q q'` analogies.
    #[test]
    fn conjugation_by_powers(
        coef in prop::collection::vec(0.2f64..2.0, 2),
        p in prop::collection::vec(0.5f64..3.0, 2),
        pp in prop::collection::vec(0.5f64..2.0, 2),
        q in 0.5f64..3.0,
        qq in 0.5f64..2.0,
        pts in prop::collection::vec(0.5f64..4.0, 6),
    ) {
        let f = ApModel::new(coef, 1.0, PowerProfile::new(p.clone(), q).unwrap()).unwrap();
        let g = |x: &[f64]| {
            let sx: Vec<f64> = x.iter().zip(&pp).map(|(v, e)| v.powf(*e)).collect();
            f.eval(&sx).unwrap().powf(1.0 / qq)
        };
        let prod: Vec<f64> = p.iter().zip(&pp).map(|(a, b)| a * b).collect();
        let (a, b, c) = (&pts[0..2], &pts[2..4], &pts[4..6]);
        let mut d = Vec::new();
        for j in 0..2 {
            let Some(v) = solve_d(a[j], b[j], c[j], prod[j]) else { return Ok(()) };
            d.push(v);
        }
        let profile = PowerProfile::new(prod, q * qq).unwrap();
        prop_assert!(analogy_holds(a, b, c, &d, &profile, tol()).unwrap());
        prop_assert!(scalar_analogy_holds(g(a), g(b), g(c), g(&d), q * qq, Tolerance::new(1e-7, 1e-12).unwrap()).unwrap());
    }
}

#[test]
fn closed_form_means() {
    let v = [1.0, 2.0, 4.0];
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * y.abs();
    assert!(close(generalized_mean(&v, 1.0).unwrap(), 7.0 / 3.0));
    assert!(close(generalized_mean(&v, 0.0).unwrap(), 2.0));
    assert!(close(generalized_mean(&v, -1.0).unwrap(), 3.0 / (1.0 + 0.5 + 0.25)));
    assert!(close(generalized_mean(&v, 2.0).unwrap(), (21.0f64 / 3.0).sqrt()));
    assert_eq!(generalized_mean(&v, f64::INFINITY).unwrap(), 4.0);
    assert_eq!(generalized_mean(&v, f64::NEG_INFINITY).unwrap(), 1.0);
}
