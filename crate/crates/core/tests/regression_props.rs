use analogia::numeric::scalar_analogy_holds;
use analogia::regression::{
    analogical_value, ap_eval, build_selection_map, closed_form_value, root_set, selected_value, ApModel,
    LabeledDataset, RootBasis,
};
use analogia::{PowerProfile, Tolerance};
use proptest::prelude::*;

fn model_strategy() -> impl Strategy<Value = ApModel> {
    (
        prop::collection::vec(0.5f64..3.0, 2),
        prop::sample::select(vec![0.5, 1.0, 2.0, 3.0]),
        prop::collection::vec(0.0f64..2.0, 2),
        0.0f64..2.0,
    )
        .prop_map(|(p, q, a, b)| ApModel::new(a, b, PowerProfile::new(p, q).unwrap()).unwrap())
}

/// Componentwise `d` with `a : b ::^p c : d`, if it exists and stays positive.
fn fourth(a: &[f64], b: &[f64], c: &[f64], p: &[f64]) -> Option<Vec<f64>> {
    (0..p.len())
        .map(|j| {
            let r = b[j].powf(p[j]) + c[j].powf(p[j]) - a[j].powf(p[j]);
            (r > 1e-3).then(|| r.powf(1.0 / p[j]))
        })
        .collect()
}

fn labelled(points: Vec<Vec<f64>>, g: &ApModel) -> LabeledDataset {
    let labels = points.iter().map(|x| ap_eval(g, x).unwrap()).collect();
    LabeledDataset::new(points, labels).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Labels from an AP model are reproduced exactly wherever the root is nonempty.
    #[test]
    fn ap_models_are_sound(g in model_strategy(), pts in prop::collection::vec(prop::collection::vec(0.5f64..4.0, 2), 3..7), pick in (0usize..3, 0usize..3, 0usize..3)) {
        let p = g.profile().p().to_vec();
        let (a, b, c) = (&pts[pick.0], &pts[pick.1], &pts[pick.2]);
        let Some(x) = fourth(a, b, c, &p) else { return Ok(()) };
        let s = labelled(pts.clone(), &g);
        let v = analogical_value(&s, &x, g.profile(), Tolerance::default(), None).unwrap();
        let truth = ap_eval(&g, &x).unwrap();
        let v = v.expect("the picked triple roots x");
        prop_assert!((v - truth).abs() <= 1e-8 * truth.max(1e-300), "{} vs {}", v, truth);
    }

    /// The explicit family maps `p`-analogies to `q`-analogies.
    #[test]
    fn ap_family_preserves_analogies(g in model_strategy(), pts in prop::collection::vec(0.5f64..4.0, 6)) {
        let p = g.profile().p().to_vec();
        let (a, b, c) = (&pts[0..2], &pts[2..4], &pts[4..6]);
        let Some(d) = fourth(a, b, c, &p) else { return Ok(()) };
        let q = g.profile().q();
        let [fa, fb, fc, fd] = [a, b, c, &d[..]].map(|x| ap_eval(&g, x).unwrap());
        prop_assert!(scalar_analogy_holds(fa, fb, fc, fd, q, Tolerance::new(1e-9, 1e-12).unwrap()).unwrap());
    }

    /// `(a, b, c)` roots `x` exactly when `(a, c, b)` does.
    #[test]
    fn roots_are_closed_under_swapping_b_and_c(seed_pts in prop::collection::vec((1u8..4, 1u8..4), 3..8), labels in prop::collection::vec(0.1f64..5.0, 8), x in (1u8..5, 1u8..5), q in 0.5f64..3.0) {
        let points: Vec<Vec<f64>> = seed_pts.iter().map(|&(u, v)| vec![f64::from(u), f64::from(v)]).collect();
        let s = LabeledDataset::new(points.clone(), labels[..points.len()].to_vec()).unwrap();
        let profile = PowerProfile::new(vec![1.0, 1.0], q).unwrap();
        let root = root_set(&s, &[f64::from(x.0), f64::from(x.1)], &profile, Tolerance::default(), None).unwrap();
        for &(a, b, c) in &root.triples {
            prop_assert!(root.triples.contains(&(a, c, b)));
        }
    }

    /// The closed-form `q`-mean over a selection row equals the mean of solutions.
    #[test]
    fn closed_form_matches_selected_value(labels in prop::collection::vec(1.0f64..3.0, 9), q in 0.5f64..3.0) {
        let points: Vec<Vec<f64>> = (1..=3).flat_map(|i| (1..=3).map(move |j| vec![f64::from(i), f64::from(j)])).collect();
        let s = LabeledDataset::new(points.clone(), labels).unwrap();
        let profile = PowerProfile::new(vec![1.0, 1.0], q).unwrap();
        let sel = build_selection_map(&s, &points, &profile, Tolerance::default(), None, RootBasis::Geometric).unwrap();
        for row in &sel.rows {
            let closed = closed_form_value(&s, row, q);
            if let Ok(v) = selected_value(&s, row, &profile, Tolerance::default()) {
                let c = closed.expect("solvable rows have a nonnegative mean");
                prop_assert!((v - c).abs() <= 1e-10 * c.max(1.0));
            }
        }
    }

    /// A capped root set is the lexicographic prefix of the full one.
    #[test]
    fn cap_takes_a_prefix(seed_pts in prop::collection::vec((1u8..4, 1u8..4), 3..8), cap in 1usize..10) {
        let points: Vec<Vec<f64>> = seed_pts.iter().map(|&(u, v)| vec![f64::from(u), f64::from(v)]).collect();
        let s = LabeledDataset::new(points.clone(), vec![3.0; points.len()]).unwrap();
        let profile = PowerProfile::new(vec![1.0, 1.0], 1.0).unwrap();
        let full = root_set(&s, &points[0], &profile, Tolerance::default(), None).unwrap();
        let capped = root_set(&s, &points[0], &profile, Tolerance::default(), Some(cap)).unwrap();
        let k = cap.min(full.len());
        prop_assert_eq!(&capped.triples[..], &full.triples[..k]);
        prop_assert_eq!(capped.truncated, full.len() > cap);
        let mut sorted = full.triples.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, full.triples);
    }
}
