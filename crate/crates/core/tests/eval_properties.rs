use std::collections::BTreeSet;

use ensaug::ensemble::{hard_vote, Aggregation};
use ensaug::eval::{accuracy, jaccard, jaccard_matrix, mean_ci, subset_sweep, MemberOutputs};
use proptest::collection::{btree_set, vec};
use proptest::prelude::*;

fn member_outputs(m: usize, n: usize, c: usize) -> impl Strategy<Value = (Vec<Vec<usize>>, Vec<Vec<Vec<f64>>>, Vec<usize>)> {
    (vec(vec(vec(0.01f64..1.0, c), n), m), vec(0..c, n)).prop_map(|(raw, truth)| {
        let probs: Vec<Vec<Vec<f64>>> = raw
            .into_iter()
            .map(|member| {
                member
                    .into_iter()
                    .map(|p| {
                        let s: f64 = p.iter().sum();
                        p.into_iter().map(|v| v / s).collect()
                    })
                    .collect()
            })
            .collect();
        let labels = probs.iter().map(|m| m.iter().map(|p| ensaug::model::argmax(p)).collect()).collect();
        (labels, probs, truth)
    })
}

proptest! {
    #[test]
    fn jaccard_matrix_is_symmetric_with_unit_diagonal(sets in vec(btree_set(0usize..30, 0..10), 1..6)) {
        let m = jaccard_matrix(&sets);
        for i in 0..sets.len() {
            prop_assert_eq!(m[i][i], if sets[i].is_empty() { None } else { Some(1.0) });
            for j in 0..sets.len() {
                prop_assert_eq!(m[i][j], m[j][i]);
                if let Some(v) = m[i][j] {
                    prop_assert!((0.0..=1.0).contains(&v));
                }
            }
        }
    }

    #[test]
    fn shared_errors_raise_overlap(a in btree_set(0usize..20, 1..8), b in btree_set(0usize..20, 1..8)) {
        let before = jaccard(&a, &b).unwrap();
        prop_assume!(before < 1.0);
        let (mut a2, mut b2): (BTreeSet<usize>, BTreeSet<usize>) = (a.clone(), b.clone());
        a2.insert(100);
        b2.insert(100);
        prop_assert!(jaccard(&a2, &b2).unwrap() > before);
    }

    #[test]
    fn sweep_endpoints_match_definitions((labels, probs, truth) in member_outputs(4, 12, 3)) {
        let out = MemberOutputs { labels: &labels, probs: &probs };
        let curve = subset_sweep(out, &truth, Aggregation::HardVote, None).unwrap();
        prop_assert_eq!(curve.len(), 4);
        let singles: Vec<f64> = labels.iter().map(|l| accuracy(l, &truth).unwrap()).collect();
        prop_assert!((curve[0].accuracy.mean - singles.iter().sum::<f64>() / 4.0).abs() < 1e-12);
        let full: Vec<usize> = (0..truth.len())
            .map(|x| {
                let ls: Vec<usize> = labels.iter().map(|l| l[x]).collect();
                let ps: Vec<Vec<f64>> = probs.iter().map(|p| p[x].clone()).collect();
                hard_vote(&ls, &ps)
            })
            .collect();
        prop_assert_eq!(curve[3].subsets, 1);
        prop_assert_eq!(curve[3].accuracy.mean, accuracy(&full, &truth).unwrap());
    }
}

#[test]
fn interval_shrinks_as_one_over_root_n() {
    // a fixed pattern repeated keeps the sample variance nearly constant
    let pattern = [0.2, 0.4, 0.6, 0.8];
    let hw = |reps: usize| {
        let v: Vec<f64> = pattern.iter().cycle().take(4 * reps).copied().collect();
        let c = mean_ci(&v, 0.95).unwrap();
        let var = v.iter().map(|x| (x - c.mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64;
        c.half_width.unwrap() / (ensaug::eval::t_quantile(0.95, v.len() - 1) * var.sqrt())
    };
    for reps in [1, 4, 25] {
        assert!((hw(reps) * ((4 * reps) as f64).sqrt() - 1.0).abs() < 1e-12);
    }
}
