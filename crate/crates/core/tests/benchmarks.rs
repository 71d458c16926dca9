use bnstruct_core::benchmarks::{chain, collider, tiered, TIERED_TARGET};
use bnstruct_core::constraints::ConstraintSet;
use bnstruct_core::dataset::Dataset;
use bnstruct_core::graph::{cpdag_of, NamedEdge};
use bnstruct_core::infotheory::{conditional_mi, entropy, g2_test, mutual_information};
use bnstruct_core::inter_iamb::{inter_iamb, markov_blanket_interiamb};
use bnstruct_core::params_sim::{ancestral_sample, exact_marginal, fit_cpts, BayesianNetwork};
use bnstruct_core::pc_stable::{learn_skeleton_pcstable, pc_stable, PcConfig};
use bnstruct_core::select::{rank_features, select_features};

const N: usize = 50_000;

fn names(vars: &[usize], d: &Dataset) -> Vec<String> {
    let mut out: Vec<String> = vars
        .iter()
        .map(|&v| d.variable(v).name().to_string())
        .collect();
    out.sort();
    out
}

#[test]
fn chain_conditioning_on_the_middle_removes_dependence() {
    let d = ancestral_sample(&chain(), N, 11).unwrap();
    assert!(conditional_mi(&d, 0, 2, &[1]) < conditional_mi(&d, 0, 2, &[]));
    assert!(g2_test(&d, 0, 2, &[1], 0.05).unwrap().independent);
    assert!(!g2_test(&d, 0, 2, &[], 0.05).unwrap().independent);
}

#[test]
fn collider_conditioning_on_the_child_induces_dependence() {
    let d = ancestral_sample(&collider(), N, 12).unwrap();
    assert!(conditional_mi(&d, 0, 1, &[2]) > conditional_mi(&d, 0, 1, &[]));
    assert!(!g2_test(&d, 0, 1, &[2], 0.05).unwrap().independent);
}

#[test]
fn chain_skeleton_and_sepset() {
    let d = ancestral_sample(&chain(), N, 13).unwrap();
    let (g, sep) =
        learn_skeleton_pcstable(&d, &PcConfig::default(), &ConstraintSet::none()).unwrap();
    assert_eq!(g.undirected_edges(), [(0, 1), (1, 2)]);
    assert_eq!(sep.get(0, 2), Some(&[1][..]));

    let iamb = inter_iamb(&d, &PcConfig::default(), &ConstraintSet::none()).unwrap();
    assert_eq!(iamb.skeleton(), g);
}

#[test]
fn chain_with_blacklist_orients_only_the_constrained_edge() {
    let d = ancestral_sample(&chain(), N, 14).unwrap();
    let c = ConstraintSet::from_blacklist([("C", "B")]);
    let g = pc_stable(&d, &PcConfig::default(), &c).unwrap();
    assert!(g.has_undirected(0, 1));
    assert!(g.has_directed(1, 2));
}

#[test]
fn collider_is_recovered_by_both_learners() {
    let bn = collider();
    let d = ancestral_sample(&bn, N, 15).unwrap();
    let want = cpdag_of(bn.dag());
    let cfg = PcConfig::default();
    assert_eq!(pc_stable(&d, &cfg, &ConstraintSet::none()).unwrap(), want);
    assert_eq!(inter_iamb(&d, &cfg, &ConstraintSet::none()).unwrap(), want);
    let edges = want.named_edges();
    assert!(edges.contains(&NamedEdge::Directed("A".into(), "C".into())));
    assert!(edges.contains(&NamedEdge::Directed("B".into(), "C".into())));
}

#[test]
fn blankets_on_small_benchmarks() {
    let cfg = PcConfig::default();
    let d = ancestral_sample(&chain(), N, 16).unwrap();
    assert_eq!(markov_blanket_interiamb(&d, 0, &cfg).unwrap(), [1]);
    let d = ancestral_sample(&collider(), N, 16).unwrap();
    assert_eq!(markov_blanket_interiamb(&d, 0, &cfg).unwrap(), [1, 2]);
}

#[test]
fn selection_on_tiered_benchmark() {
    let bn = tiered();
    let d = ancestral_sample(&bn, N, 17).unwrap();
    let target = d.require(TIERED_TARGET).unwrap();
    let selected = select_features(&d, target, 0.01).unwrap();
    assert_eq!(
        names(&selected, &d),
        ["CstDst", "EvcNtc", "FamFrds", "Nbr", "Rsk"]
    );

    // adjacent variables outrank everything else
    let ranked = rank_features(&d, target);
    let parents = names(&bn.dag().parents(bn.index_of(TIERED_TARGET).unwrap()), &d);
    let mut top: Vec<String> = ranked[..parents.len()]
        .iter()
        .map(|f| f.name.clone())
        .collect();
    top.sort();
    assert_eq!(top, parents);

    let h = entropy(&d, target);
    for f in &ranked {
        assert!((f.fraction_of_target_entropy - f.mi / h).abs() < 1e-15);
        assert!((f.mi - mutual_information(&d, f.variable, target)).abs() < 1e-15);
    }
}

#[test]
fn selection_shrinks_as_the_threshold_rises() {
    let d = ancestral_sample(&tiered(), 10_000, 18).unwrap();
    let target = d.require(TIERED_TARGET).unwrap();
    let mut previous: Option<Vec<usize>> = None;
    for k in 1..=10 {
        let mut s = select_features(&d, target, k as f64 * 0.05).unwrap();
        s.sort();
        if let Some(p) = &previous {
            assert!(
                s.iter().all(|v| p.contains(v)),
                "threshold {k}: {s:?} ⊄ {p:?}"
            );
        }
        previous = Some(s);
    }
}

fn max_cpt_error(truth: &BayesianNetwork, fitted: &BayesianNetwork) -> f64 {
    truth
        .cpts()
        .iter()
        .zip(fitted.cpts())
        .flat_map(|(a, b)| {
            assert_eq!(a.parents, b.parents);
            a.table
                .iter()
                .flatten()
                .zip(b.table.iter().flatten())
                .map(|(x, y)| (x - y).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn refit_recovers_tiered_cpts() {
    let bn = tiered();
    let d = ancestral_sample(&bn, N, 19).unwrap();
    let fitted = fit_cpts(&d, bn.dag(), 1.0).unwrap();
    let err = max_cpt_error(&bn, &fitted);
    assert!(err < 0.02, "max CPT error {err}");
}

#[test]
fn refit_error_shrinks_with_sample_size() {
    let bn = tiered();
    let mean_error = |n: usize| {
        (0..5)
            .map(|s| {
                max_cpt_error(
                    &bn,
                    &fit_cpts(&ancestral_sample(&bn, n, 100 + s).unwrap(), bn.dag(), 1.0).unwrap(),
                )
            })
            .sum::<f64>()
            / 5.0
    };
    let errors = [mean_error(1_000), mean_error(10_000), mean_error(100_000)];
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
}

#[test]
fn chain_marginals_by_hand() {
    let bn = chain();
    // P(B=1) = 0.6·0.15 + 0.4·0.85; P(C=1) = P(B=0)·0.2 + P(B=1)·0.8
    let b1 = 0.6 * 0.15 + 0.4 * 0.85;
    let c1 = (1.0 - b1) * 0.2 + b1 * 0.8;
    let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12);
    assert!(close(&exact_marginal(&bn, 0).unwrap(), &[0.6, 0.4]));
    assert!(close(&exact_marginal(&bn, 1).unwrap(), &[1.0 - b1, b1]));
    assert!(close(&exact_marginal(&bn, 2).unwrap(), &[1.0 - c1, c1]));
}

#[test]
fn empirical_marginals_within_three_sigma() {
    for bn in [chain(), collider(), tiered()] {
        let d = ancestral_sample(&bn, N, 20).unwrap();
        for v in 0..d.n_vars() {
            let exact = exact_marginal(&bn, v).unwrap();
            assert!((exact.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for (level, &p) in exact.iter().enumerate() {
                let hits = d.column(v).iter().filter(|&&l| l as usize == level).count();
                let sigma = (p * (1.0 - p) / N as f64).sqrt();
                let diff = (hits as f64 / N as f64 - p).abs();
                assert!(
                    diff <= 3.0 * sigma,
                    "{} level {level}: {diff} > 3·{sigma}",
                    d.variable(v).name()
                );
            }
        }
    }
}

#[test]
fn pc_skeleton_ignores_column_order() {
    let d = ancestral_sample(&tiered(), 20_000, 21).unwrap();
    let cfg = PcConfig::default();
    let (g, sep) = learn_skeleton_pcstable(&d, &cfg, &ConstraintSet::none()).unwrap();
    let sepset_sizes = |g: &bnstruct_core::graph::Pdag, sep: &bnstruct_core::graph::SepsetMap| {
        let mut out: Vec<(String, String, usize)> = sep
            .iter()
            .map(|(&(a, b), s)| {
                let (x, y) = (g.name(a).to_string(), g.name(b).to_string());
                let (x, y) = if x < y { (x, y) } else { (y, x) };
                (x, y, s.len())
            })
            .collect();
        out.sort();
        out
    };
    let want = (g.named_skeleton(), sepset_sizes(&g, &sep));
    let n = d.n_vars();
    for shift in 1..n {
        let mut order: Vec<usize> = (0..n).map(|i| (i * 3 + shift) % n).collect();
        if shift % 2 == 0 {
            order.reverse();
        }
        let p = d.select_columns(&order);
        let (g2, sep2) = learn_skeleton_pcstable(&p, &cfg, &ConstraintSet::none()).unwrap();
        assert_eq!(
            (g2.named_skeleton(), sepset_sizes(&g2, &sep2)),
            want,
            "order {order:?}"
        );
    }
}
