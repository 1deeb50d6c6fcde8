//! Property-based invariants of the operations and checkers.

mod common;

use negdep::harness::verify_figure1;
use negdep::ops::{
    apply_field, condition, product, project, rank_rescale, relabel, stir, symmetrize, truncate, ExternalField,
    LogConcaveWeights,
};
use negdep::props::{
    check_association, check_cna, check_jnrd, check_lattice, check_nc, stochastic_covers, stochastic_dominates,
    DominanceMode, PlusOptions,
};
use negdep::seq::{convolve, is_log_concave, is_ulc};
use negdep::weight::parse_rational;
use negdep::zoo::{exchangeable_measure, exclusion_measure, GraphSpec};
use negdep::{ratio, Rational, RationalMeasure, Sign, Verdict, Weight};
use proptest::prelude::*;

fn measure(max_n: usize) -> impl Strategy<Value = RationalMeasure> {
    (1..=max_n)
        .prop_flat_map(|n| prop::collection::vec(0i64..=12, 1usize << n))
        .prop_filter("nonzero", |w| w.iter().any(|&x| x > 0))
        .prop_map(|w| RationalMeasure::from_integers(w.len().trailing_zeros() as usize, &w).unwrap())
}

fn holds(r: negdep::Result<negdep::PropertyReport>) -> bool {
    r.unwrap().verdict == Verdict::Holds
}

fn positive() -> impl Strategy<Value = Rational> {
    (1i64..=30, 1i64..=30).prop_map(|(p, q)| ratio(p, q))
}

fn ulc_sequence(max_len: usize) -> impl Strategy<Value = Vec<Rational>> {
    (1usize..=max_len).prop_flat_map(|len| {
        (any::<u64>()).prop_map(move |seed| {
            use rand::SeedableRng;
            negdep::harness::random_ulc(len, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_composes_and_keeps_marginals(mu in measure(4)) {
        let n = mu.n();
        let all: Vec<usize> = (0..n).collect();
        prop_assert_eq!(project(&mu, &all).unwrap(), mu.clone());
        let last = project(&mu, &[n - 1]).unwrap();
        prop_assert_eq!(last.marginal(0), mu.marginal(n - 1));
        if n >= 3 {
            let p = project(&project(&mu, &[0, 2]).unwrap(), &[1]).unwrap();
            prop_assert_eq!(p, project(&mu, &[2]).unwrap());
        }
    }

    #[test]
    fn unit_field_is_identity_and_fields_compose(mu in measure(4), a in positive(), b in positive()) {
        let n = mu.n();
        prop_assert_eq!(apply_field(&mu, &ExternalField::ones(n)).unwrap(), mu.clone());
        let fa = ExternalField::uniform(n, a.clone()).unwrap();
        let fb = ExternalField::uniform(n, b.clone()).unwrap();
        let fab = ExternalField::uniform(n, &a * &b).unwrap();
        let twice = apply_field(&apply_field(&mu, &fa).unwrap(), &fb).unwrap();
        prop_assert_eq!(twice, apply_field(&mu, &fab).unwrap());
    }

    #[test]
    fn conditioning_fixes_the_variable(mu in measure(4), bit in any::<bool>()) {
        if let Ok(c) = condition(&mu, &[(0, bit)]) {
            let expect = if bit { ratio(1, 1) } else { ratio(0, 1) };
            prop_assert_eq!(c.marginal(0), expect);
        }
    }

    #[test]
    fn relabel_inverse_is_identity(mu in measure(4), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let n = mu.n();
        let mut pi: Vec<usize> = (0..n).collect();
        pi.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let mut inv = vec![0; n];
        for (e, &p) in pi.iter().enumerate() {
            inv[p] = e;
        }
        prop_assert_eq!(relabel(&relabel(&mu, &pi).unwrap(), &inv).unwrap(), mu);
    }

    #[test]
    fn symmetrize_and_stir_keep_the_rank_sequence(mu in measure(4), eps in 0i64..=4) {
        let s = symmetrize(&mu);
        prop_assert!(s.is_exchangeable());
        prop_assert_eq!(s.rank_weights(), mu.rank_weights());
        if mu.n() >= 2 {
            let st = stir(&mu, &[((0, 1), ratio(eps, 4))]).unwrap();
            prop_assert_eq!(st.rank_weights(), mu.rank_weights());
        }
    }

    #[test]
    fn truncation_keeps_only_the_band(mu in measure(4), a in 0usize..=4, len in 0usize..=2) {
        let b = (a + len).min(mu.n());
        if let Ok(t) = truncate(&mu, a, b) {
            for x in t.support() {
                let k = x.count_ones() as usize;
                prop_assert!(a <= k && k <= b);
            }
        }
    }

    #[test]
    fn figure1_implications_hold_on_random_measures(mu in measure(3)) {
        let t = verify_figure1(&mu, &PlusOptions { samples: 4, seed: 1 }).unwrap();
        prop_assert!(t.consistent, "{:?}", t.violations);
    }

    #[test]
    fn checker_hierarchy(mu in measure(4)) {
        prop_assume!(mu.n() >= 2);
        let cna = holds(check_cna(&mu));
        let na = holds(check_association(&mu, Sign::Negative, true));
        let hnlc = holds(check_lattice(&mu, Sign::Negative, true));
        let nc = holds(check_nc(&mu));
        prop_assert!(!cna || na);
        prop_assert!(!na || nc);
        prop_assert!(!hnlc || nc);
        prop_assert_eq!(cna, common::cna(&common::scaled(mu.probs()), mu.n()));
    }

    #[test]
    fn products_of_na_measures_are_na(mu in measure(2), nu in measure(2)) {
        let na = |m: &RationalMeasure| holds(check_association(m, Sign::Negative, true));
        if na(&mu) && na(&nu) {
            prop_assert!(na(&product(&mu, &nu).unwrap()));
        }
    }

    #[test]
    fn domination_is_reflexive_and_covering_implies_it(mu in measure(3), nu in measure(3)) {
        prop_assert!(holds(stochastic_dominates(&mu, &mu, DominanceMode::Auto)));
        if mu.n() == nu.n() && holds(stochastic_covers(&mu, &nu)) {
            prop_assert!(holds(stochastic_dominates(&mu, &nu, DominanceMode::Auto)));
        }
    }

    #[test]
    fn ulc_sequences_convolve_to_ulc(a in ulc_sequence(9), b in ulc_sequence(9)) {
        let c = convolve(&a, &b);
        prop_assert!(is_ulc(&c, c.len() - 1).unwrap().is_none());
        prop_assert!(is_log_concave(&c).unwrap().is_none());
        prop_assert!(common::ulc(&c));
    }

    #[test]
    fn exchangeable_ulc_stays_ulc_under_log_concave_rescaling(a in ulc_sequence(6), r in positive()) {
        let total: Rational = a.iter().sum();
        let a: Vec<Rational> = a.iter().map(|x| x / &total).collect();
        let n = a.len() - 1;
        let mu = exchangeable_measure(&a).unwrap();
        let q = LogConcaveWeights::geometric(n, r).unwrap();
        let nu = rank_rescale(&mu, &q).unwrap();
        prop_assert!(common::ulc(&nu.rank_weights()));
        prop_assert!(holds(check_jnrd(&nu)));
    }

    #[test]
    fn exclusion_conserves_particles(start in 0usize..16, t in 0.0f64..5.0) {
        let mu = exclusion_measure(&GraphSpec::cycle(4), start, t).unwrap();
        let k = start.count_ones() as usize;
        let off: f64 = mu.probs().iter().enumerate().filter(|(x, _)| x.count_ones() as usize != k).map(|(_, p)| p).sum();
        prop_assert!(off.abs() < 1e-12);
        let total: f64 = mu.probs().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rationals_render_and_parse(p in -1000i64..1000, q in 1i64..1000) {
        let r = ratio(p, q);
        prop_assert_eq!(parse_rational(&r.render()), Some(r.clone()));
        prop_assert_eq!(<Rational as Weight>::parse(&r.render()), Some(r));
    }
}
