//! Candidate measures for the searches.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::measure::{AnyMeasure, RationalMeasure};
use crate::ops::product;
use crate::seq::binomial_row;
use crate::weight::{ratio, Rational};
use crate::zoo::{
    exchangeable_measure, exclusion_measure, forest_measure, random_cluster_measure, spanning_tree_measure,
    tree_class_measure, urn_measure, GraphSpec, MeasureTree,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Independent random integer weights on every atom.
    Atoms,
    /// Like `Atoms`, but each atom is zero with probability one half.
    Boundary,
    /// A random instance of one of the zoo models.
    Zoo,
    /// A random class-S tree measure.
    Tree,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::Atoms, Strategy::Boundary, Strategy::Zoo, Strategy::Tree];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Atoms => "atoms",
            Strategy::Boundary => "boundary",
            Strategy::Zoo => "zoo",
            Strategy::Tree => "tree",
        }
    }
}

/// Random measure of rank `n` drawn by `strategy`.
pub fn random_measure(strategy: Strategy, n: usize, rng: &mut ChaCha8Rng) -> Result<RationalMeasure> {
    match strategy {
        Strategy::Atoms => RationalMeasure::from_integers(n, &random_atoms(n, 0.0, rng)),
        Strategy::Boundary => RationalMeasure::from_integers(n, &random_atoms(n, 0.5, rng)),
        Strategy::Zoo => random_zoo(n, rng),
        Strategy::Tree => Ok(tree_class_measure(&MeasureTree::random(n, rng)?)?.measure),
    }
}

fn random_atoms(n: usize, zero_rate: f64, rng: &mut ChaCha8Rng) -> Vec<i64> {
    let mut w: Vec<i64> =
        (0..1usize << n).map(|_| if rng.gen_bool(zero_rate) { 0 } else { rng.gen_range(1..=20) }).collect();
    if w.iter().all(|&x| x == 0) {
        let i = rng.gen_range(0..w.len());
        w[i] = 1;
    }
    w
}

fn random_probability(n: usize, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let w: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=10)).collect();
    let s: i64 = w.iter().sum();
    w.into_iter().map(|x| ratio(x, s)).collect()
}

/// Multigraph with `m` edges on 2 to 4 vertices, connected when asked.
pub fn random_graph(m: usize, connected: bool, rng: &mut ChaCha8Rng) -> GraphSpec {
    let k = rng.gen_range(2..=4.min(m + 1).max(2));
    loop {
        let edges = (0..m)
            .map(|_| {
                let u = rng.gen_range(0..k);
                let v = (u + rng.gen_range(1..k)) % k;
                (u.min(v), u.max(v))
            })
            .collect();
        let g = GraphSpec::new(k, edges).expect("edges in range");
        if !connected || g.is_connected() {
            return g;
        }
    }
}

fn random_zoo(n: usize, rng: &mut ChaCha8Rng) -> Result<RationalMeasure> {
    match rng.gen_range(0..6) {
        0 => urn_measure(n, rng.gen_range(1..=5), &random_probability(n, rng)),
        1 => {
            let g = random_graph(n, false, rng);
            let p = ratio(rng.gen_range(1..10), 10);
            let q = [ratio(1, 4), ratio(1, 2), ratio(1, 1), ratio(2, 1), ratio(4, 1)].choose(rng).expect("nonempty").clone();
            random_cluster_measure(&g, &[p], &q)
        }
        2 => forest_measure(&random_graph(n, false, rng), None),
        3 => {
            let g = random_graph(n, true, rng);
            let w = (0..n).map(|_| ratio(rng.gen_range(1..=4), 1)).collect();
            spanning_tree_measure(&g.with_weights(w)?)
        }
        4 => exchangeable_measure(&normalize(random_sequence(n + 1, rng))),
        _ => exchangeable_measure(&normalize(random_ulc(n + 1, rng))),
    }
}

fn normalize(a: Vec<Rational>) -> Vec<Rational> {
    let s: Rational = a.iter().sum();
    a.into_iter().map(|x| x / &s).collect()
}

/// Nonnegative sequence with random integer entries, zeros allowed.
pub fn random_sequence(len: usize, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let mut a: Vec<Rational> = (0..len).map(|_| ratio(rng.gen_range(0..=10), 1)).collect();
    if a.iter().all(|x| x == &ratio(0, 1)) {
        a[0] = ratio(1, 1);
    }
    a
}

/// Random ULC sequence: an interval support, log-concave per-atom values
/// with nonincreasing successive ratios, times binomial coefficients.
pub fn random_ulc(len: usize, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let n = len - 1;
    let a = rng.gen_range(0..=n);
    let b = rng.gen_range(a..=n);
    let mut ratios: Vec<Rational> = (a..b).map(|_| ratio(rng.gen_range(1..=12), rng.gen_range(1..=12))).collect();
    ratios.sort_by(|x, y| y.cmp(x));
    let mut q = vec![ratio(0, 1); len];
    q[a] = ratio(1, 1);
    for (j, r) in (a..b).zip(&ratios) {
        q[j + 1] = &q[j] * r;
    }
    let binom = binomial_row(n);
    q.into_iter().zip(binom).map(|(x, c)| x * ratio(c as i64, 1)).collect()
}

/// Instance of one of the models the ULC-sum conjecture names: RC on
/// K3 or K4 with `q ≤ 1`, urns, or exclusion on a path or cycle.
pub fn random_ulc_instance(i: u64, n: usize, rng: &mut ChaCha8Rng) -> Result<(String, AnyMeasure)> {
    match i % 4 {
        0 => {
            let p = ratio(rng.gen_range(1..10), 10);
            let q = ratio(rng.gen_range(1..=4), 4);
            let m: RationalMeasure = random_cluster_measure(&GraphSpec::complete(3), &[p.clone()], &q)?;
            Ok((format!("rc K3 p={} q={}", p, q), m.into()))
        }
        1 => {
            let p = ratio(rng.gen_range(1..10), 10);
            let q = ratio(rng.gen_range(1..=4), 4);
            let m: RationalMeasure = random_cluster_measure(&GraphSpec::complete(4), &[p.clone()], &q)?;
            Ok((format!("rc K4 p={} q={}", p, q), m.into()))
        }
        2 => {
            let k = rng.gen_range(1..=5);
            let m = urn_measure(n, k, &random_probability(n, rng))?;
            Ok((format!("urns n={n} k={k}"), m.into()))
        }
        _ => {
            let v = n.max(2);
            let g = if rng.gen_bool(0.5) { GraphSpec::path(v) } else { GraphSpec::cycle(v) };
            let eta0 = rng.gen_range(0..1usize << v);
            let t = *[0.1, 0.5, 1.0, 3.0].choose(rng).expect("nonempty");
            Ok((format!("exclusion |V|={v} start={eta0} t={t}"), exclusion_measure(&g, eta0, t)?.into()))
        }
    }
}

/// Product of exchangeable measures with rank sequences `a` and `b`; its
/// rank sequence is the convolution of the two.
pub fn convolution_witness(a: &[Rational], b: &[Rational]) -> Result<RationalMeasure> {
    product(&exchangeable_measure(&normalize(a.to_vec()))?, &exchangeable_measure(&normalize(b.to_vec()))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::is_ulc;
    use rand::SeedableRng;

    #[test]
    fn ulc_generator_is_ulc() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for len in 1..=9 {
            let a = random_ulc(len, &mut rng);
            assert_eq!(is_ulc(&a, len - 1).unwrap(), None, "{a:?}");
        }
    }

    #[test]
    fn every_strategy_builds() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for s in Strategy::ALL {
            for n in 2..=4 {
                for _ in 0..10 {
                    assert_eq!(random_measure(s, n, &mut rng).unwrap().n(), n);
                }
            }
        }
    }
}
