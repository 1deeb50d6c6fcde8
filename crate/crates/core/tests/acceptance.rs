//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run all criteria with `cargo test -p negdep --test acceptance`, or a
//! subset with `cargo test -p negdep --test acceptance -- 5 11`.
//! Criteria in `KNOWN_UNATTAINABLE` fail for reasons recorded in the
//! project notes; every other failure makes the target exit nonzero.

mod common;

use std::time::{Duration, Instant};

use negdep::harness::{
    random_measure, random_sequence, random_ulc, search, ConjectureId, ConjectureSpec, SearchOptions, Strategy,
};
use negdep::ops::{apply_field, condition_projected, ExternalField};
use negdep::props::{
    check_association, check_cna, check_jnrd, check_lattice, check_plus, conditional_rank_monotone, stoch_relation,
    stochastic_covers, stochastic_dominates, DominanceMode, PlusBase, PlusOptions,
};
use negdep::seq::{convolve, is_ulc};
use negdep::zoo::{
    example1, example2, exchangeable_measure, exclusion_measure, five_point, spanning_tree_measure, stoch_table,
    tree_class_measure, urn_measure, GraphSpec, MeasureTree,
};
use negdep::{ratio, Rational, RationalMeasure, Sign, Verdict, Witness};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const KNOWN_UNATTAINABLE: [u32; 2] = [2, 11];

struct Outcome {
    pass: bool,
    lines: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { pass: true, lines: Vec::new() }
    }

    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if !ok {
            self.pass = false;
            self.lines.push(format!("failed: {what}"));
        }
    }

    fn info(&mut self, what: impl Into<String>) {
        self.lines.push(what.into());
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn holds(r: negdep::Result<negdep::PropertyReport>) -> bool {
    matches!(r, Ok(ref r) if r.verdict == Verdict::Holds)
}

fn scaled(mu: &RationalMeasure) -> Vec<num_bigint::BigInt> {
    common::scaled(mu.probs())
}

fn c1_example1() -> Outcome {
    let mut o = Outcome::new();
    for eps in [ratio(0, 1), ratio(2, 5), ratio(4, 5)] {
        let mu = example1(&eps).unwrap();
        o.expect(holds(check_cna(&mu)), format!("CNA at ε = {eps}"));
        o.expect(common::cna(&scaled(&mu), 3), format!("oracle CNA at ε = {eps}"));
    }
    let eps = ratio(1, 2);
    let lambda = &eps / (ratio(2, 1) * (ratio(1, 1) - &eps));
    let mu = example1(&eps).unwrap();
    let field = ExternalField::finite(vec![lambda.clone(), ratio(1, 1), ratio(1, 1)]).unwrap();
    let nu = apply_field(&mu, &field).unwrap();
    let cov = nu.covariance(1, 2);
    // oracle: reweight the X1 = 1 atoms by hand
    let hand: Vec<Rational> =
        mu.probs().iter().enumerate().map(|(x, p)| if x & 1 == 1 { p * &lambda } else { p.clone() }).collect();
    o.expect(cov > ratio(0, 1), format!("Cov(X2,X3) after field = {cov}"));
    o.expect(common::covariance(&hand, 1, 2) == cov, "covariance matches hand reweighting");
    o.info(format!("λ = {lambda}, Cov(X2,X3) = {cov}"));
    o
}

fn c2_example2() -> Outcome {
    let mut o = Outcome::new();
    for eps in [ratio(1, 100), ratio(1, 20), ratio(1, 1000)] {
        let informational = eps == ratio(1, 1000);
        let mu = example2(&eps).unwrap();
        let na = check_association(&mu, Sign::Negative, true).unwrap();
        let nlc = check_lattice(&mu, Sign::Negative, false).unwrap();
        let on_face = matches!(&nlc.witness, Some(Witness::LatticePair { x, y, .. }) if x & y & 2 == 2);
        let ok_na = na.verdict == Verdict::Holds && common::na(&scaled(&mu), 3);
        let ok_nlc = nlc.verdict == Verdict::Fails && on_face;
        if informational {
            o.info(format!("(info) ε = {eps}: NA {}, NLC fails on X2 = 1: {ok_nlc}", na.verdict));
        } else {
            o.expect(ok_na, format!("NA at ε = {eps}"));
            o.expect(ok_nlc, format!("NLC fails on the X2 = 1 atoms at ε = {eps} (verdict {})", nlc.verdict));
        }
    }
    o
}

fn c3_stoch_table() -> Outcome {
    let mut o = Outcome::new();
    let r = stoch_relation(&stoch_table()).unwrap();
    o.expect(r.y_up_x, "Y ↑ X");
    o.expect(!r.x_up_y, "not X ↑ Y");
    o
}

fn c4_five_point() -> Outcome {
    let mut o = Outcome::new();
    let mu = five_point();
    let lo = condition_projected(&mu, &[(2, false)]).unwrap();
    let hi = condition_projected(&mu, &[(2, true)]).unwrap();
    let d = stochastic_dominates(&lo, &hi, DominanceMode::Auto).unwrap();
    let c = stochastic_covers(&lo, &hi).unwrap();
    o.expect(d.verdict == Verdict::Holds, "(μ|X3=0) ⪰ (μ|X3=1)");
    o.expect(common::dominates(lo.probs(), hi.probs(), 2), "oracle domination");
    o.expect(c.verdict == Verdict::Fails, "(μ|X3=0) does not cover (μ|X3=1)");
    o
}

fn c5_exchangeable() -> Outcome {
    let mut o = Outcome::new();
    let cases = 240u64;
    let bad: Vec<String> = (0..cases)
        .into_par_iter()
        .filter_map(|i| {
            let mut r = rng(5_000 + i);
            let n = 1 + (i as usize % 5);
            let raw = if i % 2 == 0 { random_ulc(n + 1, &mut r) } else { random_sequence(n + 1, &mut r) };
            let total: Rational = raw.iter().sum();
            let a: Vec<Rational> = raw.iter().map(|x| x / &total).collect();
            let mu = exchangeable_measure(&a).unwrap();
            let v = [
                is_ulc(&a, n).unwrap().is_none(),
                holds(check_lattice(&mu, Sign::Negative, true)),
                holds(check_cna(&mu)),
                holds(check_jnrd(&mu)),
                common::ulc(&a),
            ];
            let mut all = v.to_vec();
            if n <= 4 {
                all.push(common::cna(&scaled(&mu), n));
            }
            (!all.iter().all(|&b| b == all[0])).then(|| format!("case {i} n={n}: {all:?}"))
        })
        .collect();
    o.expect(bad.is_empty(), format!("{} discrepancies {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()));
    o.info(format!("{cases} rank sequences"));
    o
}

fn c6_convolution() -> Outcome {
    let mut o = Outcome::new();
    let mut failures = 0;
    for i in 0..600u64 {
        let mut r = rng(6_000 + i);
        let a = random_ulc(r.gen_range(1..=9), &mut r);
        let b = random_ulc(r.gen_range(1..=9), &mut r);
        let c = convolve(&a, &b);
        let n = c.len() - 1;
        if is_ulc(&c, n).unwrap().is_some() || !common::ulc(&c) {
            failures += 1;
        }
    }
    o.expect(failures == 0, format!("{failures} non-ULC convolutions"));
    o.info("600 pairs");
    o
}

fn c7_class_s() -> Outcome {
    let mut o = Outcome::new();
    let opts = PlusOptions { samples: 200, seed: 7 };
    let bad: Vec<String> = (0..100u64)
        .into_par_iter()
        .filter_map(|i| {
            let mut r = rng(7_000 + i);
            let leaves = 1 + (i as usize % 5);
            let t = MeasureTree::random(leaves, &mut r).unwrap();
            let mu: RationalMeasure = tree_class_measure(&t).unwrap().measure;
            let w = scaled(&mu);
            let checks = [
                ("jnrd", holds(check_jnrd(&mu))),
                ("oracle jnrd", common::jnrd(&w, leaves)),
                ("jnrd+", check_plus(&mu, PlusBase::Jnrd, &opts).unwrap().verdict != Verdict::Fails),
                ("rank-monotone", holds(conditional_rank_monotone(&mu, false))),
                ("oracle rank-monotone", common::rank_monotone(&w, leaves)),
            ];
            let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
            (!failed.is_empty()).then(|| format!("tree {i}: {failed:?}"))
        })
        .collect();
    o.expect(bad.is_empty(), format!("{bad:?}"));
    o.info("100 trees, 200 random fields each");
    o
}

fn exclusion_oracle(t: f64) -> Vec<f64> {
    // exp(tQ) by scaling and squaring of a Taylor series on the 16 states
    let edges = [(0, 1), (1, 2), (2, 3)];
    let mut q = vec![vec![0.0; 16]; 16];
    for x in 0..16usize {
        for &(u, v) in &edges {
            if (x >> u & 1) != (x >> v & 1) {
                let y = x ^ (1 << u | 1 << v);
                q[x][y] += 1.0;
                q[x][x] -= 1.0;
            }
        }
    }
    let mul = |a: &Vec<Vec<f64>>, b: &Vec<Vec<f64>>| -> Vec<Vec<f64>> {
        (0..16).map(|i| (0..16).map(|j| (0..16).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
    };
    let s = (t * 8.0).log2().ceil().max(0.0) as i32 + 1;
    let h = t / 2f64.powi(s);
    let a: Vec<Vec<f64>> = q.iter().map(|r| r.iter().map(|x| x * h).collect()).collect();
    let mut e: Vec<Vec<f64>> = (0..16).map(|i| (0..16).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let mut term = e.clone();
    for k in 1..30 {
        term = mul(&term, &a).into_iter().map(|r| r.into_iter().map(|x| x / k as f64).collect()).collect();
        for i in 0..16 {
            for j in 0..16 {
                e[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..s {
        e = mul(&e, &e);
    }
    e[0b0011].clone()
}

fn c8_exclusion() -> Outcome {
    let mut o = Outcome::new();
    let g = GraphSpec::path(4);
    for t in [0.1, 1.0, 10.0] {
        let mu = exclusion_measure(&g, 0b0011, t).unwrap();
        let oracle = exclusion_oracle(t);
        let tv: f64 = mu.probs().iter().zip(&oracle).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0;
        o.expect(tv < 1e-9, format!("t = {t}: distance to matrix-exponential oracle {tv:e}"));
        for s in 1..16usize {
            let joint = mu.mass_where(|x| x & s == s);
            let prod: f64 = (0..4).filter(|v| s >> v & 1 == 1).map(|v| mu.marginal(v)).product();
            o.expect(joint <= prod + 1e-9, format!("t = {t}, S = {s:04b}: {joint} > {prod}"));
        }
    }
    o
}

fn c9_spanning_trees() -> Outcome {
    let mut o = Outcome::new();
    let g = GraphSpec::complete(4);
    let mu: RationalMeasure = spanning_tree_measure(&g).unwrap();
    // oracle: 3-edge subsets without a cycle
    let acyclic = |mask: usize| {
        let mut parent: Vec<usize> = (0..4).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] == x {
                x
            } else {
                let r = find(p, p[x]);
                p[x] = r;
                r
            }
        }
        g.edges.iter().enumerate().filter(|(e, _)| mask >> e & 1 == 1).all(|(_, &(u, v))| {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a] = b;
            a != b
        })
    };
    let trees: Vec<usize> = (0..64usize).filter(|&m| m.count_ones() == 3 && acyclic(m)).collect();
    o.expect(trees.len() == 16, format!("oracle finds {} trees", trees.len()));
    let expect: Vec<Rational> =
        (0..64).map(|m| if trees.contains(&m) { ratio(1, trees.len() as i64) } else { ratio(0, 1) }).collect();
    o.expect(mu.probs() == expect.as_slice(), "measure equals oracle");
    o.expect(holds(check_association(&mu, Sign::Negative, true)), "NA");
    for e in 0..6 {
        for f in e + 1..6 {
            o.expect(common::is_nonpositive(&mu.covariance(e, f)), format!("Cov(e{e}, e{f}) ≤ 0"));
        }
    }
    o
}

fn urn_oracle(n: usize, k: u32, p: &[Rational]) -> Vec<Rational> {
    let mut out = vec![ratio(0, 1); 1 << n];
    for seq in 0..n.pow(k) {
        let (mut s, mut occ, mut pr) = (seq, 0usize, ratio(1, 1));
        for _ in 0..k {
            occ |= 1 << (s % n);
            pr *= &p[s % n];
            s /= n;
        }
        out[occ] += pr;
    }
    out
}

fn c10_urns() -> Outcome {
    let mut o = Outcome::new();
    let mut count = 0;
    for n in 1..=4usize {
        for k in 1..=5u32 {
            for i in 0..20u64 {
                let mut r = rng(10_000 + 100 * n as u64 + 10 * k as u64 + i);
                let w: Vec<i64> = (0..n).map(|_| r.gen_range(1..=12)).collect();
                let s: i64 = w.iter().sum();
                let p: Vec<Rational> = w.iter().map(|&x| ratio(x, s)).collect();
                let mu = urn_measure(n, k, &p).unwrap();
                o.expect(mu.probs() == urn_oracle(n, k, &p).as_slice(), format!("n={n} k={k} #{i}: oracle mismatch"));
                o.expect(holds(check_association(&mu, Sign::Negative, true)), format!("n={n} k={k} #{i}: NA"));
                count += 1;
            }
        }
    }
    o.info(format!("{count} urn measures"));
    o
}

fn c11_searches() -> Outcome {
    let mut o = Outcome::new();
    let run = |spec: &ConjectureSpec, budget: u64| {
        let t = Instant::now();
        let r = search(spec, &SearchOptions::new(4, budget, 1)).unwrap();
        (r, t.elapsed())
    };
    let none_found = [
        ConjectureId::HnlcImpliesNa,
        ConjectureId::AlwaysUlc,
        ConjectureId::UlcImpliesNa,
        ConjectureId::RankCover,
        ConjectureId::NdCover,
        ConjectureId::QuestionDisjointPa,
    ];
    for id in none_found {
        let (r, dt) = run(&ConjectureSpec::new(id), 10_000);
        let mut line = format!(
            "{id}: {} (tested {}, unconfirmed {}, {:.1} s)",
            r.status(),
            r.tested,
            r.unconfirmed,
            dt.as_secs_f64()
        );
        if let Some(c) = &r.counterexample {
            line.push_str(&format!(" candidate {} [{}]", c.index, c.probs.join(" ")));
            o.expect(r.reverify().unwrap(), format!("{id}: counterexample reverifies"));
        }
        o.expect(!r.found(), format!("{id} none-found"));
        o.info(line);
    }
    let (r, dt) = run(&ConjectureSpec::strengthened(ConjectureId::RankCover), 10_000);
    o.info(format!("(info) rank-cover with hypothesis CNA+: {} ({:.1} s)", r.status(), dt.as_secs_f64()));
    let (r, dt) = run(&ConjectureSpec::new(ConjectureId::Figure1Strictness), 1_000);
    o.expect(r.found(), "figure1-strictness finds a witness within 10³");
    o.info(format!("figure1-strictness: {} ({:.1} s)", r.status(), dt.as_secs_f64()));
    o
}

/// Mass moved from random atoms to random atoms above them.
fn pushed_up(mu: &RationalMeasure, r: &mut ChaCha8Rng) -> RationalMeasure {
    let n = mu.n();
    let mut w = mu.probs().to_vec();
    for _ in 0..3 {
        let x = r.gen_range(0..1usize << n);
        let y = x | r.gen_range(0..1usize << n);
        let moved = &w[x] * ratio(r.gen_range(0..=2), 2);
        w[x] -= &moved;
        w[y] += moved;
    }
    RationalMeasure::from_weights(n, w).unwrap()
}

fn c12_cross_validation() -> Outcome {
    let mut o = Outcome::new();
    let bad: Vec<String> = (0..500u64)
        .into_par_iter()
        .filter_map(|i| {
            let mut r = rng(12_000 + i);
            let n = 1 + (i as usize % 5);
            let s = Strategy::ALL[(i as usize / 5) % 4];
            let mu = random_measure(s, n, &mut r).unwrap();
            let nu = if i % 2 == 0 { pushed_up(&mu, &mut r) } else { random_measure(s, n, &mut r).unwrap() };
            let e = stochastic_dominates(&nu, &mu, DominanceMode::Enumerate).unwrap().verdict;
            let f = stochastic_dominates(&nu, &mu, DominanceMode::Flow).unwrap().verdict;
            let oracle = (n <= 4).then(|| common::dominates(nu.probs(), mu.probs(), n));
            let agree = e == f && oracle.map_or(true, |d| d == (e == Verdict::Holds));
            (!agree).then(|| format!("pair {i}: enumerate {e}, flow {f}, oracle {oracle:?}"))
        })
        .collect();
    o.expect(bad.is_empty(), format!("dominance disagreements {bad:?}"));
    let opts = PlusOptions { samples: 50, seed: 12 };
    let bad: Vec<String> = (0..100u64)
        .into_par_iter()
        .filter_map(|i| {
            let mut r = rng(12_500 + i);
            let n = 2 + (i as usize % 3);
            let mu = random_measure(Strategy::ALL[i as usize % 4], n, &mut r).unwrap();
            let a = check_plus(&mu, PlusBase::Nc, &opts).unwrap().verdict;
            let b = check_plus(&mu, PlusBase::Hnlc, &opts).unwrap().verdict;
            (a != b).then(|| format!("measure {i}: nc+ {a}, hnlc+ {b}"))
        })
        .collect();
    o.expect(bad.is_empty(), format!("nc+/hnlc+ disagreements {bad:?}"));
    o
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "Example 1 reproduction", Duration::from_secs(1), c1_example1),
        (2, "Example 2 reproduction", Duration::from_secs(1), c2_example2),
        (3, "stochastic-increase table", Duration::from_secs(1), c3_stoch_table),
        (4, "five-point domination without covering", Duration::from_secs(1), c4_five_point),
        (5, "exchangeable equivalences", Duration::from_secs(300), c5_exchangeable),
        (6, "ULC convolution closure", Duration::from_secs(10), c6_convolution),
        (7, "class-S trees", Duration::from_secs(600), c7_class_s),
        (8, "exclusion cylinder inequality", Duration::from_secs(60), c8_exclusion),
        (9, "spanning trees of K4", Duration::from_secs(60), c9_spanning_trees),
        (10, "urn occupancy", Duration::from_secs(300), c10_urns),
        (11, "conjecture searches", Duration::from_secs(1800), c11_searches),
        (12, "checker cross-validation", Duration::from_secs(600), c12_cross_validation),
    ];
    let wanted: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = Vec::new();
    for (id, name, limit, run) in criteria {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let mut out = run();
        let dt = t.elapsed();
        if dt > limit {
            out.expect(false, format!("runtime {:.2} s over the {} s limit", dt.as_secs_f64(), limit.as_secs()));
        }
        let known = KNOWN_UNATTAINABLE.contains(&id);
        let tag = match (out.pass, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("criterion {id:>2} {tag:<12} {:>8.2} s  {name}", dt.as_secs_f64());
        for l in &out.lines {
            println!("    {l}");
        }
        if !out.pass && !known {
            unexpected.push(id);
        }
        if out.pass && known {
            println!("    note: listed as unattainable but passed");
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
