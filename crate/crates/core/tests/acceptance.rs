//! Acceptance suite: one PASS/FAIL/SKIPPED line per criterion.
//!
//! Criteria 9-11 need external data and run only when the corresponding
//! environment variables are set:
//!
//! * `COLLUSION_AAMAS` - PrefLib categorical bid file of the AAMAS conference
//! * `COLLUSION_S2ORC` - S2ORC-derived dataset, format from
//!   `COLLUSION_S2ORC_FORMAT` (`csv`, `json` or `preflib`; default `csv`)
//! * `COLLUSION_REPLICATION=1` - also run the (hours-long) grid spot checks

#![allow(clippy::type_complexity, clippy::too_many_arguments)]

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use rand::Rng as _;

use collusion::assign::{assign_dataset, solve_assignment, SimilarityMatrix};
use collusion::census::{count_bi_groups_multi, count_uni_groups_multi};
use collusion::dataset::{
    generate_synthetic_dataset, generate_text_similarities, load_dataset_with, sample_text_similarities,
    subsample_authorships, triple_agreement, triple_agreement_in, BidLevel, ConferenceDataset, DatasetFormat,
    LoadOptions, SyntheticConfig, TextSimModel,
};
use collusion::detect::{
    detect_bi, detect_uni, is_local_optimum, specialized_objective, surplus_objective, telltail_z, Algorithm,
    DetectConfig, Representation,
};
use collusion::graph::{build_bi, build_uni, meets_threshold, BiEdgeChoice, UniGraph};
use collusion::harness::{sweep_detection, sweep_success, SweepConfig, SummaryRow};
use collusion::inject::{inject_bi, inject_uni, inject_uni_dataset};
use collusion::matrix::Matrix;
use collusion::rng::rng_from_seed;

enum Outcome {
    Pass(String),
    Fail(String),
    Skipped(String),
}

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn synthetic(n_reviewers: usize, n_papers: usize, bid_prob: f64, authors_per_paper: usize, seed: u64) -> ConferenceDataset {
    generate_synthetic_dataset(&SyntheticConfig {
        n_reviewers,
        n_papers,
        bid_prob,
        authors_per_paper,
        seed,
    })
    .unwrap()
}

fn random_subset(rng: &mut impl rand::Rng, n: usize) -> Vec<usize> {
    (0..n).filter(|_| rng.gen_bool(0.4)).collect()
}

/// Directed edge from the dataset: `u` bids on a paper authored by `v`.
fn bids_on_author(ds: &ConferenceDataset, authors: &[Vec<usize>], u: usize, v: usize) -> bool {
    u != v && (0..ds.n_papers()).any(|p| authors[p].contains(&v) && ds.is_bid((u, p)))
}

/// `(bids, possible, papers)` of the bid density, from the dataset directly.
fn bid_counts(ds: &ConferenceDataset, authors: &[Vec<usize>], subset: &[usize]) -> (usize, usize, usize) {
    let papers: Vec<usize> = (0..ds.n_papers())
        .filter(|&p| authors[p].iter().any(|a| subset.contains(a)))
        .collect();
    let mut bids = 0;
    let mut possible = 0;
    for &r in subset {
        for &p in &papers {
            bids += ds.is_bid((r, p)) as usize;
            possible += !ds.is_conflict((r, p)) as usize;
        }
    }
    (bids, possible, papers.len())
}

fn density_oracles() -> Outcome {
    let mut mismatches = 0;
    let mut checked = [0usize; 2];
    for i in 0..500u64 {
        let mut rng = rng_from_seed(i);
        let ds = synthetic(rng.gen_range(4..20), rng.gen_range(2..15), rng.gen_range(0.02..0.4), rng.gen_range(1..4), i);
        let authors = ds.authors_by_paper();
        let (g1, g2) = (build_uni(&ds), build_bi(&ds));
        let mut s = random_subset(&mut rng, ds.n_reviewers());
        if s.len() < 2 {
            s = vec![0, 1];
        }
        let e = s.iter().flat_map(|&u| s.iter().map(move |&v| (u, v))).filter(|&(u, v)| bids_on_author(&ds, &authors, u, v)).count();
        checked[0] += 1;
        if g1.edge_density(&s).unwrap() != e as f64 / (s.len() * (s.len() - 1)) as f64 {
            mismatches += 1;
        }
        // pick a subset with a defined bid density
        let mut t = random_subset(&mut rng, ds.n_reviewers());
        t.extend(authors.iter().flatten().next().copied());
        t.sort_unstable();
        t.dedup();
        let (bids, possible, papers) = bid_counts(&ds, &authors, &t);
        match g2.bid_density(&t) {
            Ok(eta) => {
                checked[1] += 1;
                if possible == 0 || eta != bids as f64 / possible as f64 {
                    mismatches += 1;
                }
            }
            Err(_) if papers == 0 || possible == 0 => checked[1] += 1,
            Err(_) => mismatches += 1,
        }
    }
    verdict(
        mismatches == 0,
        format!("{} uni + {} bi subsets, {mismatches} mismatches", checked[0], checked[1]),
    )
}

fn exact_dsd() -> Outcome {
    let mut worst = 0.0f64;
    let mut mismatches = 0;
    for i in 0..100u64 {
        let mut rng = rng_from_seed(1000 + i);
        let n = rng.gen_range(2..=12);
        let p = rng.gen_range(0.05..0.6);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| u != v && rng.gen_bool(p))
            .collect();
        let g = UniGraph::from_edges(n, edges.iter().copied()).unwrap();
        let mut best = 0.0f64;
        for mask in 1u32..(1 << n) {
            let e = edges.iter().filter(|&&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1).count();
            best = best.max(e as f64 / mask.count_ones() as f64);
        }
        let got = detect_uni(&g, Algorithm::Dsd, &DetectConfig::default()).unwrap().objective;
        if got != best {
            mismatches += 1;
            worst = worst.max((got - best).abs());
        }
    }
    verdict(mismatches == 0, format!("100 graphs, {mismatches} mismatches (max gap {worst:e})"))
}

fn local_optimality() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut empty = 0;
    let cfg = DetectConfig::default();
    for i in 0..50u64 {
        let mut rng = rng_from_seed(2000 + i);
        let ds = synthetic(rng.gen_range(10..30), rng.gen_range(8..25), rng.gen_range(0.05..0.3), 2, i);
        let (g1, g2) = (build_uni(&ds), build_bi(&ds));
        let cfg = DetectConfig { seed: i, ..cfg.clone() };
        let (w1, r1) = (g1.to_weighted(), g1.reciprocal());
        let w2 = g2.unlabeled(BiEdgeChoice::BidsOnly);
        let (nr, nv) = (g2.n_reviewers(), w2.n_vertices());
        let a = cfg.alpha;
        let runs: Vec<(&str, Vec<usize>, bool, Box<dyn Fn(&[usize]) -> f64>, usize)> = vec![
            {
                let d = detect_uni(&g1, Algorithm::OqcLocal, &cfg).unwrap();
                ("oqc-local/uni", d.raw_vertices, d.empty, Box::new(|s: &[usize]| surplus_objective(&w1, s, 2.0 * a)), g1.n_vertices())
            },
            {
                let d = detect_uni(&g1, Algorithm::TellTail, &cfg).unwrap();
                ("telltail/uni", d.raw_vertices, d.empty, Box::new(|s: &[usize]| telltail_z(&r1, s, &cfg.tail)), g1.n_vertices())
            },
            {
                let d = detect_bi(&g2, Algorithm::OqcLocal, &cfg).unwrap();
                ("oqc-local/bi", d.raw_vertices, d.empty, Box::new(|s: &[usize]| surplus_objective(&w2, s, a)), nv)
            },
            {
                let d = detect_bi(&g2, Algorithm::TellTail, &cfg).unwrap();
                ("telltail/bi", d.raw_vertices, d.empty, Box::new(|s: &[usize]| telltail_z(&w2, s, &cfg.tail)), nv)
            },
            {
                let d = detect_bi(&g2, Algorithm::OqcSpecialized, &cfg).unwrap();
                ("oqc-specialized", d.raw_vertices, d.empty, Box::new(|s: &[usize]| specialized_objective(&g2, s, a)), nr)
            },
        ];
        for (name, vertices, is_empty, f, n) in runs {
            if is_empty {
                empty += 1;
                continue;
            }
            checked += 1;
            if !is_local_optimum(n, &vertices, f) {
                failures.push(format!("{name}#{i}"));
            }
        }
    }
    verdict(
        failures.is_empty(),
        format!("{checked} outputs checked ({empty} empty), failures: {failures:?}"),
    )
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut with: Vec<Vec<usize>> = combinations(&items[1..], k - 1)
        .into_iter()
        .map(|mut c| {
            c.insert(0, items[0]);
            c
        })
        .collect();
    with.extend(combinations(&items[1..], k));
    with
}

fn census_soundness() -> Outcome {
    let thresholds = [0.2, 0.4, 0.6, 0.8, 1.0];
    let mut cells = 0;
    let mut mismatches = 0;
    for i in 0..50u64 {
        let mut rng = rng_from_seed(3000 + i);
        let ds = synthetic(15, rng.gen_range(6..12), rng.gen_range(0.1..0.4), 2, i);
        let authors = ds.authors_by_paper();
        let pool = ds.author_reviewers();
        let (g1, g2) = (build_uni(&ds), build_bi(&ds));
        for k in 2..=5 {
            let uni = count_uni_groups_multi(&g1, &pool, k, &thresholds, None).unwrap();
            let bi = count_bi_groups_multi(&g2, &pool, k, &thresholds, None).unwrap();
            let combos = combinations(&pool, k);
            for (j, &t) in thresholds.iter().enumerate() {
                let want_uni = combos
                    .iter()
                    .filter(|s| {
                        let e = s.iter().flat_map(|&u| s.iter().map(move |&v| (u, v))).filter(|&(u, v)| bids_on_author(&ds, &authors, u, v)).count();
                        meets_threshold(e, k * (k - 1), t)
                    })
                    .count() as u64;
                let want_bi = combos
                    .iter()
                    .filter(|s| {
                        let (b, possible, papers) = bid_counts(&ds, &authors, s);
                        papers > 0 && possible > 0 && meets_threshold(b, possible, t)
                    })
                    .count() as u64;
                cells += 2;
                mismatches += (uni[j].count != want_uni || !uni[j].exact) as usize;
                mismatches += (bi[j].count != want_bi || !bi[j].exact) as usize;
            }
        }
    }
    verdict(mismatches == 0, format!("{cells} cells over 50 instances, {mismatches} mismatches"))
}

fn exhaustive_assignment(s: &SimilarityMatrix, conflicts: &BTreeSet<(usize, usize)>, load: usize, cap: usize) -> Option<f64> {
    let reviewers: Vec<usize> = (0..s.n_reviewers()).collect();
    let cands = combinations(&reviewers, load);
    fn go(p: usize, s: &SimilarityMatrix, c: &BTreeSet<(usize, usize)>, cands: &[Vec<usize>], used: &mut [usize], cap: usize, acc: f64, best: &mut Option<f64>) {
        if p == s.n_papers() {
            if best.is_none_or(|b| acc > b) {
                *best = Some(acc);
            }
            return;
        }
        for set in cands {
            if set.iter().any(|&r| c.contains(&(r, p)) || used[r] == cap) {
                continue;
            }
            set.iter().for_each(|&r| used[r] += 1);
            let v = set.iter().fold(acc, |a, &r| a + s.get(r, p));
            go(p + 1, s, c, cands, used, cap, v, best);
            set.iter().for_each(|&r| used[r] -= 1);
        }
    }
    let mut best = None;
    go(0, s, conflicts, &cands, &mut vec![0; s.n_reviewers()], cap, 0.0, &mut best);
    best
}

fn assignment_optimality() -> Outcome {
    let mut solved = 0;
    let mut infeasible = 0;
    let mut mismatches = 0;
    let mut violations = 0;
    for i in 0..30u64 {
        let mut rng = rng_from_seed(4000 + i);
        let (nr, np) = (rng.gen_range(3..=6), rng.gen_range(1..=6));
        let (load, cap) = (rng.gen_range(1..=2), rng.gen_range(1..=3));
        let rows: Vec<Vec<f64>> = (0..nr).map(|_| (0..np).map(|_| rng.gen::<f64>()).collect()).collect();
        let conflicts: BTreeSet<(usize, usize)> =
            (0..nr).flat_map(|r| (0..np).map(move |p| (r, p))).filter(|_| rng.gen_bool(0.15)).collect();
        let s = SimilarityMatrix::new(Matrix::from_rows(&rows)).unwrap();
        match (exhaustive_assignment(&s, &conflicts, load, cap), solve_assignment(&s, &conflicts, load, cap)) {
            (Some(best), Ok(a)) => {
                solved += 1;
                violations += a.pairs().filter(|p| conflicts.contains(p)).count();
                mismatches += (a.objective(&s) != best) as usize;
            }
            (None, Err(_)) => infeasible += 1,
            _ => mismatches += 1,
        }
    }
    // conflicts on full-size assignments after injected bids
    for i in 0..10u64 {
        let ds = generate_text_similarities(&synthetic(200, 150, 0.02, 3, i), &TextSimModel::default(), i).unwrap();
        let (edited, _, _) = inject_uni_dataset(&ds, 10, 0.8, i).unwrap();
        let a = assign_dataset(&edited, 3, 6).unwrap();
        violations += a.pairs().filter(|&p| edited.is_conflict(p)).count();
    }
    verdict(
        mismatches == 0 && violations == 0,
        format!("{solved} optimal, {infeasible} infeasible (both agree), {mismatches} mismatches, {violations} conflict violations"),
    )
}

fn injection_contracts() -> Outcome {
    let ds = synthetic(200, 150, 0.02, 3, 5);
    let authors = ds.author_reviewers();
    let (g1, g2) = (build_uni(&ds), build_bi(&ds));
    let mut bad = Vec::new();
    for seed in 0..100u64 {
        let mut rng = rng_from_seed(5000 + seed);
        let k = rng.gen_range(2..=20);
        let target = (rng.gen_range(1..=10) as f64) / 10.0;
        let (_, plan) = inject_uni(&g1, &authors, k, target, seed).unwrap();
        let bound = target + 1.0 / (k * (k - 1)) as f64;
        let ok = if plan.initial_density < target {
            plan.achieved_density + 1e-12 >= target && plan.achieved_density <= bound + 1e-12
        } else {
            plan.added.is_empty()
        };
        if !ok {
            bad.push(format!("uni seed {seed}"));
        }
        match inject_bi(&g2, &authors, k, target, seed) {
            Ok((g, plan)) => {
                let possible = g.density_parts(&plan.colluders).possible();
                let ok = if plan.initial_density < target {
                    plan.achieved_density + 1e-12 >= target
                        && plan.achieved_density <= target + 1.0 / possible as f64 + 1e-12
                } else {
                    plan.added.is_empty()
                };
                if !ok {
                    bad.push(format!("bi seed {seed}"));
                }
            }
            Err(e) => bad.push(format!("bi seed {seed}: {e}")),
        }
        // bid realization containment
        let (edited, tgt, plan) = inject_uni_dataset(&ds, k, target, seed).unwrap();
        let rebuilt = build_uni(&edited);
        let ring: BTreeSet<usize> = plan.colluders.iter().copied().collect();
        for &u in &plan.colluders {
            let inside_ok = rebuilt.out_neighbors(u).iter().filter(|v| ring.contains(v)).all(|&v| tgt.has_edge(u, v));
            let outside_ok = tgt.out_neighbors(u).iter().filter(|v| !ring.contains(v)).all(|&v| rebuilt.has_edge(u, v));
            if !(inside_ok && outside_ok) {
                bad.push(format!("containment seed {seed} reviewer {u}"));
            }
        }
        let honest_same = ds.bids().keys().chain(edited.bids().keys()).filter(|(r, _)| !ring.contains(r)).all(|&p| ds.is_bid(p) == edited.is_bid(p));
        if !honest_same {
            bad.push(format!("honest bids changed seed {seed}"));
        }
    }
    verdict(bad.is_empty(), format!("100 injections per representation, violations: {bad:?}"))
}

fn mean_of(rows: &[SummaryRow], k: usize, algorithm: &str) -> f64 {
    rows.iter()
        .find(|r| r.k == k && r.algorithm == algorithm && r.metric == "jaccard")
        .map_or(f64::NAN, |r| r.mean)
}

fn planted_recovery() -> Outcome {
    let ds = synthetic(200, 150, 0.02, 3, 7);
    let base = SweepConfig {
        trials: 50,
        seed: 7,
        workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        algorithms: Algorithm::supported_on(Representation::Uni),
        ..SweepConfig::new(Representation::Uni)
    };
    let high = sweep_detection(&SweepConfig { ks: vec![20], densities: vec![1.0], ..base.clone() }, &ds).unwrap();
    let low = sweep_detection(&SweepConfig { ks: vec![4], densities: vec![0.4], ..base.clone() }, &ds).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for a in ["dsd", "oqc-local", "telltail"] {
        let m = mean_of(&high.summary, 20, a);
        ok &= m >= 0.9;
        parts.push(format!("{a}@(20,1.0)={m:.3}"));
    }
    for a in &base.algorithms {
        let m = mean_of(&low.summary, 4, a.name());
        ok &= m <= 0.3;
        parts.push(format!("{}@(4,0.4)={m:.3}", a.name()));
    }
    verdict(ok, parts.join(" "))
}

fn text_similarity_statistics() -> Outcome {
    let ds = synthetic(500, 400, 0.1, 3, 8);
    let model = TextSimModel::default();
    let raw = sample_text_similarities(&ds, &model, 8).unwrap();
    let clamped = generate_text_similarities(&ds, &model, 8).unwrap();
    let positive = [BidLevel::YES, BidLevel::MAYBE];
    let easy = triple_agreement_in(&ds, &raw, &positive, &[BidLevel::NONE]).unwrap();
    let hard = triple_agreement_in(&ds, &raw, &[BidLevel::YES], &[BidLevel::MAYBE]).unwrap();
    let easy_c = triple_agreement(&clamped, &positive, &[BidLevel::NONE]).unwrap();
    let hard_c = triple_agreement(&clamped, &[BidLevel::YES], &[BidLevel::MAYBE]).unwrap();
    let ok = easy.total >= 100_000
        && hard.total >= 100_000
        && (easy.fraction() - 0.80).abs() <= 0.02
        && (hard.fraction() - 0.62).abs() <= 0.02;
    verdict(
        ok,
        format!(
            "easy {:.4} over {} triples, hard {:.4} over {} triples; clamped easy {:.4} (dev {:+.4}), hard {:.4} (dev {:+.4})",
            easy.fraction(),
            easy.total,
            hard.fraction(),
            hard.total,
            easy_c.fraction(),
            easy_c.fraction() - easy.fraction(),
            hard_c.fraction(),
            hard_c.fraction() - hard.fraction()
        ),
    )
}

fn env_path(var: &str) -> Option<PathBuf> {
    std::env::var_os(var).map(PathBuf::from).filter(|p| p.exists())
}

fn load_aamas() -> Option<collusion::Result<ConferenceDataset>> {
    let path = env_path("COLLUSION_AAMAS")?;
    Some(
        load_dataset_with(&path, DatasetFormat::PreflibCategorical, &LoadOptions::default())
            .and_then(|l| subsample_authorships(&l.dataset, 3, 0)),
    )
}

fn load_s2orc() -> Option<collusion::Result<(ConferenceDataset, usize)>> {
    let path = env_path("COLLUSION_S2ORC")?;
    let format = std::env::var("COLLUSION_S2ORC_FORMAT").unwrap_or_else(|_| "csv".into());
    Some(format.parse::<DatasetFormat>().and_then(|f| {
        load_dataset_with(&path, f, &LoadOptions { drop_conflicted_bids: true }).map(|l| (l.dataset, l.discarded_bids))
    }))
}

fn loader_shapes() -> Outcome {
    let (aamas, s2orc) = (load_aamas(), load_s2orc());
    if aamas.is_none() && s2orc.is_none() {
        return Outcome::Skipped("set COLLUSION_AAMAS / COLLUSION_S2ORC to run".into());
    }
    let mut ok = true;
    let mut parts = Vec::new();
    match aamas {
        Some(Ok(d)) => {
            let got = (d.n_papers(), d.n_reviewers(), d.author_reviewers().len());
            ok &= got == (526, 596, 398);
            parts.push(format!("AAMAS papers/reviewers/authors {got:?}"));
        }
        Some(Err(e)) => {
            ok = false;
            parts.push(format!("AAMAS: {e}"));
        }
        None => parts.push("AAMAS skipped".into()),
    }
    match s2orc {
        Some(Ok((d, dropped))) => {
            let got = (d.n_papers(), d.n_reviewers(), d.author_reviewers().len(), dropped);
            ok &= got == (2446, 2483, 984, 90);
            parts.push(format!("S2ORC papers/reviewers/authors/dropped {got:?}"));
        }
        Some(Err(e)) => {
            ok = false;
            parts.push(format!("S2ORC: {e}"));
        }
        None => parts.push("S2ORC skipped".into()),
    }
    verdict(ok, parts.join("; "))
}

fn s2orc_similarities() -> Outcome {
    let Some(loaded) = load_s2orc() else {
        return Outcome::Skipped("set COLLUSION_S2ORC to run".into());
    };
    let ds = match loaded {
        Ok((d, _)) => d,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    if ds.text_sim().is_none() {
        return Outcome::Skipped("the S2ORC export carries no text similarities".into());
    }
    let easy = triple_agreement(&ds, &[BidLevel(1), BidLevel(2), BidLevel(3)], &[BidLevel::NONE]).unwrap();
    let hard = triple_agreement(&ds, &[BidLevel(3)], &[BidLevel(1), BidLevel(2)]).unwrap();
    verdict(
        (easy.fraction() - 0.83).abs() <= 0.01 && (hard.fraction() - 0.65).abs() <= 0.01,
        format!("easy {:.4}, hard {:.4}", easy.fraction(), hard.fraction()),
    )
}

fn grid_spot_checks() -> Outcome {
    if std::env::var("COLLUSION_REPLICATION").as_deref() != Ok("1") {
        return Outcome::Skipped("set COLLUSION_REPLICATION=1 with the datasets to run".into());
    }
    let (Some(Ok(aamas)), Some(Ok((s2orc, _)))) = (load_aamas(), load_s2orc()) else {
        return Outcome::Skipped("both datasets are required".into());
    };
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let cfg = |k: usize, d: f64| SweepConfig {
        ks: vec![k],
        densities: vec![d],
        trials: 50,
        workers,
        ..SweepConfig::new(Representation::Bi)
    };
    let det = sweep_detection(&cfg(10, 1.0), &aamas).unwrap();
    let best = det
        .summary
        .iter()
        .filter(|r| r.metric == "jaccard")
        .map(|r| r.mean)
        .fold(f64::NEG_INFINITY, f64::max);
    let with_sims = |d: &ConferenceDataset| {
        if d.text_sim().is_some() {
            d.clone()
        } else {
            generate_text_similarities(d, &TextSimModel::default(), 0).unwrap()
        }
    };
    let metric = |rows: &[SummaryRow], m: &str| rows.iter().find(|r| r.metric == m).map_or(f64::NAN, |r| r.mean);
    let a = sweep_success(&cfg(16, 0.8), &with_sims(&aamas)).unwrap().summary;
    let s = sweep_success(&cfg(26, 0.8), &with_sims(&s2orc)).unwrap().summary;
    let checks = [
        (best, 0.31),
        (metric(&a, "paper_frac"), 0.30),
        (metric(&a, "colluder_frac"), 0.54),
        (metric(&s, "paper_frac"), 0.26),
        (metric(&s, "colluder_frac"), 0.42),
    ];
    verdict(
        checks.iter().all(|(got, want)| (got - want).abs() <= 0.10),
        format!("(got, reference): {checks:?}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("density oracles", density_oracles),
        ("exact densest subgraph", exact_dsd),
        ("local optimality", local_optimality),
        ("census soundness", census_soundness),
        ("assignment optimality", assignment_optimality),
        ("injection contracts", injection_contracts),
        ("planted-ring recovery", planted_recovery),
        ("text-similarity statistics", text_similarity_statistics),
        ("loader shapes", loader_shapes),
        ("S2ORC similarities", s2orc_similarities),
        ("grid spot checks", grid_spot_checks),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = run();
        let secs = started.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Outcome::Skipped(d) => ("SKIPPED", d),
        };
        println!("{tag} {}: {name} [{secs:.1}s] {detail}", i + 1);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
