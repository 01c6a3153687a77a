//! Acceptance criteria. Each test writes one PASS/FAIL line to stderr,
//! bypassing output capture, and fails when its criterion fails.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use mostar::braces::{classify, BraceKind};
use mostar::enumerate::{
    maximize, maximize_bicyclic, maximize_tricyclic, EnumerationResult, EnumerationTask,
    MaximizeOptions,
};
use mostar::families::{verify_family, FamilyId, FamilyRegistry, Provenance};
use mostar::graph::dot_product;
use mostar::invariants::edge_reports;
use mostar::transforms::{delta_spec, run_lemmas, LemmaId, RowStatus, LEMMAS};
use mostar::{canonical_form, edge_mostar, parse_graph6, Graph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{brute_count, random_connected, random_tree};

fn line(text: &str) {
    writeln!(std::io::stderr().lock(), "{text}").unwrap();
}

fn verdict(criterion: usize, title: &str, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    line(&format!("[{status}] criterion {criterion}: {title} ({detail})"));
    assert!(ok, "criterion {criterion} failed: {detail}");
}

fn tricyclic(m: usize, threads: usize) -> EnumerationResult {
    maximize_tricyclic(m, MaximizeOptions::threads(threads)).unwrap()
}

fn is_maximizer(result: &EnumerationResult, g: &Graph) -> bool {
    result.maximizers.contains(&canonical_form(g))
}

#[test]
fn criterion_1_tricyclic_maxima() {
    let expected = [(7, 12), (8, 23), (9, 36), (10, 53), (11, 72), (12, 96)];
    let mut observed = Vec::new();
    let start = Instant::now();
    for &(m, _) in &expected[..5] {
        observed.push((m, tricyclic(m, 1).max_value));
    }
    let small = start.elapsed();
    let start = Instant::now();
    observed.push((12, tricyclic(12, 1).max_value));
    let single = start.elapsed();
    let start = Instant::now();
    let parallel_max = tricyclic(12, 8).max_value;
    let parallel = start.elapsed();
    let values_ok = expected
        .iter()
        .zip(&observed)
        .all(|(&(_, want), &(_, got))| got == Some(want))
        && parallel_max == Some(96);
    let time_ok = small < Duration::from_secs(60)
        && single < Duration::from_secs(900)
        && parallel < Duration::from_secs(180);
    let shown: Vec<String> = observed
        .iter()
        .map(|(m, v)| format!("m={m}:{}", v.map_or("-".into(), |v| v.to_string())))
        .collect();
    verdict(
        1,
        "tricyclic maxima 12, 23, 36, 53, 72, 96",
        values_ok && time_ok,
        &format!(
            "{}; m<=11 {:.2}s, m=12 {:.2}s on 1 worker, {:.2}s on 8",
            shown.join(" "),
            small.as_secs_f64(),
            single.as_secs_f64(),
            parallel.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_2_extremal_structure() {
    let reg = FamilyRegistry::bundled();
    let r12 = tricyclic(12, 1);
    let r10 = tricyclic(10, 1);
    let r8 = tricyclic(8, 1);
    let r7 = tricyclic(7, 1);
    let at12 = r12.maximizers.len() == 1 && is_maximizer(&r12, &reg.build(FamilyId::A0, 12).unwrap());
    let at10 = r10.maximizers.len() == 1 && is_maximizer(&r10, &reg.build(FamilyId::A2, 10).unwrap());
    let classes7: Vec<String> = r7
        .maximizers
        .iter()
        .map(|f| classify(&parse_graph6(f.as_str()).unwrap()).unwrap().to_string())
        .collect();
    let at7 = classes7.len() == 2
        && classes7.iter().any(|c| c == "ALPHA_3(1,2,2,2)")
        && r7.maximizers.iter().any(|f| {
            classify(&parse_graph6(f.as_str()).unwrap()).unwrap().kind == BraceKind::Alpha2
        });
    let at8 = is_maximizer(&r8, &reg.build(FamilyId::A3, 8).unwrap());
    let counts: Vec<String> = [(8, 3), (9, 7), (11, 2)]
        .iter()
        .map(|&(m, listed)| {
            let found = tricyclic(m, 1).maximizers.len();
            format!("m={m}: {found} found, {listed} listed")
        })
        .collect();
    verdict(
        2,
        "uniqueness at 12 and 10, F1/H1 at 7, A3 at 8",
        at12 && at10 && at7 && at8,
        &format!(
            "m=12 {at12}, m=10 {at10}, m=7 {at7} [{}], m=8 {at8}; counts {}",
            classes7.join(", "),
            counts.join("; ")
        ),
    );
}

#[test]
fn criterion_3_bicyclic_maxima() {
    let reg = FamilyRegistry::bundled();
    let start = Instant::now();
    let results: Vec<EnumerationResult> = (5..=10)
        .map(|m| maximize_bicyclic(m, MaximizeOptions::threads(1)).unwrap())
        .collect();
    let elapsed = start.elapsed();
    let maxima: Vec<Option<u64>> = results.iter().map(|r| r.max_value).collect();
    let expected = [4, 12, 22, 34, 48, 66].map(Some);
    let nine = results[4].maximizers.len();
    let ten = &results[5];
    let b0 = reg.build(FamilyId::B0, 10).unwrap();
    let two_squares = dot_product(&Graph::cycle(4).unwrap(), 0, &Graph::cycle(4).unwrap(), 0)
        .unwrap()
        .with_pendants(0, 2)
        .unwrap();
    let unique_b0 = ten.maximizers.len() == 1
        && is_maximizer(ten, &b0)
        && canonical_form(&b0) == canonical_form(&two_squares);
    verdict(
        3,
        "bicyclic maxima 4, 12, 22, 34, 48, 66",
        maxima == expected && nine == 5 && unique_b0 && elapsed < Duration::from_secs(60),
        &format!(
            "observed {:?}; {nine} maximizers at m=9; unique B0 at m=10 {unique_b0}; {:.2}s",
            maxima.iter().map(|v| v.unwrap_or(0)).collect::<Vec<_>>(),
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_4_family_pinning() {
    let reg = FamilyRegistry::bundled();
    let analytic = [
        FamilyId::A0,
        FamilyId::B0,
        FamilyId::A3,
        FamilyId::H1,
        FamilyId::SMr3,
        FamilyId::SMr4,
    ];
    let mut failures = Vec::new();
    let mut checked = 0;
    for id in analytic {
        let spec = reg.get(id).unwrap();
        assert_eq!(spec.provenance, Provenance::Analytic);
        let check = verify_family(&reg, id, spec.m_min..=spec.m_min + 30).unwrap();
        checked += check.rows.len();
        if !check.passed() {
            failures.push(id.to_string());
        }
    }
    let discovered: Vec<FamilyId> = reg
        .specs()
        .filter(|s| s.provenance == Provenance::Discovered && s.poly.is_some())
        .map(|s| s.id)
        .collect();
    for &id in &discovered {
        let m_min = reg.get(id).unwrap().m_min;
        let check = verify_family(&reg, id, m_min..=m_min + 15).unwrap();
        checked += check.rows.len();
        if !check.passed() {
            failures.push(id.to_string());
        }
    }
    let unpinned: Vec<String> = FamilyId::ALL
        .iter()
        .filter(|id| id.cycles() >= 2 && !reg.contains(**id))
        .map(|id| id.to_string())
        .collect();
    verdict(
        4,
        "closed forms of pinned families",
        failures.is_empty(),
        &format!(
            "{} analytic and {} discovered entries, {checked} sizes, mismatches [{}]; without an entry [{}]",
            analytic.len(),
            discovered.len(),
            failures.join(", "),
            unpinned.join(", ")
        ),
    );
}

#[test]
fn criterion_5_lemma_deltas() {
    let start = Instant::now();
    let report = run_lemmas(20, 2024).unwrap();
    let elapsed = start.elapsed();
    let mut matched = 0;
    for s in &report.summaries {
        let ok = s.status == RowStatus::Match && s.tuples >= 20 && s.positive == s.tuples;
        if ok {
            matched += 1;
        }
        line(&format!(
            "    {:<6} {:<10} {:>2}/{} match, {:>2} positive, claimed {}, measured {}{}",
            s.lemma.as_str(),
            format!("{:?}", s.status).to_uppercase(),
            s.matches,
            s.tuples,
            s.positive,
            s.formula,
            s.measured.polynomial,
            if s.measured.exact { "" } else { " (not affine on the probes)" }
        ));
    }
    // Worked examples, measured under the calibrated labelings.
    for (id, a) in [
        (LemmaId::L37a, [0, 0, 2, 2, 2, 2]),
        (LemmaId::L36b, [0, 3, 0, 0, 0, 0]),
        (LemmaId::L32b, [0, 0, 0, 0, 2, 0]),
    ] {
        let (lemma, _) = delta_spec(id);
        let idx = LEMMAS.iter().position(|l| l.name == lemma.name).unwrap();
        let cal = &report.calibrations[idx];
        let row = mostar::transforms::verify_lemma_shift(cal, id, &a).unwrap();
        line(&format!(
            "    example {id} at {:?}: measured {}, claimed {}",
            row.params, row.measured_delta, row.paper_delta
        ));
    }
    let total = report.summaries.len();
    verdict(
        5,
        "lemma deltas reproduced after calibration",
        matched == total && elapsed < Duration::from_secs(60),
        &format!("{matched}/{total} expressions match on all probes; {:.2}s", elapsed.as_secs_f64()),
    );
}

#[test]
fn criterion_6_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut partition_ok = true;
    let mut incident_ok = true;
    let mut relabel_ok = true;
    for i in 0..10_000 {
        let g = random_connected(&mut rng, 12);
        let m = g.size() as u64;
        for r in edge_reports(&g).unwrap() {
            partition_ok &= r.m_u + r.m_v + r.equidistant + 1 == m;
            incident_ok &= r.m_u + 1 >= g.degree(r.u) as u64 && r.m_v + 1 >= g.degree(r.v) as u64;
        }
        if i % 10 == 0 {
            let mut perm: Vec<usize> = (0..g.order()).collect();
            perm.shuffle(&mut rng);
            relabel_ok &= edge_mostar(&g).unwrap() == edge_mostar(&g.relabel(&perm)).unwrap();
        }
    }

    let mut pendant_ok = true;
    for _ in 0..100 {
        let g1 = random_connected(&mut rng, 8);
        let k = rng.gen_range(2..8);
        let (t, t2) = (random_tree(&mut rng, k), random_tree(&mut rng, k));
        let u = rng.gen_range(0..g1.order());
        let core = g1.edge_list();
        let sum = |g: &Graph| -> u64 {
            edge_reports(g)
                .unwrap()
                .iter()
                .filter(|r| core.contains(&r.edge()))
                .map(|r| r.psi)
                .sum()
        };
        let a = dot_product(&g1, u, &t, rng.gen_range(0..k)).unwrap();
        let b = dot_product(&g1, u, &t2, rng.gen_range(0..k)).unwrap();
        pendant_ok &= sum(&a) == sum(&b);
    }

    let mut complete_ok = true;
    let mut cases = 0;
    for n in 1..=7usize {
        let sizes: Vec<usize> = if n < 7 {
            (0..=n * (n - 1) / 2).collect()
        } else {
            (6..=9).collect()
        };
        for m in sizes {
            let task = EnumerationTask::new(n, m).unwrap();
            complete_ok &= mostar::enumerate::count(&task, 2).unwrap() as usize == brute_count(n, m);
            cases += 1;
        }
    }

    let task = EnumerationTask::tricyclic(11).unwrap();
    let runs: Vec<String> = [1, 2, 8]
        .iter()
        .map(|&threads| {
            serde_json::to_string(&maximize(&task, MaximizeOptions { threads, histogram: true }).unwrap())
                .unwrap()
        })
        .collect();
    let deterministic = runs.iter().all(|r| *r == runs[0]);

    verdict(
        6,
        "invariant suites",
        partition_ok && incident_ok && relabel_ok && pendant_ok && complete_ok && deterministic,
        &format!(
            "partition {partition_ok}, relabeling {relabel_ok}, incident bound {incident_ok}, \
             pendant trees {pendant_ok}, completeness {complete_ok} over {cases} (n, m) cases, \
             worker determinism {deterministic}"
        ),
    );
}
