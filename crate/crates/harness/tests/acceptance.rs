//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use asymlin_harness::format::OperatorKind;
use asymlin_harness::suite::{default_corpus, run_suite, CheckStatus, CorpusEntry, SuiteOptions, SuiteReport, ALAOGLU_TERMS};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn run(suite: &str) -> (Vec<CorpusEntry>, SuiteReport) {
    let corpus = default_corpus(suite, 0).expect("known suite");
    let report = run_suite(suite, &corpus, &SuiteOptions::default()).expect("known suite");
    (corpus, report)
}

fn instances_where(report: &SuiteReport, pred: impl Fn(&asymlin_harness::suite::CheckRecord) -> bool) -> BTreeSet<String> {
    report.records.iter().filter(|r| pred(r)).map(|r| r.instance.clone()).collect()
}

fn first_failure(report: &SuiteReport) -> String {
    report
        .records
        .iter()
        .find(|r| r.status == CheckStatus::Fail)
        .map(|r| format!("; first failure {} {}: {}", r.instance, r.tag, r.witness.as_deref().unwrap_or("")))
        .unwrap_or_default()
}

fn summary(report: &SuiteReport) -> String {
    let s = &report.summary;
    format!("{} checks, {} pass, {} fail, {} refused{}", s.total, s.pass, s.fail, s.refused, first_failure(report))
}

fn timed(limit: Option<Duration>, report: &SuiteReport, elapsed: Duration) -> (bool, String) {
    let within = limit.is_none_or(|l| elapsed < l);
    let note = match limit {
        Some(l) => format!("{:.1} s of {} s", elapsed.as_secs_f64(), l.as_secs()),
        None => format!("{:.1} s", elapsed.as_secs_f64()),
    };
    (within && report.passed(), note)
}

fn axioms() -> Outcome {
    let start = Instant::now();
    let (corpus, report) = run("axioms");
    let (ok, time) = timed(Some(Duration::from_secs(30)), &report, start.elapsed());
    let shape = corpus.len() == 200
        && corpus.iter().all(|e| e.file.spaces.iter().all(|s| (1..=4).contains(&s.dim) && s.generators.len() <= 8));
    let triples = report.records.iter().all(|r| r.values.get("samples").map(String::as_str) == Some("1000"));
    outcome(ok && shape && triples, format!("200 norms x 1000 triples; {}; {time}", summary(&report)))
}

fn conjugation() -> Outcome {
    let start = Instant::now();
    let (_, report) = run("conjugation");
    let (ok, time) = timed(None, &report, start.elapsed());
    outcome(ok && report.summary.total == 600, format!("{}; {time}", summary(&report)))
}

fn linear_norms() -> Outcome {
    let start = Instant::now();
    let (corpus, report) = run("linear-norms");
    let (ok, time) = timed(Some(Duration::from_secs(60)), &report, start.elapsed());
    outcome(ok && corpus.len() == 100 && report.summary.total == 400, format!("100 operators; {}; {time}", summary(&report)))
}

fn sup_equivalence() -> Outcome {
    let (corpus, report) = run("sup-equivalence");
    outcome(report.passed() && corpus.len() == 100 && report.summary.total == 100, summary(&report))
}

fn rescaling() -> Outcome {
    let (corpus, report) = run("rescaling");
    let zero_branch = instances_where(&report, |r| r.values.get("zero_branch").map(String::as_str) == Some("true"));
    let radii: BTreeSet<&str> = report.records.iter().filter_map(|r| r.values.get("r").map(String::as_str)).collect();
    let all_radii = radii == BTreeSet::from(["1/2", "1", "3"]);
    let ok = report.passed() && corpus.len() == 50 && all_radii && zero_branch.len() >= 5;
    outcome(ok, format!("50 operators x r in {{1/2, 1, 3}}; {} zero-branch instances; {}", zero_branch.len(), summary(&report)))
}

fn bilinear_norms() -> Outcome {
    let (_, report) = run("bilinear-norms");
    let (_, adjoint) = run("adjoint-norm-equality");
    let gaps = instances_where(&report, |r| r.values.get("strict_gap").map(String::as_str) == Some("true"));
    let ok = report.passed() && adjoint.passed() && gaps.len() >= 10;
    outcome(ok, format!("{} strict gaps; {}; adjoint corpus: {}", gaps.len(), summary(&report), summary(&adjoint)))
}

fn schauder() -> Outcome {
    let start = Instant::now();
    let (corpus, report) = run("schauder-bilinear");
    let (ok, time) = timed(Some(Duration::from_secs(120)), &report, start.elapsed());
    let certified = report.summary.pass == 40 && corpus.len() == 20;
    let radii: Vec<&str> = report.records.iter().filter_map(|r| r.values.get("radius").map(String::as_str)).collect();
    let max_ratio = report
        .records
        .iter()
        .filter_map(|r| Some((r.values.get("radius")?, r.values.get("eps")?)))
        .map(|(r, e)| parse(r) / parse(e))
        .fold(0.0, f64::max);
    outcome(
        ok && certified && radii.len() == 40,
        format!("20 operators x eps in {{1/2, 1/4}}; worst measured radius {max_ratio:.3} eps (bound 3 eps); {}; {time}", summary(&report)),
    )
}

fn parse(s: &str) -> f64 {
    match s.split_once('/') {
        Some((n, d)) => n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap(),
        None => s.parse().unwrap(),
    }
}

fn bideal() -> Outcome {
    let (_, report) = run("bideal");
    let rights = report.records.iter().filter(|r| r.tag.starts_with("right")).collect::<Vec<_>>();
    let inclusions = rights.iter().all(|r| r.values.get("inclusion").map(String::as_str) == Some("true"));
    let tags: BTreeSet<&str> = report.records.iter().map(|r| r.tag.as_str()).collect();
    let all_tags = tags == BTreeSet::from(["left-asym", "left-sym", "right-asym", "right-sym", "rank-one"]);
    outcome(
        report.passed() && report.summary.refused == 0 && inclusions && all_tags,
        format!("{} right compositions with LP inclusion; {}", rights.len(), summary(&report)),
    )
}

fn closedness() -> Outcome {
    let (_, report) = run("closedness");
    let uniform = report.records.iter().filter(|r| r.instance.starts_with("uniform")).collect::<Vec<_>>();
    let pointwise = report.records.iter().filter(|r| r.instance.starts_with("pointwise")).collect::<Vec<_>>();
    let uniform_ok = uniform.len() == 10 && uniform.iter().all(|r| r.status == CheckStatus::Pass);
    let refused_ok = pointwise.len() == 5
        && pointwise
            .iter()
            .all(|r| r.status == CheckStatus::Refused && r.values.get("pointwise").map(String::as_str) == Some("true"));
    outcome(
        report.passed() && uniform_ok && refused_ok,
        format!(
            "{} uniform certified, {} pointwise-only refused; {}",
            uniform.iter().filter(|r| r.status == CheckStatus::Pass).count(),
            pointwise.iter().filter(|r| r.status == CheckStatus::Refused).count(),
            summary(&report)
        ),
    )
}

fn alaoglu() -> Outcome {
    let (corpus, report) = run("alaoglu");
    let shape = corpus.len() == 20
        && corpus.iter().all(|e| e.file.operators.iter().filter(|o| matches!(o.kind, OperatorKind::Form { .. })).count() == ALAOGLU_TERMS);
    outcome(report.passed() && shape && report.summary.pass == 20, format!("20 sequences x 64 forms; {}", summary(&report)))
}

fn precompact_decision() -> Outcome {
    let (corpus, report) = run("precompact-decision");
    let certified = instances_where(&report, |r| r.values.get("verdict").map(String::as_str) == Some("precompact"));
    let refuted = instances_where(&report, |r| r.values.get("verdict").map(String::as_str) == Some("not-precompact"));
    let ok = report.passed() && corpus.len() == 100 && certified.len() + refuted.len() == 100 && !certified.is_empty() && !refuted.is_empty();
    outcome(ok, format!("{} certified, {} refuted; {}", certified.len(), refuted.len(), summary(&report)))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("norm and quasi-metric axioms", axioms),
        ("conjugation and symmetrization identities", conjugation),
        ("linear operator norm identities", linear_norms),
        ("sup-equivalence over conjugate balls", sup_equivalence),
        ("bilinear rescaling equivalence", rescaling),
        ("bilinear, adjoint and Arens norm identities", bilinear_norms),
        ("Schauder-type dual nets", schauder),
        ("bideal compositions and rank-one operators", bideal),
        ("closedness under uniform limits", closedness),
        ("desk-scale Alaoglu extraction", alaoglu),
        ("polyhedral precompactness decision", precompact_decision),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.ok {
            failed += 1;
        }
        println!("[{:>2}] {:<45} {}  ({})", i + 1, name, if o.ok { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
