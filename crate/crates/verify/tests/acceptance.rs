//! One line per acceptance criterion: `criterion k: PASS|FAIL (<elapsed>) <detail>`.
//!
//! Runtime budgets are checked against release-mode expectations; debug builds
//! get a 20x allowance so the suite stays meaningful under `cargo test`.

use std::process::Command;
use std::time::{Duration, Instant};

use unramified_core::identity::{
    verify_alternating, verify_basecase, verify_determinant, verify_localcalc, verify_localcalc_with, verify_recursion,
    verify_special_vectors, verify_weyl_constancy, Reading, RunParams,
};
use unramified_core::paramcalc::{verify_appendix, verify_identity, AppendixIdentity};
use unramified_core::weylsum::WeylCase;
use unramified_core::zetarec::SplitZetaText;
use unramified_core::{FieldData, PlaceKind, VerificationReport};

const KINDS: [PlaceKind; 2] = [PlaceKind::Inert, PlaceKind::Split];

fn budget(secs: f64) -> Duration {
    let scale = if cfg!(debug_assertions) { 20.0 } else { 1.0 };
    Duration::from_secs_f64(secs * scale)
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn reports_outcome(reports: &[VerificationReport]) -> Outcome {
    let worst = reports.iter().map(|r| r.max_rel_err).fold(0.0, f64::max);
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| format!("{} n={} {:?} q={} err={:.3e}", r.check, r.n, r.kind, r.q_f, r.max_rel_err))
        .collect();
    Outcome {
        pass: failed.is_empty() && !reports.is_empty(),
        detail: if failed.is_empty() {
            format!("{} reports, worst rel err {worst:.3e}", reports.len())
        } else {
            format!("failing: {}", failed.join("; "))
        },
    }
}

fn criterion(k: u32, secs: f64, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let o = f();
    let elapsed = t.elapsed();
    let in_time = elapsed <= budget(secs);
    let pass = o.pass && in_time;
    let late = if in_time { String::new() } else { format!(" over budget of {secs}s") };
    println!(
        "criterion {k}: {} ({:.3}s) {}{late}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        o.detail
    );
    pass
}

fn c1() -> Outcome {
    let r = verify_basecase(FieldData::inert(2).unwrap(), 20, 1, f64::MIN_POSITIVE).unwrap();
    // exact equality: any nonzero error fails at this tolerance
    let exact = r.max_rel_err == 0.0;
    Outcome { pass: r.pass && exact, detail: format!("max |ζ - 1| relative {:.3e}", r.max_rel_err) }
}

fn c2() -> Outcome {
    let reports: Vec<_> =
        [2, 3].iter().map(|&q| verify_basecase(FieldData::split(q).unwrap(), 20, 2, 1e-8).unwrap()).collect();
    reports_outcome(&reports)
}

fn c3() -> Outcome {
    let mut reports = Vec::new();
    for n_plus_1 in 2..=5 {
        for q in [2, 3] {
            reports.push(verify_weyl_constancy(n_plus_1, FieldData::inert(q).unwrap(), 100, 3, 1e-6).unwrap());
            reports.push(verify_special_vectors(n_plus_1, q, 1e-10).unwrap());
        }
    }
    reports_outcome(&reports)
}

fn c4() -> Outcome {
    let mut reports = Vec::new();
    for n in 1..=3 {
        for kind in KINDS {
            reports.push(verify_determinant(n, FieldData::new(3, kind).unwrap(), 50, 4, 1e-10).unwrap());
        }
    }
    reports_outcome(&reports)
}

fn c5() -> Outcome {
    let mut reports = Vec::new();
    for n in 1..=4 {
        for kind in KINDS {
            reports.push(verify_recursion(n, FieldData::new(2, kind).unwrap(), 50, 5, 1e-9).unwrap());
        }
    }
    reports_outcome(&reports)
}

/// Every failing sample kept in the report names exactly one factor, with finite values on both sides.
fn localized_to_one_factor(r: &VerificationReport) -> Option<String> {
    if r.pass || r.factor_diffs.is_empty() {
        return None;
    }
    let mut names = Vec::new();
    for s in r.factor_diffs.iter().map(|d| d.sample) {
        let here: Vec<_> = r.factor_diffs.iter().filter(|d| d.sample == s).collect();
        if here.len() != 1 || !here[0].lhs.is_finite() || !here[0].rhs.is_finite() {
            return None;
        }
        names.push(here[0].factor.clone());
    }
    names.dedup();
    (names.len() == 1).then(|| names.remove(0))
}

fn c6() -> Outcome {
    let mut reports = Vec::new();
    for n in 1..=3 {
        for kind in KINDS {
            for q in [2, 3] {
                reports.push(verify_localcalc(n, FieldData::new(q, kind).unwrap(), 50, 6, 1e-7).unwrap());
            }
        }
    }
    let mut o = reports_outcome(&reports);
    // The split closed form for odd n >= 3, as printed, must fail at a single named factor.
    let typo = Reading { zeta_split: SplitZetaText::AsPrinted, ..Reading::default() };
    let mut located = Vec::new();
    for q in [2, 3] {
        let p = RunParams::new(3, FieldData::split(q).unwrap(), 50, 6, 1e-7).unwrap();
        match localized_to_one_factor(&verify_localcalc_with(p, typo, false).unwrap()) {
            Some(name) => located.push(name),
            None => {
                o.pass = false;
                o.detail.push_str(&format!("; printed split text at q={q} not localized to one factor"));
            }
        }
    }
    if let Some(name) = located.first() {
        o.detail.push_str(&format!("; printed split text localizes to `{name}`"));
    }
    o
}

fn c7() -> Outcome {
    let mut reports = Vec::new();
    for q in [2, 3] {
        let f = FieldData::inert(q).unwrap();
        let five = verify_appendix(f, 20, 7, 1e-9).unwrap();
        reports.extend(five.into_iter().filter(|r| r.check != "appendix:induce"));
        reports.push(verify_identity(AppendixIdentity::Induce, f, 20, 7, 1e-12).unwrap());
    }
    reports_outcome(&reports)
}

fn c8() -> Outcome {
    let mut reports = Vec::new();
    for n in 1..=5 {
        let (lb, ls) = WeylCase::ranks(n + 1);
        if lb.max(ls) <= 3 {
            reports.push(verify_alternating(n, FieldData::inert(2).unwrap(), 20, 8, 1e-10).unwrap());
        }
    }
    reports_outcome(&reports)
}

fn c9() -> Outcome {
    let runs: [&[&str]; 4] = [
        &["identity", "--n", "1", "2", "3", "--q", "2", "3", "--samples", "10", "--seed", "9"],
        &["identity", "--n", "3", "--place", "split", "--samples", "5", "--seed", "9", "--reading", "printed"],
        &["appendix", "--q", "3", "--samples", "5", "--seed", "9"],
        &["table", "--n", "2", "--samples", "5", "--seed", "9", "--format", "json"],
    ];
    let exe = env!("CARGO_BIN_EXE_verify");
    let mut bad = Vec::new();
    for args in runs {
        let outputs: Vec<_> = (0..2)
            .map(|k| {
                // vary the thread count between repeats; output must not depend on it
                let threads = if k == 0 { "1" } else { "4" };
                let mut a: Vec<&str> = args.to_vec();
                if args[0] != "table" {
                    a.extend(["--threads", threads]);
                }
                Command::new(exe).args(&a).output().unwrap().stdout
            })
            .collect();
        if outputs[0].is_empty() || outputs[0] != outputs[1] {
            bad.push(args[0]);
        }
    }
    Outcome {
        pass: bad.is_empty(),
        detail: if bad.is_empty() { "4 repeated runs byte-identical".into() } else { format!("differs: {bad:?}") },
    }
}

fn main() {
    let results = [
        criterion(1, 1.0, c1),
        criterion(2, 1.0, c2),
        criterion(3, 5.0, c3),
        criterion(4, 1.0, c4),
        criterion(5, 2.0, c5),
        criterion(6, 30.0, c6),
        criterion(7, 2.0, c7),
        criterion(8, 1.0, c8),
        criterion(9, 30.0, c9),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, &p)| !p).map(|(i, _)| i + 1).collect();
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
