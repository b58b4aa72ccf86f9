//! Verification reports and the per-sample check protocol.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numfield::PlaceKind;
use crate::C64;

/// Failing samples whose factor diffs are kept in a report.
pub const MAX_DIFF_SAMPLES: usize = 3;

/// A factor on which the two sides of a check disagree.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorDiff {
    pub sample: usize,
    pub factor: String,
    pub lhs: C64,
    pub rhs: C64,
}

/// Parameters identifying a check run.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportMeta {
    pub check: String,
    pub n: usize,
    pub kind: PlaceKind,
    pub q_f: u64,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

/// Outcome of one sample of a check.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleOutcome {
    pub index: usize,
    pub lhs: C64,
    pub rhs: C64,
    pub rel_err: f64,
    /// Factor-level localization; only computed when the sample fails.
    pub diffs: Vec<(String, C64, C64)>,
}

impl SampleOutcome {
    pub fn compare(index: usize, lhs: C64, rhs: C64) -> Self {
        SampleOutcome { index, lhs, rhs, rel_err: crate::rel_err(lhs, rhs), diffs: Vec::new() }
    }

    /// A sample whose evaluation raised an error.
    pub fn errored(index: usize, err: &Error) -> Self {
        let nan = C64::new(f64::NAN, f64::NAN);
        SampleOutcome {
            index,
            lhs: nan,
            rhs: nan,
            rel_err: f64::INFINITY,
            diffs: alloc::vec![(err.to_string(), nan, nan)],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub check: String,
    pub n: usize,
    pub kind: PlaceKind,
    pub q_f: u64,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_rel_err: f64,
    pub pass: bool,
    pub factor_diffs: Vec<FactorDiff>,
}

impl VerificationReport {
    /// Reduce sample outcomes; diffs are taken in sample-index order.
    pub fn assemble(meta: ReportMeta, mut outcomes: Vec<SampleOutcome>) -> Self {
        outcomes.sort_by_key(|o| o.index);
        let max_rel_err =
            outcomes.iter().map(|o| o.rel_err).fold(0.0f64, |a, e| if e.is_nan() { f64::INFINITY } else { a.max(e) });
        let pass = max_rel_err <= meta.tol;
        let mut factor_diffs = Vec::new();
        if !pass {
            for o in outcomes.iter().filter(|o| !(o.rel_err <= meta.tol)).take(MAX_DIFF_SAMPLES) {
                if o.diffs.is_empty() {
                    factor_diffs.push(FactorDiff {
                        sample: o.index,
                        factor: meta.check.clone(),
                        lhs: o.lhs,
                        rhs: o.rhs,
                    });
                }
                for (factor, lhs, rhs) in &o.diffs {
                    factor_diffs.push(FactorDiff { sample: o.index, factor: factor.clone(), lhs: *lhs, rhs: *rhs });
                }
            }
        }
        VerificationReport {
            check: meta.check,
            n: meta.n,
            kind: meta.kind,
            q_f: meta.q_f,
            samples: meta.samples,
            seed: meta.seed,
            tol: meta.tol,
            max_rel_err,
            pass,
            factor_diffs,
        }
    }
}

/// A sampled check: independent samples reduced into one report.
pub trait Check: Sync {
    fn meta(&self) -> ReportMeta;

    /// Evaluate sample `index`. Evaluation errors other than sampler
    /// exhaustion should be folded into a failing outcome.
    fn sample(&self, index: usize) -> Result<SampleOutcome>;
}

/// Run every sample of a check in index order.
pub fn run_check(check: &dyn Check) -> Result<VerificationReport> {
    let meta = check.meta();
    let outcomes = (0..meta.samples).map(|k| check.sample(k)).collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::assemble(meta, outcomes))
}

/// Fold non-fatal evaluation errors into a failing outcome.
pub fn settle(index: usize, r: Result<SampleOutcome>) -> Result<SampleOutcome> {
    match r {
        Ok(o) => Ok(o),
        Err(e @ Error::SamplerExhausted { .. }) => Err(e),
        Err(e) => Ok(SampleOutcome::errored(index, &e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta(tol: f64) -> ReportMeta {
        ReportMeta { check: "t".into(), n: 1, kind: PlaceKind::Inert, q_f: 2, samples: 2, seed: 0, tol }
    }

    #[test]
    fn pass_iff_within_tol_and_diffs_iff_fail() {
        let a = SampleOutcome::compare(0, C64::new(1.0, 0.0), C64::new(1.0, 0.0));
        let b = SampleOutcome::compare(1, C64::new(1.0, 0.0), C64::new(1.1, 0.0));
        let ok = VerificationReport::assemble(meta(0.5), alloc::vec![a.clone(), b.clone()]);
        assert!(ok.pass && ok.factor_diffs.is_empty());
        let bad = VerificationReport::assemble(meta(1e-3), alloc::vec![b, a]);
        assert!(!bad.pass);
        assert_eq!(bad.factor_diffs.len(), 1);
        assert_eq!(bad.factor_diffs[0].sample, 1);
    }

    #[test]
    fn errored_sample_fails() {
        let e = SampleOutcome::errored(0, &Error::Invalid("x".into()));
        let r = VerificationReport::assemble(meta(1.0), alloc::vec![e]);
        assert!(!r.pass);
        assert_eq!(r.factor_diffs.len(), 1);
    }
}
