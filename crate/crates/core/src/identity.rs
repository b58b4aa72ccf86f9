//! The unramified identity `ζ(Ξ, ξ) S_{Ξ^{-1},ξ^{-1}}(1) = Δ_{G_{n+2}} L_{π_{n+2},π_{n+1}}(1/2)`
//! and the sampled checks built around it.
//!
//! Both sides are assembled as labelled products. When a sample fails, the
//! ingredients are compared one at a time (standard L-factor against the
//! determinant, closed forms against the recursion, the Weyl sum against the
//! motive value, and finally the two sides factor by factor) and the first
//! disagreement is reported.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::factor::{localize, Monomial, Product, Role, Tuples};
use crate::numfield::{motive_delta, CharValue, FieldData, PlaceKind};
use crate::report::{run_check, settle, Check, ReportMeta, SampleOutcome, VerificationReport};
use crate::sample::{generic_pair, generic_units, random_s, rng_for, stored_len};
use crate::satake::{adjoint_display, std_tensor_display, std_tensor_lfactor, std_tensor_lfactor_det, SatakeDatum};
use crate::weylsum::{
    d0_factor, d1_factor, enumerate_weyl, iwahori_volume_at, motive_a_value, ratio_to_c64, s_value_inert,
    s_value_inert_scalars, s_value_split, s_value_split_display, special_sum, weyl_sum_a, LengthConvention, WeylCase,
    KMS, MAX_WEYL_RANK,
};
use crate::zetarec::{
    zeta_base_split_closed, zeta_base_split_series, zeta_closed_display, zeta_recursive, zeta_recursive_for,
    SplitZetaText, REC_CHI,
};
use crate::{rel_err, C64};

/// Largest `n` accepted by the identity checks without an override.
pub const MAX_IDENTITY_N: usize = 3;

/// Order in which the split `S(1)` formula reads the inverted tuples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum SplitLayout {
    /// Feed the stored `GL` tuples unchanged.
    AsStored,
    /// Reverse the first and last halves of each tuple, keeping the middle,
    /// so the formula sees the ordering of its own Borel subgroup.
    #[default]
    StandardBorel,
}

/// Normalization of the measure in the split `S(1)` formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum SplitMeasure {
    /// Use the formula as written.
    AsPrinted,
    /// Multiply by `Vol(B_{n+1}) Vol(B_{n+2})` for the `GL` Iwahori subgroups,
    /// matching the normalization of the inert formula.
    #[default]
    KNormalized,
}

/// Choices made where the printed formulas admit more than one reading.
///
/// The default is the reading under which the identity holds; see
/// [`Reading::as_printed`] for the literal one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Reading {
    pub lengths: LengthConvention,
    pub split_layout: SplitLayout,
    pub split_measure: SplitMeasure,
    pub zeta_split: SplitZetaText,
}

impl Reading {
    pub fn as_printed() -> Self {
        Reading {
            lengths: LengthConvention::Coxeter,
            split_layout: SplitLayout::AsStored,
            split_measure: SplitMeasure::AsPrinted,
            zeta_split: SplitZetaText::AsPrinted,
        }
    }
}

/// `t[..l]` reversed, the middle, then `t[m-l..]` reversed, with `l = ⌊m/2⌋`.
pub fn standard_borel<T: Clone>(t: &[T]) -> Vec<T> {
    let m = t.len();
    let l = m / 2;
    let mut out: Vec<T> = t[..l].iter().rev().cloned().collect();
    out.extend_from_slice(&t[l..m - l]);
    out.extend(t[m - l..].iter().rev().cloned());
    out
}

fn layout<T: Clone>(t: &[T], l: SplitLayout) -> Vec<T> {
    match l {
        SplitLayout::AsStored => t.to_vec(),
        SplitLayout::StandardBorel => standard_borel(t),
    }
}

fn check_pair(small: &SatakeDatum, big: &SatakeDatum) -> Result<usize> {
    if small.m() + 1 != big.m() || small.field() != big.field() {
        return Err(Error::Invalid(format!("expected U(n+1) × U(n+2) data, got U({}) × U({})", small.m(), big.m())));
    }
    Ok(small.m() - 1)
}

fn values(d: &SatakeDatum) -> Vec<C64> {
    d.values()
}

fn eval_on(p: &Product, small: &SatakeDatum, big: &SatakeDatum) -> Result<C64> {
    let (bv, sv) = (values(big), values(small));
    p.eval(small.field(), &Tuples { big: &bv, small: &sv })
}

/// `L_E(s, BC(π_{n+2}) ⊠ BC(π_{n+1})) / (L_F(s+1/2, π_{n+2}, Ad) L_F(s+1/2, π_{n+1}, Ad))`.
pub fn lratio_display(s: C64, small: &SatakeDatum, big: &SatakeDatum) -> Result<Product> {
    check_pair(small, big)?;
    let kind = small.kind();
    let sh = s + 0.5;
    let mut p = std_tensor_display(s, kind, small.m(), &small.symbols(Role::Small), &big.symbols(Role::Big));
    p.append(adjoint_display(sh, kind, big.m(), &big.symbols(Role::Big)).inverse());
    p.append(adjoint_display(sh, kind, small.m(), &small.symbols(Role::Small)).inverse());
    Ok(p)
}

pub fn lratio(s: C64, small: &SatakeDatum, big: &SatakeDatum) -> Result<C64> {
    eval_on(&lratio_display(s, small, big)?, small, big)
}

/// `Δ_{G_{n+2}} L_{π_{n+2},π_{n+1}}(1/2)`.
pub fn rhs_value(small: &SatakeDatum, big: &SatakeDatum) -> Result<C64> {
    Ok(motive_delta(big.m(), big.field()) * lratio(C64::new(0.5, 0.0), small, big)?)
}

/// `Vol(B_m)` for the Iwahori subgroup of `GL_m(O_F)`.
pub fn gl_iwahori_volume(m: usize, q_f: u64) -> Result<C64> {
    Ok(ratio_to_c64(iwahori_volume_at(m, &FieldData::split(q_f)?)?))
}

/// The two sides of the identity as labelled products.
pub fn period_sides(small: &SatakeDatum, big: &SatakeDatum, reading: Reading) -> Result<(Product, Product)> {
    let n = check_pair(small, big)?;
    let field = *small.field();
    let (bs, ss) = (big.symbols(Role::Big), small.symbols(Role::Small));
    let zeta = zeta_closed_display(small, big, reading.zeta_split)?;
    let mut lhs = zeta.clone();
    match field.kind() {
        PlaceKind::Inert => {
            lhs.append(zeta.at_inverse());
            let (bi, si) = (values(&big.inverse()), values(&small.inverse()));
            lhs.append(s_value_inert_scalars(&bi, &si, n, &field, reading.lengths)?);
        }
        PlaceKind::Split => {
            let inv = |t: &[Monomial]| -> Vec<Monomial> { t.iter().map(|m| m.inv()).collect() };
            let (bi, si) = (layout(&inv(&bs), reading.split_layout), layout(&inv(&ss), reading.split_layout));
            lhs.append(s_value_split_display(n, field.q_f(), &bi, &si)?);
            if reading.split_measure == SplitMeasure::KNormalized {
                lhs.scalar(KMS, format!("Vol(B_{}) (GL)", n + 1), gl_iwahori_volume(n + 1, field.q_f())?);
                lhs.scalar(KMS, format!("Vol(B_{}) (GL)", n + 2), gl_iwahori_volume(n + 2, field.q_f())?);
            }
        }
    }
    let mut rhs = Product::new();
    rhs.scalar("motive", format!("Δ_{{G_{}}}", n + 2), motive_delta(n + 2, &field));
    rhs.append(lratio_display(C64::new(0.5, 0.0), small, big)?);
    Ok((lhs, rhs))
}

/// `ζ(Ξ, ξ) S_{Ξ^{-1},ξ^{-1}}(1)` under the default reading.
pub fn unramified_period(small: &SatakeDatum, big: &SatakeDatum) -> Result<C64> {
    unramified_period_with(small, big, Reading::default())
}

pub fn unramified_period_with(small: &SatakeDatum, big: &SatakeDatum, reading: Reading) -> Result<C64> {
    let (zeta, s) = period_parts(small, big, reading)?;
    Ok(zeta * s)
}

/// `(ζ(Ξ, ξ), S_{Ξ^{-1},ξ^{-1}}(1))`.
pub fn period_parts(small: &SatakeDatum, big: &SatakeDatum, reading: Reading) -> Result<(C64, C64)> {
    let n = check_pair(small, big)?;
    let field = *small.field();
    let zeta = eval_on(&zeta_closed_display(small, big, reading.zeta_split)?, small, big)?;
    let (bi, si) = (big.inverse(), small.inverse());
    let s = match field.kind() {
        PlaceKind::Inert => {
            let zeta_inv = eval_on(&zeta_closed_display(&si, &bi, reading.zeta_split)?, &si, &bi)?;
            s_value_inert(bi.chars(), si.chars(), n, &field, zeta_inv, reading.lengths)?
        }
        PlaceKind::Split => {
            let b: Vec<CharValue> = layout(bi.chars(), reading.split_layout);
            let sm: Vec<CharValue> = layout(si.chars(), reading.split_layout);
            let mut v = s_value_split(&b, &sm, n, &field)?;
            if reading.split_measure == SplitMeasure::KNormalized {
                v *= gl_iwahori_volume(n + 1, field.q_f())? * gl_iwahori_volume(n + 2, field.q_f())?;
            }
            v
        }
    };
    Ok((zeta, s))
}

type Diffs = Vec<(String, C64, C64)>;

fn zeta_diffs(small: &SatakeDatum, big: &SatakeDatum, text: SplitZetaText, tol: f64) -> Result<Diffs> {
    let closed = zeta_closed_display(small, big, text)?;
    let rec = zeta_recursive_for(small, big)?;
    let (a, b) = (eval_on(&closed, small, big)?, eval_on(&rec, small, big)?);
    if rel_err(a, b) <= tol {
        return Ok(Vec::new());
    }
    let (bv, sv) = (values(big), values(small));
    let loc = localize(&closed, &rec, small.field(), &Tuples { big: &bv, small: &sv })?;
    let mut out: Diffs = loc
        .residuals
        .into_iter()
        .map(|r| {
            let label =
                if r.factor.contains(REC_CHI) { format!("convention conflict: {}", r.factor) } else { r.factor };
            (label, r.lhs, r.rhs)
        })
        .collect();
    if out.is_empty() {
        out.push((String::from("ζ closed form vs recursion (constant)"), a, b));
    }
    Ok(out)
}

/// Localize a failing identity sample to the first ingredient that disagrees.
pub fn localize_period(small: &SatakeDatum, big: &SatakeDatum, reading: Reading, tol: f64) -> Result<Diffs> {
    let n = check_pair(small, big)?;
    let field = *small.field();
    let half = C64::new(0.5, 0.0);
    let (a, b) = (std_tensor_lfactor(half, small, big)?, std_tensor_lfactor_det(half, small, big)?);
    if rel_err(a, b) > tol {
        return Ok(alloc::vec![(String::from("L_E(1/2, std tensor): display vs determinant"), a, b)]);
    }
    for (s, b) in [(small.clone(), big.clone()), (small.inverse(), big.inverse())] {
        let d = zeta_diffs(&s, &b, reading.zeta_split, tol)?;
        if !d.is_empty() {
            return Ok(d);
        }
    }
    if field.kind() == PlaceKind::Inert {
        let case = WeylCase::for_size(n + 1);
        let a = weyl_sum_a(case, &values(big), &values(small), &field)?;
        let m = motive_a_value(n + 1, &field);
        if rel_err(a, m) > tol {
            return Ok(alloc::vec![(String::from("A_{Ξ,ξ} vs (L(1,χ)ζ(2)L(3,χ)…)^{-1}"), a, m)]);
        }
    }
    let (lhs, rhs) = period_sides(small, big, reading)?;
    let (bv, sv) = (values(big), values(small));
    let loc = localize(&lhs, &rhs, &field, &Tuples { big: &bv, small: &sv })?;
    if !loc.residuals.is_empty() {
        return Ok(loc.residuals.into_iter().map(|r| (r.factor, r.lhs, r.rhs)).collect());
    }
    let names = |v: &[(String, C64)]| v.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>().join(" · ");
    Ok(alloc::vec![(
        format!("normalization constant: {} vs {}", names(&loc.lhs_scalars), names(&loc.rhs_scalars)),
        loc.lhs_constant,
        loc.rhs_constant
    )])
}

/// Parameters shared by the sampled checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunParams {
    pub n: usize,
    pub field: FieldData,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

impl RunParams {
    pub fn new(n: usize, field: FieldData, samples: usize, seed: u64, tol: f64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::Invalid("at least one sample is needed".into()));
        }
        if !(tol > 0.0) {
            return Err(Error::Invalid(format!("tolerance must be positive, got {tol}")));
        }
        Ok(RunParams { n, field, samples, seed, tol })
    }

    fn meta(&self, check: &str) -> ReportMeta {
        ReportMeta {
            check: check.into(),
            n: self.n,
            kind: self.field.kind(),
            q_f: self.field.q_f(),
            samples: self.samples,
            seed: self.seed,
            tol: self.tol,
        }
    }

    fn pair(&self, index: usize) -> Result<(SatakeDatum, SatakeDatum)> {
        generic_pair(&mut rng_for(self.seed, index), self.n, self.field)
    }
}

/// The identity itself.
#[derive(Clone, Copy, Debug)]
pub struct LocalCalc {
    pub params: RunParams,
    pub reading: Reading,
}

impl Check for LocalCalc {
    fn meta(&self) -> ReportMeta {
        self.params.meta("localcalc")
    }

    fn sample(&self, index: usize) -> Result<SampleOutcome> {
        let (small, big) = self.params.pair(index)?;
        let r = (|| {
            let lhs = unramified_period_with(&small, &big, self.reading)?;
            let rhs = rhs_value(&small, &big)?;
            let mut o = SampleOutcome::compare(index, lhs, rhs);
            if !(o.rel_err <= self.params.tol) {
                o.diffs = localize_period(&small, &big, self.reading, self.params.tol)?;
            }
            Ok(o)
        })();
        settle(index, r)
    }
}

/// `A_{Ξ,ξ}` against the motive value on generic samples.
#[derive(Clone, Copy, Debug)]
pub struct WeylConstancy {
    pub params: RunParams,
}

impl Check for WeylConstancy {
    fn meta(&self) -> ReportMeta {
        self.params.meta("weyl_constancy")
    }

    fn sample(&self, index: usize) -> Result<SampleOutcome> {
        let p = &self.params;
        let (small, big) = p.pair(index)?;
        let r = (|| {
            let case = WeylCase::for_size(p.n + 1);
            let a = weyl_sum_a(case, &values(&big), &values(&small), &p.field)?;
            Ok(SampleOutcome::compare(index, a, motive_a_value(p.n + 1, &p.field)))
        })();
        settle(index, r)
    }
}

/// Vanishing of the non-identity terms of the Weyl sum at the special vectors.
///
/// Single-sample check; the recorded error is the absolute value
/// `max |b(w'Ξ̂, wξ̂)|` over `(w', w) ≠ (1, 1)`.
#[derive(Clone, Copy, Debug)]
pub struct SpecialVectors {
    pub params: RunParams,
}

impl Check for SpecialVectors {
    fn meta(&self) -> ReportMeta {
        ReportMeta { samples: 1, ..self.params.meta("special_vectors") }
    }

    fn sample(&self, index: usize) -> Result<SampleOutcome> {
        let r = special_sum(self.params.n + 1, self.params.field.q_f()).map(|s| SampleOutcome {
            index,
            lhs: C64::new(s.max_other_b, 0.0),
            rhs: C64::new(0.0, 0.0),
            rel_err: s.max_other_b,
            diffs: alloc::vec![(
                String::from("max |b(w'Ξ̂, wξ̂)|, (w', w) ≠ (1, 1)"),
                C64::new(s.max_other_b, 0.0),
                C64::new(0.0, 0.0)
            )],
        });
        settle(index, r)
    }
}

/// Closed forms of `ζ` against the recursion.
#[derive(Clone, Copy, Debug)]
pub struct Recursion {
    pub params: RunParams,
    pub text: SplitZetaText,
}

impl Check for Recursion {
    fn meta(&self) -> ReportMeta {
        self.params.meta("recursion")
    }

    fn sample(&self, index: usize) -> Result<SampleOutcome> {
        let (small, big) = self.params.pair(index)?;
        let r = (|| {
            let a = eval_on(&zeta_closed_display(&small, &big, self.text)?, &small, &big)?;
            let b = zeta_recursive(&small, &big)?;
            let mut o = SampleOutcome::compare(index, a, b);
            if !(o.rel_err <= self.params.tol) {
                o.diffs = zeta_diffs(&small, &big, self.text, self.params.tol)?;
            }
            Ok(o)
        })();
        settle(index, r)
    }
}

/// Default number of series terms in the split base-case check.
pub const BASE_SERIES_TERMS: usize = 200;

/// The base cases: `ζ = 1` (inert) and the geometric series against the
/// closed form (split).
#[derive(Clone, Copy, Debug)]
pub struct BaseCase {
    pub params: RunParams,
    pub terms: usize,
}

impl Check for BaseCase {
    fn meta(&self) -> ReportMeta {
        ReportMeta { n: 0, ..self.params.meta("basecase") }
    }

    fn sample(&self, index: usize) -> Result<SampleOutcome> {
        let p = &self.params;
        let mut rng = rng_for(p.seed, index);
        let r = (|| match p.field.kind() {
            PlaceKind::Inert => {
                let (small, big) = generic_pair(&mut rng, 0, p.field)?;
                Ok(SampleOutcome::compare(index, zeta_recursive(&small, &big)?, C64::new(1.0, 0.0)))
            }
            PlaceKind::Split => {
                let v = generic_units(&mut rng, 3)?;
                let [t, f, x] = [v[0], v[1], v[2]].map(|z| CharValue::new(z).expect("unit values"));
                let series = zeta_base_split_series(t, f, x, &p.field, self.terms)?;
                let closed = zeta_base_split_closed(t, f, x, &p.field)?;
                Ok(SampleOutcome::compare(index, series, closed))
            }
        })();
        settle(index, r)
    }
}

/// The displayed standard L-factor against `1/det(1 - q^{-s} A ⊗ B)`.
#[derive(Clone, Copy, Debug)]
pub struct Determinant {
    pub params: RunParams,
}

impl Check for Determinant {
    fn meta(&self) -> ReportMeta {
        self.params.meta("determinant")
    }

    fn sample(&self, index: usize) -> Result<SampleOutcome> {
        let p = &self.params;
        let mut rng = rng_for(p.seed, index);
        let r = (|| {
            let (small, big) = generic_pair(&mut rng, p.n, p.field)?;
            let s = random_s(&mut rng);
            Ok(SampleOutcome::compare(
                index,
                std_tensor_lfactor(s, &small, &big)?,
                std_tensor_lfactor_det(s, &small, &big)?,
            ))
        })();
        settle(index, r)
    }
}

/// `(wΞ)^{-ρ} d_1(wΞ) = sgn(w) Ξ^{-ρ} d_1(Ξ)` and the `d_0` analogue, worst `w` per sample.
#[derive(Clone, Copy, Debug)]
pub struct Alternating {
    pub params: RunParams,
}

fn worst_alternation(
    index: usize,
    l: usize,
    x: &[C64],
    rho: &crate::weylsum::RhoVector,
    d: impl Fn(&[C64]) -> C64,
    label: &str,
) -> Result<SampleOutcome> {
    let base = rho.neg_power(x) * d(x);
    let mut worst = SampleOutcome::compare(index, base, base);
    for w in enumerate_weyl(l)? {
        let y = w.act(x)?;
        let lhs = rho.neg_power(&y) * d(&y);
        let rhs = base * w.sign() as f64;
        let o = SampleOutcome::compare(index, lhs, rhs);
        if o.rel_err > worst.rel_err || o.rel_err.is_nan() {
            worst = SampleOutcome { diffs: alloc::vec![(format!("{label} at w = {w}"), lhs, rhs)], ..o };
        }
    }
    Ok(worst)
}

impl Check for Alternating {
    fn meta(&self) -> ReportMeta {
        self.params.meta("alternating")
    }

    fn sample(&self, index: usize) -> Result<SampleOutcome> {
        let p = &self.params;
        let (small, big) = p.pair(index)?;
        let r = (|| {
            let case = WeylCase::for_size(p.n + 1);
            let (lb, ls) = WeylCase::ranks(p.n + 1);
            let a =
                worst_alternation(index, lb, &values(&big), &case.rho_big(lb), |x| d1_factor(case, x), "Ξ^{-ρ}d_1(Ξ)")?;
            let b = worst_alternation(
                index,
                ls,
                &values(&small),
                &case.rho_small(ls),
                |x| d0_factor(case, x),
                "ξ^{-ρ}d_0(ξ)",
            )?;
            let mut o = if b.rel_err > a.rel_err { b } else { a };
            if o.rel_err <= p.tol {
                o.diffs.clear();
            }
            Ok(o)
        })();
        settle(index, r)
    }
}

/// Size guard of the identity checks: `1 ≤ n ≤ 3`, or any `n` whose Weyl groups
/// stay enumerable when `unbounded` is set.
pub fn guard(n: usize, unbounded: bool) -> Result<()> {
    if n == 0 {
        return Err(Error::Invalid("the identity checks need n >= 1".into()));
    }
    if n > MAX_IDENTITY_N && !unbounded {
        return Err(Error::Size { rank: n, max: MAX_IDENTITY_N });
    }
    let (lb, _) = WeylCase::ranks(n + 1);
    if lb > MAX_WEYL_RANK {
        return Err(Error::Size { rank: lb, max: MAX_WEYL_RANK });
    }
    Ok(())
}

/// The identity at `n` (`1 ≤ n ≤ 3`) on generic unitary samples.
pub fn verify_localcalc(n: usize, field: FieldData, samples: usize, seed: u64, tol: f64) -> Result<VerificationReport> {
    verify_localcalc_with(RunParams::new(n, field, samples, seed, tol)?, Reading::default(), false)
}

/// As [`verify_localcalc`] with an explicit reading; `unbounded` lifts the `n ≤ 3` guard.
pub fn verify_localcalc_with(params: RunParams, reading: Reading, unbounded: bool) -> Result<VerificationReport> {
    guard(params.n, unbounded)?;
    run_check(&LocalCalc { params, reading })
}

/// Constancy of the Weyl sum for `U(n_plus_1)`; the report's `n` is `n_plus_1 - 1`.
pub fn verify_weyl_constancy(
    n_plus_1: usize,
    field: FieldData,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    if field.kind() != PlaceKind::Inert {
        return Err(Error::Invalid("the Weyl-sum formula is the inert one".into()));
    }
    guard(n_plus_1.saturating_sub(1), true)?;
    run_check(&WeylConstancy { params: RunParams::new(n_plus_1 - 1, field, samples, seed, tol)? })
}

pub fn verify_special_vectors(n_plus_1: usize, q_f: u64, tol: f64) -> Result<VerificationReport> {
    guard(n_plus_1.saturating_sub(1), true)?;
    run_check(&SpecialVectors { params: RunParams::new(n_plus_1 - 1, FieldData::inert(q_f)?, 1, 0, tol)? })
}

pub fn verify_recursion(n: usize, field: FieldData, samples: usize, seed: u64, tol: f64) -> Result<VerificationReport> {
    run_check(&Recursion { params: RunParams::new(n, field, samples, seed, tol)?, text: SplitZetaText::default() })
}

pub fn verify_basecase(field: FieldData, samples: usize, seed: u64, tol: f64) -> Result<VerificationReport> {
    run_check(&BaseCase { params: RunParams::new(0, field, samples, seed, tol)?, terms: BASE_SERIES_TERMS })
}

pub fn verify_determinant(
    n: usize,
    field: FieldData,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    run_check(&Determinant { params: RunParams::new(n, field, samples, seed, tol)? })
}

/// The alternating property on the inert tuples of `U(n+2)` and `U(n+1)`.
pub fn verify_alternating(
    n: usize,
    field: FieldData,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    if field.kind() != PlaceKind::Inert {
        return Err(Error::Invalid("the hyperoctahedral action is on inert tuples".into()));
    }
    guard(n, true)?;
    run_check(&Alternating { params: RunParams::new(n, field, samples, seed, tol)? })
}

/// Stored tuple lengths `(small, big)` at `n`.
pub fn tuple_lengths(n: usize, kind: PlaceKind) -> (usize, usize) {
    (stored_len(n + 1, kind), stored_len(n + 2, kind))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fields() -> [FieldData; 4] {
        [
            FieldData::inert(2).unwrap(),
            FieldData::inert(3).unwrap(),
            FieldData::split(2).unwrap(),
            FieldData::split(3).unwrap(),
        ]
    }

    #[test]
    fn identity_holds_for_small_n() {
        for f in fields() {
            for n in 1..=2 {
                let r = verify_localcalc(n, f, 5, 11, 1e-9).unwrap();
                assert!(r.pass, "{n} {:?}: {:?}", f, r.factor_diffs);
            }
        }
    }

    #[test]
    fn sides_cancel_symbolically() {
        for f in fields() {
            for n in 1..=3 {
                let (small, big) = generic_pair(&mut rng_for(3, n), n, f).unwrap();
                let (lhs, rhs) = period_sides(&small, &big, Reading::default()).unwrap();
                let (bv, sv) = (small.values(), big.values());
                let loc = localize(&lhs, &rhs, &f, &Tuples { big: &sv, small: &bv }).unwrap();
                assert!(loc.residuals.is_empty(), "{n} {:?}: {:?}", f, loc.residuals);
                assert!(rel_err(loc.lhs_constant, loc.rhs_constant) < 1e-10, "{n} {:?}", f);
                let v = unramified_period(&small, &big).unwrap();
                assert!(rel_err(v, eval_on(&lhs, &small, &big).unwrap()) < 1e-12);
            }
        }
    }

    #[test]
    fn printed_split_zeta_localizes_to_one_factor() {
        let f = FieldData::split(2).unwrap();
        let reading = Reading { zeta_split: SplitZetaText::AsPrinted, ..Reading::default() };
        let p = RunParams::new(3, f, 3, 5, 1e-7).unwrap();
        let r = verify_localcalc_with(p, reading, false).unwrap();
        assert!(!r.pass);
        let first = r.factor_diffs.iter().filter(|d| d.sample == r.factor_diffs[0].sample).count();
        assert_eq!(first, 1);
        assert!(r.factor_diffs[0].factor.contains("ν_1θ_2"), "{}", r.factor_diffs[0].factor);
    }

    #[test]
    fn coxeter_lengths_fail_by_q_in_case_b() {
        let f = FieldData::inert(3).unwrap();
        let reading = Reading { lengths: LengthConvention::Coxeter, ..Reading::default() };
        let (small, big) = generic_pair(&mut rng_for(1, 0), 2, f).unwrap();
        let a = unramified_period_with(&small, &big, reading).unwrap();
        let b = rhs_value(&small, &big).unwrap();
        assert!(((a / b) - 3.0).norm() < 1e-9, "{}", a / b);
        let d = localize_period(&small, &big, reading, 1e-9).unwrap();
        assert_eq!(d.len(), 1);
        assert!(d[0].0.contains("Coxeter"), "{}", d[0].0);
        // Case A agrees under both conventions.
        let (small, big) = generic_pair(&mut rng_for(1, 0), 1, f).unwrap();
        let a = unramified_period_with(&small, &big, reading).unwrap();
        assert!(rel_err(a, rhs_value(&small, &big).unwrap()) < 1e-9);
    }

    #[test]
    fn base_period_values() {
        let i = FieldData::inert(2).unwrap();
        let small = SatakeDatum::from_values(1, i, &[]).unwrap();
        let big = SatakeDatum::from_values(2, i, &[C64::from_polar(1.0, 0.7)]).unwrap();
        // ζ = 1 at the base, so the period is S(1) alone.
        let s =
            s_value_inert(big.inverse().chars(), &[], 0, &i, C64::new(1.0, 0.0), LengthConvention::default()).unwrap();
        assert!(rel_err(unramified_period(&small, &big).unwrap(), s) < 1e-14);
    }

    #[test]
    fn reports_are_deterministic_and_guarded() {
        let f = FieldData::split(2).unwrap();
        let a = verify_localcalc(1, f, 4, 9, 1e-7).unwrap();
        assert_eq!(a, verify_localcalc(1, f, 4, 9, 1e-7).unwrap());
        assert!(matches!(verify_localcalc(4, f, 1, 0, 1e-7), Err(Error::Size { rank: 4, max: 3 })));
        assert!(verify_localcalc(1, f, 0, 0, 1e-7).is_err());
    }

    #[test]
    fn conjugation_and_weyl_symmetry() {
        for f in fields() {
            let (small, big) = generic_pair(&mut rng_for(4, 0), 2, f).unwrap();
            let v = unramified_period(&small, &big).unwrap();
            let vc = unramified_period(&small.conj(), &big.conj()).unwrap();
            assert!(rel_err(v.conj(), vc) < 1e-10);
            let l = lratio(C64::new(0.5, 0.0), &small, &big).unwrap();
            assert!(rel_err(l.conj(), lratio(C64::new(0.5, 0.0), &small.conj(), &big.conj()).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn small_checks_pass() {
        for f in fields() {
            assert!(verify_recursion(2, f, 5, 1, 1e-9).unwrap().pass);
            assert!(verify_basecase(f, 5, 1, 1e-8).unwrap().pass);
            assert!(verify_determinant(2, f, 5, 1, 1e-10).unwrap().pass);
            if f.kind() == PlaceKind::Inert {
                assert!(verify_alternating(2, f, 5, 1, 1e-10).unwrap().pass);
            }
        }
        assert!(verify_weyl_constancy(3, FieldData::inert(2).unwrap(), 5, 1, 1e-6).unwrap().pass);
        assert!(verify_special_vectors(4, 3, 1e-10).unwrap().pass);
    }
}
