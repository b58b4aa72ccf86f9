//! Unramified Weil–Deligne parameters as multisets of Frobenius eigenvalues,
//! and the L-factor identities relating theta lifts on `U(2)` and `U(3)`.
//!
//! At an inert place `Frob_E = Frob_F²`, so restriction to `WD(E)` squares
//! eigenvalues and induction from `WD(E)` takes square roots in `±` pairs.
//! The unramified character `γ` of `E^×` extending `χ_{E/F}` has
//! `γ(ϖ) = -1`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::numfield::{euler_factor, lfactor_chi, CharValue, FieldData, PlaceKind};
use crate::report::{run_check, settle, Check, ReportMeta, SampleOutcome, VerificationReport};
use crate::sample::{generic_units, random_s, rng_for};
use crate::satake::{adjoint_lfactor, bc_params, BcParams, SatakeDatum};
use crate::C64;

/// Field over whose Weil–Deligne group a parameter lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParamBase {
    OverE,
    OverF,
}

/// An unramified parameter: a nonempty multiset of nonzero eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct WDParam {
    base: ParamBase,
    eigenvalues: Vec<C64>,
}

/// `γ(ϖ)`.
pub fn gamma() -> CharValue {
    CharValue::new(C64::new(-1.0, 0.0)).expect("-1 is a valid character value")
}

fn same_base(a: &WDParam, b: &WDParam, op: &str) -> Result<()> {
    if a.base != b.base {
        return Err(Error::Invalid(format!("{op} needs parameters over the same field")));
    }
    Ok(())
}

impl WDParam {
    pub fn new(base: ParamBase, eigenvalues: Vec<C64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::Invalid("a parameter needs at least one eigenvalue".into()));
        }
        if let Some(z) = eigenvalues.iter().find(|z| !(z.norm() > 0.0) || !z.is_finite()) {
            return Err(Error::Invalid(format!("eigenvalue {z} is not a nonzero finite number")));
        }
        Ok(WDParam { base, eigenvalues })
    }

    pub fn over_e(eigenvalues: Vec<C64>) -> Result<Self> {
        Self::new(ParamBase::OverE, eigenvalues)
    }

    pub fn over_f(eigenvalues: Vec<C64>) -> Result<Self> {
        Self::new(ParamBase::OverF, eigenvalues)
    }

    /// The restriction to `WD(E)` of the parameter of an inert datum.
    pub fn from_datum(d: &SatakeDatum) -> Result<Self> {
        match bc_params(d) {
            BcParams::Inert(v) => Self::over_e(v),
            BcParams::Split { .. } => Err(Error::Invalid("parameters over E are for inert places".into())),
        }
    }

    /// The inert `U(m)` datum whose base change is this parameter.
    pub fn to_datum(&self, field: FieldData) -> Result<SatakeDatum> {
        if self.base != ParamBase::OverE {
            return Err(Error::Invalid("a unitary datum comes from a parameter over E".into()));
        }
        SatakeDatum::from_bc_params(self.eigenvalues.len(), field, &self.eigenvalues)
    }

    pub fn base(&self) -> ParamBase {
        self.base
    }

    pub fn eigenvalues(&self) -> &[C64] {
        &self.eigenvalues
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `∏ (1 - q^{-s} α)^{-1}` with `q = q_E` or `q_F`.
    pub fn lfactor(&self, s: C64, field: &FieldData) -> Result<C64> {
        let q = match self.base {
            ParamBase::OverE => field.q_e(),
            ParamBase::OverF => field.q_f(),
        };
        self.eigenvalues.iter().map(|&a| euler_factor(s, q, a)).product()
    }

    pub fn direct_sum(&self, other: &WDParam) -> Result<WDParam> {
        same_base(self, other, "direct sum")?;
        let mut v = self.eigenvalues.clone();
        v.extend_from_slice(&other.eigenvalues);
        Ok(WDParam { base: self.base, eigenvalues: v })
    }

    pub fn twist(&self, chi: CharValue) -> WDParam {
        WDParam { base: self.base, eigenvalues: self.eigenvalues.iter().map(|z| z * chi.value()).collect() }
    }

    pub fn tensor(&self, other: &WDParam) -> Result<WDParam> {
        same_base(self, other, "tensor product")?;
        let v = self.eigenvalues.iter().flat_map(|a| other.eigenvalues.iter().map(move |b| a * b)).collect();
        Ok(WDParam { base: self.base, eigenvalues: v })
    }

    /// `Ind_{WD(E)}^{WD(F)}`: each `z` becomes `{√z, -√z}`.
    pub fn induce(&self) -> Result<WDParam> {
        if self.base != ParamBase::OverE {
            return Err(Error::Invalid("induction starts from a parameter over E".into()));
        }
        let v = self.eigenvalues.iter().flat_map(|z| {
            let r = z.sqrt();
            [r, -r]
        });
        Ok(WDParam { base: ParamBase::OverF, eigenvalues: v.collect() })
    }

    /// Restriction to `WD(E)`: each eigenvalue is squared.
    pub fn restrict(&self) -> Result<WDParam> {
        if self.base != ParamBase::OverF {
            return Err(Error::Invalid("restriction starts from a parameter over F".into()));
        }
        Ok(WDParam { base: ParamBase::OverE, eigenvalues: self.eigenvalues.iter().map(|z| z * z).collect() })
    }

    /// `{α_i / α_j}` over all ordered pairs.
    pub fn adjoint_gl(&self) -> WDParam {
        let v = self.eigenvalues.iter().flat_map(|a| self.eigenvalues.iter().map(move |b| a / b)).collect();
        WDParam { base: self.base, eigenvalues: v }
    }

    /// Equality as multisets, matching eigenvalues within `tol`.
    pub fn same_multiset(&self, other: &WDParam, tol: f64) -> bool {
        if self.base != other.base || self.dim() != other.dim() {
            return false;
        }
        let mut pool = other.eigenvalues.clone();
        for z in &self.eigenvalues {
            match pool.iter().position(|w| (w - z).norm() <= tol * (1.0 + z.norm())) {
                Some(k) => {
                    pool.swap_remove(k);
                }
                None => return false,
            }
        }
        true
    }
}

fn theta_param(m: &WDParam, gamma: CharValue, size: usize, extra: CharValue) -> Result<WDParam> {
    if m.base != ParamBase::OverE || m.dim() != size {
        return Err(Error::Invalid(format!("expected a parameter of dimension {size} over E")));
    }
    m.twist(gamma.inverse()).direct_sum(&WDParam::over_e(alloc::vec![extra.value()])?)
}

/// `N = γ^{-1} M ⊕ γ²` for the lift from `U(2)` to `U(3)`.
pub fn theta_param_2to3(m: &WDParam, gamma: CharValue) -> Result<WDParam> {
    theta_param(m, gamma, 2, gamma.mul(&gamma))
}

/// `N = γ^{-1} M ⊕ γ` for the lift from `U(1)` to `U(2)`.
pub fn theta_param_1to2(m: &WDParam, gamma: CharValue) -> Result<WDParam> {
    theta_param(m, gamma, 1, gamma)
}

/// A parameter over `F` whose restriction to `WD(E)` is `m`, by principal square roots.
fn lift(m: &WDParam) -> Result<WDParam> {
    WDParam::over_f(m.eigenvalues.iter().map(|z| z.sqrt()).collect())
}

/// Random data of one appendix sample: `σ`, `π` on `U(2)` and `μ` on `U(1)`.
///
/// An unramified character of the compact group `U(1)` is trivial, so `μ`
/// carries no parameters.
#[derive(Clone, Debug)]
pub struct AppendixData {
    pub sigma: SatakeDatum,
    pub pi: SatakeDatum,
    pub mu: SatakeDatum,
}

impl AppendixData {
    pub fn draw(field: FieldData, seed: u64, index: usize) -> Result<(Self, Vec<C64>)> {
        let mut rng = rng_for(seed, index);
        let v = generic_units(&mut rng, 2)?;
        let data = AppendixData {
            sigma: SatakeDatum::from_values(2, field, &v[..1])?,
            pi: SatakeDatum::from_values(2, field, &v[1..])?,
            mu: SatakeDatum::from_values(1, field, &[])?,
        };
        let s = (0..S_PER_SAMPLE).map(|_| random_s(&mut rng)).collect();
        Ok((data, s))
    }
}

/// Values of `s` tested per sample.
pub const S_PER_SAMPLE: usize = 20;

/// The appendix identities, each as `(lhs, rhs)` at a given `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AppendixIdentity {
    /// `L_F(s, Θ(π̄), Ad) = L_F(s, π, Ad)`.
    PiAd,
    /// `L_F(s, Θ(σ̄), Ad) = L_F(s, χ) L_F(s, σ, Ad) L_E(s, BC(σ) ⊗ γ³)`.
    SigmaAd,
    /// `L_F(s, Θ(μ̄), Ad) = L_F(s, χ)² L_E(s, BC(μ) ⊗ γ²)`.
    MuAd,
    /// `L_F(s, Σ') = L_E(s, BC(π) ⊠ BC(σ̄) ⊠ γ^{-1})`.
    BigSig,
    /// `L_F(s, Σ') L_E(s, BC(π) ⊗ γ²) = L_E(s, BC(Θ(σ̄)) ⊠ BC(π))`.
    SigCor,
    /// `L_F(s, Ind M) = L_E(s, M)`.
    Induce,
}

impl AppendixIdentity {
    pub const ALL: [AppendixIdentity; 6] = [
        AppendixIdentity::PiAd,
        AppendixIdentity::SigmaAd,
        AppendixIdentity::MuAd,
        AppendixIdentity::BigSig,
        AppendixIdentity::SigCor,
        AppendixIdentity::Induce,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AppendixIdentity::PiAd => "piad",
            AppendixIdentity::SigmaAd => "sigmaad",
            AppendixIdentity::MuAd => "muad",
            AppendixIdentity::BigSig => "bigsig",
            AppendixIdentity::SigCor => "sigcor",
            AppendixIdentity::Induce => "induce",
        }
    }

    pub fn sides(self, s: C64, d: &AppendixData) -> Result<(C64, C64)> {
        let field = *d.sigma.field();
        let g = gamma();
        let g2 = g.mul(&g);
        let bc_pi = WDParam::from_datum(&d.pi)?;
        let bc_pi_bar = WDParam::from_datum(&d.pi.conj())?;
        let bc_sigma = WDParam::from_datum(&d.sigma)?;
        let bc_sigma_bar = WDParam::from_datum(&d.sigma.conj())?;
        let theta_sigma = theta_param_2to3(&bc_sigma_bar, g)?;
        // L_F(s, Σ') through the induced model of N_{Θ(π̄)} ⊗ N_σ ⊗ Ind M, with
        // M twisted so that M η_{Θ(μ̄)} is the summand γ of BC(Θ(μ̄)).
        let sigma_prime = || -> Result<C64> {
            let m = WDParam::over_e(alloc::vec![g.value()])?;
            let n1 = lift(&bc_pi_bar)?;
            let n2 = lift(&bc_sigma)?;
            n1.tensor(&n2)?.tensor(&m.induce()?)?.lfactor(s, &field)
        };
        Ok(match self {
            AppendixIdentity::PiAd => {
                let lifted = bc_pi_bar.to_datum(field)?;
                (adjoint_lfactor(s, &lifted)?, adjoint_lfactor(s, &d.pi)?)
            }
            AppendixIdentity::SigmaAd => {
                let lhs = adjoint_lfactor(s, &theta_sigma.to_datum(field)?)?;
                let rhs = lfactor_chi(s, &field, 1)?
                    * adjoint_lfactor(s, &d.sigma)?
                    * bc_sigma.twist(g2.mul(&g)).lfactor(s, &field)?;
                (lhs, rhs)
            }
            AppendixIdentity::MuAd => {
                let theta_mu = theta_param_1to2(&WDParam::from_datum(&d.mu.conj())?, g)?;
                let lhs = adjoint_lfactor(s, &theta_mu.to_datum(field)?)?;
                let chi = lfactor_chi(s, &field, 1)?;
                let rhs = chi * chi * WDParam::from_datum(&d.mu)?.twist(g2).lfactor(s, &field)?;
                (lhs, rhs)
            }
            AppendixIdentity::BigSig => {
                let rhs = bc_pi.tensor(&bc_sigma_bar)?.twist(g.inverse()).lfactor(s, &field)?;
                (sigma_prime()?, rhs)
            }
            AppendixIdentity::SigCor => {
                let lhs = sigma_prime()? * bc_pi.twist(g2).lfactor(s, &field)?;
                let rhs = theta_sigma.tensor(&bc_pi)?.lfactor(s, &field)?;
                (lhs, rhs)
            }
            AppendixIdentity::Induce => {
                let m = bc_sigma.direct_sum(&bc_pi)?;
                (m.induce()?.lfactor(s, &field)?, m.lfactor(s, &field)?)
            }
        })
    }
}

/// One appendix identity over random data and `s`; the worst `s` per sample is kept.
#[derive(Clone, Copy, Debug)]
pub struct AppendixCheck {
    pub identity: AppendixIdentity,
    pub field: FieldData,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Check for AppendixCheck {
    fn meta(&self) -> ReportMeta {
        ReportMeta {
            check: format!("appendix:{}", self.identity.name()),
            n: 2,
            kind: self.field.kind(),
            q_f: self.field.q_f(),
            samples: self.samples,
            seed: self.seed,
            tol: self.tol,
        }
    }

    fn sample(&self, index: usize) -> Result<SampleOutcome> {
        let (data, svals) = AppendixData::draw(self.field, self.seed, index)?;
        let r = (|| {
            let mut worst: Option<(SampleOutcome, C64)> = None;
            for &s in &svals {
                let (lhs, rhs) = self.identity.sides(s, &data)?;
                let o = SampleOutcome::compare(index, lhs, rhs);
                if worst.as_ref().is_none_or(|(w, _)| o.rel_err > w.rel_err || o.rel_err.is_nan()) {
                    worst = Some((o, s));
                }
            }
            let (mut o, s) = worst.expect("at least one s per sample");
            if !(o.rel_err <= self.tol) {
                let label = format!("{} at s = {s}", self.identity.name());
                o.diffs = alloc::vec![(label, o.lhs, o.rhs)];
            }
            Ok(o)
        })();
        settle(index, r)
    }
}

/// All appendix identities (and the induction identity) at an inert place.
pub fn verify_appendix(field: FieldData, samples: usize, seed: u64, tol: f64) -> Result<Vec<VerificationReport>> {
    AppendixIdentity::ALL.iter().map(|&identity| verify_identity(identity, field, samples, seed, tol)).collect()
}

pub fn verify_identity(
    identity: AppendixIdentity,
    field: FieldData,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    if field.kind() != PlaceKind::Inert {
        return Err(Error::Invalid("the appendix identities live at inert places".into()));
    }
    if samples == 0 || !(tol > 0.0) {
        return Err(Error::Invalid("need samples >= 1 and tol > 0".into()));
    }
    run_check(&AppendixCheck { identity, field, samples, seed, tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rel_err;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn sum_twist_adjoint() {
        let a = WDParam::over_e(alloc::vec![c(2.0, 0.0)]).unwrap();
        let b = WDParam::over_e(alloc::vec![c(0.0, 1.0)]).unwrap();
        let ab = a.direct_sum(&b).unwrap();
        assert_eq!(ab.eigenvalues(), &[c(2.0, 0.0), c(0.0, 1.0)]);
        assert!(ab.same_multiset(&b.direct_sum(&a).unwrap(), 1e-15));
        let f = FieldData::inert(3).unwrap();
        let s = c(0.7, 1.3);
        let prod = a.lfactor(s, &f).unwrap() * b.lfactor(s, &f).unwrap();
        assert!(rel_err(ab.lfactor(s, &f).unwrap(), prod) < 1e-12);
        assert_eq!(a.twist(CharValue::trivial()), a);
        let chi = CharValue::from_angle(0.4);
        assert!(a.twist(chi).twist(chi.inverse()).same_multiset(&a, 1e-15));
        assert_eq!(a.twist(gamma()).eigenvalues(), &[c(-2.0, 0.0)]);
        assert!(a.adjoint_gl().same_multiset(&WDParam::over_e(alloc::vec![c(1.0, 0.0)]).unwrap(), 1e-15));
        let ad = ab.adjoint_gl();
        let want = WDParam::over_e(alloc::vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, -2.0), c(0.0, 0.5)]).unwrap();
        assert!(ad.same_multiset(&want, 1e-15));
        assert!(a.direct_sum(&a.induce().unwrap()).is_err());
        assert!(WDParam::over_e(Vec::new()).is_err());
        assert!(WDParam::over_e(alloc::vec![c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn induction() {
        let one = WDParam::over_e(alloc::vec![c(1.0, 0.0)]).unwrap();
        assert!(one
            .induce()
            .unwrap()
            .same_multiset(&WDParam::over_f(alloc::vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap(), 1e-15));
        let f = FieldData::inert(2).unwrap();
        let z = WDParam::over_e(alloc::vec![C64::from_polar(1.0, 2.0)]).unwrap();
        let s = c(1.1, -0.4);
        assert!(rel_err(z.induce().unwrap().lfactor(s, &f).unwrap(), z.lfactor(s, &f).unwrap()) < 1e-12);
        let zz = z.direct_sum(&one).unwrap();
        assert!(zz
            .induce()
            .unwrap()
            .same_multiset(&z.induce().unwrap().direct_sum(&one.induce().unwrap()).unwrap(), 1e-15));
        assert!(z.induce().unwrap().restrict().unwrap().same_multiset(&z.direct_sum(&z).unwrap(), 1e-14));
    }

    #[test]
    fn theta_params() {
        let z = C64::from_polar(1.0, 0.9);
        let m = WDParam::over_e(alloc::vec![z, z.inv()]).unwrap();
        let n = theta_param_2to3(&m, gamma()).unwrap();
        let want = WDParam::over_e(alloc::vec![-z, -z.inv(), c(1.0, 0.0)]).unwrap();
        assert!(n.same_multiset(&want, 1e-15));
        assert_eq!(n.dim(), 3);
        let d = n.to_datum(FieldData::inert(2).unwrap()).unwrap();
        assert!((d.values()[0] + z).norm() < 1e-15 || (d.values()[0] + z.inv()).norm() < 1e-15);
        assert_eq!(theta_param_1to2(&WDParam::over_e(alloc::vec![c(1.0, 0.0)]).unwrap(), gamma()).unwrap().dim(), 2);
        assert!(theta_param_2to3(&n, gamma()).is_err());
    }

    #[test]
    fn appendix_passes() {
        for q in [2, 3] {
            for r in verify_appendix(FieldData::inert(q).unwrap(), 5, 3, 1e-9).unwrap() {
                assert!(r.pass, "{} {:?}", r.check, r.factor_diffs);
            }
        }
        assert!(verify_appendix(FieldData::split(2).unwrap(), 1, 0, 1e-9).is_err());
    }
}
