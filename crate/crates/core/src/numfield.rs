//! Local place data, unramified character values and Euler factors.

use alloc::format;
use num_rational::Ratio;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::C64;

/// Smallest admissible `|1 - q^{-s} α|` before an Euler factor counts as a pole.
pub const POLE_EPSILON: f64 = 1e-12;

/// Whether the quadratic extension stays a field at this place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaceKind {
    Inert,
    Split,
}

impl PlaceKind {
    pub fn name(self) -> &'static str {
        match self {
            PlaceKind::Inert => "inert",
            PlaceKind::Split => "split",
        }
    }
}

/// A finite place of `F` which is unramified in `E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldData {
    q_f: u64,
    kind: PlaceKind,
}

impl FieldData {
    pub fn new(q_f: u64, kind: PlaceKind) -> Result<Self> {
        if q_f < 2 {
            return Err(Error::Invalid(format!("residue cardinality q_F = {q_f} must be at least 2")));
        }
        // q_E = q_F^2 must fit comfortably in f64 and u64.
        if q_f > 1 << 26 {
            return Err(Error::Invalid(format!("residue cardinality q_F = {q_f} is too large")));
        }
        Ok(FieldData { q_f, kind })
    }

    pub fn inert(q_f: u64) -> Result<Self> {
        Self::new(q_f, PlaceKind::Inert)
    }

    pub fn split(q_f: u64) -> Result<Self> {
        Self::new(q_f, PlaceKind::Split)
    }

    pub fn q_f(&self) -> u64 {
        self.q_f
    }

    pub fn q_e(&self) -> u64 {
        match self.kind {
            PlaceKind::Inert => self.q_f * self.q_f,
            PlaceKind::Split => self.q_f,
        }
    }

    pub fn kind(&self) -> PlaceKind {
        self.kind
    }

    /// `χ_{E/F}(ϖ)`: −1 at inert places, +1 at split places.
    pub fn chi_at_uniformizer(&self) -> i8 {
        match self.kind {
            PlaceKind::Inert => -1,
            PlaceKind::Split => 1,
        }
    }

    /// `χ_{E/F}(ϖ)^parity`.
    pub fn chi_power(&self, parity: i64) -> i8 {
        if parity.rem_euclid(2) == 0 {
            1
        } else {
            self.chi_at_uniformizer()
        }
    }
}

/// An unramified character, stored as its value at the uniformizer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharValue {
    value: C64,
    unitary: bool,
}

impl CharValue {
    pub fn new(value: C64) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite()) || value == C64::new(0.0, 0.0) {
            return Err(Error::Invalid(format!("character value {value} must be finite and nonzero")));
        }
        let unitary = (value.norm() - 1.0).abs() <= 1e-12;
        Ok(CharValue { value, unitary })
    }

    /// The unitary character `ϖ ↦ e^{iθ}`.
    pub fn from_angle(theta: f64) -> Self {
        CharValue { value: C64::from_polar(1.0, theta), unitary: true }
    }

    pub fn trivial() -> Self {
        CharValue { value: C64::new(1.0, 0.0), unitary: true }
    }

    pub fn value(&self) -> C64 {
        self.value
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn inverse(&self) -> Self {
        let value = if self.unitary { self.value.conj() } else { self.value.inv() };
        CharValue { value, unitary: self.unitary }
    }

    pub fn conj(&self) -> Self {
        CharValue { value: self.value.conj(), unitary: self.unitary }
    }

    pub fn mul(&self, other: &CharValue) -> Self {
        // Products of unitary characters stay unitary; recompute the flag otherwise.
        let value = self.value * other.value;
        let unitary = (value.norm() - 1.0).abs() <= 1e-12;
        CharValue { value, unitary }
    }
}

/// `q^{-s}` as a complex number.
pub fn q_power(q: f64, s: C64) -> C64 {
    (-s * Float::ln(q)).exp()
}

/// `1 / (1 - q^{-s} α)`.
pub fn euler_factor(s: C64, q: u64, alpha: C64) -> Result<C64> {
    if q < 2 {
        return Err(Error::Invalid(format!("Euler factor needs q >= 2, got {q}")));
    }
    let d = C64::new(1.0, 0.0) - q_power(q as f64, s) * alpha;
    if d.norm() < POLE_EPSILON {
        return Err(Error::Pole { factor: format!("(1 - {q}^(-{s}) * {alpha})^-1"), distance: d.norm() });
    }
    Ok(d.inv())
}

/// `L_F(s, χ_{E/F}^parity)`; the Dedekind factor `ζ_F(s)` for even parity or split places.
pub fn lfactor_chi(s: C64, field: &FieldData, parity: i64) -> Result<C64> {
    euler_factor(s, field.q_f(), C64::new(field.chi_power(parity) as f64, 0.0))
}

/// Local factor of `Δ_{G_m} = ∏_{r=1}^m L(r, χ^r)`.
pub fn motive_delta(m: usize, field: &FieldData) -> C64 {
    (1..=m)
        .map(|r| {
            lfactor_chi(C64::new(r as f64, 0.0), field, r as i64)
                .expect("Euler factors at integer s >= 1 with q >= 2 have no poles")
        })
        .product()
}

/// `Δ_{G_m}` as an exact rational: `∏_{r=1}^m q^r / (q^r - χ(ϖ)^r)`.
pub fn motive_delta_exact(m: usize, field: &FieldData) -> Result<Ratio<i128>> {
    let q = field.q_f() as i128;
    let mut acc = Ratio::from_integer(1i128);
    let mut qr: i128 = 1;
    for r in 1..=m {
        qr = qr.checked_mul(q).ok_or(Error::Overflow("motive value"))?;
        let chi = field.chi_power(r as i64) as i128;
        let num = acc.numer().checked_mul(qr).ok_or(Error::Overflow("motive value"))?;
        let den = acc.denom().checked_mul(qr - chi).ok_or(Error::Overflow("motive value"))?;
        acc = Ratio::new(num, den);
    }
    Ok(acc)
}
