//! The hyperoctahedral Weyl group, the sum `A_{Ξ,ξ}` and the two formulas for `S(1)`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::factor::{Base, Monomial, Product, Tuples};
use crate::numfield::{motive_delta, q_power, CharValue, FieldData, PlaceKind, POLE_EPSILON};
use crate::C64;

/// Largest rank accepted by [`enumerate_weyl`] (`2^6·6! = 46080` elements).
pub const MAX_WEYL_RANK: usize = 6;

/// A group in which character values can be multiplied and inverted.
pub trait CharGroup: Copy {
    fn one() -> Self;
    fn mul(self, other: Self) -> Self;
    fn inv(self) -> Self;
}

impl CharGroup for C64 {
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    fn mul(self, other: Self) -> Self {
        self * other
    }
    fn inv(self) -> Self {
        C64::inv(&self)
    }
}

impl CharGroup for CharValue {
    fn one() -> Self {
        CharValue::trivial()
    }
    fn mul(self, other: Self) -> Self {
        CharValue::mul(&self, &other)
    }
    fn inv(self) -> Self {
        self.inverse()
    }
}

/// The value `q_F^k`, kept as its exponent so that `1 - q_F^{-1}·q_F^k` is exactly
/// zero when `k = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QPower(pub i32);

impl CharGroup for QPower {
    fn one() -> Self {
        QPower(0)
    }
    fn mul(self, other: Self) -> Self {
        QPower(self.0 + other.0)
    }
    fn inv(self) -> Self {
        QPower(-self.0)
    }
}

/// An element `(π, ε)` of `(ℤ/2)^l ⋊ S_l`, acting by
/// `(w·x)_i = x_{π^{-1}(i)}^{ε_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    perm: Vec<usize>,
    flips: Vec<i8>,
}

impl WeylElement {
    pub fn new(perm: Vec<usize>, flips: Vec<i8>) -> Result<Self> {
        let l = perm.len();
        if flips.len() != l {
            return Err(Error::Invalid(format!("perm has length {l} but flips has {}", flips.len())));
        }
        let mut seen = alloc::vec![false; l];
        for &p in &perm {
            if p >= l || seen[p] {
                return Err(Error::Invalid(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        if flips.iter().any(|&f| f != 1 && f != -1) {
            return Err(Error::Invalid(format!("flips {flips:?} must be ±1")));
        }
        Ok(WeylElement { perm, flips })
    }

    pub fn identity(l: usize) -> Self {
        WeylElement { perm: (0..l).collect(), flips: alloc::vec![1; l] }
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    /// `perm[j] = π(j)`.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// `flips[i] = ε_i`, indexed by the target position.
    pub fn flips(&self) -> &[i8] {
        &self.flips
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.flips.iter().all(|&f| f == 1)
    }

    /// `sgn(π)·∏ ε_i`.
    pub fn sign(&self) -> i8 {
        let mut inversions = 0usize;
        for i in 0..self.perm.len() {
            for j in i + 1..self.perm.len() {
                if self.perm[i] > self.perm[j] {
                    inversions += 1;
                }
            }
        }
        let s: i8 = self.flips.iter().product();
        if inversions.is_multiple_of(2) {
            s
        } else {
            -s
        }
    }

    /// `self ∘ other`, so that `act(self ∘ other, x) = act(self, act(other, x))`.
    pub fn compose(&self, other: &WeylElement) -> Result<WeylElement> {
        if self.rank() != other.rank() {
            return Err(Error::Invalid("cannot compose Weyl elements of different rank".into()));
        }
        let l = self.rank();
        let inv1 = self.inverse_perm();
        let perm = (0..l).map(|j| self.perm[other.perm[j]]).collect();
        let flips = (0..l).map(|i| self.flips[i] * other.flips[inv1[i]]).collect();
        Ok(WeylElement { perm, flips })
    }

    fn inverse_perm(&self) -> Vec<usize> {
        let mut inv = alloc::vec![0; self.rank()];
        for (j, &p) in self.perm.iter().enumerate() {
            inv[p] = j;
        }
        inv
    }

    pub fn inverse(&self) -> WeylElement {
        let perm = self.inverse_perm();
        let flips = (0..self.rank()).map(|j| self.flips[self.perm[j]]).collect();
        WeylElement { perm, flips }
    }

    pub fn act<T: CharGroup>(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.rank() {
            return Err(Error::Invalid(format!(
                "Weyl element of rank {} cannot act on {} characters",
                self.rank(),
                x.len()
            )));
        }
        let mut out = alloc::vec![T::one(); x.len()];
        for (j, &v) in x.iter().enumerate() {
            let i = self.perm[j];
            out[i] = if self.flips[i] == 1 { v } else { v.inv() };
        }
        Ok(out)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, (&p, &e)) in self.perm.iter().zip(&self.flips).enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            let sign = if e < 0 { "-" } else { "" };
            write!(f, "{sign}{}", p + 1)?;
        }
        f.write_str("]")
    }
}

fn permutations(l: usize) -> Vec<Vec<usize>> {
    if l == 0 {
        return alloc::vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..l {
        for rest in permutations(l - 1) {
            let mut p = alloc::vec![first];
            p.extend(rest.into_iter().map(|r| if r >= first { r + 1 } else { r }));
            out.push(p);
        }
    }
    out
}

/// All `2^l·l!` elements: permutations in lexicographic order, then flip patterns
/// in binary order with `+1` first.
pub fn enumerate_weyl(l: usize) -> Result<Vec<WeylElement>> {
    if l > MAX_WEYL_RANK {
        return Err(Error::Size { rank: l, max: MAX_WEYL_RANK });
    }
    let mut out = Vec::with_capacity((1 << l) * (1..=l).product::<usize>());
    for perm in permutations(l) {
        for mask in 0..(1u32 << l) {
            let flips = (0..l).map(|i| if mask >> (l - 1 - i) & 1 == 1 { -1 } else { 1 }).collect();
            out.push(WeylElement { perm: perm.clone(), flips });
        }
    }
    Ok(out)
}

/// A half-integral vector with strictly decreasing entries spaced by 1, stored doubled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoVector {
    twice: Vec<i32>,
}

impl RhoVector {
    pub fn from_twice(twice: Vec<i32>) -> Result<Self> {
        if twice.windows(2).any(|w| w[0] - w[1] != 2) {
            return Err(Error::Invalid(format!("{twice:?}/2 is not a ρ-vector")));
        }
        Ok(RhoVector { twice })
    }

    /// `(l, l-1, …, 1)`: half the sum of positive roots of type `C_l`.
    pub fn type_c(l: usize) -> Self {
        RhoVector { twice: (1..=l as i32).rev().map(|k| 2 * k).collect() }
    }

    /// `(l-1/2, …, 1/2)`: half the sum of positive roots of type `B_l`.
    pub fn type_b(l: usize) -> Self {
        RhoVector { twice: (1..=l as i32).rev().map(|k| 2 * k - 1).collect() }
    }

    pub fn len(&self) -> usize {
        self.twice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.twice.is_empty()
    }

    pub fn entries(&self) -> Vec<f64> {
        self.twice.iter().map(|&t| t as f64 / 2.0).collect()
    }

    /// `x^{-ρ} = ∏ x_i^{-ρ_i}`, half powers on the principal branch.
    pub fn neg_power(&self, x: &[C64]) -> C64 {
        self.twice.iter().zip(x).map(|(&t, &v)| if t % 2 == 0 { v.powi(-t / 2) } else { v.sqrt().powi(-t) }).product()
    }
}

/// Case A when `n+1` is even (both groups of rank `l_{n+1}`), Case B otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeylCase {
    A,
    B,
}

impl WeylCase {
    pub fn for_size(n_plus_1: usize) -> Self {
        if n_plus_1.is_multiple_of(2) {
            WeylCase::A
        } else {
            WeylCase::B
        }
    }

    /// Ranks `(l_{n+2}, l_{n+1})` of the two Weyl groups.
    pub fn ranks(n_plus_1: usize) -> (usize, usize) {
        (n_plus_1.div_ceil(2), n_plus_1 / 2)
    }

    /// The ρ-vector paired with `d_1` on the big tuple.
    pub fn rho_big(self, l_big: usize) -> RhoVector {
        match self {
            WeylCase::A => RhoVector::type_c(l_big),
            WeylCase::B => RhoVector::type_b(l_big),
        }
    }

    /// The ρ-vector paired with `d_0` on the small tuple.
    pub fn rho_small(self, l_small: usize) -> RhoVector {
        match self {
            WeylCase::A => RhoVector::type_b(l_small),
            WeylCase::B => RhoVector::type_c(l_small),
        }
    }

    fn check(self, l_big: usize, l_small: usize) -> Result<()> {
        let ok = match self {
            WeylCase::A => l_big == l_small,
            WeylCase::B => l_big == l_small + 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!("tuple lengths ({l_big}, {l_small}) do not fit Case {self:?}")))
        }
    }
}

/// Arguments `α` with `b^{-1} = ∏ L_E(1/2, α)`.
pub fn b_args<T: CharGroup>(case: WeylCase, big: &[T], small: &[T]) -> Result<Vec<T>> {
    case.check(big.len(), small.len())?;
    let mut out = Vec::new();
    match case {
        WeylCase::A => {
            let l = small.len();
            out.extend_from_slice(small);
            for i in 0..l {
                for j in i..l {
                    out.push(big[i].mul(small[j]));
                    out.push(big[i].mul(small[j].inv()));
                }
            }
            for i in 0..l {
                for j in 0..i {
                    out.push(big[i].mul(small[j]));
                    out.push(big[i].inv().mul(small[j]));
                }
            }
        }
        WeylCase::B => {
            let (l2, l1) = (big.len(), small.len());
            out.extend_from_slice(big);
            for i in 0..l1 {
                for j in i..l1 {
                    out.push(big[i].mul(small[j]));
                    out.push(big[i].mul(small[j].inv()));
                }
            }
            for i in 0..l2 {
                for j in 0..i.min(l1) {
                    out.push(big[i].mul(small[j]));
                    out.push(big[i].inv().mul(small[j]));
                }
            }
        }
    }
    Ok(out)
}

fn d_args<T: CharGroup>(x: &[T], squares: bool) -> Vec<T> {
    let mut out: Vec<T> = x.iter().map(|&v| if squares { v.mul(v) } else { v }).collect();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            out.push(x[i].mul(x[j]));
            out.push(x[i].mul(x[j].inv()));
        }
    }
    out
}

/// Arguments `α` with `d_1^{-1} = ∏ L_E(0, α)`.
pub fn d1_args<T: CharGroup>(case: WeylCase, big: &[T]) -> Vec<T> {
    d_args(big, case == WeylCase::A)
}

/// Arguments `α` with `d_0^{-1} = ∏ L_E(0, α)`.
pub fn d0_args<T: CharGroup>(case: WeylCase, small: &[T]) -> Vec<T> {
    d_args(small, case == WeylCase::B)
}

fn half_shift(field: &FieldData) -> C64 {
    q_power(field.q_e() as f64, C64::new(0.5, 0.0))
}

/// `b(Ξ, ξ)`, the reciprocal of the displayed product, as `∏ (1 - q_E^{-1/2} α)`.
pub fn b_factor(case: WeylCase, big: &[C64], small: &[C64], field: &FieldData) -> Result<C64> {
    let h = half_shift(field);
    Ok(b_args(case, big, small)?.into_iter().map(|a| C64::new(1.0, 0.0) - h * a).product())
}

pub fn d1_factor(case: WeylCase, big: &[C64]) -> C64 {
    d1_args(case, big).into_iter().map(|a| C64::new(1.0, 0.0) - a).product()
}

pub fn d0_factor(case: WeylCase, small: &[C64]) -> C64 {
    d0_args(case, small).into_iter().map(|a| C64::new(1.0, 0.0) - a).product()
}

/// `c(Ξ, ξ) = b / (d_1 d_0)`.
pub fn c_value(case: WeylCase, big: &[C64], small: &[C64], field: &FieldData) -> Result<C64> {
    let d = d1_factor(case, big) * d0_factor(case, small);
    if d.norm() < POLE_EPSILON {
        return Err(Error::Pole { factor: "d_1(Ξ)d_0(ξ)".into(), distance: d.norm() });
    }
    Ok(b_factor(case, big, small, field)? / d)
}

/// Brute-force `A_{Ξ,ξ} = Σ_{w',w} c(w'Ξ, wξ)`, summed in enumeration order.
pub fn weyl_sum_a(case: WeylCase, big: &[C64], small: &[C64], field: &FieldData) -> Result<C64> {
    case.check(big.len(), small.len())?;
    let wb = enumerate_weyl(big.len())?;
    let ws = enumerate_weyl(small.len())?;
    let small_orbit = ws.iter().map(|w| w.act(small)).collect::<Result<Vec<_>>>()?;
    let mut total = C64::new(0.0, 0.0);
    for w1 in &wb {
        let y = w1.act(big)?;
        for (w, x) in ws.iter().zip(&small_orbit) {
            total += c_value(case, &y, x, field).map_err(|e| match e {
                Error::Pole { distance, .. } => {
                    Error::Pole { factor: format!("c(w'Ξ, wξ) at w' = {w1}, w = {w}"), distance }
                }
                other => other,
            })?;
        }
    }
    Ok(total)
}

/// The special vectors `(Ξ̂, ξ̂)` as exact powers of `q_F`.
pub fn special_vectors(case: WeylCase, l_big: usize, l_small: usize) -> Result<(Vec<QPower>, Vec<QPower>)> {
    case.check(l_big, l_small)?;
    let (lb, ls) = (l_big as i32, l_small as i32);
    Ok(match case {
        // Ξ̂_k = q_E^{-(l-k+1)}, ξ̂_k = q_E^{-(l-k+1)+1/2}
        WeylCase::A => (
            (1..=lb).map(|k| QPower(-2 * (lb - k + 1))).collect(),
            (1..=ls).map(|k| QPower(-2 * (ls - k + 1) + 1)).collect(),
        ),
        // Ξ̂_k = q_E^{-(l_{n+2}-k+1/2)}, ξ̂_k = q_E^{-(l_{n+2}-k)}
        WeylCase::B => {
            ((1..=lb).map(|k| QPower(-2 * (lb - k) - 1)).collect(), (1..=ls).map(|k| QPower(-2 * (lb - k))).collect())
        }
    })
}

/// `b` at exact `q_F`-powers: each factor is `1 - q_F^{k-1}` (inert, `q_E^{-1/2} = q_F^{-1}`).
pub fn b_exact(case: WeylCase, big: &[QPower], small: &[QPower], q_f: u64) -> Result<f64> {
    let q = q_f as f64;
    Ok(b_args(case, big, small)?
        .into_iter()
        .map(|QPower(k)| if k == 1 { 0.0 } else { 1.0 - Float::powi(q, k - 1) })
        .product())
}

/// Evaluation of the Weyl sum at the special vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecialSum {
    /// `c(Ξ̂, ξ̂)`.
    pub identity_term: f64,
    /// The full brute-force sum.
    pub total: f64,
    /// `max |b(w'Ξ̂, wξ̂)|` over `(w', w) ≠ (1, 1)`.
    pub max_other_b: f64,
}

pub fn special_sum(n_plus_1: usize, q_f: u64) -> Result<SpecialSum> {
    let case = WeylCase::for_size(n_plus_1);
    let (lb, ls) = WeylCase::ranks(n_plus_1);
    let (big, small) = special_vectors(case, lb, ls)?;
    let q = q_f as f64;
    let value = |v: &[QPower]| -> Vec<C64> { v.iter().map(|k| C64::new(Float::powi(q, k.0), 0.0)).collect() };
    let wb = enumerate_weyl(lb)?;
    let ws = enumerate_weyl(ls)?;
    let mut out = SpecialSum { identity_term: 0.0, total: 0.0, max_other_b: 0.0 };
    for w1 in &wb {
        let y = w1.act(&big)?;
        for w in &ws {
            let x = w.act(&small)?;
            let b = b_exact(case, &y, &x, q_f)?;
            if b == 0.0 {
                continue;
            }
            let d = d1_factor(case, &value(&y)) * d0_factor(case, &value(&x));
            let c = b / d.re;
            out.total += c;
            if w1.is_identity() && w.is_identity() {
                out.identity_term = c;
            } else {
                out.max_other_b = out.max_other_b.max(b.abs());
            }
        }
    }
    Ok(out)
}

/// `(L(1,χ)ζ(2)L(3,χ)…)^{-1}`, the constant value of `A`.
pub fn motive_a_value(n_plus_1: usize, field: &FieldData) -> C64 {
    motive_delta(n_plus_1, field).inv()
}

/// `Vol(B_i) = ∏_{j≤i} (q - χ^j) / (q^j - χ^j)` with `χ = χ_{E/F}(ϖ)`.
pub fn iwahori_volume_at(i: usize, field: &FieldData) -> Result<Ratio<i128>> {
    let q = field.q_f() as i128;
    let chi = field.chi_at_uniformizer() as i128;
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    let mut qj: i128 = 1;
    let mut chij: i128 = 1;
    for _ in 1..=i {
        qj = qj.checked_mul(q).ok_or(Error::Overflow("Iwahori volume"))?;
        chij *= chi;
        num = num.checked_mul(q - chij).ok_or(Error::Overflow("Iwahori volume"))?;
        den = den.checked_mul(qj - chij).ok_or(Error::Overflow("Iwahori volume"))?;
        let r = Ratio::new(num, den);
        num = *r.numer();
        den = *r.denom();
    }
    Ok(Ratio::new(num, den))
}

/// Volume of the Iwahori subgroup of the quasi-split `U(i)` at an inert place.
pub fn iwahori_volume(i: usize, q_f: u64) -> Result<Ratio<i128>> {
    iwahori_volume_at(i, &FieldData::inert(q_f)?)
}

pub fn ratio_to_c64(r: Ratio<i128>) -> C64 {
    C64::new(*r.numer() as f64 / *r.denom() as f64, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LengthKind {
    HyperoctahedralRank,
    SymmetricSize,
}

/// Length of the longest element: `l²` in type `B_l/C_l`, `m(m-1)/2` in `S_m`.
pub fn long_length(k: usize, kind: LengthKind) -> u64 {
    let k = k as u64;
    match kind {
        LengthKind::HyperoctahedralRank => k * k,
        LengthKind::SymmetricSize => k * k.saturating_sub(1) / 2,
    }
}

/// How the length exponent in the inert `S(1)` formula is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum LengthConvention {
    /// `q_E^{l(w_ℓ)+l(w_ℓ')}` with Coxeter lengths `l_{n+1}² + l_{n+2}²`.
    Coxeter,
    /// `q_F^{d(n+1)+d(n+2)}` with `d(m) = m(m-1)/2`, the index `[K : I]` up to
    /// units of the hyperspecial maximal compact over its Iwahori subgroup.
    #[default]
    IwahoriIndex,
}

/// The power of `q` multiplying the inert `S(1)` formula, with a label.
pub fn inert_length_factor(n: usize, field: &FieldData, conv: LengthConvention) -> (String, C64) {
    let q = field.q_f() as f64;
    match conv {
        LengthConvention::Coxeter => {
            let (lb, ls) = WeylCase::ranks(n + 1);
            let e = long_length(lb, LengthKind::HyperoctahedralRank) + long_length(ls, LengthKind::HyperoctahedralRank);
            (format!("q_E^{{{e}}} (Coxeter lengths)"), C64::new(Float::powi(q, 2 * e as i32), 0.0))
        }
        LengthConvention::IwahoriIndex => {
            let e = long_length(n + 1, LengthKind::SymmetricSize) + long_length(n + 2, LengthKind::SymmetricSize);
            (format!("q_F^{{{e}}} (Iwahori index)"), C64::new(Float::powi(q, e as i32), 0.0))
        }
    }
}

pub const KHOURY: &str = "S(1), inert";

/// The scalar factors of the inert formula besides `ζ(Ξ^{-1}, ξ^{-1})`:
/// the `q`-power, both Iwahori volumes and `A_{Ξ^{-1},ξ^{-1}}`.
///
/// `big` and `small` are the stored inert tuples of `U(n+2)` and `U(n+1)`.
pub fn s_value_inert_scalars(
    big: &[C64],
    small: &[C64],
    n: usize,
    field: &FieldData,
    conv: LengthConvention,
) -> Result<Product> {
    if field.kind() != PlaceKind::Inert {
        return Err(Error::Invalid("the Weyl-sum formula for S(1) is the inert one".into()));
    }
    let case = WeylCase::for_size(n + 1);
    let big_inv: Vec<C64> = big.iter().map(|z| z.inv()).collect();
    let small_inv: Vec<C64> = small.iter().map(|z| z.inv()).collect();
    let a = weyl_sum_a(case, &big_inv, &small_inv, field)?;
    let (qname, qval) = inert_length_factor(n, field, conv);
    let mut p = Product::new();
    p.scalar(KHOURY, qname, qval);
    p.scalar(KHOURY, format!("Vol(B_{})", n + 1), ratio_to_c64(iwahori_volume_at(n + 1, field)?));
    p.scalar(KHOURY, format!("Vol(B_{})", n + 2), ratio_to_c64(iwahori_volume_at(n + 2, field)?));
    p.scalar(KHOURY, "A_{Ξ^{-1},ξ^{-1}}", a);
    Ok(p)
}

/// `S_{Ξ,ξ}(1)` at an inert place given `ζ(Ξ^{-1}, ξ^{-1})`.
pub fn s_value_inert(
    big: &[CharValue],
    small: &[CharValue],
    n: usize,
    field: &FieldData,
    zeta_at_inverse: C64,
    conv: LengthConvention,
) -> Result<C64> {
    let bv: Vec<C64> = big.iter().map(|c| c.value()).collect();
    let sv: Vec<C64> = small.iter().map(|c| c.value()).collect();
    let p = s_value_inert_scalars(&bv, &sv, n, field, conv)?;
    Ok(zeta_at_inverse * p.eval(field, &Tuples { big: &[], small: &[] })?)
}

pub const KMS: &str = "S(1), split";

/// The split formula for `S_{Ξ,ξ}(1)` with its index pattern transcribed literally.
///
/// `big` has `n+2` entries and `small` has `n+1`; entries are used in the
/// order given.
pub fn s_value_split_display(n: usize, q_f: u64, big: &[Monomial], small: &[Monomial]) -> Result<Product> {
    if big.len() != n + 2 || small.len() != n + 1 {
        return Err(Error::Invalid(format!(
            "split S(1) needs tuples of length {} and {}, got {} and {}",
            n + 2,
            n + 1,
            big.len(),
            small.len()
        )));
    }
    let half = C64::new(0.5, 0.0);
    let one = C64::new(1.0, 0.0);
    let at = |k: i64, what: &str| -> Result<&Monomial> {
        if k < 1 || k as usize > big.len() {
            return Err(Error::Index { factor: format!("{KMS}: {what}"), index: k, len: big.len() });
        }
        Ok(&big[k as usize - 1])
    };
    let n_i = n as i64;
    let mut p = Product::new();
    let e = long_length(n + 1, LengthKind::SymmetricSize) + long_length(n + 2, LengthKind::SymmetricSize);
    p.scalar(KMS, format!("q_F^{{{e}}}"), C64::new(Float::powi(q_f as f64, e as i32), 0.0));
    for i in 1..=n + 1 {
        for j in i + 1..=n + 2 {
            let x = at(n_i - j as i64 + 3, "Ξ_{n-j+3}")?;
            p.l(KMS, Base::F, half, small[i - 1].mul(x), 1);
        }
    }
    for i in 1..=n + 1 {
        for j in 1..=i {
            let x = at(n_i - j as i64 + 3, "Ξ_{n-j+3}")?;
            p.l(KMS, Base::F, half, small[i - 1].mul(x).inv(), 1);
        }
    }
    for i in 1..=n + 1 {
        p.l(KMS, Base::F, C64::new(i as f64, 0.0), Monomial::one(), -1);
    }
    for i in 0..n + 1 {
        for j in i + 1..n + 1 {
            p.l(KMS, Base::F, one, small[i].div(&small[j]), -1);
        }
    }
    for i in 0..n + 2 {
        for j in i + 1..n + 2 {
            p.l(KMS, Base::F, one, big[i].div(&big[j]), -1);
        }
    }
    Ok(p)
}

/// `S_{Ξ,ξ}(1)` at a split place, from the literal formula on the given tuples.
pub fn s_value_split(big: &[CharValue], small: &[CharValue], n: usize, field: &FieldData) -> Result<C64> {
    let bs = crate::satake::symbols(crate::factor::Role::Big, big.len());
    let ss = crate::satake::symbols(crate::factor::Role::Small, small.len());
    let p = s_value_split_display(n, field.q_f(), &bs, &ss)?;
    let bv: Vec<C64> = big.iter().map(|c| c.value()).collect();
    let sv: Vec<C64> = small.iter().map(|c| c.value()).collect();
    p.eval(field, &Tuples { big: &bv, small: &sv })
}
