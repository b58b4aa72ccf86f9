//! The open-orbit value `ζ(Ξ, ξ)`: closed forms, the recursion, and the split base case.
//!
//! `big` is the datum of `U(n+2)` (characters `Ξ`) and `small` that of
//! `U(n+1)` (characters `ξ`). At split places the accessors `θ, φ` (and
//! `ξ_0`) read the small tuple and `μ, ν` (and `Ξ_0`) the big one.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::factor::{Base, Monomial, Product, Role, Tuples};
use crate::numfield::{q_power, CharValue, FieldData, PlaceKind};
use crate::satake::{symbols, SatakeDatum};
use crate::C64;

pub const ZETA_INERT_EVEN: &str = "ζ closed form (inert, n even)";
pub const ZETA_INERT_ODD: &str = "ζ closed form (inert, n odd)";
pub const ZETA_SPLIT_EVEN: &str = "ζ closed form (split, n even)";
pub const ZETA_SPLIT_ODD: &str = "ζ closed form (split, n odd)";
pub const ZETA_BASE_SPLIT: &str = "ζ base case (split)";
pub const REC_NUM: &str = "ζ recursion: L_E(1/2, BC(π_{n+1})⊗Ξ_l)";
pub const REC_DEN: &str = "ζ recursion: L_E(1, BC(π_n)⊗Ξ_l)";
pub const REC_CHI: &str = "ζ recursion: L_F(1, χ^n⊗Ξ_l)";

/// Reading of the split closed form for odd `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum SplitZetaText {
    /// The last factor of the second product is `L_F(1/2, ν_iθ_j)` as printed.
    AsPrinted,
    /// That factor is `L_F(1/2, ν_iφ_j)`, the value forced by the recursion.
    #[default]
    Corrected,
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `ζ(Ξ, ξ)` at an inert place, in closed form.
///
/// `big` has `l_{n+2}` entries and `small` has `l_{n+1}`.
pub fn zeta_closed_inert_display(n: usize, big: &[Monomial], small: &[Monomial]) -> Product {
    let (h, one) = (c(0.5), c(1.0));
    let x = |i: usize| &small[i - 1];
    let y = |j: usize| &big[j - 1];
    let mut p = Product::new();
    if n.is_multiple_of(2) {
        let src = ZETA_INERT_EVEN;
        let l = n / 2;
        for i in 1..=l + 1 {
            for j in i + 1..=l + 1 {
                p.l(src, Base::E, h, x(i).mul(y(j)), 1);
                p.l(src, Base::E, h, x(i).inv().mul(y(j)), 1);
                p.l(src, Base::E, one, y(i).mul(y(j)), -1);
                p.l(src, Base::E, one, y(i).inv().mul(y(j)), -1);
            }
        }
        for i in 1..=l {
            for j in i..=l {
                p.l(src, Base::E, h, y(i).mul(x(j)), 1);
                p.l(src, Base::E, h, y(i).inv().mul(x(j)), 1);
            }
        }
        for i in 1..=l {
            for j in i + 1..=l {
                p.l(src, Base::E, one, x(i).mul(x(j)), -1);
                p.l(src, Base::E, one, x(i).inv().mul(x(j)), -1);
            }
        }
        for i in 1..=l {
            p.l_twisted(src, Base::E, h, -1, x(i).clone(), -1);
            p.l(src, Base::E, one, x(i).clone(), -1);
        }
    } else {
        let src = ZETA_INERT_ODD;
        let l = n.div_ceil(2);
        for i in 1..=l {
            for j in i..=l {
                p.l(src, Base::E, h, x(i).mul(y(j)), 1);
                p.l(src, Base::E, h, x(i).inv().mul(y(j)), 1);
            }
        }
        for i in 1..=l {
            for j in i + 1..=l {
                p.l(src, Base::E, one, y(i).mul(y(j)), -1);
                p.l(src, Base::E, one, y(i).inv().mul(y(j)), -1);
                p.l(src, Base::E, h, y(i).mul(x(j)), 1);
                p.l(src, Base::E, h, y(i).inv().mul(x(j)), 1);
            }
        }
        for i in 1..=l {
            for j in i + 1..=l {
                p.l(src, Base::E, one, x(i).mul(x(j)), -1);
                p.l(src, Base::E, one, x(i).inv().mul(x(j)), -1);
            }
        }
        for i in 1..=l {
            p.l_twisted(src, Base::E, h, -1, y(i).clone(), -1);
            p.l(src, Base::E, one, y(i).clone(), -1);
        }
    }
    p
}

/// A tuple entry together with its printed name.
#[derive(Clone)]
struct Named(Monomial, String);

impl Named {
    fn inv(&self) -> Named {
        Named(self.0.inv(), format!("{}^{{-1}}", self.1))
    }

    fn times(&self, other: &Named) -> Named {
        Named(self.0.mul(&other.0), format!("{}{}", self.1, other.1))
    }
}

/// `(θ_i, φ_i)` or `(μ_i, ν_i)` read off a split tuple.
struct SplitView<'a> {
    t: &'a [Monomial],
    first: &'static str,
    second: &'static str,
}

impl SplitView<'_> {
    fn a(&self, i: usize) -> Named {
        Named(self.t[i - 1].clone(), format!("{}_{i}", self.first))
    }

    fn b(&self, i: usize) -> Named {
        Named(self.t[self.t.len() - i].inv(), format!("{}_{i}", self.second))
    }

    fn middle(&self, name: &str) -> Named {
        Named(self.t[self.t.len() / 2].clone(), String::from(name))
    }
}

fn push(p: &mut Product, src: &'static str, s: C64, x: Named, power: i32) {
    p.l_named(src, Base::F, s, x.0, x.1, power);
}

/// `ζ(Ξ, ξ)` at a split place, in closed form.
///
/// `big` is the `GL_{n+2}` tuple and `small` the `GL_{n+1}` tuple.
pub fn zeta_closed_split_display(n: usize, big: &[Monomial], small: &[Monomial], text: SplitZetaText) -> Product {
    let (h, one) = (c(0.5), c(1.0));
    let sm = SplitView { t: small, first: "θ", second: "φ" };
    let bg = SplitView { t: big, first: "μ", second: "ν" };
    let (th, ph) = (|i| sm.a(i), |i| sm.b(i));
    let (mu, nu) = (|i| bg.a(i), |i| bg.b(i));
    let l2 = (n + 2) / 2;
    let l1 = n.div_ceil(2);
    let mut p = Product::new();
    if n.is_multiple_of(2) {
        let src = ZETA_SPLIT_EVEN;
        let x0 = sm.middle("ξ_0");
        for i in 1..=l2 {
            for j in i + 1..=l2 {
                push(&mut p, src, h, th(i).times(&mu(j)), 1);
                push(&mut p, src, h, ph(i).inv().times(&mu(j)), 1);
                push(&mut p, src, h, th(i).inv().times(&nu(j)), 1);
                push(&mut p, src, h, ph(i).times(&nu(j)), 1);
            }
        }
        for i in 1..=l1 {
            for j in i..=l1 {
                push(&mut p, src, h, mu(i).times(&th(j)), 1);
                push(&mut p, src, h, nu(i).inv().times(&th(j)), 1);
                push(&mut p, src, h, mu(i).inv().times(&ph(j)), 1);
                push(&mut p, src, h, nu(i).times(&ph(j)), 1);
            }
        }
        for i in 1..=l2 {
            push(&mut p, src, h, x0.times(&mu(i)), 1);
            push(&mut p, src, h, x0.inv().times(&nu(i)), 1);
        }
        for i in 1..=l2 {
            for j in i + 1..=l2 {
                push(&mut p, src, one, mu(i).inv().times(&mu(j)), -1);
                push(&mut p, src, one, nu(i).times(&mu(j)), -1);
                push(&mut p, src, one, mu(i).times(&nu(j)), -1);
                push(&mut p, src, one, nu(i).inv().times(&nu(j)), -1);
            }
        }
        for i in 1..=l1 {
            for j in i + 1..=l1 {
                push(&mut p, src, one, th(i).inv().times(&th(j)), -1);
                push(&mut p, src, one, ph(i).times(&th(j)), -1);
                push(&mut p, src, one, th(i).times(&ph(j)), -1);
                push(&mut p, src, one, ph(i).inv().times(&ph(j)), -1);
            }
        }
        for i in 1..=l2 {
            push(&mut p, src, one, mu(i).times(&nu(i)), -1);
        }
        for i in 1..=l1 {
            push(&mut p, src, one, x0.inv().times(&th(i)), -1);
            push(&mut p, src, one, x0.times(&ph(i)), -1);
            push(&mut p, src, one, th(i).times(&ph(i)), -1);
        }
    } else {
        let src = ZETA_SPLIT_ODD;
        let x0 = bg.middle("Ξ_0");
        for i in 1..=l2 {
            for j in i..=l2 {
                push(&mut p, src, h, th(i).times(&mu(j)), 1);
                push(&mut p, src, h, ph(i).inv().times(&mu(j)), 1);
                push(&mut p, src, h, th(i).inv().times(&nu(j)), 1);
                push(&mut p, src, h, ph(i).times(&nu(j)), 1);
            }
        }
        for i in 1..=l1 {
            for j in i + 1..=l1 {
                push(&mut p, src, h, mu(i).times(&th(j)), 1);
                push(&mut p, src, h, nu(i).inv().times(&th(j)), 1);
                push(&mut p, src, h, mu(i).inv().times(&ph(j)), 1);
                let last = match text {
                    SplitZetaText::AsPrinted => nu(i).times(&th(j)),
                    SplitZetaText::Corrected => nu(i).times(&ph(j)),
                };
                push(&mut p, src, h, last, 1);
            }
        }
        for i in 1..=l1 {
            push(&mut p, src, h, x0.times(&th(i)), 1);
            push(&mut p, src, h, x0.inv().times(&ph(i)), 1);
        }
        for i in 1..=l2 {
            for j in i + 1..=l2 {
                push(&mut p, src, one, mu(i).inv().times(&mu(j)), -1);
                push(&mut p, src, one, nu(i).times(&mu(j)), -1);
                push(&mut p, src, one, mu(i).times(&nu(j)), -1);
                push(&mut p, src, one, nu(i).inv().times(&nu(j)), -1);
            }
        }
        for i in 1..=l1 {
            for j in i + 1..=l1 {
                push(&mut p, src, one, th(i).inv().times(&th(j)), -1);
                push(&mut p, src, one, ph(i).times(&th(j)), -1);
                push(&mut p, src, one, th(i).times(&ph(j)), -1);
                push(&mut p, src, one, ph(i).inv().times(&ph(j)), -1);
            }
        }
        for i in 1..=l2 {
            push(&mut p, src, one, mu(i).times(&nu(i)), -1);
            push(&mut p, src, one, x0.inv().times(&mu(i)), -1);
            push(&mut p, src, one, x0.times(&nu(i)), -1);
        }
        for i in 1..=l1 {
            push(&mut p, src, one, th(i).times(&ph(i)), -1);
        }
    }
    p
}

/// `L_F(1/2, φΞ_0^{-1}) L_F(1/2, θΞ_0) L_F(1, θφ)^{-1}`.
pub fn zeta_base_split_display(theta: &Monomial, phi: &Monomial, xi0: &Monomial) -> Product {
    let mut p = Product::new();
    p.l(ZETA_BASE_SPLIT, Base::F, c(0.5), phi.div(xi0), 1);
    p.l(ZETA_BASE_SPLIT, Base::F, c(0.5), theta.mul(xi0), 1);
    p.l(ZETA_BASE_SPLIT, Base::F, c(1.0), theta.mul(phi), -1);
    p
}

/// `ζ(Ξ, ξ)` by iterating the recursion down to the base case.
///
/// `big_m` is the size of the big group; tuples are stored tuples for `kind`.
pub fn zeta_recursive_display(kind: PlaceKind, big_m: usize, big: &[Monomial], small: &[Monomial]) -> Result<Product> {
    let mut p = Product::new();
    let mut big: Vec<Monomial> = big.to_vec();
    let mut small: Vec<Monomial> = small.to_vec();
    let mut m = big_m;
    if m < 2 {
        return Err(Error::Invalid("the recursion needs U(n+2) with n >= 0".into()));
    }
    let (h, one) = (c(0.5), c(1.0));
    while m > 2 {
        // Here m = n + 2 with n >= 1.
        let n = m - 2;
        let tilde: Vec<Monomial>;
        match kind {
            PlaceKind::Inert => {
                let l = m / 2;
                let xl = big[l - 1].clone();
                for a in &small {
                    p.l(REC_NUM, Base::E, h, a.mul(&xl), 1);
                    p.l(REC_NUM, Base::E, h, a.inv().mul(&xl), 1);
                }
                if (n + 1) % 2 == 1 {
                    p.l(REC_NUM, Base::E, h, xl.clone(), 1);
                }
                tilde = big[..l - 1].to_vec();
                for a in &tilde {
                    p.l(REC_DEN, Base::E, one, a.mul(&xl), -1);
                    p.l(REC_DEN, Base::E, one, a.inv().mul(&xl), -1);
                }
                if n % 2 == 1 {
                    p.l(REC_DEN, Base::E, one, xl.clone(), -1);
                }
                let sign = if n.is_multiple_of(2) { 1 } else { -1 };
                p.l_twisted(REC_CHI, Base::F, one, sign, xl, -1);
            }
            PlaceKind::Split => {
                // Ξ_l restricted to the two copies of F^×: μ = μ_l and ν = ν_l.
                let l = m / 2;
                let mu = big[l - 1].clone();
                let nu = big[m - l].inv();
                for a in &small {
                    p.l(REC_NUM, Base::F, h, a.mul(&mu), 1);
                    p.l(REC_NUM, Base::F, h, a.inv().mul(&nu), 1);
                }
                tilde =
                    big.iter().enumerate().filter(|&(k, _)| k != l - 1 && k != m - l).map(|(_, v)| v.clone()).collect();
                // BC(π_n) enters through its contragredient.
                for a in &tilde {
                    p.l(REC_DEN, Base::F, one, a.inv().mul(&mu), -1);
                    p.l(REC_DEN, Base::F, one, a.mul(&nu), -1);
                }
                p.l(REC_CHI, Base::F, one, mu.mul(&nu), -1);
            }
        }
        big = core::mem::take(&mut small);
        small = tilde;
        m -= 1;
    }
    if kind == PlaceKind::Split {
        p.append(zeta_base_split_display(&big[0], &big[1].inv(), &small[0]));
    }
    Ok(p)
}

fn check_pair(small: &SatakeDatum, big: &SatakeDatum, kind: Option<PlaceKind>) -> Result<()> {
    if big.m() != small.m() + 1 || big.field() != small.field() {
        return Err(Error::Invalid(format!(
            "ζ needs data of U(n+2) and U(n+1) at one place, got U({}) and U({})",
            big.m(),
            small.m()
        )));
    }
    if let Some(k) = kind {
        if small.kind() != k {
            return Err(Error::Invalid(format!("expected a {} place", k.name())));
        }
    }
    Ok(())
}

fn eval_pair(p: &Product, small: &SatakeDatum, big: &SatakeDatum) -> Result<C64> {
    let (bv, sv) = (big.values(), small.values());
    p.eval(small.field(), &Tuples { big: &bv, small: &sv })
}

/// The closed form for the place kind of the data.
pub fn zeta_closed_display(small: &SatakeDatum, big: &SatakeDatum, text: SplitZetaText) -> Result<Product> {
    check_pair(small, big, None)?;
    let n = small.m() - 1;
    let (b, s) = (big.symbols(Role::Big), small.symbols(Role::Small));
    Ok(match small.kind() {
        PlaceKind::Inert => zeta_closed_inert_display(n, &b, &s),
        PlaceKind::Split => zeta_closed_split_display(n, &b, &s, text),
    })
}

pub fn zeta_closed_inert(small: &SatakeDatum, big: &SatakeDatum) -> Result<C64> {
    check_pair(small, big, Some(PlaceKind::Inert))?;
    eval_pair(&zeta_closed_display(small, big, SplitZetaText::Corrected)?, small, big)
}

pub fn zeta_closed_split(small: &SatakeDatum, big: &SatakeDatum, text: SplitZetaText) -> Result<C64> {
    check_pair(small, big, Some(PlaceKind::Split))?;
    eval_pair(&zeta_closed_display(small, big, text)?, small, big)
}

pub fn zeta_recursive_for(small: &SatakeDatum, big: &SatakeDatum) -> Result<Product> {
    check_pair(small, big, None)?;
    zeta_recursive_display(small.kind(), big.m(), &big.symbols(Role::Big), &small.symbols(Role::Small))
}

pub fn zeta_recursive(small: &SatakeDatum, big: &SatakeDatum) -> Result<C64> {
    eval_pair(&zeta_recursive_for(small, big)?, small, big)
}

pub fn zeta_base_split_closed(theta: CharValue, phi: CharValue, xi0: CharValue, field: &FieldData) -> Result<C64> {
    if field.kind() != PlaceKind::Split {
        return Err(Error::Invalid("the split base case needs a split place".into()));
    }
    let [t, f, x] = [Role::Big; 3].map(|r| symbols(r, 3));
    let p = zeta_base_split_display(&t[0], &f[1], &x[2]);
    let vals = [theta.value(), phi.value(), xi0.value()];
    p.eval(field, &Tuples { big: &vals, small: &[] })
}

/// `1 + Σ_{k=1}^{terms} (θΞ_0 q^{-1/2})^k + (φ Ξ_0^{-1} q^{-1/2})^k`.
pub fn zeta_base_split_series(
    theta: CharValue,
    phi: CharValue,
    xi0: CharValue,
    field: &FieldData,
    terms: usize,
) -> Result<C64> {
    if terms == 0 {
        return Err(Error::Invalid("the series needs at least one term".into()));
    }
    let r = q_power(field.q_f() as f64, c(0.5));
    let a = theta.value() * xi0.value() * r;
    let b = phi.value() / xi0.value() * r;
    let (mut pa, mut pb) = (c(1.0), c(1.0));
    let mut sum = c(1.0);
    for _ in 0..terms {
        pa *= a;
        pb *= b;
        sum += pa + pb;
    }
    Ok(sum)
}

/// Bound on the tail of [`zeta_base_split_series`] for unitary characters.
pub fn series_truncation_bound(q_f: u64, terms: usize) -> f64 {
    let r = Float::powf(q_f as f64, -0.5);
    2.0 * Float::powi(r, terms as i32 + 1) / (1.0 - r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rel_err;

    fn unit(t: f64) -> C64 {
        C64::from_polar(1.0, t)
    }

    fn data(n: usize, field: FieldData, salt: f64) -> (SatakeDatum, SatakeDatum) {
        let len = |m: usize| if field.kind() == PlaceKind::Inert { m / 2 } else { m };
        let vals = |k: usize, off: f64| -> Vec<C64> { (0..k).map(|i| unit(off + 1.7 * i as f64 + salt)).collect() };
        let small = SatakeDatum::from_values(n + 1, field, &vals(len(n + 1), 0.4)).unwrap();
        let big = SatakeDatum::from_values(n + 2, field, &vals(len(n + 2), 2.9)).unwrap();
        (small, big)
    }

    #[test]
    fn inert_closed_matches_recursion() {
        for n in 0..=4 {
            let f = FieldData::inert(3).unwrap();
            let (s, b) = data(n, f, 0.1 * n as f64);
            let a = zeta_closed_inert(&s, &b).unwrap();
            let r = zeta_recursive(&s, &b).unwrap();
            assert!(rel_err(a, r) < 1e-12, "n={n}: {a} vs {r}");
        }
    }

    #[test]
    fn inert_base_case_is_one() {
        let f = FieldData::inert(2).unwrap();
        let (s, b) = data(0, f, 0.3);
        assert_eq!(zeta_recursive(&s, &b).unwrap(), c(1.0));
        assert_eq!(zeta_closed_inert(&s, &b).unwrap(), c(1.0));
    }

    #[test]
    fn split_closed_matches_recursion() {
        for n in 0..=4 {
            let f = FieldData::split(3).unwrap();
            let (s, b) = data(n, f, 0.2 * n as f64);
            let a = zeta_closed_split(&s, &b, SplitZetaText::Corrected).unwrap();
            let r = zeta_recursive(&s, &b).unwrap();
            assert!(rel_err(a, r) < 1e-12, "n={n}: {a} vs {r}");
        }
    }

    #[test]
    fn printed_split_text_differs_only_for_odd_n_from_3() {
        let f = FieldData::split(2).unwrap();
        for n in 0..=4 {
            let (s, b) = data(n, f, 0.5);
            let a = zeta_closed_split(&s, &b, SplitZetaText::AsPrinted).unwrap();
            let r = zeta_recursive(&s, &b).unwrap();
            assert_eq!(rel_err(a, r) < 1e-12, n < 3 || n % 2 == 0, "n={n}");
        }
    }

    #[test]
    fn split_base_case_values() {
        let f = FieldData::split(2).unwrap();
        let one = CharValue::trivial();
        let v = zeta_base_split_closed(one, one, one, &f).unwrap();
        assert!((v.re - 5.828_427_124_746_19).abs() < 1e-12);
        let sr = zeta_base_split_series(one, one, one, &f, 100).unwrap();
        assert!((sr - v).norm() < 1e-12);
        let f4 = FieldData::split(4).unwrap();
        assert_eq!(zeta_base_split_series(one, one, one, &f4, 1).unwrap(), c(2.0));
        // swapping (θ, Ξ_0) with (φ, Ξ_0^{-1})
        let (t, p, x) = (CharValue::from_angle(0.3), CharValue::from_angle(1.2), CharValue::from_angle(-0.8));
        let a = zeta_base_split_closed(t, p, x, &f).unwrap();
        let b = zeta_base_split_closed(p, t, x.inverse(), &f).unwrap();
        assert!(rel_err(a, b) < 1e-14);
    }

    #[test]
    fn split_base_case_zero_factor() {
        // θφ = q_F makes L_F(1, θφ)^{-1} vanish.
        let f = FieldData::split(2).unwrap();
        let t = CharValue::new(c(2.0)).unwrap();
        let one = CharValue::trivial();
        assert_eq!(zeta_base_split_closed(t, one, one, &f).unwrap(), c(0.0));
    }

    #[test]
    fn conjugation_symmetry() {
        for f in [FieldData::inert(2).unwrap(), FieldData::split(2).unwrap()] {
            let (s, b) = data(2, f, 0.9);
            let z = zeta_recursive(&s, &b).unwrap();
            let zc = zeta_recursive(&s.conj(), &b.conj()).unwrap();
            assert!(rel_err(z.conj(), zc) < 1e-13);
        }
    }

    #[test]
    fn typo_localizes_to_one_factor() {
        let f = FieldData::split(2).unwrap();
        let (s, b) = data(3, f, 0.5);
        let printed = zeta_closed_display(&s, &b, SplitZetaText::AsPrinted).unwrap();
        let rec = zeta_recursive_for(&s, &b).unwrap();
        let (bv, sv) = (b.values(), s.values());
        let loc = crate::factor::localize(&printed, &rec, &f, &Tuples { big: &bv, small: &sv }).unwrap();
        assert_eq!(loc.residuals.len(), 1, "{:?}", loc.residuals);
        assert!(loc.residuals[0].factor.contains("ν_1θ_2"), "{}", loc.residuals[0].factor);
    }
}
