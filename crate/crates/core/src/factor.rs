//! Labelled products of Euler factors in symbolic character variables.
//!
//! A [`Product`] records a displayed formula term by term: each term is an
//! Euler factor `L_{F or E}(s, ±monomial)^power` or a named scalar. The same
//! product can be evaluated at a numeric valuation or compared with another
//! product factor by factor.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::numfield::{q_power, FieldData, POLE_EPSILON};
use crate::C64;

/// Which Satake tuple a variable belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    /// The tuple of the larger group, printed `Ξ`.
    Big,
    /// The tuple of the smaller group, printed `ξ`.
    Small,
}

/// One entry of a character tuple (0-based index, printed 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub role: Role,
    pub index: u16,
}

impl Var {
    pub fn big(index: usize) -> Self {
        Var { role: Role::Big, index: index as u16 }
    }

    pub fn small(index: usize) -> Self {
        Var { role: Role::Small, index: index as u16 }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.role {
            Role::Big => "Ξ",
            Role::Small => "ξ",
        };
        write!(f, "{sym}_{}", self.index as usize + 1)
    }
}

/// A Laurent monomial in the tuple variables, kept sorted with no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: Vec<(Var, i32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn var(v: Var) -> Self {
        Monomial { exps: alloc::vec![(v, 1)] }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self) -> &[(Var, i32)] {
        &self.exps
    }

    pub fn inv(&self) -> Self {
        Monomial { exps: self.exps.iter().map(|&(v, e)| (v, -e)).collect() }
    }

    pub fn pow(&self, k: i32) -> Self {
        if k == 0 {
            return Monomial::one();
        }
        Monomial { exps: self.exps.iter().map(|&(v, e)| (v, e * k)).collect() }
    }

    pub fn mul(&self, other: &Monomial) -> Self {
        let mut out: Vec<(Var, i32)> = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() || j < other.exps.len() {
            let take_left = j >= other.exps.len() || (i < self.exps.len() && self.exps[i].0 < other.exps[j].0);
            let take_right = i >= self.exps.len() || (j < other.exps.len() && other.exps[j].0 < self.exps[i].0);
            if take_left {
                out.push(self.exps[i]);
                i += 1;
            } else if take_right {
                out.push(other.exps[j]);
                j += 1;
            } else {
                let e = self.exps[i].1 + other.exps[j].1;
                if e != 0 {
                    out.push((self.exps[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
        Monomial { exps: out }
    }

    pub fn div(&self, other: &Monomial) -> Self {
        self.mul(&other.inv())
    }

    pub fn eval(&self, val: &dyn Valuation) -> C64 {
        self.exps.iter().fold(C64::new(1.0, 0.0), |acc, &(v, e)| acc * val.value(v).powi(e))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return f.write_str("1");
        }
        for &(v, e) in &self.exps {
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{{{e}}}")?;
            }
        }
        Ok(())
    }
}

/// Numeric values of the tuple variables.
pub trait Valuation {
    fn value(&self, v: Var) -> C64;
}

/// Valuation reading two plain tuples.
#[derive(Clone, Copy, Debug)]
pub struct Tuples<'a> {
    pub big: &'a [C64],
    pub small: &'a [C64],
}

impl Valuation for Tuples<'_> {
    fn value(&self, v: Var) -> C64 {
        match v.role {
            Role::Big => self.big[v.index as usize],
            Role::Small => self.small[v.index as usize],
        }
    }
}

/// The field over which an Euler factor is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Base {
    F,
    E,
}

/// `L_base(s, sign·arg)^power = (1 - q_base^{-s}·sign·arg)^{-power}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Euler {
    pub base: Base,
    pub s: C64,
    /// `-1` stands for a twist by `χ_{E/F}` at an inert place.
    pub sign: i8,
    pub arg: Monomial,
    pub power: i32,
    /// Printed name of the argument (e.g. `ν_1θ_2`), used only for labels.
    pub alias: Option<String>,
}

impl Euler {
    fn q(&self, field: &FieldData) -> u64 {
        match self.base {
            Base::F => field.q_f(),
            Base::E => field.q_e(),
        }
    }

    /// `1 - q^{-s}·sign·arg` at the valuation.
    pub fn linear_form(&self, field: &FieldData, val: &dyn Valuation) -> C64 {
        let alpha = self.arg.eval(val) * (self.sign as f64);
        C64::new(1.0, 0.0) - q_power(self.q(field) as f64, self.s) * alpha
    }

    /// Value of the factor raised to `power` (which may differ from `self.power`).
    pub fn eval_pow(&self, power: i32, field: &FieldData, val: &dyn Valuation) -> Result<C64> {
        let d = self.linear_form(field, val);
        if power > 0 && d.norm() < POLE_EPSILON {
            return Err(Error::Pole { factor: self.render(power), distance: d.norm() });
        }
        // An inverse factor at a pole of the L-factor is a zero, not an error.
        Ok(d.powi(-power))
    }

    pub fn eval(&self, field: &FieldData, val: &dyn Valuation) -> Result<C64> {
        self.eval_pow(self.power, field, val)
    }

    /// The exponent of `q_F` multiplying the argument, used to match factors across bases.
    fn key(&self) -> Key {
        let t = match self.base {
            Base::F => self.s,
            Base::E => self.s * 2.0,
        };
        Key {
            arg: self.arg.clone(),
            sign: self.sign,
            t_re: Float::round(t.re * 1e9) as i64,
            t_im: Float::round(t.im * 1e9) as i64,
        }
    }

    pub fn render(&self, power: i32) -> String {
        let base = match self.base {
            Base::F => "F",
            Base::E => "E",
        };
        let shown = self.alias.clone().unwrap_or_else(|| self.arg.to_string());
        let arg = match (self.sign, self.arg.is_one() && self.alias.is_none()) {
            (1, _) => shown,
            (_, true) => "χ".to_string(),
            (_, false) => format!("χ{shown}"),
        };
        let pw = match power {
            1 => String::new(),
            p => format!("^{{{p}}}"),
        };
        format!("L_{base}({}, {arg}){pw}", fmt_s(self.s))
    }
}

impl fmt::Display for Euler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(self.power))
    }
}

/// Render `s` as `1/2`, `1`, `3/2`, ... when it is a real half-integer.
pub fn fmt_s(s: C64) -> String {
    let twice = s.re * 2.0;
    if s.im == 0.0 && (twice - Float::round(twice)).abs() < 1e-12 {
        let t = Float::round(twice) as i64;
        if t % 2 == 0 {
            format!("{}", t / 2)
        } else {
            format!("{t}/2")
        }
    } else {
        format!("{}{:+}i", s.re, s.im)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    arg: Monomial,
    sign: i8,
    t_re: i64,
    t_im: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    Euler(Euler),
    Scalar { name: String, value: C64 },
}

/// A factor together with the formula it was transcribed from.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub source: &'static str,
    pub body: Body,
}

impl Term {
    pub fn label(&self) -> String {
        match &self.body {
            Body::Euler(e) => format!("{}: {}", self.source, e),
            Body::Scalar { name, .. } => format!("{}: {}", self.source, name),
        }
    }

    pub fn eval(&self, field: &FieldData, val: &dyn Valuation) -> Result<C64> {
        match &self.body {
            Body::Euler(e) => e.eval(field, val).map_err(|err| relabel(err, self.source)),
            Body::Scalar { value, .. } => Ok(*value),
        }
    }
}

fn relabel(err: Error, source: &str) -> Error {
    match err {
        Error::Pole { factor, distance } => Error::Pole { factor: format!("{source}: {factor}"), distance },
        other => other,
    }
}

/// An ordered product of labelled terms.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Product {
    terms: Vec<Term>,
}

impl Product {
    pub fn new() -> Self {
        Product { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn euler_count(&self) -> usize {
        self.terms.iter().filter(|t| matches!(t.body, Body::Euler(_))).count()
    }

    /// Push `L_base(s, arg)^power`.
    pub fn l(&mut self, source: &'static str, base: Base, s: C64, arg: Monomial, power: i32) -> &mut Self {
        self.l_twisted(source, base, s, 1, arg, power)
    }

    /// Push `L_base(s, sign·arg)^power`.
    pub fn l_twisted(
        &mut self,
        source: &'static str,
        base: Base,
        s: C64,
        sign: i8,
        arg: Monomial,
        power: i32,
    ) -> &mut Self {
        if power != 0 {
            self.terms.push(Term { source, body: Body::Euler(Euler { base, s, sign, arg, power, alias: None }) });
        }
        self
    }

    /// Push `L_base(s, arg)^power` labelled with a printed name for the argument.
    pub fn l_named(
        &mut self,
        source: &'static str,
        base: Base,
        s: C64,
        arg: Monomial,
        alias: String,
        power: i32,
    ) -> &mut Self {
        if power != 0 {
            let e = Euler { base, s, sign: 1, arg, power, alias: Some(alias) };
            self.terms.push(Term { source, body: Body::Euler(e) });
        }
        self
    }

    pub fn scalar(&mut self, source: &'static str, name: impl Into<String>, value: C64) -> &mut Self {
        self.terms.push(Term { source, body: Body::Scalar { name: name.into(), value } });
        self
    }

    pub fn append(&mut self, other: Product) -> &mut Self {
        self.terms.extend(other.terms);
        self
    }

    /// The reciprocal product.
    pub fn inverse(&self) -> Product {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let body = match &t.body {
                    Body::Euler(e) => Body::Euler(Euler { power: -e.power, ..e.clone() }),
                    Body::Scalar { name, value } => {
                        Body::Scalar { name: format!("({name})^{{-1}}"), value: value.inv() }
                    }
                };
                Term { source: t.source, body }
            })
            .collect();
        Product { terms }
    }

    /// The same formula evaluated at inverted characters.
    pub fn at_inverse(&self) -> Product {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let body = match &t.body {
                    Body::Euler(e) => Body::Euler(Euler {
                        arg: e.arg.inv(),
                        alias: e.alias.as_ref().map(|a| format!("({a})^{{-1}}")),
                        ..e.clone()
                    }),
                    other => other.clone(),
                };
                Term { source: t.source, body }
            })
            .collect();
        Product { terms }
    }

    pub fn eval(&self, field: &FieldData, val: &dyn Valuation) -> Result<C64> {
        let mut acc = C64::new(1.0, 0.0);
        for t in &self.terms {
            acc *= t.eval(field, val)?;
        }
        Ok(acc)
    }
}

/// One factor on which two products disagree.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub factor: String,
    pub lhs: C64,
    pub rhs: C64,
}

/// Result of comparing two products factor by factor.
#[derive(Clone, Debug, PartialEq)]
pub struct Localization {
    /// Non-constant Euler factors that do not cancel.
    pub residuals: Vec<Residual>,
    /// Product of the scalars and uncancelled constant Euler factors on each side.
    pub lhs_constant: C64,
    pub rhs_constant: C64,
    pub lhs_scalars: Vec<(String, C64)>,
    pub rhs_scalars: Vec<(String, C64)>,
}

struct Tally<'a> {
    net: i32,
    lhs: Option<&'a Term>,
    rhs: Option<&'a Term>,
}

/// Cancel the Euler factors common to both products and report the rest.
///
/// When exactly one non-constant factor is left on each side they are
/// reported together as a single residual.
pub fn localize(lhs: &Product, rhs: &Product, field: &FieldData, val: &dyn Valuation) -> Result<Localization> {
    let mut tally: BTreeMap<Key, Tally<'_>> = BTreeMap::new();
    let mut lhs_scalars = Vec::new();
    let mut rhs_scalars = Vec::new();
    for (side, prod) in [(1i32, lhs), (-1i32, rhs)] {
        for t in &prod.terms {
            match &t.body {
                Body::Euler(e) => {
                    let entry = tally.entry(e.key()).or_insert(Tally { net: 0, lhs: None, rhs: None });
                    entry.net += side * e.power;
                    if side > 0 {
                        entry.lhs.get_or_insert(t);
                    } else {
                        entry.rhs.get_or_insert(t);
                    }
                }
                Body::Scalar { name, value } => {
                    let list = if side > 0 { &mut lhs_scalars } else { &mut rhs_scalars };
                    list.push((format!("{}: {}", t.source, name), *value));
                }
            }
        }
    }

    let mut lhs_constant: C64 = lhs_scalars.iter().map(|(_, v)| *v).product();
    let mut rhs_constant: C64 = rhs_scalars.iter().map(|(_, v)| *v).product();
    let mut left_extra = Vec::new();
    let mut right_extra = Vec::new();
    for (key, t) in &tally {
        if t.net == 0 {
            continue;
        }
        let term = t.lhs.or(t.rhs).expect("tally entries come from a term");
        let Body::Euler(e) = &term.body else { unreachable!() };
        if key.arg.is_one() {
            if t.net > 0 {
                lhs_constant *= e.eval_pow(t.net, field, val)?;
            } else {
                rhs_constant *= e.eval_pow(-t.net, field, val)?;
            }
            continue;
        }
        if t.net > 0 {
            let owner = t.lhs.unwrap_or(term);
            left_extra.push((format!("{}: {}", owner.source, e.render(t.net)), e.eval_pow(t.net, field, val)?));
        } else {
            let owner = t.rhs.unwrap_or(term);
            right_extra.push((format!("{}: {}", owner.source, e.render(-t.net)), e.eval_pow(-t.net, field, val)?));
        }
    }

    let one = C64::new(1.0, 0.0);
    let residuals = if left_extra.len() == 1 && right_extra.len() == 1 {
        let (l, lv) = left_extra.pop().unwrap();
        let (r, rv) = right_extra.pop().unwrap();
        alloc::vec![Residual { factor: format!("{l} vs {r}"), lhs: lv, rhs: rv }]
    } else {
        left_extra
            .into_iter()
            .map(|(factor, lhs)| Residual { factor, lhs, rhs: one })
            .chain(right_extra.into_iter().map(|(factor, rhs)| Residual { factor, lhs: one, rhs }))
            .collect()
    };
    Ok(Localization { residuals, lhs_constant, rhs_constant, lhs_scalars, rhs_scalars })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn monomial_algebra() {
        let a = Monomial::var(Var::big(0));
        let b = Monomial::var(Var::small(1));
        let ab = a.mul(&b);
        assert_eq!(ab.mul(&b.inv()), a);
        assert!(ab.div(&ab).is_one());
        assert_eq!(ab.to_string(), "Ξ_1ξ_2");
        assert_eq!(a.pow(-1).to_string(), "Ξ_1^{-1}");
    }

    #[test]
    fn fmt_s_half_integers() {
        assert_eq!(fmt_s(c(0.5)), "1/2");
        assert_eq!(fmt_s(c(1.0)), "1");
        assert_eq!(fmt_s(c(3.0)), "3");
    }

    #[test]
    fn eval_matches_direct_formula() {
        let field = FieldData::inert(2).unwrap();
        let big = [C64::from_polar(1.0, 0.3)];
        let small: [C64; 0] = [];
        let val = Tuples { big: &big, small: &small };
        let mut p = Product::new();
        p.l("t", Base::E, c(1.0), Monomial::var(Var::big(0)), 1);
        p.l_twisted("t", Base::F, c(0.5), -1, Monomial::one(), -1);
        let expected = (c(1.0) - big[0] / 4.0).inv() * (c(1.0) + c(2f64.powf(-0.5)));
        assert!((p.eval(&field, &val).unwrap() - expected).norm() < 1e-14);
    }

    #[test]
    fn inverse_factor_at_pole_is_zero() {
        let field = FieldData::split(2).unwrap();
        let big = [c(2.0)];
        let val = Tuples { big: &big, small: &[] };
        let mut p = Product::new();
        p.l("t", Base::F, c(1.0), Monomial::var(Var::big(0)), -1);
        assert_eq!(p.eval(&field, &val).unwrap(), c(0.0));
        assert!(matches!(p.inverse().eval(&field, &val), Err(Error::Pole { .. })));
    }

    #[test]
    fn localize_cancels_across_bases() {
        // L_F(2s, α) and L_E(s, α) are the same factor at an inert place.
        let field = FieldData::inert(3).unwrap();
        let big = [C64::from_polar(1.0, 1.1), C64::from_polar(1.0, -0.4)];
        let val = Tuples { big: &big, small: &[] };
        let x = Monomial::var(Var::big(0));
        let y = Monomial::var(Var::big(1));
        let mut lhs = Product::new();
        lhs.l("a", Base::F, c(2.0), x.clone(), 1);
        lhs.l("a", Base::E, c(0.5), y.clone(), 1);
        lhs.scalar("a", "two", c(2.0));
        let mut rhs = Product::new();
        rhs.l("b", Base::E, c(1.0), x, 1);
        rhs.l("b", Base::E, c(0.5), y.inv(), 1);
        let loc = localize(&lhs, &rhs, &field, &val).unwrap();
        assert_eq!(loc.residuals.len(), 1);
        assert!(loc.residuals[0].factor.contains("Ξ_2^{-1}"));
        assert_eq!(loc.lhs_constant, c(2.0));
        assert_eq!(loc.rhs_constant, c(1.0));
        assert_eq!(loc.lhs_scalars, vec![("a: two".into(), c(2.0))]);
    }
}
