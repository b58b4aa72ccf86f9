//! Satake data of unramified principal series of `U(m)` and their
//! standard-tensor and adjoint L-factors.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::factor::{Base, Monomial, Product, Role, Tuples, Var};
use crate::numfield::{q_power, CharValue, FieldData, PlaceKind, POLE_EPSILON};
use crate::C64;

/// Satake datum of an unramified principal series of `U(m)`.
///
/// At an inert place `chars` holds `(ξ_1, …, ξ_{⌊m/2⌋})`; when `m` is odd the
/// character of `E^1` is trivial and not stored. At a split place `U(m) ≅ GL_m`
/// and `chars` is the full tuple `(θ_1, …, θ_l, [ξ_0], φ_l^{-1}, …, φ_1^{-1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct SatakeDatum {
    m: usize,
    field: FieldData,
    chars: Vec<CharValue>,
}

/// `l_m = ⌊m/2⌋`.
pub fn half_rank(m: usize) -> usize {
    m / 2
}

fn expected_len(m: usize, kind: PlaceKind) -> usize {
    match kind {
        PlaceKind::Inert => m / 2,
        PlaceKind::Split => m,
    }
}

impl SatakeDatum {
    pub fn new(m: usize, field: FieldData, chars: Vec<CharValue>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid("U(0) has no Satake datum".into()));
        }
        let want = expected_len(m, field.kind());
        if chars.len() != want {
            return Err(Error::Invalid(format!(
                "{} datum for U({m}) needs {want} characters, got {}",
                field.kind().name(),
                chars.len()
            )));
        }
        Ok(SatakeDatum { m, field, chars })
    }

    pub fn from_values(m: usize, field: FieldData, values: &[C64]) -> Result<Self> {
        let chars = values.iter().map(|&v| CharValue::new(v)).collect::<Result<Vec<_>>>()?;
        Self::new(m, field, chars)
    }

    /// Split datum from `θ_1..θ_l`, `φ_1..φ_l` and, for odd `m`, the middle character.
    pub fn from_theta_phi(
        field: FieldData,
        theta: &[CharValue],
        phi: &[CharValue],
        middle: Option<CharValue>,
    ) -> Result<Self> {
        if field.kind() != PlaceKind::Split {
            return Err(Error::Invalid("the (θ, φ) layout only exists at split places".into()));
        }
        if theta.len() != phi.len() {
            return Err(Error::Invalid("θ and φ must have the same length".into()));
        }
        let mut chars: Vec<CharValue> = theta.to_vec();
        chars.extend(middle);
        chars.extend(phi.iter().rev().map(|p| p.inverse()));
        let m = chars.len();
        Self::new(m, field, chars)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn field(&self) -> &FieldData {
        &self.field
    }

    pub fn kind(&self) -> PlaceKind {
        self.field.kind()
    }

    pub fn chars(&self) -> &[CharValue] {
        &self.chars
    }

    pub fn values(&self) -> Vec<C64> {
        self.chars.iter().map(|c| c.value()).collect()
    }

    /// `l_m = ⌊m/2⌋`.
    pub fn rank(&self) -> usize {
        half_rank(self.m)
    }

    /// The `E^1`-character `ξ_0`: stored in the middle of a split tuple of odd size.
    pub fn odd_char(&self) -> Option<CharValue> {
        match (self.kind(), self.m % 2) {
            (PlaceKind::Split, 1) => Some(self.chars[self.m / 2]),
            _ => None,
        }
    }

    fn split_index(&self, i: usize, what: &str) -> Result<()> {
        if self.kind() != PlaceKind::Split || i == 0 || i > self.rank() {
            return Err(Error::Index { factor: format!("{what}_{i}"), index: i as i64, len: self.rank() });
        }
        Ok(())
    }

    /// `θ_i`, 1-based, at a split place.
    pub fn theta(&self, i: usize) -> Result<CharValue> {
        self.split_index(i, "θ")?;
        Ok(self.chars[i - 1])
    }

    /// `φ_i`, 1-based, at a split place.
    pub fn phi(&self, i: usize) -> Result<CharValue> {
        self.split_index(i, "φ")?;
        Ok(self.chars[self.m - i].inverse())
    }

    pub fn inverse(&self) -> Self {
        SatakeDatum { chars: self.chars.iter().map(|c| c.inverse()).collect(), ..self.clone() }
    }

    pub fn conj(&self) -> Self {
        SatakeDatum { chars: self.chars.iter().map(|c| c.conj()).collect(), ..self.clone() }
    }

    /// Inert datum from base-change eigenvalues `{z_i, z_i^{-1}} (∪ {1})`, taking
    /// one representative of each inverse pair in the given order.
    pub fn from_bc_params(m: usize, field: FieldData, params: &[C64]) -> Result<Self> {
        if field.kind() != PlaceKind::Inert {
            return Err(Error::Invalid("base-change pairing is only needed at inert places".into()));
        }
        if params.len() != m {
            return Err(Error::Invalid(format!("U({m}) needs {m} base-change eigenvalues")));
        }
        let mut pool: Vec<C64> = params.to_vec();
        let mut reps = Vec::new();
        if m % 2 == 1 {
            let k = position_near(&pool, C64::new(1.0, 0.0))
                .ok_or_else(|| Error::Invalid("odd base change must contain the eigenvalue 1".into()))?;
            pool.remove(k);
        }
        while let Some(z) = pool.first().copied() {
            pool.remove(0);
            let k = position_near(&pool, z.inv())
                .ok_or_else(|| Error::Invalid(format!("eigenvalue {z} has no inverse partner")))?;
            pool.remove(k);
            reps.push(z);
        }
        Self::from_values(m, field, &reps)
    }

    /// Symbolic tuple `(Var(role, 0), …)`.
    pub fn symbols(&self, role: Role) -> Vec<Monomial> {
        symbols(role, self.chars.len())
    }
}

fn position_near(pool: &[C64], target: C64) -> Option<usize> {
    pool.iter().position(|&w| (w - target).norm() <= 1e-9 * (1.0 + target.norm()))
}

/// Symbolic tuple of `len` variables of the given role.
pub fn symbols(role: Role, len: usize) -> Vec<Monomial> {
    (0..len).map(|k| Monomial::var(Var { role, index: k as u16 })).collect()
}

/// Base-change parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum BcParams {
    /// Eigenvalues of `BC(π)` over `E`.
    Inert(Vec<C64>),
    /// The two `GL_m(F)` parameters of `BC(π) = π ⊠ π^∨`.
    Split { first: Vec<C64>, second: Vec<C64> },
}

pub fn bc_params(datum: &SatakeDatum) -> BcParams {
    match datum.kind() {
        PlaceKind::Inert => {
            let mut v = Vec::with_capacity(datum.m());
            for c in datum.chars() {
                v.push(c.value());
                v.push(c.inverse().value());
            }
            if datum.m() % 2 == 1 {
                v.push(C64::new(1.0, 0.0));
            }
            BcParams::Inert(v)
        }
        PlaceKind::Split => BcParams::Split {
            first: datum.values(),
            second: datum.chars().iter().map(|c| c.inverse().value()).collect(),
        },
    }
}

fn check_pair(small: &SatakeDatum, big: &SatakeDatum) -> Result<()> {
    if big.m() != small.m() + 1 {
        return Err(Error::Invalid(format!("need big.m = small.m + 1, got {} and {}", big.m(), small.m())));
    }
    if big.field() != small.field() {
        return Err(Error::Invalid("both data must live at the same place".into()));
    }
    Ok(())
}

const STD_EVEN: &str = "std tensor (n = 2l)";
const STD_ODD: &str = "std tensor (n = 2l-1)";
const STD_SPLIT: &str = "std tensor (split)";

/// `L_E(s, BC(π_n) ⊗ BC(π_{n+1}), st)` as displayed, with `n = small_m`.
///
/// `small` and `big` are the stored tuples of `U(n)` and `U(n+1)`.
pub fn std_tensor_display(s: C64, kind: PlaceKind, small_m: usize, small: &[Monomial], big: &[Monomial]) -> Product {
    let mut p = Product::new();
    let x = |i: usize| &small[i - 1];
    let y = |j: usize| &big[j - 1];
    let four = |p: &mut Product, src: &'static str, i: usize, j: usize| {
        p.l(src, Base::E, s, x(i).mul(y(j)), 1);
        p.l(src, Base::E, s, x(i).inv().mul(y(j)), 1);
        p.l(src, Base::E, s, x(i).mul(&y(j).inv()), 1);
        p.l(src, Base::E, s, x(i).inv().mul(&y(j).inv()), 1);
    };
    match kind {
        PlaceKind::Split => {
            for a in small {
                for b in big {
                    p.l(STD_SPLIT, Base::F, s, a.mul(b), 1);
                    p.l(STD_SPLIT, Base::F, s, a.inv().mul(&b.inv()), 1);
                }
            }
        }
        PlaceKind::Inert if small_m.is_multiple_of(2) => {
            let l = small_m / 2;
            for i in 1..=l {
                for j in i + 1..=l {
                    four(&mut p, STD_EVEN, i, j);
                }
            }
            for i in 1..=l {
                for j in 1..=i {
                    four(&mut p, STD_EVEN, i, j);
                }
            }
            for i in 1..=l {
                p.l(STD_EVEN, Base::E, s, x(i).clone(), 1);
                p.l(STD_EVEN, Base::E, s, x(i).inv(), 1);
            }
        }
        PlaceKind::Inert => {
            let l = small_m.div_ceil(2);
            for i in 1..=l {
                for j in i + 1..=l {
                    four(&mut p, STD_ODD, i, j);
                }
            }
            for i in 1..l {
                for j in 1..=i {
                    four(&mut p, STD_ODD, i, j);
                }
            }
            for i in 1..=l {
                p.l(STD_ODD, Base::E, s, y(i).clone(), 1);
                p.l(STD_ODD, Base::E, s, y(i).inv(), 1);
            }
        }
    }
    p
}

pub fn std_tensor_lfactor(s: C64, small: &SatakeDatum, big: &SatakeDatum) -> Result<C64> {
    check_pair(small, big)?;
    let p = std_tensor_display(s, small.kind(), small.m(), &small.symbols(Role::Small), &big.symbols(Role::Big));
    let (bv, sv) = (big.values(), small.values());
    p.eval(small.field(), &Tuples { big: &bv, small: &sv })
}

/// `1 / det(I - q^{-s} (A ⊗ B))` with `A`, `B` the base-change parameter matrices.
pub fn std_tensor_lfactor_det(s: C64, small: &SatakeDatum, big: &SatakeDatum) -> Result<C64> {
    check_pair(small, big)?;
    let field = small.field();
    match (bc_params(small), bc_params(big)) {
        (BcParams::Inert(a), BcParams::Inert(b)) => kron_det_inv(s, field.q_e(), &a, &b),
        (BcParams::Split { first: a1, second: a2 }, BcParams::Split { first: b1, second: b2 }) => {
            Ok(kron_det_inv(s, field.q_f(), &a1, &b1)? * kron_det_inv(s, field.q_f(), &a2, &b2)?)
        }
        _ => unreachable!("both data share a field"),
    }
}

fn kron_det_inv(s: C64, q: u64, a: &[C64], b: &[C64]) -> Result<C64> {
    let n = a.len() * b.len();
    let x = q_power(q as f64, s);
    let mut mat = alloc::vec![C64::new(0.0, 0.0); n * n];
    // Kronecker product of diag(a) and diag(b), assembled densely.
    for (i, &ai) in a.iter().enumerate() {
        for j in 0..a.len() {
            let aij = if i == j { ai } else { C64::new(0.0, 0.0) };
            for (k, &bk) in b.iter().enumerate() {
                for l in 0..b.len() {
                    let bkl = if k == l { bk } else { C64::new(0.0, 0.0) };
                    let r = i * b.len() + k;
                    let c = j * b.len() + l;
                    let id = if r == c { 1.0 } else { 0.0 };
                    mat[r * n + c] = C64::new(id, 0.0) - x * aij * bkl;
                }
            }
        }
    }
    let d = lu_det(&mut mat, n);
    if d.norm() < POLE_EPSILON {
        return Err(Error::Pole { factor: format!("det(I - {q}^(-s) A⊗B) at s = {s}"), distance: d.norm() });
    }
    Ok(d.inv())
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn lu_det(mat: &mut [C64], n: usize) -> C64 {
    let mut det = C64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n).max_by(|&r1, &r2| mat[r1 * n + col].norm().total_cmp(&mat[r2 * n + col].norm())).unwrap();
        if mat[pivot * n + col].norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if pivot != col {
            for c in 0..n {
                mat.swap(pivot * n + c, col * n + c);
            }
            det = -det;
        }
        let p = mat[col * n + col];
        det *= p;
        for r in col + 1..n {
            let f = mat[r * n + col] / p;
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for c in col..n {
                let v = mat[col * n + c];
                mat[r * n + c] -= f * v;
            }
        }
    }
    det
}

const AD_EVEN: &str = "adjoint (U(2l))";
const AD_ODD: &str = "adjoint (U(2l+1))";
const AD_SPLIT: &str = "adjoint (split)";

/// `L_F(s, π, Ad)` as displayed for `U(m)` with stored tuple `x`.
///
/// The printed inert displays for `π_n` and `π_{n+1}` depend only on the
/// parity of the group size, so two blocks cover all four.
pub fn adjoint_display(s: C64, kind: PlaceKind, m: usize, x: &[Monomial]) -> Product {
    let mut p = Product::new();
    let one = Monomial::one;
    match kind {
        PlaceKind::Split => {
            p.l(AD_SPLIT, Base::F, s, one(), m as i32);
            for i in 0..m {
                for j in 0..m {
                    if i != j {
                        p.l(AD_SPLIT, Base::F, s, x[i].div(&x[j]), 1);
                    }
                }
            }
        }
        PlaceKind::Inert => {
            let l = m / 2;
            let even = m.is_multiple_of(2);
            let src = if even { AD_EVEN } else { AD_ODD };
            let s2 = s * 2.0;
            p.l(src, Base::F, s, one(), l as i32);
            p.l_twisted(src, Base::F, s, -1, one(), if even { l } else { l + 1 } as i32);
            for i in 0..l {
                for j in i + 1..l {
                    p.l(src, Base::F, s2, x[i].mul(&x[j]), 1);
                    p.l(src, Base::F, s2, x[i].inv().mul(&x[j]), 1);
                    p.l(src, Base::F, s2, x[i].inv().mul(&x[j].inv()), 1);
                    p.l(src, Base::F, s2, x[i].div(&x[j]), 1);
                }
            }
            for xi in x.iter().take(l) {
                if even {
                    p.l(src, Base::F, s, xi.clone(), 1);
                    p.l(src, Base::F, s, xi.inv(), 1);
                } else {
                    p.l_twisted(src, Base::F, s, -1, xi.clone(), 1);
                    p.l_twisted(src, Base::F, s, -1, xi.inv(), 1);
                    p.l(src, Base::F, s2, xi.clone(), 1);
                    p.l(src, Base::F, s2, xi.inv(), 1);
                }
            }
        }
    }
    p
}

pub fn adjoint_lfactor(s: C64, datum: &SatakeDatum) -> Result<C64> {
    let p = adjoint_display(s, datum.kind(), datum.m(), &datum.symbols(Role::Big));
    let v = datum.values();
    p.eval(datum.field(), &Tuples { big: &v, small: &[] })
}
