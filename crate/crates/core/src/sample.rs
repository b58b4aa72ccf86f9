//! Seeded random data for the sampled checks.
//!
//! Sample `k` of a run with seed `s` draws from ChaCha8 seeded with `s` on
//! stream `k`, so any sample can be reproduced on its own.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::numfield::{FieldData, PlaceKind};
use crate::satake::SatakeDatum;
use crate::C64;

/// Resampling attempts before giving up on generic position.
pub const MAX_RETRIES: usize = 100;
/// Minimal separation between the points of a generic configuration.
pub const GENERIC_GAP: f64 = 1e-6;

pub fn rng_for(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Uniform in `[0, 1)`.
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn uniform_in(rng: &mut impl RngCore, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * uniform(rng)
}

/// A uniformly distributed point of the unit circle.
pub fn unit(rng: &mut impl RngCore) -> C64 {
    C64::from_polar(1.0, TAU * uniform(rng))
}

pub fn units(rng: &mut impl RngCore, k: usize) -> Vec<C64> {
    (0..k).map(|_| unit(rng)).collect()
}

/// A complex `s` with real part in `[0.25, 3]` and imaginary part in `[-5, 5]`.
pub fn random_s(rng: &mut impl RngCore) -> C64 {
    C64::new(uniform_in(rng, 0.25, 3.0), uniform_in(rng, -5.0, 5.0))
}

/// True when the points `z^{±1}` for `z` in `values`, together with `±1`, are
/// pairwise at least `gap` apart.
///
/// This keeps every root value `Ξ_iΞ_j^{±1}`, `Ξ_i^{±1}`, `Ξ_i^{±2}` away
/// from 1, so the Weyl-sum denominators stay invertible.
pub fn is_generic(values: &[C64], gap: f64) -> bool {
    let mut pts: Vec<C64> = alloc::vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)];
    for z in values {
        pts.push(*z);
        pts.push(z.inv());
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if (pts[i] - pts[j]).norm() < gap {
                return false;
            }
        }
    }
    true
}

/// Draw `k` unit values in generic position.
pub fn generic_units(rng: &mut impl RngCore, k: usize) -> Result<Vec<C64>> {
    generic_units_with_gap(rng, k, GENERIC_GAP)
}

pub fn generic_units_with_gap(rng: &mut impl RngCore, k: usize, gap: f64) -> Result<Vec<C64>> {
    for _ in 0..MAX_RETRIES {
        let v = units(rng, k);
        if is_generic(&v, gap) {
            return Ok(v);
        }
    }
    Err(Error::SamplerExhausted { retries: MAX_RETRIES })
}

/// Stored tuple length of a `U(m)` datum.
pub fn stored_len(m: usize, kind: PlaceKind) -> usize {
    match kind {
        PlaceKind::Inert => m / 2,
        PlaceKind::Split => m,
    }
}

/// Generic unitary data `(π_{n+1}, π_{n+2})` of `U(n+1) × U(n+2)`.
pub fn generic_pair(rng: &mut impl RngCore, n: usize, field: FieldData) -> Result<(SatakeDatum, SatakeDatum)> {
    let (ls, lb) = (stored_len(n + 1, field.kind()), stored_len(n + 2, field.kind()));
    let v = generic_units(rng, ls + lb)?;
    let small = SatakeDatum::from_values(n + 1, field, &v[..ls])?;
    let big = SatakeDatum::from_values(n + 2, field, &v[ls..])?;
    Ok((small, big))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = unit(&mut rng_for(7, 3));
        assert_eq!(a, unit(&mut rng_for(7, 3)));
        assert_ne!(a, unit(&mut rng_for(7, 4)));
        assert_ne!(a, unit(&mut rng_for(8, 3)));
    }

    #[test]
    fn ranges() {
        let mut rng = rng_for(1, 0);
        for _ in 0..1000 {
            let u = uniform(&mut rng);
            assert!((0.0..1.0).contains(&u));
            let s = random_s(&mut rng);
            assert!((0.25..=3.0).contains(&s.re) && s.im.abs() <= 5.0);
            assert!((unit(&mut rng).norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn genericity() {
        let z = C64::from_polar(1.0, 0.3);
        assert!(is_generic(&[z], 1e-6));
        assert!(!is_generic(&[z, z.inv()], 1e-6));
        assert!(!is_generic(&[C64::new(1.0, 0.0)], 1e-6));
        // 1 and -1 are 2 apart, so a gap of 3 is never met
        assert!(matches!(
            generic_units_with_gap(&mut rng_for(0, 0), 1, 3.0),
            Err(Error::SamplerExhausted { retries: MAX_RETRIES })
        ));
    }

    #[test]
    fn pair_shapes() {
        let mut rng = rng_for(2, 0);
        let (s, b) = generic_pair(&mut rng, 2, FieldData::inert(2).unwrap()).unwrap();
        assert_eq!((s.m(), s.chars().len(), b.m(), b.chars().len()), (3, 1, 4, 2));
        let (s, b) = generic_pair(&mut rng, 2, FieldData::split(2).unwrap()).unwrap();
        assert_eq!((s.chars().len(), b.chars().len()), (3, 4));
    }
}
