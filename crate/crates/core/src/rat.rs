//! Exact rational arithmetic helpers.
//!
//! All guarantee-bearing comparisons in this crate are done on exact
//! rationals. Logarithms (needed for the lightness parameter and the
//! iteration bounds) are computed as certified rational enclosures so that
//! rounding always errs on the conservative side.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(v: u128) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn rat_vec(w: &[u128]) -> Vec<Rat> {
    w.iter().map(|&x| rat_int(x)).collect()
}

/// Parses "p/q" or a plain integer "p".
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let mk_err = || Error::Parse(format!("invalid rational: {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: BigInt = p.trim().parse().map_err(|_| mk_err())?;
    let q: BigInt = q.trim().parse().map_err(|_| mk_err())?;
    if q.is_zero() {
        return Err(mk_err());
    }
    Ok(Rat::new(p, q))
}

/// Formats as "p/q" (reduced, denominator always present). Lossless
/// round-trip with [`parse_rat`].
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A certified enclosure: `lo <= value <= hi` holds exactly.
#[derive(Debug, Clone)]
pub struct Enclosure {
    pub lo: Rat,
    pub hi: Rat,
}

fn atanh_enclosure(z: &Rat, terms: usize) -> Enclosure {
    // atanh(z) = sum_{j>=0} z^(2j+1)/(2j+1) for |z| < 1.
    let z2 = z * z;
    let mut sum = Rat::zero();
    let mut pow = z.clone();
    for j in 0..terms {
        sum += &pow / Rat::from_integer(BigInt::from(2 * j as i64 + 1));
        pow *= &z2;
    }
    // |tail| <= |z|^(2T+1) / ((2T+1) (1 - z^2)); `pow` is z^(2T+1).
    let tail = pow.abs() / (Rat::from_integer(BigInt::from(2 * terms as i64 + 1)) * (Rat::one() - &z2));
    Enclosure { lo: &sum - &tail, hi: sum + tail }
}

/// Certified enclosure of ln 2 via 2*atanh(1/3).
pub fn ln2_enclosure() -> Enclosure {
    let e = atanh_enclosure(&rat(1, 3), 24);
    Enclosure { lo: e.lo * rat(2, 1), hi: e.hi * rat(2, 1) }
}

/// Certified enclosure of ln(x) for rational x > 0.
///
/// Argument-reduces into [3/4, 3/2) by powers of two and evaluates the
/// atanh series; the tail bound keeps the enclosure rigorous.
pub fn ln_enclosure(x: &Rat) -> Result<Enclosure> {
    if !x.is_positive() {
        return Err(Error::Domain(format!("ln of non-positive value {}", format_rat(x))));
    }
    let mut y = x.clone();
    let mut m: i64 = 0;
    let half_pow = rat(3, 2);
    let low = rat(3, 4);
    while y >= half_pow {
        y /= rat(2, 1);
        m += 1;
    }
    while y < low {
        y *= rat(2, 1);
        m -= 1;
    }
    // z = (y-1)/(y+1) in [-1/7, 1/5].
    let z = (&y - Rat::one()) / (&y + Rat::one());
    let series = atanh_enclosure(&z, 24);
    let series = Enclosure { lo: series.lo * rat(2, 1), hi: series.hi * rat(2, 1) };
    let ln2 = ln2_enclosure();
    let mr = rat(m, 1);
    let (mlo, mhi) = if m >= 0 {
        (&mr * &ln2.lo, &mr * &ln2.hi)
    } else {
        (&mr * &ln2.hi, &mr * &ln2.lo)
    };
    Ok(Enclosure { lo: mlo + series.lo, hi: mhi + series.hi })
}

/// Rational upper bound on sqrt(x) for x >= 0 (tight to ~2^-40).
pub fn sqrt_upper(x: &Rat) -> Result<Rat> {
    if x.is_negative() {
        return Err(Error::Domain("sqrt of negative value".into()));
    }
    if x.is_zero() {
        return Ok(Rat::zero());
    }
    let scale = BigInt::from(1u128 << 40);
    let scaled = (x * Rat::from_integer(&scale * &scale)).floor().to_integer();
    Ok(Rat::new(scaled.sqrt() + 1, scale))
}

/// SplitMix64; used to derive independent per-branch RNG streams from a
/// single user-facing seed: `stream(seed, tag) = splitmix64(seed ^ splitmix64(tag))`.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    splitmix64(seed ^ splitmix64(tag))
}

/// Largest power table for exact geometric bucketing: holds base^(2^j).
/// `index_of` returns the unique l with base^l <= w < base^(l+1).
pub struct PowerTable {
    base: Rat,
    pows: Vec<Rat>,
}

impl PowerTable {
    /// `base` must be > 1.
    pub fn new(base: Rat) -> Result<Self> {
        if base <= Rat::one() {
            return Err(Error::Domain("power table base must exceed 1".into()));
        }
        Ok(PowerTable { base, pows: Vec::new() })
    }

    fn grow_to_cover(&mut self, w: &Rat) {
        if self.pows.is_empty() {
            self.pows.push(self.base.clone());
        }
        while self.pows.last().unwrap() <= w {
            let last = self.pows.last().unwrap();
            let sq = last * last;
            self.pows.push(sq);
        }
    }

    /// Exact bucket index for w >= 1: largest l with base^l <= w.
    pub fn index_of(&mut self, w: &Rat) -> u64 {
        debug_assert!(*w >= Rat::one());
        self.grow_to_cover(w);
        let mut acc = Rat::one();
        let mut idx: u64 = 0;
        for j in (0..self.pows.len()).rev() {
            let cand = &acc * &self.pows[j];
            if cand <= *w {
                acc = cand;
                idx += 1 << j;
            }
        }
        idx
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_format_roundtrip() {
        for s in ["3/5", "1/2", "7", "0", "12/8"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(parse_rat(&format_rat(&r)).unwrap(), r);
        }
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn ln2_is_certified() {
        let e = ln2_enclosure();
        let v = 0.6931471805599453;
        assert!(rat_to_f64(&e.lo) <= v && v <= rat_to_f64(&e.hi));
        assert!(rat_to_f64(&(&e.hi - &e.lo)) < 1e-20);
    }

    #[test]
    fn ln_enclosure_various() {
        for (x, v) in [(rat(3, 4), -0.2876820724517809), (rat(2, 1), 0.6931471805599453), (rat(97054, 100000), -0.029902661354313482), (rat(10, 1), 2.302585092994046)] {
            let e = ln_enclosure(&x).unwrap();
            // The f64 reference is itself only accurate to ~1e-16.
            assert!(rat_to_f64(&e.lo) - 1e-12 <= v && v <= rat_to_f64(&e.hi) + 1e-12, "{x:?}");
            assert!(rat_to_f64(&(&e.hi - &e.lo)) < 1e-15);
        }
        assert!(ln_enclosure(&rat(0, 1)).is_err());
    }

    #[test]
    fn sqrt_upper_bounds() {
        for (p, q) in [(2i64, 1i64), (1, 100), (149, 100000), (0, 1)] {
            let x = rat(p, q);
            let u = sqrt_upper(&x).unwrap();
            assert!(&u * &u >= x);
            if p > 0 {
                let v = rat_to_f64(&x).sqrt();
                assert!(rat_to_f64(&u) - v < 1e-9);
            }
        }
    }

    #[test]
    fn power_table_buckets() {
        // base 2: index_of(5) = 2, index_of(17) = 4, index_of(1) = 0.
        let mut t = PowerTable::new(rat(2, 1)).unwrap();
        assert_eq!(t.index_of(&rat(5, 1)), 2);
        assert_eq!(t.index_of(&rat(17, 1)), 4);
        assert_eq!(t.index_of(&rat(1, 1)), 0);
        assert_eq!(t.index_of(&rat(16, 1)), 4);
        assert_eq!(t.index_of(&rat(15, 1)), 3);
    }

    #[test]
    fn seed_derivation_is_stable() {
        assert_eq!(derive_seed(7, 0), derive_seed(7, 0));
        assert_ne!(derive_seed(7, 0), derive_seed(7, 1));
        assert_ne!(derive_seed(7, 0), derive_seed(8, 0));
    }
}
