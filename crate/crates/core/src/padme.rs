//! Padding functions: Padmé, next power of two, fixed blocks, and none.
//!
//! Padmé keeps at most as many significant bits in the padded length as there
//! are bits in its exponent, so lengths up to `M` leak O(log log M) bits and
//! the overhead stays below 12%.

use std::fmt;
use std::str::FromStr;

/// Largest `M` accepted by [`leakage_bits`].
pub const LEAKAGE_MAX: u64 = 1 << 24;

/// A padding function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PadSpec {
    Padme,
    NextP2,
    /// Round up to a multiple of the block size (at least 1).
    FixedBlock(u64),
    None,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PadError {
    #[error("unknown padding '{0}' (expected padme, next2, block:<bytes> or none)")]
    Unknown(String),
    #[error("block size must be at least 1")]
    ZeroBlock,
    #[error("maximum length must be between 1 and {LEAKAGE_MAX}, got {0}")]
    RangeTooLarge(u64),
}

impl FromStr for PadSpec {
    type Err = PadError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "padme" => Ok(PadSpec::Padme),
            "next2" | "nextp2" => Ok(PadSpec::NextP2),
            "none" => Ok(PadSpec::None),
            other => {
                let b = other
                    .strip_prefix("block:")
                    .and_then(|b| b.parse::<u64>().ok())
                    .ok_or_else(|| PadError::Unknown(s.to_string()))?;
                if b == 0 {
                    return Err(PadError::ZeroBlock);
                }
                Ok(PadSpec::FixedBlock(b))
            }
        }
    }
}

impl fmt::Display for PadSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PadSpec::Padme => f.write_str("padme"),
            PadSpec::NextP2 => f.write_str("next2"),
            PadSpec::FixedBlock(b) => write!(f, "block:{b}"),
            PadSpec::None => f.write_str("none"),
        }
    }
}

/// Intermediate values of the Padmé computation for one length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PadmeParams {
    /// floor(log2 L)
    pub e: u32,
    /// floor(log2 E) + 1, the bit length of E
    pub s: u32,
    /// number of low bits cleared, max(0, E - S)
    pub z: u32,
    /// (1 << z) - 1
    pub mask: u64,
}

impl PadmeParams {
    /// Lengths 0 and 1 use E = 0, which gives z = 0.
    pub fn for_len(len: u64) -> Self {
        let e = if len <= 1 { 0 } else { len.ilog2() };
        let s = if e == 0 { 0 } else { e.ilog2() + 1 };
        let z = e.saturating_sub(s);
        PadmeParams {
            e,
            s,
            z,
            mask: (1u64 << z) - 1,
        }
    }
}

/// Padded length. Results that would not fit in a `u64` saturate.
pub fn pad_len(spec: PadSpec, len: u64) -> u64 {
    match spec {
        PadSpec::Padme => {
            let m = PadmeParams::for_len(len).mask;
            len.checked_add(m).map_or(u64::MAX, |v| v & !m)
        }
        PadSpec::NextP2 => {
            if len == 0 {
                0
            } else {
                len.checked_next_power_of_two().unwrap_or(u64::MAX)
            }
        }
        PadSpec::FixedBlock(b) => {
            let b = b.max(1);
            len.div_ceil(b).saturating_mul(b)
        }
        PadSpec::None => len,
    }
}

/// True when `len` is a length the padding function can output.
pub fn is_fixed_point(spec: PadSpec, len: u64) -> bool {
    pad_len(spec, len) == len
}

/// Bits needed to name a padded length among all outputs for inputs `1..=max`.
pub fn leakage_bits(spec: PadSpec, max: u64) -> Result<u32, PadError> {
    if max == 0 || max > LEAKAGE_MAX {
        return Err(PadError::RangeTooLarge(max));
    }
    // Every padding function here is monotone, so distinct outputs are runs.
    let mut distinct = 0u64;
    let mut prev = None;
    for len in 1..=max {
        let out = pad_len(spec, len);
        if prev != Some(out) {
            distinct += 1;
            prev = Some(out);
        }
    }
    Ok(ceil_log2(distinct))
}

fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        (n - 1).ilog2() + 1
    }
}

/// Padding overhead for one length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Overhead {
    /// Extra bytes added.
    pub additive: u64,
    /// Unpadded length, the denominator of the multiplicative overhead.
    pub len: u64,
}

impl Overhead {
    /// additive / len
    pub fn multiplicative(&self) -> f64 {
        self.additive as f64 / self.len as f64
    }
}

/// Overhead of padding `len` bytes (`len >= 1`).
pub fn overhead(spec: PadSpec, len: u64) -> Overhead {
    Overhead {
        additive: pad_len(spec, len) - len,
        len,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: walk upward to the first length whose mantissa (the
    /// bits after the leading one, up to the last one bit) is no longer than the
    /// bit length of its exponent.
    fn padme_scan(len: u64) -> u64 {
        let permitted = |c: u64| {
            if c <= 1 {
                return true;
            }
            let exp = 63 - c.leading_zeros();
            let exp_bits = 32 - exp.leading_zeros();
            let mantissa_bits = exp - c.trailing_zeros().min(exp);
            mantissa_bits <= exp_bits
        };
        (len..).find(|&c| permitted(c)).unwrap()
    }

    #[test]
    fn table_values() {
        assert_eq!(pad_len(PadSpec::Padme, 8), 8);
        assert_eq!(pad_len(PadSpec::Padme, 9), 10);
        assert_eq!(pad_len(PadSpec::Padme, 10), 10);
        assert_eq!(pad_len(PadSpec::Padme, 1), 1);
        assert_eq!(pad_len(PadSpec::Padme, 0), 0);
        assert_eq!(pad_len(PadSpec::Padme, 100), padme_scan(100));
        assert_eq!(pad_len(PadSpec::Padme, 100), 104);
        assert_eq!(pad_len(PadSpec::NextP2, 9), 16);
        assert_eq!(pad_len(PadSpec::FixedBlock(512), 513), 1024);
        assert_eq!(pad_len(PadSpec::None, 77), 77);
    }

    #[test]
    fn matches_scan_oracle() {
        for len in 0..70_000u64 {
            assert_eq!(pad_len(PadSpec::Padme, len), padme_scan(len), "L = {len}");
        }
    }

    #[test]
    fn params_for_known_lengths() {
        let p = PadmeParams::for_len(1024);
        assert_eq!((p.e, p.s, p.z, p.mask), (10, 4, 6, 63));
        let p = PadmeParams::for_len(9);
        assert_eq!((p.e, p.s, p.z, p.mask), (3, 2, 1, 1));
    }

    #[test]
    fn leakage_examples() {
        assert_eq!(leakage_bits(PadSpec::FixedBlock(512), 1 << 20), Ok(11));
        assert_eq!(leakage_bits(PadSpec::None, 100), Ok(7));
        assert_eq!(leakage_bits(PadSpec::NextP2, 1 << 20), Ok(5));
        assert!(leakage_bits(PadSpec::Padme, LEAKAGE_MAX + 1).is_err());
        assert!(leakage_bits(PadSpec::Padme, 0).is_err());
    }

    #[test]
    fn overhead_examples() {
        assert_eq!(
            overhead(PadSpec::Padme, 9),
            Overhead {
                additive: 1,
                len: 9
            }
        );
        assert_eq!(overhead(PadSpec::Padme, 8).additive, 0);
        assert!(overhead(PadSpec::Padme, 1024).additive <= 63);
    }

    #[test]
    fn spec_strings() {
        for s in ["padme", "next2", "block:512", "none"] {
            assert_eq!(s.parse::<PadSpec>().unwrap().to_string(), s);
        }
        assert_eq!("block:0".parse::<PadSpec>(), Err(PadError::ZeroBlock));
        assert!("block:x".parse::<PadSpec>().is_err());
        assert!("bogus".parse::<PadSpec>().is_err());
    }

    #[test]
    fn saturates_near_the_top() {
        assert_eq!(pad_len(PadSpec::Padme, u64::MAX), u64::MAX);
        assert_eq!(pad_len(PadSpec::NextP2, u64::MAX), u64::MAX);
        assert!(pad_len(PadSpec::FixedBlock(7), u64::MAX - 1) >= u64::MAX - 1);
    }

    proptest! {
        #[test]
        fn padme_is_idempotent_and_bounded(len in 2u64..(1 << 48)) {
            let p = PadmeParams::for_len(len);
            let out = pad_len(PadSpec::Padme, len);
            prop_assert!(out >= len);
            prop_assert_eq!(pad_len(PadSpec::Padme, out), out);
            prop_assert!(out - len < (1u64 << p.e.saturating_sub(p.s)));
        }

        #[test]
        fn all_specs_pad_upward(len in 0u64..(1 << 40), b in 1u64..100_000) {
            for spec in [PadSpec::Padme, PadSpec::NextP2, PadSpec::FixedBlock(b), PadSpec::None] {
                let out = pad_len(spec, len);
                prop_assert!(out >= len);
                prop_assert!(is_fixed_point(spec, out));
            }
        }

        #[test]
        fn monotone(a in 0u64..(1 << 40), d in 0u64..(1 << 20)) {
            prop_assert!(pad_len(PadSpec::Padme, a) <= pad_len(PadSpec::Padme, a + d));
        }
    }
}
