//! Prime-field arithmetic for the point-hiding maps.
//!
//! Neither curve crate exposes its base field, so the Elligator maps run on
//! top of `crypto-bigint` Montgomery forms. Only the handful of operations the
//! maps need are wrapped here.

use crypto_bigint::modular::{ConstMontyForm, ConstPrimeMontyParams};
use crypto_bigint::{const_prime_monty_params, U256};

const_prime_monty_params!(
    Curve25519Modulus,
    U256,
    "7fffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffed",
    2,
    "p = 2^255 - 19"
);

const_prime_monty_params!(
    P256Modulus,
    U256,
    "ffffffff00000001000000000000000000000000ffffffffffffffffffffffff",
    6,
    "p = 2^256 - 2^224 + 2^192 + 2^96 - 1"
);

const LIMBS: usize = U256::LIMBS;

/// An element of one of the two base fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Fe<M: ConstPrimeMontyParams<LIMBS>>(ConstMontyForm<M, LIMBS>);

pub(crate) type Fe25519 = Fe<Curve25519Modulus>;
pub(crate) type FeP256 = Fe<P256Modulus>;

impl<M: ConstPrimeMontyParams<LIMBS>> Fe<M> {
    pub(crate) fn zero() -> Self {
        Self(ConstMontyForm::ZERO)
    }

    pub(crate) fn one() -> Self {
        Self(ConstMontyForm::ONE)
    }

    pub(crate) fn from_u64(v: u64) -> Self {
        Self(ConstMontyForm::new(&U256::from_u64(v)))
    }

    /// Reduces an arbitrary 256-bit big-endian integer modulo p.
    pub(crate) fn from_be_bytes(bytes: &[u8; 32]) -> Self {
        Self::reduce(U256::from_be_slice(bytes))
    }

    /// Parses a big-endian integer, rejecting values `>= p`.
    pub(crate) fn from_be_bytes_canonical(bytes: &[u8; 32]) -> Option<Self> {
        let fe = Self::from_be_bytes(bytes);
        (fe.to_be_bytes() == *bytes).then_some(fe)
    }

    /// Reduces an arbitrary 256-bit little-endian integer modulo p.
    pub(crate) fn from_le_bytes(bytes: &[u8; 32]) -> Self {
        Self::reduce(U256::from_le_slice(bytes))
    }

    pub(crate) fn from_be_hex(hex: &str) -> Self {
        Self::reduce(U256::from_be_hex(hex))
    }

    fn reduce(n: U256) -> Self {
        let p = M::PARAMS.modulus().as_ref();
        // n < 2^256 < 2p for both moduli, so one conditional subtraction suffices.
        let (diff, borrow) = n.borrowing_sub(p, crypto_bigint::Limb::ZERO);
        let reduced = if borrow.0 != 0 { n } else { diff };
        Self(ConstMontyForm::new(&reduced))
    }

    pub(crate) fn to_be_bytes(self) -> [u8; 32] {
        let mut out = [0u8; 32];
        out.copy_from_slice(&self.0.retrieve().to_be_bytes());
        out
    }

    pub(crate) fn to_le_bytes(self) -> [u8; 32] {
        let mut out = [0u8; 32];
        out.copy_from_slice(&self.0.retrieve().to_le_bytes());
        out
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.0 == ConstMontyForm::ZERO
    }

    /// Parity of the canonical representative (`sgn0` for prime fields).
    pub(crate) fn is_odd(&self) -> bool {
        self.0.retrieve().is_odd().into()
    }

    /// True when the canonical representative exceeds (p - 1) / 2.
    pub(crate) fn is_negative(&self) -> bool {
        let v = self.0.retrieve();
        let p = M::PARAMS.modulus().as_ref();
        // v > (p - 1) / 2  <=>  2v >= p, with 2v taken over 257 bits.
        let top_bit_set: bool = v.bit(255).into();
        top_bit_set || v.wrapping_shl(1) >= *p
    }

    pub(crate) fn square(&self) -> Self {
        Self(self.0.square())
    }

    pub(crate) fn invert(&self) -> Option<Self> {
        Option::<ConstMontyForm<M, LIMBS>>::from(self.0.invert()).map(Self)
    }

    /// Square root, if one exists. Which of the two roots is returned is unspecified.
    pub(crate) fn sqrt(&self) -> Option<Self> {
        Option::<ConstMontyForm<M, LIMBS>>::from(self.0.sqrt()).map(Self)
    }

    /// True for zero and for non-zero quadratic residues.
    pub(crate) fn is_square(&self) -> bool {
        self.sqrt().is_some()
    }

    /// The root whose canonical representative is at most (p - 1) / 2.
    pub(crate) fn abs(self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self
        }
    }
}

impl<M: ConstPrimeMontyParams<LIMBS>> core::ops::Add for Fe<M> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl<M: ConstPrimeMontyParams<LIMBS>> core::ops::Sub for Fe<M> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl<M: ConstPrimeMontyParams<LIMBS>> core::ops::Mul for Fe<M> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

impl<M: ConstPrimeMontyParams<LIMBS>> core::ops::Neg for Fe<M> {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_squares() {
        for v in [2u64, 3, 5, 486662, 1 << 40] {
            let a = Fe25519::from_u64(v).square();
            let r = a.sqrt().expect("square has a root");
            assert_eq!(r.square(), a);
            let b = FeP256::from_u64(v).square();
            let s = b.sqrt().expect("square has a root");
            assert_eq!(s.square(), b);
        }
    }

    #[test]
    fn two_is_not_a_square_mod_25519() {
        assert!(!Fe25519::from_u64(2).is_square());
        assert!(Fe25519::zero().is_square());
    }

    #[test]
    fn reduction_and_sign() {
        let p_bytes = [
            0xed, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff,
            0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff,
            0xff, 0xff, 0xff, 0x7f,
        ];
        assert!(Fe25519::from_le_bytes(&p_bytes).is_zero());
        let minus_one = -Fe25519::one();
        assert!(minus_one.is_negative());
        assert!(!Fe25519::one().is_negative());
        assert_eq!(minus_one.abs(), Fe25519::one());
        let all_ff = [0xffu8; 32];
        let x = FeP256::from_be_bytes(&all_ff);
        // 2^256 - 1 - p = 2^224 - 2^192 - 2^96
        assert_eq!(
            x,
            FeP256::from_be_hex("00000000fffffffeffffffffffffffffffffffff000000000000000000000000")
        );
    }
}
