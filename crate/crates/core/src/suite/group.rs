//! The two prime-order groups behind the public-key suites.

use curve25519_dalek::constants::EIGHT_TORSION;
use curve25519_dalek::montgomery::MontgomeryPoint;
use curve25519_dalek::EdwardsPoint;
use p256::elliptic_curve::group::Group;
use p256::elliptic_curve::sec1::ToSec1Point;
use p256::elliptic_curve::{Field, PrimeField};
use p256::ProjectivePoint;
use rand_core::CryptoRng;

use super::{elligator2, elligator_squared};

/// Group underlying a public-key suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// Curve25519 in Montgomery form, hidden with Elligator2 (32 bytes).
    Curve25519,
    /// NIST P-256, hidden with Elligator Squared (64 bytes).
    P256,
}

impl GroupKind {
    /// Length of a hidden group element.
    pub const fn encoded_len(self) -> usize {
        match self {
            GroupKind::Curve25519 => 32,
            GroupKind::P256 => elligator_squared::ENCODED_LEN,
        }
    }

    /// Length of a serialized secret scalar.
    pub const fn secret_len(self) -> usize {
        32
    }

    /// Samples a fresh key pair. The public key may or may not be encodable.
    pub(crate) fn sample<R: CryptoRng + ?Sized>(self, rng: &mut R) -> (SecretKey, PublicKey) {
        match self {
            GroupKind::Curve25519 => {
                let s = curve25519_dalek::Scalar::random(rng);
                let mut pick = [0u8; 1];
                rng.fill_bytes(&mut pick);
                // A random low-order component makes the u-coordinate range over
                // the whole curve; Diffie-Hellman clears it again (see `diffie_hellman`).
                let torsion = EIGHT_TORSION[usize::from(pick[0] & 7)];
                let point = EdwardsPoint::mul_base(&s) + torsion;
                (
                    SecretKey::Curve25519(s),
                    PublicKey::Curve25519(point.to_montgomery()),
                )
            }
            GroupKind::P256 => {
                let s = loop {
                    let s = p256::Scalar::random(rng);
                    if !bool::from(s.is_zero()) {
                        break s;
                    }
                };
                (
                    SecretKey::P256(s),
                    PublicKey::P256(ProjectivePoint::GENERATOR * s),
                )
            }
        }
    }

    /// Decodes any string of [`GroupKind::encoded_len`] bytes into a group element.
    pub fn unhide(self, bytes: &[u8]) -> Option<PublicKey> {
        match self {
            GroupKind::Curve25519 => {
                let repr: [u8; 32] = bytes.try_into().ok()?;
                Some(PublicKey::Curve25519(MontgomeryPoint(
                    elligator2::representative_to_u(&repr),
                )))
            }
            GroupKind::P256 => {
                let repr: [u8; 64] = bytes.try_into().ok()?;
                Some(PublicKey::P256(elligator_squared::unhide(&repr)))
            }
        }
    }
}

/// A secret scalar.
#[derive(Clone)]
pub enum SecretKey {
    Curve25519(curve25519_dalek::Scalar),
    P256(p256::Scalar),
}

impl core::fmt::Debug for SecretKey {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_tuple("SecretKey")
            .field(&self.group())
            .finish_non_exhaustive()
    }
}

impl SecretKey {
    pub fn group(&self) -> GroupKind {
        match self {
            SecretKey::Curve25519(_) => GroupKind::Curve25519,
            SecretKey::P256(_) => GroupKind::P256,
        }
    }

    /// Raw scalar bytes: little-endian for Curve25519, big-endian for P-256.
    pub fn to_bytes(&self) -> [u8; 32] {
        match self {
            SecretKey::Curve25519(s) => s.to_bytes(),
            SecretKey::P256(s) => {
                let mut out = [0u8; 32];
                out.copy_from_slice(&s.to_repr());
                out
            }
        }
    }

    /// Parses a canonical, non-zero scalar.
    pub fn from_bytes(group: GroupKind, bytes: &[u8]) -> Option<Self> {
        let raw: [u8; 32] = bytes.try_into().ok()?;
        match group {
            GroupKind::Curve25519 => {
                let s = Option::<curve25519_dalek::Scalar>::from(
                    curve25519_dalek::Scalar::from_canonical_bytes(raw),
                )?;
                (s != curve25519_dalek::Scalar::ZERO).then_some(SecretKey::Curve25519(s))
            }
            GroupKind::P256 => {
                let s = Option::<p256::Scalar>::from(p256::Scalar::from_repr(raw.into()))?;
                (!bool::from(s.is_zero())).then_some(SecretKey::P256(s))
            }
        }
    }

    /// Shared group element with `peer`, serialized for hashing.
    ///
    /// Curve25519 results are multiplied by the cofactor so that the random
    /// low-order components of both parties' keys cancel out.
    pub(crate) fn diffie_hellman(&self, peer: &PublicKey) -> Option<Vec<u8>> {
        match (self, peer) {
            (SecretKey::Curve25519(s), PublicKey::Curve25519(p)) => {
                let shared = (p * s).mul_bits_be([true, false, false, false].into_iter());
                Some(shared.to_bytes().to_vec())
            }
            (SecretKey::P256(s), PublicKey::P256(p)) => {
                let shared = p * s;
                Some(shared.to_affine().to_sec1_point(true).as_bytes().to_vec())
            }
            _ => None,
        }
    }
}

/// A group element (a recipient's or a sender's public key).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PublicKey {
    Curve25519(MontgomeryPoint),
    P256(ProjectivePoint),
}

impl PublicKey {
    pub fn group(&self) -> GroupKind {
        match self {
            PublicKey::Curve25519(_) => GroupKind::Curve25519,
            PublicKey::P256(_) => GroupKind::P256,
        }
    }

    /// Attempts a uniform encoding. Fails for about half of the Curve25519
    /// points; never fails for P-256.
    pub(crate) fn hide<R: CryptoRng + ?Sized>(&self, rng: &mut R) -> Option<Vec<u8>> {
        match self {
            PublicKey::Curve25519(p) => {
                elligator2::u_to_representative(&p.to_bytes(), rng).map(|r| r.to_vec())
            }
            PublicKey::P256(p) => Some(elligator_squared::hide(p, rng).to_vec()),
        }
    }

    /// True for the neutral element (only reachable for P-256 via Unhide).
    pub fn is_identity(&self) -> bool {
        match self {
            PublicKey::Curve25519(_) => false,
            PublicKey::P256(p) => bool::from(p.is_identity()),
        }
    }
}
