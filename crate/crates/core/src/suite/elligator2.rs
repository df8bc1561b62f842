//! Elligator2 on Curve25519 (Montgomery u-coordinates).
//!
//! Representatives are field elements in `[0, (p-1)/2]`, i.e. 254 bits. The
//! two spare high bits of the little-endian encoding are filled with random
//! bits on encode and ignored on decode, so every 32-byte string decodes to a
//! curve u-coordinate.
//!
//! Public keys carry a random low-order component (see [`super::group`]) so
//! that encodable keys are spread over the whole curve and not only the
//! prime-order subgroup.

use rand_core::CryptoRng;

use super::field::Fe25519;

const MONTGOMERY_A: u64 = 486662;

/// Maps any 32-byte string to a Curve25519 u-coordinate.
pub(crate) fn representative_to_u(repr: &[u8; 32]) -> [u8; 32] {
    let mut masked = *repr;
    masked[31] &= 0x3f;
    let r = Fe25519::from_le_bytes(&masked);
    map_to_u(r).to_le_bytes()
}

fn map_to_u(r: Fe25519) -> Fe25519 {
    let a = Fe25519::from_u64(MONTGOMERY_A);
    // 1 + 2r^2 is never zero: -1/2 is not a square mod p.
    let denom = Fe25519::one() + Fe25519::from_u64(2) * r.square();
    let w = -a * denom.invert().expect("1 + 2r^2 != 0");
    let rhs = w * w.square() + a * w.square() + w;
    if rhs.is_square() {
        w
    } else {
        -w - a
    }
}

/// Attempts to hide a u-coordinate. Succeeds for roughly half of all points.
///
/// Each encodable u has two non-negative representatives (one per sign of
/// v); one of them is picked at random, and the two spare top bits are
/// randomized.
pub(crate) fn u_to_representative<R: CryptoRng + ?Sized>(
    u_bytes: &[u8; 32],
    rng: &mut R,
) -> Option<[u8; 32]> {
    let a = Fe25519::from_u64(MONTGOMERY_A);
    let u = Fe25519::from_le_bytes(u_bytes);
    let u_plus_a = u + a;
    if u_plus_a.is_zero() {
        return None;
    }
    let two = Fe25519::from_u64(2);
    if !(-(two * u * u_plus_a)).is_square() {
        return None;
    }

    let mut coin = [0u8; 1];
    rng.fill_bytes(&mut coin);
    let use_first = u.is_zero() || coin[0] & 1 == 0;
    let r_squared = if use_first {
        -u * (two * u_plus_a).invert()?
    } else {
        -u_plus_a * (two * u).invert()?
    };
    let r = r_squared.sqrt()?.abs();
    debug_assert_eq!(map_to_u(r), u);

    let mut out = r.to_le_bytes();
    out[31] |= coin[0] & 0xc0;
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::ChaCha20Rng;
    use rand::SeedableRng;
    use rand_core::Rng;

    #[test]
    fn every_string_decodes() {
        for fill in [0x00u8, 0xff, 0x3f, 0xc0] {
            let u = representative_to_u(&[fill; 32]);
            assert_eq!(u.len(), 32);
        }
        // r = 0 maps to u = 0
        assert_eq!(representative_to_u(&[0u8; 32]), [0u8; 32]);
    }

    #[test]
    fn round_trip_random_representatives() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for _ in 0..200 {
            let mut repr = [0u8; 32];
            rng.fill_bytes(&mut repr);
            let u = representative_to_u(&repr);
            // any image of the map is encodable again, possibly as the other root
            let back = u_to_representative(&u, &mut rng).expect("image is encodable");
            assert_eq!(representative_to_u(&back), u);
        }
    }

    #[test]
    fn top_bits_are_ignored() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let mut repr = [0u8; 32];
        rng.fill_bytes(&mut repr);
        let base = representative_to_u(&repr);
        for top in [0x00u8, 0x40, 0x80, 0xc0] {
            let mut r = repr;
            r[31] = (r[31] & 0x3f) | top;
            assert_eq!(representative_to_u(&r), base);
        }
    }
}
