//! Elligator Squared over NIST P-256.
//!
//! A point P is represented by a pair of field elements `(u, v)` with
//! `f(u) + f(v) = P`, where `f` is the simplified SWU map. Encoding samples
//! `u` uniformly and then picks `v` uniformly among the preimages of
//! `P - f(u)`, accepting with probability `#preimages / 4`; the resulting
//! 64-byte strings are statistically close to uniform. Every 64-byte string
//! decodes to some group element.

use p256::elliptic_curve::group::Group;
use p256::elliptic_curve::sec1::{FromSec1Point, ToSec1Point};
use p256::{AffinePoint, ProjectivePoint};
use rand_core::CryptoRng;

use super::field::FeP256;

const CURVE_B: &str = "5ac635d8aa3a93e7b3ebbd55769886bc651d06b0cc53b0f63bce3c3e27d2604b";

pub(crate) const ENCODED_LEN: usize = 64;

struct Constants {
    a: FeP256,
    b: FeP256,
    z: FeP256,
    /// B / A
    b_over_a: FeP256,
    /// x1 for the exceptional input u = 0: B / (Z A)
    x1_exceptional: FeP256,
}

fn constants() -> Constants {
    let a = -FeP256::from_u64(3);
    let b = FeP256::from_be_hex(CURVE_B);
    let z = -FeP256::from_u64(10);
    let a_inv = a.invert().expect("A != 0");
    Constants {
        a,
        b,
        z,
        b_over_a: b * a_inv,
        x1_exceptional: b * (z * a).invert().expect("ZA != 0"),
    }
}

fn curve_rhs(c: &Constants, x: FeP256) -> FeP256 {
    x * x.square() + c.a * x + c.b
}

/// Simplified SWU map. Never returns the identity.
fn sswu(c: &Constants, u: FeP256) -> (FeP256, FeP256) {
    let zu2 = c.z * u.square();
    let tv = zu2.square() + zu2;
    let x1 = match tv.invert() {
        Some(tv_inv) => -c.b_over_a * (FeP256::one() + tv_inv),
        None => c.x1_exceptional,
    };
    let gx1 = curve_rhs(c, x1);
    let (x, mut y) = match gx1.sqrt() {
        Some(y1) => (x1, y1),
        None => {
            let x2 = zu2 * x1;
            let y2 = curve_rhs(c, x2)
                .sqrt()
                .expect("g(x2) is square when g(x1) is not");
            (x2, y2)
        }
    };
    if u.is_odd() != y.is_odd() {
        y = -y;
    }
    (x, y)
}

fn to_point(x: FeP256, y: FeP256) -> ProjectivePoint {
    let mut sec1 = [0u8; 65];
    sec1[0] = 0x04;
    sec1[1..33].copy_from_slice(&x.to_be_bytes());
    sec1[33..].copy_from_slice(&y.to_be_bytes());
    let affine = AffinePoint::from_sec1_bytes(&sec1).expect("map output lies on the curve");
    ProjectivePoint::from(affine)
}

fn coordinates(point: &ProjectivePoint) -> Option<(FeP256, FeP256)> {
    if bool::from(point.is_identity()) {
        return None;
    }
    let sec1 = point.to_affine().to_uncompressed_point();
    let x: [u8; 32] = sec1[1..33].try_into().ok()?;
    let y: [u8; 32] = sec1[33..65].try_into().ok()?;
    Some((FeP256::from_be_bytes(&x), FeP256::from_be_bytes(&y)))
}

/// Roots of `s^2 + b s + c = 0` (monic form) over the field.
fn quadratic_roots(b: FeP256, c: FeP256) -> Vec<FeP256> {
    let disc = b.square() - FeP256::from_u64(4) * c;
    let Some(root) = disc.sqrt() else {
        return Vec::new();
    };
    let half = FeP256::from_u64(2).invert().expect("2 != 0");
    vec![(-b + root) * half, (-b - root) * half]
}

/// All `u` with `sswu(u) = (x, y)`, in a deterministic order.
fn preimages(c: &Constants, x: FeP256, y: FeP256) -> Vec<FeP256> {
    // Candidate values for s = Z u^2, from both branches of the map.
    let mut s_candidates = Vec::with_capacity(4);
    let x_plus = x + c.b_over_a;
    // Branch 1: x = x1(u), with x1 = -(B/A)(1 + 1/(s^2 + s)).
    if let Some(inv) = x_plus.invert() {
        let tv = -c.b_over_a * inv;
        s_candidates.extend(quadratic_roots(FeP256::one(), -tv));
    }
    // Branch 2: x = s * x1(u), i.e. (B/A) s^2 + (x + B/A) s + (x + B/A) = 0.
    if let Some(lead_inv) = c.b_over_a.invert() {
        let coeff = x_plus * lead_inv;
        s_candidates.extend(quadratic_roots(coeff, coeff));
    }

    let z_inv = c.z.invert().expect("Z != 0");
    let mut candidates = vec![FeP256::zero()];
    for s in s_candidates {
        if let Some(u) = (s * z_inv).sqrt() {
            candidates.push(u);
            candidates.push(-u);
        }
    }

    let mut found: Vec<FeP256> = Vec::with_capacity(4);
    for u in candidates {
        if found.contains(&u) {
            continue;
        }
        if sswu(c, u) == (x, y) {
            found.push(u);
        }
    }
    found.sort_by_key(|u| u.to_be_bytes());
    found
}

fn random_field_element<R: CryptoRng + ?Sized>(rng: &mut R) -> FeP256 {
    loop {
        let mut bytes = [0u8; 32];
        rng.fill_bytes(&mut bytes);
        if let Some(fe) = FeP256::from_be_bytes_canonical(&bytes) {
            return fe;
        }
    }
}

/// Encodes a point as 64 bytes. Always succeeds; runs a few rejection rounds
/// on average.
pub(crate) fn hide<R: CryptoRng + ?Sized>(
    point: &ProjectivePoint,
    rng: &mut R,
) -> [u8; ENCODED_LEN] {
    let c = constants();
    loop {
        let u = random_field_element(rng);
        let (fx, fy) = sswu(&c, u);
        let rest = point - &to_point(fx, fy);
        let Some((qx, qy)) = coordinates(&rest) else {
            continue;
        };
        let pre = preimages(&c, qx, qy);
        let mut pick = [0u8; 1];
        rng.fill_bytes(&mut pick);
        if let Some(v) = pre.get(usize::from(pick[0] & 3)) {
            let mut out = [0u8; ENCODED_LEN];
            out[..32].copy_from_slice(&u.to_be_bytes());
            out[32..].copy_from_slice(&v.to_be_bytes());
            return out;
        }
    }
}

/// Decodes any 64-byte string to a group element (possibly the identity).
pub(crate) fn unhide(bytes: &[u8; ENCODED_LEN]) -> ProjectivePoint {
    let c = constants();
    let u: [u8; 32] = bytes[..32].try_into().expect("32 bytes");
    let v: [u8; 32] = bytes[32..].try_into().expect("32 bytes");
    let (ux, uy) = sswu(&c, FeP256::from_be_bytes(&u));
    let (vx, vy) = sswu(&c, FeP256::from_be_bytes(&v));
    to_point(ux, uy) + to_point(vx, vy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use p256::elliptic_curve::Field;
    use p256::Scalar;
    use rand::rngs::ChaCha20Rng;
    use rand::SeedableRng;

    #[test]
    fn sswu_lands_on_curve() {
        let c = constants();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..50 {
            let u = random_field_element(&mut rng);
            let (x, y) = sswu(&c, u);
            assert_eq!(y.square(), curve_rhs(&c, x));
            assert_eq!(u.is_odd(), y.is_odd());
        }
        let (x0, y0) = sswu(&c, FeP256::zero());
        assert_eq!(y0.square(), curve_rhs(&c, x0));
    }

    #[test]
    fn preimages_are_complete() {
        // Every u we feed in must be found again among the preimages of its image.
        let c = constants();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for _ in 0..100 {
            let u = random_field_element(&mut rng);
            let (x, y) = sswu(&c, u);
            let pre = preimages(&c, x, y);
            assert!(pre.contains(&u));
            assert!(pre.len() <= 4);
        }
        let (x0, y0) = sswu(&c, FeP256::zero());
        assert!(preimages(&c, x0, y0).contains(&FeP256::zero()));
    }

    #[test]
    fn hide_unhide_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..30 {
            let s = Scalar::random(&mut rng);
            let p = ProjectivePoint::GENERATOR * s;
            let enc = hide(&p, &mut rng);
            assert_eq!(unhide(&enc), p);
        }
    }

    #[test]
    fn unhide_is_total() {
        let _ = unhide(&[0u8; ENCODED_LEN]);
        let _ = unhide(&[0xff; ENCODED_LEN]);
    }
}
