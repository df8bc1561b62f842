//! Payload ciphers, MACs, the H′ key-derivation hash and entry-point AEADs.
//!
//! Every key used here is fresh per PURB, so all nonces and IVs are zero.

use aes_gcm::aead::Aead;
use aes_gcm::{Aes128Gcm, Aes256Gcm, KeyInit};
use chacha20::cipher::{KeyIvInit, StreamCipher};
use chacha20poly1305::ChaCha20Poly1305;
use hmac::{Hmac, Mac};
use sha2::{Digest, Sha256, Sha384};

use crate::suite::EntryAead;

type Aes256Ctr = ctr::Ctr128BE<aes::Aes256>;

/// Stream cipher for the payload (no tag; the whole-blob MAC covers it).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PayloadScheme {
    #[default]
    ChaCha20 = 0x01,
    Aes256Ctr = 0x02,
}

impl PayloadScheme {
    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            0x01 => Some(PayloadScheme::ChaCha20),
            0x02 => Some(PayloadScheme::Aes256Ctr),
            _ => None,
        }
    }

    /// Longest payload the keystream covers with a zero nonce.
    pub fn max_len(self) -> u64 {
        match self {
            // 32-bit block counter of 64-byte blocks
            PayloadScheme::ChaCha20 => (1u64 << 32) * 64,
            PayloadScheme::Aes256Ctr => u64::MAX,
        }
    }

    /// Encrypts or decrypts in place.
    pub fn apply(self, key: &[u8; 32], data: &mut [u8]) {
        match self {
            PayloadScheme::ChaCha20 => {
                let mut c = chacha20::ChaCha20::new(key.into(), &[0u8; 12].into());
                c.apply_keystream(data);
            }
            PayloadScheme::Aes256Ctr => {
                let mut c = Aes256Ctr::new(key.into(), &[0u8; 16].into());
                c.apply_keystream(data);
            }
        }
    }
}

/// MAC over the whole blob.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MacScheme {
    #[default]
    HmacSha256 = 0x01,
    HmacSha384 = 0x02,
}

impl MacScheme {
    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            0x01 => Some(MacScheme::HmacSha256),
            0x02 => Some(MacScheme::HmacSha384),
            _ => None,
        }
    }

    pub fn tag_len(self) -> usize {
        match self {
            MacScheme::HmacSha256 => 32,
            MacScheme::HmacSha384 => 48,
        }
    }

    pub fn tag(self, key: &[u8], data: &[u8]) -> Vec<u8> {
        match self {
            MacScheme::HmacSha256 => {
                let mut m = <Hmac<Sha256> as KeyInit>::new_from_slice(key).expect("any key length");
                m.update(data);
                m.finalize().into_bytes().to_vec()
            }
            MacScheme::HmacSha384 => {
                let mut m = <Hmac<Sha384> as KeyInit>::new_from_slice(key).expect("any key length");
                m.update(data);
                m.finalize().into_bytes().to_vec()
            }
        }
    }

    /// Constant-time tag check.
    pub fn verify(self, key: &[u8], data: &[u8], tag: &[u8]) -> bool {
        match self {
            MacScheme::HmacSha256 => {
                let mut m = <Hmac<Sha256> as KeyInit>::new_from_slice(key).expect("any key length");
                m.update(data);
                m.verify_slice(tag).is_ok()
            }
            MacScheme::HmacSha384 => {
                let mut m = <Hmac<Sha384> as KeyInit>::new_from_slice(key).expect("any key length");
                m.update(data);
                m.verify_slice(tag).is_ok()
            }
        }
    }
}

/// H′, used for `K_enc = H′("enc" ‖ K)` and `K_mac = H′("mac" ‖ K)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum HashPrime {
    #[default]
    Sha256 = 0x01,
    /// SHA-384 truncated to 32 bytes.
    Sha384Trunc = 0x02,
}

impl HashPrime {
    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            0x01 => Some(HashPrime::Sha256),
            0x02 => Some(HashPrime::Sha384Trunc),
            _ => None,
        }
    }

    pub fn derive(self, label: &[u8], key: &[u8]) -> [u8; 32] {
        let mut out = [0u8; 32];
        match self {
            HashPrime::Sha256 => {
                out.copy_from_slice(
                    &Sha256::new()
                        .chain_update(label)
                        .chain_update(key)
                        .finalize(),
                );
            }
            HashPrime::Sha384Trunc => {
                let d = Sha384::new()
                    .chain_update(label)
                    .chain_update(key)
                    .finalize();
                out.copy_from_slice(&d[..32]);
            }
        }
        out
    }
}

/// Seals an entry point. `key` must be `aead.key_len()` bytes.
pub(crate) fn aead_seal(aead: EntryAead, key: &[u8], plaintext: &[u8]) -> Vec<u8> {
    let res = match aead {
        EntryAead::Aes128Gcm => Aes128Gcm::new_from_slice(key)
            .expect("key length")
            .encrypt(&Default::default(), plaintext),
        EntryAead::Aes256Gcm => Aes256Gcm::new_from_slice(key)
            .expect("key length")
            .encrypt(&Default::default(), plaintext),
        EntryAead::ChaCha20Poly1305 => ChaCha20Poly1305::new_from_slice(key)
            .expect("key length")
            .encrypt(&Default::default(), plaintext),
    };
    res.expect("entry points are short")
}

/// Opens an entry point; `None` on any authentication failure.
pub(crate) fn aead_open(aead: EntryAead, key: &[u8], ciphertext: &[u8]) -> Option<Vec<u8>> {
    match aead {
        EntryAead::Aes128Gcm => Aes128Gcm::new_from_slice(key)
            .ok()?
            .decrypt(&Default::default(), ciphertext),
        EntryAead::Aes256Gcm => Aes256Gcm::new_from_slice(key)
            .ok()?
            .decrypt(&Default::default(), ciphertext),
        EntryAead::ChaCha20Poly1305 => ChaCha20Poly1305::new_from_slice(key)
            .ok()?
            .decrypt(&Default::default(), ciphertext),
    }
    .ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_ciphers_invert() {
        for s in [PayloadScheme::ChaCha20, PayloadScheme::Aes256Ctr] {
            let key = [9u8; 32];
            let mut data = b"attack at dawn".to_vec();
            s.apply(&key, &mut data);
            assert_ne!(&data, b"attack at dawn");
            s.apply(&key, &mut data);
            assert_eq!(&data, b"attack at dawn");
        }
    }

    #[test]
    fn chacha20_zero_key_vector() {
        // first keystream bytes for an all-zero key and nonce
        let mut data = [0u8; 16];
        PayloadScheme::ChaCha20.apply(&[0u8; 32], &mut data);
        assert_eq!(hex::encode(data), "76b8e0ada0f13d90405d6ae55386bd28");
    }

    #[test]
    fn hmac_rfc4231_case_2() {
        let tag = MacScheme::HmacSha256.tag(b"Jefe", b"what do ya want for nothing?");
        assert_eq!(
            hex::encode(&tag),
            "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843"
        );
        assert!(MacScheme::HmacSha256.verify(b"Jefe", b"what do ya want for nothing?", &tag));
        assert!(!MacScheme::HmacSha256.verify(b"Jeff", b"what do ya want for nothing?", &tag));
        assert_eq!(MacScheme::HmacSha384.tag(b"k", b"m").len(), 48);
    }

    #[test]
    fn ids_round_trip() {
        for s in [PayloadScheme::ChaCha20, PayloadScheme::Aes256Ctr] {
            assert_eq!(PayloadScheme::from_id(s.id()), Some(s));
        }
        for m in [MacScheme::HmacSha256, MacScheme::HmacSha384] {
            assert_eq!(MacScheme::from_id(m.id()), Some(m));
        }
        for h in [HashPrime::Sha256, HashPrime::Sha384Trunc] {
            assert_eq!(HashPrime::from_id(h.id()), Some(h));
        }
        assert_eq!(PayloadScheme::from_id(0), None);
        assert_eq!(MacScheme::from_id(3), None);
        assert_eq!(HashPrime::from_id(0xff), None);
    }

    #[test]
    fn aeads_seal_and_open() {
        for aead in [
            EntryAead::Aes128Gcm,
            EntryAead::Aes256Gcm,
            EntryAead::ChaCha20Poly1305,
        ] {
            let key = vec![5u8; aead.key_len()];
            let ct = aead_seal(aead, &key, &[1u8; 48]);
            assert_eq!(ct.len(), 64);
            assert_eq!(aead_open(aead, &key, &ct).unwrap(), vec![1u8; 48]);
            let mut other = key.clone();
            other[0] ^= 1;
            assert!(aead_open(aead, &other, &ct).is_none());
            assert!(aead_open(aead, &key, &ct[..63]).is_none());
        }
    }
}
