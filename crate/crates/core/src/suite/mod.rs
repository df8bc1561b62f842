//! Cipher suites, hidden key generation, the header KEM and the password path.

mod elligator2;
mod elligator_squared;
mod field;
mod group;

use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::sync::LazyLock;

use rand_core::CryptoRng;
use sha2::{Digest, Sha256, Sha384};
use zeroize::{Zeroize, ZeroizeOnDrop};

pub use group::{GroupKind, PublicKey, SecretKey};

/// Length of every ephemeral secret, entry-point key source and session key.
pub const SECRET_LEN: usize = 32;

/// Plaintext length of an entry point: 32-byte session key plus 16-byte meta.
pub const ENTRY_POINT_PLAINTEXT_LEN: usize = 48;

const PREFIX_H: &[u8] = b"purb-H";
const PREFIX_H_HAT: &[u8] = "purb-Ĥ".as_bytes();

/// Numeric suite identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SuiteId(pub u8);

/// AEAD used to seal entry points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntryAead {
    Aes128Gcm,
    Aes256Gcm,
    ChaCha20Poly1305,
}

impl EntryAead {
    pub const fn key_len(self) -> usize {
        match self {
            EntryAead::Aes128Gcm => 16,
            EntryAead::Aes256Gcm | EntryAead::ChaCha20Poly1305 => 32,
        }
    }

    pub const fn tag_len(self) -> usize {
        16
    }
}

/// Hash function behind H and Ĥ. Both are used with distinct prefixes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteHash {
    Sha256,
    /// SHA-384 truncated to 32 bytes.
    Sha384Trunc,
}

impl SuiteHash {
    fn digest(self, parts: &[&[u8]]) -> [u8; SECRET_LEN] {
        let mut out = [0u8; SECRET_LEN];
        match self {
            SuiteHash::Sha256 => {
                let mut h = Sha256::new();
                for p in parts {
                    h.update(p);
                }
                out.copy_from_slice(&h.finalize());
            }
            SuiteHash::Sha384Trunc => {
                let mut h = Sha384::new();
                for p in parts {
                    h.update(p);
                }
                out.copy_from_slice(&h.finalize()[..SECRET_LEN]);
            }
        }
        out
    }
}

/// scrypt parameters of a password suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KdfParams {
    pub log_n: u8,
    pub r: u32,
    pub p: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteKind {
    PublicKey(GroupKind),
    Password(KdfParams),
}

/// A cipher suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteSpec {
    pub id: SuiteId,
    /// Short name used on the command line ("A".."F", "pw").
    pub alias: &'static str,
    pub name: &'static str,
    pub order_index: u16,
    pub kind: SuiteKind,
    /// Length of a hidden public key, or of the salt for password suites.
    pub encoded_key_len: usize,
    pub ep_aead: EntryAead,
    pub ep_tag_len: usize,
    pub hash_kem: SuiteHash,
    pub hash_derive: SuiteHash,
    pub allowed_positions: Vec<usize>,
}

impl SuiteSpec {
    pub fn group(&self) -> Option<GroupKind> {
        match self.kind {
            SuiteKind::PublicKey(g) => Some(g),
            SuiteKind::Password(_) => None,
        }
    }

    pub fn is_password(&self) -> bool {
        matches!(self.kind, SuiteKind::Password(_))
    }

    /// Entry-point ciphertext length.
    pub fn entry_point_len(&self) -> usize {
        ENTRY_POINT_PLAINTEXT_LEN + self.ep_tag_len
    }

    /// Start of the suite's first hash table: just past its first allowed position.
    pub fn table_base(&self) -> usize {
        self.allowed_positions[0] + self.encoded_key_len
    }

    /// Byte ranges of every allowed position.
    pub fn position_ranges(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.allowed_positions
            .iter()
            .map(move |&p| p..p + self.encoded_key_len)
    }

    /// Allowed positions whose full range fits inside a blob of `len` bytes.
    pub fn positions_in_range(&self, len: usize) -> impl Iterator<Item = usize> + '_ {
        self.allowed_positions
            .iter()
            .copied()
            .filter(move |&p| p + self.encoded_key_len <= len)
    }

    fn validate(&self) -> Result<(), RegistryError> {
        let bad = |why: &'static str| RegistryError::InvalidSuite {
            alias: self.alias,
            why,
        };
        if self.encoded_key_len == 0 {
            return Err(bad("encoded_key_len must be positive"));
        }
        if self.ep_tag_len == 0 {
            return Err(bad("ep_tag_len must be positive"));
        }
        if self.allowed_positions.first() != Some(&0) {
            return Err(bad("allowed positions must start at 0"));
        }
        if self
            .allowed_positions
            .windows(2)
            .any(|w| w[1] < w[0] + self.encoded_key_len)
        {
            return Err(bad("allowed positions must increase without overlapping"));
        }
        if let Some(g) = self.group() {
            if g.encoded_len() != self.encoded_key_len {
                return Err(bad("encoded_key_len does not match the group encoding"));
            }
        }
        if self.ep_tag_len != self.ep_aead.tag_len() {
            return Err(bad("ep_tag_len does not match the AEAD"));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RegistryError {
    #[error("suite {alias}: {why}")]
    InvalidSuite {
        alias: &'static str,
        why: &'static str,
    },
    #[error("duplicate suite id or order index for {0}")]
    Duplicate(&'static str),
    #[error("suite {0} has no position clear of the suites ordered before it")]
    Unplaceable(&'static str),
}

/// An immutable, canonically ordered set of suites.
#[derive(Clone, Debug)]
pub struct Registry {
    suites: Vec<SuiteSpec>,
}

impl Registry {
    /// Validates and sorts `suites` by order index.
    ///
    /// Besides per-suite checks this requires every suite to own at least one
    /// position disjoint from all positions of the suites ordered before it, which
    /// makes every subset of the registry placeable.
    pub fn new(mut suites: Vec<SuiteSpec>) -> Result<Self, RegistryError> {
        suites.sort_by_key(|s| s.order_index);
        for (i, s) in suites.iter().enumerate() {
            s.validate()?;
            if suites[..i]
                .iter()
                .any(|t| t.id == s.id || t.order_index == s.order_index || t.alias == s.alias)
            {
                return Err(RegistryError::Duplicate(s.alias));
            }
            let earlier: Vec<Range<usize>> = suites[..i]
                .iter()
                .flat_map(|t| t.position_ranges())
                .collect();
            let placeable = s
                .position_ranges()
                .any(|r| earlier.iter().all(|e| e.end <= r.start || r.end <= e.start));
            if !placeable {
                return Err(RegistryError::Unplaceable(s.alias));
            }
        }
        Ok(Registry { suites })
    }

    /// The built-in registry: suites A to F plus one password suite.
    pub fn standard() -> &'static Registry {
        static STANDARD: LazyLock<Registry> = LazyLock::new(|| {
            Registry::new(registry_default()).expect("built-in registry is valid")
        });
        &STANDARD
    }

    pub fn suites(&self) -> &[SuiteSpec] {
        &self.suites
    }

    pub fn get(&self, id: SuiteId) -> Option<&SuiteSpec> {
        self.suites.iter().find(|s| s.id == id)
    }

    /// Case-insensitive alias lookup.
    pub fn by_alias(&self, alias: &str) -> Option<&SuiteSpec> {
        self.suites
            .iter()
            .find(|s| s.alias.eq_ignore_ascii_case(alias))
    }

    /// Every position range of every suite.
    pub fn all_position_ranges(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.suites.iter().flat_map(|s| s.position_ranges())
    }
}

/// scrypt cost of the built-in password suite (N = 2^14, r = 8, p = 1).
pub const DEFAULT_KDF: KdfParams = KdfParams {
    log_n: 14,
    r: 8,
    p: 1,
};

/// Suites A to F and the password suite, in canonical order.
pub fn registry_default() -> Vec<SuiteSpec> {
    let pk = |id: u8,
              alias: &'static str,
              name: &'static str,
              group: GroupKind,
              aead: EntryAead,
              hash: SuiteHash,
              positions: &[usize]| SuiteSpec {
        id: SuiteId(id),
        alias,
        name,
        order_index: u16::from(id) - 1,
        kind: SuiteKind::PublicKey(group),
        encoded_key_len: group.encoded_len(),
        ep_aead: aead,
        ep_tag_len: aead.tag_len(),
        hash_kem: hash,
        hash_derive: hash,
        allowed_positions: positions.to_vec(),
    };
    use EntryAead::*;
    use GroupKind::*;
    use SuiteHash::*;
    vec![
        pk(
            1,
            "A",
            "PURB.AES.128.GCM.SHA.256.SECP256R1",
            P256,
            Aes128Gcm,
            Sha256,
            &[0],
        ),
        pk(
            2,
            "B",
            "PURB.AES.128.GCM.SHA.256.X25519",
            Curve25519,
            Aes128Gcm,
            Sha256,
            &[0, 64],
        ),
        pk(
            3,
            "C",
            "PURB.AES.256.GCM.SHA.384.SECP256R1",
            P256,
            Aes256Gcm,
            Sha384Trunc,
            &[0, 96],
        ),
        pk(
            4,
            "D",
            "PURB.AES.256.GCM.SHA.384.X25519",
            Curve25519,
            Aes256Gcm,
            Sha384Trunc,
            &[0, 32, 64, 160],
        ),
        pk(
            5,
            "E",
            "PURB.CHACHA20.POLY1305.SHA.256.SECP256R1",
            P256,
            ChaCha20Poly1305,
            Sha256,
            &[0, 64, 128, 192],
        ),
        pk(
            6,
            "F",
            "PURB.CHACHA20.POLY1305.SHA.256.X25519",
            Curve25519,
            ChaCha20Poly1305,
            Sha256,
            &[0, 32, 64, 96, 128, 256],
        ),
        SuiteSpec {
            id: SuiteId(7),
            alias: "pw",
            name: "PURB.CHACHA20.POLY1305.SHA.256.SCRYPT",
            order_index: 6,
            kind: SuiteKind::Password(DEFAULT_KDF),
            encoded_key_len: 32,
            ep_aead: ChaCha20Poly1305,
            ep_tag_len: ChaCha20Poly1305.tag_len(),
            hash_kem: Sha256,
            hash_derive: Sha256,
            // A-F together cover [0, 288), so the salt needs a slot past them.
            allowed_positions: vec![0, 32, 288],
        },
    ]
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SuiteError {
    #[error("suite {0} is not a public-key suite")]
    NotPublicKey(&'static str),
    #[error("suite {0} is not a password suite")]
    NotPassword(&'static str),
    #[error("key belongs to a different group than suite {0}")]
    GroupMismatch(&'static str),
    #[error("expected {expected} bytes, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("no recipients given")]
    NoRecipients,
    #[error("invalid key encoding")]
    BadKey,
    #[error("key derivation failed")]
    Kdf,
}

/// A 32-byte ephemeral secret `k = H(Y^x)` or a password-derived secret.
#[derive(Clone, PartialEq, Eq, Zeroize, ZeroizeOnDrop)]
pub struct EphemeralSecret([u8; SECRET_LEN]);

impl EphemeralSecret {
    pub fn from_bytes(bytes: [u8; SECRET_LEN]) -> Self {
        EphemeralSecret(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; SECRET_LEN] {
        &self.0
    }
}

impl fmt::Debug for EphemeralSecret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("EphemeralSecret(..)")
    }
}

/// H: hashes a shared group element to an ephemeral secret.
pub fn hash_kem(suite: &SuiteSpec, shared: &[u8]) -> EphemeralSecret {
    EphemeralSecret(suite.hash_kem.digest(&[PREFIX_H, shared]))
}

/// Ĥ: derives sub-keys from an ephemeral secret (`label ‖ input`).
pub fn hash_derive(suite: &SuiteSpec, label: &[u8], input: &[u8]) -> [u8; SECRET_LEN] {
    suite.hash_derive.digest(&[PREFIX_H_HAT, label, input])
}

/// A key pair whose public key has a uniform encoding.
#[derive(Clone, Debug)]
pub struct KeyPair {
    pub suite: SuiteId,
    pub sk: SecretKey,
    pub pk: PublicKey,
    pub pk_encoded: Vec<u8>,
}

/// Generates a key pair with an encodable public key, resampling as needed.
pub fn keygen_hidden<R: CryptoRng + ?Sized>(
    suite: &SuiteSpec,
    rng: &mut R,
) -> Result<KeyPair, SuiteError> {
    keygen_hidden_counted(suite, rng).map(|(kp, _)| kp)
}

/// Like [`keygen_hidden`], also returning how many key pairs were sampled.
pub fn keygen_hidden_counted<R: CryptoRng + ?Sized>(
    suite: &SuiteSpec,
    rng: &mut R,
) -> Result<(KeyPair, u32), SuiteError> {
    let group = suite.group().ok_or(SuiteError::NotPublicKey(suite.alias))?;
    let mut attempts = 0u32;
    loop {
        attempts += 1;
        let (sk, pk) = group.sample(rng);
        if let Some(pk_encoded) = pk.hide(rng) {
            let kp = KeyPair {
                suite: suite.id,
                sk,
                pk,
                pk_encoded,
            };
            return Ok((kp, attempts));
        }
    }
}

/// Output of [`hdr_encap`].
#[derive(Debug)]
pub struct Encapsulation {
    /// Hidden ephemeral public key.
    pub tau: Vec<u8>,
    /// One secret per recipient, in input order.
    pub keys: Vec<EphemeralSecret>,
    /// Ephemeral key pairs sampled before one was encodable.
    pub ephemeral_attempts: u32,
}

/// Encapsulates one ephemeral key to every recipient of a suite.
pub fn hdr_encap<R: CryptoRng + ?Sized>(
    recipient_pks: &[PublicKey],
    suite: &SuiteSpec,
    rng: &mut R,
) -> Result<Encapsulation, SuiteError> {
    let group = suite.group().ok_or(SuiteError::NotPublicKey(suite.alias))?;
    if recipient_pks.is_empty() {
        return Err(SuiteError::NoRecipients);
    }
    if recipient_pks.iter().any(|pk| pk.group() != group) {
        return Err(SuiteError::GroupMismatch(suite.alias));
    }
    let (eph, ephemeral_attempts) = keygen_hidden_counted(suite, rng)?;
    let keys = recipient_pks
        .iter()
        .map(|pk| {
            let shared = eph.sk.diffie_hellman(pk).expect("groups checked above");
            hash_kem(suite, &shared)
        })
        .collect();
    Ok(Encapsulation {
        tau: eph.pk_encoded,
        keys,
        ephemeral_attempts,
    })
}

/// Recovers the ephemeral secret from a hidden ephemeral key. Any `tau` of the
/// right length yields some secret.
pub fn hdr_decap(
    sk: &SecretKey,
    suite: &SuiteSpec,
    tau: &[u8],
) -> Result<EphemeralSecret, SuiteError> {
    let group = suite.group().ok_or(SuiteError::NotPublicKey(suite.alias))?;
    if sk.group() != group {
        return Err(SuiteError::GroupMismatch(suite.alias));
    }
    let x = group.unhide(tau).ok_or(SuiteError::BadLength {
        expected: suite.encoded_key_len,
        got: tau.len(),
    })?;
    let shared = sk.diffie_hellman(&x).expect("groups checked above");
    Ok(hash_kem(suite, &shared))
}

/// Derives the secret of a password recipient with scrypt.
pub fn password_secret(
    suite: &SuiteSpec,
    salt: &[u8],
    passphrase: &[u8],
) -> Result<EphemeralSecret, SuiteError> {
    let SuiteKind::Password(kdf) = suite.kind else {
        return Err(SuiteError::NotPassword(suite.alias));
    };
    if salt.len() != suite.encoded_key_len {
        return Err(SuiteError::BadLength {
            expected: suite.encoded_key_len,
            got: salt.len(),
        });
    }
    let params = scrypt::Params::new(kdf.log_n, kdf.r, kdf.p).map_err(|_| SuiteError::Kdf)?;
    let mut out = [0u8; SECRET_LEN];
    scrypt::scrypt(passphrase, salt, &params, &mut out).map_err(|_| SuiteError::Kdf)?;
    Ok(EphemeralSecret(out))
}

/// Fresh salt for a password suite.
pub fn fresh_salt<R: CryptoRng + ?Sized>(suite: &SuiteSpec, rng: &mut R) -> Vec<u8> {
    let mut salt = vec![0u8; suite.encoded_key_len];
    rng.fill_bytes(&mut salt);
    salt
}

impl FromStr for SuiteId {
    type Err = SuiteError;

    /// Parses an alias of the standard registry.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Registry::standard()
            .by_alias(s.trim())
            .map(|spec| spec.id)
            .ok_or(SuiteError::BadKey)
    }
}

/// Parses a public key from its hidden encoding (binary or hex text).
pub fn parse_public_key(suite: &SuiteSpec, data: &[u8]) -> Result<PublicKey, SuiteError> {
    let group = suite.group().ok_or(SuiteError::NotPublicKey(suite.alias))?;
    let raw = decode_key_bytes(data, suite.encoded_key_len)?;
    group.unhide(&raw).ok_or(SuiteError::BadKey)
}

/// Parses a secret scalar (binary or hex text).
pub fn parse_secret_key(suite: &SuiteSpec, data: &[u8]) -> Result<SecretKey, SuiteError> {
    let group = suite.group().ok_or(SuiteError::NotPublicKey(suite.alias))?;
    let raw = decode_key_bytes(data, group.secret_len())?;
    SecretKey::from_bytes(group, &raw).ok_or(SuiteError::BadKey)
}

/// Accepts either exactly `len` raw bytes or `2 * len` hex digits (surrounding
/// whitespace allowed).
fn decode_key_bytes(data: &[u8], len: usize) -> Result<Vec<u8>, SuiteError> {
    if data.len() == len {
        return Ok(data.to_vec());
    }
    let text = std::str::from_utf8(data)
        .map_err(|_| SuiteError::BadKey)?
        .trim();
    let raw = hex::decode(text).map_err(|_| SuiteError::BadKey)?;
    if raw.len() != len {
        return Err(SuiteError::BadLength {
            expected: len,
            got: raw.len(),
        });
    }
    Ok(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::ChaCha20Rng;
    use rand::SeedableRng;

    fn suite(alias: &str) -> &'static SuiteSpec {
        Registry::standard().by_alias(alias).unwrap()
    }

    #[test]
    fn standard_registry_matches_tables() {
        let reg = Registry::standard();
        let got: Vec<(&str, usize, Vec<usize>)> = reg
            .suites()
            .iter()
            .map(|s| (s.alias, s.encoded_key_len, s.allowed_positions.clone()))
            .collect();
        assert_eq!(
            got,
            vec![
                ("A", 64, vec![0]),
                ("B", 32, vec![0, 64]),
                ("C", 64, vec![0, 96]),
                ("D", 32, vec![0, 32, 64, 160]),
                ("E", 64, vec![0, 64, 128, 192]),
                ("F", 32, vec![0, 32, 64, 96, 128, 256]),
                ("pw", 32, vec![0, 32, 288]),
            ]
        );
        assert!(reg.suites().iter().all(|s| s.entry_point_len() == 64));
    }

    #[test]
    fn registry_rejects_bad_suites() {
        let mut suites = registry_default();
        suites[1].allowed_positions = vec![0, 16];
        assert!(matches!(
            Registry::new(suites),
            Err(RegistryError::InvalidSuite { alias: "B", .. })
        ));

        let mut suites = registry_default();
        suites[1].order_index = 0;
        assert_eq!(
            Registry::new(suites).unwrap_err(),
            RegistryError::Duplicate("B")
        );

        // the password suite with only {0, 32} cannot avoid A..F
        let mut suites = registry_default();
        suites[6].allowed_positions = vec![0, 32];
        assert_eq!(
            Registry::new(suites).unwrap_err(),
            RegistryError::Unplaceable("pw")
        );
    }

    #[test]
    fn keygen_round_trips_through_unhide() {
        let mut rng = ChaCha20Rng::seed_from_u64(21);
        for alias in ["A", "B", "C", "D", "E", "F"] {
            let s = suite(alias);
            for _ in 0..10 {
                let kp = keygen_hidden(s, &mut rng).unwrap();
                assert_eq!(kp.pk_encoded.len(), s.encoded_key_len);
                assert_eq!(s.group().unwrap().unhide(&kp.pk_encoded).unwrap(), kp.pk);
            }
        }
    }

    #[test]
    fn keygen_is_deterministic_under_a_seed() {
        let s = suite("B");
        let a = keygen_hidden(s, &mut ChaCha20Rng::seed_from_u64(5)).unwrap();
        let b = keygen_hidden(s, &mut ChaCha20Rng::seed_from_u64(5)).unwrap();
        assert_eq!(a.pk_encoded, b.pk_encoded);
        assert_eq!(a.sk.to_bytes(), b.sk.to_bytes());
    }

    #[test]
    fn keygen_rejects_password_suite() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        assert!(keygen_hidden(suite("pw"), &mut rng).is_err());
    }

    #[test]
    fn encap_decap_agree() {
        let mut rng = ChaCha20Rng::seed_from_u64(22);
        for alias in ["A", "B", "C", "D", "E", "F"] {
            let s = suite(alias);
            let kps: Vec<KeyPair> = (0..3)
                .map(|_| keygen_hidden(s, &mut rng).unwrap())
                .collect();
            let pks: Vec<PublicKey> = kps.iter().map(|k| k.pk.clone()).collect();
            let enc = hdr_encap(&pks, s, &mut rng).unwrap();
            assert_eq!(enc.tau.len(), s.encoded_key_len);
            for (kp, k) in kps.iter().zip(&enc.keys) {
                assert_eq!(&hdr_decap(&kp.sk, s, &enc.tau).unwrap(), k);
            }
            assert_ne!(enc.keys[0], enc.keys[1]);
            let outsider = keygen_hidden(s, &mut rng).unwrap();
            assert_ne!(&hdr_decap(&outsider.sk, s, &enc.tau).unwrap(), &enc.keys[0]);
        }
    }

    #[test]
    fn decap_is_total() {
        let mut rng = ChaCha20Rng::seed_from_u64(23);
        for alias in ["A", "B"] {
            let s = suite(alias);
            let kp = keygen_hidden(s, &mut rng).unwrap();
            let zeros = vec![0u8; s.encoded_key_len];
            let ones = vec![0xffu8; s.encoded_key_len];
            assert!(hdr_decap(&kp.sk, s, &zeros).is_ok());
            assert!(hdr_decap(&kp.sk, s, &ones).is_ok());
        }
    }

    #[test]
    fn h_and_h_hat_differ() {
        let s = suite("B");
        let x = [7u8; 32];
        assert_ne!(hash_kem(s, &x).as_bytes(), &hash_derive(s, b"", &x));
        assert_ne!(
            hash_derive(s, b"key", &x),
            hash_derive(suite("D"), b"key", &x)
        );
    }

    #[test]
    fn password_secret_contract() {
        let s = suite("pw");
        let salt = [3u8; 32];
        let a = password_secret(s, &salt, b"hunter2").unwrap();
        assert_eq!(a, password_secret(s, &salt, b"hunter2").unwrap());
        let mut salt2 = salt;
        salt2[0] ^= 1;
        assert_ne!(a, password_secret(s, &salt2, b"hunter2").unwrap());
        assert!(password_secret(s, &salt, b"").is_ok());
        assert!(password_secret(s, &salt[..16], b"x").is_err());
        assert!(password_secret(suite("A"), &salt, b"x").is_err());
    }

    #[test]
    fn key_text_forms() {
        let mut rng = ChaCha20Rng::seed_from_u64(24);
        let s = suite("A");
        let kp = keygen_hidden(s, &mut rng).unwrap();
        let hex_pk = format!("{}\n", hex::encode(&kp.pk_encoded));
        assert_eq!(parse_public_key(s, hex_pk.as_bytes()).unwrap(), kp.pk);
        assert_eq!(parse_public_key(s, &kp.pk_encoded).unwrap(), kp.pk);
        let sk = parse_secret_key(s, hex::encode(kp.sk.to_bytes()).as_bytes()).unwrap();
        assert_eq!(sk.to_bytes(), kp.sk.to_bytes());
        assert!(parse_secret_key(s, b"zz").is_err());
        assert_eq!("b".parse::<SuiteId>().unwrap(), SuiteId(2));
        assert_eq!("PW".parse::<SuiteId>().unwrap(), SuiteId(7));
    }
}
