//! Encoding and decoding of PURBs.

mod schemes;

use std::fmt;

use rand_core::CryptoRng;
use zeroize::{Zeroize, Zeroizing};

use crate::layout::{self, EntrySlot, Lengths, PositionKey, RegionMap, RegionState, TableMode};
use crate::padme::PadSpec;
use crate::suite::{
    self, EphemeralSecret, PublicKey, Registry, SecretKey, SuiteId, SuiteKind, SuiteSpec,
    ENTRY_POINT_PLAINTEXT_LEN,
};

pub use schemes::{HashPrime, MacScheme, PayloadScheme};

/// Session key length, the same for every suite mix.
pub const SESSION_KEY_LEN: usize = 32;
pub const META_LEN: usize = 16;
/// Payloads and offsets are stored as 48-bit integers.
pub const MAX_OFFSET: u64 = (1 << 48) - 1;

/// Payload parameters stored next to the session key in every entry point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Meta {
    pub payload_scheme: PayloadScheme,
    pub mac: MacScheme,
    pub hash_prime: HashPrime,
    /// Absolute offset of the first payload byte.
    pub payload_start: u64,
    /// Absolute offset one past the last payload byte.
    pub payload_end: u64,
}

impl Meta {
    pub fn to_bytes(&self) -> [u8; META_LEN] {
        let mut out = [0u8; META_LEN];
        out[0] = self.payload_scheme.id();
        out[1] = self.mac.id();
        out[2] = self.hash_prime.id();
        out[4..10].copy_from_slice(&self.payload_start.to_be_bytes()[2..]);
        out[10..16].copy_from_slice(&self.payload_end.to_be_bytes()[2..]);
        out
    }

    pub fn from_bytes(b: &[u8; META_LEN]) -> Option<Self> {
        let read48 = |s: &[u8]| {
            let mut v = [0u8; 8];
            v[2..].copy_from_slice(s);
            u64::from_be_bytes(v)
        };
        let meta = Meta {
            payload_scheme: PayloadScheme::from_id(b[0])?,
            mac: MacScheme::from_id(b[1])?,
            hash_prime: HashPrime::from_id(b[2])?,
            payload_start: read48(&b[4..10]),
            payload_end: read48(&b[10..16]),
        };
        (b[3] == 0 && meta.payload_start <= meta.payload_end).then_some(meta)
    }
}

/// Decrypted contents of an entry point: the session key and meta.
#[derive(Clone, PartialEq, Eq)]
pub struct EntryPointPlain {
    pub key: Zeroizing<[u8; SESSION_KEY_LEN]>,
    pub meta: Meta,
}

impl fmt::Debug for EntryPointPlain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EntryPointPlain")
            .field("meta", &self.meta)
            .finish_non_exhaustive()
    }
}

impl EntryPointPlain {
    pub fn to_bytes(&self) -> Zeroizing<[u8; ENTRY_POINT_PLAINTEXT_LEN]> {
        let mut out = Zeroizing::new([0u8; ENTRY_POINT_PLAINTEXT_LEN]);
        out[..SESSION_KEY_LEN].copy_from_slice(&*self.key);
        out[SESSION_KEY_LEN..].copy_from_slice(&self.meta.to_bytes());
        out
    }

    pub fn from_bytes(b: &[u8]) -> Option<Self> {
        if b.len() != ENTRY_POINT_PLAINTEXT_LEN {
            return None;
        }
        let mut key = Zeroizing::new([0u8; SESSION_KEY_LEN]);
        key.copy_from_slice(&b[..SESSION_KEY_LEN]);
        let meta = Meta::from_bytes(b[SESSION_KEY_LEN..].try_into().ok()?)?;
        Some(EntryPointPlain { key, meta })
    }
}

/// Per-recipient keys: `Z` seals the entry point, `P` picks its slots.
#[derive(Clone, Debug)]
pub struct EntryKeys {
    pub z: Zeroizing<Vec<u8>>,
    pub p: PositionKey,
}

/// Keys protecting the payload.
#[derive(Clone, Debug)]
pub struct PayloadKeys {
    pub k_enc: Zeroizing<[u8; 32]>,
    pub k_mac: Zeroizing<[u8; 32]>,
}

/// `Z = Ĥ("key" ‖ k)` truncated to the AEAD key length, `P = Ĥ("pos" ‖ k)`.
pub fn derive_entry_keys(k: &EphemeralSecret, suite: &SuiteSpec) -> EntryKeys {
    let mut z = suite::hash_derive(suite, b"key", k.as_bytes());
    let p = suite::hash_derive(suite, b"pos", k.as_bytes());
    let keys = EntryKeys {
        z: Zeroizing::new(z[..suite.ep_aead.key_len()].to_vec()),
        p: PositionKey(p),
    };
    z.zeroize();
    keys
}

/// `K_enc = H′("enc" ‖ K)`, `K_mac = H′("mac" ‖ K)`.
pub fn derive_payload_keys(k: &[u8; SESSION_KEY_LEN], hash_prime: HashPrime) -> PayloadKeys {
    PayloadKeys {
        k_enc: Zeroizing::new(hash_prime.derive(b"enc", k)),
        k_mac: Zeroizing::new(hash_prime.derive(b"mac", k)),
    }
}

/// Seals `K ‖ meta` under `Z` with a zero nonce.
pub fn seal_entry_point(z: &[u8], plain: &EntryPointPlain, suite: &SuiteSpec) -> Vec<u8> {
    schemes::aead_seal(suite.ep_aead, z, &*plain.to_bytes())
}

/// Authenticates and decrypts an entry point.
pub fn open_entry_point(z: &[u8], ciphertext: &[u8], suite: &SuiteSpec) -> Option<EntryPointPlain> {
    if ciphertext.len() != suite.entry_point_len() {
        return None;
    }
    let plain = Zeroizing::new(schemes::aead_open(suite.ep_aead, z, ciphertext)?);
    EntryPointPlain::from_bytes(&plain)
}

/// Someone a PURB is encrypted to.
#[derive(Clone, Debug)]
pub enum Recipient {
    PublicKey {
        suite: SuiteId,
        pk: PublicKey,
    },
    Password {
        suite: SuiteId,
        passphrase: Zeroizing<Vec<u8>>,
    },
}

impl Recipient {
    pub fn suite(&self) -> SuiteId {
        match self {
            Recipient::PublicKey { suite, .. } | Recipient::Password { suite, .. } => *suite,
        }
    }

    pub fn password(suite: SuiteId, passphrase: &[u8]) -> Self {
        Recipient::Password {
            suite,
            passphrase: Zeroizing::new(passphrase.to_vec()),
        }
    }
}

/// What a decoder holds.
#[derive(Clone, Debug)]
pub enum Identity {
    SecretKey {
        suite: SuiteId,
        sk: SecretKey,
    },
    Password {
        suite: SuiteId,
        passphrase: Zeroizing<Vec<u8>>,
    },
}

impl Identity {
    pub fn suite(&self) -> SuiteId {
        match self {
            Identity::SecretKey { suite, .. } | Identity::Password { suite, .. } => *suite,
        }
    }

    pub fn password(suite: SuiteId, passphrase: &[u8]) -> Self {
        Identity::Password {
            suite,
            passphrase: Zeroizing::new(passphrase.to_vec()),
        }
    }
}

/// Encoder choices recorded in meta, plus the entry-point placement mode.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EncodeConfig {
    pub payload_scheme: PayloadScheme,
    pub mac: MacScheme,
    pub hash_prime: HashPrime,
    pub table_mode: TableMode,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error("no recipients")]
    NoRecipients,
    #[error("unknown suite id {0}")]
    UnknownSuite(u8),
    #[error("payload of {0} bytes is too large")]
    PayloadTooLarge(u64),
    #[error(transparent)]
    Suite(#[from] suite::SuiteError),
    #[error(transparent)]
    Layout(#[from] layout::LayoutError),
}

/// An encoded blob.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Purb {
    pub bytes: Vec<u8>,
}

impl Purb {
    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }
}

/// Encoder-side details not visible in the blob.
#[derive(Clone, Debug)]
pub struct EncodeInfo {
    pub lengths: Lengths,
    /// Bytes before the payload.
    pub header_len: usize,
    /// Useful header bytes divided by header length.
    pub compactness: f64,
    /// Primary public-key position of each suite used.
    pub primaries: Vec<(SuiteId, usize)>,
    /// Entry-point slots, grouped by suite in canonical order.
    pub entry_slots: Vec<EntrySlot>,
    /// Hidden keys (or salts) per suite, before XOR encoding.
    pub taus: Vec<(SuiteId, Vec<u8>)>,
    /// Group exponentiations performed (one per ephemeral sample, one per recipient).
    pub exp_count: u64,
    /// Re-encapsulations caused by entry points not fitting the table budget.
    pub placement_retries: u32,
}

/// Encodes `payload` for `recipients`.
pub fn encode<R: CryptoRng + ?Sized>(
    recipients: &[Recipient],
    payload: &[u8],
    pad: PadSpec,
    rng: &mut R,
    config: &EncodeConfig,
) -> Result<Purb, EncodeError> {
    encode_detailed(recipients, payload, pad, rng, config).map(|(p, _)| p)
}

struct SuiteGroup<'a> {
    suite: &'a SuiteSpec,
    members: Vec<&'a Recipient>,
    tau: Vec<u8>,
    keys: Vec<EntryKeys>,
}

/// Re-encapsulations of one suite before its table budget grows.
const MAX_PLACEMENT_ATTEMPTS: u32 = 64;

/// Fresh `tau` (hidden ephemeral key or salt) and per-member entry keys.
fn encapsulate<R: CryptoRng + ?Sized>(
    spec: &SuiteSpec,
    members: &[&Recipient],
    rng: &mut R,
    exp_count: &mut u64,
) -> Result<(Vec<u8>, Vec<EntryKeys>), EncodeError> {
    let (tau, secrets) = match spec.kind {
        SuiteKind::PublicKey(_) => {
            let pks: Vec<PublicKey> = members
                .iter()
                .map(|r| match r {
                    Recipient::PublicKey { pk, .. } => pk.clone(),
                    Recipient::Password { .. } => unreachable!("kinds checked by the caller"),
                })
                .collect();
            let enc = suite::hdr_encap(&pks, spec, rng)?;
            *exp_count += u64::from(enc.ephemeral_attempts) + pks.len() as u64;
            (enc.tau, enc.keys)
        }
        SuiteKind::Password(_) => {
            let salt = suite::fresh_salt(spec, rng);
            let secrets = members
                .iter()
                .map(|r| match r {
                    Recipient::Password { passphrase, .. } => {
                        suite::password_secret(spec, &salt, passphrase)
                    }
                    Recipient::PublicKey { .. } => unreachable!("kinds checked by the caller"),
                })
                .collect::<Result<Vec<_>, _>>()?;
            (salt, secrets)
        }
    };
    let keys = secrets.iter().map(|k| derive_entry_keys(k, spec)).collect();
    Ok((tau, keys))
}

/// Like [`encode`], also returning layout details.
pub fn encode_detailed<R: CryptoRng + ?Sized>(
    recipients: &[Recipient],
    payload: &[u8],
    pad: PadSpec,
    rng: &mut R,
    config: &EncodeConfig,
) -> Result<(Purb, EncodeInfo), EncodeError> {
    let registry = Registry::standard();
    if recipients.is_empty() {
        return Err(EncodeError::NoRecipients);
    }
    let payload_len = payload.len() as u64;
    if payload_len > MAX_OFFSET || payload_len > config.payload_scheme.max_len() {
        return Err(EncodeError::PayloadTooLarge(payload_len));
    }
    for r in recipients {
        let spec = registry
            .get(r.suite())
            .ok_or(EncodeError::UnknownSuite(r.suite().0))?;
        let kind_ok = matches!(
            (r, spec.kind),
            (Recipient::PublicKey { .. }, SuiteKind::PublicKey(_))
                | (Recipient::Password { .. }, SuiteKind::Password(_))
        );
        if !kind_ok {
            return Err(suite::SuiteError::GroupMismatch(spec.alias).into());
        }
    }

    // One key encapsulation (or salt) per suite, suites in canonical order.
    let mut groups: Vec<SuiteGroup> = Vec::new();
    let mut exp_count = 0u64;
    for spec in registry.suites() {
        let members: Vec<&Recipient> = recipients.iter().filter(|r| r.suite() == spec.id).collect();
        if members.is_empty() {
            continue;
        }
        let (tau, keys) = encapsulate(spec, &members, rng, &mut exp_count)?;
        groups.push(SuiteGroup {
            suite: spec,
            members,
            tau,
            keys,
        });
    }

    // Header layout. In hash-table mode every suite gets a fixed table
    // budget and the header always spans all of it; a suite whose entry
    // points do not fit is re-encapsulated.
    let mut map = RegionMap::new();
    let with_tau: Vec<(&SuiteSpec, &[u8])> =
        groups.iter().map(|g| (g.suite, g.tau.as_slice())).collect();
    let primaries = layout::reserve_pubkeys(&mut map, &with_tau)?;
    let total_entries = recipients.len();
    let hashed = config.table_mode == TableMode::HashTables;
    let mut budgets = Vec::with_capacity(groups.len());
    let mut header_len = map.len();
    for g in &groups {
        let budget = if hashed {
            layout::table_budget(&map, g.suite, total_entries)?
        } else {
            u32::MAX
        };
        if hashed {
            let extent =
                layout::table_extent(g.suite, budget).ok_or(layout::LayoutError::TooLong)?;
            header_len = header_len.max(extent);
        }
        budgets.push(budget);
    }
    let mut slots_per_group = Vec::with_capacity(groups.len());
    let mut placement_retries = 0u32;
    for (i, g) in groups.iter_mut().enumerate() {
        let mut failures = 0u32;
        loop {
            let before = map.clone();
            let ps: Vec<PositionKey> = g.keys.iter().map(|k| k.p).collect();
            match layout::place_entry_points(
                &mut map,
                g.suite,
                &ps,
                config.table_mode,
                budgets[i],
                rng,
            ) {
                Ok(slots) => {
                    slots_per_group.push(slots);
                    break;
                }
                Err(layout::LayoutError::TablesFull(_)) => {
                    map = before;
                    failures += 1;
                    placement_retries += 1;
                    if failures.is_multiple_of(MAX_PLACEMENT_ATTEMPTS) {
                        // practically unreachable; the length then depends on chance
                        budgets[i] += 1;
                        let extent = layout::table_extent(g.suite, budgets[i])
                            .ok_or(layout::LayoutError::TooLong)?;
                        header_len = header_len.max(extent);
                    }
                    let (tau, keys) = encapsulate(g.suite, &g.members, rng, &mut exp_count)?;
                    map.write(primaries[i], &tau);
                    g.tau = tau;
                    g.keys = keys;
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    header_len = header_len.max(map.len());
    let compactness = layout::compactness(&map, header_len);
    layout::fill_random(&mut map, header_len, rng);

    let lengths = layout::finalize_lengths(
        header_len,
        payload.len(),
        config.mac.tag_len(),
        pad,
        registry,
    )?;
    if lengths.purb_len as u64 > MAX_OFFSET {
        return Err(EncodeError::PayloadTooLarge(payload_len));
    }

    // Session key, meta and entry points.
    let mut session = Zeroizing::new([0u8; SESSION_KEY_LEN]);
    rng.fill_bytes(&mut *session);
    let meta = Meta {
        payload_scheme: config.payload_scheme,
        mac: config.mac,
        hash_prime: config.hash_prime,
        payload_start: lengths.payload_start as u64,
        payload_end: lengths.payload_end as u64,
    };
    let plain = EntryPointPlain {
        key: session.clone(),
        meta,
    };
    for (g, slots) in groups.iter().zip(&slots_per_group) {
        for (k, slot) in g.keys.iter().zip(slots) {
            map.write(slot.start, &seal_entry_point(&k.z, &plain, g.suite));
        }
    }

    // Payload and padding.
    let pkeys = derive_payload_keys(&session, config.hash_prime);
    let mut body = payload.to_vec();
    config.payload_scheme.apply(&pkeys.k_enc, &mut body);
    map.reserve(lengths.payload_start, &body, RegionState::Payload)?;
    let mut padding = vec![0u8; lengths.mac_pos - lengths.payload_end];
    rng.fill_bytes(&mut padding);
    map.reserve(lengths.payload_end, &padding, RegionState::Padding)?;

    // Public keys, then the MAC over everything else.
    let mut bytes = map.into_bytes();
    debug_assert_eq!(bytes.len(), lengths.mac_pos);
    let triples: Vec<(&SuiteSpec, &[u8], usize)> = groups
        .iter()
        .zip(&primaries)
        .map(|(g, &p)| (g.suite, g.tau.as_slice(), p))
        .collect();
    layout::xor_encode_pubkeys(&mut bytes, lengths.purb_len, &triples);
    let tag = config.mac.tag(&*pkeys.k_mac, &bytes);
    bytes.extend_from_slice(&tag);

    let info = EncodeInfo {
        lengths,
        header_len,
        compactness,
        primaries: groups
            .iter()
            .zip(&primaries)
            .map(|(g, &p)| (g.suite.id, p))
            .collect(),
        entry_slots: slots_per_group.into_iter().flatten().collect(),
        taus: groups.iter().map(|g| (g.suite.id, g.tau.clone())).collect(),
        exp_count,
        placement_retries,
    };
    Ok((Purb { bytes }, info))
}

/// The single error every failed decode returns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("decode failed")]
pub struct DecodeError;

/// Work done by a decode attempt.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecodeStats {
    /// Group exponentiations (one per public-key suite attempted).
    pub exp_count: u64,
    /// Password derivations.
    pub kdf_count: u64,
    /// Entry-point trial decryptions.
    pub trial_count: u64,
    /// Hash tables (or flat slots) visited.
    pub tables_scanned: u64,
}

impl std::ops::AddAssign for DecodeStats {
    fn add_assign(&mut self, o: Self) {
        self.exp_count += o.exp_count;
        self.kdf_count += o.kdf_count;
        self.trial_count += o.trial_count;
        self.tables_scanned += o.tables_scanned;
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecodeOptions {
    /// Scan every table and run a MAC check even after a miss.
    pub hardened: bool,
    /// Must match the mode the blob was encoded with.
    pub table_mode: TableMode,
}

/// Decodes `purb` with one identity.
pub fn decode(
    purb: &[u8],
    identity: &Identity,
    opts: &DecodeOptions,
) -> Result<(Vec<u8>, DecodeStats), DecodeError> {
    let mut stats = DecodeStats::default();
    decode_instrumented(purb, identity, opts, &mut stats).map(|p| (p, stats))
}

/// Decodes with each identity in turn, returning the first success.
pub fn decode_any(
    purb: &[u8],
    identities: &[Identity],
    opts: &DecodeOptions,
) -> Result<(Vec<u8>, DecodeStats), DecodeError> {
    let mut stats = DecodeStats::default();
    for id in identities {
        if let Ok(p) = decode_instrumented(purb, id, opts, &mut stats) {
            return Ok((p, stats));
        }
    }
    Err(DecodeError)
}

/// Like [`decode`], accumulating work into `stats` whether or not it succeeds.
pub fn decode_instrumented(
    purb: &[u8],
    identity: &Identity,
    opts: &DecodeOptions,
    stats: &mut DecodeStats,
) -> Result<Vec<u8>, DecodeError> {
    let registry = Registry::standard();
    let spec = registry.get(identity.suite()).ok_or(DecodeError)?;

    // Steps 1-3: recover tau, the ephemeral secret, and (Z, P).
    let tau = layout::xor_decode_position(purb, spec);
    let secret = match identity {
        Identity::SecretKey { sk, .. } => {
            stats.exp_count += 1;
            suite::hdr_decap(sk, spec, &tau).map_err(|_| DecodeError)?
        }
        Identity::Password { passphrase, .. } => {
            stats.kdf_count += 1;
            suite::password_secret(spec, &tau, passphrase).map_err(|_| DecodeError)?
        }
    };
    let keys = derive_entry_keys(&secret, spec);

    // Step 4: trial decryption.
    let ep = spec.entry_point_len();
    let mut found: Option<EntryPointPlain> = None;
    let mut table = 0u32;
    loop {
        let start = match opts.table_mode {
            TableMode::HashTables => layout::slot_offset(spec, table, keys.p.slot_index(table)),
            TableMode::Flat => spec.table_base().checked_add(table as usize * ep),
        };
        let Some(start) = start.filter(|s| s.checked_add(ep).is_some_and(|e| e <= purb.len()))
        else {
            break;
        };
        stats.tables_scanned += 1;
        stats.trial_count += 1;
        if let Some(plain) = open_entry_point(&keys.z, &purb[start..start + ep], spec) {
            if found.is_none() {
                found = Some(plain);
            }
            if !opts.hardened {
                break;
            }
        }
        table += 1;
    }

    // Step 5: whole-blob MAC.
    let Some(plain) = found else {
        if opts.hardened && purb.len() >= MacScheme::HmacSha256.tag_len() {
            let split = purb.len() - MacScheme::HmacSha256.tag_len();
            let _ = MacScheme::HmacSha256.verify(&[0u8; 32], &purb[..split], &purb[split..]);
        }
        return Err(DecodeError);
    };
    let meta = plain.meta;
    let tag_len = meta.mac.tag_len();
    let Some(split) = purb.len().checked_sub(tag_len) else {
        return Err(DecodeError);
    };
    let pkeys = derive_payload_keys(&plain.key, meta.hash_prime);
    if !meta
        .mac
        .verify(&*pkeys.k_mac, &purb[..split], &purb[split..])
    {
        return Err(DecodeError);
    }
    if meta.payload_end > split as u64 {
        return Err(DecodeError);
    }

    // Step 6: payload.
    let mut body = purb[meta.payload_start as usize..meta.payload_end as usize].to_vec();
    meta.payload_scheme.apply(&pkeys.k_enc, &mut body);
    Ok(body)
}
