//! Byte layout of a PURB: public-key positions, entry-point hash tables,
//! payload, padding and MAC placement, and XOR encoding of the public keys.

use std::collections::BTreeMap;
use std::ops::Range;

use rand_core::CryptoRng;

use crate::padme::{pad_len, PadSpec};
use crate::suite::{Registry, SuiteId, SuiteSpec};

/// What a reserved byte range holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionState {
    PubkeyPrimary,
    EntrySlot,
    /// Random bytes filling header gaps.
    Filler,
    Payload,
    Padding,
    Mac,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LayoutError {
    #[error("suites must be given in canonical order without repeats")]
    SuiteOrder,
    #[error("suite {0} has no free public-key position")]
    NoPosition(&'static str),
    #[error("range {0:?} is already reserved")]
    Overlap(Range<usize>),
    #[error("blob length overflows")]
    TooLong,
    #[error("no free slot within {0} tables")]
    TablesFull(u32),
}

/// A growable byte array with a reservation map.
///
/// Reserved ranges never overlap. Public-key positions marked as fixed are
/// tracked separately: they may hold any content but bind the choices of
/// later suites and of the MAC.
#[derive(Clone, Debug, Default)]
pub struct RegionMap {
    bytes: Vec<u8>,
    /// start -> (end, state)
    regions: BTreeMap<usize, (usize, RegionState)>,
    fixed: Vec<Range<usize>>,
}

fn overlaps(a: &Range<usize>, b: &Range<usize>) -> bool {
    a.start < b.end && b.start < a.end
}

impl RegionMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Current length (end of the furthest reservation).
    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    /// True iff no reserved range intersects `[start, end)`.
    pub fn is_free(&self, start: usize, end: usize) -> bool {
        // reservations are disjoint, so only the last one starting before
        // `start` can reach into the window from the left
        self.regions.range(start..end).next().is_none()
            && self
                .regions
                .range(..start)
                .next_back()
                .is_none_or(|(_, &(e, _))| e <= start)
    }

    /// True iff `[start, end)` misses every fixed public-key position.
    pub fn is_unfixed(&self, start: usize, end: usize) -> bool {
        let want = start..end;
        self.fixed.iter().all(|f| !overlaps(f, &want))
    }

    pub fn mark_fixed(&mut self, range: Range<usize>) {
        self.fixed.push(range);
    }

    /// Reserves `[start, start + data.len())` and writes `data` there.
    pub fn reserve(
        &mut self,
        start: usize,
        data: &[u8],
        state: RegionState,
    ) -> Result<(), LayoutError> {
        let end = start.checked_add(data.len()).ok_or(LayoutError::TooLong)?;
        if data.is_empty() {
            return Ok(());
        }
        if !self.is_free(start, end) {
            return Err(LayoutError::Overlap(start..end));
        }
        if self.bytes.len() < end {
            self.bytes.resize(end, 0);
        }
        self.bytes[start..end].copy_from_slice(data);
        self.regions.insert(start, (end, state));
        Ok(())
    }

    /// Overwrites bytes of an existing reservation.
    pub fn write(&mut self, start: usize, data: &[u8]) {
        self.bytes[start..start + data.len()].copy_from_slice(data);
    }

    /// Reserved ranges in address order.
    pub fn regions(&self) -> impl Iterator<Item = (Range<usize>, RegionState)> + '_ {
        self.regions.iter().map(|(&s, &(e, st))| (s..e, st))
    }

    /// Gaps below [`RegionMap::len`] not covered by any reservation.
    pub fn gaps(&self) -> Vec<Range<usize>> {
        let mut gaps = Vec::new();
        let mut cursor = 0;
        for (&s, &(e, _)) in &self.regions {
            if s > cursor {
                gaps.push(cursor..s);
            }
            cursor = cursor.max(e);
        }
        if cursor < self.bytes.len() {
            gaps.push(cursor..self.bytes.len());
        }
        gaps
    }
}

/// Placement strategy for entry points.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TableMode {
    /// Doubling hash tables: slot `P mod 2^j` in table `j`.
    #[default]
    HashTables,
    /// Entry points packed one after the other (linear scan on decode).
    Flat,
}

/// The position key `P` of a recipient: a 256-bit big-endian integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PositionKey(pub [u8; 32]);

impl PositionKey {
    /// `P mod 2^j`.
    pub fn slot_index(&self, table: u32) -> u64 {
        let low = u64::from_be_bytes(self.0[24..].try_into().expect("8 bytes"));
        if table >= 64 {
            low
        } else {
            low & ((1u64 << table) - 1)
        }
    }
}

/// Byte offset of slot `index` of table `table` for a suite.
pub fn slot_offset(suite: &SuiteSpec, table: u32, index: u64) -> Option<usize> {
    let ep = suite.entry_point_len() as u64;
    let table_start = (1u64.checked_shl(table)? - 1).checked_mul(ep)?;
    let off = (suite.table_base() as u64)
        .checked_add(table_start)?
        .checked_add(index.checked_mul(ep)?)?;
    usize::try_from(off).ok()
}

/// A reserved entry-point slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EntrySlot {
    pub start: usize,
    pub end: usize,
    pub suite: SuiteId,
    /// Hash table index, or the linear index in flat mode.
    pub table: u32,
}

/// Tables a suite with no fixed ranges in its way gets when the PURB holds
/// `entries` entry points in total: `bitlen(N) + bitlen(bitlen(N)) - 1`.
pub fn clean_table_count(entries: usize) -> u32 {
    let b = usize::BITS - entries.max(1).leading_zeros();
    b + (u32::BITS - b.leading_zeros()) - 1
}

/// Hash tables `suite` may use: the fewest leading tables with at least
/// `2^clean_table_count(entries) - 1` slots clear of the public keys.
///
/// Call after [`reserve_pubkeys`] and before placing any entry point. The
/// result depends only on the suites present and the entry count, so the
/// header length does too.
pub fn table_budget(
    map: &RegionMap,
    suite: &SuiteSpec,
    entries: usize,
) -> Result<u32, LayoutError> {
    let want = (1u64 << clean_table_count(entries)) - 1;
    let ep = suite.entry_point_len();
    let mut have = 0u64;
    let mut tables = 0u32;
    while have < want {
        let size = 1u64.checked_shl(tables).ok_or(LayoutError::TooLong)?;
        let first = slot_offset(suite, tables, 0).ok_or(LayoutError::TooLong)?;
        if first >= map.len() {
            have += size;
        } else {
            for i in 0..size {
                let start = slot_offset(suite, tables, i).ok_or(LayoutError::TooLong)?;
                if map.is_free(start, start + ep) {
                    have += 1;
                }
            }
        }
        tables += 1;
    }
    Ok(tables)
}

/// End offset of the first `tables` hash tables of `suite`.
pub fn table_extent(suite: &SuiteSpec, tables: u32) -> Option<usize> {
    if tables == 0 {
        return Some(suite.table_base());
    }
    slot_offset(suite, tables, 0)
}

/// Chooses each suite's primary public-key position and writes `tau` there.
///
/// `suites` must be in canonical order. Every allowed position of a placed
/// suite becomes fixed, so later suites avoid all of them.
pub fn reserve_pubkeys(
    map: &mut RegionMap,
    suites: &[(&SuiteSpec, &[u8])],
) -> Result<Vec<usize>, LayoutError> {
    if suites
        .windows(2)
        .any(|w| w[0].0.order_index >= w[1].0.order_index)
    {
        return Err(LayoutError::SuiteOrder);
    }
    let mut primaries = Vec::with_capacity(suites.len());
    for &(suite, tau) in suites {
        let pos = suite
            .position_ranges()
            .find(|r| map.is_unfixed(r.start, r.end))
            .ok_or(LayoutError::NoPosition(suite.alias))?;
        map.reserve(pos.start, tau, RegionState::PubkeyPrimary)?;
        for r in suite.position_ranges() {
            map.mark_fixed(r);
        }
        primaries.push(pos.start);
    }
    Ok(primaries)
}

/// Reserves one entry-point slot per position key, filling each with
/// placeholder bytes drawn from `rng`.
///
/// In hash-table mode only the first `max_tables` tables are tried; on
/// `TablesFull` the map may hold some of this suite's slots already.
pub fn place_entry_points<R: CryptoRng + ?Sized>(
    map: &mut RegionMap,
    suite: &SuiteSpec,
    position_keys: &[PositionKey],
    mode: TableMode,
    max_tables: u32,
    rng: &mut R,
) -> Result<Vec<EntrySlot>, LayoutError> {
    let ep = suite.entry_point_len();
    let mut slots = Vec::with_capacity(position_keys.len());
    let mut placeholder = vec![0u8; ep];
    for pk in position_keys {
        let mut table = 0u32;
        let start = loop {
            let start = match mode {
                TableMode::HashTables => {
                    if table >= max_tables {
                        return Err(LayoutError::TablesFull(max_tables));
                    }
                    slot_offset(suite, table, pk.slot_index(table)).ok_or(LayoutError::TooLong)?
                }
                TableMode::Flat => suite
                    .table_base()
                    .checked_add(table as usize * ep)
                    .ok_or(LayoutError::TooLong)?,
            };
            if map.is_free(start, start + ep) {
                break start;
            }
            table += 1;
        };
        rng.fill_bytes(&mut placeholder);
        map.reserve(start, &placeholder, RegionState::EntrySlot)?;
        slots.push(EntrySlot {
            start,
            end: start + ep,
            suite: suite.id,
            table,
        });
    }
    Ok(slots)
}

/// Fills every unreserved byte below `end` (and below the current end) with
/// random data.
pub fn fill_random<R: CryptoRng + ?Sized>(map: &mut RegionMap, end: usize, rng: &mut R) {
    let mut gaps = map.gaps();
    if map.len() < end {
        gaps.push(map.len()..end);
    }
    for gap in gaps {
        let mut buf = vec![0u8; gap.len()];
        rng.fill_bytes(&mut buf);
        map.reserve(gap.start, &buf, RegionState::Filler)
            .expect("gaps are free");
    }
}

/// Offsets of the payload, padding and MAC.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lengths {
    pub payload_start: usize,
    pub payload_end: usize,
    pub mac_pos: usize,
    pub purb_len: usize,
}

/// Places the payload right after the header and pads the whole blob, growing
/// it until the MAC misses every allowed position (of any registered suite)
/// that starts inside the blob.
pub fn finalize_lengths(
    header_end: usize,
    payload_len: usize,
    mac_len: usize,
    pad: PadSpec,
    registry: &Registry,
) -> Result<Lengths, LayoutError> {
    let payload_end = header_end
        .checked_add(payload_len)
        .ok_or(LayoutError::TooLong)?;
    let unpadded = payload_end
        .checked_add(mac_len)
        .ok_or(LayoutError::TooLong)?;
    let pad_to = |len: usize| -> Result<usize, LayoutError> {
        let padded = pad_len(pad, len as u64);
        if padded == u64::MAX {
            return Err(LayoutError::TooLong);
        }
        usize::try_from(padded).map_err(|_| LayoutError::TooLong)
    };
    let mut purb_len = pad_to(unpadded)?;
    while mac_hits_positions(registry, purb_len - mac_len, purb_len) {
        purb_len = pad_to(purb_len + 1)?;
    }
    Ok(Lengths {
        payload_start: header_end,
        payload_end,
        mac_pos: purb_len - mac_len,
        purb_len,
    })
}

fn mac_hits_positions(registry: &Registry, mac_pos: usize, purb_len: usize) -> bool {
    let mac = mac_pos..purb_len;
    registry
        .all_position_ranges()
        .any(|r| r.start < purb_len && overlaps(&r, &mac))
}

/// Rewrites each suite's primary position so that the XOR of all its
/// in-range positions equals its `tau`. Suites are processed in the given
/// (canonical) order; every non-MAC byte below `purb_len` must be final.
pub fn xor_encode_pubkeys(
    bytes: &mut [u8],
    purb_len: usize,
    suites: &[(&SuiteSpec, &[u8], usize)],
) {
    for &(suite, tau, primary) in suites {
        let n = suite.encoded_key_len;
        let mut acc = tau.to_vec();
        for pos in suite.positions_in_range(purb_len) {
            if pos != primary {
                xor_into(&mut acc, &bytes[pos..pos + n]);
            }
        }
        bytes[primary..primary + n].copy_from_slice(&acc);
    }
}

/// XOR of every allowed position of `suite` that lies fully within `bytes`.
pub fn xor_decode_position(bytes: &[u8], suite: &SuiteSpec) -> Vec<u8> {
    let n = suite.encoded_key_len;
    let mut acc = vec![0u8; n];
    for pos in suite.positions_in_range(bytes.len()) {
        xor_into(&mut acc, &bytes[pos..pos + n]);
    }
    acc
}

fn xor_into(acc: &mut [u8], other: &[u8]) {
    for (a, b) in acc.iter_mut().zip(other) {
        *a ^= b;
    }
}

/// Share of header bytes holding public keys or entry points.
pub fn compactness(map: &RegionMap, header_end: usize) -> f64 {
    if header_end == 0 {
        return 1.0;
    }
    let useful: usize = map
        .regions()
        .filter(|(r, st)| {
            r.end <= header_end && matches!(st, RegionState::PubkeyPrimary | RegionState::EntrySlot)
        })
        .map(|(r, _)| r.len())
        .sum();
    useful as f64 / header_end as f64
}
