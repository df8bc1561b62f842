//! Operation counts and timings for flat and hash-table header layouts.

use std::fmt::Write as _;
use std::time::Instant;

use rand_core::CryptoRng;

use crate::codec::{self, DecodeOptions, EncodeConfig, Identity, Recipient};
use crate::layout::TableMode;
use crate::padme::PadSpec;
use crate::suite::{self, Registry, SuiteKind};

/// One benchmark configuration.
#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub recipients: Vec<usize>,
    /// Number of public-key suites (taken in canonical order) sharing the recipients.
    pub suites: usize,
    pub repeat: usize,
    pub payload_len: usize,
    /// Largest number of recipients decoded per run (the last-placed one is always included).
    pub decode_sample: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            recipients: vec![1, 10, 100, 1000],
            suites: 1,
            repeat: 1,
            payload_len: 1024,
            decode_sample: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub mode: TableMode,
    pub recipients: usize,
    pub suites: usize,
    pub header_len: usize,
    pub purb_len: usize,
    pub compactness: f64,
    /// Mean group exponentiations per decode.
    pub mean_exp: f64,
    pub mean_trials: f64,
    pub max_trials: u64,
    pub encode_ms: f64,
    pub decode_ms: f64,
}

/// Encodes and decodes for every recipient count in both layout modes.
pub fn run<R: CryptoRng + ?Sized>(cfg: &BenchConfig, rng: &mut R) -> Vec<BenchRow> {
    let suites: Vec<_> = Registry::standard()
        .suites()
        .iter()
        .filter(|s| matches!(s.kind, SuiteKind::PublicKey(_)))
        .take(cfg.suites.max(1))
        .collect();
    let payload = vec![0x5au8; cfg.payload_len];
    let mut rows = Vec::new();
    for &r in &cfg.recipients {
        let r = r.max(1);
        for mode in [TableMode::Flat, TableMode::HashTables] {
            let mut header_len = 0;
            let mut purb_len = 0;
            let mut compactness = 0.0;
            let (mut exp, mut trials, mut max_trials, mut decodes) = (0u64, 0u64, 0u64, 0u64);
            let (mut enc_s, mut dec_s) = (0.0f64, 0.0f64);
            for _ in 0..cfg.repeat.max(1) {
                let mut recipients = Vec::with_capacity(r);
                let mut identities = Vec::with_capacity(r);
                for i in 0..r {
                    let s = suites[i % suites.len()];
                    let kp = suite::keygen_hidden(s, rng).expect("public-key suite");
                    recipients.push(Recipient::PublicKey {
                        suite: s.id,
                        pk: kp.pk,
                    });
                    identities.push(Identity::SecretKey {
                        suite: s.id,
                        sk: kp.sk,
                    });
                }
                let config = EncodeConfig {
                    table_mode: mode,
                    ..Default::default()
                };
                let t = Instant::now();
                let (purb, info) =
                    codec::encode_detailed(&recipients, &payload, PadSpec::Padme, rng, &config)
                        .expect("bench encode");
                enc_s += t.elapsed().as_secs_f64();
                header_len = info.header_len;
                purb_len = purb.len();
                compactness = info.compactness;

                let opts = DecodeOptions {
                    table_mode: mode,
                    ..Default::default()
                };
                for idx in sample_indices(r, cfg.decode_sample, suites.len()) {
                    let t = Instant::now();
                    let (_, stats) =
                        codec::decode(&purb.bytes, &identities[idx], &opts).expect("bench decode");
                    dec_s += t.elapsed().as_secs_f64();
                    exp += stats.exp_count;
                    trials += stats.trial_count;
                    max_trials = max_trials.max(stats.trial_count);
                    decodes += 1;
                }
            }
            let d = decodes.max(1) as f64;
            rows.push(BenchRow {
                mode,
                recipients: r,
                suites: suites.len(),
                header_len,
                purb_len,
                compactness,
                mean_exp: exp as f64 / d,
                mean_trials: trials as f64 / d,
                max_trials,
                encode_ms: 1e3 * enc_s / cfg.repeat.max(1) as f64,
                decode_ms: 1e3 * dec_s / d,
            });
        }
    }
    rows
}

/// Evenly spaced recipient indices, always including the last recipient of
/// every suite (the last one placed, hence the worst case in flat mode).
fn sample_indices(r: usize, cap: usize, suites: usize) -> Vec<usize> {
    let cap = cap.max(1);
    let mut idx: Vec<usize> = if r <= cap {
        (0..r).collect()
    } else {
        (0..cap).map(|i| i * r / cap).collect()
    };
    for k in r.saturating_sub(suites)..r {
        idx.push(k);
    }
    idx.sort_unstable();
    idx.dedup();
    idx
}

pub fn render_table(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<6} {:>6} {:>6} {:>8} {:>10} {:>8} {:>6} {:>10} {:>10} {:>10} {:>10}",
        "mode",
        "r",
        "suites",
        "header",
        "purb",
        "compact",
        "exp",
        "trials",
        "max trials",
        "enc ms",
        "dec ms"
    );
    for row in rows {
        let mode = match row.mode {
            TableMode::Flat => "flat",
            TableMode::HashTables => "hash",
        };
        let _ = writeln!(
            out,
            "{:<6} {:>6} {:>6} {:>8} {:>10} {:>7.1}% {:>6.2} {:>10.2} {:>10} {:>10.3} {:>10.3}",
            mode,
            row.recipients,
            row.suites,
            row.header_len,
            row.purb_len,
            100.0 * row.compactness,
            row.mean_exp,
            row.mean_trials,
            row.max_trials,
            row.encode_ms,
            row.decode_ms
        );
    }
    out
}
