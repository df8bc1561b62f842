//! `purb` command-line tool.
//!
//! Exit codes: 0 success, 1 decode failure, 2 usage or input error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rand::rngs::{ChaCha20Rng, SysRng};
use rand::SeedableRng;
use serde::Deserialize;

use purb::analyzer::{self, SizeFormat};
use purb::bench::{self, BenchConfig};
use purb::codec::{
    self, DecodeOptions, EncodeConfig, HashPrime, Identity, MacScheme, PayloadScheme, Recipient,
};
use purb::layout::TableMode;
use purb::padme::{self, PadSpec};
use purb::suite::{self, Registry, SuiteKind, SuiteSpec};

#[derive(Parser)]
#[command(name = "purb", version, about = "Padded uniform random blobs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a key pair for a public-key suite.
    Keygen {
        /// Suite alias (A..F).
        #[arg(long)]
        suite: String,
        /// Writes <prefix>.sk (raw scalar) and <prefix>.pk (hex).
        #[arg(long, default_value = "key")]
        out: PathBuf,
        /// INSECURE, for tests only: derive all randomness from this hex seed.
        #[arg(long)]
        seed: Option<String>,
    },
    /// Encrypt a file to the recipients listed in a JSON file.
    Encode {
        /// JSON array of {"suite", "pubkey"} or {"suite", "passphrase"} entries.
        #[arg(long)]
        to: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// padme, next2, block:<b> or none.
        #[arg(long, default_value = "padme")]
        pad: PadSpec,
        /// Throwaway recipients of the first listed suite.
        #[arg(long, default_value_t = 0)]
        dummy: usize,
        #[arg(long, value_enum, default_value_t = Cipher::Chacha20)]
        cipher: Cipher,
        #[arg(long, value_enum, default_value_t = MacArg::HmacSha256)]
        mac: MacArg,
        #[arg(long, value_enum, default_value_t = HashArg::Sha256)]
        hash: HashArg,
        /// Place entry points sequentially instead of in hash tables.
        #[arg(long)]
        flat: bool,
        /// INSECURE, for tests only: derive all randomness from this hex seed.
        #[arg(long)]
        seed: Option<String>,
    },
    /// Decrypt a PURB.
    Decode {
        /// Secret key file written by keygen.
        #[arg(
            long,
            conflicts_with = "passphrase",
            required_unless_present = "passphrase"
        )]
        key: Option<PathBuf>,
        #[arg(long)]
        passphrase: Option<String>,
        /// Suite of the key; defaults to pw for a passphrase.
        #[arg(long)]
        suite: Option<String>,
        #[arg(long = "in")]
        input: PathBuf,
        /// Payload destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print operation counts.
        #[arg(long)]
        stats: bool,
        /// Try every suite of the matching kind, in registry order.
        #[arg(long)]
        try_all: bool,
        /// Scan every table and always compute a MAC.
        #[arg(long)]
        hardened: bool,
        /// The blob was encoded with --flat.
        #[arg(long)]
        flat: bool,
    },
    /// Padded length and overhead for one length.
    Pad {
        #[arg(long)]
        len: u64,
        #[arg(long, default_value = "padme")]
        spec: PadSpec,
    },
    /// Anonymity sets of a size dataset under several padding schemes.
    Analyze {
        /// One size per line, or CSV with --column.
        #[arg(long, required_unless_present = "sample")]
        sizes: Option<PathBuf>,
        #[arg(long)]
        column: Option<String>,
        /// Use the bundled sample dataset.
        #[arg(long, conflicts_with = "sizes")]
        sample: bool,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "none,block:512,next2,padme"
        )]
        specs: Vec<PadSpec>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Operation counts and timings, flat versus hash-table layout.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "1,10,100,1000")]
        recipients: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        suites: usize,
        #[arg(long, default_value_t = 1)]
        repeat: usize,
        #[arg(long, default_value_t = 1024)]
        payload: usize,
        /// Largest number of recipients decoded per run.
        #[arg(long, default_value_t = 100)]
        decode_sample: usize,
        /// INSECURE, for tests only: derive all randomness from this hex seed.
        #[arg(long)]
        seed: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Cipher {
    Chacha20,
    Aes256Ctr,
}

#[derive(Clone, Copy, ValueEnum)]
enum MacArg {
    HmacSha256,
    HmacSha384,
}

#[derive(Clone, Copy, ValueEnum)]
enum HashArg {
    Sha256,
    Sha384,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RecipientEntry {
    suite: String,
    pubkey: Option<String>,
    passphrase: Option<String>,
}

struct DecodeFailed;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Decode {
            key,
            passphrase,
            suite,
            input,
            out,
            stats,
            try_all,
            hardened,
            flat,
        } => {
            let ids = match identities(
                key.as_deref(),
                passphrase.as_deref(),
                suite.as_deref(),
                try_all,
            ) {
                Ok(ids) => ids,
                Err(e) => return usage(e),
            };
            let opts = DecodeOptions {
                hardened,
                table_mode: table_mode(flat),
            };
            match decode(&ids, &input, out.as_deref(), &opts, stats) {
                Ok(()) => ExitCode::SUCCESS,
                Err(DecodeFailed) => {
                    eprintln!("decode failed");
                    ExitCode::from(1)
                }
            }
        }
        cmd => match run(cmd) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => usage(e),
        },
    }
}

fn usage(e: anyhow::Error) -> ExitCode {
    eprintln!("error: {e:#}");
    ExitCode::from(2)
}

fn run(cmd: Cmd) -> anyhow::Result<()> {
    match cmd {
        Cmd::Keygen { suite, out, seed } => {
            let spec = lookup(&suite)?;
            if spec.is_password() {
                bail!("suite {} takes a passphrase, not a key pair", spec.alias);
            }
            let mut rng = make_rng(seed.as_deref())?;
            let kp = suite::keygen_hidden(spec, &mut rng)?;
            let sk_path = with_ext(&out, "sk");
            let pk_path = with_ext(&out, "pk");
            fs::write(&sk_path, kp.sk.to_bytes())
                .with_context(|| format!("writing {}", sk_path.display()))?;
            fs::write(&pk_path, hex::encode(&kp.pk_encoded) + "\n")
                .with_context(|| format!("writing {}", pk_path.display()))?;
            println!("{}", spec.alias);
        }
        Cmd::Encode {
            to,
            input,
            out,
            pad,
            dummy,
            cipher,
            mac,
            hash,
            flat,
            seed,
        } => {
            let mut rng = make_rng(seed.as_deref())?;
            let mut recipients = read_recipients(&to)?;
            add_dummies(&mut recipients, dummy, &mut rng)?;
            let payload =
                fs::read(&input).with_context(|| format!("reading {}", input.display()))?;
            let config = EncodeConfig {
                payload_scheme: match cipher {
                    Cipher::Chacha20 => PayloadScheme::ChaCha20,
                    Cipher::Aes256Ctr => PayloadScheme::Aes256Ctr,
                },
                mac: match mac {
                    MacArg::HmacSha256 => MacScheme::HmacSha256,
                    MacArg::HmacSha384 => MacScheme::HmacSha384,
                },
                hash_prime: match hash {
                    HashArg::Sha256 => HashPrime::Sha256,
                    HashArg::Sha384 => HashPrime::Sha384Trunc,
                },
                table_mode: table_mode(flat),
            };
            let (purb, info) =
                codec::encode_detailed(&recipients, &payload, pad, &mut rng, &config)?;
            fs::write(&out, &purb.bytes).with_context(|| format!("writing {}", out.display()))?;
            println!(
                "length {} bytes, header {} bytes, compactness {:.1}%",
                purb.len(),
                info.header_len,
                100.0 * info.compactness
            );
        }
        Cmd::Pad { len, spec } => {
            let o = padme::overhead(spec, len);
            let pct = if len == 0 {
                0.0
            } else {
                100.0 * o.multiplicative()
            };
            println!("{} +{} +{:.2}%", len + o.additive, o.additive, pct);
        }
        Cmd::Analyze {
            sizes,
            column,
            sample,
            specs,
            csv,
        } => {
            let ds = match sizes {
                Some(path) if !sample => {
                    let format = column.map_or(SizeFormat::Lines, SizeFormat::CsvColumn);
                    analyzer::load_sizes(&path, &format)?
                }
                _ => analyzer::sample_dataset(),
            };
            let cmp = analyzer::compare(&ds, &specs);
            print!("{}", cmp.render_table());
            if let Some(path) = csv {
                let f = fs::File::create(&path)
                    .with_context(|| format!("writing {}", path.display()))?;
                cmp.write_csv(f)?;
            }
        }
        Cmd::Bench {
            recipients,
            suites,
            repeat,
            payload,
            decode_sample,
            seed,
        } => {
            let mut rng = make_rng(seed.as_deref())?;
            let cfg = BenchConfig {
                recipients,
                suites,
                repeat,
                payload_len: payload,
                decode_sample,
            };
            print!("{}", bench::render_table(&bench::run(&cfg, &mut rng)));
        }
        Cmd::Decode { .. } => unreachable!("handled in main"),
    }
    Ok(())
}

fn lookup(alias: &str) -> anyhow::Result<&'static SuiteSpec> {
    Registry::standard()
        .by_alias(alias)
        .ok_or_else(|| anyhow!("unknown suite {alias:?}"))
}

fn table_mode(flat: bool) -> TableMode {
    if flat {
        TableMode::Flat
    } else {
        TableMode::HashTables
    }
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// OS randomness, or a ChaCha20 stream keyed by `seed` (zero-padded to 32 bytes).
fn make_rng(seed: Option<&str>) -> anyhow::Result<ChaCha20Rng> {
    match seed {
        None => ChaCha20Rng::try_from_rng(&mut SysRng).map_err(|e| anyhow!("OS randomness: {e}")),
        Some(s) => {
            let bytes = hex::decode(s.trim()).context("--seed must be hex")?;
            if bytes.len() > 32 {
                bail!("--seed is at most 32 bytes");
            }
            let mut seed = [0u8; 32];
            seed[..bytes.len()].copy_from_slice(&bytes);
            Ok(ChaCha20Rng::from_seed(seed))
        }
    }
}

fn read_recipients(path: &Path) -> anyhow::Result<Vec<Recipient>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let entries: Vec<RecipientEntry> =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if entries.is_empty() {
        bail!("{} lists no recipients", path.display());
    }
    entries
        .into_iter()
        .enumerate()
        .map(|(i, e)| {
            let spec = lookup(&e.suite)?;
            match (&spec.kind, e.pubkey, e.passphrase) {
                (SuiteKind::PublicKey(_), Some(pk), None) => {
                    let pk = suite::parse_public_key(spec, pk.as_bytes())
                        .with_context(|| format!("recipient {i}: bad public key"))?;
                    Ok(Recipient::PublicKey { suite: spec.id, pk })
                }
                (SuiteKind::Password(_), None, Some(pass)) => {
                    Ok(Recipient::password(spec.id, pass.as_bytes()))
                }
                (SuiteKind::PublicKey(_), ..) => {
                    bail!("recipient {i}: suite {} needs exactly a pubkey", spec.alias)
                }
                (SuiteKind::Password(_), ..) => bail!(
                    "recipient {i}: suite {} needs exactly a passphrase",
                    spec.alias
                ),
            }
        })
        .collect()
}

fn add_dummies(
    recipients: &mut Vec<Recipient>,
    n: usize,
    rng: &mut ChaCha20Rng,
) -> anyhow::Result<()> {
    let Some(first) = recipients.first() else {
        return Ok(());
    };
    let spec = Registry::standard()
        .get(first.suite())
        .expect("parsed recipient");
    for _ in 0..n {
        if spec.is_password() {
            let mut pass = [0u8; 32];
            rand::Rng::fill_bytes(rng, &mut pass);
            recipients.push(Recipient::password(spec.id, hex::encode(pass).as_bytes()));
        } else {
            let kp = suite::keygen_hidden(spec, rng)?;
            recipients.push(Recipient::PublicKey {
                suite: spec.id,
                pk: kp.pk,
            });
        }
    }
    Ok(())
}

fn identities(
    key: Option<&Path>,
    passphrase: Option<&str>,
    suite: Option<&str>,
    try_all: bool,
) -> anyhow::Result<Vec<Identity>> {
    let registry = Registry::standard();
    let want_password = passphrase.is_some();
    let specs: Vec<&SuiteSpec> = if try_all {
        registry
            .suites()
            .iter()
            .filter(|s| s.is_password() == want_password)
            .collect()
    } else {
        let alias = match (suite, want_password) {
            (Some(a), _) => a,
            (None, true) => "pw",
            (None, false) => bail!("--key needs --suite (or --try-all)"),
        };
        let spec = lookup(alias)?;
        if spec.is_password() != want_password {
            bail!(
                "suite {} does not match the kind of credential given",
                spec.alias
            );
        }
        vec![spec]
    };

    if let Some(pass) = passphrase {
        return Ok(specs
            .into_iter()
            .map(|s| Identity::password(s.id, pass.as_bytes()))
            .collect());
    }
    let path = key.expect("clap requires --key or --passphrase");
    // An unreadable or malformed key is reported like any other decode failure.
    let bytes = fs::read(path).unwrap_or_default();
    Ok(specs
        .into_iter()
        .filter_map(|s| {
            suite::parse_secret_key(s, &bytes)
                .ok()
                .map(|sk| Identity::SecretKey { suite: s.id, sk })
        })
        .collect())
}

fn decode(
    ids: &[Identity],
    input: &Path,
    out: Option<&Path>,
    opts: &DecodeOptions,
    show_stats: bool,
) -> Result<(), DecodeFailed> {
    let blob = fs::read(input).map_err(|_| DecodeFailed)?;
    let (payload, stats) = codec::decode_any(&blob, ids, opts).map_err(|_| DecodeFailed)?;
    match out {
        Some(path) => fs::write(path, &payload).map_err(|_| DecodeFailed)?,
        None => io::stdout().write_all(&payload).map_err(|_| DecodeFailed)?,
    }
    if show_stats {
        let line = format!(
            "exp_count={} kdf_count={} trial_count={} tables_scanned={}",
            stats.exp_count, stats.kdf_count, stats.trial_count, stats.tables_scanned
        );
        if out.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
    Ok(())
}
