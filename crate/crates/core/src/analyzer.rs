//! Anonymity-set analysis of object-size datasets under padding functions.
//!
//! Objects whose padded sizes coincide are indistinguishable by length. For
//! each padding function the analysis reports how many objects stay unique,
//! the distribution of anonymity-set sizes, and the mean overhead.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::io;
use std::path::Path;

use rand::distr::{Distribution, Uniform};
use rand::Rng;
use rand_distr::Zipf;

use crate::padme::{pad_len, PadSpec};

/// A named list of object sizes in bytes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeDataset {
    pub name: String,
    pub sizes: Vec<u64>,
}

/// Input file layout for [`load_sizes`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SizeFormat {
    /// One integer per line; blank lines and lines starting with `#` are skipped.
    Lines,
    /// CSV with a header row; sizes are read from the named column.
    CsvColumn(String),
}

#[derive(Debug, thiserror::Error)]
pub enum AnalyzeError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("line {line}: '{token}' is not a positive integer")]
    Parse { line: u64, token: String },
    #[error("no column named '{0}'")]
    MissingColumn(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("dataset is empty")]
    Empty,
}

/// Reads a dataset from a file. The dataset is named after the file stem.
pub fn load_sizes(path: &Path, format: &SizeFormat) -> Result<SizeDataset, AnalyzeError> {
    let text = std::fs::read_to_string(path).map_err(|source| AnalyzeError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_sizes(&name, &text, format)
}

/// Parses dataset text; see [`SizeFormat`].
pub fn parse_sizes(
    name: &str,
    text: &str,
    format: &SizeFormat,
) -> Result<SizeDataset, AnalyzeError> {
    let parse = |line: u64, token: &str| -> Result<u64, AnalyzeError> {
        match token.trim().parse::<u64>() {
            Ok(v) if v >= 1 => Ok(v),
            _ => Err(AnalyzeError::Parse {
                line,
                token: token.trim().to_string(),
            }),
        }
    };
    let mut sizes = Vec::new();
    match format {
        SizeFormat::Lines => {
            for (i, line) in text.lines().enumerate() {
                let t = line.trim();
                if t.is_empty() || t.starts_with('#') {
                    continue;
                }
                sizes.push(parse(i as u64 + 1, t)?);
            }
        }
        SizeFormat::CsvColumn(column) => {
            let mut rdr = csv::ReaderBuilder::new()
                .trim(csv::Trim::All)
                .from_reader(text.as_bytes());
            let idx = rdr
                .headers()?
                .iter()
                .position(|h| h == column)
                .ok_or_else(|| AnalyzeError::MissingColumn(column.clone()))?;
            for rec in rdr.records() {
                let rec = rec?;
                let line = rec.position().map_or(0, |p| p.line());
                sizes.push(parse(line, rec.get(idx).unwrap_or(""))?);
            }
        }
    }
    if sizes.is_empty() {
        return Err(AnalyzeError::Empty);
    }
    Ok(SizeDataset {
        name: name.to_string(),
        sizes,
    })
}

/// Anonymity statistics of one dataset under one padding function.
#[derive(Clone, Debug, PartialEq)]
pub struct AnonymityReport {
    pub pad: PadSpec,
    /// Per object, in dataset order: how many objects share its padded size.
    pub set_sizes: Vec<u64>,
    /// Percentage of objects with an anonymity set of size 1.
    pub unique_pct: f64,
    /// Arithmetic mean of per-object (padded - size) / size, in percent.
    pub mean_overhead_pct: f64,
    /// Lower median of `set_sizes`.
    pub median_set: u64,
    pub max_set: u64,
    /// Set size -> number of objects having that set size.
    pub histogram: BTreeMap<u64, u64>,
}

/// Pads every size and groups equal padded sizes.
pub fn profile(ds: &SizeDataset, spec: PadSpec) -> AnonymityReport {
    let padded: Vec<u64> = ds.sizes.iter().map(|&s| pad_len(spec, s)).collect();
    let mut groups: HashMap<u64, u64> = HashMap::new();
    for &p in &padded {
        *groups.entry(p).or_default() += 1;
    }
    let set_sizes: Vec<u64> = padded.iter().map(|p| groups[p]).collect();
    let mut histogram = BTreeMap::new();
    for &s in &set_sizes {
        *histogram.entry(s).or_default() += 1;
    }
    let n = ds.sizes.len().max(1) as f64;
    let unique = histogram.get(&1).copied().unwrap_or(0);
    let overhead_sum: f64 = ds
        .sizes
        .iter()
        .zip(&padded)
        .map(|(&s, &p)| (p - s) as f64 / s as f64)
        .sum();
    let mut sorted = set_sizes.clone();
    sorted.sort_unstable();
    AnonymityReport {
        pad: spec,
        unique_pct: 100.0 * unique as f64 / n,
        mean_overhead_pct: 100.0 * overhead_sum / n,
        median_set: sorted
            .get((sorted.len().saturating_sub(1)) / 2)
            .copied()
            .unwrap_or(0),
        max_set: sorted.last().copied().unwrap_or(0),
        histogram,
        set_sizes,
    }
}

/// Reports for several padding functions over one dataset, in the given order.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub dataset: String,
    pub objects: usize,
    pub reports: Vec<AnonymityReport>,
}

pub fn compare(ds: &SizeDataset, specs: &[PadSpec]) -> Comparison {
    Comparison {
        dataset: ds.name.clone(),
        objects: ds.sizes.len(),
        reports: specs.iter().map(|&s| profile(ds, s)).collect(),
    }
}

impl Comparison {
    /// Aligned text table.
    pub fn render_table(&self) -> String {
        let header = [
            "pad",
            "unique %",
            "mean overhead %",
            "median set",
            "max set",
        ];
        let rows: Vec<[String; 5]> = self
            .reports
            .iter()
            .map(|r| {
                [
                    r.pad.to_string(),
                    format!("{:.2}", r.unique_pct),
                    format!("{:.2}", r.mean_overhead_pct),
                    r.median_set.to_string(),
                    r.max_set.to_string(),
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = format!("dataset {} ({} objects)\n", self.dataset, self.objects);
        let line = |cells: &[&str]| {
            let mut s = String::new();
            for (i, (c, w)) in cells.iter().zip(widths).enumerate() {
                if i == 0 {
                    let _ = write!(s, "{c:<w$}");
                } else {
                    let _ = write!(s, "  {c:>w$}");
                }
            }
            s.push('\n');
            s
        };
        out.push_str(&line(&header));
        for row in &rows {
            let cells: Vec<&str> = row.iter().map(String::as_str).collect();
            out.push_str(&line(&cells));
        }
        out
    }

    /// CSV with columns pad,unique_pct,mean_overhead_pct,median_set,max_set.
    pub fn write_csv<W: io::Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record([
            "pad",
            "unique_pct",
            "mean_overhead_pct",
            "median_set",
            "max_set",
        ])?;
        for r in &self.reports {
            wtr.write_record([
                r.pad.to_string(),
                format!("{:.4}", r.unique_pct),
                format!("{:.4}", r.mean_overhead_pct),
                r.median_set.to_string(),
                r.max_set.to_string(),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// `n` sizes whose logarithm is uniform on `[ln min, ln max]`.
pub fn synthetic_log_uniform<R: Rng + ?Sized>(
    n: usize,
    min: u64,
    max: u64,
    rng: &mut R,
) -> SizeDataset {
    let lo = (min.max(1) as f64).ln();
    let hi = (max.max(min.max(1)) as f64).ln();
    let dist = Uniform::new_inclusive(lo, hi).expect("finite bounds");
    let sizes = (0..n)
        .map(|_| (dist.sample(rng).exp() as u64).clamp(min.max(1), max.max(1)))
        .collect();
    SizeDataset {
        name: format!("log-uniform[{min},{max}]"),
        sizes,
    }
}

/// `n` objects drawn with Zipf(`exponent`) popularity from `distinct`
/// log-uniform base sizes in `[min, max]`: a few sizes repeat a lot, most are rare.
pub fn synthetic_zipf<R: Rng + ?Sized>(
    n: usize,
    distinct: usize,
    exponent: f64,
    min: u64,
    max: u64,
    rng: &mut R,
) -> SizeDataset {
    let base = synthetic_log_uniform(distinct.max(1), min, max, rng).sizes;
    let zipf = Zipf::new(base.len() as f64, exponent).expect("valid Zipf parameters");
    let sizes = (0..n)
        .map(|_| {
            let rank = zipf.sample(rng) as usize;
            base[rank.clamp(1, base.len()) - 1]
        })
        .collect();
    SizeDataset {
        name: format!("zipf(s={exponent})"),
        sizes,
    }
}

/// A small checked-in dataset of synthetic file sizes.
pub fn sample_dataset() -> SizeDataset {
    parse_sizes(
        "sample",
        include_str!("../data/sample_sizes.txt"),
        &SizeFormat::Lines,
    )
    .expect("bundled sample parses")
}
