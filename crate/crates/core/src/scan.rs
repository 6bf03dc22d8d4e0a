//! Grid scan of `T(m,n;1,2;s)` against the conjectured defective list.
//!
//! For each `(m, n)` the scan walks `s = 1..=ceil(N/(m+n+1)) + 1` with one
//! incremental rank pass. A deficient step is re-evaluated with the full trial
//! count and cross-checked under a second prime.

use std::collections::HashMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abundance::{ambient_dim, in_unbalanced_range, unbalanced_expected, AbundanceClass, Statement};
use crate::error::{Error, Result};
use crate::field_linalg::PrimeField;
use crate::prover::{conjecture_verdict, ConjectureVerdict};
use crate::terracini::{eval_statement, rank_profile_timed};

const DEGREE: usize = 2;

/// One `(m, n, s)` measurement. Field order is the JSON-lines key order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub m: usize,
    pub n: usize,
    pub d: usize,
    pub s: usize,
    pub t: usize,
    pub expected: usize,
    pub rank: usize,
    pub defect: usize,
    pub abundance: AbundanceClass,
    #[serde(with = "conjecture_tag")]
    pub conjecture: ConjectureVerdict,
    pub agree: bool,
    pub seed: u64,
    pub prime: u64,
    pub ms: u64,
    /// Rank under the cross-check prime, present on defective records.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cross_prime_rank: Option<usize>,
    /// `s [C(n+2,2) + m + 1 - s]`, present inside an unbalanced range.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unbalanced_expected: Option<usize>,
}

impl ScanRecord {
    pub fn triple(&self) -> (usize, usize, usize) {
        (self.m, self.n, self.s)
    }

    /// The record ignoring its timing.
    pub fn without_timing(&self) -> ScanRecord {
        ScanRecord { ms: 0, ..self.clone() }
    }

    fn cache_key(&self) -> CacheKey {
        CacheKey { m: self.m, n: self.n, d: self.d, s: self.s, t: self.t, seed: self.seed, prime: self.prime }
    }
}

mod conjecture_tag {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use crate::prover::ConjectureVerdict;

    pub fn serialize<S: Serializer>(v: &ConjectureVerdict, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(v.tag())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ConjectureVerdict, D::Error> {
        let tag = String::deserialize(d)?;
        ConjectureVerdict::from_tag(&tag).ok_or_else(|| D::Error::custom(format!("unknown conjecture tag {tag:?}")))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ScanConfig {
    pub max_m: usize,
    pub max_n: usize,
    pub seed: u64,
    pub trials: usize,
    pub field: PrimeField,
    pub cross_field: PrimeField,
    pub jobs: usize,
}

impl ScanConfig {
    pub fn new(max_m: usize, max_n: usize) -> Self {
        ScanConfig {
            max_m,
            max_n,
            seed: 0,
            trials: 3,
            field: PrimeField::default_field(),
            cross_field: PrimeField::cross_check_field(),
            jobs: 1,
        }
    }

    /// The cross-check prime is swapped out if it equals the working prime.
    pub fn with_field(mut self, field: PrimeField) -> Self {
        self.field = field;
        self.cross_field = if field == PrimeField::cross_check_field() {
            PrimeField::default_field()
        } else {
            PrimeField::cross_check_field()
        };
        self
    }
}

/// Last `s` scanned for `(m, n)`: one past the first filling value.
pub fn s_end(m: usize, n: usize) -> usize {
    ambient_dim(m, n, DEGREE).div_ceil(m + n + 1) + 1
}

fn record(cfg: &ScanConfig, st: &Statement, rank: usize, ms: u64, cross: Option<usize>) -> ScanRecord {
    let expected = st.expected_dim();
    let defect = expected.saturating_sub(rank);
    let conjecture = conjecture_verdict(st.m, st.n, st.s);
    ScanRecord {
        m: st.m,
        n: st.n,
        d: st.d,
        s: st.s,
        t: st.t,
        expected,
        rank,
        defect,
        abundance: st.class(),
        conjecture,
        agree: (defect > 0) == conjecture.is_defective(),
        seed: cfg.seed,
        prime: cfg.field.modulus(),
        ms,
        cross_prime_rank: cross,
        unbalanced_expected: in_unbalanced_range(st.m, st.n, DEGREE, st.s)
            .then(|| unbalanced_expected(st.m, st.n, DEGREE, st.s)),
    }
}

/// All records for one `(m, n)`.
pub fn scan_pair(cfg: &ScanConfig, m: usize, n: usize) -> Result<Vec<ScanRecord>> {
    let end = s_end(m, n);
    let base = Statement::secant(m, n, 0);
    let profile = rank_profile_timed(&cfg.field, &base, end, cfg.seed, 0)?;
    let mut out = Vec::with_capacity(end);
    for (s, &(rank0, step)) in profile.iter().enumerate().skip(1) {
        let st = base.with_st(s, 0);
        if rank0 >= st.expected_dim() {
            out.push(record(cfg, &st, rank0, step.as_millis() as u64, None));
            continue;
        }
        let start = Instant::now();
        let v = eval_statement(&cfg.field, &st, cfg.seed, cfg.trials)?;
        let cross = if v.is_true() {
            None
        } else {
            Some(eval_statement(&cfg.cross_field, &st, cfg.seed, cfg.trials)?.rank)
        };
        let ms = (step + start.elapsed()).as_millis() as u64;
        out.push(record(cfg, &st, v.rank, ms, cross));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct CacheKey {
    m: usize,
    n: usize,
    d: usize,
    s: usize,
    t: usize,
    seed: u64,
    prime: u64,
}

/// Append-only JSON-lines cache keyed by (statement, seed, prime).
#[derive(Debug)]
pub struct ResultCache {
    path: PathBuf,
    entries: HashMap<CacheKey, ScanRecord>,
}

impl ResultCache {
    /// Loads `path` if it exists. Lines that do not parse, such as a line cut
    /// short by an interrupted run, are skipped.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = HashMap::new();
        if path.exists() {
            for line in BufReader::new(File::open(&path)?).lines() {
                if let Ok(rec) = serde_json::from_str::<ScanRecord>(&line?) {
                    entries.insert(rec.cache_key(), rec);
                }
            }
        }
        Ok(ResultCache { path, entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn lookup_pair(&self, cfg: &ScanConfig, m: usize, n: usize) -> Option<Vec<ScanRecord>> {
        (1..=s_end(m, n))
            .map(|s| {
                let key = CacheKey { m, n, d: DEGREE, s, t: 0, seed: cfg.seed, prime: cfg.field.modulus() };
                self.entries.get(&key).cloned()
            })
            .collect()
    }

    /// Appends the records not yet cached.
    pub fn append(&mut self, records: &[ScanRecord]) -> Result<usize> {
        let fresh: Vec<&ScanRecord> = records.iter().filter(|r| !self.entries.contains_key(&r.cache_key())).collect();
        if fresh.is_empty() {
            return Ok(0);
        }
        let mut file = OpenOptions::new().create(true).read(true).append(true).open(&self.path)?;
        // Start on a fresh line if an interrupted run left a partial one.
        let mut needs_newline = false;
        if file.metadata()?.len() > 0 {
            let mut last = [0u8; 1];
            file.seek(SeekFrom::End(-1))?;
            file.read_exact(&mut last)?;
            needs_newline = last[0] != b'\n';
        }
        let mut w = BufWriter::new(file);
        if needs_newline {
            writeln!(w)?;
        }
        for r in &fresh {
            writeln!(w, "{}", to_json_line(r)?)?;
        }
        w.flush()?;
        for r in fresh.iter() {
            self.entries.insert(r.cache_key(), (*r).clone());
        }
        Ok(fresh.len())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub records: usize,
    pub defective: Vec<(usize, usize, usize)>,
    pub disagreements: Vec<(usize, usize, usize)>,
    /// Defective records whose rank differs under the cross-check prime.
    pub cross_prime_mismatches: Vec<(usize, usize, usize)>,
}

impl ScanSummary {
    pub fn from_records(records: &[ScanRecord]) -> Self {
        let pick = |f: &dyn Fn(&ScanRecord) -> bool| records.iter().filter(|r| f(r)).map(ScanRecord::triple).collect();
        ScanSummary {
            records: records.len(),
            defective: pick(&|r| r.defect > 0),
            disagreements: pick(&|r| !r.agree),
            cross_prime_mismatches: pick(&|r| r.cross_prime_rank.is_some_and(|c| c != r.rank)),
        }
    }

    pub fn is_clean(&self) -> bool {
        self.disagreements.is_empty() && self.cross_prime_mismatches.is_empty()
    }
}

impl fmt::Display for ScanSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[(usize, usize, usize)]| {
            if v.is_empty() {
                "none".to_string()
            } else {
                v.iter().map(|(m, n, s)| format!("({m},{n},{s})")).collect::<Vec<_>>().join(" ")
            }
        };
        writeln!(f, "records: {}", self.records)?;
        writeln!(f, "defective: {}", list(&self.defective))?;
        writeln!(f, "conjecture disagreements: {}", list(&self.disagreements))?;
        write!(f, "cross-prime mismatches: {}", list(&self.cross_prime_mismatches))
    }
}

#[derive(Clone, Debug)]
pub struct ScanOutput {
    pub records: Vec<ScanRecord>,
    pub summary: ScanSummary,
}

/// Runs the grid `1..=max_m × 1..=max_n` on a pool of `cfg.jobs` workers.
/// Records come back ordered by `(m, n, s)`.
pub fn run_scan(cfg: &ScanConfig, cache: Option<&mut ResultCache>) -> Result<ScanOutput> {
    let pairs: Vec<(usize, usize)> =
        (1..=cfg.max_m).flat_map(|m| (1..=cfg.max_n).map(move |n| (m, n))).collect();
    let cached: Vec<Option<Vec<ScanRecord>>> =
        pairs.iter().map(|&(m, n)| cache.as_ref().and_then(|c| c.lookup_pair(cfg, m, n))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::OutOfRange(format!("worker pool: {e}")))?;
    let per_pair: Vec<Vec<ScanRecord>> = pool.install(|| {
        pairs
            .par_iter()
            .zip(cached.into_par_iter())
            .map(|(&(m, n), hit)| match hit {
                Some(recs) => Ok(recs),
                None => scan_pair(cfg, m, n),
            })
            .collect::<Result<_>>()
    })?;
    let records: Vec<ScanRecord> = per_pair.into_iter().flatten().collect();
    if let Some(c) = cache {
        c.append(&records)?;
    }
    let summary = ScanSummary::from_records(&records);
    Ok(ScanOutput { records, summary })
}

pub fn to_json_line(r: &ScanRecord) -> Result<String> {
    serde_json::to_string(r).map_err(|e| Error::Parse(e.to_string()))
}

pub fn write_json_lines<W: Write>(records: &[ScanRecord], mut w: W) -> Result<()> {
    for r in records {
        writeln!(w, "{}", to_json_line(r)?)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_json_lines<R: Read>(r: R) -> Result<Vec<ScanRecord>> {
    BufReader::new(r)
        .lines()
        .filter(|l| l.as_ref().map_or(true, |l| !l.trim().is_empty()))
        .map(|l| serde_json::from_str(&l?).map_err(|e| Error::Parse(e.to_string())))
        .collect()
}

/// CSV layout of a [`ScanRecord`]: the optional fields are always present as
/// columns, empty when absent.
#[derive(Serialize, Deserialize)]
struct CsvRow {
    m: usize,
    n: usize,
    d: usize,
    s: usize,
    t: usize,
    expected: usize,
    rank: usize,
    defect: usize,
    abundance: AbundanceClass,
    #[serde(with = "conjecture_tag")]
    conjecture: ConjectureVerdict,
    agree: bool,
    seed: u64,
    prime: u64,
    ms: u64,
    cross_prime_rank: Option<usize>,
    unbalanced_expected: Option<usize>,
}

impl From<&ScanRecord> for CsvRow {
    fn from(r: &ScanRecord) -> Self {
        CsvRow {
            m: r.m,
            n: r.n,
            d: r.d,
            s: r.s,
            t: r.t,
            expected: r.expected,
            rank: r.rank,
            defect: r.defect,
            abundance: r.abundance,
            conjecture: r.conjecture,
            agree: r.agree,
            seed: r.seed,
            prime: r.prime,
            ms: r.ms,
            cross_prime_rank: r.cross_prime_rank,
            unbalanced_expected: r.unbalanced_expected,
        }
    }
}

impl From<CsvRow> for ScanRecord {
    fn from(r: CsvRow) -> Self {
        ScanRecord {
            m: r.m,
            n: r.n,
            d: r.d,
            s: r.s,
            t: r.t,
            expected: r.expected,
            rank: r.rank,
            defect: r.defect,
            abundance: r.abundance,
            conjecture: r.conjecture,
            agree: r.agree,
            seed: r.seed,
            prime: r.prime,
            ms: r.ms,
            cross_prime_rank: r.cross_prime_rank,
            unbalanced_expected: r.unbalanced_expected,
        }
    }
}

pub fn write_csv<W: Write>(records: &[ScanRecord], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in records {
        wr.serialize(CsvRow::from(r)).map_err(csv_error)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(r: R) -> Result<Vec<ScanRecord>> {
    csv::Reader::from_reader(r)
        .deserialize::<CsvRow>()
        .map(|rec| rec.map(ScanRecord::from).map_err(csv_error))
        .collect()
}

fn csv_error(e: csv::Error) -> Error {
    if e.is_io_error() {
        Error::Io(e.to_string())
    } else {
        Error::Parse(e.to_string())
    }
}
