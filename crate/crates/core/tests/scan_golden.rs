//! Scan determinism, golden output on the 3 x 3 grid, formats and the cache.
//!
//! Set `UPDATE_GOLDEN=1` to rewrite `tests/data/scan_3x3.jsonl`.

use std::path::PathBuf;

use secant_core::scan::{read_csv, read_json_lines, run_scan, write_csv, write_json_lines, ResultCache, ScanConfig, ScanRecord};

fn untimed(records: &[ScanRecord]) -> Vec<ScanRecord> {
    records.iter().map(ScanRecord::without_timing).collect()
}

#[test]
fn golden_three_by_three() {
    let out = run_scan(&ScanConfig::new(3, 3), None).unwrap();
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/scan_3x3.jsonl");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        let mut buf = Vec::new();
        write_json_lines(&untimed(&out.records), &mut buf).unwrap();
        std::fs::write(&path, buf).unwrap();
    }
    let golden = read_json_lines(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(untimed(&golden), untimed(&out.records));
    assert_eq!(out.summary.defective, vec![(2, 3, 5)]);
    assert!(out.summary.is_clean());
}

#[test]
fn csv_and_json_lines_round_trip() {
    let records = run_scan(&ScanConfig::new(3, 3), None).unwrap().records;
    let mut json = Vec::new();
    write_json_lines(&records, &mut json).unwrap();
    let mut csv = Vec::new();
    write_csv(&records, &mut csv).unwrap();
    let from_json = read_json_lines(json.as_slice()).unwrap();
    let from_csv = read_csv(csv.as_slice()).unwrap();
    assert_eq!(from_json, records);
    assert_eq!(from_csv, records);
}

#[test]
fn worker_count_does_not_change_output() {
    let one = run_scan(&ScanConfig::new(4, 4), None).unwrap();
    let four = run_scan(&ScanConfig { jobs: 4, ..ScanConfig::new(4, 4) }, None).unwrap();
    assert_eq!(untimed(&one.records), untimed(&four.records));
    assert_eq!(one.summary, four.summary);
}

#[test]
fn cache_resumes_and_grows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.jsonl");
    let mut cache = ResultCache::open(&path).unwrap();
    let small = run_scan(&ScanConfig::new(2, 2), Some(&mut cache)).unwrap();
    let written = cache.len();
    assert_eq!(written, small.records.len());

    // A truncated trailing line from an interrupted run is ignored.
    std::fs::OpenOptions::new()
        .append(true)
        .open(&path)
        .and_then(|mut f| std::io::Write::write_all(&mut f, b"{\"m\":9,\"n\""))
        .unwrap();
    let mut cache = ResultCache::open(&path).unwrap();
    assert_eq!(cache.len(), written);
    let again = run_scan(&ScanConfig::new(2, 2), Some(&mut cache)).unwrap();
    assert_eq!(again.records, small.records, "cached records come back verbatim");

    let bigger = run_scan(&ScanConfig::new(3, 3), Some(&mut cache)).unwrap();
    let fresh = run_scan(&ScanConfig::new(3, 3), None).unwrap();
    assert_eq!(untimed(&bigger.records), untimed(&fresh.records));
    assert_eq!(ResultCache::open(&path).unwrap().len(), fresh.records.len());
}
