//! Golden-file checks for the reference network.
//!
//! The CSVs and `.golden` files under `tests/fixtures/` were produced by an
//! independent implementation of the identity derivation, serialization, and
//! txnId chain, and are frozen: this crate must reproduce them byte for
//! byte, forever. A diff here means the wire format drifted.

use indyforge::genesis::{
    build_domain_genesis, build_pool_genesis, parse_genesis, serialize_genesis,
    verify_genesis_pair, GenesisKind,
};
use indyforge::roster::{parse_steward_csv, parse_trustee_csv, validate_roster, Roster};
use indyforge::synth;
use std::fs;
use std::path::PathBuf;

fn fixture(name: &str) -> Vec<u8> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    fs::read(&path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

fn roster_from_fixture_csvs() -> Roster {
    let trustees = parse_trustee_csv(&fixture("trustees.csv")).expect("trustee sheet parses");
    let pairs = parse_steward_csv(&fixture("stewards.csv")).expect("steward sheet parses");
    validate_roster(trustees, pairs, true).expect("fixture roster is strict-valid")
}

#[test]
fn csv_fixtures_equal_the_synthetic_fixture_roster() {
    assert_eq!(roster_from_fixture_csvs(), synth::fixture_roster());
}

#[test]
fn domain_genesis_matches_golden_bytes() {
    let roster = roster_from_fixture_csvs();
    let bytes = serialize_genesis(&build_domain_genesis(&roster));
    assert_eq!(
        bytes,
        fixture("domain_transactions_genesis.golden"),
        "domain genesis bytes drifted from the frozen golden file"
    );
}

#[test]
fn pool_genesis_matches_golden_bytes() {
    let roster = roster_from_fixture_csvs();
    let bytes = serialize_genesis(&build_pool_genesis(&roster));
    assert_eq!(
        bytes,
        fixture("pool_transactions_genesis.golden"),
        "pool genesis bytes drifted from the frozen golden file"
    );
}

#[test]
fn golden_files_parse_back_to_the_built_docs() {
    let roster = roster_from_fixture_csvs();
    let domain = parse_genesis(&fixture("domain_transactions_genesis.golden"), GenesisKind::Domain)
        .expect("golden domain file parses");
    let pool = parse_genesis(&fixture("pool_transactions_genesis.golden"), GenesisKind::Pool)
        .expect("golden pool file parses");
    assert_eq!(domain, build_domain_genesis(&roster));
    assert_eq!(pool, build_pool_genesis(&roster));
    assert_eq!(domain.txns.len(), 7);
    assert_eq!(pool.txns.len(), 4);
}

#[test]
fn golden_pair_is_launch_ready_under_strict_rules() {
    let domain = parse_genesis(&fixture("domain_transactions_genesis.golden"), GenesisKind::Domain)
        .unwrap();
    let pool =
        parse_genesis(&fixture("pool_transactions_genesis.golden"), GenesisKind::Pool).unwrap();
    let report = verify_genesis_pair(&domain, &pool, true);
    assert!(report.is_launch_ready(), "violations: {:?}", report.violations);
}
