//! Deterministic synthetic participants, validators, and rosters.
//!
//! Demo networks and tests need key material that is stable across runs
//! without shipping secret files around. The convention here is the one used
//! for developer seeds in Indy tooling: a participant named `Steward1` gets
//! the 32-byte seed consisting of the name left-padded with ASCII `'0'`.
//! Everything else (DIDs, verkeys, BLS keys) derives from that seed via
//! [`crate::keymat`], so a name fully determines an identity.
//!
//! These helpers are real API — the simulator's scripted measurements build
//! their pools here — but they mint *well-known* keys. Never use them for a
//! network that matters.

use crate::keymat::{derive_bls_identity, derive_signing_identity, Seed};
use crate::roster::{validate_roster, ParticipantRecord, Role, Roster, ValidatorInfo};
use std::net::{IpAddr, Ipv4Addr};

/// The conventional demo seed for a name: the name's UTF-8 bytes,
/// left-padded with ASCII `'0'` to exactly 32 bytes.
///
/// # Panics
///
/// Panics if the name is longer than 32 bytes; synthetic names are short by
/// construction.
pub fn demo_seed(name: &str) -> Seed {
    assert!(
        name.len() <= 32,
        "demo names must fit a 32-byte seed, got {name:?}"
    );
    let mut bytes = vec![b'0'; 32 - name.len()];
    bytes.extend_from_slice(name.as_bytes());
    Seed::from_bytes(&bytes).expect("padded to exactly 32 bytes")
}

/// A participant whose identity derives from `demo_seed(name)`.
pub fn participant(name: &str, role: Role) -> ParticipantRecord {
    let identity = derive_signing_identity(&demo_seed(name));
    ParticipantRecord {
        name: name.to_owned(),
        did: identity.did,
        verkey: identity.verkey,
        role,
    }
}

/// A validator owned by `steward`, with keys from `demo_seed(node_name)`
/// and the conventional ports 9701 (node) / 9702 (client) on `ip`.
pub fn validator_for(
    steward: &ParticipantRecord,
    alias: &str,
    node_name: &str,
    ip: IpAddr,
) -> ValidatorInfo {
    let node_identity = derive_signing_identity(&demo_seed(node_name));
    let bls = derive_bls_identity(&demo_seed(node_name));
    ValidatorInfo {
        alias: alias.to_owned(),
        node_ip: ip,
        node_port: 9701,
        client_ip: ip,
        client_port: 9702,
        verkey: node_identity.verkey,
        bls_key: bls.bls_key,
        bls_pop: bls.bls_pop,
        steward_did: steward.did.clone(),
    }
}

/// The k-th steward (`Steward<k>`) together with its validator
/// (`node<k>`, keys from `Node<k>`, address `10.1.x.y` derived from `k`).
pub fn steward_with_node(index: usize) -> (ParticipantRecord, ValidatorInfo) {
    let steward = participant(&format!("Steward{index}"), Role::Steward);
    let validator = validator_for(
        &steward,
        &format!("node{index}"),
        &format!("Node{index}"),
        synth_ip(index),
    );
    (steward, validator)
}

/// Trustees `Trustee1..=Trustee<n>`.
pub fn trustees(count: usize) -> Vec<ParticipantRecord> {
    (1..=count)
        .map(|i| participant(&format!("Trustee{i}"), Role::Trustee))
        .collect()
}

/// A validated synthetic roster with the given participant counts.
///
/// Stewards and validators are paired one-to-one, so `validators` is also
/// the steward count.
pub fn roster(trustee_count: usize, validator_count: usize, strict: bool) -> Roster {
    let pairs = (1..=validator_count).map(steward_with_node).collect();
    validate_roster(trustees(trustee_count), pairs, strict)
        .expect("synthetic rosters are valid by construction")
}

/// The repository's reference network: trustees `Trustee1..3` and stewards
/// `Steward1..4` running `node1..node4` on `10.0.0.1..4`, validated under
/// the production rules. Matches the CSV fixtures checked into the test
/// suite.
pub fn fixture_roster() -> Roster {
    let pairs = (1..=4)
        .map(|k| {
            let steward = participant(&format!("Steward{k}"), Role::Steward);
            let validator = validator_for(
                &steward,
                &format!("node{k}"),
                &format!("Node{k}"),
                IpAddr::V4(Ipv4Addr::new(10, 0, 0, k as u8)),
            );
            (steward, validator)
        })
        .collect();
    validate_roster(trustees(3), pairs, true).expect("the fixture roster is valid")
}

/// A unique synthetic address per index, outside the fixture's `10.0.0.0/24`.
fn synth_ip(index: usize) -> IpAddr {
    assert!((1..=200 * 200).contains(&index), "synthetic index out of range");
    let zero_based = index - 1;
    IpAddr::V4(Ipv4Addr::new(
        10,
        1,
        (zero_based / 200) as u8,
        (zero_based % 200 + 1) as u8,
    ))
}
