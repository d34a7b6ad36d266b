//! Governance roster ingestion.
//!
//! A network starts from two CSV sheets filled in by the people running it:
//! one listing the trustees (the governance anchors) and one listing the
//! genesis stewards together with the validator node each of them operates.
//! This module parses those sheets, checks the cryptographic coupling
//! between DIDs and verkeys, and assembles a [`Roster`] that the genesis
//! builders can rely on without re-validating anything.
//!
//! Validation is collected rather than fail-fast: a sheet with three bad
//! rows produces three diagnostics, each carrying a 1-based data-row number
//! (row 0 refers to the header line).

use crate::keymat::Did;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::net::IpAddr;

/// Expected header of the trustee sheet.
pub const TRUSTEE_HEADER: [&str; 3] = ["name", "did", "verkey"];

/// Expected header of the steward sheet.
pub const STEWARD_HEADER: [&str; 11] = [
    "name",
    "did",
    "verkey",
    "alias",
    "node_ip",
    "node_port",
    "client_ip",
    "client_port",
    "node_verkey",
    "bls_key",
    "bls_pop",
];

/// How many trustees a production network needs at minimum.
const MIN_TRUSTEES: usize = 3;

/// How many genesis stewards a production network needs exactly.
const GENESIS_STEWARD_COUNT: usize = 4;

/// Governance role of a participant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    /// Governance anchor; may authorize new stewards.
    #[serde(rename = "0")]
    Trustee,
    /// Node operator; may register its single validator.
    #[serde(rename = "2")]
    Steward,
}

impl Role {
    /// The ledger's numeric role code, as it appears in NYM transactions.
    pub fn code(self) -> &'static str {
        match self {
            Role::Trustee => "0",
            Role::Steward => "2",
        }
    }
}

/// One person on a governance sheet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParticipantRecord {
    /// Display name from the sheet (non-empty).
    pub name: String,
    /// Base58 DID, coupled to `verkey`.
    pub did: Did,
    /// Base58 Ed25519 verification key.
    pub verkey: String,
    /// Governance role.
    pub role: Role,
}

/// An `ip:port` pair, used for uniqueness checks and simulator addressing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Endpoint {
    /// IPv4 or IPv6 address.
    pub ip: IpAddr,
    /// TCP port (1..=65535).
    pub port: u16,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.ip, self.port)
    }
}

/// The validator node a steward operates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidatorInfo {
    /// Node alias, unique within a roster.
    pub alias: String,
    /// Address other validators connect to.
    pub node_ip: IpAddr,
    /// Port other validators connect to.
    pub node_port: u16,
    /// Address clients connect to.
    pub client_ip: IpAddr,
    /// Port clients connect to.
    pub client_port: u16,
    /// The node's own Ed25519 verkey (base58).
    pub verkey: String,
    /// BLS public key (base58 of 48 compressed bytes).
    pub bls_key: String,
    /// BLS proof of possession (base58 of 96 compressed bytes).
    pub bls_pop: String,
    /// DID of the steward operating this node.
    pub steward_did: Did,
}

impl ValidatorInfo {
    /// The inter-validator endpoint.
    pub fn node_endpoint(&self) -> Endpoint {
        Endpoint {
            ip: self.node_ip,
            port: self.node_port,
        }
    }

    /// The client-facing endpoint.
    pub fn client_endpoint(&self) -> Endpoint {
        Endpoint {
            ip: self.client_ip,
            port: self.client_port,
        }
    }
}

/// A validated set of genesis participants.
///
/// Construction goes through [`validate_roster`]; the rest of the crate
/// treats a `Roster`'s invariants (unique aliases, endpoints, and DIDs; one
/// validator per steward) as established facts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Roster {
    /// Trustees in sheet order.
    pub trustees: Vec<ParticipantRecord>,
    /// Stewards in sheet order.
    pub stewards: Vec<ParticipantRecord>,
    /// Validators in sheet order, parallel to `stewards`.
    pub validators: Vec<ValidatorInfo>,
    /// Whether production counting rules (≥3 trustees, exactly 4 stewards)
    /// were enforced.
    pub strict: bool,
}

/// Diagnostics from parsing or validating roster sheets.
///
/// Row numbers are 1-based data rows; row 0 means the header line.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize)]
#[serde(tag = "code")]
pub enum RosterError {
    /// The CSV itself is malformed: wrong header, wrong column count,
    /// bad UTF-8, or an empty required field.
    #[error("row {row}: {detail}")]
    CsvShape {
        /// Offending row (0 = header).
        row: usize,
        /// What was wrong.
        detail: String,
    },
    /// A key field was not valid base58, or decoded to the wrong length.
    #[error("row {row}, {field}: {detail}")]
    BadEncoding {
        /// Offending row.
        row: usize,
        /// Which column.
        field: &'static str,
        /// What was wrong.
        detail: String,
    },
    /// A DID is not the base58 of the first 16 bytes of its verkey.
    #[error("row {row}: did {did} is not derived from verkey {verkey}")]
    CouplingViolation {
        /// Offending row.
        row: usize,
        /// The DID as written in the sheet.
        did: String,
        /// The verkey it fails to match.
        verkey: String,
    },
    /// An IP failed to parse, a port was out of range, or a node's two
    /// endpoints coincide.
    #[error("row {row}: {detail}")]
    BadEndpoint {
        /// Offending row.
        row: usize,
        /// What was wrong.
        detail: String,
    },
    /// Strict validation requires at least three trustees.
    #[error("a production network needs at least {MIN_TRUSTEES} trustees, found {found}")]
    TooFewTrustees {
        /// How many the sheet had.
        found: usize,
    },
    /// Strict validation requires exactly four genesis stewards.
    #[error("a production network needs exactly {GENESIS_STEWARD_COUNT} genesis stewards, found {found}")]
    WrongStewardCount {
        /// How many the sheet had.
        found: usize,
    },
    /// Two validators share an alias.
    #[error("alias {alias:?} is used by more than one validator")]
    DuplicateAlias {
        /// The repeated alias.
        alias: String,
    },
    /// Two endpoints across the validator set coincide.
    #[error("endpoint {endpoint} is used more than once")]
    DuplicateEndpoint {
        /// The repeated endpoint, as `ip:port`.
        endpoint: String,
    },
    /// The same DID appears more than once across trustees and stewards.
    #[error("did {did} appears more than once in the roster")]
    DuplicateDid {
        /// The repeated DID.
        did: String,
    },
    /// One steward DID owns two or more validators.
    #[error("steward {did} operates more than one validator")]
    MultipleValidatorsPerSteward {
        /// The steward's DID.
        did: String,
    },
}

impl RosterError {
    /// Short machine-readable code for this diagnostic.
    pub fn code(&self) -> &'static str {
        match self {
            RosterError::CsvShape { .. } => "CsvShape",
            RosterError::BadEncoding { .. } => "BadEncoding",
            RosterError::CouplingViolation { .. } => "CouplingViolation",
            RosterError::BadEndpoint { .. } => "BadEndpoint",
            RosterError::TooFewTrustees { .. } => "TooFewTrustees",
            RosterError::WrongStewardCount { .. } => "WrongStewardCount",
            RosterError::DuplicateAlias { .. } => "DuplicateAlias",
            RosterError::DuplicateEndpoint { .. } => "DuplicateEndpoint",
            RosterError::DuplicateDid { .. } => "DuplicateDid",
            RosterError::MultipleValidatorsPerSteward { .. } => "MultipleValidatorsPerSteward",
        }
    }

    /// The sheet row the diagnostic points at, if it is row-scoped.
    pub fn row(&self) -> Option<usize> {
        match self {
            RosterError::CsvShape { row, .. }
            | RosterError::BadEncoding { row, .. }
            | RosterError::CouplingViolation { row, .. }
            | RosterError::BadEndpoint { row, .. } => Some(*row),
            _ => None,
        }
    }
}

/// Parses the trustee sheet (`name,did,verkey`).
///
/// Returns the records in file order, or every diagnostic the sheet
/// produced.
pub fn parse_trustee_csv(content: &[u8]) -> Result<Vec<ParticipantRecord>, Vec<RosterError>> {
    let rows = read_rows(content, &TRUSTEE_HEADER)?;
    let mut records = Vec::new();
    let mut errors = Vec::new();
    for (row, cells) in rows {
        match participant_from_cells(row, &cells[0], &cells[1], &cells[2], Role::Trustee) {
            Ok(record) => records.push(record),
            Err(mut errs) => errors.append(&mut errs),
        }
    }
    if errors.is_empty() {
        Ok(records)
    } else {
        Err(errors)
    }
}

/// Parses the steward sheet
/// (`name,did,verkey,alias,node_ip,node_port,client_ip,client_port,node_verkey,bls_key,bls_pop`).
///
/// Each row yields the steward record and the validator it operates, with
/// `steward_did` taken from the row's own `did` column.
pub fn parse_steward_csv(
    content: &[u8],
) -> Result<Vec<(ParticipantRecord, ValidatorInfo)>, Vec<RosterError>> {
    let rows = read_rows(content, &STEWARD_HEADER)?;
    let mut pairs = Vec::new();
    let mut errors = Vec::new();
    for (row, cells) in rows {
        let steward = match participant_from_cells(row, &cells[0], &cells[1], &cells[2], Role::Steward)
        {
            Ok(record) => Some(record),
            Err(mut errs) => {
                errors.append(&mut errs);
                None
            }
        };
        let validator = match validator_from_cells(row, &cells) {
            Ok(validator) => Some(validator),
            Err(mut errs) => {
                errors.append(&mut errs);
                None
            }
        };
        if let (Some(steward), Some(validator)) = (steward, validator) {
            pairs.push((steward, validator));
        }
    }
    if errors.is_empty() {
        Ok(pairs)
    } else {
        Err(errors)
    }
}

/// Assembles and validates a [`Roster`] from parsed sheets.
///
/// Uniqueness rules (aliases, endpoints, DIDs, one validator per steward)
/// always apply. With `strict` the production counting rules apply too:
/// at least three trustees and exactly four genesis stewards.
///
/// The pairing produced by [`parse_steward_csv`] is a precondition: each
/// validator's `steward_did` must equal its paired steward's DID.
pub fn validate_roster(
    trustees: Vec<ParticipantRecord>,
    steward_pairs: Vec<(ParticipantRecord, ValidatorInfo)>,
    strict: bool,
) -> Result<Roster, Vec<RosterError>> {
    let mut errors = Vec::new();

    if strict {
        if trustees.len() < MIN_TRUSTEES {
            errors.push(RosterError::TooFewTrustees {
                found: trustees.len(),
            });
        }
        if steward_pairs.len() != GENESIS_STEWARD_COUNT {
            errors.push(RosterError::WrongStewardCount {
                found: steward_pairs.len(),
            });
        }
    }

    let (stewards, validators): (Vec<_>, Vec<_>) = steward_pairs.into_iter().unzip();
    for (steward, validator) in stewards.iter().zip(&validators) {
        debug_assert_eq!(
            validator.steward_did, steward.did,
            "steward pairs must come from parse_steward_csv"
        );
    }

    let mut seen_aliases = BTreeSet::new();
    for validator in &validators {
        if !seen_aliases.insert(validator.alias.clone()) {
            errors.push(RosterError::DuplicateAlias {
                alias: validator.alias.clone(),
            });
        }
    }

    let mut seen_endpoints = BTreeSet::new();
    for validator in &validators {
        for endpoint in [validator.node_endpoint(), validator.client_endpoint()] {
            if !seen_endpoints.insert(endpoint) {
                errors.push(RosterError::DuplicateEndpoint {
                    endpoint: endpoint.to_string(),
                });
            }
        }
    }

    let mut seen_dids = BTreeSet::new();
    for record in trustees.iter().chain(&stewards) {
        if !seen_dids.insert(record.did.clone()) {
            errors.push(RosterError::DuplicateDid {
                did: record.did.to_string(),
            });
        }
    }

    let mut validators_per_steward: BTreeMap<&Did, usize> = BTreeMap::new();
    for validator in &validators {
        *validators_per_steward.entry(&validator.steward_did).or_default() += 1;
    }
    for (did, count) in validators_per_steward {
        if count > 1 {
            errors.push(RosterError::MultipleValidatorsPerSteward {
                did: did.to_string(),
            });
        }
    }

    if errors.is_empty() {
        Ok(Roster {
            trustees,
            stewards,
            validators,
            strict,
        })
    } else {
        Err(errors)
    }
}

/// Reads a CSV sheet, enforcing the exact header and column count.
///
/// Returns `(1-based data row, trimmed cells)` pairs.
fn read_rows(
    content: &[u8],
    header: &[&str],
) -> Result<Vec<(usize, Vec<String>)>, Vec<RosterError>> {
    let text = std::str::from_utf8(content).map_err(|_| {
        vec![RosterError::CsvShape {
            row: 0,
            detail: "sheet is not valid UTF-8".into(),
        }]
    })?;

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());

    let found_header = reader.headers().map_err(|e| {
        vec![RosterError::CsvShape {
            row: 0,
            detail: format!("unreadable header: {e}"),
        }]
    })?;
    if found_header.iter().collect::<Vec<_>>() != header {
        return Err(vec![RosterError::CsvShape {
            row: 0,
            detail: format!(
                "expected header {:?}, found {:?}",
                header.join(","),
                found_header.iter().collect::<Vec<_>>().join(",")
            ),
        }]);
    }

    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let row = index + 1;
        match record {
            Ok(record) if record.len() == header.len() => {
                rows.push((row, record.iter().map(str::to_owned).collect()));
            }
            Ok(record) => errors.push(RosterError::CsvShape {
                row,
                detail: format!("expected {} columns, found {}", header.len(), record.len()),
            }),
            Err(e) => errors.push(RosterError::CsvShape {
                row,
                detail: e.to_string(),
            }),
        }
    }
    if errors.is_empty() {
        Ok(rows)
    } else {
        Err(errors)
    }
}

/// Builds a participant from the three identity cells of a row.
fn participant_from_cells(
    row: usize,
    name: &str,
    did: &str,
    verkey: &str,
    role: Role,
) -> Result<ParticipantRecord, Vec<RosterError>> {
    let mut errors = Vec::new();
    if name.is_empty() {
        errors.push(RosterError::CsvShape {
            row,
            detail: "name must be non-empty".into(),
        });
    }
    let did_bytes = decode_field(row, "did", did, 16).map_err(|e| errors.push(e)).ok();
    let verkey_bytes = decode_field(row, "verkey", verkey, 32)
        .map_err(|e| errors.push(e))
        .ok();
    if let (Some(did_bytes), Some(verkey_bytes)) = (did_bytes, verkey_bytes) {
        if did_bytes != verkey_bytes[..16] {
            errors.push(RosterError::CouplingViolation {
                row,
                did: did.to_owned(),
                verkey: verkey.to_owned(),
            });
        }
    }
    if errors.is_empty() {
        Ok(ParticipantRecord {
            name: name.to_owned(),
            did: Did::new(did),
            verkey: verkey.to_owned(),
            role,
        })
    } else {
        Err(errors)
    }
}

/// Builds a validator from the node cells of a steward row.
fn validator_from_cells(row: usize, cells: &[String]) -> Result<ValidatorInfo, Vec<RosterError>> {
    let mut errors = Vec::new();
    let alias = cells[3].clone();
    if alias.is_empty() {
        errors.push(RosterError::CsvShape {
            row,
            detail: "alias must be non-empty".into(),
        });
    }

    let node_ip = parse_ip(row, "node_ip", &cells[4]).map_err(|e| errors.push(e)).ok();
    let node_port = parse_port(row, "node_port", &cells[5])
        .map_err(|e| errors.push(e))
        .ok();
    let client_ip = parse_ip(row, "client_ip", &cells[6])
        .map_err(|e| errors.push(e))
        .ok();
    let client_port = parse_port(row, "client_port", &cells[7])
        .map_err(|e| errors.push(e))
        .ok();

    if let Err(e) = decode_field(row, "node_verkey", &cells[8], 32) {
        errors.push(e);
    }
    if let Err(e) = decode_field(row, "bls_key", &cells[9], 48) {
        errors.push(e);
    }
    if let Err(e) = decode_field(row, "bls_pop", &cells[10], 96) {
        errors.push(e);
    }

    if let (Some(node_ip), Some(node_port), Some(client_ip), Some(client_port)) =
        (node_ip, node_port, client_ip, client_port)
    {
        if (node_ip, node_port) == (client_ip, client_port) {
            errors.push(RosterError::BadEndpoint {
                row,
                detail: format!("node and client endpoints coincide ({node_ip}:{node_port})"),
            });
        }
        if errors.is_empty() {
            return Ok(ValidatorInfo {
                alias,
                node_ip,
                node_port,
                client_ip,
                client_port,
                verkey: cells[8].clone(),
                bls_key: cells[9].clone(),
                bls_pop: cells[10].clone(),
                steward_did: Did::new(cells[1].as_str()),
            });
        }
    }
    Err(errors)
}

/// Decodes a base58 cell and checks its byte length.
fn decode_field(
    row: usize,
    field: &'static str,
    text: &str,
    len: usize,
) -> Result<Vec<u8>, RosterError> {
    let bytes = bs58::decode(text)
        .into_vec()
        .map_err(|e| RosterError::BadEncoding {
            row,
            field,
            detail: e.to_string(),
        })?;
    if bytes.len() != len {
        return Err(RosterError::BadEncoding {
            row,
            field,
            detail: format!("expected {len} bytes, got {}", bytes.len()),
        });
    }
    Ok(bytes)
}

/// Parses an IP cell.
fn parse_ip(row: usize, field: &'static str, text: &str) -> Result<IpAddr, RosterError> {
    text.parse().map_err(|_| RosterError::BadEndpoint {
        row,
        detail: format!("{field} {text:?} is not an IP address"),
    })
}

/// Parses a port cell, rejecting 0.
fn parse_port(row: usize, field: &'static str, text: &str) -> Result<u16, RosterError> {
    match text.parse::<u16>() {
        Ok(0) | Err(_) => Err(RosterError::BadEndpoint {
            row,
            detail: format!("{field} {text:?} is not a port in 1..=65535"),
        }),
        Ok(port) => Ok(port),
    }
}
