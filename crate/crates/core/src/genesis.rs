//! Genesis transaction files.
//!
//! A network boots from two line-delimited JSON files: the domain file
//! (`domain_transactions_genesis`) registering participants via NYM
//! transactions, and the pool file (`pool_transactions_genesis`) registering
//! validator nodes via NODE transactions. The JSON shape follows the layout
//! existing Indy tooling expects (`txn` / `txnMetadata` / `reqSignature` /
//! `ver`, type `"1"` for NYM and `"0"` for NODE); the exact field list is
//! frozen in `docs/genesis-format.md`.
//!
//! Serialization is canonical — lexicographic keys, compact separators, LF
//! line endings — so equal documents are byte-identical across runs and
//! platforms. Each transaction carries a `txnId` forming a SHA-256 hash
//! chain: the id of transaction *k* hashes the previous id (as lowercase hex
//! text; empty for the first transaction) followed by the canonical bytes of
//! the line with `txnId` removed. Any edit to a committed line therefore
//! breaks the chain at that position, and [`parse_genesis`] notices.

use crate::canon::to_canonical_json;
use crate::keymat::{verify_pop, Did};
use crate::roster::{Endpoint, Role, Roster};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::net::IpAddr;

/// Conventional file name for the domain genesis file.
pub const DOMAIN_FILE_NAME: &str = "domain_transactions_genesis";

/// Conventional file name for the pool genesis file.
pub const POOL_FILE_NAME: &str = "pool_transactions_genesis";

/// The service every genesis node advertises.
pub const SERVICE_VALIDATOR: &str = "VALIDATOR";

/// Which of the two genesis files a document represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenesisKind {
    /// Participant identities (NYM transactions only).
    Domain,
    /// Validator definitions (NODE transactions only).
    Pool,
}

impl fmt::Display for GenesisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenesisKind::Domain => "domain",
            GenesisKind::Pool => "pool",
        })
    }
}

/// A NYM transaction: registers a participant and its role.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NymTxn {
    /// The participant's DID.
    pub dest: Did,
    /// The participant's verkey (base58).
    pub verkey: String,
    /// Governance role (`"0"` trustee, `"2"` steward on the wire).
    pub role: Role,
    /// Display alias, carried over from the roster's name column.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alias: Option<String>,
}

/// The payload of a NODE transaction.
///
/// Fields mirror [`crate::roster::ValidatorInfo`] and use the wire names
/// Indy tooling expects (`blskey`, `blskey_pop`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeData {
    /// Node alias.
    pub alias: String,
    /// BLS public key (base58).
    pub blskey: String,
    /// BLS proof of possession (base58).
    pub blskey_pop: String,
    /// Client-facing address.
    pub client_ip: IpAddr,
    /// Client-facing port.
    pub client_port: u16,
    /// Inter-validator address.
    pub node_ip: IpAddr,
    /// Inter-validator port.
    pub node_port: u16,
    /// Advertised services; must contain `"VALIDATOR"`.
    pub services: Vec<String>,
}

impl NodeData {
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

/// A NODE transaction: registers a validator on behalf of a steward.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeTxn {
    /// The node's own verkey (base58) — the transaction target.
    pub dest: String,
    /// Network and key material of the node.
    pub data: NodeData,
    /// DID of the steward submitting the node.
    pub from: Did,
}

impl From<&crate::roster::ParticipantRecord> for NymTxn {
    fn from(record: &crate::roster::ParticipantRecord) -> Self {
        NymTxn {
            dest: record.did.clone(),
            verkey: record.verkey.clone(),
            role: record.role,
            alias: Some(record.name.clone()),
        }
    }
}

impl From<&crate::roster::ValidatorInfo> for NodeTxn {
    fn from(validator: &crate::roster::ValidatorInfo) -> Self {
        NodeTxn {
            dest: validator.verkey.clone(),
            data: NodeData {
                alias: validator.alias.clone(),
                blskey: validator.bls_key.clone(),
                blskey_pop: validator.bls_pop.clone(),
                client_ip: validator.client_ip,
                client_port: validator.client_port,
                node_ip: validator.node_ip,
                node_port: validator.node_port,
                services: vec![SERVICE_VALIDATOR.to_owned()],
            },
            from: validator.steward_did.clone(),
        }
    }
}

impl NodeTxn {
    /// The roster-shaped view of this transaction.
    pub fn to_validator(&self) -> crate::roster::ValidatorInfo {
        crate::roster::ValidatorInfo {
            alias: self.data.alias.clone(),
            node_ip: self.data.node_ip,
            node_port: self.data.node_port,
            client_ip: self.data.client_ip,
            client_port: self.data.client_port,
            verkey: self.dest.clone(),
            bls_key: self.data.blskey.clone(),
            bls_pop: self.data.blskey_pop.clone(),
            steward_did: self.from.clone(),
        }
    }
}

/// Either kind of genesis-capable transaction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Txn {
    /// Participant registration (wire type `"1"`).
    #[serde(rename = "1")]
    Nym(NymTxn),
    /// Validator registration (wire type `"0"`).
    #[serde(rename = "0")]
    Node(NodeTxn),
}

impl Txn {
    /// Which file this transaction belongs to.
    pub fn kind(&self) -> GenesisKind {
        match self {
            Txn::Nym(_) => GenesisKind::Domain,
            Txn::Node(_) => GenesisKind::Pool,
        }
    }
}

/// A transaction as it sits in a genesis file: payload plus metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenesisTxn {
    /// Position in the file, 1-based and gap-free.
    pub seq_no: u64,
    /// Lowercase hex SHA-256 chain digest.
    pub txn_id: String,
    /// The transaction itself.
    pub txn: Txn,
}

/// An ordered, chain-linked genesis document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenesisDoc {
    /// Domain or pool.
    pub kind: GenesisKind,
    /// Transactions with seqNo exactly 1..=N.
    pub txns: Vec<GenesisTxn>,
}

/// Parse-time failures. Line numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize)]
#[serde(tag = "code")]
pub enum GenesisError {
    /// A line is not the JSON object the format prescribes.
    #[error("line {line}: {detail}")]
    BadJson {
        /// Offending line.
        line: usize,
        /// What was wrong.
        detail: String,
    },
    /// seqNo values are not the gap-free sequence 1..=N.
    #[error("expected seqNo {expected}, found {found}")]
    SeqNoGap {
        /// The seqNo the chain required next.
        expected: u64,
        /// The seqNo actually present.
        found: u64,
    },
    /// A stored txnId does not match the recomputed hash chain.
    #[error("txnId chain broken at seqNo {seq_no}")]
    ChainMismatch {
        /// First position where the chain fails.
        seq_no: u64,
    },
    /// A transaction of the wrong kind appears in a file.
    #[error("line {line}: {found} transaction in a {expected} file")]
    KindMismatch {
        /// Offending line.
        line: usize,
        /// The kind the file was parsed as.
        expected: GenesisKind,
        /// The kind actually found.
        found: GenesisKind,
    },
}

impl GenesisError {
    /// Short machine-readable code for this diagnostic.
    pub fn code(&self) -> &'static str {
        match self {
            GenesisError::BadJson { .. } => "BadJson",
            GenesisError::SeqNoGap { .. } => "SeqNoGap",
            GenesisError::ChainMismatch { .. } => "ChainMismatch",
            GenesisError::KindMismatch { .. } => "KindMismatch",
        }
    }
}

/// One problem found by [`verify_genesis_pair`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Which rule fired.
    pub code: ViolationCode,
    /// Human-readable specifics.
    pub detail: String,
}

/// The rules [`verify_genesis_pair`] can flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ViolationCode {
    /// A document contains a transaction of the wrong kind.
    KindImpurity,
    /// A NODE transaction's from-DID has no Steward NYM in the domain file.
    UnknownSteward,
    /// One steward DID registers more than one node.
    StewardHasMultipleNodes,
    /// Two nodes share an alias.
    DuplicateAlias,
    /// Two endpoints across the node set coincide.
    DuplicateEndpoint,
    /// The same DID is registered twice in the domain file.
    DuplicateDid,
    /// A blskey/blskey_pop pair fails proof-of-possession verification.
    InvalidProofOfPossession,
    /// Strict check: fewer than three trustees.
    TooFewTrustees,
    /// Strict check: genesis steward count differs from four.
    WrongStewardCount,
}

/// Outcome of cross-checking a domain/pool pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    /// Everything that is wrong; empty means launch-ready.
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    /// True when no violations were found.
    pub fn is_launch_ready(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Builds the domain genesis document: one NYM per trustee (in roster
/// order), then one per steward.
pub fn build_domain_genesis(roster: &Roster) -> GenesisDoc {
    let txns = roster
        .trustees
        .iter()
        .chain(&roster.stewards)
        .map(|record| Txn::Nym(NymTxn::from(record)))
        .collect();
    chain_doc(GenesisKind::Domain, txns)
}

/// Builds the pool genesis document: one NODE per validator in roster order,
/// submitted by its owning steward.
pub fn build_pool_genesis(roster: &Roster) -> GenesisDoc {
    let txns = roster
        .validators
        .iter()
        .map(|validator| Txn::Node(NodeTxn::from(validator)))
        .collect();
    chain_doc(GenesisKind::Pool, txns)
}

/// Wraps bare transactions with seqNo 1..=N and the txnId hash chain.
fn chain_doc(kind: GenesisKind, txns: Vec<Txn>) -> GenesisDoc {
    let mut out = Vec::with_capacity(txns.len());
    let mut prev_id = String::new();
    for (index, txn) in txns.into_iter().enumerate() {
        let seq_no = index as u64 + 1;
        let txn_id = chain_digest(&prev_id, &txn, seq_no);
        prev_id = txn_id.clone();
        out.push(GenesisTxn { seq_no, txn_id, txn });
    }
    GenesisDoc { kind, txns: out }
}

/// The chain digest for one transaction: SHA-256 over the previous id's hex
/// text followed by the canonical bytes of the line with `txnId` omitted.
fn chain_digest(prev_id: &str, txn: &Txn, seq_no: u64) -> String {
    let mut hasher = Sha256::new();
    hasher.update(prev_id.as_bytes());
    hasher.update(to_canonical_json(&line_value(txn, seq_no, None)));
    hex::encode(hasher.finalize())
}

/// Renders a document to its canonical on-disk bytes: one JSON object per
/// line, LF-terminated, keys sorted, no insignificant whitespace.
pub fn serialize_genesis(doc: &GenesisDoc) -> Vec<u8> {
    let mut out = Vec::new();
    for entry in &doc.txns {
        out.extend_from_slice(&to_canonical_json(&line_value(
            &entry.txn,
            entry.seq_no,
            Some(&entry.txn_id),
        )));
        out.push(b'\n');
    }
    out
}

/// The full JSON value of one genesis line. With `txn_id: None` the
/// `txnMetadata` object carries only `seqNo` — the form the hash chain is
/// computed over.
fn line_value(txn: &Txn, seq_no: u64, txn_id: Option<&str>) -> Value {
    let body = match txn {
        Txn::Nym(nym) => {
            let mut data = Map::new();
            if let Some(alias) = &nym.alias {
                data.insert("alias".into(), json!(alias));
            }
            data.insert("dest".into(), json!(nym.dest));
            data.insert("role".into(), json!(nym.role.code()));
            data.insert("verkey".into(), json!(nym.verkey));
            json!({ "data": data, "metadata": {}, "type": "1" })
        }
        Txn::Node(node) => json!({
            "data": { "data": node.data, "dest": node.dest },
            "metadata": { "from": node.from },
            "type": "0",
        }),
    };
    let mut txn_metadata = Map::new();
    txn_metadata.insert("seqNo".into(), json!(seq_no));
    if let Some(id) = txn_id {
        txn_metadata.insert("txnId".into(), json!(id));
    }
    json!({
        "reqSignature": {},
        "txn": body,
        "txnMetadata": txn_metadata,
        "ver": "1",
    })
}

/// Parses and fully re-validates a genesis file of the given kind.
///
/// Validation covers the JSON schema of every line (including that each line
/// is in canonical form), seqNo continuity, kind purity, and the txnId hash
/// chain. [`serialize_genesis`] ∘ `parse_genesis` is the identity on valid
/// input.
///
/// # Errors
///
/// [`GenesisError::BadJson`] for malformed or non-canonical lines,
/// [`GenesisError::SeqNoGap`] and [`GenesisError::ChainMismatch`] for
/// metadata inconsistencies, [`GenesisError::KindMismatch`] when a
/// transaction belongs to the other file.
pub fn parse_genesis(content: &[u8], kind: GenesisKind) -> Result<GenesisDoc, GenesisError> {
    let text = std::str::from_utf8(content).map_err(|e| GenesisError::BadJson {
        line: content[..e.valid_up_to()].iter().filter(|b| **b == b'\n').count() + 1,
        detail: "content is not valid UTF-8".into(),
    })?;

    let mut txns = Vec::new();
    let mut prev_id = String::new();
    let mut lines = text.split('\n').enumerate().peekable();
    while let Some((index, raw)) = lines.next() {
        let line = index + 1;
        if raw.is_empty() {
            if lines.peek().is_none() {
                break; // trailing LF on the last line
            }
            return Err(GenesisError::BadJson {
                line,
                detail: "empty line inside the file".into(),
            });
        }

        let (seq_no, txn_id, txn) = parse_line(raw, line, kind)?;

        let expected = txns.len() as u64 + 1;
        if seq_no != expected {
            return Err(GenesisError::SeqNoGap {
                expected,
                found: seq_no,
            });
        }
        if chain_digest(&prev_id, &txn, seq_no) != txn_id {
            return Err(GenesisError::ChainMismatch { seq_no });
        }
        // The loop above proves the values are right; this proves the bytes
        // are, i.e. the line is in canonical form.
        let canonical = to_canonical_json(&line_value(&txn, seq_no, Some(&txn_id)));
        if canonical != raw.as_bytes() {
            return Err(GenesisError::BadJson {
                line,
                detail: "line is not in canonical form".into(),
            });
        }
        prev_id = txn_id.clone();
        txns.push(GenesisTxn { seq_no, txn_id, txn });
    }
    Ok(GenesisDoc { kind, txns })
}

/// Parses one line into `(seqNo, txnId, txn)`, enforcing the frozen schema.
fn parse_line(raw: &str, line: usize, kind: GenesisKind) -> Result<(u64, String, Txn), GenesisError> {
    let bad = |detail: String| GenesisError::BadJson { line, detail };

    let value: Value =
        serde_json::from_str(raw).map_err(|e| bad(format!("not a JSON object: {e}")))?;
    let top = expect_object(&value, "line", line)?;
    expect_keys(top, &["reqSignature", "txn", "txnMetadata", "ver"], &[], "line", line)?;

    if top["ver"] != json!("1") {
        return Err(bad(format!("ver must be \"1\", found {}", top["ver"])));
    }
    let req_signature = expect_object(&top["reqSignature"], "reqSignature", line)?;
    if !req_signature.is_empty() {
        return Err(bad("reqSignature must be an empty object".into()));
    }

    let meta = expect_object(&top["txnMetadata"], "txnMetadata", line)?;
    expect_keys(meta, &["seqNo", "txnId"], &[], "txnMetadata", line)?;
    let seq_no = meta["seqNo"]
        .as_u64()
        .filter(|n| *n > 0)
        .ok_or_else(|| bad(format!("seqNo must be a positive integer, found {}", meta["seqNo"])))?;
    let txn_id = expect_str(meta, "txnId", "txnMetadata", line)?.to_owned();
    if txn_id.len() != 64 || !txn_id.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f')) {
        return Err(bad("txnId must be 64 lowercase hex digits".into()));
    }

    let body = expect_object(&top["txn"], "txn", line)?;
    expect_keys(body, &["data", "metadata", "type"], &[], "txn", line)?;
    let txn_type = expect_str(body, "type", "txn", line)?;
    let found = match txn_type {
        "1" => GenesisKind::Domain,
        "0" => GenesisKind::Pool,
        other => return Err(bad(format!("unknown transaction type {other:?}"))),
    };
    if found != kind {
        return Err(GenesisError::KindMismatch {
            line,
            expected: kind,
            found,
        });
    }

    let txn = match found {
        GenesisKind::Domain => Txn::Nym(parse_nym_body(body, line)?),
        GenesisKind::Pool => Txn::Node(parse_node_body(body, line)?),
    };
    Ok((seq_no, txn_id, txn))
}

/// Extracts a [`NymTxn`] from a type-"1" txn body.
fn parse_nym_body(body: &Map<String, Value>, line: usize) -> Result<NymTxn, GenesisError> {
    let bad = |detail: String| GenesisError::BadJson { line, detail };

    let metadata = expect_object(&body["metadata"], "txn.metadata", line)?;
    if !metadata.is_empty() {
        return Err(bad("NYM txn.metadata must be an empty object".into()));
    }
    let data = expect_object(&body["data"], "txn.data", line)?;
    expect_keys(data, &["dest", "role", "verkey"], &["alias"], "txn.data", line)?;

    let role = match expect_str(data, "role", "txn.data", line)? {
        "0" => Role::Trustee,
        "2" => Role::Steward,
        other => return Err(bad(format!("unknown role code {other:?}"))),
    };
    let alias = match data.get("alias") {
        None => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(other) => return Err(bad(format!("alias must be a string, found {other}"))),
    };
    Ok(NymTxn {
        dest: Did::new(expect_str(data, "dest", "txn.data", line)?),
        verkey: expect_str(data, "verkey", "txn.data", line)?.to_owned(),
        role,
        alias,
    })
}

/// Extracts a [`NodeTxn`] from a type-"0" txn body.
fn parse_node_body(body: &Map<String, Value>, line: usize) -> Result<NodeTxn, GenesisError> {
    let bad = |detail: String| GenesisError::BadJson { line, detail };

    let metadata = expect_object(&body["metadata"], "txn.metadata", line)?;
    expect_keys(metadata, &["from"], &[], "txn.metadata", line)?;
    let from = expect_str(metadata, "from", "txn.metadata", line)?;

    let outer = expect_object(&body["data"], "txn.data", line)?;
    expect_keys(outer, &["data", "dest"], &[], "txn.data", line)?;
    let dest = expect_str(outer, "dest", "txn.data", line)?;

    let data: NodeData = serde_json::from_value(outer["data"].clone())
        .map_err(|e| bad(format!("txn.data.data: {e}")))?;
    if data.alias.is_empty() {
        return Err(bad("alias must be non-empty".into()));
    }
    if !data.services.iter().any(|s| s == SERVICE_VALIDATOR) {
        return Err(bad(format!("services must contain {SERVICE_VALIDATOR:?}")));
    }
    if data.node_port == 0 || data.client_port == 0 {
        return Err(bad("ports must be in 1..=65535".into()));
    }
    if data.node_endpoint() == data.client_endpoint() {
        return Err(bad(format!(
            "node and client endpoints coincide ({})",
            data.node_endpoint()
        )));
    }
    Ok(NodeTxn {
        dest: dest.to_owned(),
        data,
        from: Did::new(from),
    })
}

/// Cross-checks a domain/pool pair for launch readiness.
///
/// Violations are data, not errors: the report lists every broken rule —
/// kind purity, steward coverage of NODE transactions, one node per steward,
/// alias/endpoint/DID uniqueness, proof-of-possession validity, and (with
/// `strict`) the production counting rules.
pub fn verify_genesis_pair(domain: &GenesisDoc, pool: &GenesisDoc, strict: bool) -> VerificationReport {
    let mut violations = Vec::new();
    let mut push = |code: ViolationCode, detail: String| violations.push(Violation { code, detail });

    for (doc, expected) in [(domain, GenesisKind::Domain), (pool, GenesisKind::Pool)] {
        if doc.kind != expected {
            push(
                ViolationCode::KindImpurity,
                format!("{expected} document is marked as {}", doc.kind),
            );
        }
        for entry in &doc.txns {
            if entry.txn.kind() != expected {
                push(
                    ViolationCode::KindImpurity,
                    format!("seqNo {} is a {} transaction in the {expected} file", entry.seq_no, entry.txn.kind()),
                );
            }
        }
    }

    let mut roles: BTreeMap<&Did, Role> = BTreeMap::new();
    let mut trustee_count = 0usize;
    let mut steward_count = 0usize;
    for entry in &domain.txns {
        let Txn::Nym(nym) = &entry.txn else { continue };
        if roles.insert(&nym.dest, nym.role).is_some() {
            push(
                ViolationCode::DuplicateDid,
                format!("did {} registered more than once", nym.dest),
            );
        }
        match nym.role {
            Role::Trustee => trustee_count += 1,
            Role::Steward => steward_count += 1,
        }
    }

    let mut nodes_per_steward: BTreeMap<&Did, usize> = BTreeMap::new();
    let mut aliases = BTreeSet::new();
    let mut endpoints = BTreeSet::new();
    for entry in &pool.txns {
        let Txn::Node(node) = &entry.txn else { continue };
        match roles.get(&node.from) {
            Some(Role::Steward) => {}
            Some(other) => push(
                ViolationCode::UnknownSteward,
                format!("node {} is from {}, whose role is {other:?}, not Steward", node.data.alias, node.from),
            ),
            None => push(
                ViolationCode::UnknownSteward,
                format!("node {} is from {}, which has no NYM", node.data.alias, node.from),
            ),
        }
        *nodes_per_steward.entry(&node.from).or_default() += 1;
        if !aliases.insert(node.data.alias.clone()) {
            push(
                ViolationCode::DuplicateAlias,
                format!("alias {:?} registered more than once", node.data.alias),
            );
        }
        for endpoint in [node.data.node_endpoint(), node.data.client_endpoint()] {
            if !endpoints.insert(endpoint) {
                push(
                    ViolationCode::DuplicateEndpoint,
                    format!("endpoint {endpoint} used more than once"),
                );
            }
        }
        match verify_pop(&node.data.blskey, &node.data.blskey_pop) {
            Ok(true) => {}
            Ok(false) => push(
                ViolationCode::InvalidProofOfPossession,
                format!("node {}: blskey_pop does not prove possession of blskey", node.data.alias),
            ),
            Err(e) => push(
                ViolationCode::InvalidProofOfPossession,
                format!("node {}: {e}", node.data.alias),
            ),
        }
    }
    for (did, count) in nodes_per_steward {
        if count > 1 {
            push(
                ViolationCode::StewardHasMultipleNodes,
                format!("steward {did} registers {count} nodes"),
            );
        }
    }

    if strict {
        if trustee_count < 3 {
            push(
                ViolationCode::TooFewTrustees,
                format!("a production network needs at least 3 trustees, found {trustee_count}"),
            );
        }
        if steward_count != 4 {
            push(
                ViolationCode::WrongStewardCount,
                format!("a production network needs exactly 4 genesis stewards, found {steward_count}"),
            );
        }
    }

    VerificationReport { violations }
}

/// Requires `value` to be a JSON object.
fn expect_object<'a>(
    value: &'a Value,
    what: &str,
    line: usize,
) -> Result<&'a Map<String, Value>, GenesisError> {
    value.as_object().ok_or_else(|| GenesisError::BadJson {
        line,
        detail: format!("{what} must be a JSON object"),
    })
}

/// Requires `map` to contain exactly `required` (plus any of `optional`).
fn expect_keys(
    map: &Map<String, Value>,
    required: &[&str],
    optional: &[&str],
    what: &str,
    line: usize,
) -> Result<(), GenesisError> {
    for key in required {
        if !map.contains_key(*key) {
            return Err(GenesisError::BadJson {
                line,
                detail: format!("{what} is missing key {key:?}"),
            });
        }
    }
    for key in map.keys() {
        if !required.contains(&key.as_str()) && !optional.contains(&key.as_str()) {
            return Err(GenesisError::BadJson {
                line,
                detail: format!("{what} has unexpected key {key:?}"),
            });
        }
    }
    Ok(())
}

/// Requires `map[key]` to be a string.
fn expect_str<'a>(
    map: &'a Map<String, Value>,
    key: &str,
    what: &str,
    line: usize,
) -> Result<&'a str, GenesisError> {
    map[key].as_str().ok_or_else(|| GenesisError::BadJson {
        line,
        detail: format!("{what}.{key} must be a string"),
    })
}
