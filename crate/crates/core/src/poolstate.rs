//! The governance state machine.
//!
//! A [`PoolState`] is the materialized view of a ledger: who the
//! participants are, which validators exist, and the ordered transaction
//! history that produced both. Transitions are pure — [`PoolState::apply_txn`]
//! returns a new state and never touches its input — so a state value can be
//! shared, compared, and replayed freely. That purity is what the simulator
//! leans on when it checks that every node converged to the same state.
//!
//! Authorization is structural: a submission is judged by the role its
//! submitter holds in the current state, not by a signature. Onboarding is
//! trustee-gated (only a trustee may register a NYM) and node registration
//! is steward-gated (a steward registers its own node, at most one).

use crate::genesis::{verify_genesis_pair, GenesisDoc, Txn, VerificationReport};
use crate::keymat::Did;
use crate::roster::{ParticipantRecord, Role, ValidatorInfo};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A registered participant: the value side of the DID map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Participant {
    /// The participant's verkey (base58).
    pub verkey: String,
    /// The participant's governance role.
    pub role: Role,
}

/// One applied transaction in a state's history.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerEntry {
    /// Global position, 1-based across genesis and later submissions.
    pub seq_no: u64,
    /// Who submitted it; `None` for genesis transactions.
    pub submitter: Option<Did>,
    /// The transaction.
    pub txn: Txn,
}

/// The replicated governance state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoolState {
    /// The network this state belongs to.
    pub network_name: String,
    /// Registered participants by DID.
    pub participants: BTreeMap<Did, Participant>,
    /// Registered validators by alias.
    pub validators: BTreeMap<String, ValidatorInfo>,
    /// Every applied transaction, in order.
    pub ledger: Vec<LedgerEntry>,
}

/// A transaction together with the DID submitting it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Submission {
    /// The submitting participant's DID.
    pub submitter_did: Did,
    /// What is being submitted.
    pub txn: Txn,
}

/// Why a submission was refused. `code` identifies the rule; `detail` names
/// the offending values.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize)]
#[error("{code:?}: {detail}")]
pub struct AuthError {
    /// The rule that fired.
    pub code: AuthCode,
    /// Human-readable specifics.
    pub detail: String,
}

/// The authorization rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AuthCode {
    /// The submitter DID is not a registered participant.
    UnknownSubmitter,
    /// A NYM was submitted by a non-trustee.
    NotTrustee,
    /// A NODE was submitted by a non-steward.
    NotSteward,
    /// The submitting steward already operates a validator.
    StewardAlreadyHasNode,
    /// The NODE's alias is already registered.
    DuplicateAlias,
    /// One of the NODE's endpoints is already registered.
    DuplicateEndpoint,
    /// The NYM's dest DID is already registered.
    DuplicateDid,
    /// A steward tried to register a node on another steward's behalf.
    ForeignNode,
}

/// Failures of whole-ledger operations (bootstrap and replay).
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum StateError {
    /// The genesis pair did not verify cleanly.
    #[error("genesis pair failed verification with {} violation(s)", report.violations.len())]
    GenesisInvalid {
        /// Everything the cross-check flagged.
        report: VerificationReport,
    },
    /// A submission in a replayed sequence was refused.
    #[error("replay aborted at index {position}: {error}")]
    ReplayAborted {
        /// 0-based index into the submission sequence.
        position: usize,
        /// The refusal.
        error: AuthError,
    },
}

/// Builds the initial state for a verified genesis pair.
///
/// Participants come from the domain file, validators from the pool file,
/// and the ledger holds domain then pool transactions renumbered 1..=N.
/// Counting rules are a roster/CLI policy, so the pair is re-verified here
/// with the always-on rules only (`strict = false`).
///
/// # Errors
///
/// [`StateError::GenesisInvalid`] when the pair has verification violations.
pub fn bootstrap_state(
    network_name: &str,
    domain: &GenesisDoc,
    pool: &GenesisDoc,
) -> Result<PoolState, StateError> {
    let report = verify_genesis_pair(domain, pool, false);
    if !report.is_launch_ready() {
        return Err(StateError::GenesisInvalid { report });
    }

    let mut participants = BTreeMap::new();
    let mut validators = BTreeMap::new();
    let mut ledger = Vec::with_capacity(domain.txns.len() + pool.txns.len());
    for entry in domain.txns.iter().chain(&pool.txns) {
        match &entry.txn {
            Txn::Nym(nym) => {
                participants.insert(
                    nym.dest.clone(),
                    Participant {
                        verkey: nym.verkey.clone(),
                        role: nym.role,
                    },
                );
            }
            Txn::Node(node) => {
                validators.insert(node.data.alias.clone(), node.to_validator());
            }
        }
        ledger.push(LedgerEntry {
            seq_no: ledger.len() as u64 + 1,
            submitter: None,
            txn: entry.txn.clone(),
        });
    }
    Ok(PoolState {
        network_name: network_name.to_owned(),
        participants,
        validators,
        ledger,
    })
}

impl PoolState {
    /// Applies one submission, returning the successor state.
    ///
    /// The input state is untouched; on refusal the caller still holds it.
    /// Rules are checked in a fixed order so a submission that breaks
    /// several at once is reported deterministically: submitter existence,
    /// then role, then (for NODE) ownership and uniqueness.
    ///
    /// # Errors
    ///
    /// An [`AuthError`] naming the first rule the submission breaks.
    pub fn apply_txn(&self, sub: &Submission) -> Result<PoolState, AuthError> {
        let refuse = |code: AuthCode, detail: String| Err(AuthError { code, detail });

        let Some(submitter) = self.participants.get(&sub.submitter_did) else {
            return refuse(
                AuthCode::UnknownSubmitter,
                format!("submitter {} is not a registered participant", sub.submitter_did),
            );
        };

        let mut next = self.clone();
        match &sub.txn {
            Txn::Nym(nym) => {
                if submitter.role != Role::Trustee {
                    return refuse(
                        AuthCode::NotTrustee,
                        format!(
                            "NYM submitter {} has role {:?}; only trustees may register participants",
                            sub.submitter_did, submitter.role
                        ),
                    );
                }
                if self.participants.contains_key(&nym.dest) {
                    return refuse(
                        AuthCode::DuplicateDid,
                        format!("did {} is already registered", nym.dest),
                    );
                }
                next.participants.insert(
                    nym.dest.clone(),
                    Participant {
                        verkey: nym.verkey.clone(),
                        role: nym.role,
                    },
                );
            }
            Txn::Node(node) => {
                if submitter.role != Role::Steward {
                    return refuse(
                        AuthCode::NotSteward,
                        format!(
                            "NODE submitter {} has role {:?}; only stewards may register nodes",
                            sub.submitter_did, submitter.role
                        ),
                    );
                }
                if node.from != sub.submitter_did {
                    return refuse(
                        AuthCode::ForeignNode,
                        format!(
                            "NODE names {} as operator but was submitted by {}",
                            node.from, sub.submitter_did
                        ),
                    );
                }
                if let Some(existing) = self
                    .validators
                    .values()
                    .find(|v| v.steward_did == sub.submitter_did)
                {
                    return refuse(
                        AuthCode::StewardAlreadyHasNode,
                        format!(
                            "steward {} already operates {:?}",
                            sub.submitter_did, existing.alias
                        ),
                    );
                }
                if self.validators.contains_key(&node.data.alias) {
                    return refuse(
                        AuthCode::DuplicateAlias,
                        format!("alias {:?} is already registered", node.data.alias),
                    );
                }
                let mut taken = self
                    .validators
                    .values()
                    .flat_map(|v| [v.node_endpoint(), v.client_endpoint()]);
                let candidate = [node.data.node_endpoint(), node.data.client_endpoint()];
                if let Some(endpoint) = taken.find(|e| candidate.contains(e)) {
                    return refuse(
                        AuthCode::DuplicateEndpoint,
                        format!("endpoint {endpoint} is already registered"),
                    );
                }
                next.validators
                    .insert(node.data.alias.clone(), node.to_validator());
            }
        }
        next.ledger.push(LedgerEntry {
            seq_no: self.ledger.len() as u64 + 1,
            submitter: Some(sub.submitter_did.clone()),
            txn: sub.txn.clone(),
        });
        Ok(next)
    }

    /// Onboards a steward and its node in one atomic step: a NYM submitted
    /// by `trustee_did`, then the NODE submitted by the new steward. If
    /// either half is refused, the error carries over and `self` remains the
    /// current state — no half-onboarded steward.
    ///
    /// # Errors
    ///
    /// The [`AuthError`] from whichever half failed.
    pub fn add_node_workflow(
        &self,
        trustee_did: &Did,
        steward: &ParticipantRecord,
        validator: &ValidatorInfo,
    ) -> Result<PoolState, AuthError> {
        debug_assert_eq!(steward.role, Role::Steward, "onboarding registers stewards");
        debug_assert_eq!(
            validator.steward_did, steward.did,
            "validator must belong to the steward being onboarded"
        );
        let after_nym = self.apply_txn(&Submission {
            submitter_did: trustee_did.clone(),
            txn: Txn::Nym(steward.into()),
        })?;
        after_nym.apply_txn(&Submission {
            submitter_did: steward.did.clone(),
            txn: Txn::Node(validator.into()),
        })
    }
}

/// Bootstraps from the genesis pair and folds every submission in order.
///
/// This is the reference semantics for any replicated execution: a set of
/// nodes agrees with this function or it is wrong.
///
/// # Errors
///
/// [`StateError::GenesisInvalid`] from bootstrap, or
/// [`StateError::ReplayAborted`] carrying the index and refusal of the first
/// rejected submission.
pub fn replay(
    network_name: &str,
    domain: &GenesisDoc,
    pool: &GenesisDoc,
    subs: &[Submission],
) -> Result<PoolState, StateError> {
    let mut state = bootstrap_state(network_name, domain, pool)?;
    for (position, sub) in subs.iter().enumerate() {
        state = state
            .apply_txn(sub)
            .map_err(|error| StateError::ReplayAborted { position, error })?;
    }
    Ok(state)
}
