//! Deterministic validator-pool simulator.
//!
//! [`spawn_pool`] turns a verified genesis pair into N logical validator
//! processes ([`SimNode`]s) that share nothing and interact only through a
//! [`Transport`]. Clients inject a [`Submission`] at one node's client
//! endpoint; the node pre-validates it, forwards it to the sequencer for
//! ordering, and the sequencer disseminates commits. After the harness
//! settles, every node's [`PoolState`] must equal [`replay`] over the
//! ordering log — that replay oracle, not the message plumbing, is the
//! correctness bar, and the convergence tests hold the plumbing to it.
//!
//! Ordering is intentionally humble: the alias-lexicographically-first
//! validator acts as a deterministic sequencer. Real networks run BFT
//! consensus here; this simulator exercises membership and replication
//! semantics (who may join, what everyone must agree on), not fault
//! tolerance, so nodes are honest and links are reliable and FIFO.
//!
//! Two transports implement the same interface: an in-process queue (the
//! default, fully deterministic) and a loopback TCP transport speaking
//! 4-byte big-endian length-prefixed canonical-JSON frames. Both must
//! produce identical reports for identical scripts.

use crate::canon::to_canonical_json;
use crate::genesis::{GenesisDoc, NodeTxn, NymTxn, Txn, VerificationReport};
use crate::keymat::Did;
use crate::poolstate::{bootstrap_state, replay, AuthError, PoolState, StateError, Submission};
use crate::roster::{Endpoint, ParticipantRecord, Role, ValidatorInfo};
use crate::synth;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, VecDeque};
use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::time::Duration;

/// The network name simulated pools run under.
pub const SIM_NETWORK: &str = "simnet";

/// Upper bound on a transport frame; anything larger is a framing bug.
const MAX_FRAME_BYTES: usize = 1 << 20;

/// How long a TCP read may stall before the harness calls it a failure.
const TCP_READ_TIMEOUT: Duration = Duration::from_secs(5);

/// The simulator's wire protocol.
///
/// `Submit` is client→node, `Order` is node→sequencer, `Commit` is
/// sequencer→everyone. `seq` is 1-based over the post-genesis ordering log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Message {
    /// A client hands a submission to some node's client endpoint.
    Submit {
        /// The submission being injected.
        submission: Submission,
    },
    /// A node forwards a pre-validated submission for ordering.
    Order {
        /// The forwarded submission.
        submission: Submission,
    },
    /// The sequencer disseminates an ordered, accepted submission.
    Commit {
        /// Position in the ordering log (1-based).
        seq: u64,
        /// The accepted submission.
        submission: Submission,
    },
}

/// Failures of the simulator harness.
#[derive(Debug, thiserror::Error)]
pub enum NetsimError {
    /// The genesis pair did not verify cleanly.
    #[error("genesis pair failed verification with {} violation(s)", report.violations.len())]
    GenesisInvalid {
        /// Everything the cross-check flagged.
        report: VerificationReport,
    },
    /// A submission or join targeted an alias with no live node.
    #[error("no live node is named {alias:?}")]
    UnknownNode {
        /// The alias that matched nothing.
        alias: String,
    },
    /// A joining node wants an endpoint a live node already binds.
    #[error("endpoint {endpoint} is already bound by a live node")]
    EndpointInUse {
        /// The contested endpoint.
        endpoint: Endpoint,
    },
    /// A join workflow was refused by governance before any message moved.
    #[error(transparent)]
    Auth(#[from] AuthError),
    /// The transport itself failed (socket errors, oversized frames).
    #[error("transport failure: {detail}")]
    Transport {
        /// What went wrong.
        detail: String,
    },
}

impl NetsimError {
    fn transport(context: &str, err: impl std::fmt::Display) -> Self {
        NetsimError::Transport {
            detail: format!("{context}: {err}"),
        }
    }
}

/// Message delivery between simulated nodes.
///
/// A transport owns the channel namespace: endpoints must be registered
/// before they can receive. `send` reports `Ok(false)` for a destination
/// nobody registered — the simulated machine is not running — so callers
/// can distinguish a dropped message from a transport fault.
pub trait Transport: std::fmt::Debug {
    /// Claims an endpoint for delivery.
    ///
    /// # Errors
    ///
    /// [`NetsimError::EndpointInUse`] if already claimed;
    /// [`NetsimError::Transport`] if the channel cannot be set up.
    fn register(&mut self, endpoint: Endpoint) -> Result<(), NetsimError>;

    /// Delivers `message` to `to`, or reports it dropped (`Ok(false)`).
    ///
    /// # Errors
    ///
    /// [`NetsimError::Transport`] on channel failure.
    fn send(&mut self, to: &Endpoint, message: &Message) -> Result<bool, NetsimError>;

    /// Takes the next deliverable message, if any is pending.
    ///
    /// # Errors
    ///
    /// [`NetsimError::Transport`] on channel failure or a malformed frame.
    fn recv(&mut self) -> Result<Option<(Endpoint, Message)>, NetsimError>;
}

/// Which [`Transport`] a pool runs on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransportKind {
    /// In-process FIFO queue; fully deterministic, the default.
    InProc,
    /// Loopback TCP sockets with length-prefixed frames.
    Tcp,
}

/// The default transport: one global FIFO queue, no I/O.
#[derive(Debug, Default)]
pub struct InProcTransport {
    registered: std::collections::BTreeSet<Endpoint>,
    queue: VecDeque<(Endpoint, Message)>,
}

impl InProcTransport {
    /// An empty queue with no registered endpoints.
    pub fn new() -> Self {
        Self::default()
    }
}

impl Transport for InProcTransport {
    fn register(&mut self, endpoint: Endpoint) -> Result<(), NetsimError> {
        if !self.registered.insert(endpoint) {
            return Err(NetsimError::EndpointInUse { endpoint });
        }
        Ok(())
    }

    fn send(&mut self, to: &Endpoint, message: &Message) -> Result<bool, NetsimError> {
        if !self.registered.contains(to) {
            return Ok(false);
        }
        self.queue.push_back((*to, message.clone()));
        Ok(true)
    }

    fn recv(&mut self) -> Result<Option<(Endpoint, Message)>, NetsimError> {
        Ok(self.queue.pop_front())
    }
}

/// Loopback TCP transport.
///
/// Simulated endpoints carry genesis addresses (say `10.0.0.1:9701`) that a
/// test host cannot bind, so each registered endpoint maps to its own
/// `127.0.0.1` listener on an OS-assigned port. One connection carries one
/// frame: 4-byte big-endian length, then the canonical JSON of the
/// [`Message`]. Accept queues are FIFO, which preserves per-link ordering.
#[derive(Debug, Default)]
pub struct TcpTransport {
    listeners: BTreeMap<Endpoint, TcpListener>,
}

impl TcpTransport {
    /// A transport with no registered endpoints.
    pub fn new() -> Self {
        Self::default()
    }
}

impl Transport for TcpTransport {
    fn register(&mut self, endpoint: Endpoint) -> Result<(), NetsimError> {
        if self.listeners.contains_key(&endpoint) {
            return Err(NetsimError::EndpointInUse { endpoint });
        }
        let listener = TcpListener::bind(("127.0.0.1", 0))
            .map_err(|e| NetsimError::transport("bind loopback listener", e))?;
        listener
            .set_nonblocking(true)
            .map_err(|e| NetsimError::transport("set listener nonblocking", e))?;
        self.listeners.insert(endpoint, listener);
        Ok(())
    }

    fn send(&mut self, to: &Endpoint, message: &Message) -> Result<bool, NetsimError> {
        let Some(listener) = self.listeners.get(to) else {
            return Ok(false);
        };
        let addr = listener
            .local_addr()
            .map_err(|e| NetsimError::transport("resolve listener address", e))?;
        let payload = to_canonical_json(message);
        debug_assert!(payload.len() <= MAX_FRAME_BYTES, "messages are small");
        let mut stream = TcpStream::connect(addr)
            .map_err(|e| NetsimError::transport("connect to peer", e))?;
        stream
            .write_all(&(payload.len() as u32).to_be_bytes())
            .and_then(|()| stream.write_all(&payload))
            .map_err(|e| NetsimError::transport("write frame", e))?;
        Ok(true)
    }

    fn recv(&mut self) -> Result<Option<(Endpoint, Message)>, NetsimError> {
        for (endpoint, listener) in &self.listeners {
            let stream = match listener.accept() {
                Ok((stream, _)) => stream,
                Err(e) if e.kind() == std::io::ErrorKind::WouldBlock => continue,
                Err(e) => return Err(NetsimError::transport("accept connection", e)),
            };
            return read_frame(stream).map(|message| Some((*endpoint, message)));
        }
        Ok(None)
    }
}

/// Reads one length-prefixed frame off an accepted connection.
fn read_frame(mut stream: TcpStream) -> Result<Message, NetsimError> {
    stream
        .set_nonblocking(false)
        .and_then(|()| stream.set_read_timeout(Some(TCP_READ_TIMEOUT)))
        .map_err(|e| NetsimError::transport("configure frame read", e))?;
    let mut len_buf = [0u8; 4];
    stream
        .read_exact(&mut len_buf)
        .map_err(|e| NetsimError::transport("read frame length", e))?;
    let len = u32::from_be_bytes(len_buf) as usize;
    if len > MAX_FRAME_BYTES {
        return Err(NetsimError::Transport {
            detail: format!("frame of {len} bytes exceeds the {MAX_FRAME_BYTES}-byte cap"),
        });
    }
    let mut payload = vec![0u8; len];
    stream
        .read_exact(&mut payload)
        .map_err(|e| NetsimError::transport("read frame payload", e))?;
    serde_json::from_slice(&payload)
        .map_err(|e| NetsimError::transport("decode frame payload", e))
}

/// One logical validator process.
#[derive(Debug)]
pub struct SimNode {
    /// The validator's alias, unique in the pool.
    pub alias: String,
    /// Inter-validator channel (ordering and commits arrive here).
    pub node_endpoint: Endpoint,
    /// Client submission channel.
    pub client_endpoint: Endpoint,
    /// This node's replica of the governance state.
    pub local_state: PoolState,
    /// This node's replica of the post-genesis ordering log.
    pub log: Vec<Submission>,
}

/// The sequencer's inter-validator endpoint under `state`: the
/// alias-lexicographically-first validator. Every replica computes this from
/// its own state, so agreement on state implies agreement on the sequencer.
fn sequencer_endpoint(state: &PoolState) -> Endpoint {
    state
        .validators
        .values()
        .next()
        .expect("a live pool registers at least one validator")
        .node_endpoint()
}

impl SimNode {
    /// Handles one delivered message, pushing any messages it wants sent.
    /// Returns the refusal when the message carried a submission this node
    /// rejects.
    fn handle(
        &mut self,
        message: Message,
        outbound: &mut Vec<(Endpoint, Message)>,
    ) -> Option<AuthError> {
        match message {
            Message::Submit { submission } => {
                // Gatekeeping only: the state this builds is discarded, the
                // authoritative application happens at the sequencer.
                if let Err(error) = self.local_state.apply_txn(&submission) {
                    return Some(error);
                }
                let sequencer = sequencer_endpoint(&self.local_state);
                outbound.push((sequencer, Message::Order { submission }));
                None
            }
            Message::Order { submission } => match self.local_state.apply_txn(&submission) {
                Ok(next) => {
                    // Disseminate to the membership as of *before* this
                    // submission: a validator it registers has no process
                    // yet and catches up by replay when it joins.
                    let recipients: Vec<Endpoint> = self
                        .local_state
                        .validators
                        .values()
                        .filter(|v| v.alias != self.alias)
                        .map(ValidatorInfo::node_endpoint)
                        .collect();
                    let seq = self.log.len() as u64 + 1;
                    self.local_state = next;
                    self.log.push(submission.clone());
                    outbound.extend(recipients.into_iter().map(|to| {
                        (
                            to,
                            Message::Commit {
                                seq,
                                submission: submission.clone(),
                            },
                        )
                    }));
                    None
                }
                // A stale gatekeeper let something through; the sequencer's
                // refusal is final and nothing was disseminated.
                Err(error) => Some(error),
            },
            Message::Commit { seq, submission } => {
                debug_assert_eq!(
                    seq,
                    self.log.len() as u64 + 1,
                    "FIFO links deliver commits in order"
                );
                match self.local_state.apply_txn(&submission) {
                    Ok(next) => {
                        self.local_state = next;
                        self.log.push(submission);
                        None
                    }
                    // Unreachable while every replica applies the same log;
                    // surfaced instead of panicking so a regression shows up
                    // as a failed convergence check with a cause attached.
                    Err(error) => Some(error),
                }
            }
        }
    }
}

/// What a settle pass observed.
#[derive(Debug, Default)]
struct SettleStats {
    rounds: u64,
    delivered: u64,
    rejections: Vec<AuthError>,
}

/// Outcome summary of a harness operation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimReport {
    /// Whether all live nodes hold pairwise-equal states and logs.
    pub converged: bool,
    /// Message rounds the operation took to quiesce.
    pub rounds_to_converge: u64,
    /// Messages delivered across those rounds.
    pub messages_delivered: u64,
    /// Per-node validator count, keyed by node alias.
    pub membership_size: BTreeMap<String, usize>,
    /// The refusal, when the operation's submission was rejected.
    pub rejection: Option<AuthError>,
}

/// A simulated validator pool: nodes, their transport, and the genesis pair
/// they all bootstrapped from.
///
/// Invariant (checked by [`SimPool::converged`] after every settle): all
/// nodes' states and logs are pairwise equal, and equal to
/// [`replay`] over [`SimPool::ordering_log`].
#[derive(Debug)]
pub struct SimPool {
    /// The simulated network's name.
    pub network_name: String,
    domain: GenesisDoc,
    pool: GenesisDoc,
    /// Live nodes, in spawn order (alias-sorted at spawn; joins append).
    pub nodes: Vec<SimNode>,
    transport: Box<dyn Transport>,
}

/// Spawns one node per NODE transaction on the in-process transport.
///
/// # Errors
///
/// [`NetsimError::GenesisInvalid`] when the pair fails verification.
pub fn spawn_pool(domain: &GenesisDoc, pool: &GenesisDoc) -> Result<SimPool, NetsimError> {
    spawn_pool_with(domain, pool, TransportKind::InProc)
}

/// [`spawn_pool`] with an explicit transport choice.
///
/// # Errors
///
/// [`NetsimError::GenesisInvalid`] when the pair fails verification;
/// [`NetsimError::Transport`] when the transport cannot claim endpoints.
pub fn spawn_pool_with(
    domain: &GenesisDoc,
    pool: &GenesisDoc,
    kind: TransportKind,
) -> Result<SimPool, NetsimError> {
    let state = bootstrap_state(SIM_NETWORK, domain, pool).map_err(|err| match err {
        StateError::GenesisInvalid { report } => NetsimError::GenesisInvalid { report },
        StateError::ReplayAborted { .. } => unreachable!("bootstrap replays nothing"),
    })?;
    let mut transport: Box<dyn Transport> = match kind {
        TransportKind::InProc => Box::new(InProcTransport::new()),
        TransportKind::Tcp => Box::new(TcpTransport::new()),
    };
    let mut nodes = Vec::with_capacity(state.validators.len());
    for validator in state.validators.values() {
        transport.register(validator.node_endpoint())?;
        transport.register(validator.client_endpoint())?;
        nodes.push(SimNode {
            alias: validator.alias.clone(),
            node_endpoint: validator.node_endpoint(),
            client_endpoint: validator.client_endpoint(),
            local_state: state.clone(),
            log: Vec::new(),
        });
    }
    Ok(SimPool {
        network_name: SIM_NETWORK.to_owned(),
        domain: domain.clone(),
        pool: pool.clone(),
        nodes,
        transport,
    })
}

impl SimPool {
    /// The genesis pair every node bootstrapped from.
    pub fn genesis_pair(&self) -> (&GenesisDoc, &GenesisDoc) {
        (&self.domain, &self.pool)
    }

    /// The authoritative post-genesis ordering log: the sequencer's replica.
    /// At quiescence every node's replica equals it.
    pub fn ordering_log(&self) -> &[Submission] {
        let sequencer = self
            .nodes
            .iter()
            .min_by(|a, b| a.alias.cmp(&b.alias))
            .expect("a spawned pool has at least one node");
        &sequencer.log
    }

    /// Whether all live nodes hold pairwise-equal states and logs.
    pub fn converged(&self) -> bool {
        self.nodes
            .windows(2)
            .all(|pair| pair[0].local_state == pair[1].local_state && pair[0].log == pair[1].log)
    }

    /// A snapshot report: current convergence and membership, zero counters.
    pub fn report(&self) -> SimReport {
        self.report_after(SettleStats::default())
    }

    fn report_after(&self, stats: SettleStats) -> SimReport {
        SimReport {
            converged: self.converged(),
            rounds_to_converge: stats.rounds,
            messages_delivered: stats.delivered,
            membership_size: self
                .nodes
                .iter()
                .map(|n| (n.alias.clone(), n.local_state.validators.len()))
                .collect(),
            rejection: stats.rejections.into_iter().next(),
        }
    }

    /// Injects `submission` at the named node's client endpoint and settles.
    ///
    /// On acceptance the submission is ordered and disseminated, and the
    /// report shows the converged aftermath; on refusal no node's state
    /// changes and the report carries the [`AuthError`].
    ///
    /// # Errors
    ///
    /// [`NetsimError::UnknownNode`] when no live node has that alias;
    /// [`NetsimError::Transport`] on channel failure.
    pub fn submit(
        &mut self,
        target_alias: &str,
        submission: Submission,
    ) -> Result<SimReport, NetsimError> {
        let Some(target) = self.nodes.iter().find(|n| n.alias == target_alias) else {
            return Err(NetsimError::UnknownNode {
                alias: target_alias.to_owned(),
            });
        };
        let client = target.client_endpoint;
        let delivered = self.transport.send(&client, &Message::Submit { submission })?;
        debug_assert!(delivered, "live nodes keep their endpoints registered");
        let stats = self.settle()?;
        Ok(self.report_after(stats))
    }

    /// Onboards a steward's validator and brings its node online.
    ///
    /// The NYM and NODE run through the ordering path (sponsored by
    /// `sponsor_trustee`, then submitted by the steward); afterwards a new
    /// [`SimNode`] is instantiated and catches up by replaying the ordering
    /// log, so the report shows membership N+1 on every node, newcomer
    /// included. The workflow is pre-flighted against the sequencer's state,
    /// so a refusal leaves the pool untouched — no half-onboarded steward.
    ///
    /// # Errors
    ///
    /// [`NetsimError::EndpointInUse`] when a live node already binds one of
    /// the validator's endpoints; [`NetsimError::Auth`] when governance
    /// refuses the workflow; [`NetsimError::Transport`] on channel failure.
    pub fn join_new_node(
        &mut self,
        steward: &ParticipantRecord,
        validator: &ValidatorInfo,
        sponsor_trustee: &Did,
    ) -> Result<SimReport, NetsimError> {
        let wanted = [validator.node_endpoint(), validator.client_endpoint()];
        for node in &self.nodes {
            for endpoint in [node.node_endpoint, node.client_endpoint] {
                if wanted.contains(&endpoint) {
                    return Err(NetsimError::EndpointInUse { endpoint });
                }
            }
        }
        let sequencer_alias = self
            .nodes
            .iter()
            .map(|n| n.alias.clone())
            .min()
            .expect("a spawned pool has at least one node");
        let sequencer_state = &self
            .nodes
            .iter()
            .find(|n| n.alias == sequencer_alias)
            .expect("alias came from the node list")
            .local_state;
        // Pre-flight both halves atomically before any message moves.
        sequencer_state.add_node_workflow(sponsor_trustee, steward, validator)?;

        let nym = Submission {
            submitter_did: sponsor_trustee.clone(),
            txn: Txn::Nym(NymTxn::from(steward)),
        };
        let node_sub = Submission {
            submitter_did: steward.did.clone(),
            txn: Txn::Node(NodeTxn::from(validator)),
        };
        let first = self.submit(&sequencer_alias, nym)?;
        let second = self.submit(&sequencer_alias, node_sub)?;
        debug_assert!(
            first.rejection.is_none() && second.rejection.is_none(),
            "pre-flight admitted both halves"
        );

        let log = self.ordering_log().to_vec();
        let local_state = replay(&self.network_name, &self.domain, &self.pool, &log)
            .expect("the ordering log replays over the pair it was accepted against");
        self.transport.register(validator.node_endpoint())?;
        self.transport.register(validator.client_endpoint())?;
        self.nodes.push(SimNode {
            alias: validator.alias.clone(),
            node_endpoint: validator.node_endpoint(),
            client_endpoint: validator.client_endpoint(),
            local_state,
            log,
        });
        Ok(self.report_after(SettleStats {
            rounds: first.rounds_to_converge + second.rounds_to_converge,
            delivered: first.messages_delivered + second.messages_delivered,
            rejections: Vec::new(),
        }))
    }

    /// Delivers messages in rounds until the transport is quiet.
    ///
    /// A round is one batch: everything deliverable now is handed to its
    /// node, and whatever those handlers send becomes the next round. Both
    /// transports see identical batches for identical scripts, which keeps
    /// round and message counts transport-independent.
    fn settle(&mut self) -> Result<SettleStats, NetsimError> {
        let mut stats = SettleStats::default();
        loop {
            let mut batch = Vec::new();
            while let Some(item) = self.transport.recv()? {
                batch.push(item);
            }
            if batch.is_empty() {
                return Ok(stats);
            }
            stats.rounds += 1;
            for (endpoint, message) in batch {
                stats.delivered += 1;
                let node = self
                    .nodes
                    .iter_mut()
                    .find(|n| n.node_endpoint == endpoint || n.client_endpoint == endpoint)
                    .expect("transport delivers only to endpoints registered by live nodes");
                let mut outbound = Vec::new();
                if let Some(error) = node.handle(message, &mut outbound) {
                    stats.rejections.push(error);
                }
                for (to, message) in outbound {
                    // A `false` here is a send to a validator with no
                    // process yet (registered on-ledger, not yet joined);
                    // it catches up by replay when it does join.
                    let _ = self.transport.send(&to, &message)?;
                }
            }
        }
    }
}

/// Spawns a synthetic pool of `pool_size` validators, performs `joins`
/// sequential node additions, and reports the aggregate round and message
/// counts. The counts are deterministic for a given `(pool_size, joins)`
/// and serve as a regression metric for the dissemination policy — this is
/// a protocol-step meter, not a wall-clock benchmark.
///
/// # Errors
///
/// [`NetsimError`] when the synthetic pool cannot be spawned or a join is
/// refused; neither occurs for inputs within [`synth`]'s index space.
///
/// # Panics
///
/// Panics if `pool_size` is zero — a pool needs a sequencer.
pub fn measure_bootstrap(pool_size: usize, joins: usize) -> Result<SimReport, NetsimError> {
    assert!(pool_size >= 1, "a pool needs at least one validator");
    let roster = synth::roster(1, pool_size, false);
    let domain = crate::genesis::build_domain_genesis(&roster);
    let pool_doc = crate::genesis::build_pool_genesis(&roster);
    let mut pool = spawn_pool(&domain, &pool_doc)?;
    let sponsor = synth::participant("Trustee1", Role::Trustee).did;
    let mut rounds = 0;
    let mut delivered = 0;
    for j in 1..=joins {
        let (steward, validator) = synth::steward_with_node(pool_size + j);
        let report = pool.join_new_node(&steward, &validator, &sponsor)?;
        rounds += report.rounds_to_converge;
        delivered += report.messages_delivered;
    }
    let mut report = pool.report();
    report.rounds_to_converge = rounds;
    report.messages_delivered = delivered;
    Ok(report)
}

/// One step of a scripted scenario: a submission and the node it targets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    /// Alias of the node receiving the submission.
    pub target: String,
    /// The submission to inject.
    pub submission: Submission,
}

/// A scripted scenario, as read from a scenario JSON file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    /// Steps, run in order with a settle after each.
    pub steps: Vec<Step>,
}

/// Runs a scenario step by step, collecting one report per step.
///
/// # Errors
///
/// [`NetsimError::UnknownNode`] when a step targets a dead alias (the
/// scenario aborts there); [`NetsimError::Transport`] on channel failure.
/// Authorization refusals do not abort — they land in that step's report.
pub fn run_scenario(pool: &mut SimPool, scenario: &Scenario) -> Result<Vec<SimReport>, NetsimError> {
    scenario
        .steps
        .iter()
        .map(|step| pool.submit(&step.target, step.submission.clone()))
        .collect()
}

/// A deterministic pseudo-random scenario over the reference fixture
/// network, for regression and convergence testing. The same seed always
/// yields the same scenario: the generator uses a self-contained mixer
/// precisely so scripts stay stable across platforms and dependency
/// upgrades. Roughly 60% of steps are valid onboarding moves (NYM then NODE
/// for synthetic stewards); the rest each break exactly one authorization
/// rule. Targets never include the sequencer's alias spot — `node1` stays
/// live — so ordering always proceeds.
pub fn scripted_scenario(seed: u64) -> Scenario {
    let mut rng = SplitMix64(seed);
    let trustees: Vec<Did> = (1..=3)
        .map(|i| synth::participant(&format!("Trustee{i}"), Role::Trustee).did)
        .collect();
    let targets = ["node1", "node2", "node3", "node4"];
    // Synthetic steward indices still free for valid onboarding moves.
    let mut pending_nym: Vec<usize> = (5..=20).collect();
    let mut pending_node: Vec<usize> = Vec::new();
    let step_count = 4 + rng.pick(9); // 4..=12 steps
    let mut steps = Vec::with_capacity(step_count);
    for _ in 0..step_count {
        let target = targets[rng.pick(targets.len())].to_owned();
        let wants_valid = rng.pick(100) < 60;
        let submission = if wants_valid {
            valid_move(&mut rng, &trustees, &mut pending_nym, &mut pending_node)
        } else {
            invalid_move(&mut rng, &trustees, &pending_node)
        };
        steps.push(Step { target, submission });
    }
    Scenario { steps }
}

/// The next legal onboarding move: finish a pending validator registration
/// or sponsor a fresh steward. Falls back to an invalid move once the index
/// space is exhausted.
fn valid_move(
    rng: &mut SplitMix64,
    trustees: &[Did],
    pending_nym: &mut Vec<usize>,
    pending_node: &mut Vec<usize>,
) -> Submission {
    let register_node =
        !pending_node.is_empty() && (pending_nym.is_empty() || rng.pick(2) == 0);
    if register_node {
        let index = pending_node.remove(rng.pick(pending_node.len()));
        let (steward, validator) = synth::steward_with_node(index);
        Submission {
            submitter_did: steward.did,
            txn: Txn::Node(NodeTxn::from(&validator)),
        }
    } else if !pending_nym.is_empty() {
        let index = pending_nym.remove(rng.pick(pending_nym.len()));
        pending_node.push(index);
        let (steward, _) = synth::steward_with_node(index);
        Submission {
            submitter_did: trustees[rng.pick(trustees.len())].clone(),
            txn: Txn::Nym(NymTxn::from(&steward)),
        }
    } else {
        invalid_move(rng, trustees, pending_node)
    }
}

/// A move that breaks exactly one authorization rule against the fixture
/// network (possibly extended by earlier valid moves).
fn invalid_move(rng: &mut SplitMix64, trustees: &[Did], pending_node: &[usize]) -> Submission {
    let steward1 = synth::participant("Steward1", Role::Steward);
    let steward2 = synth::participant("Steward2", Role::Steward);
    match rng.pick(7) {
        // NYM submitted by a steward.
        0 => Submission {
            submitter_did: steward1.did,
            txn: Txn::Nym(NymTxn::from(&synth::participant("Steward99", Role::Steward))),
        },
        // NYM re-registering a founding steward's DID.
        1 => Submission {
            submitter_did: trustees[rng.pick(trustees.len())].clone(),
            txn: Txn::Nym(NymTxn::from(&steward2)),
        },
        // NODE submitted by a trustee.
        2 => {
            let trustee = synth::participant("Trustee1", Role::Trustee);
            let validator =
                synth::validator_for(&trustee, "node97", "Node97", "10.1.9.97".parse().unwrap());
            Submission {
                submitter_did: trustee.did,
                txn: Txn::Node(NodeTxn::from(&validator)),
            }
        }
        // NODE naming another steward as operator.
        3 => {
            let validator =
                synth::validator_for(&steward2, "node98", "Node98", "10.1.9.98".parse().unwrap());
            Submission {
                submitter_did: steward1.did,
                txn: Txn::Node(NodeTxn::from(&validator)),
            }
        }
        // Second NODE for a steward that already operates one.
        4 => {
            let validator =
                synth::validator_for(&steward2, "node99", "Node99", "10.1.9.99".parse().unwrap());
            Submission {
                submitter_did: steward2.did.clone(),
                txn: Txn::Node(NodeTxn::from(&validator)),
            }
        }
        // NODE reusing a founding alias (needs an onboarded, node-less
        // steward to get past the role checks).
        5 if !pending_node.is_empty() => {
            let index = pending_node[rng.pick(pending_node.len())];
            let (steward, mut validator) = synth::steward_with_node(index);
            validator.alias = "node1".to_owned();
            Submission {
                submitter_did: steward.did,
                txn: Txn::Node(NodeTxn::from(&validator)),
            }
        }
        // NODE reusing a founding endpoint.
        6 if !pending_node.is_empty() => {
            let index = pending_node[rng.pick(pending_node.len())];
            let (steward, mut validator) = synth::steward_with_node(index);
            validator.node_ip = "10.0.0.2".parse().unwrap();
            validator.client_ip = "10.0.0.2".parse().unwrap();
            Submission {
                submitter_did: steward.did,
                txn: Txn::Node(NodeTxn::from(&validator)),
            }
        }
        // Submission from a DID nobody registered.
        _ => Submission {
            submitter_did: Did::new("7h4R9mNq2sVxY1bTcD8eKf"),
            txn: Txn::Nym(NymTxn::from(&synth::participant("Steward98", Role::Steward))),
        },
    }
}

/// A self-contained 64-bit mixer (SplitMix64). Scenario scripts double as
/// regression fixtures, so their stream must never shift underneath us the
/// way external RNG streams may between major versions.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-enough draw in `0..bound` for script shuffling.
    fn pick(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genesis::{build_domain_genesis, build_pool_genesis};
    use crate::poolstate::AuthCode;

    fn fixture_docs() -> (GenesisDoc, GenesisDoc) {
        let roster = synth::fixture_roster();
        (build_domain_genesis(&roster), build_pool_genesis(&roster))
    }

    fn fixture_pool() -> SimPool {
        let (domain, pool) = fixture_docs();
        spawn_pool(&domain, &pool).expect("the fixture pair spawns")
    }

    fn onboarding_submissions(index: usize) -> (Submission, Submission) {
        let trustee = synth::participant("Trustee1", Role::Trustee).did;
        let (steward, validator) = synth::steward_with_node(index);
        (
            Submission {
                submitter_did: trustee,
                txn: Txn::Nym(NymTxn::from(&steward)),
            },
            Submission {
                submitter_did: steward.did.clone(),
                txn: Txn::Node(NodeTxn::from(&validator)),
            },
        )
    }

    #[test]
    fn spawn_creates_one_node_per_validator() {
        let pool = fixture_pool();
        assert_eq!(pool.nodes.len(), 4);
        assert_eq!(
            pool.nodes.iter().map(|n| n.alias.as_str()).collect::<Vec<_>>(),
            ["node1", "node2", "node3", "node4"]
        );
        let report = pool.report();
        assert!(report.converged);
        assert!(report.membership_size.values().all(|&n| n == 4));
    }

    #[test]
    fn spawning_twice_gives_equal_reports() {
        let (domain, pool) = fixture_docs();
        let a = spawn_pool(&domain, &pool).unwrap().report();
        let b = spawn_pool(&domain, &pool).unwrap().report();
        assert_eq!(a, b);
    }

    #[test]
    fn spawn_refuses_an_unverifiable_pair() {
        let mut roster = synth::fixture_roster();
        roster.validators[1].bls_pop = roster.validators[0].bls_pop.clone();
        let err = spawn_pool(
            &build_domain_genesis(&roster),
            &build_pool_genesis(&roster),
        )
        .unwrap_err();
        assert!(matches!(err, NetsimError::GenesisInvalid { .. }));
    }

    #[test]
    fn the_sequencer_is_the_lexicographically_first_alias() {
        let pool = fixture_pool();
        let endpoint = sequencer_endpoint(&pool.nodes[2].local_state);
        assert_eq!(endpoint.to_string(), "10.0.0.1:9701");
    }

    #[test]
    fn an_accepted_submission_reaches_every_node() {
        let mut pool = fixture_pool();
        let (nym, _) = onboarding_submissions(5);
        let report = pool.submit("node2", nym.clone()).unwrap();
        assert!(report.converged);
        assert_eq!(report.rejection, None);
        // Submit, Order, Commit — one round each.
        assert_eq!(report.rounds_to_converge, 3);
        // Submit + Order + 3 commits.
        assert_eq!(report.messages_delivered, 5);
        assert_eq!(pool.ordering_log(), std::slice::from_ref(&nym));
        let steward_did = match &nym.txn {
            Txn::Nym(n) => n.dest.clone(),
            Txn::Node(_) => unreachable!(),
        };
        for node in &pool.nodes {
            assert!(node.local_state.participants.contains_key(&steward_did));
            assert_eq!(node.log, vec![nym.clone()]);
        }
    }

    #[test]
    fn step_counts_do_not_depend_on_the_target() {
        let (nym, _) = onboarding_submissions(5);
        let mut via_sequencer = fixture_pool();
        let a = via_sequencer.submit("node1", nym.clone()).unwrap();
        let mut via_follower = fixture_pool();
        let b = via_follower.submit("node4", nym).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn a_rejected_submission_changes_no_state() {
        let mut pool = fixture_pool();
        let steward1 = synth::participant("Steward1", Role::Steward);
        let second =
            synth::validator_for(&steward1, "node9", "Node9", "10.1.9.9".parse().unwrap());
        let before: Vec<PoolState> =
            pool.nodes.iter().map(|n| n.local_state.clone()).collect();
        let report = pool
            .submit(
                "node3",
                Submission {
                    submitter_did: steward1.did,
                    txn: Txn::Node(NodeTxn::from(&second)),
                },
            )
            .unwrap();
        assert_eq!(
            report.rejection.as_ref().map(|e| e.code),
            Some(AuthCode::StewardAlreadyHasNode)
        );
        // The refusal happened at the gatekeeper: one message, one round.
        assert_eq!(report.rounds_to_converge, 1);
        assert_eq!(report.messages_delivered, 1);
        assert!(pool.ordering_log().is_empty());
        for (node, snapshot) in pool.nodes.iter().zip(&before) {
            assert_eq!(node.local_state, *snapshot);
        }
    }

    #[test]
    fn submitting_to_a_dead_alias_is_an_error() {
        let mut pool = fixture_pool();
        let (nym, _) = onboarding_submissions(5);
        let err = pool.submit("node9", nym).unwrap_err();
        assert!(matches!(err, NetsimError::UnknownNode { alias } if alias == "node9"));
    }

    #[test]
    fn accepted_sequences_match_the_replay_oracle() {
        let mut pool = fixture_pool();
        let (nym, node_sub) = onboarding_submissions(5);
        pool.submit("node2", nym).unwrap();
        pool.submit("node4", node_sub).unwrap();
        let (domain, pool_doc) = fixture_docs();
        let oracle = replay(SIM_NETWORK, &domain, &pool_doc, pool.ordering_log()).unwrap();
        for node in &pool.nodes {
            assert_eq!(node.local_state, oracle);
            assert_eq!(node.local_state.validators.len(), 5);
        }
    }

    #[test]
    fn scripted_scenarios_are_reproducible() {
        assert_eq!(scripted_scenario(42), scripted_scenario(42));
        let scenario = scripted_scenario(7);
        assert!((4..=12).contains(&scenario.steps.len()));
    }

    #[test]
    fn scenarios_round_trip_through_json() {
        let scenario = scripted_scenario(3);
        let json = serde_json::to_string(&scenario).unwrap();
        assert_eq!(serde_json::from_str::<Scenario>(&json).unwrap(), scenario);
    }

    #[test]
    fn inproc_transport_is_fifo_and_drops_unknown_destinations() {
        let mut transport = InProcTransport::new();
        let a = Endpoint {
            ip: "10.0.0.1".parse().unwrap(),
            port: 9701,
        };
        let b = Endpoint {
            ip: "10.0.0.2".parse().unwrap(),
            port: 9701,
        };
        transport.register(a).unwrap();
        let (nym, _) = onboarding_submissions(5);
        let first = Message::Submit { submission: nym.clone() };
        let second = Message::Order { submission: nym };
        assert!(transport.send(&a, &first).unwrap());
        assert!(transport.send(&a, &second).unwrap());
        assert!(!transport.send(&b, &first).unwrap(), "unregistered endpoint drops");
        assert_eq!(transport.recv().unwrap(), Some((a, first)));
        assert_eq!(transport.recv().unwrap(), Some((a, second)));
        assert_eq!(transport.recv().unwrap(), None);
        assert!(matches!(
            transport.register(a),
            Err(NetsimError::EndpointInUse { .. })
        ));
    }

    #[test]
    fn tcp_transport_round_trips_frames() {
        let mut transport = TcpTransport::new();
        let a = Endpoint {
            ip: "10.0.0.1".parse().unwrap(),
            port: 9701,
        };
        transport.register(a).unwrap();
        assert!(matches!(
            transport.register(a),
            Err(NetsimError::EndpointInUse { .. })
        ));
        assert_eq!(transport.recv().unwrap(), None, "nothing sent yet");
        let (nym, node_sub) = onboarding_submissions(5);
        let first = Message::Commit {
            seq: 1,
            submission: nym,
        };
        let second = Message::Submit {
            submission: node_sub,
        };
        assert!(transport.send(&a, &first).unwrap());
        assert!(transport.send(&a, &second).unwrap());
        let unknown = Endpoint {
            ip: "10.0.0.9".parse().unwrap(),
            port: 9701,
        };
        assert!(!transport.send(&unknown, &first).unwrap());
        assert_eq!(transport.recv().unwrap(), Some((a, first)));
        assert_eq!(transport.recv().unwrap(), Some((a, second)));
        assert_eq!(transport.recv().unwrap(), None);
    }
}
