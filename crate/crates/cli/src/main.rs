//! `indyforge` — bootstrap toolkit for permissioned identity ledgers.
//!
//! Every command prints its result as pretty JSON on stdout. Failures follow
//! one convention: validation and authorization problems exit 1 with one
//! compact JSON finding per line on stderr (each carrying a `code` field);
//! I/O and network problems exit 2 with a plain `error:` line. Secrets never
//! reach stdout — a generated seed is echoed once to stderr, marked
//! `SECRET-SEED`, and appears in no report.

use clap::{Parser, Subcommand, ValueEnum};
use indyforge::deploykit::{
    fetch_genesis, init_node_report, render_deployment, DeployError, NetworkConfig,
};
use indyforge::genesis::{
    build_domain_genesis, build_pool_genesis, parse_genesis, serialize_genesis, GenesisDoc,
    GenesisKind, DOMAIN_FILE_NAME, POOL_FILE_NAME,
};
use indyforge::keymat::{derive_signing_identity, KeymatError, Seed};
use indyforge::netsim::{run_scenario, spawn_pool_with, NetsimError, Scenario, TransportKind};
use indyforge::poolstate::{bootstrap_state, StateError, Submission};
use indyforge::roster::{parse_steward_csv, parse_trustee_csv, validate_roster, STEWARD_HEADER};
use indyforge::Did;
use rand::RngCore;
use serde_json::{json, Value};
use std::net::IpAddr;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "indyforge", version, about = "Bootstrap toolkit for permissioned identity ledgers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive a DID and verkey from a seed (or a fresh random one).
    Keygen {
        /// 32-byte seed, base58 or hex; generated randomly when omitted.
        #[arg(long)]
        seed: Option<String>,
    },
    /// Run the node init ceremony: derive node keys and report the
    /// material a steward publishes in its NODE transaction.
    InitNode {
        /// Node alias.
        #[arg(long)]
        alias: String,
        /// Inter-validator address.
        #[arg(long)]
        node_ip: IpAddr,
        /// Inter-validator port.
        #[arg(long)]
        node_port: u16,
        /// Client-facing address.
        #[arg(long)]
        client_ip: IpAddr,
        /// Client-facing port.
        #[arg(long)]
        client_port: u16,
        /// 32-byte seed, base58 or hex; generated randomly when omitted.
        #[arg(long)]
        seed: Option<String>,
    },
    /// Genesis file operations.
    Genesis {
        #[command(subcommand)]
        action: GenesisAction,
    },
    /// Validator pool simulation.
    Pool {
        #[command(subcommand)]
        action: PoolAction,
    },
    /// Post-genesis node operations.
    Node {
        #[command(subcommand)]
        action: NodeAction,
    },
    /// Deployment artifact rendering.
    Deploy {
        #[command(subcommand)]
        action: DeployAction,
    },
    /// Fetch a published genesis file and validate it before saving.
    Fetch {
        /// HTTP(S) location of the published file.
        #[arg(long)]
        url: String,
        /// Where to write the validated bytes.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum GenesisAction {
    /// Build the domain and pool genesis files from roster CSVs.
    Build {
        /// Trustee sheet (name,did,verkey).
        #[arg(long)]
        trustees: PathBuf,
        /// Steward sheet (name,did,verkey,alias,…,bls_pop).
        #[arg(long)]
        stewards: PathBuf,
        /// Directory receiving both genesis files.
        #[arg(long)]
        out_dir: PathBuf,
        /// Skip the production counting rules (3 trustees, 4 stewards).
        #[arg(long)]
        no_strict: bool,
    },
    /// Parse and cross-verify an existing genesis pair.
    Verify {
        /// The domain genesis file.
        #[arg(long)]
        domain: PathBuf,
        /// The pool genesis file.
        #[arg(long)]
        pool: PathBuf,
        /// Skip the production counting rules.
        #[arg(long)]
        no_strict: bool,
    },
}

#[derive(Subcommand)]
enum PoolAction {
    /// Spawn a simulated pool from a genesis pair and run a scenario.
    Simulate {
        /// The domain genesis file.
        #[arg(long)]
        domain: PathBuf,
        /// The pool genesis file.
        #[arg(long)]
        pool: PathBuf,
        /// Scenario JSON: {"steps":[{"target":alias,"submission":{…}}]}.
        #[arg(long)]
        scenario: PathBuf,
        /// Message channel implementation.
        #[arg(long, value_enum, default_value_t = TransportArg::Inproc)]
        transport: TransportArg,
    },
}

#[derive(Subcommand)]
enum NodeAction {
    /// Run the steward-onboarding workflow (NYM then NODE) against the
    /// state a genesis pair bootstraps, and print the submissions.
    Add {
        /// The domain genesis file.
        #[arg(long)]
        domain: PathBuf,
        /// The pool genesis file.
        #[arg(long)]
        pool: PathBuf,
        /// One steward-sheet data row describing the newcomer.
        #[arg(long)]
        steward_csv_row: String,
        /// DID of the sponsoring trustee.
        #[arg(long)]
        trustee_did: String,
    },
}

#[derive(Subcommand)]
enum DeployAction {
    /// Render the full deployment plan for a roster into a directory.
    Render {
        /// Network name ([A-Za-z0-9_]+).
        #[arg(long)]
        network: String,
        /// Trustee sheet.
        #[arg(long)]
        trustees: PathBuf,
        /// Steward sheet.
        #[arg(long)]
        stewards: PathBuf,
        /// Directory receiving the rendered plan.
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TransportArg {
    /// Deterministic in-process queue.
    Inproc,
    /// Loopback TCP with length-prefixed frames.
    Tcp,
}

impl From<TransportArg> for TransportKind {
    fn from(arg: TransportArg) -> Self {
        match arg {
            TransportArg::Inproc => TransportKind::InProc,
            TransportArg::Tcp => TransportKind::Tcp,
        }
    }
}

/// How a command failed, deciding the exit code.
enum CliError {
    /// Exit 1: validation or authorization findings, one JSON line each.
    Findings(Vec<Value>),
    /// Exit 2: I/O or network failure.
    Fatal(String),
}

fn main() {
    match run(Cli::parse()) {
        Ok(()) => {}
        Err(CliError::Findings(findings)) => {
            for finding in findings {
                eprintln!("{finding}");
            }
            std::process::exit(1);
        }
        Err(CliError::Fatal(detail)) => {
            eprintln!("error: {detail}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Keygen { seed } => keygen(seed),
        Command::InitNode {
            alias,
            node_ip,
            node_port,
            client_ip,
            client_port,
            seed,
        } => init_node(&alias, node_ip, node_port, client_ip, client_port, seed),
        Command::Genesis { action } => match action {
            GenesisAction::Build {
                trustees,
                stewards,
                out_dir,
                no_strict,
            } => genesis_build(&trustees, &stewards, &out_dir, !no_strict),
            GenesisAction::Verify {
                domain,
                pool,
                no_strict,
            } => genesis_verify(&domain, &pool, !no_strict),
        },
        Command::Pool { action } => match action {
            PoolAction::Simulate {
                domain,
                pool,
                scenario,
                transport,
            } => pool_simulate(&domain, &pool, &scenario, transport.into()),
        },
        Command::Node { action } => match action {
            NodeAction::Add {
                domain,
                pool,
                steward_csv_row,
                trustee_did,
            } => node_add(&domain, &pool, &steward_csv_row, &trustee_did),
        },
        Command::Deploy { action } => match action {
            DeployAction::Render {
                network,
                trustees,
                stewards,
                out_dir,
            } => deploy_render(&network, &trustees, &stewards, &out_dir),
        },
        Command::Fetch { url, out } => fetch(&url, &out),
    }
}

// ---- commands -----------------------------------------------------------

fn keygen(seed_arg: Option<String>) -> Result<(), CliError> {
    let seed = obtain_seed(seed_arg)?;
    let identity = derive_signing_identity(&seed);
    print_report(&json!({
        "did": identity.did,
        "verkey": identity.verkey,
    }));
    Ok(())
}

fn init_node(
    alias: &str,
    node_ip: IpAddr,
    node_port: u16,
    client_ip: IpAddr,
    client_port: u16,
    seed_arg: Option<String>,
) -> Result<(), CliError> {
    let seed = obtain_seed(seed_arg)?;
    let report = init_node_report(
        alias,
        node_ip,
        node_port,
        client_ip,
        client_port,
        seed.as_bytes(),
    )
    .map_err(deploy_failure)?;
    print_report(&serde_json::to_value(&report).expect("reports serialize"));
    Ok(())
}

fn genesis_build(
    trustees: &Path,
    stewards: &Path,
    out_dir: &Path,
    strict: bool,
) -> Result<(), CliError> {
    let roster = load_roster(trustees, stewards, strict)?;
    let domain = serialize_genesis(&build_domain_genesis(&roster));
    let pool = serialize_genesis(&build_pool_genesis(&roster));
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Fatal(format!("creating {}: {e}", out_dir.display())))?;
    let domain_path = out_dir.join(DOMAIN_FILE_NAME);
    let pool_path = out_dir.join(POOL_FILE_NAME);
    write_file(&domain_path, &domain)?;
    write_file(&pool_path, &pool)?;
    print_report(&json!({
        "domain": domain_path.display().to_string(),
        "pool": pool_path.display().to_string(),
        "trustees": roster.trustees.len(),
        "stewards": roster.stewards.len(),
    }));
    Ok(())
}

fn genesis_verify(domain: &Path, pool: &Path, strict: bool) -> Result<(), CliError> {
    let domain_doc = load_genesis(domain, GenesisKind::Domain)?;
    let pool_doc = load_genesis(pool, GenesisKind::Pool)?;
    let report = indyforge::genesis::verify_genesis_pair(&domain_doc, &pool_doc, strict);
    if !report.is_launch_ready() {
        return Err(CliError::Findings(
            report
                .violations
                .iter()
                .map(|v| serde_json::to_value(v).expect("violations serialize"))
                .collect(),
        ));
    }
    print_report(&json!({
        "launch_ready": true,
        "strict": strict,
        "domain_txns": domain_doc.txns.len(),
        "pool_txns": pool_doc.txns.len(),
    }));
    Ok(())
}

fn pool_simulate(
    domain: &Path,
    pool: &Path,
    scenario_path: &Path,
    transport: TransportKind,
) -> Result<(), CliError> {
    let domain_doc = load_genesis(domain, GenesisKind::Domain)?;
    let pool_doc = load_genesis(pool, GenesisKind::Pool)?;
    let scenario_bytes = read_file(scenario_path)?;
    let scenario: Scenario = serde_json::from_slice(&scenario_bytes).map_err(|e| {
        CliError::Findings(vec![json!({
            "code": "BadScenario",
            "file": scenario_path.display().to_string(),
            "detail": e.to_string(),
        })])
    })?;

    let mut sim = spawn_pool_with(&domain_doc, &pool_doc, transport).map_err(netsim_failure)?;
    let reports = run_scenario(&mut sim, &scenario).map_err(netsim_failure)?;

    let rejections: Vec<Value> = reports
        .iter()
        .enumerate()
        .filter_map(|(step, report)| {
            report.rejection.as_ref().map(|error| {
                let mut finding =
                    serde_json::to_value(error).expect("authorization errors serialize");
                finding["step"] = json!(step);
                finding
            })
        })
        .collect();
    let last = sim.report();
    print_report(&json!({
        "steps": scenario.steps.len(),
        "accepted": reports.len() - rejections.len(),
        "rejected": rejections.len(),
        "converged": last.converged,
        "rounds": reports.iter().map(|r| r.rounds_to_converge).sum::<u64>(),
        "messages_delivered": reports.iter().map(|r| r.messages_delivered).sum::<u64>(),
        "membership_size": last.membership_size,
    }));
    if !rejections.is_empty() {
        return Err(CliError::Findings(rejections));
    }
    Ok(())
}

fn node_add(
    domain: &Path,
    pool: &Path,
    steward_csv_row: &str,
    trustee_did: &str,
) -> Result<(), CliError> {
    let domain_doc = load_genesis(domain, GenesisKind::Domain)?;
    let pool_doc = load_genesis(pool, GenesisKind::Pool)?;
    let state = bootstrap_state("offline", &domain_doc, &pool_doc).map_err(|err| match err {
        StateError::GenesisInvalid { report } => CliError::Findings(
            report
                .violations
                .iter()
                .map(|v| serde_json::to_value(v).expect("violations serialize"))
                .collect(),
        ),
        StateError::ReplayAborted { .. } => unreachable!("bootstrap replays nothing"),
    })?;

    let sheet = format!("{}\n{steward_csv_row}\n", STEWARD_HEADER.join(","));
    let mut pairs = parse_steward_csv(sheet.as_bytes())
        .map_err(|errors| CliError::Findings(findings_from(&errors, None)))?;
    let Some((steward, validator)) = pairs.pop() else {
        return Err(CliError::Findings(vec![json!({
            "code": "CsvShape",
            "detail": "the steward row is empty",
        })]));
    };

    let trustee = Did::new(trustee_did);
    let next = state
        .add_node_workflow(&trustee, &steward, &validator)
        .map_err(|error| {
            CliError::Findings(vec![
                serde_json::to_value(&error).expect("authorization errors serialize")
            ])
        })?;

    let nym = Submission {
        submitter_did: trustee,
        txn: indyforge::genesis::Txn::Nym((&steward).into()),
    };
    let node = Submission {
        submitter_did: steward.did.clone(),
        txn: indyforge::genesis::Txn::Node((&validator).into()),
    };
    print_report(&json!({
        "participants": next.participants.len(),
        "validators": next.validators.len(),
        "submissions": [nym, node],
    }));
    Ok(())
}

fn deploy_render(
    network: &str,
    trustees: &Path,
    stewards: &Path,
    out_dir: &Path,
) -> Result<(), CliError> {
    let roster = load_roster(trustees, stewards, true)?;
    let domain = serialize_genesis(&build_domain_genesis(&roster));
    let pool = serialize_genesis(&build_pool_genesis(&roster));
    let cfg = NetworkConfig::named(network);
    let data_root = std::env::var("INDYFORGE_DATA_ROOT").ok();
    let plan = render_deployment(&cfg, &roster, &domain, &pool, data_root.as_deref())
        .map_err(deploy_failure)?;
    plan.write_to(out_dir).map_err(deploy_failure)?;
    print_report(&json!({
        "out_dir": out_dir.display().to_string(),
        "files": plan.files.keys().collect::<Vec<_>>(),
        "port_bindings": serde_json::to_value(&plan.port_bindings).expect("bindings serialize"),
    }));
    Ok(())
}

fn fetch(url: &str, out: &Path) -> Result<(), CliError> {
    let bytes = fetch_genesis(url).map_err(deploy_failure)?;
    let (kind, doc) = match parse_genesis(&bytes, GenesisKind::Domain) {
        Ok(doc) => ("domain", doc),
        Err(domain_err) => match parse_genesis(&bytes, GenesisKind::Pool) {
            Ok(doc) => ("pool", doc),
            Err(pool_err) => {
                let mut findings = Vec::new();
                for (tried, error) in [("domain", domain_err), ("pool", pool_err)] {
                    let mut finding =
                        serde_json::to_value(&error).expect("genesis errors serialize");
                    finding["tried"] = json!(tried);
                    finding["url"] = json!(url);
                    findings.push(finding);
                }
                return Err(CliError::Findings(findings));
            }
        },
    };
    write_file(out, &bytes)?;
    print_report(&json!({
        "out": out.display().to_string(),
        "kind": kind,
        "txns": doc.txns.len(),
    }));
    Ok(())
}

// ---- shared plumbing ----------------------------------------------------

/// Pretty JSON on stdout: the one place results go. A consumer that stops
/// reading (`indyforge … | head`) closes the pipe mid-report; that is the
/// consumer's choice, not a failure here.
fn print_report(report: &Value) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(report).expect("reports serialize");
    if let Err(error) = writeln!(std::io::stdout(), "{text}") {
        if error.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: writing report: {error}");
        std::process::exit(2);
    }
}

/// Parses `--seed` (base58 first, hex as fallback) or generates a fresh
/// random seed, echoing the generated one once to stderr with a `SECRET-SEED`
/// marker so it cannot end up in a piped report.
fn obtain_seed(arg: Option<String>) -> Result<Seed, CliError> {
    match arg {
        Some(text) => match Seed::from_base58(&text) {
            Ok(seed) => Ok(seed),
            Err(base58_err) => match hex::decode(&text)
                .ok()
                .and_then(|bytes| Seed::from_bytes(&bytes).ok())
            {
                Some(seed) => Ok(seed),
                None => Err(keymat_failure(&base58_err)),
            },
        },
        None => {
            let mut bytes = [0u8; 32];
            rand::rngs::OsRng.fill_bytes(&mut bytes);
            let seed = Seed::from_bytes(&bytes).expect("32 bytes by construction");
            eprintln!("SECRET-SEED {}", seed.to_base58());
            Ok(seed)
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Fatal(format!("reading {}: {e}", path.display())))
}

fn write_file(path: &Path, content: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::Fatal(format!("writing {}: {e}", path.display())))
}

/// Reads and parses one genesis file, turning a refusal into a finding that
/// names the file.
fn load_genesis(path: &Path, kind: GenesisKind) -> Result<GenesisDoc, CliError> {
    let bytes = read_file(path)?;
    parse_genesis(&bytes, kind).map_err(|error| {
        let mut finding = serde_json::to_value(&error).expect("genesis errors serialize");
        finding["file"] = json!(path.display().to_string());
        CliError::Findings(vec![finding])
    })
}

/// Reads both roster sheets and validates them into a [`indyforge::Roster`].
fn load_roster(
    trustees_path: &Path,
    stewards_path: &Path,
    strict: bool,
) -> Result<indyforge::Roster, CliError> {
    let trustees = parse_trustee_csv(&read_file(trustees_path)?)
        .map_err(|errors| CliError::Findings(findings_from(&errors, Some(trustees_path))))?;
    let pairs = parse_steward_csv(&read_file(stewards_path)?)
        .map_err(|errors| CliError::Findings(findings_from(&errors, Some(stewards_path))))?;
    validate_roster(trustees, pairs, strict)
        .map_err(|errors| CliError::Findings(findings_from(&errors, None)))
}

/// Serializes a batch of roster errors, attaching the file they came from.
fn findings_from(errors: &[indyforge::roster::RosterError], file: Option<&Path>) -> Vec<Value> {
    errors
        .iter()
        .map(|error| {
            let mut finding = serde_json::to_value(error).expect("roster errors serialize");
            if let Some(file) = file {
                finding["file"] = json!(file.display().to_string());
            }
            finding
        })
        .collect()
}

fn keymat_failure(error: &KeymatError) -> CliError {
    let finding = match error {
        KeymatError::SeedLength(found) => json!({
            "code": "SeedLength",
            "found": found,
            "detail": "seeds are exactly 32 bytes",
        }),
        KeymatError::Encoding { field, detail } => json!({
            "code": "BadEncoding",
            "field": field,
            "detail": detail,
        }),
    };
    CliError::Findings(vec![finding])
}

fn deploy_failure(error: DeployError) -> CliError {
    match error {
        DeployError::BadNetworkName { name } => CliError::Findings(vec![json!({
            "code": "BadNetworkName",
            "name": name,
            "detail": "network names must match [A-Za-z0-9_]+",
        })]),
        DeployError::GenesisInvalid { kind, error } => {
            let mut finding = serde_json::to_value(&error).expect("genesis errors serialize");
            finding["kind"] = json!(kind);
            CliError::Findings(vec![finding])
        }
        DeployError::BadEndpoint { detail } => CliError::Findings(vec![json!({
            "code": "BadEndpoint",
            "detail": detail,
        })]),
        DeployError::Keymat(error) => keymat_failure(&error),
        DeployError::Network { detail } => CliError::Fatal(detail),
        DeployError::Io(error) => CliError::Fatal(error.to_string()),
    }
}

fn netsim_failure(error: NetsimError) -> CliError {
    match error {
        NetsimError::GenesisInvalid { report } => CliError::Findings(
            report
                .violations
                .iter()
                .map(|v| serde_json::to_value(v).expect("violations serialize"))
                .collect(),
        ),
        NetsimError::UnknownNode { alias } => CliError::Findings(vec![json!({
            "code": "UnknownNode",
            "alias": alias,
            "detail": "no live node has this alias",
        })]),
        NetsimError::EndpointInUse { endpoint } => CliError::Findings(vec![json!({
            "code": "EndpointInUse",
            "endpoint": endpoint.to_string(),
        })]),
        NetsimError::Auth(error) => CliError::Findings(vec![
            serde_json::to_value(&error).expect("authorization errors serialize")
        ]),
        NetsimError::Transport { detail } => CliError::Fatal(detail),
    }
}
