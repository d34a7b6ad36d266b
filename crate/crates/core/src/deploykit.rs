//! Deployment artifact rendering and genesis retrieval.
//!
//! Everything here renders *declarative* artifacts — node config files, the
//! network-named genesis directory layout, a container-orchestration
//! descriptor — rather than executing anything against live hosts. Rendered
//! bytes are deterministic for equal inputs, which makes the whole surface
//! golden-file testable, and a [`DeployPlan`] can be written to disk and
//! handed to any executor.
//!
//! The one piece of I/O is [`fetch_genesis`], for pulling published genesis
//! files off a plain HTTP(S) host; callers validate the bytes with
//! [`parse_genesis`](crate::genesis::parse_genesis) before trusting them.

use crate::genesis::{parse_genesis, GenesisError, GenesisKind, DOMAIN_FILE_NAME, POOL_FILE_NAME};
use crate::keymat::{derive_bls_identity, derive_signing_identity, KeymatError, Seed};
use crate::roster::{Roster, ValidatorInfo};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::net::IpAddr;
use std::path::Path;
use std::time::Duration;

/// Default location of the genesis directory, relative to the plan root.
/// Mirrors the conventional absolute path without requiring privileged
/// paths when plans are written during tests.
pub const DEFAULT_DATA_ROOT: &str = "var/lib/indy";

/// Container-side validator ports: inter-validator and client.
pub const CONTAINER_NODE_PORT: u16 = 9701;
/// Container-side client port.
pub const CONTAINER_CLIENT_PORT: u16 = 9702;

/// How long a genesis fetch may take before it counts as unreachable.
const FETCH_TIMEOUT: Duration = Duration::from_secs(10);

/// What to deploy: the network's name and, optionally, where its genesis
/// files are published.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkConfig {
    /// The network name; becomes a directory name and a config literal, so
    /// it is restricted to `[A-Za-z0-9_]+`.
    pub network_name: String,
    /// Where the domain genesis file is published, if anywhere.
    pub genesis_domain_url: Option<String>,
    /// Where the pool genesis file is published, if anywhere.
    pub genesis_pool_url: Option<String>,
}

impl NetworkConfig {
    /// A config with just a name and no published genesis locations.
    pub fn named(network_name: &str) -> Self {
        NetworkConfig {
            network_name: network_name.to_owned(),
            genesis_domain_url: None,
            genesis_pool_url: None,
        }
    }

    /// Enforces the `[A-Za-z0-9_]+` naming rule.
    ///
    /// # Errors
    ///
    /// [`DeployError::BadNetworkName`] when the name is empty or carries any
    /// other character.
    pub fn validate(&self) -> Result<(), DeployError> {
        let ok = !self.network_name.is_empty()
            && self
                .network_name
                .bytes()
                .all(|b| b.is_ascii_alphanumeric() || b == b'_');
        if ok {
            Ok(())
        } else {
            Err(DeployError::BadNetworkName {
                name: self.network_name.clone(),
            })
        }
    }
}

/// Host-port assignment for one validator's container.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PortBinding {
    /// Host port forwarded to the container's inter-validator port.
    pub node_port: u16,
    /// Host port forwarded to the container's client port.
    pub client_port: u16,
}

/// A rendered deployment: relative file paths with their byte content, plus
/// the host-port bindings the orchestration descriptor encodes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeployPlan {
    /// Relative path → exact file bytes.
    pub files: BTreeMap<String, Vec<u8>>,
    /// Validator alias → host ports, in roster order.
    pub port_bindings: BTreeMap<String, PortBinding>,
}

impl DeployPlan {
    /// Merges another plan fragment into this one. Paths must not collide —
    /// a collision is a rendering bug, not an input error.
    fn absorb(&mut self, other: DeployPlan) {
        for (path, content) in other.files {
            let clash = self.files.insert(path.clone(), content);
            debug_assert!(clash.is_none(), "plan fragments collided on {path:?}");
        }
        self.port_bindings.extend(other.port_bindings);
    }

    /// Writes every file under `root`, creating directories as needed.
    ///
    /// # Errors
    ///
    /// Any I/O failure, wrapped as [`DeployError::Io`].
    pub fn write_to(&self, root: &Path) -> Result<(), DeployError> {
        for (relative, content) in &self.files {
            let path = root.join(relative);
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(path, content)?;
        }
        Ok(())
    }
}

/// The `init-node` ceremony's public outcome: everything an operator needs
/// to hand upstream for a NODE transaction. The seed that produced the keys
/// is deliberately not part of the report — it must never travel with it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InitReport {
    /// Node alias.
    pub alias: String,
    /// Inter-validator address.
    pub node_ip: IpAddr,
    /// Inter-validator port.
    pub node_port: u16,
    /// Client-facing address.
    pub client_ip: IpAddr,
    /// Client-facing port.
    pub client_port: u16,
    /// The node's verkey (base58).
    pub verkey: String,
    /// The node's BLS public key (base58).
    pub bls_key: String,
    /// The node's BLS proof of possession (base58).
    pub bls_pop: String,
}

/// Failures of rendering, fetching, or the init ceremony.
#[derive(Debug, thiserror::Error)]
pub enum DeployError {
    /// The network name cannot become a directory name and config literal.
    #[error("network name {name:?} must match [A-Za-z0-9_]+")]
    BadNetworkName {
        /// The offending name.
        name: String,
    },
    /// A genesis byte stream did not parse as the expected kind.
    #[error("{kind} genesis rejected: {error}")]
    GenesisInvalid {
        /// Which file was being checked.
        kind: GenesisKind,
        /// The parser's refusal.
        error: GenesisError,
    },
    /// The fetch did not produce a 200 body.
    #[error("fetch failed: {detail}")]
    Network {
        /// Status or transport specifics.
        detail: String,
    },
    /// An endpoint field is unusable.
    #[error("endpoint rejected: {detail}")]
    BadEndpoint {
        /// What was wrong.
        detail: String,
    },
    /// Key derivation refused the seed.
    #[error(transparent)]
    Keymat(#[from] KeymatError),
    /// Filesystem failure while writing a plan.
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

/// Renders the node config file: a header plus exactly one
/// `NETWORK_NAME = '<name>'` line. Deterministic for equal configs.
///
/// # Errors
///
/// [`DeployError::BadNetworkName`] when the name breaks the charset rule.
pub fn render_node_config(cfg: &NetworkConfig) -> Result<Vec<u8>, DeployError> {
    cfg.validate()?;
    Ok(format!(
        "# indy_config.py — rendered, do not edit by hand.\n\
         # The network name must equal the genesis directory name on every node.\n\
         NETWORK_NAME = '{}'\n",
        cfg.network_name
    )
    .into_bytes())
}

/// Renders the genesis directory fragment of a plan: both files placed
/// byte-identical under `<data_root>/<network_name>/`. `data_root` defaults
/// to [`DEFAULT_DATA_ROOT`].
///
/// # Errors
///
/// [`DeployError::BadNetworkName`] on a bad name;
/// [`DeployError::GenesisInvalid`] when either byte stream fails to parse
/// as its kind — nothing unparseable gets placed.
pub fn render_network_layout(
    cfg: &NetworkConfig,
    domain_bytes: &[u8],
    pool_bytes: &[u8],
    data_root: Option<&str>,
) -> Result<DeployPlan, DeployError> {
    cfg.validate()?;
    for (kind, bytes) in [
        (GenesisKind::Domain, domain_bytes),
        (GenesisKind::Pool, pool_bytes),
    ] {
        parse_genesis(bytes, kind).map_err(|error| DeployError::GenesisInvalid { kind, error })?;
    }
    let dir = format!(
        "{}/{}",
        data_root.unwrap_or(DEFAULT_DATA_ROOT),
        cfg.network_name
    );
    let mut plan = DeployPlan::default();
    plan.files
        .insert(format!("{dir}/{DOMAIN_FILE_NAME}"), domain_bytes.to_vec());
    plan.files
        .insert(format!("{dir}/{POOL_FILE_NAME}"), pool_bytes.to_vec());
    Ok(plan)
}

/// Host ports for the k-th validator (1-based): `9700 + 2k − 1` for the
/// node channel, `9700 + 2k` for the client channel. Injective by
/// construction, and the first validator lands on the conventional
/// 9701/9702.
fn host_ports(k: usize) -> PortBinding {
    let client = 9700 + 2 * k;
    assert!(client <= u16::MAX as usize, "roster too large for the host port scheme");
    PortBinding {
        node_port: (client - 1) as u16,
        client_port: client as u16,
    }
}

/// Renders the orchestration descriptor: one service per validator in
/// roster order, container ports 9701/9702, host ports per the offset
/// scheme, config and genesis directory mounted read-only. Deterministic
/// for equal inputs.
///
/// # Errors
///
/// [`DeployError::BadNetworkName`] when the config's name is unusable.
pub fn render_compose(roster: &Roster, cfg: &NetworkConfig) -> Result<Vec<u8>, DeployError> {
    render_compose_with(roster, cfg, None)
}

fn render_compose_with(
    roster: &Roster,
    cfg: &NetworkConfig,
    data_root: Option<&str>,
) -> Result<Vec<u8>, DeployError> {
    cfg.validate()?;
    let name = &cfg.network_name;
    let genesis_dir = format!("{}/{name}", data_root.unwrap_or(DEFAULT_DATA_ROOT));
    let mut out = String::new();
    out.push_str(&format!(
        "# docker-compose.yml — rendered for network '{name}', do not edit by hand.\n\
         services:\n"
    ));
    for (k, validator) in roster.validators.iter().enumerate() {
        let alias = &validator.alias;
        let ports = host_ports(k + 1);
        out.push_str(&format!(
            "  {alias}:\n\
             \x20   image: indy-node\n\
             \x20   container_name: {alias}\n\
             \x20   ports:\n\
             \x20     - \"{}:{CONTAINER_NODE_PORT}\"\n\
             \x20     - \"{}:{CONTAINER_CLIENT_PORT}\"\n\
             \x20   volumes:\n\
             \x20     - ./nodes/{alias}/indy_config.py:/etc/indy/indy_config.py:ro\n\
             \x20     - ./{genesis_dir}:/var/lib/indy/{name}:ro\n",
            ports.node_port, ports.client_port
        ));
    }
    if roster.validators.is_empty() {
        out.push_str("  {}\n");
    }
    Ok(out.into_bytes())
}

/// Renders the complete deployment: one config file per validator, the
/// genesis layout, the orchestration descriptor, and the port-binding
/// table. `data_root` defaults to [`DEFAULT_DATA_ROOT`].
///
/// # Errors
///
/// [`DeployError::BadNetworkName`] or [`DeployError::GenesisInvalid`], as
/// for the fragments.
pub fn render_deployment(
    cfg: &NetworkConfig,
    roster: &Roster,
    domain_bytes: &[u8],
    pool_bytes: &[u8],
    data_root: Option<&str>,
) -> Result<DeployPlan, DeployError> {
    let mut plan = render_network_layout(cfg, domain_bytes, pool_bytes, data_root)?;
    let node_config = render_node_config(cfg)?;
    for validator in &roster.validators {
        plan.files.insert(
            format!("nodes/{}/indy_config.py", validator.alias),
            node_config.clone(),
        );
    }
    let mut descriptor = DeployPlan::default();
    descriptor.files.insert(
        "docker-compose.yml".to_owned(),
        render_compose_with(roster, cfg, data_root)?,
    );
    for (k, validator) in roster.validators.iter().enumerate() {
        descriptor
            .port_bindings
            .insert(validator.alias.clone(), host_ports(k + 1));
    }
    plan.absorb(descriptor);
    Ok(plan)
}

/// Fetches published genesis bytes over HTTP(S).
///
/// Returns the body only on status 200; callers must still run the bytes
/// through [`parse_genesis`](crate::genesis::parse_genesis) before using
/// them — publication proves nothing about integrity.
///
/// # Errors
///
/// [`DeployError::Network`] on transport failure, timeout, or any
/// non-200 status.
pub fn fetch_genesis(url: &str) -> Result<Vec<u8>, DeployError> {
    let client = reqwest::blocking::Client::builder()
        .timeout(FETCH_TIMEOUT)
        .build()
        .map_err(|e| DeployError::Network {
            detail: format!("client setup: {e}"),
        })?;
    let response = client.get(url).send().map_err(|e| DeployError::Network {
        detail: format!("GET {url}: {e}"),
    })?;
    let status = response.status();
    if status != reqwest::StatusCode::OK {
        return Err(DeployError::Network {
            detail: format!("GET {url}: status {status}"),
        });
    }
    let body = response.bytes().map_err(|e| DeployError::Network {
        detail: format!("GET {url}: reading body: {e}"),
    })?;
    Ok(body.to_vec())
}

/// The `init-node` ceremony: derives the node's key material from a seed
/// and reports everything the steward must publish for its NODE
/// transaction. The seed itself stays out of the report; echoing it to the
/// operator over a secure channel is the caller's job.
///
/// # Errors
///
/// [`DeployError::Keymat`] when the seed is not exactly 32 bytes;
/// [`DeployError::BadEndpoint`] for a zero port or identical node/client
/// endpoints.
pub fn init_node_report(
    alias: &str,
    node_ip: IpAddr,
    node_port: u16,
    client_ip: IpAddr,
    client_port: u16,
    seed_bytes: &[u8],
) -> Result<InitReport, DeployError> {
    if node_port == 0 || client_port == 0 {
        return Err(DeployError::BadEndpoint {
            detail: "port 0 is not routable".to_owned(),
        });
    }
    if (node_ip, node_port) == (client_ip, client_port) {
        return Err(DeployError::BadEndpoint {
            detail: format!("node and client endpoints are both {node_ip}:{node_port}"),
        });
    }
    let seed = Seed::from_bytes(seed_bytes)?;
    let signing = derive_signing_identity(&seed);
    let bls = derive_bls_identity(&seed);
    Ok(InitReport {
        alias: alias.to_owned(),
        node_ip,
        node_port,
        client_ip,
        client_port,
        verkey: signing.verkey,
        bls_key: bls.bls_key,
        bls_pop: bls.bls_pop,
    })
}

/// The roster-shaped view of an init report, for feeding a NODE submission.
impl InitReport {
    /// Pairs the report with its steward to form a [`ValidatorInfo`].
    pub fn to_validator(&self, steward_did: &crate::keymat::Did) -> ValidatorInfo {
        ValidatorInfo {
            alias: self.alias.clone(),
            node_ip: self.node_ip,
            node_port: self.node_port,
            client_ip: self.client_ip,
            client_port: self.client_port,
            verkey: self.verkey.clone(),
            bls_key: self.bls_key.clone(),
            bls_pop: self.bls_pop.clone(),
            steward_did: steward_did.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genesis::{build_domain_genesis, build_pool_genesis, serialize_genesis};
    use crate::synth;

    fn fixture_bytes() -> (Vec<u8>, Vec<u8>) {
        let roster = synth::fixture_roster();
        (
            serialize_genesis(&build_domain_genesis(&roster)),
            serialize_genesis(&build_pool_genesis(&roster)),
        )
    }

    #[test]
    fn node_config_has_exactly_one_network_name_line() {
        let rendered = render_node_config(&NetworkConfig::named("net3")).unwrap();
        let text = String::from_utf8(rendered).unwrap();
        let hits: Vec<&str> = text
            .lines()
            .filter(|l| l.starts_with("NETWORK_NAME"))
            .collect();
        assert_eq!(hits, ["NETWORK_NAME = 'net3'"]);
    }

    #[test]
    fn sandbox_is_a_legal_network_name() {
        let rendered = render_node_config(&NetworkConfig::named("sandbox")).unwrap();
        let text = String::from_utf8(rendered).unwrap();
        assert!(text.contains("NETWORK_NAME = 'sandbox'\n"));
    }

    #[test]
    fn hostile_network_names_are_refused() {
        for name in ["bad name", "", "net-3", "net/3", "net'3", "νετ3"] {
            let err = render_node_config(&NetworkConfig::named(name)).unwrap_err();
            assert!(
                matches!(err, DeployError::BadNetworkName { .. }),
                "{name:?} slipped through"
            );
        }
    }

    #[test]
    fn layout_places_genesis_bytes_verbatim_under_the_network_directory() {
        let (domain, pool) = fixture_bytes();
        let cfg = NetworkConfig::named("net3");
        let plan = render_network_layout(&cfg, &domain, &pool, None).unwrap();
        assert_eq!(
            plan.files["var/lib/indy/net3/domain_transactions_genesis"],
            domain
        );
        assert_eq!(
            plan.files["var/lib/indy/net3/pool_transactions_genesis"],
            pool
        );
        let again = render_network_layout(&cfg, &domain, &pool, None).unwrap();
        assert_eq!(plan, again);
    }

    #[test]
    fn layout_honors_a_custom_data_root() {
        let (domain, pool) = fixture_bytes();
        let plan =
            render_network_layout(&NetworkConfig::named("net3"), &domain, &pool, Some("lib/indy"))
                .unwrap();
        assert!(plan.files.contains_key("lib/indy/net3/domain_transactions_genesis"));
    }

    #[test]
    fn layout_refuses_bytes_that_do_not_parse() {
        let (domain, pool) = fixture_bytes();
        // Cut mid-line: a cut exactly at a line boundary leaves a shorter
        // but internally consistent chain, which the parser rightly accepts.
        let truncated = &pool[..pool.len() / 2 + 1];
        let err = render_network_layout(&NetworkConfig::named("net3"), &domain, truncated, None)
            .unwrap_err();
        assert!(matches!(
            err,
            DeployError::GenesisInvalid {
                kind: GenesisKind::Pool,
                ..
            }
        ));
        // Swapped files fail too: a domain stream is not a pool stream.
        let err = render_network_layout(&NetworkConfig::named("net3"), &pool, &domain, None)
            .unwrap_err();
        assert!(matches!(err, DeployError::GenesisInvalid { .. }));
    }

    #[test]
    fn compose_binds_sequential_host_ports() {
        let cfg = NetworkConfig::named("net3");
        let rendered = render_compose(&synth::fixture_roster(), &cfg).unwrap();
        let text = String::from_utf8(rendered).unwrap();
        for (host, container) in [
            (9701, 9701),
            (9702, 9702),
            (9703, 9701),
            (9704, 9702),
            (9705, 9701),
            (9706, 9702),
            (9707, 9701),
            (9708, 9702),
        ] {
            assert!(
                text.contains(&format!("\"{host}:{container}\"")),
                "missing binding {host}:{container}"
            );
        }
        assert_eq!(text.matches("image: indy-node").count(), 4);
    }

    #[test]
    fn an_empty_relaxed_roster_renders_zero_services() {
        let roster = synth::roster(0, 0, false);
        let rendered = render_compose(&roster, &NetworkConfig::named("net3")).unwrap();
        let text = String::from_utf8(rendered).unwrap();
        assert!(!text.contains("image:"));
        assert!(text.contains("services:"));
    }

    #[test]
    fn full_deployment_covers_configs_layout_and_descriptor() {
        let (domain, pool) = fixture_bytes();
        let cfg = NetworkConfig::named("net3");
        let roster = synth::fixture_roster();
        let plan = render_deployment(&cfg, &roster, &domain, &pool, None).unwrap();
        assert_eq!(plan.files.len(), 4 + 2 + 1, "4 configs, 2 genesis files, 1 descriptor");
        for alias in ["node1", "node2", "node3", "node4"] {
            let config = &plan.files[&format!("nodes/{alias}/indy_config.py")];
            assert!(String::from_utf8_lossy(config).contains("NETWORK_NAME = 'net3'"));
        }
        assert_eq!(
            plan.port_bindings["node1"],
            PortBinding {
                node_port: 9701,
                client_port: 9702
            }
        );
        assert_eq!(
            plan.port_bindings["node4"],
            PortBinding {
                node_port: 9707,
                client_port: 9708
            }
        );
    }

    #[test]
    fn host_port_bindings_never_collide() {
        for size in [1, 2, 7, 40] {
            let roster = synth::roster(1, size, false);
            let cfg = NetworkConfig::named("collision_probe");
            let (domain, pool) = (
                serialize_genesis(&build_domain_genesis(&roster)),
                serialize_genesis(&build_pool_genesis(&roster)),
            );
            let plan = render_deployment(&cfg, &roster, &domain, &pool, None).unwrap();
            let mut seen = std::collections::BTreeSet::new();
            for binding in plan.port_bindings.values() {
                assert!(seen.insert(binding.node_port));
                assert!(seen.insert(binding.client_port));
            }
            assert_eq!(seen.len(), 2 * size);
        }
    }

    #[test]
    fn plans_write_to_disk_faithfully() {
        let (domain, pool) = fixture_bytes();
        let cfg = NetworkConfig::named("net3");
        let plan =
            render_deployment(&cfg, &synth::fixture_roster(), &domain, &pool, None).unwrap();
        let dir = tempfile::tempdir().unwrap();
        plan.write_to(dir.path()).unwrap();
        for (relative, content) in &plan.files {
            let on_disk = std::fs::read(dir.path().join(relative)).unwrap();
            assert_eq!(on_disk, *content, "{relative} mangled");
        }
    }

    #[test]
    fn init_report_matches_key_derivation_and_omits_the_seed() {
        let seed = synth::demo_seed("Node1");
        let report = init_node_report(
            "node1",
            "10.0.0.1".parse().unwrap(),
            9701,
            "10.0.0.1".parse().unwrap(),
            9702,
            seed.as_bytes(),
        )
        .unwrap();
        assert_eq!(report.verkey, "Gw6pDLhcBcoQesN72qfotTgFa7cbuqZpkX3Xo6pLhPhv");
        assert_eq!(report.node_port, 9701);
        assert_eq!(report.client_port, 9702);

        let json = serde_json::to_string(&report).unwrap();
        let raw = String::from_utf8(seed.as_bytes().to_vec()).unwrap();
        assert!(!json.contains(&raw), "raw seed leaked");
        assert!(!json.contains(&seed.to_base58()), "base58 seed leaked");
        assert!(!json.contains(&hex::encode(seed.as_bytes())), "hex seed leaked");
    }

    #[test]
    fn init_report_rejects_bad_seeds_and_endpoints() {
        let ip: IpAddr = "10.0.0.1".parse().unwrap();
        let seed = synth::demo_seed("Node1");
        assert!(matches!(
            init_node_report("node1", ip, 9701, ip, 9702, b"short"),
            Err(DeployError::Keymat(KeymatError::SeedLength(5)))
        ));
        assert!(matches!(
            init_node_report("node1", ip, 0, ip, 9702, seed.as_bytes()),
            Err(DeployError::BadEndpoint { .. })
        ));
        assert!(matches!(
            init_node_report("node1", ip, 9701, ip, 9701, seed.as_bytes()),
            Err(DeployError::BadEndpoint { .. })
        ));
    }

    #[test]
    fn init_report_feeds_a_node_submission() {
        let report = init_node_report(
            "node5",
            "10.1.0.5".parse().unwrap(),
            9701,
            "10.1.0.5".parse().unwrap(),
            9702,
            synth::demo_seed("Node5").as_bytes(),
        )
        .unwrap();
        let steward = synth::participant("Steward5", crate::roster::Role::Steward);
        let validator = report.to_validator(&steward.did);
        let (_, expected) = synth::steward_with_node(5);
        assert_eq!(validator, expected);
    }

    /// No rendered byte stream may contain a demo seed in any common
    /// encoding — the roster carries only public material, and rendering
    /// must keep it that way.
    #[test]
    fn rendered_artifacts_never_leak_seeds() {
        let (domain, pool) = fixture_bytes();
        let cfg = NetworkConfig::named("net3");
        let plan =
            render_deployment(&cfg, &synth::fixture_roster(), &domain, &pool, None).unwrap();
        let names: Vec<String> = (1..=4)
            .flat_map(|i| [format!("Node{i}"), format!("Steward{i}")])
            .chain((1..=3).map(|i| format!("Trustee{i}")))
            .collect();
        for name in names {
            let seed = synth::demo_seed(&name);
            let encodings = [
                seed.as_bytes().to_vec(),
                seed.to_base58().into_bytes(),
                hex::encode(seed.as_bytes()).into_bytes(),
            ];
            for content in plan.files.values() {
                for encoded in &encodings {
                    assert!(
                        !content
                            .windows(encoded.len())
                            .any(|window| window == encoded.as_slice()),
                        "a {name} seed encoding leaked into a rendered artifact"
                    );
                }
            }
        }
    }
}
