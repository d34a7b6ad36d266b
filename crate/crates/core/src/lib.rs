//! Bootstrap toolkit for permissioned identity ledgers.
//!
//! The crate covers the full lifecycle of standing up a small Indy-style
//! network: deriving key material for participants ([`keymat`]), ingesting
//! and validating governance rosters ([`roster`]), producing and checking
//! the two genesis transaction files ([`genesis`]), replaying the governance
//! rules over a pool state ([`poolstate`]), simulating a validator pool to
//! exercise membership changes ([`netsim`]), and rendering the per-node
//! deployment artifacts operators actually ship ([`deploykit`]).
//!
//! Everything here is deterministic: the same roster bytes produce the same
//! genesis bytes, the same seed produces the same keys, and the simulator
//! delivers messages in a reproducible order unless a real network transport
//! is plugged in.

pub mod canon;
pub mod deploykit;
pub mod genesis;
pub mod keymat;
pub mod netsim;
pub mod poolstate;
pub mod roster;
pub mod synth;

pub use keymat::{Did, Seed};
pub use roster::{Role, Roster};
