//! Key material for network participants.
//!
//! Every actor on the ledger — trustee, steward, or validator node — is
//! identified by an Ed25519 keypair derived deterministically from a 32-byte
//! seed, following the convention used by Indy tooling: the verification key
//! is published as base58 and the DID is the base58 encoding of the key's
//! first 16 bytes. Validator nodes additionally carry a BLS12-381 key (G1,
//! minimal-pubkey-size ciphersuite) whose proof of possession is a signature
//! over the public key's own compressed bytes.
//!
//! Seeds are the only secret this crate ever handles. [`Seed`] redacts its
//! `Debug` output so a stray log line cannot leak one; anything that prints a
//! seed on purpose has to go through [`Seed::to_base58`] explicitly.

use blst::min_pk::{PublicKey as BlsPublicKey, SecretKey as BlsSecretKey, Signature as BlsSignature};
use blst::BLST_ERROR;
use ed25519_dalek::SigningKey;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Domain separation tag for proofs of possession over BLS12-381 G2.
const POP_DST: &[u8] = b"BLS_POP_BLS12381G2_XMD:SHA-256_SSWU_RO_POP_";

/// Errors from key derivation and key-format handling.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KeymatError {
    /// A seed was not exactly 32 bytes long.
    #[error("seed must be exactly 32 bytes, got {0}")]
    SeedLength(usize),
    /// A base58 field could not be decoded, or decoded to the wrong length.
    #[error("{field}: {detail}")]
    Encoding {
        /// Which input was malformed (for diagnostics).
        field: &'static str,
        /// What went wrong.
        detail: String,
    },
}

/// A 32-byte secret seed from which all of a participant's keys derive.
///
/// The `Debug` impl is redacted; use [`Seed::to_base58`] when a caller
/// genuinely needs to show the secret (e.g. the CLI echoing a freshly
/// generated seed back to the operator).
#[derive(Clone, PartialEq, Eq)]
pub struct Seed([u8; 32]);

impl Seed {
    /// Wraps raw bytes as a seed.
    ///
    /// # Errors
    ///
    /// [`KeymatError::SeedLength`] if `bytes` is not exactly 32 bytes.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, KeymatError> {
        let arr: [u8; 32] = bytes
            .try_into()
            .map_err(|_| KeymatError::SeedLength(bytes.len()))?;
        Ok(Seed(arr))
    }

    /// Decodes a base58-encoded seed.
    ///
    /// # Errors
    ///
    /// [`KeymatError::Encoding`] if the text is not base58;
    /// [`KeymatError::SeedLength`] if it decodes to the wrong length.
    pub fn from_base58(text: &str) -> Result<Self, KeymatError> {
        let bytes = bs58::decode(text)
            .into_vec()
            .map_err(|e| KeymatError::Encoding {
                field: "seed",
                detail: e.to_string(),
            })?;
        Self::from_bytes(&bytes)
    }

    /// The raw seed bytes.
    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    /// Base58 encoding of the seed. This reveals the secret; callers are
    /// expected to route the result somewhere an operator meant it to go.
    pub fn to_base58(&self) -> String {
        bs58::encode(&self.0).into_string()
    }
}

impl fmt::Debug for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Seed(<redacted>)")
    }
}

/// A DID in its base58 text form (first 16 bytes of the raw verkey).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Did(String);

impl Did {
    /// Wraps already-derived DID text.
    pub fn new(text: impl Into<String>) -> Self {
        Did(text.into())
    }

    /// The DID as text.
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Did {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Did {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Did({})", self.0)
    }
}

impl From<&str> for Did {
    fn from(text: &str) -> Self {
        Did(text.to_owned())
    }
}

/// An Ed25519 identity: the public half plus the seed it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigningIdentity {
    /// Base58 of the first 16 bytes of the raw verification key.
    pub did: Did,
    /// Base58 of the full 32-byte verification key.
    pub verkey: String,
    /// The seed the identity derives from (redacted in `Debug`).
    pub seed: Seed,
}

/// A validator's BLS identity: public key and proof of possession.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlsIdentity {
    /// Base58 of the 48-byte compressed G1 public key.
    pub bls_key: String,
    /// Base58 of the 96-byte compressed G2 proof of possession.
    pub bls_pop: String,
}

/// Derives the Ed25519 identity for a seed.
///
/// The same seed always yields the same identity: the seed is used directly
/// as the Ed25519 secret key, the verkey is the base58 of the 32-byte public
/// key, and the DID is the base58 of the public key's first 16 bytes.
pub fn derive_signing_identity(seed: &Seed) -> SigningIdentity {
    let signing_key = SigningKey::from_bytes(seed.as_bytes());
    let verkey_bytes = signing_key.verifying_key().to_bytes();
    SigningIdentity {
        did: Did(bs58::encode(&verkey_bytes[..16]).into_string()),
        verkey: bs58::encode(&verkey_bytes).into_string(),
        seed: seed.clone(),
    }
}

/// Derives the BLS12-381 identity for a seed.
///
/// Key generation follows the hash-and-expand scheme shared by BLS signature
/// implementations (the seed is the IKM), on the minimal-pubkey-size curve
/// layout: public keys on G1, signatures on G2. The proof of possession is a
/// signature over the compressed public key bytes under the proof-of-
/// possession domain separation tag, so a verifier can check it without any
/// other context.
pub fn derive_bls_identity(seed: &Seed) -> BlsIdentity {
    let secret = BlsSecretKey::key_gen(seed.as_bytes(), &[])
        .expect("32-byte IKM satisfies the minimum key-material length");
    let public = secret.sk_to_pk();
    let public_bytes = public.compress();
    let pop = secret.sign(&public_bytes, POP_DST, &[]);
    BlsIdentity {
        bls_key: bs58::encode(public_bytes).into_string(),
        bls_pop: bs58::encode(pop.compress()).into_string(),
    }
}

/// Checks a proof of possession against a BLS public key.
///
/// Returns `Ok(true)` when `bls_pop` is a valid signature by `bls_key` over
/// that key's own compressed bytes, and `Ok(false)` when it is not — which
/// includes byte strings of the right shape that fail to decode to valid
/// curve points, since such values can only ever come from corruption or
/// forgery.
///
/// # Errors
///
/// [`KeymatError::Encoding`] if either field is not base58 text or decodes
/// to the wrong byte length (48 for the key, 96 for the proof).
pub fn verify_pop(bls_key: &str, bls_pop: &str) -> Result<bool, KeymatError> {
    let key_bytes = decode_b58_exact(bls_key, 48, "bls_key")?;
    let pop_bytes = decode_b58_exact(bls_pop, 96, "bls_pop")?;

    let Ok(public) = BlsPublicKey::key_validate(&key_bytes) else {
        return Ok(false);
    };
    let Ok(pop) = BlsSignature::sig_validate(&pop_bytes, true) else {
        return Ok(false);
    };
    let err = pop.verify(true, &key_bytes, POP_DST, &[], &public, true);
    Ok(err == BLST_ERROR::BLST_SUCCESS)
}

/// Decodes base58 text and insists on an exact byte length.
fn decode_b58_exact(text: &str, len: usize, field: &'static str) -> Result<Vec<u8>, KeymatError> {
    let bytes = bs58::decode(text)
        .into_vec()
        .map_err(|e| KeymatError::Encoding {
            field,
            detail: e.to_string(),
        })?;
    if bytes.len() != len {
        return Err(KeymatError::Encoding {
            field,
            detail: format!("expected {len} bytes, got {}", bytes.len()),
        });
    }
    Ok(bytes)
}
