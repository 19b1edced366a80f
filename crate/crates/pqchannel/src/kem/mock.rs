//! Deterministic mock KEM for provider-free testing.
//!
//! Construction: sk = 32-byte seed, pk = SHA-256(sk); encapsulation draws a
//! 32-byte r and sets ct = r, ss = SHA-256(pk ∥ r); decapsulation recomputes
//! pk from sk and hashes again. Round-trip equality holds by construction and
//! every artifact is a realistic 32-byte string.
//!
//! NOT SECURE — anyone observing pk and ct can compute the shared secret.
//! It exists so the protocol, bench, and scanner paths run without a PQC
//! provider linked in.

use rand::rngs::OsRng;
use rand::RngCore;

use super::{EncapsulationResult, KemError, KeyPair, ParamSetId, SecretKey, SharedSecret};
use crate::crypto::sha256;

pub const SEED_LEN: usize = 32;
pub const PK_LEN: usize = 32;
pub const CT_LEN: usize = 32;
pub const SS_LEN: usize = 32;

/// Generates a mock keypair. Equal seeds yield identical keypairs; without a
/// seed the secret key is drawn from the OS RNG.
pub fn keypair(seed: Option<[u8; SEED_LEN]>) -> Result<KeyPair, KemError> {
    let sk = match seed {
        Some(seed) => seed,
        None => {
            let mut sk = [0u8; SEED_LEN];
            OsRng
                .try_fill_bytes(&mut sk)
                .map_err(|e| KemError::Provider(format!("rng failure: {e}")))?;
            sk
        }
    };
    let pk = sha256(&sk);
    Ok(KeyPair {
        paramset: ParamSetId::Mock,
        public_key: pk.to_vec(),
        secret_key: SecretKey::new(sk.to_vec()),
    })
}

/// Encapsulates against a mock public key with fresh randomness.
pub fn encapsulate(public_key: &[u8]) -> Result<EncapsulationResult, KemError> {
    let mut r = [0u8; CT_LEN];
    OsRng
        .try_fill_bytes(&mut r)
        .map_err(|e| KemError::Provider(format!("rng failure: {e}")))?;
    Ok(encapsulate_with_randomness(public_key, r))
}

/// Encapsulates with caller-chosen randomness, for deterministic tests.
pub fn encapsulate_with_randomness(public_key: &[u8], r: [u8; CT_LEN]) -> EncapsulationResult {
    let mut input = Vec::with_capacity(public_key.len() + r.len());
    input.extend_from_slice(public_key);
    input.extend_from_slice(&r);
    EncapsulationResult {
        ciphertext: r.to_vec(),
        shared_secret: SharedSecret::new(sha256(&input).to_vec()),
    }
}

/// Recovers the shared secret: SHA-256(SHA-256(sk) ∥ ct).
pub fn decapsulate(secret_key: &[u8], ciphertext: &[u8]) -> SharedSecret {
    let pk = sha256(secret_key);
    let mut input = Vec::with_capacity(pk.len() + ciphertext.len());
    input.extend_from_slice(&pk);
    input.extend_from_slice(ciphertext);
    SharedSecret::new(sha256(&input).to_vec())
}
