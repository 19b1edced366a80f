//! Post-quantum secure channel toolkit.
//!
//! The pieces, bottom up:
//!
//! - [`kem`] — parameter-set registry for nine PQC KEMs (BIKE, HQC, Kyber at
//!   three security levels each), a deterministic mock KEM for provider-free
//!   testing, and a provider seam for real implementations.
//! - [`crypto`] — session-key derivation (SHA-256 over the KEM shared secret)
//!   and AES-256-GCM sealing with random 96-bit nonces.
//! - [`wire`] — length-prefixed framing for the five protocol messages.
//! - [`protocol`] — client and server handshake state machines plus a TCP
//!   runtime: Hello → PublicKey → Ciphertext → encrypted payload.
//! - [`probes`] — pluggable readers for execution time, power, memory, and
//!   temperature metrics.
//! - [`bench`] — session/rest benchmark orchestration and mean ± std reports.
//! - [`pcapscan`] — offline pcap analysis that fingerprints KEM artifacts by
//!   TCP payload length.

pub mod bench;
pub mod crypto;
pub mod kem;
pub mod pcapscan;
pub mod probes;
pub mod protocol;
pub mod wire;
