//! Key encapsulation: parameter-set registry, mock KEM, and provider seam.
//!
//! The registry enumerates the nine evaluated parameter sets (BIKE, HQC, and
//! Kyber at NIST levels 1/3/5) plus a test-only mock, each with its on-wire
//! artifact fingerprint: public-key, ciphertext, and shared-secret lengths.
//! Real implementations plug in behind [`KemProvider`]; the [`Kem`] facade
//! dispatches to the mock or the active provider and enforces the registry's
//! length invariants at the boundary.

pub mod mock;
#[cfg(feature = "oqs")]
pub mod oqs_provider;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;
use zeroize::Zeroizing;

/// Identifier of a KEM parameter set. Wire ids follow registry order:
/// Mock = 0x00, BIKE-L1 = 0x01, ..., Kyber-1024 = 0x09.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParamSetId {
    Mock,
    BikeL1,
    BikeL3,
    BikeL5,
    Hqc128,
    Hqc192,
    Hqc256,
    Kyber512,
    Kyber768,
    Kyber1024,
}

impl ParamSetId {
    /// All registry entries in wire-id order.
    pub const ALL: [ParamSetId; 10] = [
        ParamSetId::Mock,
        ParamSetId::BikeL1,
        ParamSetId::BikeL3,
        ParamSetId::BikeL5,
        ParamSetId::Hqc128,
        ParamSetId::Hqc192,
        ParamSetId::Hqc256,
        ParamSetId::Kyber512,
        ParamSetId::Kyber768,
        ParamSetId::Kyber1024,
    ];

    /// The nine evaluated schemes, excluding the mock.
    pub const SCHEMES: [ParamSetId; 9] = [
        ParamSetId::BikeL1,
        ParamSetId::BikeL3,
        ParamSetId::BikeL5,
        ParamSetId::Hqc128,
        ParamSetId::Hqc192,
        ParamSetId::Hqc256,
        ParamSetId::Kyber512,
        ParamSetId::Kyber768,
        ParamSetId::Kyber1024,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ParamSetId::Mock => "Mock",
            ParamSetId::BikeL1 => "BIKE-L1",
            ParamSetId::BikeL3 => "BIKE-L3",
            ParamSetId::BikeL5 => "BIKE-L5",
            ParamSetId::Hqc128 => "HQC-128",
            ParamSetId::Hqc192 => "HQC-192",
            ParamSetId::Hqc256 => "HQC-256",
            ParamSetId::Kyber512 => "Kyber-512",
            ParamSetId::Kyber768 => "Kyber-768",
            ParamSetId::Kyber1024 => "Kyber-1024",
        }
    }

    /// One-byte id carried in the ClientHello.
    pub fn wire_id(self) -> u8 {
        Self::ALL
            .iter()
            .position(|id| *id == self)
            .expect("id is in ALL") as u8
    }

    pub fn from_wire_id(byte: u8) -> Option<ParamSetId> {
        Self::ALL.get(byte as usize).copied()
    }

    /// Case-insensitive name lookup; accepts "kyber-768" and "kyber768".
    pub fn parse(name: &str) -> Option<ParamSetId> {
        let normalized: String = name
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        Self::ALL.iter().copied().find(|id| {
            id.name()
                .chars()
                .filter(|c| c.is_ascii_alphanumeric())
                .collect::<String>()
                .to_ascii_lowercase()
                == normalized
        })
    }
}

impl fmt::Display for ParamSetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Claimed NIST security level grouping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NistLevel {
    L1,
    L3,
    L5,
    None,
}

/// Registry entry: identity plus the artifact-length fingerprint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KemParamSet {
    pub id: ParamSetId,
    pub nist_level: NistLevel,
    pub pk_len: usize,
    pub ct_len: usize,
    pub ss_len: usize,
}

/// The ten registry entries in wire-id order.
///
/// Scheme lengths are the length constants reported by liboqs 0.13.0, the
/// provider this build vendors; [`Kem::with_provider`] re-verifies them
/// against the active provider at startup so drift cannot pass silently.
pub const REGISTRY: [KemParamSet; 10] = [
    KemParamSet {
        id: ParamSetId::Mock,
        nist_level: NistLevel::None,
        pk_len: mock::PK_LEN,
        ct_len: mock::CT_LEN,
        ss_len: mock::SS_LEN,
    },
    KemParamSet {
        id: ParamSetId::BikeL1,
        nist_level: NistLevel::L1,
        pk_len: 1541,
        ct_len: 1573,
        ss_len: 32,
    },
    KemParamSet {
        id: ParamSetId::BikeL3,
        nist_level: NistLevel::L3,
        pk_len: 3083,
        ct_len: 3115,
        ss_len: 32,
    },
    KemParamSet {
        id: ParamSetId::BikeL5,
        nist_level: NistLevel::L5,
        pk_len: 5122,
        ct_len: 5154,
        ss_len: 32,
    },
    KemParamSet {
        id: ParamSetId::Hqc128,
        nist_level: NistLevel::L1,
        pk_len: 2249,
        ct_len: 4433,
        ss_len: 64,
    },
    KemParamSet {
        id: ParamSetId::Hqc192,
        nist_level: NistLevel::L3,
        pk_len: 4522,
        ct_len: 8978,
        ss_len: 64,
    },
    KemParamSet {
        id: ParamSetId::Hqc256,
        nist_level: NistLevel::L5,
        pk_len: 7245,
        ct_len: 14421,
        ss_len: 64,
    },
    KemParamSet {
        id: ParamSetId::Kyber512,
        nist_level: NistLevel::L1,
        pk_len: 800,
        ct_len: 768,
        ss_len: 32,
    },
    KemParamSet {
        id: ParamSetId::Kyber768,
        nist_level: NistLevel::L3,
        pk_len: 1184,
        ct_len: 1088,
        ss_len: 32,
    },
    KemParamSet {
        id: ParamSetId::Kyber1024,
        nist_level: NistLevel::L5,
        pk_len: 1568,
        ct_len: 1568,
        ss_len: 32,
    },
];

/// Returns the registry entry for `id`. Total over the enum.
pub fn param_set(id: ParamSetId) -> &'static KemParamSet {
    &REGISTRY[id.wire_id() as usize]
}

/// Looks a parameter set up by name, e.g. for CLI and config values.
pub fn registry_lookup(name: &str) -> Result<&'static KemParamSet, KemError> {
    ParamSetId::parse(name)
        .map(param_set)
        .ok_or_else(|| KemError::UnknownParamSet(name.to_string()))
}

#[derive(Debug, Error)]
pub enum KemError {
    #[error("unknown parameter set: {0}")]
    UnknownParamSet(String),
    #[error("no provider available for {0}")]
    ProviderUnavailable(ParamSetId),
    #[error("seeds are only accepted by the mock KEM, not {0}")]
    SeedRejected(ParamSetId),
    #[error("bad public key length: expected {expected}, got {actual}")]
    BadPublicKeyLength { expected: usize, actual: usize },
    #[error("bad ciphertext length: expected {expected}, got {actual}")]
    BadCiphertextLength { expected: usize, actual: usize },
    #[error("decapsulation failure")]
    DecapsulationFailure,
    #[error("provider error: {0}")]
    Provider(String),
}

/// Opaque secret-key bytes. Zeroized on drop, redacted in Debug output,
/// and deliberately without any serialization support.
pub struct SecretKey(Zeroizing<Vec<u8>>);

impl SecretKey {
    pub fn new(bytes: Vec<u8>) -> Self {
        SecretKey(Zeroizing::new(bytes))
    }

    pub fn expose(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Debug for SecretKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SecretKey(<{} bytes redacted>)", self.0.len())
    }
}

/// Shared secret produced by encapsulation/decapsulation. Zeroized on drop.
pub struct SharedSecret(Zeroizing<Vec<u8>>);

impl SharedSecret {
    pub fn new(bytes: Vec<u8>) -> Self {
        SharedSecret(Zeroizing::new(bytes))
    }

    pub fn expose(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl PartialEq for SharedSecret {
    fn eq(&self, other: &Self) -> bool {
        *self.0 == *other.0
    }
}

impl Eq for SharedSecret {}

impl fmt::Debug for SharedSecret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SharedSecret(<{} bytes redacted>)", self.0.len())
    }
}

#[derive(Debug)]
pub struct KeyPair {
    pub paramset: ParamSetId,
    pub public_key: Vec<u8>,
    pub secret_key: SecretKey,
}

#[derive(Debug)]
pub struct EncapsulationResult {
    pub ciphertext: Vec<u8>,
    pub shared_secret: SharedSecret,
}

/// Artifact lengths reported by a provider, checked against the registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArtifactLengths {
    pub pk_len: usize,
    pub ct_len: usize,
    pub ss_len: usize,
}

/// The seam a real PQC implementation plugs into.
///
/// Implementations must be safe for concurrent calls; an adapter wrapping a
/// non-thread-safe library takes its own lock, invisible to callers.
pub trait KemProvider: Send + Sync {
    fn name(&self) -> &'static str;

    /// Whether this provider implements `id`.
    fn supports(&self, id: ParamSetId) -> bool;

    /// The provider's own length constants for `id`.
    fn lengths(&self, id: ParamSetId) -> Result<ArtifactLengths, KemError>;

    fn keypair(&self, id: ParamSetId) -> Result<KeyPair, KemError>;

    fn encapsulate(&self, id: ParamSetId, public_key: &[u8])
        -> Result<EncapsulationResult, KemError>;

    fn decapsulate(
        &self,
        id: ParamSetId,
        secret_key: &[u8],
        ciphertext: &[u8],
    ) -> Result<SharedSecret, KemError>;
}

/// Dispatch facade: the mock KEM is always available, the nine schemes
/// require a provider. Length preconditions are enforced here so providers
/// never see malformed input sizes.
#[derive(Clone)]
pub struct Kem {
    provider: Option<Arc<dyn KemProvider>>,
}

impl Kem {
    /// A facade with no real provider; only [`ParamSetId::Mock`] is enabled.
    pub fn mock_only() -> Self {
        Kem { provider: None }
    }

    /// Installs a provider after verifying that its length constants agree
    /// with the registry fingerprint for every parameter set it supports.
    pub fn with_provider(provider: Arc<dyn KemProvider>) -> Result<Self, KemError> {
        for id in ParamSetId::SCHEMES {
            if !provider.supports(id) {
                continue;
            }
            let reported = provider.lengths(id)?;
            let entry = param_set(id);
            let expected = ArtifactLengths {
                pk_len: entry.pk_len,
                ct_len: entry.ct_len,
                ss_len: entry.ss_len,
            };
            if reported != expected {
                return Err(KemError::Provider(format!(
                    "provider {} reports {:?} for {}, registry has {:?}",
                    provider.name(),
                    reported,
                    id,
                    expected
                )));
            }
        }
        Ok(Kem {
            provider: Some(provider),
        })
    }

    /// Resolves the `kem.provider` config value: "mock" or a compiled-in
    /// provider name.
    pub fn from_config(provider_name: &str) -> Result<Self, KemError> {
        match provider_name.to_ascii_lowercase().as_str() {
            "mock" => Ok(Kem::mock_only()),
            #[cfg(feature = "oqs")]
            "oqs" => Kem::with_provider(Arc::new(oqs_provider::OqsProvider::new())),
            other => Err(KemError::Provider(format!(
                "unknown provider '{other}' (compiled-in: {})",
                Self::compiled_providers().join(", ")
            ))),
        }
    }

    /// Provider names this build can instantiate.
    pub fn compiled_providers() -> Vec<&'static str> {
        #[cfg(feature = "oqs")]
        {
            vec!["mock", "oqs"]
        }
        #[cfg(not(feature = "oqs"))]
        {
            vec!["mock"]
        }
    }

    pub fn provider_name(&self) -> &'static str {
        self.provider.as_ref().map_or("mock", |p| p.name())
    }

    /// Whether keypair/encapsulate/decapsulate will work for `id`.
    pub fn enabled(&self, id: ParamSetId) -> bool {
        match id {
            ParamSetId::Mock => true,
            other => self
                .provider
                .as_ref()
                .is_some_and(|p| p.supports(other)),
        }
    }

    /// All enabled parameter sets in registry order.
    pub fn enabled_paramsets(&self) -> Vec<ParamSetId> {
        ParamSetId::ALL
            .into_iter()
            .filter(|id| self.enabled(*id))
            .collect()
    }

    /// Generates a keypair. A seed is accepted only by the mock; provider
    /// parameter sets use the provider's own entropy.
    pub fn keypair(
        &self,
        id: ParamSetId,
        seed: Option<[u8; mock::SEED_LEN]>,
    ) -> Result<KeyPair, KemError> {
        if id == ParamSetId::Mock {
            return mock::keypair(seed);
        }
        if seed.is_some() {
            return Err(KemError::SeedRejected(id));
        }
        let provider = self.provider_for(id)?;
        let pair = provider.keypair(id)?;
        let expected = param_set(id).pk_len;
        if pair.public_key.len() != expected {
            return Err(KemError::Provider(format!(
                "provider produced a {}-byte public key for {id}, expected {expected}",
                pair.public_key.len()
            )));
        }
        Ok(pair)
    }

    pub fn encapsulate(
        &self,
        id: ParamSetId,
        public_key: &[u8],
    ) -> Result<EncapsulationResult, KemError> {
        let entry = param_set(id);
        if public_key.len() != entry.pk_len {
            return Err(KemError::BadPublicKeyLength {
                expected: entry.pk_len,
                actual: public_key.len(),
            });
        }
        if id == ParamSetId::Mock {
            return mock::encapsulate(public_key);
        }
        self.provider_for(id)?.encapsulate(id, public_key)
    }

    pub fn decapsulate(
        &self,
        id: ParamSetId,
        secret_key: &SecretKey,
        ciphertext: &[u8],
    ) -> Result<SharedSecret, KemError> {
        let entry = param_set(id);
        if ciphertext.len() != entry.ct_len {
            return Err(KemError::BadCiphertextLength {
                expected: entry.ct_len,
                actual: ciphertext.len(),
            });
        }
        if id == ParamSetId::Mock {
            return Ok(mock::decapsulate(secret_key.expose(), ciphertext));
        }
        self.provider_for(id)?
            .decapsulate(id, secret_key.expose(), ciphertext)
    }

    fn provider_for(&self, id: ParamSetId) -> Result<&Arc<dyn KemProvider>, KemError> {
        match &self.provider {
            Some(p) if p.supports(id) => Ok(p),
            _ => Err(KemError::ProviderUnavailable(id)),
        }
    }
}
