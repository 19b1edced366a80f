//! liboqs-backed provider (feature `oqs`).
//!
//! Each call constructs its own `oqs::kem::Kem` handle, which is a cheap
//! wrapper over the library's method table; liboqs KEM operations carry no
//! shared mutable state, so calls may run concurrently without locking.

use std::sync::Once;

use oqs::kem::{Algorithm, Kem as OqsKem};

use super::{
    ArtifactLengths, EncapsulationResult, KemError, KemProvider, KeyPair, ParamSetId, SecretKey,
    SharedSecret,
};

static INIT: Once = Once::new();

pub struct OqsProvider;

impl OqsProvider {
    pub fn new() -> Self {
        INIT.call_once(oqs::init);
        OqsProvider
    }

    fn algorithm(id: ParamSetId) -> Option<Algorithm> {
        match id {
            ParamSetId::Mock => None,
            ParamSetId::BikeL1 => Some(Algorithm::BikeL1),
            ParamSetId::BikeL3 => Some(Algorithm::BikeL3),
            ParamSetId::BikeL5 => Some(Algorithm::BikeL5),
            ParamSetId::Hqc128 => Some(Algorithm::Hqc128),
            ParamSetId::Hqc192 => Some(Algorithm::Hqc192),
            ParamSetId::Hqc256 => Some(Algorithm::Hqc256),
            ParamSetId::Kyber512 => Some(Algorithm::Kyber512),
            ParamSetId::Kyber768 => Some(Algorithm::Kyber768),
            ParamSetId::Kyber1024 => Some(Algorithm::Kyber1024),
        }
    }

    fn handle(id: ParamSetId) -> Result<OqsKem, KemError> {
        let alg = Self::algorithm(id).ok_or(KemError::ProviderUnavailable(id))?;
        OqsKem::new(alg).map_err(|e| KemError::Provider(format!("{id}: {e}")))
    }
}

impl Default for OqsProvider {
    fn default() -> Self {
        Self::new()
    }
}

impl KemProvider for OqsProvider {
    fn name(&self) -> &'static str {
        "oqs"
    }

    fn supports(&self, id: ParamSetId) -> bool {
        Self::algorithm(id).is_some_and(|alg| alg.is_enabled())
    }

    fn lengths(&self, id: ParamSetId) -> Result<ArtifactLengths, KemError> {
        let kem = Self::handle(id)?;
        Ok(ArtifactLengths {
            pk_len: kem.length_public_key(),
            ct_len: kem.length_ciphertext(),
            ss_len: kem.length_shared_secret(),
        })
    }

    fn keypair(&self, id: ParamSetId) -> Result<KeyPair, KemError> {
        let kem = Self::handle(id)?;
        let (pk, sk) = kem
            .keypair()
            .map_err(|e| KemError::Provider(format!("keypair {id}: {e}")))?;
        Ok(KeyPair {
            paramset: id,
            public_key: pk.into_vec(),
            secret_key: SecretKey::new(sk.into_vec()),
        })
    }

    fn encapsulate(
        &self,
        id: ParamSetId,
        public_key: &[u8],
    ) -> Result<EncapsulationResult, KemError> {
        let kem = Self::handle(id)?;
        let pk = kem
            .public_key_from_bytes(public_key)
            .ok_or(KemError::BadPublicKeyLength {
                expected: kem.length_public_key(),
                actual: public_key.len(),
            })?;
        let (ct, ss) = kem
            .encapsulate(pk)
            .map_err(|e| KemError::Provider(format!("encapsulate {id}: {e}")))?;
        Ok(EncapsulationResult {
            ciphertext: ct.into_vec(),
            shared_secret: SharedSecret::new(ss.into_vec()),
        })
    }

    fn decapsulate(
        &self,
        id: ParamSetId,
        secret_key: &[u8],
        ciphertext: &[u8],
    ) -> Result<SharedSecret, KemError> {
        let kem = Self::handle(id)?;
        let sk = kem
            .secret_key_from_bytes(secret_key)
            .ok_or_else(|| KemError::Provider(format!("bad secret key length for {id}")))?;
        let ct = kem
            .ciphertext_from_bytes(ciphertext)
            .ok_or(KemError::BadCiphertextLength {
                expected: kem.length_ciphertext(),
                actual: ciphertext.len(),
            })?;
        let ss = kem
            .decapsulate(sk, ct)
            .map_err(|_| KemError::DecapsulationFailure)?;
        Ok(SharedSecret::new(ss.into_vec()))
    }
}
