//! Session-key derivation and authenticated encryption.
//!
//! The session key is the raw SHA-256 digest of the KEM shared secret (no
//! salt or info string). Messages are sealed with AES-256-GCM under a fresh
//! random 96-bit nonce per call; any mutation of the nonce, ciphertext, tag,
//! or AAD fails authentication with a single indistinguishable error.

use std::fmt;

use aes_gcm::aead::{Aead, KeyInit, Payload};
use aes_gcm::{Aes256Gcm, Nonce};
use rand::rngs::OsRng;
use rand::RngCore;
use sha2::{Digest, Sha256};
use thiserror::Error;
use zeroize::Zeroize;

/// AES-256 key size in bytes.
pub const SESSION_KEY_LEN: usize = 32;
/// GCM nonce size: 96 bits.
pub const NONCE_LEN: usize = 12;
/// GCM authentication tag size: 128 bits.
pub const TAG_LEN: usize = 16;
/// Plaintext bound imposed by the u32 wire length prefix.
pub const MAX_PLAINTEXT_LEN: usize = u32::MAX as usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CryptoError {
    #[error("shared secret must not be empty")]
    EmptySecret,
    #[error("authentication failure")]
    AuthenticationFailure,
    #[error("random number generator failure")]
    RngFailure,
    #[error("plaintext exceeds the framing bound")]
    OversizedPlaintext,
}

/// 256-bit symmetric session key. Zeroized on drop and never serialized.
#[derive(Clone)]
pub struct SessionKey([u8; SESSION_KEY_LEN]);

impl SessionKey {
    pub fn as_bytes(&self) -> &[u8; SESSION_KEY_LEN] {
        &self.0
    }
}

impl Drop for SessionKey {
    fn drop(&mut self) {
        self.0.zeroize();
    }
}

impl PartialEq for SessionKey {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl Eq for SessionKey {}

impl fmt::Debug for SessionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SessionKey(<redacted>)")
    }
}

/// Output of [`seal`]: nonce, ciphertext (same length as the plaintext), and
/// authentication tag.
///
/// The `aad` field records what the sender authenticated, for the caller's
/// bookkeeping; [`open`] always verifies against its own `aad` argument since
/// AAD travels out of band.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SealedMessage {
    pub nonce: [u8; NONCE_LEN],
    pub ciphertext: Vec<u8>,
    pub tag: [u8; TAG_LEN],
    pub aad: Option<Vec<u8>>,
}

/// SHA-256 convenience wrapper, shared with the mock KEM.
pub fn sha256(data: &[u8]) -> [u8; 32] {
    Sha256::digest(data).into()
}

/// Derives the session key as SHA-256(shared_secret).
///
/// Deterministic: both peers hash the same KEM output and obtain the same
/// 256-bit key.
pub fn derive_session_key(shared_secret: &[u8]) -> Result<SessionKey, CryptoError> {
    if shared_secret.is_empty() {
        return Err(CryptoError::EmptySecret);
    }
    Ok(SessionKey(sha256(shared_secret)))
}

/// Seals `plaintext` with AES-256-GCM under a fresh random nonce.
///
/// Two seals of the same input differ in nonce and ciphertext.
pub fn seal(
    key: &SessionKey,
    plaintext: &[u8],
    aad: Option<&[u8]>,
) -> Result<SealedMessage, CryptoError> {
    let mut nonce = [0u8; NONCE_LEN];
    OsRng
        .try_fill_bytes(&mut nonce)
        .map_err(|_| CryptoError::RngFailure)?;
    seal_inner(key, nonce, plaintext, aad)
}

/// Seals with a caller-supplied nonce. Exists only so known-answer vectors
/// can be replayed; nonce reuse under one key voids all GCM guarantees.
#[cfg(any(test, feature = "nonce-injection"))]
pub fn seal_with_nonce(
    key: &SessionKey,
    nonce: [u8; NONCE_LEN],
    plaintext: &[u8],
    aad: Option<&[u8]>,
) -> Result<SealedMessage, CryptoError> {
    seal_inner(key, nonce, plaintext, aad)
}

fn seal_inner(
    key: &SessionKey,
    nonce: [u8; NONCE_LEN],
    plaintext: &[u8],
    aad: Option<&[u8]>,
) -> Result<SealedMessage, CryptoError> {
    if plaintext.len() > MAX_PLAINTEXT_LEN {
        return Err(CryptoError::OversizedPlaintext);
    }
    let cipher = Aes256Gcm::new_from_slice(&key.0).expect("session key is 32 bytes");
    let mut out = cipher
        .encrypt(
            Nonce::from_slice(&nonce),
            Payload {
                msg: plaintext,
                aad: aad.unwrap_or(&[]),
            },
        )
        .map_err(|_| CryptoError::OversizedPlaintext)?;
    let split = out.len() - TAG_LEN;
    let tag: [u8; TAG_LEN] = out[split..].try_into().expect("16-byte tag");
    out.truncate(split);
    Ok(SealedMessage {
        nonce,
        ciphertext: out,
        tag,
        aad: aad.map(<[u8]>::to_vec),
    })
}

/// Opens a sealed message, returning the plaintext only if the tag verifies
/// over the AAD and ciphertext.
///
/// Every tamper case — nonce, ciphertext, tag, or AAD — yields the same
/// [`CryptoError::AuthenticationFailure`].
pub fn open(
    key: &SessionKey,
    sealed: &SealedMessage,
    aad: Option<&[u8]>,
) -> Result<Vec<u8>, CryptoError> {
    let mut buf = Vec::with_capacity(sealed.ciphertext.len() + TAG_LEN);
    buf.extend_from_slice(&sealed.ciphertext);
    buf.extend_from_slice(&sealed.tag);
    let cipher = Aes256Gcm::new_from_slice(&key.0).expect("session key is 32 bytes");
    cipher
        .decrypt(
            Nonce::from_slice(&sealed.nonce),
            Payload {
                msg: &buf,
                aad: aad.unwrap_or(&[]),
            },
        )
        .map_err(|_| CryptoError::AuthenticationFailure)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key_from_hex(hex_key: &str) -> SessionKey {
        let bytes = hex::decode(hex_key).unwrap();
        SessionKey(bytes.try_into().unwrap())
    }

    #[test]
    fn sha256_abc_vector() {
        assert_eq!(
            hex::encode(sha256(b"abc")),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn derive_is_sha256_of_secret() {
        let key = derive_session_key(b"abc").unwrap();
        assert_eq!(
            hex::encode(key.as_bytes()),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn derive_rejects_empty_secret() {
        assert_eq!(derive_session_key(b""), Err(CryptoError::EmptySecret));
    }

    #[test]
    fn derive_is_deterministic() {
        let reference = derive_session_key(b"shared").unwrap();
        for _ in 0..1000 {
            assert_eq!(derive_session_key(b"shared").unwrap(), reference);
        }
    }

    #[test]
    fn seal_open_round_trip() {
        let key = derive_session_key(b"secret").unwrap();
        let sealed = seal(&key, b"hello world", Some(b"meta")).unwrap();
        assert_eq!(sealed.ciphertext.len(), 11);
        let plain = open(&key, &sealed, Some(b"meta")).unwrap();
        assert_eq!(plain, b"hello world");
    }

    #[test]
    fn consecutive_seals_use_distinct_nonces() {
        let key = derive_session_key(b"secret").unwrap();
        let a = seal(&key, b"same input", None).unwrap();
        let b = seal(&key, b"same input", None).unwrap();
        assert_ne!(a.nonce, b.nonce);
        assert_ne!(a.ciphertext, b.ciphertext);
    }

    #[test]
    fn tampered_ciphertext_fails_auth() {
        let key = derive_session_key(b"secret").unwrap();
        let mut sealed = seal(&key, b"payload", None).unwrap();
        sealed.ciphertext[0] ^= 0x01;
        assert_eq!(
            open(&key, &sealed, None),
            Err(CryptoError::AuthenticationFailure)
        );
    }

    #[test]
    fn wrong_aad_fails_auth() {
        let key = derive_session_key(b"secret").unwrap();
        let sealed = seal(&key, b"payload", Some(b"right")).unwrap();
        assert_eq!(
            open(&key, &sealed, Some(b"wrong")),
            Err(CryptoError::AuthenticationFailure)
        );
    }

    // AES-256-GCM known-answer vectors from the GCM designers' validation
    // set (test cases 13-16), cross-checked against an independent
    // implementation before being frozen here.

    #[test]
    fn gcm_kat_empty_plaintext() {
        let key = key_from_hex(&"00".repeat(32));
        let sealed = seal_with_nonce(&key, [0u8; 12], b"", None).unwrap();
        assert!(sealed.ciphertext.is_empty());
        assert_eq!(hex::encode(sealed.tag), "530f8afbc74536b9a963b4f1c4cb738b");
    }

    #[test]
    fn gcm_kat_single_block() {
        let key = key_from_hex(&"00".repeat(32));
        let sealed = seal_with_nonce(&key, [0u8; 12], &[0u8; 16], None).unwrap();
        assert_eq!(
            hex::encode(&sealed.ciphertext),
            "cea7403d4d606b6e074ec5d3baf39d18"
        );
        assert_eq!(hex::encode(sealed.tag), "d0d1c8a799996bf0265b98b5d48ab919");
    }

    #[test]
    fn gcm_kat_four_blocks() {
        let key = key_from_hex(
            "feffe9928665731c6d6a8f9467308308feffe9928665731c6d6a8f9467308308",
        );
        let nonce: [u8; 12] = hex::decode("cafebabefacedbaddecaf888")
            .unwrap()
            .try_into()
            .unwrap();
        let plaintext = hex::decode(
            "d9313225f88406e5a55909c5aff5269a86a7a9531534f7da2e4c303d8a318a72\
             1c3c0c95956809532fcf0e2449a6b525b16aedf5aa0de657ba637b391aafd255",
        )
        .unwrap();
        let sealed = seal_with_nonce(&key, nonce, &plaintext, None).unwrap();
        assert_eq!(
            hex::encode(&sealed.ciphertext),
            "522dc1f099567d07f47f37a32a84427d643a8cdcbfe5c0c97598a2bd2555d1aa\
             8cb08e48590dbb3da7b08b1056828838c5f61e6393ba7a0abcc9f662898015ad"
        );
        assert_eq!(hex::encode(sealed.tag), "b094dac5d93471bdec1a502270e3cc6c");
    }

    #[test]
    fn gcm_kat_with_aad() {
        let key = key_from_hex(
            "feffe9928665731c6d6a8f9467308308feffe9928665731c6d6a8f9467308308",
        );
        let nonce: [u8; 12] = hex::decode("cafebabefacedbaddecaf888")
            .unwrap()
            .try_into()
            .unwrap();
        let plaintext = hex::decode(
            "d9313225f88406e5a55909c5aff5269a86a7a9531534f7da2e4c303d8a318a72\
             1c3c0c95956809532fcf0e2449a6b525b16aedf5aa0de657ba637b39",
        )
        .unwrap();
        let aad = hex::decode("feedfacedeadbeeffeedfacedeadbeefabaddad2").unwrap();
        let sealed = seal_with_nonce(&key, nonce, &plaintext, Some(&aad)).unwrap();
        assert_eq!(
            hex::encode(&sealed.ciphertext),
            "522dc1f099567d07f47f37a32a84427d643a8cdcbfe5c0c97598a2bd2555d1aa\
             8cb08e48590dbb3da7b08b1056828838c5f61e6393ba7a0abcc9f662"
        );
        assert_eq!(hex::encode(sealed.tag), "76fc6ece0f4e1768cddf8853bb2d551b");
        // Round-trip through open with the matching AAD.
        assert_eq!(open(&key, &sealed, Some(&aad)).unwrap(), plaintext);
    }
}
