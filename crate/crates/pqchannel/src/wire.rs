//! Byte-exact framing for the five protocol messages.
//!
//! Every frame is `length (u32, big-endian) ∥ msg_type (1 byte) ∥ payload`,
//! where `length` counts the type byte plus the payload and is capped at
//! 16 MiB. Payload layouts:
//!
//! | type | message          | payload                                  |
//! |------|------------------|------------------------------------------|
//! | 0x01 | ClientHello      | paramset_id (1) ∥ client_nonce (16)      |
//! | 0x02 | PublicKey        | pk bytes                                 |
//! | 0x03 | Ciphertext       | ct bytes                                 |
//! | 0x04 | EncryptedMessage | nonce (12) ∥ tag (16) ∥ ciphertext       |
//! | 0x05 | Error            | code (1) ∥ detail (UTF-8)                |
//!
//! Hex transcripts live in `docs/wire.md`.

use std::io::{self, Read};

use thiserror::Error;

use crate::crypto::{NONCE_LEN, TAG_LEN};

/// Upper bound on the frame `length` field: 16 MiB.
pub const FRAME_CAP: u32 = 1 << 24;
/// Size of the length prefix.
pub const HEADER_LEN: usize = 4;
/// Framing overhead on a raw artifact: length prefix plus type byte.
pub const FRAME_OVERHEAD: usize = HEADER_LEN + 1;

pub const TYPE_CLIENT_HELLO: u8 = 0x01;
pub const TYPE_PUBLIC_KEY: u8 = 0x02;
pub const TYPE_CIPHERTEXT: u8 = 0x03;
pub const TYPE_ENCRYPTED_MESSAGE: u8 = 0x04;
pub const TYPE_ERROR: u8 = 0x05;

pub const CLIENT_NONCE_LEN: usize = 16;

#[derive(Debug, Error)]
pub enum WireError {
    #[error("payload exceeds the {FRAME_CAP}-byte frame cap")]
    OversizedPayload,
    #[error("declared frame length {0} exceeds the {FRAME_CAP}-byte cap")]
    OversizedFrame(u32),
    #[error("stream truncated mid-frame")]
    Truncated,
    #[error("unknown message type {0:#04x}")]
    UnknownType(u8),
    #[error("{kind} length mismatch: expected {expected}, got {actual}")]
    LengthMismatch {
        kind: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

/// A protocol message. `PartialEq` covers test round-trips; none of the
/// variants carry secret material in the clear (`EncryptedMessage` is
/// already sealed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Message {
    ClientHello {
        paramset_id: u8,
        client_nonce: [u8; CLIENT_NONCE_LEN],
    },
    PublicKey {
        public_key: Vec<u8>,
    },
    Ciphertext {
        ciphertext: Vec<u8>,
    },
    EncryptedMessage {
        nonce: [u8; NONCE_LEN],
        tag: [u8; TAG_LEN],
        ciphertext: Vec<u8>,
    },
    Error {
        code: u8,
        detail: String,
    },
}

impl Message {
    pub fn msg_type(&self) -> u8 {
        match self {
            Message::ClientHello { .. } => TYPE_CLIENT_HELLO,
            Message::PublicKey { .. } => TYPE_PUBLIC_KEY,
            Message::Ciphertext { .. } => TYPE_CIPHERTEXT,
            Message::EncryptedMessage { .. } => TYPE_ENCRYPTED_MESSAGE,
            Message::Error { .. } => TYPE_ERROR,
        }
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            Message::ClientHello { .. } => "ClientHello",
            Message::PublicKey { .. } => "PublicKey",
            Message::Ciphertext { .. } => "Ciphertext",
            Message::EncryptedMessage { .. } => "EncryptedMessage",
            Message::Error { .. } => "Error",
        }
    }
}

/// Expected artifact lengths once a parameter set has been negotiated.
/// `None` accepts any length within the frame cap.
#[derive(Debug, Clone, Copy, Default)]
pub struct DecodeHint {
    pub pk_len: Option<usize>,
    pub ct_len: Option<usize>,
}

impl DecodeHint {
    pub fn for_paramset(entry: &crate::kem::KemParamSet) -> Self {
        DecodeHint {
            pk_len: Some(entry.pk_len),
            ct_len: Some(entry.ct_len),
        }
    }
}

/// Encodes a message into one self-delimiting frame.
pub fn encode(msg: &Message) -> Result<Vec<u8>, WireError> {
    let payload = match msg {
        Message::ClientHello {
            paramset_id,
            client_nonce,
        } => {
            let mut p = Vec::with_capacity(1 + CLIENT_NONCE_LEN);
            p.push(*paramset_id);
            p.extend_from_slice(client_nonce);
            p
        }
        Message::PublicKey { public_key } => public_key.clone(),
        Message::Ciphertext { ciphertext } => ciphertext.clone(),
        Message::EncryptedMessage {
            nonce,
            tag,
            ciphertext,
        } => {
            let mut p = Vec::with_capacity(NONCE_LEN + TAG_LEN + ciphertext.len());
            p.extend_from_slice(nonce);
            p.extend_from_slice(tag);
            p.extend_from_slice(ciphertext);
            p
        }
        Message::Error { code, detail } => {
            let mut p = Vec::with_capacity(1 + detail.len());
            p.push(*code);
            p.extend_from_slice(detail.as_bytes());
            p
        }
    };
    let length = 1 + payload.len();
    if length > FRAME_CAP as usize {
        return Err(WireError::OversizedPayload);
    }
    let mut frame = Vec::with_capacity(HEADER_LEN + length);
    frame.extend_from_slice(&(length as u32).to_be_bytes());
    frame.push(msg.msg_type());
    frame.extend_from_slice(&payload);
    Ok(frame)
}

/// Decodes one frame from `reader`, consuming exactly `length + 4` bytes.
///
/// A stream that ends mid-frame yields [`WireError::Truncated`]; no bytes
/// past the declared frame boundary are ever read.
pub fn decode<R: Read>(reader: &mut R, hint: &DecodeHint) -> Result<Message, WireError> {
    let mut header = [0u8; HEADER_LEN];
    read_exact_or_truncated(reader, &mut header)?;
    let length = u32::from_be_bytes(header);
    if length > FRAME_CAP {
        return Err(WireError::OversizedFrame(length));
    }
    if length == 0 {
        // No room for the type byte; treat like a frame cut short.
        return Err(WireError::Truncated);
    }
    let mut body = vec![0u8; length as usize];
    read_exact_or_truncated(reader, &mut body)?;
    let (type_byte, payload) = body.split_first().expect("length >= 1");
    parse_payload(*type_byte, payload, hint)
}

fn read_exact_or_truncated<R: Read>(reader: &mut R, buf: &mut [u8]) -> Result<(), WireError> {
    reader.read_exact(buf).map_err(|e| {
        if e.kind() == io::ErrorKind::UnexpectedEof {
            WireError::Truncated
        } else {
            WireError::Io(e)
        }
    })
}

fn parse_payload(type_byte: u8, payload: &[u8], hint: &DecodeHint) -> Result<Message, WireError> {
    match type_byte {
        TYPE_CLIENT_HELLO => {
            if payload.len() != 1 + CLIENT_NONCE_LEN {
                return Err(WireError::LengthMismatch {
                    kind: "ClientHello",
                    expected: 1 + CLIENT_NONCE_LEN,
                    actual: payload.len(),
                });
            }
            let mut client_nonce = [0u8; CLIENT_NONCE_LEN];
            client_nonce.copy_from_slice(&payload[1..]);
            Ok(Message::ClientHello {
                paramset_id: payload[0],
                client_nonce,
            })
        }
        TYPE_PUBLIC_KEY => {
            if let Some(expected) = hint.pk_len {
                if payload.len() != expected {
                    return Err(WireError::LengthMismatch {
                        kind: "PublicKey",
                        expected,
                        actual: payload.len(),
                    });
                }
            }
            Ok(Message::PublicKey {
                public_key: payload.to_vec(),
            })
        }
        TYPE_CIPHERTEXT => {
            if let Some(expected) = hint.ct_len {
                if payload.len() != expected {
                    return Err(WireError::LengthMismatch {
                        kind: "Ciphertext",
                        expected,
                        actual: payload.len(),
                    });
                }
            }
            Ok(Message::Ciphertext {
                ciphertext: payload.to_vec(),
            })
        }
        TYPE_ENCRYPTED_MESSAGE => {
            if payload.len() < NONCE_LEN + TAG_LEN {
                return Err(WireError::LengthMismatch {
                    kind: "EncryptedMessage",
                    expected: NONCE_LEN + TAG_LEN,
                    actual: payload.len(),
                });
            }
            let mut nonce = [0u8; NONCE_LEN];
            nonce.copy_from_slice(&payload[..NONCE_LEN]);
            let mut tag = [0u8; TAG_LEN];
            tag.copy_from_slice(&payload[NONCE_LEN..NONCE_LEN + TAG_LEN]);
            Ok(Message::EncryptedMessage {
                nonce,
                tag,
                ciphertext: payload[NONCE_LEN + TAG_LEN..].to_vec(),
            })
        }
        TYPE_ERROR => {
            if payload.is_empty() {
                return Err(WireError::LengthMismatch {
                    kind: "Error",
                    expected: 1,
                    actual: 0,
                });
            }
            Ok(Message::Error {
                code: payload[0],
                detail: String::from_utf8_lossy(&payload[1..]).into_owned(),
            })
        }
        other => Err(WireError::UnknownType(other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hello_zero() -> Message {
        Message::ClientHello {
            paramset_id: 0x07,
            client_nonce: [0u8; CLIENT_NONCE_LEN],
        }
    }

    #[test]
    fn client_hello_encoding_is_bit_exact() {
        let frame = encode(&hello_zero()).unwrap();
        let mut expected = vec![0x00, 0x00, 0x00, 0x12, 0x01, 0x07];
        expected.extend_from_slice(&[0u8; 16]);
        assert_eq!(frame, expected);
    }

    #[test]
    fn public_key_frame_length_field() {
        let frame = encode(&Message::PublicKey {
            public_key: vec![0xAB; 1184],
        })
        .unwrap();
        // 1 + 1184 = 1185 = 0x000004A1
        assert_eq!(&frame[..4], &[0x00, 0x00, 0x04, 0xA1]);
        assert_eq!(frame[4], TYPE_PUBLIC_KEY);
        assert_eq!(frame.len(), 4 + 1185);
    }

    #[test]
    fn oversized_payload_rejected() {
        let msg = Message::Ciphertext {
            ciphertext: vec![0u8; FRAME_CAP as usize],
        };
        assert!(matches!(encode(&msg), Err(WireError::OversizedPayload)));
    }

    #[test]
    fn oversized_frame_rejected_on_decode() {
        let mut bytes = (FRAME_CAP + 1).to_be_bytes().to_vec();
        bytes.push(TYPE_PUBLIC_KEY);
        let err = decode(&mut bytes.as_slice(), &DecodeHint::default()).unwrap_err();
        assert!(matches!(err, WireError::OversizedFrame(_)));
    }

    #[test]
    fn short_stream_is_truncated() {
        let mut bytes: &[u8] = &[0x00, 0x00, 0x00];
        assert!(matches!(
            decode(&mut bytes, &DecodeHint::default()),
            Err(WireError::Truncated)
        ));
    }

    #[test]
    fn every_truncation_prefix_yields_truncated() {
        let frame = encode(&hello_zero()).unwrap();
        for cut in 0..frame.len() {
            let mut prefix = &frame[..cut];
            assert!(
                matches!(
                    decode(&mut prefix, &DecodeHint::default()),
                    Err(WireError::Truncated)
                ),
                "prefix of {cut} bytes should be Truncated"
            );
        }
    }

    #[test]
    fn unknown_type_rejected() {
        let bytes = [0x00, 0x00, 0x00, 0x01, 0x7F];
        let err = decode(&mut bytes.as_slice(), &DecodeHint::default()).unwrap_err();
        assert!(matches!(err, WireError::UnknownType(0x7F)));
    }

    #[test]
    fn hint_enforces_negotiated_public_key_length() {
        let frame = encode(&Message::PublicKey {
            public_key: vec![0u8; 1183],
        })
        .unwrap();
        let hint = DecodeHint {
            pk_len: Some(1184),
            ct_len: None,
        };
        let err = decode(&mut frame.as_slice(), &hint).unwrap_err();
        assert!(matches!(
            err,
            WireError::LengthMismatch {
                kind: "PublicKey",
                expected: 1184,
                actual: 1183
            }
        ));
    }

    #[test]
    fn decode_consumes_exactly_one_frame() {
        struct CountingReader<'a> {
            data: &'a [u8],
            read: usize,
        }
        impl Read for CountingReader<'_> {
            fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
                let n = self.data.read(buf)?;
                self.read += n;
                Ok(n)
            }
        }
        let mut frame = encode(&hello_zero()).unwrap();
        let frame_len = frame.len();
        frame.extend_from_slice(b"trailing bytes that must stay unread");
        let mut reader = CountingReader {
            data: &frame,
            read: 0,
        };
        let msg = decode(&mut reader, &DecodeHint::default()).unwrap();
        assert_eq!(msg, hello_zero());
        assert_eq!(reader.read, frame_len);
    }

    fn arbitrary_message() -> impl Strategy<Value = Message> {
        prop_oneof![
            (any::<u8>(), any::<[u8; CLIENT_NONCE_LEN]>()).prop_map(|(paramset_id, client_nonce)| {
                Message::ClientHello {
                    paramset_id,
                    client_nonce,
                }
            }),
            proptest::collection::vec(any::<u8>(), 0..4096)
                .prop_map(|public_key| Message::PublicKey { public_key }),
            proptest::collection::vec(any::<u8>(), 0..4096)
                .prop_map(|ciphertext| Message::Ciphertext { ciphertext }),
            (
                any::<[u8; NONCE_LEN]>(),
                any::<[u8; TAG_LEN]>(),
                proptest::collection::vec(any::<u8>(), 0..4096)
            )
                .prop_map(|(nonce, tag, ciphertext)| Message::EncryptedMessage {
                    nonce,
                    tag,
                    ciphertext,
                }),
            (any::<u8>(), "[ -~]{0,128}").prop_map(|(code, detail)| Message::Error {
                code,
                detail,
            }),
        ]
    }

    proptest! {
        #[test]
        fn round_trip_identity(msg in arbitrary_message()) {
            let frame = encode(&msg).unwrap();
            let decoded = decode(&mut frame.as_slice(), &DecodeHint::default()).unwrap();
            prop_assert_eq!(decoded, msg);
        }

        #[test]
        fn truncation_never_yields_a_message(msg in arbitrary_message(), frac in 0.0f64..1.0) {
            let frame = encode(&msg).unwrap();
            let cut = ((frame.len() as f64) * frac) as usize;
            if cut < frame.len() {
                let mut prefix = &frame[..cut];
                prop_assert!(matches!(
                    decode(&mut prefix, &DecodeHint::default()),
                    Err(WireError::Truncated)
                ));
            }
        }
    }
}
