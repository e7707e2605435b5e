use ed25519_dalek::{Signature, Signer, SigningKey, Verifier, VerifyingKey};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::{strict_hex, AuditError, Result};

/// The device's signing identity. In deployment this key would live in
/// attestation hardware; here it is held by the trail writer.
#[derive(Clone)]
pub struct DeviceKey {
    signing: SigningKey,
}

impl DeviceKey {
    pub fn verifying_key(&self) -> VerifyingKey {
        self.signing.verifying_key()
    }

    pub fn pubkey_hex(&self) -> String {
        hex::encode(self.verifying_key().to_bytes())
    }
}

/// Deterministic key generation from a seed, for reproducible fixtures.
pub fn keygen(seed: u64) -> DeviceKey {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut secret = [0u8; 32];
    rng.fill_bytes(&mut secret);
    DeviceKey {
        signing: SigningKey::from_bytes(&secret),
    }
}

/// Hex of the public key a hex-encoded or raw context would show.
pub fn pubkey_hex(key: &DeviceKey) -> String {
    key.pubkey_hex()
}

/// Sign bytes, returning the signature as lowercase hex.
pub fn sign(message: &[u8], key: &DeviceKey) -> String {
    let sig: Signature = key.signing.sign(message);
    hex::encode(sig.to_bytes())
}

/// Verify a hex signature over bytes under a hex public key. Malformed
/// keys or signatures are errors; a well-formed mismatch is `Ok(false)`.
pub fn verify_signature(message: &[u8], signature_hex: &str, pubkey_hex: &str) -> Result<bool> {
    let sig_bytes = strict_hex("signature", signature_hex)?;
    let key_bytes = strict_hex("device_pubkey", pubkey_hex)?;
    let sig_arr: [u8; 64] = sig_bytes
        .as_slice()
        .try_into()
        .map_err(|_| AuditError::KeyLength {
            expected: 64,
            got: sig_bytes.len(),
        })?;
    let key_arr: [u8; 32] = key_bytes
        .as_slice()
        .try_into()
        .map_err(|_| AuditError::KeyLength {
            expected: 32,
            got: key_bytes.len(),
        })?;
    let key = VerifyingKey::from_bytes(&key_arr)
        .map_err(|e| AuditError::Malformed(format!("bad public key: {e}")))?;
    Ok(key.verify(message, &Signature::from_bytes(&sig_arr)).is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_verify_round_trip() {
        let key = keygen(7);
        let sig = sign(b"hello", &key);
        assert!(verify_signature(b"hello", &sig, &key.pubkey_hex()).unwrap());
        assert!(!verify_signature(b"hellp", &sig, &key.pubkey_hex()).unwrap());
    }

    #[test]
    fn wrong_pubkey_rejects() {
        let key = keygen(1);
        let other = keygen(2);
        let sig = sign(b"msg", &key);
        assert!(!verify_signature(b"msg", &sig, &other.pubkey_hex()).unwrap());
    }

    #[test]
    fn keygen_is_deterministic() {
        assert_eq!(keygen(42).pubkey_hex(), keygen(42).pubkey_hex());
        assert_ne!(keygen(42).pubkey_hex(), keygen(43).pubkey_hex());
    }

    #[test]
    fn thousand_random_messages_no_false_results() {
        use rand::Rng;
        let key = keygen(99);
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let len = rng.gen_range(0..200);
            let mut msg = vec![0u8; len];
            rng.fill_bytes(&mut msg);
            let sig = sign(&msg, &key);
            assert!(verify_signature(&msg, &sig, &key.pubkey_hex()).unwrap());
            if !msg.is_empty() {
                let mut tampered = msg.clone();
                let idx = rng.gen_range(0..tampered.len());
                tampered[idx] ^= 1;
                assert!(!verify_signature(&tampered, &sig, &key.pubkey_hex()).unwrap());
            }
        }
    }

    #[test]
    fn malformed_key_material_errors() {
        assert!(matches!(
            verify_signature(b"m", "abc", &keygen(1).pubkey_hex()),
            Err(AuditError::BadHex { .. }) | Err(AuditError::KeyLength { .. })
        ));
        assert!(matches!(
            verify_signature(b"m", &"00".repeat(64), "ff00"),
            Err(AuditError::KeyLength { .. })
        ));
        // Uppercase hex is rejected outright.
        let key = keygen(3);
        let sig = sign(b"m", &key).to_uppercase();
        assert!(matches!(
            verify_signature(b"m", &sig, &key.pubkey_hex()),
            Err(AuditError::BadHex { .. })
        ));
    }
}
