//! Bit-sequence helpers. Bytes map to bits MSB-first throughout the crate.

use crate::error::{Error, Result};

pub fn bytes_to_bits(bytes: &[u8]) -> Vec<bool> {
    bytes
        .iter()
        .flat_map(|&b| (0..8).rev().map(move |i| (b >> i) & 1 == 1))
        .collect()
}

/// Packs bits into bytes; a trailing partial byte is padded with zeros.
pub fn bits_to_bytes(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|chunk| {
            chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &b)| acc | ((b as u8) << (7 - i)))
        })
        .collect()
}

pub fn xor_bits(a: &[bool], b: &[bool]) -> Result<Vec<bool>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| x ^ y).collect())
}

pub fn hex_to_bits(s: &str) -> Result<Vec<bool>> {
    let bytes = hex::decode(s.trim()).map_err(|e| Error::Parse(format!("bad hex: {e}")))?;
    Ok(bytes_to_bits(&bytes))
}

pub fn bits_to_hex(bits: &[bool]) -> String {
    hex::encode(bits_to_bytes(bits))
}
