//! `TNSR` dense tensor files: magic, version (u32), order N (u32), N dims
//! (u64), then the entries as f64 in storage order. All little-endian.

use std::fs;
use std::path::Path;

use tucker_sketch::DenseTensor;

use crate::error::{BenchError, Result};

const MAGIC: &[u8; 4] = b"TNSR";
const VERSION: u32 = 1;

pub fn encode_tensor(x: &DenseTensor) -> Vec<u8> {
    let mut out = Vec::with_capacity(12 + 8 * x.order() + 8 * x.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(x.order() as u32).to_le_bytes());
    for &d in x.dims() {
        out.extend_from_slice(&(d as u64).to_le_bytes());
    }
    for v in x.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_tensor(bytes: &[u8], source: &Path) -> Result<DenseTensor> {
    let bad = |msg: String| BenchError::format(source, msg);
    if bytes.len() < 12 || &bytes[..4] != MAGIC {
        return Err(bad("missing TNSR magic".into()));
    }
    let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
    if word(4) != VERSION {
        return Err(bad(format!("unsupported version {}", word(4))));
    }
    let n = word(8) as usize;
    let header = 12 + 8 * n;
    if bytes.len() < header {
        return Err(bad("truncated header".into()));
    }
    let dims: Vec<usize> = (0..n)
        .map(|k| u64::from_le_bytes(bytes[12 + 8 * k..20 + 8 * k].try_into().unwrap()) as usize)
        .collect();
    let len = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| bad("dimensions overflow".into()))?;
    let payload = &bytes[header..];
    if len.checked_mul(8) != Some(payload.len()) {
        return Err(bad(format!("expected {} entries, found {} bytes", len, payload.len())));
    }
    let data = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    DenseTensor::new(dims, data).map_err(|e| bad(e.to_string()))
}

pub fn save_tensor(x: &DenseTensor, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_tensor(x)).map_err(|e| BenchError::io(path, e))
}

pub fn load_tensor(path: impl AsRef<Path>) -> Result<DenseTensor> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| BenchError::io(path, e))?;
    decode_tensor(&bytes, path)
}
