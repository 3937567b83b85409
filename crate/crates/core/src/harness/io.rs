//! Matrix files.
//!
//! Binary layout: `b"DSVD"`, version `u16` (= 1), `m: u64`, `n: u64`, then
//! `m * n` column-major `f64`, everything little endian. The text layout has
//! one whitespace-separated matrix row per line. Readers detect the layout
//! from the magic bytes.

use std::fs;
use std::path::Path;

use super::HarnessError;
use crate::dense::Mat;

pub const MAGIC: &[u8; 4] = b"DSVD";
pub const VERSION: u16 = 1;
const HEADER: usize = 4 + 2 + 8 + 8;

pub fn encode_binary(a: &Mat) -> Vec<u8> {
    let (m, n) = (a.rows(), a.cols());
    let mut out = Vec::with_capacity(HEADER + 8 * m * n);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(m as u64).to_le_bytes());
    out.extend_from_slice(&(n as u64).to_le_bytes());
    for j in 0..n {
        for v in a.col(j) {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

pub fn encode_text(a: &Mat) -> String {
    let mut s = String::new();
    for i in 0..a.rows() {
        let row: Vec<String> = (0..a.cols()).map(|j| format!("{:e}", a[(i, j)])).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

fn u64_at(bytes: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"))
}

pub fn decode_binary(bytes: &[u8]) -> Result<Mat, HarnessError> {
    if bytes.len() < HEADER || &bytes[..4] != MAGIC {
        return Err(HarnessError::Format("missing DSVD header".into()));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(HarnessError::Format(format!("unsupported version {version}")));
    }
    let (m, n) = (u64_at(bytes, 6), u64_at(bytes, 14));
    let count = m
        .checked_mul(n)
        .and_then(|c| c.checked_mul(8))
        .filter(|&c| c == (bytes.len() - HEADER) as u64)
        .ok_or_else(|| HarnessError::Format(format!("{m}x{n} header does not match {} payload bytes", bytes.len() - HEADER)))?;
    let data: Vec<f64> = bytes[HEADER..HEADER + count as usize]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    Ok(Mat::from_col_major(m as usize, n as usize, data))
}

pub fn decode_text(text: &str) -> Result<Mat, HarnessError> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| HarnessError::Format(format!("line {}: {e}", lineno + 1)))?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(HarnessError::Format(format!(
                    "line {}: {} entries, expected {}",
                    lineno + 1,
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    Ok(Mat::from_fn(m, n, |i, j| rows[i][j]))
}

pub fn decode(bytes: &[u8]) -> Result<Mat, HarnessError> {
    if bytes.starts_with(MAGIC) {
        return decode_binary(bytes);
    }
    let text = std::str::from_utf8(bytes).map_err(|_| HarnessError::Format("neither DSVD nor text".into()))?;
    decode_text(text)
}

pub fn write_matrix(path: &Path, a: &Mat, text: bool) -> Result<(), HarnessError> {
    let bytes = if text { encode_text(a).into_bytes() } else { encode_binary(a) };
    fs::write(path, bytes).map_err(|e| HarnessError::io(path, e))
}

pub fn read_matrix(path: &Path) -> Result<Mat, HarnessError> {
    let bytes = fs::read(path).map_err(|e| HarnessError::io(path, e))?;
    decode(&bytes)
}
