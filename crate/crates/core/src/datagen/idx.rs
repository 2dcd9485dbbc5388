//! IDX containers as used by MNIST (big-endian, `u8` payload).

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub const IMAGE_MAGIC: u32 = 0x0000_0803;
pub const LABEL_MAGIC: u32 = 0x0000_0801;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdxData {
    Images { count: usize, rows: usize, cols: usize, pixels: Vec<u8> },
    Labels(Vec<u8>),
}

impl IdxData {
    pub fn len(&self) -> usize {
        match self {
            Self::Images { count, .. } => *count,
            Self::Labels(l) => l.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Pixels of image `i` (row-major), if this is an image file.
    pub fn image(&self, i: usize) -> Option<&[u8]> {
        match self {
            Self::Images { rows, cols, pixels, .. } => {
                let n = rows * cols;
                pixels.get(i * n..(i + 1) * n)
            }
            Self::Labels(_) => None,
        }
    }
}

fn be_u32(bytes: &[u8], at: usize) -> Result<u32> {
    bytes
        .get(at..at + 4)
        .map(|b| u32::from_be_bytes(b.try_into().unwrap()))
        .ok_or(Error::TruncatedFile { expected: at + 4, found: bytes.len() })
}

/// Parses an in-memory IDX buffer.
pub fn parse_idx(bytes: &[u8]) -> Result<IdxData> {
    let magic = be_u32(bytes, 0)?;
    match magic {
        IMAGE_MAGIC => {
            let count = be_u32(bytes, 4)? as usize;
            let rows = be_u32(bytes, 8)? as usize;
            let cols = be_u32(bytes, 12)? as usize;
            let expected = 16 + count * rows * cols;
            if bytes.len() < expected {
                return Err(Error::TruncatedFile { expected, found: bytes.len() });
            }
            Ok(IdxData::Images { count, rows, cols, pixels: bytes[16..expected].to_vec() })
        }
        LABEL_MAGIC => {
            let count = be_u32(bytes, 4)? as usize;
            let expected = 8 + count;
            if bytes.len() < expected {
                return Err(Error::TruncatedFile { expected, found: bytes.len() });
            }
            Ok(IdxData::Labels(bytes[8..expected].to_vec()))
        }
        other => Err(Error::BadMagic(other)),
    }
}

pub fn read_idx(path: impl AsRef<Path>) -> Result<IdxData> {
    parse_idx(&fs::read(path)?)
}

pub fn encode_idx(data: &IdxData) -> Vec<u8> {
    let mut out = Vec::new();
    match data {
        IdxData::Images { count, rows, cols, pixels } => {
            out.extend_from_slice(&IMAGE_MAGIC.to_be_bytes());
            for d in [count, rows, cols] {
                out.extend_from_slice(&(*d as u32).to_be_bytes());
            }
            out.extend_from_slice(pixels);
        }
        IdxData::Labels(labels) => {
            out.extend_from_slice(&LABEL_MAGIC.to_be_bytes());
            out.extend_from_slice(&(labels.len() as u32).to_be_bytes());
            out.extend_from_slice(labels);
        }
    }
    out
}

pub fn write_idx(path: impl AsRef<Path>, data: &IdxData) -> Result<()> {
    fs::write(path, encode_idx(data))?;
    Ok(())
}
