//! Snapshot files: the magic `QKDVSNAP`, a little-endian `u64` header
//! length, a JSON header, then the spectral coefficients as interleaved
//! real/imaginary little-endian `f64` in FFT order.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::spectral::SpectralGrid;
use crate::{Error, Field, Result};

const MAGIC: &[u8; 8] = b"QKDVSNAP";
const FORMAT: &str = "qkdv-snapshot";
const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnapshotHeader {
    pub format: String,
    pub version: u32,
    pub run_id: String,
    pub step: usize,
    pub t: f64,
    pub half_length: f64,
    pub n: usize,
    pub dealias: usize,
    pub endianness: String,
    /// Number of `f64` values after the header (`2n`).
    pub values: usize,
    /// SHA-256 of the data bytes.
    pub sha256: String,
}

/// Writes `bytes` to `path` through a temporary file and a rename, so
/// readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().ok_or_else(|| Error::InvalidInput(format!("{} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// SHA-256 of a file's contents, hex encoded.
pub fn file_sha256(path: &Path) -> Result<String> {
    Ok(hex::encode(Sha256::digest(fs::read(path)?)))
}

/// Serialises a field's spectral coefficients.
pub fn encode_snapshot(state: &Field, run_id: &str, step: usize) -> Result<Vec<u8>> {
    let grid = state.grid();
    let mut data = Vec::with_capacity(16 * grid.len());
    for c in state.spectral_view().iter() {
        data.extend_from_slice(&c.re.to_le_bytes());
        data.extend_from_slice(&c.im.to_le_bytes());
    }
    let header = SnapshotHeader {
        format: FORMAT.into(),
        version: VERSION,
        run_id: run_id.into(),
        step,
        t: state.time(),
        half_length: grid.half_length(),
        n: grid.len(),
        dealias: grid.dealias_factor(),
        endianness: "little".into(),
        values: 2 * grid.len(),
        sha256: hex::encode(Sha256::digest(&data)),
    };
    let json = serde_json::to_vec(&header)?;
    let mut out = Vec::with_capacity(16 + json.len() + data.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(json.len() as u64).to_le_bytes());
    out.extend_from_slice(&json);
    out.extend_from_slice(&data);
    Ok(out)
}

pub fn write_snapshot(path: &Path, state: &Field, run_id: &str, step: usize) -> Result<()> {
    write_atomic(path, &encode_snapshot(state, run_id, step)?)
}

/// Parses and checksums a snapshot; the field lives on a fresh grid built
/// from the header.
pub fn decode_snapshot(bytes: &[u8], origin: &str) -> Result<(SnapshotHeader, Field)> {
    let fail = |reason: String| Error::Format { path: origin.to_string(), reason };
    if bytes.len() < 16 || &bytes[..8] != MAGIC {
        return Err(fail("not a snapshot file".into()));
    }
    let len = u64::from_le_bytes(bytes[8..16].try_into().expect("eight bytes")) as usize;
    let body = bytes.get(16..16 + len).ok_or_else(|| fail("truncated header".into()))?;
    let header: SnapshotHeader = serde_json::from_slice(body).map_err(|e| fail(format!("header: {e}")))?;
    if header.format != FORMAT || header.version != VERSION || header.endianness != "little" {
        return Err(fail(format!("unsupported format {} v{} ({})", header.format, header.version, header.endianness)));
    }
    let data = &bytes[16 + len..];
    if data.len() != 8 * header.values || header.values != 2 * header.n {
        return Err(fail(format!("expected {} values, found {} bytes", header.values, data.len())));
    }
    let sum = hex::encode(Sha256::digest(data));
    if sum != header.sha256 {
        return Err(fail(format!("checksum mismatch: header {} data {sum}", header.sha256)));
    }
    let grid = SpectralGrid::with_dealias(header.half_length, header.n, header.dealias)?.shared();
    let uhat = data
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("eight bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("eight bytes"));
            num_complex::Complex64::new(re, im)
        })
        .collect();
    let field = Field::from_spectral(&grid, header.t, uhat)?;
    Ok((header, field))
}

pub fn read_snapshot(path: &Path) -> Result<(SnapshotHeader, Field)> {
    decode_snapshot(&fs::read(path)?, &path.display().to_string())
}
