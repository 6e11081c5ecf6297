//! PFM ("Pf" grayscale) serialization of depth rasters.
//!
//! Header: `Pf\n<width> <height>\n<scale>\n` with scale -1.0 marking
//! little-endian payload; pixel rows are stored bottom-up. Round trips are
//! bit-exact (f32 payload).

use super::{CameraModel, DepthView, Pose};
use std::io::{Read, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PfmError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed PFM: {0}")]
    Malformed(String),
}

pub fn write_pfm(view: &DepthView, path: impl AsRef<Path>) -> Result<(), PfmError> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    let (w, h) = (view.camera.width, view.camera.height);
    write!(out, "Pf\n{w} {h}\n-1.0\n")?;
    for row in (0..h).rev() {
        for col in 0..w {
            let d = view.depth(col, row) as f32;
            out.write_all(&d.to_le_bytes())?;
        }
    }
    Ok(())
}

/// Reads the raster back; camera pose/intrinsics are not stored in PFM, so
/// the caller supplies them.
pub fn read_pfm(path: impl AsRef<Path>, camera: CameraModel, pose: Pose) -> Result<DepthView, PfmError> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;

    // Three whitespace-terminated header tokens, then binary payload.
    let mut cursor = 0usize;
    let mut token = |bytes: &[u8]| -> Result<String, PfmError> {
        while cursor < bytes.len() && bytes[cursor].is_ascii_whitespace() {
            cursor += 1;
        }
        let start = cursor;
        while cursor < bytes.len() && !bytes[cursor].is_ascii_whitespace() {
            cursor += 1;
        }
        if start == cursor {
            return Err(PfmError::Malformed("truncated header".into()));
        }
        let s = String::from_utf8_lossy(&bytes[start..cursor]).into_owned();
        if cursor < bytes.len() {
            cursor += 1; // single whitespace after each token
        }
        Ok(s)
    };

    let magic = token(&bytes)?;
    if magic != "Pf" {
        return Err(PfmError::Malformed(format!("expected 'Pf', found {magic:?}")));
    }
    let w: usize = token(&bytes)?.parse().map_err(|_| PfmError::Malformed("bad width".into()))?;
    let h: usize = token(&bytes)?.parse().map_err(|_| PfmError::Malformed("bad height".into()))?;
    let scale: f64 = token(&bytes)?.parse().map_err(|_| PfmError::Malformed("bad scale".into()))?;
    if scale >= 0.0 {
        return Err(PfmError::Malformed("big-endian PFM not supported".into()));
    }
    if w != camera.width || h != camera.height {
        return Err(PfmError::Malformed(format!(
            "raster {w}x{h} does not match camera {}x{}",
            camera.width, camera.height
        )));
    }
    let payload = &bytes[cursor..];
    if payload.len() != w * h * 4 {
        return Err(PfmError::Malformed(format!(
            "payload of {} bytes, expected {}",
            payload.len(),
            w * h * 4
        )));
    }
    let mut raster = vec![0f64; w * h];
    for (i, chunk) in payload.chunks_exact(4).enumerate() {
        let v = f32::from_le_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]) as f64;
        let row = h - 1 - i / w;
        let col = i % w;
        raster[row * w + col] = v;
    }
    Ok(DepthView::new(camera, pose, raster))
}
