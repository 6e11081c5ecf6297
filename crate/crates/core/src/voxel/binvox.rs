//! binvox v1 binary format for binary grids.
//!
//! Header: `#binvox 1`, `dim d d d`, `translate tx ty tz`, `scale s`,
//! `data`, each on its own line; then a byte-pair run-length encoding
//! (value, count <= 255) of the voxels in x-fastest, z-slowest order.
//! `translate` carries the frame origin and `scale` the world extent of the
//! grid (voxel_size * dim). Round trips are bit-exact.

use super::{GridFrame, VoxelGrid};
use nalgebra::Vector3;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BinvoxError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed header: {0}")]
    Header(String),
    #[error("RLE overrun: payload {got} voxels, grid holds {expected}")]
    RleOverrun { got: usize, expected: usize },
    #[error("grid is not binary")]
    NotBinary,
}

pub fn write_binvox(grid: &VoxelGrid, path: impl AsRef<Path>) -> Result<(), BinvoxError> {
    if !grid.is_binary() {
        return Err(BinvoxError::NotBinary);
    }
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    let dim = grid.dim();
    let o = grid.frame().origin;
    let scale = grid.frame().voxel_size * dim as f64;
    write!(out, "#binvox 1\ndim {dim} {dim} {dim}\ntranslate {} {} {}\nscale {}\ndata\n", o.x, o.y, o.z, scale)?;

    let scores = grid.scores();
    let mut i = 0usize;
    while i < scores.len() {
        let value = if scores[i] > 0.5 { 1u8 } else { 0u8 };
        let mut run = 1usize;
        while i + run < scores.len()
            && run < 255
            && (scores[i + run] > 0.5) == (value == 1)
        {
            run += 1;
        }
        out.write_all(&[value, run as u8])?;
        i += run;
    }
    Ok(())
}

pub fn read_binvox(path: impl AsRef<Path>) -> Result<VoxelGrid, BinvoxError> {
    let file = std::fs::File::open(path)?;
    let mut reader = BufReader::new(file);

    let mut line = String::new();
    let mut read_line = |reader: &mut BufReader<std::fs::File>| -> Result<String, BinvoxError> {
        line.clear();
        let n = reader.read_line(&mut line)?;
        if n == 0 {
            return Err(BinvoxError::Header("unexpected end of file".into()));
        }
        Ok(line.trim_end().to_string())
    };

    let magic = read_line(&mut reader)?;
    if magic != "#binvox 1" {
        return Err(BinvoxError::Header(format!("expected '#binvox 1', found {magic:?}")));
    }

    let mut dim: Option<usize> = None;
    let mut translate = Vector3::zeros();
    let mut scale = 1.0f64;
    loop {
        let l = read_line(&mut reader)?;
        let mut tokens = l.split_whitespace();
        match tokens.next() {
            Some("dim") => {
                let dims: Vec<usize> = tokens
                    .map(|t| t.parse().map_err(|_| BinvoxError::Header(format!("bad dim in {l:?}"))))
                    .collect::<Result<_, _>>()?;
                if dims.len() != 3 || dims[0] != dims[1] || dims[1] != dims[2] || dims[0] < 2 {
                    return Err(BinvoxError::Header(format!("unsupported dim line {l:?}")));
                }
                dim = Some(dims[0]);
            }
            Some("translate") => {
                let t: Vec<f64> = tokens
                    .map(|t| t.parse().map_err(|_| BinvoxError::Header(format!("bad translate in {l:?}"))))
                    .collect::<Result<_, _>>()?;
                if t.len() != 3 {
                    return Err(BinvoxError::Header(format!("bad translate line {l:?}")));
                }
                translate = Vector3::new(t[0], t[1], t[2]);
            }
            Some("scale") => {
                scale = tokens
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| BinvoxError::Header(format!("bad scale line {l:?}")))?;
            }
            Some("data") => break,
            other => {
                return Err(BinvoxError::Header(format!("unexpected header token {other:?}")));
            }
        }
    }
    let dim = dim.ok_or_else(|| BinvoxError::Header("missing dim".into()))?;
    if scale <= 0.0 {
        return Err(BinvoxError::Header(format!("non-positive scale {scale}")));
    }

    let mut payload = Vec::new();
    reader.read_to_end(&mut payload)?;
    let expected = dim * dim * dim;
    let mut scores = Vec::with_capacity(expected);
    for pair in payload.chunks(2) {
        if pair.len() != 2 {
            return Err(BinvoxError::RleOverrun { got: scores.len(), expected });
        }
        let (value, count) = (pair[0], pair[1] as usize);
        if value > 1 {
            return Err(BinvoxError::Header(format!("non-binary RLE value {value}")));
        }
        if scores.len() + count > expected {
            return Err(BinvoxError::RleOverrun { got: scores.len() + count, expected });
        }
        scores.extend(std::iter::repeat(value as f64).take(count));
    }
    if scores.len() != expected {
        return Err(BinvoxError::RleOverrun { got: scores.len(), expected });
    }
    let frame = GridFrame::new(translate, scale / dim as f64);
    Ok(VoxelGrid::from_scores(dim, frame, scores))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand::Rng;

    fn random_grid(seed: u64) -> VoxelGrid {
        let mut r = rng::from_seed(seed);
        let frame = GridFrame::fixed_scale(Vector3::new(r.gen(), r.gen(), r.gen()), 40);
        let mut g = VoxelGrid::zeros(40, frame);
        for _ in 0..r.gen_range(0..4000) {
            g.set(r.gen_range(0..40), r.gen_range(0..40), r.gen_range(0..40), 1.0);
        }
        g
    }

    #[test]
    fn round_trip_is_bit_exact_over_seeds() {
        let dir = tempfile::tempdir().unwrap();
        for seed in 0..100 {
            let g = random_grid(seed);
            let path = dir.path().join(format!("g{seed}.binvox"));
            write_binvox(&g, &path).unwrap();
            let back = read_binvox(&path).unwrap();
            assert_eq!(g, back, "seed {seed}");
            let path2 = dir.path().join(format!("g{seed}b.binvox"));
            write_binvox(&back, &path2).unwrap();
            assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&path2).unwrap());
        }
    }

    #[test]
    fn all_zero_grid_rle_arithmetic() {
        let dir = tempfile::tempdir().unwrap();
        let g = VoxelGrid::zeros(40, GridFrame::fixed_scale_at_origin(40));
        let path = dir.path().join("zero.binvox");
        write_binvox(&g, &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        let data_at = bytes.windows(5).position(|w| w == b"data\n").unwrap() + 5;
        let payload = &bytes[data_at..];
        // 64000 voxels = 250 full runs of (0, 255) + one (0, 250)
        assert_eq!(payload.len(), 2 * 251);
        let total: usize = payload.chunks(2).map(|p| p[1] as usize).sum();
        assert_eq!(total, 64000);
        assert!(payload.chunks(2).all(|p| p[0] == 0));
        assert!(payload.chunks(2).take(250).all(|p| p[1] == 255));
        assert_eq!(payload[2 * 250 + 1], 250);
    }

    #[test]
    fn truncated_payload_is_rle_overrun() {
        let dir = tempfile::tempdir().unwrap();
        let g = random_grid(7);
        let path = dir.path().join("t.binvox");
        write_binvox(&g, &path).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        bytes.truncate(bytes.len() - 6);
        let path2 = dir.path().join("trunc.binvox");
        std::fs::write(&path2, bytes).unwrap();
        assert!(matches!(read_binvox(&path2), Err(BinvoxError::RleOverrun { .. })));
    }

    #[test]
    fn overlong_payload_is_rle_overrun() {
        let dir = tempfile::tempdir().unwrap();
        let g = VoxelGrid::zeros(4, GridFrame::fixed_scale_at_origin(4));
        let path = dir.path().join("o.binvox");
        write_binvox(&g, &path).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        bytes.extend_from_slice(&[0u8, 200u8]);
        std::fs::write(&path, &bytes).unwrap();
        assert!(matches!(read_binvox(&path), Err(BinvoxError::RleOverrun { .. })));
    }

    #[test]
    fn malformed_header_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.binvox");
        std::fs::write(&path, "#binvox 2\ndim 4 4 4\ndata\n").unwrap();
        assert!(matches!(read_binvox(&path), Err(BinvoxError::Header(_))));
    }

    #[test]
    fn non_binary_grid_refused_on_write() {
        let dir = tempfile::tempdir().unwrap();
        let mut g = VoxelGrid::zeros(4, GridFrame::fixed_scale_at_origin(4));
        g.set(0, 0, 0, 0.5);
        assert!(matches!(write_binvox(&g, dir.path().join("x.binvox")), Err(BinvoxError::NotBinary)));
    }
}
