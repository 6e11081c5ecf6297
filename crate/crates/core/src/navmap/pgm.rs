//! Map serialization as binary PGM (P5) plus a text sidecar carrying the
//! world origin and cell size, and command sequences as one mnemonic per
//! line.

use super::{Command, CommandSeq, OccupancyMap2D};
use nalgebra::Vector2;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MapIoError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed {0}")]
    Malformed(String),
}

fn sidecar_path(pgm: &Path) -> PathBuf {
    pgm.with_extension("map.txt")
}

/// Free cells are 255, blocked 0. The sidecar `<map>.map.txt` carries
/// `origin: x y` and `cell_size: s`.
pub fn write_map_pgm(map: &OccupancyMap2D, path: impl AsRef<Path>) -> Result<(), MapIoError> {
    let path = path.as_ref();
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    write!(out, "P5\n{} {}\n255\n", map.width, map.height)?;
    for y in 0..map.height {
        for x in 0..map.width {
            out.write_all(&[if map.is_blocked(x, y) { 0u8 } else { 255u8 }])?;
        }
    }
    drop(out);
    let sidecar = format!(
        "origin: {} {}\ncell_size: {}\n",
        map.origin.x, map.origin.y, map.cell_size
    );
    std::fs::write(sidecar_path(path), sidecar)?;
    Ok(())
}

pub fn read_map_pgm(path: impl AsRef<Path>) -> Result<OccupancyMap2D, MapIoError> {
    let path = path.as_ref();
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;

    let mut cursor = 0usize;
    let mut token = |bytes: &[u8]| -> Result<String, MapIoError> {
        while cursor < bytes.len() && bytes[cursor].is_ascii_whitespace() {
            cursor += 1;
        }
        let start = cursor;
        while cursor < bytes.len() && !bytes[cursor].is_ascii_whitespace() {
            cursor += 1;
        }
        if start == cursor {
            return Err(MapIoError::Malformed("PGM header truncated".into()));
        }
        let t = String::from_utf8_lossy(&bytes[start..cursor]).into_owned();
        if cursor < bytes.len() {
            cursor += 1;
        }
        Ok(t)
    };
    let magic = token(&bytes)?;
    if magic != "P5" {
        return Err(MapIoError::Malformed(format!("PGM magic {magic:?}")));
    }
    let width: usize = token(&bytes)?.parse().map_err(|_| MapIoError::Malformed("PGM width".into()))?;
    let height: usize = token(&bytes)?.parse().map_err(|_| MapIoError::Malformed("PGM height".into()))?;
    let maxval: usize = token(&bytes)?.parse().map_err(|_| MapIoError::Malformed("PGM maxval".into()))?;
    if maxval != 255 {
        return Err(MapIoError::Malformed(format!("unsupported maxval {maxval}")));
    }
    let payload = &bytes[cursor..];
    if payload.len() != width * height {
        return Err(MapIoError::Malformed(format!(
            "PGM payload {} bytes, expected {}",
            payload.len(),
            width * height
        )));
    }

    let sidecar = std::fs::read_to_string(sidecar_path(path))?;
    let mut origin = Vector2::zeros();
    let mut cell_size = None;
    for line in sidecar.lines() {
        if let Some(rest) = line.strip_prefix("origin:") {
            let parts: Vec<f64> = rest
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| MapIoError::Malformed("sidecar origin".into())))
                .collect::<Result<_, _>>()?;
            if parts.len() != 2 {
                return Err(MapIoError::Malformed("sidecar origin arity".into()));
            }
            origin = Vector2::new(parts[0], parts[1]);
        } else if let Some(rest) = line.strip_prefix("cell_size:") {
            cell_size =
                Some(rest.trim().parse::<f64>().map_err(|_| MapIoError::Malformed("sidecar cell_size".into()))?);
        }
    }
    let cell_size = cell_size.ok_or_else(|| MapIoError::Malformed("sidecar missing cell_size".into()))?;

    let mut map = OccupancyMap2D::new_free(width, height, cell_size, origin);
    for y in 0..height {
        for x in 0..width {
            if payload[y * width + x] == 0 {
                map.set_blocked(x, y, true);
            }
        }
    }
    Ok(map)
}

/// One mnemonic per line: FORWARD / LEFT / RIGHT / DONE.
pub fn write_commands(commands: &[Command], path: impl AsRef<Path>) -> Result<(), MapIoError> {
    let mut out = String::new();
    for c in commands {
        out.push_str(match c {
            Command::Forward => "FORWARD\n",
            Command::Left => "LEFT\n",
            Command::Right => "RIGHT\n",
            Command::Done => "DONE\n",
        });
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_commands(path: impl AsRef<Path>) -> Result<CommandSeq, MapIoError> {
    let text = std::fs::read_to_string(path)?;
    let mut commands = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        commands.push(match line {
            "FORWARD" => Command::Forward,
            "LEFT" => Command::Left,
            "RIGHT" => Command::Right,
            "DONE" => Command::Done,
            other => return Err(MapIoError::Malformed(format!("command line {}: {other:?}", i + 1))),
        });
    }
    Ok(commands)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn map_round_trips() {
        let mut r = crate::rng::from_seed(6);
        let mut map = OccupancyMap2D::new_free(33, 21, 0.01, Vector2::new(-1.5, 2.25));
        for _ in 0..200 {
            map.set_blocked(r.gen_range(0..33), r.gen_range(0..21), true);
        }
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.pgm");
        write_map_pgm(&map, &path).unwrap();
        let back = read_map_pgm(&path).unwrap();
        assert_eq!(map, back);
    }

    #[test]
    fn commands_round_trip() {
        let cmds = vec![Command::Forward, Command::Left, Command::Right, Command::Forward, Command::Done];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        write_commands(&cmds, &path).unwrap();
        assert_eq!(read_commands(&path).unwrap(), cmds);
    }

    #[test]
    fn unknown_mnemonic_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.txt");
        std::fs::write(&path, "FORWARD\nJUMP\n").unwrap();
        assert!(matches!(read_commands(&path), Err(MapIoError::Malformed(_))));
    }
}
