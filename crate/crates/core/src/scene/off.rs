//! ASCII OFF mesh reader/writer.

use super::{MeshError, TriMesh};
use nalgebra::Vector3;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OffError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("mesh invalid: {0}")]
    Mesh(#[from] MeshError),
}

fn parse_err(line: usize, message: impl Into<String>) -> OffError {
    OffError::Parse { line, message: message.into() }
}

/// Loads an ASCII OFF file. Polygonal faces are fan-triangulated; vertices
/// keep file order.
pub fn load_mesh(path: impl AsRef<Path>) -> Result<TriMesh, OffError> {
    let file = std::fs::File::open(path)?;
    let reader = BufReader::new(file);

    // Significant lines with their 1-based numbers; comments and blanks skipped.
    let mut lines = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim().to_string();
        if !body.is_empty() {
            lines.push((i + 1, body));
        }
    }
    let mut cursor = lines.into_iter();

    let (ln, header) = cursor.next().ok_or_else(|| parse_err(0, "empty file"))?;
    // Header may be "OFF" alone or "OFF nv nf ne" on one line.
    let counts_tokens: Vec<String>;
    if header == "OFF" {
        let (ln2, counts_line) =
            cursor.next().ok_or_else(|| parse_err(ln, "missing element counts"))?;
        counts_tokens = counts_line.split_whitespace().map(str::to_string).collect();
        if counts_tokens.len() < 2 {
            return Err(parse_err(ln2, "expected vertex and face counts"));
        }
    } else if let Some(rest) = header.strip_prefix("OFF") {
        counts_tokens = rest.split_whitespace().map(str::to_string).collect();
        if counts_tokens.len() < 2 {
            return Err(parse_err(ln, "expected 'OFF' header"));
        }
    } else {
        return Err(parse_err(ln, format!("expected 'OFF' header, found {header:?}")));
    }

    let nverts: usize = counts_tokens[0]
        .parse()
        .map_err(|_| parse_err(ln, "bad vertex count"))?;
    let nfaces: usize = counts_tokens[1]
        .parse()
        .map_err(|_| parse_err(ln, "bad face count"))?;

    let mut vertices = Vec::with_capacity(nverts);
    for _ in 0..nverts {
        let (ln, line) = cursor.next().ok_or_else(|| parse_err(0, "unexpected end of vertex list"))?;
        let coords: Vec<f64> = line
            .split_whitespace()
            .take(3)
            .map(|t| t.parse::<f64>().map_err(|_| parse_err(ln, format!("bad coordinate {t:?}"))))
            .collect::<Result<_, _>>()?;
        if coords.len() != 3 {
            return Err(parse_err(ln, "vertex needs 3 coordinates"));
        }
        vertices.push(Vector3::new(coords[0], coords[1], coords[2]));
    }

    let mut triangles = Vec::with_capacity(nfaces);
    for _ in 0..nfaces {
        let (ln, line) = cursor.next().ok_or_else(|| parse_err(0, "unexpected end of face list"))?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let arity: usize = tokens[0]
            .parse()
            .map_err(|_| parse_err(ln, "bad face arity"))?;
        if arity < 3 || tokens.len() < 1 + arity {
            return Err(parse_err(ln, "face needs at least 3 indices"));
        }
        let idx: Vec<usize> = tokens[1..1 + arity]
            .iter()
            .map(|t| t.parse::<usize>().map_err(|_| parse_err(ln, format!("bad index {t:?}"))))
            .collect::<Result<_, _>>()?;
        for k in 1..arity - 1 {
            triangles.push([idx[0], idx[k], idx[k + 1]]);
        }
    }

    Ok(TriMesh::new(vertices, triangles)?)
}

/// Writes an ASCII OFF file; coordinates round-trip exactly.
pub fn write_mesh(mesh: &TriMesh, path: impl AsRef<Path>) -> Result<(), OffError> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "OFF")?;
    writeln!(out, "{} {} 0", mesh.vertices.len(), mesh.triangles.len())?;
    for v in &mesh.vertices {
        writeln!(out, "{} {} {}", v.x, v.y, v.z)?;
    }
    for t in &mesh.triangles {
        writeln!(out, "3 {} {} {}", t[0], t[1], t[2])?;
    }
    Ok(())
}
