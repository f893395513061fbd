//! OFF and triangulated OBJ readers, and OFF writing.

use std::fmt::Write as _;
use std::path::Path;

use super::{GeomError, TriangleMesh};
use crate::Point3;

fn parse_err(path: &str, line: usize, message: impl Into<String>) -> GeomError {
    GeomError::Parse {
        path: path.to_string(),
        line,
        message: message.into(),
    }
}

fn numbers<T: std::str::FromStr>(
    fields: &[&str],
    path: &str,
    line: usize,
) -> Result<Vec<T>, GeomError> {
    fields
        .iter()
        .map(|f| {
            f.parse()
                .map_err(|_| parse_err(path, line, format!("bad number `{f}`")))
        })
        .collect()
}

/// Parses OFF text. `origin` is only used in error messages.
pub fn parse_off(text: &str, origin: &str) -> Result<TriangleMesh, GeomError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (n, header) = lines.next().ok_or_else(|| parse_err(origin, 1, "empty file"))?;
    let mut rest = header.strip_prefix("OFF").ok_or_else(|| parse_err(origin, n, "missing OFF header"))?.trim().to_string();
    if rest.is_empty() {
        let (_, l) = lines
            .next()
            .ok_or_else(|| parse_err(origin, n, "missing element counts"))?;
        rest = l.to_string();
    }
    let counts: Vec<usize> = numbers(&rest.split_whitespace().collect::<Vec<_>>(), origin, n)?;
    if counts.len() < 2 {
        return Err(parse_err(origin, n, "expected vertex and face counts"));
    }
    let (nv, nf) = (counts[0], counts[1]);

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, l) = lines.next().ok_or_else(|| parse_err(origin, n, "too few vertex records"))?;
        let xyz: Vec<f64> = numbers(&l.split_whitespace().take(3).collect::<Vec<_>>(), origin, ln)?;
        if xyz.len() != 3 {
            return Err(parse_err(origin, ln, "vertex needs three coordinates"));
        }
        vertices.push(Point3::new(xyz[0], xyz[1], xyz[2]));
    }
    let mut triangles = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (ln, l) = lines.next().ok_or_else(|| parse_err(origin, n, "too few face records"))?;
        let f: Vec<usize> = numbers(&l.split_whitespace().collect::<Vec<_>>(), origin, ln)?;
        if f.first() != Some(&3) || f.len() < 4 {
            return Err(parse_err(origin, ln, "faces must be triangles"));
        }
        triangles.push([f[1], f[2], f[3]]);
    }
    TriangleMesh::new(vertices, triangles)
}

/// Parses the `v` and `f` records of OBJ text; other records are ignored.
/// Face corners may use `v/vt/vn` syntax and negative (relative) indices.
pub fn parse_obj(text: &str, origin: &str) -> Result<TriangleMesh, GeomError> {
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let xyz: Vec<f64> = numbers(&it.take(3).collect::<Vec<_>>(), origin, ln)?;
                if xyz.len() != 3 {
                    return Err(parse_err(origin, ln, "vertex needs three coordinates"));
                }
                vertices.push(Point3::new(xyz[0], xyz[1], xyz[2]));
            }
            Some("f") => {
                let corners: Vec<&str> = it.collect();
                if corners.len() != 3 {
                    return Err(parse_err(origin, ln, "faces must be triangles"));
                }
                let mut tri = [0usize; 3];
                for (slot, c) in tri.iter_mut().zip(&corners) {
                    let idx: i64 = c
                        .split('/')
                        .next()
                        .unwrap_or("")
                        .parse()
                        .map_err(|_| parse_err(origin, ln, format!("bad face index `{c}`")))?;
                    let resolved = match idx {
                        0 => None,
                        i if i > 0 => Some(i as usize - 1),
                        i => vertices.len().checked_sub(i.unsigned_abs() as usize),
                    };
                    *slot = resolved.ok_or_else(|| parse_err(origin, ln, format!("face index `{c}` out of range")))?;
                }
                triangles.push(tri);
            }
            _ => {}
        }
    }
    TriangleMesh::new(vertices, triangles)
}

/// Reads a mesh, choosing the format by extension (`.off` or `.obj`).
pub fn read_mesh(path: &Path) -> Result<TriangleMesh, GeomError> {
    let text = std::fs::read_to_string(path).map_err(|e| GeomError::Io(format!("{}: {e}", path.display())))?;
    let name = path.display().to_string();
    match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
        Some("off") => parse_off(&text, &name),
        Some("obj") => parse_obj(&text, &name),
        _ => Err(GeomError::Io(format!("{name}: unknown mesh extension (expected .off or .obj)"))),
    }
}

pub fn to_off(mesh: &TriangleMesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "OFF\n{} {} 0", mesh.vertices().len(), mesh.triangles().len());
    for p in mesh.vertices() {
        let _ = writeln!(s, "{} {} {}", p.x, p.y, p.z);
    }
    for [a, b, c] in mesh.triangles() {
        let _ = writeln!(s, "3 {a} {b} {c}");
    }
    s
}

pub fn write_off(mesh: &TriangleMesh, path: &Path) -> Result<(), GeomError> {
    Ok(std::fs::write(path, to_off(mesh))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn off_roundtrip() {
        let m = TriangleMesh::unit_icosphere(1);
        let back = parse_off(&to_off(&m), "mem").unwrap();
        assert_eq!(back.triangles(), m.triangles());
        for (a, b) in back.vertices().iter().zip(m.vertices()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn off_header_on_one_line_and_comments() {
        let text = "OFF 3 1 0 # counts\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n";
        let m = parse_off(text, "mem").unwrap();
        assert_eq!(m.triangles(), &[[0, 1, 2]]);
    }

    #[test]
    fn off_rejects_quads() {
        let text = "OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n";
        assert!(matches!(parse_off(text, "q.off"), Err(GeomError::Parse { line: 7, .. })));
    }

    #[test]
    fn obj_with_slashes_and_negative_indices() {
        let text = "# tri\nv 0 0 0\nv 1 0 0\nvn 0 0 1\nv 0 1 0\nf 1/1/1 2//1 -1\n";
        let m = parse_obj(text, "mem").unwrap();
        assert_eq!(m.triangles(), &[[0, 1, 2]]);
        assert!(parse_obj("v 0 0 0\nf 1 2 3 4\n", "mem").is_err());
        assert!(parse_obj("v 0 0 0\nf 1 2 3\n", "mem").is_err());
    }
}
