use std::path::Path;

use super::CliError;
use crate::geom3d::{io::read_mesh, TriangleMesh};
use crate::planar::PolyCurve;
use crate::{Point2, Point3};

fn parse_coords<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers, got `{s}`"));
    }
    let mut out = [0.0f64; N];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p.parse().map_err(|_| format!("`{p}` is not a number"))?;
        if !o.is_finite() {
            return Err(format!("`{p}` is not finite"));
        }
    }
    Ok(out)
}

/// `x,y,z`
pub fn parse_point3(s: &str) -> Result<[f64; 3], String> {
    parse_coords(s)
}

/// `x,y`
pub fn parse_point2(s: &str) -> Result<[f64; 2], String> {
    parse_coords(s)
}

fn builtin_arg(rest: Option<&str>, default: u32, what: &str) -> Result<u32, CliError> {
    rest.map_or(Ok(default), |r| {
        r.parse().map_err(|_| CliError::Config(format!("bad {what} `{r}`")))
    })
}

/// A mesh file path, or one of the built-ins `@icosphere[:s]`,
/// `@flipped[:s]` (inside-out sphere), `@nested[:s]` (spheres of radius 1
/// and 2) and `@overlap[:s]` (two intersecting unit spheres).
pub fn mesh_from_spec(spec: &str) -> Result<TriangleMesh, CliError> {
    let Some(name) = spec.strip_prefix('@') else {
        return Ok(read_mesh(Path::new(spec))?);
    };
    let (name, rest) = name.split_once(':').map_or((name, None), |(n, r)| (n, Some(r)));
    let s = builtin_arg(rest, 4, "subdivision level")?;
    if s > 7 {
        return Err(CliError::Config(format!("subdivision level {s} is above the maximum of 7")));
    }
    Ok(match name {
        "icosphere" => TriangleMesh::unit_icosphere(s),
        "flipped" => TriangleMesh::unit_icosphere(s).flipped(),
        "nested" => TriangleMesh::unit_icosphere(s).merged(&TriangleMesh::icosphere(s, 2.0, Point3::origin())),
        "overlap" => TriangleMesh::icosphere(s, 1.0, Point3::new(-0.5, 0.0, 0.0))
            .merged(&TriangleMesh::icosphere(s, 1.0, Point3::new(0.5, 0.0, 0.0))),
        _ => return Err(CliError::Config(format!("unknown built-in mesh `@{name}`"))),
    })
}

/// A curve JSON file (`{"points": [[x, y], ...]}`), or one of the built-ins
/// `@square`, `@circle[:turns]`, `@figure-eight` and `@star[:spikes]`.
pub fn curve_from_spec(spec: &str) -> Result<PolyCurve, CliError> {
    let Some(name) = spec.strip_prefix('@') else {
        let text = std::fs::read_to_string(spec).map_err(|e| CliError::Io(format!("{spec}: {e}")))?;
        return serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{spec}: {e}")));
    };
    let (name, rest) = name.split_once(':').map_or((name, None), |(n, r)| (n, Some(r)));
    Ok(match name {
        "square" => PolyCurve::square(Point2::origin(), 1.0),
        "circle" => {
            let turns = builtin_arg(rest, 1, "turn count")?;
            if turns == 0 || turns > 64 {
                return Err(CliError::Config(format!("turn count {turns} out of range 1..=64")));
            }
            PolyCurve::circle(Point2::origin(), 1.0, 256, turns as i32)
        }
        "figure-eight" => PolyCurve::figure_eight(1.0, 400),
        "star" => {
            let spikes = builtin_arg(rest, 5, "spike count")?;
            if spikes < 2 {
                return Err(CliError::Config("a star needs at least two spikes".into()));
            }
            PolyCurve::star(Point2::origin(), 0.4, 1.0, spikes as usize)
        }
        _ => return Err(CliError::Config(format!("unknown built-in curve `@{name}`"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points() {
        assert_eq!(parse_point3("1, -2.5,3").unwrap(), [1.0, -2.5, 3.0]);
        assert!(parse_point3("1,2").is_err());
        assert!(parse_point3("1,2,x").is_err());
        assert!(parse_point3("1,2,inf").is_err());
        assert_eq!(parse_point2("0,0").unwrap(), [0.0, 0.0]);
    }

    #[test]
    fn builtins() {
        assert_eq!(mesh_from_spec("@icosphere:1").unwrap().triangles().len(), 80);
        assert_eq!(mesh_from_spec("@nested:0").unwrap().triangles().len(), 40);
        assert!(mesh_from_spec("@flipped:2").unwrap().signed_volume() < 0.0);
        assert!(mesh_from_spec("@torus").is_err());
        assert!(mesh_from_spec("@icosphere:x").is_err());
        assert_eq!(curve_from_spec("@circle:3").unwrap().points().len(), 768);
        assert!(curve_from_spec("@star:1").is_err());
    }
}
