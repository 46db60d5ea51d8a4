//! JSON formats for polytopes and surface measures.
//!
//! A polytope file carries either a vertex list, a halfspace list, or both;
//! the reader accepts any of these and completes the missing representation.
//! Stored floats use the shortest round-trip representation, so a save/load
//! cycle is lossless.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geometry::{Halfspace, Polytope, SurfaceMeasure};
use crate::linalg::Vector;
use crate::Error;

#[derive(Serialize, Deserialize)]
struct HalfspaceJson {
    normal: Vec<f64>,
    offset: f64,
}

#[derive(Serialize, Deserialize)]
struct PolytopeJson {
    dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    halfspaces: Option<Vec<HalfspaceJson>>,
}

#[derive(Serialize, Deserialize)]
struct MeasureAtomJson {
    normal: Vec<f64>,
    weight: f64,
}

#[derive(Serialize, Deserialize)]
struct MeasureJson {
    dim: usize,
    atoms: Vec<MeasureAtomJson>,
}

fn parse_err(what: &str, e: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{what}: {e}"))
}

pub fn polytope_to_json(p: &Polytope) -> String {
    let doc = PolytopeJson {
        dim: p.dim(),
        vertices: Some(p.vertices().iter().map(|v| v.as_slice().to_vec()).collect()),
        halfspaces: Some(
            p.facets()
                .iter()
                .map(|f| HalfspaceJson {
                    normal: f.halfspace.normal.as_slice().to_vec(),
                    offset: f.halfspace.offset,
                })
                .collect(),
        ),
    };
    serde_json::to_string_pretty(&doc).expect("polytope serializes")
}

pub fn polytope_from_json(text: &str) -> Result<Polytope, Error> {
    let doc: PolytopeJson = serde_json::from_str(text).map_err(|e| parse_err("polytope json", e))?;
    if let Some(verts) = doc.vertices {
        if verts.is_empty() {
            return Err(Error::Parse("field `vertices` is empty".into()));
        }
        let pts: Vec<Vector> = verts
            .iter()
            .enumerate()
            .map(|(i, v)| {
                if v.len() != doc.dim {
                    return Err(Error::Parse(format!(
                        "vertex {i} has {} coordinates, expected {}",
                        v.len(),
                        doc.dim
                    )));
                }
                Ok(Vector::from_slice(v))
            })
            .collect::<Result<_, _>>()?;
        return Polytope::from_points(&pts);
    }
    if let Some(hs) = doc.halfspaces {
        let halfspaces: Vec<Halfspace> = hs
            .iter()
            .enumerate()
            .map(|(i, h)| {
                if h.normal.len() != doc.dim {
                    return Err(Error::Parse(format!(
                        "halfspace {i} normal has {} coordinates, expected {}",
                        h.normal.len(),
                        doc.dim
                    )));
                }
                Halfspace::new(Vector::from_slice(&h.normal), h.offset)
            })
            .collect::<Result<_, _>>()?;
        return Polytope::from_halfspaces(&halfspaces);
    }
    Err(Error::Parse("polytope json needs `vertices` or `halfspaces`".into()))
}

pub fn save_polytope(p: &Polytope, path: &Path) -> Result<(), Error> {
    std::fs::write(path, polytope_to_json(p))?;
    Ok(())
}

pub fn load_polytope(path: &Path) -> Result<Polytope, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| parse_err(&format!("reading {}", path.display()), e))?;
    polytope_from_json(&text)
}

/// Accepts a builtin body name (`simplex-3`, `cube-2`, `cross-4`,
/// `regular-7-gon`) or a path to a polytope JSON file.
pub fn load_polytope_or_builtin(spec: &str) -> Result<Polytope, Error> {
    match crate::bodies::builtin(spec) {
        Ok(p) => Ok(p),
        Err(Error::DimOutOfRange(n)) => Err(Error::DimOutOfRange(n)),
        Err(_) => load_polytope(Path::new(spec)),
    }
}

pub fn measure_to_json(s: &SurfaceMeasure) -> String {
    let doc = MeasureJson {
        dim: s.dim,
        atoms: s
            .atoms
            .iter()
            .map(|(u, w)| MeasureAtomJson { normal: u.as_slice().to_vec(), weight: *w })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("measure serializes")
}

pub fn measure_from_json(text: &str) -> Result<SurfaceMeasure, Error> {
    let doc: MeasureJson = serde_json::from_str(text).map_err(|e| parse_err("measure json", e))?;
    let mut atoms = Vec::with_capacity(doc.atoms.len());
    for (i, a) in doc.atoms.iter().enumerate() {
        if a.normal.len() != doc.dim {
            return Err(Error::Parse(format!(
                "atom {i} normal has {} coordinates, expected {}",
                a.normal.len(),
                doc.dim
            )));
        }
        if !(a.weight.is_finite()) || a.weight <= 0.0 {
            return Err(Error::Parse(format!("atom {i} weight must be positive")));
        }
        // Keep already-unit normals bit-exact so round trips are lossless.
        let raw = Vector::from_slice(&a.normal);
        let u = if (raw.norm() - 1.0).abs() <= 1e-12 {
            raw
        } else {
            raw.normalized().ok_or(Error::ZeroDirection)?
        };
        atoms.push((u, a.weight));
    }
    Ok(SurfaceMeasure { dim: doc.dim, atoms })
}

pub fn save_measure(s: &SurfaceMeasure, path: &Path) -> Result<(), Error> {
    std::fs::write(path, measure_to_json(s))?;
    Ok(())
}

pub fn load_measure(path: &Path) -> Result<SurfaceMeasure, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| parse_err(&format!("reading {}", path.display()), e))?;
    measure_from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies;

    #[test]
    fn polytope_roundtrip_is_lossless() {
        let mut rng = bodies::seeded_rng(11);
        for dim in 2..=4 {
            let p = bodies::random_polytope(dim, dim + 4, &mut rng);
            let text = polytope_to_json(&p);
            let back = polytope_from_json(&text).unwrap();
            assert!(back.vertex_distance(&p) <= 1e-15 * p.diameter());
        }
    }

    #[test]
    fn reader_completes_from_halfspaces_alone() {
        let text = r#"{
            "dim": 2,
            "halfspaces": [
                {"normal": [1.0, 0.0], "offset": 1.0},
                {"normal": [-1.0, 0.0], "offset": 1.0},
                {"normal": [0.0, 1.0], "offset": 1.0},
                {"normal": [0.0, -1.0], "offset": 1.0}
            ]
        }"#;
        let p = polytope_from_json(text).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert!((p.volume() - 4.0).abs() < 1e-10);
    }

    #[test]
    fn malformed_json_reports_location() {
        let err = polytope_from_json("{\"dim\": 2, \"vertices\": [[0,0],[1,0]").unwrap_err();
        match err {
            Error::Parse(msg) => assert!(msg.contains("line"), "got: {msg}"),
            other => panic!("expected parse error, got {other}"),
        }
        let err = polytope_from_json("{\"dim\": 3, \"vertices\": [[0,0],[1,0],[0,1]]}").unwrap_err();
        match err {
            Error::Parse(msg) => assert!(msg.contains("vertex 0"), "got: {msg}"),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn measure_roundtrip() {
        let m = crate::measures::blaschke_measure(&bodies::triangle());
        let text = measure_to_json(&m);
        let back = measure_from_json(&text).unwrap();
        assert_eq!(back.atoms.len(), m.atoms.len());
        for ((u, w), (v, x)) in m.atoms.iter().zip(back.atoms.iter()) {
            assert_eq!(u.as_slice(), v.as_slice());
            assert_eq!(w, x);
        }
    }

    #[test]
    fn builtin_or_path() {
        assert_eq!(load_polytope_or_builtin("simplex-3").unwrap().vertices().len(), 4);
        assert!(load_polytope_or_builtin("/nonexistent/thing.json").is_err());
    }
}
