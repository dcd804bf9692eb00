//! FOLD-style JSON documents.
//!
//! Supported keys are `vertices_coords`, `edges_vertices`,
//! `edges_assignment`, `edges_foldAngle` (degrees) and `faces_vertices`.
//! Every other top-level key is kept verbatim and written back after them.

use serde_json::{Map, Value};

use super::{Assignment, Crease, CreasePattern, PatternError};
use crate::geom::P2;

const KNOWN: [&str; 5] = ["vertices_coords", "edges_vertices", "edges_assignment", "edges_foldAngle", "faces_vertices"];

fn perr(msg: impl Into<String>) -> PatternError {
    PatternError::Parse(msg.into())
}

fn index(v: &Value, what: &str) -> Result<usize, PatternError> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| perr(format!("{what}: expected a vertex index, got {v}")))
}

fn array<'a>(doc: &'a Map<String, Value>, key: &str) -> Result<Option<&'a Vec<Value>>, PatternError> {
    match doc.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Array(a)) => Ok(Some(a)),
        Some(other) => Err(perr(format!("{key}: expected an array, got {other}"))),
    }
}

pub fn load_fold(bytes: &[u8]) -> Result<CreasePattern, PatternError> {
    let doc: Map<String, Value> = serde_json::from_slice(bytes).map_err(|e| perr(e.to_string()))?;

    let coords = array(&doc, "vertices_coords")?.ok_or_else(|| perr("missing vertices_coords"))?;
    let mut vertices = Vec::with_capacity(coords.len());
    for (i, c) in coords.iter().enumerate() {
        let xs: Vec<f64> = c
            .as_array()
            .ok_or_else(|| perr(format!("vertices_coords[{i}]: expected an array")))?
            .iter()
            .map(|x| x.as_f64().ok_or_else(|| perr(format!("vertices_coords[{i}]: non-numeric entry"))))
            .collect::<Result<_, _>>()?;
        match xs.as_slice() {
            [x, y] => vertices.push(P2::new(*x, *y)),
            [x, y, z] if *z == 0.0 => vertices.push(P2::new(*x, *y)),
            _ => return Err(perr(format!("vertices_coords[{i}]: expected [x, y]"))),
        }
    }

    let edges = array(&doc, "edges_vertices")?.ok_or_else(|| perr("missing edges_vertices"))?;
    let assignments = array(&doc, "edges_assignment")?;
    if let Some(a) = assignments {
        if a.len() != edges.len() {
            return Err(perr(format!("edges_assignment has {} entries for {} edges", a.len(), edges.len())));
        }
    }
    let mut creases = Vec::with_capacity(edges.len());
    for (i, e) in edges.iter().enumerate() {
        let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| perr(format!("edges_vertices[{i}]: expected [a, b]")))?;
        let a = index(&pair[0], "edges_vertices")?;
        let b = index(&pair[1], "edges_vertices")?;
        let assignment = match assignments {
            None => Assignment::Unassigned,
            Some(list) => {
                let code = list[i].as_str().ok_or_else(|| perr(format!("edges_assignment[{i}]: expected a string")))?;
                Assignment::from_fold_code(code)
                    .ok_or_else(|| perr(format!("edges_assignment[{i}]: unsupported label {code:?}")))?
            }
        };
        creases.push(Crease::new(a, b, assignment));
    }

    let fold_angles = match array(&doc, "edges_foldAngle")? {
        None => None,
        Some(list) => Some(
            list.iter()
                .enumerate()
                .map(|(i, x)| x.as_f64().ok_or_else(|| perr(format!("edges_foldAngle[{i}]: expected a number"))))
                .collect::<Result<Vec<f64>, _>>()?,
        ),
    };

    let faces = match array(&doc, "faces_vertices")? {
        None => None,
        Some(list) => Some(
            list.iter()
                .enumerate()
                .map(|(i, f)| {
                    f.as_array()
                        .ok_or_else(|| perr(format!("faces_vertices[{i}]: expected an array")))?
                        .iter()
                        .map(|v| index(v, "faces_vertices"))
                        .collect::<Result<Vec<usize>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };

    let extra: Map<String, Value> = doc.into_iter().filter(|(k, _)| !KNOWN.contains(&k.as_str())).collect();
    CreasePattern::assemble(vertices, creases, faces, fold_angles, extra)
}

pub fn save_fold(pattern: &CreasePattern) -> Vec<u8> {
    let mut fields: Vec<(String, Value)> = Vec::new();
    let coords = pattern.vertices().iter().map(|p| Value::from(vec![p.x, p.y])).collect();
    fields.push(("vertices_coords".into(), Value::Array(coords)));
    let edges = pattern.creases().iter().map(|c| Value::from(vec![c.vertices[0], c.vertices[1]])).collect();
    fields.push(("edges_vertices".into(), Value::Array(edges)));
    let asg = pattern.creases().iter().map(|c| Value::from(c.assignment.fold_code())).collect();
    fields.push(("edges_assignment".into(), Value::Array(asg)));
    if let Some(angles) = pattern.fold_angles_deg() {
        fields.push(("edges_foldAngle".into(), Value::from(angles.to_vec())));
    }
    let faces = pattern.faces().iter().map(|f| Value::from(f.clone())).collect();
    fields.push(("faces_vertices".into(), Value::Array(faces)));
    for (k, v) in pattern.extra() {
        fields.push((k.clone(), v.clone()));
    }

    // One key per line and one array element per line keeps diffs readable.
    let mut out = String::from("{\n");
    for (i, (k, v)) in fields.iter().enumerate() {
        out.push_str("  ");
        out.push_str(&Value::from(k.as_str()).to_string());
        out.push_str(": ");
        match v {
            Value::Array(items) if !items.is_empty() => {
                out.push_str("[\n");
                for (j, item) in items.iter().enumerate() {
                    out.push_str("    ");
                    out.push_str(&item.to_string());
                    out.push_str(if j + 1 < items.len() { ",\n" } else { "\n" });
                }
                out.push_str("  ]");
            }
            other => out.push_str(&other.to_string()),
        }
        out.push_str(if i + 1 < fields.len() { ",\n" } else { "\n" });
    }
    out.push_str("}\n");
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SINGLE: &str = r#"{
      "file_spec": 1.1,
      "vertices_coords": [[0,0],[1,0],[0,1],[-1,0],[0,-1],[1,1],[-1,1],[-1,-1],[1,-1]],
      "edges_vertices": [[0,1],[0,2],[0,3],[0,4],[1,5],[5,2],[2,6],[6,3],[3,7],[7,4],[4,8],[8,1]],
      "edges_assignment": ["V","V","V","M","B","B","B","B","B","B","B","B"],
      "edges_foldAngle": [90, 90, 90, -90, 0, 0, 0, 0, 0, 0, 0, 0],
      "frame_title": "plus"
    }"#;

    #[test]
    fn single_vertex_document() {
        let p = load_fold(SINGLE.as_bytes()).unwrap();
        assert_eq!(p.interior_vertices(), vec![0]);
        assert_eq!(p.faces().len(), 4);
        assert_eq!(p.extra().len(), 2);
        let rho = p.fold_angles().unwrap();
        assert!((rho[3] + std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn round_trip_is_identity() {
        let p = load_fold(SINGLE.as_bytes()).unwrap();
        let bytes = save_fold(&p);
        let q = load_fold(&bytes).unwrap();
        assert_eq!(p, q);
        assert_eq!(bytes, save_fold(&q));
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.find("file_spec").unwrap() > text.find("faces_vertices").unwrap());
    }

    #[test]
    fn crossing_document_rejected() {
        let doc = r#"{"vertices_coords": [[0,0],[1,1],[1,0],[0,1]], "edges_vertices": [[0,1],[2,3]]}"#;
        assert!(matches!(load_fold(doc.as_bytes()), Err(PatternError::NonPlanar(_, _))));
    }

    #[test]
    fn malformed_documents_rejected() {
        assert!(matches!(load_fold(b""), Err(PatternError::Parse(_))));
        assert!(matches!(load_fold(b"[]"), Err(PatternError::Parse(_))));
        assert!(matches!(load_fold(br#"{"vertices_coords": [[0,0]]}"#), Err(PatternError::Parse(_))));
        let bad_label = r#"{"vertices_coords": [[0,0],[1,0]], "edges_vertices": [[0,1]], "edges_assignment": ["F"]}"#;
        assert!(matches!(load_fold(bad_label.as_bytes()), Err(PatternError::Parse(_))));
    }

    #[test]
    fn wrong_face_list_rejected() {
        let doc = r#"{"vertices_coords": [[0,0],[1,0],[1,1],[0,1]],
            "edges_vertices": [[0,1],[1,2],[2,3],[3,0]],
            "edges_assignment": ["B","B","B","B"],
            "faces_vertices": [[0,3,2,1]]}"#;
        assert!(matches!(load_fold(doc.as_bytes()), Err(PatternError::FaceMismatch(_))));
    }
}
