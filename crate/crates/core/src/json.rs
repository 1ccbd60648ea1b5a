//! The JSON exchange formats for polytopes and nef-partitions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticePolytope;
use crate::nef::NefPartitionData;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeJson {
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NefJson {
    pub delta: PolytopeJson,
    pub parts: Vec<Vec<usize>>,
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

impl PolytopeJson {
    pub fn from_polytope(p: &LatticePolytope) -> Self {
        PolytopeJson {
            dim: p.ambient_dim(),
            vertices: p.vertices().to_vec(),
        }
    }

    pub fn to_polytope(&self) -> Result<LatticePolytope> {
        if let Some(v) = self.vertices.iter().find(|v| v.len() != self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        LatticePolytope::convex_hull(&self.vertices, self.dim)
    }
}

impl NefJson {
    pub fn from_data(data: &NefPartitionData) -> Self {
        NefJson {
            delta: PolytopeJson::from_polytope(data.delta()),
            parts: data.parts().to_vec(),
        }
    }

    pub fn to_data(&self) -> Result<NefPartitionData> {
        NefPartitionData::new(self.delta.to_polytope()?, self.parts.clone())
    }
}

pub fn parse_polytope(text: &str) -> Result<LatticePolytope> {
    serde_json::from_str::<PolytopeJson>(text)?.to_polytope()
}

pub fn parse_nef(text: &str) -> Result<NefPartitionData> {
    serde_json::from_str::<NefJson>(text)?.to_data()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = r#"{"dim": 2, "vertices": [[2,-1],[-1,2],[-1,-1]]}"#;
        let p = parse_polytope(text).unwrap();
        let back = serde_json::to_string(&PolytopeJson::from_polytope(&p)).unwrap();
        assert_eq!(parse_polytope(&back).unwrap(), p);
    }

    #[test]
    fn reports_position() {
        let err = parse_polytope("{\n  \"dim\": 2,\n  \"vertices\": [[1,0],\n}").unwrap_err();
        assert!(matches!(err, Error::Json { line: 4, .. }), "{err}");
    }

    #[test]
    fn rejects_ragged_vertices() {
        let err = parse_polytope(r#"{"dim": 2, "vertices": [[1,0],[0]]}"#).unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch {
                expected: 2,
                got: 1
            }
        ));
    }
}
