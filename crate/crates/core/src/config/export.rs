use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::ConfigComplex;
use crate::error::{Error, Result};

/// Largest complex written as DOT.
pub const DOT_VERTEX_LIMIT: usize = 500;

/// `{"n", "k", "vertices": [state text], "edges": [[src, dst, particle, edge]]}`.
///
/// `src` is the state with the particle on the edge, `dst` the state with
/// it on the central vertex; `edge` is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub n: usize,
    pub k: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<[u32; 4]>,
}

impl ConfigComplex {
    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            n: self.n(),
            k: self.k(),
            vertices: self.states().map(|s| s.to_string()).collect(),
            edges: self
                .edges()
                .iter()
                .map(|m| [m.source, m.target, m.particle as u32, m.edge as u32])
                .collect(),
        }
    }

    pub fn to_dot(&self) -> Result<String> {
        if self.vertex_count() > DOT_VERTEX_LIMIT {
            return Err(Error::ResourceLimit {
                projected: self.vertex_count() as u128,
                cap: DOT_VERTEX_LIMIT as u128,
            });
        }
        let mut out = String::new();
        writeln!(out, "graph K_{}_{} {{", self.n(), self.k()).unwrap();
        for (v, s) in self.states().enumerate() {
            writeln!(out, "  v{v} [label=\"{s}\"];").unwrap();
        }
        for m in self.edges() {
            writeln!(out, "  v{} -- v{} [label=\"{}@{}\"];", m.source, m.target, m.particle, m.edge).unwrap();
        }
        out.push_str("}\n");
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ParticleState;

    #[test]
    fn json_lists_states_in_id_order() {
        let c = ConfigComplex::build(1, 3).unwrap();
        let j = c.to_json();
        assert_eq!(j.vertices, vec!["0|0:|0:|1:", "0|0:|1:|0:", "0|1:|0:|0:", "1|0:|0:|0:"]);
        assert_eq!(j.edges, vec![[2, 3, 1, 1], [1, 3, 1, 2], [0, 3, 1, 3]]);
        for (v, text) in j.vertices.iter().enumerate() {
            let s: ParticleState = text.parse().unwrap();
            assert_eq!(c.vertex_id(&s), Some(v as u32));
        }
    }

    #[test]
    fn dot_export_is_capped() {
        let c = ConfigComplex::build(2, 3).unwrap();
        let dot = c.to_dot().unwrap();
        assert_eq!(dot.matches(" -- ").count(), 18);
        let big = ConfigComplex::build(4, 3).unwrap();
        assert!(big.to_dot().is_err());
    }
}
