//! Configurations of labeled particles on a star graph.
//!
//! # Canonical encoding
//!
//! A state is keyed by the byte string
//!
//! ```text
//! center, (leaf_1, len_1, interior_1[0..len_1]), ..., (leaf_k, len_k, interior_k[0..len_k])
//! ```
//!
//! where `center` and `leaf_j` hold a particle label `1..=255` or `0` when
//! unoccupied, `len_j` is the number of interior particles on edge `j`, and
//! `interior_j[0]` is the particle nearest the central vertex. Vertex ids
//! in a [`ConfigComplex`](super::ConfigComplex) follow the lexicographic
//! order of these byte strings.
//!
//! The text form used in JSON exports writes the same fields as
//! `center|leaf:i0,i1|leaf:|...`, with `0` for an empty vertex; e.g. the
//! state with particle 2 at the center and particle 1 on leaf 3 of a
//! three-leaf star is `2|0:|0:|1:`.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

pub type Particle = u8;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct EdgeState {
    pub leaf: Option<Particle>,
    /// Index 0 is nearest the central vertex.
    pub interior: Vec<Particle>,
}

impl EdgeState {
    pub fn is_empty(&self) -> bool {
        self.leaf.is_none() && self.interior.is_empty()
    }

    /// Particles from the center outward.
    pub fn stack(&self) -> impl Iterator<Item = Particle> + '_ {
        self.interior.iter().copied().chain(self.leaf)
    }

    /// Puts `p` in the slot nearest the center: the leaf if the edge is
    /// empty, otherwise interior position 0.
    pub fn push_near_center(&mut self, p: Particle) {
        if self.is_empty() {
            self.leaf = Some(p);
        } else {
            self.interior.insert(0, p);
        }
    }

    /// Removes the particle nearest the center.
    pub fn pop_near_center(&mut self) -> Option<Particle> {
        if self.interior.is_empty() {
            self.leaf.take()
        } else {
            Some(self.interior.remove(0))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParticleState {
    pub center: Option<Particle>,
    pub edges: Vec<EdgeState>,
}

impl ParticleState {
    pub fn empty(k: usize) -> Self {
        ParticleState {
            center: None,
            edges: vec![EdgeState::default(); k],
        }
    }

    pub fn k(&self) -> usize {
        self.edges.len()
    }

    pub fn particle_count(&self) -> usize {
        self.center.is_some() as usize
            + self
                .edges
                .iter()
                .map(|e| e.leaf.is_some() as usize + e.interior.len())
                .sum::<usize>()
    }

    /// Every label `1..=n` exactly once, and no interior particle on an edge
    /// whose leaf is empty.
    pub fn is_valid(&self, n: usize) -> bool {
        let mut seen = vec![false; n + 1];
        let mut mark = |p: Particle| {
            let p = p as usize;
            if p == 0 || p > n || seen[p] {
                false
            } else {
                seen[p] = true;
                true
            }
        };
        if let Some(p) = self.center {
            if !mark(p) {
                return false;
            }
        }
        for e in &self.edges {
            if e.leaf.is_none() && !e.interior.is_empty() {
                return false;
            }
            if !e.stack().all(&mut mark) {
                return false;
            }
        }
        seen[1..].iter().all(|&s| s)
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(1 + 2 * self.k() + self.particle_count());
        self.encode_into(&mut out);
        out
    }

    pub fn encode_into(&self, out: &mut Vec<u8>) {
        out.push(self.center.unwrap_or(0));
        for e in &self.edges {
            out.push(e.leaf.unwrap_or(0));
            out.push(e.interior.len() as u8);
            out.extend_from_slice(&e.interior);
        }
    }

    pub fn decode(bytes: &[u8], k: usize) -> Result<Self, Error> {
        let bad = || Error::Malformed(format!("state key {bytes:?}"));
        let mut it = bytes.iter().copied();
        let nonzero = |b: u8| (b != 0).then_some(b);
        let center = nonzero(it.next().ok_or_else(bad)?);
        let mut edges = Vec::with_capacity(k);
        for _ in 0..k {
            let leaf = nonzero(it.next().ok_or_else(bad)?);
            let len = it.next().ok_or_else(bad)? as usize;
            let interior: Vec<u8> = it.by_ref().take(len).collect();
            if interior.len() != len {
                return Err(bad());
            }
            edges.push(EdgeState { leaf, interior });
        }
        if it.next().is_some() {
            return Err(bad());
        }
        Ok(ParticleState { center, edges })
    }

    /// Applies `sigma` to every label (`sigma[p - 1]` is the image of `p`).
    pub fn relabel(&self, sigma: &[Particle]) -> Self {
        let map = |p: Particle| sigma[p as usize - 1];
        ParticleState {
            center: self.center.map(map),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeState {
                    leaf: e.leaf.map(map),
                    interior: e.interior.iter().map(|&p| map(p)).collect(),
                })
                .collect(),
        }
    }

    /// Adds `label` on leaf `edge` (0-based), pushing the previous leaf
    /// occupant to the outermost interior slot.
    pub fn insert_at_leaf(&self, edge: usize, label: Particle) -> Self {
        let mut out = self.clone();
        let e = &mut out.edges[edge];
        if let Some(old) = e.leaf.replace(label) {
            e.interior.push(old);
        }
        out
    }
}

impl fmt::Display for ParticleState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.center.unwrap_or(0))?;
        for e in &self.edges {
            write!(f, "|{}:", e.leaf.unwrap_or(0))?;
            let interior: Vec<String> = e.interior.iter().map(|p| p.to_string()).collect();
            write!(f, "{}", interior.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for ParticleState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Malformed(format!("state text {s:?}"));
        let label = |t: &str| -> Result<Option<Particle>, Error> {
            let v: u8 = t.trim().parse().map_err(|_| bad())?;
            Ok((v != 0).then_some(v))
        };
        let mut parts = s.split('|');
        let center = label(parts.next().ok_or_else(bad)?)?;
        let mut edges = Vec::new();
        for part in parts {
            let (leaf, interior) = part.split_once(':').ok_or_else(bad)?;
            let interior = if interior.is_empty() {
                Vec::new()
            } else {
                interior
                    .split(',')
                    .map(|t| label(t)?.ok_or_else(bad))
                    .collect::<Result<_, _>>()?
            };
            edges.push(EdgeState {
                leaf: label(leaf)?,
                interior,
            });
        }
        Ok(ParticleState { center, edges })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ParticleState {
        ParticleState {
            center: Some(2),
            edges: vec![
                EdgeState {
                    leaf: Some(1),
                    interior: vec![4, 3],
                },
                EdgeState::default(),
                EdgeState {
                    leaf: Some(5),
                    interior: vec![],
                },
            ],
        }
    }

    #[test]
    fn byte_encoding_is_documented_layout() {
        assert_eq!(sample().encode(), vec![2, 1, 2, 4, 3, 0, 0, 5, 0]);
        assert_eq!(ParticleState::decode(&sample().encode(), 3).unwrap(), sample());
        assert!(ParticleState::decode(&[2, 1, 2, 4], 3).is_err());
    }

    #[test]
    fn text_form() {
        assert_eq!(sample().to_string(), "2|1:4,3|0:|5:");
        assert_eq!("2|1:4,3|0:|5:".parse::<ParticleState>().unwrap(), sample());
        assert!("2|1:x".parse::<ParticleState>().is_err());
    }

    #[test]
    fn validity() {
        assert!(sample().is_valid(5));
        assert!(!sample().is_valid(6));
        let mut caveat = sample();
        caveat.edges[1].interior.push(6);
        assert!(!caveat.is_valid(6));
    }

    #[test]
    fn leaf_insertion_pushes_occupant_inward() {
        let s = sample().insert_at_leaf(0, 6);
        assert_eq!(s.edges[0].leaf, Some(6));
        assert_eq!(s.edges[0].interior, vec![4, 3, 1]);
        let t = sample().insert_at_leaf(1, 6);
        assert_eq!(t.edges[1].leaf, Some(6));
        assert!(t.edges[1].interior.is_empty());
    }

    #[test]
    fn near_center_slot() {
        let mut e = EdgeState::default();
        e.push_near_center(3);
        assert_eq!(e.leaf, Some(3));
        e.push_near_center(4);
        assert_eq!(e.interior, vec![4]);
        assert_eq!(e.pop_near_center(), Some(4));
        assert_eq!(e.pop_near_center(), Some(3));
        assert!(e.is_empty());
    }
}
