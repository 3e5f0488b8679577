use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{End, HalfEdge, Sign, SignedGraph};

/// A direction `±1` on every half-edge: `+1` points away from the vertex,
/// `-1` towards it.
///
/// The two half-edges of an edge `e` always satisfy
/// `dir(h1) * dir(h2) = -sign(e)`, so an orientation determines the signature
/// it belongs to (see [`Orientation::signature`]).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Orientation {
    dirs: Vec<[i8; 2]>,
}

impl Orientation {
    /// The reference orientation: a positive edge points from its first to
    /// its second endpoint, a negative edge has both half-edges pointing out.
    pub fn canonical(g: &SignedGraph) -> Self {
        let dirs = g
            .edges()
            .iter()
            .map(|e| match e.sign {
                Sign::Positive => [1, -1],
                Sign::Negative => [1, 1],
            })
            .collect();
        Orientation { dirs }
    }

    /// The canonical orientation with the listed edges reversed.
    pub fn from_flips(g: &SignedGraph, flips: &[usize]) -> Result<Self> {
        let mut o = Self::canonical(g);
        for &e in flips {
            if e >= g.num_edges() {
                return Err(Error::UnknownEdge(e));
            }
            o.reverse_edge(e);
        }
        Ok(o)
    }

    /// Builds an orientation from raw half-edge directions.
    pub fn from_directions(dirs: Vec<[i8; 2]>) -> Result<Self> {
        if dirs.iter().flatten().any(|&d| d != 1 && d != -1) {
            return Err(Error::InvalidParameter("half-edge directions must be ±1".into()));
        }
        Ok(Orientation { dirs })
    }

    pub fn num_edges(&self) -> usize {
        self.dirs.len()
    }

    pub fn dir(&self, h: HalfEdge) -> i64 {
        self.dirs[h.edge][h.end.index()] as i64
    }

    pub fn dirs(&self, e: usize) -> [i8; 2] {
        self.dirs[e]
    }

    /// Signature induced by the orientation.
    pub fn sign(&self, e: usize) -> Sign {
        let [a, b] = self.dirs[e];
        Sign::from_value(-(a as i64) * (b as i64))
    }

    pub fn signature(&self) -> Vec<Sign> {
        (0..self.dirs.len()).map(|e| self.sign(e)).collect()
    }

    /// First edge whose directions contradict the signature of `g`.
    pub fn first_inconsistency(&self, g: &SignedGraph) -> Option<usize> {
        if self.dirs.len() != g.num_edges() {
            return Some(self.dirs.len().min(g.num_edges()));
        }
        (0..g.num_edges()).find(|&e| self.sign(e) != g.sign(e))
    }

    pub fn is_consistent_with(&self, g: &SignedGraph) -> bool {
        self.first_inconsistency(g).is_none()
    }

    /// Reverses both half-edges of `e`.
    pub fn reverse_edge(&mut self, e: usize) {
        let d = &mut self.dirs[e];
        d[0] = -d[0];
        d[1] = -d[1];
    }

    /// Whether `e` is reversed relative to `other` (both must induce the same
    /// sign on `e`).
    pub fn is_reversed_from(&self, other: &Orientation, e: usize) -> bool {
        self.dirs[e][0] != other.dirs[e][0]
    }

    /// Edges reversed relative to the canonical orientation of `g`. Fails if
    /// the orientation does not belong to the signature of `g`.
    pub fn flips(&self, g: &SignedGraph) -> Result<Vec<usize>> {
        if let Some(e) = self.first_inconsistency(g) {
            return Err(Error::InvalidWitness(format!(
                "orientation inconsistent with the signature at edge {e}"
            )));
        }
        let canon = Self::canonical(g);
        Ok((0..g.num_edges()).filter(|&e| self.is_reversed_from(&canon, e)).collect())
    }

    /// Flips every half-edge incident with a vertex of `set` (both halves of
    /// a loop). The result orients `g.switch(set)`.
    pub fn switch(&self, g: &SignedGraph, set: &[usize]) -> Result<Orientation> {
        let mask = g.vertex_mask(set)?;
        let mut out = self.clone();
        out.switch_in_place(g, &mask);
        Ok(out)
    }

    pub(crate) fn switch_vertex(&mut self, g: &SignedGraph, v: usize) {
        for h in g.half_edges_at(v) {
            let d = &mut self.dirs[h.edge][h.end.index()];
            *d = -*d;
        }
    }

    pub(crate) fn switch_in_place(&mut self, g: &SignedGraph, mask: &[bool]) {
        for (id, e) in g.edges().iter().enumerate() {
            for end in End::BOTH {
                if mask[e.end(end)] {
                    let d = &mut self.dirs[id][end.index()];
                    *d = -*d;
                }
            }
        }
    }
}

/// Free-function form of [`Orientation::switch`].
pub fn switch_orientation(g: &SignedGraph, o: &Orientation, set: &[usize]) -> Result<Orientation> {
    o.switch(g, set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_is_consistent() {
        let g = SignedGraph::parse("p 2 3 / e 1 2 + / e 1 2 - / e 2 2 -").unwrap();
        let o = Orientation::canonical(&g);
        assert!(o.is_consistent_with(&g));
        assert_eq!(o.flips(&g).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn switching_single_positive_edge() {
        let g = SignedGraph::parse("p 2 1 / e 1 2 +").unwrap();
        let o = Orientation::canonical(&g);
        let s = o.switch(&g, &[0]).unwrap();
        let gs = g.switch(&[0]).unwrap();
        assert_eq!(gs.sign(0), Sign::Negative);
        assert!(s.is_consistent_with(&gs));
        assert_eq!(s.dirs(0), [-1, -1]);
        assert_eq!(o.switch(&g, &[]).unwrap(), o);
    }

    #[test]
    fn loop_switch_flips_both_halves() {
        let g = SignedGraph::parse("p 1 1 / e 1 1 -").unwrap();
        let o = Orientation::canonical(&g).switch(&g, &[0]).unwrap();
        assert_eq!(o.dirs(0), [-1, -1]);
        assert_eq!(o.sign(0), Sign::Negative);
    }

    #[test]
    fn flips_round_trip() {
        let g = SignedGraph::parse("p 3 3 / e 1 2 + / e 2 3 - / e 3 1 +").unwrap();
        let o = Orientation::from_flips(&g, &[0, 1]).unwrap();
        assert_eq!(o.flips(&g).unwrap(), vec![0, 1]);
        assert!(Orientation::from_flips(&g, &[3]).is_err());
    }
}
