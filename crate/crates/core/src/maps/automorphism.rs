//! Partial automorphisms: adjacency-preserving bijections on a finite ball.
//!
//! The shift construction extends the single assignment root -> u breadth
//! first: once v is mapped to w, the children of v are matched to the still
//! unused neighbours of w, parent side first and then children in
//! lexicographic order. In a tree each unused neighbour can be claimed by at
//! most one frontier vertex (two claimants would close a cycle), so the
//! extension is forced to be injective and edge-preserving; shuffling the
//! free list instead of taking it in order yields random automorphisms with
//! the same level statistics.

use crate::error::{Error, Result};
use crate::maps::SelfMap;
use crate::tree::{TreeParams, Vertex};
use rand::seq::SliceRandom;
use rand::RngCore;
use std::collections::HashMap;

/// An injective, adjacency-preserving map on the ball of radius
/// `coverage_depth`, carrying its inverse table.
#[derive(Clone, Debug)]
pub struct PartialAutomorphism {
    map: SelfMap,
    inverse: HashMap<Vertex, Vertex>,
    root_image: Vertex,
}

impl PartialAutomorphism {
    /// Deterministic extension of root -> u over the ball of radius `depth`.
    pub fn shift(params: TreeParams, u: &Vertex, depth: usize) -> Result<Self> {
        build_shift(params, u, depth, None)
    }

    /// Same extension, but the free neighbour lists are shuffled; with
    /// u = o this samples random root-fixing automorphisms.
    pub fn shift_shuffled<R: RngCore>(
        params: TreeParams,
        u: &Vertex,
        depth: usize,
        rng: &mut R,
    ) -> Result<Self> {
        build_shift(params, u, depth, Some(rng))
    }

    /// Wrap an explicit table after checking injectivity and adjacency
    /// preservation in both directions.
    pub fn from_table(
        params: TreeParams,
        depth: usize,
        table: HashMap<Vertex, Vertex>,
    ) -> Result<Self> {
        let map = SelfMap::from_table(params, depth, table)?.with_label("automorphism");
        let mut inverse = HashMap::new();
        for v in params.ball_vertices(depth)? {
            let w = map.eval(&v)?;
            if let Some(prior) = inverse.insert(w.clone(), v.clone()) {
                return Err(Error::NotAutomorphism {
                    reason: format!("not injective: {prior} and {v} share the image {w}"),
                });
            }
        }
        let root_image = map.eval(&Vertex::root())?;
        let aut = PartialAutomorphism {
            map,
            inverse,
            root_image,
        };
        aut.verify()?;
        Ok(aut)
    }

    pub fn as_map(&self) -> &SelfMap {
        &self.map
    }

    pub fn into_map(self) -> SelfMap {
        self.map
    }

    pub fn params(&self) -> &TreeParams {
        self.map.params()
    }

    pub fn coverage_depth(&self) -> usize {
        self.map.coverage_depth()
    }

    pub fn root_image(&self) -> &Vertex {
        &self.root_image
    }

    pub fn eval(&self, v: &Vertex) -> Result<Vertex> {
        self.map.eval(v)
    }

    pub fn inverse_eval(&self, w: &Vertex) -> Option<&Vertex> {
        self.inverse.get(w)
    }

    /// Exhaustively re-check both invariants on the covered ball.
    pub fn verify(&self) -> Result<()> {
        let params = *self.map.params();
        let depth = self.map.coverage_depth();
        for v in params.ball_vertices(depth)? {
            let w = self.map.eval(&v)?;
            if let Some(pv) = v.parent() {
                let pw = self.map.eval(&pv)?;
                if !w.adjacent(&pw) {
                    return Err(Error::NotAutomorphism {
                        reason: format!("edge {pv} ~ {v} maps to non-adjacent {pw}, {w}"),
                    });
                }
            }
            match self.inverse.get(&w) {
                Some(back) if *back == v => {}
                _ => {
                    return Err(Error::NotAutomorphism {
                        reason: format!("inverse does not round-trip at {v} -> {w}"),
                    });
                }
            }
        }
        for (x, v) in &self.inverse {
            if let Some(px) = x.parent() {
                if let Some(pv) = self.inverse.get(&px) {
                    if !v.adjacent(pv) {
                        return Err(Error::NotAutomorphism {
                            reason: format!(
                                "image edge {px} ~ {x} pulls back to non-adjacent {pv}, {v}"
                            ),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

fn build_shift(
    params: TreeParams,
    u: &Vertex,
    depth: usize,
    mut rng: Option<&mut dyn RngCore>,
) -> Result<PartialAutomorphism> {
    params.validate_vertex(u)?;
    let reach = u.depth() + depth;
    if reach > params.depth_cap() {
        return Err(Error::DepthCap {
            n: reach,
            cap: params.depth_cap(),
        });
    }
    let mut forward: HashMap<Vertex, Vertex> = HashMap::new();
    let mut inverse: HashMap<Vertex, Vertex> = HashMap::new();
    forward.insert(Vertex::root(), u.clone());
    inverse.insert(u.clone(), Vertex::root());
    for m in 0..depth {
        for v in params.level_vertices(m)? {
            let w = forward
                .get(&v)
                .cloned()
                .expect("breadth-first order assigns every processed level");
            let mut free: Vec<Vertex> = Vec::new();
            if let Some(pw) = w.parent() {
                if !inverse.contains_key(&pw) {
                    free.push(pw);
                }
            }
            for cw in params.children(&w) {
                if !inverse.contains_key(&cw) {
                    free.push(cw);
                }
            }
            if let Some(r) = rng.as_deref_mut() {
                free.shuffle(r);
            }
            let kids = params.children(&v);
            if kids.len() != free.len() {
                return Err(Error::NotAutomorphism {
                    reason: format!(
                        "{w} offers {} free neighbours for the {} children of {v}",
                        free.len(),
                        kids.len()
                    ),
                });
            }
            for (c, x) in kids.into_iter().zip(free) {
                forward.insert(c.clone(), x.clone());
                inverse.insert(x, c);
            }
        }
    }
    let label = if rng.is_some() {
        format!("shift:{u}:shuffled")
    } else {
        format!("shift:{u}")
    };
    let map = SelfMap::from_table(params, depth, forward)?.with_label(label);
    let aut = PartialAutomorphism {
        map,
        inverse,
        root_image: u.clone(),
    };
    aut.verify()?;
    Ok(aut)
}
