//! Self maps of the tree: built-in families, table-backed maps, file IO.
//!
//! A `SelfMap` assigns an image vertex to every vertex of the ball of radius
//! `coverage_depth`. Evaluation past the coverage is an error, never an
//! extrapolation: operators downstream refuse to guess what a finite table
//! would have done on deeper levels.

mod automorphism;
mod counting;

pub use automorphism::PartialAutomorphism;
pub use counting::{
    counting_function, counting_function_seq, displacement_profile, CountingTable,
    DisplacementProfile, DisplacementStats,
};

use crate::error::{Error, Result};
use crate::tree::{TreeParams, Vertex};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::Arc;

/// Chooses which child a child map sends each vertex to.
#[derive(Clone)]
pub enum ChildSelector {
    /// Always the child with this index.
    Fixed(u32),
    /// Arbitrary per-vertex rule; the returned index is validated on use.
    Custom(Arc<dyn Fn(&Vertex) -> u32 + Send + Sync>),
}

impl fmt::Debug for ChildSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChildSelector::Fixed(k) => write!(f, "Fixed({k})"),
            ChildSelector::Custom(_) => f.write_str("Custom"),
        }
    }
}

#[derive(Clone, Debug)]
enum Rule {
    Identity,
    Parent,
    Child(ChildSelector),
    /// chosen[n] receives every vertex of level n.
    Collapse(Vec<Vertex>),
    /// chosen[2k] goes to chosen[k]; everything else goes to the root.
    Halving(Vec<Vertex>),
    Table(HashMap<Vertex, Vertex>),
}

/// A vertex-to-vertex map defined on the ball of radius `coverage_depth`.
#[derive(Clone, Debug)]
pub struct SelfMap {
    params: TreeParams,
    coverage_depth: usize,
    label: String,
    rule: Rule,
}

fn validate_chosen(params: &TreeParams, chosen: &[Vertex]) -> Result<()> {
    if chosen.is_empty() {
        return Err(Error::ChosenLevel {
            vertex: "(empty sequence)".to_string(),
            level: 0,
        });
    }
    for (n, v) in chosen.iter().enumerate() {
        params.validate_vertex(v)?;
        if v.depth() != n {
            return Err(Error::ChosenLevel {
                vertex: v.to_string(),
                level: n,
            });
        }
    }
    Ok(())
}

/// The lexicographically least vertex of each level 0..=depth.
pub fn default_chosen(params: &TreeParams, depth: usize) -> Result<Vec<Vertex>> {
    (0..=depth).map(|n| params.vertex_at(n, 0)).collect()
}

impl SelfMap {
    pub fn identity(params: TreeParams) -> Self {
        SelfMap {
            params,
            coverage_depth: params.depth_cap(),
            label: "identity".to_string(),
            rule: Rule::Identity,
        }
    }

    /// Sends every vertex to its parent and the root to itself.
    pub fn parent(params: TreeParams) -> Self {
        SelfMap {
            params,
            coverage_depth: params.depth_cap(),
            label: "parent".to_string(),
            rule: Rule::Parent,
        }
    }

    /// Sends every vertex to its child of the given index.
    pub fn child(params: TreeParams, index: u32) -> Result<Self> {
        if index >= params.q() {
            return Err(Error::ChildIndex {
                index,
                vertex: "(every non-root vertex)".to_string(),
                q: params.q(),
            });
        }
        Ok(SelfMap {
            params,
            coverage_depth: params.depth_cap().saturating_sub(1),
            label: format!("child:{index}"),
            rule: Rule::Child(ChildSelector::Fixed(index)),
        })
    }

    /// Child map with a per-vertex index rule.
    pub fn child_with<F>(params: TreeParams, selector: F) -> Self
    where
        F: Fn(&Vertex) -> u32 + Send + Sync + 'static,
    {
        SelfMap {
            params,
            coverage_depth: params.depth_cap().saturating_sub(1),
            label: "child:custom".to_string(),
            rule: Rule::Child(ChildSelector::Custom(Arc::new(selector))),
        }
    }

    /// Sends all of level n to chosen[n].
    pub fn collapse(params: TreeParams, chosen: Vec<Vertex>) -> Result<Self> {
        validate_chosen(&params, &chosen)?;
        Ok(SelfMap {
            params,
            coverage_depth: chosen.len() - 1,
            label: "collapse".to_string(),
            rule: Rule::Collapse(chosen),
        })
    }

    pub fn collapse_default(params: TreeParams, depth: usize) -> Result<Self> {
        SelfMap::collapse(params, default_chosen(&params, depth)?)
    }

    /// Sends chosen[2k] to chosen[k] for k >= 1 and every other vertex to
    /// the root.
    pub fn halving(params: TreeParams, chosen: Vec<Vertex>) -> Result<Self> {
        validate_chosen(&params, &chosen)?;
        Ok(SelfMap {
            params,
            coverage_depth: chosen.len() - 1,
            label: "halving".to_string(),
            rule: Rule::Halving(chosen),
        })
    }

    pub fn halving_default(params: TreeParams, depth: usize) -> Result<Self> {
        SelfMap::halving(params, default_chosen(&params, depth)?)
    }

    /// Explicit table over the full ball of radius `depth`.
    pub fn from_table(
        params: TreeParams,
        depth: usize,
        table: HashMap<Vertex, Vertex>,
    ) -> Result<Self> {
        for (v, w) in &table {
            params.validate_vertex(v)?;
            if v.depth() > depth {
                return Err(Error::EntryBeyondDepth {
                    vertex: v.to_string(),
                    depth,
                });
            }
            params.validate_vertex(w)?;
        }
        for v in params.ball_vertices(depth)? {
            if !table.contains_key(&v) {
                return Err(Error::MissingVertex {
                    vertex: v.to_string(),
                });
            }
        }
        Ok(SelfMap {
            params,
            coverage_depth: depth,
            label: "table".to_string(),
            rule: Rule::Table(table),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn params(&self) -> &TreeParams {
        &self.params
    }

    pub fn coverage_depth(&self) -> usize {
        self.coverage_depth
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, v: &Vertex) -> Result<Vertex> {
        if v.depth() > self.coverage_depth {
            return Err(Error::Coverage {
                vertex: v.to_string(),
                coverage: self.coverage_depth,
            });
        }
        self.params.validate_vertex(v)?;
        match &self.rule {
            Rule::Identity => Ok(v.clone()),
            Rule::Parent => Ok(v.parent().unwrap_or_else(Vertex::root)),
            Rule::Child(selector) => {
                let index = match selector {
                    ChildSelector::Fixed(k) => *k,
                    ChildSelector::Custom(f) => f(v),
                };
                self.params.child(v, index)
            }
            Rule::Collapse(chosen) => Ok(chosen[v.depth()].clone()),
            Rule::Halving(chosen) => {
                let n = v.depth();
                if n >= 2 && n % 2 == 0 && *v == chosen[n] {
                    Ok(chosen[n / 2].clone())
                } else {
                    Ok(Vertex::root())
                }
            }
            Rule::Table(table) => table.get(v).cloned().ok_or_else(|| Error::MissingVertex {
                vertex: v.to_string(),
            }),
        }
    }

    pub fn root_image(&self) -> Result<Vertex> {
        self.eval(&Vertex::root())
    }

    pub fn from_map_file(file: &MapFile, expected_q: Option<u32>) -> Result<Self> {
        if let Some(q) = expected_q {
            if file.q != q {
                return Err(Error::QMismatch {
                    file_q: file.q,
                    expected_q: q,
                });
            }
        }
        let params = TreeParams::new(file.q)?;
        let params = params.with_depth_cap(params.depth_cap().max(file.depth));
        let mut table = HashMap::with_capacity(file.entries.len());
        for entry in &file.entries {
            let v = params.parse_vertex(&entry.v)?;
            let w = params.parse_vertex(&entry.to)?;
            table.insert(v, w);
        }
        SelfMap::from_table(params, file.depth, table)
    }

    pub fn read_file(path: &Path, expected_q: Option<u32>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let file: MapFile = serde_json::from_str(&text)?;
        let label = path
            .file_stem()
            .map(|s| format!("file:{}", s.to_string_lossy()))
            .unwrap_or_else(|| "file".to_string());
        Ok(SelfMap::from_map_file(&file, expected_q)?.with_label(label))
    }

    /// Tabulate the map over the ball of radius `depth`.
    pub fn to_map_file(&self, depth: usize) -> Result<MapFile> {
        let mut entries = Vec::new();
        for v in self.params.ball_vertices(depth)? {
            let w = self.eval(&v)?;
            entries.push(MapEntry {
                v: v.to_string(),
                to: w.to_string(),
            });
        }
        Ok(MapFile {
            q: self.params.q(),
            depth,
            entries,
        })
    }

    pub fn write_file(&self, path: &Path, depth: usize) -> Result<()> {
        let file = self.to_map_file(depth)?;
        fs::write(path, serde_json::to_string_pretty(&file)?)?;
        Ok(())
    }
}

/// On-disk form: one entry per vertex of the ball of radius `depth`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapFile {
    pub q: u32,
    pub depth: usize,
    pub entries: Vec<MapEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapEntry {
    pub v: String,
    pub to: String,
}
