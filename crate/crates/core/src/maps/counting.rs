//! Preimage counts N(n, w) and per-level displacement statistics.
//!
//! N(n, w) is the number of level-n vertices sent to w; the row over a fully
//! covered level always sums to the level size. Displacement is |v| - |phi(v)|,
//! positive when the map pulls toward the root.

use crate::error::{Error, Result};
use crate::exec::{self, Mode};
use crate::maps::SelfMap;
use crate::tree::{TreeParams, Vertex};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// Rows of preimage counts, one per level 0..=n_max.
#[derive(Clone, Debug)]
pub struct CountingTable {
    params: TreeParams,
    label: String,
    rows: Vec<BTreeMap<Vertex, u64>>,
}

pub fn counting_function(map: &SelfMap, n_max: usize) -> Result<CountingTable> {
    counting_mode(map, n_max, Mode::Auto)
}

pub fn counting_function_seq(map: &SelfMap, n_max: usize) -> Result<CountingTable> {
    counting_mode(map, n_max, Mode::Seq)
}

fn counting_mode(map: &SelfMap, n_max: usize, mode: Mode) -> Result<CountingTable> {
    if n_max > map.coverage_depth() {
        return Err(Error::CoverageDepth {
            requested: n_max,
            coverage: map.coverage_depth(),
        });
    }
    let mut rows = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let vertices = map.params().level_vertices(n)?;
        let row = exec::try_fold(
            &vertices,
            mode,
            BTreeMap::new,
            |acc: &mut BTreeMap<Vertex, u64>, v| {
                *acc.entry(map.eval(v)?).or_insert(0) += 1;
                Ok(())
            },
            |mut left, right| {
                for (w, c) in right {
                    *left.entry(w).or_insert(0) += c;
                }
                left
            },
        )?;
        rows.push(row);
    }
    Ok(CountingTable {
        params: *map.params(),
        label: map.label().to_string(),
        rows,
    })
}

impl CountingTable {
    pub fn params(&self) -> &TreeParams {
        &self.params
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, n: usize) -> Result<&BTreeMap<Vertex, u64>> {
        self.rows.get(n).ok_or_else(|| Error::BeyondDepth {
            vertex: format!("level {n}"),
            depth: self.n_max(),
        })
    }

    pub fn count(&self, n: usize, w: &Vertex) -> Result<u64> {
        Ok(self.row(n)?.get(w).copied().unwrap_or(0))
    }

    pub fn row_sum(&self, n: usize) -> Result<u128> {
        Ok(self.row(n)?.values().map(|&c| c as u128).sum())
    }

    /// Deepest image level across all scanned rows.
    pub fn image_radius(&self) -> usize {
        self.rows
            .iter()
            .flat_map(|row| row.keys().map(Vertex::depth))
            .max()
            .unwrap_or(0)
    }

    pub fn image_radius_at(&self, n: usize) -> Result<usize> {
        Ok(self
            .row(n)?
            .keys()
            .map(Vertex::depth)
            .max()
            .unwrap_or(0))
    }

    /// Every vertex hit by the map, across all scanned levels.
    pub fn image_vertices(&self) -> BTreeSet<Vertex> {
        self.rows
            .iter()
            .flat_map(|row| row.keys().cloned())
            .collect()
    }

    /// Largest count in a row together with its lexicographically first
    /// attaining vertex; None for an empty row (never happens for real maps).
    pub fn row_max(&self, n: usize) -> Result<Option<(Vertex, u64)>> {
        let row = self.row(n)?;
        let mut best: Option<(Vertex, u64)> = None;
        for (w, &c) in row {
            match &best {
                Some((_, bc)) if *bc >= c => {}
                _ => best = Some((w.clone(), c)),
            }
        }
        Ok(best)
    }
}

/// Per-level summary of |v| - |phi(v)|.
#[derive(Clone, Debug, Serialize)]
pub struct DisplacementStats {
    pub level: usize,
    pub min: i64,
    pub max: i64,
    pub mean: f64,
}

/// Displacement statistics per level plus tail minima: `tail_min[j]` is the
/// smallest displacement seen anywhere at level j or deeper. A tail that
/// stays bounded while depth grows is the refutation shape for compactness.
#[derive(Clone, Debug, Serialize)]
pub struct DisplacementProfile {
    pub per_level: Vec<DisplacementStats>,
    pub tail_min: Vec<i64>,
}

impl DisplacementProfile {
    pub fn from_table(table: &CountingTable) -> Result<DisplacementProfile> {
        let mut per_level = Vec::with_capacity(table.n_max() + 1);
        for n in 0..=table.n_max() {
            let row = table.row(n)?;
            let mut min = i64::MAX;
            let mut max = i64::MIN;
            let mut weighted_sum: i128 = 0;
            let mut total: u128 = 0;
            for (w, &c) in row {
                let d = n as i64 - w.depth() as i64;
                min = min.min(d);
                max = max.max(d);
                weighted_sum += d as i128 * c as i128;
                total += c as u128;
            }
            if total == 0 {
                min = 0;
                max = 0;
            }
            per_level.push(DisplacementStats {
                level: n,
                min,
                max,
                mean: weighted_sum as f64 / total.max(1) as f64,
            });
        }
        let mut tail_min = vec![0i64; per_level.len()];
        let mut running = i64::MAX;
        for j in (0..per_level.len()).rev() {
            running = running.min(per_level[j].min);
            tail_min[j] = running;
        }
        Ok(DisplacementProfile { per_level, tail_min })
    }
}

pub fn displacement_profile(map: &SelfMap, n_max: usize) -> Result<DisplacementProfile> {
    DisplacementProfile::from_table(&counting_function(map, n_max)?)
}
