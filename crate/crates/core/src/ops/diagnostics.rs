//! Finite-depth compactness evidence.
//!
//! Compactness of a composition operator is a statement about limits, so no
//! finite scan can prove or refute it. What a scan can do is grade the
//! truncated data against the known necessary and sufficient conditions:
//! preimage weights must decay, displacements must diverge, and a range that
//! stops growing certifies compactness outright. Every verdict here is
//! explicitly qualified by the scanned depth and never claims a limit.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{counting_function, CountingTable, DisplacementProfile, SelfMap};
use crate::space::{pth_root, weight, PExponent};
use crate::tree::Vertex;

/// Compares c1 * q^e1 with c2 * q^e2 in exact integer arithmetic. A cross
/// product that overflows u128 can only happen with q >= 2 and a huge
/// exponent gap, in which case the larger-exponent side wins outright.
fn scaled_cmp(c1: u64, e1: i64, c2: u64, e2: i64, q: u128) -> Ordering {
    if c1 == 0 || c2 == 0 {
        return (c1 != 0).cmp(&(c2 != 0));
    }
    if e1 < e2 {
        return scaled_cmp(c2, e2, c1, e1, q).reverse();
    }
    match q
        .checked_pow((e1 - e2) as u32)
        .and_then(|p| p.checked_mul(c1 as u128))
    {
        Some(scaled) => scaled.cmp(&(c2 as u128)),
        None => Ordering::Greater,
    }
}

/// Largest preimage weight observed at one radius: the maximum over vertices
/// w with |w| = radius and levels n of N(n, w) * q^(|w| - n). The value is
/// exactly count * q^exponent; witness and attained_level identify the first
/// maximizing pair in scan order. Radii nothing maps to hold zero.
#[derive(Clone, Debug, Serialize)]
pub struct DecayEntry {
    pub radius: usize,
    pub value: f64,
    pub count: u64,
    pub exponent: i64,
    pub witness: Option<Vertex>,
    pub attained_level: Option<usize>,
}

/// How the scanned data relates to one compactness criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HintStatus {
    /// The scanned data shows the shape the criterion demands.
    Consistent,
    /// The scanned data already contradicts the criterion.
    Violated,
    /// The scan is too shallow or the trend too mixed to grade.
    Inconclusive,
}

/// One graded criterion. The detail always names the scanned depth because
/// none of these verdicts extend to the full tree by themselves.
#[derive(Clone, Debug, Serialize)]
pub struct Hint {
    pub criterion: String,
    pub status: HintStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagnosticsReport {
    pub label: String,
    pub q: u32,
    pub n_max: usize,
    pub image_radius: usize,
    pub image_radius_per_level: Vec<usize>,
    pub decay: Vec<DecayEntry>,
    pub displacement: DisplacementProfile,
    pub hints: Vec<Hint>,
}

pub fn compactness_diagnostics(map: &SelfMap, n_max: usize) -> Result<DiagnosticsReport> {
    diagnostics_from_counts(&counting_function(map, n_max)?)
}

pub fn diagnostics_from_counts(table: &CountingTable) -> Result<DiagnosticsReport> {
    let params = *table.params();
    let q = params.q() as u128;
    let n_max = table.n_max();
    let image_radius = table.image_radius();
    let mut image_radius_per_level = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        image_radius_per_level.push(table.image_radius_at(n)?);
    }

    let mut best: BTreeMap<Vertex, (u64, i64, usize)> = BTreeMap::new();
    for n in 0..=n_max {
        for (w, &count) in table.row(n)? {
            if count == 0 {
                continue;
            }
            let exponent = w.depth() as i64 - n as i64;
            match best.get_mut(w) {
                None => {
                    best.insert(w.clone(), (count, exponent, n));
                }
                Some(held) => {
                    if scaled_cmp(count, exponent, held.0, held.1, q) == Ordering::Greater {
                        *held = (count, exponent, n);
                    }
                }
            }
        }
    }
    let mut decay: Vec<DecayEntry> = (0..=image_radius)
        .map(|radius| DecayEntry {
            radius,
            value: 0.0,
            count: 0,
            exponent: 0,
            witness: None,
            attained_level: None,
        })
        .collect();
    for (w, &(count, exponent, level)) in &best {
        let entry = &mut decay[w.depth()];
        if scaled_cmp(count, exponent, entry.count, entry.exponent, q) == Ordering::Greater {
            *entry = DecayEntry {
                radius: w.depth(),
                value: count as f64 * (params.q() as f64).powi(exponent as i32),
                count,
                exponent,
                witness: Some(w.clone()),
                attained_level: Some(level),
            };
        }
    }

    let displacement = DisplacementProfile::from_table(table)?;

    let mut hints = vec![
        grade_bounded_range(n_max, image_radius, &image_radius_per_level),
        grade_preimage_decay(n_max, &decay, q),
        grade_displacement(n_max, &displacement),
    ];
    if params.q() == 1 {
        hints.push(grade_line_range(n_max, image_radius, &image_radius_per_level));
    }

    Ok(DiagnosticsReport {
        label: table.label().to_string(),
        q: params.q(),
        n_max,
        image_radius,
        image_radius_per_level,
        decay,
        displacement,
        hints,
    })
}

fn half_radius(n_max: usize, per_level: &[usize]) -> usize {
    per_level[..=n_max / 2].iter().copied().max().unwrap_or(0)
}

/// A range that stopped growing certifies a bounded, finite-rank, hence
/// compact operator. Growth in the outer half proves nothing either way.
fn grade_bounded_range(n_max: usize, image_radius: usize, per_level: &[usize]) -> Hint {
    let criterion = "bounded-range".to_string();
    if n_max < 2 {
        return Hint {
            criterion,
            status: HintStatus::Inconclusive,
            detail: format!("scanned depth {n_max} is too shallow to judge range growth"),
        };
    }
    let half = half_radius(n_max, per_level);
    if half == image_radius {
        Hint {
            criterion,
            status: HintStatus::Consistent,
            detail: format!(
                "image radius {image_radius} unchanged after level {} (scanned depth {n_max}); a range that stays bounded makes the operator compact",
                n_max / 2
            ),
        }
    } else {
        Hint {
            criterion,
            status: HintStatus::Inconclusive,
            detail: format!(
                "image radius grew from {half} to {image_radius} in the outer half (scanned depth {n_max}); the range may or may not stay bounded"
            ),
        }
    }
}

/// Compactness forces the per-radius preimage weights to vanish as the
/// radius grows. A flat or growing positive tail contradicts that already
/// at finite depth.
fn grade_preimage_decay(n_max: usize, decay: &[DecayEntry], q: u128) -> Hint {
    let criterion = "preimage-decay".to_string();
    let positive: Vec<&DecayEntry> = decay.iter().filter(|d| d.radius >= 1).collect();
    if positive.is_empty() {
        return Hint {
            criterion,
            status: HintStatus::Consistent,
            detail: format!(
                "every vertex up to depth {n_max} maps to the root, so preimage weights vanish at all positive radii"
            ),
        };
    }
    if positive.len() < 2 {
        return Hint {
            criterion,
            status: HintStatus::Inconclusive,
            detail: format!(
                "only one positive radius is reached at scanned depth {n_max}; no trend to grade"
            ),
        };
    }
    let tail = &positive[positive.len().saturating_sub(3)..];
    let cmp = |a: &DecayEntry, b: &DecayEntry| scaled_cmp(a.count, a.exponent, b.count, b.exponent, q);
    let all_zero = tail.iter().all(|d| d.count == 0);
    if all_zero {
        return Hint {
            criterion,
            status: HintStatus::Consistent,
            detail: format!(
                "preimage weights are zero at the deepest scanned radii (scanned depth {n_max})"
            ),
        };
    }
    let nondecreasing = tail
        .windows(2)
        .all(|pair| cmp(pair[1], pair[0]) != Ordering::Less);
    let last_positive = tail.last().map(|d| d.count > 0).unwrap_or(false);
    if nondecreasing && last_positive {
        let first = tail.first().unwrap();
        let last = tail.last().unwrap();
        return Hint {
            criterion,
            status: HintStatus::Violated,
            detail: format!(
                "preimage weights do not decay: radius {} holds {} and radius {} holds {} (scanned depth {n_max})",
                first.radius, first.value, last.radius, last.value
            ),
        };
    }
    let nonincreasing = tail
        .windows(2)
        .all(|pair| cmp(pair[1], pair[0]) != Ordering::Greater);
    let strict_drop = cmp(tail.first().unwrap(), tail.last().unwrap()) == Ordering::Greater;
    if nonincreasing && strict_drop {
        let first = tail.first().unwrap();
        let last = tail.last().unwrap();
        return Hint {
            criterion,
            status: HintStatus::Consistent,
            detail: format!(
                "preimage weights fall from {} at radius {} to {} at radius {} (scanned depth {n_max})",
                first.value, first.radius, last.value, last.radius
            ),
        };
    }
    Hint {
        criterion,
        status: HintStatus::Inconclusive,
        detail: format!(
            "preimage weights show no monotone trend at the deepest radii (scanned depth {n_max})"
        ),
    }
}

/// Compactness forces |v| - |phi(v)| to diverge. The tail minimum is
/// monotone in the level, so a flat outer half is a finite-depth
/// contradiction while near-linear growth matches the criterion.
fn grade_displacement(n_max: usize, profile: &DisplacementProfile) -> Hint {
    let criterion = "displacement-divergence".to_string();
    if n_max < 4 {
        return Hint {
            criterion,
            status: HintStatus::Inconclusive,
            detail: format!("scanned depth {n_max} is too shallow to judge displacement growth"),
        };
    }
    let a = n_max / 2;
    let b = n_max;
    let at_half = profile.tail_min[a];
    let at_end = profile.tail_min[b];
    let delta = at_end - at_half;
    if delta == 0 {
        Hint {
            criterion,
            status: HintStatus::Violated,
            detail: format!(
                "the worst displacement stays at {at_half} from level {a} through {b} (scanned depth {n_max}); it must diverge for a compact operator"
            ),
        }
    } else if delta >= ((b - a) / 2) as i64 {
        Hint {
            criterion,
            status: HintStatus::Consistent,
            detail: format!(
                "the worst displacement rises from {at_half} at level {a} to {at_end} at level {b} (scanned depth {n_max})"
            ),
        }
    } else {
        Hint {
            criterion,
            status: HintStatus::Inconclusive,
            detail: format!(
                "the worst displacement rises only from {at_half} to {at_end} between levels {a} and {b} (scanned depth {n_max})"
            ),
        }
    }
}

/// With branching number one every level has the same size, so preimage
/// weights cannot decay at radii the map keeps hitting: compactness is
/// equivalent to a range that stops growing.
fn grade_line_range(n_max: usize, image_radius: usize, per_level: &[usize]) -> Hint {
    let criterion = "q1-boundedness".to_string();
    if n_max < 2 {
        return Hint {
            criterion,
            status: HintStatus::Inconclusive,
            detail: format!("scanned depth {n_max} is too shallow to judge the range"),
        };
    }
    let half = half_radius(n_max, per_level);
    if half == image_radius {
        Hint {
            criterion,
            status: HintStatus::Consistent,
            detail: format!(
                "image radius {image_radius} unchanged after level {} (scanned depth {n_max}); on the doubled line a bounded range is exactly compactness",
                n_max / 2
            ),
        }
    } else {
        Hint {
            criterion,
            status: HintStatus::Violated,
            detail: format!(
                "image radius still grew from {half} to {image_radius} in the outer half (scanned depth {n_max}); on the doubled line every hit radius carries weight at least one"
            ),
        }
    }
}

/// Which sequence of extremal atoms to push toward the boundary.
#[derive(Clone, Debug)]
pub enum TrialFamily {
    /// The leftmost branch, one atom per depth 1..=n_max/2. Stopping at
    /// half depth keeps every atom's preimages observable within the scan
    /// even for maps that halve their displacement.
    LexBranch,
    /// The lexicographically first image vertex at each positive radius the
    /// map actually reaches.
    InRange,
    /// Caller-supplied atoms; depths must strictly increase.
    Custom(Vec<Vertex>),
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeEntry {
    pub index: usize,
    pub vertex: Vertex,
    pub norm_pth_power: f64,
    pub norm: f64,
}

/// Norms of C f_w along a sequence of atoms marching to the boundary. The
/// atoms are unit vectors tending to zero pointwise, so for a compact
/// operator the norms must tend to zero; a probe that stays flat is the
/// standard refutation shape.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub p: PExponent,
    pub family: String,
    pub entries: Vec<ProbeEntry>,
    pub vanished_at_boundary: bool,
}

pub fn sequential_probe(
    map: &SelfMap,
    p: PExponent,
    n_max: usize,
    family: TrialFamily,
) -> Result<ProbeReport> {
    let table = counting_function(map, n_max)?;
    let params = *table.params();
    let (family_name, trials) = match family {
        TrialFamily::LexBranch => {
            let mut trials = Vec::with_capacity(n_max / 2);
            for k in 1..=n_max / 2 {
                trials.push(params.vertex_at(k, 0)?);
            }
            ("lex-branch", trials)
        }
        TrialFamily::InRange => {
            let mut trials = Vec::new();
            let mut last_depth = 0usize;
            for w in table.image_vertices() {
                let d = w.depth();
                if d >= 1 && (trials.is_empty() || d > last_depth) {
                    trials.push(w);
                    last_depth = d;
                }
            }
            ("in-range", trials)
        }
        TrialFamily::Custom(trials) => {
            if trials.is_empty() {
                return Err(Error::BadTrialSequence {
                    reason: "the trial sequence is empty".to_string(),
                });
            }
            for pair in trials.windows(2) {
                if pair[1].depth() <= pair[0].depth() {
                    return Err(Error::BadTrialSequence {
                        reason: format!(
                            "atom depths must strictly increase, got {} after {}",
                            pair[1], pair[0]
                        ),
                    });
                }
            }
            for w in &trials {
                params.validate_vertex(w)?;
            }
            ("custom", trials)
        }
    };
    let image = table.image_vertices();
    let mut entries = Vec::with_capacity(trials.len());
    for (index, w) in trials.into_iter().enumerate() {
        let (norm_pth_power, norm) = if p.is_finite() {
            let pv = p.finite_value()?;
            let mut found: Option<(u64, u128)> = None;
            for n in 0..=n_max {
                let count = table.count(n, &w)?;
                if count == 0 {
                    continue;
                }
                let den = params.level_size(n)?;
                let better = match &found {
                    None => true,
                    Some((held_count, held_den)) => {
                        match (
                            (count as u128).checked_mul(*held_den),
                            (*held_count as u128).checked_mul(den),
                        ) {
                            (Some(left), Some(right)) => left > right,
                            _ => {
                                count as f64 / den as f64
                                    > *held_count as f64 / *held_den as f64
                            }
                        }
                    }
                };
                if better {
                    found = Some((count, den));
                }
            }
            let power = match found {
                Some((count, den)) => weight(&params, &w)? as f64 * count as f64 / den as f64,
                None => 0.0,
            };
            (power, pth_root(power, pv))
        } else {
            let norm = if image.contains(&w) { 1.0 } else { 0.0 };
            (norm, norm)
        };
        entries.push(ProbeEntry {
            index,
            vertex: w,
            norm_pth_power,
            norm,
        });
    }
    let vanished_at_boundary = entries.last().map(|e| e.norm == 0.0).unwrap_or(false);
    Ok(ProbeReport {
        p,
        family: family_name.to_string(),
        entries,
        vanished_at_boundary,
    })
}
