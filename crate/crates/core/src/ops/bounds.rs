//! Certified norm bounds computed from counting tables.
//!
//! Everything here is an exact statement about the truncated data. The lower
//! bound feeds single extremal atoms through the counting table; the oracle
//! solves the per-level budget problem exactly and produces a witness
//! function attaining its value; the sufficiency series gives an upper
//! estimate that is safe but not tight for every map. Ratios are compared in
//! exact integer arithmetic (with a float fallback only when a cross product
//! overflows u128), so argmax selections do not depend on rounding.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{counting_function, counting_function_seq, CountingTable, PartialAutomorphism, SelfMap};
use crate::space::{extremal_stack, pth_root, weight, PExponent, TreeFunction};
use crate::tree::Vertex;

/// Nonnegative rational with a float shadow used only if u128 cross products
/// overflow. Comparisons are exact whenever the integers fit.
#[derive(Clone, Copy)]
struct Frac {
    num: Option<u128>,
    den: u128,
    approx: f64,
}

impl Frac {
    fn from_u128(num: u128, den: u128) -> Self {
        Frac {
            num: Some(num),
            den,
            approx: num as f64 / den as f64,
        }
    }

    fn from_product(a: u128, b: u128, den: u128) -> Self {
        Frac {
            num: a.checked_mul(b),
            den,
            approx: a as f64 * b as f64 / den as f64,
        }
    }

    fn gt(&self, other: &Frac) -> bool {
        if let (Some(a), Some(b)) = (self.num, other.num) {
            if let (Some(left), Some(right)) = (a.checked_mul(other.den), b.checked_mul(self.den))
            {
                return left > right;
            }
        }
        self.approx > other.approx
    }
}

/// Best value of ||C f_w||_p over single extremal atoms, read off the
/// counting table: the candidate for the pair (n, w) is W(w) N(n, w) / |D_n|.
#[derive(Clone, Debug, Serialize)]
pub struct LowerBound {
    pub p: PExponent,
    pub value: f64,
    pub value_pth_power: f64,
    /// Atom location w of the best candidate. When no candidate exists
    /// within the radius cap the bound is zero and this holds the root.
    pub witness_vertex: Vertex,
    /// Level n at which the best candidate is attained.
    pub witness_level: usize,
    /// Best candidate per atom radius |w|; zero where nothing is hit.
    pub per_radius_pth_power: Vec<f64>,
}

impl LowerBound {
    /// True when the last three per-radius values strictly increase:
    /// deeper atoms keep certifying larger norms, so the truncation has
    /// not stabilized and the map looks unbounded so far.
    pub fn growing_at_boundary(&self) -> bool {
        let s = &self.per_radius_pth_power;
        s.len() >= 3 && s[s.len() - 2] > s[s.len() - 3] && s[s.len() - 1] > s[s.len() - 2]
    }
}

pub fn lower_bound_fw(
    map: &SelfMap,
    p: PExponent,
    n_max: usize,
    radius_cap: Option<usize>,
) -> Result<LowerBound> {
    lower_bound_from_counts(&counting_function(map, n_max)?, p, radius_cap)
}

pub fn lower_bound_from_counts(
    table: &CountingTable,
    p: PExponent,
    radius_cap: Option<usize>,
) -> Result<LowerBound> {
    let pv = p.finite_value()?;
    let params = *table.params();
    let radius_hi = radius_cap
        .unwrap_or_else(|| table.image_radius())
        .min(table.image_radius());
    let mut per_radius: Vec<Frac> = vec![Frac::from_u128(0, 1); radius_hi + 1];
    let mut best: Option<(Frac, Vertex, usize)> = None;
    for n in 0..=table.n_max() {
        let den = params.level_size(n)?;
        for (w, &count) in table.row(n)? {
            let m = w.depth();
            if m > radius_hi {
                break;
            }
            if count == 0 {
                continue;
            }
            let cand = Frac::from_product(weight(&params, w)?, count as u128, den);
            if cand.gt(&per_radius[m]) {
                per_radius[m] = cand;
            }
            let better = match &best {
                None => true,
                Some((b, _, _)) => cand.gt(b),
            };
            if better {
                best = Some((cand, w.clone(), n));
            }
        }
    }
    let (value_pth_power, witness_vertex, witness_level) = match best {
        Some((frac, w, n)) => (frac.approx, w, n),
        None => (0.0, Vertex::root(), 0),
    };
    Ok(LowerBound {
        p,
        value: pth_root(value_pth_power, pv),
        value_pth_power,
        witness_vertex,
        witness_level,
        per_radius_pth_power: per_radius.iter().map(|f| f.approx).collect(),
    })
}

/// One term of the sufficiency series: numerator = sum over |v| = n of
/// q^|phi(v)|, value = numerator / q^n.
#[derive(Clone, Debug, Serialize)]
pub struct SufficiencyEntry {
    pub level: usize,
    pub numerator: u128,
    pub value: f64,
}

/// The series S(n) together with the upper estimate
/// max(W(phi(o)), sup_{1 <= n <= n_max} S(n)) for the p-th power of the
/// operator norm. The estimate is valid for every branching number but is
/// only an upper bound: it can exceed the true norm by an unbounded margin.
#[derive(Clone, Debug, Serialize)]
pub struct SufficiencySeries {
    pub q: u32,
    pub entries: Vec<SufficiencyEntry>,
    /// Largest S(n) over levels n >= 1 (zero when n_max = 0).
    pub max_value: f64,
    pub max_level: usize,
    /// W(phi(o)), the exact contribution of the root level.
    pub root_term_pth_power: u128,
    pub upper_estimate_pth_power: f64,
}

impl SufficiencySeries {
    /// True when the last three S(n) strictly increase. Divergence of the
    /// series does not certify unboundedness (the series is one-sided), but
    /// a stabilized series does certify a finite norm bound.
    pub fn growing_at_boundary(&self) -> bool {
        if self.entries.len() < 4 {
            return false;
        }
        let tail = &self.entries[self.entries.len() - 3..];
        tail.windows(2).all(|pair| {
            match pair[0].numerator.checked_mul(self.q as u128) {
                Some(scaled) => pair[1].numerator > scaled,
                None => pair[1].value > pair[0].value,
            }
        })
    }
}

pub fn sufficiency_series(map: &SelfMap, n_max: usize) -> Result<SufficiencySeries> {
    sufficiency_from_counts(&counting_function(map, n_max)?)
}

pub fn sufficiency_from_counts(table: &CountingTable) -> Result<SufficiencySeries> {
    let params = *table.params();
    let q = params.q() as u128;
    let mut entries = Vec::with_capacity(table.n_max() + 1);
    for n in 0..=table.n_max() {
        let mut numerator: u128 = 0;
        for (w, &count) in table.row(n)? {
            let power = q
                .checked_pow(w.depth() as u32)
                .ok_or(Error::SeriesOverflow { n })?;
            let term = power
                .checked_mul(count as u128)
                .ok_or(Error::SeriesOverflow { n })?;
            numerator = numerator
                .checked_add(term)
                .ok_or(Error::SeriesOverflow { n })?;
        }
        let den = q
            .checked_pow(n as u32)
            .ok_or(Error::SeriesOverflow { n })?;
        entries.push(SufficiencyEntry {
            level: n,
            numerator,
            value: numerator as f64 / den as f64,
        });
    }
    let mut max: Option<(Frac, usize)> = None;
    for entry in entries.iter().skip(1) {
        let den = q
            .checked_pow(entry.level as u32)
            .ok_or(Error::SeriesOverflow { n: entry.level })?;
        let cand = Frac::from_u128(entry.numerator, den);
        let better = match &max {
            None => true,
            Some((b, _)) => cand.gt(b),
        };
        if better {
            max = Some((cand, entry.level));
        }
    }
    let (max_value, max_level) = match max {
        Some((frac, level)) => (frac.approx, level),
        None => (0.0, 0),
    };
    let root_row = table.row(0)?;
    let root_image = root_row
        .keys()
        .next()
        .expect("the level-zero row always holds exactly the image of the root");
    let root_term_pth_power = params.level_size(root_image.depth())?;
    Ok(SufficiencySeries {
        q: params.q(),
        entries,
        max_value,
        max_level,
        root_term_pth_power,
        upper_estimate_pth_power: (root_term_pth_power as f64).max(max_value),
    })
}

/// Exact truncated operator norm over functions supported in the ball of
/// radius `domain_depth`, measured on levels up to `target_depth`, with a
/// unit-norm witness attaining the value.
#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    pub p: PExponent,
    pub value: f64,
    pub value_pth_power: f64,
    /// First level n attaining the maximum.
    pub best_level: usize,
    /// Exact per-level optima: entry n is sup ||C f||-mean at level n over
    /// the admissible unit ball, p-th power.
    pub per_level_pth_power: Vec<f64>,
    /// Atom locations of the witness, one per radius that contributes.
    pub witness_atoms: Vec<Vertex>,
    /// Unit-norm function attaining value at best_level (identically zero
    /// when nothing in the domain is hit, in which case value is zero).
    pub witness: TreeFunction,
    pub domain_depth: usize,
    pub target_depth: usize,
}

pub fn truncated_opnorm(
    map: &SelfMap,
    p: PExponent,
    domain_depth: Option<usize>,
    target_depth: usize,
) -> Result<OracleResult> {
    truncated_opnorm_from_counts(&counting_function(map, target_depth)?, p, domain_depth)
}

pub fn truncated_opnorm_seq(
    map: &SelfMap,
    p: PExponent,
    domain_depth: Option<usize>,
    target_depth: usize,
) -> Result<OracleResult> {
    truncated_opnorm_from_counts(&counting_function_seq(map, target_depth)?, p, domain_depth)
}

/// The maximum of M_p^p(n, C f) over unit-norm f supported in the ball of
/// radius D is separable: each level m <= D contributes its full budget
/// |D_m| at the vertex with the largest count, so the optimum at level n is
/// sum_m |D_m| max_{|w| = m} N(n, w) divided by |D_n|, attained by stacking
/// one extremal atom per contributing radius.
pub fn truncated_opnorm_from_counts(
    table: &CountingTable,
    p: PExponent,
    domain_depth: Option<usize>,
) -> Result<OracleResult> {
    let pv = p.finite_value()?;
    let params = *table.params();
    let image_radius = table.image_radius();
    let domain = domain_depth.unwrap_or(image_radius);
    let n_max = table.n_max();
    let mut per_level = Vec::with_capacity(n_max + 1);
    let mut best: Option<(Frac, usize)> = None;
    let mut best_atoms: Vec<Vertex> = Vec::new();
    for n in 0..=n_max {
        let den = params.level_size(n)?;
        let mut best_per_radius: Vec<Option<(&Vertex, u64)>> = vec![None; domain + 1];
        for (w, &count) in table.row(n)? {
            let m = w.depth();
            if m > domain {
                break;
            }
            match &mut best_per_radius[m] {
                Some((_, held)) if *held >= count => {}
                slot => *slot = Some((w, count)),
            }
        }
        let mut numerator: u128 = 0;
        let mut atoms = Vec::new();
        for (m, slot) in best_per_radius.iter().enumerate() {
            let Some((w, count)) = slot else { continue };
            if *count == 0 {
                continue;
            }
            let term = params
                .level_size(m)?
                .checked_mul(*count as u128)
                .ok_or(Error::SeriesOverflow { n })?;
            numerator = numerator
                .checked_add(term)
                .ok_or(Error::SeriesOverflow { n })?;
            atoms.push((*w).clone());
        }
        let cand = Frac::from_u128(numerator, den);
        per_level.push(cand.approx);
        let better = match &best {
            None => true,
            Some((b, _)) => cand.gt(b),
        };
        if better {
            best = Some((cand, n));
            best_atoms = atoms;
        }
    }
    let (frac, best_level) = best.expect("at least the root level is always scanned");
    let witness = if best_atoms.is_empty() {
        TreeFunction::zero(params, image_radius)
    } else {
        extremal_stack(&params, p, &best_atoms)?.extended(image_radius)?
    };
    Ok(OracleResult {
        p,
        value: pth_root(frac.approx, pv),
        value_pth_power: frac.approx,
        best_level,
        per_level_pth_power: per_level,
        witness_atoms: best_atoms,
        witness,
        domain_depth: domain,
        target_depth: n_max,
    })
}

/// On the sup-norm space every composition operator is a contraction and
/// the indicator of phi(o) attains norm one, so the operator norm is
/// exactly one for every self-map.
#[derive(Clone, Debug, Serialize)]
pub struct InfinityOpNorm {
    pub value: f64,
    pub witness_vertex: Vertex,
    pub witness: TreeFunction,
}

pub fn opnorm_infinity(map: &SelfMap) -> Result<InfinityOpNorm> {
    let params = *map.params();
    let witness_vertex = map.root_image()?;
    let witness = TreeFunction::sparse(
        params,
        witness_vertex.depth(),
        [(witness_vertex.clone(), Complex64::new(1.0, 0.0))],
    )?;
    Ok(InfinityOpNorm {
        value: 1.0,
        witness_vertex,
        witness,
    })
}

/// Closed-form operator norm for automorphic symbols: W(phi(o))^(1/p) for
/// finite p, and one on the sup-norm space. Root-fixing automorphisms are
/// isometries.
pub fn automorphism_norm(aut: &PartialAutomorphism, p: PExponent) -> Result<f64> {
    if !p.is_finite() {
        return Ok(1.0);
    }
    let pv = p.finite_value()?;
    let root_weight = aut.params().level_size(aut.root_image().depth())?;
    Ok(pth_root(root_weight as f64, pv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::compose;
    use crate::tree::TreeParams;
    use std::collections::HashMap;

    const P12: [f64; 2] = [1.0, 2.0];

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
    }

    fn irregular_map(params: TreeParams, depth: usize) -> SelfMap {
        let mut table = HashMap::new();
        for n in 0..=depth {
            for (r, v) in params.level_vertices(n).unwrap().iter().enumerate() {
                let image = if n == 0 {
                    params.parse_vertex("1.0").unwrap()
                } else {
                    let t = (3 * n + 2 * r + 1) % (depth + 1);
                    let size = params.level_size(t).unwrap();
                    params.vertex_at(t, (5 * r + n) as u128 % size).unwrap()
                };
                table.insert(v.clone(), image);
            }
        }
        SelfMap::from_table(params, depth, table).unwrap()
    }

    #[test]
    fn identity_and_parent_have_unit_truncated_norm() {
        for q in [2, 3] {
            let params = TreeParams::new(q).unwrap();
            for map in [SelfMap::identity(params), SelfMap::parent(params)] {
                for p in P12 {
                    let p = PExponent::finite(p).unwrap();
                    let oracle = truncated_opnorm(&map, p, None, 6).unwrap();
                    assert_eq!(oracle.value_pth_power, 1.0);
                    assert_eq!(oracle.per_level_pth_power, vec![1.0; 7]);
                    let lower = lower_bound_fw(&map, p, 6, None).unwrap();
                    assert_eq!(lower.value_pth_power, 1.0);
                }
            }
        }
    }

    #[test]
    fn parent_witness_is_the_root_atom() {
        let params = TreeParams::new(2).unwrap();
        let p = PExponent::finite(2.0).unwrap();
        let oracle = truncated_opnorm(&SelfMap::parent(params), p, None, 5).unwrap();
        assert_eq!(oracle.best_level, 0);
        assert_eq!(oracle.witness_atoms, vec![Vertex::root()]);
        assert_eq!(oracle.witness.tp_norm(p).unwrap().sup, 1.0);
    }

    #[test]
    fn shift_oracle_matches_the_automorphism_formula() {
        let params = TreeParams::new(2).unwrap();
        let u = params.parse_vertex("0.1").unwrap();
        let aut = PartialAutomorphism::shift(params, &u, 5).unwrap();
        for p in P12 {
            let p = PExponent::finite(p).unwrap();
            let oracle = truncated_opnorm(aut.as_map(), p, None, 5).unwrap();
            assert_eq!(oracle.value_pth_power, 6.0);
            assert_eq!(oracle.best_level, 0);
            assert!(close(oracle.value, automorphism_norm(&aut, p).unwrap()));
        }
        let q3 = TreeParams::new(3).unwrap();
        let aut = PartialAutomorphism::shift(q3, &q3.parse_vertex("2").unwrap(), 4).unwrap();
        let p = PExponent::finite(2.0).unwrap();
        assert!(close(automorphism_norm(&aut, p).unwrap(), 2.0));
        let oracle = truncated_opnorm(aut.as_map(), p, None, 4).unwrap();
        assert!(close(oracle.value, 2.0));
        assert_eq!(
            automorphism_norm(&aut, PExponent::Infinity).unwrap(),
            1.0
        );
    }

    #[test]
    fn root_fixing_shift_has_unit_norm() {
        let params = TreeParams::new(3).unwrap();
        let aut = PartialAutomorphism::shift(params, &Vertex::root(), 4).unwrap();
        for p in P12 {
            let p = PExponent::finite(p).unwrap();
            assert_eq!(automorphism_norm(&aut, p).unwrap(), 1.0);
            let oracle = truncated_opnorm(aut.as_map(), p, None, 4).unwrap();
            assert_eq!(oracle.value_pth_power, 1.0);
        }
    }

    #[test]
    fn doubled_line_shift_reaches_the_universal_bound() {
        let params = TreeParams::new(1).unwrap();
        let u = params.parse_vertex("0").unwrap();
        let aut = PartialAutomorphism::shift(params, &u, 6).unwrap();
        let p = PExponent::finite(1.0).unwrap();
        let oracle = truncated_opnorm(aut.as_map(), p, None, 6).unwrap();
        assert_eq!(oracle.value_pth_power, 2.0);
        let lower = lower_bound_from_counts(
            &counting_function(aut.as_map(), 6).unwrap(),
            p,
            None,
        )
        .unwrap();
        assert_eq!(lower.value_pth_power, 2.0);
        assert_eq!(lower.witness_level, 0);
        assert_eq!(lower.witness_vertex, u);
    }

    #[test]
    fn collapse_certificates_grow_with_the_level_sizes() {
        let params = TreeParams::new(2).unwrap();
        let map = SelfMap::collapse_default(params, 5).unwrap();
        let p = PExponent::finite(1.0).unwrap();
        let lower = lower_bound_fw(&map, p, 5, None).unwrap();
        assert_eq!(
            lower.per_radius_pth_power,
            vec![1.0, 3.0, 6.0, 12.0, 24.0, 48.0]
        );
        assert!(lower.growing_at_boundary());
        assert_eq!(lower.value_pth_power, 48.0);
        assert_eq!(lower.witness_level, 5);
        let oracle = truncated_opnorm(&map, p, None, 5).unwrap();
        assert_eq!(oracle.value_pth_power, 48.0);
        let suff = sufficiency_series(&map, 5).unwrap();
        for entry in &suff.entries {
            let expected = params.level_size(entry.level).unwrap();
            let q_pow = 2u128.pow(entry.level as u32);
            assert_eq!(entry.numerator, expected * q_pow);
        }
        assert!(suff.growing_at_boundary());
    }

    #[test]
    fn child_map_norm_is_the_root_image_weight() {
        let params = TreeParams::new(2).unwrap();
        let map = SelfMap::child(params, 0).unwrap();
        let p = PExponent::finite(1.0).unwrap();
        let oracle = truncated_opnorm(&map, p, None, 4).unwrap();
        assert_eq!(oracle.value_pth_power, 3.0);
        assert_eq!(oracle.best_level, 0);
        assert_eq!(oracle.per_level_pth_power, vec![3.0, 2.0, 2.0, 2.0, 2.0]);
        let capped = truncated_opnorm(&map, p, Some(0), 4).unwrap();
        assert_eq!(capped.value_pth_power, 0.0);
        assert!(capped.witness_atoms.is_empty());
        assert_eq!(capped.witness.tp_norm(p).unwrap().sup, 0.0);
        let lower = lower_bound_fw(&map, p, 4, Some(0)).unwrap();
        assert_eq!(lower.value_pth_power, 0.0);
        assert_eq!(lower.witness_vertex, Vertex::root());
    }

    #[test]
    fn sufficiency_overshoots_for_the_parent_map() {
        let params = TreeParams::new(3).unwrap();
        let suff = sufficiency_series(&SelfMap::parent(params), 5).unwrap();
        assert_eq!(suff.root_term_pth_power, 1);
        for entry in suff.entries.iter().skip(1) {
            let expected = 4u128 * 3u128.pow(2 * (entry.level as u32) - 2);
            assert_eq!(entry.numerator, expected);
        }
        assert_eq!(suff.max_level, 5);
        assert!(close(suff.max_value, 4.0 * 27.0));
        assert!(suff.growing_at_boundary());
        let p = PExponent::finite(2.0).unwrap();
        let oracle = truncated_opnorm(&SelfMap::parent(params), p, None, 5).unwrap();
        assert_eq!(oracle.value_pth_power, 1.0);
        assert!(oracle.value_pth_power <= suff.upper_estimate_pth_power);
    }

    #[test]
    fn halving_stays_under_its_sufficiency_estimate() {
        let params = TreeParams::new(2).unwrap();
        let map = SelfMap::halving_default(params, 6).unwrap();
        let suff = sufficiency_series(&map, 6).unwrap();
        assert!(close(suff.max_value, 7.0 / 4.0));
        assert_eq!(suff.max_level, 2);
        assert!(suff.upper_estimate_pth_power <= 2.0);
        assert!(!suff.growing_at_boundary());
        let p = PExponent::finite(1.0).unwrap();
        let oracle = truncated_opnorm(&map, p, None, 6).unwrap();
        assert!(close(oracle.value_pth_power, 4.0 / 3.0));
        assert!(oracle.value_pth_power <= suff.upper_estimate_pth_power + 1e-12);
    }

    #[test]
    fn series_numerator_never_drops_below_the_level_size() {
        let params = TreeParams::new(2).unwrap();
        let maps = [
            SelfMap::identity(params),
            SelfMap::parent(params),
            SelfMap::child(params, 1).unwrap(),
            SelfMap::collapse_default(params, 5).unwrap(),
            SelfMap::halving_default(params, 5).unwrap(),
        ];
        for map in &maps {
            let suff = sufficiency_series(map, 5).unwrap();
            for entry in &suff.entries {
                assert!(entry.numerator >= params.level_size(entry.level).unwrap());
            }
        }
    }

    #[test]
    fn oracle_dominates_single_atoms_and_its_witness_attains_it() {
        let params = TreeParams::new(2).unwrap();
        let map = irregular_map(params, 4);
        let table = counting_function(&map, 4).unwrap();
        for p in P12 {
            let p = PExponent::finite(p).unwrap();
            let oracle = truncated_opnorm_from_counts(&table, p, None).unwrap();
            let lower = lower_bound_from_counts(&table, p, None).unwrap();
            assert!(oracle.value_pth_power + 1e-12 >= lower.value_pth_power);
            let suff = sufficiency_from_counts(&table).unwrap();
            assert!(oracle.value_pth_power <= suff.upper_estimate_pth_power + 1e-12);
            assert!(close(oracle.witness.tp_norm(p).unwrap().sup, 1.0));
            let image = compose(&map, &oracle.witness, 4).unwrap();
            assert!(close(image.tp_norm(p).unwrap().sup, oracle.value));
        }
    }

    #[test]
    fn oracle_grows_with_both_truncation_depths() {
        let params = TreeParams::new(2).unwrap();
        let map = irregular_map(params, 5);
        let p = PExponent::finite(2.0).unwrap();
        let shallow = truncated_opnorm(&map, p, None, 3).unwrap();
        let deep = truncated_opnorm(&map, p, None, 5).unwrap();
        assert!(deep.value_pth_power + 1e-12 >= shallow.value_pth_power);
        let table = counting_function(&map, 5).unwrap();
        let narrow = truncated_opnorm_from_counts(&table, p, Some(1)).unwrap();
        let wide = truncated_opnorm_from_counts(&table, p, Some(3)).unwrap();
        assert!(wide.value_pth_power + 1e-12 >= narrow.value_pth_power);
    }

    #[test]
    fn sequential_oracle_agrees_with_the_parallel_one() {
        let params = TreeParams::new(2).unwrap();
        let map = irregular_map(params, 4);
        let p = PExponent::finite(1.0).unwrap();
        let a = truncated_opnorm(&map, p, None, 4).unwrap();
        let b = truncated_opnorm_seq(&map, p, None, 4).unwrap();
        assert_eq!(a.value_pth_power, b.value_pth_power);
        assert_eq!(a.best_level, b.best_level);
        assert_eq!(a.witness_atoms, b.witness_atoms);
    }

    #[test]
    fn sup_norm_operator_is_a_contraction_with_unit_witness() {
        let params = TreeParams::new(2).unwrap();
        let u = params.parse_vertex("1").unwrap();
        let aut = PartialAutomorphism::shift(params, &u, 3).unwrap();
        let report = opnorm_infinity(aut.as_map()).unwrap();
        assert_eq!(report.value, 1.0);
        assert_eq!(report.witness_vertex, u);
        let inf = PExponent::Infinity;
        assert_eq!(report.witness.tp_norm(inf).unwrap().sup, 1.0);
        let table = counting_function(aut.as_map(), 3).unwrap();
        let extended = report.witness.extended(table.image_radius()).unwrap();
        let image = compose(aut.as_map(), &extended, 3).unwrap();
        assert_eq!(image.tp_norm(inf).unwrap().sup, 1.0);
    }

    #[test]
    fn finite_norm_routines_reject_the_sup_exponent() {
        let params = TreeParams::new(2).unwrap();
        let map = SelfMap::parent(params);
        assert!(matches!(
            truncated_opnorm(&map, PExponent::Infinity, None, 3),
            Err(Error::PNotFinite)
        ));
        assert!(matches!(
            lower_bound_fw(&map, PExponent::Infinity, 3, None),
            Err(Error::PNotFinite)
        ));
    }
}
