//! Functions on the truncated tree and their T_p structure.
//!
//! For 1 <= p < infinity the level mean is
//! M_p(n, f) = ((1/|D_n|) * sum_{|v|=n} |f(v)|^p)^(1/p), with M_p(0, f) =
//! |f(o)|, and the norm is the sup of the level means over the stored depth.
//! For p = infinity the mean is the level maximum. The weight W(v) of a
//! vertex equals the size of its level, so the normalized indicator
//! f_v = W(v)^(1/p) * 1_{v} has norm exactly one; these extremal functions
//! witness every lower bound produced by the operator machinery.

use crate::error::{Error, Result};
use crate::exec::{self, Mode};
use crate::tree::{TreeParams, Vertex};
use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

/// The exponent of a T_p space: a finite real >= 1, or infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PExponent {
    Finite(f64),
    Infinity,
}

impl PExponent {
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(PExponent::Finite(p))
        } else {
            Err(Error::PRange(p))
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, PExponent::Finite(_))
    }

    pub fn finite_value(&self) -> Result<f64> {
        match self {
            PExponent::Finite(p) => Ok(*p),
            PExponent::Infinity => Err(Error::PNotFinite),
        }
    }
}

impl FromStr for PExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
            return Ok(PExponent::Infinity);
        }
        let p: f64 = t.parse().map_err(|_| Error::PRange(f64::NAN))?;
        PExponent::finite(p)
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PExponent::Finite(p) => write!(f, "{p}"),
            PExponent::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for PExponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PExponent::Finite(p) => serializer.serialize_f64(*p),
            PExponent::Infinity => serializer.serialize_str("inf"),
        }
    }
}

/// W(v): 1 at the root, (q+1)*q^(|v|-1) elsewhere — the size of v's level.
pub fn weight(params: &TreeParams, v: &Vertex) -> Result<u128> {
    params.level_size(v.depth())
}

pub(crate) fn abs_pow(z: Complex64, p: f64) -> f64 {
    let a = z.norm();
    if p == 1.0 {
        a
    } else if p == 2.0 {
        a * a
    } else {
        a.powf(p)
    }
}

pub(crate) fn pth_root(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        x
    } else if p == 2.0 {
        x.sqrt()
    } else {
        x.powf(1.0 / p)
    }
}

#[derive(Clone, Debug)]
enum Repr {
    /// One vector per level, values in enumeration order.
    Dense(Vec<Vec<Complex64>>),
    /// Explicit support only; every unlisted vertex holds zero.
    Sparse(BTreeMap<Vertex, Complex64>),
}

/// A complex-valued function on the ball of radius `depth`.
///
/// Queries beyond the stored depth are domain errors, not zeros: a truncated
/// function says nothing about deeper levels, and pretending otherwise would
/// corrupt norm computations downstream.
#[derive(Clone, Debug)]
pub struct TreeFunction {
    params: TreeParams,
    depth: usize,
    repr: Repr,
}

impl TreeFunction {
    pub fn zero(params: TreeParams, depth: usize) -> Self {
        TreeFunction {
            params,
            depth,
            repr: Repr::Sparse(BTreeMap::new()),
        }
    }

    /// Build from explicit support; vertices must lie within `depth`.
    pub fn sparse<I>(params: TreeParams, depth: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Complex64)>,
    {
        let mut map = BTreeMap::new();
        for (v, z) in entries {
            params.validate_vertex(&v)?;
            if v.depth() > depth {
                return Err(Error::BeyondDepth {
                    vertex: v.to_string(),
                    depth,
                });
            }
            map.insert(v, z);
        }
        Ok(TreeFunction {
            params,
            depth,
            repr: Repr::Sparse(map),
        })
    }

    /// Build from per-level value vectors in enumeration order.
    pub fn dense(params: TreeParams, levels: Vec<Vec<Complex64>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::DenseLevelSize {
                n: 0,
                got: 0,
                want: 1,
            });
        }
        for (n, level) in levels.iter().enumerate() {
            let want = params.level_size(n)?;
            if level.len() as u128 != want {
                return Err(Error::DenseLevelSize {
                    n,
                    got: level.len(),
                    want,
                });
            }
        }
        Ok(TreeFunction {
            params,
            depth: levels.len() - 1,
            repr: Repr::Dense(levels),
        })
    }

    pub fn params(&self) -> &TreeParams {
        &self.params
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.repr, Repr::Sparse(_))
    }

    pub fn value(&self, v: &Vertex) -> Result<Complex64> {
        if v.depth() > self.depth {
            return Err(Error::BeyondDepth {
                vertex: v.to_string(),
                depth: self.depth,
            });
        }
        self.params.validate_vertex(v)?;
        match &self.repr {
            Repr::Dense(levels) => {
                let rank = self.params.rank_in_level(v)? as usize;
                Ok(levels[v.depth()][rank])
            }
            Repr::Sparse(map) => Ok(map.get(v).copied().unwrap_or(Complex64::new(0.0, 0.0))),
        }
    }

    /// Nonzero entries in canonical vertex order.
    pub fn support_entries(&self) -> Result<Vec<(Vertex, Complex64)>> {
        match &self.repr {
            Repr::Sparse(map) => Ok(map
                .iter()
                .filter(|(_, z)| z.norm_sqr() != 0.0)
                .map(|(v, z)| (v.clone(), *z))
                .collect()),
            Repr::Dense(levels) => {
                let mut out = Vec::new();
                for (n, level) in levels.iter().enumerate() {
                    for (rank, z) in level.iter().enumerate() {
                        if z.norm_sqr() != 0.0 {
                            out.push((self.params.vertex_at(n, rank as u128)?, *z));
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn to_dense(&self) -> Result<TreeFunction> {
        match &self.repr {
            Repr::Dense(_) => Ok(self.clone()),
            Repr::Sparse(map) => {
                let mut levels: Vec<Vec<Complex64>> = Vec::with_capacity(self.depth + 1);
                for n in 0..=self.depth {
                    let size: usize = self
                        .params
                        .level_size(n)?
                        .try_into()
                        .map_err(|_| Error::LevelTooLarge { n })?;
                    levels.push(vec![Complex64::new(0.0, 0.0); size]);
                }
                for (v, z) in map {
                    let rank = self.params.rank_in_level(v)? as usize;
                    levels[v.depth()][rank] = *z;
                }
                TreeFunction::dense(self.params, levels)
            }
        }
    }

    /// Restrict to a shallower depth.
    pub fn truncated(&self, depth: usize) -> Result<TreeFunction> {
        if depth > self.depth {
            return Err(Error::BeyondDepth {
                vertex: format!("level {depth}"),
                depth: self.depth,
            });
        }
        match &self.repr {
            Repr::Dense(levels) => TreeFunction::dense(self.params, levels[..=depth].to_vec()),
            Repr::Sparse(map) => TreeFunction::sparse(
                self.params,
                depth,
                map.iter()
                    .filter(|(v, _)| v.depth() <= depth)
                    .map(|(v, z)| (v.clone(), *z)),
            ),
        }
    }

    /// Declare zeros out to a larger depth.
    pub fn extended(&self, depth: usize) -> Result<TreeFunction> {
        if depth < self.depth {
            return self.truncated(depth);
        }
        match &self.repr {
            Repr::Sparse(map) => TreeFunction::sparse(
                self.params,
                depth,
                map.iter().map(|(v, z)| (v.clone(), *z)),
            ),
            Repr::Dense(levels) => {
                let mut levels = levels.clone();
                for n in self.depth + 1..=depth {
                    let size: usize = self
                        .params
                        .level_size(n)?
                        .try_into()
                        .map_err(|_| Error::LevelTooLarge { n })?;
                    levels.push(vec![Complex64::new(0.0, 0.0); size]);
                }
                TreeFunction::dense(self.params, levels)
            }
        }
    }

    pub fn scale(&self, factor: Complex64) -> TreeFunction {
        let repr = match &self.repr {
            Repr::Dense(levels) => Repr::Dense(
                levels
                    .iter()
                    .map(|level| level.iter().map(|z| z * factor).collect())
                    .collect(),
            ),
            Repr::Sparse(map) => Repr::Sparse(
                map.iter()
                    .map(|(v, z)| (v.clone(), z * factor))
                    .collect(),
            ),
        };
        TreeFunction {
            params: self.params,
            depth: self.depth,
            repr,
        }
    }

    /// Pointwise sum on the common depth (the smaller of the two).
    pub fn add(&self, other: &TreeFunction) -> Result<TreeFunction> {
        if self.params.q() != other.params.q() {
            return Err(Error::ParamsMismatch {
                left: self.params.q(),
                right: other.params.q(),
            });
        }
        let depth = self.depth.min(other.depth);
        if let (Repr::Sparse(a), Repr::Sparse(b)) = (&self.repr, &other.repr) {
            let mut map: BTreeMap<Vertex, Complex64> = BTreeMap::new();
            for (v, z) in a.iter().chain(b.iter()) {
                if v.depth() <= depth {
                    *map.entry(v.clone())
                        .or_insert(Complex64::new(0.0, 0.0)) += z;
                }
            }
            return Ok(TreeFunction {
                params: self.params,
                depth,
                repr: Repr::Sparse(map),
            });
        }
        let lhs = self.truncated(depth)?.to_dense()?;
        let rhs = other.truncated(depth)?.to_dense()?;
        match (lhs.repr, rhs.repr) {
            (Repr::Dense(a), Repr::Dense(b)) => {
                let levels = a
                    .into_iter()
                    .zip(b)
                    .map(|(la, lb)| la.into_iter().zip(lb).map(|(x, y)| x + y).collect())
                    .collect();
                TreeFunction::dense(self.params, levels)
            }
            _ => unreachable!("to_dense returned sparse"),
        }
    }

    pub fn sub(&self, other: &TreeFunction) -> Result<TreeFunction> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// The level mean M_p(n, f).
    pub fn mp_level(&self, p: PExponent, n: usize) -> Result<f64> {
        self.mp_level_mode(p, n, Mode::Auto)
    }

    pub fn mp_level_seq(&self, p: PExponent, n: usize) -> Result<f64> {
        self.mp_level_mode(p, n, Mode::Seq)
    }

    fn mp_level_mode(&self, p: PExponent, n: usize, mode: Mode) -> Result<f64> {
        if n > self.depth {
            return Err(Error::BeyondDepth {
                vertex: format!("level {n}"),
                depth: self.depth,
            });
        }
        if n == 0 {
            return Ok(self.value(&Vertex::root())?.norm());
        }
        match p {
            PExponent::Finite(pv) => {
                let total = match &self.repr {
                    Repr::Dense(levels) => {
                        exec::chunked_sum(&levels[n], mode, |z| abs_pow(*z, pv))
                    }
                    Repr::Sparse(map) => map
                        .iter()
                        .filter(|(v, _)| v.depth() == n)
                        .map(|(_, z)| abs_pow(*z, pv))
                        .sum(),
                };
                let size = self.params.level_size_f64(n)?;
                // An empty summation yields IEEE -0.0; adding +0.0 keeps
                // reports free of "-0" without changing any nonzero value.
                Ok(pth_root((total + 0.0) / size, pv))
            }
            PExponent::Infinity => {
                let max = match &self.repr {
                    Repr::Dense(levels) => exec::chunked_max(&levels[n], mode, |z| z.norm()),
                    Repr::Sparse(map) => map
                        .iter()
                        .filter(|(v, _)| v.depth() == n)
                        .map(|(_, z)| z.norm())
                        .fold(0.0, f64::max),
                };
                Ok(max)
            }
        }
    }

    /// All level means plus their supremum.
    pub fn tp_norm(&self, p: PExponent) -> Result<NormReport> {
        self.tp_norm_mode(p, Mode::Auto)
    }

    pub fn tp_norm_seq(&self, p: PExponent) -> Result<NormReport> {
        self.tp_norm_mode(p, Mode::Seq)
    }

    fn tp_norm_mode(&self, p: PExponent, mode: Mode) -> Result<NormReport> {
        let mut per_level = Vec::with_capacity(self.depth + 1);
        for n in 0..=self.depth {
            per_level.push(self.mp_level_mode(p, n, mode)?);
        }
        let mut sup = 0.0;
        let mut argmax_level = 0;
        for (n, &m) in per_level.iter().enumerate() {
            if m > sup {
                sup = m;
                argmax_level = n;
            }
        }
        Ok(NormReport {
            p,
            per_level,
            sup,
            argmax_level,
        })
    }
}

impl Serialize for TreeFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let file = self
            .to_function_file()
            .map_err(serde::ser::Error::custom)?;
        let mut s = serializer.serialize_struct("TreeFunction", 3)?;
        s.serialize_field("q", &file.q)?;
        s.serialize_field("depth", &file.depth)?;
        s.serialize_field("entries", &file.entries)?;
        s.end()
    }
}

/// Per-level means with their supremum; `sup` always equals the largest
/// entry of `per_level` and `argmax_level` is the first level attaining it.
#[derive(Clone, Debug, Serialize)]
pub struct NormReport {
    pub p: PExponent,
    pub per_level: Vec<f64>,
    pub sup: f64,
    pub argmax_level: usize,
}

/// The normalized indicator f_w = W(w)^(1/p) * 1_{w}; unit norm by design.
/// Rejects p = infinity, where plain indicators already have norm one.
pub fn extremal_fw(params: &TreeParams, w: &Vertex, p: PExponent) -> Result<TreeFunction> {
    let pv = p.finite_value()?;
    params.validate_vertex(w)?;
    let wgt = weight(params, w)? as f64;
    let value = pth_root(wgt, pv);
    TreeFunction::sparse(
        *params,
        w.depth(),
        [(w.clone(), Complex64::new(value, 0.0))],
    )
}

/// One extremal atom per listed vertex: value W(v)^(1/p) at each.
/// With at most one atom per level the result has norm exactly one.
pub fn extremal_stack(params: &TreeParams, p: PExponent, atoms: &[Vertex]) -> Result<TreeFunction> {
    let pv = p.finite_value()?;
    let depth = atoms.iter().map(Vertex::depth).max().unwrap_or(0);
    let mut entries = Vec::with_capacity(atoms.len());
    for v in atoms {
        params.validate_vertex(v)?;
        let wgt = weight(params, v)? as f64;
        entries.push((v.clone(), Complex64::new(pth_root(wgt, pv), 0.0)));
    }
    TreeFunction::sparse(*params, depth, entries)
}

/// How close f comes to the growth ceiling |f(v)| <= W(v)^(1/p) * norm.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub p: f64,
    pub norm: f64,
    pub max_ratio: f64,
    pub witness: Vertex,
}

/// Scan every stored vertex for the largest ratio |f(v)| / (W(v)^(1/p) * ||f||).
/// A ratio above one refutes the growth estimate; the extremal f_w attains one.
pub fn growth_bound_check(f: &TreeFunction, p: PExponent) -> Result<GrowthReport> {
    let pv = p.finite_value()?;
    let norm = f.tp_norm(p)?.sup;
    if norm == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let params = *f.params();
    let mut max_ratio = f64::NEG_INFINITY;
    let mut witness = Vertex::root();
    match &f.repr {
        Repr::Dense(levels) => {
            for (n, level) in levels.iter().enumerate() {
                let ceiling = pth_root(params.level_size_f64(n)?, pv) * norm;
                let mut best_rank = 0;
                let mut best_abs = f64::NEG_INFINITY;
                for (rank, z) in level.iter().enumerate() {
                    let a = z.norm();
                    if a > best_abs {
                        best_abs = a;
                        best_rank = rank;
                    }
                }
                let ratio = best_abs / ceiling;
                if ratio > max_ratio {
                    max_ratio = ratio;
                    witness = params.vertex_at(n, best_rank as u128)?;
                }
            }
        }
        Repr::Sparse(map) => {
            // zeros cannot attain the max once norm > 0
            for (v, z) in map {
                let ceiling = pth_root(weight(&params, v)? as f64, pv) * norm;
                let ratio = z.norm() / ceiling;
                if ratio > max_ratio {
                    max_ratio = ratio;
                    witness = v.clone();
                }
            }
            if map.is_empty() {
                return Err(Error::ZeroFunction);
            }
        }
    }
    Ok(GrowthReport {
        p: pv,
        norm,
        max_ratio,
        witness,
    })
}

/// On-disk form: sparse entries over a declared (q, depth) ball.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctionFile {
    pub q: u32,
    pub depth: usize,
    pub entries: Vec<FunctionEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctionEntry {
    pub v: String,
    #[serde(default)]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl TreeFunction {
    pub fn from_function_file(file: &FunctionFile) -> Result<TreeFunction> {
        let params = TreeParams::new(file.q)?;
        let params = params.with_depth_cap(params.depth_cap().max(file.depth));
        let mut entries = Vec::with_capacity(file.entries.len());
        for e in &file.entries {
            let v = params.parse_vertex(&e.v)?;
            if v.depth() > file.depth {
                return Err(Error::BeyondDepth {
                    vertex: e.v.clone(),
                    depth: file.depth,
                });
            }
            entries.push((v, Complex64::new(e.re, e.im)));
        }
        TreeFunction::sparse(params, file.depth, entries)
    }

    pub fn to_function_file(&self) -> Result<FunctionFile> {
        let entries = self
            .support_entries()?
            .into_iter()
            .map(|(v, z)| FunctionEntry {
                v: v.to_string(),
                re: z.re,
                im: z.im,
            })
            .collect();
        Ok(FunctionFile {
            q: self.params.q(),
            depth: self.depth,
            entries,
        })
    }

    pub fn read_file(path: &Path) -> Result<TreeFunction> {
        let text = fs::read_to_string(path)?;
        let file: FunctionFile = serde_json::from_str(&text)?;
        TreeFunction::from_function_file(&file)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        let file = self.to_function_file()?;
        fs::write(path, serde_json::to_string_pretty(&file)?)?;
        Ok(())
    }
}
