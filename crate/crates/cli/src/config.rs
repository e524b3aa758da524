//! The self-map mini-language used by the `--map` flag.

use std::path::Path;

use anyhow::{bail, Context, Result};
use hardy_tree::{PartialAutomorphism, SelfMap, TreeParams};

/// A parsed map, keeping the automorphism view around when the spec names a
/// shift so callers can cross-check the closed-form norm.
pub enum MapChoice {
    Plain(SelfMap),
    Shift(PartialAutomorphism),
}

impl MapChoice {
    pub fn map(&self) -> &SelfMap {
        match self {
            MapChoice::Plain(map) => map,
            MapChoice::Shift(aut) => aut.as_map(),
        }
    }

    pub fn shift(&self) -> Option<&PartialAutomorphism> {
        match self {
            MapChoice::Plain(_) => None,
            MapChoice::Shift(aut) => Some(aut),
        }
    }
}

/// Build a self-map from its spec string. Structural maps take their
/// coverage from `depth`; `file:` maps bring their own.
///
/// Accepted forms: `identity`, `parent`, `child[:k]`, `collapse`, `halving`,
/// `shift:<vertex>`, `file:<path>`.
pub fn parse_map(spec: &str, params: TreeParams, depth: usize) -> Result<MapChoice> {
    let (head, tail) = match spec.split_once(':') {
        Some((head, tail)) => (head, Some(tail)),
        None => (spec, None),
    };
    match (head, tail) {
        ("identity", None) => Ok(MapChoice::Plain(SelfMap::identity(params))),
        ("parent", None) => Ok(MapChoice::Plain(SelfMap::parent(params))),
        ("child", selector) => {
            let index = match selector {
                Some(s) => s
                    .parse::<u32>()
                    .with_context(|| format!("child selector {s:?} is not a branch index"))?,
                None => 0,
            };
            Ok(MapChoice::Plain(SelfMap::child(params, index)?))
        }
        ("collapse", None) => Ok(MapChoice::Plain(SelfMap::collapse_default(params, depth)?)),
        ("halving", None) => Ok(MapChoice::Plain(SelfMap::halving_default(params, depth)?)),
        ("shift", Some(word)) => {
            let u = params.parse_vertex(word)?;
            Ok(MapChoice::Shift(PartialAutomorphism::shift(
                params, &u, depth,
            )?))
        }
        ("file", Some(path)) => Ok(MapChoice::Plain(
            SelfMap::read_file(Path::new(path), Some(params.q()))
                .with_context(|| format!("reading map file {path}"))?,
        )),
        _ => bail!(
            "unknown map spec {spec:?}; expected identity | parent | child[:k] | collapse | halving | shift:<vertex> | file:<path>"
        ),
    }
}
