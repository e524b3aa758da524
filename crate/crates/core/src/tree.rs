//! Addressing and exact level combinatorics of the (q+1)-homogeneous rooted tree.
//!
//! The root has q+1 children and every other vertex has q, so a vertex is
//! identified with its path word from the root: the first letter ranges over
//! 0..=q, every later letter over 0..q. Level n (distance n from the root)
//! holds (q+1)*q^(n-1) vertices for n >= 1. All level arithmetic is exact
//! integer arithmetic up to a configurable depth cap; past the cap, or on
//! overflow, operations report a range error instead of silently wrapping.

use crate::error::{Error, Result};
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

/// Default bound on levels for enumeration and exact size arithmetic.
pub const DEFAULT_DEPTH_CAP: usize = 16;

/// Branching parameter q plus the depth cap that bounds enumerable levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeParams {
    q: u32,
    depth_cap: usize,
}

impl TreeParams {
    pub fn new(q: u32) -> Result<Self> {
        if q < 1 {
            return Err(Error::QRange { q });
        }
        Ok(TreeParams {
            q,
            depth_cap: DEFAULT_DEPTH_CAP,
        })
    }

    pub fn with_depth_cap(mut self, cap: usize) -> Self {
        self.depth_cap = cap;
        self
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn depth_cap(&self) -> usize {
        self.depth_cap
    }

    /// Number of vertices at distance n from the root: 1, then (q+1)*q^(n-1).
    pub fn level_size(&self, n: usize) -> Result<u128> {
        if n > self.depth_cap {
            return Err(Error::DepthCap {
                n,
                cap: self.depth_cap,
            });
        }
        if n == 0 {
            return Ok(1);
        }
        let q = self.q as u128;
        let mut size = q + 1;
        for _ in 1..n {
            size = size
                .checked_mul(q)
                .ok_or(Error::LevelOverflow { n, q: self.q })?;
        }
        Ok(size)
    }

    pub fn level_size_f64(&self, n: usize) -> Result<f64> {
        Ok(self.level_size(n)? as f64)
    }

    /// Total vertex count of the closed ball of the given radius.
    pub fn ball_size(&self, depth: usize) -> Result<u128> {
        let mut total: u128 = 0;
        for n in 0..=depth {
            total = total
                .checked_add(self.level_size(n)?)
                .ok_or(Error::LevelOverflow { n, q: self.q })?;
        }
        Ok(total)
    }

    pub fn child_count(&self, v: &Vertex) -> u32 {
        if v.is_root() {
            self.q + 1
        } else {
            self.q
        }
    }

    pub fn child(&self, v: &Vertex, index: u32) -> Result<Vertex> {
        if index >= self.child_count(v) {
            return Err(Error::ChildIndex {
                index,
                vertex: v.to_string(),
                q: self.q,
            });
        }
        let mut word = v.word.clone();
        word.push(index);
        Ok(Vertex { word })
    }

    pub fn children(&self, v: &Vertex) -> Vec<Vertex> {
        (0..self.child_count(v))
            .map(|i| {
                let mut word = v.word.clone();
                word.push(i);
                Vertex { word }
            })
            .collect()
    }

    /// Check every letter of the path word against its positional bound.
    pub fn validate_vertex(&self, v: &Vertex) -> Result<()> {
        for (pos, &letter) in v.word.iter().enumerate() {
            let bound = if pos == 0 { self.q + 1 } else { self.q };
            if letter >= bound {
                return Err(Error::LetterRange {
                    letter,
                    pos,
                    q: self.q,
                });
            }
        }
        Ok(())
    }

    /// Position of `v` in the lexicographic enumeration of its level.
    pub fn rank_in_level(&self, v: &Vertex) -> Result<u128> {
        let q = self.q as u128;
        let mut letters = v.word.iter();
        let mut rank: u128 = match letters.next() {
            None => return Ok(0),
            Some(&first) => first as u128,
        };
        for &letter in letters {
            rank = rank
                .checked_mul(q)
                .and_then(|r| r.checked_add(letter as u128))
                .ok_or(Error::WordOverflow { depth: v.depth() })?;
        }
        Ok(rank)
    }

    /// Inverse of [`rank_in_level`](Self::rank_in_level): the rank-th vertex
    /// of level n in lexicographic order.
    pub fn vertex_at(&self, n: usize, rank: u128) -> Result<Vertex> {
        let size = self.level_size(n)?;
        if rank >= size {
            return Err(Error::RankRange { rank, n, size });
        }
        if n == 0 {
            return Ok(Vertex::root());
        }
        let q = self.q as u128;
        let mut word = vec![0u32; n];
        let mut r = rank;
        for pos in (1..n).rev() {
            word[pos] = (r % q) as u32;
            r /= q;
        }
        word[0] = r as u32;
        Ok(Vertex { word })
    }

    /// All vertices of level n in lexicographic order.
    pub fn level_vertices(&self, n: usize) -> Result<Vec<Vertex>> {
        let size: usize = self
            .level_size(n)?
            .try_into()
            .map_err(|_| Error::LevelTooLarge { n })?;
        if n == 0 {
            return Ok(vec![Vertex::root()]);
        }
        let mut out = Vec::with_capacity(size);
        let mut word = vec![0u32; n];
        loop {
            out.push(Vertex { word: word.clone() });
            let mut pos = n;
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                let bound = if pos == 0 { self.q + 1 } else { self.q };
                word[pos] += 1;
                if word[pos] < bound {
                    break;
                }
                word[pos] = 0;
            }
        }
    }

    /// Levels 0..=depth concatenated, shallowest first.
    pub fn ball_vertices(&self, depth: usize) -> Result<Vec<Vertex>> {
        let size: usize = self
            .ball_size(depth)?
            .try_into()
            .map_err(|_| Error::LevelTooLarge { n: depth })?;
        let mut out = Vec::with_capacity(size);
        for n in 0..=depth {
            out.extend(self.level_vertices(n)?);
        }
        Ok(out)
    }

    /// Parse the dotted text form and validate letters against q.
    pub fn parse_vertex(&self, text: &str) -> Result<Vertex> {
        let v = parse_word(text)?;
        self.validate_vertex(&v)?;
        Ok(v)
    }
}

/// A tree vertex, addressed by its path word; the empty word is the root `o`.
///
/// The ordering is by depth first, then lexicographically within a level,
/// which matches the enumeration order and makes it a canonical tie-break.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    word: Vec<u32>,
}

impl Vertex {
    pub fn root() -> Self {
        Vertex { word: Vec::new() }
    }

    pub fn depth(&self) -> usize {
        self.word.len()
    }

    pub fn is_root(&self) -> bool {
        self.word.is_empty()
    }

    pub fn letters(&self) -> &[u32] {
        &self.word
    }

    /// Drop the last letter. The root has no parent.
    pub fn parent(&self) -> Option<Vertex> {
        if self.is_root() {
            None
        } else {
            Some(Vertex {
                word: self.word[..self.word.len() - 1].to_vec(),
            })
        }
    }

    pub fn is_parent_of(&self, other: &Vertex) -> bool {
        other.depth() == self.depth() + 1 && other.word.starts_with(&self.word)
    }

    /// Tree adjacency: one endpoint is the parent of the other.
    pub fn adjacent(&self, other: &Vertex) -> bool {
        self.is_parent_of(other) || other.is_parent_of(self)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("o");
        }
        let mut first = true;
        for letter in &self.word {
            if !first {
                f.write_str(".")?;
            }
            write!(f, "{letter}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vertex({self})")
    }
}

impl Ord for Vertex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word
            .len()
            .cmp(&other.word.len())
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for Vertex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn parse_word(text: &str) -> Result<Vertex> {
    let t = text.trim();
    if t == "o" {
        return Ok(Vertex::root());
    }
    if t.is_empty() {
        return Err(Error::VertexParse {
            text: text.to_string(),
            reason: "empty text".to_string(),
        });
    }
    let mut word = Vec::new();
    for part in t.split('.') {
        let letter: u32 = part.parse().map_err(|_| Error::VertexParse {
            text: text.to_string(),
            reason: format!("bad letter {part:?}"),
        })?;
        word.push(letter);
    }
    Ok(Vertex { word })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Independent oracle: grow the set of path words level by level straight
    /// from the definition (q+1 branches at the root, q elsewhere).
    fn oracle_words(q: u32, depth: usize) -> Vec<HashSet<Vec<u32>>> {
        let mut levels: Vec<HashSet<Vec<u32>>> = vec![HashSet::from([Vec::new()])];
        for _ in 0..depth {
            let prev = levels.last().unwrap();
            let mut next = HashSet::new();
            for w in prev {
                let branches = if w.is_empty() { q + 1 } else { q };
                for letter in 0..branches {
                    let mut child = w.clone();
                    child.push(letter);
                    next.insert(child);
                }
            }
            levels.push(next);
        }
        levels
    }

    #[test]
    fn level_sizes_match_bfs_oracle() {
        for q in [1u32, 2, 3] {
            let params = TreeParams::new(q).unwrap();
            let oracle = oracle_words(q, 6);
            for (n, level) in oracle.iter().enumerate() {
                assert_eq!(params.level_size(n).unwrap(), level.len() as u128);
            }
        }
        // frozen values from the oracle
        let q1 = TreeParams::new(1).unwrap();
        assert_eq!(q1.level_size(5).unwrap(), 2);
        let q2 = TreeParams::new(2).unwrap();
        assert_eq!(q2.level_size(0).unwrap(), 1);
        let q3 = TreeParams::new(3).unwrap();
        assert_eq!(q3.level_size(4).unwrap(), 108);
        assert_eq!(oracle_words(3, 4)[4].len(), 108);
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let q2 = TreeParams::new(2).unwrap();
        let level2 = q2.level_vertices(2).unwrap();
        let shown: Vec<String> = level2.iter().map(|v| v.to_string()).collect();
        assert_eq!(shown, ["0.0", "0.1", "1.0", "1.1", "2.0", "2.1"]);

        let q1 = TreeParams::new(1).unwrap();
        let level1: Vec<String> = q1
            .level_vertices(1)
            .unwrap()
            .iter()
            .map(|v| v.to_string())
            .collect();
        assert_eq!(level1, ["0", "1"]);
        assert_eq!(q1.level_vertices(0).unwrap(), vec![Vertex::root()]);

        for q in [1u32, 2, 3] {
            let params = TreeParams::new(q).unwrap();
            let oracle = oracle_words(q, 5);
            for n in 0..=5 {
                let level = params.level_vertices(n).unwrap();
                let words: HashSet<Vec<u32>> =
                    level.iter().map(|v| v.letters().to_vec()).collect();
                assert_eq!(words, oracle[n], "q={q} n={n}");
                assert_eq!(words.len(), level.len(), "duplicates at q={q} n={n}");
                let mut sorted = level.clone();
                sorted.sort();
                assert_eq!(sorted, level, "enumeration order at q={q} n={n}");
            }
        }
    }

    #[test]
    fn child_counts_follow_homogeneity() {
        for q in [1u32, 2, 3] {
            let params = TreeParams::new(q).unwrap();
            for n in 0..4 {
                let next: HashSet<Vertex> =
                    params.level_vertices(n + 1).unwrap().into_iter().collect();
                for v in params.level_vertices(n).unwrap() {
                    let kids = params.children(&v);
                    let want = if v.is_root() { q + 1 } else { q };
                    assert_eq!(kids.len() as u32, want);
                    for k in &kids {
                        assert!(next.contains(k));
                        assert_eq!(k.parent().as_ref(), Some(&v));
                        assert!(v.adjacent(k) && k.adjacent(&v));
                    }
                }
            }
        }
    }

    #[test]
    fn parent_and_child_examples() {
        let q2 = TreeParams::new(2).unwrap();
        let v = q2.parse_vertex("2.0.1").unwrap();
        assert_eq!(v.parent().unwrap().to_string(), "2.0");
        assert_eq!(Vertex::root().parent(), None);
        let zero = q2.parse_vertex("0").unwrap();
        assert_eq!(zero.parent(), Some(Vertex::root()));
        assert!(q2.child(&Vertex::root(), 2).is_ok());
        assert!(matches!(
            q2.child(&Vertex::root(), 3),
            Err(Error::ChildIndex { .. })
        ));
        assert!(matches!(q2.child(&zero, 2), Err(Error::ChildIndex { .. })));
    }

    #[test]
    fn parse_and_format_round_trip() {
        for q in [1u32, 2, 3] {
            let params = TreeParams::new(q).unwrap();
            for n in 0..=5 {
                for v in params.level_vertices(n).unwrap() {
                    assert_eq!(params.parse_vertex(&v.to_string()).unwrap(), v);
                }
            }
        }
        let q2 = TreeParams::new(2).unwrap();
        assert_eq!(q2.parse_vertex("o").unwrap(), Vertex::root());
        assert!(matches!(
            q2.parse_vertex("2.2.0"),
            Err(Error::LetterRange { pos: 1, .. })
        ));
        assert!(matches!(
            q2.parse_vertex("3.0"),
            Err(Error::LetterRange { pos: 0, .. })
        ));
        assert!(matches!(
            q2.parse_vertex("2..1"),
            Err(Error::VertexParse { .. })
        ));
        assert!(matches!(q2.parse_vertex(""), Err(Error::VertexParse { .. })));
        // "0" is a level-one vertex, not the root
        assert_eq!(q2.parse_vertex("0").unwrap().depth(), 1);
    }

    #[test]
    fn rank_round_trips_with_vertex_at() {
        let q3 = TreeParams::new(3).unwrap();
        let level = q3.level_vertices(4).unwrap();
        for (i, v) in level.iter().enumerate() {
            assert_eq!(q3.rank_in_level(v).unwrap(), i as u128);
            assert_eq!(&q3.vertex_at(4, i as u128).unwrap(), v);
        }
        assert!(matches!(
            q3.vertex_at(4, 108),
            Err(Error::RankRange { .. })
        ));
    }

    #[test]
    fn depth_cap_and_overflow_are_range_errors() {
        let q2 = TreeParams::new(2).unwrap();
        assert!(matches!(
            q2.level_size(17),
            Err(Error::DepthCap { n: 17, cap: 16 })
        ));
        let raised = q2.with_depth_cap(20);
        assert_eq!(raised.level_size(17).unwrap(), 3 * (1u128 << 16));
        let huge = TreeParams::new(u32::MAX - 1).unwrap();
        assert!(matches!(
            huge.level_size(5),
            Err(Error::LevelOverflow { .. })
        ));
        assert!(TreeParams::new(0).is_err());
    }

    #[test]
    fn ball_size_sums_levels() {
        let q2 = TreeParams::new(2).unwrap();
        assert_eq!(q2.ball_size(3).unwrap(), 1 + 3 + 6 + 12);
        assert_eq!(
            q2.ball_vertices(3).unwrap().len() as u128,
            q2.ball_size(3).unwrap()
        );
    }

    #[test]
    fn vertex_order_is_depth_then_lex() {
        let q2 = TreeParams::new(2).unwrap();
        let root = Vertex::root();
        let v0 = q2.parse_vertex("0").unwrap();
        let v1 = q2.parse_vertex("1").unwrap();
        let v00 = q2.parse_vertex("0.0").unwrap();
        assert!(root < v0 && v0 < v1 && v1 < v00);
    }
}
