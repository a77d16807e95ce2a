//! Bounded oriented paths and their up/down words.
//!
//! A `k`-bounded path is an oriented path of height `k` whose beginning is its only vertex of
//! height 0 and whose end is its only vertex of height `k`. Its word lists the orientation of
//! every arc except the first and the last, which are always upward. The single arc (height 1)
//! has the empty word.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::map::VertexMap;
use crate::search::{Engine, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Step {
    Up,
    Down,
}

impl Step {
    fn delta(self) -> i64 {
        match self {
            Step::Up => 1,
            Step::Down => -1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PathWord {
    height: usize,
    steps: Vec<Step>,
}

impl PathWord {
    /// Validates `steps` as the word of a `height`-bounded path.
    pub fn new(height: usize, steps: Vec<Step>) -> Result<Self> {
        if height == 0 {
            return Err(Error::InvalidWord("height must be at least 1".into()));
        }
        if height == 1 {
            if !steps.is_empty() {
                return Err(Error::InvalidWord(
                    "a path of height 1 is a single arc with the empty word".into(),
                ));
            }
            return Ok(PathWord { height, steps });
        }
        if steps.first() == Some(&Step::Down) {
            return Err(Error::InvalidWord("first letter must be UP".into()));
        }
        if steps.last() == Some(&Step::Down) {
            return Err(Error::InvalidWord("last letter must be UP".into()));
        }
        let top = height as i64 - 1;
        let mut h: i64 = 1;
        for (i, s) in steps.iter().enumerate() {
            h += s.delta();
            if h < 1 || h > top {
                return Err(Error::InvalidWord(format!(
                    "letter {} reaches height {h}, outside [1, {top}]",
                    i + 1
                )));
            }
        }
        if h != top {
            return Err(Error::InvalidWord(format!(
                "word ends at height {h}, expected {top}"
            )));
        }
        Ok(PathWord { height, steps })
    }

    /// The directed path of the given height: the top element of the lattice.
    pub fn directed(height: usize) -> Self {
        assert!(height >= 1);
        PathWord {
            height,
            steps: vec![Step::Up; height.saturating_sub(2)],
        }
    }

    /// Parses a word literal: `U D U U`, `UDUU`, `u1 d1 u2` or arrows, with the height given
    /// separately.
    pub fn parse(height: usize, literal: &str) -> Result<Self> {
        PathWord::new(height, parse_steps(literal)?)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Orientation of every arc along the path, first and last included.
    pub fn arcs(&self) -> Vec<Step> {
        if self.height == 1 {
            return vec![Step::Up];
        }
        let mut all = Vec::with_capacity(self.steps.len() + 2);
        all.push(Step::Up);
        all.extend_from_slice(&self.steps);
        all.push(Step::Up);
        all
    }

    /// Number of vertices of the expanded path.
    pub fn order(&self) -> usize {
        self.arcs().len() + 1
    }

    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0usize];
        for s in self.arcs() {
            let last = *h.last().unwrap() as i64;
            h.push((last + s.delta()) as usize);
        }
        h
    }

    /// Expands to an oriented path on `0..order()`, beginning at 0 and ending at `order() - 1`.
    pub fn to_digraph(&self) -> Digraph {
        let arcs = self.arcs();
        let mut g = Digraph::empty(arcs.len() + 1);
        for (i, s) in arcs.iter().enumerate() {
            match s {
                Step::Up => g.add_arc(i, i + 1),
                Step::Down => g.add_arc(i + 1, i),
            };
        }
        g
    }

    /// Recovers the word of a digraph that is a bounded path, with the path order of its
    /// vertices (beginning first).
    pub fn from_digraph(g: &Digraph) -> Result<(PathWord, Vec<usize>)> {
        let ends = path_endpoints(g)?;
        for &start in &ends {
            let (order, profile) = walk(g, start);
            let k = *profile.last().unwrap();
            if k < 1 {
                continue;
            }
            let interior_ok = profile[1..profile.len() - 1]
                .iter()
                .all(|&h| h >= 1 && h < k);
            if !interior_ok {
                continue;
            }
            let arcs: Vec<Step> = order
                .windows(2)
                .map(|w| if g.has_arc(w[0], w[1]) { Step::Up } else { Step::Down })
                .collect();
            let steps = if k == 1 {
                Vec::new()
            } else {
                arcs[1..arcs.len() - 1].to_vec()
            };
            return Ok((PathWord::new(k as usize, steps)?, order));
        }
        Err(Error::NotAPath(
            "no endpoint gives a unique lowest beginning and highest end".into(),
        ))
    }

    /// Compressed literal, e.g. `u1 d1 u2 d2 u2`.
    pub fn compressed(&self) -> String {
        let mut parts = Vec::new();
        let mut iter = self.steps.iter().peekable();
        while let Some(&s) = iter.next() {
            let mut n = 1;
            while iter.peek() == Some(&&s) {
                iter.next();
                n += 1;
            }
            parts.push(format!("{}{n}", if s == Step::Up { 'u' } else { 'd' }));
        }
        parts.join(" ")
    }

    /// Every word of the given height whose path has at most `max_order` vertices, shortest first.
    pub fn enumerate(height: usize, max_order: usize) -> Vec<PathWord> {
        let mut out = Vec::new();
        if height == 0 {
            return out;
        }
        if height == 1 {
            if max_order >= 2 {
                out.push(PathWord::directed(1));
            }
            return out;
        }
        let top = height as i64 - 1;
        let max_len = max_order.saturating_sub(3);
        // breadth-first by length so results come out shortest first
        let mut layer: Vec<(Vec<Step>, i64)> = vec![(Vec::new(), 1)];
        for len in 0..=max_len {
            for (steps, h) in &layer {
                if *h == top && steps.last() != Some(&Step::Down) {
                    out.push(PathWord {
                        height,
                        steps: steps.clone(),
                    });
                }
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for (steps, h) in &layer {
                for s in [Step::Up, Step::Down] {
                    let nh = h + s.delta();
                    // remaining letters must be able to climb back to `top`
                    let remaining = (max_len - len - 1) as i64;
                    if nh >= 1 && nh <= top && top - nh <= remaining {
                        let mut w = steps.clone();
                        w.push(s);
                        next.push((w, nh));
                    }
                }
            }
            layer = next;
        }
        out
    }
}

impl fmt::Display for PathWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: Vec<&str> = self
            .steps
            .iter()
            .map(|s| if *s == Step::Up { "U" } else { "D" })
            .collect();
        write!(f, "{}@k={}", letters.join(" "), self.height)
    }
}

/// `"U D U@k=3"`, the form produced by `Display`.
impl FromStr for PathWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (word, k) = s
            .rsplit_once("@k=")
            .ok_or_else(|| Error::InvalidWord(format!("expected `<word>@k=<height>`, got {s:?}")))?;
        let k = k
            .trim()
            .parse()
            .map_err(|_| Error::InvalidWord(format!("bad height {k:?}")))?;
        PathWord::parse(k, word)
    }
}

fn parse_steps(literal: &str) -> Result<Vec<Step>> {
    let mut steps = Vec::new();
    for token in literal.split(|c: char| c.is_whitespace() || c == ',') {
        if token.is_empty() {
            continue;
        }
        let mut chars = token.chars().peekable();
        while let Some(c) = chars.next() {
            let step = match c {
                'U' | 'u' | '↗' => Step::Up,
                'D' | 'd' | '↘' => Step::Down,
                _ => return Err(Error::InvalidWord(format!("unexpected character {c:?}"))),
            };
            let mut digits = String::new();
            while let Some(d) = chars.peek().copied().filter(char::is_ascii_digit) {
                digits.push(d);
                chars.next();
            }
            let count = if digits.is_empty() {
                1
            } else {
                digits
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidWord(format!("bad repeat count in {token:?}")))?
            };
            steps.extend(std::iter::repeat_n(step, count));
        }
    }
    Ok(steps)
}

/// Endpoints of a digraph whose underlying graph is a path (one endpoint for a single vertex).
fn path_endpoints(g: &Digraph) -> Result<Vec<usize>> {
    let n = g.order();
    if n == 0 {
        return Err(Error::NotAPath("empty digraph".into()));
    }
    if !g.is_antisymmetric() {
        return Err(Error::NotAPath("contains a digon".into()));
    }
    if g.arc_count() != n - 1 || g.weak_components().len() != 1 {
        return Err(Error::NotAPath("underlying graph is not a path".into()));
    }
    let mut ends = Vec::new();
    for v in 0..n {
        match g.neighbors(v).len() {
            0 | 1 => ends.push(v),
            2 => {}
            _ => return Err(Error::NotAPath(format!("vertex {v} has degree above 2"))),
        }
    }
    Ok(ends)
}

fn walk(g: &Digraph, start: usize) -> (Vec<usize>, Vec<i64>) {
    let mut order = vec![start];
    let mut profile = vec![0i64];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let Some(next) = g.neighbors(cur).into_iter().find(|&w| w != prev) else {
            break;
        };
        let h = *profile.last().unwrap() + if g.has_arc(cur, next) { 1 } else { -1 };
        prev = cur;
        cur = next;
        order.push(cur);
        profile.push(h);
    }
    (order, profile)
}

/// Heights along an oriented path starting from `anchor`, which must be an endpoint.
pub fn height_profile(g: &Digraph, anchor: usize) -> Result<Vec<i64>> {
    let ends = path_endpoints(g)?;
    if !ends.contains(&anchor) {
        return Err(Error::NotAPath(format!("vertex {anchor} is not an endpoint")));
    }
    Ok(walk(g, anchor).1)
}

/// A homomorphism between bounded paths of equal height, if one exists.
///
/// Any such homomorphism sends beginning to beginning and end to end, so this traces walks in
/// `q` from its beginning that follow the orientation sequence of `p` and end at the end of `q`.
pub fn kb_homomorphism(p: &PathWord, q: &PathWord) -> Result<Option<VertexMap>> {
    if p.height != q.height {
        return Err(Error::HeightMismatch {
            left: p.height,
            right: q.height,
        });
    }
    let (np, nq) = (p.order(), q.order());
    if np < nq {
        return Ok(None);
    }
    let pa = p.arcs();
    let qa = q.arcs();
    // parent[i][j]: position in q of p-vertex i-1 on some walk reaching (i, j)
    let mut parent = vec![vec![usize::MAX; nq]; np];
    parent[0][0] = 0;
    let mut frontier = vec![0usize];
    for (i, &step) in pa.iter().enumerate() {
        let mut next = Vec::new();
        for &j in &frontier {
            // forward along q's arc j -> j+1 (or back along j-1 <- j) with matching direction
            if j + 1 < nq && qa[j] == step && parent[i + 1][j + 1] == usize::MAX {
                parent[i + 1][j + 1] = j;
                next.push(j + 1);
            }
            if j >= 1 && qa[j - 1] != step && parent[i + 1][j - 1] == usize::MAX {
                parent[i + 1][j - 1] = j;
                next.push(j - 1);
            }
        }
        frontier = next;
    }
    if parent[np - 1][nq - 1] == usize::MAX {
        return Ok(None);
    }
    let mut images = vec![0usize; np];
    let mut j = nq - 1;
    for i in (0..np).rev() {
        images[i] = j;
        j = parent[i][j];
    }
    Ok(Some(VertexMap::new(images)))
}

pub fn kb_hom_exists(p: &PathWord, q: &PathWord) -> Result<bool> {
    Ok(kb_homomorphism(p, q)?.is_some())
}

/// A `height`-bounded path with at most `max_order` vertices that maps to `g`.
///
/// Such a path exists exactly when `g` has no homomorphism to the directed path on `height`
/// vertices. `Absent` is returned when that homomorphism exists, `Inconclusive` when it does not
/// but no path within the cap maps to `g` (or a search ran out of budget).
pub fn bounded_path_into(
    engine: &Engine,
    g: &Digraph,
    height: usize,
    max_order: usize,
) -> Outcome<(PathWord, VertexMap)> {
    match engine.hom(g, &Digraph::directed_path(height)) {
        Outcome::Found(_) => return Outcome::Absent,
        Outcome::Inconclusive => return Outcome::Inconclusive,
        Outcome::Absent => {}
    }
    for p in PathWord::enumerate(height, max_order) {
        match engine.hom(&p.to_digraph(), g) {
            Outcome::Found(f) => return Outcome::Found((p, f)),
            Outcome::Inconclusive => return Outcome::Inconclusive,
            Outcome::Absent => {}
        }
    }
    Outcome::Inconclusive
}
