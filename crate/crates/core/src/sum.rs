//! Finite sums of bounded paths of one height, kept as antichains.
//!
//! A sum stands for the disjoint union of its paths. After normalization no element maps to
//! another, so two sums are equal exactly when they are homomorphically equivalent.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::path::{kb_hom_exists, PathWord, Step};

/// Default cap on the number of paths the meet may enumerate per pair of elements.
pub const DEFAULT_MEET_CAP: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SumOfPaths {
    height: usize,
    elements: Vec<PathWord>,
}

impl SumOfPaths {
    /// The empty sum, bottom of the lattice.
    pub fn zero(height: usize) -> Self {
        SumOfPaths {
            height,
            elements: Vec::new(),
        }
    }

    /// The directed path alone, top of the lattice.
    pub fn one(height: usize) -> Self {
        SumOfPaths {
            height,
            elements: vec![PathWord::directed(height)],
        }
    }

    /// Drops duplicates and every path that maps to another retained one.
    pub fn normalize(height: usize, paths: impl IntoIterator<Item = PathWord>) -> Result<Self> {
        let mut paths: Vec<PathWord> = paths.into_iter().collect();
        for p in &paths {
            if p.height() != height {
                return Err(Error::HeightMismatch {
                    left: height,
                    right: p.height(),
                });
            }
        }
        paths.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
        paths.dedup();
        // a path can only map onto a path with no more vertices
        let mut keep = vec![true; paths.len()];
        for i in 0..paths.len() {
            for j in 0..paths.len() {
                if i != j
                    && paths[j].order() <= paths[i].order()
                    && kb_hom_exists(&paths[i], &paths[j])?
                {
                    keep[i] = false;
                    break;
                }
            }
        }
        let elements = paths
            .into_iter()
            .zip(keep)
            .filter_map(|(p, k)| k.then_some(p))
            .collect();
        Ok(SumOfPaths { height, elements })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn elements(&self) -> &[PathWord] {
        &self.elements
    }

    pub fn is_zero(&self) -> bool {
        self.elements.is_empty()
    }

    /// Whether the sum maps to `other`: each element maps to some element of `other`.
    pub fn maps_to(&self, other: &SumOfPaths) -> Result<bool> {
        self.check_height(other)?;
        for p in &self.elements {
            let mut hit = false;
            for q in &other.elements {
                if kb_hom_exists(p, q)? {
                    hit = true;
                    break;
                }
            }
            if !hit {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn join(&self, other: &SumOfPaths) -> Result<SumOfPaths> {
        self.check_height(other)?;
        SumOfPaths::normalize(
            self.height,
            self.elements.iter().chain(&other.elements).cloned(),
        )
    }

    pub fn meet(&self, other: &SumOfPaths) -> Result<SumOfPaths> {
        self.meet_capped(other, DEFAULT_MEET_CAP)
    }

    /// Meet via the paths from beginning to end in each pairwise product. Fails with
    /// `BudgetExceeded` when one pair yields more than `cap` paths.
    pub fn meet_capped(&self, other: &SumOfPaths, cap: usize) -> Result<SumOfPaths> {
        self.check_height(other)?;
        let mut all = Vec::new();
        for p in &self.elements {
            for q in &other.elements {
                all.extend(product_paths(p, q, cap)?);
            }
        }
        SumOfPaths::normalize(self.height, all)
    }

    /// Fewest vertices among the elements.
    pub fn min_order(&self) -> Result<usize> {
        self.elements
            .iter()
            .map(PathWord::order)
            .min()
            .ok_or(Error::EmptySum)
    }

    /// Disjoint union of the expanded paths.
    pub fn to_digraph(&self) -> Digraph {
        let parts: Vec<Digraph> = self.elements.iter().map(PathWord::to_digraph).collect();
        parts
            .iter()
            .fold(Digraph::empty(0), |acc, g| acc.disjoint_union(g))
    }

    fn check_height(&self, other: &SumOfPaths) -> Result<()> {
        if self.height != other.height {
            return Err(Error::HeightMismatch {
                left: self.height,
                right: other.height,
            });
        }
        Ok(())
    }
}

impl fmt::Display for SumOfPaths {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.elements.is_empty() {
            return write!(f, "0@k={}", self.height);
        }
        let parts: Vec<String> = self.elements.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Words of the bounded paths running from `(begin, begin)` to `(end, end)` in `p x q`.
///
/// Such a path only visits pairs of equal height, so it is enumerated inside that subgraph.
pub fn product_paths(p: &PathWord, q: &PathWord, cap: usize) -> Result<Vec<PathWord>> {
    if p.height() != q.height() {
        return Err(Error::HeightMismatch {
            left: p.height(),
            right: q.height(),
        });
    }
    let hp = p.heights();
    let hq = q.heights();
    let (np, nq) = (hp.len(), hq.len());
    let idx = |i: usize, j: usize| i * nq + j;
    let mut adj: Vec<Vec<(usize, Step)>> = vec![Vec::new(); np * nq];
    for i in 0..np {
        for j in 0..nq {
            if hp[i] != hq[j] {
                continue;
            }
            for ni in [i.wrapping_sub(1), i + 1] {
                for nj in [j.wrapping_sub(1), j + 1] {
                    if ni >= np || nj >= nq || hp[ni] != hq[nj] {
                        continue;
                    }
                    let step = if hp[ni] > hp[i] { Step::Up } else { Step::Down };
                    adj[idx(i, j)].push((idx(ni, nj), step));
                }
            }
        }
    }
    // `adj` only links pairs whose heights move together, so an edge is an arc of the product
    // pointing in `step`'s direction
    let target = idx(np - 1, nq - 1);
    let mut found = Vec::new();
    let mut on_path = vec![false; np * nq];
    let mut steps: Vec<Step> = Vec::new();
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    on_path[0] = true;
    while let Some(&mut (v, ref mut next)) = stack.last_mut() {
        if v == target {
            let k = p.height();
            let word = if k == 1 {
                Vec::new()
            } else {
                steps[1..steps.len() - 1].to_vec()
            };
            found.push(PathWord::new(k, word)?);
            if found.len() > cap {
                return Err(Error::BudgetExceeded(format!(
                    "more than {cap} paths in {} x {}",
                    p.compressed(),
                    q.compressed()
                )));
            }
            on_path[v] = false;
            stack.pop();
            steps.pop();
            continue;
        }
        if *next < adj[v].len() {
            let (w, s) = adj[v][*next];
            *next += 1;
            if !on_path[w] {
                on_path[w] = true;
                steps.push(s);
                stack.push((w, 0));
            }
        } else {
            on_path[v] = false;
            stack.pop();
            steps.pop();
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(k: usize, s: &str) -> PathWord {
        PathWord::parse(k, s).unwrap()
    }

    fn sum(k: usize, words: &[&str]) -> SumOfPaths {
        SumOfPaths::normalize(k, words.iter().map(|s| w(k, s))).unwrap()
    }

    #[test]
    fn normalize_drops_dominated() {
        let s = sum(4, &["U U", "U D U U D D U U", "U U"]);
        // everything maps to the directed path
        assert_eq!(s, SumOfPaths::one(4));
        let t = sum(4, &["U D U U", "U U D U"]);
        assert_eq!(t.elements().len(), 2);
    }

    #[test]
    fn units() {
        let z = SumOfPaths::zero(3);
        let o = SumOfPaths::one(3);
        let a = sum(3, &["U D U"]);
        assert_eq!(a.join(&z).unwrap(), a);
        assert_eq!(a.meet(&o).unwrap(), a);
        assert_eq!(a.meet(&z).unwrap(), z);
        assert_eq!(a.join(&o).unwrap(), o);
        assert_eq!(o.min_order().unwrap(), 4);
        assert_eq!(z.min_order(), Err(Error::EmptySum));
        assert!(z.maps_to(&a).unwrap());
        assert!(!a.maps_to(&z).unwrap());
    }

    #[test]
    fn meet_of_incomparable_pair() {
        let a = sum(4, &["U D U U"]);
        let b = sum(4, &["U U D U"]);
        let m = a.meet(&b).unwrap();
        assert!(m.maps_to(&a).unwrap());
        assert!(m.maps_to(&b).unwrap());
        assert!(!m.is_zero());
    }

    #[test]
    fn product_paths_of_directed() {
        let d = PathWord::directed(3);
        assert_eq!(product_paths(&d, &d, 10).unwrap(), vec![d.clone()]);
        let cap_err = product_paths(&w(4, "U D U D U U"), &w(4, "U D U D U U"), 0);
        assert!(matches!(cap_err, Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn height_mismatch() {
        assert!(SumOfPaths::one(3).join(&SumOfPaths::one(4)).is_err());
        assert!(SumOfPaths::normalize(3, [PathWord::directed(4)]).is_err());
    }

    #[test]
    fn digraph_of_sum() {
        let s = sum(3, &["U D U"]);
        assert_eq!(s.to_digraph(), w(3, "U D U").to_digraph());
        assert_eq!(SumOfPaths::zero(3).to_digraph().order(), 0);
        assert_eq!(s.to_string(), "U D U@k=3");
    }
}

#[cfg(test)]
mod greatest_lower_bound {
    use super::*;

    #[test]
    fn meet_is_greatest_lower_bound_on_small_paths() {
        for k in 2..=4 {
            let words = PathWord::enumerate(k, 9);
            let probes = PathWord::enumerate(k, 13);
            for a in &words {
                for b in &words {
                    let sa = SumOfPaths::normalize(k, [a.clone()]).unwrap();
                    let sb = SumOfPaths::normalize(k, [b.clone()]).unwrap();
                    let m = sa.meet(&sb).unwrap();
                    for x in &probes {
                        let sx = SumOfPaths::normalize(k, [x.clone()]).unwrap();
                        let below = sx.maps_to(&sa).unwrap() && sx.maps_to(&sb).unwrap();
                        assert_eq!(below, sx.maps_to(&m).unwrap(), "{a} ^ {b} = {m}, probe {x}");
                    }
                }
            }
        }
    }
}
