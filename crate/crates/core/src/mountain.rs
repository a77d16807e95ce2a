//! Mountains: bounded paths made of peaks followed by a full ascent.
//!
//! The mountain of `(l_1, ..., l_r)` with parameter `k` has word
//! `U^l_1 D^l_1 ... U^l_r D^l_r U^k` and height `k + 2`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::{PathWord, Step};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MountainSeq {
    peaks: Vec<usize>,
    k: usize,
}

impl MountainSeq {
    pub fn new(peaks: Vec<usize>, k: usize) -> Result<Self> {
        for (i, &l) in peaks.iter().enumerate() {
            if l == 0 || l > k {
                return Err(Error::InvalidSequence(format!(
                    "peak {} has height {l}, outside [1, {k}]",
                    i + 1
                )));
            }
        }
        Ok(MountainSeq { peaks, k })
    }

    pub fn peaks(&self) -> &[usize] {
        &self.peaks
    }

    /// Length of the final ascent; the mountain has height `k + 2`.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn height(&self) -> usize {
        self.k + 2
    }

    pub fn is_decreasing(&self) -> bool {
        self.peaks.windows(2).all(|w| w[0] > w[1])
    }

    /// Vertex count of the expansion: `2 * sum + k + 3`.
    pub fn order(&self) -> usize {
        2 * self.peaks.iter().sum::<usize>() + self.k + 3
    }

    pub fn to_word(&self) -> PathWord {
        let mut steps = Vec::with_capacity(self.order());
        for &l in &self.peaks {
            steps.extend(std::iter::repeat_n(Step::Up, l));
            steps.extend(std::iter::repeat_n(Step::Down, l));
        }
        steps.extend(std::iter::repeat_n(Step::Up, self.k));
        PathWord::new(self.height(), steps).expect("peaks within [1, k] give a valid word")
    }
}

impl fmt::Display for MountainSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let peaks: Vec<String> = self.peaks.iter().map(usize::to_string).collect();
        write!(f, "{}@k={}", peaks.join(","), self.k)
    }
}

/// `"3,1@k=3"`; `"@k=3"` is the mountain without peaks.
impl FromStr for MountainSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (seq, k) = s.rsplit_once("@k=").ok_or_else(|| {
            Error::InvalidSequence(format!("expected `<l1,l2,...>@k=<k>`, got {s:?}"))
        })?;
        let k = k
            .trim()
            .parse()
            .map_err(|_| Error::InvalidSequence(format!("bad k {k:?}")))?;
        let peaks = seq
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::InvalidSequence(format!("bad peak {t:?}")))
            })
            .collect::<Result<Vec<usize>>>()?;
        MountainSeq::new(peaks, k)
    }
}

/// Whether `l` is homomorphic to `r`: `r` occurs in `l` as a subsequence whose prefix stays
/// at most `r_1` and whose every gap stays at most the larger of the two matched values around
/// it. Nothing constrains what follows the last match.
///
/// Matches are found by dynamic programming over (matched prefix of `r`, position in `l`);
/// committing greedily to a single occurrence can miss valid embeddings.
pub fn seq_homomorphic(l: &MountainSeq, r: &MountainSeq) -> Result<bool> {
    if l.k != r.k {
        return Err(Error::HeightMismatch {
            left: l.height(),
            right: r.height(),
        });
    }
    Ok(seq_homomorphic_raw(&l.peaks, &r.peaks))
}

pub(crate) fn seq_homomorphic_raw(l: &[usize], r: &[usize]) -> bool {
    if r.is_empty() {
        return true;
    }
    let p = l.len();
    // ok[i]: r[..=j] can be matched with r[j] at l[i]
    let mut ok = vec![false; p];
    let mut prefix_max = 0;
    for i in 0..p {
        ok[i] = l[i] == r[0] && prefix_max <= r[0];
        prefix_max = prefix_max.max(l[i]);
    }
    for j in 1..r.len() {
        let bound = r[j - 1].max(r[j]);
        let mut next = vec![false; p];
        for i in 0..p {
            if !ok[i] {
                continue;
            }
            for (i2, &v) in l.iter().enumerate().skip(i + 1) {
                if v == r[j] {
                    next[i2] = true;
                }
                if v > bound {
                    break;
                }
            }
        }
        ok = next;
    }
    ok.iter().any(|&b| b)
}

/// Which decreasing sequences a family contains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyMode {
    /// Largest peak fixed at `h - 2`; `binom(h - 3, l - 1)` members.
    TopPeakFixed,
    /// Every strictly decreasing sequence over `[1, h - 2]`; `binom(h - 2, l)` members.
    AllPeaks,
}

/// The decreasing mountains of height `h` with `l` peaks, in lexicographically decreasing
/// order of their sequences.
pub fn gen_decreasing_mountains(h: usize, l: usize, mode: FamilyMode) -> Result<Vec<MountainSeq>> {
    if h <= l + 2 {
        return Err(Error::InvalidParameters(format!(
            "need h > l + 2, got h = {h}, l = {l}"
        )));
    }
    let k = h - 2;
    if l == 0 {
        return Ok(vec![MountainSeq::new(Vec::new(), k)?]);
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(l);
    fn rec(
        max: usize,
        left: usize,
        current: &mut Vec<usize>,
        k: usize,
        out: &mut Vec<MountainSeq>,
    ) {
        if left == 0 {
            out.push(MountainSeq {
                peaks: current.clone(),
                k,
            });
            return;
        }
        for v in (left..=max).rev() {
            current.push(v);
            rec(v - 1, left - 1, current, k, out);
            current.pop();
        }
    }
    match mode {
        FamilyMode::TopPeakFixed => {
            current.push(k);
            rec(k - 1, l - 1, &mut current, k, &mut out);
        }
        FamilyMode::AllPeaks => rec(k, l, &mut current, k, &mut out),
    }
    Ok(out)
}

pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Family sizes under both counting conventions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCount {
    pub h: usize,
    pub l: usize,
    /// Enumerated with the top peak fixed.
    pub top_peak_fixed: usize,
    /// `binom(h - 3, l - 1)`.
    pub top_peak_fixed_formula: u128,
    /// Enumerated over all decreasing sequences.
    pub all_peaks: usize,
    /// `binom(h - 2, l)`.
    pub all_peaks_formula: u128,
}

pub fn family_count(h: usize, l: usize) -> Result<FamilyCount> {
    let fixed = gen_decreasing_mountains(h, l, FamilyMode::TopPeakFixed)?.len();
    let all = gen_decreasing_mountains(h, l, FamilyMode::AllPeaks)?.len();
    Ok(FamilyCount {
        h,
        l,
        top_peak_fixed: fixed,
        top_peak_fixed_formula: if l == 0 { 1 } else { binomial(h - 3, l - 1) },
        all_peaks: all,
        all_peaks_formula: binomial(h - 2, l),
    })
}

/// The separating sequence for `d`: each peak except the last is followed by every smaller
/// value, in decreasing order, skipping the next peak. It maps to every other family member but
/// not to `d`. With a single peak the construction degenerates to `d` itself.
pub fn omega_sequence(d: &MountainSeq) -> Result<MountainSeq> {
    if d.peaks.is_empty() {
        return Err(Error::InvalidSequence("sequence has no peaks".into()));
    }
    if !d.is_decreasing() {
        return Err(Error::InvalidSequence(format!("{d} is not strictly decreasing")));
    }
    if d.peaks[0] != d.k {
        return Err(Error::InvalidSequence(format!(
            "top peak of {d} must equal k = {}",
            d.k
        )));
    }
    if d.peaks.len() == 1 {
        return Ok(d.clone());
    }
    let mut omega = Vec::new();
    for w in d.peaks.windows(2) {
        omega.push(w[0]);
        omega.extend((1..w[0]).rev().filter(|&v| v != w[1]));
    }
    MountainSeq::new(omega, d.k)
}

/// Vertex counts of the smallest and largest members of `DM_{2m+2, m}` with the top peak fixed:
/// `m^2 + 5m + 3` and `3m^2 + 3m + 3`.
pub fn extreme_orders(m: usize) -> (usize, usize) {
    (m * m + 5 * m + 3, 3 * m * m + 3 * m + 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::kb_hom_exists;

    fn m(s: &str) -> MountainSeq {
        s.parse().unwrap()
    }

    #[test]
    fn expansions() {
        assert_eq!(m("1@k=2").to_word(), PathWord::parse(4, "U D U U").unwrap());
        assert_eq!(m("@k=3").to_word(), PathWord::directed(5));
        let w = m("3,1@k=3").to_word();
        assert_eq!(w.height(), 5);
        assert_eq!(w.order(), 2 * 4 + 3 + 3);
        // the tall peak and the final ascent both pass height 4
        let profile = w.heights();
        assert_eq!(profile.iter().filter(|&&h| h == 4).count(), 2);
        assert_eq!(profile.iter().filter(|&&h| h == 2).count(), 4);
        assert_eq!(m("3,1@k=3").to_string(), "3,1@k=3");
    }

    #[test]
    fn rejects_tall_peak() {
        assert!(matches!(
            MountainSeq::new(vec![4], 3),
            Err(Error::InvalidSequence(_))
        ));
        assert!("0@k=2".parse::<MountainSeq>().is_err());
    }

    #[test]
    fn sequence_homomorphism_examples() {
        assert!(seq_homomorphic(&m("3,1@k=3"), &m("3,1@k=3")).unwrap());
        assert!(seq_homomorphic(&m("2,1@k=2"), &m("2@k=2")).unwrap());
        assert!(!seq_homomorphic(&m("3,2@k=3"), &m("3,1@k=3")).unwrap());
        assert!(!seq_homomorphic(&m("3,1@k=3"), &m("3,2@k=3")).unwrap());
        // a single greedy occurrence choice would reject this
        assert!(seq_homomorphic_raw(&[2, 2, 2], &[2, 2]));
        assert!(!seq_homomorphic_raw(&[1, 3, 1], &[1, 1]));
        assert!(seq_homomorphic_raw(&[], &[]));
        assert!(!seq_homomorphic_raw(&[], &[1]));
    }

    #[test]
    fn criterion_matches_path_homs() {
        for k in 1..=3 {
            let mut seqs = Vec::new();
            let mut stack = vec![Vec::<usize>::new()];
            while let Some(s) = stack.pop() {
                let seq = MountainSeq::new(s.clone(), k).unwrap();
                if seq.order() > 13 {
                    continue;
                }
                seqs.push(seq);
                for v in 1..=k {
                    let mut t = s.clone();
                    t.push(v);
                    stack.push(t);
                }
            }
            for a in &seqs {
                for b in &seqs {
                    let expect = kb_hom_exists(&a.to_word(), &b.to_word()).unwrap();
                    assert_eq!(seq_homomorphic(a, b).unwrap(), expect, "{a} -> {b}");
                }
            }
        }
    }

    #[test]
    fn families() {
        let f = gen_decreasing_mountains(5, 2, FamilyMode::TopPeakFixed).unwrap();
        assert_eq!(f, vec![m("3,2@k=3"), m("3,1@k=3")]);
        assert_eq!(
            gen_decreasing_mountains(4, 1, FamilyMode::TopPeakFixed).unwrap(),
            vec![m("2@k=2")]
        );
        assert_eq!(
            gen_decreasing_mountains(5, 0, FamilyMode::TopPeakFixed).unwrap(),
            vec![m("@k=3")]
        );
        assert_eq!(
            gen_decreasing_mountains(5, 2, FamilyMode::AllPeaks).unwrap(),
            vec![m("3,2@k=3"), m("3,1@k=3"), m("2,1@k=3")]
        );
        assert!(matches!(
            gen_decreasing_mountains(4, 2, FamilyMode::AllPeaks),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn counts_under_both_conventions() {
        for h in 3..=8 {
            for l in 0..=3 {
                if h <= l + 2 {
                    continue;
                }
                let c = family_count(h, l).unwrap();
                assert_eq!(c.top_peak_fixed as u128, c.top_peak_fixed_formula);
                assert_eq!(c.all_peaks as u128, c.all_peaks_formula);
            }
        }
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega_sequence(&m("3,1@k=3")).unwrap().peaks(), &[3, 2]);
        assert_eq!(omega_sequence(&m("2,1@k=2")).unwrap().peaks(), &[2]);
        assert_eq!(omega_sequence(&m("4,3@k=4")).unwrap().peaks(), &[4, 2, 1]);
        assert_eq!(omega_sequence(&m("4,2@k=4")).unwrap().peaks(), &[4, 3, 1]);
        assert_eq!(omega_sequence(&m("4,1@k=4")).unwrap().peaks(), &[4, 3, 2]);
        assert_eq!(omega_sequence(&m("5,3,1@k=5")).unwrap().peaks(), &[5, 4, 2, 1, 3, 2]);
        assert_eq!(omega_sequence(&m("3@k=3")).unwrap().peaks(), &[3]);
        assert!(omega_sequence(&m("1,3@k=3")).is_err());
        assert!(omega_sequence(&m("2,1@k=3")).is_err());
    }

    #[test]
    fn extreme_orders_match_enumeration() {
        for mm in 1..=4 {
            let fam = gen_decreasing_mountains(2 * mm + 2, mm, FamilyMode::TopPeakFixed).unwrap();
            let min = fam.iter().map(MountainSeq::order).min().unwrap();
            let max = fam.iter().map(MountainSeq::order).max().unwrap();
            assert_eq!((min, max), extreme_orders(mm));
        }
    }
}
