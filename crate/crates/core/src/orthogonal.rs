//! Orthogonality of digraph pairs and the sufficient conditions for a product of cones to be a
//! core.
//!
//! `G` and `H` are orthogonal when every homomorphism from `G x H` to either factor is onto.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cone::cone;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::map::VertexMap;
use crate::product::{product_of, tensor_product};
use crate::search::{Constraints, Engine, Outcome, Surjectivity, Verdict};

/// Cone products up to this order also get a direct coreness check.
pub const DEFAULT_DIRECT_CHECK_LIMIT: usize = 400;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub verdict: Verdict,
    pub onto_left: Verdict,
    pub onto_right: Verdict,
    /// A homomorphism of the product missing a vertex of the left factor.
    pub left_counterexample: Option<Vec<usize>>,
    pub right_counterexample: Option<Vec<usize>>,
    pub product_order: usize,
}

fn counterexample(s: &Surjectivity) -> Option<Vec<usize>> {
    match s {
        Surjectivity::NotSurjective(f) => Some(f.images().to_vec()),
        _ => None,
    }
}

pub fn are_orthogonal(engine: &Engine, g: &Digraph, h: &Digraph) -> Result<OrthogonalityReport> {
    let p = tensor_product(g, h, engine.config().max_vertices)?;
    let left = engine.all_homs_to_target_surjective(&p.graph, g);
    let right = engine.all_homs_to_target_surjective(&p.graph, h);
    Ok(OrthogonalityReport {
        verdict: left.verdict().and(right.verdict()),
        onto_left: left.verdict(),
        onto_right: right.verdict(),
        left_counterexample: counterexample(&left),
        right_counterexample: counterexample(&right),
        product_order: p.graph.order(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalizedPair {
    /// Vertices of the left factor kept, ascending.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub left_graph: Digraph,
    pub right_graph: Digraph,
    /// False if some descent step ran out of budget.
    pub certified: bool,
}

/// Shrinks each factor to an inclusion-minimal induced subgraph that the product still maps to.
pub fn orthogonalize_pair(engine: &Engine, g: &Digraph, h: &Digraph) -> Result<OrthogonalizedPair> {
    let p = tensor_product(g, h, engine.config().max_vertices)?;
    let (left, lc) = minimal_target(engine, &p.graph, g);
    let (right, rc) = minimal_target(engine, &p.graph, h);
    Ok(OrthogonalizedPair {
        left_graph: g.induced(&left),
        right_graph: h.induced(&right),
        left,
        right,
        certified: lc && rc,
    })
}

/// Greedy vertex-deletion descent: drop any vertex whose removal keeps a homomorphism from
/// `source`, jumping straight to the image of each witness found.
fn minimal_target(engine: &Engine, source: &Digraph, target: &Digraph) -> (Vec<usize>, bool) {
    let n = target.order();
    let mut removed = vec![false; n];
    let mut certified = true;
    let constraints = |removed: &[bool], extra: Option<usize>| {
        let mut c = Constraints::new();
        for (v, &r) in removed.iter().enumerate() {
            if r || Some(v) == extra {
                c = c.avoid(v);
            }
        }
        c
    };
    loop {
        let mut progressed = false;
        for v in 0..n {
            if removed[v] {
                continue;
            }
            match engine.find_homomorphism(source, target, &constraints(&removed, Some(v))) {
                Outcome::Found(f) => {
                    let image = f.image();
                    for (w, r) in removed.iter_mut().enumerate() {
                        if image.binary_search(&w).is_err() {
                            *r = true;
                        }
                    }
                    progressed = true;
                }
                Outcome::Inconclusive => certified = false,
                Outcome::Absent => {}
            }
        }
        if !progressed {
            break;
        }
    }
    ((0..n).filter(|&v| !removed[v]).collect(), certified)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoConeReport {
    pub oriented: bool,
    pub orthogonal: Verdict,
    pub left_to_right: Verdict,
    pub right_to_left: Verdict,
    /// Oriented, orthogonal and incomparable.
    pub hypotheses: Verdict,
    pub cone_product_order: usize,
    /// Whether the product of the two cones is a core.
    pub conclusion: Verdict,
}

pub fn verify_two_cone_theorem(engine: &Engine, g: &Digraph, h: &Digraph) -> Result<TwoConeReport> {
    let oriented = g.is_antisymmetric() && h.is_antisymmetric();
    let orthogonal = are_orthogonal(engine, g, h)?.verdict;
    let left_to_right = engine.hom_exists(g, h);
    let right_to_left = engine.hom_exists(h, g);
    let hypotheses = Verdict::all([
        Verdict::from_bool(oriented),
        orthogonal,
        left_to_right.negate(),
        right_to_left.negate(),
    ]);
    let (cg, ch) = (cone(g), cone(h));
    let p = tensor_product(cg.graph(), ch.graph(), engine.config().max_vertices)?;
    let conclusion = engine.is_core(&p.graph);
    Ok(TwoConeReport {
        oriented,
        orthogonal,
        left_to_right,
        right_to_left,
        hypotheses,
        cone_product_order: p.graph.order(),
        conclusion,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VscOptions {
    /// Confirm coreness of the cone product directly when it has at most this many vertices.
    pub direct_check_limit: usize,
    /// Settle the cone condition by mapping the other members into a digon of the cone.
    pub digon_shortcut: bool,
}

impl Default for VscOptions {
    fn default() -> Self {
        VscOptions {
            direct_check_limit: DEFAULT_DIRECT_CHECK_LIMIT,
            digon_shortcut: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberReport {
    pub index: usize,
    pub order: usize,
    pub oriented: bool,
    pub core: Verdict,
    /// The product of the other members has no homomorphism to this member.
    pub others_not_to_member: Verdict,
    /// A homomorphism found from the product of the others, when the condition fails.
    pub others_to_member_witness: Option<Vec<usize>>,
    /// The product of the other members maps to the cone over this member.
    pub others_to_cone: Verdict,
    pub others_to_cone_witness: Option<Vec<usize>>,
    /// Every homomorphism from the product of all members to this member is onto.
    pub product_onto_member: Verdict,
    pub product_onto_member_counterexample: Option<Vec<usize>>,
    pub notes: Vec<String>,
}

impl MemberReport {
    pub fn conditions(&self) -> Verdict {
        Verdict::all([
            self.others_not_to_member,
            self.others_to_cone,
            self.product_onto_member,
        ])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub members: Vec<MemberReport>,
    /// Pairs `(i, j)` with a homomorphism from member `i` to member `j`.
    pub comparable_pairs: Vec<(usize, usize)>,
    pub incomparable: Verdict,
    /// Every member oriented and a core, members pairwise incomparable.
    pub preconditions: Verdict,
    /// Conjunction of the member conditions.
    pub conditions: Verdict,
    pub overall: Verdict,
    pub cone_product_order: usize,
    /// `is_core` on the product of cones, when it was small enough to run.
    pub direct_core_check: Option<Verdict>,
}

/// Checks, for each member `G` of `family` with `rest` the product of the other members:
/// `rest` has no homomorphism to `G`, `rest` maps to the cone over `G`, and every
/// homomorphism from the product of all members to `G` is onto. Together with the
/// preconditions these make the product of the cones a core.
pub fn verify_vsc_conditions(
    engine: &Engine,
    family: &[Digraph],
    opts: VscOptions,
) -> Result<FamilyReport> {
    if family.is_empty() {
        return Err(Error::InvalidParameters("empty family".into()));
    }
    let max = engine.config().max_vertices;
    let n = family.len();

    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let pair_verdicts: Vec<Verdict> =
        map_maybe_parallel(engine, &pairs, |&(i, j)| engine.hom_exists(&family[i], &family[j]));
    let mut comparable_pairs = Vec::new();
    let mut incomparable = Verdict::True;
    for (&(i, j), &v) in pairs.iter().zip(&pair_verdicts) {
        incomparable = incomparable.and(v.negate());
        if v == Verdict::True {
            comparable_pairs.push((i, j));
        }
    }

    let everything: Vec<&Digraph> = family.iter().collect();
    let full = product_of(&everything, max);

    let indices: Vec<usize> = (0..n).collect();
    let members = map_maybe_parallel(engine, &indices, |&i| {
        check_member(engine, family, i, full.as_ref().map(|p| &p.graph), opts)
    });

    let preconditions = Verdict::all(
        members
            .iter()
            .map(|m| Verdict::from_bool(m.oriented).and(m.core))
            .chain([incomparable]),
    );
    let conditions = Verdict::all(members.iter().map(MemberReport::conditions));

    let cone_product_order = family.iter().map(|g| g.order() + 1).product();
    let direct_core_check = if cone_product_order <= opts.direct_check_limit.min(max) {
        let cones: Vec<Digraph> = family.iter().map(|g| cone(g).into_graph()).collect();
        let refs: Vec<&Digraph> = cones.iter().collect();
        let p = product_of(&refs, max)?;
        Some(engine.is_core(&p.graph))
    } else {
        None
    };

    Ok(FamilyReport {
        members,
        comparable_pairs,
        incomparable,
        preconditions,
        conditions,
        overall: preconditions.and(conditions),
        cone_product_order,
        direct_core_check,
    })
}

fn check_member(
    engine: &Engine,
    family: &[Digraph],
    i: usize,
    full: std::result::Result<&Digraph, &Error>,
    opts: VscOptions,
) -> MemberReport {
    let g = &family[i];
    let max = engine.config().max_vertices;
    let mut notes = Vec::new();
    let mut report = MemberReport {
        index: i,
        order: g.order(),
        oriented: g.is_antisymmetric(),
        core: engine.is_core(g),
        others_not_to_member: Verdict::Inconclusive,
        others_to_member_witness: None,
        others_to_cone: Verdict::Inconclusive,
        others_to_cone_witness: None,
        product_onto_member: Verdict::Inconclusive,
        product_onto_member_counterexample: None,
        notes: Vec::new(),
    };

    let others: Vec<&Digraph> = family
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, h)| h)
        .collect();
    if others.is_empty() {
        // the empty product has nothing to say here; the product of cones is then the single
        // cone, a core exactly when the member is an oriented core
        report.others_not_to_member = Verdict::True;
        report.others_to_cone = Verdict::True;
        notes.push("single member: cone conditions vacuous".to_string());
    } else {
        match product_of(&others, max) {
            Ok(rest) => {
                match engine.hom(&rest.graph, g) {
                    Outcome::Found(f) => {
                        report.others_not_to_member = Verdict::False;
                        report.others_to_member_witness = Some(f.into_images());
                    }
                    Outcome::Absent => report.others_not_to_member = Verdict::True,
                    Outcome::Inconclusive => {}
                }
                let coned = cone(g);
                let shortcut = if opts.digon_shortcut {
                    digon_witness(engine, &rest, &others, coned.apex())
                } else {
                    None
                };
                if let Some(f) = shortcut {
                    debug_assert!(f.is_homomorphism(&rest.graph, coned.graph()));
                    report.others_to_cone = Verdict::True;
                    report.others_to_cone_witness = Some(f.into_images());
                    notes.push("cone condition via a digon".to_string());
                } else {
                    match engine.hom(&rest.graph, coned.graph()) {
                        Outcome::Found(f) => {
                            report.others_to_cone = Verdict::True;
                            report.others_to_cone_witness = Some(f.into_images());
                        }
                        Outcome::Absent => report.others_to_cone = Verdict::False,
                        Outcome::Inconclusive => {}
                    }
                }
            }
            Err(e) => notes.push(format!("product of the other members: {e}")),
        }
    }

    match full {
        Ok(all) => {
            let s = engine.all_homs_to_target_surjective(all, g);
            report.product_onto_member = s.verdict();
            report.product_onto_member_counterexample = counterexample(&s);
        }
        Err(e) => notes.push(format!("product of all members: {e}")),
    }
    report.notes = notes;
    report
}

/// Maps the product through some factor with a 2-colouring onto the digon between the apex and
/// base vertex 0 of the cone.
fn digon_witness(
    engine: &Engine,
    rest: &crate::product::Product,
    factors: &[&Digraph],
    apex: usize,
) -> Option<VertexMap> {
    if apex == 0 {
        return None;
    }
    let digon = Digraph::complete(2);
    for (j, h) in factors.iter().enumerate() {
        if let Outcome::Found(colour) = engine.hom(h, &digon) {
            let images = (0..rest.graph.order())
                .map(|v| {
                    if colour.apply(rest.coords(v)[j]) == 0 {
                        apex
                    } else {
                        0
                    }
                })
                .collect();
            return Some(VertexMap::new(images));
        }
    }
    None
}

fn map_maybe_parallel<T, R, F>(engine: &Engine, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if engine.config().parallel {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mountain::MountainSeq;

    fn mountain(s: &str) -> Digraph {
        s.parse::<MountainSeq>().unwrap().to_word().to_digraph()
    }

    #[test]
    fn orthogonality_examples() {
        let e = Engine::default();
        let c2 = Digraph::directed_cycle(2);
        let c3 = Digraph::directed_cycle(3);
        assert_eq!(are_orthogonal(&e, &c2, &c3).unwrap().verdict, Verdict::True);
        for g in [c3.clone(), Digraph::directed_path(3)] {
            assert_eq!(are_orthogonal(&e, &g, &g).unwrap().verdict, e.is_core(&g));
        }
        let not_core = c3.disjoint_union(&Digraph::empty(1));
        let r = are_orthogonal(&e, &c3, &not_core).unwrap();
        assert_eq!(r.verdict, Verdict::False);
        assert!(r.right_counterexample.is_some());
    }

    #[test]
    fn orthogonalize_examples() {
        let e = Engine::default();
        let c2 = Digraph::directed_cycle(2);
        let c3 = Digraph::directed_cycle(3);
        let c4 = Digraph::directed_cycle(4);

        let same = orthogonalize_pair(&e, &c2, &c3).unwrap();
        assert_eq!((same.left.len(), same.right.len()), (2, 3));

        let h = c3.disjoint_union(&c2);
        let r = orthogonalize_pair(&e, &c3, &h).unwrap();
        assert_eq!(r.left, vec![0, 1, 2]);
        assert_eq!(r.right, vec![0, 1, 2]);
        assert!(r.certified);

        let r = orthogonalize_pair(&e, &c2, &c4).unwrap();
        assert_eq!((r.left.len(), r.right.len()), (2, 4));
    }

    #[test]
    fn orthogonalized_factors_keep_the_product_and_are_orthogonal_to_it() {
        let e = Engine::default();
        let g = Digraph::directed_cycle(2).disjoint_union(&Digraph::directed_path(3));
        let h = Digraph::directed_cycle(4).disjoint_union(&Digraph::directed_cycle(3));
        let r = orthogonalize_pair(&e, &g, &h).unwrap();
        let p = tensor_product(&g, &h, 1000).unwrap().graph;
        let q = tensor_product(&r.left_graph, &r.right_graph, 1000).unwrap().graph;
        assert_eq!(e.are_hom_equivalent(&p, &q), Verdict::True);
        let core = e.compute_core(&p).core;
        for side in [&r.left_graph, &r.right_graph] {
            assert_eq!(
                e.all_homs_to_target_surjective(&core, side).verdict(),
                Verdict::True
            );
        }
    }

    #[test]
    fn two_cone_on_small_mountains() {
        let e = Engine::default();
        let (a, b) = (mountain("3,1@k=3"), mountain("3,2@k=3"));
        let r = verify_two_cone_theorem(&e, &a, &b).unwrap();
        assert_eq!(r.hypotheses, Verdict::True);
        assert_eq!(r.conclusion, Verdict::True);
        assert_eq!(r.cone_product_order, 15 * 17);

        let same = verify_two_cone_theorem(&e, &a, &a).unwrap();
        assert_eq!(same.hypotheses, Verdict::False);
    }

    #[test]
    fn family_preconditions() {
        let e = Engine::default();
        let bad = verify_vsc_conditions(
            &e,
            &[Digraph::directed_cycle(2), Digraph::directed_cycle(3)],
            VscOptions::default(),
        )
        .unwrap();
        assert!(!bad.members[0].oriented);
        assert_eq!(bad.preconditions, Verdict::False);

        let single =
            verify_vsc_conditions(&e, &[Digraph::directed_path(2)], VscOptions::default()).unwrap();
        assert_eq!(single.members[0].product_onto_member, Verdict::True);
        assert_eq!(single.overall, Verdict::True);
        assert_eq!(single.direct_core_check, Some(Verdict::True));
    }

    #[test]
    fn small_mountain_family_passes_with_and_without_shortcut() {
        let e = Engine::default();
        let fam = [mountain("3,2@k=3"), mountain("3,1@k=3")];
        for digon_shortcut in [false, true] {
            let opts = VscOptions {
                digon_shortcut,
                ..VscOptions::default()
            };
            let r = verify_vsc_conditions(&e, &fam, opts).unwrap();
            assert_eq!(r.overall, Verdict::True, "{r:?}");
            assert_eq!(r.direct_core_check, Some(Verdict::True));
        }
    }
}
