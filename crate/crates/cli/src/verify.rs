use anyhow::{bail, Result};
use coreprod::gadget::verify_gadget_equivalence;
use coreprod::mountain::{gen_decreasing_mountains, omega_sequence, seq_homomorphic};
use coreprod::orthogonal::{verify_two_cone_theorem, verify_vsc_conditions, VscOptions};
use coreprod::path::{PathWord, Step};
use coreprod::sum::SumOfPaths;
use coreprod::{Digraph, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::commands::{load_all, load_one, Output};
use crate::report::Recorder;
use crate::{FamilyKind, Global, VerifyCommand, VscArgs};

pub fn run(cmd: VerifyCommand, global: &Global, rec: &mut Recorder, out: &mut Output) -> Result<()> {
    match cmd {
        VerifyCommand::TwoCone { left, right } => {
            let (g, h) = (load_one(rec, &left)?.graph, load_one(rec, &right)?.graph);
            let before = rec.engine().nodes();
            let r = verify_two_cone_theorem(rec.engine(), &g, &h)?;
            let spent = rec.engine().nodes() - before;
            rec.push("hypotheses", r.hypotheses, spent, None, Some(json!({
                "oriented": r.oriented,
                "orthogonal": r.orthogonal,
                "left_to_right": r.left_to_right,
                "right_to_left": r.right_to_left,
            })));
            rec.push("cone product is a core", r.conclusion, 0, None, None);
            out.lines.push(format!("cone product has {} vertices", r.cone_product_order));
            rec.output(json!(r));
        }
        VerifyCommand::Vsc(args) => vsc(args, rec, out)?,
        VerifyCommand::Gadget { d1, d2 } => {
            let (a, b) = (load_one(rec, &d1)?.graph, load_one(rec, &d2)?.graph);
            let before = rec.engine().nodes();
            let r = verify_gadget_equivalence(rec.engine(), &a, &b)?;
            let spent = rec.engine().nodes() - before;
            out.lines.push(format!(
                "digraph homomorphism: {}, gadget graph homomorphism: {}",
                crate::commands::verdict_word(r.digraph_hom),
                crate::commands::verdict_word(r.graph_hom)
            ));
            out.lines.push(format!(
                "restrictions to source vertices are homomorphisms without collapsing: {}",
                crate::commands::verdict_word(r.restrictions_are_homs)
            ));
            rec.push("equivalent", r.equivalent, spent, None, None);
            rec.push(
                "collapsed restrictions are homomorphisms",
                r.induced_maps_are_homs,
                0,
                r.induced_counterexample.as_ref().map(|c| json!(c)),
                Some(json!({ "searches": r.searches })),
            );
            rec.output(json!(r));
        }
        VerifyCommand::MountainFamily { height, peaks, mode } => {
            let family = gen_decreasing_mountains(height, peaks, mode.into())?;
            let mut comparable = Vec::new();
            for (i, a) in family.iter().enumerate() {
                for (j, b) in family.iter().enumerate() {
                    if i != j && seq_homomorphic(a, b)? {
                        comparable.push((a.to_string(), b.to_string()));
                    }
                }
            }
            rec.push(
                "pairwise incomparable",
                Verdict::from_bool(comparable.is_empty()),
                0,
                None,
                Some(json!({ "comparable": comparable })),
            );
            let mut separators = Vec::new();
            let mut failures = Vec::new();
            if peaks >= 2 {
                for (i, d) in family.iter().enumerate() {
                    let omega = omega_sequence(d)?;
                    for (j, other) in family.iter().enumerate() {
                        if seq_homomorphic(&omega, other)? != (i != j) {
                            failures.push(format!("{omega} vs {other}"));
                        }
                    }
                    separators.push(json!({ "member": d.to_string(), "separator": omega.to_string() }));
                }
                rec.push(
                    "separators",
                    Verdict::from_bool(failures.is_empty()),
                    0,
                    None,
                    Some(json!({ "failures": failures })),
                );
            } else {
                out.lines.push("a single peak leaves nothing to separate".into());
            }
            out.lines.push(format!("{} members", family.len()));
            rec.output(json!({
                "members": family.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                "separators": separators,
            }));
        }
        VerifyCommand::Lattice { k, trials, max_order } => lattice(global.seed, k, trials, max_order, rec, out)?,
    }
    Ok(())
}

fn vsc(args: VscArgs, rec: &mut Recorder, out: &mut Output) -> Result<()> {
    let family: Vec<Digraph> = match args.family {
        Some(FamilyKind::Dm) => {
            let (Some(h), Some(l)) = (args.height, args.peaks) else {
                bail!("--family dm needs --h and --l");
            };
            let seqs = gen_decreasing_mountains(h, l, args.mode.into())?;
            out.lines.extend(seqs.iter().map(|s| format!("member {s}")));
            seqs.iter().map(|s| s.to_word().to_digraph()).collect()
        }
        None => {
            if args.member.is_empty() {
                bail!("give --family dm --h H --l L, or at least one --member");
            }
            load_all(rec, &args.member)?.into_iter().map(|i| i.graph).collect()
        }
    };
    let opts = VscOptions {
        direct_check_limit: args.direct_check_limit,
        digon_shortcut: args.digon_shortcut,
    };
    let before = rec.engine().nodes();
    let r = verify_vsc_conditions(rec.engine(), &family, opts)?;
    let spent = rec.engine().nodes() - before;
    rec.push("preconditions", r.preconditions, spent, None, None);
    rec.push("member conditions", r.conditions, 0, None, None);
    if let Some(v) = r.direct_core_check {
        rec.push("cone product is a core", v, 0, None, None);
    }
    out.lines.push(format!("cone product has {} vertices", r.cone_product_order));
    for m in &r.members {
        for note in &m.notes {
            out.lines.push(format!("member {}: {note}", m.index));
        }
    }
    rec.output(json!(r));
    Ok(())
}

/// A random element of height `k`: a walk inside the window that ends on the top level.
fn random_word(rng: &mut ChaCha8Rng, k: usize, max_order: usize) -> PathWord {
    if k <= 2 {
        return PathWord::directed(k);
    }
    let top = k - 1;
    loop {
        let mut h = 1;
        let mut steps = Vec::new();
        for _ in 0..rng.gen_range(0..max_order) {
            let up = h == 1 || (h < top && rng.gen_bool(0.5));
            steps.push(if up { Step::Up } else { Step::Down });
            h = if up { h + 1 } else { h - 1 };
        }
        while h < top {
            steps.push(Step::Up);
            h += 1;
        }
        let w = PathWord::new(k, steps).expect("walk stays in the window");
        if w.order() <= max_order {
            return w;
        }
    }
}

fn random_sum(rng: &mut ChaCha8Rng, k: usize, max_order: usize) -> Result<SumOfPaths> {
    let n = rng.gen_range(0..=3);
    let words: Vec<PathWord> = (0..n).map(|_| random_word(rng, k, max_order)).collect();
    Ok(SumOfPaths::normalize(k, words)?)
}

fn lattice(seed: u64, k: usize, trials: usize, max_order: usize, rec: &mut Recorder, out: &mut Output) -> Result<()> {
    if k == 0 {
        bail!("height must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (zero, one) = (SumOfPaths::zero(k), SumOfPaths::one(k));
    let mut failures: Vec<String> = Vec::new();
    let mut order_mismatch: Vec<String> = Vec::new();
    for t in 0..trials {
        let a = random_sum(&mut rng, k, max_order)?;
        let b = random_sum(&mut rng, k, max_order)?;
        let c = random_sum(&mut rng, k, max_order)?;
        let laws = [
            ("join commutes", a.join(&b)? == b.join(&a)?),
            ("meet commutes", a.meet(&b)? == b.meet(&a)?),
            ("join associates", a.join(&b)?.join(&c)? == a.join(&b.join(&c)?)?),
            ("meet associates", a.meet(&b)?.meet(&c)? == a.meet(&b.meet(&c)?)?),
            ("absorption", a.join(&a.meet(&b)?)? == a && a.meet(&a.join(&b)?)? == a),
            ("meet distributes", a.meet(&b.join(&c)?)? == a.meet(&b)?.join(&a.meet(&c)?)?),
            ("join distributes", a.join(&b.meet(&c)?)? == a.join(&b)?.meet(&a.join(&c)?)?),
            ("bounds", a.join(&zero)? == a && a.meet(&one)? == a && a.meet(&zero)? == zero),
        ];
        for (name, ok) in laws {
            if !ok {
                failures.push(format!("trial {t}: {name} fails for {a} / {b} / {c}"));
            }
        }
        // the order on sums against a plain homomorphism search
        let generic = rec.engine().hom_exists(&a.to_digraph(), &b.to_digraph());
        if generic != Verdict::Inconclusive && generic.is_true() != a.maps_to(&b)? {
            order_mismatch.push(format!("trial {t}: {a} -> {b}"));
        }
    }
    out.lines.push(format!("{trials} random triples of height {k}, seed {seed}"));
    rec.push("lattice laws", Verdict::from_bool(failures.is_empty()), 0, None, Some(json!({ "failures": failures })));
    rec.push(
        "order agrees with search",
        Verdict::from_bool(order_mismatch.is_empty()),
        0,
        None,
        Some(json!({ "mismatches": order_mismatch })),
    );
    rec.output(json!({ "k": k, "trials": trials, "seed": seed }));
    Ok(())
}
