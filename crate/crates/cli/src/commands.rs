use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use coreprod::mountain::{family_count, gen_decreasing_mountains, omega_sequence, MountainSeq};
use coreprod::orthogonal::{are_orthogonal, orthogonalize_pair};
use coreprod::{product_of, Constraints, Digraph, Engine, Outcome, SearchConfig, Verdict};
use serde_json::{json, Value};

use crate::input::{load, Input};
use crate::report::{exit_code, Recorder};
use crate::{verify, Cli, Command, GadgetCommand, Global, MountainsCommand};

/// What a command produced besides its checks.
#[derive(Default)]
pub struct Output {
    /// Lines for the text report.
    pub lines: Vec<String>,
    /// Set when the command's main artifact went to stdout, so the summary moves to stderr.
    pub artifact_on_stdout: bool,
}

pub fn run(cli: Cli, args: Vec<String>) -> Result<u8> {
    let global = cli.global.clone();
    let config = SearchConfig {
        node_budget: global.budget_nodes,
        max_vertices: global.max_vertices,
        parallel: global.threads > 1,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(global.threads.max(1))
        .build()
        .context("starting worker threads")?;
    let engine = Engine::new(config);
    pool.install(|| {
        let mut rec = Recorder::new(&engine, recorded_command(&args));
        let out = dispatch(cli.command, &global, &mut rec)?;
        let report = rec.finish(global.timings);
        let json_text = serde_json::to_string_pretty(&report)? + "\n";
        if let Some(p) = &global.report {
            fs::write(p, &json_text).with_context(|| format!("writing {}", p.display()))?;
        }
        if global.json {
            print!("{json_text}");
        } else {
            let mut text = out.lines;
            for c in &report.checks {
                text.push(format!("{}: {}", c.name, verdict_word(c.verdict)));
            }
            text.push(format!("verdict: {}", verdict_word(report.verdict)));
            if let Some(ms) = report.elapsed_ms {
                text.push(format!("elapsed: {ms} ms"));
            }
            let text = text.join("\n");
            if out.artifact_on_stdout {
                eprintln!("{text}");
            } else {
                println!("{text}");
            }
        }
        Ok(exit_code(report.verdict))
    })
}

/// The argument list minus flags that must not change the report.
fn recorded_command(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args {
        if std::mem::take(&mut skip) {
            continue;
        }
        match a.as_str() {
            "--threads" | "--report" => skip = true,
            "--timings" => {}
            s if s.starts_with("--threads=") || s.starts_with("--report=") => {}
            _ => out.push(a.clone()),
        }
    }
    out
}

pub fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::True => "true",
        Verdict::False => "false",
        Verdict::Inconclusive => "inconclusive",
    }
}

pub fn load_all(rec: &mut Recorder, specs: &[String]) -> Result<Vec<Input>> {
    specs
        .iter()
        .map(|s| {
            let i = load(s)?;
            rec.input(&i);
            Ok(i)
        })
        .collect()
}

pub fn load_one(rec: &mut Recorder, spec: &str) -> Result<Input> {
    let i = load(spec)?;
    rec.input(&i);
    Ok(i)
}

/// Writes `text` to `path`, or returns it for stdout / the JSON report.
fn deliver(global: &Global, path: Option<&Path>, text: String, out: &mut Output) -> Result<Value> {
    match path {
        Some(p) => {
            fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
            Ok(json!({ "written": p.display().to_string() }))
        }
        None if global.json => Ok(Value::String(text)),
        None => {
            print!("{text}");
            out.artifact_on_stdout = true;
            Ok(Value::Null)
        }
    }
}

fn dispatch(command: Command, global: &Global, rec: &mut Recorder) -> Result<Output> {
    let mut out = Output::default();
    match command {
        Command::Parse { input } => {
            let g = load_one(rec, &input)?.graph;
            let components = g.weak_components().len();
            out.lines.push(format!(
                "order {}, arcs {}, {} component(s), symmetric {}, oriented {}",
                g.order(),
                g.arc_count(),
                components,
                g.is_symmetric(),
                g.is_antisymmetric()
            ));
            let text = deliver(global, None, g.to_text(), &mut out)?;
            rec.output(json!({
                "order": g.order(),
                "arcs": g.arc_count(),
                "components": components,
                "symmetric": g.is_symmetric(),
                "oriented": g.is_antisymmetric(),
                "text": text,
            }));
        }
        Command::Product { inputs, output } => {
            if inputs.len() < 2 {
                bail!("product needs at least two digraphs, got {}", inputs.len());
            }
            let loaded = load_all(rec, &inputs)?;
            let refs: Vec<&Digraph> = loaded.iter().map(|i| &i.graph).collect();
            let p = product_of(&refs, global.max_vertices)?;
            out.lines.push(format!("order {}, arcs {}", p.graph.order(), p.graph.arc_count()));
            let written = deliver(global, output.as_deref(), p.graph.to_text(), &mut out)?;
            rec.output(json!({
                "factor_orders": p.factor_orders(),
                "order": p.graph.order(),
                "arcs": p.graph.arc_count(),
                "graph": written,
            }));
        }
        Command::Core { input, output, witness } => {
            let g = load_one(rec, &input)?.graph;
            let before = rec.engine().nodes();
            let c = rec.engine().compute_core(&g);
            let spent = rec.engine().nodes() - before;
            let w = json!({
                "vertices": c.vertices,
                "retract": c.retract.images(),
                "certified": c.certified,
            });
            if let Some(p) = &witness {
                fs::write(p, serde_json::to_string_pretty(&w)? + "\n")
                    .with_context(|| format!("writing {}", p.display()))?;
            }
            let verdict = if c.certified { Verdict::True } else { Verdict::Inconclusive };
            rec.push("certified core", verdict, spent, Some(w), None);
            out.lines.push(format!("core order {} of {}, arcs {}", c.core.order(), g.order(), c.core.arc_count()));
            let written = deliver(global, output.as_deref(), c.core.to_text(), &mut out)?;
            rec.output(json!({ "order": c.core.order(), "arcs": c.core.arc_count(), "graph": written }));
        }
        Command::IsCore { input } => {
            let g = load_one(rec, &input)?.graph;
            rec.check("core", |e| (e.is_core(&g), None, None));
        }
        Command::Hom { source, target, pin, avoid } => {
            let (s, t) = (load_one(rec, &source)?.graph, load_one(rec, &target)?.graph);
            let mut cons = Constraints::new();
            for (u, v) in pin {
                if u >= s.order() || v >= t.order() {
                    bail!("pin {u}={v} is out of range for orders {} and {}", s.order(), t.order());
                }
                cons = cons.pin(u, v);
            }
            for v in avoid {
                if v >= t.order() {
                    bail!("avoided vertex {v} is out of range for order {}", t.order());
                }
                cons = cons.avoid(v);
            }
            rec.check("homomorphism", |e| match e.find_homomorphism(&s, &t, &cons) {
                Outcome::Found(f) => (Verdict::True, Some(json!(f.images())), None),
                other => (other.verdict(), None, None),
            });
        }
        Command::Orthogonal { left, right } => {
            let (g, h) = (load_one(rec, &left)?.graph, load_one(rec, &right)?.graph);
            let before = rec.engine().nodes();
            let r = are_orthogonal(rec.engine(), &g, &h)?;
            let spent = rec.engine().nodes() - before;
            rec.push("onto left", r.onto_left, spent, r.left_counterexample.as_ref().map(|c| json!(c)), None);
            rec.push("onto right", r.onto_right, 0, r.right_counterexample.as_ref().map(|c| json!(c)), None);
            rec.output(json!({ "product_order": r.product_order }));
        }
        Command::Orthogonalize { left, right, output_prefix } => {
            let (g, h) = (load_one(rec, &left)?.graph, load_one(rec, &right)?.graph);
            let before = rec.engine().nodes();
            let r = orthogonalize_pair(rec.engine(), &g, &h)?;
            let spent = rec.engine().nodes() - before;
            let verdict = if r.certified { Verdict::True } else { Verdict::Inconclusive };
            rec.push("minimal", verdict, spent, None, None);
            out.lines.push(format!("left keeps {:?}", r.left));
            out.lines.push(format!("right keeps {:?}", r.right));
            let mut files = Vec::new();
            if let Some(prefix) = &output_prefix {
                for (side, graph) in [("left", &r.left_graph), ("right", &r.right_graph)] {
                    let p = PathBuf::from(format!("{}.{side}.dg", prefix.display()));
                    fs::write(&p, graph.to_text()).with_context(|| format!("writing {}", p.display()))?;
                    files.push(p.display().to_string());
                }
            }
            rec.output(json!({
                "left": r.left,
                "right": r.right,
                "left_graph": r.left_graph.to_text(),
                "right_graph": r.right_graph.to_text(),
                "written": files,
            }));
        }
        Command::Mountains(MountainsCommand::Gen { height, peaks, mode }) => {
            let family = gen_decreasing_mountains(height, peaks, mode.into())?;
            let counts = family_count(height, peaks)?;
            out.lines.extend(family.iter().map(|m| format!("{m}  ({} vertices)", m.order())));
            out.lines.push(format!(
                "{} members; {} with the top peak fixed, {} over all peaks",
                family.len(),
                counts.top_peak_fixed,
                counts.all_peaks
            ));
            rec.output(json!({
                "members": family.iter().map(|m| json!({ "sequence": m.to_string(), "order": m.order() })).collect::<Vec<_>>(),
                "counts": counts,
            }));
        }
        Command::Mountains(MountainsCommand::Omega { sequence }) => {
            let d: MountainSeq = sequence.parse()?;
            let omega = omega_sequence(&d)?;
            out.lines.push(omega.to_string());
            rec.output(json!({ "sequence": d.to_string(), "omega": omega.to_string(), "order": omega.order() }));
        }
        Command::Verify(v) => verify::run(v, global, rec, &mut out)?,
        Command::Gadget(GadgetCommand::Build { input, output, sidecar }) => {
            let g = load_one(rec, &input)?.graph;
            let gg = coreprod::gadget::build_gadget_graph(&g);
            if let Some(p) = &sidecar {
                fs::write(p, serde_json::to_string_pretty(&gg.layout)? + "\n")
                    .with_context(|| format!("writing {}", p.display()))?;
            }
            let written = deliver(global, output.as_deref(), gg.graph.to_text(), &mut out)?;
            rec.output(json!({ "order": gg.graph.order(), "arcs": gg.graph.arc_count(), "graph": written }));
        }
        Command::ExportDot { input, output, name } => {
            let g = load_one(rec, &input)?.graph;
            let written = deliver(global, output.as_deref(), g.to_dot(&name), &mut out)?;
            rec.output(json!({ "dot": written }));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thread_flags_are_not_recorded() {
        let args: Vec<String> = ["--threads", "4", "core", "x", "--timings", "--threads=2"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(recorded_command(&args), vec!["core", "x"]);
    }
}
