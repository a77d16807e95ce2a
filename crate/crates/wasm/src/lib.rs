//! Browser bindings for the demo page in `www/`. Every export takes plain strings and returns
//! a JSON string, so the page needs no glue beyond `JSON.parse`.

use coreprod::mountain::{omega_sequence, seq_homomorphic, MountainSeq};
use coreprod::{Digraph, Engine, SearchConfig, Verdict};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Keeps a runaway request from freezing the tab.
const DEMO_BUDGET: u64 = 2_000_000;
const DEMO_MAX_VERTICES: usize = 5_000;

fn engine() -> Engine {
    Engine::new(SearchConfig {
        node_budget: DEMO_BUDGET,
        max_vertices: DEMO_MAX_VERTICES,
        parallel: false,
    })
}

#[derive(Serialize)]
struct Mountain {
    sequence: String,
    order: usize,
    /// Level of each vertex along the path, starting at 0.
    heights: Vec<usize>,
    separator: Option<String>,
    separator_heights: Option<Vec<usize>>,
}

pub fn mountain_json(sequence: &str) -> Result<String, String> {
    let m: MountainSeq = sequence.parse().map_err(|e| format!("{e}"))?;
    let (separator, separator_heights) = match omega_sequence(&m) {
        Ok(o) => (Some(o.to_string()), Some(o.to_word().heights())),
        Err(_) => (None, None),
    };
    let out = Mountain {
        sequence: m.to_string(),
        order: m.order(),
        heights: m.to_word().heights(),
        separator,
        separator_heights,
    };
    Ok(serde_json::to_string(&out).expect("plain data"))
}

#[derive(Serialize)]
struct Comparison {
    left_to_right: bool,
    right_to_left: bool,
    /// The same questions answered by a plain homomorphism search.
    search_left_to_right: Verdict,
    search_right_to_left: Verdict,
}

pub fn compare_mountains_json(left: &str, right: &str) -> Result<String, String> {
    let l: MountainSeq = left.parse().map_err(|e| format!("{e}"))?;
    let r: MountainSeq = right.parse().map_err(|e| format!("{e}"))?;
    let lr = seq_homomorphic(&l, &r).map_err(|e| format!("{e}"))?;
    let rl = seq_homomorphic(&r, &l).map_err(|e| format!("{e}"))?;
    let (gl, gr) = (l.to_word().to_digraph(), r.to_word().to_digraph());
    let e = engine();
    let out = Comparison {
        left_to_right: lr,
        right_to_left: rl,
        search_left_to_right: e.hom_exists(&gl, &gr),
        search_right_to_left: e.hom_exists(&gr, &gl),
    };
    Ok(serde_json::to_string(&out).expect("plain data"))
}

#[derive(Serialize)]
struct CycleCore {
    lengths: Vec<usize>,
    product_order: usize,
    core_order: usize,
    lcm: usize,
    certified: bool,
    /// Core vertex sequence along the cycle, as product coordinates.
    cycle: Vec<Vec<usize>>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn cycle_product_core_json(lengths: &str) -> Result<String, String> {
    let lengths: Vec<usize> = lengths
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|_| format!("bad cycle length {s:?}")))
        .collect::<Result<_, _>>()?;
    if lengths.is_empty() {
        return Err("give at least one cycle length".into());
    }
    if let Some(&n) = lengths.iter().find(|&&n| n < 2) {
        return Err(format!("cycle length {n} is below 2"));
    }
    let cycles: Vec<Digraph> = lengths.iter().map(|&n| Digraph::directed_cycle(n)).collect();
    let refs: Vec<&Digraph> = cycles.iter().collect();
    let e = engine();
    let (p, c) = e.core_of_product(&refs).map_err(|e| format!("{e}"))?;
    let lcm = lengths.iter().fold(1, |a, &b| a / gcd(a, b) * b);
    // walk the core cycle from its first vertex
    let mut cycle = Vec::new();
    if let Some(&start) = c.vertices.first() {
        let mut v = start;
        loop {
            cycle.push(p.coords(v));
            let next = p.graph.out_neighbors(v).map(|w| c.retract.apply(w)).next();
            match next {
                Some(w) if w != start && cycle.len() < c.vertices.len() => v = w,
                _ => break,
            }
        }
    }
    let out = CycleCore {
        product_order: p.graph.order(),
        core_order: c.core.order(),
        lcm,
        certified: c.certified,
        cycle,
        lengths,
    };
    Ok(serde_json::to_string(&out).expect("plain data"))
}

#[wasm_bindgen]
pub fn mountain(sequence: &str) -> Result<String, JsError> {
    mountain_json(sequence).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn compare_mountains(left: &str, right: &str) -> Result<String, JsError> {
    compare_mountains_json(left, right).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn cycle_product_core(lengths: &str) -> Result<String, JsError> {
    cycle_product_core_json(lengths).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn mountain_profile_and_separator() {
        let v = parse(mountain_json("3,2,1@k=3").unwrap());
        assert_eq!(v["separator"], "3,1,2@k=3");
        let heights = v["heights"].as_array().unwrap();
        assert_eq!(heights.len(), v["order"].as_u64().unwrap() as usize);
        assert_eq!(heights[0], 0);
        let single = parse(mountain_json("2@k=2").unwrap());
        assert_eq!(single["separator"], "2@k=2");
        assert!(mountain_json("3,x@k=3").is_err());
    }

    #[test]
    fn comparison_agrees_with_search() {
        let v = parse(compare_mountains_json("3,1@k=3", "3,2@k=3").unwrap());
        assert_eq!(v["left_to_right"], false);
        assert_eq!(v["search_left_to_right"], "false");
        assert_eq!(v["right_to_left"], false);
        let v = parse(compare_mountains_json("3,2,1@k=3", "3,1@k=3").unwrap());
        assert_eq!(v["left_to_right"], v["search_left_to_right"] == "true");
    }

    #[test]
    fn cycle_cores_have_lcm_order() {
        let v = parse(cycle_product_core_json("4, 6").unwrap());
        assert_eq!(v["product_order"], 24);
        assert_eq!(v["core_order"], 12);
        assert_eq!(v["lcm"], 12);
        assert_eq!(v["cycle"].as_array().unwrap().len(), 12);
        assert!(cycle_product_core_json("1,3").is_err());
        assert!(cycle_product_core_json("").is_err());
    }
}
