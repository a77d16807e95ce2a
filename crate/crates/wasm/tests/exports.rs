use coreprod_wasm::{compare_mountains_json, cycle_product_core_json, mountain_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

fn lcm(a: u64, b: u64) -> u64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

#[test]
fn every_small_cycle_pair_folds_to_its_lcm() {
    for a in 2..=6u64 {
        for b in 2..=6u64 {
            let v = parse(cycle_product_core_json(&format!("{a},{b}")).unwrap());
            assert_eq!(v["core_order"].as_u64(), Some(lcm(a, b)), "{a},{b}");
            assert_eq!(v["certified"], true);
            // consecutive coordinates advance by one in every factor
            let cycle = v["cycle"].as_array().unwrap();
            for w in cycle.windows(2) {
                assert_eq!((w[0][0].as_u64().unwrap() + 1) % a, w[1][0].as_u64().unwrap());
                assert_eq!((w[0][1].as_u64().unwrap() + 1) % b, w[1][1].as_u64().unwrap());
            }
        }
    }
}

#[test]
fn mountain_heights_rise_and_fall_by_one() {
    for s in ["3,1@k=3", "4,2,1@k=4", "1,1,1@k=1"] {
        let v = parse(mountain_json(s).unwrap());
        let h: Vec<i64> = v["heights"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
        assert!(h.windows(2).all(|w| (w[0] - w[1]).abs() == 1), "{s}");
    }
}

#[test]
fn criterion_and_search_agree_on_small_mountains() {
    let seqs = ["3@k=3", "3,1@k=3", "3,2@k=3", "3,2,1@k=3", "3,1,2@k=3", "2,3@k=3"];
    for l in seqs {
        for r in seqs {
            let v = parse(compare_mountains_json(l, r).unwrap());
            assert_eq!(v["left_to_right"] == true, v["search_left_to_right"] == "true", "{l} {r}");
            assert_eq!(v["right_to_left"] == true, v["search_right_to_left"] == "true", "{l} {r}");
        }
    }
}

#[test]
fn bad_input_is_an_error_not_a_panic() {
    assert!(mountain_json("").is_err());
    assert!(compare_mountains_json("3,1@k=3", "3,1@k=4").is_err());
    assert!(cycle_product_core_json("3,x").is_err());
}
