//! Decoder robustness on the fuzz seed corpus and random mutations of it.

use std::fs;
use std::path::PathBuf;

use proptest::prelude::*;
use tropconf::io::{
    config_from_json, fan_from_json, fan_to_json, scaffold_from_json, stacky_from_json, to_canonical_string,
};
use tropconf::parse::{parse_constraints, parse_point};
use tropconf::reference::parse_bisequence;

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.display().to_string(), fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    out.into_iter().map(|(_, b)| b).collect()
}

fn run(target: &str, data: &[u8]) -> bool {
    let text = |b: &[u8]| String::from_utf8(b.to_vec()).ok();
    match target {
        "fan_json" => text(data).is_some_and(|t| {
            fan_from_json(&t).is_ok_and(|f| fan_from_json(&to_canonical_string(&fan_to_json(&f))).unwrap() == f)
        }),
        "stacky_json" => text(data).is_some_and(|t| stacky_from_json(&t).is_ok()),
        "scaffold_json" => text(data).is_some_and(|t| scaffold_from_json(&t).is_ok()),
        "config_json" => text(data).is_some_and(|t| config_from_json(&t).is_ok()),
        "point" => text(data).is_some_and(|t| parse_point(&t).is_ok()),
        "constraints" => {
            data.len() >= 2
                && text(&data[2..]).is_some_and(|t| {
                    parse_constraints(&t, 1 + (data[0] % 4) as usize, 1 + (data[1] % 3) as usize).is_ok()
                })
        }
        "bisequence" => {
            !data.is_empty()
                && text(&data[1..]).is_some_and(|t| parse_bisequence(&t, 1 + (data[0] % 5) as usize).is_ok())
        }
        _ => unreachable!(),
    }
}

const TARGETS: [&str; 7] = [
    "fan_json",
    "stacky_json",
    "scaffold_json",
    "config_json",
    "point",
    "constraints",
    "bisequence",
];

#[test]
fn seeds_decode() {
    for t in TARGETS {
        let s = seeds(t);
        assert!(!s.is_empty(), "{t} has no seeds");
        for (i, d) in s.iter().enumerate() {
            assert!(run(t, d), "{t} seed {i} does not decode");
        }
    }
}

#[derive(Clone, Debug)]
enum Edit {
    Flip(usize, u8),
    Insert(usize, u8),
    Delete(usize),
}

fn apply(mut d: Vec<u8>, edits: &[Edit]) -> Vec<u8> {
    for e in edits {
        match *e {
            Edit::Flip(i, b) if !d.is_empty() => {
                let k = i % d.len();
                d[k] ^= b;
            }
            Edit::Insert(i, b) => {
                let k = i % (d.len() + 1);
                d.insert(k, b);
            }
            Edit::Delete(i) if !d.is_empty() => {
                let k = i % d.len();
                d.remove(k);
            }
            _ => {}
        }
    }
    d
}

fn edit() -> impl Strategy<Value = Edit> {
    let byte = prop_oneof![
        any::<u8>(),
        prop::sample::select(b"-0123456789,[]{}\":/|<=>+ab.p".to_vec())
    ];
    prop_oneof![
        (any::<usize>(), 1u8..).prop_map(|(i, b)| Edit::Flip(i, b)),
        (any::<usize>(), byte).prop_map(|(i, b)| Edit::Insert(i, b)),
        any::<usize>().prop_map(Edit::Delete),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]
    #[test]
    fn mutated_inputs_never_panic(t in 0..TARGETS.len(), s in any::<usize>(), edits in prop::collection::vec(edit(), 1..6)) {
        let target = TARGETS[t];
        let all = seeds(target);
        let data = apply(all[s % all.len()].clone(), &edits);
        let _ = run(target, &data);
    }
}
