//! JSON encoding of fans, stacky fans, scaffolds, configuration fans and
//! stratum reports. Integers are written as decimal strings; object keys are
//! sorted and cones appear in canonical order, so output is byte-stable.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::chow::ConfigurationFan;
use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::expansions::StratumReport;
use crate::fan::Fan;
use crate::linalg::{Int, LatticeBasis, Rat};
use crate::scaffold::Scaffold;
use crate::stacky::StackyFan;

/// Upper bounds accepted by the decoders.
pub const MAX_RANK: usize = 24;
pub const MAX_GENERATORS: usize = 256;
pub const MAX_CONES: usize = 100_000;

pub fn int_str(v: &Int) -> String {
    v.to_string()
}

pub fn rat_str(v: &Rat) -> String {
    let (n, d) = (v.numerator(), v.denominator());
    if *d == dashu_int::UBig::ONE {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

fn int_rows(rows: &[Vec<Int>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().map(|x| Value::String(int_str(x))).collect()))
            .collect(),
    )
}

fn rat_rows(rows: &[Vec<Rat>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().map(|x| Value::String(rat_str(x))).collect()))
            .collect(),
    )
}

fn rat_list(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(rat_str(x))).collect())
}

pub fn cone_to_json(c: &Cone) -> Value {
    json!({"rays": int_rows(c.rays()), "lineality": int_rows(c.lineality().basis())})
}

pub fn fan_to_json(f: &Fan) -> Value {
    json!({
        "ambient_rank": f.rank(),
        "maximal_cones": f.maximal_cones().iter().map(cone_to_json).collect::<Vec<_>>(),
        "complete": f.is_complete(),
    })
}

pub fn stacky_to_json(s: &StackyFan) -> Result<Value> {
    let mut v = fan_to_json(s.fan());
    if s.is_trivial() {
        return Ok(v);
    }
    let cones = v["maximal_cones"].as_array_mut().expect("array");
    for (c, obj) in s.fan().maximal_cones().iter().zip(cones.iter_mut()) {
        let l = s.sublattice(c)?;
        if l != c.span_lattice() {
            obj["sublattice_hnf"] = int_rows(l.basis());
        }
    }
    // face entries not recoverable from the maximal cones
    let derived = StackyFan::new(
        s.fan().clone(),
        s.fan()
            .maximal_cones()
            .iter()
            .map(|c| Ok((c.clone(), s.sublattice(c)?)))
            .collect::<Result<BTreeMap<_, _>>>()?,
    )?;
    let mut faces = Vec::new();
    for (c, l) in s.explicit() {
        if derived.sublattice(c)? != *l {
            let mut o = cone_to_json(c);
            o["sublattice_hnf"] = int_rows(l.basis());
            faces.push(o);
        }
    }
    if !faces.is_empty() {
        v["face_sublattices"] = Value::Array(faces);
    }
    Ok(v)
}

pub fn scaffold_to_json(s: &Scaffold) -> Value {
    let mut v = fan_to_json(&s.fan);
    v["n"] = json!(s.n);
    v["d"] = json!(s.d);
    v["kind"] = json!(s.kind);
    v
}

pub fn config_to_json(cf: &ConfigurationFan) -> Result<Value> {
    let mut v = stacky_to_json(&cf.pi)?;
    v["n"] = json!(cf.n());
    v["d"] = json!(cf.d());
    v["scaffold"] = scaffold_to_json(&cf.scaffold);
    v["refined_scaffold"] = scaffold_to_json(&cf.refined);
    Ok(v)
}

pub fn stratum_to_json(cf: &ConfigurationFan, r: &StratumReport) -> Value {
    let fc = &r.fiber;
    let mut markings_at: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &v) in r.rubber.markings.iter().enumerate() {
        markings_at.entry(v).or_default().push(i);
    }
    let vertices: Vec<Value> = fc
        .vertices()
        .into_iter()
        .map(|v| {
            let w = &r.rubber.weights[&v];
            let mut o = json!({
                "cell": v,
                "cone": cone_to_json(&fc.cells[v].cone),
                "position": rat_list(fc.vertex_position(v)),
                "markings": markings_at.get(&v).cloned().unwrap_or_default(),
                "component_maximal_cones": r.component_sizes[&v],
                "weight": int_rows(&w.matrix.rows_vec()),
            });
            if let Some(fw) = r.facet_weights.as_ref().and_then(|m| m.get(&v)) {
                o["facet_weight"] = rat_rows(fw);
            }
            o
        })
        .collect();
    json!({
        "n": cf.n(),
        "d": cf.d(),
        "cone_index": fc.rho_index,
        "cone": cone_to_json(&fc.rho),
        "facet_normals": int_rows(fc.rho.facet_normals()),
        "dim": fc.rho.dim(),
        "stratum_dim": r.rubber.stratum_dim,
        "base_point": rat_list(&fc.base_point),
        "isotropy": r.isotropy.iter().map(int_str).collect::<Vec<_>>(),
        "rubber_lattice_hnf": int_rows(r.rubber.rubber_lattice.basis()),
        "stabilizer": r.rubber.stabilizer.iter().map(int_str).collect::<Vec<_>>(),
        "gluing_ok": r.rubber.gluing_ok,
        "fiber_f_vector": fc.f_vector(),
        "bounded_edges": fc.bounded_edges(),
        "marking_vertices": r.rubber.markings,
        "vertices": vertices,
    })
}

/// Aligned plain-text summary of a stratum report.
pub fn stratum_to_text(r: &StratumReport) -> String {
    let fc = &r.fiber;
    let mut s = String::new();
    let row = |s: &mut String, k: &str, v: String| {
        let _ = writeln!(s, "{k:<16}{v}");
    };
    row(&mut s, "cone", format!("#{} dim {}", fc.rho_index, fc.rho.dim()));
    row(&mut s, "equations", crate::cone::fmt_rows(fc.rho.equations()));
    row(&mut s, "facets", crate::cone::fmt_rows(fc.rho.facet_normals()));
    row(&mut s, "stratum dim", r.rubber.stratum_dim.to_string());
    row(&mut s, "rubber rank", r.rubber.rubber_lattice.rank().to_string());
    row(
        &mut s,
        "isotropy",
        format!("{:?}", r.isotropy.iter().map(int_str).collect::<Vec<_>>()),
    );
    row(
        &mut s,
        "stabilizer",
        format!("{:?}", r.rubber.stabilizer.iter().map(int_str).collect::<Vec<_>>()),
    );
    row(
        &mut s,
        "gluing",
        if r.rubber.gluing_ok {
            "ok".into()
        } else {
            "FAILED".into()
        },
    );
    row(&mut s, "fiber f-vector", format!("{:?}", fc.f_vector()));
    row(&mut s, "bounded edges", fc.bounded_edges().to_string());
    let _ = writeln!(
        s,
        "{:<6}{:<8}{:<18}{:<10}weight",
        "cell", "marks", "position", "component"
    );
    for v in fc.vertices() {
        let marks: Vec<String> = (0..r.rubber.markings.len())
            .filter(|&i| r.rubber.markings[i] == v)
            .map(|i| i.to_string())
            .collect();
        let pos: Vec<String> = fc.vertex_position(v).iter().map(rat_str).collect();
        let weight = match r.facet_weights.as_ref().and_then(|m| m.get(&v)) {
            Some(fw) => format!(
                "{:?}",
                fw.iter()
                    .map(|row| row.iter().map(rat_str).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            ),
            None => format!(
                "{:?}",
                r.rubber.weights[&v]
                    .matrix
                    .rows_vec()
                    .iter()
                    .map(|row| row.iter().map(int_str).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            ),
        };
        let _ = writeln!(
            s,
            "{:<6}{:<8}{:<18}{:<10}{}",
            v,
            marks.join(","),
            format!("({})", pos.join(",")),
            r.component_sizes[&v],
            weight
        );
    }
    s
}

/// Render with one line per innermost record: containers holding arrays of
/// objects are expanded, everything else is written compactly.
pub fn to_canonical_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn has_object_array(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().any(|x| x.is_object() || has_object_array(x)),
        Value::Object(m) => m.values().any(has_object_array),
        _ => false,
    }
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    if !has_object_array(v) {
        out.push_str(&serde_json::to_string(v).expect("serializable"));
        return;
    }
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Array(a) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad);
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Object(m) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&serde_json::to_string(k).expect("string"));
                out.push_str(": ");
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        _ => unreachable!(),
    }
}

// ---- decoding ----

fn parse_value(text: &str) -> Result<Value> {
    Ok(serde_json::from_str(text)?)
}

fn obj<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::parse(path, "expected an object"))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    m.get(key)
        .ok_or_else(|| Error::parse(path, format!("missing field {key:?}")))
}

fn arr<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::parse(path, "expected an array"))
}

fn usize_field(m: &Map<String, Value>, key: &str, path: &str, max: usize) -> Result<usize> {
    let v = field(m, key, path)?;
    let p = format!("{path}.{key}");
    let n = v
        .as_u64()
        .ok_or_else(|| Error::parse(&p, "expected a non-negative integer"))?;
    if n as usize > max {
        return Err(Error::parse(&p, format!("value {n} exceeds limit {max}")));
    }
    Ok(n as usize)
}

fn parse_int(v: &Value, path: &str) -> Result<Int> {
    let s = v
        .as_str()
        .ok_or_else(|| Error::parse(path, "expected a decimal string"))?;
    let body = s.strip_prefix('-').unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) || body.len() > 4096 {
        return Err(Error::parse(path, format!("{s:?} is not a decimal integer")));
    }
    s.parse::<Int>().map_err(|e| Error::parse(path, e.to_string()))
}

fn parse_rows(v: &Value, width: usize, path: &str) -> Result<Vec<Vec<Int>>> {
    let rows = arr(v, path)?;
    if rows.len() > MAX_GENERATORS {
        return Err(Error::parse(path, format!("more than {MAX_GENERATORS} rows")));
    }
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let p = format!("{path}[{i}]");
            let entries = arr(r, &p)?;
            if entries.len() != width {
                return Err(Error::parse(
                    &p,
                    format!("expected {width} entries, found {}", entries.len()),
                ));
            }
            entries
                .iter()
                .enumerate()
                .map(|(j, x)| parse_int(x, &format!("{p}[{j}]")))
                .collect()
        })
        .collect()
}

fn parse_cone(v: &Value, rank: usize, path: &str) -> Result<(Cone, Option<LatticeBasis>)> {
    let m = obj(v, path)?;
    for k in m.keys() {
        if !matches!(k.as_str(), "rays" | "lineality" | "sublattice_hnf") {
            return Err(Error::parse(path, format!("unknown field {k:?}")));
        }
    }
    let rays = parse_rows(field(m, "rays", path)?, rank, &format!("{path}.rays"))?;
    let lin = parse_rows(field(m, "lineality", path)?, rank, &format!("{path}.lineality"))?;
    let cone = Cone::from_parts(rank, rays, lin).map_err(|e| Error::parse(path, e.to_string()))?;
    let lattice = match m.get("sublattice_hnf") {
        None => None,
        Some(l) => {
            let p = format!("{path}.sublattice_hnf");
            let gens = parse_rows(l, rank, &p)?;
            let basis = LatticeBasis::from_generators(rank, gens);
            let span = cone.span_lattice();
            if basis.rank() != span.rank() || !span.contains_lattice(&basis) {
                return Err(Error::parse(&p, "not a finite-index sublattice of the cone's span"));
            }
            Some(basis)
        }
    };
    Ok((cone, lattice))
}

struct Decoded {
    fan: Fan,
    lattices: BTreeMap<Cone, LatticeBasis>,
}

fn decode_fan(v: &Value, path: &str, stacky: bool) -> Result<Decoded> {
    let m = obj(v, path)?;
    let rank = usize_field(m, "ambient_rank", path, MAX_RANK)?;
    let complete = field(m, "complete", path)?;
    if !complete.is_boolean() {
        return Err(Error::parse(format!("{path}.complete"), "expected a boolean"));
    }
    let mc_path = format!("{path}.maximal_cones");
    let list = arr(field(m, "maximal_cones", path)?, &mc_path)?;
    if list.len() > MAX_CONES {
        return Err(Error::parse(&mc_path, format!("more than {MAX_CONES} cones")));
    }
    let mut cones = Vec::with_capacity(list.len());
    let mut lattices = BTreeMap::new();
    for (i, c) in list.iter().enumerate() {
        let p = format!("{mc_path}[{i}]");
        let (cone, l) = parse_cone(c, rank, &p)?;
        if let Some(l) = l {
            if !stacky {
                return Err(Error::parse(&p, "sublattices are not allowed here"));
            }
            lattices.insert(cone.clone(), l);
        }
        cones.push(cone);
    }
    let n_before = cones.len();
    let fan = Fan::from_maximal(rank, cones);
    if fan.maximal_cones().len() != n_before {
        return Err(Error::parse(&mc_path, "duplicate cones"));
    }
    if let Some(faces) = m.get("face_sublattices") {
        let fp = format!("{path}.face_sublattices");
        if !stacky {
            return Err(Error::parse(&fp, "sublattices are not allowed here"));
        }
        for (i, c) in arr(faces, &fp)?.iter().enumerate() {
            let p = format!("{fp}[{i}]");
            match parse_cone(c, rank, &p)? {
                (cone, Some(l)) => {
                    if !fan.contains_cone(&cone) {
                        return Err(Error::parse(&p, "cone is not a face of the fan"));
                    }
                    lattices.insert(cone, l);
                }
                (_, None) => return Err(Error::parse(&p, "missing sublattice_hnf")),
            }
        }
    }
    Ok(Decoded { fan, lattices })
}

fn check_keys(m: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    for k in m.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::parse(path, format!("unknown field {k:?}")));
        }
    }
    Ok(())
}

const FAN_KEYS: [&str; 3] = ["ambient_rank", "maximal_cones", "complete"];

pub fn fan_from_json(text: &str) -> Result<Fan> {
    let v = parse_value(text)?;
    check_keys(obj(&v, "$")?, &FAN_KEYS, "$")?;
    Ok(decode_fan(&v, "$", false)?.fan)
}

pub fn stacky_from_value(v: &Value, path: &str, extra: &[&str]) -> Result<StackyFan> {
    let mut keys: Vec<&str> = FAN_KEYS.to_vec();
    keys.push("face_sublattices");
    keys.extend_from_slice(extra);
    check_keys(obj(v, path)?, &keys, path)?;
    let d = decode_fan(v, path, true)?;
    StackyFan::new(d.fan, d.lattices).map_err(|e| Error::parse(path, e.to_string()))
}

pub fn stacky_from_json(text: &str) -> Result<StackyFan> {
    stacky_from_value(&parse_value(text)?, "$", &[])
}

fn scaffold_from_value(v: &Value, path: &str) -> Result<Scaffold> {
    let m = obj(v, path)?;
    let mut keys: Vec<&str> = FAN_KEYS.to_vec();
    keys.extend(["n", "d", "kind"]);
    check_keys(m, &keys, path)?;
    let n = usize_field(m, "n", path, MAX_RANK)?;
    let d = usize_field(m, "d", path, MAX_RANK)?;
    let kind = field(m, "kind", path)?
        .as_str()
        .ok_or_else(|| Error::parse(format!("{path}.kind"), "expected a string"))?;
    let fan = decode_fan(v, path, false)?.fan;
    Scaffold::new(n, d, kind, fan).map_err(|e| Error::parse(path, e.to_string()))
}

pub fn scaffold_from_json(text: &str) -> Result<Scaffold> {
    scaffold_from_value(&parse_value(text)?, "$")
}

/// Decode a configuration fan. The projection of the refined scaffold must
/// land in the quotient fan; certificates are not rerun.
pub fn config_from_json(text: &str) -> Result<ConfigurationFan> {
    let v = parse_value(text)?;
    let pi = stacky_from_value(&v, "$", &["n", "d", "scaffold", "refined_scaffold"])?;
    let m = obj(&v, "$")?;
    let n = usize_field(m, "n", "$", MAX_RANK)?;
    let d = usize_field(m, "d", "$", MAX_RANK)?;
    let scaffold = scaffold_from_value(field(m, "scaffold", "$")?, "$.scaffold")?;
    let refined = scaffold_from_value(field(m, "refined_scaffold", "$")?, "$.refined_scaffold")?;
    if scaffold.n != n || scaffold.d != d {
        return Err(Error::parse("$.scaffold", "n or d differs from the configuration fan"));
    }
    ConfigurationFan::assemble(scaffold, pi, refined, None).map_err(|e| Error::parse("$", e.to_string()))
}
