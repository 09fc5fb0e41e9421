//! JSON documents: functors, coalgebras, algebras and diagrams.
//!
//! ```json
//! {"format": "unchained/1", "kind": "coalgebra",
//!  "functor": {"ops": [{"name": "leaf", "arity": 0}, {"name": "node", "arity": 2}]},
//!  "carrier": ["x", "y"],
//!  "structure": {"x": {"op": "node", "args": ["y", "y"]}, "y": {"op": "leaf", "args": []}}}
//! ```
//!
//! Powerset elements are arrays of names. Algebras map element names of
//! `F(carrier)`, such as `"node(0,1)"`, to carrier names. Diagrams list
//! `nodes` with their `elems` and `edges` with `src`, `dst` and a `map`.

use serde_json::{json, Map, Value};
use unchained::builtins;
use unchained::colimit::Diagram;
use unchained::{Algebra, Coalgebra, FElem, FinFn, FinSet, Limits, OpSym, Signature};

use crate::Failure;

pub const FORMAT_TAG: &str = "unchained/1";

#[derive(Debug, Clone)]
pub enum Document {
    Coalgebra(Coalgebra),
    Algebra(Algebra),
    Diagram(Diagram),
}

fn bad(msg: impl Into<String>) -> Failure {
    Failure::Parse(msg.into())
}

fn str_of<'a>(v: &'a Value, what: &str) -> Result<&'a str, Failure> {
    v.as_str().ok_or_else(|| bad(format!("{what} must be a string")))
}

fn names(v: &Value, what: &str) -> Result<Vec<String>, Failure> {
    let arr = v.as_array().ok_or_else(|| bad(format!("{what} must be an array of names")))?;
    arr.iter().map(|e| str_of(e, what).map(str::to_string)).collect()
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, Failure> {
    v.as_object().ok_or_else(|| bad(format!("{what} must be an object")))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, what: &str) -> Result<&'a Value, Failure> {
    m.get(key).ok_or_else(|| bad(format!("{what} lacks `{key}`")))
}

fn finset(v: &Value, what: &str) -> Result<FinSet, Failure> {
    FinSet::new(names(v, what)?).map_err(|e| bad(format!("{what}: {e}")))
}

/// A functor from a built-in name, inline JSON, or a JSON value.
pub fn parse_functor(v: &Value) -> Result<Signature, Failure> {
    if let Some(name) = v.as_str() {
        return builtins::by_name(name).ok_or_else(|| bad(format!("unknown functor `{name}`")));
    }
    let m = object(v, "functor")?;
    if let Some(kind) = m.get("kind") {
        return match kind.as_str() {
            Some("powerset") => Ok(Signature::powerset()),
            _ => Err(bad("functor kind must be \"powerset\"")),
        };
    }
    let ops = field(m, "ops", "functor")?.as_array().ok_or_else(|| bad("`ops` must be an array"))?;
    let ops = ops
        .iter()
        .map(|op| {
            let o = object(op, "operation")?;
            let name = str_of(field(o, "name", "operation")?, "operation name")?;
            let arity = field(o, "arity", "operation")?
                .as_u64()
                .ok_or_else(|| bad(format!("arity of `{name}` must be a natural number")))?;
            Ok(OpSym::new(name, arity as usize))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Signature::polynomial(ops).map_err(|e| bad(e.to_string()))
}

/// Resolves a `--functor` argument: a built-in name, inline JSON, or a
/// path to a JSON file.
pub fn functor_arg(spec: &str) -> Result<Signature, Failure> {
    if let Some(sig) = builtins::by_name(spec) {
        return Ok(sig);
    }
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec).map_err(|e| bad(format!("functor `{spec}`: {e}")))?
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| bad(format!("functor: {e}")))?;
    parse_functor(&v)
}

pub fn functor_json(sig: &Signature) -> Value {
    if sig.is_powerset() {
        return json!({ "kind": "powerset" });
    }
    let ops: Vec<Value> = sig.ops().iter().map(|o| json!({ "name": o.name, "arity": o.arity })).collect();
    json!({ "ops": ops })
}

fn parse_felem(v: &Value, sig: &Signature) -> Result<FElem, Failure> {
    if sig.is_powerset() {
        return Ok(FElem::subset(names(v, "powerset element")?));
    }
    let m = object(v, "structure entry")?;
    let op = str_of(field(m, "op", "structure entry")?, "op")?;
    let args = match m.get("args") {
        Some(a) => names(a, "args")?,
        None => Vec::new(),
    };
    Ok(FElem::op(op, args))
}

pub fn felem_json(fe: &FElem) -> Value {
    match fe {
        FElem::Op { op, args } => {
            let args: Vec<&str> = args.iter().map(|a| a.as_str()).collect();
            json!({ "op": op, "args": args })
        }
        FElem::Subset(m) => Value::from(m.iter().map(|a| a.as_str()).collect::<Vec<_>>()),
    }
}

fn parse_coalgebra(m: &Map<String, Value>, limits: &Limits) -> Result<Coalgebra, Failure> {
    let sig = parse_functor(field(m, "functor", "coalgebra")?)?;
    let carrier = finset(field(m, "carrier", "coalgebra")?, "carrier")?;
    let structure = object(field(m, "structure", "coalgebra")?, "structure")?;
    let pairs = structure
        .iter()
        .map(|(x, v)| Ok((x.clone(), parse_felem(v, &sig)?)))
        .collect::<Result<Vec<_>, Failure>>()?;
    Coalgebra::new(&sig, carrier, pairs, limits).map_err(lib_or_parse)
}

pub fn coalgebra_json(c: &Coalgebra) -> Value {
    let mut structure = Map::new();
    for (x, e) in c.carrier().iter().enumerate() {
        structure.insert(e.to_string(), felem_json(&c.felem(x)));
    }
    json!({
        "format": FORMAT_TAG,
        "kind": "coalgebra",
        "functor": functor_json(c.signature()),
        "carrier": c.carrier().iter().map(|e| e.as_str()).collect::<Vec<_>>(),
        "structure": structure,
    })
}

fn parse_algebra(m: &Map<String, Value>, limits: &Limits) -> Result<Algebra, Failure> {
    let sig = parse_functor(field(m, "functor", "algebra")?)?;
    let carrier = finset(field(m, "carrier", "algebra")?, "carrier")?;
    let image = sig.apply_obj(&carrier, limits).map_err(lib_or_parse)?;
    let structure = object(field(m, "structure", "algebra")?, "structure")?;
    let pairs = structure
        .iter()
        .map(|(k, v)| Ok((k.clone(), str_of(v, "algebra value")?.to_string())))
        .collect::<Result<Vec<_>, Failure>>()?;
    let f = FinFn::from_pairs(image.set().clone(), carrier, pairs).map_err(lib_or_parse)?;
    Algebra::from_structure(image, f).map_err(lib_or_parse)
}

pub fn algebra_json(a: &Algebra) -> Value {
    let mut structure = Map::new();
    for (x, y) in a.structure().pairs() {
        structure.insert(x.to_string(), Value::from(y.as_str()));
    }
    json!({
        "format": FORMAT_TAG,
        "kind": "algebra",
        "functor": functor_json(a.signature()),
        "carrier": a.carrier().iter().map(|e| e.as_str()).collect::<Vec<_>>(),
        "structure": structure,
    })
}

fn parse_diagram(m: &Map<String, Value>) -> Result<Diagram, Failure> {
    let mut d = Diagram::new();
    let nodes = field(m, "nodes", "diagram")?.as_array().ok_or_else(|| bad("`nodes` must be an array"))?;
    for n in nodes {
        let o = object(n, "node")?;
        let id = str_of(field(o, "id", "node")?, "node id")?;
        let set = finset(field(o, "elems", "node")?, "node elems")?;
        d.add_node(id, set).map_err(lib_or_parse)?;
    }
    let edges = match m.get("edges") {
        Some(e) => e.as_array().ok_or_else(|| bad("`edges` must be an array"))?.as_slice(),
        None => &[],
    };
    for e in edges {
        let o = object(e, "edge")?;
        let id = str_of(field(o, "id", "edge")?, "edge id")?;
        let end = |key: &str| -> Result<usize, Failure> {
            let name = str_of(field(o, key, "edge")?, key)?;
            d.node_index(name).ok_or_else(|| bad(format!("edge `{id}`: unknown node `{name}`")))
        };
        let (src, dst) = (end("src")?, end("dst")?);
        let pairs = object(field(o, "map", "edge")?, "edge map")?
            .iter()
            .map(|(k, v)| Ok((k.clone(), str_of(v, "edge map value")?.to_string())))
            .collect::<Result<Vec<_>, Failure>>()?;
        let f = FinFn::from_pairs(d.nodes()[src].set.clone(), d.nodes()[dst].set.clone(), pairs)
            .map_err(|err| bad(format!("edge `{id}`: {err}")))?;
        d.add_edge(id, src, dst, f).map_err(lib_or_parse)?;
    }
    Ok(d)
}

pub fn diagram_json(d: &Diagram) -> Value {
    let nodes: Vec<Value> = d
        .nodes()
        .iter()
        .map(|n| json!({ "id": n.id, "elems": n.set.iter().map(|e| e.as_str()).collect::<Vec<_>>() }))
        .collect();
    let edges: Vec<Value> = d
        .edges()
        .iter()
        .map(|e| {
            let map: Map<String, Value> = e.map.pairs().map(|(x, y)| (x.to_string(), Value::from(y.as_str()))).collect();
            json!({ "id": e.id, "src": d.nodes()[e.src].id, "dst": d.nodes()[e.dst].id, "map": map })
        })
        .collect();
    json!({ "format": FORMAT_TAG, "kind": "diagram", "nodes": nodes, "edges": edges })
}

/// Library errors raised while reading a document are input errors, except
/// for the size cap.
fn lib_or_parse(e: unchained::Error) -> Failure {
    match e {
        unchained::Error::SizeCapExceeded { .. } => Failure::Lib(e),
        other => bad(other.to_string()),
    }
}

fn kind_of(m: &Map<String, Value>) -> Result<&str, Failure> {
    if let Some(k) = m.get("kind") {
        return str_of(k, "kind");
    }
    if m.contains_key("nodes") {
        return Ok("diagram");
    }
    let algebra = m
        .get("structure")
        .and_then(Value::as_object)
        .is_some_and(|s| !s.is_empty() && s.values().all(Value::is_string));
    Ok(if algebra { "algebra" } else { "coalgebra" })
}

pub fn parse_document(text: &str, limits: &Limits) -> Result<Document, Failure> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad(format!("invalid JSON: {e}")))?;
    let m = object(&v, "document")?;
    if let Some(tag) = m.get("format") {
        if tag.as_str() != Some(FORMAT_TAG) {
            return Err(bad(format!("unsupported format {tag}")));
        }
    }
    match kind_of(m)? {
        "coalgebra" => parse_coalgebra(m, limits).map(Document::Coalgebra),
        "algebra" => parse_algebra(m, limits).map(Document::Algebra),
        "diagram" => parse_diagram(m).map(Document::Diagram),
        other => Err(bad(format!("unknown document kind `{other}`"))),
    }
}

pub fn document_json(doc: &Document) -> Value {
    match doc {
        Document::Coalgebra(c) => coalgebra_json(c),
        Document::Algebra(a) => algebra_json(a),
        Document::Diagram(d) => diagram_json(d),
    }
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn serialize(doc: &Document) -> String {
    to_pretty(&document_json(doc))
}

pub fn read_document(path: &std::path::Path, limits: &Limits) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    parse_document(&text, limits)
}

/// Canonical form of a document, computed on the raw JSON: tag and kind
/// first, functor names expanded, omitted `args` filled in, and every map
/// keyed in the order of its domain.
pub fn normalize(text: &str, limits: &Limits) -> Result<String, Failure> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad(format!("invalid JSON: {e}")))?;
    let m = object(&v, "document")?;
    let kind = kind_of(m)?.to_string();
    let mut out = Map::new();
    out.insert("format".into(), Value::from(FORMAT_TAG));
    out.insert("kind".into(), Value::from(kind.as_str()));
    match kind.as_str() {
        "coalgebra" | "algebra" => {
            let sig = parse_functor(field(m, "functor", &kind)?)?;
            let carrier = names(field(m, "carrier", &kind)?, "carrier")?;
            let structure = object(field(m, "structure", &kind)?, "structure")?;
            out.insert("functor".into(), functor_json(&sig));
            out.insert("carrier".into(), Value::from(carrier.clone()));
            let mut s = Map::new();
            if kind == "coalgebra" {
                for x in &carrier {
                    let entry = field(structure, x, "structure")?;
                    s.insert(x.clone(), normalize_felem(entry, &sig, &carrier)?);
                }
            } else {
                let set = FinSet::new(carrier.iter().cloned()).map_err(|e| bad(e.to_string()))?;
                let image = sig.apply_obj(&set, limits).map_err(lib_or_parse)?;
                for e in image.set().iter() {
                    s.insert(e.to_string(), field(structure, e.as_str(), "structure")?.clone());
                }
            }
            out.insert("structure".into(), Value::Object(s));
        }
        "diagram" => {
            let nodes = field(m, "nodes", "diagram")?.as_array().ok_or_else(|| bad("`nodes` must be an array"))?;
            let mut elems_of: Vec<(String, Vec<String>)> = Vec::new();
            let mut norm_nodes = Vec::new();
            for n in nodes {
                let o = object(n, "node")?;
                let id = str_of(field(o, "id", "node")?, "node id")?.to_string();
                let elems = names(field(o, "elems", "node")?, "node elems")?;
                norm_nodes.push(json!({ "id": id, "elems": elems }));
                elems_of.push((id, elems));
            }
            let mut norm_edges = Vec::new();
            for e in m.get("edges").and_then(Value::as_array).map_or(&[][..], Vec::as_slice) {
                let o = object(e, "edge")?;
                let src = str_of(field(o, "src", "edge")?, "src")?;
                let map = object(field(o, "map", "edge")?, "edge map")?;
                let dom = &elems_of.iter().find(|(id, _)| id == src).ok_or_else(|| bad(format!("unknown node `{src}`")))?.1;
                let mut nm = Map::new();
                for x in dom {
                    nm.insert(x.clone(), field(map, x, "edge map")?.clone());
                }
                norm_edges.push(json!({
                    "id": field(o, "id", "edge")?,
                    "src": src,
                    "dst": field(o, "dst", "edge")?,
                    "map": nm,
                }));
            }
            out.insert("nodes".into(), Value::from(norm_nodes));
            out.insert("edges".into(), Value::from(norm_edges));
        }
        other => return Err(bad(format!("unknown document kind `{other}`"))),
    }
    Ok(to_pretty(&Value::Object(out)))
}

fn normalize_felem(v: &Value, sig: &Signature, carrier: &[String]) -> Result<Value, Failure> {
    if sig.is_powerset() {
        let members = names(v, "powerset element")?;
        let sorted: Vec<&String> = carrier.iter().filter(|x| members.contains(x)).collect();
        return Ok(Value::from(sorted.into_iter().cloned().collect::<Vec<_>>()));
    }
    let m = object(v, "structure entry")?;
    let args = match m.get("args") {
        Some(a) => a.clone(),
        None => Value::Array(Vec::new()),
    };
    Ok(json!({ "op": field(m, "op", "structure entry")?, "args": args }))
}
