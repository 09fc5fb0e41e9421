//! Graphviz output.

use std::fmt::Write;

use unchained::colimit::Diagram;
use unchained::{Coalgebra, ColimitData, FinFn, Shape};

use crate::io::FORMAT_TAG;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The successor graph; `values` labels each state with its image.
pub fn coalgebra_dot(c: &Coalgebra, values: Option<&FinFn>) -> String {
    let mut out = String::new();
    writeln!(out, "digraph coalgebra {{").unwrap();
    writeln!(out, "  graph [comment={}];", quote(&format!("format: {FORMAT_TAG}"))).unwrap();
    for (x, e) in c.carrier().iter().enumerate() {
        let head = match c.shape(x) {
            Shape::Op { op, .. } => c.signature().ops()[op].name.clone(),
            Shape::Subset(_) => "set".to_string(),
        };
        let label = match values {
            Some(v) => format!("{e}: {head} ↦ {}", v.cod().elem(v.at(x))),
            None => format!("{e}: {head}"),
        };
        writeln!(out, "  {} [label={}];", quote(e.as_str()), quote(&label)).unwrap();
    }
    for (x, e) in c.carrier().iter().enumerate() {
        let shape = c.shape(x);
        let positional = matches!(shape, Shape::Op { .. });
        for (k, &y) in shape.children().iter().enumerate() {
            let target = quote(c.carrier().elem(y).as_str());
            if positional {
                writeln!(out, "  {} -> {} [label=\"{}\"];", quote(e.as_str()), target, k + 1).unwrap();
            } else {
                writeln!(out, "  {} -> {};", quote(e.as_str()), target).unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Diagram elements grouped into one cluster per colimit class.
pub fn colimit_dot(d: &Diagram, c: &ColimitData) -> String {
    let mut out = String::new();
    writeln!(out, "digraph colimit {{").unwrap();
    writeln!(out, "  graph [comment={}, compound=true];", quote(&format!("format: {FORMAT_TAG}"))).unwrap();
    let id = |node: usize, x: usize| quote(&format!("{}:{}", d.nodes()[node].id, d.nodes()[node].set.elem(x)));
    for (k, members) in c.class_members().iter().enumerate() {
        writeln!(out, "  subgraph cluster_{k} {{").unwrap();
        writeln!(out, "    label={};", quote(c.apex.elem(k).as_str())).unwrap();
        for &(node, x) in members {
            writeln!(out, "    {};", id(node, x)).unwrap();
        }
        out.push_str("  }\n");
    }
    for e in d.edges() {
        for x in 0..e.map.dom().len() {
            writeln!(out, "  {} -> {} [label={}];", id(e.src, x), id(e.dst, e.map.at(x)), quote(&e.id)).unwrap();
        }
    }
    out.push_str("}\n");
    out
}
