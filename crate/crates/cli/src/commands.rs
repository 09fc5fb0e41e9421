use std::fmt::Write;
use std::path::Path;

use serde_json::{json, Map, Value};
use unchained::builtins;
use unchained::chain::{analyze_chain, build_chain, ChainData};
use unchained::coalgebra::{hylo, recursion_certificate, Certificate};
use unchained::colimit::{canonical_slice_diagram, colimit, preservation_report, verify_filtered_characterization, SliceMode};
use unchained::construction::{build_truncation, oracle_partition, FinrecOptions};
use unchained::iterate::{compare_with_fa, enumerate_e, reduce_cocone, resolve_cocone, slice_of_fa, CoconeChoice, EContext};
use unchained::{Algebra, Coalgebra, Error, FElem, FinFn, Limits};

use crate::io::{self, Document, FORMAT_TAG};
use crate::{dot, selftest, Command, ExampleName, Failure, OutputFormat, RunConfig};

pub struct Report {
    pub exit: i32,
    pub body: String,
}

/// One command's result in every format it supports.
struct Rendered {
    exit: i32,
    json: Value,
    text: String,
    dot: Option<String>,
}

fn tagged(command: &str, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("format".into(), Value::from(FORMAT_TAG));
    m.insert("command".into(), Value::from(command));
    if let Value::Object(rest) = body {
        m.extend(rest);
    }
    Value::Object(m)
}

pub fn dispatch(cfg: &RunConfig, limits: &Limits) -> Result<Report, Failure> {
    let (name, r) = match &cfg.command {
        Command::CheckRecursive { coalgebra } => ("check-recursive", check_recursive(coalgebra, limits)?),
        Command::Hylo { coalgebra, algebra } => ("hylo", run_hylo(coalgebra, algebra, limits)?),
        Command::Initial { bound, emit_terms, compact } => ("initial", initial(cfg, *bound, *emit_terms, *compact, limits)?),
        Command::Chain { steps } => ("chain", chain(cfg, *steps, limits)?),
        Command::IterateCheck { bound, slice, sample, compact } => {
            ("iterate-check", iterate_check(cfg, *bound, *slice, *sample, *compact, limits)?)
        }
        Command::Colimit { diagram } => ("colimit", run_colimit(cfg, diagram, limits)?),
        Command::Examples { name, input } => ("examples", examples(*name, input.as_deref(), limits)?),
        Command::Selftest => ("selftest", selftest_report(cfg.seed, limits)),
    };
    let body = match cfg.format {
        OutputFormat::Text => r.text,
        OutputFormat::Json => io::to_pretty(&tagged(name, r.json)),
        OutputFormat::Dot => r.dot.ok_or_else(|| Failure::Parse(format!("`{name}` has no DOT output")))?,
    };
    Ok(Report { exit: r.exit, body })
}

fn load_coalgebra(path: &Path, limits: &Limits) -> Result<Coalgebra, Failure> {
    match io::read_document(path, limits)? {
        Document::Coalgebra(c) => Ok(c),
        _ => Err(Failure::Parse(format!("{} is not a coalgebra", path.display()))),
    }
}

fn load_algebra(path: &Path, limits: &Limits) -> Result<Algebra, Failure> {
    match io::read_document(path, limits)? {
        Document::Algebra(a) => Ok(a),
        _ => Err(Failure::Parse(format!("{} is not an algebra", path.display()))),
    }
}

fn felem_text(fe: &FElem) -> String {
    match fe {
        FElem::Op { op, args } if args.is_empty() => op.clone(),
        FElem::Op { op, args } => {
            let a: Vec<&str> = args.iter().map(|e| e.as_str()).collect();
            format!("{op}({})", a.join(","))
        }
        FElem::Subset(m) => {
            let a: Vec<&str> = m.iter().map(|e| e.as_str()).collect();
            format!("{{{}}}", a.join(","))
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn map_json(f: &FinFn) -> Value {
    Value::Object(f.pairs().map(|(x, y)| (x.to_string(), Value::from(y.as_str()))).collect())
}

fn map_text(f: &FinFn) -> String {
    f.pairs().map(|(x, y)| format!("{x} ↦ {y}\n")).collect()
}

fn coalgebra_text(c: &Coalgebra) -> String {
    (0..c.len()).map(|x| format!("{} = {}\n", c.carrier().elem(x), felem_text(&c.felem(x)))).collect()
}

fn check_recursive(path: &Path, limits: &Limits) -> Result<Rendered, Failure> {
    let c = load_coalgebra(path, limits)?;
    let cert = recursion_certificate(&c);
    let names = cert.names(c.carrier());
    let (json, text) = match &cert {
        Certificate::Acyclic { .. } => (
            json!({ "recursive": true, "order": names }),
            format!("recursive: yes\norder: {}\n", names.join(", ")),
        ),
        Certificate::Cycle { .. } => {
            let mut ring = names.clone();
            ring.extend(names.first().cloned());
            (json!({ "recursive": false, "cycle": names }), format!("recursive: no\ncycle: {}\n", ring.join(" -> ")))
        }
    };
    Ok(Rendered { exit: if cert.is_recursive() { 0 } else { 2 }, json, text, dot: Some(dot::coalgebra_dot(&c, None)) })
}

fn run_hylo(cpath: &Path, apath: &Path, limits: &Limits) -> Result<Rendered, Failure> {
    let c = load_coalgebra(cpath, limits)?;
    let a = load_algebra(apath, limits)?;
    let h = hylo(&c, &a)?;
    Ok(Rendered { exit: 0, json: json!({ "hylo": map_json(&h) }), text: map_text(&h), dot: Some(dot::coalgebra_dot(&c, Some(&h))) })
}

fn options(compact: bool) -> FinrecOptions {
    FinrecOptions { dedup: compact, cover: compact }
}

fn initial(cfg: &RunConfig, bound: usize, emit_terms: bool, compact: bool, limits: &Limits) -> Result<Rendered, Failure> {
    let sig = io::functor_arg(&cfg.functor)?;
    let t = build_truncation(&sig, bound, options(compact), limits)?;
    let oracle = oracle_partition(&t)?;
    let alpha = t.alpha();
    let mut json = json!({
        "functor": io::functor_json(&sig),
        "bound": bound,
        "coalgebras": t.objects.len(),
        "morphisms": t.morphisms.len(),
        "size": t.a_set().len(),
        "fa_size": t.fa().len(),
        "alpha_injective": alpha.is_injective(),
        "alpha_surjective": alpha.is_surjective(),
        "oracle_classes": oracle.classes,
    });
    let mut text = String::new();
    writeln!(text, "functor: {sig:?}").unwrap();
    writeln!(text, "bound: {bound}").unwrap();
    writeln!(text, "coalgebras: {}, morphisms: {}", t.objects.len(), t.morphisms.len()).unwrap();
    writeln!(text, "|A| = {}, |F A| = {}", t.a_set().len(), t.fa().len()).unwrap();
    writeln!(text, "alpha injective: {}, surjective: {}", yes(alpha.is_injective()), yes(alpha.is_surjective())).unwrap();
    writeln!(text, "unfolding oracle: {} classes, agrees with the colimit", oracle.classes).unwrap();
    if emit_terms {
        let terms = t.class_terms()?;
        let mut listed = Vec::new();
        for (a, term) in terms.iter().enumerate() {
            let name = t.a_set().elem(a).to_string();
            writeln!(text, "{name} = {term}").unwrap();
            listed.push(json!({ "elem": name, "term": term.to_string() }));
        }
        json["terms"] = Value::from(listed);
    }
    Ok(Rendered { exit: 0, json, text, dot: Some(dot::coalgebra_dot(t.coalgebra(), None)) })
}

fn chain(cfg: &RunConfig, steps: usize, limits: &Limits) -> Result<Rendered, Failure> {
    let sig = io::functor_arg(&cfg.functor)?;
    // One extra stage gives the last requested stage its coalgebra, when it fits.
    let cd: ChainData = match build_chain(&sig, steps + 1, limits) {
        Ok(mut cd) => {
            cd.stages.truncate(steps + 1);
            cd.images.truncate(steps + 1);
            cd.links.truncate(steps + 1);
            cd
        }
        Err(Error::SizeCapExceeded { .. }) => build_chain(&sig, steps, limits)?,
        Err(e) => return Err(e.into()),
    };
    let rep = analyze_chain(&cd, None, limits)?;
    let opt = |b: Option<bool>| b.map_or("-", yes);
    let mut text = format!("functor: {sig:?}\n{:>3}  {:>8}  {:>9}  {:>9}  {:>5}\n", "k", "|W_k|", "recursive", "injective", "terms");
    let mut stages = Vec::new();
    for (k, s) in rep.stages.iter().enumerate() {
        writeln!(
            text,
            "{k:>3}  {:>8}  {:>9}  {:>9}  {:>5}",
            s.size,
            opt(s.recursive),
            opt(s.link_injective),
            opt(s.terms_match)
        )
        .unwrap();
        stages.push(json!({
            "k": k,
            "size": s.size,
            "recursive": s.recursive,
            "link_injective": s.link_injective,
            "terms_match": s.terms_match,
        }));
    }
    match (rep.converged_at, &rep.initial) {
        (Some(k), Some(init)) => {
            writeln!(text, "converged at k = {k}; initial algebra of size {}", init.carrier().len()).unwrap()
        }
        _ => writeln!(text, "no convergence within {steps} steps").unwrap(),
    }
    let json = json!({
        "functor": io::functor_json(&sig),
        "steps": steps,
        "stages": stages,
        "converged_at": rep.converged_at,
        "initial_size": rep.initial.as_ref().map(|i| i.carrier().len()),
    });
    let ok = rep.all_recursive() && rep.all_injective() && rep.terms_match();
    Ok(Rendered { exit: if ok { 0 } else { 2 }, json, text, dot: None })
}

fn iterate_check(
    cfg: &RunConfig,
    bound: usize,
    slice_bound: usize,
    sample: Option<usize>,
    compact: bool,
    limits: &Limits,
) -> Result<Rendered, Failure> {
    let sig = io::functor_arg(&cfg.functor)?;
    let t = build_truncation(&sig, bound, FinrecOptions { dedup: compact, cover: false }, limits)?;
    let ctx = EContext::new(&t, limits)?;
    let slice = match sample {
        None => slice_of_fa(&t, slice_bound, limits)?,
        Some(max_objects) => {
            let mode = SliceMode::Sample { max_objects, seed: cfg.seed };
            canonical_slice_diagram(t.fa().set(), slice_bound, mode, limits)?.1.legs
        }
    };
    let ed = enumerate_e(&ctx, &slice, true, limits)?;
    let verdict = compare_with_fa(&ctx, &ed, limits)?;
    let k = resolve_cocone(&ed, &CoconeChoice::Colimit, limits)?;
    let red = reduce_cocone(&ed, &k)?;
    let kind = format!("{:?}", verdict.kind()).to_lowercase();
    let json = json!({
        "functor": io::functor_json(&sig),
        "bound": bound,
        "slice_bound": slice_bound,
        "a_size": t.a_set().len(),
        "fa_size": verdict.fa_size(),
        "slice_objects": ed.sample_len,
        "inserted_slice_objects": ed.slice.len() - ed.sample_len,
        "objects": verdict.objects,
        "morphisms": verdict.morphisms,
        "merges": { "attempted": ed.merges.attempted, "merged": ed.merges.merged },
        "lift_failures": { "edges": ed.lifted.edge_lift_failures, "slice": ed.lifted.slice_lift_failures },
        "independence_failures": red.independence_failures.len(),
        "colimit_size": verdict.colim_size(),
        "injective": verdict.injective,
        "surjective": verdict.surjective,
        "comparison": kind,
    });
    let mut text = String::new();
    writeln!(text, "functor: {sig:?}").unwrap();
    writeln!(text, "|A| = {}, |F A| = {}", t.a_set().len(), verdict.fa_size()).unwrap();
    writeln!(text, "slice objects: {} (+{} inserted)", ed.sample_len, ed.slice.len() - ed.sample_len).unwrap();
    writeln!(text, "generated coalgebras: {}, morphisms: {}", verdict.objects, verdict.morphisms).unwrap();
    writeln!(text, "triangle pairs merged: {} of {}", ed.merges.merged, ed.merges.attempted).unwrap();
    writeln!(text, "independence failures: {}", red.independence_failures.len()).unwrap();
    writeln!(text, "colimit size: {}; comparison into F A: {kind}", verdict.colim_size()).unwrap();
    let exit = if verdict.injective { 0 } else { 2 };
    Ok(Rendered { exit, json, text, dot: None })
}

fn run_colimit(cfg: &RunConfig, path: &Path, limits: &Limits) -> Result<Rendered, Failure> {
    let d = match io::read_document(path, limits)? {
        Document::Diagram(d) => d,
        _ => return Err(Failure::Parse(format!("{} is not a diagram", path.display()))),
    };
    let sig = io::functor_arg(&cfg.functor)?;
    let c = colimit(&d, limits)?;
    let filtered = verify_filtered_characterization(&d, &c, limits);
    let pres = preservation_report(&sig, &d, &c, limits)?;
    let classes: Vec<Value> = c
        .class_members()
        .iter()
        .enumerate()
        .map(|(k, members)| {
            let m: Vec<String> =
                members.iter().map(|&(n, x)| format!("{}:{}", d.nodes()[n].id, d.nodes()[n].set.elem(x))).collect();
            json!({ "name": c.apex.elem(k).as_str(), "members": m })
        })
        .collect();
    let injections: Map<String, Value> =
        d.nodes().iter().zip(&c.injections).map(|(n, inj)| (n.id.clone(), map_json(inj))).collect();
    let json = json!({
        "apex": c.apex.iter().map(|e| e.as_str()).collect::<Vec<_>>(),
        "classes": classes,
        "injections": injections,
        "filtered": {
            "jointly_surjective": filtered.jointly_surjective,
            "merge_witnesses": filtered.witnesses.len(),
            "merge_failures": filtered.failures.len(),
            "nonempty": filtered.nonempty,
            "missing_upper_bounds": filtered.missing_upper_bounds.len(),
            "uncoequalized": filtered.uncoequalized.len(),
            "characterization_holds": filtered.characterization_holds(),
            "filtered": filtered.filtered(),
        },
        "preservation": {
            "functor": io::functor_json(&sig),
            "injective": pres.injective,
            "surjective": pres.surjective,
        },
    });
    let mut text = String::new();
    writeln!(text, "colimit: {} elements", c.apex.len()).unwrap();
    for class in &classes {
        let members: Vec<&str> = class["members"].as_array().unwrap().iter().filter_map(Value::as_str).collect();
        writeln!(text, "  {} = {{{}}}", class["name"].as_str().unwrap(), members.join(", ")).unwrap();
    }
    writeln!(text, "characterization holds: {}", yes(filtered.characterization_holds())).unwrap();
    writeln!(text, "filtered: {}", yes(filtered.filtered())).unwrap();
    writeln!(text, "{sig:?} preserves it: {}", yes(pres.preserved())).unwrap();
    Ok(Rendered { exit: 0, json, text, dot: Some(dot::colimit_dot(&d, &c)) })
}

fn sort_letters(mut letters: Vec<String>) -> Vec<String> {
    if letters.iter().all(|l| l.parse::<i64>().is_ok()) {
        letters.sort_by_key(|l| l.parse::<i64>().unwrap_or(0));
    } else {
        letters.sort();
    }
    letters.dedup();
    letters
}

fn examples(name: ExampleName, input: Option<&str>, limits: &Limits) -> Result<Rendered, Failure> {
    match name {
        ExampleName::Height => {
            let c = builtins::fig2_coalgebra();
            let max = 4;
            let b = builtins::height_algebra(max, limits)?;
            let h = hylo(&c, &b)?;
            let text = format!(
                "coalgebra:\n{}algebra: leaf ↦ 0, node(a,b) ↦ 1 + max(a,b), saturating at {max}\nh:\n{}",
                coalgebra_text(&c),
                map_text(&h)
            );
            let json = json!({
                "example": "height",
                "coalgebra": io::coalgebra_json(&c),
                "algebra": io::algebra_json(&b),
                "hylo": map_json(&h),
            });
            Ok(Rendered { exit: 0, json, text, dot: Some(dot::coalgebra_dot(&c, Some(&h))) })
        }
        ExampleName::Quicksort => {
            let raw = input.unwrap_or("3,1,2");
            let list: Vec<String> = raw.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_string).collect();
            if let Some(bad) = list.iter().find(|l| l.contains(['[', ']', '(', ')', ',', '{', '}'])) {
                return Err(Failure::Parse(format!("list entry `{bad}` contains a reserved character")));
            }
            let letters = sort_letters(list.clone());
            let refs: Vec<&str> = letters.iter().map(String::as_str).collect();
            let c = builtins::quicksort_coalgebra(&refs, list.len(), limits)?;
            let a = builtins::quicksort_algebra(&refs, list.len(), limits)?;
            let h = hylo(&c, &a)?;
            let key = builtins::list_name(&list);
            let out = h
                .apply(&key.as_str().into())
                .ok_or_else(|| Failure::Verification(format!("{key} is not a state")))?
                .to_string();
            let inner = out.trim_start_matches('[').trim_end_matches(']');
            let sorted: Vec<&str> = if inner.is_empty() { Vec::new() } else { inner.split(',').collect() };
            let json = json!({ "example": "quicksort", "input": list, "sorted": sorted, "states": c.len() });
            Ok(Rendered { exit: 0, json, text: format!("{}\n", sorted.join(",")), dot: None })
        }
        ExampleName::WfRelation => {
            let c = builtins::wf_relation();
            let cert = recursion_certificate(&c);
            let b = builtins::rank_algebra(3, limits)?;
            let h = hylo(&c, &b)?;
            let text = format!(
                "relation (predecessors):\n{}recursive: {}\norder: {}\nrank:\n{}",
                coalgebra_text(&c),
                yes(cert.is_recursive()),
                cert.names(c.carrier()).join(", "),
                map_text(&h)
            );
            let json = json!({
                "example": "wf-relation",
                "coalgebra": io::coalgebra_json(&c),
                "recursive": cert.is_recursive(),
                "rank": map_json(&h),
            });
            Ok(Rendered { exit: 0, json, text, dot: Some(dot::coalgebra_dot(&c, Some(&h))) })
        }
    }
}

fn selftest_report(seed: u64, limits: &Limits) -> Rendered {
    let results = selftest::run_all(seed, limits);
    let mut text = String::new();
    let mut checks = Vec::new();
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        writeln!(text, "{status} {}: {}", r.name, r.detail).unwrap();
        checks.push(json!({ "name": r.name, "passed": r.passed, "detail": r.detail }));
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    writeln!(text, "{} checks, {failed} failed", results.len()).unwrap();
    Rendered {
        exit: if failed == 0 { 0 } else { 2 },
        json: json!({ "seed": seed, "checks": checks, "failed": failed }),
        text,
        dot: None,
    }
}
