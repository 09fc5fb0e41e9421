//! Ready-made signatures, coalgebras and algebras.

use crate::coalgebra::{Algebra, Coalgebra};
use crate::error::{Limits, Result};
use crate::finset::{Elem, FinSet};
use crate::functor::{FElem, OpSym, Shape, Signature};

/// `FX = {leaf} + X × X`.
pub fn cherry() -> Signature {
    Signature::polynomial([OpSym::new("leaf", 0), OpSym::new("node", 2)]).expect("valid signature")
}

/// `FX = {z} + X`.
pub fn successor() -> Signature {
    Signature::polynomial([OpSym::new("z", 0), OpSym::new("s", 1)]).expect("valid signature")
}

/// `n` constants `k1, …, kn` and nothing else.
pub fn constants(n: usize) -> Signature {
    Signature::polynomial((1..=n).map(|k| OpSym::new(format!("k{k}"), 0))).expect("valid signature")
}

/// The signature with no operations; `F` is constantly empty.
pub fn empty_signature() -> Signature {
    Signature::polynomial([]).expect("valid signature")
}

/// `FX = {leaf} + X × X × X`.
pub fn ternary() -> Signature {
    Signature::polynomial([OpSym::new("leaf", 0), OpSym::new("node", 3)]).expect("valid signature")
}

/// `FX = {c1, c2} + X × X`: two leaf labels.
pub fn labelled_cherry() -> Signature {
    Signature::polynomial([OpSym::new("c1", 0), OpSym::new("c2", 0), OpSym::new("node", 2)])
        .expect("valid signature")
}

/// Looks up a signature by name: `cherry`, `successor`, `ternary`,
/// `labelled-cherry`, `empty`, `powerset`, or `constants<N>`.
pub fn by_name(name: &str) -> Option<Signature> {
    match name {
        "cherry" => Some(cherry()),
        "successor" => Some(successor()),
        "ternary" => Some(ternary()),
        "labelled-cherry" => Some(labelled_cherry()),
        "empty" => Some(empty_signature()),
        "powerset" => Some(Signature::powerset()),
        _ => name.strip_prefix("constants").and_then(|n| n.parse().ok()).map(constants),
    }
}

/// The six-state recursive cherry coalgebra: `x, y, z` are leaves,
/// `u ↦ (x, x)`, `w ↦ (z, y)`, `v ↦ (y, w)`.
pub fn fig2_coalgebra() -> Coalgebra {
    let carrier = FinSet::new(["x", "y", "z", "u", "w", "v"]).expect("distinct names");
    Coalgebra::new(
        &cherry(),
        carrier,
        [
            ("x", FElem::constant("leaf")),
            ("y", FElem::constant("leaf")),
            ("z", FElem::constant("leaf")),
            ("u", FElem::op("node", ["x", "x"])),
            ("w", FElem::op("node", ["z", "y"])),
            ("v", FElem::op("node", ["y", "w"])),
        ],
        &Limits::default(),
    )
    .expect("well-formed coalgebra")
}

/// Tree height on `{0, …, max}`: `leaf ↦ 0`, `node(k, n) ↦ 1 + max(k, n)`,
/// saturating at `max`.
pub fn height_algebra(max: usize, limits: &Limits) -> Result<Algebra> {
    Algebra::from_fn(&cherry(), FinSet::ordinal(max + 1), limits, |s| match s {
        Shape::Op { args, .. } if !args.is_empty() => (1 + args.iter().copied().max().unwrap_or(0)).min(max),
        _ => 0,
    })
}

/// Parity on `{0, 1}` for the successor functor: `z ↦ 0`, `s(k) ↦ 1 − k`.
pub fn parity_algebra(limits: &Limits) -> Result<Algebra> {
    Algebra::from_fn(&successor(), FinSet::ordinal(2), limits, |s| match s {
        Shape::Op { args, .. } if args.len() == 1 => 1 - args[0],
        _ => 0,
    })
}

/// Rank of a well-founded relation on `{0, …, max}`: a set of predecessors
/// maps to one more than their largest rank, `∅ ↦ 0`, saturating at `max`.
pub fn rank_algebra(max: usize, limits: &Limits) -> Result<Algebra> {
    Algebra::from_fn(&Signature::powerset(), FinSet::ordinal(max + 1), limits, |s| match s {
        Shape::Subset(m) if !m.is_empty() => (1 + m.iter().copied().max().unwrap_or(0)).min(max),
        _ => 0,
    })
}

/// The relation `a R b` as a powerset coalgebra: `b ↦ {a}`, `a ↦ ∅`.
pub fn wf_relation() -> Coalgebra {
    relation_coalgebra(&["a", "b"], &[("a", "b")]).expect("well-formed relation")
}

/// The powerset coalgebra `x ↦ {y : y R x}` of a relation given as pairs
/// `(y, x)`.
pub fn relation_coalgebra(elems: &[&str], pairs: &[(&str, &str)]) -> Result<Coalgebra> {
    let carrier = FinSet::new(elems.iter().copied())?;
    let structure = elems.iter().map(|&x| {
        let preds = pairs.iter().filter(|(_, t)| *t == x).map(|(y, _)| *y);
        (x, FElem::subset(preds))
    });
    let structure: Vec<_> = structure.collect();
    Coalgebra::new(&Signature::powerset(), carrier, structure, &Limits::default())
}

/// `FX = {nil} + C × X × X` with one binary operation `p<c>` per letter `c`.
pub fn quicksort_signature(letters: &[&str]) -> Result<Signature> {
    let ops = std::iter::once(OpSym::new("nil", 0)).chain(letters.iter().map(|c| OpSym::new(format!("p{c}"), 2)));
    Signature::polynomial(ops)
}

/// Name of a list of letters, e.g. `[3,1,2]`.
pub fn list_name<S: AsRef<str>>(list: &[S]) -> String {
    let parts: Vec<&str> = list.iter().map(AsRef::as_ref).collect();
    format!("[{}]", parts.join(","))
}

/// All words of length at most `max_len`, shortest first.
fn all_lists(letters: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let next: Vec<Vec<usize>> = layer
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..letters).map(move |c| {
                    let mut v = w.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// The partitioning coalgebra on all lists of length at most `max_len`:
/// `[] ↦ nil`, `c w ↦ p<c>(w≤c, w>c)`. Letters are ordered as given.
pub fn quicksort_coalgebra(letters: &[&str], max_len: usize, limits: &Limits) -> Result<Coalgebra> {
    let sig = quicksort_signature(letters)?;
    let lists = all_lists(letters.len(), max_len);
    let name = |w: &[usize]| Elem::from(list_name(&w.iter().map(|&c| letters[c]).collect::<Vec<_>>()));
    let carrier = FinSet::new(lists.iter().map(|w| name(w)))?;
    let structure: Vec<(Elem, FElem)> = lists
        .iter()
        .map(|w| {
            let fe = match w.split_first() {
                None => FElem::constant("nil"),
                Some((&c, rest)) => {
                    let low: Vec<usize> = rest.iter().copied().filter(|&d| d <= c).collect();
                    let high: Vec<usize> = rest.iter().copied().filter(|&d| d > c).collect();
                    FElem::op(&format!("p{}", letters[c]), [name(&low), name(&high)])
                }
            };
            (name(w), fe)
        })
        .collect();
    Coalgebra::new(&sig, carrier, structure, limits)
}

/// Name of the overflow element of [`quicksort_algebra`].
pub const OVERFLOW: &str = "overflow";

/// The merging algebra on sorted lists of length at most `max_len`, plus an
/// overflow element: `nil ↦ []`, `p<c>(w, v) ↦ w c v` when that is a sorted
/// list within the length bound, overflow otherwise.
pub fn quicksort_algebra(letters: &[&str], max_len: usize, limits: &Limits) -> Result<Algebra> {
    let sig = quicksort_signature(letters)?;
    let sorted: Vec<Vec<usize>> =
        all_lists(letters.len(), max_len).into_iter().filter(|w| w.windows(2).all(|p| p[0] <= p[1])).collect();
    let overflow = sorted.len();
    let names = sorted
        .iter()
        .map(|w| list_name(&w.iter().map(|&c| letters[c]).collect::<Vec<_>>()))
        .chain(std::iter::once(OVERFLOW.to_string()));
    let carrier = FinSet::new(names)?;
    Algebra::from_fn(&sig, carrier, limits, |s| {
        let Shape::Op { op, args } = s else { return overflow };
        if *op == 0 {
            return 0;
        }
        if args.contains(&overflow) {
            return overflow;
        }
        let mut w = sorted[args[0]].clone();
        w.push(op - 1);
        w.extend(&sorted[args[1]]);
        if w.len() > max_len || !w.windows(2).all(|p| p[0] <= p[1]) {
            return overflow;
        }
        sorted.iter().position(|s| *s == w).unwrap_or(overflow)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::{hylo, is_recursive};

    #[test]
    fn lookup() {
        assert_eq!(by_name("constants3").unwrap().ops().len(), 3);
        assert!(by_name("powerset").unwrap().is_powerset());
        assert!(by_name("nope").is_none());
    }

    #[test]
    fn quicksort_small() {
        let letters = ["1", "2", "3"];
        let lim = Limits::default();
        let c = quicksort_coalgebra(&letters, 3, &lim).unwrap();
        assert_eq!(c.len(), 1 + 3 + 9 + 27);
        assert!(is_recursive(&c));
        let a = quicksort_algebra(&letters, 3, &lim).unwrap();
        let h = hylo(&c, &a).unwrap();
        let input = Elem::from("[3,1,2]");
        assert_eq!(h.apply(&input).unwrap().as_str(), "[1,2,3]");
    }

    #[test]
    fn relation_example() {
        let c = wf_relation();
        assert!(is_recursive(&c));
        let loopy = relation_coalgebra(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap();
        assert!(!is_recursive(&loopy));
        let h = hylo(&c, &rank_algebra(3, &Limits::default()).unwrap()).unwrap();
        assert_eq!(h.indices(), [0, 1]);
    }
}
