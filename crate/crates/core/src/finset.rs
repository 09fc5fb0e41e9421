//! Finite sets, total functions between them, binary coproducts and quotients.
//!
//! A [`FinSet`] is an ordered list of distinct [`Elem`]s; its iteration order
//! is its canonical order and every derived construction (coproducts,
//! functor images, colimit apexes) lists its elements in a deterministic
//! order, so equal constructions yield identical sets.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An element name.
///
/// Names compare in natural order: maximal digit runs compare numerically, so
/// `"2" < "10"` and `"L:9" < "L:10"`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Elem(Arc<str>);

impl Elem {
    pub fn new(name: impl AsRef<str>) -> Self {
        Elem(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Elem {
    fn from(s: &str) -> Self {
        Elem::new(s)
    }
}

impl From<String> for Elem {
    fn from(s: String) -> Self {
        Elem(Arc::from(s))
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Ord for Elem {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for Elem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut xs, mut ys) = (a.as_bytes(), b.as_bytes());
    loop {
        match (xs.first(), ys.first()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let xn = xs.iter().take_while(|c| c.is_ascii_digit()).count();
                let yn = ys.iter().take_while(|c| c.is_ascii_digit()).count();
                let xd = trim_zeros(&xs[..xn]);
                let yd = trim_zeros(&ys[..yn]);
                let ord = xd.len().cmp(&yd.len()).then_with(|| xd.cmp(yd));
                if ord != Ordering::Equal {
                    return ord;
                }
                xs = &xs[xn..];
                ys = &ys[yn..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                xs = &xs[1..];
                ys = &ys[1..];
            }
        }
    }
}

fn trim_zeros(d: &[u8]) -> &[u8] {
    let n = d.iter().take_while(|&&c| c == b'0').count();
    &d[n..]
}

struct SetInner {
    elems: Vec<Elem>,
    index: HashMap<Elem, usize>,
}

/// A finite set with a fixed canonical order. Cheap to clone.
#[derive(Clone)]
pub struct FinSet(Arc<SetInner>);

impl FinSet {
    /// Builds a set whose canonical order is the given order.
    pub fn new<I, E>(elems: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: Into<Elem>,
    {
        let elems: Vec<Elem> = elems.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(elems.len());
        for (i, e) in elems.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::DuplicateElement(e.to_string()));
            }
        }
        Ok(FinSet(Arc::new(SetInner { elems, index })))
    }

    /// Builds a set sorted by the natural element order.
    pub fn sorted<I, E>(elems: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: Into<Elem>,
    {
        let mut v: Vec<Elem> = elems.into_iter().map(Into::into).collect();
        v.sort();
        FinSet::new(v)
    }

    /// Callers guarantee distinct names.
    pub(crate) fn from_distinct(elems: Vec<Elem>) -> Self {
        let index = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        FinSet(Arc::new(SetInner { elems, index }))
    }

    pub fn empty() -> Self {
        FinSet::from_distinct(Vec::new())
    }

    /// The canonical ordinal `{0, …, k-1}`.
    pub fn ordinal(k: usize) -> Self {
        FinSet::from_distinct((0..k).map(|i| Elem::from(i.to_string())).collect())
    }

    pub fn len(&self) -> usize {
        self.0.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.elems.is_empty()
    }

    pub fn elems(&self) -> &[Elem] {
        &self.0.elems
    }

    pub fn elem(&self, i: usize) -> &Elem {
        &self.0.elems[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Elem> {
        self.0.elems.iter()
    }

    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        self.0.index.get(e).copied()
    }

    pub fn index_of_str(&self, name: &str) -> Option<usize> {
        self.0.index.get(&Elem::new(name)).copied()
    }

    pub fn contains(&self, e: &Elem) -> bool {
        self.0.index.contains_key(e)
    }

    /// Index of `e`, or [`Error::ElementNotFound`].
    pub fn require(&self, e: &Elem) -> Result<usize> {
        self.index_of(e).ok_or_else(|| Error::ElementNotFound {
            elem: e.to_string(),
            context: format!("a set of {} elements", self.len()),
        })
    }

    pub fn ptr_eq(&self, other: &FinSet) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// True when both sets have the same elements in the same order.
    pub fn same_as(&self, other: &FinSet) -> bool {
        self == other
    }
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other) || self.0.elems == other.0.elems
    }
}

impl Eq for FinSet {}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.elems.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a FinSet {
    type Item = &'a Elem;
    type IntoIter = std::slice::Iter<'a, Elem>;
    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

/// A total function between finite sets, stored as an index table.
#[derive(Clone, PartialEq, Eq)]
pub struct FinFn {
    dom: FinSet,
    cod: FinSet,
    map: Vec<usize>,
}

impl FinFn {
    /// Builds a function from an index table. Fails if the table has the
    /// wrong length or points outside the codomain.
    pub fn from_indices(dom: FinSet, cod: FinSet, map: Vec<usize>) -> Result<Self> {
        if map.len() != dom.len() {
            return Err(Error::DomainMismatch(format!(
                "table has {} entries for a domain of {}",
                map.len(),
                dom.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&j| j >= cod.len()) {
            return Err(Error::CodomainMismatch(format!(
                "index {bad} outside a codomain of {}",
                cod.len()
            )));
        }
        Ok(FinFn { dom, cod, map })
    }

    pub(crate) fn from_indices_unchecked(dom: FinSet, cod: FinSet, map: Vec<usize>) -> Self {
        debug_assert_eq!(map.len(), dom.len());
        debug_assert!(map.iter().all(|&j| j < cod.len()));
        FinFn { dom, cod, map }
    }

    /// Builds a function from `(argument, image)` name pairs; must be total.
    pub fn from_pairs<I, A, B>(dom: FinSet, cod: FinSet, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<Elem>,
        B: Into<Elem>,
    {
        let mut map = vec![usize::MAX; dom.len()];
        for (a, b) in pairs {
            let (a, b) = (a.into(), b.into());
            let i = dom.require(&a)?;
            map[i] = cod.require(&b)?;
        }
        if let Some(i) = map.iter().position(|&j| j == usize::MAX) {
            return Err(Error::NotTotal(dom.elem(i).to_string()));
        }
        Ok(FinFn { dom, cod, map })
    }

    pub fn from_fn(dom: FinSet, cod: FinSet, f: impl Fn(usize) -> usize) -> Result<Self> {
        let map = (0..dom.len()).map(f).collect();
        FinFn::from_indices(dom, cod, map)
    }

    pub fn identity(x: &FinSet) -> Self {
        FinFn { dom: x.clone(), cod: x.clone(), map: (0..x.len()).collect() }
    }

    /// The unique map out of the empty set.
    pub fn from_empty(cod: &FinSet) -> Self {
        FinFn { dom: FinSet::empty(), cod: cod.clone(), map: Vec::new() }
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn indices(&self) -> &[usize] {
        &self.map
    }

    /// Image index of the domain element at index `i`.
    pub fn at(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn apply(&self, e: &Elem) -> Option<&Elem> {
        self.dom.index_of(e).map(|i| self.cod.elem(self.map[i]))
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &FinFn) -> Result<FinFn> {
        compose(self, f)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        self.map.iter().all(|&j| !std::mem::replace(&mut seen[j], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        for &j in &self.map {
            seen[j] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.len() == self.cod.len() && self.is_injective()
    }

    /// The two-sided inverse, present iff the function is bijective.
    pub fn try_inverse(&self) -> Option<FinFn> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.cod.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Some(FinFn { dom: self.cod.clone(), cod: self.dom.clone(), map: inv })
    }

    /// Same table, different (equal-sized) endpoints.
    pub fn relabel(&self, dom: FinSet, cod: FinSet) -> Result<FinFn> {
        FinFn::from_indices(dom, cod, self.map.clone())
    }

    /// `(argument, image)` name pairs in domain order.
    pub fn pairs(&self) -> impl Iterator<Item = (&Elem, &Elem)> + '_ {
        self.dom.iter().zip(self.map.iter().map(|&j| self.cod.elem(j)))
    }
}

impl fmt::Debug for FinFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.pairs()).finish()
    }
}

/// `g ∘ f`; requires `cod(f) = dom(g)`.
pub fn compose(g: &FinFn, f: &FinFn) -> Result<FinFn> {
    if f.cod != g.dom {
        return Err(Error::DomainMismatch(format!(
            "cannot compose: codomain has {} elements, next domain has {}",
            f.cod.len(),
            g.dom.len()
        )));
    }
    let map = f.map.iter().map(|&j| g.map[j]).collect();
    Ok(FinFn { dom: f.dom.clone(), cod: g.cod.clone(), map })
}

pub fn identity(x: &FinSet) -> FinFn {
    FinFn::identity(x)
}

/// A binary coproduct `X + Y` with its injections.
#[derive(Debug, Clone)]
pub struct Coproduct {
    pub apex: FinSet,
    pub inl: FinFn,
    pub inr: FinFn,
}

impl Coproduct {
    pub fn left(&self) -> &FinSet {
        self.inl.dom()
    }

    pub fn right(&self) -> &FinSet {
        self.inr.dom()
    }
}

/// `X + Y`; elements are tagged `L:<name>` and `R:<name>`, left summand first.
pub fn coproduct(x: &FinSet, y: &FinSet) -> Coproduct {
    let elems = x
        .iter()
        .map(|e| Elem::from(format!("L:{e}")))
        .chain(y.iter().map(|e| Elem::from(format!("R:{e}"))))
        .collect();
    let apex = FinSet::from_distinct(elems);
    let inl = FinFn::from_indices_unchecked(x.clone(), apex.clone(), (0..x.len()).collect());
    let inr = FinFn::from_indices_unchecked(
        y.clone(),
        apex.clone(),
        (x.len()..x.len() + y.len()).collect(),
    );
    Coproduct { apex, inl, inr }
}

/// `[f, g]: X + Y → Z`.
pub fn copair(f: &FinFn, g: &FinFn, cop: &Coproduct) -> Result<FinFn> {
    if f.cod != g.cod {
        return Err(Error::CodomainMismatch("copair legs have different codomains".into()));
    }
    if f.dom != *cop.left() || g.dom != *cop.right() {
        return Err(Error::DomainMismatch("copair legs do not match the coproduct summands".into()));
    }
    let map = f.map.iter().chain(g.map.iter()).copied().collect();
    Ok(FinFn { dom: cop.apex.clone(), cod: f.cod.clone(), map })
}

/// The codiagonal `∇ = [id, id]: X + X → X`.
pub fn codiagonal(cop: &Coproduct) -> Result<FinFn> {
    if cop.left() != cop.right() {
        return Err(Error::DomainMismatch("codiagonal needs a coproduct X + X".into()));
    }
    copair(&FinFn::identity(cop.left()), &FinFn::identity(cop.right()), cop)
}

/// An equivalence relation on a finite set, stored as a union-find forest
/// whose roots are the least member of each class.
#[derive(Clone)]
pub struct Partition {
    base: FinSet,
    parent: Vec<usize>,
}

impl Partition {
    pub fn discrete(base: &FinSet) -> Self {
        Partition { base: base.clone(), parent: (0..base.len()).collect() }
    }

    pub fn base(&self) -> &FinSet {
        &self.base
    }

    /// Representative index of `i`'s class; compresses the path.
    pub fn find_mut(&mut self, mut i: usize) -> usize {
        let mut root = i;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[i] != root {
            let next = self.parent[i];
            self.parent[i] = root;
            i = next;
        }
        root
    }

    pub fn find(&self, mut i: usize) -> usize {
        while self.parent[i] != i {
            i = self.parent[i];
        }
        i
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find_mut(a), self.find_mut(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Fully compresses the forest so that every node points at its root.
    pub fn flatten(&mut self) {
        for i in 0..self.parent.len() {
            self.find_mut(i);
        }
    }

    /// Class representatives in increasing order.
    pub fn representatives(&self) -> Vec<usize> {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).collect()
    }

    pub fn num_classes(&self) -> usize {
        (0..self.parent.len()).filter(|&i| self.parent[i] == i).count()
    }

    /// Classes as sorted index lists, ordered by representative.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let reps = self.representatives();
        let pos: HashMap<usize, usize> = reps.iter().enumerate().map(|(k, &r)| (r, k)).collect();
        let mut out = vec![Vec::new(); reps.len()];
        for i in 0..self.parent.len() {
            out[pos[&self.find(i)]].push(i);
        }
        out
    }

    /// Class number (position of the representative) for every element.
    pub fn class_index(&self) -> Vec<usize> {
        let mut pos = vec![usize::MAX; self.parent.len()];
        let mut next = 0;
        let mut out = Vec::with_capacity(self.parent.len());
        for i in 0..self.parent.len() {
            let r = self.find(i);
            if pos[r] == usize::MAX {
                pos[r] = next;
                next += 1;
            }
            out.push(pos[r]);
        }
        out
    }

    /// The quotient projection onto the set of representatives.
    pub fn projection(&self) -> FinFn {
        let reps = self.representatives();
        let cod = FinSet::from_distinct(reps.iter().map(|&r| self.base.elem(r).clone()).collect());
        FinFn::from_indices_unchecked(self.base.clone(), cod, self.class_index())
    }
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
            && (0..self.parent.len()).all(|i| self.find(i) == other.find(i))
    }
}

impl Eq for Partition {}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let classes: Vec<Vec<&Elem>> = self
            .classes()
            .into_iter()
            .map(|c| c.into_iter().map(|i| self.base.elem(i)).collect())
            .collect();
        f.debug_list().entries(classes).finish()
    }
}

/// Quotient of `x` by the equivalence relation generated by `pairs`.
pub fn quotient(x: &FinSet, pairs: &[(Elem, Elem)]) -> Result<(Partition, FinFn)> {
    let mut part = Partition::discrete(x);
    for (a, b) in pairs {
        let (i, j) = (x.require(a)?, x.require(b)?);
        part.union(i, j);
    }
    part.flatten();
    let proj = part.projection();
    Ok((part, proj))
}
