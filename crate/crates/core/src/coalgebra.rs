//! Algebras and coalgebras for a signature functor, morphism checks, the
//! recursiveness decision, hylomorphisms, and the structural combinators
//! built on top of them.
//!
//! A finite coalgebra is recursive iff its successor graph (each state
//! pointing at the states occurring in its structure) is acyclic. That
//! equivalence is not trusted blindly: [`brute_force_solutions`] enumerates
//! all coalgebra-to-algebra maps as an independent oracle.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::colimit::{colimit, mediate, Cocone, ColimitData, Diagram};
use crate::error::{pow_saturating, Error, Limits, Result};
use crate::finset::{Elem, FinFn, FinSet};
use crate::functor::{increment, FElem, FObj, Shape, Signature};

/// A coalgebra `c: C → FC`.
#[derive(Debug, Clone)]
pub struct Coalgebra {
    image: FObj,
    structure: FinFn,
}

impl Coalgebra {
    /// Builds a coalgebra from named structure entries, which must cover the
    /// carrier exactly once.
    pub fn new<I, E>(sig: &Signature, carrier: FinSet, structure: I, limits: &Limits) -> Result<Self>
    where
        I: IntoIterator<Item = (E, FElem)>,
        E: Into<Elem>,
    {
        let image = sig.apply_obj(&carrier, limits)?;
        let mut table = vec![None; carrier.len()];
        for (x, fe) in structure {
            let x = x.into();
            let i = carrier.require(&x)?;
            if table[i].is_some() {
                return Err(Error::DuplicateElement(x.to_string()));
            }
            table[i] = Some(image.index_of_felem(&fe)?);
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, t)| t.ok_or_else(|| Error::NotTotal(carrier.elem(i).to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_table(image, table))
    }

    pub fn from_shapes(sig: &Signature, carrier: FinSet, shapes: &[Shape], limits: &Limits) -> Result<Self> {
        if shapes.len() != carrier.len() {
            return Err(Error::CarrierMismatch(format!(
                "{} shapes for a carrier of {} elements",
                shapes.len(),
                carrier.len()
            )));
        }
        let image = sig.apply_obj(&carrier, limits)?;
        let table = shapes.iter().map(|s| image.encode(s)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_table(image, table))
    }

    /// `structure` must map `image.base()` into `image.set()`.
    pub fn from_structure(image: FObj, structure: FinFn) -> Result<Self> {
        if structure.dom() != image.base() || structure.cod() != image.set() {
            return Err(Error::CarrierMismatch("structure map does not run from C to FC".into()));
        }
        Ok(Coalgebra { image, structure })
    }

    pub(crate) fn from_table(image: FObj, table: Vec<usize>) -> Self {
        let structure = FinFn::from_indices_unchecked(image.base().clone(), image.set().clone(), table);
        Coalgebra { image, structure }
    }

    pub fn signature(&self) -> &Signature {
        self.image.signature()
    }

    pub fn carrier(&self) -> &FinSet {
        self.image.base()
    }

    /// `FC` with its decoder.
    pub fn image(&self) -> &FObj {
        &self.image
    }

    pub fn structure(&self) -> &FinFn {
        &self.structure
    }

    pub fn len(&self) -> usize {
        self.carrier().len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier().is_empty()
    }

    /// Raw structure table; identifies a coalgebra on a fixed carrier.
    pub fn table(&self) -> &[usize] {
        self.structure.indices()
    }

    pub fn shape(&self, x: usize) -> Shape {
        self.image.decode(self.structure.at(x))
    }

    pub fn felem(&self, x: usize) -> FElem {
        self.image.felem(self.structure.at(x))
    }

    /// Distinct successors of `x`, in order of first occurrence.
    pub fn successors(&self, x: usize) -> Vec<usize> {
        let mut out = self.image.children(self.structure.at(x));
        dedup_in_order(&mut out);
        out
    }

    /// Adjacency lists of the successor graph.
    pub fn successor_graph(&self) -> Vec<Vec<usize>> {
        (0..self.len()).map(|x| self.successors(x)).collect()
    }
}

fn dedup_in_order(v: &mut Vec<usize>) {
    let mut seen = Vec::with_capacity(v.len());
    v.retain(|x| {
        if seen.contains(x) {
            false
        } else {
            seen.push(*x);
            true
        }
    });
}

/// An algebra `a: FA → A`.
#[derive(Debug, Clone)]
pub struct Algebra {
    image: FObj,
    structure: FinFn,
}

impl Algebra {
    /// Builds an algebra from named entries covering every element of `FA`.
    pub fn new<I, E>(sig: &Signature, carrier: FinSet, structure: I, limits: &Limits) -> Result<Self>
    where
        I: IntoIterator<Item = (FElem, E)>,
        E: Into<Elem>,
    {
        let image = sig.apply_obj(&carrier, limits)?;
        let mut table = vec![None; image.len()];
        for (fe, y) in structure {
            let i = image.index_of_felem(&fe)?;
            if table[i].is_some() {
                return Err(Error::DuplicateElement(image.set().elem(i).to_string()));
            }
            table[i] = Some(carrier.require(&y.into())?);
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, t)| t.ok_or_else(|| Error::NotTotal(image.set().elem(i).to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_table(image, table))
    }

    /// Builds an algebra by evaluating `f` on the shape of every element of
    /// `FA`; `f` returns a carrier index.
    pub fn from_fn(sig: &Signature, carrier: FinSet, limits: &Limits, f: impl Fn(&Shape) -> usize) -> Result<Self> {
        let image = sig.apply_obj(&carrier, limits)?;
        let table: Vec<usize> = (0..image.len()).map(|i| f(&image.decode(i))).collect();
        if let Some(&bad) = table.iter().find(|&&t| t >= carrier.len()) {
            return Err(Error::ElementNotFound { elem: bad.to_string(), context: "the algebra carrier".into() });
        }
        Ok(Self::from_table(image, table))
    }

    pub fn from_structure(image: FObj, structure: FinFn) -> Result<Self> {
        if structure.dom() != image.set() || structure.cod() != image.base() {
            return Err(Error::CarrierMismatch("structure map does not run from FA to A".into()));
        }
        Ok(Algebra { image, structure })
    }

    pub(crate) fn from_table(image: FObj, table: Vec<usize>) -> Self {
        let structure = FinFn::from_indices_unchecked(image.set().clone(), image.base().clone(), table);
        Algebra { image, structure }
    }

    pub fn signature(&self) -> &Signature {
        self.image.signature()
    }

    pub fn carrier(&self) -> &FinSet {
        self.image.base()
    }

    pub fn image(&self) -> &FObj {
        &self.image
    }

    pub fn structure(&self) -> &FinFn {
        &self.structure
    }

    /// Applies the structure to a shape over the carrier.
    pub fn eval(&self, shape: &Shape) -> Result<usize> {
        Ok(self.structure.at(self.image.encode(shape)?))
    }
}

/// What a function is claimed to be a morphism of.
#[derive(Debug, Clone, Copy)]
pub enum MorphismKind<'a> {
    /// `d ∘ h = Fh ∘ c`
    Coalgebra(&'a Coalgebra, &'a Coalgebra),
    /// `h ∘ a = b ∘ Fh`
    Algebra(&'a Algebra, &'a Algebra),
    /// `h = a ∘ Fh ∘ c`
    CoalgebraToAlgebra(&'a Coalgebra, &'a Algebra),
}

fn check_endpoints(h: &FinFn, src: &FObj, dst: &FObj) -> Result<()> {
    if src.signature() != dst.signature() {
        return Err(Error::SignatureMismatch("morphism between different functors".into()));
    }
    if h.dom() != src.base() || h.cod() != dst.base() {
        return Err(Error::CarrierMismatch("function endpoints do not match the carriers".into()));
    }
    Ok(())
}

/// Pointwise check of the morphism square or pentagon.
pub fn verify_morphism(kind: MorphismKind<'_>, h: &FinFn) -> Result<bool> {
    Ok(match kind {
        MorphismKind::Coalgebra(c, d) => {
            check_endpoints(h, &c.image, &d.image)?;
            coalgebra_square_holds(c, d, h.indices())
        }
        MorphismKind::Algebra(a, b) => {
            check_endpoints(h, &a.image, &b.image)?;
            (0..a.image.len()).all(|y| h.at(a.structure.at(y)) == b.structure.at(a.image.fmap_index(&b.image, h.indices(), y)))
        }
        MorphismKind::CoalgebraToAlgebra(c, a) => {
            check_endpoints(h, &c.image, &a.image)?;
            pentagon_holds(c, a, h.indices())
        }
    })
}

pub fn is_coalgebra_morphism(h: &FinFn, src: &Coalgebra, dst: &Coalgebra) -> Result<bool> {
    verify_morphism(MorphismKind::Coalgebra(src, dst), h)
}

pub(crate) fn coalgebra_square_holds(c: &Coalgebra, d: &Coalgebra, h: &[usize]) -> bool {
    (0..c.len()).all(|x| d.structure.at(h[x]) == c.image.fmap_index(&d.image, h, c.structure.at(x)))
}

fn pentagon_holds(c: &Coalgebra, a: &Algebra, h: &[usize]) -> bool {
    (0..c.len()).all(|x| h[x] == a.structure.at(c.image.fmap_index(&a.image, h, c.structure.at(x))))
}

/// Result of the recursiveness decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Every state after all of its successors.
    Acyclic { order: Vec<usize> },
    /// States along a cycle of the successor graph, each pointing at the next.
    Cycle { cycle: Vec<usize> },
}

impl Certificate {
    pub fn is_recursive(&self) -> bool {
        matches!(self, Certificate::Acyclic { .. })
    }

    pub fn names(&self, carrier: &FinSet) -> Vec<String> {
        let (Certificate::Acyclic { order: v } | Certificate::Cycle { cycle: v }) = self;
        v.iter().map(|&x| carrier.elem(x).to_string()).collect()
    }
}

/// Depth-first search for a dependency-first order or a cycle.
pub(crate) fn topo_or_cycle(succ: &[Vec<usize>]) -> Certificate {
    let n = succ.len();
    let mut state = vec![0u8; n];
    let mut order = Vec::with_capacity(n);
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        state[root] = 1;
        stack.push((root, 0));
        while let Some(&mut (x, ref mut k)) = stack.last_mut() {
            if let Some(&y) = succ[x].get(*k) {
                *k += 1;
                match state[y] {
                    0 => {
                        state[y] = 1;
                        stack.push((y, 0));
                    }
                    1 => {
                        let start = stack.iter().position(|&(z, _)| z == y).unwrap_or(0);
                        return Certificate::Cycle { cycle: stack[start..].iter().map(|&(z, _)| z).collect() };
                    }
                    _ => {}
                }
            } else {
                state[x] = 2;
                order.push(x);
                stack.pop();
            }
        }
    }
    Certificate::Acyclic { order }
}

pub fn recursion_certificate(c: &Coalgebra) -> Certificate {
    topo_or_cycle(&c.successor_graph())
}

pub fn is_recursive(c: &Coalgebra) -> bool {
    recursion_certificate(c).is_recursive()
}

fn require_order(c: &Coalgebra) -> Result<Vec<usize>> {
    match recursion_certificate(c) {
        Certificate::Acyclic { order } => Ok(order),
        cert @ Certificate::Cycle { .. } => Err(Error::NotRecursive { cycle: cert.names(c.carrier()) }),
    }
}

/// The unique `h = a ∘ Fh ∘ c`, evaluated along a dependency-first order.
pub fn hylo(c: &Coalgebra, a: &Algebra) -> Result<FinFn> {
    if c.signature() != a.signature() {
        return Err(Error::SignatureMismatch("coalgebra and algebra use different functors".into()));
    }
    let order = require_order(c)?;
    let mut h = vec![0usize; c.len()];
    for x in order {
        h[x] = a.structure.at(c.image.fmap_index(&a.image, &h, c.structure.at(x)));
    }
    Ok(FinFn::from_indices_unchecked(c.carrier().clone(), a.carrier().clone(), h))
}

/// Calls `f` on every function table `dom → cod` in lexicographic order
/// until it returns `false`.
pub(crate) fn for_each_function(dom: usize, cod: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if cod == 0 && dom > 0 {
        return;
    }
    let mut digits = vec![0usize; dom];
    loop {
        if !f(&digits) || !increment(&mut digits, cod) {
            return;
        }
    }
}

/// Every `h: C → A` with `h = a ∘ Fh ∘ c`, by exhaustive enumeration.
pub fn brute_force_solutions(c: &Coalgebra, a: &Algebra, limits: &Limits) -> Result<Vec<FinFn>> {
    if c.signature() != a.signature() {
        return Err(Error::SignatureMismatch("coalgebra and algebra use different functors".into()));
    }
    limits.check("candidate functions", pow_saturating(a.carrier().len(), c.len()))?;
    let mut out = Vec::new();
    for_each_function(c.len(), a.carrier().len(), |h| {
        if pentagon_holds(c, a, h) {
            out.push(FinFn::from_indices_unchecked(c.carrier().clone(), a.carrier().clone(), h.to_vec()));
        }
        true
    });
    Ok(out)
}

/// All coalgebra morphisms `src → dst`, in lexicographic order of their
/// tables. For recursive `src` the search assigns states in dependency
/// order, where the image of each state is forced up to the choice among
/// states of `dst` with the required structure; otherwise it enumerates all
/// functions.
pub fn coalgebra_morphisms(src: &Coalgebra, dst: &Coalgebra, limits: &Limits) -> Result<Vec<FinFn>> {
    if src.signature() != dst.signature() {
        return Err(Error::SignatureMismatch("coalgebras use different functors".into()));
    }
    let wrap = |t: Vec<usize>| FinFn::from_indices_unchecked(src.carrier().clone(), dst.carrier().clone(), t);
    let Certificate::Acyclic { order } = recursion_certificate(src) else {
        limits.check("candidate functions", pow_saturating(dst.len(), src.len()))?;
        let mut out = Vec::new();
        for_each_function(src.len(), dst.len(), |h| {
            if coalgebra_square_holds(src, dst, h) {
                out.push(wrap(h.to_vec()));
            }
            true
        });
        return Ok(out);
    };
    let mut by_structure: HashMap<usize, Vec<usize>> = HashMap::new();
    for y in 0..dst.len() {
        by_structure.entry(dst.structure.at(y)).or_default().push(y);
    }
    let mut tables = Vec::new();
    let mut h = vec![0usize; src.len()];
    search_morphisms(src, dst, &order, 0, &by_structure, &mut h, &mut tables, limits.cap)?;
    tables.sort_unstable();
    Ok(tables.into_iter().map(wrap).collect())
}

#[allow(clippy::too_many_arguments)]
fn search_morphisms(
    src: &Coalgebra,
    dst: &Coalgebra,
    order: &[usize],
    k: usize,
    by_structure: &HashMap<usize, Vec<usize>>,
    h: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    cap: usize,
) -> Result<()> {
    let Some(&x) = order.get(k) else {
        if out.len() >= cap {
            return Err(Error::SizeCapExceeded { what: "coalgebra morphisms".into(), size: out.len() as u128 + 1, cap });
        }
        out.push(h.clone());
        return Ok(());
    };
    let target = src.image.fmap_index(&dst.image, h, src.structure.at(x));
    if let Some(cands) = by_structure.get(&target) {
        for &y in cands {
            h[x] = y;
            search_morphisms(src, dst, order, k + 1, by_structure, h, out, cap)?;
        }
    }
    Ok(())
}

/// First coalgebra morphism in dependency order with `h(x) = y` for the
/// pinned pair, and `label_dst[h(z)] = label_src[z]` for every `z` when
/// labels are given. `src` must be recursive with the given order.
fn find_morphism(
    src: &Coalgebra,
    dst: &Coalgebra,
    order: &[usize],
    by_structure: &HashMap<usize, Vec<usize>>,
    pin: Option<(usize, usize)>,
    labels: Option<(&[usize], &[usize])>,
) -> Option<Vec<usize>> {
    #[allow(clippy::too_many_arguments)]
    fn go(
        src: &Coalgebra,
        dst: &Coalgebra,
        order: &[usize],
        k: usize,
        by_structure: &HashMap<usize, Vec<usize>>,
        pin: Option<(usize, usize)>,
        labels: Option<(&[usize], &[usize])>,
        h: &mut Vec<usize>,
    ) -> bool {
        let Some(&x) = order.get(k) else { return true };
        let target = src.image.fmap_index(&dst.image, h, src.structure.at(x));
        let Some(cands) = by_structure.get(&target) else { return false };
        for &y in cands {
            if pin.is_some_and(|(px, py)| px == x && py != y) {
                continue;
            }
            if labels.is_some_and(|(ls, ld)| ls[x] != ld[y]) {
                continue;
            }
            h[x] = y;
            if go(src, dst, order, k + 1, by_structure, pin, labels, h) {
                return true;
            }
        }
        false
    }
    let mut h = vec![0usize; src.len()];
    go(src, dst, order, 0, by_structure, pin, labels, &mut h).then_some(h)
}

/// A set of coalgebra morphisms `src → dst` whose graphs jointly contain
/// every pair `(x, h(x))` realized by any morphism (optionally restricted to
/// label-preserving ones). Colimits and cocone conditions only see these
/// pairs, so the cover stands in for the full hom-set. `src` must be
/// recursive.
pub fn morphism_cover(src: &Coalgebra, dst: &Coalgebra, labels: Option<(&[usize], &[usize])>) -> Result<Vec<FinFn>> {
    if src.signature() != dst.signature() {
        return Err(Error::SignatureMismatch("coalgebras use different functors".into()));
    }
    let order = require_order(src)?;
    let mut by_structure: HashMap<usize, Vec<usize>> = HashMap::new();
    for y in 0..dst.len() {
        by_structure.entry(dst.structure.at(y)).or_default().push(y);
    }
    let wrap = |t: Vec<usize>| FinFn::from_indices_unchecked(src.carrier().clone(), dst.carrier().clone(), t);
    if src.is_empty() {
        return Ok(vec![wrap(Vec::new())]);
    }
    let mut covered = vec![false; src.len() * dst.len()];
    let mut out = Vec::new();
    for x in 0..src.len() {
        for y in 0..dst.len() {
            if covered[x * dst.len() + y] {
                continue;
            }
            if let Some(h) = find_morphism(src, dst, &order, &by_structure, Some((x, y)), labels) {
                for (z, &w) in h.iter().enumerate() {
                    covered[z * dst.len() + w] = true;
                }
                out.push(wrap(h));
            }
        }
        if out.is_empty() {
            // The first state has no image: the hom-set is empty.
            break;
        }
    }
    Ok(out)
}

/// `(FC, Fc)`.
pub fn iterate(c: &Coalgebra, limits: &Limits) -> Result<Coalgebra> {
    let ffc = c.signature().apply_obj(c.image.set(), limits)?;
    let structure = c.image.map_to(&ffc, &c.structure)?;
    Ok(Coalgebra { image: ffc, structure })
}

/// Outcome of the sandwich check once its hypotheses hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SandwichReport {
    pub r_recursive: bool,
    pub b_recursive: bool,
}

impl SandwichReport {
    /// A recursive `r` must force a recursive `b`.
    pub fn conclusion_holds(&self) -> bool {
        !self.r_recursive || self.b_recursive
    }
}

/// Checks that `h: (R,r) → (B,b)` and `g: (B,b) → (FR,Fr)` are coalgebra
/// morphisms with `b = Fh ∘ g`, then reports recursiveness of both ends.
pub fn sandwich_transfer(r: &Coalgebra, b: &Coalgebra, h: &FinFn, g: &FinFn, limits: &Limits) -> Result<SandwichReport> {
    let fr = iterate(r, limits)?;
    let fail = |what: &str| Error::HypothesisFailed(what.to_string());
    if !is_coalgebra_morphism(h, r, b).map_err(|_| fail("h: R → B has wrong endpoints"))? {
        return Err(fail("d ∘ h = Fh ∘ r fails for h: R → B"));
    }
    if !is_coalgebra_morphism(g, b, &fr).map_err(|_| fail("g: B → FR has wrong endpoints"))? {
        return Err(fail("Fr ∘ g = Fg ∘ b fails for g: B → FR"));
    }
    let fh = r.image.map_to(&b.image, h)?;
    if (0..b.len()).any(|x| b.structure.at(x) != fh.at(g.at(x))) {
        return Err(fail("b = Fh ∘ g fails"));
    }
    Ok(SandwichReport { r_recursive: is_recursive(r), b_recursive: is_recursive(b) })
}

/// A finite diagram of coalgebras for one functor.
#[derive(Debug, Clone, Default)]
pub struct CoalgebraDiagram {
    pub nodes: Vec<(String, Coalgebra)>,
    pub edges: Vec<(String, usize, usize, FinFn)>,
}

impl CoalgebraDiagram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, id: impl Into<String>, c: Coalgebra) -> usize {
        self.nodes.push((id.into(), c));
        self.nodes.len() - 1
    }

    pub fn add_edge(&mut self, id: impl Into<String>, src: usize, dst: usize, h: FinFn) -> usize {
        self.edges.push((id.into(), src, dst, h));
        self.edges.len() - 1
    }

    /// The underlying diagram of carriers.
    pub fn carrier_diagram(&self) -> Result<Diagram> {
        let mut d = Diagram::new();
        for (id, c) in &self.nodes {
            d.add_node(id.clone(), c.carrier().clone())?;
        }
        for (id, s, t, h) in &self.edges {
            d.add_edge(id.clone(), *s, *t, h.clone())?;
        }
        Ok(d)
    }
}

/// A colimit coalgebra with the carrier colimit it was computed from.
#[derive(Debug, Clone)]
pub struct CoalgebraColimit {
    pub coalgebra: Coalgebra,
    pub carriers: Diagram,
    pub colimit: ColimitData,
}

/// Colimit of a diagram of coalgebras, with structure induced on the
/// colimit of carriers by the cocone `F c_i ∘ γ_i`.
pub fn colim_coalgebras(sig: &Signature, d: &CoalgebraDiagram, limits: &Limits) -> Result<CoalgebraColimit> {
    if let Some((id, _)) = d.nodes.iter().find(|(_, c)| c.signature() != sig) {
        return Err(Error::SignatureMismatch(format!("node `{id}` uses another functor")));
    }
    let carriers = d.carrier_diagram()?;
    let bad = d.edges.par_iter().find_first(|(_, s, t, h)| {
        !coalgebra_square_holds(&d.nodes[*s].1, &d.nodes[*t].1, h.indices())
    });
    if let Some((id, ..)) = bad {
        return Err(Error::NotCoalgebraMorphism { edge: id.clone() });
    }
    let colim = colimit(&carriers, limits)?;
    let fapex = sig.apply_obj(&colim.apex, limits)?;
    let legs = d
        .nodes
        .iter()
        .zip(&colim.injections)
        .map(|((_, c), inj)| {
            let t = (0..c.len()).map(|x| c.image.fmap_index(&fapex, inj.indices(), c.structure.at(x))).collect();
            FinFn::from_indices_unchecked(c.carrier().clone(), fapex.set().clone(), t)
        })
        .collect();
    let structure = mediate(&carriers, &colim, &Cocone { apex: fapex.set().clone(), legs })?;
    let coalgebra = Coalgebra { image: fapex, structure };
    for ((id, c), inj) in d.nodes.iter().zip(&colim.injections) {
        if !coalgebra_square_holds(c, &coalgebra, inj.indices()) {
            return Err(Error::NotCoalgebraMorphism { edge: format!("injection of {id}") });
        }
    }
    Ok(CoalgebraColimit { coalgebra, carriers, colimit: colim })
}

/// Verifies that `h: FC → C` is a coalgebra morphism `(FC,Fc) → (C,c)`,
/// that the identity is the only endomorphism of `(C,c)`, and that `h`
/// inverts `c`; returns `h`.
pub fn lambek_check(c: &Coalgebra, h: &FinFn, limits: &Limits) -> Result<FinFn> {
    let fc = iterate(c, limits)?;
    if !is_coalgebra_morphism(h, &fc, c)? {
        return Err(Error::NotMorphism("h: FC → C fails the coalgebra square".into()));
    }
    limits.check("endomorphism candidates", pow_saturating(c.len(), c.len()))?;
    let mut witness = None;
    for_each_function(c.len(), c.len(), |e| {
        let is_id = e.iter().enumerate().all(|(i, &j)| i == j);
        if !is_id && coalgebra_square_holds(c, c, e) {
            witness = Some(e.to_vec());
            return false;
        }
        true
    });
    if let Some(e) = witness {
        let names = e.iter().enumerate().map(|(i, &j)| format!("{}->{}", c.carrier().elem(i), c.carrier().elem(j)));
        return Err(Error::UniquenessFailed { witness: names.collect() });
    }
    if (0..c.len()).any(|x| h.at(c.structure.at(x)) != x) {
        return Err(Error::NotInverse("h ∘ c ≠ id".into()));
    }
    if (0..h.dom().len()).any(|y| c.structure.at(h.at(y)) != y) {
        return Err(Error::NotInverse("c ∘ h ≠ id".into()));
    }
    Ok(h.clone())
}

/// A recursive coalgebra with bijective structure, read as an initial
/// algebra.
#[derive(Debug, Clone)]
pub struct InitialAlgebra {
    pub coalgebra: Coalgebra,
    pub algebra: Algebra,
}

/// What the initiality tester found against one algebra.
#[derive(Debug, Clone)]
pub struct InitialityReport {
    pub morphism: FinFn,
    /// Number of algebra morphisms found by exhaustive enumeration.
    pub solutions: usize,
    /// `morphism` is an algebra morphism and the only one.
    pub unique: bool,
}

pub fn initial_from_iso(c: &Coalgebra) -> Result<InitialAlgebra> {
    require_order(c)?;
    let inv = c.structure.try_inverse().ok_or(Error::NotBijective)?;
    let algebra = Algebra { image: c.image.clone(), structure: inv };
    Ok(InitialAlgebra { coalgebra: c.clone(), algebra })
}

impl InitialAlgebra {
    pub fn carrier(&self) -> &FinSet {
        self.coalgebra.carrier()
    }

    /// Computes the fold into `b` and checks it is the unique algebra
    /// morphism by enumerating all functions.
    pub fn test(&self, b: &Algebra, limits: &Limits) -> Result<InitialityReport> {
        let morphism = hylo(&self.coalgebra, b)?;
        let is_morphism = verify_morphism(MorphismKind::Algebra(&self.algebra, b), &morphism)?;
        limits.check("candidate functions", pow_saturating(b.carrier().len(), self.carrier().len()))?;
        let mut solutions = 0;
        let mut only_fold = true;
        for_each_function(self.carrier().len(), b.carrier().len(), |h| {
            let commutes = (0..self.algebra.image.len()).all(|y| {
                h[self.algebra.structure.at(y)] == b.structure.at(self.algebra.image.fmap_index(&b.image, h, y))
            });
            if commutes {
                solutions += 1;
                only_fold &= h == morphism.indices();
            }
            true
        });
        Ok(InitialityReport { unique: is_morphism && solutions == 1 && only_fold, solutions, morphism })
    }
}

/// A coalgebra relabelled onto an ordinal carrier.
#[derive(Debug, Clone)]
pub struct Split {
    pub coalgebra: Coalgebra,
    /// `e: P → C`
    pub e: FinFn,
    /// `m: C → P`, with `e ∘ m = id`.
    pub m: FinFn,
}

/// Relabels the carrier as `{0, …, n-1}` in carrier order, with structure
/// `Fm ∘ c ∘ e`.
pub fn split_to_canonical(c: &Coalgebra, limits: &Limits) -> Result<Split> {
    let p = FinSet::ordinal(c.len());
    let e = FinFn::from_indices_unchecked(p.clone(), c.carrier().clone(), (0..c.len()).collect());
    let m = FinFn::from_indices_unchecked(c.carrier().clone(), p.clone(), (0..c.len()).collect());
    let fp = c.signature().apply_obj(&p, limits)?;
    let table = (0..c.len()).map(|i| c.image.fmap_index(&fp, m.indices(), c.structure.at(e.at(i)))).collect();
    Ok(Split { coalgebra: Coalgebra::from_table(fp, table), e, m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn lim() -> Limits {
        Limits::default()
    }

    fn names(f: &FinFn) -> Vec<(String, String)> {
        f.pairs().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn identity_is_a_morphism() {
        let c = builtins::fig2_coalgebra();
        let id = FinFn::identity(c.carrier());
        assert!(is_coalgebra_morphism(&id, &c, &c).unwrap());
    }

    #[test]
    fn fig2_hylo_and_pentagon() {
        let c = builtins::fig2_coalgebra();
        let a = builtins::height_algebra(3, &lim()).unwrap();
        let h = hylo(&c, &a).unwrap();
        let got = names(&h);
        let want: Vec<(String, String)> = [("x", "0"), ("y", "0"), ("z", "0"), ("u", "1"), ("w", "1"), ("v", "2")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        let mut got_sorted = got.clone();
        got_sorted.sort();
        let mut want_sorted = want;
        want_sorted.sort();
        assert_eq!(got_sorted, want_sorted);
        assert!(verify_morphism(MorphismKind::CoalgebraToAlgebra(&c, &a), &h).unwrap());

        let mut t = h.indices().to_vec();
        let v = c.carrier().index_of_str("v").unwrap();
        t[v] = 1;
        let bad = FinFn::from_indices(c.carrier().clone(), a.carrier().clone(), t).unwrap();
        assert!(!verify_morphism(MorphismKind::CoalgebraToAlgebra(&c, &a), &bad).unwrap());
    }

    #[test]
    fn certificates() {
        let c = builtins::fig2_coalgebra();
        let Certificate::Acyclic { order } = recursion_certificate(&c) else { panic!() };
        let pos: Vec<usize> = (0..c.len()).map(|x| order.iter().position(|&o| o == x).unwrap()).collect();
        for x in 0..c.len() {
            for y in c.successors(x) {
                assert!(pos[y] < pos[x]);
            }
        }

        let sig = builtins::cherry();
        let loop1 = Coalgebra::new(&sig, FinSet::new(["x"]).unwrap(), [("x", FElem::op("node", ["x", "x"]))], &lim()).unwrap();
        assert_eq!(recursion_certificate(&loop1), Certificate::Cycle { cycle: vec![0] });
        assert!(matches!(hylo(&loop1, &builtins::height_algebra(1, &lim()).unwrap()), Err(Error::NotRecursive { cycle }) if cycle == ["x"]));

        assert!(is_recursive(&builtins::wf_relation()));
    }

    #[test]
    fn brute_force_examples() {
        let c = builtins::fig2_coalgebra();
        let a = builtins::height_algebra(2, &lim()).unwrap();
        let sols = brute_force_solutions(&c, &a, &lim()).unwrap();
        assert_eq!(sols, [hylo(&c, &a).unwrap()]);

        let sig = builtins::cherry();
        let empty = Coalgebra::new::<_, &str>(&sig, FinSet::empty(), [], &lim()).unwrap();
        assert_eq!(brute_force_solutions(&empty, &a, &lim()).unwrap().len(), 1);
        assert_eq!(hylo(&empty, &a).unwrap().dom().len(), 0);

        // A self-loop: the "or" algebra has two solutions, a swap algebra none.
        let loop1 = Coalgebra::new(&sig, FinSet::new(["x"]).unwrap(), [("x", FElem::op("node", ["x", "x"]))], &lim()).unwrap();
        let two = FinSet::ordinal(2);
        let or = Algebra::from_fn(&sig, two.clone(), &lim(), |s| match s {
            Shape::Op { args, .. } => args.iter().copied().max().unwrap_or(0),
            Shape::Subset(_) => 0,
        })
        .unwrap();
        assert_eq!(brute_force_solutions(&loop1, &or, &lim()).unwrap().len(), 2);
        let swap = Algebra::from_fn(&sig, two, &lim(), |s| match s {
            Shape::Op { args, .. } if args.len() == 2 => 1 - args[0],
            _ => 0,
        })
        .unwrap();
        assert_eq!(brute_force_solutions(&loop1, &swap, &lim()).unwrap().len(), 0);
    }

    #[test]
    fn iterate_examples() {
        let sig = builtins::cherry();
        let empty = Coalgebra::new::<_, &str>(&sig, FinSet::empty(), [], &lim()).unwrap();
        let fe = iterate(&empty, &lim()).unwrap();
        assert_eq!(fe.len(), 1);
        assert!(is_recursive(&fe));

        let c = builtins::fig2_coalgebra();
        let fc = iterate(&c, &lim()).unwrap();
        assert_eq!(fc.len(), 37);
        assert!(is_recursive(&fc));

        let loop1 = Coalgebra::new(&sig, FinSet::new(["x"]).unwrap(), [("x", FElem::op("node", ["x", "x"]))], &lim()).unwrap();
        assert!(!is_recursive(&iterate(&loop1, &lim()).unwrap()));
    }

    #[test]
    fn sandwich_examples() {
        let r = builtins::fig2_coalgebra();
        let fr = iterate(&r, &lim()).unwrap();
        let h = r.structure().clone();
        let g = FinFn::identity(fr.carrier());
        let rep = sandwich_transfer(&r, &fr, &h, &g, &lim()).unwrap();
        assert!(rep.r_recursive && rep.b_recursive && rep.conclusion_holds());

        let bad = FinFn::from_fn(r.carrier().clone(), fr.carrier().clone(), |_| 0).unwrap();
        assert!(matches!(sandwich_transfer(&r, &fr, &bad, &g, &lim()), Err(Error::HypothesisFailed(_))));
    }

    #[test]
    fn split_examples() {
        let c = builtins::fig2_coalgebra();
        let s = split_to_canonical(&c, &lim()).unwrap();
        assert_eq!(s.coalgebra.carrier(), &FinSet::ordinal(6));
        assert!(crate::finset::compose(&s.e, &s.m).unwrap() == FinFn::identity(c.carrier()));
        assert!(is_recursive(&s.coalgebra));
        assert!(is_coalgebra_morphism(&s.m, &c, &s.coalgebra).unwrap());
        let g = crate::finset::compose(c.structure(), &s.e).unwrap();
        let rep = sandwich_transfer(&c, &s.coalgebra, &s.m, &g, &lim()).unwrap();
        assert!(rep.conclusion_holds());

        let sig = builtins::cherry();
        let empty = Coalgebra::new::<_, &str>(&sig, FinSet::empty(), [], &lim()).unwrap();
        assert!(split_to_canonical(&empty, &lim()).unwrap().coalgebra.is_empty());
    }

    #[test]
    fn morphism_search_matches_brute_force() {
        let c = builtins::fig2_coalgebra();
        let s = split_to_canonical(&c, &lim()).unwrap().coalgebra;
        let fast = coalgebra_morphisms(&s, &c, &lim()).unwrap();
        let mut slow = Vec::new();
        for_each_function(s.len(), c.len(), |h| {
            if coalgebra_square_holds(&s, &c, h) {
                slow.push(h.to_vec());
            }
            true
        });
        assert_eq!(fast.iter().map(|f| f.indices().to_vec()).collect::<Vec<_>>(), slow);
        // Every state has a distinct unfolding apart from the three leaves,
        // and u pins x: only the identity survives.
        assert_eq!(fast.len(), 1);

        let sig = builtins::cherry();
        let leaf = Coalgebra::new(&sig, FinSet::new(["l"]).unwrap(), [("l", FElem::constant("leaf"))], &lim()).unwrap();
        assert_eq!(coalgebra_morphisms(&leaf, &c, &lim()).unwrap().len(), 3);
    }

    #[test]
    fn colimit_of_coalgebras() {
        let sig = builtins::cherry();
        let c = builtins::fig2_coalgebra();
        let mut d = CoalgebraDiagram::new();
        d.add_node("C", c.clone());
        let one = colim_coalgebras(&sig, &d, &lim()).unwrap();
        assert_eq!(one.coalgebra.len(), 6);

        d.add_node("D", c.clone());
        let two = colim_coalgebras(&sig, &d, &lim()).unwrap();
        assert_eq!(two.coalgebra.len(), 12);
        assert!(is_recursive(&two.coalgebra));

        let bad = FinFn::from_fn(c.carrier().clone(), c.carrier().clone(), |_| 0).unwrap();
        d.add_edge("e", 0, 1, bad);
        assert_eq!(colim_coalgebras(&sig, &d, &lim()).unwrap_err(), Error::NotCoalgebraMorphism { edge: "e".into() });
    }

    #[test]
    fn lambek_examples() {
        let sig = builtins::constants(3);
        let carrier = FinSet::new(["a", "b", "c"]).unwrap();
        let c = Coalgebra::new(
            &sig,
            carrier,
            [("a", FElem::constant("k1")), ("b", FElem::constant("k2")), ("c", FElem::constant("k3"))],
            &lim(),
        )
        .unwrap();
        let h = c.structure().try_inverse().unwrap();
        assert_eq!(lambek_check(&c, &h, &lim()).unwrap(), h);

        let sig1 = builtins::constants(1);
        let c2 = Coalgebra::new(
            &sig1,
            FinSet::new(["a", "b"]).unwrap(),
            [("a", FElem::constant("k1")), ("b", FElem::constant("k1"))],
            &lim(),
        )
        .unwrap();
        let h2 = FinFn::from_fn(c2.image().set().clone(), c2.carrier().clone(), |_| 0).unwrap();
        assert!(matches!(lambek_check(&c2, &h2, &lim()), Err(Error::UniquenessFailed { .. })));

        let h_bad = FinFn::from_fn(c.image().set().clone(), c.carrier().clone(), |_| 0).unwrap();
        assert!(matches!(lambek_check(&c, &h_bad, &lim()), Err(Error::NotMorphism(_))));
    }

    #[test]
    fn initial_from_iso_examples() {
        let sig = builtins::constants(3);
        let c = Coalgebra::new(
            &sig,
            FinSet::new(["a", "b", "c"]).unwrap(),
            [("a", FElem::constant("k1")), ("b", FElem::constant("k2")), ("c", FElem::constant("k3"))],
            &lim(),
        )
        .unwrap();
        let ia = initial_from_iso(&c).unwrap();
        let own = ia.test(&ia.algebra, &lim()).unwrap();
        assert!(own.unique);
        assert_eq!(own.morphism, FinFn::identity(c.carrier()));

        let two = FinSet::new(["0", "1"]).unwrap();
        let b = Algebra::new(
            &sig,
            two,
            [(FElem::constant("k1"), "0"), (FElem::constant("k2"), "1"), (FElem::constant("k3"), "0")],
            &lim(),
        )
        .unwrap();
        let rep = ia.test(&b, &lim()).unwrap();
        assert!(rep.unique);
        assert_eq!(names(&rep.morphism), [("a".into(), "0".into()), ("b".into(), "1".into()), ("c".into(), "0".into())]);

        let fig2 = builtins::fig2_coalgebra();
        assert_eq!(initial_from_iso(&fig2).unwrap_err(), Error::NotBijective);
    }
}
