//! Colimits of finite diagrams of finite sets.
//!
//! A colimit is computed as the coproduct of all node sets quotiented by
//! `x ~ f(x)` for every edge `f`. Filteredness is never assumed: the
//! characterization checks, factorizations and merges below search the
//! finite diagram breadth-first over edge paths, so "filtered enough" is
//! observed per diagram.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{pow_saturating, Error, Limits, Result};
use crate::finset::{Elem, FinFn, FinSet, Partition};
use crate::functor::{FObj, Signature};

#[derive(Debug, Clone)]
pub struct Node {
    pub id: String,
    pub set: FinSet,
}

#[derive(Debug, Clone)]
pub struct Edge {
    pub id: String,
    pub src: usize,
    pub dst: usize,
    pub map: FinFn,
}

/// A diagram over a finite directed multigraph. Its colimit agrees with the
/// colimit over the free category on the graph.
#[derive(Debug, Clone, Default)]
pub struct Diagram {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    node_ids: HashMap<String, usize>,
}

impl Diagram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, id: impl Into<String>, set: FinSet) -> Result<usize> {
        let id = id.into();
        if self.node_ids.contains_key(&id) {
            return Err(Error::InvalidDiagram(format!("duplicate node `{id}`")));
        }
        self.node_ids.insert(id.clone(), self.nodes.len());
        self.nodes.push(Node { id, set });
        Ok(self.nodes.len() - 1)
    }

    pub fn add_edge(&mut self, id: impl Into<String>, src: usize, dst: usize, map: FinFn) -> Result<usize> {
        let id = id.into();
        let (s, d) = match (self.nodes.get(src), self.nodes.get(dst)) {
            (Some(s), Some(d)) => (s, d),
            _ => return Err(Error::InvalidDiagram(format!("edge `{id}` refers to a missing node"))),
        };
        if *map.dom() != s.set || *map.cod() != d.set {
            return Err(Error::InvalidDiagram(format!(
                "edge `{id}` does not map `{}` into `{}`",
                s.id, d.id
            )));
        }
        self.edges.push(Edge { id, src, dst, map });
        Ok(self.edges.len() - 1)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.node_ids.get(id).copied()
    }

    pub fn total_size(&self) -> usize {
        self.nodes.iter().map(|n| n.set.len()).sum()
    }

    fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for (k, e) in self.edges.iter().enumerate() {
            out[e.src].push(k);
        }
        out
    }
}

/// A cocone: one leg per node (by node index), all into `apex`.
#[derive(Debug, Clone)]
pub struct Cocone {
    pub apex: FinSet,
    pub legs: Vec<FinFn>,
}

impl Cocone {
    /// Checks the edge equations `leg_dst ∘ f = leg_src`.
    pub fn check(&self, d: &Diagram) -> Result<()> {
        if self.legs.len() != d.nodes.len() {
            return Err(Error::InvalidDiagram(format!(
                "cocone has {} legs for {} nodes",
                self.legs.len(),
                d.nodes.len()
            )));
        }
        for (leg, node) in self.legs.iter().zip(&d.nodes) {
            if *leg.dom() != node.set || *leg.cod() != self.apex {
                return Err(Error::InvalidDiagram(format!("leg at `{}` has wrong endpoints", node.id)));
            }
        }
        for e in &d.edges {
            let (src, dst) = (&self.legs[e.src], &self.legs[e.dst]);
            for x in 0..e.map.dom().len() {
                if dst.at(e.map.at(x)) != src.at(x) {
                    return Err(Error::NotACocone {
                        edge: e.id.clone(),
                        elem: e.map.dom().elem(x).to_string(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// The colimit apex, its injections, and the partition of the coproduct of
/// all node sets that produced it.
#[derive(Debug, Clone)]
pub struct ColimitData {
    pub apex: FinSet,
    pub injections: Vec<FinFn>,
    pub partition: Partition,
    /// Start of each node's block in the coproduct.
    pub offsets: Vec<usize>,
}

impl ColimitData {
    pub fn cocone(&self) -> Cocone {
        Cocone { apex: self.apex.clone(), legs: self.injections.clone() }
    }

    /// `(node, element)` members of each apex class.
    pub fn class_members(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.apex.len()];
        for (i, inj) in self.injections.iter().enumerate() {
            for x in 0..inj.dom().len() {
                out[inj.at(x)].push((i, x));
            }
        }
        out
    }

    /// Coproduct index of `(node, element)`.
    pub fn flat_index(&self, node: usize, x: usize) -> usize {
        self.offsets[node] + x
    }
}

/// Colimit of a finite diagram of finite sets.
pub fn colimit(d: &Diagram, limits: &Limits) -> Result<ColimitData> {
    let total = d.total_size();
    limits.check("colimit coproduct", total as u128)?;
    let mut offsets = Vec::with_capacity(d.nodes.len());
    let mut names = Vec::with_capacity(total);
    for n in &d.nodes {
        offsets.push(names.len());
        names.extend(n.set.iter().map(|e| Elem::from(format!("{}:{}", n.id, e))));
    }
    let sum = FinSet::new(names)?;
    let mut part = Partition::discrete(&sum);
    for e in &d.edges {
        for x in 0..e.map.dom().len() {
            part.union(offsets[e.src] + x, offsets[e.dst] + e.map.at(x));
        }
    }
    part.flatten();
    let proj = part.projection();
    let apex = proj.cod().clone();
    let injections = d
        .nodes
        .iter()
        .zip(&offsets)
        .map(|(n, &off)| {
            let map = (0..n.set.len()).map(|x| proj.at(off + x)).collect();
            FinFn::from_indices_unchecked(n.set.clone(), apex.clone(), map)
        })
        .collect();
    Ok(ColimitData { apex, injections, partition: part, offsets })
}

/// The unique `v: apex → K` with `v ∘ c_i = k_i` for every node.
pub fn mediate(d: &Diagram, c: &ColimitData, k: &Cocone) -> Result<FinFn> {
    k.check(d)?;
    let mut v = vec![usize::MAX; c.apex.len()];
    for (i, inj) in c.injections.iter().enumerate() {
        for x in 0..inj.dom().len() {
            let slot = &mut v[inj.at(x)];
            let val = k.legs[i].at(x);
            if *slot == usize::MAX {
                *slot = val;
            } else if *slot != val {
                // Unreachable for a cocone over the same diagram.
                return Err(Error::NotACocone { edge: d.nodes[i].id.clone(), elem: inj.dom().elem(x).to_string() });
            }
        }
    }
    if v.contains(&usize::MAX) {
        return Err(Error::InvalidDiagram("colimit injections are not jointly surjective".into()));
    }
    Ok(FinFn::from_indices_unchecked(c.apex.clone(), k.apex.clone(), v))
}

/// A composite of edges starting at some node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathComposite {
    pub target: usize,
    /// Edge indices in traversal order; empty for the identity.
    pub path: Vec<usize>,
    /// Index table of the composite function.
    pub map: Vec<usize>,
}

/// Breadth-first enumeration of the distinct composites out of `start`,
/// identity first, paths of length at most `max_len`. Stops after `max_states`
/// composites.
pub fn path_composites(d: &Diagram, start: usize, max_len: usize, max_states: usize) -> Vec<PathComposite> {
    let out = d.out_edges();
    let mut seen: HashSet<(usize, Vec<usize>)> = HashSet::new();
    let id: Vec<usize> = (0..d.nodes[start].set.len()).collect();
    seen.insert((start, id.clone()));
    let mut result = vec![PathComposite { target: start, path: Vec::new(), map: id }];
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        if result[k].path.len() >= max_len {
            continue;
        }
        for &e in &out[result[k].target] {
            let edge = &d.edges[e];
            let map: Vec<usize> = result[k].map.iter().map(|&x| edge.map.at(x)).collect();
            if seen.insert((edge.dst, map.clone())) {
                let mut path = result[k].path.clone();
                path.push(e);
                result.push(PathComposite { target: edge.dst, path, map });
                if result.len() >= max_states {
                    return result;
                }
                queue.push_back(result.len() - 1);
            }
        }
    }
    result
}

/// Default path-length cap: the number of edges (at least one).
pub fn default_path_cap(d: &Diagram) -> usize {
    d.edges.len().max(1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeWitness {
    pub node: String,
    pub x1: Elem,
    pub x2: Elem,
    pub target: String,
    pub path: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeFailure {
    pub node: String,
    pub x1: Elem,
    pub x2: Elem,
}

/// Outcome of checking the filtered-colimit characterization in `Set`.
#[derive(Debug, Clone, Default)]
pub struct FilteredReport {
    /// Condition (1): every apex element is hit by some injection.
    pub jointly_surjective: bool,
    pub unhit: Vec<Elem>,
    /// Condition (2): pairs identified by `c_i` and a path identifying them.
    pub witnesses: Vec<MergeWitness>,
    /// Pairs identified by `c_i` that no path out of `i` identifies.
    pub failures: Vec<MergeFailure>,
    /// Filteredness evidence for the diagram itself.
    pub nonempty: bool,
    pub missing_upper_bounds: Vec<(String, String)>,
    pub uncoequalized: Vec<(String, String)>,
}

impl FilteredReport {
    pub fn characterization_holds(&self) -> bool {
        self.jointly_surjective && self.failures.is_empty()
    }

    pub fn filtered(&self) -> bool {
        self.nonempty && self.missing_upper_bounds.is_empty() && self.uncoequalized.is_empty()
    }

    pub fn is_clean(&self) -> bool {
        self.characterization_holds() && self.filtered()
    }
}

/// Checks joint surjectivity and, for every pair `x' ≠ x''` of one node with
/// equal images, searches for a path identifying them. Also records whether
/// the diagram is filtered up to the path cap: nonempty, pairwise upper
/// bounds, and every parallel pair of distinct composites coequalized by a
/// further path.
pub fn verify_filtered_characterization(d: &Diagram, c: &ColimitData, limits: &Limits) -> FilteredReport {
    let max_len = default_path_cap(d);
    let mut report = FilteredReport { nonempty: !d.nodes.is_empty(), ..Default::default() };

    let mut hit = vec![false; c.apex.len()];
    for inj in &c.injections {
        for &j in inj.indices() {
            hit[j] = true;
        }
    }
    report.unhit = hit.iter().enumerate().filter(|(_, &h)| !h).map(|(j, _)| c.apex.elem(j).clone()).collect();
    report.jointly_surjective = report.unhit.is_empty();

    let composites: Vec<Vec<PathComposite>> =
        (0..d.nodes.len()).map(|i| path_composites(d, i, max_len, limits.cap)).collect();
    let edge_ids = |p: &[usize]| p.iter().map(|&e| d.edges[e].id.clone()).collect::<Vec<_>>();

    for (i, node) in d.nodes.iter().enumerate() {
        let inj = &c.injections[i];
        for a in 0..node.set.len() {
            for b in a + 1..node.set.len() {
                if inj.at(a) != inj.at(b) {
                    continue;
                }
                match composites[i].iter().find(|pc| pc.map[a] == pc.map[b]) {
                    Some(pc) => report.witnesses.push(MergeWitness {
                        node: node.id.clone(),
                        x1: node.set.elem(a).clone(),
                        x2: node.set.elem(b).clone(),
                        target: d.nodes[pc.target].id.clone(),
                        path: edge_ids(&pc.path),
                    }),
                    None => report.failures.push(MergeFailure {
                        node: node.id.clone(),
                        x1: node.set.elem(a).clone(),
                        x2: node.set.elem(b).clone(),
                    }),
                }
            }
        }
    }

    let reach: Vec<HashSet<usize>> =
        composites.iter().map(|cs| cs.iter().map(|pc| pc.target).collect()).collect();
    for a in 0..d.nodes.len() {
        for b in a + 1..d.nodes.len() {
            if reach[a].is_disjoint(&reach[b]) {
                report.missing_upper_bounds.push((d.nodes[a].id.clone(), d.nodes[b].id.clone()));
            }
        }
    }

    for (i, cs) in composites.iter().enumerate() {
        for (k, f) in cs.iter().enumerate() {
            for g in &cs[k + 1..] {
                if f.target != g.target {
                    continue;
                }
                let coeq = composites[f.target]
                    .iter()
                    .any(|h| f.map.iter().zip(&g.map).all(|(&x, &y)| h.map[x] == h.map[y]));
                if !coeq {
                    report.uncoequalized.push((d.nodes[i].id.clone(), d.nodes[f.target].id.clone()));
                }
            }
        }
    }
    report.uncoequalized.dedup();
    report
}

/// Factors `f: X → apex` as `c_i ∘ f'` through the first node that admits
/// it, choosing for each element the least preimage.
pub fn factor_through(d: &Diagram, c: &ColimitData, f: &FinFn) -> Result<(usize, FinFn)> {
    if *f.cod() != c.apex {
        return Err(Error::CodomainMismatch("map does not land in the colimit apex".into()));
    }
    'nodes: for (i, inj) in c.injections.iter().enumerate() {
        let mut pre: Vec<Option<usize>> = vec![None; c.apex.len()];
        for x in (0..inj.dom().len()).rev() {
            pre[inj.at(x)] = Some(x);
        }
        let mut table = Vec::with_capacity(f.dom().len());
        for &t in f.indices() {
            match pre[t] {
                Some(x) => table.push(x),
                None => continue 'nodes,
            }
        }
        return Ok((i, FinFn::from_indices_unchecked(f.dom().clone(), d.nodes[i].set.clone(), table)));
    }
    Err(Error::NoFactorization(format!("no node covers the image of a map from {} elements", f.dom().len())))
}

/// A path out of node `i` equalizing two maps into `D_i`.
#[derive(Debug, Clone)]
pub struct Merge {
    pub node: usize,
    pub path: Vec<usize>,
    /// The composite `Dh: D_i → D_j`.
    pub composite: FinFn,
}

/// Finds the shortest path `h: i → j` with `Dh ∘ f1 = Dh ∘ f2`.
pub fn merge(d: &Diagram, i: usize, f1: &FinFn, f2: &FinFn, limits: &Limits) -> Result<Merge> {
    let node = d.nodes.get(i).ok_or_else(|| Error::InvalidDiagram(format!("no node {i}")))?;
    if *f1.cod() != node.set || *f2.cod() != node.set || f1.dom() != f2.dom() {
        return Err(Error::DomainMismatch("merge needs two parallel maps into the node".into()));
    }
    for pc in path_composites(d, i, default_path_cap(d), limits.cap) {
        if f1.indices().iter().zip(f2.indices()).all(|(&a, &b)| pc.map[a] == pc.map[b]) {
            let composite = FinFn::from_indices_unchecked(node.set.clone(), d.nodes[pc.target].set.clone(), pc.map);
            return Ok(Merge { node: pc.target, path: pc.path, composite });
        }
    }
    Err(Error::NoMerge(node.id.clone()))
}

/// The comparison between the colimit of the `F`-image diagram and `F`
/// applied to the colimit.
#[derive(Debug, Clone)]
pub struct PreservationReport {
    pub comparison: FinFn,
    pub injective: bool,
    pub surjective: bool,
}

impl PreservationReport {
    pub fn preserved(&self) -> bool {
        self.injective && self.surjective
    }
}

pub fn preservation_report(f: &Signature, d: &Diagram, c: &ColimitData, limits: &Limits) -> Result<PreservationReport> {
    let images: Vec<FObj> = d.nodes.iter().map(|n| f.apply_obj(&n.set, limits)).collect::<Result<_>>()?;
    let mut fd = Diagram::new();
    for (n, img) in d.nodes.iter().zip(&images) {
        fd.add_node(n.id.clone(), img.set().clone())?;
    }
    for e in &d.edges {
        fd.add_edge(e.id.clone(), e.src, e.dst, images[e.src].map_to(&images[e.dst], &e.map)?)?;
    }
    let fc = colimit(&fd, limits)?;
    let fapex = f.apply_obj(&c.apex, limits)?;
    let legs = images
        .iter()
        .zip(&c.injections)
        .map(|(img, inj)| img.map_to(&fapex, inj))
        .collect::<Result<Vec<_>>>()?;
    let comparison = mediate(&fd, &fc, &Cocone { apex: fapex.set().clone(), legs })?;
    Ok(PreservationReport { injective: comparison.is_injective(), surjective: comparison.is_surjective(), comparison })
}

/// True iff `(F c_i)_i` is a colimit of the `F`-image diagram.
pub fn preserves_colimit_check(f: &Signature, d: &Diagram, c: &ColimitData, limits: &Limits) -> Result<bool> {
    Ok(preservation_report(f, d, c, limits)?.preserved())
}

/// Which objects of the slice `{0..k-1} → X` (k ≤ bound) to materialize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceMode {
    Full,
    /// A seeded uniform sample of at most `max_objects` objects.
    Sample { max_objects: usize, seed: u64 },
}

/// An object `(P, p)` of the canonical slice.
#[derive(Debug, Clone)]
pub struct SliceObject {
    pub p: FinFn,
}

impl SliceObject {
    pub fn size(&self) -> usize {
        self.p.dom().len()
    }
}

/// All `(P, p)` with `P` an ordinal of size at most `bound`, in order of size
/// then lexicographic table.
pub fn slice_objects(x: &FinSet, bound: usize, limits: &Limits) -> Result<Vec<SliceObject>> {
    let count = (0..=bound).fold(0u128, |acc, k| acc.saturating_add(pow_saturating(x.len(), k)));
    limits.check("slice objects", count)?;
    let mut out = Vec::with_capacity(count as usize);
    for k in 0..=bound {
        let dom = FinSet::ordinal(k);
        if k > 0 && x.is_empty() {
            continue;
        }
        let mut digits = vec![0usize; k];
        loop {
            out.push(SliceObject { p: FinFn::from_indices_unchecked(dom.clone(), x.clone(), digits.clone()) });
            if !crate::functor::increment(&mut digits, x.len()) {
                break;
            }
        }
    }
    Ok(out)
}

/// All slice morphisms `h: P → Q` with `q ∘ h = p`, as `(src, dst, h)`.
pub fn slice_morphisms(objs: &[SliceObject]) -> Vec<(usize, usize, FinFn)> {
    let mut out = Vec::new();
    for (a, pa) in objs.iter().enumerate() {
        for (b, qb) in objs.iter().enumerate() {
            let cands: Vec<Vec<usize>> = pa
                .p
                .indices()
                .iter()
                .map(|&t| (0..qb.size()).filter(|&j| qb.p.at(j) == t).collect())
                .collect();
            for table in product(&cands) {
                out.push((a, b, FinFn::from_indices_unchecked(pa.p.dom().clone(), qb.p.dom().clone(), table)));
            }
        }
    }
    out
}

/// Cartesian product of candidate lists, lexicographic.
pub(crate) fn product(cands: &[Vec<usize>]) -> Vec<Vec<usize>> {
    if cands.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut pos = vec![0usize; cands.len()];
    loop {
        out.push(pos.iter().zip(cands).map(|(&k, c)| c[k]).collect());
        let mut carry = true;
        for (k, c) in pos.iter_mut().zip(cands).rev() {
            *k += 1;
            if *k < c.len() {
                carry = false;
                break;
            }
            *k = 0;
        }
        if carry {
            return out;
        }
    }
}

fn slice_node_id(o: &SliceObject) -> String {
    let names: Vec<&str> = o.p.pairs().map(|(_, y)| y.as_str()).collect();
    format!("({},[{}])", o.size(), names.join(","))
}

/// The canonical diagram of ordinals over `x`, with its canonical cocone.
pub fn canonical_slice_diagram(x: &FinSet, bound: usize, mode: SliceMode, limits: &Limits) -> Result<(Diagram, Cocone)> {
    let mut objs = slice_objects(x, bound, limits)?;
    if let SliceMode::Sample { max_objects, seed } = mode {
        if objs.len() > max_objects {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut keep = sample(&mut rng, objs.len(), max_objects).into_vec();
            keep.sort_unstable();
            objs = keep.into_iter().map(|k| objs[k].clone()).collect();
        }
    }
    let mut d = Diagram::new();
    for o in &objs {
        d.add_node(slice_node_id(o), o.p.dom().clone())?;
    }
    let morphisms = slice_morphisms(&objs);
    limits.check("slice morphisms", morphisms.len() as u128)?;
    for (k, (a, b, h)) in morphisms.into_iter().enumerate() {
        d.add_edge(format!("h{k}"), a, b, h)?;
    }
    let legs = objs.iter().map(|o| o.p.clone()).collect();
    Ok((d, Cocone { apex: x.clone(), legs }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(names: &[&str]) -> FinSet {
        FinSet::new(names.iter().copied()).unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    /// {a} ← {p} → {b}
    fn pushout_span() -> Diagram {
        let mut d = Diagram::new();
        let a = d.add_node("A", set(&["a"])).unwrap();
        let p = d.add_node("P", set(&["p"])).unwrap();
        let b = d.add_node("B", set(&["b"])).unwrap();
        d.add_edge("f", p, a, FinFn::from_pairs(set(&["p"]), set(&["a"]), [("p", "a")]).unwrap()).unwrap();
        d.add_edge("g", p, b, FinFn::from_pairs(set(&["p"]), set(&["b"]), [("p", "b")]).unwrap()).unwrap();
        d
    }

    fn chain3() -> Diagram {
        let x0 = set(&["a"]);
        let x1 = set(&["a", "b"]);
        let x2 = set(&["a", "b"]);
        let mut d = Diagram::new();
        d.add_node("X0", x0.clone()).unwrap();
        d.add_node("X1", x1.clone()).unwrap();
        d.add_node("X2", x2.clone()).unwrap();
        d.add_edge("i01", 0, 1, FinFn::from_pairs(x0, x1.clone(), [("a", "a")]).unwrap()).unwrap();
        d.add_edge("i12", 1, 2, FinFn::from_pairs(x1, x2, [("a", "a"), ("b", "a")]).unwrap()).unwrap();
        d
    }

    #[test]
    fn single_node_and_coproduct() {
        let mut d = Diagram::new();
        d.add_node("X", set(&["a", "b"])).unwrap();
        let c = colimit(&d, &lim()).unwrap();
        assert_eq!(c.apex.len(), 2);
        assert!(c.injections[0].is_bijective());
        d.add_node("Y", set(&["c"])).unwrap();
        assert_eq!(colimit(&d, &lim()).unwrap().apex.len(), 3);
    }

    #[test]
    fn pushout_merges_through_apex() {
        // Union-find by hand on A:a, P:p, B:b: f joins p~a, g joins p~b.
        let d = pushout_span();
        let c = colimit(&d, &lim()).unwrap();
        assert_eq!(c.apex.len(), 1);
        assert_eq!(c.apex.elem(0).as_str(), "A:a");
    }

    #[test]
    fn mediate_identity_and_constant() {
        let d = chain3();
        let c = colimit(&d, &lim()).unwrap();
        let v = mediate(&d, &c, &c.cocone()).unwrap();
        assert_eq!(v, FinFn::identity(&c.apex));
        let one = set(&["*"]);
        let legs = d.nodes().iter().map(|n| FinFn::from_fn(n.set.clone(), one.clone(), |_| 0).unwrap()).collect();
        let v = mediate(&d, &c, &Cocone { apex: one.clone(), legs }).unwrap();
        assert_eq!(v.cod(), &one);
    }

    #[test]
    fn mediate_rejects_separating_legs() {
        let d = pushout_span();
        let c = colimit(&d, &lim()).unwrap();
        let k = set(&["0", "1"]);
        let legs = vec![
            FinFn::from_pairs(set(&["a"]), k.clone(), [("a", "0")]).unwrap(),
            FinFn::from_pairs(set(&["p"]), k.clone(), [("p", "0")]).unwrap(),
            FinFn::from_pairs(set(&["b"]), k.clone(), [("b", "1")]).unwrap(),
        ];
        let err = mediate(&d, &c, &Cocone { apex: k, legs }).unwrap_err();
        assert_eq!(err, Error::NotACocone { edge: "g".into(), elem: "p".into() });
    }

    #[test]
    fn chain_characterization_has_witnesses() {
        let d = chain3();
        let c = colimit(&d, &lim()).unwrap();
        let r = verify_filtered_characterization(&d, &c, &lim());
        assert!(r.is_clean(), "{r:?}");
        assert_eq!(r.witnesses.len(), 1);
        assert_eq!(r.witnesses[0].node, "X1");
        assert_eq!(r.witnesses[0].path, ["i12"]);
    }

    #[test]
    fn discrete_diagram_condition_two_vacuous() {
        let mut d = Diagram::new();
        d.add_node("X", set(&["a"])).unwrap();
        d.add_node("Y", set(&["b"])).unwrap();
        let c = colimit(&d, &lim()).unwrap();
        let r = verify_filtered_characterization(&d, &c, &lim());
        assert!(r.characterization_holds());
        assert!(!r.filtered());
        assert_eq!(r.missing_upper_bounds, [("X".to_string(), "Y".to_string())]);
    }

    #[test]
    fn non_filtered_span_fails_condition_two() {
        // {a,b} ← {p,q} → {c}: the apex merges a and b, nothing leaves {a,b}.
        let mut d = Diagram::new();
        let pq = set(&["p", "q"]);
        let ab = set(&["a", "b"]);
        let cc = set(&["c"]);
        d.add_node("L", ab.clone()).unwrap();
        d.add_node("P", pq.clone()).unwrap();
        d.add_node("R", cc.clone()).unwrap();
        d.add_edge("f", 1, 0, FinFn::from_pairs(pq.clone(), ab, [("p", "a"), ("q", "b")]).unwrap()).unwrap();
        d.add_edge("g", 1, 2, FinFn::from_pairs(pq, cc, [("p", "c"), ("q", "c")]).unwrap()).unwrap();
        let c = colimit(&d, &lim()).unwrap();
        assert_eq!(c.apex.len(), 1);
        let r = verify_filtered_characterization(&d, &c, &lim());
        assert!(r.jointly_surjective);
        assert_eq!(r.failures, [MergeFailure { node: "L".into(), x1: "a".into(), x2: "b".into() }]);
    }

    #[test]
    fn factor_and_merge_on_chain() {
        let d = chain3();
        let c = colimit(&d, &lim()).unwrap();
        let (i, f1) = factor_through(&d, &c, &c.injections[1]).unwrap();
        assert_eq!(i, 0);
        assert_eq!(compose_check(&c.injections[i], &f1), c.injections[1]);

        let one = set(&["*"]);
        let f = FinFn::from_fn(one.clone(), c.apex.clone(), |_| 0).unwrap();
        let (i, fp) = factor_through(&d, &c, &f).unwrap();
        assert_eq!(i, 0);
        assert_eq!(compose_check(&c.injections[i], &fp), f);

        // Two factorizations of the same point through X1 differ; X2 equalizes.
        let g1 = FinFn::from_pairs(one.clone(), d.nodes()[1].set.clone(), [("*", "a")]).unwrap();
        let g2 = FinFn::from_pairs(one.clone(), d.nodes()[1].set.clone(), [("*", "b")]).unwrap();
        let m = merge(&d, 1, &g1, &g2, &lim()).unwrap();
        assert_eq!(m.node, 2);
        assert_eq!(m.path, [1]);
        assert!(matches!(merge(&d, 2, &g1.relabel(one.clone(), d.nodes()[2].set.clone()).unwrap(),
            &g2.relabel(one, d.nodes()[2].set.clone()).unwrap(), &lim()), Err(Error::NoMerge(_))));
    }

    fn compose_check(g: &FinFn, f: &FinFn) -> FinFn {
        crate::finset::compose(g, f).unwrap()
    }

    #[test]
    fn slice_diagram_examples() {
        let (d, k) = canonical_slice_diagram(&FinSet::empty(), 1, SliceMode::Full, &lim()).unwrap();
        assert_eq!(d.nodes().len(), 1);
        let c = colimit(&d, &lim()).unwrap();
        assert!(c.apex.is_empty());
        assert!(mediate(&d, &c, &k).unwrap().is_bijective());

        let x = set(&["a", "b"]);
        let (d, k) = canonical_slice_diagram(&x, 2, SliceMode::Full, &lim()).unwrap();
        assert_eq!(d.nodes().len(), 7);
        let c = colimit(&d, &lim()).unwrap();
        assert!(mediate(&d, &c, &k).unwrap().is_bijective());

        let x = set(&["a", "b", "c"]);
        let (d, k) = canonical_slice_diagram(&x, 1, SliceMode::Full, &lim()).unwrap();
        let c = colimit(&d, &lim()).unwrap();
        let r = verify_filtered_characterization(&d, &c, &lim());
        assert!(r.jointly_surjective);
        assert!(mediate(&d, &c, &k).unwrap().is_bijective());
    }

    #[test]
    fn slice_sampling_is_seeded() {
        let x = set(&["a", "b", "c"]);
        let mode = SliceMode::Sample { max_objects: 5, seed: 7 };
        let (d1, _) = canonical_slice_diagram(&x, 2, mode, &lim()).unwrap();
        let (d2, _) = canonical_slice_diagram(&x, 2, mode, &lim()).unwrap();
        assert_eq!(d1.nodes().len(), 5);
        let ids = |d: &Diagram| d.nodes().iter().map(|n| n.id.clone()).collect::<Vec<_>>();
        assert_eq!(ids(&d1), ids(&d2));
    }

    #[test]
    fn slice_cap() {
        let x = FinSet::ordinal(10);
        assert!(matches!(
            canonical_slice_diagram(&x, 6, SliceMode::Full, &Limits::new(1000)),
            Err(Error::SizeCapExceeded { .. })
        ));
    }
}
