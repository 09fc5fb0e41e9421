//! Presents `(F A_n, F α_n)` as a colimit of finite recursive coalgebras.
//!
//! A triangle `t = (P, p, i, p')` factors `p: P → F A_n` through `F π_i`.
//! Each triangle generates the coalgebra `E(t)` on `P + X_i` with structure
//! `F inr ∘ [p', x_i]`, mapped into `F A_n` by `inj_t = [p, α ∘ π_i]`. The
//! diagram ℰ has all such coalgebras, over a finite sample of the slice of
//! ordinals over `F A_n`, with every morphism compatible with the `inj_t`.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::coalgebra::{
    coalgebra_square_holds, is_coalgebra_morphism, is_recursive, iterate as iterate_coalgebra, morphism_cover,
    Coalgebra,
};
use crate::colimit::{
    colimit, default_path_cap, mediate, path_composites, product, slice_morphisms, slice_objects, Cocone,
    ColimitData, Diagram, SliceObject,
};
use crate::construction::InitialTruncation;
use crate::error::{Error, Limits, Result};
use crate::finset::{codiagonal, coproduct, FinFn, FinSet, Coproduct};

/// Shared data for one truncation: `(F A, F α)`, and `F π_i`, `α ∘ π_i` for
/// every object.
pub struct EContext<'a> {
    pub t: &'a InitialTruncation,
    pub fa: Coalgebra,
    f_pi: Vec<Vec<usize>>,
    /// `f_pi_pre[i][y]`: elements of `F X_i` over `y ∈ F A`.
    f_pi_pre: Vec<Vec<Vec<usize>>>,
    alpha_pi: Vec<Vec<usize>>,
}

impl<'a> EContext<'a> {
    pub fn new(t: &'a InitialTruncation, limits: &Limits) -> Result<Self> {
        let fa = iterate_coalgebra(t.coalgebra(), limits)?;
        let mut f_pi = Vec::new();
        let mut f_pi_pre = Vec::new();
        let mut alpha_pi = Vec::new();
        for (x, inj) in t.objects.iter().zip(t.injections()) {
            let table = x.image().map_to(t.fa(), inj)?.indices().to_vec();
            let mut pre = vec![Vec::new(); t.fa().len()];
            for (k, &y) in table.iter().enumerate() {
                pre[y].push(k);
            }
            alpha_pi.push(inj.indices().iter().map(|&a| t.alpha().at(a)).collect());
            f_pi.push(table);
            f_pi_pre.push(pre);
        }
        Ok(EContext { t, fa, f_pi, f_pi_pre, alpha_pi })
    }

    /// `F π_i` as a table `F X_i → F A`.
    pub fn f_pi(&self, i: usize) -> &[usize] {
        &self.f_pi[i]
    }

    /// `α ∘ π_i: X_i → F A`.
    pub fn alpha_pi(&self, i: usize) -> FinFn {
        FinFn::from_indices_unchecked(
            self.t.objects[i].carrier().clone(),
            self.t.fa().set().clone(),
            self.alpha_pi[i].clone(),
        )
    }
}

/// `F π_i ∘ p' = p`.
#[derive(Debug, Clone)]
pub struct Triangle {
    pub p: FinFn,
    pub node: usize,
    pub p_prime: FinFn,
}

impl Triangle {
    pub fn p_obj(&self) -> &FinSet {
        self.p.dom()
    }
}

/// Pairs of triangles over the same object, and whether a path out of that
/// object equalizes their `p'`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MergeSummary {
    pub attempted: usize,
    pub merged: usize,
    /// Indices of unmerged pairs within the returned triangle list.
    pub failed: Vec<(usize, usize)>,
}

impl MergeSummary {
    fn absorb(&mut self, other: MergeSummary, offset: usize) {
        self.attempted += other.attempted;
        self.merged += other.merged;
        self.failed.extend(other.failed.into_iter().map(|(a, b)| (a + offset, b + offset)));
    }
}

#[derive(Debug, Clone)]
pub struct TriangleSet {
    pub triangles: Vec<Triangle>,
    pub merges: MergeSummary,
}

/// All factorizations of `p` through some `F π_i`, by object then table.
pub fn make_triangles(ctx: &EContext<'_>, p: &FinFn, limits: &Limits) -> Result<TriangleSet> {
    let t = ctx.t;
    if p.cod() != t.fa().set() {
        return Err(Error::CodomainMismatch("p must land in F A".into()));
    }
    let mut triangles = Vec::new();
    let mut best: Option<(usize, usize)> = None;
    for (i, x) in t.objects.iter().enumerate() {
        let cands: Vec<Vec<usize>> = p.indices().iter().map(|&y| ctx.f_pi_pre[i][y].clone()).collect();
        let covered = cands.iter().take_while(|c| !c.is_empty()).count();
        if best.is_none_or(|(_, b)| covered > b) {
            best = Some((i, covered));
        }
        for table in product(&cands) {
            if triangles.len() >= limits.cap {
                return Err(Error::SizeCapExceeded { what: "triangles".into(), size: triangles.len() as u128 + 1, cap: limits.cap });
            }
            let p_prime = FinFn::from_indices_unchecked(p.dom().clone(), x.image().set().clone(), table);
            triangles.push(Triangle { p: p.clone(), node: i, p_prime });
        }
    }
    if triangles.is_empty() {
        let e = best.map_or(0, |(_, b)| b);
        return Err(Error::NoTriangle { elem: p.dom().elem(e.min(p.dom().len().saturating_sub(1))).to_string() });
    }
    let merges = merge_triangles(ctx, &triangles, limits);
    Ok(TriangleSet { triangles, merges })
}

fn merge_triangles(ctx: &EContext<'_>, triangles: &[Triangle], limits: &Limits) -> MergeSummary {
    let d = &ctx.t.colimit.carriers;
    let objs = &ctx.t.objects;
    let mut summary = MergeSummary::default();
    let mut by_node: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, tr) in triangles.iter().enumerate() {
        by_node.entry(tr.node).or_default().push(k);
    }
    let mut nodes: Vec<_> = by_node.into_iter().collect();
    nodes.sort_unstable();
    for (i, ks) in nodes {
        if ks.len() < 2 {
            continue;
        }
        let paths = path_composites(d, i, default_path_cap(d), limits.cap);
        let src = objs[i].image();
        for (n, &a) in ks.iter().enumerate() {
            for &b in &ks[n + 1..] {
                summary.attempted += 1;
                let (pa, pb) = (triangles[a].p_prime.indices(), triangles[b].p_prime.indices());
                let ok = paths.iter().any(|pc| {
                    let dst = objs[pc.target].image();
                    pa.iter().zip(pb).all(|(&u, &v)| src.fmap_index(dst, &pc.map, u) == src.fmap_index(dst, &pc.map, v))
                });
                if ok {
                    summary.merged += 1;
                } else {
                    summary.failed.push((a, b));
                }
            }
        }
    }
    summary
}

/// The coalgebra generated by a triangle and its map into `F A`.
#[derive(Debug, Clone)]
pub struct EObject {
    pub triangle: Triangle,
    /// `P + X_i`
    pub cop: Coproduct,
    pub coalg: Coalgebra,
    /// `inj_t = [p, α ∘ π_i]`
    pub inj: FinFn,
}

/// Builds `E(t)` and `inj_t`, checking that the former is recursive and the
/// latter a coalgebra morphism into `(F A, F α)`.
pub fn build_e_object(ctx: &EContext<'_>, tr: &Triangle, limits: &Limits) -> Result<EObject> {
    let x = &ctx.t.objects[tr.node];
    let cop = coproduct(tr.p_obj(), x.carrier());
    let image = x.signature().apply_obj(&cop.apex, limits)?;
    let inr = cop.inr.indices();
    let table = tr
        .p_prime
        .indices()
        .iter()
        .chain(x.table())
        .map(|&y| x.image().fmap_index(&image, inr, y))
        .collect();
    let coalg = Coalgebra::from_table(image, table);
    let describe = || format!("triangle over object {} with |P| = {}", tr.node, tr.p_obj().len());
    if !is_recursive(&coalg) {
        return Err(Error::RecursivenessFailed(describe()));
    }
    let inj_table = tr.p.indices().iter().chain(&ctx.alpha_pi[tr.node]).copied().collect();
    let inj = FinFn::from_indices_unchecked(cop.apex.clone(), ctx.t.fa().set().clone(), inj_table);
    if !coalgebra_square_holds(&coalg, &ctx.fa, inj.indices()) {
        return Err(Error::MorphismFailed(describe()));
    }
    Ok(EObject { triangle: tr.clone(), cop, coalg, inj })
}

/// `∇: X_i + X_i → X_i` is a coalgebra morphism `E(s) → (X_i, x_i)` for the
/// object `s = (X_i, α ∘ π_i, i, x_i)`.
pub fn codiagonal_is_morphism(ctx: &EContext<'_>, obj: &EObject) -> Result<bool> {
    let nabla = codiagonal(&obj.cop)?;
    is_coalgebra_morphism(&nabla, &obj.coalg, &ctx.t.objects[obj.triangle.node])
}

/// Checks on the morphisms lifted from the truncation diagram and from the
/// slice.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LiftedReport {
    /// `id_P + f` for diagram edges `f`.
    pub edge_lifts: usize,
    pub edge_lift_failures: usize,
    /// `g + id_{X_i}` for slice morphisms `g`.
    pub slice_lifts: usize,
    pub slice_lift_failures: usize,
}

/// The diagram ℰ over a slice sample.
#[derive(Debug, Clone)]
pub struct EDiagram {
    /// Maps `p: {0..k-1} → F A`, the sample first and any inserted
    /// `α ∘ π_i` after it.
    pub slice: Vec<FinFn>,
    pub sample_len: usize,
    pub objects: Vec<EObject>,
    pub slice_of: Vec<usize>,
    /// A cover of each hom-set of ℰ: every pair `(x, h(x))` realized by some
    /// morphism is realized by one listed here.
    pub morphisms: Vec<(usize, usize, FinFn)>,
    /// Per truncation object, the index of its object `s`, if present.
    pub s_objects: Vec<Option<usize>>,
    pub merges: MergeSummary,
    pub lifted: LiftedReport,
}

impl EDiagram {
    pub fn has_s_objects(&self) -> bool {
        self.s_objects.iter().all(Option::is_some)
    }

    pub fn carrier_diagram(&self) -> Result<Diagram> {
        let mut d = Diagram::new();
        for (a, o) in self.objects.iter().enumerate() {
            d.add_node(format!("E{a}"), o.coalg.carrier().clone())?;
        }
        for (k, (a, b, h)) in self.morphisms.iter().enumerate() {
            d.add_edge(format!("e{k}"), *a, *b, h.clone())?;
        }
        Ok(d)
    }

    /// Morphisms of the slice sample (including inserted entries).
    pub fn slice_morphisms(&self) -> Vec<(usize, usize, FinFn)> {
        let objs: Vec<SliceObject> = self.slice.iter().map(|p| SliceObject { p: p.clone() }).collect();
        slice_morphisms(&objs)
    }
}

/// All `p: {0..k-1} → F A` with `k ≤ slice_bound`.
pub fn slice_of_fa(t: &InitialTruncation, slice_bound: usize, limits: &Limits) -> Result<Vec<FinFn>> {
    Ok(slice_objects(t.fa().set(), slice_bound, limits)?.into_iter().map(|o| o.p).collect())
}

/// Enumerates ℰ over `slice`: every triangle's coalgebra, and every
/// coalgebra morphism `h` with `inj_{t2} ∘ h = inj_{t1}`. With `insert_s`,
/// each `(X_i, α ∘ π_i)` is added to the slice so that the objects `s` are
/// present.
pub fn enumerate_e(ctx: &EContext<'_>, slice: &[FinFn], insert_s: bool, limits: &Limits) -> Result<EDiagram> {
    let t = ctx.t;
    let mut slice = slice.to_vec();
    let sample_len = slice.len();
    if insert_s {
        for i in 0..t.objects.len() {
            let p = ctx.alpha_pi(i);
            if !slice.iter().any(|q| q.dom().len() == p.dom().len() && q.indices() == p.indices()) {
                slice.push(p);
            }
        }
    }

    let mut objects = Vec::new();
    let mut slice_of = Vec::new();
    let mut merges = MergeSummary::default();
    for (s, p) in slice.iter().enumerate() {
        let set = make_triangles(ctx, p, limits)?;
        merges.absorb(set.merges, objects.len());
        for tr in &set.triangles {
            objects.push(build_e_object(ctx, tr, limits)?);
            slice_of.push(s);
        }
        limits.check("E objects", objects.len() as u128)?;
    }
    let key = |s: usize, node: usize, table: &[usize]| (s, node, table.to_vec());
    let index: HashMap<(usize, usize, Vec<usize>), usize> = objects
        .iter()
        .enumerate()
        .map(|(a, o)| (key(slice_of[a], o.triangle.node, o.triangle.p_prime.indices()), a))
        .collect();

    let s_objects = (0..t.objects.len())
        .map(|i| {
            let p = ctx.alpha_pi(i);
            let s = slice.iter().position(|q| q.dom().len() == p.dom().len() && q.indices() == p.indices())?;
            index.get(&key(s, i, t.objects[i].table())).copied()
        })
        .collect();

    let per_src: Vec<Vec<(usize, usize, FinFn)>> = (0..objects.len())
        .into_par_iter()
        .map(|a| {
            let mut v = Vec::new();
            for (b, ob) in objects.iter().enumerate() {
                let labels = (objects[a].inj.indices(), ob.inj.indices());
                for h in morphism_cover(&objects[a].coalg, &ob.coalg, Some(labels))? {
                    v.push((a, b, h));
                }
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;
    let morphisms: Vec<(usize, usize, FinFn)> = per_src.into_iter().flatten().collect();
    limits.check("E morphisms", morphisms.len() as u128)?;
    let is_e_morphism = |a: usize, b: usize, table: &[usize]| {
        let (oa, ob): (&EObject, &EObject) = (&objects[a], &objects[b]);
        coalgebra_square_holds(&oa.coalg, &ob.coalg, table)
            && table.iter().map(|&z| ob.inj.at(z)).eq(oa.inj.indices().iter().copied())
    };

    let mut lifted = LiftedReport::default();
    for (a, o) in objects.iter().enumerate() {
        let i = o.triangle.node;
        let k = o.triangle.p_obj().len();
        for (src, dst, f) in &t.morphisms {
            if *src != i {
                continue;
            }
            lifted.edge_lifts += 1;
            let moved: Vec<usize> = o
                .triangle
                .p_prime
                .indices()
                .iter()
                .map(|&y| t.objects[i].image().fmap_index(t.objects[*dst].image(), f.indices(), y))
                .collect();
            let table: Vec<usize> = (0..k).chain(f.indices().iter().map(|&y| k + y)).collect();
            let ok = index.get(&key(slice_of[a], *dst, &moved)).is_some_and(|&b| is_e_morphism(a, b, &table));
            if !ok {
                lifted.edge_lift_failures += 1;
            }
        }
    }
    let slice_objs: Vec<SliceObject> = slice.iter().map(|p| SliceObject { p: p.clone() }).collect();
    for (s1, s2, g) in slice_morphisms(&slice_objs) {
        for (b, o) in objects.iter().enumerate() {
            if slice_of[b] != s2 {
                continue;
            }
            lifted.slice_lifts += 1;
            let i = o.triangle.node;
            let pulled: Vec<usize> = g.indices().iter().map(|&e| o.triangle.p_prime.at(e)).collect();
            let kq = o.triangle.p_obj().len();
            let table: Vec<usize> =
                g.indices().iter().copied().chain((0..t.objects[i].len()).map(|y| kq + y)).collect();
            let ok = index.get(&key(s1, i, &pulled)).is_some_and(|&a| is_e_morphism(a, b, &table));
            if !ok {
                lifted.slice_lift_failures += 1;
            }
        }
    }

    Ok(EDiagram { slice, sample_len, objects, slice_of, morphisms, s_objects, merges, lifted })
}

/// A cocone over the slice sample obtained from a cocone over ℰ.
#[derive(Debug, Clone)]
pub struct Reduction {
    /// `k̄_{(P,p)} = k_t ∘ inl` for the first triangle `t` over `(P, p)`.
    pub kbar: Vec<FinFn>,
    /// Pairs of objects over the same `(P, p)` whose `k_t ∘ inl` differ.
    pub independence_failures: Vec<(usize, usize)>,
    /// `k̄` commutes with every slice morphism.
    pub slice_cocone: bool,
}

/// Reduces a cocone over ℰ (legs indexed like `ed.objects`) to the slice.
pub fn reduce_cocone(ed: &EDiagram, k: &Cocone) -> Result<Reduction> {
    k.check(&ed.carrier_diagram()?)?;
    let mut kbar: Vec<Option<FinFn>> = vec![None; ed.slice.len()];
    let mut first = vec![usize::MAX; ed.slice.len()];
    let mut independence_failures = Vec::new();
    for (a, leg) in k.legs.iter().enumerate() {
        let s = ed.slice_of[a];
        let p = &ed.slice[s];
        let restricted = FinFn::from_indices_unchecked(p.dom().clone(), k.apex.clone(), leg.indices()[..p.dom().len()].to_vec());
        match &kbar[s] {
            None => {
                kbar[s] = Some(restricted);
                first[s] = a;
            }
            Some(prev) if *prev != restricted => independence_failures.push((first[s], a)),
            Some(_) => {}
        }
    }
    let kbar: Vec<FinFn> = kbar
        .into_iter()
        .zip(&ed.slice)
        .map(|(kb, p)| kb.unwrap_or_else(|| FinFn::from_indices_unchecked(p.dom().clone(), k.apex.clone(), vec![usize::MAX; 0])))
        .collect();
    let slice_cocone = ed.slice_morphisms().iter().all(|(s1, s2, g)| {
        kbar[*s1].dom().len() == g.dom().len()
            && g.indices().iter().map(|&e| kbar[*s2].indices().get(e).copied()).eq(kbar[*s1].indices().iter().map(|&v| Some(v)))
    });
    Ok(Reduction { kbar, independence_failures, slice_cocone })
}

/// Which cocone over ℰ a lifting check is about; recomputed after
/// inserting the objects `s`.
#[derive(Debug, Clone)]
pub enum CoconeChoice {
    /// The colimit cocone of ℰ.
    Colimit,
    /// `k_t = v0 ∘ inj_t` for a map `v0: F A → K`.
    Induced(FinFn),
    /// Explicit legs; the diagram must already contain every `s`.
    Legs(Cocone),
}

#[derive(Debug, Clone)]
pub struct LiftReport {
    /// `v ∘ p = k̄_{(P,p)}` for every slice entry.
    pub slice_ok: bool,
    /// `v ∘ inj_t = k_t` for every object.
    pub e_ok: bool,
    /// Number of objects `s` added before checking.
    pub inserted: usize,
    pub independence_failures: usize,
}

impl LiftReport {
    pub fn agree(&self) -> bool {
        self.slice_ok == self.e_ok
    }
}

/// Adds the objects `s = (X_i, α ∘ π_i, i, x_i)` if any is missing; returns
/// how many objects were added.
pub fn ensure_s_objects(ctx: &EContext<'_>, ed: &mut EDiagram, limits: &Limits) -> Result<usize> {
    if ed.has_s_objects() {
        return Ok(0);
    }
    let before = ed.objects.len();
    *ed = enumerate_e(ctx, &ed.slice[..ed.sample_len], true, limits)?;
    Ok(ed.objects.len() - before)
}

/// Resolves a cocone choice against the current diagram.
pub fn resolve_cocone(ed: &EDiagram, choice: &CoconeChoice, limits: &Limits) -> Result<Cocone> {
    match choice {
        CoconeChoice::Colimit => Ok(colimit(&ed.carrier_diagram()?, limits)?.cocone()),
        CoconeChoice::Induced(v0) => {
            let legs = ed
                .objects
                .iter()
                .map(|o| crate::finset::compose(v0, &o.inj))
                .collect::<Result<Vec<_>>>()?;
            Ok(Cocone { apex: v0.cod().clone(), legs })
        }
        CoconeChoice::Legs(k) => {
            if k.legs.len() != ed.objects.len() {
                return Err(Error::InvalidDiagram("explicit cocone does not cover the objects s".into()));
            }
            Ok(k.clone())
        }
    }
}

/// Compares "`v` is a morphism of slice cocones `(p) → k̄`" with "`v` is a
/// morphism of ℰ-cocones `(inj_t) → k`", after inserting the objects `s`.
pub fn lift_cocone_morphism_check(
    ctx: &EContext<'_>,
    ed: &mut EDiagram,
    choice: &CoconeChoice,
    v: &FinFn,
    limits: &Limits,
) -> Result<LiftReport> {
    if let (CoconeChoice::Legs(_), false) = (choice, ed.has_s_objects()) {
        return Err(Error::InvalidDiagram("explicit cocone does not cover the objects s".into()));
    }
    let inserted = ensure_s_objects(ctx, ed, limits)?;
    let k = resolve_cocone(ed, choice, limits)?;
    lift_check_with(ed, &k, v, inserted)
}

/// The lifting comparison for a resolved cocone.
pub fn lift_check_with(ed: &EDiagram, k: &Cocone, v: &FinFn, inserted: usize) -> Result<LiftReport> {
    if v.dom() != ed.objects.first().map_or(v.dom(), |o| o.inj.cod()) || v.cod() != &k.apex {
        return Err(Error::DomainMismatch("v must run from F A to the cocone apex".into()));
    }
    let red = reduce_cocone(ed, k)?;
    let slice_ok = ed
        .slice
        .iter()
        .zip(&red.kbar)
        .all(|(p, kb)| p.indices().iter().map(|&y| v.at(y)).eq(kb.indices().iter().copied()));
    let e_ok = ed
        .objects
        .iter()
        .zip(&k.legs)
        .all(|(o, leg)| o.inj.indices().iter().map(|&y| v.at(y)).eq(leg.indices().iter().copied()));
    Ok(LiftReport { slice_ok, e_ok, inserted, independence_failures: red.independence_failures.len() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComparisonKind {
    Bijective,
    InjectiveOnly,
    Mismatch,
}

/// The canonical map from the colimit of ℰ into `F A`.
#[derive(Debug, Clone)]
pub struct IterateVerdict {
    pub comparison: FinFn,
    pub carriers: Diagram,
    pub colimit: ColimitData,
    pub injective: bool,
    pub surjective: bool,
    pub objects: usize,
    pub morphisms: usize,
}

impl IterateVerdict {
    pub fn kind(&self) -> ComparisonKind {
        match (self.injective, self.surjective) {
            (true, true) => ComparisonKind::Bijective,
            (true, false) => ComparisonKind::InjectiveOnly,
            _ => ComparisonKind::Mismatch,
        }
    }

    pub fn colim_size(&self) -> usize {
        self.comparison.dom().len()
    }

    pub fn fa_size(&self) -> usize {
        self.comparison.cod().len()
    }
}

pub fn compare_with_fa(ctx: &EContext<'_>, ed: &EDiagram, limits: &Limits) -> Result<IterateVerdict> {
    let carriers = ed.carrier_diagram()?;
    let colim = colimit(&carriers, limits)?;
    let legs = ed.objects.iter().map(|o| o.inj.clone()).collect();
    let comparison = mediate(&carriers, &colim, &Cocone { apex: ctx.t.fa().set().clone(), legs })?;
    Ok(IterateVerdict {
        injective: comparison.is_injective(),
        surjective: comparison.is_surjective(),
        objects: ed.objects.len(),
        morphisms: ed.morphisms.len(),
        comparison,
        carriers,
        colimit: colim,
    })
}

/// Builds ℰ over every `(P, p)` with `|P| ≤ slice_bound` (plus the objects
/// `s`) and compares its colimit with `F A`.
pub fn iterate_colimit_check(t: &InitialTruncation, slice_bound: usize, limits: &Limits) -> Result<IterateVerdict> {
    let ctx = EContext::new(t, limits)?;
    let slice = slice_of_fa(t, slice_bound, limits)?;
    let ed = enumerate_e(&ctx, &slice, true, limits)?;
    compare_with_fa(&ctx, &ed, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::construction::{build_truncation, FinrecOptions};

    fn lim() -> Limits {
        Limits::default()
    }

    fn trunc(sig: &crate::functor::Signature, n: usize) -> InitialTruncation {
        build_truncation(sig, n, FinrecOptions::default(), &lim()).unwrap()
    }

    #[test]
    fn empty_p_gives_one_triangle_per_object() {
        let t = trunc(&builtins::successor(), 2);
        let ctx = EContext::new(&t, &lim()).unwrap();
        let p = FinFn::from_empty(t.fa().set());
        let set = make_triangles(&ctx, &p, &lim()).unwrap();
        assert_eq!(set.triangles.len(), t.objects.len());
        for tr in &set.triangles {
            let o = build_e_object(&ctx, tr, &lim()).unwrap();
            assert_eq!(o.coalg.len(), t.objects[tr.node].len());
        }
    }

    #[test]
    fn every_point_of_fa_has_a_triangle() {
        let t = trunc(&builtins::successor(), 2);
        let ctx = EContext::new(&t, &lim()).unwrap();
        assert_eq!(t.fa().len(), 3);
        for y in 0..t.fa().len() {
            let p = FinFn::from_indices(FinSet::ordinal(1), t.fa().set().clone(), vec![y]).unwrap();
            let set = make_triangles(&ctx, &p, &lim()).unwrap();
            assert!(!set.triangles.is_empty());
            for tr in &set.triangles {
                let o = build_e_object(&ctx, tr, &lim()).unwrap();
                // The P-part only points into X_i.
                for s in 0..tr.p_obj().len() {
                    assert!(o.coalg.successors(s).iter().all(|&z| z >= tr.p_obj().len()));
                }
            }
        }
    }

    #[test]
    fn s_objects_and_codiagonal() {
        let t = trunc(&builtins::cherry(), 2);
        let ctx = EContext::new(&t, &lim()).unwrap();
        let ed = enumerate_e(&ctx, &[], true, &lim()).unwrap();
        assert!(ed.has_s_objects());
        for s in ed.s_objects.iter().flatten() {
            assert!(codiagonal_is_morphism(&ctx, &ed.objects[*s]).unwrap());
        }
        assert_eq!(ed.lifted.edge_lift_failures, 0);
        assert_eq!(ed.lifted.slice_lift_failures, 0);
    }

    #[test]
    fn empty_slice_gives_empty_diagram() {
        let t = trunc(&builtins::successor(), 2);
        let ctx = EContext::new(&t, &lim()).unwrap();
        let ed = enumerate_e(&ctx, &[], false, &lim()).unwrap();
        assert!(ed.objects.is_empty());
    }

    #[test]
    fn reduce_and_lift_on_constants() {
        let t = trunc(&builtins::constants(2), 2);
        let ctx = EContext::new(&t, &lim()).unwrap();
        let slice = slice_of_fa(&t, 1, &lim()).unwrap();
        let mut ed = enumerate_e(&ctx, &slice, false, &lim()).unwrap();
        let k = resolve_cocone(&ed, &CoconeChoice::Colimit, &lim()).unwrap();
        let red = reduce_cocone(&ed, &k).unwrap();
        assert!(red.independence_failures.is_empty());
        assert!(red.slice_cocone);

        let verdict = compare_with_fa(&ctx, &ed, &lim()).unwrap();
        let v = verdict.comparison.try_inverse().unwrap();
        let rep = lift_cocone_morphism_check(&ctx, &mut ed, &CoconeChoice::Colimit, &v, &lim()).unwrap();
        assert!(rep.inserted > 0);
        assert!(rep.slice_ok && rep.e_ok);

        let mut bad = v.indices().to_vec();
        bad.swap(0, 1);
        let bad = FinFn::from_indices(v.dom().clone(), v.cod().clone(), bad).unwrap();
        let rep = lift_cocone_morphism_check(&ctx, &mut ed, &CoconeChoice::Colimit, &bad, &lim()).unwrap();
        assert_eq!(rep.inserted, 0);
        assert!(!rep.slice_ok && !rep.e_ok);
    }

    #[test]
    fn comparison_verdicts() {
        let v = iterate_colimit_check(&trunc(&builtins::constants(3), 2), 1, &lim()).unwrap();
        assert_eq!(v.kind(), ComparisonKind::Bijective);
        assert_eq!(v.fa_size(), 3);
        let v = iterate_colimit_check(&trunc(&builtins::empty_signature(), 2), 1, &lim()).unwrap();
        assert_eq!(v.kind(), ComparisonKind::Bijective);
        assert_eq!(v.fa_size(), 0);
        let v = iterate_colimit_check(&trunc(&builtins::successor(), 2), 1, &lim()).unwrap();
        assert!(v.injective);
    }
}
