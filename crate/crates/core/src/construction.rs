//! Truncations of the initial algebra: the colimit `A_n` of all recursive
//! coalgebras on carriers `{0, …, k-1}` with `k ≤ n`, together with every
//! coalgebra morphism between them, and its induced structure
//! `α_n: A_n → F A_n`.
//!
//! The finite subdiagram is not filtered, so its colimit is validated against
//! an independent oracle: unfolding every state into a finite [`Term`].

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;

use crate::coalgebra::{
    coalgebra_morphisms, coalgebra_square_holds, colim_coalgebras, for_each_function, hylo, initial_from_iso,
    is_coalgebra_morphism, lambek_check, morphism_cover, recursion_certificate, split_to_canonical, topo_or_cycle, Algebra,
    Certificate, Coalgebra, CoalgebraColimit, CoalgebraDiagram, InitialAlgebra,
};
use crate::colimit::{factor_through, mediate, path_composites, default_path_cap, Cocone};
use crate::error::{pow_saturating, Error, Limits, Result};
use crate::finset::{compose, FinFn, FinSet, Partition};
use crate::functor::{FObj, Shape, Signature};
use crate::iterate::{self, EContext, IterateVerdict};

/// A finite well-founded tree over a signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Op { op: String, args: Vec<Term> },
    /// Members sorted and distinct.
    Set(Vec<Term>),
}

impl Term {
    pub fn op(op: impl Into<String>, args: Vec<Term>) -> Self {
        Term::Op { op: op.into(), args }
    }

    pub fn set(members: impl IntoIterator<Item = Term>) -> Self {
        let m: BTreeSet<Term> = members.into_iter().collect();
        Term::Set(m.into_iter().collect())
    }

    pub fn children(&self) -> &[Term] {
        match self {
            Term::Op { args, .. } => args,
            Term::Set(m) => m,
        }
    }

    /// Constants and the empty set have depth 0.
    pub fn depth(&self) -> usize {
        self.children().iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    /// Number of distinct subterms, the term itself included.
    pub fn distinct_subterms(&self) -> usize {
        fn walk<'a>(t: &'a Term, seen: &mut BTreeSet<&'a Term>) {
            if seen.insert(t) {
                t.children().iter().for_each(|c| walk(c, seen));
            }
        }
        let mut seen = BTreeSet::new();
        walk(self, &mut seen);
        seen.len()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Op { op, args } if args.is_empty() => f.write_str(op),
            Term::Op { op, args } => {
                write!(f, "{op}(")?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Term::Set(m) => {
                f.write_str("{")?;
                for (k, a) in m.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str("}")
            }
        }
    }
}

fn term_of_shape(sig: &Signature, shape: &Shape, sub: &[Term]) -> Term {
    match shape {
        Shape::Op { op, args } => Term::op(sig.ops()[*op].name.clone(), args.iter().map(|&a| sub[a].clone()).collect()),
        Shape::Subset(m) => Term::set(m.iter().map(|&a| sub[a].clone())),
    }
}

/// Unfoldings of every state, in carrier order.
pub fn unfold_all(c: &Coalgebra) -> Result<Vec<Term>> {
    let order = match recursion_certificate(c) {
        Certificate::Acyclic { order } => order,
        cert => return Err(Error::NotRecursive { cycle: cert.names(c.carrier()) }),
    };
    let mut out = vec![Term::Set(Vec::new()); c.len()];
    for x in order {
        out[x] = term_of_shape(c.signature(), &c.shape(x), &out);
    }
    Ok(out)
}

/// The term obtained by expanding `x` until the leaves.
pub fn unfold(c: &Coalgebra, x: usize) -> Result<Term> {
    Ok(unfold_all(c)?.swap_remove(x))
}

/// Evaluates a term in an algebra.
pub fn cata(b: &Algebra, t: &Term) -> Result<usize> {
    let sig = b.signature();
    let shape = match t {
        Term::Op { op, args } => {
            let k = sig
                .op_index(op)
                .ok_or_else(|| Error::ElementNotFound { elem: op.clone(), context: "the signature".into() })?;
            Shape::Op { op: k, args: args.iter().map(|a| cata(b, a)).collect::<Result<_>>()? }
        }
        Term::Set(m) => {
            let mut v = m.iter().map(|a| cata(b, a)).collect::<Result<Vec<_>>>()?;
            v.sort_unstable();
            v.dedup();
            Shape::Subset(v)
        }
    };
    b.eval(&shape)
}

/// All terms of depth less than `k`, sorted.
pub fn terms_below_depth(sig: &Signature, k: usize, limits: &Limits) -> Result<Vec<Term>> {
    let mut level: Vec<Term> = Vec::new();
    for _ in 0..k {
        let n = level.len();
        limits.check("terms", sig.image_size(n))?;
        let mut next = BTreeSet::new();
        if sig.is_powerset() {
            for mask in 0..(1usize << n) {
                next.insert(Term::set((0..n).filter(|b| mask >> b & 1 == 1).map(|b| level[b].clone())));
            }
        } else {
            for op in sig.ops() {
                for_each_function(op.arity, n, |args| {
                    next.insert(Term::op(op.name.clone(), args.iter().map(|&a| level[a].clone()).collect()));
                    true
                });
            }
        }
        level = next.into_iter().collect();
    }
    Ok(level)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FinrecOptions {
    /// Keep one coalgebra per isomorphism class: the one whose structure
    /// table is least among all relabellings. Does not change the colimit.
    pub dedup: bool,
    /// Store, per pair of objects, only a cover of the hom-set: enough
    /// morphisms to realize every pair `(x, h(x))`. The colimit is the same.
    pub cover: bool,
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    permute(&mut cur, 0, &mut out);
    out
}

fn permute(cur: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
    if i == cur.len() {
        out.push(cur.clone());
        return;
    }
    for j in i..cur.len() {
        cur.swap(i, j);
        permute(cur, i + 1, out);
        cur.swap(i, j);
    }
}

fn is_canonical(image: &FObj, table: &[usize], perms: &[Vec<usize>]) -> bool {
    let mut relabelled = vec![0; table.len()];
    perms.iter().all(|s| {
        for (x, &t) in table.iter().enumerate() {
            relabelled[s[x]] = image.fmap_index(image, s, t);
        }
        table <= relabelled.as_slice()
    })
}

/// Every recursive coalgebra on `{0, …, k-1}` for `k ≤ bound`, by size and
/// then structure table.
pub fn enumerate_finrec(sig: &Signature, bound: usize, opts: FinrecOptions, limits: &Limits) -> Result<Vec<Coalgebra>> {
    let mut total = 0u128;
    for k in 0..=bound {
        total = total.saturating_add(pow_saturating(sig.image_size(k).min(usize::MAX as u128) as usize, k));
    }
    limits.check("candidate structures", total)?;
    let mut out = Vec::new();
    for k in 0..=bound {
        let image = sig.apply_obj(&FinSet::ordinal(k), limits)?;
        let radix = image.len();
        let count = pow_saturating(radix, k) as usize;
        let perms = if opts.dedup { permutations(k) } else { Vec::new() };
        let tables: Vec<Vec<usize>> = (0..count)
            .into_par_iter()
            .filter_map(|mut idx| {
                let mut table = vec![0; k];
                for slot in table.iter_mut().rev() {
                    *slot = idx % radix;
                    idx /= radix;
                }
                let succ: Vec<Vec<usize>> = table.iter().map(|&t| image.children(t)).collect();
                let keep = topo_or_cycle(&succ).is_recursive() && (!opts.dedup || is_canonical(&image, &table, &perms));
                keep.then_some(table)
            })
            .collect();
        out.extend(tables.into_iter().map(|t| Coalgebra::from_table(image.clone(), t)));
    }
    Ok(out)
}

/// A truncation `(A_n, α_n)` with the diagram it was built from.
#[derive(Debug, Clone)]
pub struct InitialTruncation {
    pub sig: Signature,
    pub bound: usize,
    pub options: FinrecOptions,
    pub objects: Vec<Coalgebra>,
    /// `(src, dst, h)` for every coalgebra morphism between objects.
    pub morphisms: Vec<(usize, usize, FinFn)>,
    pub colimit: CoalgebraColimit,
    pub alpha_injective: bool,
    lookup: HashMap<Vec<usize>, usize>,
}

impl InitialTruncation {
    /// The carrier `A_n`.
    pub fn a_set(&self) -> &FinSet {
        self.colimit.coalgebra.carrier()
    }

    /// `(A_n, α_n)`.
    pub fn coalgebra(&self) -> &Coalgebra {
        &self.colimit.coalgebra
    }

    pub fn alpha(&self) -> &FinFn {
        self.colimit.coalgebra.structure()
    }

    /// `F A_n`.
    pub fn fa(&self) -> &FObj {
        self.colimit.coalgebra.image()
    }

    pub fn injections(&self) -> &[FinFn] {
        &self.colimit.colimit.injections
    }

    /// Index of the object with exactly this structure table, if present.
    pub fn object_index(&self, table: &[usize]) -> Option<usize> {
        self.lookup.get(table).copied()
    }

    /// Unfolding of each class, taken from its least representative.
    pub fn class_terms(&self) -> Result<Vec<Term>> {
        let unfolded = self.objects.iter().map(unfold_all).collect::<Result<Vec<_>>>()?;
        let mut out = vec![None; self.a_set().len()];
        for (i, inj) in self.injections().iter().enumerate() {
            for x in 0..inj.dom().len() {
                out[inj.at(x)].get_or_insert_with(|| unfolded[i][x].clone());
            }
        }
        Ok(out.into_iter().map(|t| t.expect("injections are jointly surjective")).collect())
    }
}

/// All morphisms between the given objects, by source then target.
fn all_morphisms(objects: &[Coalgebra], cover: bool, limits: &Limits) -> Result<Vec<(usize, usize, FinFn)>> {
    let per_src: Vec<Vec<(usize, usize, FinFn)>> = (0..objects.len())
        .into_par_iter()
        .map(|s| {
            let mut v = Vec::new();
            for (t, dst) in objects.iter().enumerate() {
                let hs = if cover {
                    morphism_cover(&objects[s], dst, None)?
                } else {
                    coalgebra_morphisms(&objects[s], dst, limits)?
                };
                for h in hs {
                    v.push((s, t, h));
                }
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;
    let total: usize = per_src.iter().map(Vec::len).sum();
    limits.check("diagram morphisms", total as u128)?;
    Ok(per_src.into_iter().flatten().collect())
}

pub fn build_truncation(sig: &Signature, bound: usize, opts: FinrecOptions, limits: &Limits) -> Result<InitialTruncation> {
    let objects = enumerate_finrec(sig, bound, opts, limits)?;
    let morphisms = all_morphisms(&objects, opts.cover, limits)?;
    let mut d = CoalgebraDiagram::new();
    for (i, c) in objects.iter().enumerate() {
        d.add_node(format!("X{i}"), c.clone());
    }
    for (k, (s, t, h)) in morphisms.iter().enumerate() {
        d.add_edge(format!("m{k}"), *s, *t, h.clone());
    }
    let colimit = colim_coalgebras(sig, &d, limits)?;
    let alpha_injective = colimit.coalgebra.structure().is_injective();
    let lookup = objects.iter().enumerate().map(|(i, c)| (c.table().to_vec(), i)).collect();
    Ok(InitialTruncation { sig: sig.clone(), bound, options: opts, objects, morphisms, colimit, alpha_injective, lookup })
}

/// The partition of the disjoint union of all carriers by equality of
/// unfoldings, on the same base set as the colimit partition.
pub fn term_partition(t: &InitialTruncation) -> Result<Partition> {
    let base = t.colimit.colimit.partition.base().clone();
    let mut part = Partition::discrete(&base);
    let mut first: HashMap<Term, usize> = HashMap::new();
    for (i, c) in t.objects.iter().enumerate() {
        for (x, term) in unfold_all(c)?.into_iter().enumerate() {
            let flat = t.colimit.colimit.flat_index(i, x);
            let rep = *first.entry(term).or_insert(flat);
            part.union(rep, flat);
        }
    }
    part.flatten();
    Ok(part)
}

/// Agreement of the unfolding partition with the colimit partition.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub partition: Partition,
    pub classes: usize,
}

/// Checks that two states are identified in `A_n` iff they unfold to the
/// same term.
pub fn oracle_partition(t: &InitialTruncation) -> Result<OracleReport> {
    let oracle = term_partition(t)?;
    let colim = &t.colimit.colimit.partition;
    if oracle != *colim {
        let base = oracle.base();
        let bad = (0..base.len())
            .find(|&x| (0..base.len()).any(|y| oracle.same(x, y) != colim.same(x, y)))
            .expect("partitions differ somewhere");
        let members = |p: &Partition| {
            let v: Vec<String> = (0..base.len()).filter(|&y| p.same(bad, y)).map(|y| base.elem(y).to_string()).collect();
            v.join(", ")
        };
        return Err(Error::OracleMismatch(format!(
            "unfoldings group {{{}}}, colimit groups {{{}}}",
            members(&oracle),
            members(colim)
        )));
    }
    let classes = oracle.num_classes();
    Ok(OracleReport { partition: oracle, classes })
}

/// The mediating map out of `A_n` induced by the folds of every object into
/// `b`.
pub fn universal_fold(t: &InitialTruncation, b: &Algebra) -> Result<FinFn> {
    let legs = t.objects.iter().map(|c| hylo(c, b)).collect::<Result<Vec<_>>>()?;
    let cocone = Cocone { apex: b.carrier().clone(), legs };
    mediate(&t.colimit.carriers, &t.colimit.colimit, &cocone)
}

/// Compares [`universal_fold`] with `cata_b ∘ unfold` on every state of
/// every object; returns the number of states compared.
pub fn check_universal_fold(t: &InitialTruncation, b: &Algebra) -> Result<usize> {
    let v = universal_fold(t, b)?;
    let mut checked = 0;
    for (i, c) in t.objects.iter().enumerate() {
        for (x, term) in unfold_all(c)?.iter().enumerate() {
            let class = t.injections()[i].at(x);
            if v.at(class) != cata(b, term)? {
                return Err(Error::OracleMismatch(format!(
                    "fold of class {} differs from evaluating {term}",
                    t.a_set().elem(class)
                )));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// How a coalgebra morphism into `A_n` was factored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorRoute {
    /// The carrier factorization was already a coalgebra morphism.
    Direct,
    /// The carrier factorization became one after composing along a path.
    Merged,
    /// Found by searching all objects.
    Search,
}

#[derive(Debug, Clone)]
pub struct Factorization {
    pub node: usize,
    /// Coalgebra morphism `B → X_node` with `π_node ∘ h' = h`.
    pub h_prime: FinFn,
    pub route: FactorRoute,
}

/// Factors a coalgebra morphism `h: (B, β) → (A_n, α_n)` through an
/// injection `π_j` by a coalgebra morphism.
pub fn factor_coalg_hom(t: &InitialTruncation, b: &Coalgebra, h: &FinFn, limits: &Limits) -> Result<Factorization> {
    if !is_coalgebra_morphism(h, b, t.coalgebra())? {
        return Err(Error::NotMorphism("h is not a coalgebra morphism into the truncation".into()));
    }
    let carriers = &t.colimit.carriers;
    let colim = &t.colimit.colimit;
    if let Ok((i, f)) = factor_through(carriers, colim, h) {
        if coalgebra_square_holds(b, &t.objects[i], f.indices()) {
            return Ok(Factorization { node: i, h_prime: f, route: FactorRoute::Direct });
        }
        for pc in path_composites(carriers, i, default_path_cap(carriers), limits.cap) {
            let g: Vec<usize> = f.indices().iter().map(|&x| pc.map[x]).collect();
            if coalgebra_square_holds(b, &t.objects[pc.target], &g) {
                let h_prime = FinFn::from_indices(b.carrier().clone(), t.objects[pc.target].carrier().clone(), g)?;
                return Ok(Factorization { node: pc.target, h_prime, route: FactorRoute::Merged });
            }
        }
    }
    for (j, x) in t.objects.iter().enumerate() {
        for g in coalgebra_morphisms(b, x, limits)? {
            if compose(&t.injections()[j], &g)? == *h {
                return Ok(Factorization { node: j, h_prime: g, route: FactorRoute::Search });
            }
        }
    }
    Err(Error::NoFactorization("no object of the truncation carries this morphism".into()))
}

/// For each object, the number of coalgebra morphisms into `(A_n, α_n)`
/// found by enumerating all functions, and whether the only one is the
/// injection.
pub fn injection_uniqueness(t: &InitialTruncation, limits: &Limits) -> Result<Vec<(usize, bool)>> {
    let a = t.coalgebra();
    t.objects
        .iter()
        .zip(t.injections())
        .map(|(x, inj)| {
            limits.check("candidate functions", pow_saturating(a.len(), x.len()))?;
            let mut count = 0;
            let mut is_inj = true;
            for_each_function(x.len(), a.len(), |h| {
                if coalgebra_square_holds(x, a, h) {
                    count += 1;
                    is_inj &= h == inj.indices();
                }
                true
            });
            Ok((count, count == 1 && is_inj))
        })
        .collect()
}

/// The unique coalgebra morphism from a recursive coalgebra into `A_n`:
/// through the matching object when the carrier fits the bound, otherwise
/// by matching unfoldings against class terms.
pub fn morphism_into_truncation(t: &InitialTruncation, c: &Coalgebra, class_terms: &HashMap<Term, usize>, limits: &Limits) -> Result<FinFn> {
    let table = if c.len() <= t.bound && !t.options.dedup {
        let split = split_to_canonical(c, limits)?;
        let i = t
            .object_index(split.coalgebra.table())
            .ok_or_else(|| Error::NoFactorization("recursive coalgebra missing from the truncation".into()))?;
        compose(&t.injections()[i], &split.m)?.indices().to_vec()
    } else {
        unfold_all(c)?
            .iter()
            .map(|term| {
                class_terms
                    .get(term)
                    .copied()
                    .ok_or_else(|| Error::NoFactorization(format!("{term} is not realized in the truncation")))
            })
            .collect::<Result<Vec<_>>>()?
    };
    let h = FinFn::from_indices(c.carrier().clone(), t.a_set().clone(), table)?;
    if !coalgebra_square_holds(c, t.coalgebra(), h.indices()) {
        return Err(Error::MorphismFailed("map into the truncation".into()));
    }
    Ok(h)
}

/// Term of each class, as a lookup table.
pub fn class_index(t: &InitialTruncation) -> Result<HashMap<Term, usize>> {
    Ok(t.class_terms()?.into_iter().enumerate().map(|(k, term)| (term, k)).collect())
}

/// Outcome of the end-to-end initiality check.
#[derive(Debug, Clone)]
pub enum MainVerdict {
    /// `α_n` is bijective and `A_n` passed Lambek's check.
    Initial {
        truncation: Box<InitialTruncation>,
        initial: Box<InitialAlgebra>,
        /// `h: F A_n → A_n` derived from the colimit comparison.
        h: FinFn,
        comparison: Box<IterateVerdict>,
    },
    /// `α_n` is not bijective at this bound.
    Inconclusive { a_size: usize, fa_size: usize, injective: bool, surjective: bool },
}

impl MainVerdict {
    pub fn is_initial(&self) -> bool {
        matches!(self, MainVerdict::Initial { .. })
    }
}

/// Builds `A_n`; if `α_n` is bijective, derives `h: F A_n → A_n` from the
/// colimit of the generated coalgebras over `F A_n`, runs Lambek's check and
/// returns the initial algebra with its tester.
pub fn main_theorem_check(sig: &Signature, bound: usize, slice_bound: usize, limits: &Limits) -> Result<MainVerdict> {
    main_theorem_check_with(sig, bound, slice_bound, FinrecOptions::default(), limits)
}

/// [`main_theorem_check`] over a truncation built with `opts`.
pub fn main_theorem_check_with(
    sig: &Signature,
    bound: usize,
    slice_bound: usize,
    opts: FinrecOptions,
    limits: &Limits,
) -> Result<MainVerdict> {
    let t = build_truncation(sig, bound, opts, limits)?;
    let alpha = t.alpha();
    if !alpha.is_bijective() {
        return Ok(MainVerdict::Inconclusive {
            a_size: alpha.dom().len(),
            fa_size: alpha.cod().len(),
            injective: alpha.is_injective(),
            surjective: alpha.is_surjective(),
        });
    }
    let ctx = EContext::new(&t, limits)?;
    let slice = iterate::slice_of_fa(&t, slice_bound, limits)?;
    let ed = iterate::enumerate_e(&ctx, &slice, true, limits)?;
    let verdict = iterate::compare_with_fa(&ctx, &ed, limits)?;
    let inverse = verdict
        .comparison
        .try_inverse()
        .ok_or_else(|| Error::HypothesisFailed("colimit comparison into F A is not bijective".into()))?;
    let terms = class_index(&t)?;
    let legs = ed
        .objects
        .iter()
        .map(|o| morphism_into_truncation(&t, &o.coalg, &terms, limits))
        .collect::<Result<Vec<_>>>()?;
    let into_a = mediate(&verdict.carriers, &verdict.colimit, &Cocone { apex: t.a_set().clone(), legs })?;
    let h = compose(&into_a, &inverse)?;
    lambek_check(t.coalgebra(), &h, limits)?;
    let initial = initial_from_iso(t.coalgebra())?;
    Ok(MainVerdict::Initial { truncation: Box::new(t), initial: Box::new(initial), h, comparison: Box::new(verdict) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn finrec_counts() {
        let s = builtins::successor();
        let opts = FinrecOptions::default();
        // Empty coalgebra, one on carrier 1, three on carrier 2.
        assert_eq!(enumerate_finrec(&s, 2, opts, &lim()).unwrap().len(), 1 + 1 + 3);
        assert_eq!(enumerate_finrec(&s, 0, opts, &lim()).unwrap().len(), 1);
        assert_eq!(enumerate_finrec(&builtins::cherry(), 1, opts, &lim()).unwrap().len(), 2);
        for c in enumerate_finrec(&builtins::cherry(), 2, opts, &lim()).unwrap() {
            assert!(crate::coalgebra::is_recursive(&c));
            assert_eq!(split_to_canonical(&c, &lim()).unwrap().coalgebra.table(), c.table());
        }
    }

    #[test]
    fn dedup_keeps_one_per_class() {
        let s = builtins::successor();
        let all = enumerate_finrec(&s, 3, FinrecOptions::default(), &lim()).unwrap();
        let few = enumerate_finrec(&s, 3, FinrecOptions { dedup: true, ..Default::default() }, &lim()).unwrap();
        assert!(few.len() < all.len());
        let a = build_truncation(&s, 3, FinrecOptions::default(), &lim()).unwrap();
        let b = build_truncation(&s, 3, FinrecOptions { dedup: true, ..Default::default() }, &lim()).unwrap();
        assert_eq!(a.a_set().len(), b.a_set().len());
    }

    #[test]
    fn unfold_fig2() {
        let c = builtins::fig2_coalgebra();
        let v = c.carrier().index_of_str("v").unwrap();
        assert_eq!(unfold(&c, v).unwrap().to_string(), "node(leaf,node(leaf,leaf))");
        assert_eq!(unfold(&c, 0).unwrap().to_string(), "leaf");
    }

    #[test]
    fn truncation_examples() {
        let s = builtins::successor();
        let t = build_truncation(&s, 0, FinrecOptions::default(), &lim()).unwrap();
        assert!(t.a_set().is_empty());
        let t = build_truncation(&s, 3, FinrecOptions::default(), &lim()).unwrap();
        assert_eq!(t.a_set().len(), 3);
        assert!(t.alpha_injective);
        assert_eq!(oracle_partition(&t).unwrap().classes, 3);

        let c = builtins::cherry();
        let t = build_truncation(&c, 2, FinrecOptions::default(), &lim()).unwrap();
        let terms: Vec<String> = t.class_terms().unwrap().iter().map(Term::to_string).collect();
        assert_eq!(oracle_partition(&t).unwrap().classes, terms.len());
        let b = builtins::height_algebra(4, &lim()).unwrap();
        let v = universal_fold(&t, &b).unwrap();
        let mut heights: Vec<usize> = v.indices().to_vec();
        heights.sort_unstable();
        assert_eq!(heights, [0, 1]);
    }

    #[test]
    fn parity_fold() {
        let s = builtins::successor();
        let t = build_truncation(&s, 4, FinrecOptions::default(), &lim()).unwrap();
        let b = builtins::parity_algebra(&lim()).unwrap();
        assert!(check_universal_fold(&t, &b).unwrap() > 0);
        let v = universal_fold(&t, &b).unwrap();
        for (k, term) in t.class_terms().unwrap().iter().enumerate() {
            assert_eq!(v.at(k), term.depth() % 2);
        }
    }

    #[test]
    fn factor_examples() {
        let s = builtins::successor();
        let t = build_truncation(&s, 2, FinrecOptions::default(), &lim()).unwrap();
        for (i, x) in t.objects.iter().enumerate() {
            let f = factor_coalg_hom(&t, x, &t.injections()[i], &lim()).unwrap();
            assert_eq!(compose(&t.injections()[f.node], &f.h_prime).unwrap(), t.injections()[i]);
        }
        let single = Coalgebra::new(
            &s,
            FinSet::new(["q"]).unwrap(),
            [("q", crate::functor::FElem::constant("z"))],
            &lim(),
        )
        .unwrap();
        let terms = class_index(&t).unwrap();
        let h = morphism_into_truncation(&t, &single, &terms, &lim()).unwrap();
        let f = factor_coalg_hom(&t, &single, &h, &lim()).unwrap();
        assert_eq!(t.objects[f.node].len(), 1);

        let u = injection_uniqueness(&t, &lim()).unwrap();
        assert_eq!(u.len(), 5);
        assert!(u.iter().all(|&(n, ok)| n == 1 && ok));
    }

    #[test]
    fn depth_and_term_counts() {
        let c = builtins::cherry();
        let counts: Vec<usize> = (0..5).map(|k| terms_below_depth(&c, k, &lim()).unwrap().len()).collect();
        assert_eq!(counts, [0, 1, 2, 5, 26]);
        let t = Term::op("node", vec![Term::op("leaf", vec![]), Term::op("leaf", vec![])]);
        assert_eq!(t.depth(), 1);
        assert_eq!(t.distinct_subterms(), 2);
    }

    #[test]
    fn main_theorem_verdicts() {
        let v = main_theorem_check(&builtins::constants(3), 2, 1, &lim()).unwrap();
        let MainVerdict::Initial { initial, .. } = &v else { panic!("{v:?}") };
        assert_eq!(initial.carrier().len(), 3);

        let v = main_theorem_check(&builtins::successor(), 3, 1, &lim()).unwrap();
        assert!(matches!(v, MainVerdict::Inconclusive { injective: true, surjective: false, .. }));

        let v = main_theorem_check(&builtins::empty_signature(), 2, 1, &lim()).unwrap();
        let MainVerdict::Initial { initial, .. } = &v else { panic!("{v:?}") };
        assert!(initial.carrier().is_empty());
    }
}
