//! The initial chain `∅ → F∅ → F²∅ → …`, cut off after finitely many steps.
//!
//! Stage `W_k` carries the coalgebra `w_{k,k+1}: W_k → F W_k = W_{k+1}`, so
//! the chain can be compared with the truncations of [`crate::construction`].

use std::collections::{BTreeSet, HashSet};

use crate::coalgebra::{initial_from_iso, is_recursive, Coalgebra, InitialAlgebra};
use crate::construction::{build_truncation, terms_below_depth, unfold_all, FinrecOptions, Term};
use crate::error::{Limits, Result};
use crate::finset::{FinFn, FinSet};
use crate::functor::{FObj, Signature};

#[derive(Debug, Clone)]
pub struct ChainData {
    pub sig: Signature,
    /// `W_0, …, W_k`
    pub stages: Vec<FinSet>,
    /// `F W_i`, decoding the elements of `W_{i+1}`.
    pub images: Vec<FObj>,
    /// `w_{i,i+1}: W_i → W_{i+1}`, one fewer than `images`.
    pub links: Vec<FinFn>,
}

impl ChainData {
    pub fn sizes(&self) -> Vec<usize> {
        self.stages.iter().map(FinSet::len).collect()
    }

    /// `(W_i, w_{i,i+1})`, for `i < links.len()`.
    pub fn stage_coalgebra(&self, i: usize) -> Coalgebra {
        Coalgebra::from_table(self.images[i].clone(), self.links[i].indices().to_vec())
    }
}

/// Builds `W_0, …, W_steps` and the links between consecutive stages.
pub fn build_chain(sig: &Signature, steps: usize, limits: &Limits) -> Result<ChainData> {
    let mut stages = vec![FinSet::empty()];
    let mut images: Vec<FObj> = Vec::new();
    let mut links: Vec<FinFn> = Vec::new();
    for i in 0..steps {
        let image = sig.apply_obj(&stages[i], limits)?;
        let next = image.set().clone();
        if i > 0 {
            links.push(images[i - 1].map_to(&image, &links[i - 1])?);
        } else {
            links.push(FinFn::from_empty(&next));
        }
        images.push(image);
        stages.push(next);
    }
    Ok(ChainData { sig: sig.clone(), stages, images, links })
}

#[derive(Debug, Clone)]
pub struct StageReport {
    pub size: usize,
    /// `None` for the last stage, which has no outgoing link.
    pub recursive: Option<bool>,
    pub link_injective: Option<bool>,
    /// Unfoldings are distinct and equal the terms of depth `< k`.
    pub terms_match: Option<bool>,
    /// Terms of this stage with at most `bound` distinct subterms that are
    /// missing from the truncation `A_bound`.
    pub missing_from_truncation: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct ChainReport {
    pub stages: Vec<StageReport>,
    /// First `k` with `w_{k,k+1}` bijective.
    pub converged_at: Option<usize>,
    pub initial: Option<InitialAlgebra>,
}

impl ChainReport {
    pub fn all_recursive(&self) -> bool {
        self.stages.iter().all(|s| s.recursive != Some(false))
    }

    pub fn all_injective(&self) -> bool {
        self.stages.iter().all(|s| s.link_injective != Some(false))
    }

    pub fn terms_match(&self) -> bool {
        self.stages.iter().all(|s| s.terms_match != Some(false))
    }
}

/// Checks every stage: recursiveness, injective links, unfoldings against
/// terms by depth, and convergence. With `truncation_bound = Some(n)` the
/// small terms of each stage are also looked up in `A_n`.
pub fn analyze_chain(cd: &ChainData, truncation_bound: Option<usize>, limits: &Limits) -> Result<ChainReport> {
    let known: Option<(usize, HashSet<Term>)> = match truncation_bound {
        Some(n) => {
            let t = build_truncation(&cd.sig, n, FinrecOptions { dedup: true, ..Default::default() }, limits)?;
            Some((n, t.class_terms()?.into_iter().collect()))
        }
        None => None,
    };
    let mut stages = Vec::new();
    let mut converged_at = None;
    let mut initial = None;
    for (k, w) in cd.stages.iter().enumerate() {
        let mut rep = StageReport {
            size: w.len(),
            recursive: None,
            link_injective: None,
            terms_match: None,
            missing_from_truncation: None,
        };
        if k < cd.links.len() {
            let c = cd.stage_coalgebra(k);
            let recursive = is_recursive(&c);
            rep.recursive = Some(recursive);
            rep.link_injective = Some(cd.links[k].is_injective());
            if converged_at.is_none() && cd.links[k].is_bijective() {
                converged_at = Some(k);
                initial = Some(initial_from_iso(&c)?);
            }
            if recursive {
                let terms = unfold_all(&c)?;
                let distinct: BTreeSet<&Term> = terms.iter().collect();
                let expected = terms_below_depth(&cd.sig, k, limits)?;
                rep.terms_match = Some(distinct.len() == terms.len() && distinct.into_iter().eq(expected.iter()));
                if let Some((n, known)) = &known {
                    let missing = terms.iter().filter(|t| t.distinct_subterms() <= *n && !known.contains(t)).count();
                    rep.missing_from_truncation = Some(missing);
                }
            }
        }
        stages.push(rep);
    }
    Ok(ChainReport { stages, converged_at, initial })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn stage_sizes() {
        let sizes = |sig: Signature, k| build_chain(&sig, k, &lim()).unwrap().sizes();
        assert_eq!(sizes(builtins::cherry(), 4), [0, 1, 2, 5, 26]);
        assert_eq!(sizes(builtins::constants(3), 2), [0, 3, 3]);
        assert_eq!(sizes(builtins::successor(), 3), [0, 1, 2, 3]);
        assert_eq!(sizes(Signature::powerset(), 4), [0, 1, 2, 4, 16]);
    }

    #[test]
    fn cherry_does_not_converge() {
        let cd = build_chain(&builtins::cherry(), 5, &lim()).unwrap();
        let rep = analyze_chain(&cd, Some(3), &lim()).unwrap();
        assert!(rep.all_recursive() && rep.all_injective() && rep.terms_match());
        assert_eq!(rep.converged_at, None);
        assert!(rep.stages.iter().all(|s| s.missing_from_truncation.unwrap_or(0) == 0));
    }

    #[test]
    fn constants_converge_at_one() {
        let cd = build_chain(&builtins::constants(3), 3, &lim()).unwrap();
        let rep = analyze_chain(&cd, Some(2), &lim()).unwrap();
        assert_eq!(rep.converged_at, Some(1));
        assert!(rep.terms_match());
        assert_eq!(rep.initial.unwrap().carrier().len(), 3);
    }

    #[test]
    fn empty_signature_converges_at_zero() {
        let cd = build_chain(&builtins::empty_signature(), 2, &lim()).unwrap();
        let rep = analyze_chain(&cd, None, &lim()).unwrap();
        assert_eq!(rep.converged_at, Some(0));
        assert!(rep.initial.unwrap().carrier().is_empty());
    }

    #[test]
    fn stage_cap() {
        let err = build_chain(&builtins::cherry(), 6, &Limits { cap: 1000 }).unwrap_err();
        assert!(matches!(err, crate::Error::SizeCapExceeded { .. }));
    }
}
