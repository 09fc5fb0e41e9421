//! Finitary set functors: polynomial functors presented by a signature of
//! operation symbols, and the finite powerset functor.
//!
//! Applying a functor to a set materializes every element of `FX` with a
//! canonical name: `op` for constants, `op(a,b,…)` otherwise, and `{a,b,…}`
//! for subsets (members in the order of `X`). Elements of `FX` are listed
//! operation by operation, arguments in lexicographic index order; subsets are
//! listed by their bitmask.

use std::fmt;
use std::sync::Arc;

use crate::error::{pow_saturating, Error, Limits, Result};
use crate::finset::{Elem, FinFn, FinSet};

/// An operation symbol with its arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpSym {
    pub name: String,
    pub arity: usize,
}

impl OpSym {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        OpSym { name: name.into(), arity }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctorKind {
    Polynomial,
    Powerset,
}

/// A functor presentation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    kind: FunctorKind,
    ops: Arc<[OpSym]>,
}

impl Signature {
    /// `FX = Σ_op X^arity(op)`. Operation names must be unique and free of
    /// the characters `(),{}`.
    pub fn polynomial(ops: impl IntoIterator<Item = OpSym>) -> Result<Self> {
        let ops: Vec<OpSym> = ops.into_iter().collect();
        for (i, op) in ops.iter().enumerate() {
            if op.name.is_empty() || op.name.contains(['(', ')', ',', '{', '}']) {
                return Err(Error::InvalidSignature(format!("bad operation name `{}`", op.name)));
            }
            if ops[..i].iter().any(|o| o.name == op.name) {
                return Err(Error::InvalidSignature(format!("duplicate operation `{}`", op.name)));
            }
        }
        Ok(Signature { kind: FunctorKind::Polynomial, ops: ops.into() })
    }

    pub fn powerset() -> Self {
        Signature { kind: FunctorKind::Powerset, ops: Arc::from(Vec::new()) }
    }

    pub fn kind(&self) -> FunctorKind {
        self.kind
    }

    pub fn ops(&self) -> &[OpSym] {
        &self.ops
    }

    pub fn is_powerset(&self) -> bool {
        self.kind == FunctorKind::Powerset
    }

    pub fn op_index(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }

    /// `|FX|` for `|X| = n`, saturating.
    pub fn image_size(&self, n: usize) -> u128 {
        match self.kind {
            FunctorKind::Powerset => {
                if n >= 127 {
                    u128::MAX
                } else {
                    1u128 << n
                }
            }
            FunctorKind::Polynomial => self
                .ops
                .iter()
                .fold(0u128, |acc, op| acc.saturating_add(pow_saturating(n, op.arity))),
        }
    }

    /// Object action: the set `FX` with its decoder.
    pub fn apply_obj(&self, x: &FinSet, limits: &Limits) -> Result<FObj> {
        FObj::new(self, x, limits)
    }

    /// Morphism action `Fh: FX → FY`.
    pub fn apply_fn(&self, h: &FinFn, limits: &Limits) -> Result<FinFn> {
        let fx = self.apply_obj(h.dom(), limits)?;
        let fy = self.apply_obj(h.cod(), limits)?;
        fx.map_to(&fy, h)
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FunctorKind::Powerset => f.write_str("P"),
            FunctorKind::Polynomial => {
                let parts: Vec<String> =
                    self.ops.iter().map(|o| format!("{}/{}", o.name, o.arity)).collect();
                write!(f, "Poly[{}]", parts.join(", "))
            }
        }
    }
}

/// An element of `FX` in index form, relative to the base set `X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    Op { op: usize, args: Vec<usize> },
    /// Member indices, strictly increasing.
    Subset(Vec<usize>),
}

impl Shape {
    /// Base-set indices occurring in the shape, in order (with repeats for
    /// polynomial arguments).
    pub fn children(&self) -> &[usize] {
        match self {
            Shape::Op { args, .. } => args,
            Shape::Subset(m) => m,
        }
    }
}

/// An element of `FX` named by the elements of `X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FElem {
    Op { op: String, args: Vec<Elem> },
    Subset(Vec<Elem>),
}

impl FElem {
    pub fn op<I, E>(op: &str, args: I) -> Self
    where
        I: IntoIterator<Item = E>,
        E: Into<Elem>,
    {
        FElem::Op { op: op.to_string(), args: args.into_iter().map(Into::into).collect() }
    }

    pub fn constant(op: &str) -> Self {
        FElem::Op { op: op.to_string(), args: Vec::new() }
    }

    pub fn subset<I, E>(members: I) -> Self
    where
        I: IntoIterator<Item = E>,
        E: Into<Elem>,
    {
        FElem::Subset(members.into_iter().map(Into::into).collect())
    }
}

/// The set `FX`, materialized, together with its encoding.
#[derive(Clone)]
pub struct FObj {
    sig: Signature,
    base: FinSet,
    set: FinSet,
    /// Start index of each operation's block (polynomial case).
    offsets: Vec<usize>,
}

impl FObj {
    pub fn new(sig: &Signature, x: &FinSet, limits: &Limits) -> Result<Self> {
        let size = sig.image_size(x.len());
        limits.check("functor application", size)?;
        let n = x.len();
        let mut offsets = Vec::with_capacity(sig.ops.len());
        let mut names = Vec::with_capacity(size as usize);
        match sig.kind {
            FunctorKind::Polynomial => {
                for op in sig.ops.iter() {
                    offsets.push(names.len());
                    let count = n.pow(op.arity as u32);
                    let mut digits = vec![0usize; op.arity];
                    for _ in 0..count {
                        names.push(Elem::from(op_name(&op.name, digits.iter().map(|&d| x.elem(d)))));
                        increment(&mut digits, n);
                    }
                }
            }
            FunctorKind::Powerset => {
                for mask in 0..(size as usize) {
                    names.push(Elem::from(subset_name(mask_members(mask).map(|d| x.elem(d)))));
                }
            }
        }
        Ok(FObj { sig: sig.clone(), base: x.clone(), set: FinSet::from_distinct(names), offsets })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    /// The set `X` this object was applied to.
    pub fn base(&self) -> &FinSet {
        &self.base
    }

    /// The set `FX`.
    pub fn set(&self) -> &FinSet {
        &self.set
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn decode(&self, i: usize) -> Shape {
        match self.sig.kind {
            FunctorKind::Powerset => Shape::Subset(mask_members(i).collect()),
            FunctorKind::Polynomial => {
                let op = self.offsets.partition_point(|&o| o <= i) - 1;
                let arity = self.sig.ops[op].arity;
                let n = self.base.len();
                let mut rest = i - self.offsets[op];
                let mut args = vec![0; arity];
                for slot in args.iter_mut().rev() {
                    *slot = rest % n;
                    rest /= n;
                }
                Shape::Op { op, args }
            }
        }
    }

    /// Index of a shape in `FX`.
    pub fn encode(&self, shape: &Shape) -> Result<usize> {
        let n = self.base.len();
        match (self.sig.kind, shape) {
            (FunctorKind::Polynomial, Shape::Op { op, args }) => {
                let sym = self
                    .sig
                    .ops
                    .get(*op)
                    .ok_or_else(|| Error::InvalidSignature(format!("operation index {op}")))?;
                if sym.arity != args.len() {
                    return Err(Error::InvalidSignature(format!(
                        "`{}` has arity {}, got {} arguments",
                        sym.name,
                        sym.arity,
                        args.len()
                    )));
                }
                if let Some(&a) = args.iter().find(|&&a| a >= n) {
                    return Err(Error::ElementNotFound { elem: a.to_string(), context: "the base set".into() });
                }
                Ok(self.encode_op(*op, args))
            }
            (FunctorKind::Powerset, Shape::Subset(members)) => {
                let mut mask = 0usize;
                for &m in members {
                    if m >= n {
                        return Err(Error::ElementNotFound { elem: m.to_string(), context: "the base set".into() });
                    }
                    mask |= 1 << m;
                }
                Ok(mask)
            }
            _ => Err(Error::SignatureMismatch("shape kind does not match the functor".into())),
        }
    }

    pub(crate) fn encode_op(&self, op: usize, args: &[usize]) -> usize {
        let n = self.base.len();
        self.offsets[op] + args.iter().fold(0, |acc, &a| acc * n + a)
    }

    /// Named form of the element at index `i`.
    pub fn felem(&self, i: usize) -> FElem {
        match self.decode(i) {
            Shape::Op { op, args } => FElem::Op {
                op: self.sig.ops[op].name.clone(),
                args: args.iter().map(|&a| self.base.elem(a).clone()).collect(),
            },
            Shape::Subset(m) => FElem::Subset(m.iter().map(|&a| self.base.elem(a).clone()).collect()),
        }
    }

    /// Index of a named element of `FX`.
    pub fn index_of_felem(&self, fe: &FElem) -> Result<usize> {
        let shape = match fe {
            FElem::Op { op, args } => {
                let k = self.sig.op_index(op).ok_or_else(|| Error::ElementNotFound {
                    elem: op.clone(),
                    context: "the signature".into(),
                })?;
                let args = args.iter().map(|a| self.base.require(a)).collect::<Result<Vec<_>>>()?;
                Shape::Op { op: k, args }
            }
            FElem::Subset(members) => {
                let mut m = members.iter().map(|a| self.base.require(a)).collect::<Result<Vec<_>>>()?;
                m.sort_unstable();
                m.dedup();
                Shape::Subset(m)
            }
        };
        self.encode(&shape)
    }

    /// Base indices occurring in the element at index `i`.
    pub fn children(&self, i: usize) -> Vec<usize> {
        match self.decode(i) {
            Shape::Op { args, .. } => args,
            Shape::Subset(m) => m,
        }
    }

    /// Image of element `i` under `F(h)` where `h` is given as an index
    /// table from this base into `target`'s base.
    pub fn fmap_index(&self, target: &FObj, h: &[usize], i: usize) -> usize {
        match self.decode(i) {
            Shape::Op { op, args } => {
                let mapped: Vec<usize> = args.iter().map(|&a| h[a]).collect();
                target.encode_op(op, &mapped)
            }
            Shape::Subset(m) => m.iter().fold(0usize, |mask, &a| mask | (1 << h[a])),
        }
    }

    /// `F(h): FX → FY` for `h: X → Y`, where `target = FY`.
    pub fn map_to(&self, target: &FObj, h: &FinFn) -> Result<FinFn> {
        if self.sig != target.sig {
            return Err(Error::SignatureMismatch("functor images of different signatures".into()));
        }
        if *h.dom() != self.base || *h.cod() != target.base {
            return Err(Error::DomainMismatch("function endpoints do not match the functor images".into()));
        }
        let map = (0..self.len()).map(|i| self.fmap_index(target, h.indices(), i)).collect();
        Ok(FinFn::from_indices_unchecked(self.set.clone(), target.set.clone(), map))
    }
}

impl fmt::Debug for FObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({:?}) = {:?}", self.sig, self.base, self.set)
    }
}

fn op_name<'a>(op: &str, args: impl Iterator<Item = &'a Elem>) -> String {
    let args: Vec<&str> = args.map(Elem::as_str).collect();
    if args.is_empty() {
        op.to_string()
    } else {
        format!("{op}({})", args.join(","))
    }
}

fn subset_name<'a>(members: impl Iterator<Item = &'a Elem>) -> String {
    let m: Vec<&str> = members.map(Elem::as_str).collect();
    format!("{{{}}}", m.join(","))
}

fn mask_members(mask: usize) -> impl Iterator<Item = usize> {
    (0..usize::BITS as usize).filter(move |&b| mask >> b & 1 == 1)
}

/// Odometer increment, last digit fastest.
pub(crate) fn increment(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn cherry_sizes() {
        let f = builtins::cherry();
        assert_eq!(f.apply_obj(&FinSet::empty(), &lim()).unwrap().len(), 1);
        let fx = f.apply_obj(&FinSet::ordinal(2), &lim()).unwrap();
        assert_eq!(fx.len(), 5);
        let names: Vec<&str> = fx.set().iter().map(Elem::as_str).collect();
        assert_eq!(names, ["leaf", "node(0,0)", "node(0,1)", "node(1,0)", "node(1,1)"]);
    }

    #[test]
    fn powerset_sizes() {
        let x = FinSet::new(["a", "b", "c"]).unwrap();
        let px = Signature::powerset().apply_obj(&x, &lim()).unwrap();
        assert_eq!(px.len(), 8);
        assert_eq!(px.set().elem(0).as_str(), "{}");
        assert_eq!(px.set().elem(5).as_str(), "{a,c}");
    }

    #[test]
    fn cap_enforced() {
        let f = builtins::cherry();
        let err = f.apply_obj(&FinSet::ordinal(10), &Limits::new(50)).unwrap_err();
        assert!(matches!(err, Error::SizeCapExceeded { size: 101, .. }));
    }

    #[test]
    fn decode_encode_roundtrip_with_empty_blocks() {
        // A nullary-free signature over the empty set has empty blocks.
        let f = Signature::polynomial([OpSym::new("u", 1), OpSym::new("k", 0), OpSym::new("b", 2)]).unwrap();
        for n in 0..4 {
            let fx = f.apply_obj(&FinSet::ordinal(n), &lim()).unwrap();
            assert_eq!(fx.len() as u128, f.image_size(n));
            for i in 0..fx.len() {
                assert_eq!(fx.encode(&fx.decode(i)).unwrap(), i);
                assert_eq!(fx.index_of_felem(&fx.felem(i)).unwrap(), i);
            }
        }
    }

    #[test]
    fn apply_fn_identity_and_pointwise() {
        let f = builtins::cherry();
        let x = FinSet::new(["a", "b"]).unwrap();
        let id = FinFn::identity(&x);
        let fid = f.apply_fn(&id, &lim()).unwrap();
        assert_eq!(fid, FinFn::identity(fid.dom()));

        let h = FinFn::from_pairs(x.clone(), x.clone(), [("a", "a"), ("b", "a")]).unwrap();
        let fh = f.apply_fn(&h, &lim()).unwrap();
        let fx = f.apply_obj(&x, &lim()).unwrap();
        let i = fx.index_of_felem(&FElem::op("node", ["a", "b"])).unwrap();
        assert_eq!(fh.cod().elem(fh.at(i)).as_str(), "node(a,a)");
    }

    #[test]
    fn powerset_direct_image_shrinks() {
        let x = FinSet::new(["a", "b"]).unwrap();
        let h = FinFn::from_pairs(x.clone(), x.clone(), [("a", "b"), ("b", "b")]).unwrap();
        let fh = Signature::powerset().apply_fn(&h, &lim()).unwrap();
        let i = fh.dom().index_of_str("{a,b}").unwrap();
        assert_eq!(fh.cod().elem(fh.at(i)).as_str(), "{b}");
    }
}
