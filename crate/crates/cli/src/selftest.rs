//! A fast invariant suite for `unchained selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unchained::builtins;
use unchained::chain::{analyze_chain, build_chain};
use unchained::coalgebra::{brute_force_solutions, hylo, is_recursive, iterate, verify_morphism, MorphismKind};
use unchained::construction::{build_truncation, check_universal_fold, main_theorem_check, oracle_partition, FinrecOptions};
use unchained::finset::compose;
use unchained::iterate::{
    compare_with_fa, enumerate_e, iterate_colimit_check, lift_cocone_morphism_check, slice_of_fa, CoconeChoice,
    ComparisonKind, EContext,
};
use unchained::{Algebra, Coalgebra, FinFn, FinSet, Limits, Shape, Signature};

pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(&mut ChaCha8Rng, &Limits) -> Result<String, String>;

pub fn run_all(seed: u64, limits: &Limits) -> Vec<CheckResult> {
    let checks: [(&'static str, Check); 10] = [
        ("functor laws", functor_laws),
        ("height fold", height_fold),
        ("quicksort", quicksort),
        ("initial chain", initial_chain),
        ("unfolding oracle", unfolding_oracle),
        ("universal fold", universal_fold),
        ("recursion decides uniqueness", random_uniqueness),
        ("iterate keeps recursion", random_iterate),
        ("constants end to end", constants_end_to_end),
        ("cocone lifting", cocone_lifting),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    checks
        .iter()
        .map(|(name, check)| {
            let res = check(&mut rng, limits);
            CheckResult { name, passed: res.is_ok(), detail: res.unwrap_or_else(|e| e) }
        })
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn s<E: ToString>(e: E) -> String {
    e.to_string()
}

fn random_map(rng: &mut ChaCha8Rng, dom: usize, cod: usize) -> FinFn {
    let t = (0..dom).map(|_| rng.gen_range(0..cod)).collect();
    FinFn::from_indices(FinSet::ordinal(dom), FinSet::ordinal(cod), t).expect("table in range")
}

fn functor_laws(rng: &mut ChaCha8Rng, limits: &Limits) -> Result<String, String> {
    let sigs = [builtins::cherry(), builtins::successor(), Signature::powerset(), builtins::constants(2)];
    let mut checked = 0;
    for sig in &sigs {
        for _ in 0..25 {
            let (a, b, c) = (rng.gen_range(0..4), rng.gen_range(1..4), rng.gen_range(1..4));
            let f = random_map(rng, a, b);
            let g = random_map(rng, b, c);
            let lhs = sig.apply_fn(&compose(&g, &f).map_err(s)?, limits).map_err(s)?;
            let rhs = compose(&sig.apply_fn(&g, limits).map_err(s)?, &sig.apply_fn(&f, limits).map_err(s)?).map_err(s)?;
            ensure(lhs == rhs, || format!("{sig:?} does not preserve composition"))?;
            let id = sig.apply_fn(&FinFn::identity(&FinSet::ordinal(a)), limits).map_err(s)?;
            ensure(id == FinFn::identity(id.dom()), || format!("{sig:?} does not preserve identities"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} random composable pairs"))
}

fn height_fold(_: &mut ChaCha8Rng, limits: &Limits) -> Result<String, String> {
    let c = builtins::fig2_coalgebra();
    let h = hylo(&c, &builtins::height_algebra(4, limits).map_err(s)?).map_err(s)?;
    let got: Vec<String> = h.pairs().map(|(x, y)| format!("{x}:{y}")).collect();
    ensure(got == ["x:0", "y:0", "z:0", "u:1", "w:1", "v:2"], || format!("got {got:?}"))?;
    Ok("v ↦ 2".into())
}

fn quicksort(rng: &mut ChaCha8Rng, limits: &Limits) -> Result<String, String> {
    let letters = ["1", "2", "3"];
    let c = builtins::quicksort_coalgebra(&letters, 4, limits).map_err(s)?;
    let a = builtins::quicksort_algebra(&letters, 4, limits).map_err(s)?;
    let h = hylo(&c, &a).map_err(s)?;
    for _ in 0..50 {
        let len = rng.gen_range(0..=4);
        let mut w: Vec<&str> = (0..len).map(|_| letters[rng.gen_range(0..3)]).collect();
        let key = builtins::list_name(&w);
        w.sort_unstable();
        let got = h.apply(&key.as_str().into()).map(|e| e.to_string());
        ensure(got.as_deref() == Some(builtins::list_name(&w).as_str()), || format!("{key} sorted to {got:?}"))?;
    }
    Ok("50 random lists".into())
}

fn initial_chain(_: &mut ChaCha8Rng, limits: &Limits) -> Result<String, String> {
    let cd = build_chain(&builtins::cherry(), 4, limits).map_err(s)?;
    let mut want = vec![0];
    for k in 0..4 {
        want.push(1 + want[k] * want[k]);
    }
    ensure(cd.sizes() == want, || format!("sizes {:?}", cd.sizes()))?;
    let rep = analyze_chain(&cd, Some(2), limits).map_err(s)?;
    ensure(rep.all_recursive() && rep.all_injective() && rep.terms_match(), || "stage check failed".into())?;
    Ok(format!("sizes {want:?}"))
}

fn unfolding_oracle(_: &mut ChaCha8Rng, limits: &Limits) -> Result<String, String> {
    let mut classes = Vec::new();
    for sig in [builtins::successor(), builtins::cherry()] {
        for n in 1..=3 {
            let t = build_truncation(&sig, n, FinrecOptions::default(), limits).map_err(s)?;
            classes.push(oracle_partition(&t).map_err(s)?.classes);
            ensure(t.alpha().is_injective(), || format!("alpha not injective for {sig:?} at {n}"))?;
        }
    }
    Ok(format!("classes {classes:?}"))
}

fn universal_fold(_: &mut ChaCha8Rng, limits: &Limits) -> Result<String, String> {
    let succ = build_truncation(&builtins::successor(), 4, FinrecOptions::default(), limits).map_err(s)?;
    let cherry = build_truncation(&builtins::cherry(), 3, FinrecOptions::default(), limits).map_err(s)?;
    let a = check_universal_fold(&succ, &builtins::parity_algebra(limits).map_err(s)?).map_err(s)?;
    let b = check_universal_fold(&cherry, &builtins::height_algebra(3, limits).map_err(s)?).map_err(s)?;
    Ok(format!("{} states", a + b))
}

fn random_cherry(rng: &mut ChaCha8Rng, n: usize, acyclic: bool, limits: &Limits) -> Result<Coalgebra, String> {
    let shapes: Vec<Shape> = (0..n)
        .map(|x| {
            let bound = if acyclic { x } else { n };
            if bound == 0 || rng.gen_bool(0.3) {
                Shape::Op { op: 0, args: vec![] }
            } else {
                Shape::Op { op: 1, args: vec![rng.gen_range(0..bound), rng.gen_range(0..bound)] }
            }
        })
        .collect();
    Coalgebra::from_shapes(&builtins::cherry(), FinSet::ordinal(n), &shapes, limits).map_err(s)
}

fn random_uniqueness(rng: &mut ChaCha8Rng, limits: &Limits) -> Result<String, String> {
    let sig = builtins::cherry();
    let mut algebras = Vec::new();
    for k in 1..=2 {
        let image = sig.apply_obj(&FinSet::ordinal(k), limits).map_err(s)?;
        for _ in 0..8 {
            let f = random_map(rng, image.len(), k);
            let f = FinFn::from_indices(image.set().clone(), FinSet::ordinal(k), f.indices().to_vec()).map_err(s)?;
            algebras.push(Algebra::from_structure(image.clone(), f).map_err(s)?);
        }
    }
    let mut cyclic = 0;
    for _ in 0..40 {
        let n = rng.gen_range(0..=3);
        let c = random_cherry(rng, n, false, limits)?;
        let mut unique = true;
        for a in &algebras {
            let sols = brute_force_solutions(&c, a, limits).map_err(s)?;
            unique &= sols.len() == 1;
            if is_recursive(&c) {
                let h = hylo(&c, a).map_err(s)?;
                ensure(sols == [h.clone()], || "hylo differs from the unique solution".into())?;
                ensure(verify_morphism(MorphismKind::CoalgebraToAlgebra(&c, a), &h).map_err(s)?, || "hylo is not a morphism".into())?;
            }
        }
        if is_recursive(&c) {
            ensure(unique, || format!("recursive {:?} lacks unique solutions", c.table()))?;
        } else {
            cyclic += 1;
        }
    }
    Ok(format!("40 random coalgebras, {cyclic} cyclic"))
}

fn random_iterate(rng: &mut ChaCha8Rng, limits: &Limits) -> Result<String, String> {
    for _ in 0..30 {
        let n = rng.gen_range(0..=4);
        let c = random_cherry(rng, n, true, limits)?;
        ensure(is_recursive(&iterate(&c, limits).map_err(s)?), || format!("iterate of {:?} is not recursive", c.table()))?;
    }
    Ok("30 random recursive coalgebras".into())
}

fn constants_end_to_end(_: &mut ChaCha8Rng, limits: &Limits) -> Result<String, String> {
    let v = main_theorem_check(&builtins::constants(3), 2, 1, limits).map_err(s)?;
    let unchained::construction::MainVerdict::Initial { initial, .. } = v else {
        return Err("no initial algebra".into());
    };
    ensure(initial.carrier().len() == 3, || format!("size {}", initial.carrier().len()))?;
    let t = build_truncation(&builtins::empty_signature(), 2, FinrecOptions::default(), limits).map_err(s)?;
    let e = iterate_colimit_check(&t, 1, limits).map_err(s)?;
    ensure(e.kind() == ComparisonKind::Bijective && e.fa_size() == 0, || "empty signature comparison".into())?;
    Ok("initial algebra of size 3".into())
}

fn cocone_lifting(rng: &mut ChaCha8Rng, limits: &Limits) -> Result<String, String> {
    let t = build_truncation(&builtins::constants(2), 2, FinrecOptions::default(), limits).map_err(s)?;
    let ctx = EContext::new(&t, limits).map_err(s)?;
    let slice = slice_of_fa(&t, 1, limits).map_err(s)?;
    let mut ed = enumerate_e(&ctx, &slice, true, limits).map_err(s)?;
    let verdict = compare_with_fa(&ctx, &ed, limits).map_err(s)?;
    let v0 = verdict.comparison.try_inverse().ok_or("comparison is not bijective")?;
    let fa = v0.dom().clone();
    let apex = v0.cod().clone();
    for n in 0..20 {
        let v = if n == 0 {
            v0.clone()
        } else {
            let t = (0..fa.len()).map(|_| rng.gen_range(0..apex.len())).collect();
            FinFn::from_indices(fa.clone(), apex.clone(), t).map_err(s)?
        };
        let rep = lift_cocone_morphism_check(&ctx, &mut ed, &CoconeChoice::Colimit, &v, limits).map_err(s)?;
        ensure(rep.agree(), || format!("map #{n}: slice {} vs E {}", rep.slice_ok, rep.e_ok))?;
        ensure(rep.slice_ok == (v == v0), || format!("map #{n}: unexpected verdict"))?;
    }
    Ok("20 maps".into())
}
