use unchained::builtins;
use unchained::finset::compose;
use unchained::{FinFn, FinSet, Limits, Signature};

fn maps(dom: usize, cod: usize) -> Vec<FinFn> {
    let total = (cod as u32).pow(dom as u32) as usize;
    (0..total)
        .map(|mut code| {
            let t = (0..dom)
                .map(|_| {
                    let d = code % cod;
                    code /= cod;
                    d
                })
                .collect();
            FinFn::from_indices(FinSet::ordinal(dom), FinSet::ordinal(cod), t).unwrap()
        })
        .collect()
}

fn signatures() -> Vec<Signature> {
    vec![
        builtins::cherry(),
        builtins::successor(),
        builtins::constants(2),
        builtins::empty_signature(),
        builtins::labelled_cherry(),
        Signature::powerset(),
    ]
}

#[test]
fn identities_are_preserved() {
    let lim = Limits::default();
    for sig in signatures() {
        for n in 0..=4 {
            let id = FinFn::identity(&FinSet::ordinal(n));
            let fid = sig.apply_fn(&id, &lim).unwrap();
            assert_eq!(fid, FinFn::identity(fid.dom()), "{sig:?} on {n}");
        }
    }
}

#[test]
fn composition_is_preserved() {
    let lim = Limits::default();
    for sig in signatures() {
        for a in 0..=3 {
            for b in 1..=3 {
                for c in 1..=3 {
                    for f in maps(a, b) {
                        let ff = sig.apply_fn(&f, &lim).unwrap();
                        for g in maps(b, c) {
                            let fg = sig.apply_fn(&g, &lim).unwrap();
                            let fgf = sig.apply_fn(&compose(&g, &f).unwrap(), &lim).unwrap();
                            assert_eq!(fgf, compose(&fg, &ff).unwrap(), "{sig:?}: {f:?} then {g:?}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn encode_inverts_decode() {
    let lim = Limits::default();
    for sig in signatures() {
        for n in 0..=4 {
            let fx = sig.apply_obj(&FinSet::ordinal(n), &lim).unwrap();
            assert_eq!(fx.len() as u128, sig.image_size(n));
            for i in 0..fx.len() {
                assert_eq!(fx.encode(&fx.decode(i)).unwrap(), i);
                assert_eq!(fx.index_of_felem(&fx.felem(i)).unwrap(), i);
            }
        }
    }
}
