use std::sync::Arc;

use proptest::prelude::*;
use qtrunc_core::cartan::CartanDatum;
use qtrunc_core::lweight::LWeight;
use qtrunc_core::series_engine::{Engine, Sign, Which};
use qtrunc_exact::{Direction, ParamField};

const TYPES: [&str; 4] = ["A1", "A2", "B2", "G2"];
const N: usize = 6;

fn cd(k: usize) -> Arc<CartanDatum> {
    Arc::new(CartanDatum::from_label(TYPES[k]).unwrap())
}

fn spectral() -> impl Strategy<Value = ParamField> {
    (0usize..3, -2i64..=4).prop_map(|(p, k)| {
        let base = match p {
            0 => ParamField::one(),
            1 => ParamField::param("a"),
            _ => -&ParamField::param("b"),
        };
        &base * &ParamField::q_pow(k)
    })
}

/// Up to three factors with exponents in {-2,-1,1,2}, or nonnegative when `poly`.
fn lweight(c: Arc<CartanDatum>, poly: bool) -> impl Strategy<Value = LWeight> {
    let r = c.rank();
    let exps: Vec<i64> = if poly { vec![1, 2] } else { vec![-2, -1, 1, 2] };
    prop::collection::vec((0..r, spectral(), prop::sample::select(exps)), 0..=3).prop_map(move |fs| {
        fs.into_iter().fold(LWeight::unit(&c), |acc, (i, a, e)| acc.mul(&LWeight::factor(&c, i, a, e).unwrap()).unwrap())
    })
}

fn typed_pair(poly: bool) -> impl Strategy<Value = (LWeight, LWeight)> {
    (0usize..4).prop_flat_map(move |k| (lweight(cd(k), poly), lweight(cd(k), poly)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coweights_add((x, y) in typed_pair(false)) {
        prop_assert_eq!(x.mul(&y).unwrap().coweight(), x.coweight().add(&y.coweight()));
    }

    #[test]
    fn tilde_is_a_homomorphism((x, y) in typed_pair(true)) {
        let lhs = x.mul(&y).unwrap().tilde().unwrap();
        let rhs = x.tilde().unwrap().mul(&y.tilde().unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        let cd = x.cartan().clone();
        let cw = x.coweight();
        let tw = x.tilde().unwrap().coweight();
        for i in 0..cd.rank() {
            prop_assert_eq!(tw.0[i], cw.0[cd.bar(i)]);
        }
    }

    #[test]
    fn realization_is_multiplicative((x, y) in typed_pair(false)) {
        let xy = x.mul(&y).unwrap();
        for i in 0..x.rank() {
            for dir in [Direction::AtZero, Direction::AtInfinity] {
                let p = x.realize_series(i, dir, N).mul(&y.realize_series(i, dir, N)).unwrap();
                let q = xy.realize_series(i, dir, N);
                prop_assert!(p.agrees_with(&q), "node {} {:?}", i, dir);
            }
        }
    }

    #[test]
    fn offset_at_infinity_is_minus_degree((x, _y) in typed_pair(false)) {
        let cw = x.classify().coweight;
        for i in 0..x.rank() {
            let s = x.realize_series(i, Direction::AtInfinity, 3);
            prop_assert_eq!(s.offset(), -cw.0[i]);
            prop_assert_eq!(s.coeffs()[0].clone(), x.leading_at_infinity(i));
        }
    }

    #[test]
    fn star_and_sharp_are_multiplicative((x, y) in typed_pair(true)) {
        let e = Engine::new(x.cartan(), N);
        let xy = x.mul(&y).unwrap();
        for sign in Sign::both() {
            let a = e.star_sharp(&x, sign).unwrap();
            let b = e.star_sharp(&y, sign).unwrap();
            let ab = e.star_sharp(&xy, sign).unwrap();
            for i in 0..x.rank() {
                prop_assert_eq!(&ab[i], &a[i].mul(&b[i]).unwrap());
            }
        }
    }

    #[test]
    fn script_series_are_multiplicative((f, g) in typed_pair(false), (a, b) in typed_pair(true)) {
        prop_assume!(f.cartan().label() == a.cartan().label());
        let e = Engine::new(f.cartan(), N);
        let fg = f.mul(&g).unwrap();
        let ab = a.mul(&b).unwrap();
        for i in 0..f.rank() {
            for sign in Sign::both() {
                let lhs = e.script_a_log(&fg, &ab, i, sign).unwrap();
                let rhs = e.script_a_log(&f, &a, i, sign).unwrap().mul(&e.script_a_log(&g, &b, i, sign).unwrap());
                prop_assert!(lhs.first_difference(&rhs).is_none());
            }
        }
    }

    #[test]
    fn gklo_and_at_ratio_hold((x, _y) in typed_pair(false)) {
        let e = Engine::new(x.cartan(), N);
        let g = e.verify_gklo(&x);
        prop_assert!(g.pass, "{:?}", g);
        let r = e.verify_at_ratio(&x);
        prop_assert!(r.pass, "{:?}", r);
    }

    #[test]
    fn lemma_holds((x, _y) in typed_pair(true)) {
        let e = Engine::new(x.cartan(), N);
        let l = e.verify_lemma(&x).unwrap();
        prop_assert!(l.pass, "{:?}", l);
    }

    #[test]
    fn constants_do_not_move_a_series((x, _y) in typed_pair(false), c in spectral()) {
        let cd = x.cartan().clone();
        let e = Engine::new(&cd, N);
        let k = LWeight::constant(&cd, vec![c; cd.rank()]).unwrap();
        let xc = x.mul(&k).unwrap();
        for i in 0..cd.rank() {
            prop_assert!(e.at_log(&xc, i, Which::A, Sign::Plus).first_difference(&e.at_log(&x, i, Which::A, Sign::Plus)).is_none());
        }
    }
}
