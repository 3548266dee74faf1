use std::sync::Arc;
use std::time::Instant;

use qtrunc_core::cartan::CartanDatum;
use qtrunc_core::lweight::{parse_lweight, LWeight};
use qtrunc_core::series_engine::{extract_polynomial, h_eigenvalues, Engine, Sign, Which};
use qtrunc_exact::{parse_field, Direction, ParamDecls, ParamField, PowerSeries};

fn cd(label: &str) -> Arc<CartanDatum> {
    Arc::new(CartanDatum::from_label(label).unwrap())
}

fn lw(c: &Arc<CartanDatum>, s: &str) -> LWeight {
    parse_lweight(s, c, &ParamDecls::new()).unwrap()
}

fn f(s: &str) -> ParamField {
    parse_field(s, &ParamDecls::new()).unwrap()
}

fn exp_of_log(dir: Direction, log: Vec<ParamField>) -> PowerSeries {
    let mut c = vec![ParamField::zero()];
    c.extend(log);
    PowerSeries::new(dir, 0, c).exp().unwrap()
}

#[test]
fn h_eigenvalue_examples() {
    let a1 = cd("A1");
    let qq = &f("q") - &f("q^-1");
    let inv = lw(&a1, "Psi[1,a]^-1");
    let h = h_eigenvalues(&inv, 0, Sign::Plus, 6);
    for s in 1..=6i64 {
        let want = f("a").pow(s).unwrap().checked_div(&(&ParamField::from_int(s) * &qq)).unwrap();
        assert_eq!(h.value(s as usize), want);
    }
    let pos = h_eigenvalues(&lw(&a1, "Psi[1,a]"), 0, Sign::Plus, 6);
    for s in 1..=6 {
        assert_eq!(pos.value(s), -&h.value(s));
    }
    let c = h_eigenvalues(&lw(&a1, "const(b)"), 0, Sign::Plus, 6);
    assert!(c.scaled().iter().all(|x| x.is_zero()));
}

#[test]
fn a1_a_series_closed_form() {
    let a1 = cd("A1");
    let n = 8;
    let e = Engine::new(&a1, n);
    let got = e.at_series(&lw(&a1, "Psi[1,a]^-1"), 0, Which::A, Sign::Plus);
    let log = (1..=n as i64)
        .map(|s| {
            let num = &f("a").pow(s).unwrap() * &f("q").pow(-s).unwrap();
            let den = &ParamField::from_int(-s) * &ParamField::qint(2, s);
            // the kernel of A1 at q^s is q^-s/(q^s + q^-s)
            num.checked_div(&den).unwrap()
        })
        .collect();
    assert_eq!(got, exp_of_log(Direction::AtZero, log));
}

#[test]
fn constant_weights_give_trivial_series() {
    let a2 = cd("A2");
    let e = Engine::new(&a2, 6);
    let c = lw(&a2, "const(b,q^2)");
    for i in 0..2 {
        for which in [Which::A, Which::T] {
            for sign in Sign::both() {
                assert!(e.at_series(&c, i, which, sign).is_one());
            }
        }
        assert!(e.fundamental_t(&LWeight::unit(&a2), i, Sign::Plus).unwrap().is_one());
        assert!(e.script_a(&c, &LWeight::unit(&a2), i, Sign::Plus).unwrap().is_one());
    }
    assert!(e.verify_gklo(&c).pass);
    assert!(e.verify_lemma(&c).unwrap().pass);
}

#[test]
fn a1_fundamental_t_matches_star() {
    let a1 = cd("A1");
    let e = Engine::new(&a1, 10);
    let p = lw(&a1, "Psi[1,c]");
    let tp = e.fundamental_t(&p, 0, Sign::Plus).unwrap();
    let star = e.star_sharp(&p, Sign::Plus).unwrap();
    assert!(tp.mul(&star[0]).unwrap().is_one());
    let tm = e.fundamental_t(&p, 0, Sign::Minus).unwrap();
    let star_shift = e.star_sharp(&lw(&a1, "Psi[1,c*q^-2]"), Sign::Plus).unwrap();
    assert_eq!(tm, star_shift[0]);
}

#[test]
fn a1_star_closed_form() {
    let a1 = cd("A1");
    let n = 10;
    let e = Engine::new(&a1, n);
    let star = e.star_sharp(&lw(&a1, "Psi[1,c]"), Sign::Plus).unwrap();
    let log = (1..=n as i64)
        .map(|s| {
            let num = -&(&f("c").pow(s).unwrap() * &f("q").pow(-s).unwrap());
            num.checked_div(&(&ParamField::from_int(s) * &ParamField::qint(2, s))).unwrap()
        })
        .collect();
    assert_eq!(star[0], exp_of_log(Direction::AtZero, log));
    let unit = e.star_sharp(&lw(&a1, "const(5)"), Sign::Plus).unwrap();
    assert!(unit[0].is_one());
}

#[test]
fn script_a_sl2_top_row_is_linear_at_order_30() {
    let a1 = cd("A1");
    let e = Engine::new(&a1, 30);
    let p = e.script_a(&lw(&a1, "Psi[1,a]^-1"), &lw(&a1, "Psi[1,a*q^2]"), 0, Sign::Plus).unwrap();
    assert_eq!(p.order(), 30);
    assert_eq!(p, PowerSeries::from_polynomial(Direction::AtZero, &[f("1"), f("-a")], 30));
}

#[test]
fn script_a_a2_negative_prefundamental_is_linear() {
    let a2 = cd("A2");
    let e = Engine::new(&a2, 12);
    let ff = lw(&a2, "Psi[1,a]^-1");
    let a = lw(&a2, "Psi[2,a*q^3]");
    for i in 0..2 {
        let p = e.script_a(&ff, &a, i, Sign::Plus).unwrap();
        let x = extract_polynomial(&p, Some(1));
        assert_eq!(x.matches_expected, Some(true), "node {i}: {p}");
    }
}

#[test]
fn gklo_examples() {
    let a1 = cd("A1");
    assert!(Engine::new(&a1, 12).verify_gklo(&lw(&a1, "Psi[1,a]^-1")).pass);
    let g2 = cd("G2");
    let t = Instant::now();
    let rep = Engine::new(&g2, 20).verify_gklo(&lw(&g2, "Psi[1,q] * Psi[2,q^2]^-1"));
    assert!(rep.pass, "{rep:?}");
    eprintln!("G2 gklo N=20: {:?}", t.elapsed());
}

#[test]
fn gklo_detects_a_wrong_weight() {
    // A-series of one weight against the realization of another
    let a1 = cd("A1");
    let e = Engine::new(&a1, 6);
    let ff = lw(&a1, "Psi[1,a]^-1");
    let aa = e.at_log(&ff, 0, Which::A, Sign::Plus);
    let rhs = aa.mul(&aa.rescale(&f("q^2"))).inv().exp();
    let wrong = lw(&a1, "Psi[1,a+1]^-1").normalized_series(0, Direction::AtZero, 6);
    assert!(!rhs.agrees_with(&wrong));
    let right = ff.normalized_series(0, Direction::AtZero, 6);
    assert!(rhs.agrees_with(&right));
}

#[test]
fn lemma_examples() {
    let a1 = cd("A1");
    assert!(Engine::new(&a1, 12).verify_lemma(&lw(&a1, "Psi[1,c]")).unwrap().pass);
    let b2 = cd("B2");
    let rep = Engine::new(&b2, 20).verify_lemma(&lw(&b2, "Psi[1,q] * Psi[2,q^4]")).unwrap();
    assert!(rep.pass, "{rep:?}");
    assert!(Engine::new(&a1, 4).verify_lemma(&lw(&a1, "Psi[1,c]^-1")).is_err());
}

#[test]
fn at_ratio_examples() {
    for (t, w) in [("A1", "Psi[1,a]^-1"), ("A2", "Psi[1,a] * Psi[2,q]^-1"), ("B2", "Psi[2,q^3]"), ("G2", "Psi[1,q]^-1 * Psi[2,b]")] {
        let c = cd(t);
        let rep = Engine::new(&c, 10).verify_at_ratio(&lw(&c, w));
        assert!(rep.pass, "{rep:?}");
    }
}

#[test]
fn extract_polynomial_examples() {
    let lin = PowerSeries::from_polynomial(Direction::AtZero, &[f("1"), f("-a")], 6);
    let x = extract_polynomial(&lin, Some(1));
    assert!(x.is_polynomial_to_order);
    assert_eq!(x.degree, Some(1));
    assert_eq!(x.dominant, Some(f("-a")));
    assert_eq!(x.matches_expected, Some(true));
    let one = extract_polynomial(&PowerSeries::one(Direction::AtZero, 6), None);
    assert_eq!((one.degree, one.dominant), (Some(0), Some(f("1"))));
    let ez = PowerSeries::from_polynomial(Direction::AtZero, &[f("0"), f("1")], 6).exp().unwrap();
    assert!(!extract_polynomial(&ez, None).is_polynomial_to_order);
    assert_eq!(extract_polynomial(&lin, Some(2)).matches_expected, Some(false));
}
