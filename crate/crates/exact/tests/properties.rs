use proptest::prelude::*;
use qtrunc_exact::gcd::gcd;
use qtrunc_exact::{Direction, ParamField, Poly, PowerSeries};

/// Small Laurent monomial `(n/d) * q^k * a^i * b^j`.
fn mono() -> impl Strategy<Value = ParamField> {
    (-5i64..=5, 1i64..=4, -2i64..=2, 0i64..=2, 0i64..=1).prop_map(|(n, d, k, i, j)| {
        let a = ParamField::param("a").pow(i).unwrap();
        let b = ParamField::param("b").pow(j).unwrap();
        &(&ParamField::ratio(n, d) * &ParamField::q_pow(k)) * &(&a * &b)
    })
}

/// Sum of a few monomials.
fn scalar() -> impl Strategy<Value = ParamField> {
    prop::collection::vec(mono(), 1..=3).prop_map(|v| v.into_iter().sum())
}

fn nonzero_scalar() -> impl Strategy<Value = ParamField> {
    scalar().prop_filter("nonzero", |x| !x.is_zero())
}

/// Rational function with a non-monomial denominator.
fn quotient() -> impl Strategy<Value = ParamField> {
    (scalar(), nonzero_scalar()).prop_map(|(n, d)| n.checked_div(&d).unwrap())
}

fn series(n: usize) -> impl Strategy<Value = PowerSeries> {
    prop::collection::vec(mono(), n).prop_map(move |cs| {
        let mut v = vec![ParamField::one()];
        v.extend(cs);
        PowerSeries::new(Direction::AtZero, 0, v)
    })
}

fn int_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-4i64..=4, 0u32..=3, 0u32..=2), 1..=4).prop_map(|terms| {
        let x = qtrunc_exact::Symbol::new("x");
        let y = qtrunc_exact::Symbol::new("y");
        let mut p = Poly::zero();
        for (c, i, j) in terms {
            let t = &Poly::monomial(&x, i, c.into()) * &Poly::monomial(&y, j, 1.into());
            p = &p + &t;
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exp_log_round_trip(x in series(12)) {
        let l = x.log().unwrap();
        prop_assert_eq!(l.exp().unwrap(), x);
    }

    #[test]
    fn log_exp_round_trip(x in series(12)) {
        let y = x.sub(&PowerSeries::one(Direction::AtZero, 12)).unwrap();
        let e = y.exp().unwrap();
        prop_assert_eq!(e.log().unwrap(), y);
    }

    #[test]
    fn series_mul_commutative_associative(x in series(8), y in series(8), z in series(8)) {
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        let l = x.mul(&y).unwrap().mul(&z).unwrap();
        let r = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn invert_is_inverse(x in series(10)) {
        prop_assert!(x.mul(&x.invert().unwrap()).unwrap().is_one());
    }

    #[test]
    fn rescale_is_multiplicative(x in series(6), y in series(6), c in nonzero_scalar()) {
        let l = x.mul(&y).unwrap().rescale(&c).unwrap();
        let r = x.rescale(&c).unwrap().mul(&y.rescale(&c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn equality_is_an_equivalence(x in quotient(), m in nonzero_scalar()) {
        // y and z are the same value reached through different computations
        let y = (&x * &m).checked_div(&m).unwrap();
        let z = &(&x + &m) - &m;
        prop_assert_eq!(&x, &x);
        prop_assert_eq!(&x, &y);
        prop_assert_eq!(&y, &x);
        prop_assert_eq!(&y, &z);
        prop_assert_eq!(&x, &z);
    }

    #[test]
    fn field_axioms(x in quotient(), y in quotient(), z in quotient()) {
        prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert!((&x - &x).is_zero());
        if !x.is_zero() {
            prop_assert!((&x * &x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn substitute_power_is_multiplicative(x in quotient(), y in quotient(), k in 1u32..=4) {
        let l = (&x * &y).substitute_power(k).unwrap();
        let r = &x.substitute_power(k).unwrap() * &y.substitute_power(k).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn gcd_divides_and_is_maximal(a in int_poly(), b in int_poly(), g in int_poly()) {
        prop_assume!(!a.is_zero() && !b.is_zero() && !g.is_zero());
        let ag = &a * &g;
        let bg = &b * &g;
        let d = gcd(&ag, &bg);
        prop_assert!(ag.div_exact(&d).is_some());
        prop_assert!(bg.div_exact(&d).is_some());
        prop_assert!(d.div_exact(&g.primitive()).is_some());
    }
}
