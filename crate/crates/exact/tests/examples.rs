use qtrunc_exact::{parse_field, ArithError, Direction, ParamDecls, ParamField, PowerSeries};

fn f(s: &str) -> ParamField {
    parse_field(s, &ParamDecls::new()).unwrap()
}

fn poly_series(cs: &[&str], n: usize) -> PowerSeries {
    let v: Vec<ParamField> = cs.iter().map(|c| f(c)).collect();
    PowerSeries::from_polynomial(Direction::AtZero, &v, n)
}

#[test]
fn field_arith_examples() {
    assert_eq!(&f("1/2") + &f("1/3"), f("5/6"));
    assert!((&f("q") * &f("1/q")).is_one());
    let two = ParamField::qint(2, 1);
    let lhs = &(&two * &two) - &ParamField::one();
    assert_eq!(lhs, ParamField::qint(3, 1));
    assert_eq!(lhs, f("q^2 + 1 + q^-2"));
    assert_eq!(f("1").checked_div(&f("0")), Err(ArithError::DivisionByZero));
}

#[test]
fn substitute_power_examples() {
    assert_eq!(f("q + q^-1").substitute_power(2).unwrap(), f("q^2 + q^-2"));
    assert_eq!(f("1/(q + q^-1)").substitute_power(3).unwrap(), f("1/(q^3 + q^-3)"));
    assert_eq!(f("a*q").substitute_power(2).unwrap(), f("a*q^2"));
    assert_eq!(f("q").substitute_power(0), Err(ArithError::BadPower(0)));
}

#[test]
fn series_arith_examples() {
    let n = 12;
    let x = poly_series(&["1", "-a"], n);
    assert!(x.mul(&x.invert().unwrap()).unwrap().is_one());

    let g = poly_series(&["1", "-1"], n).invert().unwrap();
    assert_eq!(g.order(), n);
    assert!(g.coeffs().iter().all(|c| c.is_one()));

    let aq2 = f("a*q^2");
    let geo: Vec<ParamField> = (0..=n as i64).map(|k| aq2.pow(k).unwrap()).collect();
    let geo = PowerSeries::new(Direction::AtZero, 0, geo);
    assert!(poly_series(&["1", "-a*q^2"], n).mul(&geo).unwrap().is_one());

    let zero_lead = poly_series(&["0", "1"], n);
    assert_eq!(zero_lead.invert().unwrap_err(), ArithError::NonInvertibleSeries);
}

#[test]
fn mul_truncates_to_smaller_order() {
    let x = poly_series(&["1", "1"], 3);
    let y = poly_series(&["1", "1"], 7);
    assert_eq!(x.mul(&y).unwrap().order(), 3);
    let shifted = PowerSeries::new(Direction::AtZero, 2, vec![f("1"), f("a")]);
    let p = shifted.mul(&shifted).unwrap();
    assert_eq!(p.offset(), 4);
    assert_eq!(p.coeff(5), Some(f("2*a")));
    assert_eq!(p.coeff(6), None);
}

#[test]
fn series_exp_examples() {
    let n = 30;
    let zero = PowerSeries::constant(Direction::AtZero, ParamField::zero(), n);
    assert!(zero.exp().unwrap().is_one());

    // exp(-sum c^{-s} a^s z^s / s) = 1 - c^{-1} a z
    let ratio = f("a/c");
    let mut lg = vec![ParamField::zero()];
    for s in 1..=n as i64 {
        lg.push(&ratio.pow(s).unwrap() * &ParamField::ratio(-1, s));
    }
    let e = PowerSeries::new(Direction::AtZero, 0, lg).exp().unwrap();
    assert_eq!(e, poly_series(&["1", "-a/c"], n));

    let z = poly_series(&["0", "1"], 10).exp().unwrap();
    let mut fact = ParamField::one();
    for k in 0..=10i64 {
        if k > 0 {
            fact = &fact * &ParamField::from_int(k);
        }
        assert_eq!(z.coeffs()[k as usize], fact.inv().unwrap());
    }
    assert_eq!(poly_series(&["1"], 3).exp().unwrap_err(), ArithError::NonzeroConstantTerm);
}

#[test]
fn series_log_examples() {
    let n = 10;
    let one = PowerSeries::one(Direction::AtZero, n);
    assert!(one.log().unwrap().coeffs().iter().all(|c| c.is_zero()));

    let l = poly_series(&["1", "-a"], n).log().unwrap();
    for s in 1..=n as i64 {
        assert_eq!(l.coeffs()[s as usize], &f("a").pow(s).unwrap() * &ParamField::ratio(-1, s));
    }

    let x = poly_series(&["1", "-a"], n);
    let y = poly_series(&["1", "-b"], n);
    let lhs = x.mul(&y).unwrap().log().unwrap();
    let rhs = x.log().unwrap().add(&y.log().unwrap()).unwrap();
    assert_eq!(lhs, rhs);
    assert_eq!(poly_series(&["2", "1"], 3).log().unwrap_err(), ArithError::ConstantTermNotOne);
}

#[test]
fn series_rescale_examples() {
    let x = poly_series(&["1", "-a"], 6);
    assert_eq!(x.rescale(&f("q^2")).unwrap(), poly_series(&["1", "-a*q^2"], 6));
    assert_eq!(x.rescale(&ParamField::one()).unwrap(), x);
    let c = f("q^3*b");
    let back = x.rescale(&c).unwrap().rescale(&c.inv().unwrap()).unwrap();
    assert_eq!(back, x);
    assert_eq!(x.rescale(&ParamField::zero()).unwrap_err(), ArithError::ZeroScale);
}

#[test]
fn rescale_at_infinity_uses_inverse_powers() {
    // 1 - w/a in w = 1/z; z -> q^2 z sends it to 1 - w/(a q^2)
    let x = PowerSeries::from_polynomial(Direction::AtInfinity, &[f("1"), f("-1/a")], 5);
    let y = x.rescale(&f("q^2")).unwrap();
    assert_eq!(y.coeffs()[1], f("-1/(a*q^2)"));
}

#[test]
fn rendering_uses_q() {
    assert_eq!(f("q + q^-1").to_string(), "q + q^-1");
    assert_eq!(f("-b^2/a").to_string(), "-a^-1*b^2");
    assert_eq!(f("1/(q + q^-1)").to_string(), "q/(q^2 + 1)");
    let s = poly_series(&["1", "-a"], 3);
    assert_eq!(s.to_string(), "1 - a*z + O(z^4)");
}
