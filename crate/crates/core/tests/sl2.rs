use std::time::Instant;

use qtrunc_core::sl2::{build_module, Sl2Error};
use qtrunc_exact::{parse_field, Direction, ParamDecls, ParamField, PowerSeries};

fn decls() -> ParamDecls {
    ParamDecls::new().with_square("c").unwrap().with_square("b").unwrap()
}

fn f(s: &str) -> ParamField {
    parse_field(s, &decls()).unwrap()
}

fn poly(dir: Direction, c: &[&str], n: usize) -> PowerSeries {
    let v: Vec<ParamField> = c.iter().map(|x| f(x)).collect();
    PowerSeries::from_polynomial(dir, &v, n)
}

#[test]
fn rows_match_closed_forms() {
    let m = build_module(f("a"), f("b"), 3, 12).unwrap();
    let r0 = &m.rows()[0];
    assert_eq!(r0.script_plus, poly(Direction::AtZero, &["1", "-a"], 12));
    let inv = poly(Direction::AtZero, &["1", "-a"], 12).invert().unwrap().scale(&f("b"));
    assert_eq!(r0.phi_plus, inv);
    assert_eq!(r0.phi_minus_top, f("-b/a"));
    let r1 = &m.rows()[1];
    assert_eq!(r1.script_plus, poly(Direction::AtZero, &["1", "-a*q^-2"], 12));
    assert_eq!(r1.script_minus, poly(Direction::AtInfinity, &["1", "-q^2/a"], 12));
    assert_eq!(r1.phi_plus_top, f("b*q^-2"));
    assert_eq!(r1.phi_minus_top, f("-b*q^2/a"));
    assert_eq!(r0.lweight.to_string(), "Psi[1,a]^-1 * const(b)");
}

#[test]
fn zero_parameters_are_rejected() {
    assert_eq!(build_module(ParamField::zero(), f("b"), 2, 4).err(), Some(Sl2Error::ZeroParameter));
    assert_eq!(build_module(f("a"), ParamField::zero(), 2, 4).err(), Some(Sl2Error::ZeroParameter));
    assert_eq!(build_module(f("a"), f("b"), 0, 4).err(), Some(Sl2Error::ZeroDepth));
}

#[test]
fn module_checks_pass() {
    let m = build_module(f("a"), f("b"), 4, 20).unwrap();
    assert!(m.verify_phi_formula().pass);
    assert!(m.verify_script_series().unwrap().pass);
    let g = m.verify_gklo_on_module();
    assert!(g.pass, "{g:?}");
    for r in m.verify_truncation_relations() {
        assert!(r.pass, "{r:?}");
    }
    assert!(m.verify_rationality().pass);
    assert!(m.verify_top_row().unwrap().pass);
}

#[test]
fn gklo_mutation_is_detected() {
    let m = build_module(f("a"), f("b"), 3, 20).unwrap();
    for n in 0..=3 {
        let good = &m.rows()[n].script_plus;
        assert!(m.gklo_plus_failure(n, good).is_none());
        let k = -2 * n as i64;
        let bad_root = &f("a+1") * &ParamField::q_pow(k);
        let bad = PowerSeries::from_polynomial(Direction::AtZero, &[ParamField::one(), -&bad_root], 20);
        assert!(m.gklo_plus_failure(n, &bad).is_some(), "n={n}");
    }
}

#[test]
fn a_minus_relation_at_k0() {
    let m = build_module(f("a"), f("b"), 2, 6).unwrap();
    for r in m.rows() {
        let am1 = r.script_minus.coeff(1).unwrap();
        let ap1 = r.script_plus.coeff(1).unwrap();
        assert!((&am1 * &ap1).is_one());
    }
}

#[test]
fn descent_generic() {
    let m = build_module(f("a"), f("b"), 3, 10).unwrap();
    let d = m.descent_conditions(None).unwrap();
    assert_eq!(d.intermediate_residual, f("(b^2 - a^2)/a"));
    assert_eq!(d.intermediate.product, f("-b^2/a").to_string());
    assert!(d.intermediate.product_constant_in_n);
    assert!(!d.intermediate.holds);
    assert!(d.adjoint.is_none());
}

#[test]
fn descent_specializations() {
    // a = -c so that z1 = sqrt(c) q squares to -a q^2
    let z1 = f("sqrt(c)*q");
    let a = f("-c");

    let m = build_module(a.clone(), a.clone(), 3, 10).unwrap();
    let d = m.descent_conditions(Some(&z1)).unwrap();
    assert!(d.intermediate.holds);
    let adj = d.adjoint.as_ref().unwrap();
    assert!(adj.flavor_ok && adj.holds && adj.phi_minus_matches);
    assert_eq!(adj.theta_sq[1], f("-c*q^-2").to_string());
    assert!(d.adjoint_residual.unwrap().is_zero());

    let m = build_module(a.clone(), -&a, 3, 10).unwrap();
    let d = m.descent_conditions(Some(&z1)).unwrap();
    assert!(d.intermediate.holds);
    assert!(d.intermediate_residual.is_zero());
    let adj = d.adjoint.as_ref().unwrap();
    assert!(!adj.holds && !adj.phi_minus_matches);
    assert_eq!(d.adjoint_residual.unwrap(), &f("-2") * &a);

    let m = build_module(a.clone(), f("b"), 3, 10).unwrap();
    let d = m.descent_conditions(Some(&z1)).unwrap();
    assert!(!d.intermediate.holds && !d.adjoint.unwrap().holds);

    assert_eq!(m.descent_conditions(Some(&ParamField::zero())).err(), Some(Sl2Error::ZeroFlavor));
    let d = m.descent_conditions(Some(&ParamField::one())).unwrap();
    assert!(!d.adjoint.unwrap().flavor_ok);
}

#[test]
fn battery_depth_10_order_20() {
    let t = Instant::now();
    let m = build_module(f("-c"), f("b"), 10, 20).unwrap();
    let rep = m.battery(Some(&f("sqrt(c)*q"))).unwrap();
    assert!(rep.pass, "{}", rep.render_text());
    assert_eq!(rep.table.len(), 11);
    assert!(t.elapsed().as_secs() < 10);
}

#[test]
fn realize_at_infinity_offset() {
    let m = build_module(f("a"), f("b"), 1, 8).unwrap();
    let top = m.top_lweight();
    let s = top.realize_series(0, Direction::AtInfinity, 8);
    assert_eq!(s.offset(), 1);
    assert_eq!(s.coeff(1).unwrap(), f("-b/a"));
    assert_eq!(s.coeff(2).unwrap(), f("-b/a^2"));
}
