use std::sync::Arc;

use num_rational::Rational64;
use qtrunc_core::cartan::CartanDatum;
use qtrunc_core::lweight::{parse_lweight, Coweight, LWeight};
use qtrunc_core::series_engine::Engine;
use qtrunc_core::truncation::{
    monomial_sqrt, plan_truncation, solve_truncatable, top_scalars, truncation_parameter, verify_flavor_z,
    TruncationError,
};
use qtrunc_exact::{parse_field, ParamDecls, ParamField};

fn cd(label: &str) -> Arc<CartanDatum> {
    Arc::new(CartanDatum::from_label(label).unwrap())
}

fn lw(c: &Arc<CartanDatum>, s: &str, d: &ParamDecls) -> LWeight {
    parse_lweight(s, c, d).unwrap()
}

fn f(s: &str, d: &ParamDecls) -> ParamField {
    parse_field(s, d).unwrap()
}

#[test]
fn solver_examples() {
    let a1 = cd("A1");
    let s = solve_truncatable(&a1, &Coweight(vec![1]), &Coweight(vec![-1]));
    assert!(s.truncatable);
    assert_eq!(s.t, vec![Rational64::from(1)]);

    let a2 = cd("A2");
    let s = solve_truncatable(&a2, &Coweight(vec![0, 1]), &Coweight(vec![-1, 0]));
    assert!(s.truncatable);
    assert_eq!(s.integral(), Some(vec![1, 1]));

    let s = solve_truncatable(&a1, &Coweight(vec![1]), &Coweight(vec![0]));
    assert!(!s.truncatable);
    assert_eq!(s.t, vec![Rational64::new(1, 2)]);
    assert_eq!(s.failing, vec![0]);
}

#[test]
fn solver_satisfies_the_linear_system() {
    for label in ["A3", "B3", "C3", "D4", "G2", "F4"] {
        let c = cd(label);
        let r = c.rank();
        let n = Coweight((0..r as i64).map(|i| (i * 3) % 4).collect());
        let m = Coweight((0..r as i64).map(|i| 1 - i).collect());
        let s = solve_truncatable(&c, &n, &m);
        for i in 0..r {
            let lhs: Rational64 = (0..r).map(|j| Rational64::from(c.c(j, i)) * s.t[j]).sum();
            assert_eq!(lhs, Rational64::from(n.0[i] - m.0[i]), "{label}");
        }
    }
}

#[test]
fn truncation_parameter_examples() {
    let d = ParamDecls::new();
    let a1 = cd("A1");
    let (a, mu) = truncation_parameter(&a1, &[], &[lw(&a1, "Psi[1,a]", &d)]).unwrap();
    assert_eq!(a, lw(&a1, "Psi[1,a*q^2]", &d));
    assert_eq!(mu, Coweight(vec![-1]));

    let a2 = cd("A2");
    let (a, mu) = truncation_parameter(&a2, &[], &[lw(&a2, "Psi[1,a]", &d)]).unwrap();
    assert_eq!(a, lw(&a2, "Psi[2,a*q^3]", &d));
    assert_eq!(mu, Coweight(vec![-1, 0]));

    let (a, mu) = truncation_parameter(&a1, &[lw(&a1, "Psi[1,a]", &d)], &[]).unwrap();
    assert_eq!(a, lw(&a1, "Psi[1,a]", &d));
    assert_eq!(mu, Coweight(vec![1]));

    let e = truncation_parameter(&a1, &[lw(&a1, "Psi[1,a]^-1", &d)], &[]);
    assert!(e.is_err());
}

#[test]
fn flavor_examples() {
    let d = ParamDecls::new().with_square("c").unwrap();
    let a1 = cd("A1");
    // a = -c with c a square, so -a q^2 = c q^2 has the root sqrt(c) q
    let a = lw(&a1, "Psi[1,-c*q^2]", &d);
    let z1 = f("sqrt(c)*q", &d);
    assert_eq!(&z1 * &z1, f("c*q^2", &d));
    assert!(verify_flavor_z(&a, &[z1]).unwrap().pass);
    assert!(!verify_flavor_z(&a, &[ParamField::one()]).unwrap().pass);
    assert!(verify_flavor_z(&LWeight::unit(&a1), &[ParamField::one()]).unwrap().pass);
    assert_eq!(verify_flavor_z(&a, &[ParamField::zero()]).unwrap_err(), TruncationError::ZeroFlavor);
}

#[test]
fn flavor_from_square_roots_when_ratio_is_a_square() {
    let d = ParamDecls::new().with_square("c").unwrap();
    let a2 = cd("A2");
    // z = (c q^4, c q^5) gives ratios z1^2/z2 = c q^3 and z2^2/z1 = c q^6
    let a = lw(&a2, "Psi[1,-c*q^3] * Psi[2,-c*q^6]", &d);
    let r1 = a.dominant_ratio(0);
    let z1 = f("c*q^4", &d);
    let z2 = f("c*q^5", &d);
    assert_eq!(r1, f("c*q^3", &d));
    assert!(monomial_sqrt(&r1).is_some());
    assert!(verify_flavor_z(&a, &[z1, z2]).unwrap().pass);
}

#[test]
fn a1_top_scalars() {
    let d = ParamDecls::new();
    let a1 = cd("A1");
    let e = Engine::new(&a1, 12);
    let ff = lw(&a1, "Psi[1,a]^-1 * const(b)", &d);
    let a = lw(&a1, "Psi[1,a*q^2]", &d);
    let sc = top_scalars(&e, &ff, &a).unwrap();
    assert_eq!(sc.u, vec![f("-a", &d)]);
    assert_eq!(sc.v, vec![f("-b^2/a", &d)]);
    assert_eq!(sc.intermediate_rhs, vec![f("-a", &d)]);
    assert_eq!(sc.lambda_prime_sq, vec![f("a^2/b^2", &d)]);
    assert_eq!(&sc.lambda_prime_sq[0] * &sc.v[0], sc.intermediate_rhs[0]);
    assert_eq!(sc.phi_minus_top, vec![f("-b/a", &d)]);

    let unit = LWeight::unit(&a1);
    let sc = top_scalars(&e, &unit, &unit).unwrap();
    assert!(sc.u[0].is_one() && sc.v[0].is_one() && sc.intermediate_rhs[0].is_one());

    let bad = top_scalars(&e, &lw(&a1, "Psi[1,a]", &d), &unit);
    assert!(matches!(bad, Err(TruncationError::NotTruncatable(_))));
}

#[test]
fn a1_plan_reports_intermediate_residual() {
    let d = ParamDecls::new();
    let a1 = cd("A1");
    let e = Engine::new(&a1, 20);
    let rep = plan_truncation(&e, &[], &[lw(&a1, "Psi[1,a]", &d)], &[f("b", &d)], None).unwrap();
    assert!(rep.pass);
    assert_eq!(rep.t, vec!["1"]);
    assert_eq!(rep.truncation_parameter, "Psi[1,a*q^2]");
    assert_eq!(rep.nodes[0].series, "1 - a*z + O(z^21)");
    let sc = rep.scalars.as_ref().unwrap();
    assert!(!sc.intermediate_descent);
    assert_eq!(sc.intermediate_residual[0], f("(b^2 - a^2)/a", &d).to_string());
    assert!(sc.simply_connected[0]);

    let rep = plan_truncation(&e, &[], &[lw(&a1, "Psi[1,a]", &d)], &[f("a", &d)], None).unwrap();
    assert!(rep.scalars.unwrap().intermediate_descent);
    let rep = plan_truncation(&e, &[], &[lw(&a1, "Psi[1,a]", &d)], &[f("-a", &d)], None).unwrap();
    assert!(rep.scalars.unwrap().intermediate_descent);
}

#[test]
fn a1_sign_vectors_need_square_roots() {
    let d = ParamDecls::new().with_square("a").unwrap();
    let a1 = cd("A1");
    let e = Engine::new(&a1, 8);
    let n = [lw(&a1, "Psi[1,a]", &d)];
    let rep = plan_truncation(&e, &[], &n, &[f("a", &d)], None).unwrap();
    assert_eq!(rep.scalars.unwrap().sign_vectors, Some(vec![vec![1]]));
    let rep = plan_truncation(&e, &[], &n, &[f("-a", &d)], None).unwrap();
    assert_eq!(rep.scalars.unwrap().sign_vectors, Some(vec![vec![-1]]));
    let rep = plan_truncation(&e, &[], &n, &[f("b", &d)], None).unwrap();
    assert_eq!(rep.scalars.unwrap().sign_vectors, Some(vec![]));
    let plain = ParamDecls::new();
    let rep = plan_truncation(&e, &[], &[lw(&a1, "Psi[1,a]", &plain)], &[f("a", &plain)], None).unwrap();
    assert_eq!(rep.scalars.unwrap().sign_vectors, None);
}

#[test]
fn a2_plan() {
    let d = ParamDecls::new();
    let a2 = cd("A2");
    let e = Engine::new(&a2, 20);
    let one = [ParamField::one(), ParamField::one()];
    let rep = plan_truncation(&e, &[], &[lw(&a2, "Psi[1,a]", &d)], &one, None).unwrap();
    assert!(rep.pass, "{}", rep.render_text());
    assert_eq!(rep.t, vec!["1", "1"]);
    assert_eq!(rep.truncation_parameter, "Psi[2,a*q^3]");
    assert!(rep.nodes.iter().all(|n| n.degree == Some(1)));
}

#[test]
fn empty_plan_is_trivial() {
    let a1 = cd("A1");
    let e = Engine::new(&a1, 5);
    let rep = plan_truncation(&e, &[], &[], &[ParamField::one()], None).unwrap();
    assert!(rep.pass);
    assert_eq!(rep.t, vec!["0"]);
    assert_eq!(rep.truncation_parameter, "1");
    let sc = rep.scalars.unwrap();
    assert_eq!(sc.u, vec!["1"]);
    assert!(sc.intermediate_descent);
}
