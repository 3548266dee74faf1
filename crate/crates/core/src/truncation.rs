//! Truncatability, truncation parameters and the top-weight scalars.

use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use qtrunc_exact::{ParamField, Poly};
use serde::Serialize;
use thiserror::Error;

use crate::cartan::CartanDatum;
use crate::lweight::{Coweight, LWeight, LWeightError};
use crate::report::{CheckReport, Failure};
use crate::series_engine::{extract_polynomial, Engine, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TruncationError {
    #[error(transparent)]
    LWeight(#[from] LWeightError),
    #[error("pair is not truncatable: t = ({})", .0.join(", "))]
    NotTruncatable(Vec<String>),
    #[error("modified A-series at node {0} is not a polynomial of the expected degree")]
    NotPolynomialSeries(usize),
    #[error("flavour parameters must be nonzero")]
    ZeroFlavor,
    #[error("expected {expected} flavour parameters, got {got}")]
    FlavorArity { expected: usize, got: usize },
}

fn rat_string(x: &Rational64) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Solution of `Σ_j c_ji t_j = n_i - m_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSolution {
    pub t: Vec<Rational64>,
    pub truncatable: bool,
    /// 0-based coordinates that are negative or non-integral.
    pub failing: Vec<usize>,
}

impl TruncSolution {
    pub fn t_strings(&self) -> Vec<String> {
        self.t.iter().map(rat_string).collect()
    }

    /// Integer solution when truncatable.
    pub fn integral(&self) -> Option<Vec<i64>> {
        self.truncatable.then(|| self.t.iter().map(|x| x.to_integer()).collect())
    }
}

/// Exact solve over ℚ; `n` is expected to be dominant.
pub fn solve_truncatable(cd: &CartanDatum, n: &Coweight, m: &Coweight) -> TruncSolution {
    let r = cd.rank();
    // row i: Σ_j c_ji t_j
    let mut a: Vec<Vec<Rational64>> = (0..r)
        .map(|i| {
            let mut row: Vec<Rational64> = (0..r).map(|j| Rational64::from(cd.c(j, i))).collect();
            row.push(Rational64::from(n.0[i] - m.0[i]));
            row
        })
        .collect();
    for k in 0..r {
        let p = (k..r).find(|&i| !a[i][k].is_zero()).expect("Cartan matrices are invertible");
        a.swap(k, p);
        let piv = a[k][k];
        for x in a[k].iter_mut() {
            *x /= piv;
        }
        for i in 0..r {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k];
                for j in 0..=r {
                    let v = a[k][j];
                    a[i][j] -= f * v;
                }
            }
        }
    }
    let t: Vec<Rational64> = a.iter().map(|row| row[r]).collect();
    let failing: Vec<usize> = (0..r).filter(|&j| !t[j].is_integer() || t[j].is_negative()).collect();
    TruncSolution { truncatable: failing.is_empty(), t, failing }
}

/// `a = ∏ m_k · ∏ tilde(n_k)` and `μ = Σ coweight(m_k) - Σ coweight(n_k)`.
pub fn truncation_parameter(
    cd: &Arc<CartanDatum>,
    ms: &[LWeight],
    ns: &[LWeight],
) -> Result<(LWeight, Coweight), LWeightError> {
    let mut a = LWeight::unit(cd);
    let mut mu = Coweight::zero(cd.rank());
    for m in ms {
        if !m.is_polynomial() {
            return Err(LWeightError::NotPolynomial);
        }
        a = a.mul(m)?;
        mu = mu.add(&m.coweight());
    }
    for n in ns {
        a = a.mul(&n.tilde()?)?;
        mu = mu.sub(&n.coweight());
    }
    Ok((a, mu))
}

/// Checks `∏_j z_j^{c_ji} = a_{i,n_i}/a_{i,0}` at every node.
pub fn verify_flavor_z(a: &LWeight, z: &[ParamField]) -> Result<CheckReport, TruncationError> {
    let cd = a.cartan();
    if z.len() != cd.rank() {
        return Err(TruncationError::FlavorArity { expected: cd.rank(), got: z.len() });
    }
    if z.iter().any(|x| x.is_zero()) {
        return Err(TruncationError::ZeroFlavor);
    }
    let mut rep = CheckReport::new("flavor", cd.label(), cd.rank(), a.to_string(), 0);
    for i in 0..cd.rank() {
        let lhs: ParamField = (0..cd.rank())
            .map(|j| z[j].pow(cd.c(j, i)).expect("nonzero"))
            .product();
        let rhs = a.dominant_ratio(i);
        if lhs != rhs {
            rep.fail(Failure {
                node: i + 1,
                side: "flavor".into(),
                exponent: 0,
                expected: rhs.to_string(),
                actual: lhs.to_string(),
            });
        }
    }
    Ok(rep)
}

/// Exact square root of a monomial with positive square coefficient.
pub fn monomial_sqrt(x: &ParamField) -> Option<ParamField> {
    fn poly_sqrt(p: &Poly) -> Option<ParamField> {
        if !p.is_monomial() {
            return None;
        }
        let (exps, c) = &p.terms()[0];
        if !c.is_positive() {
            return None;
        }
        let r = c.sqrt();
        if &(&r * &r) != c {
            return None;
        }
        let mut out = ParamField::from_bigint(r);
        for (v, &e) in p.vars().iter().zip(exps.iter()) {
            if e % 2 != 0 {
                return None;
            }
            out = &out * &ParamField::symbol(v).pow(i64::from(e / 2)).expect("symbol");
        }
        Some(out)
    }
    if x.is_zero() {
        return None;
    }
    let n = poly_sqrt(x.numer())?;
    let d = poly_sqrt(x.denom())?;
    n.checked_div(&d).ok()
}

/// Scalars read off the top weight space.
#[derive(Debug, Clone, PartialEq)]
pub struct TopScalars {
    /// Dominant coefficients of `p_i = 𝒜⁺_i`.
    pub u: Vec<ParamField>,
    pub v: Vec<ParamField>,
    pub intermediate_rhs: Vec<ParamField>,
    pub lambda_prime_sq: Vec<ParamField>,
    /// `φ⁻_{i,m_i}`: leading coefficient of `f_i` at infinity.
    pub phi_minus_top: Vec<ParamField>,
}

fn int_sign_pow(k: i64) -> ParamField {
    if k.rem_euclid(2) == 0 {
        ParamField::one()
    } else {
        ParamField::from_int(-1)
    }
}

fn closed_scalars(cd: &CartanDatum, f: &LWeight, a: &LWeight, t: &[i64], u: Vec<ParamField>) -> TopScalars {
    let r = cd.rank();
    let lam = f.constant_part();
    let mut v = Vec::with_capacity(r);
    let mut rhs = Vec::with_capacity(r);
    let mut lps = Vec::with_capacity(r);
    for i in 0..r {
        let ratio = a.dominant_ratio(i);
        let mut vi = &(&lam[i] * &lam[i]) * &ratio;
        let mut ri = ratio.clone();
        let mut li = lam[i].pow(-2).expect("nonzero");
        for j in 0..r {
            let c = cd.c(j, i);
            if c == 0 {
                continue;
            }
            let uq = &u[j] * &ParamField::q_pow(cd.d(j) * t[j]);
            vi = &vi * &uq.pow(-c).expect("nonzero dominant coefficient");
            let mq = -&ParamField::q_pow(cd.d(j));
            ri = &ri * &mq.pow(-t[j] * c).expect("nonzero");
            let su = &int_sign_pow(t[j]) * &u[j];
            li = &li * &su.pow(c).expect("nonzero dominant coefficient");
        }
        v.push(vi);
        rhs.push(ri);
        lps.push(li);
    }
    TopScalars {
        u,
        v,
        intermediate_rhs: rhs,
        lambda_prime_sq: lps,
        phi_minus_top: (0..r).map(|i| f.leading_at_infinity(i)).collect(),
    }
}

/// `u_i, v_i`, the intermediate right-hand sides and `λ'^2_i` for a truncatable `(coweight f, a)`.
pub fn top_scalars(engine: &Engine, f: &LWeight, a: &LWeight) -> Result<TopScalars, TruncationError> {
    let cd = engine.cartan();
    let sol = solve_truncatable(cd, &a.coweight(), &f.coweight());
    let t = sol.integral().ok_or_else(|| TruncationError::NotTruncatable(sol.t_strings()))?;
    let mut u = Vec::with_capacity(cd.rank());
    for i in 0..cd.rank() {
        let p = engine.script_a(f, a, i, Sign::Plus)?;
        let x = extract_polynomial(&p, Some(t[i]));
        match (x.matches_expected, x.dominant) {
            (Some(true), Some(d)) => u.push(d),
            _ => return Err(TruncationError::NotPolynomialSeries(i + 1)),
        }
    }
    Ok(closed_scalars(cd, f, a, &t, u))
}

#[derive(Debug, Clone, Serialize)]
pub struct NodeReport {
    pub node: usize,
    pub series: String,
    pub expected_degree: Option<i64>,
    pub degree: Option<i64>,
    pub is_polynomial: bool,
    pub dominant_coefficient: Option<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalarReport {
    pub u: Vec<String>,
    pub v: Vec<String>,
    pub intermediate_rhs: Vec<String>,
    pub lambda_prime_sq: Vec<String>,
    /// `λ'^2_i v_i = intermediate_rhs_i`.
    pub lambda_prime_identity: Vec<bool>,
    /// `v_i = λ_i φ⁻_{i,m_i}`, the simply-connected relation on the top weight space.
    pub simply_connected: Vec<bool>,
    /// Intermediate descent holds iff every residual `intermediate_rhs_i - v_i` vanishes.
    pub intermediate_residual: Vec<String>,
    /// Numerators of the residuals: descent holds iff each one vanishes.
    pub intermediate_condition: Vec<String>,
    pub intermediate_descent: bool,
    pub balanced_prediction: Vec<BalancedEntry>,
    /// Sign vectors `ε` with `λ_i = ε_i ∏_j κ_j^{c_ji}`, `κ_j^2 = (-1)^{t_j} u_j`;
    /// `None` when some `κ_j` has no exact square root.
    pub sign_vectors: Option<Vec<Vec<i64>>>,
}

/// Predicted `𝒜⁺_{i,t_i}` scalars `u_i q_i^{-2 s_i}` on the weight space of depth `β = Σ s_j α_j`.
#[derive(Debug, Clone, Serialize)]
pub struct BalancedEntry {
    pub beta: Vec<i64>,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TruncationReport {
    #[serde(rename = "type")]
    pub cartan_type: String,
    pub rank: usize,
    pub order: usize,
    pub highest_lweight: String,
    pub truncation_parameter: String,
    pub mu: Coweight,
    pub nu: Coweight,
    pub m: Vec<i64>,
    pub n: Vec<i64>,
    pub t: Vec<String>,
    pub truncatable: bool,
    /// 1-based coordinates of `t` that are negative or non-integral.
    pub failing_coordinates: Vec<usize>,
    pub nodes: Vec<NodeReport>,
    pub scalars: Option<ScalarReport>,
    pub flavor: Option<CheckReport>,
    pub pass: bool,
}

impl TruncationReport {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let line = |s: &mut String, k: &str, v: String| s.push_str(&format!("{k:<22} {v}\n"));
        line(&mut s, "type", self.cartan_type.clone());
        line(&mut s, "highest l-weight f", self.highest_lweight.clone());
        line(&mut s, "truncation param a", self.truncation_parameter.clone());
        line(&mut s, "mu", self.mu.to_string());
        line(&mut s, "nu", self.nu.to_string());
        line(&mut s, "t", format!("({})", self.t.join(", ")));
        let verdict = if self.truncatable {
            "yes".to_string()
        } else {
            let c: Vec<String> = self.failing_coordinates.iter().map(|c| c.to_string()).collect();
            format!("no (coordinates {})", c.join(", "))
        };
        line(&mut s, "truncatable", verdict);
        for n in &self.nodes {
            line(&mut s, &format!("p_{}(z)", n.node), n.series.clone());
            line(
                &mut s,
                "",
                format!(
                    "degree {} (expected {}), dominant {}: {}",
                    n.degree.map_or("-".into(), |d| d.to_string()),
                    n.expected_degree.map_or("-".into(), |d| d.to_string()),
                    n.dominant_coefficient.clone().unwrap_or_else(|| "-".into()),
                    if n.pass { "ok" } else { "FAIL" }
                ),
            );
        }
        if let Some(sc) = &self.scalars {
            line(&mut s, "u", sc.u.join(", "));
            line(&mut s, "v", sc.v.join(", "));
            line(&mut s, "intermediate rhs", sc.intermediate_rhs.join(", "));
            line(&mut s, "lambda'^2", sc.lambda_prime_sq.join(", "));
            line(&mut s, "lambda'^2 v = rhs", format!("{:?}", sc.lambda_prime_identity));
            line(&mut s, "simply connected", format!("{:?}", sc.simply_connected));
            line(&mut s, "residual rhs - v", sc.intermediate_residual.join(", "));
            line(
                &mut s,
                "intermediate descent",
                if sc.intermediate_descent {
                    "holds".to_string()
                } else {
                    {
                    let open: Vec<&str> = sc.intermediate_condition.iter().map(|c| c.as_str()).filter(|c| *c != "0 = 0").collect();
                    format!("fails; holds iff {}", open.join(" and "))
                }
                },
            );
            let signs = match &sc.sign_vectors {
                None => "no exact square roots".to_string(),
                Some(v) if v.is_empty() => "none".to_string(),
                Some(v) => v.iter().map(|e| format!("{e:?}")).collect::<Vec<_>>().join(" "),
            };
            line(&mut s, "sign vectors", signs);
        }
        if let Some(f) = &self.flavor {
            let verdict = match (&f.pass, &f.first_failure) {
                (true, _) => "pass".to_string(),
                (false, Some(x)) => format!("fail at node {}: expected {}, got {}", x.node, x.expected, x.actual),
                (false, None) => "fail".to_string(),
            };
            line(&mut s, "flavour check", verdict);
        }
        line(&mut s, "result", if self.pass { "PASS".into() } else { "FAIL".into() });
        s
    }
}

fn balanced_table(cd: &CartanDatum, u: &[ParamField]) -> Vec<BalancedEntry> {
    let r = cd.rank();
    let bound: i64 = if r <= 4 { 2 } else { 1 };
    let mut out = Vec::new();
    let mut beta = vec![0i64; r];
    loop {
        let values = (0..r)
            .map(|i| (&u[i] * &ParamField::q_pow(-2 * cd.d(i) * beta[i])).to_string())
            .collect();
        out.push(BalancedEntry { beta: beta.clone(), values });
        let mut k = 0;
        while k < r && beta[k] == bound {
            beta[k] = 0;
            k += 1;
        }
        if k == r {
            break;
        }
        beta[k] += 1;
    }
    out
}

fn sign_vectors(cd: &CartanDatum, lam: &[ParamField], t: &[i64], u: &[ParamField]) -> Option<Vec<Vec<i64>>> {
    let r = cd.rank();
    let kappa: Vec<ParamField> = (0..r)
        .map(|j| monomial_sqrt(&(&int_sign_pow(t[j]) * &u[j])))
        .collect::<Option<_>>()?;
    let mut found: Vec<Vec<i64>> = Vec::new();
    let minus_one = ParamField::from_int(-1);
    for mask in 0u32..(1 << r) {
        let mut eps = Vec::with_capacity(r);
        for i in 0..r {
            let prod: ParamField = (0..r)
                .map(|j| {
                    let k = if mask >> j & 1 == 1 { -&kappa[j] } else { kappa[j].clone() };
                    k.pow(cd.c(j, i)).expect("nonzero")
                })
                .product();
            let e = lam[i].checked_div(&prod).expect("nonzero");
            if e.is_one() {
                eps.push(1);
            } else if e == minus_one {
                eps.push(-1);
            } else {
                break;
            }
        }
        if eps.len() == r && !found.contains(&eps) {
            found.push(eps);
        }
    }
    found.sort();
    Some(found)
}

/// Runs the full pipeline for `f = λ ∏ m_k / ∏ n_k` and `a = ∏ m_k ∏ tilde(n_k)`.
pub fn plan_truncation(
    engine: &Engine,
    ms: &[LWeight],
    ns: &[LWeight],
    lambda: &[ParamField],
    z: Option<&[ParamField]>,
) -> Result<TruncationReport, TruncationError> {
    let cd = engine.cartan();
    let r = cd.rank();
    let (a, mu) = truncation_parameter(cd, ms, ns)?;
    let mut f = LWeight::constant(cd, lambda.to_vec())?;
    for m in ms {
        f = f.mul(m)?;
    }
    for n in ns {
        f = f.div(n)?;
    }
    let nu = a.coweight();
    let sol = solve_truncatable(cd, &nu, &mu);
    let t_int = sol.integral();
    let mut nodes = Vec::with_capacity(r);
    let mut u = Vec::with_capacity(r);
    for i in 0..r {
        let p = engine.script_a(&f, &a, i, Sign::Plus)?;
        let expected = t_int.as_ref().map(|t| t[i]);
        let x = extract_polynomial(&p, expected);
        let pass = x.matches_expected.unwrap_or(false) && x.dominant.is_some();
        if let Some(d) = &x.dominant {
            u.push(d.clone());
        }
        nodes.push(NodeReport {
            node: i + 1,
            series: p.to_string(),
            expected_degree: expected,
            degree: x.degree,
            is_polynomial: x.is_polynomial_to_order,
            dominant_coefficient: x.dominant_coefficient.clone(),
            pass,
        });
    }
    let all_poly = nodes.iter().all(|n| n.pass);
    let scalars = match (&t_int, all_poly) {
        (Some(t), true) => {
            let sc = closed_scalars(cd, &f, &a, t, u);
            let lam = f.constant_part();
            let identity = (0..r).map(|i| &sc.lambda_prime_sq[i] * &sc.v[i] == sc.intermediate_rhs[i]).collect();
            let simply = (0..r).map(|i| sc.v[i] == &lam[i] * &sc.phi_minus_top[i]).collect();
            let resid: Vec<ParamField> = (0..r).map(|i| &sc.intermediate_rhs[i] - &sc.v[i]).collect();
            Some(ScalarReport {
                u: sc.u.iter().map(|x| x.to_string()).collect(),
                v: sc.v.iter().map(|x| x.to_string()).collect(),
                intermediate_rhs: sc.intermediate_rhs.iter().map(|x| x.to_string()).collect(),
                lambda_prime_sq: sc.lambda_prime_sq.iter().map(|x| x.to_string()).collect(),
                lambda_prime_identity: identity,
                simply_connected: simply,
                intermediate_descent: resid.iter().all(|x| x.is_zero()),
                intermediate_residual: resid.iter().map(|x| x.to_string()).collect(),
                intermediate_condition: resid.iter().map(|x| format!("{} = 0", x.numer())).collect(),
                balanced_prediction: balanced_table(cd, &sc.u),
                sign_vectors: sign_vectors(cd, lam, t, &sc.u),
            })
        }
        _ => None,
    };
    let flavor = match z {
        Some(z) => Some(verify_flavor_z(&a, z)?),
        None => None,
    };
    let scalars_ok = scalars
        .as_ref()
        .is_some_and(|s| s.lambda_prime_identity.iter().all(|&b| b) && s.simply_connected.iter().all(|&b| b));
    Ok(TruncationReport {
        cartan_type: cd.label(),
        rank: r,
        order: engine.order(),
        highest_lweight: f.to_string(),
        truncation_parameter: a.to_string(),
        m: mu.0.clone(),
        n: nu.0.clone(),
        mu,
        nu,
        t: sol.t_strings(),
        truncatable: sol.truncatable,
        failing_coordinates: sol.failing.iter().map(|j| j + 1).collect(),
        pass: sol.truncatable && all_poly && scalars_ok && flavor.as_ref().is_none_or(|f| f.pass),
        nodes,
        scalars,
        flavor,
    })
}

