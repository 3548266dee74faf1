//! The A1 module with basis `w_0, w_1, ...` on which `φ(z)` acts on `w_n` by
//! `b q^{-2n} (1 - z a q^2) / ((1 - z a q^{-2n}) (1 - z a q^{2-2n}))`.
//!
//! Rows are materialized from closed formulas. The checks compare them
//! with the engine and with the truncation relations.

use std::fmt::Write as _;
use std::sync::Arc;

use qtrunc_exact::{Direction, ParamField, PowerSeries};
use serde::Serialize;
use thiserror::Error;

use crate::cartan::{CartanDatum, CartanType, Family};
use crate::lweight::{LWeight, LWeightError};
use crate::report::{CheckReport, Failure};
use crate::series_engine::{extract_polynomial, Engine, Sign};
use crate::truncation::top_scalars;

#[derive(Debug, Error, PartialEq)]
pub enum Sl2Error {
    #[error("module parameters a and b must be nonzero")]
    ZeroParameter,
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("series order must be at least 1")]
    ZeroOrder,
    #[error("flavour parameter must be nonzero")]
    ZeroFlavor,
    #[error(transparent)]
    LWeight(#[from] LWeightError),
}

/// Eigenvalue data on one basis vector `w_n`.
#[derive(Debug, Clone)]
pub struct Sl2Row {
    pub n: usize,
    /// The ℓ-weight `b q^{-2n} Ψ_{aq²} Ψ_{aq^{-2n}}^{-1} Ψ_{aq^{2-2n}}^{-1}`.
    pub lweight: LWeight,
    /// `φ⁺_{1,0}(n) = b q^{-2n}`.
    pub phi_plus_top: ParamField,
    /// `φ⁻_{1,-1}(n)`, the coefficient of `z^{-1}` at infinity.
    pub phi_minus_top: ParamField,
    pub phi_plus: PowerSeries,
    /// In `w = 1/z`, offset 1.
    pub phi_minus: PowerSeries,
    /// `𝒜⁺(z) = 1 - z a q^{-2n}`.
    pub script_plus: PowerSeries,
    /// `𝒜⁻(z) = 1 - w a^{-1} q^{2n}`.
    pub script_minus: PowerSeries,
}

pub struct Sl2NegPrefundModule {
    engine: Engine,
    a: ParamField,
    b: ParamField,
    depth: usize,
    order: usize,
    truncation: LWeight,
    rows: Vec<Sl2Row>,
}

fn q(k: i64) -> ParamField {
    ParamField::q_pow(k)
}

fn linear(direction: Direction, root: &ParamField, n: usize) -> PowerSeries {
    PowerSeries::from_polynomial(direction, &[ParamField::one(), -root], n)
}

fn sl2_datum() -> Arc<CartanDatum> {
    Arc::new(CartanDatum::build(CartanType::new(Family::A, 1).expect("A1")).expect("A1 datum"))
}

pub fn build_module(a: ParamField, b: ParamField, depth: usize, order: usize) -> Result<Sl2NegPrefundModule, Sl2Error> {
    if a.is_zero() || b.is_zero() {
        return Err(Sl2Error::ZeroParameter);
    }
    if depth == 0 {
        return Err(Sl2Error::ZeroDepth);
    }
    if order == 0 {
        return Err(Sl2Error::ZeroOrder);
    }
    let cd = sl2_datum();
    let a_inv = a.inv().expect("nonzero");
    let aq2 = &a * &q(2);
    let truncation = LWeight::prefundamental(&cd, 0, aq2.clone())?;
    let mut rows = Vec::with_capacity(depth + 1);
    for n in 0..=depth {
        let k = n as i64;
        let c1 = &a * &q(-2 * k);
        let c2 = &a * &q(2 - 2 * k);
        let top = &b * &q(-2 * k);

        let lweight = LWeight::constant(&cd, vec![top.clone()])?
            .mul(&LWeight::factor(&cd, 0, aq2.clone(), 1)?)?
            .mul(&LWeight::factor(&cd, 0, c1.clone(), -1)?)?
            .mul(&LWeight::factor(&cd, 0, c2.clone(), -1)?)?;

        let den = linear(Direction::AtZero, &c1, order).mul(&linear(Direction::AtZero, &c2, order)).expect("same direction");
        let phi_plus = linear(Direction::AtZero, &aq2, order)
            .scale(&top)
            .div(&den)
            .expect("constant term 1");

        // at infinity φ = b q^{-2n} w (w - a q²) / ((w - c1)(w - c2))
        let mut num_inf = vec![ParamField::zero(); order + 1];
        num_inf[0] = -&(&top * &aq2);
        num_inf[1] = top.clone();
        let den_inf = PowerSeries::from_polynomial(Direction::AtInfinity, &[&c1 * &c2, -&(&c1 + &c2), ParamField::one()], order);
        let phi_minus = PowerSeries::new(Direction::AtInfinity, 1, num_inf)
            .div(&den_inf)
            .expect("c1 c2 nonzero");
        let phi_minus_top = phi_minus.coeff(1).expect("offset 1");

        let script_plus = linear(Direction::AtZero, &c1, order);
        let script_minus = linear(Direction::AtInfinity, &(&a_inv * &q(2 * k)), order);
        rows.push(Sl2Row {
            n,
            lweight,
            phi_plus_top: top,
            phi_minus_top,
            phi_plus,
            phi_minus,
            script_plus,
            script_minus,
        });
    }
    Ok(Sl2NegPrefundModule {
        engine: Engine::new(&cd, order),
        a,
        b,
        depth,
        order,
        truncation,
        rows,
    })
}

fn diff_failure(n: usize, side: &str, x: &PowerSeries, y: &PowerSeries) -> Option<Failure> {
    let e = x.first_difference(y).expect("same direction")?;
    Some(Failure {
        node: 1,
        side: format!("n={n} {side}"),
        exponent: e,
        expected: x.coeff(e).unwrap_or_default().to_string(),
        actual: y.coeff(e).unwrap_or_default().to_string(),
    })
}

fn scalar_failure(n: usize, side: &str, expected: &ParamField, actual: &ParamField) -> Option<Failure> {
    (expected != actual).then(|| Failure {
        node: 1,
        side: format!("n={n} {side}"),
        exponent: 0,
        expected: expected.to_string(),
        actual: actual.to_string(),
    })
}

/// Intermediate descent verdict.
#[derive(Debug, Clone, Serialize)]
pub struct IntermediateDescent {
    /// `φ⁺_{1,0}(n) φ⁻_{1,-1}(n)`, the same for every `n`.
    pub product: String,
    pub product_constant_in_n: bool,
    pub rhs: String,
    /// `rhs - product`.
    pub residual: String,
    pub holds: bool,
}

/// Adjoint descent verdict for a flavour `z_1`.
#[derive(Debug, Clone, Serialize)]
pub struct AdjointDescent {
    pub z1: String,
    /// `z_1² = -a q²`.
    pub flavor_ok: bool,
    /// `θ_n²` for `n = 0..D`.
    pub theta_sq: Vec<String>,
    /// `(φ⁺_{1,0}(n) - θ_n²) q^{2n}`, the same for every `n`.
    pub residual: String,
    /// `φ⁻_{1,-1}(n) = z_1² q^{-2} / θ_n²` for every `n`.
    pub phi_minus_matches: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DescentReport {
    pub intermediate: IntermediateDescent,
    pub adjoint: Option<AdjointDescent>,
    #[serde(skip)]
    pub intermediate_residual: ParamField,
    #[serde(skip)]
    pub adjoint_residual: Option<ParamField>,
}

/// One line of the per-n table.
#[derive(Debug, Clone, Serialize)]
pub struct Sl2TableRow {
    pub n: usize,
    pub phi_plus_top: String,
    pub phi_minus_top: String,
    pub script_plus: String,
    pub script_minus: String,
    pub script_plus_top: String,
    pub balanced_prediction: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Sl2Report {
    pub a: String,
    pub b: String,
    pub depth: usize,
    pub order: usize,
    pub pass: bool,
    pub checks: Vec<CheckReport>,
    pub descent: DescentReport,
    pub table: Vec<Sl2TableRow>,
}

impl Sl2NegPrefundModule {
    pub fn a(&self) -> &ParamField {
        &self.a
    }

    pub fn b(&self) -> &ParamField {
        &self.b
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rows(&self) -> &[Sl2Row] {
        &self.rows
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    /// `Ψ_{1,aq²}`.
    pub fn truncation_parameter(&self) -> &LWeight {
        &self.truncation
    }

    /// `f = b/(1 - za)`.
    pub fn top_lweight(&self) -> LWeight {
        let cd = self.engine.cartan();
        LWeight::constant(cd, vec![self.b.clone()])
            .and_then(|c| c.mul(&LWeight::factor(cd, 0, self.a.clone(), -1)?))
            .expect("nonzero parameters")
    }

    fn report(&self, check: &str) -> CheckReport {
        let lw = format!("b q^-2n Psi[1,a*q^2] Psi[1,a*q^-2n]^-1 Psi[1,a*q^(2-2n)]^-1 (a = {}, b = {})", self.a, self.b);
        CheckReport::new(check, "A1".into(), 1, lw, self.order)
    }

    /// The closed formula against the expansions of the row ℓ-weights, and the
    /// weight grading `φ⁺_{1,0}(n) = φ⁺_{1,0}(0) q^{-2n}`.
    pub fn verify_phi_formula(&self) -> CheckReport {
        let mut rep = self.report("sl2-phi");
        for row in &self.rows {
            let plus = row.lweight.realize_series(0, Direction::AtZero, self.order);
            let minus = row.lweight.realize_series(0, Direction::AtInfinity, self.order);
            if let Some(f) = diff_failure(row.n, "+", &row.phi_plus, &plus) {
                rep.fail(f);
            }
            if let Some(f) = diff_failure(row.n, "-", &row.phi_minus, &minus) {
                rep.fail(f);
            }
            let graded = &self.rows[0].phi_plus_top * &q(-2 * row.n as i64);
            let got = row.phi_plus.coeff(0).unwrap_or_default();
            if let Some(f) = scalar_failure(row.n, "weight", &graded, &got) {
                rep.fail(f);
            }
        }
        rep
    }

    /// Engine 𝒜^± on each row ℓ-weight against the closed forms.
    pub fn verify_script_series(&self) -> Result<CheckReport, Sl2Error> {
        let mut rep = self.report("sl2-script");
        for row in &self.rows {
            let p = self.engine.script_a(&row.lweight, &self.truncation, 0, Sign::Plus)?;
            let m = self.engine.script_a(&row.lweight, &self.truncation, 0, Sign::Minus)?;
            if let Some(f) = diff_failure(row.n, "+", &row.script_plus, &p) {
                rep.fail(f);
            }
            if let Some(f) = diff_failure(row.n, "-", &row.script_minus, &m) {
                rep.fail(f);
            }
        }
        Ok(rep)
    }

    /// First exponent where `φ⁺(n) = φ⁺_{1,0}(n) (1 - zaq²) [𝒜⁺(z) 𝒜⁺(zq²)]^{-1}`
    /// fails for the given `𝒜⁺`.
    pub fn gklo_plus_failure(&self, n: usize, script_plus: &PowerSeries) -> Option<Failure> {
        let row = &self.rows[n];
        let den = script_plus
            .mul(&script_plus.rescale(&q(2)).expect("nonzero"))
            .expect("same direction");
        let rhs = linear(Direction::AtZero, &(&self.a * &q(2)), self.order)
            .scale(&row.phi_plus_top)
            .div(&den)
            .ok()?;
        diff_failure(n, "+", &row.phi_plus, &rhs)
    }

    pub fn verify_gklo_on_module(&self) -> CheckReport {
        let mut rep = self.report("sl2-gklo");
        for row in &self.rows {
            if let Some(f) = self.gklo_plus_failure(row.n, &row.script_plus) {
                rep.fail(f);
            }
        }
        rep
    }

    /// Polynomiality of degree 1, the `𝒜⁻` coefficient relation, the
    /// simply-connected scalar relation and the balanced pattern.
    pub fn verify_truncation_relations(&self) -> Vec<CheckReport> {
        let mut poly = self.report("sl2-poly");
        let mut minus = self.report("sl2-a-minus");
        let mut simply = self.report("sl2-simply-connected");
        let mut balanced = self.report("sl2-balanced");
        let n_ord = self.order as i64;
        let aq2 = &self.a * &q(2);
        let a11 = -&aq2;
        let u = self.rows[0].script_plus.coeff(1).unwrap_or_default();
        if let Some(f) = scalar_failure(0, "u", &-&self.a, &u) {
            balanced.fail(f);
        }
        for row in &self.rows {
            let n = row.n;
            let x = extract_polynomial(&row.script_plus, Some(1));
            if x.matches_expected != Some(true) {
                poly.fail(Failure {
                    node: 1,
                    side: format!("n={n} +"),
                    exponent: x.degree.unwrap_or(-1),
                    expected: "degree 1".into(),
                    actual: format!("{}", row.script_plus),
                });
            }

            let am1 = row.script_minus.coeff(1).unwrap_or_default();
            for k in -n_ord..n_ord {
                let lhs = row.script_minus.coeff(-k).unwrap_or_default();
                let rhs = &am1 * &row.script_plus.coeff(k + 1).unwrap_or_default();
                if lhs != rhs {
                    minus.fail(Failure {
                        node: 1,
                        side: format!("n={n} -"),
                        exponent: k,
                        expected: rhs.to_string(),
                        actual: lhs.to_string(),
                    });
                    break;
                }
            }

            let s1 = row.script_plus.coeff(1).unwrap_or_default();
            let lhs = &a11 * &row.phi_plus_top;
            let sq = &s1 * &q(1);
            let rhs = &row.phi_minus_top * &(&sq * &sq);
            if let Some(f) = scalar_failure(n, "scalar", &lhs, &rhs) {
                simply.fail(f);
            }

            let predicted = &u * &q(-2 * n as i64);
            if let Some(f) = scalar_failure(n, "balanced", &predicted, &s1) {
                balanced.fail(f);
            }
        }
        vec![poly, minus, simply, balanced]
    }

    /// `φ^±(n)` times the cleared denominators equals the numerator exactly.
    pub fn verify_rationality(&self) -> CheckReport {
        let mut rep = self.report("sl2-rationality");
        let aq2 = &self.a * &q(2);
        for row in &self.rows {
            let k = row.n as i64;
            let c1 = &self.a * &q(-2 * k);
            let c2 = &self.a * &q(2 - 2 * k);
            let top = &row.phi_plus_top;
            let n = self.order;

            let d0 = PowerSeries::from_polynomial(Direction::AtZero, &[ParamField::one(), -&(&c1 + &c2), &c1 * &c2], n);
            let num0 = PowerSeries::from_polynomial(Direction::AtZero, &[top.clone(), -&(top * &aq2)], n);
            let lhs = row.phi_plus.mul(&d0).expect("same direction");
            if let Some(f) = diff_failure(row.n, "+", &num0, &lhs) {
                rep.fail(f);
            }

            let dinf = PowerSeries::from_polynomial(Direction::AtInfinity, &[&c1 * &c2, -&(&c1 + &c2), ParamField::one()], n);
            let mut numinf = vec![ParamField::zero(); n + 1];
            numinf[0] = -&(top * &aq2);
            if n >= 1 {
                numinf[1] = top.clone();
            }
            let numinf = PowerSeries::new(Direction::AtInfinity, 1, numinf);
            let lhs = row.phi_minus.mul(&dinf).expect("same direction");
            if let Some(f) = diff_failure(row.n, "-", &numinf, &lhs) {
                rep.fail(f);
            }
        }
        rep
    }

    /// Row 0 against the engine run on `f = b/(1 - za)`.
    pub fn verify_top_row(&self) -> Result<CheckReport, Sl2Error> {
        let mut rep = self.report("sl2-top-row");
        let f = self.top_lweight();
        let row = &self.rows[0];
        let n = self.order;
        let pairs = [
            ("phi+", row.phi_plus.clone(), f.realize_series(0, Direction::AtZero, n)),
            ("phi-", row.phi_minus.clone(), f.realize_series(0, Direction::AtInfinity, n)),
            ("A+", row.script_plus.clone(), self.engine.script_a(&f, &self.truncation, 0, Sign::Plus)?),
            ("A-", row.script_minus.clone(), self.engine.script_a(&f, &self.truncation, 0, Sign::Minus)?),
        ];
        for (side, x, y) in pairs {
            if let Some(fl) = diff_failure(0, side, &x, &y) {
                rep.fail(fl);
            }
        }
        let sc = top_scalars(&self.engine, &f, &self.truncation).map_err(|e| match e {
            crate::truncation::TruncationError::LWeight(e) => Sl2Error::LWeight(e),
            _ => Sl2Error::LWeight(LWeightError::NotPolynomial),
        })?;
        let u = row.script_plus.coeff(1).unwrap_or_default();
        if let Some(fl) = scalar_failure(0, "u", &sc.u[0], &u) {
            rep.fail(fl);
        }
        if let Some(fl) = scalar_failure(0, "phi- top", &sc.phi_minus_top[0], &row.phi_minus_top) {
            rep.fail(fl);
        }
        Ok(rep)
    }

    pub fn descent_conditions(&self, z1: Option<&ParamField>) -> Result<DescentReport, Sl2Error> {
        if z1.is_some_and(|z| z.is_zero()) {
            return Err(Sl2Error::ZeroFlavor);
        }
        let f = self.top_lweight();
        let sc = top_scalars(&self.engine, &f, &self.truncation).map_err(|_| Sl2Error::LWeight(LWeightError::NotPolynomial))?;
        let rhs = sc.intermediate_rhs[0].clone();

        let products: Vec<ParamField> = self.rows.iter().map(|r| &r.phi_plus_top * &r.phi_minus_top).collect();
        let product = products[0].clone();
        let constant = products.iter().all(|p| *p == product);
        let residual = &rhs - &product;
        let intermediate = IntermediateDescent {
            product: product.to_string(),
            product_constant_in_n: constant,
            rhs: rhs.to_string(),
            residual: residual.to_string(),
            holds: constant && residual.is_zero(),
        };

        let adjoint = z1.map(|z| {
            let z_sq = z * z;
            let flavor_ok = z_sq == -&(&self.a * &q(2));
            // θ_n² = (-1)^{t_1} 𝒜⁺_{1,1}(n) with t_1 = 1
            let theta_sq: Vec<ParamField> = self.rows.iter().map(|r| -&r.script_plus.coeff(1).unwrap_or_default()).collect();
            let residuals: Vec<ParamField> = self
                .rows
                .iter()
                .zip(&theta_sq)
                .map(|(r, t)| &(&r.phi_plus_top - t) * &q(2 * r.n as i64))
                .collect();
            let res = residuals[0].clone();
            let same = residuals.iter().all(|r| *r == res);
            let phi_minus_matches = self.rows.iter().zip(&theta_sq).all(|(r, t)| {
                (&z_sq * &q(-2)).checked_div(t).is_ok_and(|x| x == r.phi_minus_top)
            });
            (
                AdjointDescent {
                    z1: z.to_string(),
                    flavor_ok,
                    theta_sq: theta_sq.iter().map(|t| t.to_string()).collect(),
                    residual: res.to_string(),
                    phi_minus_matches,
                    holds: flavor_ok && same && res.is_zero(),
                },
                res,
            )
        });
        let (adjoint, adjoint_residual) = match adjoint {
            Some((a, r)) => (Some(a), Some(r)),
            None => (None, None),
        };
        Ok(DescentReport {
            intermediate,
            adjoint,
            intermediate_residual: residual,
            adjoint_residual,
        })
    }

    pub fn table(&self) -> Vec<Sl2TableRow> {
        let u = -&self.a;
        self.rows
            .iter()
            .map(|r| Sl2TableRow {
                n: r.n,
                phi_plus_top: r.phi_plus_top.to_string(),
                phi_minus_top: r.phi_minus_top.to_string(),
                script_plus: r.script_plus.to_string(),
                script_minus: r.script_minus.to_string(),
                script_plus_top: r.script_plus.coeff(1).unwrap_or_default().to_string(),
                balanced_prediction: (&u * &q(-2 * r.n as i64)).to_string(),
            })
            .collect()
    }

    /// Every check on the module. The descent checks pass when the residuals
    /// equal `(b² - a²)/a` and `b - a`.
    pub fn battery(&self, z1: Option<&ParamField>) -> Result<Sl2Report, Sl2Error> {
        let mut checks = vec![
            self.verify_phi_formula(),
            self.verify_script_series()?,
            self.verify_gklo_on_module(),
        ];
        checks.extend(self.verify_truncation_relations());
        checks.push(self.verify_rationality());
        checks.push(self.verify_top_row()?);

        let descent = self.descent_conditions(z1)?;
        let mut inter = self.report("sl2-descent-intermediate");
        let want = (&(&self.b * &self.b) - &(&self.a * &self.a)).checked_div(&self.a).expect("a nonzero");
        if let Some(f) = scalar_failure(0, "residual", &want, &descent.intermediate_residual) {
            inter.fail(f);
        }
        if !descent.intermediate.product_constant_in_n {
            inter.fail(Failure {
                node: 1,
                side: "product".into(),
                exponent: 0,
                expected: "independent of n".into(),
                actual: "varies with n".into(),
            });
        }
        checks.push(inter);
        if let (Some(adj), Some(res)) = (&descent.adjoint, &descent.adjoint_residual) {
            let mut rep = self.report("sl2-descent-adjoint");
            if let Some(f) = scalar_failure(0, "residual", &(&self.b - &self.a), res) {
                rep.fail(f);
            }
            if !adj.flavor_ok {
                rep.fail(Failure {
                    node: 1,
                    side: "flavor".into(),
                    exponent: 0,
                    expected: (-&(&self.a * &q(2))).to_string(),
                    actual: format!("({})^2", adj.z1),
                });
            }
            if adj.phi_minus_matches != res.is_zero() {
                rep.fail(Failure {
                    node: 1,
                    side: "phi-".into(),
                    exponent: 0,
                    expected: format!("phi- relation iff residual vanishes ({})", res),
                    actual: adj.phi_minus_matches.to_string(),
                });
            }
            checks.push(rep);
        }
        let pass = checks.iter().all(|c| c.pass);
        Ok(Sl2Report {
            a: self.a.to_string(),
            b: self.b.to_string(),
            depth: self.depth,
            order: self.order,
            pass,
            checks,
            descent,
            table: self.table(),
        })
    }
}

impl Sl2Report {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "sl2 module  a = {}  b = {}  depth {}  order {}", self.a, self.b, self.depth, self.order);
        let _ = writeln!(s, "{:>3}  {:<16} {:<16} {:<22} {:<16}", "n", "phi+_0", "phi-_-1", "A+", "u q^-2n");
        for r in &self.table {
            let _ = writeln!(
                s,
                "{:>3}  {:<16} {:<16} {:<22} {:<16}",
                r.n,
                r.phi_plus_top,
                r.phi_minus_top,
                format!("1 + ({})*z", r.script_plus_top),
                r.balanced_prediction
            );
        }
        for c in &self.checks {
            let _ = write!(s, "{:<26} {}", c.check, if c.pass { "PASS" } else { "FAIL" });
            if let Some(f) = &c.first_failure {
                let _ = write!(s, "  ({} at {}: expected {}, got {})", f.side, f.exponent, f.expected, f.actual);
            }
            s.push('\n');
        }
        let i = &self.descent.intermediate;
        let _ = writeln!(
            s,
            "intermediate descent: residual {} -> {}",
            i.residual,
            if i.holds { "holds" } else { "fails" }
        );
        if let Some(a) = &self.descent.adjoint {
            let _ = writeln!(
                s,
                "adjoint descent (z1 = {}): residual {} -> {}",
                a.z1,
                a.residual,
                if a.holds { "holds" } else { "fails" }
            );
        }
        let _ = writeln!(s, "overall: {}", if self.pass { "PASS" } else { "FAIL" });
        s
    }
}
