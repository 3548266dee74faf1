//! Eigenvalues of the A-, T- and modified A-series on one-dimensional
//! top and bottom weight spaces.
//!
//! Everything is computed in log coordinates. Writing
//! `ℓ_{j,s} = (q - q^{-1}) h̄_{j,s}` the series are
//!
//! ```text
//! log A⁺_i  [z^s] = -Σ_j K_ji(s) ℓ_{j,s}        K_ji(s)  = B̃_ji(q^s)(1 - q_i^{-2s})/(q^s - q^{-s})
//! log A⁻_i  [w^u] =  Σ_j K⁻_ji(u) ℓ_{j,-u}      K⁻_ji(u) = q_i^{2u} K_ji(u)
//! log T^±_i [·^s] =  Σ_j L_ji(s) ℓ_{j,±s}       L_ji(s)  = B̃_ji(q^s)/(q^s - q^{-s})
//! ```
//!
//! and `exp` is only taken at the end. This keeps intermediate denominators
//! as small as `det B(q^s)`.

use std::sync::Arc;

use qtrunc_exact::{ArithError, Direction, ParamField, PowerSeries};
use serde::Serialize;

use crate::cartan::CartanDatum;
use crate::lweight::{LWeight, LWeightError};
use crate::report::{CheckReport, Failure};

/// `+` for series in `z`, `-` for series in `w = 1/z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn direction(self) -> Direction {
        match self {
            Sign::Plus => Direction::AtZero,
            Sign::Minus => Direction::AtInfinity,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }

    pub fn both() -> [Sign; 2] {
        [Sign::Plus, Sign::Minus]
    }
}

/// Eigenvalues `h̄_{j,±s}`, `s = 1..N`, of the Drinfeld-Cartan elements.
///
/// Stored scaled by `q - q^{-1}`. For `+` the scaled values are the log
/// coefficients of `f_j(z)/f_j(0)`; for `-` they are minus the log
/// coefficients of `∏ (1 - w/a)^e`.
#[derive(Debug, Clone)]
pub struct HEigenvalues {
    pub node: usize,
    pub sign: Sign,
    scaled: Vec<ParamField>,
}

impl HEigenvalues {
    /// `(q - q^{-1}) h̄_{j,±s}` for `s = 1..=N`.
    pub fn scaled(&self) -> &[ParamField] {
        &self.scaled
    }

    /// `h̄_{j,±s}`.
    pub fn value(&self, s: usize) -> ParamField {
        let qq = &ParamField::q() - &ParamField::q_pow(-1);
        self.scaled[s - 1].checked_div(&qq).expect("q - 1/q is nonzero")
    }

    pub fn order(&self) -> usize {
        self.scaled.len()
    }
}

pub fn h_eigenvalues(f: &LWeight, j: usize, sign: Sign, n: usize) -> HEigenvalues {
    let scaled = (1..=n as i64)
        .map(|s| {
            f.factors_at(j)
                .map(|x| {
                    let p = match sign {
                        Sign::Plus => x.param.pow(s),
                        Sign::Minus => x.param.pow(-s),
                    }
                    .expect("nonzero parameter");
                    let c = match sign {
                        Sign::Plus => ParamField::ratio(-x.exp, s),
                        Sign::Minus => ParamField::ratio(x.exp, s),
                    };
                    &p * &c
                })
                .sum()
        })
        .collect();
    HEigenvalues { node: j, sign, scaled }
}

/// A series `exp(Σ_{s=1}^N c_s x^s)` kept as its log coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSeries {
    direction: Direction,
    log: Vec<ParamField>,
}

impl EigenSeries {
    pub fn zero(direction: Direction, n: usize) -> EigenSeries {
        EigenSeries { direction, log: vec![ParamField::zero(); n] }
    }

    /// From log coefficients of `x^1..x^N`.
    pub fn from_log(direction: Direction, log: Vec<ParamField>) -> EigenSeries {
        EigenSeries { direction, log }
    }

    /// Log of a series with constant term 1.
    pub fn from_series(x: &PowerSeries) -> Result<EigenSeries, ArithError> {
        let l = x.log()?;
        Ok(EigenSeries { direction: x.direction(), log: l.coeffs()[1..].to_vec() })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn order(&self) -> usize {
        self.log.len()
    }

    /// Coefficient of `x^s`, `s >= 1`.
    pub fn log_coeff(&self, s: usize) -> &ParamField {
        &self.log[s - 1]
    }

    pub fn log_coeffs(&self) -> &[ParamField] {
        &self.log
    }

    pub fn exp(&self) -> PowerSeries {
        let mut c = vec![ParamField::zero()];
        c.extend(self.log.iter().cloned());
        PowerSeries::new(self.direction, 0, c).exp().expect("zero constant term")
    }

    pub fn mul(&self, other: &EigenSeries) -> EigenSeries {
        assert_eq!(self.direction, other.direction);
        EigenSeries {
            direction: self.direction,
            log: self.log.iter().zip(&other.log).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn div(&self, other: &EigenSeries) -> EigenSeries {
        self.mul(&other.inv())
    }

    pub fn inv(&self) -> EigenSeries {
        EigenSeries { direction: self.direction, log: self.log.iter().map(|a| -a).collect() }
    }

    /// `z -> c z`; at infinity the `w^s` coefficient picks up `c^{-s}`.
    pub fn rescale(&self, c: &ParamField) -> EigenSeries {
        let base = match self.direction {
            Direction::AtZero => c.clone(),
            Direction::AtInfinity => c.inv().expect("nonzero scale"),
        };
        let mut p = ParamField::one();
        let log = self
            .log
            .iter()
            .map(|x| {
                p = &p * &base;
                x * &p
            })
            .collect();
        EigenSeries { direction: self.direction, log }
    }

    pub fn is_one(&self) -> bool {
        self.log.iter().all(|x| x.is_zero())
    }

    /// First `s` with differing log coefficients.
    pub fn first_difference(&self, other: &EigenSeries) -> Option<usize> {
        self.log.iter().zip(&other.log).position(|(a, b)| a != b).map(|p| p + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum KernelKind {
    A,
    AMinus,
    T,
}

/// For each `s = 1..N`: `adj B(q^s)`, `1/det B(q^s)`, and the scalar kernel factors.
struct KernelTable {
    cd: Arc<CartanDatum>,
    adj: Vec<Vec<Vec<ParamField>>>,
    det_inv: Vec<ParamField>,
    /// `(1 - q_i^{-2s})/(q^s - q^{-s})`, a Laurent polynomial.
    g: Vec<Vec<ParamField>>,
    /// `1/(q^s - q^{-s})`.
    l: Vec<ParamField>,
}

impl KernelTable {
    fn new(cd: &Arc<CartanDatum>, n: usize) -> KernelTable {
        let r = cd.rank();
        let mut adj = Vec::with_capacity(n);
        let mut det_inv = Vec::with_capacity(n);
        let mut g = Vec::with_capacity(n);
        let mut l = Vec::with_capacity(n);
        for s in 1..=n {
            let (a, d) = cd.adjugate_eval(s as u32);
            adj.push(a);
            det_inv.push(d.inv().expect("invertible"));
            let si = s as i64;
            // q^{-d s} [d]_{q^s}
            g.push(
                (0..r)
                    .map(|i| &ParamField::q_pow(-cd.d(i) * si) * &ParamField::qint(cd.d(i), si))
                    .collect(),
            );
            let diff = &ParamField::q_pow(si) - &ParamField::q_pow(-si);
            l.push(diff.inv().expect("nonzero"));
        }
        KernelTable { cd: Arc::clone(cd), adj, det_inv, g, l }
    }

    /// `Σ_j kernel_ji(s) x_j`.
    fn apply(&self, kind: KernelKind, s: usize, i: usize, x: &[ParamField]) -> ParamField {
        let adj = &self.adj[s - 1];
        let lin: ParamField = x
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| &adj[j][i] * v)
            .sum();
        if lin.is_zero() {
            return lin;
        }
        let factor = match kind {
            KernelKind::A => self.g[s - 1][i].clone(),
            KernelKind::AMinus => {
                &ParamField::q_pow(2 * self.cd.d(i) * s as i64) * &self.g[s - 1][i]
            }
            KernelKind::T => self.l[s - 1].clone(),
        };
        &(&lin * &factor) * &self.det_inv[s - 1]
    }

    fn series(&self, kind: KernelKind, dir: Direction, i: usize, values: &[Vec<ParamField>]) -> EigenSeries {
        // values[j][s-1]
        let n = self.adj.len();
        let log = (1..=n)
            .map(|s| {
                let x: Vec<ParamField> = values.iter().map(|v| v[s - 1].clone()).collect();
                self.apply(kind, s, i, &x)
            })
            .collect();
        EigenSeries::from_log(dir, log)
    }
}

/// A/T series computations for one Cartan datum at a fixed order.
pub struct Engine {
    cd: Arc<CartanDatum>,
    n: usize,
    table: KernelTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Which {
    A,
    T,
}

impl Engine {
    pub fn new(cd: &Arc<CartanDatum>, n: usize) -> Engine {
        Engine { cd: Arc::clone(cd), n, table: KernelTable::new(cd, n) }
    }

    pub fn cartan(&self) -> &Arc<CartanDatum> {
        &self.cd
    }

    pub fn order(&self) -> usize {
        self.n
    }

    fn scaled_all(&self, f: &LWeight, sign: Sign) -> Vec<Vec<ParamField>> {
        (0..self.cd.rank())
            .map(|j| h_eigenvalues(f, j, sign, self.n).scaled)
            .collect()
    }

    /// Log form of the A- or T-series eigenvalue on a highest ℓ-weight vector of weight `f`.
    pub fn at_log(&self, f: &LWeight, i: usize, which: Which, sign: Sign) -> EigenSeries {
        let vals = self.scaled_all(f, sign);
        let dir = sign.direction();
        match (which, sign) {
            (Which::A, Sign::Plus) => self.table.series(KernelKind::A, dir, i, &vals).inv(),
            (Which::A, Sign::Minus) => self.table.series(KernelKind::AMinus, dir, i, &vals),
            (Which::T, _) => self.table.series(KernelKind::T, dir, i, &vals),
        }
    }

    pub fn at_series(&self, f: &LWeight, i: usize, which: Which, sign: Sign) -> PowerSeries {
        self.at_log(f, i, which, sign).exp()
    }

    /// Log form of `a*_i` (`+`) or `a♯_i` (`-`).
    pub fn star_sharp_log(&self, a: &LWeight, i: usize, sign: Sign) -> Result<EigenSeries, LWeightError> {
        if !a.is_polynomial() {
            return Err(LWeightError::NotPolynomial);
        }
        // λ_{j,s} = log coefficients of a_j/a_{j,0}, resp. of a_j z^{-n_j}/a_{j,n_j}
        let lam: Vec<Vec<ParamField>> = (0..self.cd.rank())
            .map(|j| {
                let h = h_eigenvalues(a, j, sign, self.n);
                match sign {
                    Sign::Plus => h.scaled,
                    Sign::Minus => h.scaled.iter().map(|x| -x).collect(),
                }
            })
            .collect();
        let kind = match sign {
            Sign::Plus => KernelKind::A,
            Sign::Minus => KernelKind::AMinus,
        };
        Ok(self.table.series(kind, sign.direction(), i, &lam))
    }

    /// All components of `a*` or `a♯`.
    pub fn star_sharp(&self, a: &LWeight, sign: Sign) -> Result<Vec<PowerSeries>, LWeightError> {
        (0..self.cd.rank())
            .map(|i| self.star_sharp_log(a, i, sign).map(|x| x.exp()))
            .collect()
    }

    /// Log form of `𝒜^±_i = a*_i A⁺_i` resp. `a♯_i A⁻_i`.
    pub fn script_a_log(&self, f: &LWeight, a: &LWeight, i: usize, sign: Sign) -> Result<EigenSeries, LWeightError> {
        let star = self.star_sharp_log(a, i, sign)?;
        Ok(star.mul(&self.at_log(f, i, Which::A, sign)))
    }

    pub fn script_a(&self, f: &LWeight, a: &LWeight, i: usize, sign: Sign) -> Result<PowerSeries, LWeightError> {
        Ok(self.script_a_log(f, a, i, sign)?.exp())
    }

    /// Top (`+`) or bottom (`-`) ℓ-weight of the fundamental representation `W^{(i)}`, without its constant part.
    pub fn fundamental_extremal(&self, i: usize, side: Sign) -> LWeight {
        let cd = &self.cd;
        let qi2 = ParamField::q_pow(2 * cd.d(i));
        // top: Ψ_{i,1} Ψ_{i,q_i^2}^{-1}; bottom: Ψ_{ī,c}^{-1} Ψ_{ī,c q_i^2}
        let (node, c, e) = match side {
            Sign::Plus => (i, ParamField::one(), 1),
            Sign::Minus => (cd.bar(i), ParamField::q_pow(cd.shift()), -1),
        };
        let lo = LWeight::factor(cd, node, c.clone(), e).expect("valid");
        let hi = LWeight::factor(cd, node, &c * &qi2, -e).expect("valid");
        lo.mul(&hi).expect("same datum")
    }

    /// Log form of `t^±_{f,i}`: the eigenvalue of
    /// `T_f(z) = ∏_k T⁻_{i_k}(z^{-1} a_k^{-1})` on the top or bottom weight space of `W^{(i)}`.
    pub fn fundamental_t_log(&self, f: &LWeight, i: usize, side: Sign) -> Result<EigenSeries, LWeightError> {
        if !f.is_polynomial() {
            return Err(LWeightError::NotPolynomial);
        }
        let w = self.fundamental_extremal(i, side);
        let h: Vec<Vec<ParamField>> = (0..self.cd.rank())
            .map(|j| h_eigenvalues(&w, j, Sign::Minus, self.n).scaled)
            .collect();
        let mut acc = EigenSeries::zero(Direction::AtZero, self.n);
        for fac in f.factors() {
            // log T⁻_k at w^u on W, then w^u -> a^u z^u
            let t = self.table.series(KernelKind::T, Direction::AtZero, fac.node, &h);
            let mut p = ParamField::one();
            let log = t
                .log
                .iter()
                .map(|x| {
                    p = &p * &fac.param;
                    &(x * &p) * &ParamField::from_int(fac.exp)
                })
                .collect();
            acc = acc.mul(&EigenSeries::from_log(Direction::AtZero, log));
        }
        Ok(acc)
    }

    pub fn fundamental_t(&self, f: &LWeight, i: usize, side: Sign) -> Result<PowerSeries, LWeightError> {
        Ok(self.fundamental_t_log(f, i, side)?.exp())
    }

    fn report(&self, check: &str, f: &LWeight) -> CheckReport {
        CheckReport::new(check, self.cd.label(), self.cd.rank(), f.to_string(), self.n)
    }

    /// Compares `φ̄^±_i` (expanded directly from the factors) with the
    /// product of A-series prescribed by the GKLO relation.
    pub fn verify_gklo(&self, f: &LWeight) -> CheckReport {
        let mut rep = self.report("gklo", f);
        let cd = &self.cd;
        for sign in Sign::both() {
            let a: Vec<EigenSeries> = (0..cd.rank()).map(|j| self.at_log(f, j, Which::A, sign)).collect();
            for i in 0..cd.rank() {
                let mut rhs = a[i].mul(&a[i].rescale(&ParamField::q_pow(2 * cd.d(i)))).inv();
                for j in 0..cd.rank() {
                    let c = cd.c(j, i);
                    if j == i || c >= 0 {
                        continue;
                    }
                    for t in 1..=-c {
                        rhs = rhs.mul(&a[j].rescale(&ParamField::q_pow(cd.d(j) * (c + 2 * t))));
                    }
                }
                let lhs = f.normalized_series(i, sign.direction(), self.n);
                let rhs = rhs.exp();
                if let Some(e) = lhs.first_difference(&rhs).expect("same direction") {
                    rep.fail(Failure {
                        node: i + 1,
                        side: sign.symbol().into(),
                        exponent: e,
                        expected: lhs.coeff(e).unwrap_or_default().to_string(),
                        actual: rhs.coeff(e).unwrap_or_default().to_string(),
                    });
                }
            }
        }
        rep
    }

    /// `A^±_i(z) = T^±_i(z q_i^{-2}) / T^±_i(z)`, compared in log coordinates.
    pub fn verify_at_ratio(&self, f: &LWeight) -> CheckReport {
        let mut rep = self.report("at-ratio", f);
        for sign in Sign::both() {
            for i in 0..self.cd.rank() {
                let a = self.at_log(f, i, Which::A, sign);
                let t = self.at_log(f, i, Which::T, sign);
                let ratio = t.rescale(&ParamField::q_pow(-2 * self.cd.d(i))).div(&t);
                if let Some(s) = a.first_difference(&ratio) {
                    rep.fail(Failure {
                        node: i + 1,
                        side: sign.symbol().into(),
                        exponent: s as i64,
                        expected: a.log_coeff(s).to_string(),
                        actual: ratio.log_coeff(s).to_string(),
                    });
                }
            }
        }
        rep
    }

    /// `1/t⁺_{f,i} = f*_i` and `t⁻_{f,i} = (shifted bar of f)*_i`, in log coordinates.
    pub fn verify_lemma(&self, f: &LWeight) -> Result<CheckReport, LWeightError> {
        let mut rep = self.report("lemma", f);
        let g = f.shifted_bar()?;
        for i in 0..self.cd.rank() {
            let cases = [
                (Sign::Plus, self.fundamental_t_log(f, i, Sign::Plus)?.inv(), self.star_sharp_log(f, i, Sign::Plus)?),
                (Sign::Minus, self.fundamental_t_log(f, i, Sign::Minus)?, self.star_sharp_log(&g, i, Sign::Plus)?),
            ];
            for (side, lhs, rhs) in cases {
                if let Some(s) = lhs.first_difference(&rhs) {
                    rep.fail(Failure {
                        node: i + 1,
                        side: format!("t{}", side.symbol()),
                        exponent: s as i64,
                        expected: rhs.log_coeff(s).to_string(),
                        actual: lhs.log_coeff(s).to_string(),
                    });
                }
            }
        }
        Ok(rep)
    }
}

/// Polynomiality verdict for a truncated series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolynomialExtraction {
    /// The last nonzero coefficient lies strictly below the known order.
    pub is_polynomial_to_order: bool,
    pub degree: Option<i64>,
    pub dominant_coefficient: Option<String>,
    #[serde(skip)]
    pub dominant: Option<ParamField>,
    /// Degree equals the expected one and the dominant coefficient is nonzero.
    pub matches_expected: Option<bool>,
}

pub fn extract_polynomial(x: &PowerSeries, expected_degree: Option<i64>) -> PolynomialExtraction {
    let last = x.coeffs().iter().rposition(|c| !c.is_zero());
    let (degree, dominant) = match last {
        Some(k) => (Some(x.offset() + k as i64), Some(x.coeffs()[k].clone())),
        None => (None, None),
    };
    let is_poly = match last {
        Some(k) => k < x.order(),
        None => true,
    };
    let matches_expected = expected_degree.map(|d| is_poly && degree == Some(d));
    PolynomialExtraction {
        is_polynomial_to_order: is_poly,
        degree,
        dominant_coefficient: dominant.as_ref().map(|c| c.to_string()),
        dominant,
        matches_expected,
    }
}
