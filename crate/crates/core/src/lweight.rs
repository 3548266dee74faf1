//! Factored rational ℓ-weights.
//!
//! An ℓ-weight is stored as a constant part `λ = (λ_i)` together with a list
//! of prefundamental factors `(i, a, e)` standing for `(1 - z a)^e` at node
//! `i`. Equal `(i, a)` pairs are merged, so the degree of `f_i` is the sum of
//! exponents at `i`.

use std::fmt;
use std::sync::Arc;

use qtrunc_exact::{parse_field, Direction, ParamDecls, ParamField, PowerSeries};
use serde::Serialize;
use thiserror::Error;

use crate::cartan::CartanDatum;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LWeightError {
    #[error("spectral parameter must be nonzero")]
    ZeroSpectralParameter,
    #[error("constant part must be nonzero")]
    ZeroConstant,
    #[error("l-weights belong to different Cartan data ({0} vs {1})")]
    CartanMismatch(String, String),
    #[error("l-weight is not polynomial")]
    NotPolynomial,
    #[error("node {0} out of range 1..={1}")]
    BadNode(usize, usize),
    #[error("cannot parse l-weight: {0}")]
    Parse(String),
}

/// Integer coordinates in the basis of fundamental coweights.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Coweight(pub Vec<i64>);

impl Coweight {
    pub fn zero(rank: usize) -> Coweight {
        Coweight(vec![0; rank])
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&m| m >= 0)
    }

    pub fn is_antidominant(&self) -> bool {
        self.0.iter().all(|&m| m <= 0)
    }

    pub fn add(&self, other: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|m| m.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `(1 - z·param)^exp` at `node` (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub node: usize,
    pub param: ParamField,
    pub exp: i64,
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub coweight: Coweight,
    pub is_polynomial: bool,
    pub is_constant: bool,
    pub weight: Vec<ParamField>,
}

#[derive(Clone)]
pub struct LWeight {
    cartan: Arc<CartanDatum>,
    constant: Vec<ParamField>,
    factors: Vec<Factor>,
}

impl fmt::Debug for LWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.cartan.label(), self)
    }
}

impl PartialEq for LWeight {
    fn eq(&self, other: &LWeight) -> bool {
        self.cartan.kind() == other.cartan.kind()
            && self.constant == other.constant
            && self.factors.len() == other.factors.len()
            && self.factors.iter().all(|x| other.factors.contains(x))
    }
}

impl LWeight {
    /// The unit ℓ-weight.
    pub fn unit(cartan: &Arc<CartanDatum>) -> LWeight {
        LWeight {
            cartan: Arc::clone(cartan),
            constant: vec![ParamField::one(); cartan.rank()],
            factors: Vec::new(),
        }
    }

    pub fn constant(cartan: &Arc<CartanDatum>, lambda: Vec<ParamField>) -> Result<LWeight, LWeightError> {
        if lambda.len() != cartan.rank() {
            return Err(LWeightError::Parse(format!(
                "constant part needs {} entries, got {}",
                cartan.rank(),
                lambda.len()
            )));
        }
        if lambda.iter().any(|x| x.is_zero()) {
            return Err(LWeightError::ZeroConstant);
        }
        Ok(LWeight { cartan: Arc::clone(cartan), constant: lambda, factors: Vec::new() })
    }

    /// `Ψ_{j,a}` with `j` 0-based.
    pub fn prefundamental(cartan: &Arc<CartanDatum>, j: usize, a: ParamField) -> Result<LWeight, LWeightError> {
        LWeight::factor(cartan, j, a, 1)
    }

    /// `Ψ_{j,a}^e`.
    pub fn factor(cartan: &Arc<CartanDatum>, j: usize, a: ParamField, e: i64) -> Result<LWeight, LWeightError> {
        if j >= cartan.rank() {
            return Err(LWeightError::BadNode(j + 1, cartan.rank()));
        }
        if a.is_zero() {
            return Err(LWeightError::ZeroSpectralParameter);
        }
        let mut w = LWeight::unit(cartan);
        if e != 0 {
            w.factors.push(Factor { node: j, param: a, exp: e });
        }
        Ok(w)
    }

    pub fn cartan(&self) -> &Arc<CartanDatum> {
        &self.cartan
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn constant_part(&self) -> &[ParamField] {
        &self.constant
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn factors_at(&self, i: usize) -> impl Iterator<Item = &Factor> {
        self.factors.iter().filter(move |f| f.node == i)
    }

    fn check_same(&self, other: &LWeight) -> Result<(), LWeightError> {
        if self.cartan.kind() != other.cartan.kind() {
            Err(LWeightError::CartanMismatch(self.cartan.label(), other.cartan.label()))
        } else {
            Ok(())
        }
    }

    fn push_factor(&mut self, f: Factor) {
        if let Some(pos) = self.factors.iter().position(|g| g.node == f.node && g.param == f.param) {
            self.factors[pos].exp += f.exp;
            if self.factors[pos].exp == 0 {
                self.factors.remove(pos);
            }
        } else if f.exp != 0 {
            self.factors.push(f);
        }
    }

    fn canonicalize(mut self) -> LWeight {
        self.factors.sort_by_cached_key(|f| (f.node, f.param.to_string()));
        self
    }

    pub fn mul(&self, other: &LWeight) -> Result<LWeight, LWeightError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (x, y) in out.constant.iter_mut().zip(&other.constant) {
            *x = &*x * y;
        }
        for f in &other.factors {
            out.push_factor(f.clone());
        }
        Ok(out.canonicalize())
    }

    pub fn inv(&self) -> LWeight {
        LWeight {
            cartan: Arc::clone(&self.cartan),
            constant: self.constant.iter().map(|x| x.inv().expect("nonzero constant")).collect(),
            factors: self
                .factors
                .iter()
                .map(|f| Factor { node: f.node, param: f.param.clone(), exp: -f.exp })
                .collect(),
        }
    }

    pub fn div(&self, other: &LWeight) -> Result<LWeight, LWeightError> {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: i64) -> LWeight {
        let constant = self.constant.iter().map(|x| x.pow(k).expect("nonzero constant")).collect();
        let factors = if k == 0 {
            Vec::new()
        } else {
            self.factors
                .iter()
                .map(|f| Factor { node: f.node, param: f.param.clone(), exp: f.exp * k })
                .collect()
        };
        LWeight { cartan: Arc::clone(&self.cartan), constant, factors }
    }

    /// Same factors with the constant part replaced by 1.
    pub fn monomial_part(&self) -> LWeight {
        LWeight {
            cartan: Arc::clone(&self.cartan),
            constant: vec![ParamField::one(); self.rank()],
            factors: self.factors.clone(),
        }
    }

    pub fn coweight(&self) -> Coweight {
        let mut m = vec![0; self.rank()];
        for f in &self.factors {
            m[f.node] += f.exp;
        }
        Coweight(m)
    }

    pub fn is_polynomial(&self) -> bool {
        self.factors.iter().all(|f| f.exp > 0)
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn classify(&self) -> Classification {
        Classification {
            coweight: self.coweight(),
            is_polynomial: self.is_polynomial(),
            is_constant: self.is_constant(),
            weight: self.constant.clone(),
        }
    }

    /// `∏ (-a)^e` over the factors at node `i`: the ratio of the leading
    /// coefficient at infinity to the constant term.
    pub fn dominant_ratio(&self, i: usize) -> ParamField {
        self.factors_at(i)
            .map(|f| (-&f.param).pow(f.exp).expect("nonzero parameter"))
            .product()
    }

    /// Leading coefficient of `f_i` at infinity.
    pub fn leading_at_infinity(&self, i: usize) -> ParamField {
        &self.constant[i] * &self.dominant_ratio(i)
    }

    /// Expansion of `f_i` to order `n` around `z = 0` or `z = ∞`.
    ///
    /// At infinity the series is in `w = 1/z` with offset `-deg f_i`.
    pub fn realize_series(&self, i: usize, direction: Direction, n: usize) -> PowerSeries {
        let norm = self.normalized_series(i, direction, n);
        match direction {
            Direction::AtZero => norm.scale(&self.constant[i]),
            Direction::AtInfinity => {
                let deg: i64 = self.coweight().0[i];
                let c = norm.scale(&self.leading_at_infinity(i));
                PowerSeries::new(direction, -deg, c.coeffs().to_vec())
            }
        }
    }

    /// `f_i(z)/f_i(0)` at zero, or `∏ (1 - w/a)^e` at infinity.
    pub fn normalized_series(&self, i: usize, direction: Direction, n: usize) -> PowerSeries {
        let mut acc = PowerSeries::one(direction, n);
        for f in self.factors_at(i) {
            let root = match direction {
                Direction::AtZero => f.param.clone(),
                Direction::AtInfinity => f.param.inv().expect("nonzero parameter"),
            };
            let lin = PowerSeries::from_polynomial(direction, &[ParamField::one(), -&root], n);
            let base = if f.exp > 0 { lin } else { lin.invert().expect("constant term 1") };
            for _ in 0..f.exp.abs() {
                acc = acc.mul(&base).expect("same direction");
            }
        }
        acc
    }

    /// `Ψ_{i,a} ↦ Ψ_{ī, a q^{r^∨ h^∨}}`, constants fixed.
    pub fn tilde(&self) -> Result<LWeight, LWeightError> {
        if !self.is_polynomial() {
            return Err(LWeightError::NotPolynomial);
        }
        Ok(self.bar_shift(self.cartan.shift()))
    }

    /// `Ψ_{i,a} ↦ Ψ_{ī, a q^{-r^∨ h^∨}}`, constant part dropped.
    pub fn shifted_bar(&self) -> Result<LWeight, LWeightError> {
        if !self.is_polynomial() {
            return Err(LWeightError::NotPolynomial);
        }
        Ok(self.bar_shift(-self.cartan.shift()).monomial_part())
    }

    fn bar_shift(&self, k: i64) -> LWeight {
        let shift = ParamField::q_pow(k);
        let mut out = LWeight {
            cartan: Arc::clone(&self.cartan),
            constant: self.constant.clone(),
            factors: Vec::new(),
        };
        for f in &self.factors {
            out.push_factor(Factor { node: self.cartan.bar(f.node), param: &f.param * &shift, exp: f.exp });
        }
        out.canonicalize()
    }
}

impl fmt::Display for LWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for x in &self.factors {
            let mut s = format!("Psi[{},{}]", x.node + 1, x.param);
            if x.exp != 1 {
                s.push_str(&format!("^{}", x.exp));
            }
            parts.push(s);
        }
        if self.constant.iter().any(|c| !c.is_one()) {
            let cs: Vec<String> = self.constant.iter().map(|c| c.to_string()).collect();
            parts.push(format!("const({})", cs.join(",")));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" * "))
        }
    }
}

/// Splits on `sep` outside brackets and parentheses.
fn split_top(s: &str, sep: char) -> Result<Vec<&str>, LWeightError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth -= 1;
                if depth < 0 {
                    return Err(LWeightError::Parse(format!("unbalanced '{c}' at {i}")));
                }
            }
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(LWeightError::Parse("unbalanced brackets".into()));
    }
    out.push(&s[start..]);
    Ok(out)
}

fn parse_exponent(s: &str) -> Result<i64, LWeightError> {
    let t = s.trim();
    let t = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(t);
    t.trim()
        .parse::<i64>()
        .map_err(|_| LWeightError::Parse(format!("bad exponent '{s}'")))
}

/// Parses `Psi[i,expr]^k * const(c1,...,cr) * ...`; `1` is the unit.
pub fn parse_lweight(input: &str, cartan: &Arc<CartanDatum>, decls: &ParamDecls) -> Result<LWeight, LWeightError> {
    let perr = |e: qtrunc_exact::ParseError| LWeightError::Parse(e.to_string());
    let mut acc = LWeight::unit(cartan);
    if input.trim().is_empty() {
        return Err(LWeightError::Parse("empty expression".into()));
    }
    for term in split_top(input, '*')? {
        let t = term.trim();
        if t.is_empty() {
            return Err(LWeightError::Parse(format!("empty factor in '{input}'")));
        }
        if t == "1" {
            continue;
        }
        if let Some(rest) = t.strip_prefix("Psi[") {
            let close = rest
                .char_indices()
                .scan(1i32, |d, (i, c)| {
                    match c {
                        '[' | '(' => *d += 1,
                        ']' | ')' => *d -= 1,
                        _ => {}
                    }
                    Some((i, *d))
                })
                .find(|&(_, d)| d == 0)
                .map(|(i, _)| i)
                .ok_or_else(|| LWeightError::Parse(format!("unclosed Psi[ in '{t}'")))?;
            let inner = &rest[..close];
            let tail = rest[close + 1..].trim();
            let parts = split_top(inner, ',')?;
            if parts.len() != 2 {
                return Err(LWeightError::Parse(format!("Psi needs [node,param], got '{inner}'")));
            }
            let node: usize = parts[0]
                .trim()
                .parse()
                .map_err(|_| LWeightError::Parse(format!("bad node '{}'", parts[0].trim())))?;
            if node == 0 || node > cartan.rank() {
                return Err(LWeightError::BadNode(node, cartan.rank()));
            }
            let a = parse_field(parts[1], decls).map_err(perr)?;
            let e = if tail.is_empty() {
                1
            } else if let Some(x) = tail.strip_prefix('^') {
                parse_exponent(x)?
            } else {
                return Err(LWeightError::Parse(format!("unexpected '{tail}' after Psi[...]")));
            };
            acc = acc.mul(&LWeight::factor(cartan, node - 1, a, e)?)?;
        } else if let Some(rest) = t.strip_prefix("const(") {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| LWeightError::Parse(format!("unclosed const( in '{t}'")))?;
            let vals = split_top(inner, ',')?
                .into_iter()
                .map(|c| parse_field(c, decls).map_err(perr))
                .collect::<Result<Vec<_>, _>>()?;
            acc = acc.mul(&LWeight::constant(cartan, vals)?)?;
        } else {
            return Err(LWeightError::Parse(format!("unknown factor '{t}'")));
        }
    }
    Ok(acc)
}
