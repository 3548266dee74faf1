//! Sparse multivariate polynomials with arbitrary-precision integer coefficients.
//!
//! A polynomial carries its own sorted variable list; every listed variable
//! occurs in at least one term. Terms are kept sorted in strictly descending
//! lexicographic order of their exponent vectors and never hold a zero
//! coefficient, so structural equality is mathematical equality.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::symbol::Symbol;

pub type Exps = SmallVec<[u32; 4]>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    vars: Arc<[Symbol]>,
    terms: Vec<(Exps, BigInt)>,
}

fn empty_vars() -> Arc<[Symbol]> {
    Arc::from(Vec::<Symbol>::new())
}

fn same_vars(a: &Arc<[Symbol]>, b: &Arc<[Symbol]>) -> bool {
    Arc::ptr_eq(a, b) || a[..] == b[..]
}

fn union_vars(a: &Arc<[Symbol]>, b: &Arc<[Symbol]>) -> Arc<[Symbol]> {
    if same_vars(a, b) {
        return a.clone();
    }
    let mut out: Vec<Symbol> = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    if out.len() == a.len() {
        a.clone()
    } else if out.len() == b.len() {
        b.clone()
    } else {
        Arc::from(out)
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly {
            vars: empty_vars(),
            terms: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            vars: empty_vars(),
            terms: vec![(Exps::new(), c)],
        }
    }

    /// `coeff * var^exp`.
    pub fn monomial(var: &Symbol, exp: u32, coeff: BigInt) -> Self {
        if coeff.is_zero() {
            return Poly::zero();
        }
        if exp == 0 {
            return Poly::constant(coeff);
        }
        let mut e = Exps::new();
        e.push(exp);
        Poly {
            vars: Arc::from(vec![var.clone()]),
            terms: vec![(e, coeff)],
        }
    }

    pub fn var(var: &Symbol) -> Self {
        Poly::monomial(var, 1, BigInt::one())
    }

    /// Builds a polynomial from arbitrary (unsorted, possibly repeated) terms.
    pub fn from_terms(vars: Arc<[Symbol]>, terms: Vec<(Exps, BigInt)>) -> Self {
        let mut acc: HashMap<Exps, BigInt> = HashMap::with_capacity(terms.len());
        for (e, c) in terms {
            debug_assert_eq!(e.len(), vars.len());
            *acc.entry(e).or_insert_with(BigInt::zero) += c;
        }
        let mut terms: Vec<(Exps, BigInt)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly { vars, terms }.trimmed()
    }

    /// Terms must already be strictly descending with nonzero coefficients.
    fn from_sorted(vars: Arc<[Symbol]>, terms: Vec<(Exps, BigInt)>) -> Self {
        Poly { vars, terms }.trimmed()
    }

    /// Drops variables that no longer occur.
    fn trimmed(mut self) -> Self {
        if self.terms.is_empty() {
            self.vars = empty_vars();
            return self;
        }
        let n = self.vars.len();
        let used: Vec<bool> = (0..n)
            .map(|k| self.terms.iter().any(|(e, _)| e[k] != 0))
            .collect();
        if used.iter().all(|&u| u) {
            return self;
        }
        let vars: Vec<Symbol> = (0..n)
            .filter(|&k| used[k])
            .map(|k| self.vars[k].clone())
            .collect();
        let terms = self
            .terms
            .into_iter()
            .map(|(e, c)| {
                let ne: Exps = (0..n).filter(|&k| used[k]).map(|k| e[k]).collect();
                (ne, c)
            })
            .collect();
        Poly {
            vars: Arc::from(vars),
            terms,
        }
    }

    pub fn vars(&self) -> &[Symbol] {
        &self.vars
    }

    pub fn terms(&self) -> &[(Exps, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn as_constant(&self) -> Option<BigInt> {
        if self.terms.is_empty() {
            Some(BigInt::zero())
        } else if self.vars.is_empty() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.vars.is_empty() && self.terms.len() == 1 && self.terms[0].1.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.terms
            .first()
            .map(|t| t.1.clone())
            .unwrap_or_else(BigInt::zero)
    }

    pub fn var_index(&self, v: &Symbol) -> Option<usize> {
        self.vars.binary_search(v).ok()
    }

    pub fn contains_var(&self, v: &Symbol) -> bool {
        self.var_index(v).is_some()
    }

    /// Terms re-expressed over a superset of this polynomial's variables.
    fn terms_over(&self, vars: &Arc<[Symbol]>) -> Vec<(Exps, BigInt)> {
        if same_vars(&self.vars, vars) {
            return self.terms.clone();
        }
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.binary_search(v).expect("superset of variables"))
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut ne: Exps = SmallVec::from_elem(0, vars.len());
                for (k, &pos) in map.iter().enumerate() {
                    ne[pos] = e[k];
                }
                (ne, c.clone())
            })
            .collect()
    }

    fn merge_add(a: &[(Exps, BigInt)], b: &[(Exps, BigInt)], negate_b: bool) -> Vec<(Exps, BigInt)> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate_b { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        out
    }

    fn add_impl(&self, other: &Poly, negate: bool) -> Poly {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other } else { other.clone() };
        }
        if same_vars(&self.vars, &other.vars) {
            let t = Poly::merge_add(&self.terms, &other.terms, negate);
            return Poly::from_sorted(self.vars.clone(), t);
        }
        let vars = union_vars(&self.vars, &other.vars);
        let a = self.terms_over(&vars);
        let b = other.terms_over(&vars);
        Poly::from_sorted(vars.clone(), Poly::merge_add(&a, &b, negate))
    }

    fn mul_impl(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if self.is_constant() {
            return other.scale(&self.terms[0].1);
        }
        if other.is_constant() {
            return self.scale(&other.terms[0].1);
        }
        let vars = union_vars(&self.vars, &other.vars);
        if vars.len() == 1 {
            let (_, da) = self.to_dense().expect("univariate");
            let (_, db) = other.to_dense().expect("univariate");
            return Poly::from_dense(&vars[0], dense_mul(&da, &db));
        }
        let a = self.terms_over(&vars);
        let b = other.terms_over(&vars);
        let mut acc: HashMap<Exps, BigInt> = HashMap::with_capacity(a.len() * b.len() / 2 + 1);
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let e: Exps = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                let prod = ca * cb;
                match acc.get_mut(&e) {
                    Some(v) => *v += prod,
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        let mut terms: Vec<(Exps, BigInt)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|x, y| y.0.cmp(&x.0));
        Poly::from_sorted(vars, terms)
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Non-negative gcd of all coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Exact division of every coefficient by an integer.
    pub fn div_int(&self, d: &BigInt) -> Poly {
        if d.is_one() {
            return self.clone();
        }
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    debug_assert!((c % d).is_zero());
                    (e.clone(), c / d)
                })
                .collect(),
        }
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut g = self.content();
        if self.leading_coeff().is_negative() {
            g = -g;
        }
        self.div_int(&g)
    }

    /// Componentwise minimum of exponents: the largest monomial dividing `self`.
    pub fn min_exps(&self) -> Exps {
        let n = self.vars.len();
        let mut m: Exps = SmallVec::from_elem(u32::MAX, n);
        for (e, _) in &self.terms {
            for k in 0..n {
                m[k] = m[k].min(e[k]);
            }
        }
        if self.terms.is_empty() {
            m.iter_mut().for_each(|x| *x = 0);
        }
        m
    }

    /// Monomial content as (variable, exponent) pairs.
    pub fn monomial_content(&self) -> Vec<(Symbol, u32)> {
        let m = self.min_exps();
        self.vars
            .iter()
            .zip(m.iter())
            .filter(|(_, &e)| e > 0)
            .map(|(v, &e)| (v.clone(), e))
            .collect()
    }

    /// Multiplies by `prod v^e`.
    pub fn mul_monomial(&self, mono: &[(Symbol, u32)]) -> Poly {
        if mono.is_empty() || self.is_zero() {
            return self.clone();
        }
        let mut m = Poly::one();
        for (v, e) in mono {
            m = &m * &Poly::monomial(v, *e, BigInt::one());
        }
        self * &m
    }

    /// Divides by `prod v^e`; every term must be divisible.
    pub fn div_monomial(&self, mono: &[(Symbol, u32)]) -> Poly {
        if mono.is_empty() || self.is_zero() {
            return self.clone();
        }
        let idx: Vec<(usize, u32)> = mono
            .iter()
            .map(|(v, e)| (self.var_index(v).expect("monomial variable present"), *e))
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut ne = e.clone();
                for &(k, d) in &idx {
                    ne[k] -= d;
                }
                (ne, c.clone())
            })
            .collect();
        Poly::from_sorted(self.vars.clone(), terms)
    }

    pub fn degree_in(&self, v: &Symbol) -> u32 {
        match self.var_index(v) {
            None => 0,
            Some(k) => self.terms.iter().map(|(e, _)| e[k]).max().unwrap_or(0),
        }
    }

    /// Gcd of all exponents of `v` (0 when `v` does not occur).
    pub fn exponent_gcd(&self, v: &Symbol) -> u32 {
        match self.var_index(v) {
            None => 0,
            Some(k) => self.terms.iter().fold(0u32, |g, (e, _)| g.gcd(&e[k])),
        }
    }

    /// Coefficients with respect to `v`: entry `d` is the coefficient of `v^d`.
    pub fn coefficients_in(&self, v: &Symbol) -> Vec<Poly> {
        let Some(k) = self.var_index(v) else {
            return vec![self.clone()];
        };
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Exps, BigInt)>> = vec![Vec::new(); deg + 1];
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let d = ne[k] as usize;
            ne[k] = 0;
            buckets[d].push((ne, c.clone()));
        }
        buckets
            .into_iter()
            .map(|t| Poly::from_sorted(self.vars.clone(), t))
            .collect()
    }

    /// Inverse of [`Poly::coefficients_in`].
    pub fn from_coefficients_in(v: &Symbol, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (d, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = &out + &(c * &Poly::monomial(v, d as u32, BigInt::one()));
        }
        out
    }

    /// Replaces `v` by `v^k` (k >= 1).
    pub fn substitute_power(&self, v: &Symbol, k: u32) -> Poly {
        assert!(k >= 1);
        match self.var_index(v) {
            None => self.clone(),
            Some(idx) => {
                if k == 1 {
                    return self.clone();
                }
                let terms = self
                    .terms
                    .iter()
                    .map(|(e, c)| {
                        let mut ne = e.clone();
                        ne[idx] *= k;
                        (ne, c.clone())
                    })
                    .collect();
                // multiplying one coordinate by k preserves lex order
                Poly::from_sorted(self.vars.clone(), terms)
            }
        }
    }

    /// Replaces `v^g` by `v`; every exponent of `v` must be a multiple of `g`.
    pub fn deflate(&self, v: &Symbol, g: u32) -> Poly {
        match self.var_index(v) {
            None => self.clone(),
            Some(idx) => {
                let terms = self
                    .terms
                    .iter()
                    .map(|(e, c)| {
                        let mut ne = e.clone();
                        debug_assert_eq!(ne[idx] % g, 0);
                        ne[idx] /= g;
                        (ne, c.clone())
                    })
                    .collect();
                Poly::from_sorted(self.vars.clone(), terms)
            }
        }
    }

    /// Dense coefficient vector (index = degree) for polynomials in at most one variable.
    pub fn to_dense(&self) -> Option<(Option<Symbol>, Vec<BigInt>)> {
        match self.vars.len() {
            0 => Some((None, vec![self.as_constant().unwrap_or_default()])),
            1 => {
                let deg = self.terms[0].0[0] as usize;
                let mut d = vec![BigInt::zero(); deg + 1];
                for (e, c) in &self.terms {
                    d[e[0] as usize] = c.clone();
                }
                Some((Some(self.vars[0].clone()), d))
            }
            _ => None,
        }
    }

    pub fn from_dense(v: &Symbol, coeffs: Vec<BigInt>) -> Poly {
        let vars: Arc<[Symbol]> = Arc::from(vec![v.clone()]);
        let mut terms = Vec::new();
        for (d, c) in coeffs.into_iter().enumerate().rev() {
            if !c.is_zero() {
                let mut e = Exps::new();
                e.push(d as u32);
                terms.push((e, c));
            }
        }
        Poly::from_sorted(vars, terms)
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self` over the integers.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = d.as_constant() {
            if self.terms.iter().all(|(_, x)| (x % &c).is_zero()) {
                return Some(self.div_int(&c));
            }
            return None;
        }
        let vars = union_vars(&self.vars, &d.vars);
        if vars.len() == 1 {
            let (_, a) = self.to_dense()?;
            let (_, b) = d.to_dense()?;
            return dense_div_exact(&a, &b).map(|q| Poly::from_dense(&vars[0], q));
        }
        if !d.vars.iter().all(|v| self.contains_var(v)) {
            return None;
        }
        let dt = d.terms_over(&vars);
        let (ld_e, ld_c) = dt[0].clone();
        let mut rem = Poly::from_sorted(vars.clone(), self.terms_over(&vars));
        let mut quot: Vec<(Exps, BigInt)> = Vec::new();
        while !rem.is_zero() {
            let rt = rem.terms_over(&vars);
            let (re, rc) = &rt[0];
            if !re.iter().zip(ld_e.iter()).all(|(x, y)| x >= y) {
                return None;
            }
            let (qc, r) = rc.div_rem(&ld_c);
            if !r.is_zero() {
                return None;
            }
            let qe: Exps = re.iter().zip(ld_e.iter()).map(|(x, y)| x - y).collect();
            let sub: Vec<(Exps, BigInt)> = dt
                .iter()
                .map(|(e, c)| (e.iter().zip(qe.iter()).map(|(x, y)| x + y).collect(), c * &qc))
                .collect();
            let st = Poly::merge_add(&rt, &sub, true);
            quot.push((qe, qc));
            rem = Poly::from_sorted(vars.clone(), st);
        }
        Some(Poly::from_terms(vars, quot))
    }

    /// Evaluates at integer points given by `value`.
    pub fn eval_int(&self, value: impl Fn(&Symbol) -> BigInt) -> BigInt {
        let vals: Vec<BigInt> = self.vars.iter().map(&value).collect();
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, &p) in e.iter().enumerate() {
                t *= num_traits::pow(vals[k].clone(), p as usize);
            }
            acc += t;
        }
        acc
    }
}

pub(crate) fn dense_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    let bn: Vec<(usize, &BigInt)> = b.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for &(j, y) in &bn {
            out[i + j] += x * y;
        }
    }
    out
}

fn dense_trim(v: &mut Vec<BigInt>) {
    while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Exact dense division over the integers.
pub(crate) fn dense_div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    dense_trim(&mut a);
    dense_trim(&mut b);
    if b.len() == 1 && b[0].is_zero() {
        return None;
    }
    if a.len() == 1 && a[0].is_zero() {
        return Some(vec![BigInt::zero()]);
    }
    if a.len() < b.len() {
        return None;
    }
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let top = &a[k + db];
        if top.is_zero() {
            continue;
        }
        let (qc, r) = top.div_rem(&lb);
        if !r.is_zero() {
            return None;
        }
        for (j, bc) in b.iter().enumerate() {
            if !bc.is_zero() {
                a[k + j] -= &qc * bc;
            }
        }
        q[k] = qc;
    }
    if a[..db].iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(q)
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.add_impl(rhs, false)
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.add_impl(rhs, true)
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_impl(rhs)
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mono: Vec<String> = self
                .vars
                .iter()
                .zip(e.iter())
                .filter(|(_, &p)| p > 0)
                .map(|(v, &p)| if p == 1 { v.to_string() } else { format!("{v}^{p}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{abs}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}
