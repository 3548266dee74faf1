//! Truncated Laurent-offset power series over [`ParamField`].

use std::fmt;

use crate::error::ArithError;
use crate::field::ParamField;

/// Expansion point. Series at infinity are stored in `w = z^{-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    AtZero,
    AtInfinity,
}

impl Direction {
    /// Name of the expansion variable.
    pub fn variable(self) -> &'static str {
        match self {
            Direction::AtZero => "z",
            Direction::AtInfinity => "w",
        }
    }
}

/// `sum_{k=0}^{N} c_k x^{offset+k} + O(x^{offset+N+1})` with `x = z` or `x = z^{-1}`.
#[derive(Clone)]
pub struct PowerSeries {
    direction: Direction,
    offset: i64,
    coeffs: Vec<ParamField>,
}

impl PowerSeries {
    /// Coefficients for exponents `offset, offset+1, ...`; the order is `len - 1`.
    pub fn new(direction: Direction, offset: i64, coeffs: Vec<ParamField>) -> PowerSeries {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        PowerSeries {
            direction,
            offset,
            coeffs,
        }
    }

    /// Constant series `c` known to order `n`.
    pub fn constant(direction: Direction, c: ParamField, n: usize) -> PowerSeries {
        let mut coeffs = vec![ParamField::zero(); n + 1];
        coeffs[0] = c;
        PowerSeries::new(direction, 0, coeffs)
    }

    pub fn one(direction: Direction, n: usize) -> PowerSeries {
        PowerSeries::constant(direction, ParamField::one(), n)
    }

    /// Series of a polynomial `sum c_k x^k` (index = exponent), padded or cut to order `n`.
    pub fn from_polynomial(direction: Direction, coeffs: &[ParamField], n: usize) -> PowerSeries {
        let mut v = vec![ParamField::zero(); n + 1];
        for (k, c) in coeffs.iter().enumerate().take(n + 1) {
            v[k] = c.clone();
        }
        PowerSeries::new(direction, 0, v)
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Number of known coefficients minus one.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Highest known exponent.
    pub fn top(&self) -> i64 {
        self.offset + self.order() as i64
    }

    pub fn coeffs(&self) -> &[ParamField] {
        &self.coeffs
    }

    /// Coefficient of `x^e`: zero below the offset, `None` above the known range.
    pub fn coeff(&self, e: i64) -> Option<ParamField> {
        if e > self.top() {
            None
        } else if e < self.offset {
            Some(ParamField::zero())
        } else {
            Some(self.coeffs[(e - self.offset) as usize].clone())
        }
    }

    fn coeff_ref(&self, e: i64) -> Option<&ParamField> {
        if e < self.offset || e > self.top() {
            None
        } else {
            Some(&self.coeffs[(e - self.offset) as usize])
        }
    }

    fn check_dir(&self, other: &PowerSeries) -> Result<(), ArithError> {
        if self.direction != other.direction {
            Err(ArithError::DirectionMismatch)
        } else {
            Ok(())
        }
    }

    /// Re-expresses the series with a given (lower or equal) offset.
    pub fn with_offset(&self, offset: i64) -> PowerSeries {
        assert!(offset <= self.offset);
        let mut v = vec![ParamField::zero(); (self.offset - offset) as usize];
        v.extend(self.coeffs.iter().cloned());
        PowerSeries::new(self.direction, offset, v)
    }

    /// Drops leading zero coefficients, keeping the top exponent.
    pub fn normalized(&self) -> PowerSeries {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(0) | None => self.clone(),
            Some(k) => PowerSeries::new(self.direction, self.offset + k as i64, self.coeffs[k..].to_vec()),
        }
    }

    /// Keeps exponents up to `offset + n`.
    pub fn truncate(&self, n: usize) -> PowerSeries {
        let n = n.min(self.order());
        PowerSeries::new(self.direction, self.offset, self.coeffs[..=n].to_vec())
    }

    fn add_impl(&self, other: &PowerSeries, negate: bool) -> Result<PowerSeries, ArithError> {
        self.check_dir(other)?;
        let lo = self.offset.min(other.offset);
        let hi = self.top().min(other.top());
        if hi < lo {
            return Ok(PowerSeries::new(self.direction, lo, vec![ParamField::zero()]));
        }
        let coeffs = (lo..=hi)
            .map(|e| {
                let a = self.coeff_ref(e);
                let b = other.coeff_ref(e);
                match (a, b, negate) {
                    (Some(a), Some(b), false) => a + b,
                    (Some(a), Some(b), true) => a - b,
                    (Some(a), None, _) => a.clone(),
                    (None, Some(b), false) => b.clone(),
                    (None, Some(b), true) => -b,
                    (None, None, _) => ParamField::zero(),
                }
            })
            .collect();
        Ok(PowerSeries::new(self.direction, lo, coeffs))
    }

    pub fn add(&self, other: &PowerSeries) -> Result<PowerSeries, ArithError> {
        self.add_impl(other, false)
    }

    pub fn sub(&self, other: &PowerSeries) -> Result<PowerSeries, ArithError> {
        self.add_impl(other, true)
    }

    /// Product at order `min(N_x, N_y)`; offsets add.
    pub fn mul(&self, other: &PowerSeries) -> Result<PowerSeries, ArithError> {
        self.check_dir(other)?;
        let n = self.order().min(other.order());
        let mut coeffs = vec![ParamField::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += &(a * b);
            }
        }
        Ok(PowerSeries::new(self.direction, self.offset + other.offset, coeffs))
    }

    pub fn scale(&self, c: &ParamField) -> PowerSeries {
        PowerSeries::new(
            self.direction,
            self.offset,
            self.coeffs.iter().map(|x| x * c).collect(),
        )
    }

    pub fn neg(&self) -> PowerSeries {
        PowerSeries::new(self.direction, self.offset, self.coeffs.iter().map(|x| -x).collect())
    }

    /// Multiplicative inverse; the coefficient at the offset must be nonzero.
    pub fn invert(&self) -> Result<PowerSeries, ArithError> {
        let x0 = &self.coeffs[0];
        if x0.is_zero() {
            return Err(ArithError::NonInvertibleSeries);
        }
        let inv0 = x0.inv()?;
        let n = self.order();
        let mut y: Vec<ParamField> = Vec::with_capacity(n + 1);
        y.push(inv0.clone());
        for k in 1..=n {
            let mut acc = ParamField::zero();
            for j in 1..=k {
                let xj = &self.coeffs[j];
                if !xj.is_zero() && !y[k - j].is_zero() {
                    acc += &(xj * &y[k - j]);
                }
            }
            y.push(-&(&acc * &inv0));
        }
        Ok(PowerSeries::new(self.direction, -self.offset, y))
    }

    /// `self / other`.
    pub fn div(&self, other: &PowerSeries) -> Result<PowerSeries, ArithError> {
        self.mul(&other.invert()?)
    }

    /// Exponential of a series with vanishing constant term. The result has
    /// offset 0 and is known up to the top exponent of the input.
    pub fn exp(&self) -> Result<PowerSeries, ArithError> {
        if self.top() < 0 {
            return Err(ArithError::NonzeroConstantTerm);
        }
        for e in self.offset..=0.min(self.top()) {
            if !self.coeff(e).expect("in range").is_zero() {
                return Err(ArithError::NonzeroConstantTerm);
            }
        }
        let n = self.top() as usize;
        let x: Vec<ParamField> = (0..=n as i64).map(|e| self.coeff(e).expect("in range")).collect();
        let kx: Vec<ParamField> = x.iter().enumerate().map(|(k, c)| c.scale_int(k as i64)).collect();
        let mut c: Vec<ParamField> = Vec::with_capacity(n + 1);
        c.push(ParamField::one());
        for m in 1..=n {
            let mut acc = ParamField::zero();
            for k in 1..=m {
                if !kx[k].is_zero() && !c[m - k].is_zero() {
                    acc += &(&kx[k] * &c[m - k]);
                }
            }
            c.push(&acc * &ParamField::ratio(1, m as i64));
        }
        Ok(PowerSeries::new(self.direction, 0, c))
    }

    /// Logarithm of a series with offset 0 and constant term 1.
    pub fn log(&self) -> Result<PowerSeries, ArithError> {
        if self.offset != 0 || !self.coeffs[0].is_one() {
            return Err(ArithError::ConstantTermNotOne);
        }
        let n = self.order();
        let x = &self.coeffs;
        let mut y: Vec<ParamField> = Vec::with_capacity(n + 1);
        y.push(ParamField::zero());
        for m in 1..=n {
            let mut acc = ParamField::zero();
            for k in 1..m {
                if !y[k].is_zero() && !x[m - k].is_zero() {
                    acc += &(&y[k].scale_int(k as i64) * &x[m - k]);
                }
            }
            y.push(&x[m] - &(&acc * &ParamField::ratio(1, m as i64)));
        }
        Ok(PowerSeries::new(self.direction, 0, y))
    }

    /// The substitution `z -> c z`. At infinity this multiplies the
    /// coefficient of `w^k` by `c^{-k}`.
    pub fn rescale(&self, c: &ParamField) -> Result<PowerSeries, ArithError> {
        if c.is_zero() {
            return Err(ArithError::ZeroScale);
        }
        let base = match self.direction {
            Direction::AtZero => c.clone(),
            Direction::AtInfinity => c.inv()?,
        };
        let mut p = base.pow(self.offset)?;
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            coeffs.push(x * &p);
            p = &p * &base;
        }
        Ok(PowerSeries::new(self.direction, self.offset, coeffs))
    }

    /// Lowest exponent at which two series differ within their common known
    /// range, or `None` when they agree.
    pub fn first_difference(&self, other: &PowerSeries) -> Result<Option<i64>, ArithError> {
        self.check_dir(other)?;
        let lo = self.offset.min(other.offset);
        let hi = self.top().min(other.top());
        for e in lo..=hi {
            let a = self.coeff(e).expect("in range");
            let b = other.coeff(e).expect("in range");
            if a != b {
                return Ok(Some(e));
            }
        }
        Ok(None)
    }

    /// Agreement up to the smaller of the two known ranges.
    pub fn agrees_with(&self, other: &PowerSeries) -> bool {
        matches!(self.first_difference(other), Ok(None))
    }

    pub fn is_one(&self) -> bool {
        (self.offset..=self.top()).all(|e| {
            let c = self.coeff(e).expect("in range");
            if e == 0 {
                c.is_one()
            } else {
                c.is_zero()
            }
        }) && self.offset <= 0
    }
}

impl PartialEq for PowerSeries {
    fn eq(&self, other: &PowerSeries) -> bool {
        self.direction == other.direction && self.top() == other.top() && self.agrees_with(other)
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.direction.variable();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.offset + k as i64;
            let mut cs = c.to_string();
            let needs_paren = cs.contains(' ') || cs.contains('(');
            let neg = !needs_paren && cs.starts_with('-');
            if neg {
                cs.remove(0);
            }
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let unit = cs == "1";
            match e {
                0 => write!(f, "{cs}")?,
                _ => {
                    let m = if e == 1 { x.to_string() } else { format!("{x}^{e}") };
                    if unit {
                        write!(f, "{m}")?;
                    } else if needs_paren {
                        write!(f, "({cs})*{m}")?;
                    } else {
                        write!(f, "{cs}*{m}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O({x}^{})", self.top() + 1)
    }
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> ParamField {
        ParamField::param("a")
    }

    fn linear(c0: ParamField, c1: ParamField, n: usize) -> PowerSeries {
        PowerSeries::from_polynomial(Direction::AtZero, &[c0, c1], n)
    }

    #[test]
    fn geometric() {
        let n = 8;
        let x = linear(ParamField::one(), -&ParamField::one(), n);
        let inv = x.invert().unwrap();
        assert!(inv.coeffs().iter().all(|c| c.is_one()));
        assert!(x.mul(&inv).unwrap().is_one());
    }

    #[test]
    fn geometric_in_parameter() {
        let n = 6;
        let aq2 = &a() * &ParamField::q_pow(2);
        let x = linear(ParamField::one(), -&aq2, n);
        let mut g = Vec::new();
        for k in 0..=n {
            g.push(aq2.pow(k as i64).unwrap());
        }
        let y = PowerSeries::new(Direction::AtZero, 0, g);
        assert!(x.mul(&y).unwrap().is_one());
    }

    #[test]
    fn exp_log_basic() {
        let n = 6;
        let zero = PowerSeries::constant(Direction::AtZero, ParamField::zero(), n);
        assert!(zero.exp().unwrap().is_one());
        assert!(PowerSeries::one(Direction::AtZero, n).log().unwrap().coeffs().iter().all(|c| c.is_zero()));
        let z = linear(ParamField::zero(), ParamField::one(), n);
        let e = z.exp().unwrap();
        let mut fact = 1i64;
        for (k, c) in e.coeffs().iter().enumerate() {
            if k > 0 {
                fact *= k as i64;
            }
            assert_eq!(*c, ParamField::ratio(1, fact));
        }
        let l = linear(ParamField::one(), -&a(), n).log().unwrap();
        for s in 1..=n {
            let expect = &a().pow(s as i64).unwrap() * &ParamField::ratio(-1, s as i64);
            assert_eq!(l.coeffs()[s], expect);
        }
    }

    #[test]
    fn rescale_round_trip() {
        let x = linear(ParamField::one(), -&a(), 4);
        let q2 = ParamField::q_pow(2);
        let y = x.rescale(&q2).unwrap();
        assert_eq!(y.coeffs()[1], -&(&a() * &q2));
        let back = y.rescale(&q2.inv().unwrap()).unwrap();
        assert_eq!(back, x);
        assert_eq!(x.rescale(&ParamField::zero()).unwrap_err(), ArithError::ZeroScale);
    }

    #[test]
    fn errors() {
        let x = linear(ParamField::one(), a(), 3);
        assert_eq!(x.exp().unwrap_err(), ArithError::NonzeroConstantTerm);
        let y = linear(ParamField::zero(), a(), 3);
        assert_eq!(y.log().unwrap_err(), ArithError::ConstantTermNotOne);
        assert_eq!(y.invert().unwrap_err(), ArithError::NonInvertibleSeries);
        let w = PowerSeries::one(Direction::AtInfinity, 3);
        assert_eq!(x.mul(&w).unwrap_err(), ArithError::DirectionMismatch);
    }
}
