//! The scalar field ℚ(s, parameters) with `q = s^2`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::ArithError;
use crate::gcd::gcd;
use crate::poly::Poly;
use crate::symbol::Symbol;

/// Exact rational function `num / den` with integer-coefficient polynomials.
///
/// The representative is kept reduced: common monomials and integer content
/// are always removed, and a full polynomial gcd is taken whenever numerator
/// and denominator are both non-monomial. The denominator has positive
/// leading coefficient.
#[derive(Clone)]
pub struct ParamField {
    num: Poly,
    den: Poly,
}

/// Common factor of two nonzero polynomials. Cheap when either is a monomial.
fn common_factor(a: &Poly, b: &Poly) -> Poly {
    if a.is_monomial() || b.is_monomial() {
        let c = a.content().gcd(&b.content());
        let ma = a.monomial_content();
        let mb = b.monomial_content();
        let mono: Vec<(Symbol, u32)> = ma
            .iter()
            .filter_map(|(v, e)| {
                mb.iter()
                    .find(|(w, _)| w == v)
                    .map(|(_, f)| (v.clone(), (*e).min(*f)))
            })
            .collect();
        Poly::constant(c).mul_monomial(&mono)
    } else {
        gcd(a, b)
    }
}

fn exact(p: &Poly, d: &Poly) -> Poly {
    if d.is_one() {
        return p.clone();
    }
    p.div_exact(d).expect("exact division by a common factor")
}

impl ParamField {
    fn reduce(num: Poly, den: Poly) -> ParamField {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return ParamField::zero();
        }
        let g = common_factor(&num, &den);
        let (num, den) = (exact(&num, &g), exact(&den, &g));
        ParamField::signed(num, den)
    }

    fn signed(num: Poly, den: Poly) -> ParamField {
        if den.leading_coeff().is_negative() {
            ParamField {
                num: -&num,
                den: -&den,
            }
        } else {
            ParamField { num, den }
        }
    }

    /// `num / den`; fails when `den` is zero.
    pub fn from_polys(num: Poly, den: Poly) -> Result<ParamField, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(ParamField::reduce(num, den))
    }

    pub fn from_poly(p: Poly) -> ParamField {
        ParamField {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn zero() -> ParamField {
        ParamField::from_poly(Poly::zero())
    }

    pub fn one() -> ParamField {
        ParamField::from_poly(Poly::one())
    }

    pub fn from_int(n: i64) -> ParamField {
        ParamField::from_poly(Poly::constant(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> ParamField {
        ParamField::from_poly(Poly::constant(n))
    }

    /// `n / d` for integers, `d != 0`.
    pub fn ratio(n: i64, d: i64) -> ParamField {
        assert!(d != 0, "zero denominator");
        ParamField::reduce(Poly::constant(BigInt::from(n)), Poly::constant(BigInt::from(d)))
    }

    pub fn symbol(v: &Symbol) -> ParamField {
        ParamField::from_poly(Poly::var(v))
    }

    /// A free parameter by name.
    pub fn param(name: &str) -> ParamField {
        ParamField::symbol(&Symbol::new(name))
    }

    /// `s = q^(1/2)`.
    pub fn s() -> ParamField {
        ParamField::symbol(&Symbol::s())
    }

    /// `s^k` for any integer `k`.
    pub fn s_pow(k: i64) -> ParamField {
        let m = Poly::monomial(&Symbol::s(), k.unsigned_abs() as u32, BigInt::one());
        if k >= 0 {
            ParamField::from_poly(m)
        } else {
            ParamField {
                num: Poly::one(),
                den: m,
            }
        }
    }

    pub fn q() -> ParamField {
        ParamField::s_pow(2)
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> ParamField {
        ParamField::s_pow(2 * k)
    }

    /// The q-number `[n]_{q^d} = (q^{dn} - q^{-dn}) / (q^d - q^{-d})` for `d >= 1`.
    pub fn qint(n: i64, d: i64) -> ParamField {
        assert!(d >= 1);
        if n == 0 {
            return ParamField::zero();
        }
        let m = n.unsigned_abs() as i64;
        // [m]_{q^d} = sum_{k=0}^{m-1} q^{d(m-1-2k)}
        let mut acc = ParamField::zero();
        for k in 0..m {
            acc = &acc + &ParamField::q_pow(d * (m - 1 - 2 * k));
        }
        if n < 0 {
            -&acc
        } else {
            acc
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// True when the value lies in ℚ.
    pub fn is_rational_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn inv(&self) -> Result<ParamField, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(ParamField::signed(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &ParamField) -> Result<ParamField, ArithError> {
        let inv = other.inv()?;
        Ok(self * &inv)
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, k: i64) -> Result<ParamField, ArithError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let e = k.unsigned_abs() as u32;
        Ok(ParamField {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// Replaces `s` by `s^k`, i.e. `q` by `q^k`; parameters are untouched.
    pub fn substitute_power(&self, k: u32) -> Result<ParamField, ArithError> {
        if k == 0 {
            return Err(ArithError::BadPower(0));
        }
        let s = Symbol::s();
        // a ring endomorphism that is injective keeps coprime pairs coprime
        Ok(ParamField::signed(
            self.num.substitute_power(&s, k),
            self.den.substitute_power(&s, k),
        ))
    }

    /// Multiplies by an integer.
    pub fn scale_int(&self, c: i64) -> ParamField {
        if c == 0 {
            return ParamField::zero();
        }
        let c = BigInt::from(c);
        let g = c.gcd(&self.den.content());
        ParamField::signed(self.num.scale(&(&c / &g)), self.den.div_int(&g))
    }

    /// All generators that occur.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut v: Vec<Symbol> = self.num.vars().to_vec();
        v.extend_from_slice(self.den.vars());
        v.sort();
        v.dedup();
        v
    }

    fn add_impl(&self, other: &ParamField, negate: bool) -> ParamField {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other } else { other.clone() };
        }
        let c = if negate { -&other.num } else { other.num.clone() };
        if self.den == other.den {
            let n = &self.num + &c;
            return ParamField::reduce(n, self.den.clone());
        }
        if self.den.is_one() {
            let n = &(&self.num * &other.den) + &c;
            return ParamField::signed(n, other.den.clone());
        }
        if other.den.is_one() {
            let n = &self.num + &(&c * &self.den);
            return ParamField::signed(n, self.den.clone());
        }
        let g = common_factor(&self.den, &other.den);
        let b1 = exact(&self.den, &g);
        let d1 = exact(&other.den, &g);
        let n = &(&self.num * &d1) + &(&c * &b1);
        let den = &self.den * &d1;
        if n.is_zero() {
            return ParamField::zero();
        }
        if g.is_constant() {
            // gcd(n, b1*d1) = 1 already, only integer content may remain
            let cg = n.content().gcd(&den.content());
            let cg = Poly::constant(cg);
            return ParamField::signed(exact(&n, &cg), exact(&den, &cg));
        }
        let h = common_factor(&n, &g);
        let mut num = exact(&n, &h);
        let mut den = exact(&den, &h);
        let cg = num.content().gcd(&den.content());
        if !cg.is_one() {
            let cg = Poly::constant(cg);
            num = exact(&num, &cg);
            den = exact(&den, &cg);
        }
        ParamField::signed(num, den)
    }

    fn mul_impl(&self, other: &ParamField) -> ParamField {
        if self.is_zero() || other.is_zero() {
            return ParamField::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let g1 = common_factor(&self.num, &other.den);
        let g2 = common_factor(&other.num, &self.den);
        let num = &exact(&self.num, &g1) * &exact(&other.num, &g2);
        let den = &exact(&self.den, &g2) * &exact(&other.den, &g1);
        ParamField::signed(num, den)
    }
}

impl PartialEq for ParamField {
    fn eq(&self, other: &ParamField) -> bool {
        if self.num == other.num && self.den == other.den {
            return true;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for ParamField {}

impl Default for ParamField {
    fn default() -> Self {
        ParamField::zero()
    }
}

impl From<i64> for ParamField {
    fn from(n: i64) -> Self {
        ParamField::from_int(n)
    }
}

impl std::ops::Add for &ParamField {
    type Output = ParamField;
    fn add(self, rhs: &ParamField) -> ParamField {
        self.add_impl(rhs, false)
    }
}

impl std::ops::Sub for &ParamField {
    type Output = ParamField;
    fn sub(self, rhs: &ParamField) -> ParamField {
        self.add_impl(rhs, true)
    }
}

impl std::ops::Mul for &ParamField {
    type Output = ParamField;
    fn mul(self, rhs: &ParamField) -> ParamField {
        self.mul_impl(rhs)
    }
}

impl std::ops::Neg for &ParamField {
    type Output = ParamField;
    fn neg(self) -> ParamField {
        ParamField {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr for ParamField {
            type Output = ParamField;
            fn $m(self, rhs: ParamField) -> ParamField {
                (&self).$m(&rhs)
            }
        }
        impl std::ops::$tr<&ParamField> for ParamField {
            type Output = ParamField;
            fn $m(self, rhs: &ParamField) -> ParamField {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::ops::Neg for ParamField {
    type Output = ParamField;
    fn neg(self) -> ParamField {
        -&self
    }
}

impl std::ops::AddAssign<&ParamField> for ParamField {
    fn add_assign(&mut self, rhs: &ParamField) {
        *self = &*self + rhs;
    }
}

impl std::ops::SubAssign<&ParamField> for ParamField {
    fn sub_assign(&mut self, rhs: &ParamField) {
        *self = &*self - rhs;
    }
}

impl std::ops::MulAssign<&ParamField> for ParamField {
    fn mul_assign(&mut self, rhs: &ParamField) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for ParamField {
    fn sum<I: Iterator<Item = ParamField>>(iter: I) -> Self {
        iter.fold(ParamField::zero(), |a, b| &a + &b)
    }
}

impl std::iter::Product for ParamField {
    fn product<I: Iterator<Item = ParamField>>(iter: I) -> Self {
        iter.fold(ParamField::one(), |a, b| &a * &b)
    }
}

// ---------------------------------------------------------------------------
// rendering

fn render_power(v: &Symbol, e: i64) -> String {
    if let Some(base) = v.root_of() {
        if e % 2 == 0 {
            let k = e / 2;
            if k == 1 {
                base.to_string()
            } else {
                format!("{base}^{k}")
            }
        } else {
            format!("{base}^({e}/2)")
        }
    } else if e == 1 {
        v.to_string()
    } else {
        format!("{v}^{e}")
    }
}

/// Renders `sum c_k m_k` where each term has a rational coefficient
/// `(numerator, denominator)` and signed exponents.
fn render_sum(vars: &[Symbol], terms: &[(Vec<i64>, BigInt, BigInt)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (e, n, d)) in terms.iter().enumerate() {
        let neg = n.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let abs = n.abs();
        let mono: Vec<String> = vars
            .iter()
            .zip(e.iter())
            .filter(|(_, &p)| p != 0)
            .map(|(v, &p)| render_power(v, p))
            .collect();
        let coeff = if d.is_one() {
            abs.to_string()
        } else {
            format!("{abs}/{d}")
        };
        if mono.is_empty() {
            out.push_str(&coeff);
        } else if abs.is_one() && d.is_one() {
            out.push_str(&mono.join("*"));
        } else {
            out.push_str(&coeff);
            out.push('*');
            out.push_str(&mono.join("*"));
        }
    }
    out
}

fn poly_terms(p: &Poly, vars: &[Symbol], shift: &[i64], denom: &BigInt) -> Vec<(Vec<i64>, BigInt, BigInt)> {
    let map: Vec<usize> = p
        .vars()
        .iter()
        .map(|v| vars.binary_search(v).expect("variable listed"))
        .collect();
    p.terms()
        .iter()
        .map(|(e, c)| {
            let mut ex: Vec<i64> = shift.iter().map(|x| -x).collect();
            for (k, &pos) in map.iter().enumerate() {
                ex[pos] += e[k] as i64;
            }
            let g = c.gcd(denom);
            let (mut n, mut d) = (c / &g, denom / &g);
            if d.is_negative() {
                n = -n;
                d = -d;
            }
            (ex, n, d)
        })
        .collect()
}

impl fmt::Display for ParamField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = self.symbols();
        if self.den.is_monomial() {
            // Laurent form
            let dvars = self.den.vars();
            let d_e = &self.den.terms()[0].0;
            let mut shift = vec![0i64; vars.len()];
            for (k, v) in dvars.iter().enumerate() {
                let pos = vars.binary_search(v).unwrap();
                shift[pos] = d_e[k] as i64;
            }
            let dc = self.den.leading_coeff();
            let terms = poly_terms(&self.num, &vars, &shift, &dc);
            return f.write_str(&render_sum(&vars, &terms));
        }
        let zero = vec![0i64; vars.len()];
        let one = BigInt::one();
        let n = render_sum(&vars, &poly_terms(&self.num, &vars, &zero, &one));
        let d = render_sum(&vars, &poly_terms(&self.den, &vars, &zero, &one));
        if self.num.len() > 1 {
            write!(f, "({n})/({d})")
        } else {
            write!(f, "{n}/({d})")
        }
    }
}

impl fmt::Debug for ParamField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(&ParamField::ratio(1, 2) + &ParamField::ratio(1, 3), ParamField::ratio(5, 6));
        assert_eq!(ParamField::ratio(4, -6).to_string(), "-2/3");
    }

    #[test]
    fn q_inverse() {
        let q = ParamField::q();
        assert!((&q * &q.inv().unwrap()).is_one());
        assert_eq!(ParamField::q_pow(-1).to_string(), "q^-1");
        assert_eq!(ParamField::s().to_string(), "q^(1/2)");
    }

    #[test]
    fn qint_square() {
        let two = ParamField::qint(2, 1);
        let lhs = &(&two * &two) - &ParamField::one();
        assert_eq!(lhs, ParamField::qint(3, 1));
        let expect = &(&ParamField::q_pow(2) + &ParamField::one()) + &ParamField::q_pow(-2);
        assert_eq!(lhs, expect);
    }

    #[test]
    fn substitution() {
        let x = &ParamField::q() + &ParamField::q_pow(-1);
        let y = x.substitute_power(2).unwrap();
        assert_eq!(y, &ParamField::q_pow(2) + &ParamField::q_pow(-2));
        let r = x.inv().unwrap().substitute_power(3).unwrap();
        assert_eq!(r, (&ParamField::q_pow(3) + &ParamField::q_pow(-3)).inv().unwrap());
        let aq = &ParamField::param("a") * &ParamField::q();
        assert_eq!(aq.substitute_power(2).unwrap(), &ParamField::param("a") * &ParamField::q_pow(2));
    }

    #[test]
    fn reduced_form_is_canonical() {
        let a = ParamField::param("a");
        let one = ParamField::one();
        // (a^2 - 1)/(a - 1) = a + 1
        let x = (&(&a * &a) - &one).checked_div(&(&a - &one)).unwrap();
        assert_eq!(x.numer(), (&a + &one).numer());
        assert!(x.denom().is_one());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(ParamField::one().checked_div(&ParamField::zero()), Err(ArithError::DivisionByZero));
    }
}
