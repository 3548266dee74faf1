//! Polynomial gcd over the integers.
//!
//! Univariate inputs go through a small-prime modular algorithm with Chinese
//! remaindering; multivariate inputs are reduced by monomial and integer
//! content, exponent deflation and variable separation before falling back to
//! a recursive primitive remainder sequence.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::{dense_div_exact, Poly};
use crate::symbol::Symbol;

/// Gcd normalized to positive leading coefficient, including integer content.
///
/// `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return normalize_sign(b);
    }
    if b.is_zero() {
        return normalize_sign(a);
    }
    let ca = a.content();
    let cb = b.content();
    let c = ca.gcd(&cb);
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
    let pa = a.div_monomial(&ma).div_int(&ca);
    let pb = b.div_monomial(&mb).div_int(&cb);
    let g = gcd_primitive(&pa, &pb);
    g.scale(&c).mul_monomial(&mono)
}

fn normalize_sign(p: &Poly) -> Poly {
    if p.leading_coeff().is_negative() {
        -p
    } else {
        p.clone()
    }
}

/// Gcd of two nonzero polynomials with unit integer content and no monomial
/// factor. Returns a primitive polynomial with positive leading coefficient.
fn gcd_primitive(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.primitive();
    }
    // separate variables occurring in only one argument
    for v in a.vars() {
        if !b.contains_var(v) {
            return gcd_with_coefficients(b, &a.coefficients_in(v));
        }
    }
    for v in b.vars() {
        if !a.contains_var(v) {
            return gcd_with_coefficients(a, &b.coefficients_in(v));
        }
    }
    // both have the same variable set and all exponents of some variable
    // share a common factor: work in the deflated ring
    for v in a.vars() {
        let g = a.exponent_gcd(v).gcd(&b.exponent_gcd(v));
        if g > 1 {
            let d = gcd_primitive(&a.deflate(v, g), &b.deflate(v, g));
            return d.substitute_power(v, g);
        }
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if large.div_exact(small).is_some() {
        return small.primitive();
    }
    if a.vars().len() == 1 {
        let v = a.vars()[0].clone();
        let (_, da) = a.to_dense().expect("univariate");
        let (_, db) = b.to_dense().expect("univariate");
        let g = modular_gcd(&da, &db).unwrap_or_else(|| dense_prs_gcd(&da, &db));
        return Poly::from_dense(&v, g).primitive();
    }
    prs_gcd(a, b)
}

/// `gcd(p, c_0, c_1, ...)`, stopping as soon as it becomes 1.
fn gcd_with_coefficients(p: &Poly, coeffs: &[Poly]) -> Poly {
    let mut g = p.clone();
    let mut order: Vec<&Poly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    order.sort_by_key(|c| c.len());
    for c in order {
        g = gcd(&g, c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g.primitive()
}

/// Recursive primitive PRS in the variable of smallest degree.
fn prs_gcd(a: &Poly, b: &Poly) -> Poly {
    let v = a
        .vars()
        .iter()
        .min_by_key(|v| a.degree_in(v).max(b.degree_in(v)))
        .expect("non-constant")
        .clone();
    let ca = a.coefficients_in(&v);
    let cb = b.coefficients_in(&v);
    let conta = content_of(&ca);
    let contb = content_of(&cb);
    let cont = gcd(&conta, &contb);
    let mut r0 = divide_all(&ca, &conta);
    let mut r1 = divide_all(&cb, &contb);
    if r0.len() < r1.len() {
        std::mem::swap(&mut r0, &mut r1);
    }
    while !(r1.len() == 1 && r1[0].is_zero()) {
        if r1.len() == 1 {
            // nonzero constant in v: the primitive gcd in v is trivial
            return cont.primitive();
        }
        let r = pseudo_rem(&r0, &r1);
        r0 = r1;
        if r.is_empty() {
            r1 = vec![Poly::zero()];
        } else {
            let c = content_of(&r);
            r1 = divide_all(&r, &c);
        }
    }
    let pp = Poly::from_coefficients_in(&v, &r0);
    let pp = normalize_sign(&pp.div_int(&pp.content()));
    (&pp * &cont).primitive()
}

fn content_of(cs: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    let mut order: Vec<&Poly> = cs.iter().filter(|c| !c.is_zero()).collect();
    order.sort_by_key(|c| c.len());
    for c in order {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn divide_all(cs: &[Poly], d: &Poly) -> Vec<Poly> {
    if d.is_one() {
        return cs.to_vec();
    }
    cs.iter()
        .map(|c| c.div_exact(d).expect("content divides every coefficient"))
        .collect()
}

/// Pseudo-remainder of dense coefficient vectors (index = degree); the result
/// has trailing zeros removed and is empty when the remainder vanishes.
fn pseudo_rem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: Vec<Poly> = a.to_vec();
    trim_polys(&mut r);
    while !r.is_empty() && r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        let mut next: Vec<Poly> = r.iter().map(|c| c * lb).collect();
        for (j, bc) in b.iter().enumerate() {
            if !bc.is_zero() {
                next[j + shift] = &next[j + shift] - &(bc * &lr);
            }
        }
        r = next;
        trim_polys(&mut r);
    }
    r
}

fn trim_polys(v: &mut Vec<Poly>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn dense_content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn dense_primitive(v: &[BigInt]) -> Vec<BigInt> {
    let mut g = dense_content(v);
    if v.last().is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|c| c / &g).collect()
}

fn dense_trim(v: &mut Vec<BigInt>) {
    while v.len() > 1 && v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Primitive PRS on dense univariate integer polynomials.
fn dense_prs_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r0 = dense_primitive(a);
    let mut r1 = dense_primitive(b);
    dense_trim(&mut r0);
    dense_trim(&mut r1);
    if r0.len() < r1.len() {
        std::mem::swap(&mut r0, &mut r1);
    }
    loop {
        if r1.len() == 1 {
            if r1[0].is_zero() {
                return dense_primitive(&r0);
            }
            return vec![BigInt::one()];
        }
        let db = r1.len() - 1;
        let lb = r1[db].clone();
        let mut r = r0.clone();
        while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            let shift = dr - db;
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (j, bc) in r1.iter().enumerate() {
                r[j + shift] -= bc * &lr;
            }
            dense_trim(&mut r);
        }
        r0 = r1;
        r1 = if r.len() == 1 && r[0].is_zero() {
            r
        } else {
            dense_primitive(&r)
        };
    }
}

/// Primes just below 2^31, largest first.
pub(crate) struct Primes {
    next: u64,
}

impl Primes {
    pub(crate) fn new() -> Self {
        Primes { next: (1u64 << 31) - 1 }
    }
}

impl Iterator for Primes {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while self.next > 3 {
            let n = self.next;
            self.next -= 2;
            if is_prime_u64(n) {
                return Some(n);
            }
        }
        None
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin, valid for all 64-bit inputs.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn reduce(v: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut out: Vec<u64> = v
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().expect("residue fits"))
        .collect();
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Monic gcd over GF(p).
fn gcd_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    loop {
        while r1.len() > 1 && *r1.last().unwrap() == 0 {
            r1.pop();
        }
        if r1.len() == 1 && r1[0] == 0 {
            break;
        }
        // r0 mod r1
        while r0.len() >= r1.len() && !(r0.len() == 1 && r0[0] == 0) {
            let lead = *r0.last().unwrap();
            if lead == 0 {
                r0.pop();
                if r0.is_empty() {
                    r0.push(0);
                }
                continue;
            }
            let f = mul_mod(lead, inv_mod(*r1.last().unwrap(), p), p);
            let shift = r0.len() - r1.len();
            for (j, &c) in r1.iter().enumerate() {
                let t = mul_mod(f, c, p);
                r0[j + shift] = (r0[j + shift] + p - t) % p;
            }
            r0.pop();
            if r0.is_empty() {
                r0.push(0);
            }
        }
        while r0.len() > 1 && *r0.last().unwrap() == 0 {
            r0.pop();
        }
        std::mem::swap(&mut r0, &mut r1);
    }
    let l = inv_mod(*r0.last().unwrap(), p);
    r0.iter().map(|&c| mul_mod(c, l, p)).collect()
}

fn symmetric(c: &BigInt, m: &BigInt, half: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r > half {
        r - m
    } else {
        r
    }
}

/// Modular gcd of primitive dense integer polynomials. `None` if the prime
/// supply runs out before the candidate verifies.
fn modular_gcd(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    dense_trim(&mut a);
    dense_trim(&mut b);
    let la = a.last().unwrap().clone();
    let lb = b.last().unwrap().clone();
    let lc = la.gcd(&lb);
    let mut deg = usize::MAX;
    let mut modulus = BigInt::one();
    let mut image: Vec<BigInt> = Vec::new();
    let mut last_candidate: Option<Vec<BigInt>> = None;
    for (used, p) in Primes::new().enumerate() {
        if used > 4000 {
            return None;
        }
        let pb = BigInt::from(p);
        if (&la % &pb).is_zero() || (&lb % &pb).is_zero() {
            continue;
        }
        let ap = reduce(&a, p);
        let bp = reduce(&b, p);
        let g = gcd_mod(&ap, &bp, p);
        let gd = g.len() - 1;
        if gd == 0 {
            return Some(vec![BigInt::one()]);
        }
        let lcp = lc.mod_floor(&pb).to_u64().unwrap();
        let g: Vec<BigInt> = g.iter().map(|&c| BigInt::from(mul_mod(c, lcp, p))).collect();
        if gd > deg {
            continue;
        }
        if gd < deg {
            deg = gd;
            modulus = pb;
            image = g;
            last_candidate = None;
            continue;
        }
        // combine by CRT: x = image mod modulus, x = g mod p
        let minv = inv_mod(modulus.mod_floor(&pb).to_u64().unwrap(), p);
        let minv = BigInt::from(minv);
        for (x, y) in image.iter_mut().zip(g.iter()) {
            let diff = (y - &*x).mod_floor(&pb);
            let t = (diff * &minv).mod_floor(&pb);
            *x += &modulus * t;
        }
        modulus *= &pb;
        let half = &modulus / 2;
        let cand: Vec<BigInt> = image.iter().map(|c| symmetric(c, &modulus, &half)).collect();
        if last_candidate.as_ref() == Some(&cand) {
            let pp = dense_primitive(&cand);
            if dense_div_exact(&a, &pp).is_some() && dense_div_exact(&b, &pp).is_some() {
                return Some(pp);
            }
        }
        last_candidate = Some(cand);
    }
    None
}
