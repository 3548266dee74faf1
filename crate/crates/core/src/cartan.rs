//! Finite-type Cartan data and quantum Cartan matrices.
//!
//! Node numbering is Bourbaki's. Symmetrizers are `d_i = (α_i, α_i)/2`
//! normalized so that short roots have `d_i = 1`:
//!
//! | type | d |
//! |------|---|
//! | A_r, D_r, E_r | (1, ..., 1) |
//! | B_r | (2, ..., 2, 1) |
//! | C_r | (1, ..., 1, 2) |
//! | F4 | (2, 2, 1, 1) |
//! | G2 | (1, 3) |
//!
//! With `b_ij = (α_i, α_j)` the Cartan matrix is `c_ij = b_ij / d_i`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use qtrunc_exact::{ParamField, Poly, Symbol};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("invalid finite type {0}")]
    InvalidType(String),
    #[error("quantum Cartan matrix is singular")]
    SingularMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

/// A finite type such as `A2` or `G2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self, CartanError> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(CartanError::InvalidType(format!("{}{}", family.letter(), rank)))
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for CartanType {
    type Err = CartanError;
    fn from_str(s: &str) -> Result<Self, CartanError> {
        let s = s.trim();
        let bad = || CartanError::InvalidType(s.to_string());
        let mut chars = s.chars();
        let fam = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(bad()),
        };
        let rest = chars.as_str().trim_start_matches('_');
        let rank: usize = rest.parse().map_err(|_| bad())?;
        CartanType::new(fam, rank).map_err(|_| bad())
    }
}

impl Serialize for CartanType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CartanType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All data attached to a finite type. Nodes are 0-based internally.
#[derive(Debug, Clone)]
pub struct CartanDatum {
    kind: CartanType,
    c: Vec<Vec<i64>>,
    d: Vec<i64>,
    b: Vec<Vec<i64>>,
    lacing: i64,
    dual_coxeter: i64,
    bar: Vec<usize>,
    bq: Vec<Vec<ParamField>>,
    cq: Vec<Vec<ParamField>>,
    dq: Vec<ParamField>,
    /// `B̃ = adj / det` with Laurent entries in `s`.
    adj: Vec<Vec<ParamField>>,
    det: ParamField,
    btilde: Vec<Vec<ParamField>>,
}

fn edges(t: CartanType) -> Vec<(usize, usize)> {
    let r = t.rank;
    let path = |n: usize| (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect::<Vec<_>>();
    match t.family {
        Family::A | Family::B | Family::C | Family::F | Family::G => path(r),
        Family::D => {
            let mut e = path(r - 1);
            e.push((r - 3, r - 1));
            e
        }
        Family::E => {
            let mut e = vec![(0, 2), (1, 3)];
            for i in 2..r - 1 {
                e.push((i, i + 1));
            }
            e
        }
    }
}

fn symmetrizers(t: CartanType) -> Vec<i64> {
    let r = t.rank;
    match t.family {
        Family::A | Family::D | Family::E => vec![1; r],
        Family::B => {
            let mut d = vec![2; r];
            d[r - 1] = 1;
            d
        }
        Family::C => {
            let mut d = vec![1; r];
            d[r - 1] = 2;
            d
        }
        Family::F => vec![2, 2, 1, 1],
        Family::G => vec![1, 3],
    }
}

fn dual_coxeter(t: CartanType) -> i64 {
    let r = t.rank as i64;
    match (t.family, r) {
        (Family::A, _) => r + 1,
        (Family::B, _) => 2 * r - 1,
        (Family::C, _) => r + 1,
        (Family::D, _) => 2 * r - 2,
        (Family::E, 6) => 12,
        (Family::E, 7) => 18,
        (Family::E, _) => 30,
        (Family::F, _) => 9,
        (Family::G, _) => 4,
    }
}

fn bar_involution(t: CartanType) -> Vec<usize> {
    let r = t.rank;
    let mut p: Vec<usize> = (0..r).collect();
    match t.family {
        Family::A => p.reverse(),
        Family::D if r % 2 == 1 => p.swap(r - 2, r - 1),
        Family::E if r == 6 => {
            p.swap(0, 5);
            p.swap(2, 4);
        }
        _ => {}
    }
    p
}

impl CartanDatum {
    pub fn build(kind: CartanType) -> Result<CartanDatum, CartanError> {
        let kind = CartanType::new(kind.family, kind.rank)?;
        let r = kind.rank;
        let d = symmetrizers(kind);
        let mut b = vec![vec![0i64; r]; r];
        for i in 0..r {
            b[i][i] = 2 * d[i];
        }
        for (i, j) in edges(kind) {
            let v = -d[i].max(d[j]);
            b[i][j] = v;
            b[j][i] = v;
        }
        let c: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| b[i][j] / d[i]).collect()).collect();
        let lacing = *d.iter().max().unwrap();
        let bq: Vec<Vec<ParamField>> = (0..r)
            .map(|i| (0..r).map(|j| ParamField::qint(b[i][j], 1)).collect())
            .collect();
        let cq: Vec<Vec<ParamField>> = (0..r)
            .map(|i| (0..r).map(|j| ParamField::qint(c[i][j], d[i])).collect())
            .collect();
        let dq: Vec<ParamField> = d.iter().map(|&di| ParamField::qint(di, 1)).collect();
        let (adj, det) = fraction_free_inverse(&b)?;
        let dinv = det.inv().map_err(|_| CartanError::SingularMatrix)?;
        let btilde: Vec<Vec<ParamField>> = adj
            .iter()
            .map(|row| row.iter().map(|x| x * &dinv).collect())
            .collect();
        let datum = CartanDatum {
            kind,
            c,
            d,
            b,
            lacing,
            dual_coxeter: dual_coxeter(kind),
            bar: bar_involution(kind),
            bq,
            cq,
            dq,
            adj,
            det,
            btilde,
        };
        if !datum.inverse_checks() {
            return Err(CartanError::SingularMatrix);
        }
        Ok(datum)
    }

    /// Parses a label such as `"B2"` and builds the datum.
    pub fn from_label(label: &str) -> Result<CartanDatum, CartanError> {
        CartanDatum::build(label.parse()?)
    }

    fn inverse_checks(&self) -> bool {
        let p = mat_mul(&self.bq, &self.btilde);
        is_identity(&p)
    }

    pub fn kind(&self) -> CartanType {
        self.kind
    }

    pub fn label(&self) -> String {
        self.kind.to_string()
    }

    pub fn rank(&self) -> usize {
        self.kind.rank
    }

    /// `c_ij` (0-based).
    pub fn c(&self, i: usize, j: usize) -> i64 {
        self.c[i][j]
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.c
    }

    pub fn symmetrized(&self) -> &[Vec<i64>] {
        &self.b
    }

    pub fn d(&self, i: usize) -> i64 {
        self.d[i]
    }

    pub fn symmetrizers(&self) -> &[i64] {
        &self.d
    }

    /// `r^∨ = max d_i`.
    pub fn lacing(&self) -> i64 {
        self.lacing
    }

    pub fn dual_coxeter(&self) -> i64 {
        self.dual_coxeter
    }

    /// `r^∨ h^∨`.
    pub fn shift(&self) -> i64 {
        self.lacing * self.dual_coxeter
    }

    pub fn bar(&self, i: usize) -> usize {
        self.bar[i]
    }

    pub fn bar_permutation(&self) -> &[usize] {
        &self.bar
    }

    /// `q_i = q^{d_i}`.
    pub fn q_i(&self, i: usize) -> ParamField {
        ParamField::q_pow(self.d[i])
    }

    pub fn b_matrix(&self) -> &[Vec<ParamField>] {
        &self.bq
    }

    pub fn c_matrix(&self) -> &[Vec<ParamField>] {
        &self.cq
    }

    pub fn d_diagonal(&self) -> &[ParamField] {
        &self.dq
    }

    /// Exact inverse `B̃(q)` of `B(q)`.
    pub fn btilde(&self) -> &[Vec<ParamField>] {
        &self.btilde
    }

    /// `B̃_ij(q^s)` for `s >= 1`.
    pub fn btilde_eval(&self, i: usize, j: usize, s: u32) -> ParamField {
        self.btilde[i][j].substitute_power(s).expect("s >= 1")
    }

    /// Adjugate and determinant of `B(q)` evaluated at `q^s`, so that
    /// `B̃(q^s) = adj(q^s) / det(q^s)`.
    pub fn adjugate_eval(&self, s: u32) -> (Vec<Vec<ParamField>>, ParamField) {
        let adj = self
            .adj
            .iter()
            .map(|row| row.iter().map(|x| x.substitute_power(s).expect("s >= 1")).collect())
            .collect();
        (adj, self.det.substitute_power(s).expect("s >= 1"))
    }

    /// The coordinate `⟨ϖ_i^∨, β⟩` of a root-lattice element given in the basis of simple roots.
    pub fn coweight_pairing(&self, i: usize, beta: &[i64]) -> i64 {
        beta[i]
    }
}

fn mat_mul(a: &[Vec<ParamField>], b: &[Vec<ParamField>]) -> Vec<Vec<ParamField>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
        .collect()
}

fn is_identity(m: &[Vec<ParamField>]) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
    })
}

/// `s^{2m}·[n]_q` as a polynomial in `s`, where `m >= |n| - 1`.
fn shifted_qint(n: i64, m: i64) -> Poly {
    let s = Symbol::s();
    let mut p = Poly::zero();
    let k = n.abs();
    for t in 0..k {
        let e = 2 * (k - 1 - 2 * t) + 2 * m;
        debug_assert!(e >= 0);
        p = &p + &Poly::monomial(&s, e as u32, BigInt::one());
    }
    if n < 0 {
        -&p
    } else {
        p
    }
}

/// Fraction-free Gauss-Jordan elimination on `s^{2m} B(q)`. Returns the
/// adjugate-type matrix and determinant-type scalar with `B^{-1} = adj/det`.
fn fraction_free_inverse(b: &[Vec<i64>]) -> Result<(Vec<Vec<ParamField>>, ParamField), CartanError> {
    let n = b.len();
    let m = b.iter().flatten().map(|x| x.abs()).max().unwrap_or(1) - 1;
    let mut a: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            let mut row: Vec<Poly> = (0..n).map(|j| shifted_qint(b[i][j], m)).collect();
            row.extend((0..n).map(|j| if i == j { Poly::one() } else { Poly::zero() }));
            row
        })
        .collect();
    let mut prev = Poly::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !a[r][k].is_zero()).ok_or(CartanError::SingularMatrix)?;
            a.swap(k, swap);
        }
        let pivot = a[k][k].clone();
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = a[i][k].clone();
            for j in 0..2 * n {
                let v = &(&pivot * &a[i][j]) - &(&f * &a[k][j]);
                a[i][j] = v.div_exact(&prev).ok_or(CartanError::SingularMatrix)?;
            }
        }
        prev = pivot;
    }
    // now a[i][i] = det for all i and the right block is det * M^{-1}
    let det_m = a[0][0].clone();
    let scale = ParamField::s_pow(2 * m);
    let adj = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| &ParamField::from_poly(a[i][n + j].clone()) * &scale)
                .collect()
        })
        .collect();
    Ok((adj, ParamField::from_poly(det_m)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for l in ["A1", "A5", "B3", "C4", "D4", "D5", "E6", "E7", "E8", "F4", "G2"] {
            let t: CartanType = l.parse().unwrap();
            assert_eq!(t.to_string(), l);
        }
        for l in ["A0", "B1", "D3", "E5", "E9", "F3", "G3", "X2", ""] {
            assert!(l.parse::<CartanType>().is_err(), "{l}");
        }
    }

    #[test]
    fn inverse_is_exact_for_all_small_types() {
        for l in ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4"] {
            let cd = CartanDatum::from_label(l).unwrap();
            assert!(cd.inverse_checks(), "{l}");
        }
    }
}
