//! Built-in case catalog and the verification suites run over it.
//!
//! Spectral parameters are integer powers of `q`. Besides every single
//! factor `Ψ_{i,q^r}^{±1}`, each type gets a few seeded random products.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use qtrunc_exact::{parse_field, ParamDecls, ParamField};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cartan::CartanDatum;
use crate::lweight::LWeight;
use crate::report::{CheckReport, Failure, SuiteReport};
use crate::series_engine::Engine;
use crate::sl2::{build_module, Sl2Error};
use crate::truncation::plan_truncation;

pub const CATALOG_TYPES: [&str; 4] = ["A1", "A2", "B2", "G2"];
pub const CATALOG_POWERS: [i64; 7] = [-2, -1, 0, 1, 2, 3, 4];
pub const DEFAULT_SEED: u64 = 20;

const RANDOM_PRODUCTS: usize = 8;
const RANDOM_POLYNOMIAL: usize = 4;
const RANDOM_PAIRS: usize = 4;

#[derive(Debug, Clone)]
pub struct CatalogPair {
    pub ms: Vec<LWeight>,
    pub ns: Vec<LWeight>,
}

impl fmt::Display for CatalogPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[LWeight]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "m = [{}]; n = [{}]", join(&self.ms), join(&self.ns))
    }
}

/// Cases for one Cartan type.
#[derive(Debug, Clone)]
pub struct TypeCases {
    pub cartan: Arc<CartanDatum>,
    /// Single factors and random products, mixed signs.
    pub lweights: Vec<LWeight>,
    /// Products with nonnegative exponents.
    pub polynomial: Vec<LWeight>,
    pub pairs: Vec<CatalogPair>,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    pub seed: u64,
    pub types: Vec<TypeCases>,
}

fn psi(cd: &Arc<CartanDatum>, i: usize, r: i64, e: i64) -> LWeight {
    LWeight::factor(cd, i, ParamField::q_pow(r), e).expect("nonzero parameter")
}

fn random_factor(cd: &Arc<CartanDatum>, rng: &mut ChaCha8Rng, pw: &[i64], e: i64) -> LWeight {
    let i = rng.gen_range(0..cd.rank());
    let r = *pw.choose(rng).expect("nonempty");
    psi(cd, i, r, e)
}

fn product(cd: &Arc<CartanDatum>, fs: &[LWeight]) -> LWeight {
    fs.iter().fold(LWeight::unit(cd), |acc, x| acc.mul(x).expect("same type"))
}

pub fn build_catalog(seed: u64) -> Catalog {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pw = CATALOG_POWERS;
    let mut types = Vec::new();
    for label in CATALOG_TYPES {
        let cd = Arc::new(CartanDatum::from_label(label).expect("catalog type"));
        let r = cd.rank();
        let mut lweights = Vec::new();
        let mut polynomial = Vec::new();
        for i in 0..r {
            for &p in &pw {
                for e in [1, -1] {
                    lweights.push(psi(&cd, i, p, e));
                }
                polynomial.push(psi(&cd, i, p, 1));
            }
        }
        let mut k = 0;
        while k < RANDOM_PRODUCTS {
            let len = rng.gen_range(2..=3);
            let mut fs: Vec<LWeight> = (0..len).map(|_| random_factor(&cd, &mut rng, &pw, 1)).collect();
            // mixed signs: at least one factor of each sign
            let flip = rng.gen_range(0..len);
            fs[flip] = fs[flip].inv();
            if len == 3 && rng.gen_bool(0.5) {
                let other = (flip + 1) % len;
                fs[other] = fs[other].inv();
            }
            let w = product(&cd, &fs);
            if w.factors().len() < 2 {
                continue;
            }
            lweights.push(w);
            k += 1;
        }
        for _ in 0..RANDOM_POLYNOMIAL {
            let len = rng.gen_range(2..=3);
            let fs: Vec<LWeight> = (0..len).map(|_| random_factor(&cd, &mut rng, &pw, 1)).collect();
            let w = product(&cd, &fs);
            polynomial.push(w.clone());
            lweights.push(w);
        }

        let mut pairs = Vec::new();
        for i in 0..r {
            pairs.push(CatalogPair { ms: vec![], ns: vec![psi(&cd, i, 0, 1)] });
            pairs.push(CatalogPair { ms: vec![psi(&cd, i, 1, 1)], ns: vec![] });
            pairs.push(CatalogPair { ms: vec![psi(&cd, i, 2, 1)], ns: vec![psi(&cd, (i + 1) % r, -1, 1)] });
        }
        for _ in 0..RANDOM_PAIRS {
            let nm = rng.gen_range(0..=2);
            let nn = rng.gen_range(1..=2);
            let ms = (0..nm).map(|_| random_factor(&cd, &mut rng, &pw, 1)).collect();
            let ns = (0..nn).map(|_| random_factor(&cd, &mut rng, &pw, 1)).collect();
            pairs.push(CatalogPair { ms, ns });
        }
        types.push(TypeCases { cartan: cd, lweights, polynomial, pairs });
    }
    Catalog { seed, types }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Suite {
    Gklo,
    AtRatio,
    Lemma,
    Polynomiality,
    Sl2,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Gklo => "gklo",
            Suite::AtRatio => "at-ratio",
            Suite::Lemma => "lemma",
            Suite::Polynomiality => "polynomiality",
            Suite::Sl2 => "sl2",
            Suite::All => "all",
        }
    }

    pub const NAMES: [&'static str; 6] = ["gklo", "at-ratio", "lemma", "polynomiality", "sl2", "all"];
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Suite, String> {
        Ok(match s {
            "gklo" => Suite::Gklo,
            "at-ratio" => Suite::AtRatio,
            "lemma" => Suite::Lemma,
            "polynomiality" => Suite::Polynomiality,
            "sl2" => Suite::Sl2,
            "all" => Suite::All,
            _ => return Err(format!("unknown suite '{s}' (expected one of {})", Suite::NAMES.join(", "))),
        })
    }
}

fn per_type<F>(catalog: &Catalog, order: usize, run: F) -> Vec<CheckReport>
where
    F: Fn(&Engine, &TypeCases) -> Vec<(usize, CheckReport)> + Sync,
{
    catalog
        .types
        .par_iter()
        .flat_map_iter(|tc| {
            let e = Engine::new(&tc.cartan, order);
            let mut v = run(&e, tc);
            v.sort_by_key(|(k, _)| *k);
            v.into_iter().map(|(_, c)| c)
        })
        .collect()
}

pub fn gklo_suite(catalog: &Catalog, order: usize) -> SuiteReport {
    let checks = per_type(catalog, order, |e, tc| {
        tc.lweights.par_iter().enumerate().map(|(k, f)| (k, e.verify_gklo(f))).collect()
    });
    SuiteReport::from_checks("gklo", order, checks)
}

pub fn at_ratio_suite(catalog: &Catalog, order: usize) -> SuiteReport {
    let checks = per_type(catalog, order, |e, tc| {
        tc.lweights.par_iter().enumerate().map(|(k, f)| (k, e.verify_at_ratio(f))).collect()
    });
    SuiteReport::from_checks("at-ratio", order, checks)
}

pub fn lemma_suite(catalog: &Catalog, order: usize) -> SuiteReport {
    let checks = per_type(catalog, order, |e, tc| {
        tc.polynomial
            .par_iter()
            .enumerate()
            .map(|(k, f)| (k, e.verify_lemma(f).expect("catalog entry is polynomial")))
            .collect()
    });
    SuiteReport::from_checks("lemma", order, checks)
}

/// `p_i(z)` is a polynomial of degree `t_i` for every catalog pair.
pub fn polynomiality_suite(catalog: &Catalog, order: usize) -> SuiteReport {
    let checks = per_type(catalog, order, |e, tc| {
        let cd = &tc.cartan;
        tc.pairs
            .par_iter()
            .enumerate()
            .map(|(k, pair)| {
                let mut rep = CheckReport::new("polynomiality", cd.label(), cd.rank(), pair.to_string(), order);
                let lam = vec![ParamField::one(); cd.rank()];
                match plan_truncation(e, &pair.ms, &pair.ns, &lam, None) {
                    Ok(plan) => {
                        if !plan.truncatable {
                            rep.fail(Failure {
                                node: plan.failing_coordinates.first().copied().unwrap_or(1),
                                side: "t".into(),
                                exponent: 0,
                                expected: "nonnegative integral t".into(),
                                actual: plan.t.join(", "),
                            });
                        }
                        for n in plan.nodes.iter().filter(|n| !n.pass) {
                            rep.fail(Failure {
                                node: n.node,
                                side: "+".into(),
                                exponent: n.degree.unwrap_or(-1),
                                expected: format!("degree {}", n.expected_degree.map_or("?".into(), |d| d.to_string())),
                                actual: n.series.clone(),
                            });
                        }
                    }
                    Err(err) => rep.fail(Failure {
                        node: 0,
                        side: "plan".into(),
                        exponent: 0,
                        expected: "a truncation plan".into(),
                        actual: err.to_string(),
                    }),
                }
                (k, rep)
            })
            .collect()
    });
    SuiteReport::from_checks("polynomiality", order, checks)
}

/// The sl2 module battery with `a = -c` (`c` a square, so `z_1 = sqrt(c) q`)
/// and generic `b`, then the specializations `b = a` and `b = -a`.
pub fn sl2_suite(order: usize, depth: usize) -> Result<SuiteReport, Sl2Error> {
    let d = ParamDecls::new()
        .with_square("c")
        .and_then(|d| d.with_square("b"))
        .expect("fresh names");
    let a = -&d.param("c");
    let b = d.param("b");
    let z1 = &parse_field("sqrt(c)", &d).expect("declared square") * &ParamField::q_pow(1);

    let m = build_module(a.clone(), b, depth, order)?;
    let mut checks = m.battery(Some(&z1))?.checks;

    let cases = [("b = a", a.clone(), true, true), ("b = -a", -&a, true, false)];
    for (label, b, inter, adj) in cases {
        let m = build_module(a.clone(), b, depth, order)?;
        let dr = m.descent_conditions(Some(&z1))?;
        let mut rep = CheckReport::new(&format!("sl2-descent ({label})"), "A1".into(), 1, format!("a = {a}, b = {}", m.b()), order);
        let got_adj = dr.adjoint.as_ref().is_some_and(|x| x.holds);
        if dr.intermediate.holds != inter || got_adj != adj {
            rep.fail(Failure {
                node: 1,
                side: "descent".into(),
                exponent: 0,
                expected: format!("intermediate {inter}, adjoint {adj}"),
                actual: format!("intermediate {}, adjoint {got_adj}", dr.intermediate.holds),
            });
        }
        checks.push(rep);
    }
    Ok(SuiteReport::from_checks("sl2", order, checks))
}

pub fn run_suite(suite: Suite, catalog: &Catalog, order: usize, depth: usize) -> Result<SuiteReport, Sl2Error> {
    Ok(match suite {
        Suite::Gklo => gklo_suite(catalog, order),
        Suite::AtRatio => at_ratio_suite(catalog, order),
        Suite::Lemma => lemma_suite(catalog, order),
        Suite::Polynomiality => polynomiality_suite(catalog, order),
        Suite::Sl2 => sl2_suite(order, depth)?,
        Suite::All => {
            let mut checks = Vec::new();
            for s in [Suite::Gklo, Suite::AtRatio, Suite::Lemma, Suite::Polynomiality, Suite::Sl2] {
                checks.extend(run_suite(s, catalog, order, depth)?.checks);
            }
            SuiteReport::from_checks("all", order, checks)
        }
    })
}
