//! Prime characteristic: Frobenius pushforward presentations, the Kunz
//! regularity test, Fedder's F-purity test and Jacobian smoothness.

use std::collections::BTreeMap;

use crate::algebra::field::Field;
use crate::algebra::monomial::Monomial;
use crate::algebra::poly::{Poly, Ring};
use crate::diffops::require_origin;
use crate::error::{Error, Result};
use crate::groebner::{ideal_colon, Ideal};
use crate::linalg;
use crate::pparts::{fitting_ideal, jacobian_matrix, variety_dimension, ModulePresentation};

fn characteristic(ring: &Ring) -> Result<u64> {
    match ring.field() {
        Field::Prime(p) => Ok(*p),
        Field::Rational => Err(Error::UnsupportedScope(
            "Frobenius methods need a field of prime characteristic".into(),
        )),
    }
}

/// `f = Σ_α u_α^q x^α` with `α ∈ [0, q)^n`; returns the nonzero `(α, u_α)`.
pub fn root_decomposition(f: &Poly, q: u64) -> Vec<(Monomial, Poly)> {
    let ring = f.ring();
    let n = ring.nvars();
    let mut parts: BTreeMap<Monomial, Vec<(Monomial, _)>> = BTreeMap::new();
    for (m, c) in f.terms() {
        let mut alpha = Monomial::one(n);
        let mut k = Monomial::one(n);
        for i in 0..n {
            let e = m.exponent(i) as u64;
            alpha.set_exponent(i, (e % q) as u32);
            k.set_exponent(i, (e / q) as u32);
        }
        // c^(1/q) = c on a prime field.
        parts.entry(alpha).or_default().push((k, c.clone()));
    }
    parts.into_iter().map(|(a, t)| (a, ring.from_terms(t))).collect()
}

/// Inverse of `root_decomposition`.
pub fn reassemble(parts: &[(Monomial, Poly)], q: u64) -> Option<Poly> {
    let (_, first) = parts.first()?;
    let ring = first.ring().clone();
    let mut acc = ring.zero();
    for (a, u) in parts {
        acc = &acc + &u.pow(q as u32).mul_term(a, &ring.field().one());
    }
    Some(acc)
}

fn box_monomials(n: usize, q: u64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    loop {
        out.push(Monomial::from_exponents(&cur));
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            cur[i] += 1;
            if (cur[i] as u64) < q {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// `R^{1/q}` presented over `R` on the basis `x^{α/q}`, `α ∈ [0, q)^n`.
#[derive(Clone, Debug)]
pub struct FrobeniusPresentation {
    pub e: u32,
    pub q: u64,
    pub labels: Vec<Monomial>,
    pub module: ModulePresentation,
    /// `q^d` with `d = dim V(I)`.
    pub expected_rank: u64,
}

pub fn frobenius_pushforward(ideal: &Ideal, e: u32) -> Result<FrobeniusPresentation> {
    let ring = ideal.ring();
    let p = characteristic(ring)?;
    if e == 0 {
        return Err(Error::InvalidInput("the Frobenius power must be positive".into()));
    }
    let q = p
        .checked_pow(e)
        .ok_or_else(|| Error::InvalidInput("p^e overflows".into()))?;
    let n = ring.nvars();
    let labels = box_monomials(n, q);
    let index: BTreeMap<Monomial, usize> = labels.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    for f in ideal.generators() {
        for b in &labels {
            let fb = f.mul_term(b, &ring.field().one());
            let mut row = vec![ring.zero(); labels.len()];
            for (a, u) in root_decomposition(&fb, q) {
                row[index[&a]] = u;
            }
            rows.push(row);
        }
    }
    let d = variety_dimension(ideal)?;
    Ok(FrobeniusPresentation {
        e,
        q,
        module: ModulePresentation::new(ideal, labels.len(), rows),
        labels,
        expected_rank: q.pow(d as u32),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regularity {
    Regular,
    Singular,
}

impl Regularity {
    pub fn as_str(self) -> &'static str {
        match self {
            Regularity::Regular => "REGULAR",
            Regularity::Singular => "SINGULAR",
        }
    }
}

/// Explicit Fitting-ideal evidence for freeness of rank `r`, produced
/// when the number of minors stays under `pparts::MINOR_LIMIT`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FittingEvidence {
    /// `Fitt_r` contains an element that is a unit at the origin.
    pub top_is_unit: bool,
    /// `Fitt_{r-1} = 0` in `R`.
    pub below_vanishes: bool,
}

#[derive(Clone, Debug)]
pub struct KunzReport {
    pub verdict: Regularity,
    pub p: u64,
    pub generators: usize,
    pub expected_rank: u64,
    /// Minimal number of generators of `R^{1/p}` at the origin, read off the presentation.
    pub fiber_dim: u64,
    /// `dim_K S / (I + m^[p])`, an independent count of the same number.
    pub frobenius_colength: u64,
    pub fitting: Option<FittingEvidence>,
}

fn fitting_evidence(m: &ModulePresentation, r: usize) -> Result<Option<FittingEvidence>> {
    let top = match fitting_ideal(m, r) {
        Ok(j) => j,
        Err(Error::Budget { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let top_is_unit = top.generators().iter().any(|g| !g.constant_term().is_zero());
    let below_vanishes = if r == 0 {
        true
    } else {
        match fitting_ideal(m, r - 1) {
            Ok(j) => m.ideal.contains_ideal(&j)?,
            Err(Error::Budget { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
    };
    Ok(Some(FittingEvidence {
        top_is_unit,
        below_vanishes,
    }))
}

/// Kunz: `R` is regular at the origin iff `R^{1/p}` is free there of rank
/// `p^d`. With generic rank `p^d`, freeness is equivalent to needing exactly
/// `p^d` generators at the origin.
pub fn kunz_test(ideal: &Ideal) -> Result<KunzReport> {
    require_origin(ideal)?;
    let ring = ideal.ring();
    let p = characteristic(ring)?;
    let fp = frobenius_pushforward(ideal, 1)?;
    let fiber_dim = fp.module.fiber_dimension()?;
    let colength = ideal
        .sum(&Ideal::frobenius_power_of_maximal(ring, p as u32))
        .k_dimension()?
        .finite()
        .expect("contains a Frobenius power of the maximal ideal");
    let fitting = fitting_evidence(&fp.module, fp.expected_rank as usize)?;
    let verdict = if fiber_dim == fp.expected_rank {
        Regularity::Regular
    } else {
        Regularity::Singular
    };
    Ok(KunzReport {
        verdict,
        p,
        generators: fp.module.ngens,
        expected_rank: fp.expected_rank,
        fiber_dim,
        frobenius_colength: colength,
        fitting,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Purity {
    FPure,
    NotFPure,
}

impl Purity {
    pub fn as_str(self) -> &'static str {
        match self {
            Purity::FPure => "F_PURE",
            Purity::NotFPure => "NOT_F_PURE",
        }
    }
}

#[derive(Clone, Debug)]
pub struct FedderReport {
    pub verdict: Purity,
    pub p: u64,
    /// Reduced Gröbner basis of `(I^[p] : I)`.
    pub colon: Vec<String>,
    /// An element of the colon outside `m^[p]`.
    pub witness: Option<String>,
    /// A monomial of the witness outside `m^[p]`.
    pub witness_monomial: Option<String>,
}

/// Fedder: `R` is F-pure at the origin iff `(I^[p] : I) ⊄ m^[p]`.
pub fn fedder_test(ideal: &Ideal) -> Result<FedderReport> {
    require_origin(ideal)?;
    let ring = ideal.ring();
    let p = characteristic(ring)?;
    let frob_m = Ideal::frobenius_power_of_maximal(ring, p as u32);
    let colon = if ideal.is_zero_ideal() {
        Ideal::unit(ring)
    } else {
        ideal_colon(&ideal.generator_powers(p as u32), ideal)?
    };
    let mut witness = None;
    for g in colon.groebner()? {
        if !frob_m.contains(g)? {
            witness = Some(g.clone());
            break;
        }
    }
    let witness_monomial = witness.as_ref().and_then(|w| {
        w.terms()
            .iter()
            .find(|(m, _)| m.exponents().iter().all(|&e| (e as u64) < p))
            .map(|(m, _)| ring.format_monomial(m))
    });
    Ok(FedderReport {
        verdict: if witness.is_some() {
            Purity::FPure
        } else {
            Purity::NotFPure
        },
        p,
        colon: colon.canonical_generators()?,
        witness: witness.map(|w| w.to_string()),
        witness_monomial,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothness {
    Smooth,
    Singular,
}

impl Smoothness {
    pub fn as_str(self) -> &'static str {
        match self {
            Smoothness::Smooth => "SMOOTH",
            Smoothness::Singular => "SINGULAR",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SmoothnessReport {
    pub verdict: Smoothness,
    pub jacobian_rank: usize,
    pub codim: usize,
    pub dim: usize,
}

/// Jacobian criterion at the origin: rank `d' - d`.
pub fn jacobian_smoothness(ideal: &Ideal) -> Result<SmoothnessReport> {
    require_origin(ideal)?;
    let ring = ideal.ring();
    let d = variety_dimension(ideal)?;
    let codim = ring.nvars() - d;
    let at_origin: Vec<Vec<_>> = jacobian_matrix(ideal)
        .iter()
        .map(|r| r.iter().map(|p| p.constant_term()).collect())
        .collect();
    let jacobian_rank = linalg::rank(ring.field(), &at_origin);
    Ok(SmoothnessReport {
        verdict: if jacobian_rank == codim {
            Smoothness::Smooth
        } else {
            Smoothness::Singular
        },
        jacobian_rank,
        codim,
        dim: d,
    })
}
