//! Finite linear group actions on a polynomial ring: averaging, fundamental
//! invariants and their relations, the pseudo-reflection hypothesis and the
//! differential-power dimensions of the quotient singularity.

use std::collections::BTreeMap;

use crate::algebra::field::{Field, Scalar};
use crate::algebra::monomial::{monomials_of_degree, Monomial, MonomialOrder};
use crate::algebra::poly::{Poly, Ring};
use crate::diffops::differential_power;
use crate::error::{Error, Result};
use crate::groebner::{eliminate, fresh_name, Ideal};
use crate::linalg::{self, SparseEchelon, SparseVec};
use crate::pparts::expected_rank;

pub type Matrix = Vec<Vec<Scalar>>;

fn identity(field: &Field, n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { field.one() } else { field.zero() })
                .collect()
        })
        .collect()
}

fn mat_mul(field: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(field.zero(), |acc, k| field.add(&acc, &field.mul(&a[i][k], &b[k][j]))))
                .collect()
        })
        .collect()
}

/// A finite group of invertible matrices acting by `f(x) ↦ f(g x)`.
#[derive(Clone, Debug)]
pub struct GroupAction {
    ring: Ring,
    elements: Vec<Matrix>,
}

impl GroupAction {
    /// Validates closure, the identity, invertibility and that `|G|` is a
    /// unit in the field.
    pub fn new(ring: &Ring, elements: Vec<Matrix>) -> Result<GroupAction> {
        let field = ring.field();
        let n = ring.nvars();
        if elements.is_empty() {
            return Err(Error::InvalidInput("a group needs at least one element".into()));
        }
        for (k, g) in elements.iter().enumerate() {
            if g.len() != n || g.iter().any(|r| r.len() != n) {
                return Err(Error::InvalidInput(format!("group element {} is not {n}x{n}", k + 1)));
            }
            if linalg::rank(field, g) != n {
                return Err(Error::InvalidInput(format!("group element {} is singular", k + 1)));
            }
        }
        let mut distinct: Vec<Matrix> = Vec::new();
        for g in elements {
            if !distinct.contains(&g) {
                distinct.push(g);
            }
        }
        let id = identity(field, n);
        if !distinct.contains(&id) {
            return Err(Error::InvalidInput("the identity is missing from the group".into()));
        }
        for a in &distinct {
            let mut has_inverse = false;
            for b in &distinct {
                let ab = mat_mul(field, a, b);
                if !distinct.contains(&ab) {
                    return Err(Error::InvalidInput(
                        "the element list is not closed under products".into(),
                    ));
                }
                has_inverse |= ab == id;
            }
            if !has_inverse {
                return Err(Error::InvalidInput("an element has no inverse in the list".into()));
            }
        }
        let order = field.from_u64(distinct.len() as u64);
        if order.is_zero() {
            return Err(Error::InvalidInput(format!(
                "the characteristic divides the group order {}",
                distinct.len()
            )));
        }
        Ok(GroupAction {
            ring: ring.clone(),
            elements: distinct,
        })
    }

    /// The group generated by `gens`.
    pub fn generated_by(ring: &Ring, gens: Vec<Matrix>) -> Result<GroupAction> {
        let field = ring.field();
        let mut elems = vec![identity(field, ring.nvars())];
        let mut frontier = elems.clone();
        while let Some(a) = frontier.pop() {
            for g in &gens {
                let ag = mat_mul(field, &a, g);
                if !elems.contains(&ag) {
                    if elems.len() > 10_000 {
                        return Err(Error::InvalidInput("the generated group is too large".into()));
                    }
                    elems.push(ag.clone());
                    frontier.push(ag);
                }
            }
        }
        GroupAction::new(ring, elems)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// `f(g x)`.
    pub fn act(&self, g: &Matrix, f: &Poly) -> Poly {
        let ring = &self.ring;
        let images: Vec<Poly> = g
            .iter()
            .map(|row| {
                let terms = row
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(j, c)| (Monomial::var(ring.nvars(), j), c.clone()))
                    .collect();
                ring.from_terms(terms)
            })
            .collect();
        f.substitute(&images)
    }
}

/// `(1/|G|) Σ_g f(g x)`.
pub fn reynolds(f: &Poly, g: &GroupAction) -> Poly {
    let field = g.ring.field();
    let mut acc = g.ring.zero();
    for m in &g.elements {
        acc = &acc + &g.act(m, f);
    }
    let inv = field
        .inv(&field.from_u64(g.order() as u64))
        .expect("group order is a unit");
    acc.scale(&inv)
}

/// Fundamental invariants and the ideal of relations among them.
#[derive(Clone, Debug)]
pub struct InvariantRingPresentation {
    /// Homogeneous invariants in the original variables.
    pub invariants: Vec<Poly>,
    pub degrees: Vec<u32>,
    /// `K[u_1..u_m]`.
    pub target: Ring,
    /// Kernel of `u_i ↦ invariants[i]`.
    pub relations: Ideal,
}

fn coefficient_vector(f: &Poly, index: &BTreeMap<Monomial, usize>) -> SparseVec {
    f.terms().iter().map(|(m, c)| (index[m], c.clone())).collect()
}

/// Products of the given homogeneous generators with total degree `deg`.
fn products_of_degree(gens: &[Poly], degrees: &[u32], deg: u32, start: usize, acc: &Poly, out: &mut Vec<Poly>) {
    if deg == 0 {
        out.push(acc.clone());
        return;
    }
    for k in start..gens.len() {
        if degrees[k] <= deg {
            let next = acc * &gens[k];
            products_of_degree(gens, degrees, deg - degrees[k], k, &next, out);
        }
    }
}

/// Dimension of the degree-`k` invariants.
pub fn invariant_count(g: &GroupAction, k: u32) -> usize {
    let ring = &g.ring;
    let mons = monomials_of_degree(ring.nvars(), k);
    let index: BTreeMap<Monomial, usize> = mons.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut span = SparseEchelon::new(*ring.field());
    for m in &mons {
        span.insert(coefficient_vector(&reynolds(&ring.monomial(m.clone()), g), &index));
    }
    span.rank()
}

fn invariant_names(x: &Ring, m: usize) -> Vec<String> {
    let base: Vec<String> = if m <= 3 {
        ["u", "v", "w"][..m].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=m).map(|i| format!("u{i}")).collect()
    };
    if base.iter().all(|b| x.var_index(b).is_none()) {
        return base;
    }
    let mut names = Vec::new();
    let mut probe = x.clone();
    for i in 1..=m {
        let name = fresh_name(&probe, &format!("t{i}"));
        let mut all: Vec<String> = probe.names().to_vec();
        all.push(name.clone());
        probe = probe.with_names(&all, probe.order());
        names.push(name);
    }
    names
}

/// Reynolds images of monomials of degree at most `|G|`, kept when not
/// already in the subalgebra generated so far, and their relations by
/// elimination.
pub fn invariant_generators(g: &GroupAction) -> Result<InvariantRingPresentation> {
    let ring = &g.ring;
    let field = ring.field();
    let mut invariants: Vec<Poly> = Vec::new();
    let mut degrees: Vec<u32> = Vec::new();
    for deg in 1..=g.order() as u32 {
        let mons = monomials_of_degree(ring.nvars(), deg);
        let index: BTreeMap<Monomial, usize> = mons.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut span = SparseEchelon::new(*field);
        let mut prods = Vec::new();
        products_of_degree(&invariants, &degrees, deg, 0, &ring.one(), &mut prods);
        for p in &prods {
            span.insert(coefficient_vector(p, &index));
        }
        for m in &mons {
            let r = reynolds(&ring.monomial(m.clone()), g);
            if r.is_zero() {
                continue;
            }
            if span.insert(coefficient_vector(&r, &index)).is_some() {
                invariants.push(r.monic());
                degrees.push(deg);
            }
        }
    }
    let m = invariants.len();
    let names = invariant_names(ring, m);
    let target = ring.with_names(&names, MonomialOrder::GRevLex);
    let relations = relations_among(ring, &invariants, &target, None)?;
    Ok(InvariantRingPresentation {
        invariants,
        degrees,
        target,
        relations,
    })
}

/// `((u_i - h_i(x)) + extra(x)) ∩ K[u]`, returned in `target`.
fn relations_among(x: &Ring, invariants: &[Poly], target: &Ring, extra: Option<&Ideal>) -> Result<Ideal> {
    let n = x.nvars();
    let m = invariants.len();
    let mut names: Vec<String> = x.names().to_vec();
    names.extend(target.names().iter().cloned());
    let big = x.with_names(&names, MonomialOrder::GRevLex);
    let x_map: Vec<usize> = (0..n).collect();
    let mut gens: Vec<Poly> = invariants
        .iter()
        .enumerate()
        .map(|(i, h)| &big.var(n + i) - &h.map_vars(&big, &x_map))
        .collect();
    if let Some(e) = extra {
        gens.extend(e.generators().iter().map(|f| f.map_vars(&big, &x_map)));
    }
    let elim = eliminate(&Ideal::new(&big, gens), &x_map)?;
    let mut back = vec![0usize; n + m];
    for (i, slot) in back.iter_mut().enumerate().skip(n) {
        *slot = i - n;
    }
    let rels = elim
        .generators()
        .iter()
        .map(|f| {
            assert!(f.support_vars().iter().all(|&v| v >= n));
            let mut img = vec![target.zero(); n];
            img.extend((0..m).map(|i| target.var(i)));
            f.substitute(&img)
        })
        .collect();
    Ok(Ideal::new(target, rels))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hypothesis {
    Holds,
    /// A non-identity element fixing a hyperplane.
    Fails(Matrix),
}

/// No non-identity element may fix a hyperplane of linear forms, i.e.
/// `rank(g - id) <= 1` marks a violator.
pub fn pseudo_reflection_check(g: &GroupAction) -> Hypothesis {
    let field = g.ring.field();
    let n = g.ring.nvars();
    let id = identity(field, n);
    for m in &g.elements {
        if *m == id {
            continue;
        }
        let diff: Matrix = m
            .iter()
            .zip(&id)
            .map(|(r, e)| r.iter().zip(e).map(|(a, b)| field.sub(a, b)).collect())
            .collect();
        if linalg::rank(field, &diff) <= 1 {
            return Hypothesis::Fails(m.clone());
        }
    }
    Hypothesis::Holds
}

#[derive(Clone, Debug)]
pub struct QuotientDims {
    /// Nash order `n`; the dimensions refer to `η^<n+1>`.
    pub order: u32,
    /// `dim_K R^G / (m^{n+1} ∩ R^G)` by elimination.
    pub codim: u64,
    /// The same number from counting invariants of degree `<= n`.
    pub codim_by_count: u64,
    /// The same number from the differential power on the presentation.
    pub codim_by_diffpower: u64,
    /// `C(n + d, d)`.
    pub bound: u64,
    pub not_iso: bool,
    pub presentation: InvariantRingPresentation,
}

/// `dim R^G / η^<n+1>`, with `η^<n+1> = m^{n+1} ∩ R^G`, against `C(n+d, d)`.
/// Only computed for non-trivial groups without pseudo-reflections.
pub fn quotient_diff_power_dims(g: &GroupAction, n: u32) -> Result<QuotientDims> {
    if g.is_trivial() {
        return Err(Error::UnsupportedScope("the group is trivial".into()));
    }
    if let Hypothesis::Fails(w) = pseudo_reflection_check(g) {
        let field = g.ring.field();
        let rows: Vec<String> = w
            .iter()
            .map(|r| r.iter().map(|c| field.format(c)).collect::<Vec<_>>().join(","))
            .collect();
        return Err(Error::UnsupportedScope(format!(
            "the group contains a pseudo-reflection: {}",
            rows.join("; ")
        )));
    }
    if n == 0 {
        return Err(Error::InvalidInput("the order must be at least 1".into()));
    }
    let ring = &g.ring;
    let pres = invariant_generators(g)?;
    let eta = relations_among(
        ring,
        &pres.invariants,
        &pres.target,
        Some(&Ideal::maximal_power(ring, n + 1)),
    )?;
    let codim = eta
        .k_dimension()?
        .finite()
        .expect("eta contains a power of the maximal ideal");
    let codim_by_count: u64 = (0..=n).map(|k| invariant_count(g, k) as u64).sum();
    let codim_by_diffpower = differential_power(&pres.relations, n + 1)?.codim;
    let bound = expected_rank(n, ring.nvars());
    Ok(QuotientDims {
        order: n,
        codim,
        codim_by_count,
        codim_by_diffpower,
        bound,
        not_iso: codim < bound,
        presentation: pres,
    })
}
