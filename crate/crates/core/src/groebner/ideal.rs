use std::sync::OnceLock;

use super::engine::{Engine, ModuleOrderKind, Vector};
use super::Dimension;
use crate::algebra::monomial::{Monomial, MonomialOrder};
use crate::algebra::poly::{Poly, Ring};
use crate::error::{Error, Result};

/// An ideal of a polynomial ring with a lazily computed, write-once reduced
/// Gröbner basis for the ring's monomial order.
#[derive(Debug)]
pub struct Ideal {
    ring: Ring,
    gens: Vec<Poly>,
    gb: OnceLock<Vec<Poly>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(g) = self.gb.get() {
            let _ = gb.set(g.clone());
        }
        Ideal {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            gb,
        }
    }
}

impl Ideal {
    pub fn new(ring: &Ring, gens: Vec<Poly>) -> Ideal {
        for g in &gens {
            assert_eq!(g.ring().nvars(), ring.nvars(), "generator from a different ring");
        }
        Ideal {
            ring: ring.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            gb: OnceLock::new(),
        }
    }

    pub fn zero(ring: &Ring) -> Ideal {
        Ideal::new(ring, Vec::new())
    }

    pub fn unit(ring: &Ring) -> Ideal {
        Ideal::new(ring, vec![ring.one()])
    }

    /// The maximal ideal of the origin, `(x_1, ..., x_n)`.
    pub fn maximal(ring: &Ring) -> Ideal {
        Ideal::new(ring, (0..ring.nvars()).map(|i| ring.var(i)).collect())
    }

    /// `(x_1^k, ..., x_n^k)`.
    pub fn frobenius_power_of_maximal(ring: &Ring, k: u32) -> Ideal {
        Ideal::new(ring, (0..ring.nvars()).map(|i| ring.var(i).pow(k)).collect())
    }

    /// The ordinary power `m^k` of the maximal ideal of the origin.
    pub fn maximal_power(ring: &Ring, k: u32) -> Ideal {
        let gens = crate::algebra::monomial::monomials_of_degree(ring.nvars(), k)
            .into_iter()
            .map(|m| ring.monomial(m))
            .collect();
        Ideal::new(ring, gens)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    pub fn is_principal_presentation(&self) -> bool {
        self.gens.len() == 1
    }

    /// Reduced Gröbner basis, monic, sorted ascending by leading monomial.
    pub fn groebner(&self) -> Result<&[Poly]> {
        if let Some(g) = self.gb.get() {
            return Ok(g);
        }
        let eng = Engine::new(&self.ring, ModuleOrderKind::PositionOverTerm);
        let vecs: Vec<Vector> = self
            .gens
            .iter()
            .map(|g| eng.to_vector(std::slice::from_ref(&g.to_ring(&self.ring))))
            .collect();
        let gb = eng.groebner(vecs, true)?;
        let polys: Vec<Poly> = gb.iter().map(|v| eng.to_polys(v, 1).pop().unwrap()).collect();
        let _ = self.gb.set(polys);
        Ok(self.gb.get().unwrap())
    }

    /// Normal form modulo the ideal.
    pub fn reduce(&self, f: &Poly) -> Result<Poly> {
        let gb = self.groebner()?;
        let eng = Engine::new(&self.ring, ModuleOrderKind::PositionOverTerm);
        let basis: Vec<Vector> = gb.iter().map(|g| eng.to_vector(std::slice::from_ref(g))).collect();
        let v = eng.normal_form(eng.to_vector(&[f.to_ring(&self.ring)]), &basis)?;
        Ok(eng.to_polys(&v, 1).pop().unwrap())
    }

    pub fn contains(&self, f: &Poly) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        for g in other.generators() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_ideal(&self, other: &Ideal) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.groebner()?.iter().any(|g| g.is_constant()))
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().map(|g| g.to_ring(&self.ring)));
        Ideal::new(&self.ring, gens)
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a * &b.to_ring(&self.ring));
            }
        }
        Ideal::new(&self.ring, gens)
    }

    /// `(f_1^k, ..., f_r^k)` on the given generators.
    pub fn generator_powers(&self, k: u32) -> Ideal {
        Ideal::new(&self.ring, self.gens.iter().map(|g| g.pow(k)).collect())
    }

    /// The same ideal viewed in a ring with the same variables and another order.
    pub fn to_ring(&self, ring: &Ring) -> Ideal {
        Ideal::new(ring, self.gens.iter().map(|g| g.to_ring(ring)).collect())
    }

    /// Re-checks Buchberger's criterion on the cached basis.
    pub fn verify_groebner(&self) -> Result<bool> {
        let gb = self.groebner()?;
        let eng = Engine::new(&self.ring, ModuleOrderKind::PositionOverTerm);
        let basis: Vec<Vector> = gb.iter().map(|g| eng.to_vector(std::slice::from_ref(g))).collect();
        eng.is_groebner(&basis)
    }

    fn leading_monomials(&self) -> Result<Vec<Monomial>> {
        Ok(self
            .groebner()?
            .iter()
            .map(|g| g.lead_monomial().unwrap().clone())
            .collect())
    }

    /// Number of standard monomials of `S/I`.
    pub fn k_dimension(&self) -> Result<Dimension> {
        let leads = self.leading_monomials()?;
        Ok(staircase_count(self.ring.nvars(), &leads))
    }

    /// Standard monomials of `S/I` when there are finitely many, ascending
    /// in the monomial order.
    pub fn standard_monomials(&self) -> Result<Option<Vec<Monomial>>> {
        let leads = self.leading_monomials()?;
        let Some(mut ms) = staircase(self.ring.nvars(), &leads) else {
            return Ok(None);
        };
        let order = self.ring.order();
        ms.sort_by(|a, b| order.cmp(a, b));
        Ok(Some(ms))
    }

    /// Krull dimension of `S/I` via maximal independent sets of the leading
    /// ideal; `None` when `I` is the unit ideal.
    pub fn krull_dimension(&self) -> Result<Option<usize>> {
        let leads = self.leading_monomials()?;
        let n = self.ring.nvars();
        if leads.iter().any(|m| m.is_one()) {
            return Ok(None);
        }
        let mut best = 0;
        for mask in 0u32..(1u32 << n) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let independent = leads.iter().all(|m| {
                m.exponents()
                    .iter()
                    .enumerate()
                    .any(|(i, &e)| e > 0 && mask & (1 << i) == 0)
            });
            if independent {
                best = size;
            }
        }
        Ok(Some(best))
    }

    /// Canonical rendering of the reduced Gröbner basis.
    pub fn canonical_generators(&self) -> Result<Vec<String>> {
        Ok(self.groebner()?.iter().map(|g| g.to_string()).collect())
    }
}

/// `I ∩ K[remaining variables]` for the variables not listed in `vars`.
pub fn eliminate(ideal: &Ideal, vars: &[usize]) -> Result<Ideal> {
    let ring = ideal.ring();
    let n = ring.nvars();
    if vars.is_empty() {
        return Ok(ideal.clone());
    }
    let mut perm: Vec<usize> = vars.to_vec();
    perm.sort_unstable();
    perm.dedup();
    perm.extend((0..n).filter(|i| !vars.contains(i)));
    let k = vars.len();
    let names: Vec<String> = perm.iter().map(|&i| ring.names()[i].clone()).collect();
    let elim = ring.with_names(&names, MonomialOrder::Block { split: k });
    // var_map: old index -> position in the permuted ring
    let mut to_elim = vec![0; n];
    for (pos, &old) in perm.iter().enumerate() {
        to_elim[old] = pos;
    }
    let lifted = Ideal::new(
        &elim,
        ideal.generators().iter().map(|g| g.map_vars(&elim, &to_elim)).collect(),
    );
    let gb = lifted.groebner()?;
    let kept: Vec<Poly> = gb
        .iter()
        .filter(|g| g.support_vars().iter().all(|&v| v >= k))
        .map(|g| g.map_vars(ring, &perm))
        .collect();
    Ok(Ideal::new(ring, kept))
}

/// `I ∩ J` via `(tI + (1 - t)J) ∩ K[x]`.
pub fn intersect(a: &Ideal, b: &Ideal) -> Result<Ideal> {
    let ring = a.ring();
    let n = ring.nvars();
    let mut names = vec![fresh_name(ring, "t")];
    names.extend(ring.names().iter().cloned());
    let big = ring.with_names(&names, MonomialOrder::Block { split: 1 });
    let shift: Vec<usize> = (1..=n).collect();
    let t = big.var(0);
    let one_minus_t = &big.one() - &t;
    let mut gens = Vec::new();
    for g in a.generators() {
        gens.push(&t * &g.map_vars(&big, &shift));
    }
    for g in b.generators() {
        gens.push(&one_minus_t * &g.map_vars(&big, &shift));
    }
    let gb = Ideal::new(&big, gens);
    let gb = gb.groebner()?;
    let mut back = vec![0usize; n + 1];
    for (i, slot) in back.iter_mut().enumerate().skip(1) {
        *slot = i - 1;
    }
    let kept = gb
        .iter()
        .filter(|g| g.support_vars().first() != Some(&0))
        .map(|g| g.map_vars(ring, &back))
        .collect();
    Ok(Ideal::new(ring, kept))
}

/// Exact division `f / g`; `None` if `g` does not divide `f`.
pub fn div_exact(f: &Poly, g: &Poly) -> Option<Poly> {
    let ring = f.ring();
    let field = ring.field();
    let (gm, gc) = g.lead()?;
    let mut q = ring.zero();
    let mut r = f.clone();
    while let Some((rm, rc)) = r.lead() {
        let m = gm.quotient_of(rm)?;
        let c = field.div(rc, gc);
        let t = ring.term(m.clone(), c.clone());
        r = &r - &g.mul_term(&m, &c);
        q = &q + &t;
    }
    Some(q)
}

/// `(I : J) = {f : fJ ⊆ I}`, intersecting `(I : g)` over the generators of `J`.
pub fn ideal_colon(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    if j.is_zero_ideal() {
        return Err(Error::InvalidInput("colon by the zero ideal".into()));
    }
    let ring = i.ring();
    let mut acc: Option<Ideal> = None;
    for g in j.generators() {
        let g = g.to_ring(ring);
        let inter = intersect(i, &Ideal::new(ring, vec![g.clone()]))?;
        let quot: Vec<Poly> = inter
            .generators()
            .iter()
            .map(|h| div_exact(h, &g).expect("element of (g) is divisible by g"))
            .collect();
        let q = Ideal::new(ring, quot);
        acc = Some(match acc {
            None => q,
            Some(prev) => intersect(&prev, &q)?,
        });
    }
    let out = acc.expect("nonempty generator list");
    let gb = out.groebner()?.to_vec();
    Ok(Ideal::new(ring, gb))
}

pub(crate) fn fresh_name(ring: &Ring, base: &str) -> String {
    let mut name = base.to_string();
    let mut k = 0;
    while ring.var_index(&name).is_some() {
        k += 1;
        name = format!("{base}{k}");
    }
    name
}

/// Largest staircase the dimension counter will enumerate.
const STAIRCASE_LIMIT: u64 = 20_000_000;

fn pure_power_bounds(nvars: usize, leads: &[Monomial]) -> Option<Vec<u32>> {
    let mut bounds = vec![u32::MAX; nvars];
    for m in leads {
        let support: Vec<usize> = (0..nvars).filter(|&i| m.exponent(i) > 0).collect();
        if support.is_empty() {
            return Some(vec![0; nvars]);
        }
        if support.len() == 1 {
            let i = support[0];
            bounds[i] = bounds[i].min(m.exponent(i));
        }
    }
    if bounds.contains(&u32::MAX) {
        None
    } else {
        Some(bounds)
    }
}

pub(crate) fn staircase(nvars: usize, leads: &[Monomial]) -> Option<Vec<Monomial>> {
    let bounds = pure_power_bounds(nvars, leads)?;
    if bounds.contains(&0) {
        return Some(Vec::new());
    }
    let volume: u64 = bounds.iter().map(|&b| b as u64).product();
    assert!(volume <= STAIRCASE_LIMIT, "staircase enumeration too large");
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    loop {
        let m = Monomial::from_exponents(&cur);
        if !leads.iter().any(|l| l.divides(&m)) {
            out.push(m);
        }
        let mut i = 0;
        loop {
            if i == nvars {
                return Some(out);
            }
            cur[i] += 1;
            if cur[i] < bounds[i] {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

pub(crate) fn staircase_count(nvars: usize, leads: &[Monomial]) -> Dimension {
    if nvars == 0 {
        return if leads.is_empty() {
            Dimension::Finite(1)
        } else {
            Dimension::Finite(0)
        };
    }
    match staircase(nvars, leads) {
        Some(v) => Dimension::Finite(v.len() as u64),
        None => Dimension::Infinite,
    }
}
