//! Buchberger's algorithm on vectors of polynomials (ideals are rank-one
//! modules). Pair selection follows the sugar strategy; useless pairs are
//! discarded with the Gebauer–Möller installation of Buchberger's criteria.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::algebra::field::Scalar;
use crate::algebra::monomial::Monomial;
use crate::algebra::poly::{Poly, Ring};
use crate::error::{Error, Result};

/// How module terms `x^a e_i` are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum ModuleOrderKind {
    /// Position over term: a lower component index always wins.
    #[default]
    PositionOverTerm,
    /// Term over position: monomials first, components break ties.
    TermOverPosition,
}

pub(crate) type Term = (usize, Monomial, Scalar);

/// A sparse module element, terms sorted descending in the module order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Vector {
    pub terms: Vec<Term>,
}

impl Vector {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> &Term {
        &self.terms[0]
    }

    fn sugar(&self) -> u32 {
        self.terms.iter().map(|t| t.1.degree()).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    comp: usize,
    lcm: Monomial,
    sugar: u32,
}

pub(crate) struct Engine {
    ring: Ring,
    kind: ModuleOrderKind,
    steps: Cell<u64>,
}

impl Engine {
    pub fn new(ring: &Ring, kind: ModuleOrderKind) -> Self {
        Engine {
            ring: ring.clone(),
            kind,
            steps: Cell::new(0),
        }
    }

    fn tick(&self) -> Result<()> {
        let s = self.steps.get() + 1;
        self.steps.set(s);
        if s > self.ring.budget() {
            return Err(Error::Budget {
                steps: s,
                what: "Gröbner basis reduction".to_string(),
            });
        }
        Ok(())
    }

    pub fn cmp_terms(&self, a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
        match self.kind {
            ModuleOrderKind::PositionOverTerm => b.0.cmp(&a.0).then_with(|| self.ring.order().cmp(a.1, b.1)),
            ModuleOrderKind::TermOverPosition => self.ring.order().cmp(a.1, b.1).then_with(|| b.0.cmp(&a.0)),
        }
    }

    pub fn to_vector(&self, v: &[Poly]) -> Vector {
        let mut terms: Vec<Term> = Vec::new();
        for (c, p) in v.iter().enumerate() {
            debug_assert!(p.ring() == &self.ring || p.is_zero() || p.ring().nvars() == self.ring.nvars());
            for (m, a) in p.terms() {
                terms.push((c, m.clone(), a.clone()));
            }
        }
        terms.sort_by(|a, b| self.cmp_terms((b.0, &b.1), (a.0, &a.1)));
        Vector { terms }
    }

    pub fn to_polys(&self, v: &Vector, rank: usize) -> Vec<Poly> {
        let mut buckets: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); rank];
        for (c, m, a) in &v.terms {
            buckets[*c].push((m.clone(), a.clone()));
        }
        buckets.into_iter().map(|t| self.ring.from_terms(t)).collect()
    }

    fn monic(&self, mut v: Vector) -> Vector {
        let f = self.ring.field();
        if let Some(first) = v.terms.first() {
            if !first.2.is_one() {
                let inv = f.inv(&first.2).expect("nonzero lead");
                for t in v.terms.iter_mut() {
                    t.2 = f.mul(&t.2, &inv);
                }
            }
        }
        v
    }

    /// `a - c * m * b`.
    fn sub_scaled(&self, a: &[Term], m: &Monomial, c: &Scalar, b: &[Term]) -> Vec<Term> {
        let f = self.ring.field();
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let scaled = |t: &Term| (t.0, t.1.mul(m), f.neg(&f.mul(&t.2, c)));
        while i < a.len() && j < b.len() {
            let bm = b[j].1.mul(m);
            match self.cmp_terms((a[i].0, &a[i].1), (b[j].0, &bm)) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(scaled(&b[j]));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = f.sub(&a[i].2, &f.mul(&b[j].2, c));
                    if !v.is_zero() {
                        out.push((a[i].0, bm, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(scaled));
        out
    }

    fn find_reducer(&self, basis: &[Vector], comp: usize, m: &Monomial) -> Option<usize> {
        basis.iter().position(|b| {
            let l = b.lead();
            l.0 == comp && l.1.divides(m)
        })
    }

    /// Full normal form of `v` with respect to `basis` (leads assumed monic).
    pub fn normal_form(&self, v: Vector, basis: &[Vector]) -> Result<Vector> {
        let f = self.ring.field();
        let mut out: Vec<Term> = Vec::new();
        let mut rest = v.terms;
        let mut start = 0;
        while start < rest.len() {
            let (c, m, a) = &rest[start];
            match self.find_reducer(basis, *c, m) {
                Some(k) => {
                    let b = &basis[k];
                    let q = b.lead().1.quotient_of(m).expect("reducer divides");
                    let coeff = f.div(a, &b.lead().2);
                    rest = self.sub_scaled(&rest[start + 1..], &q, &coeff, &b.terms[1..]);
                    start = 0;
                    self.tick()?;
                }
                None => {
                    out.push(rest[start].clone());
                    start += 1;
                }
            }
        }
        Ok(Vector { terms: out })
    }

    fn s_vector(&self, a: &Vector, b: &Vector, lcm: &Monomial) -> Vector {
        let f = self.ring.field();
        let (la, lb) = (a.lead(), b.lead());
        let qa = la.1.quotient_of(lcm).expect("lcm");
        let qb = lb.1.quotient_of(lcm).expect("lcm");
        let ca = f.inv(&la.2).expect("lead");
        let cb = f.inv(&lb.2).expect("lead");
        // Leads cancel exactly, so only the tails are combined.
        let ta: Vec<Term> = a.terms[1..]
            .iter()
            .map(|t| (t.0, t.1.mul(&qa), f.mul(&t.2, &ca)))
            .collect();
        Vector {
            terms: self.sub_scaled(&ta, &qb, &cb, &b.terms[1..]),
        }
    }

    /// Reduced Gröbner basis of the module generated by `gens`; sorted
    /// ascending by leading term, every element monic.
    pub fn groebner(&self, gens: Vec<Vector>, rank_one: bool) -> Result<Vec<Vector>> {
        let mut input: Vec<Vector> = gens
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| self.monic(g))
            .collect();
        input.sort_by(|a, b| self.cmp_vectors(a, b));
        input.dedup();

        let mut basis: Vec<Vector> = Vec::new();
        let mut sugar: Vec<u32> = Vec::new();
        let mut active: Vec<bool> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();

        for g in input {
            let s = g.sugar();
            let h = self.normal_form(g, &basis)?;
            if !h.is_zero() {
                self.install(
                    self.monic(h),
                    s,
                    rank_one,
                    &mut basis,
                    &mut sugar,
                    &mut active,
                    &mut pairs,
                );
            }
        }

        while !pairs.is_empty() {
            let k = self.select(&pairs);
            let p = pairs.swap_remove(k);
            let s = self.s_vector(&basis[p.i], &basis[p.j], &p.lcm);
            self.tick()?;
            let h = self.normal_form(s, &basis)?;
            if !h.is_zero() {
                let hs = p.sugar.max(h.sugar());
                self.install(
                    self.monic(h),
                    hs,
                    rank_one,
                    &mut basis,
                    &mut sugar,
                    &mut active,
                    &mut pairs,
                );
            }
        }

        let minimal: Vec<Vector> = basis
            .iter()
            .zip(&active)
            .filter(|(_, &a)| a)
            .map(|(v, _)| v.clone())
            .collect();
        self.interreduce(minimal)
    }

    /// Buchberger's criterion: every S-vector of `basis` reduces to zero.
    pub fn is_groebner(&self, basis: &[Vector]) -> Result<bool> {
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let (a, b) = (basis[i].lead(), basis[j].lead());
                if a.0 != b.0 {
                    continue;
                }
                let s = self.s_vector(&basis[i], &basis[j], &a.1.lcm(&b.1));
                if !self.normal_form(s, basis)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn cmp_vectors(&self, a: &Vector, b: &Vector) -> Ordering {
        for (x, y) in a.terms.iter().zip(&b.terms) {
            match self.cmp_terms((x.0, &x.1), (y.0, &y.1)) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        a.terms.len().cmp(&b.terms.len())
    }

    fn select(&self, pairs: &[Pair]) -> usize {
        let mut best = 0;
        for k in 1..pairs.len() {
            let (a, b) = (&pairs[k], &pairs[best]);
            let ord = a
                .sugar
                .cmp(&b.sugar)
                .then_with(|| self.cmp_terms((a.comp, &a.lcm), (b.comp, &b.lcm)))
                .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)));
            if ord == Ordering::Less {
                best = k;
            }
        }
        best
    }

    #[allow(clippy::too_many_arguments)]
    fn install(
        &self,
        h: Vector,
        h_sugar: u32,
        rank_one: bool,
        basis: &mut Vec<Vector>,
        sugar: &mut Vec<u32>,
        active: &mut Vec<bool>,
        pairs: &mut Vec<Pair>,
    ) {
        let t = basis.len();
        let (hc, hm) = (h.lead().0, h.lead().1.clone());
        let hdeg = hm.degree();

        let mut cands: Vec<(usize, Monomial, bool)> = Vec::new();
        for i in 0..t {
            if !active[i] || basis[i].lead().0 != hc {
                continue;
            }
            let gm = &basis[i].lead().1;
            cands.push((i, gm.lcm(&hm), rank_one && gm.coprime(&hm)));
        }

        // Criterion M: a strictly smaller lcm among the new pairs.
        let survivors: Vec<(usize, Monomial, bool)> = cands
            .iter()
            .filter(|(_, l, _)| !cands.iter().any(|(_, l2, _)| l2 != l && l2.divides(l)))
            .cloned()
            .collect();
        // Criterion F plus the product criterion on each lcm class.
        let mut classes: BTreeMap<Monomial, Vec<(usize, bool)>> = BTreeMap::new();
        for (i, l, cop) in survivors {
            classes.entry(l).or_default().push((i, cop));
        }

        // Criterion B on the old pairs.
        pairs.retain(|p| {
            if p.comp != hc || !hm.divides(&p.lcm) {
                return true;
            }
            let li = basis[p.i].lead().1.lcm(&hm);
            let lj = basis[p.j].lead().1.lcm(&hm);
            li == p.lcm || lj == p.lcm
        });

        for (l, members) in classes {
            if members.iter().any(|(_, cop)| *cop) {
                continue;
            }
            let i = members.iter().map(|(i, _)| *i).min().expect("nonempty class");
            let gi = &basis[i];
            let ldeg = l.degree();
            let s = (sugar[i] + ldeg - gi.lead().1.degree()).max(h_sugar + ldeg - hdeg);
            pairs.push(Pair {
                i,
                j: t,
                comp: hc,
                lcm: l,
                sugar: s,
            });
        }

        for i in 0..t {
            if active[i] && basis[i].lead().0 == hc && hm.divides(&basis[i].lead().1) {
                active[i] = false;
            }
        }
        basis.push(h);
        sugar.push(h_sugar);
        active.push(true);
    }

    fn interreduce(&self, mut gens: Vec<Vector>) -> Result<Vec<Vector>> {
        gens.sort_by(|a, b| self.cmp_vectors(a, b));
        let mut minimal: Vec<Vector> = Vec::new();
        for g in gens {
            let (c, m) = (g.lead().0, &g.lead().1);
            let redundant = minimal.iter().any(|b| b.lead().0 == c && b.lead().1.divides(m));
            if !redundant {
                minimal.push(g);
            }
        }
        let mut out = Vec::with_capacity(minimal.len());
        for k in 0..minimal.len() {
            let g = &minimal[k];
            // A lead never divides a smaller term, so reducing by the whole
            // minimal basis leaves `g`'s own lead untouched.
            let lead = g.terms[0].clone();
            let t = self.normal_form(tail(g), &minimal)?;
            let mut terms = Vec::with_capacity(t.terms.len() + 1);
            terms.push(lead);
            terms.extend(t.terms);
            out.push(self.monic(Vector { terms }));
        }
        out.sort_by(|a, b| self.cmp_vectors(a, b));
        Ok(out)
    }
}

fn tail(v: &Vector) -> Vector {
    Vector {
        terms: v.terms[1..].to_vec(),
    }
}
