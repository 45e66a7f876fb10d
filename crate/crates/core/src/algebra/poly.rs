//! Sparse multivariate polynomials over an exact field.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::field::{Field, Scalar};
use super::monomial::{Monomial, MonomialOrder};

/// Default number of reduction steps a single Gröbner computation may take.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug)]
struct RingData {
    field: Field,
    names: Vec<String>,
    order: MonomialOrder,
    budget: u64,
}

/// A polynomial ring context `K[x_1..x_n]` with a fixed monomial order.
#[derive(Clone, Debug)]
pub struct Ring(Arc<RingData>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field && self.0.names == other.0.names && self.0.order == other.0.order)
    }
}

impl Eq for Ring {}

impl Ring {
    pub fn new<S: AsRef<str>>(field: Field, names: &[S], order: MonomialOrder) -> Ring {
        Ring(Arc::new(RingData {
            field,
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
            order,
            budget: DEFAULT_BUDGET,
        }))
    }

    /// Same field and variables, different monomial order.
    pub fn with_order(&self, order: MonomialOrder) -> Ring {
        Ring(Arc::new(RingData {
            field: self.0.field,
            names: self.0.names.clone(),
            order,
            budget: self.0.budget,
        }))
    }

    pub fn with_budget(&self, budget: u64) -> Ring {
        Ring(Arc::new(RingData {
            field: self.0.field,
            names: self.0.names.clone(),
            order: self.0.order,
            budget,
        }))
    }

    /// A ring over the same field with other variables; order and budget are kept.
    pub fn with_names<S: AsRef<str>>(&self, names: &[S], order: MonomialOrder) -> Ring {
        Ring::new(self.0.field, names, order).with_budget(self.0.budget)
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn nvars(&self) -> usize {
        self.0.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn order(&self) -> MonomialOrder {
        self.0.order
    }

    pub fn budget(&self) -> u64 {
        self.0.budget
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }

    pub fn zero(&self) -> Poly {
        Poly {
            ring: self.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(&self) -> Poly {
        self.constant(self.field().one())
    }

    pub fn constant(&self, c: Scalar) -> Poly {
        self.term(Monomial::one(self.nvars()), c)
    }

    pub fn from_i64(&self, c: i64) -> Poly {
        self.constant(self.field().from_i64(c))
    }

    pub fn var(&self, i: usize) -> Poly {
        self.term(Monomial::var(self.nvars(), i), self.field().one())
    }

    pub fn term(&self, m: Monomial, c: Scalar) -> Poly {
        debug_assert_eq!(m.nvars(), self.nvars());
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Poly {
            ring: self.clone(),
            terms,
        }
    }

    pub fn monomial(&self, m: Monomial) -> Poly {
        self.term(m, self.field().one())
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(&self, terms: Vec<(Monomial, Scalar)>) -> Poly {
        let f = self.field();
        let mut acc: HashMap<Monomial, Scalar> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(v) => *v = f.add(v, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let order = self.order();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Poly {
            ring: self.clone(),
            terms,
        }
    }

    pub(crate) fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.0.order.cmp(a, b)
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.0.names[i].clone()),
                _ => parts.push(format!("{}^{}", self.0.names[i], e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// A polynomial; terms are kept sorted in descending order of the ring's
/// monomial order and never carry zero coefficients.
#[derive(Clone, Debug)]
pub struct Poly {
    ring: Ring,
    terms: Vec<(Monomial, Scalar)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Scalar)> {
        self.terms
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
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn lead(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    pub fn lead_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn lead_coeff(&self) -> Option<&Scalar> {
        self.terms.first().map(|t| &t.1)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Smallest total degree of a term; `None` for zero.
    pub fn order_at_origin(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).min()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field().zero())
    }

    /// Value at the origin.
    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Monomial::one(self.ring.nvars()))
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return self.ring.zero();
        }
        let f = self.field();
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), f.mul(a, c))).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Poly {
        if c.is_zero() {
            return self.ring.zero();
        }
        let f = self.field();
        // Multiplication by a monomial preserves any admissible order.
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), f.mul(a, c))).collect(),
        }
    }

    /// Scaled so the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.lead_coeff() {
            None => self.clone(),
            Some(c) if c.is_one() => self.clone(),
            Some(c) => {
                let inv = self.field().inv(c).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Drops every term of total degree greater than `deg`.
    pub fn truncate(&self, deg: u32) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() <= deg).cloned().collect(),
        }
    }

    pub fn homogeneous_part(&self, deg: u32) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() == deg).cloned().collect(),
        }
    }

    /// Re-expresses the polynomial in `target`, sending variable `i` to
    /// variable `var_map[i]` of the target ring.
    pub fn map_vars(&self, target: &Ring, var_map: &[usize]) -> Poly {
        assert_eq!(var_map.len(), self.ring.nvars());
        assert_eq!(target.field(), self.field());
        let n = target.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut out = Monomial::one(n);
                for (i, &e) in m.exponents().iter().enumerate() {
                    if e > 0 {
                        let j = var_map[i];
                        out.set_exponent(j, out.exponent(j) + e);
                    }
                }
                (out, c.clone())
            })
            .collect();
        target.from_terms(terms)
    }

    /// Same polynomial, sorted for another ring with identical variables.
    pub fn to_ring(&self, target: &Ring) -> Poly {
        assert_eq!(target.nvars(), self.ring.nvars());
        let map: Vec<usize> = (0..self.ring.nvars()).collect();
        self.map_vars(target, &map)
    }

    /// Substitutes `x_i -> images[i]`; all images live in one ring.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.ring.nvars());
        let target = images
            .first()
            .map(|p| p.ring.clone())
            .unwrap_or_else(|| self.ring.clone());
        let mut cache: Vec<Vec<Poly>> = vec![vec![target.one()]; images.len()];
        let mut acc = target.zero();
        for (m, c) in &self.terms {
            let mut t = target.constant(c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap() * &images[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][e as usize];
            }
            acc = &acc + &t;
        }
        acc
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let f = self.field();
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = f.mul(&t, &f.pow(&point[i], e as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Variables occurring in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        let n = self.ring.nvars();
        (0..n)
            .filter(|&i| self.terms.iter().any(|(m, _)| m.exponent(i) > 0))
            .collect()
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let f = self.field();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match self.ring.cmp_monomials(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { f.neg(&b[j].1) } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        f.sub(&a[i].1, &b[j].1)
                    } else {
                        f.add(&a[i].1, &b[j].1)
                    };
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
            let c = if negate { f.neg(&t.1) } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Poly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    fn product(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return self.ring.zero();
        }
        let f = self.field();
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = f.mul(ca, cb);
                match acc.get_mut(&m) {
                    Some(v) => *v = f.add(v, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let order = self.ring.order();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Poly {
            ring: self.ring.clone(),
            terms,
        }
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        self.merge(rhs, false)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        self.merge(rhs, true)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        self.product(rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = self.field();
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let f = self.field();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = f.is_negative(c);
            let abs = if neg { f.neg(c) } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(out, "-")?,
                (0, false) => {}
                (_, true) => write!(out, " - ")?,
                (_, false) => write!(out, " + ")?,
            }
            if m.is_one() {
                write!(out, "{}", f.format(&abs))?;
            } else if abs.is_one() {
                write!(out, "{}", self.ring.format_monomial(m))?;
            } else {
                write!(out, "{}*{}", f.format(&abs), self.ring.format_monomial(m))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(c: u64) -> Ring {
        Ring::new(
            Field::from_characteristic(c).unwrap(),
            &["x", "y"],
            MonomialOrder::GRevLex,
        )
    }

    #[test]
    fn arithmetic_and_display() {
        let r = ring(0);
        let (x, y) = (r.var(0), r.var(1));
        let f = &(&x * &x) * &x;
        let g = &f - &(&y * &y);
        assert_eq!(g.to_string(), "x^3 - y^2");
        let h = &g * &g;
        assert_eq!(h.to_string(), "x^6 - 2*x^3*y^2 + y^4");
        assert!((&g - &g).is_zero());
        assert_eq!((&x + &r.from_i64(-1)).pow(2).to_string(), "x^2 - 2*x + 1");
    }

    #[test]
    fn characteristic_two_cancels() {
        let r = ring(2);
        let (x, y) = (r.var(0), r.var(1));
        let s = &x + &y;
        assert_eq!(s.pow(2).to_string(), "x^2 + y^2");
    }

    #[test]
    fn substitution_and_eval() {
        let r = ring(0);
        let (x, y) = (r.var(0), r.var(1));
        let f = &x.pow(3) - &y.pow(2);
        let one = r.one();
        let shifted = f.substitute(&[&x + &one, &y + &one]);
        assert!(shifted.constant_term().is_zero());
        let q = r.field();
        assert_eq!(f.eval(&[q.from_i64(4), q.from_i64(8)]), q.zero());
    }
}
