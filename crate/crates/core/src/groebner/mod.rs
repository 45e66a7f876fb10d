//! Gröbner bases of ideals and of submodules of free modules, with the
//! constructions built on them: kernels of maps into quotient modules,
//! saturation, colon ideals, elimination and vector-space dimensions.

pub(crate) mod engine;
mod ideal;

use std::fmt;
use std::sync::OnceLock;

pub use engine::ModuleOrderKind;
use engine::{Engine, Vector};
pub use ideal::{div_exact, eliminate, ideal_colon, intersect, Ideal};
pub(crate) use ideal::{fresh_name, staircase};

use crate::algebra::monomial::Monomial;
use crate::algebra::poly::{Poly, Ring};
use crate::error::{Error, Result};

/// Vector-space dimension of a quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dimension {
    Finite(u64),
    Infinite,
}

impl Dimension {
    pub fn finite(self) -> Option<u64> {
        match self {
            Dimension::Finite(n) => Some(n),
            Dimension::Infinite => None,
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Finite(n) => write!(f, "{n}"),
            Dimension::Infinite => write!(f, "INFINITE"),
        }
    }
}

/// A submodule of the free module `S^rank`, generated by explicit vectors.
#[derive(Debug)]
pub struct Submodule {
    ring: Ring,
    rank: usize,
    kind: ModuleOrderKind,
    gens: Vec<Vec<Poly>>,
    gb: OnceLock<Vec<Vec<Poly>>>,
}

impl Clone for Submodule {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(g) = self.gb.get() {
            let _ = gb.set(g.clone());
        }
        Submodule {
            ring: self.ring.clone(),
            rank: self.rank,
            kind: self.kind,
            gens: self.gens.clone(),
            gb,
        }
    }
}

impl Submodule {
    pub fn new(ring: &Ring, rank: usize, gens: Vec<Vec<Poly>>) -> Submodule {
        Submodule::with_kind(ring, rank, gens, ModuleOrderKind::PositionOverTerm)
    }

    pub fn with_kind(ring: &Ring, rank: usize, gens: Vec<Vec<Poly>>, kind: ModuleOrderKind) -> Submodule {
        for g in &gens {
            assert_eq!(g.len(), rank, "generator length differs from the ambient rank");
        }
        let gens = gens.into_iter().filter(|g| g.iter().any(|p| !p.is_zero())).collect();
        Submodule {
            ring: ring.clone(),
            rank,
            kind,
            gens,
            gb: OnceLock::new(),
        }
    }

    pub fn zero(ring: &Ring, rank: usize) -> Submodule {
        Submodule::new(ring, rank, Vec::new())
    }

    /// `I * S^rank`.
    pub fn ideal_multiple(ideal: &Ideal, rank: usize) -> Submodule {
        let ring = ideal.ring();
        let mut gens = Vec::new();
        for k in 0..rank {
            for f in ideal.generators() {
                let mut v = vec![ring.zero(); rank];
                v[k] = f.clone();
                gens.push(v);
            }
        }
        Submodule::new(ring, rank, gens)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn kind(&self) -> ModuleOrderKind {
        self.kind
    }

    pub fn generators(&self) -> &[Vec<Poly>] {
        &self.gens
    }

    pub fn sum(&self, other: &Submodule) -> Submodule {
        assert_eq!(self.rank, other.rank);
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Submodule::with_kind(&self.ring, self.rank, gens, self.kind)
    }

    fn engine(&self) -> Engine {
        Engine::new(&self.ring, self.kind)
    }

    /// Reduced Gröbner basis, sorted ascending, every element monic.
    pub fn groebner(&self) -> Result<&[Vec<Poly>]> {
        if let Some(g) = self.gb.get() {
            return Ok(g);
        }
        let eng = self.engine();
        let vecs = self.gens.iter().map(|g| eng.to_vector(g)).collect();
        let gb = eng.groebner(vecs, self.rank == 1)?;
        let out = gb.iter().map(|v| eng.to_polys(v, self.rank)).collect();
        let _ = self.gb.set(out);
        Ok(self.gb.get().unwrap())
    }

    fn basis_vectors(&self, eng: &Engine) -> Result<Vec<Vector>> {
        Ok(self.groebner()?.iter().map(|g| eng.to_vector(g)).collect())
    }

    /// Re-checks Buchberger's criterion on the cached basis.
    pub fn verify_groebner(&self) -> Result<bool> {
        let eng = self.engine();
        eng.is_groebner(&self.basis_vectors(&eng)?)
    }

    pub fn reduce(&self, v: &[Poly]) -> Result<Vec<Poly>> {
        assert_eq!(v.len(), self.rank);
        let eng = self.engine();
        let basis = self.basis_vectors(&eng)?;
        let nf = eng.normal_form(eng.to_vector(v), &basis)?;
        Ok(eng.to_polys(&nf, self.rank))
    }

    pub fn contains(&self, v: &[Poly]) -> Result<bool> {
        Ok(self.reduce(v)?.iter().all(|p| p.is_zero()))
    }

    pub fn contains_module(&self, other: &Submodule) -> Result<bool> {
        for g in other.generators() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Leading monomials of the Gröbner basis, grouped by component.
    fn leads_by_component(&self) -> Result<Vec<Vec<Monomial>>> {
        let eng = self.engine();
        let mut out = vec![Vec::new(); self.rank];
        for v in self.basis_vectors(&eng)? {
            let (c, m, _) = v.lead();
            out[*c].push(m.clone());
        }
        Ok(out)
    }

    /// `dim_K S^rank / N`.
    pub fn quotient_dimension(&self) -> Result<Dimension> {
        let mut total = 0;
        for leads in self.leads_by_component()? {
            match ideal::staircase_count(self.ring.nvars(), &leads) {
                Dimension::Finite(n) => total += n,
                Dimension::Infinite => return Ok(Dimension::Infinite),
            }
        }
        Ok(Dimension::Finite(total))
    }

    /// Standard basis `(component, monomial)` of `S^rank / N` when finite.
    pub fn standard_basis(&self) -> Result<Option<Vec<(usize, Monomial)>>> {
        let mut out = Vec::new();
        for (c, leads) in self.leads_by_component()?.into_iter().enumerate() {
            match staircase(self.ring.nvars(), &leads) {
                Some(ms) => out.extend(ms.into_iter().map(|m| (c, m))),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    /// Keeps the components listed in `comps`, in that order.
    pub fn project(&self, comps: &[usize]) -> Submodule {
        let gens = self
            .gens
            .iter()
            .map(|g| comps.iter().map(|&c| g[c].clone()).collect())
            .collect();
        Submodule::with_kind(&self.ring, comps.len(), gens, self.kind)
    }
}

/// `A * v` for a matrix given by its rows.
pub fn mat_vec(ring: &Ring, rows: &[Vec<Poly>], v: &[Poly]) -> Vec<Poly> {
    rows.iter()
        .map(|row| {
            row.iter().zip(v).fold(ring.zero(), |acc, (a, x)| {
                if a.is_zero() || x.is_zero() {
                    acc
                } else {
                    &acc + &(a * x)
                }
            })
        })
        .collect()
}

/// `{v in S^a : A v in N}` for a `b x a` matrix `A` (given by its `b` rows)
/// and a submodule `N` of `S^b`. The result contains the syzygies of `A`
/// modulo `N`.
pub fn kernel_to_quotient(ring: &Ring, a_rows: &[Vec<Poly>], ncols: usize, n: &Submodule) -> Result<Submodule> {
    let b = a_rows.len();
    assert_eq!(n.rank(), b, "target submodule has the wrong rank");
    for row in a_rows {
        assert_eq!(row.len(), ncols, "matrix row has the wrong length");
    }
    let mut gens: Vec<Vec<Poly>> = Vec::with_capacity(ncols + n.generators().len());
    for k in 0..ncols {
        let mut v: Vec<Poly> = a_rows.iter().map(|row| row[k].clone()).collect();
        for j in 0..ncols {
            v.push(if j == k { ring.one() } else { ring.zero() });
        }
        gens.push(v);
    }
    for g in n.generators() {
        let mut v = g.clone();
        v.extend((0..ncols).map(|_| ring.zero()));
        gens.push(v);
    }
    let big = Submodule::new(ring, b + ncols, gens);
    let gb = big.groebner()?;
    let kept = gb
        .iter()
        .filter(|v| v[..b].iter().all(|p| p.is_zero()))
        .map(|v| v[b..].to_vec())
        .collect();
    Ok(Submodule::new(ring, ncols, kept))
}

/// `{v in S^a : A v ≡ 0 mod I}` componentwise.
pub fn kernel_of_quotient_map(a_rows: &[Vec<Poly>], ncols: usize, ideal: &Ideal) -> Result<Submodule> {
    let n = Submodule::ideal_multiple(ideal, a_rows.len());
    kernel_to_quotient(ideal.ring(), a_rows, ncols, &n)
}

/// `(N :_{S^k} c) = {v : c v in N}`.
pub fn module_colon(n: &Submodule, c: &Poly) -> Result<Submodule> {
    let ring = n.ring();
    let k = n.rank();
    let rows: Vec<Vec<Poly>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { c.clone() } else { ring.zero() }).collect())
        .collect();
    kernel_to_quotient(ring, &rows, k, n)
}

/// The saturation `(N : c^∞)` of a submodule of `S^k`, with the number of
/// colon steps needed before the chain became stationary.
pub fn saturation(n: &Submodule, c: &Poly) -> Result<(Submodule, usize)> {
    if c.is_zero() {
        return Err(Error::InvalidInput("saturation by the zero element".into()));
    }
    let mut current = n.clone();
    let mut steps = 0;
    loop {
        let next = module_colon(&current, c)?;
        steps += 1;
        if current.contains_module(&next)? {
            return Ok((current, steps - 1));
        }
        current = next;
    }
}

/// Saturation of `N` by `c` modulo `I` on every component; errors when `c`
/// lies in `I`.
pub fn saturation_over(ideal: &Ideal, n: &Submodule, c: &Poly) -> Result<(Submodule, usize)> {
    if ideal.contains(c)? {
        return Err(Error::InvalidInput(format!(
            "the multiplier {c} vanishes in the quotient ring"
        )));
    }
    let full = n.sum(&Submodule::ideal_multiple(ideal, n.rank()));
    saturation(&full, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::Field;
    use crate::algebra::monomial::MonomialOrder;
    use crate::algebra::parse::parse_poly;

    fn ring(c: u64, vars: &[&str]) -> Ring {
        Ring::new(Field::from_characteristic(c).unwrap(), vars, MonomialOrder::GRevLex)
    }

    fn polys(r: &Ring, s: &[&str]) -> Vec<Poly> {
        s.iter().map(|t| parse_poly(r, t).unwrap()).collect()
    }

    #[test]
    fn basic_bases() {
        let r = ring(0, &["x"]);
        let i = Ideal::new(&r, polys(&r, &["x"]));
        assert_eq!(i.canonical_generators().unwrap(), vec!["x"]);
        assert!(Ideal::zero(&r).groebner().unwrap().is_empty());

        let r = ring(0, &["x", "y"]);
        let i = Ideal::new(&r, polys(&r, &["x^3 - y^2", "x^2*y"]));
        let y3 = parse_poly(&r, "y^3").unwrap();
        assert!(i.contains(&y3).unwrap());
        let gb = i.groebner().unwrap();
        for g in i.generators() {
            assert!(i.reduce(g).unwrap().is_zero());
        }
        assert!(gb.iter().all(|g| g.lead_coeff().unwrap().is_one()));
    }

    #[test]
    fn normal_forms() {
        let r = ring(0, &["x", "y"]);
        let i = Ideal::new(&r, polys(&r, &["x^3 - y^2"]));
        let lex = r.with_order(MonomialOrder::Lex);
        let il = i.to_ring(&lex);
        assert_eq!(il.reduce(&parse_poly(&lex, "x^3").unwrap()).unwrap().to_string(), "y^2");
        assert_eq!(i.reduce(&r.one()).unwrap(), r.one());
    }

    #[test]
    fn dimensions() {
        let r = ring(0, &["x", "y"]);
        assert_eq!(Ideal::maximal(&r).k_dimension().unwrap(), Dimension::Finite(1));
        assert_eq!(Ideal::maximal_power(&r, 2).k_dimension().unwrap(), Dimension::Finite(3));
        let i = Ideal::new(&r, polys(&r, &["x^2", "y^3"]));
        assert_eq!(i.k_dimension().unwrap(), Dimension::Finite(6));
        let cusp = Ideal::new(&r, polys(&r, &["x^3 - y^2"]));
        assert_eq!(cusp.k_dimension().unwrap(), Dimension::Infinite);
        assert_eq!(cusp.krull_dimension().unwrap(), Some(1));
        assert_eq!(Ideal::zero(&r).krull_dimension().unwrap(), Some(2));
        assert_eq!(Ideal::unit(&r).krull_dimension().unwrap(), None);
    }

    #[test]
    fn elimination_examples() {
        let r = ring(0, &["x", "y", "u", "v", "w"]);
        let i = Ideal::new(&r, polys(&r, &["u - x^2", "v - x*y", "w - y^2"]));
        let e = eliminate(&i, &[0, 1]).unwrap();
        let expect = Ideal::new(&r, polys(&r, &["u*w - v^2"]));
        assert!(e.same_ideal(&expect).unwrap());

        let r = ring(0, &["t", "x", "y"]);
        let i = Ideal::new(&r, polys(&r, &["x - t^2", "y - t^3"]));
        let e = eliminate(&i, &[0]).unwrap();
        let expect = Ideal::new(&r, polys(&r, &["x^3 - y^2"]));
        assert!(e.same_ideal(&expect).unwrap());
        assert!(eliminate(&i, &[]).unwrap().same_ideal(&i).unwrap());
    }

    #[test]
    fn colon_examples() {
        let r = ring(2, &["x", "y"]);
        let x2 = Ideal::new(&r, polys(&r, &["x^2"]));
        let x = Ideal::new(&r, polys(&r, &["x"]));
        assert!(ideal_colon(&x2, &x).unwrap().same_ideal(&x).unwrap());
        let f = Ideal::new(&r, polys(&r, &["x^3 + y^2"]));
        assert!(ideal_colon(&f, &f).unwrap().is_unit().unwrap());
        let f2 = Ideal::new(&r, polys(&r, &["(x^3 + y^2)^2"]));
        assert!(ideal_colon(&f2, &f).unwrap().same_ideal(&f).unwrap());
    }

    #[test]
    fn kernel_examples() {
        let r = ring(0, &["x", "y"]);
        let i = Ideal::new(&r, polys(&r, &["x^3 - y^2"]));
        let a = vec![polys(&r, &["x^2", "2y"])];
        let k = kernel_of_quotient_map(&a, 2, &i).unwrap();
        assert!(k.contains(&polys(&r, &["3x", "-3/2 y"])).unwrap());
        assert!(k.contains(&polys(&r, &["2y", "-x^2"])).unwrap());
        for g in k.generators() {
            let image = mat_vec(&r, &a, g);
            assert!(i.contains(&image[0]).unwrap());
        }

        let id = vec![polys(&r, &["1", "0"]), polys(&r, &["0", "1"])];
        assert!(kernel_of_quotient_map(&id, 2, &Ideal::zero(&r))
            .unwrap()
            .groebner()
            .unwrap()
            .is_empty());

        let r2 = ring(2, &["x", "y"]);
        let i2 = Ideal::new(&r2, polys(&r2, &["x^3 + y^2"]));
        let a2 = vec![polys(&r2, &["x^2", "0"])];
        let k2 = kernel_of_quotient_map(&a2, 2, &i2).unwrap();
        assert!(k2.contains(&polys(&r2, &["0", "1"])).unwrap());
    }

    #[test]
    fn saturation_examples() {
        let r = ring(0, &["x", "y"]);
        let cusp = Ideal::new(&r, polys(&r, &["x^3 - y^2"]));
        // M = R/(x^2) + R: relations x^2 e_0 and I on both components.
        let n = Submodule::new(&r, 2, vec![polys(&r, &["x^2", "0"])]);
        let y = parse_poly(&r, "y").unwrap();
        let (sat, _) = saturation_over(&cusp, &n, &y).unwrap();
        assert!(sat.contains(&polys(&r, &["1", "0"])).unwrap());
        assert!(!sat.contains(&polys(&r, &["0", "1"])).unwrap());

        let free = Submodule::zero(&r, 2);
        let (sat, _) = saturation_over(&cusp, &free, &y).unwrap();
        assert!(Submodule::ideal_multiple(&cusp, 2).contains_module(&sat).unwrap());
        let (sat, steps) = saturation_over(&cusp, &free, &r.one()).unwrap();
        assert_eq!(steps, 0);
        assert!(Submodule::ideal_multiple(&cusp, 2).contains_module(&sat).unwrap());
        assert!(saturation_over(&cusp, &free, &cusp.generators()[0]).is_err());
    }

    #[test]
    fn module_dimension() {
        let r = ring(0, &["x", "y"]);
        // S^2 / ((x, y) e_0 + (x^2, y) e_1) has dimension 1 + 2.
        let n = Submodule::new(
            &r,
            2,
            vec![
                polys(&r, &["x", "0"]),
                polys(&r, &["y", "0"]),
                polys(&r, &["0", "x^2"]),
                polys(&r, &["0", "y"]),
            ],
        );
        assert_eq!(n.quotient_dimension().unwrap(), Dimension::Finite(3));
        assert_eq!(n.standard_basis().unwrap().unwrap().len(), 3);
    }
}
