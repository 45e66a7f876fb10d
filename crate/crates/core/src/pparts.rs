//! Presentations of the modules of principal parts `P^n` of `R = S/I`,
//! their torsion, Fitting ideals, free rank and the resulting verdicts on
//! higher Nash blowups.

use crate::algebra::divided::apply_divided_power;
use crate::algebra::field::Scalar;
use crate::algebra::monomial::{monomials_up_to, Monomial};
use crate::algebra::poly::{Poly, Ring};
use crate::diffops::{differential_power, require_origin};
use crate::error::{Error, Result};
use crate::groebner::{kernel_of_quotient_map, saturation_over, Dimension, Ideal, Submodule};

/// Most minors a Fitting-ideal computation will expand.
pub const MINOR_LIMIT: u64 = 20_000;

/// A finitely presented module `S^g / (rows + I S^g)` over `R = S/I`.
#[derive(Clone, Debug)]
pub struct ModulePresentation {
    pub ideal: Ideal,
    pub ngens: usize,
    pub rows: Vec<Vec<Poly>>,
}

impl ModulePresentation {
    pub fn new(ideal: &Ideal, ngens: usize, rows: Vec<Vec<Poly>>) -> Self {
        ModulePresentation {
            ideal: ideal.clone(),
            ngens,
            rows,
        }
    }

    pub fn ring(&self) -> &Ring {
        self.ideal.ring()
    }

    /// All relations as a submodule of `S^g`, including `I S^g`.
    pub fn relations(&self) -> Submodule {
        let own = Submodule::new(self.ring(), self.ngens, self.rows.clone());
        own.sum(&Submodule::ideal_multiple(&self.ideal, self.ngens))
    }

    /// Relation rows reduced modulo `I`, zero rows dropped.
    pub fn reduced_rows(&self) -> Result<Vec<Vec<Poly>>> {
        let mut out = Vec::new();
        for r in &self.rows {
            let red: Vec<Poly> = r.iter().map(|p| self.ideal.reduce(p)).collect::<Result<_>>()?;
            if red.iter().any(|p| !p.is_zero()) {
                out.push(red);
            }
        }
        Ok(out)
    }

    /// Rank over the fraction field of `R` (assumed a domain).
    pub fn generic_rank(&self) -> Result<usize> {
        let rows = self.reduced_rows()?;
        Ok(self.ngens - matrix_rank_over_domain(&self.ideal, rows)?)
    }

    /// `dim_K M / m M` at the origin.
    pub fn fiber_dimension(&self) -> Result<u64> {
        let rows: Vec<Vec<Scalar>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|p| p.constant_term()).collect())
            .collect();
        Ok((self.ngens - crate::linalg::rank(self.ring().field(), &rows)) as u64)
    }
}

/// Rank over `Frac(S/I)` of a matrix with entries in `S`, by fraction-free
/// elimination with zero tests modulo `I`. Constant pivots are preferred.
pub fn matrix_rank_over_domain(ideal: &Ideal, mut rows: Vec<Vec<Poly>>) -> Result<usize> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for c in 0..ncols {
        let mut best: Option<usize> = None;
        for (i, row) in rows.iter().enumerate().skip(rank) {
            if row[c].is_zero() {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => {
                    let (p, q) = (&row[c], &rows[b][c]);
                    (p.is_constant() && !q.is_constant()) || (p.is_constant() == q.is_constant() && p.len() < q.len())
                }
            };
            if better {
                best = Some(i);
            }
        }
        let Some(p) = best else { continue };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        let pv = pivot_row[c].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            let mut updated = Vec::with_capacity(ncols);
            for (a, b) in row.iter().zip(&pivot_row) {
                let v = &(&pv * a) - &(&factor * b);
                updated.push(ideal.reduce(&v)?);
            }
            *row = updated;
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    Ok(rank)
}

/// `P^n` presented on `e_γ`, `|γ| <= n`, with one row per `(f_j, z^δ)`.
#[derive(Clone, Debug)]
pub struct PPartsPresentation {
    pub order: u32,
    pub labels: Vec<Monomial>,
    pub module: ModulePresentation,
    /// `dim V(I)`.
    pub dim: usize,
    /// `C(n + d, d)`.
    pub expected_rank: u64,
}

impl PPartsPresentation {
    pub fn label(&self, k: usize) -> String {
        let e: Vec<String> = self.labels[k].exponents().iter().map(|x| x.to_string()).collect();
        format!("e{}", e.join(""))
    }
}

fn binomial_u64(n: u64, k: u64) -> u64 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// `C(n + d, d)`, the rank of `P^n` at a smooth point of a `d`-dimensional variety.
pub fn expected_rank(n: u32, d: usize) -> u64 {
    binomial_u64(n as u64 + d as u64, d as u64)
}

pub fn variety_dimension(ideal: &Ideal) -> Result<usize> {
    ideal
        .krull_dimension()?
        .ok_or_else(|| Error::InvalidInput("the ideal is the unit ideal".into()))
}

pub fn principal_parts_presentation(ideal: &Ideal, n: u32) -> Result<PPartsPresentation> {
    if n == 0 {
        return Err(Error::InvalidInput("principal parts need order n >= 1".into()));
    }
    let ring = ideal.ring();
    let d_amb = ring.nvars();
    let labels = monomials_up_to(d_amb, n);
    let mut rows = Vec::new();
    for f in ideal.generators() {
        for delta in &labels {
            let row: Vec<Poly> = labels
                .iter()
                .map(|g| match delta.quotient_of(g) {
                    Some(a) => apply_divided_power(&a, f),
                    None => ring.zero(),
                })
                .collect();
            rows.push(row);
        }
    }
    let dim = variety_dimension(ideal)?;
    Ok(PPartsPresentation {
        order: n,
        module: ModulePresentation::new(ideal, labels.len(), rows),
        labels,
        dim,
        expected_rank: expected_rank(n, dim),
    })
}

/// Torsion of a presented module with respect to a multiplier `c`.
#[derive(Clone, Debug)]
pub struct TorsionReport {
    pub multiplier: Poly,
    /// Generators of `T(M)` as vectors in `S^g`, reduced modulo the relations.
    pub generators: Vec<Vec<Poly>>,
    /// `T(M) + relations`, the relation module of `M / T(M)`.
    pub saturated: Submodule,
    pub stabilization: usize,
    pub torsion_free: bool,
}

/// `T(M) = (0 :_M c^∞)`.
pub fn torsion_submodule(m: &ModulePresentation, c: &Poly) -> Result<TorsionReport> {
    let rel = Submodule::new(m.ring(), m.ngens, m.rows.clone());
    let (sat, stabilization) = saturation_over(&m.ideal, &rel, c)?;
    let full = m.relations();
    let mut generators = Vec::new();
    for g in sat.groebner()? {
        let r = full.reduce(g)?;
        if r.iter().any(|p| !p.is_zero()) && !generators.contains(&r) {
            generators.push(r);
        }
    }
    Ok(TorsionReport {
        multiplier: c.clone(),
        torsion_free: generators.is_empty(),
        generators,
        saturated: sat,
        stabilization,
    })
}

/// Determinant by cofactor expansion along the first row.
pub fn determinant(m: &[Vec<Poly>], ring: &Ring) -> Poly {
    let k = m.len();
    match k {
        0 => ring.one(),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {
            let mut acc = ring.zero();
            for j in 0..k {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let t = &m[0][j] * &determinant(&minor, ring);
                acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All nonzero `k x k` minors of the matrix, reduced modulo `I`.
pub fn minors(ideal: &Ideal, rows: &[Vec<Poly>], k: usize) -> Result<Vec<Poly>> {
    let ring = ideal.ring();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    if k == 0 {
        return Ok(vec![ring.one()]);
    }
    if k > rows.len() || k > ncols {
        return Ok(Vec::new());
    }
    let count = binomial_u64(rows.len() as u64, k as u64).saturating_mul(binomial_u64(ncols as u64, k as u64));
    if count > MINOR_LIMIT {
        return Err(Error::Budget {
            steps: count,
            what: format!("{k}-minors of a {}x{ncols} matrix", rows.len()),
        });
    }
    let row_sets = subsets(rows.len(), k);
    let col_sets = subsets(ncols, k);
    let mut out: Vec<Poly> = Vec::new();
    for rs in &row_sets {
        for cs in &col_sets {
            let sub: Vec<Vec<Poly>> = rs
                .iter()
                .map(|&r| cs.iter().map(|&c| rows[r][c].clone()).collect())
                .collect();
            let det = ideal.reduce(&determinant(&sub, ring))?;
            if !det.is_zero() {
                let det = det.monic();
                if !out.contains(&det) {
                    out.push(det);
                }
            }
        }
    }
    Ok(out)
}

/// `Fitt_i(M)`: the `(g - i)`-minors of the relations together with `I`.
pub fn fitting_ideal(m: &ModulePresentation, i: usize) -> Result<Ideal> {
    let ring = m.ring();
    if i >= m.ngens {
        return Ok(Ideal::unit(ring));
    }
    let rows = m.reduced_rows()?;
    let mut gens = minors(&m.ideal, &rows, m.ngens - i)?;
    gens.extend(m.ideal.generators().iter().cloned());
    Ok(Ideal::new(ring, gens))
}

/// Jacobian matrix `(∂f_j / ∂x_i)`.
pub fn jacobian_matrix(ideal: &Ideal) -> Vec<Vec<Poly>> {
    let n = ideal.ring().nvars();
    ideal
        .generators()
        .iter()
        .map(|f| (0..n).map(|i| apply_divided_power(&Monomial::var(n, i), f)).collect())
        .collect()
}

/// Nonzero elements of the Jacobian ideal in `R`, monic, ascending by
/// leading monomial: the candidates for a torsion multiplier.
pub fn jacobian_multipliers(ideal: &Ideal) -> Result<Vec<Poly>> {
    let ring = ideal.ring();
    let codim = ring.nvars() - variety_dimension(ideal)?;
    let jac = jacobian_matrix(ideal);
    let mut cands = minors(ideal, &jac, codim)?;
    if cands.is_empty() {
        return Err(Error::InvalidInput(
            "the Jacobian ideal vanishes in the quotient ring (inseparable input)".into(),
        ));
    }
    let order = ring.order();
    cands.sort_by(|a, b| {
        order
            .cmp(a.lead_monomial().unwrap(), b.lead_monomial().unwrap())
            .then_with(|| a.len().cmp(&b.len()))
    });
    Ok(cands)
}

pub fn default_multiplier(ideal: &Ideal) -> Result<Poly> {
    Ok(jacobian_multipliers(ideal)?.remove(0))
}

/// Outcome of the torsion-split freeness test on `M / T(M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structural {
    /// `M / T` is free of the generic rank, hence the free rank of `M`.
    Free(u64),
    /// `M / T` needs more generators at the origin than its generic rank.
    NotFree { fiber_dim: u64 },
    /// The computation exceeded its budget.
    Unavailable(String),
}

#[derive(Clone, Debug)]
pub struct FreeRank {
    /// `dim_K R / m^<n+1>`.
    pub value: u64,
    pub expected: u64,
    pub structural: Structural,
    /// False only when the structural path is conclusive and disagrees.
    pub consistent: bool,
}

/// Torsion split of `P^n`: free of rank `r` exactly when `M / T` has fiber
/// dimension `r` at the origin.
pub fn structural_free_rank(p: &PPartsPresentation, c: &Poly) -> Result<(Structural, TorsionReport)> {
    let tor = torsion_submodule(&p.module, c)?;
    let ring = p.module.ring();
    let maximal = Submodule::ideal_multiple(&Ideal::maximal(ring), p.module.ngens);
    let fiber = tor.saturated.sum(&maximal).quotient_dimension()?;
    let fiber = match fiber {
        Dimension::Finite(f) => f,
        Dimension::Infinite => unreachable!("contains m S^g"),
    };
    let s = if fiber == p.expected_rank {
        Structural::Free(fiber)
    } else {
        Structural::NotFree { fiber_dim: fiber }
    };
    Ok((s, tor))
}

pub fn free_rank_pparts(ideal: &Ideal, n: u32) -> Result<FreeRank> {
    require_origin(ideal)?;
    let p = principal_parts_presentation(ideal, n)?;
    let value = differential_power(ideal, n + 1)?.codim;
    let structural = if ideal.is_zero_ideal() {
        Structural::Free(p.expected_rank)
    } else {
        match structural_free_rank(&p, &default_multiplier(ideal)?) {
            Ok((s, _)) => s,
            Err(Error::Budget { what, .. }) => Structural::Unavailable(what),
            Err(e) => return Err(e),
        }
    };
    let consistent = match structural {
        Structural::Free(r) => r == value,
        _ => true,
    };
    Ok(FreeRank {
        value,
        expected: p.expected_rank,
        structural,
        consistent,
    })
}

/// The minor ideal `J = Fitt_r(P^n)` of a hypersurface with its local
/// generator count `dim_K J / mJ`.
#[derive(Clone, Debug)]
pub struct MinorIdeal {
    pub generators: Vec<String>,
    pub local_generators: u64,
    /// A generator spanning `J / mJ` when that space is a line.
    pub principal_witness: Option<String>,
}

/// `dim_K J / mJ` for an ideal `J` of `R = S/I`, with a witness generator
/// when `J` is locally principal.
pub fn local_generator_count(ideal: &Ideal, j: &Ideal) -> Result<(u64, Option<Poly>)> {
    let ring = ideal.ring();
    if j.contains_ideal(&Ideal::unit(ring))? || j.generators().iter().any(|g| !g.constant_term().is_zero()) {
        return Ok((1, Some(ring.one())));
    }
    let mut gens: Vec<Poly> = Vec::new();
    for g in j.generators() {
        let r = ideal.reduce(g)?;
        if !r.is_zero() {
            gens.push(r);
        }
    }
    if gens.is_empty() {
        return Ok((0, None));
    }
    let row = vec![gens.clone()];
    let kernel = kernel_of_quotient_map(&row, gens.len(), ideal)?;
    let fiber = kernel.sum(&Submodule::ideal_multiple(&Ideal::maximal(ring), gens.len()));
    let dim = fiber.quotient_dimension()?.finite().expect("contains m S^s");
    let witness = if dim == 1 {
        (0..gens.len())
            .find(|&k| {
                let e: Vec<Poly> = (0..gens.len())
                    .map(|i| if i == k { ring.one() } else { ring.zero() })
                    .collect();
                !fiber.contains(&e).unwrap_or(true)
            })
            .map(|k| gens[k].clone())
    } else {
        None
    };
    Ok((dim, witness))
}

pub fn minor_ideal(p: &PPartsPresentation) -> Result<Ideal> {
    fitting_ideal(&p.module, p.expected_rank as usize)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NashKind {
    NotIso,
    IsoCertified,
    NoObstruction,
}

impl NashKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            NashKind::NotIso => "NOT_ISO",
            NashKind::IsoCertified => "ISO_CERTIFIED",
            NashKind::NoObstruction => "NO_OBSTRUCTION",
        }
    }
}

#[derive(Clone, Debug)]
pub struct NashVerdict {
    pub kind: NashKind,
    pub order: u32,
    pub dim: usize,
    pub free_rank: u64,
    pub expected: u64,
    pub diff_power_codim: u64,
    pub hypersurface: bool,
    pub minor_ideal: Option<MinorIdeal>,
    pub structural: Structural,
    /// Notes on evidence that could not be produced.
    pub notes: Vec<String>,
}

/// Obstruction and certification for `Nash_n(X) ≅ X` at the origin.
///
/// A free-rank deficit is an obstruction in every characteristic. Only
/// hypersurfaces can be certified, through local principality of the minor
/// ideal; asking to certify anything else is out of scope.
pub fn nash_isomorphism_check(ideal: &Ideal, n: u32, certify: bool) -> Result<NashVerdict> {
    require_origin(ideal)?;
    let fr = free_rank_pparts(ideal, n)?;
    let p = principal_parts_presentation(ideal, n)?;
    let hypersurface = ideal.groebner()?.len() == 1;
    let deficient = fr.value < fr.expected;
    let mut notes = Vec::new();
    let mut minor = None;
    if hypersurface {
        let generator = ideal.groebner()?[0].clone();
        let hyper = Ideal::new(ideal.ring(), vec![generator]);
        let hp = principal_parts_presentation(&hyper, n)?;
        match minor_ideal(&hp) {
            Ok(j) => {
                let (count, witness) = local_generator_count(&hyper, &j)?;
                let mut shown = Vec::new();
                for g in j.groebner()? {
                    shown.push(g.to_string());
                }
                minor = Some(MinorIdeal {
                    generators: shown,
                    local_generators: count,
                    principal_witness: witness.map(|w| w.to_string()),
                });
            }
            Err(Error::Budget { what, .. }) if deficient => notes.push(format!("minor ideal omitted: {what}")),
            Err(e) => return Err(e),
        }
    }
    let kind = if deficient {
        NashKind::NotIso
    } else if hypersurface {
        match &minor {
            Some(m) if m.local_generators == 1 => NashKind::IsoCertified,
            _ => NashKind::NoObstruction,
        }
    } else if certify {
        return Err(Error::UnsupportedScope(
            "isomorphism certification is only implemented for hypersurfaces".into(),
        ));
    } else {
        NashKind::NoObstruction
    };
    Ok(NashVerdict {
        kind,
        order: n,
        dim: p.dim,
        free_rank: fr.value,
        expected: fr.expected,
        diff_power_codim: fr.value,
        hypersurface,
        minor_ideal: minor,
        structural: fr.structural,
        notes,
    })
}
