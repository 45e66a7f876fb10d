//! Task dispatch: one task kind per core operation.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use nashforge_core::algebra::{Monomial, Poly, Ring};
use nashforge_core::charp::{fedder_test, jacobian_smoothness, kunz_test, Regularity, Smoothness};
use nashforge_core::diffops::{
    default_cutoff, differential_core_chain, differential_power, jets_oracle_diff_dim, pairing_from, CoreVerdict,
};
use nashforge_core::invariants::{pseudo_reflection_check, quotient_diff_power_dims, GroupAction, Hypothesis};
use nashforge_core::pparts::{
    default_multiplier, nash_isomorphism_check, principal_parts_presentation, structural_free_rank, variety_dimension,
    Structural,
};
use nashforge_core::{Error, Ideal, Result};
use serde_json::{json, Value};

use crate::input::{format_matrix, VarietyInput};
use crate::report::{Report, BASE_FIELD_CAVEAT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TaskKind {
    NashCheck,
    DiffPower,
    PParts,
    CoreChain,
    FPure,
    Kunz,
    Smooth,
    Quotient,
    Oracle,
}

impl TaskKind {
    pub const ALL: [TaskKind; 9] = [
        TaskKind::NashCheck,
        TaskKind::DiffPower,
        TaskKind::PParts,
        TaskKind::CoreChain,
        TaskKind::FPure,
        TaskKind::Kunz,
        TaskKind::Smooth,
        TaskKind::Quotient,
        TaskKind::Oracle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TaskKind::NashCheck => "nash-check",
            TaskKind::DiffPower => "diffpower",
            TaskKind::PParts => "pparts",
            TaskKind::CoreChain => "core-chain",
            TaskKind::FPure => "fpure",
            TaskKind::Kunz => "kunz",
            TaskKind::Smooth => "smooth",
            TaskKind::Quotient => "quotient",
            TaskKind::Oracle => "oracle",
        }
    }

    /// The order used when neither the command line nor the file sets one.
    /// `None` for tasks that take no order.
    pub fn default_order(self) -> Option<u32> {
        match self {
            TaskKind::CoreChain => Some(4),
            TaskKind::FPure | TaskKind::Kunz | TaskKind::Smooth => None,
            _ => Some(1),
        }
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TaskKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<TaskKind> {
        TaskKind::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown task '{s}'")))
    }
}

#[derive(Clone, Debug, Default)]
pub struct TaskOptions {
    pub order: Option<u32>,
    pub verify: bool,
    pub budget: Option<u64>,
    /// Record wall-clock time; off by default so reports are reproducible.
    pub timing: bool,
}

struct Outcome {
    dim: usize,
    evidence: Value,
    verdict: String,
    caveats: Vec<String>,
    checks: Vec<Value>,
}

const IRREDUCIBLE: &str = "irreducibility of the variety is assumed, not checked";

fn strings(polys: &[Poly]) -> Vec<String> {
    polys.iter().map(|p| p.to_string()).collect()
}

fn monomials(ring: &Ring, ms: &[Monomial]) -> Vec<String> {
    ms.iter().map(|m| ring.format_monomial(m)).collect()
}

fn check(name: &str, expected: u64, got: u64) -> Value {
    json!({"name": name, "expected": expected, "got": got, "agrees": expected == got})
}

fn jets_check(name: &str, ideal: &Ideal, n: u32, expected: u64) -> Result<Value> {
    let cutoff = default_cutoff(ideal, n);
    let jets = jets_oracle_diff_dim(ideal, n, cutoff)?;
    let mut c = check(name, expected, jets);
    c["cutoff"] = json!(cutoff);
    Ok(c)
}

fn structural_json(s: &Structural) -> Value {
    match s {
        Structural::Free(r) => json!({"kind": "FREE", "rank": r}),
        Structural::NotFree { fiber_dim } => json!({"kind": "NOT_FREE", "fiber_dim": fiber_dim}),
        Structural::Unavailable(why) => json!({"kind": "UNAVAILABLE", "reason": why}),
    }
}

pub fn run_task(input: &VarietyInput, kind: TaskKind, opts: &TaskOptions) -> Result<Report> {
    let start = Instant::now();
    let ring = match opts.budget {
        Some(b) => input.ring().with_budget(b),
        None => input.ring().clone(),
    };
    let ideal = input.ideal.to_ring(&ring);
    let order = opts.order.or(input.task.order).or(kind.default_order());
    let order = kind.default_order().and(order);
    if order == Some(0) {
        return Err(Error::InvalidInput("the order must be at least 1".into()));
    }
    if kind != TaskKind::Quotient && input.group.is_some() {
        return Err(Error::InvalidInput(format!(
            "task {kind} does not use a [group] section"
        )));
    }
    let n = order.unwrap_or(0);
    let mut out = match kind {
        TaskKind::NashCheck => nash_check(&ideal, n, opts.verify)?,
        TaskKind::DiffPower => diffpower(&ideal, n, opts.verify)?,
        TaskKind::Oracle => oracle(&ideal, n)?,
        TaskKind::PParts => pparts(&ideal, n, opts.verify)?,
        TaskKind::CoreChain => core_chain(&ideal, n, opts.verify)?,
        TaskKind::FPure => fpure(&ideal)?,
        TaskKind::Kunz => kunz(&ideal, opts.verify)?,
        TaskKind::Smooth => smooth(&ideal, opts.verify)?,
        TaskKind::Quotient => quotient(input, &ring, n, opts.verify)?,
    };
    if opts.verify {
        let agrees = out.checks.iter().all(|c| c["agrees"] == json!(true));
        out.evidence["verify"] = json!({"agrees": agrees, "checks": out.checks});
    }
    let mut caveats = vec![BASE_FIELD_CAVEAT.to_string()];
    if input.point.is_some() {
        caveats.push("the distinguished point was translated to the origin".into());
    }
    caveats.extend(out.caveats);
    Ok(Report {
        task: kind.as_str().into(),
        input_hash: input.input_hash(),
        characteristic: input.characteristic,
        dim: out.dim,
        order,
        evidence: out.evidence,
        verdict: out.verdict,
        caveats,
        ms: if opts.timing {
            start.elapsed().as_millis() as u64
        } else {
            0
        },
    })
}

fn nash_check(ideal: &Ideal, n: u32, verify: bool) -> Result<Outcome> {
    let v = nash_isomorphism_check(ideal, n, true)?;
    let minor = v.minor_ideal.as_ref().map(|m| {
        json!({
            "generators": m.generators,
            "local_generators": m.local_generators,
            "principal_witness": m.principal_witness,
        })
    });
    let evidence = json!({
        "free_rank": v.free_rank,
        "expected_rank": v.expected,
        "diff_power_codim": v.diff_power_codim,
        "hypersurface": v.hypersurface,
        "minor_ideal": minor,
        "structural": structural_json(&v.structural),
        "notes": v.notes,
    });
    let mut checks = Vec::new();
    if verify {
        checks.push(jets_check(
            "jets oracle vs differential power",
            ideal,
            n + 1,
            v.diff_power_codim,
        )?);
        if let Structural::Free(r) = v.structural {
            checks.push(check("structural free rank vs differential power", v.free_rank, r));
        }
    }
    Ok(Outcome {
        dim: v.dim,
        evidence,
        verdict: v.kind.as_str().into(),
        caveats: vec![IRREDUCIBLE.into()],
        checks,
    })
}

fn diffpower(ideal: &Ideal, n: u32, verify: bool) -> Result<Outcome> {
    let dp = differential_power(ideal, n)?;
    let pm = pairing_from(&dp);
    let ring = ideal.ring();
    let entries: Vec<Vec<String>> = pm
        .entries
        .iter()
        .map(|r| r.iter().map(|c| ring.field().format(c)).collect())
        .collect();
    let evidence = json!({
        "codim": dp.codim,
        "generators": dp.ideal.canonical_generators()?,
        "standard_monomials": monomials(ring, &dp.standard_monomials),
        "pairing": {
            "rank": pm.rank,
            "monomials": monomials(ring, &pm.monomials),
            "entries": entries,
        },
    });
    let verdict = if dp.codim == pm.rank as u64 {
        "PATHS_AGREE"
    } else {
        "PATHS_DISAGREE"
    };
    let mut checks = Vec::new();
    if verify {
        checks.push(jets_check("jets oracle vs differential power", ideal, n, dp.codim)?);
    }
    Ok(Outcome {
        dim: variety_dimension(ideal)?,
        evidence,
        verdict: verdict.into(),
        caveats: Vec::new(),
        checks,
    })
}

fn oracle(ideal: &Ideal, n: u32) -> Result<Outcome> {
    let dp = differential_power(ideal, n)?;
    let rank = pairing_from(&dp).rank as u64;
    let cutoff = default_cutoff(ideal, n);
    let jets = jets_oracle_diff_dim(ideal, n, cutoff)?;
    let agree = jets == dp.codim && jets == rank;
    let evidence = json!({
        "jets_dim": jets,
        "cutoff": cutoff,
        "diff_power_codim": dp.codim,
        "pairing_rank": rank,
    });
    Ok(Outcome {
        dim: variety_dimension(ideal)?,
        evidence,
        verdict: if agree { "PATHS_AGREE" } else { "PATHS_DISAGREE" }.into(),
        caveats: Vec::new(),
        checks: vec![
            check("jets oracle vs differential power", dp.codim, jets),
            check("pairing rank", dp.codim, rank),
        ],
    })
}

fn pparts(ideal: &Ideal, n: u32, verify: bool) -> Result<Outcome> {
    let p = principal_parts_presentation(ideal, n)?;
    let ring = ideal.ring();
    let multiplier = if ideal.is_zero_ideal() {
        ring.one()
    } else {
        default_multiplier(ideal)?
    };
    let (structural, tor) = structural_free_rank(&p, &multiplier)?;
    let relations: Vec<Vec<String>> = p.module.rows.iter().map(|r| strings(r)).collect();
    let torsion: Vec<Vec<String>> = tor.generators.iter().map(|v| strings(v)).collect();
    let evidence = json!({
        "labels": (0..p.labels.len()).map(|k| p.label(k)).collect::<Vec<_>>(),
        "relations": relations,
        "generic_rank": p.module.generic_rank()?,
        "expected_rank": p.expected_rank,
        "torsion": {
            "multiplier": multiplier.to_string(),
            "generators": torsion,
            "stabilization": tor.stabilization,
        },
        "structural": structural_json(&structural),
    });
    let mut checks = Vec::new();
    if verify {
        if let Structural::Free(r) = structural {
            checks.push(jets_check("jets oracle vs structural free rank", ideal, n + 1, r)?);
        }
    }
    Ok(Outcome {
        dim: p.dim,
        evidence,
        verdict: if tor.torsion_free {
            "TORSION_FREE"
        } else {
            "HAS_TORSION"
        }
        .into(),
        caveats: vec![IRREDUCIBLE.into()],
        checks,
    })
}

fn core_chain(ideal: &Ideal, n_max: u32, verify: bool) -> Result<Outcome> {
    let chain = differential_core_chain(ideal, n_max)?;
    let entries: Vec<Value> = chain
        .entries
        .iter()
        .map(|e| json!({"order": e.order, "codim": e.codim, "generators": e.generators}))
        .collect();
    let (verdict, core) = match &chain.verdict {
        CoreVerdict::CoreStabilized(g) => ("CORE_STABILIZED", Some(g.clone())),
        CoreVerdict::CoreZeroLikely => ("CORE_ZERO_LIKELY", None),
    };
    let mut checks = Vec::new();
    if verify {
        for e in &chain.entries {
            checks.push(jets_check(
                &format!("jets oracle at order {}", e.order),
                ideal,
                e.order,
                e.codim,
            )?);
        }
    }
    Ok(Outcome {
        dim: variety_dimension(ideal)?,
        evidence: json!({"chain": entries, "stable_ideal": core}),
        verdict: verdict.into(),
        caveats: vec!["the chain verdict is heuristic evidence, not a proof".into()],
        checks,
    })
}

fn fpure(ideal: &Ideal) -> Result<Outcome> {
    let r = fedder_test(ideal)?;
    let mut caveats = vec![IRREDUCIBLE.to_string()];
    if r.witness.is_some() {
        caveats.push("strong F-regularity is not certified".into());
    }
    Ok(Outcome {
        dim: variety_dimension(ideal)?,
        evidence: json!({
            "p": r.p,
            "colon": r.colon,
            "witness": r.witness,
            "witness_monomial": r.witness_monomial,
        }),
        verdict: r.verdict.as_str().into(),
        caveats,
        checks: Vec::new(),
    })
}

fn kunz(ideal: &Ideal, verify: bool) -> Result<Outcome> {
    let k = kunz_test(ideal)?;
    let fitting = k
        .fitting
        .as_ref()
        .map(|f| json!({"top_is_unit": f.top_is_unit, "below_vanishes": f.below_vanishes}));
    let mut checks = vec![check(
        "fiber dimension vs Frobenius colength",
        k.fiber_dim,
        k.frobenius_colength,
    )];
    if verify {
        let s = jacobian_smoothness(ideal)?;
        let smooth = (s.verdict == Smoothness::Smooth) as u64;
        checks.push(check(
            "Jacobian criterion",
            (k.verdict == Regularity::Regular) as u64,
            smooth,
        ));
    }
    Ok(Outcome {
        dim: variety_dimension(ideal)?,
        evidence: json!({
            "p": k.p,
            "generators": k.generators,
            "expected_rank": k.expected_rank,
            "fiber_dim": k.fiber_dim,
            "frobenius_colength": k.frobenius_colength,
            "fitting": fitting,
        }),
        verdict: k.verdict.as_str().into(),
        caveats: vec![IRREDUCIBLE.into()],
        checks,
    })
}

fn smooth(ideal: &Ideal, verify: bool) -> Result<Outcome> {
    let s = jacobian_smoothness(ideal)?;
    let mut checks = Vec::new();
    if verify && ideal.ring().field().characteristic() > 0 {
        let k = kunz_test(ideal)?;
        let regular = (k.verdict == Regularity::Regular) as u64;
        checks.push(check("Kunz test", (s.verdict == Smoothness::Smooth) as u64, regular));
    }
    Ok(Outcome {
        dim: s.dim,
        evidence: json!({"jacobian_rank": s.jacobian_rank, "codim": s.codim, "dim": s.dim}),
        verdict: s.verdict.as_str().into(),
        caveats: Vec::new(),
        checks,
    })
}

fn quotient(input: &VarietyInput, ring: &Ring, n: u32, verify: bool) -> Result<Outcome> {
    let group = input
        .group
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("the quotient task needs a [group] section".into()))?;
    if !input.ideal.is_zero_ideal() {
        return Err(Error::InvalidInput(
            "the quotient task acts on affine space; leave the ideal empty".into(),
        ));
    }
    let g = if group.generators {
        GroupAction::generated_by(ring, group.elements.clone())?
    } else {
        GroupAction::new(ring, group.elements.clone())?
    };
    if let Hypothesis::Fails(w) = pseudo_reflection_check(&g) {
        return Err(Error::UnsupportedScope(format!(
            "hypothesis FAILS: the element [{}] fixes a hyperplane of linear forms",
            format_matrix(ring.field(), &w)
        )));
    }
    let q = quotient_diff_power_dims(&g, n)?;
    let pres = &q.presentation;
    let mut checks = vec![
        check("invariant count by degree", q.codim, q.codim_by_count),
        check("differential power of the presentation", q.codim, q.codim_by_diffpower),
    ];
    if verify {
        checks.push(jets_check(
            "jets oracle on the presentation",
            &pres.relations,
            n + 1,
            q.codim,
        )?);
    }
    Ok(Outcome {
        dim: ring.nvars(),
        evidence: json!({
            "group_order": g.order(),
            "hypothesis": "HOLDS",
            "invariants": strings(&pres.invariants),
            "degrees": pres.degrees,
            "target_variables": pres.target.names(),
            "relations": pres.relations.canonical_generators()?,
            "codim": q.codim,
            "codim_by_count": q.codim_by_count,
            "codim_by_diffpower": q.codim_by_diffpower,
            "bound": q.bound,
        }),
        verdict: if q.not_iso { "NOT_ISO" } else { "NO_OBSTRUCTION" }.into(),
        caveats: vec!["dimensions are computed in the graded ring at the origin".into()],
        checks,
    })
}
