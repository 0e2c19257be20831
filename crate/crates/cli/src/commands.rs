use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use molwb_core::checker::{
    eval_identity, holds, refute_bounded, satisfiable_bounded, subspace_rows, AssignmentFile,
    RefuteConfig, SatConfig, SatWitness,
};
use molwb_core::feas::{
    emit, encode_gaussian, penalty_solve, rationalize_and_verify, EmitFormat, SolveOutcome,
    SolveParams,
};
use molwb_core::generators::{delta_diamond, delta_distributive, diamond_terms, sigma};
use molwb_core::model::{catalog_spec, FiniteModel, Mol};
use molwb_core::{parse_identity, with_field, Field, FieldTag, Identity, Subspace, SubspaceLattice};
use serde_json::{json, Map, Value};

use crate::Family;

/// What a command prints, in both output formats, and its exit code.
pub struct Report {
    pub code: u8,
    pub text: String,
    pub json: Value,
}

fn report(command: &str, code: u8, text: String, body: Value) -> Report {
    let mut json = json!({"v": 1, "command": command});
    if let (Value::Object(out), Value::Object(fields)) = (&mut json, body) {
        out.extend(fields);
    }
    Report { code, text, json }
}

/// `refute` and `sat` search over Q or Q(i) only.
macro_rules! on_search_field {
    ($tag:expr, $F:ident => $body:expr) => {
        match $tag {
            FieldTag::Q => {
                type $F = molwb_core::Rational;
                $body
            }
            FieldTag::Qi => {
                type $F = molwb_core::GaussRational;
                $body
            }
            other => bail!("searches run over Q or Qi, not {other}"),
        }
    };
}

fn identity(text: &str) -> Result<Identity> {
    parse_identity(text).with_context(|| format!("cannot parse identity {text:?}"))
}

fn load_model(spec: &str) -> Result<Mol> {
    if let Ok(m) = catalog_spec(spec) {
        return Ok(m);
    }
    let text = fs::read_to_string(spec)
        .with_context(|| format!("{spec:?} is neither a catalog model nor a readable file"))?;
    Ok(FiniteModel::from_json(&text)?.into_mol()?)
}

fn subspace_lines<F: Field>(a: impl IntoIterator<Item = (String, Subspace<F>)>) -> String {
    a.into_iter().fold(String::new(), |mut s, (v, u)| {
        let _ = write!(s, "\n  {v} = {u}");
        s
    })
}

fn write_witness(path: Option<&Path>, file: &AssignmentFile) -> Result<()> {
    if let Some(p) = path {
        fs::write(p, file.to_json() + "\n").with_context(|| format!("cannot write {}", p.display()))?;
    }
    Ok(())
}

pub fn check_model(text: &str, spec: &str, cap: Option<u64>) -> Result<Report> {
    let id = identity(text)?;
    let m = load_model(spec)?;
    let r = holds(&id, &m, cap)?;
    let status = if r.holds { "holds" } else { "refuted" };
    let mut out = format!("{id}: {status} in {spec} ({} assignments)", r.assignments);
    let mut body = json!({
        "identity": id.to_string(),
        "model": spec,
        "status": status,
        "assignments": r.assignments,
    });
    if let Some(w) = &r.witness {
        let named = w.named(&m);
        let assignment: Map<String, Value> =
            named.iter().map(|(v, e)| (v.to_string(), Value::from(e.as_str()))).collect();
        out.push_str("\nwitness:");
        for (v, e) in named.iter() {
            let _ = write!(out, " {v}={e}");
        }
        let _ = write!(out, "\nlhs = {}, rhs = {}", m.name(w.lhs), m.name(w.rhs));
        body["witness"] = json!({"assignment": assignment, "lhs": m.name(w.lhs), "rhs": m.name(w.rhs)});
    }
    Ok(report("check", u8::from(!r.holds), out, body))
}

pub fn check_assignment(text: &str, path: &Path) -> Result<Report> {
    let id = identity(text)?;
    let raw = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let file = AssignmentFile::from_json(&raw)?;
    with_field!(file.tag()?, F => check_subspaces::<F>(&id, &file))?
}

fn check_subspaces<F: Field>(id: &Identity, file: &AssignmentFile) -> Result<Report> {
    let a = file.to_assignment::<F>()?;
    let lat = SubspaceLattice::<F>::canonical(file.d)?;
    let (lhs, rhs) = eval_identity(&lat, id, &a)?;
    let holds = lhs == rhs;
    let status = if holds { "holds" } else { "refuted" };
    let out = format!(
        "{id}: {status} under the assignment in {}^{}\n  lhs = {lhs}\n  rhs = {rhs}",
        F::tag(),
        file.d
    );
    let body = json!({
        "identity": id.to_string(),
        "field": F::tag().to_string(),
        "d": file.d,
        "status": status,
        "lhs": subspace_rows(&lhs),
        "rhs": subspace_rows(&rhs),
    });
    Ok(report("check", u8::from(!holds), out, body))
}

pub fn refute(
    text: &str,
    field: FieldTag,
    dmax: Option<usize>,
    trials: Option<u64>,
    seed: u64,
    witness_out: Option<&Path>,
) -> Result<Report> {
    let id = identity(text)?;
    let mut config = RefuteConfig::default();
    if let Some(t) = trials {
        config.base_trials = t;
        config.max_trials_per_dim = t;
    }
    on_search_field!(field, F => refute_in::<F>(&id, dmax, seed, &config, witness_out))
}

fn refute_in<F: Field>(
    id: &Identity,
    dmax: Option<usize>,
    seed: u64,
    config: &RefuteConfig,
    witness_out: Option<&Path>,
) -> Result<Report> {
    let r = refute_bounded::<F>(id, dmax, seed, config)?;
    if !r.verify(config)? {
        bail!("internal error: the witness does not re-verify");
    }
    let bound = r.bound.unwrap_or_default();
    let mut out = format!(
        "{id}: {} over {} (dimensions {}..={}, bound {bound}, {} trials, seed {seed})",
        r.status.as_str(),
        F::tag(),
        r.stats.dims.first().copied().unwrap_or(0),
        r.stats.dims.last().copied().unwrap_or(0),
        r.stats.trials,
    );
    let mut body = json!({
        "identity": id.to_string(),
        "field": F::tag().to_string(),
        "seed": seed,
        "status": r.status.as_str(),
        "bound": bound,
        "dims": r.stats.dims,
        "trials": r.stats.trials,
    });
    if let Some(w) = &r.witness {
        let file = AssignmentFile::from_assignment(w.d, &w.assignment);
        write_witness(witness_out, &file)?;
        let _ = write!(out, "\nwitness in {}^{} (trial seed {}):", F::tag(), w.d, w.trial_seed);
        out += &subspace_lines(w.assignment.iter().map(|(v, s)| (v.to_string(), s.clone())));
        let _ = write!(out, "\n  lhs = {}\n  rhs = {}", w.lhs, w.rhs);
        body["witness"] = json!({
            "d": w.d,
            "trial": w.trial,
            "trial_seed": w.trial_seed,
            "assignment": serde_json::to_value(&file)?,
            "lhs": subspace_rows(&w.lhs),
            "rhs": subspace_rows(&w.rhs),
        });
    }
    Ok(report("refute", u8::from(r.is_refuted()), out, body))
}

pub fn sat(path: &Path, field: FieldTag, dcap: usize, trials: u64, seed: u64) -> Result<Report> {
    let raw = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut eqs = vec![];
    for (n, line) in raw.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if !line.is_empty() {
            eqs.push(identity(line).with_context(|| format!("line {}", n + 1))?);
        }
    }
    if eqs.is_empty() {
        bail!("{} contains no equations", path.display());
    }
    let config = SatConfig { dcap, trials, seed, ..SatConfig::default() };
    on_search_field!(field, F => sat_in::<F>(&eqs, &config))
}

fn sat_in<F: Field>(eqs: &[Identity], config: &SatConfig) -> Result<Report> {
    let r = satisfiable_bounded::<F>(eqs, config)?;
    let mut body = json!({
        "equations": eqs.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "field": F::tag().to_string(),
        "seed": config.seed,
        "status": if r.found.is_some() { "found" } else { "not-found-within-budget" },
        "searched": r.searched,
        "skipped": r.skipped,
    });
    match &r.found {
        Some(SatWitness::Finite { model, assignment }) => {
            let a: Map<String, Value> =
                assignment.iter().map(|(v, e)| (v.to_string(), Value::from(e.as_str()))).collect();
            body["witness"] = json!({"model": model, "assignment": a});
        }
        Some(SatWitness::Subspace { d, trial_seed, assignment }) => {
            let file = AssignmentFile::from_assignment(*d, assignment);
            body["witness"] = json!({"d": d, "trial_seed": trial_seed, "assignment": serde_json::to_value(&file)?});
        }
        None => {}
    }
    Ok(report("sat", u8::from(r.found.is_some()), r.to_string(), body))
}

pub fn generate(family: Family, d: usize, m: Option<usize>) -> Result<Report> {
    let (name, id) = match family {
        Family::DeltaDist => ("delta-dist", delta_distributive(d)?),
        Family::DeltaDiamond => ("delta-diamond", delta_diamond(d)?),
        Family::Sigma => {
            let m = m.context("sigma needs both d and m")?;
            ("sigma", sigma(d, m)?)
        }
        Family::Diamond => {
            let dt = diamond_terms(d)?;
            let terms: Vec<String> = dt.terms.iter().map(|t| t.to_string()).collect();
            let text = terms
                .iter()
                .enumerate()
                .map(|(i, t)| format!("t{i} = {t}"))
                .collect::<Vec<_>>()
                .join("\n");
            let body = json!({
                "family": "diamond",
                "d": d,
                "terms": terms,
                "bottom": dt.bottom.to_string(),
                "top": dt.top.to_string(),
            });
            return Ok(report("gen", 0, text, body));
        }
    };
    if family != Family::Sigma && m.is_some() {
        bail!("{name} takes only d");
    }
    let mut body = json!({"family": name, "d": d, "identity": id.to_string()});
    if let Some(m) = m {
        body["m"] = json!(m);
    }
    Ok(report("gen", 0, id.to_string(), body))
}

pub fn encode(text: &str, d: usize, smt: bool, gaussian: bool) -> Result<Report> {
    let id = identity(text)?;
    let sys = if gaussian {
        encode_gaussian(&id, d)?
    } else {
        molwb_core::feas::encode(&id, d)?
    };
    let format = if smt { EmitFormat::Smt } else { EmitFormat::Json };
    let out = emit(&sys, format);
    Ok(Report {
        code: 0,
        text: out.trim_end().to_string(),
        json: Value::Null,
    })
}

pub fn solve(text: &str, d: usize, params: &SolveParams, witness_out: Option<&Path>) -> Result<Report> {
    let id = identity(text)?;
    let sys = molwb_core::feas::encode(&id, d)?;
    let outcome = penalty_solve(&sys, params);
    let witness = if outcome.is_solved() {
        rationalize_and_verify(&sys, outcome.point(), &id, params.tol)?
    } else {
        None
    };
    let status = match (&outcome, &witness) {
        (_, Some(_)) => "refuted",
        (SolveOutcome::Solved { .. }, None) => "unverified",
        (SolveOutcome::Exhausted { .. }, _) => "exhausted",
    };
    let mut out = format!(
        "{id}: {status} in L(R^{d}) ({} variables, {} constraints, residual {:e})",
        sys.vars.len(),
        sys.constraints.len(),
        outcome.residual()
    );
    let mut body = json!({
        "identity": id.to_string(),
        "d": d,
        "seed": params.seed,
        "status": status,
        "vars": sys.vars.len(),
        "constraints": sys.constraints.len(),
        "residual": outcome.residual(),
    });
    match &outcome {
        SolveOutcome::Solved { restart, iterations, .. } => {
            let _ = write!(out, "\nsolved by restart {restart} after {iterations} iterations");
            body["restart"] = json!(restart);
            body["iterations"] = json!(iterations);
        }
        SolveOutcome::Exhausted { restarts, .. } => {
            let _ = write!(out, "\nno solution in {restarts} restarts");
            body["restarts"] = json!(restarts);
        }
    }
    if let Some(a) = &witness {
        let file = AssignmentFile::from_assignment(d, a);
        write_witness(witness_out, &file)?;
        out.push_str("\nexact witness in Q^");
        out += &d.to_string();
        out += &subspace_lines(a.iter().map(|(v, s)| (v.to_string(), s.clone())));
        body["witness"] = serde_json::to_value(&file)?;
    }
    Ok(report("solve", u8::from(witness.is_some()), out, body))
}

pub fn validate(spec: &str) -> Result<Report> {
    let r = match catalog_spec(spec) {
        Ok(m) => m.validate(),
        Err(_) => {
            let raw = fs::read_to_string(spec)
                .with_context(|| format!("{spec:?} is neither a catalog model nor a readable file"))?;
            FiniteModel::from_json(&raw)?.validate()?
        }
    };
    let mut body = json!({"model": spec, "usable": r.usable()});
    if let (Value::Object(out), Value::Object(fields)) = (&mut body, serde_json::to_value(&r)?) {
        out.extend(fields);
    }
    Ok(report("models validate", u8::from(!r.usable()), r.to_string(), body))
}
