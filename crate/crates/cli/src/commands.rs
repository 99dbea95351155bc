use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use braceforge::analysis::{
    brace_isomorphic, invariant_fingerprint, verify_isomorphism, IsoOptions, DEFAULT_NODE_LIMIT,
};
use braceforge::brace::{load_brace_file, validate_loaded, verify_brace_axioms, write_circle_csv, BraceFile, IoError};
use braceforge::chains::{left_chain, right_chain, strong_chain};
use braceforge::family::{
    generator_matrices, verify_cocycle, verify_generator_relations, verify_multiplicative_table,
    witness_not_right_nilpotent,
};
use braceforge::hol::{automorphism_verdict, conjugate_brace, embed, is_regular};
use braceforge::ideals::{all_ideals, is_prime, subspace_count};
use braceforge::prelie::{prelie_nilpotency, verify_prelie_identity, PreLieAlgebra};
use braceforge::ybe::{verify_braid, verify_involutive, verify_nondegenerate, Solution};
use braceforge::{
    build_brace, BraceError, BraceOps, BraceTable, Budget, Element, Exec, FamilyError, FamilyParams, FpMatrix, Mode,
    Prime, Report,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::{Command, FamilyArgs, ModeArgs};

/// Errors that end a run before a report exists.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or unreadable input (exit 2).
    Usage(String),
    /// Input that parses but violates a brace axiom (exit 3).
    Check(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    CheckFailed,
    BudgetExceeded,
}

impl Status {
    fn of(report: &Report) -> Status {
        if !report.complete {
            Status::BudgetExceeded
        } else if report.all_passed() {
            Status::Ok
        } else {
            Status::CheckFailed
        }
    }

    fn and(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (BudgetExceeded, _) | (_, BudgetExceeded) => BudgetExceeded,
            (CheckFailed, _) | (_, CheckFailed) => CheckFailed,
            _ => Ok,
        }
    }
}

pub enum Outcome {
    /// A report for the JSON envelope.
    Report(Value, Status),
    /// Raw text for stdout, outside any envelope.
    Raw(String),
}

pub struct Context {
    pub seed: u64,
    pub budget: Budget,
    pub exec: Exec,
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn family_params(f: &FamilyArgs) -> Result<FamilyParams, Failure> {
    FamilyParams::new(f.p, f.y, f.i, f.k).map_err(usage)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn load(path: &Path, exec: Exec) -> Result<BraceTable, Failure> {
    let brace = load_brace_file(path).map_err(|e| match e {
        IoError::Brace(BraceError::NotInvertible { .. } | BraceError::IdentityLambda) => {
            Failure::Check(format!("{}: {e}", path.display()))
        }
        _ => Failure::Usage(format!("{}: {e}", path.display())),
    })?;
    let report = validate_loaded(&brace, exec);
    if let Some(c) = report.first_failure() {
        let witness = report.get("associativity").and_then(|c| c.witness.clone()).or(c.witness.clone());
        return Err(Failure::Check(format!(
            "{}: {} fails; witness {}",
            path.display(),
            c.name,
            serde_json::to_string(&witness).expect("integers serialize")
        )));
    }
    Ok(brace)
}

fn mode(m: &ModeArgs, default_samples: u64, seed: u64) -> Mode {
    if m.full {
        Mode::Full
    } else {
        Mode::Sampled { count: m.samples.unwrap_or(default_samples), seed }
    }
}

fn axioms(brace: &BraceTable, mode: Mode, ctx: &Context) -> Result<Report, Failure> {
    verify_brace_axioms(brace, mode, ctx.exec, ctx.budget).map_err(usage)
}

pub fn run(command: &Command, ctx: &Context) -> Result<Outcome, Failure> {
    match command {
        Command::Construct { family, out, expand, csv } => {
            let params = family_params(family)?;
            let brace = build_brace(&params).map_err(usage)?;
            let file = BraceFile::from_brace(&brace, *expand);
            if let Some(path) = csv {
                let w = BufWriter::new(File::create(path).map_err(usage)?);
                write_circle_csv(&brace, w).map_err(usage)?;
            }
            match out {
                None => Ok(Outcome::Raw(file.to_json())),
                Some(path) => {
                    std::fs::write(path, file.to_json()).map_err(usage)?;
                    let kind = if *expand { "table" } else { "family" };
                    Ok(Outcome::Report(
                        json!({"params": params, "kind": kind, "order": brace.order(), "path": path}),
                        Status::Ok,
                    ))
                }
            }
        }
        Command::Classify { input } => {
            let brace = load(input, ctx.exec)?;
            let f = invariant_fingerprint(&brace, ctx.exec);
            Ok(Outcome::Report(
                json!({
                    "left_nilpotent": f.nilpotency.left,
                    "right_nilpotent": f.nilpotency.right,
                    "strongly_nilpotent": f.nilpotency.strong,
                    "prime": f.prime,
                    "group": f.group,
                    "center_size": f.center_size,
                    "chain_dims": {"left": f.left, "right": f.right, "strong": f.strong},
                }),
                Status::Ok,
            ))
        }
        Command::Verify { input, mode: m } => {
            let brace = load(input, ctx.exec)?;
            let report = axioms(&brace, mode(m, 100_000, ctx.seed), ctx)?;
            Ok(Outcome::Report(to_value(&report), Status::of(&report)))
        }
        Command::Chains { input } => {
            let brace = load(input, ctx.exec)?;
            let chains = [left_chain(&brace), right_chain(&brace), strong_chain(&brace)];
            Ok(Outcome::Report(to_value(&chains), Status::Ok))
        }
        Command::Ideals { input } => {
            let brace = load(input, ctx.exec)?;
            let ideals = all_ideals(&brace, ctx.exec).map_err(usage)?;
            let prime = is_prime(&brace, ctx.exec).map_err(usage)?;
            let listed: Vec<Value> = ideals
                .iter()
                .map(|i| json!({"dim": i.space.dim(), "basis": i.space.basis(), "is_ideal": true}))
                .collect();
            Ok(Outcome::Report(
                json!({
                    "subspaces_examined": subspace_count(brace.prime(), brace.dim()) as u64,
                    "ideals": listed,
                    "prime": prime,
                }),
                Status::Ok,
            ))
        }
        Command::Iso { a, b, node_limit } => {
            let (x, y) = (load(a, ctx.exec)?, load(b, ctx.exec)?);
            let opts = IsoOptions { node_limit: node_limit.unwrap_or(DEFAULT_NODE_LIMIT), exec: ctx.exec };
            match brace_isomorphic(&x, &y, x.basis_names(), opts) {
                Ok(Some(w)) => Ok(Outcome::Report(json!({"isomorphic": true, "witness": w}), Status::Ok)),
                Ok(None) => Ok(Outcome::Report(json!({"isomorphic": false}), Status::Ok)),
                Err(e) => {
                    Ok(Outcome::Report(json!({"isomorphic": null, "error": e.to_string()}), Status::BudgetExceeded))
                }
            }
        }
        Command::Ybe { input, mode: m } => {
            let brace = load(input, ctx.exec)?;
            let sol = Solution::new(&brace, ctx.exec);
            let report = verify_involutive(&sol, ctx.exec)
                .merge(verify_nondegenerate(&sol, ctx.exec))
                .merge(verify_braid(&sol, mode(m, 1_000_000, ctx.seed), ctx.exec, ctx.budget));
            Ok(Outcome::Report(to_value(&report), Status::of(&report)))
        }
        Command::Prelie { p, y, j, k } => {
            let prime = Prime::new(*p).map_err(usage)?;
            let v = PreLieAlgebra::new(prime, *j, *k, *y).map_err(usage)?;
            let identity = verify_prelie_identity(&v);
            let status = Status::of(&identity);
            Ok(Outcome::Report(
                json!({"params": {"p": p, "j": j, "k": k, "y": y}, "identity": identity, "nilpotency": prelie_nilpotency(&v)}),
                status,
            ))
        }
        Command::Hol { input, gamma, out } => hol(input, gamma, out.as_deref(), ctx),
        Command::MatrixRelations { family } => {
            let params = family_params(family)?;
            let mats = generator_matrices(&params);
            let relations = verify_generator_relations(&mats, params.p());
            let cocycle = verify_cocycle(&mats, params.p());
            let status = Status::of(&relations).and(Status::of(&cocycle));
            Ok(Outcome::Report(json!({"params": params, "relations": relations, "cocycle": cocycle}), status))
        }
        Command::Sweep { p, mode: m } => sweep(*p, mode(m, 100_000, ctx.seed), ctx),
    }
}

#[derive(Deserialize)]
struct GammaFile {
    p: u32,
    n: usize,
    matrix: Vec<i64>,
}

fn hol(input: &Path, gamma: &Path, out: Option<&Path>, ctx: &Context) -> Result<Outcome, Failure> {
    let brace = load(input, ctx.exec)?;
    let text = std::fs::read_to_string(gamma).map_err(|e| usage(format!("{}: {e}", gamma.display())))?;
    let g: GammaFile = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", gamma.display())))?;
    if g.p != brace.prime().get() || g.n != brace.dim() {
        return Err(usage(format!("gamma is over F_{}^{}, brace over F_{}^{}", g.p, g.n, brace.prime(), brace.dim())));
    }
    let prime = Prime::new(g.p).map_err(usage)?;
    let m = FpMatrix::from_flat(prime, g.n, g.n, &g.matrix).map_err(usage)?;
    if !m.is_invertible() {
        return Err(usage("gamma is singular"));
    }
    let regular = embed(&brace, ctx.exec).ok().and_then(|h| is_regular(&h, prime, brace.dim()).ok()).unwrap_or(false);
    let conj = conjugate_brace(&brace, &m).map_err(usage)?;
    let axioms = axioms(&conj, Mode::Sampled { count: 100_000, seed: ctx.seed }, ctx)?;
    let map: Vec<Element> =
        conj.elements().map(|x| brace.from_vector(&m.mul_vec(&conj.vector(x)).expect("square"))).collect();
    let iso = verify_isomorphism(&conj, &brace, &map, ctx.exec);
    let verdict = automorphism_verdict(&brace, &m, ctx.exec).map_err(usage)?;
    if let Some(path) = out {
        std::fs::write(path, BraceFile::from_brace(&conj, true).to_json()).map_err(usage)?;
    }
    let mut status = Status::of(&axioms).and(Status::of(&iso));
    if !regular {
        status = status.and(Status::CheckFailed);
    }
    Ok(Outcome::Report(
        json!({
            "embedding_regular": regular,
            "conjugate_axioms": axioms,
            "gamma_is_isomorphism": iso,
            "brace_automorphism": verdict.preserves_circle && verdict.fixes_table,
            "preserves_circle": verdict.preserves_circle,
            "fixes_table": verdict.fixes_table,
            "conjugate_path": out,
        }),
        status,
    ))
}

fn sweep(p: u32, mode: Mode, ctx: &Context) -> Result<Outcome, Failure> {
    let params = FamilyParams::all(p).map_err(|e| match e {
        FamilyError::InvalidParams(m) => Failure::Usage(m),
        e => usage(e),
    })?;
    let rows = ctx.exec.map(params.len(), |t| {
        let fp = params[t];
        let mut failed: Vec<String> = Vec::new();
        let mut complete = true;
        let mats = generator_matrices(&fp);
        for r in [verify_generator_relations(&mats, fp.p()), verify_cocycle(&mats, fp.p())] {
            failed.extend(r.failures().map(|c| c.name.clone()));
        }
        let fingerprint = match build_brace(&fp) {
            Err(e) => {
                failed.push(e.to_string());
                None
            }
            Ok(b) => {
                match verify_brace_axioms(&b, mode, Exec::Sequential, ctx.budget) {
                    Ok(r) => {
                        complete = r.complete;
                        failed.extend(r.failures().map(|c| c.name.clone()));
                    }
                    Err(e) => failed.push(e.to_string()),
                }
                failed.extend(verify_multiplicative_table(&b, &fp).failures().map(|c| c.name.clone()));
                if !witness_not_right_nilpotent(&b, &fp) {
                    failed.push("right-nilpotency witness".into());
                }
                Some(invariant_fingerprint(&b, Exec::Sequential))
            }
        };
        (fp, failed, complete, fingerprint)
    });
    let mut distinct = Vec::new();
    for (_, _, _, f) in &rows {
        if let Some(f) = f {
            if !distinct.contains(f) {
                distinct.push(f.clone());
            }
        }
    }
    let passed = rows.iter().filter(|r| r.1.is_empty() && r.2).count();
    let complete = rows.iter().all(|r| r.2);
    let status = if !complete {
        Status::BudgetExceeded
    } else if passed == rows.len() {
        Status::Ok
    } else {
        Status::CheckFailed
    };
    let triples: Vec<Value> = rows
        .iter()
        .map(|(fp, failed, complete, _)| json!({"params": fp, "passed": failed.is_empty() && *complete, "failures": failed}))
        .collect();
    Ok(Outcome::Report(
        json!({
            "p": p,
            "mode": mode,
            "total": rows.len(),
            "passed": passed,
            "distinct_fingerprints": distinct.len(),
            "fingerprints": distinct,
            "triples": triples,
        }),
        status,
    ))
}
