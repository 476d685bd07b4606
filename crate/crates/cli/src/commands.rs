//! The five batch workflows behind the subcommands. Each returns the
//! process exit code; hard failures travel as [`CliError`].

use crate::document::{
    decode_idempotent_params, decode_semisimple, parse_multiplicities, parse_params,
    AlgebraDocument, IdempotentBasisParams, SemisimpleParams, ZeroOneParams,
};
use crate::error::{CliError, CliResult};
use kproj_core::p_algebra::ConstructionMeta;
use kproj_core::{
    build_k_projector, class_invariants, enumerate_classes_with_limit, from_idempotent_basis,
    from_semisimple_data, from_zero_one_matrix, invariant_subspace_witness_dim, is_perfect,
    rep_from_multiplicities_commutative, rep_from_multiplicities_semisimple, trace_p_n_direct,
    trace_p_n_network, trace_via_transfer, transfer_matrix_commutative, transfer_matrix_semisimple,
    verify_axioms, Backend, EnRepresentation, MultMatrix, PAlgebra, Scalar, TransferMatrix,
    ZeroOneMatrix, DEFAULT_ENUM_LIMIT,
};
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Records,
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub backend: Backend,
    pub format: OutputFormat,
    pub cap: usize,
}

fn read_file(path: &str) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::parse(format!("cannot read {path}: {e}")))
}

fn load_document(path: &str) -> CliResult<AlgebraDocument> {
    AlgebraDocument::from_json(&read_file(path)?)
}

/// `verify FILE`: run the three relation checks and report each with its
/// first witness. Exit 0 when all pass, 2 otherwise.
pub fn cmd_verify(path: &str, opts: &Options) -> CliResult<i32> {
    let doc = load_document(path)?;
    let (c, s) = doc.tensors()?;
    let report = verify_axioms(&c, &s)?;
    for check in &report.relations {
        match opts.format {
            OutputFormat::Text => {
                if check.passed {
                    println!("{}: pass", check.relation);
                } else {
                    let w = check.witness.as_ref().expect("failure carries a witness");
                    let indices: Vec<usize> = w.indices.iter().map(|i| i + 1).collect();
                    println!(
                        "{}: FAIL at {:?}: lhs = {}, rhs = {}",
                        check.relation, indices, w.lhs, w.rhs
                    );
                }
            }
            OutputFormat::Records => {
                let mut record = json!({
                    "relation": check.relation.to_string(),
                    "passed": check.passed,
                });
                if let Some(w) = &check.witness {
                    let indices: Vec<usize> = w.indices.iter().map(|i| i + 1).collect();
                    record["witness"] = json!(indices);
                    record["lhs"] = json!(w.lhs.to_string());
                    record["rhs"] = json!(w.rhs.to_string());
                }
                println!("{record}");
            }
        }
    }
    Ok(if report.all_passed() { 0 } else { 2 })
}

/// `construct RECIPE PARAMS`: build, validate and emit an algebra document.
pub fn cmd_construct(recipe: &str, params_path: &str, opts: &Options) -> CliResult<i32> {
    let text = read_file(params_path)?;
    let algebra = match recipe {
        "zero-one" => {
            let params: ZeroOneParams = parse_params(&text)?;
            let r = ZeroOneMatrix::from_rows(&params.matrix)?;
            from_zero_one_matrix(&r)?
        }
        "semisimple" => {
            let params: SemisimpleParams = parse_params(&text)?;
            let data =
                decode_semisimple(params.l_dims, params.m_dims, &params.q_blocks, opts.backend)?;
            from_semisimple_data(&data)?
        }
        "idempotent-basis" => {
            let params: IdempotentBasisParams = parse_params(&text)?;
            let basis = decode_idempotent_params(&params, opts.backend)?;
            from_idempotent_basis(&basis)?
        }
        other => {
            return Err(CliError::parse(format!(
                "unknown recipe {other:?}; expected zero-one, semisimple or idempotent-basis"
            )))
        }
    };
    println!("{}", AlgebraDocument::from_algebra(&algebra).to_json());
    Ok(0)
}

fn representation_from_meta(
    algebra: &PAlgebra,
    m: &MultMatrix,
    cap: usize,
) -> CliResult<EnRepresentation> {
    match algebra.meta() {
        Some(ConstructionMeta::ZeroOne { .. }) => {
            Ok(rep_from_multiplicities_commutative(algebra, m)?)
        }
        Some(ConstructionMeta::Semisimple { data }) => {
            Ok(rep_from_multiplicities_semisimple(data, m, cap)?)
        }
        _ => Err(kproj_core::Error::MissingMetadata(
            "a construction recipe supporting multiplicity representations",
        )
        .into()),
    }
}

/// `perfect FILE --multiplicities M`: build the representation and its
/// projector, then print the perfectness verdict.
pub fn cmd_perfect(path: &str, mult_spec: &str, opts: &Options) -> CliResult<i32> {
    let algebra = load_document(path)?.to_algebra()?;
    let m = parse_multiplicities(mult_spec)?;
    let rho = representation_from_meta(&algebra, &m, opts.cap)?;
    let k = build_k_projector(&rho)?;
    let verdict = is_perfect(&k);
    let witness = if verdict.irreducible {
        None
    } else {
        invariant_subspace_witness_dim(&k)
    };
    match opts.format {
        OutputFormat::Text => {
            let mut line = verdict.describe();
            if let Some(dim) = witness {
                line.push_str(&format!(" (invariant subspace of dimension {dim})"));
            }
            println!("{line}");
        }
        OutputFormat::Records => {
            let mut record = json!({
                "perfect": verdict.perfect,
                "zero_action": verdict.zero_action,
                "irreducible": verdict.irreducible,
                "dim_w": rho.dim_w(),
            });
            if let Some(dim) = witness {
                record["invariant_subspace_dim"] = json!(dim);
            }
            println!("{record}");
        }
    }
    Ok(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceMode {
    Direct,
    Network,
    Transfer,
}

fn transfer_from_meta(algebra: &PAlgebra, m: &MultMatrix) -> CliResult<TransferMatrix> {
    match algebra.meta() {
        Some(ConstructionMeta::ZeroOne { r }) => Ok(transfer_matrix_commutative(r, m)?),
        Some(ConstructionMeta::Semisimple { data }) => Ok(transfer_matrix_semisimple(data, m)?),
        _ => Err(CliError::ModeUnavailable(
            "construction metadata for the transfer matrix",
        )),
    }
}

/// `trace FILE --multiplicities M --steps N [--mode ...] [--check]`: print
/// `tr(P_1) .. tr(P_N)`; with `--check`, compute through independent modes
/// and require exact agreement.
pub fn cmd_trace(
    path: &str,
    mult_spec: &str,
    n_steps: usize,
    mode: TraceMode,
    check: bool,
    opts: &Options,
) -> CliResult<i32> {
    if n_steps == 0 {
        return Err(CliError::parse(
            "the number of steps must be positive".to_string(),
        ));
    }
    let algebra = load_document(path)?.to_algebra()?;
    let m = parse_multiplicities(mult_spec)?;

    let compute = |mode: TraceMode| -> CliResult<Vec<Scalar>> {
        match mode {
            TraceMode::Transfer => {
                let t = transfer_from_meta(&algebra, &m)?;
                Ok((1..=n_steps).map(|k| trace_via_transfer(&t, k)).collect())
            }
            TraceMode::Network => {
                let rho = representation_from_meta(&algebra, &m, opts.cap)?;
                Ok((1..=n_steps).map(|k| trace_p_n_network(&rho, k)).collect())
            }
            TraceMode::Direct => {
                let rho = representation_from_meta(&algebra, &m, opts.cap)?;
                (1..=n_steps)
                    .map(|k| trace_p_n_direct(&rho, k, opts.cap).map_err(CliError::from))
                    .collect()
            }
        }
    };

    let values = compute(mode)?;
    if check {
        let modes = [TraceMode::Direct, TraceMode::Network, TraceMode::Transfer];
        for other in modes.into_iter().filter(|&other| other != mode) {
            let reference = match compute(other) {
                Ok(v) => v,
                // the direct route may exceed the cap; skip it then
                Err(CliError::Core(kproj_core::Error::DimensionOverflow { .. }))
                    if other == TraceMode::Direct =>
                {
                    continue
                }
                Err(e) => return Err(e),
            };
            for (k, (a, b)) in values.iter().zip(&reference).enumerate() {
                if !a.approx_eq(b) {
                    return Err(CliError::CheckFailed(format!(
                        "tr(P_{}) differs between modes: {a} vs {b}",
                        k + 1
                    )));
                }
            }
        }
    }

    match opts.format {
        OutputFormat::Text => {
            let rendered: Vec<String> = values.iter().map(Scalar::to_string).collect();
            println!("{}", rendered.join(" "));
        }
        OutputFormat::Records => {
            for (k, v) in values.iter().enumerate() {
                println!("{}", json!({ "n": k + 1, "trace": v.to_string() }));
            }
            if check {
                println!("{}", json!({ "check": "ok" }));
            }
        }
    }
    Ok(0)
}

/// `census N [--exhaustive]`: stream one record per class of nonsingular
/// (0,1)-matrices, then the class count. Output is deterministic: classes
/// come in canonical-form order whatever the worker count.
pub fn cmd_census(n: usize, exhaustive: bool, opts: &Options) -> CliResult<i32> {
    let limit = if exhaustive {
        DEFAULT_ENUM_LIMIT
    } else {
        DEFAULT_ENUM_LIMIT.min(4)
    };
    let classes = enumerate_classes_with_limit(n, limit)?;
    for cls in &classes {
        let inv = class_invariants(cls);
        match opts.format {
            OutputFormat::Text => {
                println!(
                    "class {:>3}  {}  orbit {:>6}  rows {:?} cols {:?}  |det| {}  per {}",
                    cls.class_id,
                    cls.representative.bitstring(),
                    cls.orbit_size,
                    inv.row_sums,
                    inv.col_sums,
                    inv.det_abs,
                    inv.permanent
                );
            }
            OutputFormat::Records => {
                println!(
                    "{}",
                    json!({
                        "id": cls.class_id,
                        "n": n,
                        "canonical": cls.representative.bitstring(),
                        "orbit": cls.orbit_size,
                        "row_sums": inv.row_sums,
                        "col_sums": inv.col_sums,
                        "det_abs": inv.det_abs,
                        "permanent": inv.permanent,
                    })
                );
            }
        }
    }
    match opts.format {
        OutputFormat::Text => println!("classes: {}", classes.len()),
        OutputFormat::Records => println!("{}", json!({ "classes": classes.len() })),
    }
    Ok(0)
}
