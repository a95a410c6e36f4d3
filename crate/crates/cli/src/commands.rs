//! Command implementations. Each returns the JSON payload together with a
//! plain-text rendering.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};
use symgal_core::expr_io::{
    field_to_json, matrix_to_json, parse_qmatrix, parse_system, parse_vfield,
    parse_vfield_maclaurin, serialize_report,
};
use symgal_core::galois_report::{
    build_report, degree_summary, ConstraintKind, eigenring_summary, kind_name, stabilizer_check, GaloisReport,
    ReportOptions,
};
use symgal_core::lvhier::build_lv_matrix;
use symgal_core::ratsolve::{rational_solution_basis, SolveOptions};
use symgal_core::symclass::{best_classification, eigenring as eigenring_of, symmetry_basis};
use symgal_core::vfields::bracket_with_x;
use symgal_core::{Error, SystemSpec, VerticalField};
use thiserror::Error;

pub const COEFF_BITS_VAR: &str = "SYMGAL_MAX_COEFF_BITS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{COEFF_BITS_VAR} must be a positive integer, got {0:?}")]
    BadEnv(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::BadEnv(_) => 2,
            CliError::Core(Error::CoefficientOverflow { .. }) => 4,
            CliError::Core(e) if e.is_input_error() => 2,
            CliError::Core(_) => 3,
        }
    }
}

pub fn coeff_bits_from_env() -> Result<Option<u64>, CliError> {
    match std::env::var(COEFF_BITS_VAR) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<u64>() {
            Ok(b) if b > 0 => Ok(Some(b)),
            _ => Err(CliError::BadEnv(v)),
        },
    }
}

/// Inline JSON when the argument starts like a JSON document, otherwise a path.
pub fn read_document(arg: &str) -> Result<String, CliError> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|source| CliError::Io {
        path: arg.to_string(),
        source,
    })
}

pub fn emit(text: &str, dest: Option<&Path>) -> Result<(), CliError> {
    match dest {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub struct Output {
    pub json: Value,
    pub text: String,
}

pub struct Context {
    pub system: SystemSpec,
    pub opts: SolveOptions,
}

impl Context {
    pub fn load(arg: &str, opts: SolveOptions) -> Result<Self, CliError> {
        let system = parse_system(&read_document(arg)?)?;
        Ok(Context { system, opts })
    }

    fn var(&self) -> &str {
        self.system.var()
    }
}

fn rows_text(rows: &[Vec<String>]) -> String {
    rows.iter()
        .map(|r| format!("  [{}]\n", r.join(", ")))
        .collect()
}

fn field_text(components: &[String]) -> String {
    let parts: Vec<String> = components
        .iter()
        .enumerate()
        .filter(|(_, c)| c.as_str() != "0")
        .map(|(j, c)| format!("({c}) d/dy{}", j + 1))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn flag(complete: bool) -> &'static str {
    if complete {
        "complete"
    } else {
        "bounds non-rigorous"
    }
}

pub fn analyze(ctx: &Context, max_degree: u32, budget: u32) -> Result<Output, CliError> {
    let report = build_report(
        &ctx.system,
        max_degree,
        &ReportOptions {
            solve: ctx.opts,
            budget,
        },
    )?;
    let json: Value = serde_json::from_str(&serialize_report(&report)).expect("valid json");
    Ok(Output {
        text: report_text(&report),
        json,
    })
}

fn report_text(r: &GaloisReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "system: n = {}, evaluation point {}", r.system.n, r.evaluation_point);
    for (m, d) in &r.degrees {
        let _ = writeln!(s, "degree {m}: dimension {} ({})", d.dimension, flag(d.complete));
        for f in &d.fields {
            let _ = writeln!(s, "  {}", field_text(f));
        }
    }
    let best = &r.eigenring.best;
    let _ = writeln!(
        s,
        "eigenring: dimension {} ({}); best witness {} with charpoly {}",
        r.eigenring.dimension,
        flag(r.eigenring.complete),
        r.summary.best_kind,
        best.element.charpoly
    );
    s.push_str(&rows_text(&best.element.matrix));
    s.push_str("constraints:\n");
    if r.constraints.is_empty() {
        s.push_str("  none\n");
    }
    for c in &r.constraints {
        let rigor = serde_json::to_value(c.rigor).expect("serializable");
        let _ = writeln!(
            s,
            "  {} [{}{}]",
            constraint_text(&c.kind),
            rigor.as_str().unwrap_or_default(),
            if c.biconditional { ", biconditional" } else { "" }
        );
    }
    s.push_str("notes:\n");
    for n in &r.notes {
        let _ = writeln!(s, "  {n}");
    }
    s
}

fn constraint_text(kind: &ConstraintKind) -> String {
    match kind {
        ConstraintKind::FixesVectors { count } => format!("fixes {count} independent vectors"),
        ConstraintKind::BlockDiagonal { sizes } => format!("block diagonal with blocks {sizes:?}"),
        ConstraintKind::DiagonalTorus => "diagonal torus".into(),
        ConstraintKind::Triangularizable => "triangularizable".into(),
        ConstraintKind::LiouvillianSolvable => "Liouvillian solvable".into(),
        ConstraintKind::AbelianSymmetryAlgebra { dim } => {
            format!("abelian symmetry algebra of dimension {dim}")
        }
    }
}

pub fn lvmatrix(ctx: &Context, degree: u32) -> Output {
    let lv = build_lv_matrix(&ctx.system, degree);
    let matrix = matrix_to_json(&lv.matrix, ctx.var());
    let rows: Vec<Vec<String>> = serde_json::from_value(matrix.clone()).expect("rows of strings");
    Output {
        text: format!("Lie-Vessiot matrix, degree {degree}, size {}\n{}", lv.size(), rows_text(&rows)),
        json: json!({
            "degree": degree,
            "size": lv.size(),
            "monomials": lv.index.exponents(),
            "matrix": matrix,
        }),
    }
}

pub fn ratsols(ctx: &Context) -> Result<Output, CliError> {
    let basis = rational_solution_basis(ctx.system.matrix(), &ctx.opts)?;
    let var = ctx.var();
    let solutions: Vec<Vec<String>> = basis
        .vectors
        .iter()
        .map(|v| v.iter().map(|e| e.to_text(var)).collect())
        .collect();
    let singularities: Vec<Value> = basis
        .singularities
        .factors
        .iter()
        .map(|f| {
            json!({
                "factor": f.factor.to_text(var),
                "pole_order": f.pole_order,
                "integer_exponents": f.integer_exponents.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                "exponent_bound": f.exponent_bound,
                "rigorous": f.rigorous,
            })
        })
        .collect();
    let mut text = format!("rational solutions: dimension {} ({})\n", basis.dimension, flag(basis.complete));
    text.push_str(&rows_text(&solutions));
    Ok(Output {
        text,
        json: json!({
            "dimension": basis.dimension,
            "complete": basis.complete,
            "solutions": solutions,
            "singularities": singularities,
            "infinity": {
                "degree_bound": basis.infinity.degree,
                "rigorous": basis.infinity.rigorous,
            },
            "ansatz": {
                "denominator": basis.ansatz.denominator.to_text(var),
                "degree": basis.ansatz.degree,
            },
        }),
    })
}

pub fn eigenring(ctx: &Context, budget: u32) -> Result<Output, CliError> {
    let ring = eigenring_of(&ctx.system, &ctx.opts)?;
    let best = best_classification(&ring, &ctx.system, budget)?;
    let summary = eigenring_summary(&ring, &best, budget, ctx.var());
    let mut text = format!(
        "eigenring: dimension {} ({}); best witness {}\n",
        summary.dimension,
        flag(summary.complete),
        kind_name(&best.element.classification.kind)
    );
    for (i, e) in summary.elements.iter().enumerate() {
        let _ = writeln!(text, "B{i}: charpoly {}", e.charpoly);
        text.push_str(&rows_text(&e.matrix));
    }
    Ok(Output {
        json: serde_json::to_value(&summary).expect("serializable"),
        text,
    })
}

pub fn symmetries(ctx: &Context, degree: u32) -> Result<Output, CliError> {
    let basis = symmetry_basis(&ctx.system, degree, &ctx.opts)?;
    let summary = degree_summary(&basis, ctx.system.n(), ctx.var());
    let mut text = format!(
        "degree {degree} symmetries: dimension {} ({})\n",
        summary.dimension,
        flag(summary.complete)
    );
    for f in &summary.fields {
        let _ = writeln!(text, "  {}", field_text(f));
    }
    let mut json = serde_json::to_value(&summary).expect("serializable");
    json["degree"] = json!(degree);
    Ok(Output { json, text })
}

fn residual_json(ctx: &Context, y: &VerticalField) -> Result<(bool, Value), CliError> {
    let r = bracket_with_x(&ctx.system, y)?;
    Ok((r.is_zero(), field_to_json(&r, ctx.var())["components"].clone()))
}

pub fn check_symmetry(ctx: &Context, field: &str, maclaurin: Option<u32>) -> Result<Output, CliError> {
    let Some(order) = maclaurin else {
        let y = parse_vfield(field)?;
        let (ok, residual) = residual_json(ctx, &y)?;
        return Ok(Output {
            text: format!("is_symmetry: {ok}\n"),
            json: json!({ "is_symmetry": ok, "residual": residual }),
        });
    };
    let parts = parse_vfield_maclaurin(field, order)?;
    let mut all = true;
    let mut comps = Vec::new();
    let mut text = String::new();
    for (d, y) in &parts {
        let (ok, residual) = residual_json(ctx, y)?;
        all &= ok;
        let _ = writeln!(text, "degree {d}: is_symmetry {ok}");
        comps.push(json!({ "degree": d, "is_symmetry": ok, "residual": residual }));
    }
    let _ = writeln!(text, "is_symmetry (through order {order}): {all}");
    Ok(Output {
        text,
        json: json!({ "is_symmetry": all, "order": order, "components": comps }),
    })
}

pub fn stabilizer(field: &str, matrix: &str) -> Result<Output, CliError> {
    let y = parse_vfield(field)?;
    let sigma = parse_qmatrix(matrix)?;
    let ok = stabilizer_check(&sigma, &y)?;
    Ok(Output {
        text: format!("stabilizes: {ok}\n"),
        json: json!({ "stabilizes": ok }),
    })
}
