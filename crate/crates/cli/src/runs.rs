//! Subcommand implementations.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sze_core::models::{from_file, tfim, LayeredHamiltonian};
use sze_core::partition::partition;
use sze_core::plan::CNOT_CONVENTION;
use sze_core::series::extract_zassenhaus;
use sze_core::sim::{fit_powerlaw, run_plan, trace_distance, DenseState, ExactEvolver, ExecMode};
use sze_core::{SzeError, SzeResult};

use crate::config::{merge_model, merge_sweep, ConfigFile};
use crate::methods::{parse_all, Method};
use crate::{write_output, ModelArgs, SweepArgs};

const VERSION: &str = env!("CARGO_PKG_VERSION");

fn load_config(model: &ModelArgs) -> SzeResult<ConfigFile> {
    match &model.config {
        Some(path) => ConfigFile::load(path),
        None => Ok(ConfigFile::empty()),
    }
}

struct Resolved {
    model: LayeredHamiltonian,
    out: Option<std::path::PathBuf>,
}

fn resolve_model(mut args: ModelArgs, cfg: &ConfigFile) -> SzeResult<Resolved> {
    merge_model(&mut args, cfg)?;
    let model = match (&args.hamiltonian, args.model.as_deref()) {
        (Some(path), _) => from_file(path)?,
        (None, Some("tfim") | None) => tfim(
            args.n.unwrap_or(10),
            args.coupling_j.unwrap_or(1.0),
            args.field_h.unwrap_or(1.0),
        )?,
        (None, Some(other)) => {
            return Err(SzeError::InvalidModel(format!("unknown model `{other}`")))
        }
    };
    Ok(Resolved { model, out: args.out })
}

fn model_header(model: &LayeredHamiltonian) -> String {
    let params: Vec<String> = model
        .parameters
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    format!("# model: {} {}\n", model.label, params.join(" "))
}

fn tool_header(extra: &str) -> String {
    format!("# sze v{VERSION} {extra}\n# cnot_convention: {CNOT_CONVENTION}\n")
}

pub fn cmd_expand(model_args: ModelArgs, order: Option<usize>) -> SzeResult<()> {
    let cfg = load_config(&model_args)?;
    let resolved = resolve_model(model_args, &cfg)?;
    let max_order = order.unwrap_or(3).max(2);

    let generators: Vec<_> = resolved
        .model
        .layers()
        .iter()
        .map(|l| l.scale(Complex64::new(0.0, -1.0)))
        .collect();
    let expansion = extract_zassenhaus(&generators, max_order)?;

    let mut out = String::new();
    out.push_str(&tool_header("expand"));
    out.push_str(&model_header(&resolved.model));
    let mut any = false;
    for j in 2..=max_order {
        match expansion.hermitian_exponent(j) {
            Some(h) => {
                let parts = partition(&h);
                let _ = writeln!(
                    out,
                    "# H_{j}: {} terms, {} commuting parts",
                    h.num_terms(),
                    parts.num_parts()
                );
                out.push_str(&h.to_text());
                any = true;
            }
            None => {
                let _ = writeln!(out, "# H_{j}: empty (layers commute at this order)");
            }
        }
    }
    if !any {
        let _ = writeln!(out, "# all exponents vanish: the layers commute");
    }
    write_output(&resolved.out, &out)
}

pub fn cmd_partition(model_args: ModelArgs) -> SzeResult<()> {
    let cfg = load_config(&model_args)?;
    let resolved = resolve_model(model_args, &cfg)?;
    let split = partition(resolved.model.total());

    let mut out = String::new();
    out.push_str(&tool_header("partition"));
    out.push_str(&model_header(&resolved.model));
    let _ = writeln!(out, "# parts: {}", split.num_parts());
    let _ = writeln!(out, "n_qubits: {}", resolved.model.n_qubits());
    for (i, part) in split.parts().iter().enumerate() {
        let _ = writeln!(out, "layer: part{i}");
        out.push_str(&part.terms_to_text());
    }
    write_output(&resolved.out, &out)
}

pub fn cmd_plan(
    model_args: ModelArgs,
    method: Option<String>,
    k: Option<usize>,
    p: Option<usize>,
) -> SzeResult<()> {
    let cfg = load_config(&model_args)?;
    let resolved = resolve_model(model_args, &cfg)?;
    let method = match (method, k, p) {
        (Some(token), _, _) => Method::parse(&token)?,
        (None, Some(k), Some(p)) => Method::Sze { k, p },
        _ => {
            return Err(SzeError::InvalidPlan(
                "need --method or both --k and --p".into(),
            ))
        }
    };
    let plan = method.plan(&resolved.model)?.ok_or_else(|| {
        SzeError::InvalidPlan("minimal product formulas are counting-only".into())
    })?;
    let gates = sze_core::plan::count_gates(&plan);
    let mut out = plan.to_text();
    let _ = writeln!(
        out,
        "# gates: rotations={} cnots_expected={:.6}",
        gates.rotations, gates.total_expected
    );
    write_output(&resolved.out, &out)
}

pub fn cmd_count(model_args: ModelArgs, mut sweep: SweepArgs) -> SzeResult<()> {
    let cfg = load_config(&model_args)?;
    merge_sweep(&mut sweep, &cfg)?;
    let resolved = resolve_model(model_args, &cfg)?;
    let methods = parse_all(&sweep.methods)?;

    let mut rows = Vec::new();
    for method in &methods {
        let gates = method.gate_count(&resolved.model)?;
        rows.push(format!(
            "{},{},{},{:.6}",
            method.token(),
            method.order(),
            gates.rotations,
            gates.total_expected
        ));
    }
    rows.sort();

    let mut out = String::new();
    out.push_str(&tool_header("count"));
    out.push_str(&model_header(&resolved.model));
    out.push_str("method,order,rotations,cnots_expected\n");
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    write_output(&resolved.out, &out)
}

fn parse_mode(mode: &Option<String>) -> SzeResult<&'static str> {
    match mode.as_deref() {
        None | Some("channel") => Ok("channel"),
        Some("sample") => Ok("sample"),
        Some("exact") => Ok("exact"),
        Some(other) => Err(SzeError::InvalidPlan(format!(
            "invalid --mode `{other}` (channel | sample | exact)"
        ))),
    }
}

/// Evolve one (method, t, r) point and return the trace distance to exact.
fn evolve_point(
    model: &LayeredHamiltonian,
    evolver: &ExactEvolver,
    method: &Method,
    mode: &str,
    seed: u64,
    point_index: u64,
    t: f64,
    r: usize,
) -> SzeResult<f64> {
    let plan = method
        .plan(model)?
        .ok_or_else(|| SzeError::InvalidPlan("minpf has no executable plan".into()))?;
    let n = model.n_qubits();
    let initial = match mode {
        "sample" => DenseState::plus_state(n),
        _ => DenseState::plus_state(n).to_density(),
    };
    let evolved = match mode {
        "channel" => run_plan(&plan, t, r, &initial, ExecMode::ExactChannel)?,
        "exact" => run_plan(&plan, t, r, &initial, ExecMode::ExactFactor)?,
        _ => {
            // one seeded stream per sweep point
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed ^ point_index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
            run_plan(&plan, t, r, &initial, ExecMode::Sampled(&mut rng))?
        }
    };
    let exact = evolver.evolve(&DenseState::plus_state(n), t)?.to_density();
    trace_distance(&evolved, &exact)
}

fn default_t_grid() -> Vec<f64> {
    // log-spaced over [0.01, 0.3]
    let lo: f64 = 0.01;
    let hi: f64 = 0.3;
    let count = 10;
    (0..count)
        .map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64))
        .collect()
}

pub fn cmd_sweep_time(model_args: ModelArgs, mut sweep: SweepArgs) -> SzeResult<()> {
    let cfg = load_config(&model_args)?;
    merge_sweep(&mut sweep, &cfg)?;
    let resolved = resolve_model(model_args, &cfg)?;
    let methods = parse_all(&sweep.methods)?;
    let mode = parse_mode(&sweep.mode)?;
    let seed = sweep.seed.unwrap_or(0);
    let r = sweep.r.unwrap_or(1);
    let mut t_values = if sweep.t_values.is_empty() {
        default_t_grid()
    } else {
        sweep.t_values.clone()
    };
    t_values.sort_by(f64::total_cmp);
    if t_values.iter().any(|&t| t <= 0.0) {
        return Err(SzeError::InvalidPlan("t values must be positive".into()));
    }

    let evolver = ExactEvolver::new(resolved.model.total())?;
    let mut out = String::new();
    out.push_str(&tool_header("sweep-time"));
    out.push_str(&model_header(&resolved.model));
    let _ = writeln!(out, "# mode: {mode} seed: {seed} r: {r}");
    out.push_str("method,t,r,trace_distance\n");
    let mut fit_lines = Vec::new();
    for method in &methods {
        let mut points = Vec::new();
        for (idx, &t) in t_values.iter().enumerate() {
            let td = evolve_point(
                &resolved.model,
                &evolver,
                method,
                mode,
                seed,
                idx as u64,
                t,
                r,
            )?;
            let _ = writeln!(out, "{},{t},{r},{td:.9e}", method.token());
            points.push((t, td));
        }
        // power-law fit over the smallest 5 time values
        let head: Vec<(f64, f64)> = points.iter().take(5).cloned().collect();
        match fit_powerlaw(&head) {
            Ok(fit) => fit_lines.push(format!(
                "# fit: method={} slope={:.6} intercept={:.6} residual={:.3e} points={}",
                method.token(),
                fit.slope,
                fit.intercept,
                fit.residual,
                fit.points_used
            )),
            Err(e) => fit_lines.push(format!("# fit: method={} failed: {e}", method.token())),
        }
    }
    for line in fit_lines {
        out.push_str(&line);
        out.push('\n');
    }
    write_output(&resolved.out, &out)
}

pub fn cmd_sweep_size(
    model_args: ModelArgs,
    mut sweep: SweepArgs,
    t: Option<f64>,
) -> SzeResult<()> {
    let cfg = load_config(&model_args)?;
    merge_sweep(&mut sweep, &cfg)?;
    merge_model_defaults_for_size(&model_args)?;
    let methods = parse_all(&sweep.methods)?;
    let mode = parse_mode(&sweep.mode)?;
    let seed = sweep.seed.unwrap_or(0);
    let r = sweep.r.unwrap_or(1);
    let t = t.unwrap_or(0.03);
    let mut sizes = if sweep.n_values.is_empty() {
        vec![4, 6, 8, 10]
    } else {
        sweep.n_values.clone()
    };
    sizes.sort_unstable();

    let coupling_j = model_args.coupling_j.unwrap_or(1.0);
    let field_h = model_args.field_h.unwrap_or(1.0);

    let mut out = String::new();
    out.push_str(&tool_header("sweep-size"));
    let _ = writeln!(out, "# model: tfim J={coupling_j} h={field_h} (n swept)");
    let _ = writeln!(out, "# mode: {mode} seed: {seed} r: {r} t: {t}");
    out.push_str("method,n,trace_distance\n");

    let mut per_method: Vec<Vec<(f64, f64)>> = vec![Vec::new(); methods.len()];
    for (si, &n) in sizes.iter().enumerate() {
        let model = tfim(n, coupling_j, field_h)?;
        let evolver = ExactEvolver::new(model.total())?;
        for (mi, method) in methods.iter().enumerate() {
            let td = evolve_point(&model, &evolver, method, mode, seed, si as u64, t, r)?;
            let _ = writeln!(out, "{},{n},{td:.9e}", method.token());
            per_method[mi].push((n as f64, td));
        }
    }
    for (mi, method) in methods.iter().enumerate() {
        // fit over the largest 5 sizes
        let pts = &per_method[mi];
        let tail: Vec<(f64, f64)> = pts.iter().rev().take(5).rev().cloned().collect();
        match fit_powerlaw(&tail) {
            Ok(fit) => {
                let _ = writeln!(
                    out,
                    "# fit: method={} slope={:.6} intercept={:.6} residual={:.3e} points={}",
                    method.token(),
                    fit.slope,
                    fit.intercept,
                    fit.residual,
                    fit.points_used
                );
            }
            Err(e) => {
                return Err(e);
            }
        }
    }
    write_output(&model_args.out, &out)
}

/// The size sweep rebuilds the model per n, so a fixed --hamiltonian file
/// cannot be swept.
fn merge_model_defaults_for_size(args: &ModelArgs) -> SzeResult<()> {
    if args.hamiltonian.is_some() {
        return Err(SzeError::InvalidPlan(
            "sweep-size varies n and requires the built-in model".into(),
        ));
    }
    match args.model.as_deref() {
        None | Some("tfim") => Ok(()),
        Some(other) => Err(SzeError::InvalidModel(format!("unknown model `{other}`"))),
    }
}
