use std::time::Instant;

use snumbers::entropy::{entropy_bounds, entropy_lower_volumetric, regime_envelope, EntropyOptions};
use snumbers::operators::parse_matrix_csv;
use snumbers::spaces::ball_volume;
use snumbers::widths::{
    approx_id_envelope, approx_upper_search, hilbert_s_numbers, kolmogorov_id_envelope, kolmogorov_upper_search,
    singular_value_lower, SKind, WidthResult,
};
use snumbers::{LinOp, SpaceSpec};

use crate::config::{Command, Quantity, RunConfig};
use crate::report::{Report, Row};
use crate::verify::run_verify;
use crate::{CliError, CliResult};

/// Largest dimension for which `idnumbers` adds sampled entropy bounds.
const ESTIMATOR_MAX_N: usize = 6;
const ESTIMATOR_MAX_K: usize = 10;

pub fn run(cfg: &RunConfig) -> CliResult<Report> {
    match cfg.command {
        Command::Idnumbers => run_idnumbers(cfg),
        Command::Estimate => run_estimate(cfg),
        Command::Verify => run_verify(cfg),
        Command::Volume => run_volume(cfg),
        Command::Sweep => run_sweep(cfg),
    }
}

/// Run `f`, reporting wall time only when timings were requested so that
/// default reports stay byte-identical.
pub(crate) fn timed<T>(cfg: &RunConfig, f: impl FnOnce() -> T) -> (T, u64) {
    let start = Instant::now();
    let out = f();
    let ms = if cfg.timings {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    (out, ms)
}

fn require_n(cfg: &RunConfig) -> CliResult<usize> {
    match cfg.n {
        Some(0) => Err(CliError::Usage("--n must be at least 1".into())),
        Some(n) => Ok(n),
        None => Err(CliError::Usage("this command needs --n".into())),
    }
}

/// Cloud size derived from the evaluation budget.
pub(crate) fn cloud_size(budget: usize, k_max: usize) -> usize {
    (budget / 5).clamp(64, 4000).max(1 << (k_max.max(1) - 1))
}

fn width_row(quantity: Quantity, k: usize, result: snumbers::Result<WidthResult>, label_prefix: &str, ms: u64) -> Row {
    let (lower, upper, exact, method, label) = match result {
        Ok(WidthResult::Envelope(e)) => (
            Some(e.lower),
            Some(e.upper),
            e.constants_known,
            "envelope",
            e.case_label,
        ),
        Ok(WidthResult::NoClosedForm { reason }) => (None, None, false, "no-closed-form", reason),
        Err(e) => (None, None, false, "no-closed-form", e.to_string()),
    };
    Row {
        quantity: quantity.symbol().into(),
        k,
        lower,
        upper,
        exact,
        method: method.into(),
        label: format!("{label_prefix}{label}"),
        elapsed_ms: ms,
    }
}

fn entropy_envelope_row(cfg: &RunConfig, n: usize, k: usize, label_prefix: &str) -> Row {
    let (env, ms) = timed(cfg, || regime_envelope(cfg.p, cfg.q, n, k, cfg.field));
    match env {
        Ok(env) => Row {
            quantity: "e".into(),
            k,
            lower: Some(env.value),
            upper: Some(env.value),
            exact: false,
            method: "regime-envelope".into(),
            label: format!("{label_prefix}{}", env.regime.label()),
            elapsed_ms: ms,
        },
        Err(e) => Row {
            quantity: "e".into(),
            k,
            lower: None,
            upper: None,
            exact: false,
            method: "no-closed-form".into(),
            label: format!("{label_prefix}{e}"),
            elapsed_ms: ms,
        },
    }
}

fn envelope_rows(cfg: &RunConfig, n: usize, label_prefix: &str) -> Vec<Row> {
    let mut rows = Vec::new();
    for k in cfg.k.iter() {
        for &quantity in &cfg.quantities {
            match quantity {
                Quantity::Entropy => rows.push(entropy_envelope_row(cfg, n, k, label_prefix)),
                Quantity::Approximation => {
                    let (r, ms) = timed(cfg, || approx_id_envelope(cfg.p, cfg.q, n, k));
                    rows.push(width_row(quantity, k, r, label_prefix, ms));
                }
                Quantity::Kolmogorov => {
                    let (r, ms) = timed(cfg, || kolmogorov_id_envelope(cfg.p, cfg.q, n, k, cfg.field));
                    rows.push(width_row(quantity, k, r, label_prefix, ms));
                }
            }
        }
    }
    rows
}

fn entropy_rows(cfg: &RunConfig, t: &LinOp) -> CliResult<Vec<Row>> {
    let k_max = cfg.k.end;
    let cloud = cloud_size(cfg.budget, k_max);
    let opts = EntropyOptions {
        cloud,
        budget: cloud,
        seed: cfg.seed,
    };
    let (pairs, ms) = timed(cfg, || entropy_bounds(t, k_max, opts));
    Ok(pairs?
        .into_iter()
        .filter(|b| b.k >= cfg.k.start)
        .map(|b| Row {
            quantity: "e".into(),
            k: b.k,
            lower: Some(b.lower),
            upper: Some(b.upper_with_margin()),
            exact: false,
            method: format!(
                "{}/{}",
                b.method_lower.map_or("none", |m| m.label()),
                b.method_upper.map_or("none", |m| m.label())
            ),
            label: format!("delta={}", b.delta),
            elapsed_ms: ms,
        })
        .collect())
}

/// Envelopes for `e_k`, `a_k`, `d_k` of `id : ℓ_p^n → ℓ_q^n`, plus sampled
/// entropy bounds for small `n`.
pub fn run_idnumbers(cfg: &RunConfig) -> CliResult<Report> {
    let n = require_n(cfg)?;
    let mut rows = envelope_rows(cfg, n, "");
    if cfg.quantities.contains(&Quantity::Entropy) && n <= ESTIMATOR_MAX_N && cfg.k.end <= ESTIMATOR_MAX_K {
        let id = LinOp::identity(n, cfg.p, cfg.q, cfg.field)?;
        rows.extend(entropy_rows(cfg, &id)?);
    }
    Ok(Report::new(cfg.clone(), rows, Vec::new()))
}

fn load_operator(cfg: &RunConfig) -> CliResult<LinOp> {
    let path = cfg
        .input_path
        .as_deref()
        .ok_or_else(|| CliError::Usage("estimate needs --input <path>".into()))?;
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    let matrix = parse_matrix_csv(&text)?;
    if let Some(n) = cfg.n {
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(snumbers::Error::Domain(format!(
                "matrix is {}×{} but --n declares {n}",
                matrix.nrows(),
                matrix.ncols()
            ))
            .into());
        }
    }
    let dom = SpaceSpec::new(cfg.p, matrix.ncols(), cfg.field)?;
    let cod = SpaceSpec::new(cfg.q, matrix.nrows(), cfg.field)?;
    Ok(LinOp::with_specs(matrix, dom, cod)?)
}

fn width_estimate_rows(cfg: &RunConfig, t: &LinOp, quantity: Quantity) -> CliResult<Vec<Row>> {
    let kind = match quantity {
        Quantity::Approximation => SKind::Approximation,
        _ => SKind::Kolmogorov,
    };
    if t.is_hilbert() {
        let (seq, ms) = timed(cfg, || hilbert_s_numbers(t, kind));
        let seq = seq?;
        return Ok(cfg
            .k
            .iter()
            .map(|k| Row {
                quantity: quantity.symbol().into(),
                k,
                lower: Some(seq.get(k)),
                upper: Some(seq.get(k)),
                exact: true,
                method: seq.method.clone(),
                label: "hilbert".into(),
                elapsed_ms: ms,
            })
            .collect());
    }
    let lower = singular_value_lower(t, cfg.k.end);
    let mut rows = Vec::new();
    for k in cfg.k.iter() {
        let row = match quantity {
            Quantity::Approximation => {
                let (r, ms) = timed(cfg, || approx_upper_search(t, k, cfg.budget, cfg.seed));
                let r = r?;
                Row {
                    quantity: "a".into(),
                    k,
                    lower: Some(lower[k - 1]),
                    upper: Some(r.value),
                    exact: false,
                    method: "rank-search".into(),
                    label: "lower: rescaled singular value".into(),
                    elapsed_ms: ms,
                }
            }
            _ => {
                let (r, ms) = timed(cfg, || kolmogorov_upper_search(t, k, cfg.budget, cfg.seed));
                let r = r?;
                Row {
                    quantity: "d".into(),
                    k,
                    lower: Some(lower[k - 1]),
                    upper: Some(r.certified_upper),
                    exact: false,
                    method: "subspace-search".into(),
                    label: format!("estimate={} subspaces={}", r.value, r.subspaces),
                    elapsed_ms: ms,
                }
            }
        };
        rows.push(row);
    }
    Ok(rows)
}

/// Bounds for the operator given by a CSV matrix file.
pub fn run_estimate(cfg: &RunConfig) -> CliResult<Report> {
    let t = load_operator(cfg)?;
    let mut rows = Vec::new();
    for &quantity in &cfg.quantities {
        match quantity {
            Quantity::Entropy => rows.extend(entropy_rows(cfg, &t)?),
            _ => rows.extend(width_estimate_rows(cfg, &t, quantity)?),
        }
    }
    Ok(Report::new(cfg.clone(), rows, Vec::new()))
}

/// Unit-ball volumes of `ℓ_p^n`, `ℓ_q^n` and the volumetric entropy lower bounds.
pub fn run_volume(cfg: &RunConfig) -> CliResult<Report> {
    let n = require_n(cfg)?;
    let mut rows = Vec::new();
    for (name, p) in [("p", cfg.p), ("q", cfg.q)] {
        let space = SpaceSpec::new(p, n, cfg.field)?;
        let (v, ms) = timed(cfg, || ball_volume(&space));
        rows.push(Row {
            quantity: "volume".into(),
            k: n,
            lower: Some(v),
            upper: Some(v),
            exact: true,
            method: "gamma".into(),
            label: format!("unit ball of l_{name}^{n}, {name}={p}"),
            elapsed_ms: ms,
        });
    }
    for k in cfg.k.iter() {
        let (v, ms) = timed(cfg, || entropy_lower_volumetric(cfg.p, cfg.q, n, k, cfg.field));
        rows.push(Row {
            quantity: "e".into(),
            k,
            lower: Some(v?),
            upper: None,
            exact: false,
            method: "volumetric".into(),
            label: String::new(),
            elapsed_ms: ms,
        });
    }
    Ok(Report::new(cfg.clone(), rows, Vec::new()))
}

/// Envelopes over the dyadic dimensions `1, 2, 4, …, n`.
pub fn run_sweep(cfg: &RunConfig) -> CliResult<Report> {
    let n_max = require_n(cfg)?;
    let mut rows = Vec::new();
    let mut n = 1;
    while n <= n_max {
        rows.extend(envelope_rows(cfg, n, &format!("n={n}; ")));
        n *= 2;
    }
    Ok(Report::new(cfg.clone(), rows, Vec::new()))
}
