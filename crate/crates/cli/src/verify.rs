//! The property suite behind `snum verify`.

use num_complex::Complex64;
use rand::Rng;

use snumbers::entropy::{
    entropy_bounds, entropy_cover_sequence, entropy_lower_pack, entropy_lower_volumetric, EntropyOptions,
};
use snumbers::linalg::CMatrix;
use snumbers::sampling::{gaussian_vector, stream_rng};
use snumbers::spaces::{lp_norm, quasi_constant, AokiSearch, RhoNorm};
use snumbers::spectral::{carl_check, hilbert_entropy_bracket, weyl_check_with};
use snumbers::widths::{
    approx_id_envelope, approx_upper_search, kolmogorov_id_envelope, s_axiom_suite, ApproxEstimator,
    EntropyEstimator, HilbertExact, KolmogorovEstimator, SNumberSource, WidthResult,
};
use snumbers::{Exponent, Field, LinOp};

use crate::config::RunConfig;
use crate::report::{Report, Row, Violation};
use crate::run::{cloud_size, timed};
use crate::CliResult;

struct Family {
    name: &'static str,
    checks: usize,
    violations: Vec<Violation>,
}

impl Family {
    fn new(name: &'static str) -> Self {
        Family {
            name,
            checks: 0,
            violations: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, instance: impl FnOnce() -> String, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(Violation {
                check: self.name.into(),
                instance: instance(),
                detail: detail(),
            });
        }
    }
}

fn e(p: f64) -> Exponent {
    Exponent::new(p).expect("literal exponent")
}

fn le(lhs: f64, rhs: f64, tol: f64) -> bool {
    lhs <= rhs + tol * rhs.abs().max(1.0)
}

fn random_hilbert(seed: u64, stream: u64, n: usize, field: Field) -> CliResult<LinOp> {
    let mut rng = stream_rng(seed, stream);
    let m = CMatrix::from_vec(n, n, gaussian_vector(&mut rng, n * n, field));
    Ok(LinOp::new(m, Exponent::TWO, Exponent::TWO, field)?)
}

fn random_diagonal(seed: u64, stream: u64, n: usize, field: Field) -> CliResult<LinOp> {
    let mut rng = stream_rng(seed, stream);
    let d: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.random_range(0.2..2.0), 0.0)).collect();
    Ok(LinOp::diagonal(&d, Exponent::TWO, Exponent::TWO, field)?)
}

fn axioms(cfg: &RunConfig, fam: &mut Family, source: &dyn SNumberSource, trials: usize) -> CliResult<()> {
    let report = s_axiom_suite(source, trials, cfg.seed)?;
    fam.checks += report.checks;
    for v in report.violations {
        fam.violations.push(Violation {
            check: fam.name.into(),
            instance: format!("{} trial {}", report.source, v.trial),
            detail: format!(
                "{:?} at {:?}: {} > {}; T = {}",
                v.axiom, v.indices, v.lhs, v.rhs, v.witness
            ),
        });
    }
    Ok(())
}

fn weyl(cfg: &RunConfig, fam: &mut Family, instances: usize) -> CliResult<()> {
    for i in 0..instances {
        let n = 2 + i % 5;
        let field = if i % 2 == 0 { Field::Real } else { Field::Complex };
        let t = random_hilbert(cfg.seed, 0x1000 + i as u64, n, field)?;
        let r = weyl_check_with(&t, &[0.5, 1.0, 2.0, 4.0], cfg.tol, cfg.inject_fault)?;
        fam.checks += r.checks;
        for v in r.violations {
            fam.violations.push(Violation {
                check: fam.name.into(),
                instance: format!("instance {i}, n={n}, {field}"),
                detail: format!("{:?} at k={}: {} > {}", v.inequality, v.k, v.lhs, v.rhs),
            });
        }
    }
    Ok(())
}

fn carl(cfg: &RunConfig, fam: &mut Family) -> CliResult<()> {
    let k_max = 4;
    for n in 2..=3 {
        let t = random_diagonal(cfg.seed, 0x2000 + n as u64, n, Field::Complex)?;
        let cover = entropy_cover_sequence(&t, k_max, cloud_size(cfg.budget, k_max), cfg.seed)?;
        let uppers: Vec<f64> = cover.radii.iter().map(|r| r + cover.delta).collect();
        let r = carl_check(&t, &uppers, k_max)?;
        for row in &r.rows {
            let ok = !r.violations.contains(&row.k);
            fam.check(
                ok,
                || format!("diagonal n={n}"),
                || {
                    format!(
                        "k={}: |λ_k|={} vs √2ê_k={:?}, mean={} vs {}",
                        row.k, row.modulus, row.corollary_bound, row.geometric_mean, row.carl_bound
                    )
                },
            );
        }
    }
    Ok(())
}

fn hilbert_bracket(cfg: &RunConfig, fam: &mut Family) -> CliResult<()> {
    let k_max = 4;
    for n in 1..=3 {
        let t = random_diagonal(cfg.seed, 0x3000 + n as u64, n, Field::Real)?;
        let cloud = cloud_size(cfg.budget, k_max);
        let opts = EntropyOptions {
            cloud,
            budget: cloud,
            seed: cfg.seed,
        };
        for b in entropy_bounds(&t, k_max, opts)? {
            let r = hilbert_entropy_bracket(&t, b.k, &b)?;
            fam.check(
                r.upper_ok && r.lower_ok,
                || format!("diagonal n={n}, index {}", b.k),
                || format!("G={} lower={} upper+δ={}", r.g, r.lower, r.upper),
            );
        }
    }
    Ok(())
}

fn aoki(cfg: &RunConfig, fam: &mut Family, vectors: usize) -> CliResult<()> {
    let mut rng = stream_rng(cfg.seed, 0x4000);
    for p in [0.4, 0.5, 0.8] {
        let pe = e(p);
        let rho = RhoNorm::new(move |v: &[Complex64]| lp_norm(v, pe), quasi_constant(pe))?;
        let c0sq = rho.info().c0.powi(2);
        for i in 0..vectors {
            let n = 1 + i % 6;
            let search = AokiSearch {
                depth: 3,
                trials: 4,
                seed: cfg.seed.wrapping_add(i as u64),
            };
            let x = gaussian_vector(&mut rng, n, Field::Real);
            let y = gaussian_vector(&mut rng, n, Field::Real);
            let ex = rho.estimate(&x, search)?;
            let ey = rho.estimate(&y, search)?;
            let norm = lp_norm(&x, pe);
            fam.check(
                le(norm / c0sq, ex.value, cfg.tol) && le(ex.value, norm, cfg.tol),
                || format!("p={p}, vector {i}"),
                || format!("‖x‖={norm}, estimate={}", ex.value),
            );
            let sum = rho.estimate_sum(&ex, &ey, search)?;
            fam.check(
                le(sum.rho_power(), ex.rho_power() + ey.rho_power(), cfg.tol),
                || format!("p={p}, pair {i}"),
                || format!("{} > {} + {}", sum.rho_power(), ex.rho_power(), ey.rho_power()),
            );
        }
    }
    Ok(())
}

fn entropy_bracket(cfg: &RunConfig, fam: &mut Family) -> CliResult<()> {
    let k_max = 5;
    let grid = [1.0, 2.0, f64::INFINITY];
    for &p in &grid {
        for &q in grid.iter().filter(|&&q| q >= p) {
            let id = LinOp::identity(2, e(p), e(q), Field::Real)?;
            let cover = entropy_cover_sequence(&id, k_max, cloud_size(cfg.budget, k_max), cfg.seed)?;
            for k in 1..=k_max {
                let upper = cover.radii[k - 1] + cover.delta;
                let pack = entropy_lower_pack(&id, k, cloud_size(cfg.budget, k_max), cfg.seed)?.lower;
                let vol = entropy_lower_volumetric(e(p), e(q), 2, k, Field::Real)?;
                fam.check(
                    le(pack.max(vol), upper, cfg.tol),
                    || format!("id l_{p}^2 -> l_{q}^2, k={k}"),
                    || format!("packing={pack} volumetric={vol} cover+δ={upper}"),
                );
            }
        }
    }
    Ok(())
}

fn eckart_young(cfg: &RunConfig, fam: &mut Family, instances: usize) -> CliResult<()> {
    for i in 0..instances {
        let n = 2 + i % 5;
        let field = if i % 2 == 0 { Field::Real } else { Field::Complex };
        let t = random_hilbert(cfg.seed, 0x5000 + i as u64, n, field)?;
        for k in 1..=n {
            let r = approx_upper_search(&t, k, cfg.budget, cfg.seed)?;
            let gap = r.eckart_young_gap.unwrap_or(f64::INFINITY);
            fam.check(
                gap <= cfg.tol,
                || format!("instance {i}, n={n}, k={k}"),
                || format!("relative gap to σ_k = {gap}"),
            );
        }
    }
    Ok(())
}

fn closed_forms(cfg: &RunConfig, fam: &mut Family) -> CliResult<()> {
    let grid = [1.0, 1.5, 2.0, 3.0, f64::INFINITY];
    for &p in &grid {
        for &q in grid.iter().filter(|&&q| q <= p) {
            for n in 1..=6 {
                for k in 1..=n {
                    let a = approx_id_envelope(e(p), e(q), n, k)?;
                    let d = kolmogorov_id_envelope(e(p), e(q), n, k, cfg.field)?;
                    let bounds = |r: &WidthResult| r.envelope().map(|e| (e.lower, e.upper));
                    fam.check(
                        bounds(&a).is_some() && bounds(&a) == bounds(&d),
                        || format!("p={p} q={q} n={n} k={k}"),
                        || format!("a={a:?} d={d:?}"),
                    );
                }
            }
        }
    }
    Ok(())
}

/// Run the whole property suite. The report has one row per family; the exit
/// code is 1 iff some check failed.
pub fn run_verify(cfg: &RunConfig) -> CliResult<Report> {
    let scale = (cfg.budget / 1000).clamp(1, 10);
    let small = (cfg.budget / 50).clamp(8, 200);
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut family = |k: usize, name: &'static str, f: &mut dyn FnMut(&mut Family) -> CliResult<()>| -> CliResult<()> {
        let mut fam = Family::new(name);
        let (res, ms) = timed(cfg, || f(&mut fam));
        res?;
        rows.push(Row {
            quantity: "check".into(),
            k,
            lower: None,
            upper: None,
            exact: fam.violations.is_empty(),
            method: name.into(),
            label: format!("{} checks, {} violations", fam.checks, fam.violations.len()),
            elapsed_ms: ms,
        });
        violations.extend(fam.violations);
        Ok(())
    };
    family(1, "weyl", &mut |f| weyl(cfg, f, 20 * scale))?;
    family(2, "carl", &mut |f| carl(cfg, f))?;
    family(3, "hilbert-bracket", &mut |f| hilbert_bracket(cfg, f))?;
    family(4, "aoki-sandwich", &mut |f| aoki(cfg, f, 20 * scale))?;
    family(5, "entropy-bracket", &mut |f| entropy_bracket(cfg, f))?;
    family(6, "eckart-young", &mut |f| eckart_young(cfg, f, 5 * scale))?;
    family(7, "closed-forms", &mut |f| closed_forms(cfg, f))?;
    family(8, "axioms-hilbert", &mut |f| {
        axioms(cfg, f, &HilbertExact { field: Field::Real }, 5 * scale)?;
        axioms(cfg, f, &HilbertExact { field: Field::Complex }, 5 * scale)
    })?;
    family(9, "axioms-estimators", &mut |f| {
        let approx = ApproxEstimator {
            p: cfg.p,
            q: cfg.q,
            field: cfg.field,
            budget: small,
            seed: cfg.seed,
        };
        axioms(cfg, f, &approx, 2)?;
        let kolmogorov = KolmogorovEstimator {
            p: cfg.p,
            q: cfg.q,
            field: cfg.field,
            budget: small,
            seed: cfg.seed,
        };
        axioms(cfg, f, &kolmogorov, 2)?;
        let entropy = EntropyEstimator {
            p: cfg.p,
            q: cfg.q,
            field: cfg.field,
            options: EntropyOptions {
                cloud: cloud_size(cfg.budget, 3).min(800),
                budget: cloud_size(cfg.budget, 3).min(800),
                seed: cfg.seed,
            },
            k_max: 3,
        };
        axioms(cfg, f, &entropy, 2)
    })?;
    Ok(Report::new(cfg.clone(), rows, violations))
}
