//! One function per subcommand; each builds a serializable result, checks
//! its own invariants (exit code 4 on violation), and hands the payload to
//! the output layer.

use std::time::Duration;

use num::rational::BigRational;
use serde::Serialize;

use qekr::certificate::full::{
    build_full_certificate, kernel_analysis, weak_duality_check, CertificateSummary,
    KernelReport, SPECTRAL_TOL,
};
use qekr::certificate::{block_spectrum, psd_condition, psd_threshold, BlockSpectrum};
use qekr::families::{
    max_measure_t_intersecting, product_bound_subset_check, product_bound_subspace_pair, star_family,
    top_family, SearchConfig, SearchResult,
};
use qekr::gfspace::Grassmannian;
use qekr::measure::{
    upper_tail_report, lower_tail_report, cross_tail_report, measure_star_product_form, moments as measure_moments,
    MeasureContext, MomentReport, TailReport,
};
use qekr::parse_rational;
use qekr::scalar::{Real, Scalar};

use crate::output::{emit_csv, emit_json, CliError, OutputFormat, Sink};
use crate::{LimitKind, RunConfig, TailClaim};

fn parse_sigma(s: &str) -> Result<Scalar, CliError> {
    let r = parse_rational(s).map_err(CliError::from)?;
    let sc = Scalar::exact(r);
    if !sc.is_positive() {
        return Err(CliError::usage("sigma must be positive"));
    }
    Ok(sc)
}

fn parse_theta(s: &str) -> Result<BigRational, CliError> {
    let r = parse_rational(s).map_err(CliError::from)?;
    Ok(r)
}

fn require_json(format: OutputFormat, what: &str) -> Result<(), CliError> {
    if format == OutputFormat::Csv {
        return Err(CliError::usage(format!("{what} has no CSV projection; use --format json")));
    }
    Ok(())
}

// ---------------------------------------------------------------- measure

#[derive(Serialize)]
struct StarRow {
    t: u32,
    closed: Scalar,
    enumerated: Scalar,
    equal: bool,
}

#[derive(Serialize)]
struct MeasureOut {
    q: u32,
    n: u32,
    sigma: Scalar,
    weights: Vec<Scalar>,
    layer_masses: Vec<Scalar>,
    star_bound: Scalar,
    stars: Vec<StarRow>,
    top_family_t: u32,
    top_family_mass: Scalar,
    top_family_size: usize,
}

#[allow(clippy::too_many_arguments)]
pub fn measure(
    config: &RunConfig,
    format: OutputFormat,
    sink: &mut Sink,
    q: u32,
    n: u32,
    sigma: &str,
    t: u32,
) -> Result<(), CliError> {
    require_json(format, "measure")?;
    if t == 0 {
        return Err(CliError::usage("t must be at least 1"));
    }
    let sigma = parse_sigma(sigma)?;
    let ctx = MeasureContext::new(q, n, sigma.clone())?;
    let mut stars = Vec::new();
    for tt in 1..=n {
        let closed = ctx.measure_star_closed(tt)?;
        let family = star_family(n, q, tt, None, config.enum_cap)?;
        let enumerated = ctx.measure_family(&family)?;
        let equal = closed == enumerated;
        stars.push(StarRow { t: tt, closed, enumerated, equal });
    }
    let top = top_family(n, q, t, config.enum_cap)?;
    let out = MeasureOut {
        q,
        n,
        sigma,
        weights: ctx.weights().to_vec(),
        layer_masses: ctx.layer_masses().to_vec(),
        star_bound: ctx.star_bound(),
        stars,
        top_family_t: t,
        top_family_mass: ctx.top_family_mass(t),
        top_family_size: top.len(),
    };
    let bad = out.stars.iter().any(|s| !s.equal);
    emit_json(sink, config, &out)?;
    if bad {
        return Err(CliError::invariant("closed-form star measure disagrees with enumeration"));
    }
    Ok(())
}

// -------------------------------------------------------------- enumerate

pub fn enumerate(
    config: &RunConfig,
    sink: &mut Sink,
    q: u32,
    n: u32,
    k: Option<u32>,
    hex: bool,
) -> Result<(), CliError> {
    let header = serde_json::to_string(config)
        .map_err(|e| CliError::internal(format!("serialization: {e}")))?;
    sink.line(&format!("# config {header}"))?;
    let layers: Vec<u32> = match k {
        Some(k) => vec![k],
        None => (0..=n).collect(),
    };
    for kk in layers {
        for s in Grassmannian::new(n, kk, q, config.enum_cap)? {
            if hex {
                sink.line(&s.to_hex())?;
            } else {
                let json = serde_json::to_string(&s)
                    .map_err(|e| CliError::internal(format!("serialization: {e}")))?;
                sink.line(&json)?;
            }
        }
    }
    Ok(())
}

// ----------------------------------------------------------------- search

#[derive(Serialize)]
struct SearchOut {
    q: u32,
    n: u32,
    sigma: Scalar,
    t: u32,
    star_bound: Scalar,
    #[serde(flatten)]
    result: SearchResult,
}

#[allow(clippy::too_many_arguments)]
pub fn search(
    config: &RunConfig,
    format: OutputFormat,
    sink: &mut Sink,
    q: u32,
    n: u32,
    sigma: &str,
    t: u32,
    time_budget_secs: Option<f64>,
    max_optima: Option<usize>,
) -> Result<(), CliError> {
    require_json(format, "search")?;
    let sigma = parse_sigma(sigma)?;
    let ctx = MeasureContext::new(q, n, sigma.clone())?;
    let cfg = SearchConfig {
        max_vertices: config.max_vertices,
        max_optima_reported: max_optima.unwrap_or(64),
        threads: config.threads,
        time_budget: time_budget_secs.map(Duration::from_secs_f64),
        enum_cap: config.enum_cap,
    };
    let result = max_measure_t_intersecting(&ctx, t, &cfg)?;
    let out = SearchOut { q, n, sigma, t, star_bound: ctx.star_bound(), result };
    emit_json(sink, config, &out)
}

// ----------------------------------------------------------------- certify

#[derive(Serialize)]
struct StarGapRow {
    t: u32,
    mu: Scalar,
    gap_exact: Scalar,
    gap_quadratic: f64,
}

#[derive(Serialize)]
struct FullOut {
    summary: CertificateSummary,
    kernel: Option<KernelReport>,
    star_gaps: Vec<StarGapRow>,
}

#[derive(Serialize)]
struct CertifyOut {
    q: u32,
    n: u32,
    sigma: Scalar,
    threshold: Scalar,
    condition: bool,
    at_or_below_threshold: bool,
    block_spectrum: BlockSpectrum,
    zero_eigenvalues: Vec<(u32, u32)>,
    full: Option<FullOut>,
}

pub fn certify(
    config: &RunConfig,
    format: OutputFormat,
    sink: &mut Sink,
    q: u32,
    n: u32,
    sigma: &str,
    full: bool,
) -> Result<(), CliError> {
    require_json(format, "certify")?;
    let sigma_scalar = parse_sigma(sigma)?;
    let sigma_rat = sigma_scalar
        .as_exact()
        .ok_or_else(|| CliError::usage("certify needs a rational sigma"))?
        .clone();
    let threshold = psd_threshold(n, q)?;
    let condition = psd_condition(n, &sigma_scalar, q);
    let spectrum = block_spectrum(n, &sigma_rat, q)?;
    if !spectrum.shift_identity_ok {
        emit_json(sink, config, &spectrum)?;
        return Err(CliError::invariant("block shift identity failed"));
    }
    let min_ev_nonneg = !spectrum.min_eigenvalue().is_negative();
    if condition != min_ev_nonneg {
        return Err(CliError::invariant(
            "odd-power condition disagrees with the block spectrum sign",
        ));
    }

    let mut full_out = None;
    let mut violation: Option<String> = None;
    if full {
        let cert = build_full_certificate(n, q, &sigma_rat, config.enum_cap)?;
        let summary = cert.summary();
        if summary.spectrum_match_error > 1e-9 {
            violation = Some(format!(
                "assembled spectrum deviates from the block closed form by {}",
                summary.spectrum_match_error
            ));
        }
        if !summary.a_support_ok {
            violation = Some("weight matrix has support on non-disjoint pairs".into());
        }
        if condition && summary.min_eigenvalue < -SPECTRAL_TOL * (1.0 + summary.spectral_radius)
        {
            violation = Some("certificate not PSD within tolerance".into());
        }
        let kernel = if sigma_rat < threshold {
            let stars = vec![star_family(n, q, 1, None, config.enum_cap)?];
            let report = kernel_analysis(&cert, &stars)?;
            if !report.all_within_tolerance() {
                violation = Some("kernel analysis outside tolerance".into());
            }
            Some(report)
        } else {
            None
        };
        let mut star_gaps = Vec::new();
        for t in 1..=n {
            let fam = star_family(n, q, t, None, config.enum_cap)?;
            let rep = weak_duality_check(&cert, &fam)?;
            star_gaps.push(StarGapRow {
                t,
                mu: rep.mu,
                gap_exact: rep.gap_exact,
                gap_quadratic: rep.gap_quadratic,
            });
        }
        full_out = Some(FullOut { summary, kernel, star_gaps });
    }

    let out = CertifyOut {
        q,
        n,
        sigma: sigma_scalar,
        threshold: Scalar::exact(threshold.clone()),
        condition,
        at_or_below_threshold: sigma_rat <= threshold,
        zero_eigenvalues: spectrum.zero_positions(),
        block_spectrum: spectrum,
        full: full_out,
    };
    emit_json(sink, config, &out)?;
    if let Some(v) = violation {
        return Err(CliError::invariant(v));
    }
    Ok(())
}

// ------------------------------------------------------------------ tails

#[allow(clippy::too_many_arguments)]
pub fn tails(
    config: &RunConfig,
    format: OutputFormat,
    sink: &mut Sink,
    claim: TailClaim,
    theta: &str,
    t: u32,
    q: u32,
    n_min: u32,
    n_max: u32,
    n_step: u32,
    delta: Option<&str>,
) -> Result<(), CliError> {
    let theta = parse_theta(theta)?;
    let delta = match delta {
        Some(d) => Some(parse_theta(d)?),
        None => None,
    };
    if n_step == 0 || n_max < n_min {
        return Err(CliError::usage("need n_min <= n_max and n_step >= 1"));
    }
    let prec = config.tail_precision_bits;
    let mut reports: Vec<TailReport> = Vec::new();
    let mut n = n_min;
    while n <= n_max {
        let r = match claim {
            TailClaim::Upper => upper_tail_report(&theta, n, q, t, prec)?,
            TailClaim::Lower => lower_tail_report(&theta, n, q, t, delta.clone(), prec)?,
            TailClaim::Cross => cross_tail_report(&theta, n, q, t, prec)?,
        };
        reports.push(r);
        n += n_step;
    }
    match format {
        OutputFormat::Json => emit_json(sink, config, &reports),
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.tail_mass.value_string(),
                        r.normalizer.value_string(),
                        r.normalized.value_string(),
                        r.normalized.mode_tag(),
                    ]
                })
                .collect();
            emit_csv(sink, config, &["n", "raw_tail", "normalizer", "normalized", "mode"], &rows)
        }
    }
}

// ----------------------------------------------------------------- limits

#[derive(Serialize)]
struct LimitRow {
    n: u32,
    value: Scalar,
    root: Scalar,
    target: Scalar,
    deviation: Scalar,
}

#[allow(clippy::too_many_arguments)]
pub fn limits(
    config: &RunConfig,
    format: OutputFormat,
    sink: &mut Sink,
    kind: LimitKind,
    theta: &str,
    theta2: Option<&str>,
    t: u32,
    q: u32,
    n_min: u32,
    n_max: u32,
    n_step: u32,
) -> Result<(), CliError> {
    let theta = parse_theta(theta)?;
    let theta2 = match theta2 {
        Some(s) => parse_theta(s)?,
        None => theta.clone(),
    };
    if n_step == 0 || n_max < n_min {
        return Err(CliError::usage("need n_min <= n_max and n_step >= 1"));
    }
    let prec = config.tail_precision_bits;
    let one = BigRational::from_integer(1.into());
    let qf = Real::from_u64(q as u64, prec);
    let target: Scalar = match kind {
        LimitKind::Star => {
            Scalar::real(qf.pow_rational(&(-(&one - &theta) * BigRational::from_integer(t.into()))))
        }
        LimitKind::Bn => Scalar::one(),
        LimitKind::G => Scalar::real(qf.pow_rational(
            &(-(BigRational::from_integer(2.into()) - &theta - &theta2)
                * BigRational::from_integer(t.into())),
        )),
    };
    let mut rows = Vec::new();
    let mut n = n_min;
    while n <= n_max {
        let (value, root) = match kind {
            LimitKind::Star => {
                let v = Scalar::real(measure_star_product_form(&theta, n, q, t, prec)?);
                let r = v.nth_root(n, prec);
                (v, r)
            }
            LimitKind::Bn => {
                let ctx = MeasureContext::biased(&theta, n, q, prec)?;
                let v = ctx.top_family_mass(t);
                let r = v.nth_root(n, prec);
                (v, r)
            }
            LimitKind::G => {
                let g = qekr::families::g_lower_bound(&theta, &theta2, n, q, t, prec)?;
                (Scalar::real(g.clone()), Scalar::real(g))
            }
        };
        let deviation = root.sub(&target).abs();
        rows.push(LimitRow { n, value, root, target: target.clone(), deviation });
        n += n_step;
    }
    match format {
        OutputFormat::Json => emit_json(sink, config, &rows),
        OutputFormat::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.value.value_string(),
                        r.root.value_string(),
                        r.target.value_string(),
                        r.deviation.value_string(),
                        r.root.mode_tag(),
                    ]
                })
                .collect();
            emit_csv(sink, config, &["n", "value", "root", "target", "deviation", "mode"], &table)
        }
    }
}

// ---------------------------------------------------------------- moments

pub fn moments(
    config: &RunConfig,
    format: OutputFormat,
    sink: &mut Sink,
    theta: &str,
    q: u32,
    n: u32,
) -> Result<(), CliError> {
    require_json(format, "moments")?;
    let theta = parse_theta(theta)?;
    let report: MomentReport = measure_moments(&theta, n, q, config.precision_bits)?;
    let tol = Scalar::from_ratio(1, 1_000_000_000_000);
    let consistent = report.entries().iter().all(|e| {
        if e.closed.is_exact() && e.direct.is_exact() {
            e.closed == e.direct
        } else {
            e.closed.close_to(&e.direct, &tol)
        }
    });
    emit_json(sink, config, &report)?;
    if !consistent {
        return Err(CliError::invariant("moment closed forms disagree with direct sums"));
    }
    Ok(())
}

// -------------------------------------------------------------- conjecture

#[derive(Serialize)]
struct ConjectureRow {
    n: u32,
    sigma: Scalar,
    sigma_exact: bool,
    star_measure: Option<Scalar>,
    search_optimum: Option<Scalar>,
    star_is_optimal: Option<bool>,
    optima_count: Option<usize>,
    note: String,
}

#[allow(clippy::too_many_arguments)]
pub fn conjecture(
    config: &RunConfig,
    format: OutputFormat,
    sink: &mut Sink,
    p: &str,
    q: u32,
    t: u32,
    n_min: u32,
    n_max: u32,
) -> Result<(), CliError> {
    require_json(format, "conjecture")?;
    let p = parse_theta(p)?;
    let mut rows = Vec::new();
    for n in n_min..=n_max {
        let sigma = qekr::qcombinat::sigma_conjecture(&p, n, q, config.precision_bits)?;
        if !sigma.is_exact() {
            rows.push(ConjectureRow {
                n,
                sigma,
                sigma_exact: false,
                star_measure: None,
                search_optimum: None,
                star_is_optimal: None,
                optima_count: None,
                note: "pn is not an integer here; the bias is irrational and the exact search does not apply".into(),
            });
            continue;
        }
        let ctx = MeasureContext::new(q, n, sigma.clone())?;
        let star = ctx.measure_star_closed(t)?;
        let cfg = SearchConfig {
            max_vertices: config.max_vertices,
            threads: config.threads,
            enum_cap: config.enum_cap,
            ..SearchConfig::default()
        };
        match max_measure_t_intersecting(&ctx, t, &cfg) {
            Ok(r) => {
                let star_is_optimal = r.optimum == star;
                rows.push(ConjectureRow {
                    n,
                    sigma,
                    sigma_exact: true,
                    star_measure: Some(star),
                    search_optimum: Some(r.optimum),
                    star_is_optimal: Some(star_is_optimal),
                    optima_count: Some(r.optima.len()),
                    note: if r.complete { String::new() } else { "search incomplete".into() },
                });
            }
            Err(qekr::Error::VertexCap { count, cap }) => {
                rows.push(ConjectureRow {
                    n,
                    sigma,
                    sigma_exact: true,
                    star_measure: Some(star),
                    search_optimum: None,
                    star_is_optimal: None,
                    optima_count: None,
                    note: format!("search skipped: {count} vertices exceed the cap {cap}"),
                });
            }
            Err(e) => return Err(e.into()),
        }
    }
    emit_json(sink, config, &rows)
}

// ---------------------------------------------------------- counterexample

#[derive(Serialize)]
struct CounterexampleOut {
    subspace_pair: Option<qekr::families::SubspacePairReport>,
    subspace_cross_check: Option<bool>,
    subset_check: Option<qekr::families::SubsetCheckReport>,
}

#[allow(clippy::too_many_arguments)]
pub fn counterexample(
    config: &RunConfig,
    format: OutputFormat,
    sink: &mut Sink,
    subspace: bool,
    subset: bool,
    l: u64,
    q: u32,
    k: u64,
    n: Option<u64>,
) -> Result<(), CliError> {
    require_json(format, "counterexample")?;
    let both = !subspace && !subset;
    let mut out = CounterexampleOut {
        subspace_pair: None,
        subspace_cross_check: None,
        subset_check: None,
    };
    let mut violation: Option<String> = None;
    if subspace || both {
        let rep = product_bound_subspace_pair(l as u32, q, config.enum_cap)?;
        let cross = qekr::families::is_cross_t_intersecting(&rep.u_family, &rep.w_family, 1)?;
        if !rep.exceeds || !cross {
            violation = Some("subspace counterexample failed its defining inequalities".into());
        }
        out.subspace_cross_check = Some(cross);
        out.subspace_pair = Some(rep);
    }
    if subset || both {
        let n = n.unwrap_or(17 * k);
        let l_subset = if subset && !both { l } else { 9 * k };
        let rep = product_bound_subset_check(k, l_subset, n)?;
        if rep.condition_holds != rep.product_exceeds {
            violation =
                Some("subset inequality and product comparison disagree".into());
        }
        out.subset_check = Some(rep);
    }
    emit_json(sink, config, &out)?;
    if let Some(v) = violation {
        return Err(CliError::invariant(v));
    }
    Ok(())
}
