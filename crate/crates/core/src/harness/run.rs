use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::json;

use super::{fit_exponent, ExperimentConfig, HarnessError, HypothesisCheck, Mode, RowStatus, SweepReport, SweepRow};
use crate::budget::Budget;
use crate::detmethod::{
    bound_exponent, count_monomials, find_aux_poly, theoretical_bound, AuxMode, AuxSearchConfig, BoundKind,
    BoundParams, DetMethodError,
};
use crate::enumerate::{count_affine, schwarz_zippel_check, EnumerationError, WBox};
use crate::irreducible::{
    absolutely_irreducible_seeded, b_f_estimate, count_points_mod_p, default_threshold, is_prime,
    lang_weil_constant, CountMode, Field, IrreducibilityError,
};
use crate::poly::{parse_poly, split_cover_form, CoverPolynomial, WeightVector};
use crate::twisted::{
    aggregate_twisted, count_on_twisted_line, direction_envelope, discover_twisted_lines, enumerate_directions,
    TwistedError,
};

/// Runs every row of the sweep, smallest bound first.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<SweepReport, HarnessError> {
    cfg.validate()?;
    match cfg.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| HarnessError::Config(e.to_string()))?
            .install(|| dispatch(cfg)),
        None => dispatch(cfg),
    }
}

fn dispatch(cfg: &ExperimentConfig) -> Result<SweepReport, HarnessError> {
    let mut report = SweepReport {
        config: cfg.clone(),
        rows: Vec::new(),
        fitted_exponent: None,
        claimed_exponent: None,
        hypotheses: Vec::new(),
    };
    match cfg.mode {
        Mode::Count | Mode::Aux | Mode::Twisted => {
            let f = cover(cfg, true)?;
            check_top(cfg, &f, &mut report)?;
            match cfg.mode {
                Mode::Count => count_rows(cfg, &f, &mut report),
                Mode::Aux => aux_rows(cfg, &f, &mut report)?,
                _ => twisted_rows(cfg, &f, &mut report)?,
            }
        }
        Mode::Verify => {
            let f = cover(cfg, false)?;
            verify_rows(cfg, &f, &mut report);
        }
        Mode::Monomials => monomial_rows(cfg, &mut report)?,
        Mode::Modp => modp_rows(cfg, &mut report)?,
    }
    let series: Vec<(f64, f64)> = report
        .rows
        .iter()
        .filter(|r| r.status == RowStatus::Ok)
        .filter_map(|r| r.observed.filter(|&o| o > 0.0).map(|o| (r.b as f64, o)))
        .collect();
    report.fitted_exponent = fit_exponent(&series).ok();
    Ok(report)
}

fn cover(cfg: &ExperimentConfig, strict: bool) -> Result<CoverPolynomial, HarnessError> {
    let f = parse_poly(&cfg.polynomial, cfg.n + 1)?;
    split_cover_form(&f, cfg.n, cfg.e, strict).map_err(|e| HarnessError::Hypothesis(e.to_string()))
}

fn check_top(cfg: &ExperimentConfig, f: &CoverPolynomial, report: &mut SweepReport) -> Result<(), HarnessError> {
    let v = absolutely_irreducible_seeded(f.top(), Field::Rationals, cfg.seed)
        .map_err(|e| HarnessError::Hypothesis(format!("irreducibility of the top part undecided: {e}")))?;
    let note = if v.irreducible {
        if v.randomized {
            format!("random plane restrictions, {} trials", v.trials.len())
        } else {
            "exact".to_string()
        }
    } else {
        "the top part factors over an extension, so the counting bounds do not apply".to_string()
    };
    report.hypotheses.push(HypothesisCheck {
        name: "top part absolutely irreducible".into(),
        holds: v.irreducible,
        note: note.clone(),
    });
    if !v.irreducible {
        return Err(HarnessError::Hypothesis(note));
    }
    Ok(())
}

fn budget(cfg: &ExperimentConfig) -> Budget {
    let b = Budget {
        max_nodes: cfg.budget_nodes,
        deadline: None,
    };
    match cfg.budget_seconds {
        Some(s) => b.with_timeout(s),
        None => b,
    }
}

fn elapsed(cfg: &ExperimentConfig, t: Instant) -> u64 {
    if cfg.timings {
        t.elapsed().as_millis() as u64
    } else {
        0
    }
}

fn enum_status(e: &EnumerationError) -> RowStatus {
    match e {
        EnumerationError::Budget(b) => RowStatus::Budget(b.to_string()),
        other => RowStatus::Failed(other.to_string()),
    }
}

fn to_big(points: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    points.iter().map(|p| p.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

// ---------------------------------------------------------------------------

/// Exponent of `B` in the main counting bound for `d`.
pub(crate) fn count_exponent(n: usize, d: u32) -> f64 {
    if d >= 4 {
        n as f64 - 1.0
    } else {
        n as f64 - 2.0 + 2.0 / (d as f64).sqrt()
    }
}

/// `B^x`, times `(log B)^2` for `d ≤ 4` where the log power is not explicit.
fn count_bound(n: usize, d: u32, b: u64) -> f64 {
    let b = b as f64;
    let main = b.powf(count_exponent(n, d));
    if d >= 5 {
        main
    } else {
        main * b.ln().powi(2)
    }
}

fn count_rows(cfg: &ExperimentConfig, f: &CoverPolynomial, report: &mut SweepReport) {
    report.claimed_exponent = Some(count_exponent(f.n(), f.d()));
    for &b in &cfg.b_values {
        let t = Instant::now();
        let mut row = SweepRow::new(b);
        match WBox::new(f.e(), b, f.n())
            .map_err(EnumerationError::from)
            .and_then(|w| count_affine(f, &w, false, &budget(cfg)))
        {
            Ok(res) => {
                row.observe(res.n_aff as f64, count_bound(f.n(), f.d(), b));
                row.note("n_cover", res.n_cover);
                let de = f.d() as u64 * f.e() as u64;
                let sz = schwarz_zippel_check(de, f.n() as u32, b, res.n_aff).expect("positive parameters");
                row.note("schwarz_zippel_bound", sz.bound.to_string());
                if !sz.ok {
                    row.status = RowStatus::Failed(format!("n_aff exceeds {}", sz.bound));
                }
            }
            Err(e) => row.status = enum_status(&e),
        }
        row.runtime_ms = elapsed(cfg, t);
        report.rows.push(row);
    }
}

fn verify_rows(cfg: &ExperimentConfig, f: &CoverPolynomial, report: &mut SweepReport) {
    for &b in &cfg.b_values {
        let t = Instant::now();
        let mut row = SweepRow::new(b);
        let bud = budget(cfg);
        let result = WBox::new(f.e(), b, f.n())
            .map_err(EnumerationError::from)
            .and_then(|w| {
                let res = count_affine(f, &w, true, &bud)?;
                let cells = (2 * w.y_bound() as u128 + 1) * (2 * b as u128 + 1).pow(f.n() as u32);
                bud.check_nodes(cells)?;
                Ok((res, full_scan(f, &w)))
            });
        match result {
            Ok((res, scan)) => {
                let de = f.d() as u64 * f.e() as u64;
                let sz = schwarz_zippel_check(de, f.n() as u32, b, res.n_aff).expect("positive parameters");
                row.observe(res.n_aff as f64, sz.bound.to_f64().unwrap_or(f64::INFINITY));
                row.note("scan", scan.len());
                if res.points.as_deref() != Some(&scan[..]) {
                    row.status = RowStatus::Failed(format!("enumeration {} vs scan {}", res.n_aff, scan.len()));
                } else if !sz.ok {
                    row.status = RowStatus::Failed(format!("n_aff exceeds {}", sz.bound));
                }
            }
            Err(e) => row.status = enum_status(&e),
        }
        row.runtime_ms = elapsed(cfg, t);
        report.rows.push(row);
    }
}

/// Every point of the box, tested by direct evaluation.
fn full_scan(f: &CoverPolynomial, w: &WBox) -> Vec<Vec<i64>> {
    let (yb, xb) = (w.y_bound(), w.x_bound());
    let mut out = Vec::new();
    let mut x = vec![-xb; w.n];
    loop {
        for y in -yb..=yb {
            let mut p = vec![y];
            p.extend_from_slice(&x);
            if f.poly().eval_i64(&p) == BigInt::from(0) {
                out.push(p);
            }
        }
        let mut k = w.n;
        loop {
            if k == 0 {
                out.sort();
                return out;
            }
            k -= 1;
            if x[k] < xb {
                x[k] += 1;
                break;
            }
            x[k] = -xb;
        }
    }
}

fn aux_rows(cfg: &ExperimentConfig, f: &CoverPolynomial, report: &mut SweepReport) -> Result<(), HarnessError> {
    let (kind, mut params) = match f.n() {
        1 => (BoundKind::Curve, BoundParams::simple(f.d() as u64, 2)),
        2 => (BoundKind::Surface, BoundParams::simple(f.d() as u64, 2)),
        _ => {
            let top = f.top().primitive_part();
            let d = f.d() as u64;
            let threshold = cfg.sigma_threshold.unwrap_or_else(|| default_threshold(d));
            let est = b_f_estimate(&top, d, 2, threshold + 100, Some(threshold))
                .map_err(|e| HarnessError::Hypothesis(e.to_string()))?;
            let p = BoundParams {
                d,
                e: f.e() as u64,
                n: f.n() as u64,
                b: 2,
                norm_f: top.norm().to_f64().unwrap_or(f64::MAX).max(1.0),
                b_f: est.log_b.exp(),
            };
            (BoundKind::GeneralAffine, p)
        }
    };
    let bound_err = |e: DetMethodError| HarnessError::Config(e.to_string());
    report.claimed_exponent = Some(bound_exponent(kind, &params).map_err(bound_err)?);
    let w = f.weights();
    for &b in &cfg.b_values {
        let t = Instant::now();
        let mut row = SweepRow::new(b);
        params.b = b;
        let bound = theoretical_bound(kind, &params).map_err(bound_err)?;
        let bud = budget(cfg);
        let pts = WBox::new(f.e(), b, f.n())
            .map_err(EnumerationError::from)
            .and_then(|wb| count_affine(f, &wb, true, &bud));
        match pts {
            Ok(res) => {
                let points = to_big(res.points.as_deref().unwrap_or_default());
                let mut sc = AuxSearchConfig::new(AuxMode::Affine, cfg.m_max.unwrap_or(bound.ceil() as u64));
                sc.budget = bud;
                sc.theoretical_m = Some(bound);
                match find_aux_poly(f.poly(), &w, &points, &sc) {
                    Ok(r) => {
                        row.observe(r.m_found as f64, bound);
                        row.note("points", points.len());
                        row.note("kernel_dim", r.kernel_dim);
                        row.note("divisibility_checked", r.divisibility_checked);
                        row.note("terms", r.g.num_terms());
                        if r.m_found as f64 > bound {
                            row.status = RowStatus::Failed(format!("M = {} above the bound", r.m_found));
                        }
                    }
                    Err(DetMethodError::Budget(e)) => row.status = RowStatus::Budget(e.to_string()),
                    Err(e) => row.status = RowStatus::Failed(e.to_string()),
                }
            }
            Err(e) => row.status = enum_status(&e),
        }
        row.runtime_ms = elapsed(cfg, t);
        report.rows.push(row);
    }
    Ok(())
}

fn twisted_status(e: &TwistedError) -> RowStatus {
    match e {
        TwistedError::Budget(b) => RowStatus::Budget(b.to_string()),
        TwistedError::Enumeration(EnumerationError::Budget(b)) => RowStatus::Budget(b.to_string()),
        other => RowStatus::Failed(other.to_string()),
    }
}

fn twisted_rows(cfg: &ExperimentConfig, f: &CoverPolynomial, report: &mut SweepReport) -> Result<(), HarnessError> {
    if f.n() != 2 {
        return Err(HarnessError::Config("twisted mode needs n = 2".into()));
    }
    report.claimed_exponent = Some(1.0);
    for &b in &cfg.b_values {
        let t = Instant::now();
        let mut row = SweepRow::new(b);
        let mut run = || -> Result<(), TwistedError> {
            let lines = discover_twisted_lines(f, b, &budget(cfg))?;
            let agg = aggregate_twisted(f, b, &lines)?;
            for l in &lines {
                count_on_twisted_line(l, f.e(), b)?;
            }
            let dirs = enumerate_directions(f.top(), f.e(), b)?;
            row.observe(agg.total as f64, agg.bound);
            row.note("lines", agg.lines);
            row.note("directions", dirs.len());
            row.note("direction_envelope", direction_envelope(1.0, f.e(), f.d(), b));
            row.note("histogram", &agg.histogram);
            Ok(())
        };
        if let Err(e) = run() {
            row.status = twisted_status(&e);
        }
        row.runtime_ms = elapsed(cfg, t);
        report.rows.push(row);
    }
    Ok(())
}

fn monomial_rows(cfg: &ExperimentConfig, report: &mut SweepReport) -> Result<(), HarnessError> {
    let w = WeightVector::new(cfg.weights.clone().unwrap_or_default())?;
    report.claimed_exponent = Some(w.len() as f64 - 1.0);
    for &m in &cfg.b_values {
        let t = Instant::now();
        let mut row = SweepRow::new(m);
        let c = count_monomials(&w, m, true);
        let exact = c.exact.to_f64().unwrap_or(f64::INFINITY);
        let lead = c.leading_term.to_f64().unwrap_or(f64::INFINITY);
        row.observe(exact, lead);
        row.note("exact", c.exact.to_string());
        row.note("relative_deviation", c.relative_deviation);
        let listed = c.basis.as_ref().map_or(0, |b| b.len());
        let all_degree_m = c
            .basis
            .as_ref()
            .is_some_and(|b| b.monomials.iter().all(|mono| mono.weighted_degree(&w) == m));
        if num_bigint::BigUint::from(listed) != c.exact || !all_degree_m {
            row.status = RowStatus::Failed(format!("count {} but {listed} monomials listed", c.exact));
        }
        row.runtime_ms = elapsed(cfg, t);
        report.rows.push(row);
    }
    Ok(())
}

fn modp_rows(cfg: &ExperimentConfig, report: &mut SweepReport) -> Result<(), HarnessError> {
    let f = parse_poly(&cfg.polynomial, cfg.n + 1)?;
    let d = f.total_degree().unwrap_or(0);
    for &p in &cfg.b_values {
        let t = Instant::now();
        let mut row = SweepRow::new(p);
        if !is_prime(p) {
            row.status = RowStatus::Failed(format!("{p} is not prime"));
            report.rows.push(row);
            continue;
        }
        match count_points_mod_p(&f, p, CountMode::AffineCone, &budget(cfg)) {
            Ok(c) => {
                let dim = c.variables as u32 - 1;
                report.claimed_exponent = Some(dim as f64);
                let pf = p as f64;
                let bound = pf.powi(dim as i32) + (d * d) as f64 * pf.powf(dim as f64 - 0.5);
                row.observe(c.count as f64, bound);
                row.note("variables", c.variables);
                row.note("lang_weil_constant", lang_weil_constant(c.count, p, d, dim));
                row.detail.insert("main_term".into(), json!(pf.powi(dim as i32)));
            }
            Err(IrreducibilityError::Budget(b)) => row.status = RowStatus::Budget(b.to_string()),
            Err(e) => row.status = RowStatus::Failed(e.to_string()),
        }
        row.runtime_ms = elapsed(cfg, t);
        report.rows.push(row);
    }
    Ok(())
}
