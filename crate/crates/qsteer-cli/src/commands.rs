//! Implementations of the `analyze`, `sweep`, `verify`, and `oracle`
//! subcommands.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qsteer::qstate::{
    bell_diagonal_from_c, canonical_form, parse_state_json, sample_tetrahedron, CorrelationVector,
    DensityMatrix, StateInput,
};
use qsteer::scmub::{c2_closed, c2_numeric, c3_closed, c3_numeric, ScmubError};
use qsteer::steering::{
    cjwr_maximize, f2_closed, f3_closed, SettingCount, SteeringError, F2_MAX, F3_MAX,
};
use qsteer::verify::{
    c2_from_f2, c3_from_f3, monotonicity_scan, relation_residuals, SweepRecord, IDENTITY_TOL,
};

use crate::config::{
    require_samples, resolve, write_output, DEFAULT_ORACLE_SAMPLES, DEFAULT_SWEEP_GRID,
    DEFAULT_SWEEP_SAMPLES, DEFAULT_VERIFY_GRID, DEFAULT_VERIFY_SAMPLES,
};
use crate::output::{fmt_g12, oracle_csv, sweep_csv, to_json, OracleRow};
use crate::{AnalyzeArgs, CliError, Family, OracleArgs, OutputFormat, SweepArgs, VerifyArgs};

/// Local Bloch vectors below this norm are treated as zero, i.e. the state
/// counts as Bell-diagonal up to local rotations.
const BELL_DIAGONAL_TOL: f64 = 1e-9;

fn parse_inline_c(text: &str) -> Result<CorrelationVector, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Input(format!(
            "expected three comma-separated components in --c, got {}",
            parts.len()
        )));
    }
    let mut vals = [0.0f64; 3];
    for (slot, part) in vals.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|e| CliError::Input(format!("cannot parse component '{part}': {e}")))?;
    }
    Ok(CorrelationVector::new(vals[0], vals[1], vals[2]))
}

fn closed_form_record(c: &CorrelationVector) -> Result<SweepRecord, CliError> {
    Ok(relation_residuals(c)?)
}

fn numeric_record(rho: &DensityMatrix, seed: u64) -> Result<SweepRecord, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: [u64; 4] = [rng.gen(), rng.gen(), rng.gen(), rng.gen()];
    let two = cjwr_maximize(rho, SettingCount::Two, seeds[0])?;
    let three = cjwr_maximize(rho, SettingCount::Three, seeds[1])?;
    let c2 = c2_numeric(rho, seeds[2])?.value;
    let c3 = c3_numeric(rho, seeds[3])?.value;
    let canon = canonical_form(rho);
    let residual_14 = (c2 - c2_from_f2(two.f_value.min(F2_MAX))?).abs();
    let residual_17 = (c3 - c3_from_f3(three.f_value.min(F3_MAX))?).abs();
    Ok(SweepRecord {
        c: canon.c,
        f2: two.f_value,
        f3: three.f_value,
        s2: two.s_value,
        s3: three.s_value,
        c2_mub: c2,
        c3_mub: c3,
        c2_numeric: Some(c2),
        c3_numeric: Some(c3),
        residual_14,
        residual_17,
    })
}

pub fn analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let settings = resolve(&args.common)?;
    let inline_c = args.c.or_else(|| settings.file.c.clone());
    let input_path = args.input.or_else(|| settings.file.input.clone());

    let state = match (inline_c, input_path) {
        (Some(text), None) => StateInput::Correlation(parse_inline_c(&text)?),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(&path).map_err(|e| {
                CliError::Input(format!("cannot read input {}: {e}", path.display()))
            })?;
            parse_state_json(&text)?
        }
        (Some(_), Some(_)) => {
            return Err(CliError::Input(
                "give either --c or --input, not both".to_string(),
            ))
        }
        (None, None) => {
            return Err(CliError::Input(
                "an input state is required: --c \"c1,c2,c3\" or --input <path>".to_string(),
            ))
        }
    };

    let record = match state {
        StateInput::Correlation(c) => closed_form_record(&c)?,
        StateInput::Matrix(rho) => {
            let canon = canonical_form(&rho);
            if canon.a.norm() <= BELL_DIAGONAL_TOL && canon.b.norm() <= BELL_DIAGONAL_TOL {
                closed_form_record(&canon.c)?
            } else {
                numeric_record(&rho, settings.seed)?
            }
        }
    };

    let content = match settings.format {
        OutputFormat::Csv => sweep_csv(std::slice::from_ref(&record)),
        OutputFormat::Json => to_json(&record),
    };
    write_output(&settings.out, &content)
}

fn werner_sweep(p_start: f64, p_end: f64, p_step: f64) -> Result<Vec<SweepRecord>, CliError> {
    if !(0.0..=1.0).contains(&p_start) || !(0.0..=1.0).contains(&p_end) {
        return Err(CliError::Input(
            "werner parameters must lie in [0, 1]".to_string(),
        ));
    }
    if p_step <= 0.0 || p_end < p_start {
        return Err(CliError::Input(
            "need p_step > 0 and p_end >= p_start".to_string(),
        ));
    }
    let count = ((p_end - p_start) / p_step + 1e-9).floor() as usize + 1;
    let mut records = Vec::with_capacity(count);
    for i in 0..count {
        let p = (p_start + i as f64 * p_step).min(1.0);
        records.push(closed_form_record(&CorrelationVector::new(-p, -p, -p))?);
    }
    Ok(records)
}

fn grid_sweep(points: usize) -> Result<Vec<SweepRecord>, CliError> {
    if points < 2 {
        return Err(CliError::Input("grid needs at least 2 points".to_string()));
    }
    (0..points)
        .map(|i| {
            let c3 = -1.0 + 2.0 * i as f64 / (points - 1) as f64;
            closed_form_record(&CorrelationVector::new(0.0, 0.0, c3))
        })
        .collect()
}

fn random_sweep(samples: usize, seed: u64) -> Result<Vec<SweepRecord>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| closed_form_record(&sample_tetrahedron(&mut rng)))
        .collect()
}

pub fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let settings = resolve(&args.common)?;
    let family = args
        .family
        .or(settings.file.family)
        .unwrap_or(Family::Werner);
    let records = match family {
        Family::Werner => {
            let p_start = args.p_start.or(settings.file.p_start).unwrap_or(0.0);
            let p_end = args.p_end.or(settings.file.p_end).unwrap_or(1.0);
            let p_step = args.p_step.or(settings.file.p_step).unwrap_or(0.01);
            werner_sweep(p_start, p_end, p_step)?
        }
        Family::Grid => {
            let points = args
                .grid
                .or(settings.file.grid)
                .unwrap_or(DEFAULT_SWEEP_GRID);
            grid_sweep(points)?
        }
        Family::Random => {
            let samples = require_samples(
                args.samples
                    .or(settings.file.samples)
                    .unwrap_or(DEFAULT_SWEEP_SAMPLES),
            )?;
            random_sweep(samples, settings.seed)?
        }
    };
    let content = match settings.format {
        OutputFormat::Csv => sweep_csv(&records),
        OutputFormat::Json => to_json(&records),
    };
    write_output(&settings.out, &content)
}

pub fn verify(args: VerifyArgs) -> Result<(), CliError> {
    let settings = resolve(&args.common)?;
    let samples = require_samples(
        args.samples
            .or(settings.file.samples)
            .unwrap_or(DEFAULT_VERIFY_SAMPLES),
    )?;
    let grid = args
        .grid
        .or(settings.file.grid)
        .unwrap_or(DEFAULT_VERIFY_GRID);

    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let points: Vec<CorrelationVector> =
        (0..samples).map(|_| sample_tetrahedron(&mut rng)).collect();

    let mut summary = String::new();
    let mut max_residual_14 = 0.0f64;
    let mut max_residual_17 = 0.0f64;
    for c in &points {
        let rec = relation_residuals(c)?;
        max_residual_14 = max_residual_14.max(rec.residual_14);
        max_residual_17 = max_residual_17.max(rec.residual_17);
    }
    if max_residual_14 > IDENTITY_TOL || max_residual_17 > IDENTITY_TOL {
        return Err(CliError::Verification(format!(
            "relation identity failed: max residual14 = {}, max residual17 = {}",
            fmt_g12(max_residual_14),
            fmt_g12(max_residual_17)
        )));
    }
    summary.push_str(&format!(
        "relation identity: PASS (samples={samples}, max residual14={}, max residual17={})\n",
        fmt_g12(max_residual_14),
        fmt_g12(max_residual_17)
    ));

    let report = monotonicity_scan(grid)?;
    summary.push_str(&format!(
        "monotonicity: PASS (grid={grid}, min forward diff C2(F2)={}, C3(F3)={}, steerable pairs={}/{})\n",
        fmt_g12(report.min_forward_difference_f2),
        fmt_g12(report.min_forward_difference_f3),
        report.steerable_pairs_f2,
        report.steerable_pairs_f3
    ));

    qsteer::verify::check_s_normalization(F2_MAX, F3_MAX, &points)?;
    summary.push_str(&format!(
        "normalization: PASS (F2max={}, F3max={})\n",
        fmt_g12(F2_MAX),
        fmt_g12(F3_MAX)
    ));

    summary.push_str("verify: PASS\n");
    write_output(&settings.out, &summary)
}

fn convergence_failed_steering(e: SteeringError) -> Result<(), CliError> {
    match e {
        SteeringError::Convergence(_) => Ok(()),
        other => Err(other.into()),
    }
}

fn convergence_failed_scmub(e: ScmubError) -> Result<(), CliError> {
    match e {
        ScmubError::Convergence(_) => Ok(()),
        other => Err(other.into()),
    }
}

pub fn oracle(args: OracleArgs) -> Result<(), CliError> {
    let settings = resolve(&args.common)?;
    let samples = require_samples(
        args.samples
            .or(settings.file.samples)
            .unwrap_or(DEFAULT_ORACLE_SAMPLES),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let mut rows = Vec::with_capacity(samples);
    for _ in 0..samples {
        let c = sample_tetrahedron(&mut rng);
        let rho = bell_diagonal_from_c(&c)?;
        let seeds: [u64; 4] = [rng.gen(), rng.gen(), rng.gen(), rng.gen()];

        let mut converged = true;
        let dev_f2 = match cjwr_maximize(&rho, SettingCount::Two, seeds[0]) {
            Ok(rep) => Some((rep.f_value - f2_closed(&c)).abs()),
            Err(e) => {
                convergence_failed_steering(e)?;
                converged = false;
                None
            }
        };
        let dev_f3 = match cjwr_maximize(&rho, SettingCount::Three, seeds[1]) {
            Ok(rep) => Some((rep.f_value - f3_closed(&c)).abs()),
            Err(e) => {
                convergence_failed_steering(e)?;
                converged = false;
                None
            }
        };
        let dev_c2 = match c2_numeric(&rho, seeds[2]) {
            Ok(rep) => Some((rep.value - c2_closed(&c)?).abs()),
            Err(e) => {
                convergence_failed_scmub(e)?;
                converged = false;
                None
            }
        };
        let dev_c3 = match c3_numeric(&rho, seeds[3]) {
            Ok(rep) => Some((rep.value - c3_closed(&c)?).abs()),
            Err(e) => {
                convergence_failed_scmub(e)?;
                converged = false;
                None
            }
        };
        rows.push(OracleRow {
            c,
            dev_f2,
            dev_f3,
            dev_c2,
            dev_c3,
            converged,
        });
    }

    let content = match settings.format {
        OutputFormat::Csv => oracle_csv(&rows),
        OutputFormat::Json => to_json(&rows),
    };
    write_output(&settings.out, &content)?;

    let max_of = |field: fn(&OracleRow) -> Option<f64>| {
        rows.iter()
            .filter_map(field)
            .fold(0.0f64, f64::max)
    };
    let flagged = rows.iter().filter(|r| !r.converged).count();
    let summary = format!(
        "max deviations: F2={}, F3={}, C2={}, C3={} ({} rows, {} flagged)\n",
        fmt_g12(max_of(|r| r.dev_f2)),
        fmt_g12(max_of(|r| r.dev_f3)),
        fmt_g12(max_of(|r| r.dev_c2)),
        fmt_g12(max_of(|r| r.dev_c3)),
        rows.len(),
        flagged
    );
    // keep the table clean: summary goes to the other stream
    if settings.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }

    if flagged > 0 {
        return Err(CliError::Convergence(format!(
            "{flagged} of {} oracle rows failed to converge",
            rows.len()
        )));
    }
    Ok(())
}
