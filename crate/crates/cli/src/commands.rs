use genosc::interbasis::{ring_w, w_matrix};
use genosc::model::{
    energy_cylindrical_parts, energy_level, ring_relabel, separation_constant_a, CylindricalLabel, RingLabel,
    SphericalLabel, StateLabel,
};
use genosc::morse::{morse_spectrum, morse_wavefunction, normalization_diagnostic, significant_range, MorseParams};
use genosc::oracles::default_suite;
use genosc::perturbation::{large_r_series, observed_exponent, small_r_series, Regime};
use genosc::spheroidal::{build_tridiag_t, eigensolve, t_coefficients, u_coefficients_aligned, SpheroidalKind};

use crate::output::{Cell, Document, Table};
use crate::{Command, Failure, JobConfig};

pub const SMALL_R_PROBES: [f64; 2] = [0.05, 0.1];
pub const LARGE_R_PROBES: [f64; 2] = [20.0, 40.0];

pub fn dispatch(config: &JobConfig) -> Result<(Document, Result<(), Failure>), Failure> {
    let mut doc = Document::new(config);
    let verdict = match config.command {
        Command::Spectrum => spectrum(config, &mut doc).map(|_| Ok(()))?,
        Command::Interbasis => interbasis(config, &mut doc).map(|_| Ok(()))?,
        Command::Spheroidal => spheroidal(config, &mut doc).map(|_| Ok(()))?,
        Command::Perturb => perturb(config, &mut doc).map(|_| Ok(()))?,
        Command::Morse => morse(config, &mut doc).map(|_| Ok(()))?,
        Command::Verify => verify(config, &mut doc)?,
    };
    Ok((doc, verdict))
}

fn spectrum(config: &JobConfig, doc: &mut Document) -> Result<(), Failure> {
    let params = config.params()?;
    let branch = config.branch;
    let ch = params.channel();
    doc.note("b", ch.b);
    doc.note("c", ch.c);
    let mut table = Table::new("spectrum", ["n", "q", "p", "n_r", "n_rho", "E_n", "A_q", "E_rho", "E_z"]);
    for n in 0..=config.n {
        let e_n = energy_level(n, &params, branch)?;
        for i in 0..=n {
            let (e_rho, e_z) = energy_cylindrical_parts(n - i, i, &params, branch)?;
            table.push(vec![
                n.into(),
                i.into(),
                i.into(),
                (n - i).into(),
                (n - i).into(),
                e_n.into(),
                separation_constant_a(i, &params, branch)?.into(),
                e_rho.into(),
                e_z.into(),
            ]);
        }
    }
    doc.tables.push(table);
    Ok(())
}

fn interbasis(config: &JobConfig, doc: &mut Document) -> Result<(), Failure> {
    let params = config.params()?;
    let (n, branch) = (config.n, config.branch);
    if config.ring {
        if !params.is_ring() {
            return Err(Failure::Config("--ring needs P = 0".into()));
        }
        let relabel = |label| -> Result<RingLabel, Failure> { Ok(ring_relabel(&label, &params)?) };
        let RingLabel::Spherical { principal, .. } =
            relabel(StateLabel::Spherical(SphericalLabel::new(n, 0, branch, &params)?))?
        else {
            unreachable!("spherical label relabels to a spherical ring label")
        };
        let mut orbitals = Vec::new();
        let mut axials = Vec::new();
        for i in 0..=n {
            if let RingLabel::Spherical { orbital, .. } =
                relabel(StateLabel::Spherical(SphericalLabel::new(n - i, i, branch, &params)?))?
            {
                orbitals.push(orbital);
            }
            if let RingLabel::Cylindrical { axial, .. } =
                relabel(StateLabel::Cylindrical(CylindricalLabel::new(n - i, i, branch, &params)?))?
            {
                axials.push(axial);
            }
        }
        let delta = params.channel().delta;
        doc.note("principal_N", principal);
        doc.note("delta", delta);
        let mut columns = vec!["n3".to_string()];
        columns.extend(orbitals.iter().map(|l| format!("l={l}")));
        let mut table = Table::new("ring_w", columns);
        for &n3 in &axials {
            let mut row: Vec<Cell> = vec![n3.into()];
            for &l in &orbitals {
                row.push(ring_w(principal, params.m(), n3, l, delta)?.into());
            }
            table.push(row);
        }
        doc.tables.push(table);
        return Ok(());
    }
    let w = w_matrix(n, &params, branch)?;
    let entries = &w.entries;
    let gram = entries * entries.transpose();
    doc.note("orthogonality_defect", format!("{:.16e}", w.orthogonality_defect()));
    let mut columns = vec!["p".to_string()];
    columns.extend((0..=n).map(|q| format!("q={q}")));
    columns.push("orth_defect".into());
    let mut table = Table::new("w", columns);
    for p in 0..=n as usize {
        let mut row: Vec<Cell> = vec![p.into()];
        row.extend((0..=n as usize).map(|q| Cell::Num(entries[(p, q)])));
        let defect = (0..=n as usize)
            .map(|j| (gram[(p, j)] - if p == j { 1.0 } else { 0.0 }).abs())
            .fold(0.0, f64::max);
        row.push(defect.into());
        table.push(row);
    }
    doc.tables.push(table);
    Ok(())
}

fn r_points(config: &JobConfig) -> Vec<f64> {
    match config.r_grid {
        Some(g) => g.points(),
        None => vec![config.r],
    }
}

fn spheroidal(config: &JobConfig, doc: &mut Document) -> Result<(), Failure> {
    let params = config.params()?;
    let (n, branch, kind) = (config.n, config.branch, config.kind);
    let ks = config.k_range()?;
    doc.note("u_sign", "U columns are phase-aligned so that T = W^T U");
    let mut columns = vec!["R".to_string(), "k".into(), "lambda".into()];
    columns.extend((0..=n).map(|p| format!("U_p={p}")));
    columns.extend((0..=n).map(|q| format!("T_q={q}")));
    let mut table = Table::new("spheroidal", columns);
    for r in r_points(config) {
        let lambdas = eigensolve(&build_tridiag_t(n, &params, branch, r, kind)?)?.lambda;
        for &k in &ks {
            let mut row: Vec<Cell> = vec![r.into(), k.into(), lambdas[k as usize].into()];
            row.extend(u_coefficients_aligned(n, k, &params, branch, r, kind)?.into_iter().map(Cell::Num));
            row.extend(t_coefficients(n, k, &params, branch, r, kind)?.into_iter().map(Cell::Num));
            table.push(row);
        }
    }
    doc.tables.push(table);
    Ok(())
}

fn perturb(config: &JobConfig, doc: &mut Document) -> Result<(), Failure> {
    let params = config.params()?;
    let (n, branch, order) = (config.n, config.branch, config.order);
    if config.kind != SpheroidalKind::Prolate {
        return Err(Failure::Config("perturbation series are defined for the prolate system".into()));
    }
    let ks = config.k_range()?;
    let mut probes = Table::new("probes", ["regime", "k", "R", "exact", "series", "error"]);
    let mut convergence = Table::new("convergence", ["regime", "k", "order", "exponent"]);
    let mut coeffs = Table::new("lambda_coefficients", ["regime", "k", "j", "value"]);
    for &k in &ks {
        for regime in [Regime::SmallR, Regime::LargeR] {
            let (series, radii, label) = match regime {
                Regime::SmallR => (small_r_series(n, k, &params, branch, order)?, SMALL_R_PROBES, "small"),
                Regime::LargeR => (large_r_series(n, k, &params, branch, order)?, LARGE_R_PROBES, "large"),
            };
            for (j, v) in series.lambda_coeffs.iter().enumerate() {
                coeffs.push(vec![label.into(), k.into(), (j + 1).into(), (*v).into()]);
            }
            let mut errors = Vec::new();
            for r in radii {
                let exact = eigensolve(&build_tridiag_t(n, &params, branch, r, SpheroidalKind::Prolate)?)?.lambda
                    [k as usize];
                let approx = series.lambda(r, order);
                // large-R error is measured on λ/(ΩR²), the quantity the series expands
                let error = match regime {
                    Regime::SmallR => exact - approx,
                    Regime::LargeR => (exact - approx) / (params.omega() * r * r),
                };
                errors.push((series.variable(r), error));
                probes.push(vec![label.into(), k.into(), r.into(), exact.into(), approx.into(), error.into()]);
            }
            let exponent = observed_exponent(errors[0].0, errors[0].1, errors[1].0, errors[1].1);
            let signed = match regime {
                Regime::SmallR => exponent,
                Regime::LargeR => -exponent,
            };
            convergence.push(vec![label.into(), k.into(), order.into(), signed.into()]);
        }
    }
    doc.note("exponent_convention", "small: error ~ (Omega R^2)^s; large: error in lambda/(Omega R^2) ~ (Omega R^2)^s");
    doc.tables.extend([probes, convergence, coeffs]);
    Ok(())
}

fn morse(config: &JobConfig, doc: &mut Document) -> Result<(), Failure> {
    let params = MorseParams::new(config.v0, config.a)?;
    let energies = morse_spectrum(&params);
    doc.note("lambda", params.lambda());
    doc.note("level_count", energies.len());
    let mut levels = Table::new("levels", ["p", "energy", "norm_direct", "norm_laguerre", "printed_norm_ratio"]);
    let mut bound = Vec::new();
    for (p, &e) in energies.iter().enumerate() {
        match normalization_diagnostic(p as u32, &params) {
            Ok(d) => {
                bound.push(p as u32);
                levels.push(vec![p.into(), e.into(), d.direct.into(), d.laguerre.into(), d.printed_ratio.into()]);
            }
            Err(genosc::Error::NoBoundState(_)) => {
                doc.note("threshold_level", p);
                levels.push(vec![p.into(), e.into(), f64::NAN.into(), f64::NAN.into(), f64::NAN.into()]);
            }
            Err(e) => return Err(e.into()),
        }
    }
    if energies.is_empty() {
        doc.note("bound_states", "none: lambda <= 1/2");
    }
    doc.tables.push(levels);
    if !bound.is_empty() {
        let xs = match config.x_grid {
            Some(g) => g.points(),
            None => {
                let (lo, hi) = significant_range(&params, &bound)?;
                crate::Grid { start: lo, stop: hi, count: 201 }.points()
            }
        };
        let mut columns = vec!["x".to_string()];
        columns.extend(bound.iter().map(|p| format!("psi_{p}")));
        let mut grid = Table::new("wavefunctions", columns);
        for x in xs {
            let mut row: Vec<Cell> = vec![x.into()];
            for &p in &bound {
                row.push(morse_wavefunction(p, &params, x)?.into());
            }
            grid.push(row);
        }
        doc.tables.push(grid);
    }
    Ok(())
}

fn verify(config: &JobConfig, doc: &mut Document) -> Result<Result<(), Failure>, Failure> {
    let reports: Vec<_> =
        default_suite(config.tolerance_profile)?.iter().map(|r| r.rescaled(config.tolerance_scale)).collect();
    let failed = reports.iter().filter(|r| !r.passed).count();
    doc.note("checks", reports.len());
    doc.note("failed", failed);
    let mut table = Table::new("checks", ["name", "measured", "expected", "tolerance", "relative", "passed"]);
    for r in &reports {
        table.push(vec![
            r.name.clone().into(),
            r.measured.into(),
            r.expected.into(),
            r.tolerance.into(),
            r.relative.into(),
            r.passed.into(),
        ]);
    }
    doc.tables.push(table);
    Ok(if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{failed} of {} checks failed", reports.len())))
    })
}
