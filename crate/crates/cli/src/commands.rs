use std::fmt::Write;

use serde::Serialize;
use serde_json::json;
use ttstar_core::birkhoff::Frame;
use ttstar_core::gamma::gamma_report;
use ttstar_core::golden::{diff_bbtilde, diff_h_table, h_table};
use ttstar_core::painleve::{
    asymptotic_h, cross_check, oracle_steps, total_curvature, OdeConfig, PainleveIII,
};
use ttstar_core::qde::j_coeffs;
use ttstar_core::sl2::{sl2_report, transversality_rank, GradedSpace, KappaModel};
use ttstar_core::ttstar::{check_cv_equations, cv_data, metric_h, shapes};
use ttstar_core::{APoly, BiSeries, LoopMatrix};

use crate::output::{csv, json, no_csv, CliError, Format, Output};
use crate::{Command, Emit, Model, Space};

/// Named tolerances; each can be overridden with `--tol name=value`.
#[derive(Clone, Debug, Serialize)]
pub struct Tolerances {
    pub gamma: f64,
    pub ode_rtol: f64,
    pub curvature_agree: f64,
}

impl Tolerances {
    pub fn from_overrides(o: &[(String, f64)]) -> Result<Self, CliError> {
        let mut t = Tolerances {
            gamma: 1e-10,
            ode_rtol: 1e-12,
            curvature_agree: 1e-6,
        };
        for (name, v) in o {
            match name.as_str() {
                "gamma" => t.gamma = *v,
                "ode_rtol" => t.ode_rtol = *v,
                "curvature_agree" => t.curvature_agree = *v,
                _ => {
                    return Err(CliError::Usage(format!(
                        "unknown tolerance {name:?} (known: gamma, ode_rtol, curvature_agree)"
                    )))
                }
            }
        }
        Ok(t)
    }
}

fn series_rows(label: &str, s: &BiSeries) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for ((n, m), c) in s.terms() {
        for (z, p) in c.terms() {
            for (a, r) in p.terms() {
                rows.push(vec![
                    label.to_string(),
                    n.to_string(),
                    m.to_string(),
                    z.to_string(),
                    a.to_string(),
                    r.to_string(),
                ]);
            }
        }
    }
    rows
}

fn poly_rows(f: &[APoly]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (n, p) in f.iter().enumerate() {
        let mut terms: Vec<_> = p.terms().collect();
        terms.reverse();
        for (k, c) in terms {
            rows.push(vec![n.to_string(), k.to_string(), c.to_string()]);
        }
    }
    rows
}

fn matrix_json(m: &LoopMatrix) -> Vec<Vec<&BiSeries>> {
    (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| m.get(i, j)).collect())
        .collect()
}

fn space(s: Space, n: usize) -> Result<(GradedSpace, f64, String), CliError> {
    match s {
        Space::Pn if n <= 12 => Ok((GradedSpace::projective_space(n), n as f64 + 1.0, format!("P{n}"))),
        Space::Pn => Err(CliError::Usage(format!("--n {n} is too large (max 12)"))),
        Space::P1xP1 => Ok((GradedSpace::p1_times_p1(), 2.0, "P1xP1".into())),
    }
}

pub fn run(cmd: Command, format: Format, tol: &Tolerances) -> Result<Output, CliError> {
    match cmd {
        Command::Jfun { order } => {
            let (j0, j1) = j_coeffs(order.order);
            let text = match format {
                Format::Json => json(&json!({ "order": order.order, "J0": j0, "J1": j1 }))?,
                Format::Csv => csv(
                    &["series", "n", "m", "z_exp", "a_exp", "coeff"],
                    series_rows("J0", &j0).into_iter().chain(series_rows("J1", &j1)),
                ),
                Format::Pretty => format!("J0 = {j0}\nJ1 = {j1}\n"),
            };
            Ok(Output::new(text, true))
        }
        Command::Gamma { .. } => {
            let r = gamma_report(5);
            let passed = r.passes(tol.gamma);
            let text = match format {
                Format::Json => json(&json!({ "report": r, "tolerance": tol.gamma, "passed": passed }))?,
                Format::Csv => return Err(no_csv("gamma")),
                Format::Pretty => {
                    let mut s = String::new();
                    writeln!(s, "Mukai Gram matrix      {:?}", r.gram_mukai).unwrap();
                    writeln!(s, "pairing Gram (rounded) {:?}", r.gram_rounded).unwrap();
                    writeln!(s, "Gram residual          {:.3e}", r.gram_residual).unwrap();
                    writeln!(s, "determinant            {}", r.determinant).unwrap();
                    writeln!(s, "Galois residual        {:.3e}", r.galois_residual).unwrap();
                    writeln!(s, "kappa_V lattice        {:.3e}", r.kappa_v_fixes_lattice).unwrap();
                    writeln!(s, "kappa_V^2 - 1          {:.3e}", r.kappa_v_involution).unwrap();
                    writeln!(s, "kappa_H^2 - 1          {:.3e}", r.kappa_h_involution).unwrap();
                    writeln!(s, "{}", if passed { "PASS" } else { "FAIL" }).unwrap();
                    s
                }
            };
            Ok(Output::new(text, passed))
        }
        Command::Birkhoff { order, emit } => {
            let frame = Frame::compute(order.order)?;
            let (name, m) = match emit {
                Emit::BBtilde => ("BBtilde", &frame.b_btilde),
                Emit::S => ("S", &frame.s),
                Emit::Ctilde => ("Ctilde", &frame.factors.ctilde),
            };
            let text = match format {
                Format::Json => json(&json!({ "order": order.order, "matrix": name, "entries": matrix_json(m) }))?,
                Format::Csv => {
                    let mut rows = Vec::new();
                    for i in 0..2 {
                        for j in 0..2 {
                            rows.extend(series_rows(&format!("{i}{j}"), m.get(i, j)));
                        }
                    }
                    csv(&["entry", "n", "m", "z_exp", "a_exp", "coeff"], rows)
                }
                Format::Pretty => {
                    let mut s = String::new();
                    for i in 0..2 {
                        for j in 0..2 {
                            writeln!(s, "{name}[{i}][{j}] = {}", m.get(i, j)).unwrap();
                        }
                    }
                    s
                }
            };
            Ok(Output::new(text, true))
        }
        Command::ExpandH { order } => {
            let m = metric_h(order.order)?;
            let sh = shapes(&m);
            let text = match format {
                Format::Json => json(&json!({ "order": order.order, "f": m.f, "shapes": sh }))?,
                Format::Csv => csv(&["n", "a_exp", "coeff"], poly_rows(&m.f)),
                Format::Pretty => m
                    .f
                    .iter()
                    .enumerate()
                    .map(|(n, p)| format!("F_{n} = {p}\n"))
                    .collect(),
            };
            Ok(Output::new(text, true))
        }
        Command::CvCheck { order } => {
            let residuals = check_cv_equations(&cv_data(order.order)?)?;
            let passed = residuals.iter().all(|r| r.is_zero());
            let rows: Vec<_> = residuals
                .iter()
                .map(|r| json!({ "name": r.name, "zero": r.is_zero(), "max_abs": r.max_abs() }))
                .collect();
            let text = match format {
                Format::Json => json(&json!({ "order": order.order, "residuals": rows, "passed": passed }))?,
                Format::Csv => csv(
                    &["name", "zero", "max_abs"],
                    residuals
                        .iter()
                        .map(|r| vec![format!("\"{}\"", r.name), r.is_zero().to_string(), r.max_abs().to_string()]),
                ),
                Format::Pretty => {
                    let mut s = String::new();
                    for r in &residuals {
                        writeln!(s, "{:<6} {}", if r.is_zero() { "zero" } else { "NONZERO" }, r.name).unwrap();
                    }
                    writeln!(s, "{} identities, {}", residuals.len(), if passed { "PASS" } else { "FAIL" }).unwrap();
                    s
                }
            };
            Ok(Output::new(text, passed))
        }
        Command::Oracle { order, laurent_depth } => {
            let steps = oracle_steps(order.order, laurent_depth as i32)?;
            let passed = steps.iter().all(|s| s.rank == s.unknowns);
            let mut f = vec![APoly::a()];
            f.extend(steps.iter().map(|s| s.f.clone()));
            let text = match format {
                Format::Json => json(&json!({ "order": order.order, "steps": steps }))?,
                Format::Csv => csv(&["n", "a_exp", "coeff"], poly_rows(&f)),
                Format::Pretty => {
                    let mut s = String::from("F_0 = a\n");
                    for st in &steps {
                        writeln!(
                            s,
                            "F_{} = {}   [rank {}/{} unknowns, {} equations]",
                            st.n, st.f, st.rank, st.unknowns, st.equations
                        )
                        .unwrap();
                    }
                    s
                }
            };
            Ok(Output::new(text, passed))
        }
        Command::CrossCheck { order } => {
            let c = cross_check(order.order)?;
            let passed = c.passes();
            let text = match format {
                Format::Json => json(&json!({ "report": c, "passed": passed }))?,
                Format::Csv => return Err(no_csv("cross-check")),
                Format::Pretty => format!(
                    "orders 0..={}: {} mismatches {:?}\ncorrupted frame detected: {}\n{}\n",
                    c.order,
                    c.mismatches.len(),
                    c.mismatches,
                    c.corrupted_detected,
                    if passed { "PASS" } else { "FAIL" }
                ),
            };
            Ok(Output::new(text, passed))
        }
        Command::Ode { qmin, qmax, samples } => {
            if !(qmin > 0.0 && qmax >= qmin && samples >= 1) {
                return Err(CliError::Usage("need 0 < qmin <= qmax and samples >= 1".into()));
            }
            let config = OdeConfig {
                rtol: tol.ode_rtol,
                ..OdeConfig::default()
            };
            let p = PainleveIII::solve(config)?;
            let qs: Vec<f64> = if samples == 1 {
                vec![qmin]
            } else {
                let (l0, l1) = (qmin.ln(), qmax.ln());
                (0..samples)
                    .map(|i| (l0 + (l1 - l0) * i as f64 / (samples - 1) as f64).exp())
                    .collect()
            };
            let sol = p.sample(&qs)?;
            let rows: Vec<_> = sol
                .samples
                .iter()
                .map(|s| {
                    let series = (s.q_abs <= config.match_q).then(|| p.series().h(s.q_abs));
                    (s, series, asymptotic_h(s.q_abs))
                })
                .collect();
            let passed = sol.samples.iter().all(|s| s.h.is_finite() && s.h > 0.0);
            let text = match format {
                Format::Json => {
                    let pts: Vec<_> = rows
                        .iter()
                        .map(|(s, ser, asy)| json!({ "sample": s, "h_series": ser, "h_asymptotic": asy }))
                        .collect();
                    json(&json!({
                        "config": config,
                        "sigma": p.sigma,
                        "slope_mismatch": p.slope_mismatch,
                        "samples": pts,
                    }))?
                }
                Format::Csv => csv(
                    &["q_abs", "x", "u", "du", "h", "h_series", "h_asymptotic"],
                    rows.iter().map(|(s, ser, asy)| {
                        vec![
                            format!("{:e}", s.q_abs),
                            format!("{:e}", s.x),
                            format!("{:e}", s.u),
                            format!("{:e}", s.du),
                            format!("{:e}", s.h),
                            ser.map(|v| format!("{v:e}")).unwrap_or_default(),
                            format!("{asy:e}"),
                        ]
                    }),
                ),
                Format::Pretty => {
                    let mut s = format!("slope mismatch at match point: {:.3e}\n", p.slope_mismatch);
                    writeln!(s, "{:>12} {:>22} {:>22} {:>22}", "|q|", "h", "h (series)", "h (asymptotic)").unwrap();
                    for (smp, ser, asy) in &rows {
                        let ser = ser.map(|v| format!("{v:.15e}")).unwrap_or_else(|| "-".into());
                        writeln!(s, "{:>12.4e} {:>22.15e} {:>22} {:>22.15e}", smp.q_abs, smp.h, ser, asy).unwrap();
                    }
                    s
                }
            };
            Ok(Output::new(text, passed))
        }
        Command::TotalCurvature => {
            let config = OdeConfig {
                rtol: tol.ode_rtol,
                ..OdeConfig::default()
            };
            let r = total_curvature(config, tol.curvature_agree)?;
            let flux = -std::f64::consts::FRAC_PI_2;
            let text = match format {
                Format::Json => json(&json!({ "report": r, "boundary_flux_value": flux }))?,
                Format::Csv => return Err(no_csv("total-curvature")),
                Format::Pretty => format!(
                    "total curvature      {:.12}\n  ODE part           {:.12}\n  small-|q| tail     {:.12}\n  large-|q| tail     {:.3e}\nhalved tolerance     {:.12}\nboundary flux -pi/2  {:.12}\n",
                    r.integral.total,
                    r.integral.ode_part,
                    r.integral.small_tail,
                    r.integral.far_tail,
                    r.halved_tolerance_total,
                    flux
                ),
            };
            Ok(Output::new(text, true))
        }
        Command::Sl2Check { space: s, n } => {
            let (v, _, name) = space(s, n)?;
            let r = sl2_report(&v)?;
            let passed = r.passes();
            let text = match format {
                Format::Json => json(&json!({ "space": name, "report": r, "passed": passed }))?,
                Format::Csv => return Err(no_csv("sl2-check")),
                Format::Pretty => {
                    let e = &r.exp_lemma;
                    format!(
                        "space {name}, dims {:?}\ncommutation relations   {}\nlowering kills primitives {}\nweight filtrations      {}\ndefining conditions     {}\nexp lemma: intertwining {}, image {}/{}, leading terms {}/{}\n{}\n",
                        r.dims,
                        r.commutation,
                        r.annihilates_primitive,
                        r.weight_filtrations,
                        r.weight_conditions,
                        e.intertwining,
                        e.image.iter().filter(|(_, ok)| *ok).count(),
                        e.image.len(),
                        e.leading.iter().filter(|c| c.holds).count(),
                        e.leading.len(),
                        if passed { "PASS" } else { "FAIL" }
                    )
                }
            };
            Ok(Output::new(text, passed))
        }
        Command::Transversality { space: s, n, t, model } => {
            let (v, c1, name) = space(s, n)?;
            let models = match model {
                Model::Diagonal => vec![KappaModel::Diagonal],
                Model::Rational => vec![KappaModel::Rational],
                Model::Gamma => vec![KappaModel::Gamma { c1 }],
                Model::All => vec![KappaModel::Diagonal, KappaModel::Rational, KappaModel::Gamma { c1 }],
            };
            let reports = models
                .into_iter()
                .map(|m| transversality_rank(&v, m, &t))
                .collect::<Result<Vec<_>, _>>()?;
            let passed = reports.iter().all(|r| r.full_at_largest_t() && r.limit_inverse_holds);
            let text = match format {
                Format::Json => json(&json!({ "space": name, "reports": reports, "passed": passed }))?,
                Format::Csv => csv(
                    &["model", "t", "k", "intersection_dim", "rank", "expected", "lift_error"],
                    reports.iter().flat_map(|r| {
                        r.points.iter().map(move |p| {
                            vec![
                                r.model.replace(',', ";"),
                                p.t.to_string(),
                                p.k.to_string(),
                                p.intersection_dim.to_string(),
                                p.projection_rank.to_string(),
                                p.expected.to_string(),
                                p.lift_error.map(|e| format!("{e:e}")).unwrap_or_default(),
                            ]
                        })
                    }),
                ),
                Format::Pretty => {
                    let mut s = format!("space {name}\n");
                    for r in &reports {
                        writeln!(s, "model {}: t0 = {:?}, t=inf inverse exp(a^dagger): {}", r.model, r.t0, r.limit_inverse_holds).unwrap();
                        for p in &r.points {
                            writeln!(
                                s,
                                "  t = {:<8} k = {:>3}  rank {}/{}  dim {}  {}",
                                p.t,
                                p.k,
                                p.projection_rank,
                                p.expected,
                                p.intersection_dim,
                                if p.full() { "full" } else { "DEFICIENT" }
                            )
                            .unwrap();
                        }
                    }
                    writeln!(s, "{}", if passed { "PASS" } else { "FAIL" }).unwrap();
                    s
                }
            };
            Ok(Output::new(text, passed))
        }
        Command::VerifyPaperTable => {
            let expected = h_table()?;
            let computed = metric_h(expected.len() as u32 - 1)?.f;
            let diff = diff_h_table(&expected, &computed);
            let blocks = diff_bbtilde()?;
            let passed = diff.iter().all(|d| d.matches()) && blocks.is_empty();
            let text = match format {
                Format::Json => json(&json!({ "coefficients": diff, "bbtilde_mismatches": blocks, "passed": passed }))?,
                Format::Csv => csv(
                    &["n", "a_exp", "expected", "actual", "match"],
                    diff.iter().map(|d| {
                        vec![
                            d.n.to_string(),
                            d.exp.to_string(),
                            d.expected.to_string(),
                            d.actual.to_string(),
                            d.matches().to_string(),
                        ]
                    }),
                ),
                Format::Pretty => {
                    let mut s = String::new();
                    for d in &diff {
                        writeln!(
                            s,
                            "{} F_{} a^{:<3} expected {:>40}  actual {:>40}",
                            if d.matches() { "ok  " } else { "DIFF" },
                            d.n,
                            d.exp,
                            d.expected.to_string(),
                            d.actual.to_string()
                        )
                        .unwrap();
                    }
                    let ok = diff.iter().filter(|d| d.matches()).count();
                    writeln!(s, "{ok}/{} coefficients match", diff.len()).unwrap();
                    writeln!(s, "BBtilde blocks: {} mismatching entries", blocks.len()).unwrap();
                    writeln!(s, "{}", if passed { "PASS" } else { "FAIL" }).unwrap();
                    s
                }
            };
            Ok(Output::new(text, passed))
        }
    }
}
