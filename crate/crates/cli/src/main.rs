use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use unitary_euler::algebra::{gell_mann_basis, ComplexSquareMatrix};
use unitary_euler::euler::{range_catalog, AngleVector, RangeContext, RangeKind};
use unitary_euler::kernels::{
    haar_kernel_su, hurwitz_kernel, pure_state_kernel, truncated_haar_kernel, DirichletMode, DirichletSpec,
    FactorForm, KernelContext, ProductKernel,
};
use unitary_euler::numerics::{
    fs_check, integrate_factorized, integrate_monte_carlo, ChartKind, StateVectorChart, DEFAULT_STEP,
};
use unitary_euler::sampling::{
    sample_density_matrix, sample_pure_state, sample_su, SeededStream, DEFAULT_REJECTION_CAP,
};
use unitary_euler::verify::{run_suite, Suite};
use unitary_euler::volumes::parse_volume_expr;

#[macro_use]
mod output;

use output::{complex_pair, matrix_json, Csv, Format};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "unitary-euler", version, about = "Euler-angle parameterizations of SU(N), invariant measures and volumes")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact and floating-point volume of a group or coset, e.g. "SU(4)/SU(2)xSU(2)".
    Volume {
        #[arg(long)]
        coset: String,
    },
    /// Build a group element from an angle file.
    Element {
        /// `SU(n)` or `U(n)`.
        #[arg(long)]
        group: String,
        /// JSON angle vector, or a plain array of values in slot order (β last for U(n)).
        #[arg(long)]
        angles: PathBuf,
    },
    /// List the factors of an invariant-measure kernel.
    Kernel {
        #[arg(long, value_enum)]
        context: ContextArg,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = RangesArg::Covering)]
        ranges: RangesArg,
    },
    /// Integrate a kernel over its range box.
    Integrate {
        /// `<context>:<n>`, e.g. `pure-state:3`.
        #[arg(long)]
        kernel: String,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = RangesArg::Covering)]
        ranges: RangesArg,
        /// Monte Carlo sample count.
        #[arg(long)]
        samples: Option<usize>,
        /// Required for `--method mc`.
        #[arg(long)]
        seed: Option<u64>,
        /// Monte Carlo chunks; the estimate depends on (seed, samples, workers).
        #[arg(long, default_value_t = 4)]
        workers: usize,
    },
    /// Draw seeded samples as JSON lines (header first) or CSV.
    Sample {
        #[arg(long, value_enum)]
        what: WhatArg,
        /// Matrix size for `su` and `mixed`; state dimension for `pure`.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        /// Dirichlet exponent for `mixed`.
        #[arg(long, default_value_t = 1.0)]
        s: f64,
    },
    /// Run acceptance criteria; exits 1 if any fails.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
    /// Compare a numeric Fubini-Study density with the analytic kernel.
    Fscheck {
        #[arg(long, value_enum)]
        chart: ChartArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_STEP)]
        step: f64,
        /// Distance kept from every range boundary.
        #[arg(long, default_value_t = 0.02)]
        margin: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ContextArg {
    HaarSu,
    PureState,
    TruncatedHaar,
    Hurwitz,
}

#[derive(Clone, Copy, ValueEnum)]
enum RangesArg {
    Covering,
    Quotient,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Factorized,
    Mc,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhatArg {
    Su,
    Pure,
    Mixed,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Volumes,
    Measures,
    Sampling,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChartArg {
    Hurwitz,
    Euler,
}

/// Malformed input; exits with code 2.
#[derive(Debug)]
struct Malformed(String);

impl std::fmt::Display for Malformed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Malformed {}

/// Raised after output is printed when a verification fails.
#[derive(Debug)]
struct Failed;

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification failed")
    }
}

impl std::error::Error for Failed {}

fn malformed(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Malformed(msg.into()))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<Malformed>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<unitary_euler::Error>() {
            return if e.is_malformed_input() { 2 } else { 1 };
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if !err.is::<Failed>() {
                eprintln!("error: {err:#}");
            }
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let fmt = cli.format;
    match &cli.command {
        Command::Volume { coset } => volume(fmt, coset),
        Command::Element { group, angles } => element(fmt, group, angles),
        Command::Kernel { context, n, ranges } => kernel(fmt, *context, *n, *ranges),
        Command::Integrate {
            kernel,
            method,
            ranges,
            samples,
            seed,
            workers,
        } => integrate(fmt, kernel, *method, *ranges, *samples, *seed, *workers),
        Command::Sample { what, n, count, seed, s } => sample(fmt, *what, *n, *count, *seed, *s),
        Command::Verify { suite } => verify(fmt, *suite),
        Command::Fscheck {
            chart,
            n,
            points,
            seed,
            step,
            margin,
        } => fscheck(fmt, *chart, *n, *points, *seed, *step, *margin),
    }
}

fn volume(fmt: Format, text: &str) -> anyhow::Result<()> {
    let expr = parse_volume_expr(text)?;
    let v = expr.volume()?;
    let mut out = json!({ "schema": SCHEMA, "coset": text });
    if let (Value::Object(o), Value::Object(parts)) = (&mut out, v.to_json_value()) {
        o.extend(parts);
    }
    match fmt {
        Format::Json => output::print_json(&out),
        Format::Csv => {
            let mut csv = Csv::new(&["schema", "coset", "exact", "float"]);
            csv.row(&[SCHEMA.to_string(), text.to_string(), v.to_string(), output::float(v.to_f64())]);
            csv.finish();
        }
        Format::Pretty => out!("vol {text} = {v} ≈ {}", output::float(v.to_f64())),
    }
    Ok(())
}

fn parse_group(group: &str) -> anyhow::Result<(bool, usize)> {
    let g: String = group.chars().filter(|c| !c.is_whitespace()).collect();
    let (unitary, rest) = if let Some(r) = g.strip_prefix("SU(") {
        (false, r)
    } else if let Some(r) = g.strip_prefix("U(") {
        (true, r)
    } else {
        return Err(malformed(format!("group must be SU(n) or U(n), got {group:?}")));
    };
    let n = rest
        .strip_suffix(')')
        .and_then(|d| d.parse::<usize>().ok())
        .ok_or_else(|| malformed(format!("group must be SU(n) or U(n), got {group:?}")))?;
    Ok((unitary, n))
}

fn read_angles(path: &PathBuf, unitary: bool, n: usize) -> anyhow::Result<AngleVector> {
    let text = fs::read_to_string(path)
        .map_err(|e| malformed(format!("cannot read {}: {e}", path.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| malformed(format!("{} is not JSON: {e}", path.display())))?;
    if let Value::Array(items) = value {
        let values = items
            .iter()
            .map(|x| x.as_f64().ok_or_else(|| malformed("angle arrays must hold numbers")))
            .collect::<anyhow::Result<Vec<f64>>>()?;
        let template = range_catalog(n, RangeContext::SuFull, RangeKind::Covering)?;
        let (values, beta) = if unitary {
            match values.split_last() {
                Some((&b, rest)) => (rest.to_vec(), Some(b)),
                None => (values, None),
            }
        } else {
            (values, None)
        };
        Ok(template.with_values(&values, beta)?)
    } else {
        let angles = AngleVector::from_json(&text)?;
        if angles.n != n {
            return Err(malformed(format!("angle file is for n = {}, group has n = {n}", angles.n)));
        }
        Ok(angles)
    }
}

fn element(fmt: Format, group: &str, path: &PathBuf) -> anyhow::Result<()> {
    let (unitary, n) = parse_group(group)?;
    if unitary && n < 2 {
        return Err(unitary_euler::Error::InvalidDimension {
            got: n,
            reason: "U(N) is only parameterized for N >= 2".into(),
        }
        .into());
    }
    let angles = read_angles(path, unitary, n)?;
    let m: ComplexSquareMatrix = if unitary {
        let full = unitary_euler::euler::u_element(&gell_mann_basis(n + 1)?, &angles)?;
        full.leading_block(n)
    } else {
        unitary_euler::euler::su_element(&gell_mann_basis(n)?, &angles)?
    };
    let det = m.determinant();
    let det_error = if unitary { (det.norm() - 1.0).abs() } else { (det - 1.0).norm() };
    let out = json!({
        "schema": SCHEMA,
        "group": if unitary { format!("U({n})") } else { format!("SU({n})") },
        "n": n,
        "matrix": matrix_json(&m),
        "unitarity_error": m.unitarity_error(),
        "det": complex_pair(det),
        "det_error": det_error,
        "out_of_range": angles.out_of_range(),
    });
    match fmt {
        Format::Json => output::print_json(&out),
        Format::Csv => {
            let mut csv = Csv::new(&["row", "col", "re", "im"]);
            for i in 0..n {
                for j in 0..n {
                    let z = m.get(i, j);
                    csv.row(&[i.to_string(), j.to_string(), output::float(z.re), output::float(z.im)]);
                }
            }
            csv.finish();
        }
        Format::Pretty => {
            output::print_matrix(&m);
            out!("unitarity error {:.3e}, det = {:.15}{:+.15}i", m.unitarity_error(), det.re, det.im);
        }
    }
    Ok(())
}

fn build_kernel(context: ContextArg, n: usize) -> anyhow::Result<ProductKernel> {
    Ok(match context {
        ContextArg::HaarSu => haar_kernel_su(n)?,
        ContextArg::PureState => pure_state_kernel(n)?,
        ContextArg::TruncatedHaar => truncated_haar_kernel(n)?,
        ContextArg::Hurwitz => hurwitz_kernel(n)?,
    })
}

fn range_kind(r: RangesArg) -> RangeKind {
    match r {
        RangesArg::Covering => RangeKind::Covering,
        RangesArg::Quotient => RangeKind::Quotient,
    }
}

/// Kernel bound to the `ξ` of the requested ranges, plus those ranges.
fn kernel_with_ranges(
    context: ContextArg,
    n: usize,
    ranges: RangesArg,
) -> anyhow::Result<(ProductKernel, unitary_euler::euler::RangeTemplate)> {
    let k = build_kernel(context, n)?;
    let template = k.ranges(range_kind(ranges))?;
    let k = k.with_convention(&template.convention)?;
    Ok((k, template))
}

fn form_parts(form: FactorForm) -> (&'static str, u32) {
    match form {
        FactorForm::Sin2A => ("sin2a", 0),
        FactorForm::CosPowSin(p) => ("cospow-sin", p),
        FactorForm::CosSinPow(p) => ("cos-sinpow", p),
    }
}

fn context_name(c: KernelContext) -> Value {
    serde_json::to_value(c).expect("contexts serialize")
}

fn kernel(fmt: Format, context: ContextArg, n: usize, ranges: RangesArg) -> anyhow::Result<()> {
    let (k, template) = kernel_with_ranges(context, n, ranges)?;
    match fmt {
        Format::Json => {
            let mut out = serde_json::to_value(&k)?;
            out["schema"] = json!(SCHEMA);
            out["ranges"] = serde_json::to_value(&template.ranges)?;
            out["range_kind"] = serde_json::to_value(template.convention.kind)?;
            output::print_json(&out);
        }
        Format::Csv => {
            let mut csv = Csv::new(&["index", "form", "p", "lo", "hi"]);
            for r in &template.ranges {
                let (form, p) = k.factor_at(r.index).map_or(("one", 0), |f| form_parts(f.form));
                csv.row(&[r.index.to_string(), form.into(), p.to_string(), output::float(r.lo), output::float(r.hi)]);
            }
            csv.finish();
        }
        Format::Pretty => {
            out!("{} kernel, n = {}, xi = {}, {} slots", context_name(k.context), k.n, k.xi, k.dims);
            for r in &template.ranges {
                let (form, p) = k.factor_at(r.index).map_or(("one", 0), |f| form_parts(f.form));
                out!("  a{:<3} {:<11} p={:<3} [{:.6}, {:.6}]", r.index, form, p, r.lo, r.hi);
            }
        }
    }
    Ok(())
}

fn parse_kernel_spec(spec: &str) -> anyhow::Result<(ContextArg, usize)> {
    let (name, n) = spec
        .rsplit_once(':')
        .ok_or_else(|| malformed(format!("kernel spec must be <context>:<n>, got {spec:?}")))?;
    let context =
        ContextArg::from_str(name, false).map_err(|_| malformed(format!("unknown kernel context {name:?}")))?;
    let n = n
        .parse()
        .map_err(|_| malformed(format!("kernel dimension must be an integer, got {n:?}")))?;
    Ok((context, n))
}

#[allow(clippy::too_many_arguments)]
fn integrate(
    fmt: Format,
    spec: &str,
    method: MethodArg,
    ranges: RangesArg,
    samples: Option<usize>,
    seed: Option<u64>,
    workers: usize,
) -> anyhow::Result<()> {
    let (context, n) = parse_kernel_spec(spec)?;
    let (k, template) = kernel_with_ranges(context, n, ranges)?;
    let result = match method {
        MethodArg::Factorized => integrate_factorized(&k, &template)?,
        MethodArg::Mc => {
            let seed = seed.ok_or_else(|| malformed("--method mc requires --seed"))?;
            let samples = samples.ok_or_else(|| malformed("--method mc requires --samples"))?;
            integrate_monte_carlo(&k, &template, samples, seed, workers)?
        }
    };
    let mut out = serde_json::to_value(&result)?;
    out["schema"] = json!(SCHEMA);
    out["kernel"] = json!(spec);
    out["ranges"] = serde_json::to_value(template.convention.kind)?;
    match fmt {
        Format::Json => output::print_json(&out),
        Format::Csv => {
            let mut csv = Csv::new(&["schema", "kernel", "method", "value", "abs_error_estimate", "n_evals", "seed"]);
            csv.row(&[
                SCHEMA.to_string(),
                spec.to_string(),
                out["method"].as_str().unwrap_or_default().to_string(),
                output::float(result.value),
                output::float(result.abs_error_estimate),
                result.n_evals.to_string(),
                result.seed.map(|s| s.to_string()).unwrap_or_default(),
            ]);
            csv.finish();
        }
        Format::Pretty => out!(
            "{spec} ({}): {} ± {:.3e} [{} evaluations]",
            out["method"].as_str().unwrap_or_default(),
            output::float(result.value),
            result.abs_error_estimate,
            result.n_evals
        ),
    }
    Ok(())
}

fn sample(fmt: Format, what: WhatArg, n: usize, count: usize, seed: u64, s: f64) -> anyhow::Result<()> {
    let spec = match what {
        WhatArg::Mixed => Some(DirichletSpec::new(n, s, DirichletMode::NumericallyNormalized)?),
        _ => None,
    };
    // Fail on bad dimensions before anything is printed.
    let mut probe = SeededStream::new(seed, 0);
    match what {
        WhatArg::Su => drop(sample_su(n, &mut probe)?),
        WhatArg::Pure => drop(sample_pure_state(n, &mut probe)?),
        WhatArg::Mixed => {}
    }
    let mut stream = SeededStream::new(seed, 0);
    let (name, mode) = match what {
        WhatArg::Su => ("su", "euler-haar"),
        WhatArg::Pure => ("pure", "euler-fubini-study"),
        WhatArg::Mixed => ("mixed", "dirichlet-numerically-normalized"),
    };
    let mut header = json!({
        "schema": SCHEMA,
        "record": "header",
        "what": name,
        "n": n,
        "count": count,
        "seed": seed,
        "mode": mode,
    });
    if spec.is_some() {
        header["s"] = json!(s);
    }
    let mut csv = (fmt == Format::Csv).then(|| Csv::new(&["sample", "field", "row", "col", "re", "im"]));
    let cell = |csv: &mut Csv, i: usize, field: &str, r: usize, c: usize, z: Complex64| {
        csv.row(&[i.to_string(), field.into(), r.to_string(), c.to_string(), output::float(z.re), output::float(z.im)]);
    };
    if csv.is_none() {
        output::print_line(&header, fmt);
    }
    for i in 0..count {
        match what {
            WhatArg::Su => {
                let u = sample_su(n, &mut stream)?;
                match csv.as_mut() {
                    Some(csv) => output::matrix_cells(&u, |r, c, z| cell(csv, i, "u", r, c, z)),
                    None => output::print_line(&json!({ "sample": i, "matrix": matrix_json(&u) }), fmt),
                }
            }
            WhatArg::Pure => {
                let psi = sample_pure_state(n, &mut stream)?;
                match csv.as_mut() {
                    Some(csv) => psi.iter().enumerate().for_each(|(r, &z)| cell(csv, i, "psi", r, 0, z)),
                    None => {
                        let state: Vec<Value> = psi.iter().map(|&z| complex_pair(z)).collect();
                        output::print_line(&json!({ "sample": i, "state": state }), fmt);
                    }
                }
            }
            WhatArg::Mixed => {
                let spec = spec.as_ref().expect("mixed has a spec");
                let d = sample_density_matrix(n, spec, &mut stream, DEFAULT_REJECTION_CAP)?;
                match csv.as_mut() {
                    Some(csv) => {
                        for (r, &l) in d.eigenvalues.iter().enumerate() {
                            cell(csv, i, "lambda", r, r, Complex64::new(l, 0.0));
                        }
                        output::matrix_cells(&d.rho, |r, c, z| cell(csv, i, "rho", r, c, z));
                    }
                    None => output::print_line(
                        &json!({
                            "sample": i,
                            "eigenvalues": d.eigenvalues,
                            "rho": matrix_json(&d.rho),
                            "defect": d.defect(),
                        }),
                        fmt,
                    ),
                }
            }
        }
    }
    if let Some(csv) = csv {
        csv.finish();
    }
    Ok(())
}

fn verify(fmt: Format, suite: SuiteArg) -> anyhow::Result<()> {
    let suite = match suite {
        SuiteArg::Volumes => Suite::Volumes,
        SuiteArg::Measures => Suite::Measures,
        SuiteArg::Sampling => Suite::Sampling,
        SuiteArg::All => Suite::All,
    };
    let reports = run_suite(suite)?;
    let pass = reports.iter().all(|r| r.pass);
    match fmt {
        Format::Json => output::print_json(&json!({
            "schema": SCHEMA,
            "suite": suite,
            "pass": pass,
            "criteria": reports,
        })),
        Format::Csv => {
            let mut csv = Csv::new(&["id", "title", "pass", "elapsed_ms"]);
            for r in &reports {
                csv.row(&[r.id.to_string(), r.title.clone(), r.pass.to_string(), r.elapsed_ms.to_string()]);
            }
            csv.finish();
        }
        Format::Pretty => {
            for r in &reports {
                out!("{}", r.summary_line());
                for d in &r.details {
                    out!("    {d}");
                }
            }
        }
    }
    if pass {
        Ok(())
    } else {
        Err(anyhow!(Failed))
    }
}

fn fscheck(fmt: Format, chart: ChartArg, n: usize, points: usize, seed: u64, step: f64, margin: f64) -> anyhow::Result<()> {
    let kind = match chart {
        ChartArg::Hurwitz => ChartKind::Hurwitz,
        ChartArg::Euler => ChartKind::Euler,
    };
    let chart = StateVectorChart::new(n, kind)?;
    let report = fs_check(&chart, points, seed, step, margin).context("Fubini-Study check")?;
    let mut out = serde_json::to_value(&report)?;
    out["schema"] = json!(SCHEMA);
    out["seed"] = json!(seed);
    match fmt {
        Format::Json => output::print_json(&out),
        Format::Csv => {
            let mut csv = Csv::new(&["schema", "chart", "n", "points", "seed", "step", "max_rel_error"]);
            csv.row(&[
                SCHEMA.to_string(),
                out["chart"].as_str().unwrap_or_default().to_string(),
                n.to_string(),
                points.to_string(),
                seed.to_string(),
                output::float(step),
                output::float(report.max_rel_error),
            ]);
            csv.finish();
        }
        Format::Pretty => out!(
            "{} chart, n = {n}: max relative error {:.3e} over {points} points (h = {step:e})",
            out["chart"].as_str().unwrap_or_default(),
            report.max_rel_error
        ),
    }
    Ok(())
}
