use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use super::dataset::{parse_monomial, Dataset, Format};
use super::fixtures::{fixture, fixture_names, resolve_dataset, FIXTURE_DIR_ENV};
use crate::boxcert::{box_pd_certificate, BoxCertOptions};
use crate::error::{Error, Result};
use crate::exactnum::{
    continued_fraction, fmt_rat, isolate_real_roots, parse_number, to_f64, Ival, Rat,
};
use crate::gram::{
    collinear_bezout_bound, collinear_bezout_bound_ival, curves_on_support, degree_degenerate_ival,
    existence_bound, ival_strings, min_degree_curve, unit_sphere_min, Direction, Verdict,
};
use crate::polybasis::{even_support, graded_support, parse_poly, Poly, Support};
use crate::segrecon::{
    attach_radii, infeasibility_certificate, passes_all, reconstruct_integer, residual_bound,
    uniqueness_radius,
};
use crate::sparse::{
    min_residual_table, random_quadruples, sparse_type_scan, sparsest_curves, top_block,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "algcurve",
    version,
    about = "Exact algebraic curves through points, boxes and segments"
)]
pub struct Cli {
    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Target interval width (relative window widening for `reconstruct`).
    #[arg(long, global = true)]
    pub tolerance: Option<String>,
    /// Directory overriding the built-in fixtures.
    #[arg(long, global = true, env = FIXTURE_DIR_ENV)]
    pub fixture_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BasisKind {
    Even,
    Graded,
}

impl BasisKind {
    fn support(self, d: u32) -> Support {
        match self {
            BasisKind::Even => even_support(d),
            BasisKind::Graded => graded_support(d),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Smallest degree of a curve through exact points, or degree bounds for enclosed points.
    Mindeg {
        data: String,
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Interpolating curves and the unit-sphere residual minimum on a support.
    Fit {
        data: String,
        #[arg(long, conflicts_with = "support")]
        degree: Option<u32>,
        /// Comma-separated monomials, e.g. "y^2,x^3".
        #[arg(long)]
        support: Option<String>,
    },
    /// Certify that no curve of the given degree meets every box.
    CertifyBox {
        data: String,
        #[arg(long)]
        degree: u32,
        /// 1-based box indices to use instead of the automatic search.
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<usize>>,
        #[arg(long, default_value_t = 12)]
        max_depth: u32,
        #[arg(long, default_value_t = 16)]
        random_subsets: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sparse-type scan of one point group.
    SparseScan {
        data: String,
        /// Group name from the dataset (G1, G2, ...) or 1-based indices "1,2,3,4".
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 3)]
        degree: u32,
    },
    /// Sparse types of random 4-point groups against a reference group.
    SparseMc {
        data: String,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "G1")]
        reference: String,
    },
    /// Curves with the most zero coefficients through exact points.
    Sparsest {
        data: String,
        #[arg(long)]
        degree: u32,
    },
    /// Minimum residual over q-term sub-bases.
    ResidualTable {
        data: String,
        #[arg(long, value_enum, default_value_t = BasisKind::Even)]
        basis: BasisKind,
        #[arg(long, default_value_t = 2)]
        dmin: u32,
        #[arg(long)]
        dmax: u32,
        #[arg(long, default_value_t = 1)]
        qmin: usize,
        #[arg(long)]
        qmax: Option<usize>,
    },
    /// Exact crossing checks and residual bounds for vertical segments.
    SegmentsCheck {
        data: String,
        #[arg(long)]
        curve: Option<String>,
        /// Also bound residuals and try the full-basis infeasibility certificate.
        #[arg(long)]
        bound_degree: Option<u32>,
        #[arg(long, value_enum, default_value_t = BasisKind::Even)]
        basis: BasisKind,
    },
    /// Integer curve from coefficient windows.
    Reconstruct { data: String },
    /// Uniqueness radius of an integer curve against a fitted direction.
    UniqRadius {
        data: String,
        #[arg(long)]
        curve: String,
        /// Monomial used as the ratio denominator (default: largest coefficient).
        #[arg(long)]
        reference: Option<String>,
    },
    /// CSV samples of the real curve along vertical lines.
    SampleCurve {
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 512)]
        n: usize,
        #[arg(long, default_value = "-2,2", allow_hyphen_values = true)]
        x_range: String,
        #[arg(long, default_value = "-2,2", allow_hyphen_values = true)]
        y_range: String,
        #[arg(long, default_value = "x,y")]
        vars: String,
    },
    /// Built-in datasets.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum FixturesAction {
    List,
    Emit {
        name: String,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
    },
}

/// Command output: text for standard output and the exit code.
struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn json(v: Value, code: i32) -> Self {
        let mut text = serde_json::to_string_pretty(&v).expect("json value");
        text.push('\n');
        Outcome { text, code }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Invalid(e.to_string()))
            .and_then(|pool| pool.install(|| execute(&cli))),
        None => execute(&cli),
    };
    match result {
        Ok(o) => {
            if out.write_all(o.text.as_bytes()).is_err() {
                return EXIT_ERROR;
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn tolerance(cli: &Cli, default: Rat) -> Result<Rat> {
    match &cli.tolerance {
        None => Ok(default),
        Some(t) => {
            let r = parse_number(t)?;
            if r <= Rat::from_integer(0.into()) {
                return Err(Error::Invalid("tolerance must be positive".into()));
            }
            Ok(r)
        }
    }
}

fn pow10(k: u32) -> Rat {
    Rat::new(1.into(), num_bigint::BigInt::from(10).pow(k))
}

fn ival_json(i: &Ival) -> Value {
    json!({ "enclosure": ival_strings(i), "approx": to_f64(&i.mid()) })
}

fn parse_support(text: &str, vars: (&str, &str)) -> Result<Support> {
    for (prefix, kind) in [("graded:", BasisKind::Graded), ("even:", BasisKind::Even)] {
        if let Some(d) = text.strip_prefix(prefix) {
            let d: u32 = d
                .parse()
                .map_err(|_| Error::Invalid(format!("bad degree in {text:?}")))?;
            return Ok(kind.support(d));
        }
    }
    let monos = text
        .split(',')
        .map(|m| parse_monomial(m.trim(), vars, "--support"))
        .collect::<Result<Vec<_>>>()?;
    Support::new(monos)
}

fn direction_json(d: &Direction, support: &Support, vars: (&str, &str)) -> Value {
    let names: Vec<String> = support.monomials().iter().map(|m| m.render(vars)).collect();
    match d {
        Direction::Exact(v) => json!({
            "kind": "exact",
            "support": names,
            "coefficients": v.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        }),
        Direction::Enclosed { coeffs, pivot, .. } => json!({
            "kind": "enclosed",
            "support": names,
            "pivot": names[*pivot],
            "coefficients": coeffs.iter().map(ival_json).collect::<Vec<_>>(),
        }),
        Direction::Ambiguous => json!({ "kind": "ambiguous" }),
    }
}

fn group_indices(ds: &Dataset, spec: &str) -> Result<Vec<usize>> {
    let n = ds.len();
    let idx: Vec<usize> = match spec.strip_prefix(['G', 'g']) {
        Some(k) if !spec.contains(',') => {
            let k: usize = k
                .parse()
                .map_err(|_| Error::Invalid(format!("bad group {spec:?}")))?;
            ds.groups()
                .get(k.wrapping_sub(1))
                .cloned()
                .ok_or_else(|| Error::Invalid(format!("dataset has no group {spec}")))?
        }
        _ => spec
            .split(',')
            .map(|s| match s.trim().parse::<usize>() {
                Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
                _ => Err(Error::Invalid(format!(
                    "bad index {s:?} in group (1..={n})"
                ))),
            })
            .collect::<Result<_>>()?,
    };
    Ok(idx)
}

fn range(text: &str) -> Result<(Rat, Rat)> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| Error::Invalid(format!("range {text:?} must be lo,hi")))?;
    let (a, b) = (parse_number(a)?, parse_number(b)?);
    if a >= b {
        return Err(Error::Invalid(format!("empty range {text:?}")));
    }
    Ok((a, b))
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let load = |spec: &str| resolve_dataset(spec, cli.fixture_dir.as_deref());
    match &cli.command {
        Command::Mindeg { data, max_degree } => mindeg(&load(data)?, *max_degree),
        Command::Fit {
            data,
            degree,
            support,
        } => {
            let ds = load(data)?;
            let s = match (degree, support) {
                (Some(d), _) => graded_support(*d),
                (None, Some(s)) => parse_support(s, ds.vars())?,
                (None, None) => {
                    return Err(Error::Invalid("fit needs --degree or --support".into()))
                }
            };
            fit(&ds, &s)
        }
        Command::CertifyBox {
            data,
            degree,
            subset,
            max_depth,
            random_subsets,
            seed,
        } => {
            let ds = load(data)?;
            let boxes = ds.boxes()?;
            let opts = BoxCertOptions {
                max_depth: *max_depth,
                random_subsets: *random_subsets,
                seed: *seed,
                radius_width: tolerance(cli, crate::boxcert::default_radius_width())?,
            };
            let subset: Option<Vec<usize>> = subset
                .as_ref()
                .map(|s| {
                    s.iter()
                        .map(|&i| {
                            i.checked_sub(1)
                                .ok_or_else(|| Error::Invalid("box indices are 1-based".into()))
                        })
                        .collect()
                })
                .transpose()?;
            let cert = box_pd_certificate(&boxes, *degree, subset.as_deref(), &opts)?;
            let mut v = cert.to_json();
            v["subset"] = json!(cert.subset.iter().map(|i| i + 1).collect::<Vec<_>>());
            v["lower_bound"] = json!(cert.is_proved().then_some(degree + 1));
            v["dataset"] = json!(ds.metadata.name);
            Ok(Outcome::json(
                v,
                if cert.is_proved() {
                    EXIT_OK
                } else {
                    EXIT_UNKNOWN
                },
            ))
        }
        Command::SparseScan {
            data,
            group,
            degree,
        } => {
            let ds = load(data)?;
            let pts = ds.exact_points()?;
            let idx = group_indices(&ds, group)?;
            let g: Vec<_> = idx.iter().map(|&i| pts[i].clone()).collect();
            let report = sparse_type_scan(&g, *degree, &top_block(*degree))?;
            let mut v = report.to_json(ds.vars());
            let labels = ds.labels();
            v["group"] = json!(idx.iter().map(|&i| labels[i].clone()).collect::<Vec<_>>());
            v["support"] = json!(report
                .support
                .monomials()
                .iter()
                .map(|m| m.render(ds.vars()))
                .collect::<Vec<_>>());
            Ok(Outcome::json(v, EXIT_OK))
        }
        Command::SparseMc {
            data,
            trials,
            seed,
            reference,
        } => {
            let ds = load(data)?;
            let pts = ds.exact_points()?;
            let idx = group_indices(&ds, reference)?;
            let g: Vec<_> = idx.iter().map(|&i| pts[i].clone()).collect();
            let chi = sparse_type_scan(&g, 3, &top_block(3))?.chi();
            let report = random_quadruples(&pts, *trials, *seed, &chi)?;
            let mut v = serde_json::to_value(&report)?;
            v["reference"] = json!(chi.iter().map(|t| t.render(ds.vars())).collect::<Vec<_>>());
            v["divergent_groups"] = json!(report
                .divergent_groups
                .iter()
                .map(|g| g.iter().map(|i| i + 1).collect::<Vec<_>>())
                .collect::<Vec<_>>());
            Ok(Outcome::json(v, EXIT_OK))
        }
        Command::Sparsest { data, degree } => {
            let ds = load(data)?;
            let found = sparsest_curves(&ds.exact_points()?, *degree)?;
            let v = json!({
                "degree": degree,
                "zero_count": found.first().map(|c| c.zero_set.len()),
                "curves": found.iter().map(|c| json!({
                    "zero_set": c.zero_set,
                    "curve": c.curve.render(ds.vars()),
                })).collect::<Vec<_>>(),
            });
            Ok(Outcome::json(v, EXIT_OK))
        }
        Command::ResidualTable {
            data,
            basis,
            dmin,
            dmax,
            qmin,
            qmax,
        } => {
            let ds = load(data)?;
            let pts = ds.exact_points()?;
            let tables = (*dmin..=*dmax)
                .map(|d| {
                    let s = basis.support(d);
                    let hi = qmax.unwrap_or(s.len()).min(s.len());
                    let t = min_residual_table(&pts, &s, (*qmin).max(1)..=hi)?;
                    let mut v = t.to_json(ds.vars());
                    v["d"] = json!(d);
                    Ok(v)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Outcome::json(
                json!({ "dataset": ds.metadata.name, "tables": tables }),
                EXIT_OK,
            ))
        }
        Command::SegmentsCheck {
            data,
            curve,
            bound_degree,
            basis,
        } => {
            let ds = load(data)?;
            segments_check(&ds, curve.as_deref(), *bound_degree, *basis)
        }
        Command::Reconstruct { data } => {
            let ds = load(data)?;
            let (support, windows) = ds.coefficients()?;
            let report = reconstruct_integer(&windows, &support, &tolerance(cli, pow10(7))?)?;
            Ok(Outcome::json(report.to_json(ds.vars()), EXIT_OK))
        }
        Command::UniqRadius {
            data,
            curve,
            reference,
        } => {
            let ds = load(data)?;
            uniq_radius(&ds, curve, reference.as_deref())
        }
        Command::SampleCurve {
            curve,
            n,
            x_range,
            y_range,
            vars,
        } => {
            let (vx, vy) = vars
                .split_once(',')
                .ok_or_else(|| Error::Invalid("--vars must be a,b".into()))?;
            let f = parse_poly(curve, &[(vx.trim(), vy.trim())])?;
            sample_curve(
                &f,
                *n,
                range(x_range)?,
                range(y_range)?,
                &tolerance(cli, pow10(12))?,
            )
        }
        Command::Fixtures { action } => match action {
            FixturesAction::List => {
                let list: Vec<Value> = fixture_names()
                    .map(|n| {
                        let d = fixture(n, cli.fixture_dir.as_deref())?;
                        Ok(json!({ "name": n, "kind": d.kind().to_string(), "entries": d.len(), "source": d.metadata.source }))
                    })
                    .collect::<Result<_>>()?;
                Ok(Outcome::json(json!(list), EXIT_OK))
            }
            FixturesAction::Emit { name, format } => {
                let d = fixture(name, cli.fixture_dir.as_deref())?;
                Ok(Outcome {
                    text: d.emit((*format).into()),
                    code: EXIT_OK,
                })
            }
        },
    }
}

fn mindeg(ds: &Dataset, max_degree: Option<u32>) -> Result<Outcome> {
    if let Ok(pts) = ds.exact_points() {
        let m = min_degree_curve(&pts, max_degree)?;
        let v = json!({
            "dataset": ds.metadata.name,
            "points": pts.len(),
            "d": m.d_star,
            "curves": m.curves.iter().map(|c| c.render(ds.vars())).collect::<Vec<_>>(),
            "bezout_lower_bound": collinear_bezout_bound(&pts),
        });
        return Ok(Outcome::json(v, EXIT_OK));
    }
    let pts = ds.ival_points()?;
    let limit = max_degree.unwrap_or_else(|| existence_bound(pts.len()) + 1);
    let mut degrees = Vec::new();
    let mut lower = 1;
    for d in 1..=limit {
        let r = degree_degenerate_ival(&pts, d)?;
        degrees.push(json!({ "d": d, "verdict": r.degenerate, "det": ival_json(&r.det) }));
        if r.degenerate != Verdict::ProvedNo {
            break;
        }
        lower = d + 1;
    }
    let v = json!({
        "dataset": ds.metadata.name,
        "points": pts.len(),
        "degrees": degrees,
        "lower_bound": lower,
        "bezout_lower_bound": collinear_bezout_bound_ival(&pts),
    });
    Ok(Outcome::json(v, EXIT_OK))
}

fn fit(ds: &Dataset, s: &Support) -> Result<Outcome> {
    let pts = ds.exact_points()?;
    let vars = ds.vars();
    let curves = curves_on_support(&pts, s)?;
    let usm = unit_sphere_min(&pts, s)?;
    let quadratic = usm.quadratic.as_ref().map(|q| {
        let cf = continued_fraction(&q.ratio, 12);
        json!({
            "alpha": fmt_rat(&q.alpha),
            "beta": fmt_rat(&q.beta),
            "gamma": fmt_rat(&q.gamma),
            "ratio": fmt_rat(&q.ratio),
            "ratio_approx": to_f64(&q.ratio),
            "continued_fraction": cf.quotients.iter().map(|k| k.to_string()).collect::<Vec<_>>(),
            "convergents": cf.convergents.iter().map(fmt_rat).collect::<Vec<_>>(),
        })
    });
    let v = json!({
        "dataset": ds.metadata.name,
        "support": s.monomials().iter().map(|m| m.render(vars)).collect::<Vec<_>>(),
        "curves": curves.iter().map(|c| c.render(vars)).collect::<Vec<_>>(),
        "residual": ival_json(&usm.residual),
        "direction": direction_json(&usm.direction, s, vars),
        "quadratic": quadratic,
    });
    Ok(Outcome::json(v, EXIT_OK))
}

fn segments_check(
    ds: &Dataset,
    curve: Option<&str>,
    bound_degree: Option<u32>,
    basis: BasisKind,
) -> Result<Outcome> {
    if curve.is_none() && bound_degree.is_none() {
        return Err(Error::Invalid(
            "segments-check needs --curve or --bound-degree".into(),
        ));
    }
    let segs = ds.segments()?;
    let labels = ds.labels();
    let mut v = json!({ "dataset": ds.metadata.name, "segments": segs.len() });
    let mut code = EXIT_OK;
    if let Some(text) = curve {
        let f = parse_poly(text, &[ds.vars()])?;
        let passes = passes_all(&f, &segs);
        v["curve"] = json!(f.render(ds.vars()));
        v["all_pass"] = json!(passes.iter().all(|&p| p));
        v["results"] = json!(labels
            .iter()
            .zip(&passes)
            .map(|(l, p)| json!({ "label": l, "passes": p }))
            .collect::<Vec<_>>());
    }
    if let Some(d) = bound_degree {
        let s = basis.support(d);
        let bound = residual_bound(&segs, &s)?;
        let cert = infeasibility_certificate(&segs, &s, s.len())?;
        if !cert.infeasible {
            code = EXIT_UNKNOWN;
        }
        v["bound"] = json!({
            "degree": d,
            "basis": s.monomials().iter().map(|m| m.render(ds.vars())).collect::<Vec<_>>(),
            "residual_bound": fmt_rat(&bound),
            "residual_bound_approx": to_f64(&bound),
            "certificate": cert.to_json(),
        });
    }
    Ok(Outcome::json(v, code))
}

fn uniq_radius(ds: &Dataset, curve: &str, reference: Option<&str>) -> Result<Outcome> {
    let pts = ds.exact_points()?;
    let vars = ds.vars();
    let f = parse_poly(curve, &[vars])?;
    let accepted = crate::polybasis::normalize_integer(f.coeffs(), f.support())?;
    let support = accepted.support().clone();
    let usm = unit_sphere_min(&pts, &support)?;
    let coeffs = usm.direction.maxnorm_coeffs().ok_or_else(|| {
        Error::Invalid("smallest eigenvalue is repeated; direction not unique".into())
    })?;
    let ref_idx = match reference {
        Some(m) => {
            let m = parse_monomial(m, vars, "--reference")?;
            support
                .index_of(&m)
                .ok_or_else(|| Error::Invalid("reference monomial not in the curve".into()))?
        }
        None => (0..accepted.coeffs().len())
            .max_by_key(|&i| accepted.coeffs()[i].magnitude().clone())
            .expect("nonempty"),
    };
    let denom = &coeffs[ref_idx];
    let ratios: Vec<Ival> = coeffs
        .iter()
        .map(|c| {
            c.checked_div(denom)
                .ok_or_else(|| Error::Invalid("reference coefficient encloses zero".into()))
        })
        .collect::<Result<_>>()?;
    let radii = uniqueness_radius(&ratios, &accepted, ref_idx)?;
    let mut report = reconstruct_report_stub(&accepted, ratios, ref_idx);
    attach_radii(&mut report, radii);
    let mut v = report.to_json(vars);
    v["reference"] = json!(support.monomials()[ref_idx].render(vars));
    v["residual"] = ival_json(&usm.residual);
    v["dataset"] = json!(ds.metadata.name);
    Ok(Outcome::json(v, EXIT_OK))
}

fn reconstruct_report_stub(
    accepted: &Poly<crate::exactnum::Int>,
    observed: Vec<Ival>,
    scale_index: usize,
) -> crate::segrecon::ReconstructionReport {
    crate::segrecon::ReconstructionReport {
        scaled: observed.clone(),
        observed,
        scale_index,
        accepted: accepted.clone(),
        per_coefficient: Vec::new(),
        uniqueness_radius: None,
        guaranteed_radius: None,
    }
}

fn sample_curve(
    f: &Poly<Rat>,
    n: usize,
    xr: (Rat, Rat),
    yr: (Rat, Rat),
    width: &Rat,
) -> Result<Outcome> {
    if n < 2 {
        return Err(Error::Invalid("--n must be at least 2".into()));
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Invalid(e.to_string());
    w.write_record(["x", "y"]).map_err(csv_err)?;
    let steps = Rat::from_integer((n - 1).into());
    let window = Ival::new(yr.0.clone(), yr.1.clone());
    for i in 0..n {
        let x = &xr.0 + (&xr.1 - &xr.0) * Rat::from_integer(i.into()) / &steps;
        let u = f.restrict_x(&x);
        if u.degree().unwrap_or(0) == 0 {
            continue;
        }
        for r in isolate_real_roots(&u, &window, width)? {
            w.write_record([
                format!("{:.12e}", to_f64(&x)),
                format!("{:.12e}", to_f64(&r.mid())),
            ])
            .map_err(csv_err)?;
        }
    }
    let text = String::from_utf8(w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?)
        .expect("utf8 csv");
    Ok(Outcome {
        text,
        code: EXIT_OK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["algcurve"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn mindeg_on_circle() {
        let (code, out, _) = call(&["mindeg", "fixtures:circle6"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["d"], 2);
        assert_eq!(v["curves"][0], "1 - x^2 - y^2");
    }

    #[test]
    fn errors_exit_one() {
        assert_eq!(call(&["no-such-command"]).0, 1);
        assert_eq!(call(&["mindeg", "fixtures:circle6", "--bogus"]).0, 1);
        assert_eq!(call(&["mindeg", "fixtures:missing"]).0, 1);
        assert_eq!(
            call(&["segments-check", "fixtures:circle6", "--curve", "x"]).0,
            1
        );
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn sample_curve_on_circle() {
        let (code, out, _) = call(&[
            "sample-curve",
            "--curve",
            "x^2+y^2-1",
            "--n",
            "5",
            "--x-range",
            "-1/2,1/2",
        ]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "x,y");
        assert_eq!(lines.len(), 11);
    }

    #[test]
    fn support_parsing() {
        let s = parse_support("p^2, r^3", ("r", "p")).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(
            parse_support("even:2", ("x", "y")).unwrap(),
            even_support(2)
        );
        assert!(parse_support("2*x", ("x", "y")).is_err());
    }
}
