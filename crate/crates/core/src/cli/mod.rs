//! Command-line surface: catalog listings, tables, graphs and the
//! reproduction harness.

pub mod export;
pub mod golden;
pub mod reproduce;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::catalog::{self, CatalogError, Figure, GroupSpec, Grading};
use crate::chars::{self, CharError};
use crate::dyson::{self, DysonError};
use crate::grp::GroupError;
use crate::{kleinian, mckay};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown name: {0}")]
    Unknown(String),
    #[error("{0}")]
    Cap(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("{0}")]
    Diff(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Diff(_) => 1,
            CliError::Unknown(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Internal(_) | CliError::Io(_) => 4,
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::TooLarge { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::UnknownName(s) => CliError::Unknown(s),
            CatalogError::InvalidParameter(s) => CliError::Unknown(s),
            CatalogError::Group(g) => g.into(),
            CatalogError::Integrity(s) => CliError::Internal(s),
        }
    }
}

impl From<CharError> for CliError {
    fn from(e: CharError) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<DysonError> for CliError {
    fn from(e: DysonError) -> Self {
        match e {
            DysonError::Group(g) => g.into(),
            e => CliError::Internal(e.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "pin3", version, about = "Finite subgroups of O(3), SU(2) and Pin±(3): characters, McKay graphs, Dyson types")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Catalog groups, axial families at the given n.
    ListGroups {
        #[arg(long, default_value_t = 2)]
        n: u32,
    },
    /// Index-2 gradings, axial ones at the given n.
    ListGradings {
        #[arg(long, default_value_t = 2)]
        n: u32,
    },
    /// Build a group, e.g. `BT_24`, `BD_4n:n=3`, `B-2T_48`.
    Build { target: String },
    Chartable { target: String },
    Mckay { target: String },
    /// Indicators of a grading `G<H`, or of every catalog grading of a group.
    Indicators { target: String },
    /// McKay graph of a grading decorated with Dyson types.
    Decorate { target: String },
    /// Verify the containment edges of a figure (fig1, fig2, fig3, fig7, fig8).
    Containments {
        #[arg(long)]
        figure: String,
        /// Values of n for axial edges; defaults to 2..6.
        #[arg(long, value_delimiter = ',')]
        n: Vec<u32>,
    },
    /// Invariants and relation for the binary dihedral group of order 4n.
    Kleinian {
        #[arg(long)]
        n: u32,
    },
    /// Recompute a table or figure (T3 … F10, or `all`) and diff it against reference data.
    Reproduce {
        target: String,
        /// Values of n for axial families.
        #[arg(long, value_delimiter = ',')]
        n: Vec<u32>,
    },
}

/// Parses arguments, runs, and returns the process exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run(&cfg, &mut stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = stdout.flush();
            let msg = e.to_string();
            eprintln!("error: {}", msg.lines().next().unwrap_or(""));
            e.exit_code()
        }
    }
}

/// Runs one command, writing to `--out` if given and to `out` otherwise.
/// Output is written before a reproduce diff is reported as an error.
pub fn run(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let (text, result) = execute(cfg);
    let text = text?;
    match &cfg.out {
        Some(p) => fs::write(p, text.as_bytes())?,
        None => out.write_all(text.as_bytes())?,
    }
    result
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn no_dot(what: &str) -> CliError {
    CliError::Unknown(format!("format dot is not available for {what}"))
}

fn execute(cfg: &RunConfig) -> (Result<String, CliError>, Result<(), CliError>) {
    match &cfg.command {
        Command::Reproduce { target, n } => {
            let ns = (!n.is_empty()).then_some(n.as_slice());
            match reproduce_all(target, ns, cfg.format) {
                Ok((text, failed)) => {
                    let result = if failed.is_empty() {
                        Ok(())
                    } else {
                        Err(CliError::Diff(format!("reproduce failed: {}", failed.join(", "))))
                    };
                    (Ok(text), result)
                }
                Err(e) => (Err(e), Ok(())),
            }
        }
        _ => (render(cfg), Ok(())),
    }
}

fn reproduce_all(target: &str, ns: Option<&[u32]>, format: Format) -> Result<(String, Vec<String>), CliError> {
    let ids: Vec<&str> = if target.eq_ignore_ascii_case("all") {
        reproduce::IDS.to_vec()
    } else {
        vec![reproduce::normalize_id(target)
            .ok_or_else(|| CliError::Unknown(format!("reproduce target {target:?}")))?]
    };
    if format == Format::Dot {
        return Err(no_dot("reproduce"));
    }
    let reports = ids
        .iter()
        .map(|id| reproduce::reproduce(id, ns))
        .collect::<Result<Vec<_>, _>>()?;
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.id.clone()).collect();
    let text = match format {
        Format::Json => pretty(&json!(reports
            .iter()
            .map(|r| json!({
                "id": r.id,
                "title": r.title,
                "passed": r.passed(),
                "lines": r.lines,
                "deviations": r.deviations,
                "diffs": r.diffs,
            }))
            .collect::<Vec<_>>())),
        _ => {
            let mut s: String = reports.iter().map(|r| r.render()).collect();
            if reports.len() > 1 {
                s.push_str("\nsummary\n");
                for r in &reports {
                    s.push_str(&format!("{}: {}\n", r.id, r.verdict()));
                }
            }
            s
        }
    };
    Ok((text, failed))
}

/// Gradings to show for a target: the named pair, or every catalog grading
/// whose subgroup is the named group.
fn gradings_for(target: &str) -> Result<Vec<Grading>, CliError> {
    if target.contains('<') || target.contains('◁') {
        return Ok(vec![target.parse::<Grading>()?]);
    }
    let s: GroupSpec = target.parse()?;
    let mut out = Vec::new();
    for t in catalog::polyhedral_grading_templates()
        .into_iter()
        .chain(catalog::axial_grading_templates())
    {
        let (a, b) = t.instantiate(s.n);
        if a == s {
            out.push(Grading::new(a, b)?);
        }
    }
    if out.is_empty() {
        return Err(CliError::Unknown(format!("no catalog grading has subgroup {s}")));
    }
    Ok(out)
}

fn render(cfg: &RunConfig) -> Result<String, CliError> {
    let f = cfg.format;
    match &cfg.command {
        Command::ListGroups { n } => {
            if f == Format::Dot {
                return Err(no_dot("list-groups"));
            }
            let specs = catalog::all_specs([*n]);
            Ok(match f {
                Format::Json => pretty(&json!(specs
                    .iter()
                    .map(|s| json!({"name": s.to_string(), "ambient": s.ambient.token(), "order": s.expected_order()}))
                    .collect::<Vec<_>>())),
                _ => export::align(
                    &specs
                        .iter()
                        .map(|s| vec![s.to_string(), s.ambient.token().to_string(), format!("order {}", s.expected_order())])
                        .collect::<Vec<_>>(),
                ),
            })
        }
        Command::ListGradings { n } => {
            if f == Format::Dot {
                return Err(no_dot("list-gradings"));
            }
            let all = catalog::gradings([*n])?;
            Ok(match f {
                Format::Json => pretty(&json!(all
                    .iter()
                    .map(|g| json!({"name": g.name(), "odd_rep": g.odd_label}))
                    .collect::<Vec<_>>())),
                _ => export::align(
                    &all.iter()
                        .map(|g| vec![g.name(), format!("odd representative {}", g.odd_label)])
                        .collect::<Vec<_>>(),
                ),
            })
        }
        Command::Build { target } => {
            let s: GroupSpec = target.parse()?;
            let g = catalog::build(&s)?;
            let gens: Vec<String> = catalog::generators(&s)?.into_iter().map(|(n, _)| n).collect();
            match f {
                Format::Dot => Err(no_dot("build")),
                Format::Json => Ok(pretty(&json!({
                    "group": s.to_string(),
                    "ambient": s.ambient.token(),
                    "order": g.order(),
                    "classes": g.classes().len(),
                    "exponent": g.exponent(),
                    "generators": gens,
                    "class_profile": g.class_profile(),
                }))),
                Format::Text => Ok(format!(
                    "{s}: order {}, {} classes, exponent {}, ambient {}, generators {}\n",
                    g.order(),
                    g.classes().len(),
                    g.exponent(),
                    s.ambient.token(),
                    gens.join(", ")
                )),
            }
        }
        Command::Chartable { target } => {
            let s: GroupSpec = target.parse()?;
            let t = chars::table_of(&catalog::build(&s)?)?;
            match f {
                Format::Dot => Err(no_dot("chartable")),
                Format::Json => Ok(pretty(&export::chartable_json(&s.to_string(), &t))),
                Format::Text => Ok(export::chartable_text(&s.to_string(), &t)),
            }
        }
        Command::Mckay { target } => {
            let s: GroupSpec = target.parse()?;
            let g = mckay::mckay_graph(&catalog::build(&s)?)?;
            let name = s.to_string();
            Ok(match f {
                Format::Dot => export::to_dot(&name, &g, None),
                Format::Json => pretty(&export::mckay_json(&name, &g, None)),
                Format::Text => export::mckay_text(&name, &g),
            })
        }
        Command::Indicators { target } | Command::Decorate { target } => {
            let decorate = matches!(cfg.command, Command::Decorate { .. });
            let grs = gradings_for(target)?;
            if decorate && f != Format::Text {
                let mut parts = Vec::new();
                let mut dots = String::new();
                for gr in &grs {
                    let d = dyson::decorate(gr)?;
                    match f {
                        Format::Dot => dots.push_str(&export::to_dot(&d.name, &d.graph, Some(&d.types))),
                        _ => parts.push(export::mckay_json(&d.name, &d.graph, Some(&d.types))),
                    }
                }
                return Ok(if f == Format::Dot { dots } else { pretty(&json!(parts)) });
            }
            if f == Format::Dot {
                return Err(no_dot("indicators"));
            }
            indicator_table(&grs, decorate, f)
        }
        Command::Containments { figure, n } => {
            let fig = Figure::parse(figure).ok_or_else(|| CliError::Unknown(format!("figure {figure:?}")))?;
            if f == Format::Dot {
                return Err(no_dot("containments"));
            }
            let ns: Vec<u32> = if n.is_empty() { reproduce::AXIAL_FIGURE_NS.to_vec() } else { n.clone() };
            let mut lines = Vec::new();
            let mut failed = Vec::new();
            for e in catalog::containment_edges(fig) {
                let axial = e.sub.0.is_axial() || e.sup.0.is_axial();
                let pairs: Vec<_> = if axial {
                    ns.iter().filter_map(|&k| e.instantiate(k)).collect()
                } else {
                    e.instantiate(0).into_iter().collect()
                };
                for (a, b) in pairs {
                    let c = catalog::check_edge(&a, &b, e.index)?;
                    let verdict = if c.ok() { "OK" } else { "FAIL" };
                    if !c.ok() {
                        failed.push(format!("{a} < {b}"));
                    }
                    lines.push((a.to_string(), b.to_string(), e.index, c.normal, c.literal, verdict));
                }
            }
            if !failed.is_empty() {
                return Err(CliError::Internal(format!("containment failed: {}", failed.join(", "))));
            }
            Ok(match f {
                Format::Json => pretty(&json!(lines
                    .iter()
                    .map(|(a, b, i, nrm, lit, v)| json!({"sub": a, "sup": b, "index": i, "normal": nrm, "literal": lit, "verdict": v}))
                    .collect::<Vec<_>>())),
                _ => export::align(
                    &lines
                        .iter()
                        .map(|(a, b, i, nrm, lit, v)| {
                            vec![
                                format!("{a} < {b}"),
                                format!("index {i}"),
                                match nrm {
                                    Some(true) => "normal".to_string(),
                                    _ => "-".to_string(),
                                },
                                if *lit { "literal" } else { "conjugate" }.to_string(),
                                v.to_string(),
                            ]
                        })
                        .collect::<Vec<_>>(),
                ),
            })
        }
        Command::Kleinian { n } => {
            if *n == 0 {
                return Err(CliError::Unknown("kleinian needs n ≥ 1".to_string()));
            }
            let r = kleinian::check_syzygy(*n)?;
            let (x, y, z) = kleinian::bd_invariants(*n);
            match f {
                Format::Dot => Err(no_dot("kleinian")),
                Format::Json => Ok(pretty(&json!({
                    "report": r,
                    "x": x.to_string(),
                    "y": y.to_string(),
                    "z": z.to_string(),
                }))),
                Format::Text => {
                    let yes = |b: bool| if b { "invariant" } else { "NOT invariant" };
                    let k = r.exponent.map_or("none".to_string(), |k| k.to_string());
                    Ok(format!(
                        "{} (order {})\nx = {x}: {}\ny = {y}: {}\nz = {z}: {}\nrelation x^2 - z y^2 + 4 z^k = 0 found with k = {k}: {}\n{}: {}\nwith exponent n = {n} instead: {}\n",
                        r.group,
                        r.group_order,
                        yes(r.invariant[0]),
                        yes(r.invariant[1]),
                        yes(r.invariant[2]),
                        if r.holds { "holds" } else { "fails" },
                        r.rescaled,
                        if r.rescaled_holds { "holds" } else { "fails" },
                        if r.holds_with_exponent_n { "holds" } else { "fails" },
                    ))
                }
            }
        }
        Command::Reproduce { .. } => unreachable!("handled in execute"),
    }
}

/// Rows ρ_i, columns: degree, F_C, then F_R (or the Dyson type) per grading.
fn indicator_table(grs: &[Grading], types: bool, f: Format) -> Result<String, CliError> {
    let g = &grs[0].g;
    let t = chars::table_of(g)?;
    let mut cols = Vec::new();
    for gr in grs {
        let tg = chars::table_of(&gr.g)?;
        if tg.chars != t.chars {
            return Err(CliError::Internal(format!("{} realizes {} differently", gr.name(), gr.sub)));
        }
        let counts = dyson::odd_square_counts(gr)?;
        let fr = (0..t.num_classes())
            .map(|r| dyson::fs_real_with(&t, &counts, r))
            .collect::<Result<Vec<_>, _>>()?;
        let ty = dyson::classify(gr, &t, &gr.odd_rep, dyson::ORIENTATION)?;
        cols.push((gr.sup.to_string(), fr, ty));
    }
    let fc = (0..t.num_classes())
        .map(|r| dyson::fs_complex(&t, r))
        .collect::<Result<Vec<_>, _>>()?;
    if f == Format::Json {
        return Ok(pretty(&json!({
            "group": grs[0].sub.to_string(),
            "degrees": t.degrees,
            "fc": fc,
            "columns": cols.iter().map(|(sup, fr, ty)| json!({
                "sup": sup,
                "fr": fr,
                "dyson": ty.iter().map(|d| d.roman()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })));
    }
    let mut header = vec![format!("{}", grs[0].sub), "deg".to_string(), "F_C".to_string()];
    header.extend(cols.iter().map(|(sup, _, _)| sup.clone()));
    let mut rows = vec![header];
    for r in 0..t.num_classes() {
        let mut row = vec![export::rho(r), t.degrees[r].to_string(), fc[r].to_string()];
        for (_, fr, ty) in &cols {
            row.push(if types { ty[r].roman().to_string() } else { fr[r].to_string() });
        }
        rows.push(row);
    }
    let title = if types { "Dyson types" } else { "F_R per grading" };
    Ok(format!("{title}\n{}", export::align(&rows)))
}
