//! Command-line front end. Every command prints one JSON document.
//!
//! Exit codes: 0 success, 1 other errors, 2 bounds exceeded, 3 degree
//! mismatch, 4 degenerate parameter, 5 plot dimension too large.

mod svg;

use crate::abel_jacobi::{self, AJData};
use crate::error::{Error, Result};
use crate::graphs::{
    automorphism_group_order, canonical_form, enumerate_stable_graphs, make_vine, spanning_tree_count,
    Bounds, MarkedGraph, VineLabel,
};
use crate::local_stability::{self, LocalPhi, SheafClass};
use crate::rational::{fmt_q, parse_q, q, Q};
use crate::universal_stability::{
    self as us, enumerate_chambers, normalize, orbit_summary,
    orbit_summary_fixed_degree, period, random_phi, walls_meeting_box, BoxRegion, Space,
    UniversalPhi,
};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;

#[derive(Parser, Debug)]
#[command(name = "univstab", version, about = "Universal stability spaces for compactified Jacobians")]
pub struct Cli {
    /// Largest number of vertices allowed in graph enumeration.
    #[arg(long, global = true, default_value_t = 12)]
    pub max_vertices: usize,
    /// Seed for `random` parameters.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum Format {
    Json,
    /// One row per item where the command has rows, pretty JSON otherwise.
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the stable graphs of type (g, n).
    Graphs {
        /// Genus.
        g: u32,
        /// Number of markings.
        n: usize,
    },
    /// Stability of one sheaf, or the list of all stable classes.
    Stable {
        /// Graph as JSON, a file path, or @file.
        #[arg(long)]
        graph: String,
        /// Vertex values: JSON list, `{"values": [..]}`, comma list or file.
        #[arg(long)]
        phi: String,
        /// Sheaf as JSON `{"m": [..], "nonfree_edges": [..]}` or a file.
        #[arg(long)]
        sheaf: Option<String>,
        /// List every stable class instead of judging one sheaf.
        #[arg(long)]
        all: bool,
        /// With --all, include sheaves that are not locally free.
        #[arg(long)]
        nonfree: bool,
        /// With --all, list semistable classes.
        #[arg(long)]
        semistable: bool,
    },
    /// Evaluate a universal parameter on a graph or a vine.
    Eval {
        /// Genus.
        g: u32,
        /// Number of markings.
        n: usize,
        /// JSON, @file, `canonical` or `random`.
        #[arg(long)]
        phi: String,
        /// Degree for `canonical` or `random`.
        #[arg(long)]
        d: Option<String>,
        /// Graph as JSON, a file path, or @file.
        #[arg(long)]
        graph: Option<String>,
        /// Vine as `alpha,i,[S]`, e.g. `2,0,[1,2]`.
        #[arg(long)]
        vine: Option<String>,
    },
    /// List the walls meeting a box of (alpha, x) coordinates.
    Walls {
        /// Genus.
        g: u32,
        /// Number of markings.
        n: usize,
        /// Total degree, possibly a fraction.
        d: String,
        /// One `lo:hi` per coordinate, comma separated; `inf` for unbounded.
        #[arg(long = "box")]
        region: Option<String>,
        /// Same interval on every coordinate.
        #[arg(long)]
        cube: Option<String>,
    },
    /// List the chambers of the fundamental cell in degree d.
    Chambers {
        /// Genus.
        g: u32,
        /// Number of markings.
        n: usize,
        /// Total degree.
        d: i64,
        /// Also draw the cell, its walls and chambers (needs at most two x coordinates).
        #[arg(long)]
        svg: Option<std::path::PathBuf>,
        /// Refuse cells with more x coordinates than this.
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
    },
    /// Orbits of the extended Picard group on chambers.
    Orbits {
        /// Genus.
        g: u32,
        /// Number of markings.
        n: usize,
        /// Restrict to one degree.
        #[arg(long, allow_hyphen_values = true)]
        fixed_degree: Option<i64>,
        /// Refuse cells with more x coordinates than this.
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
    },
    /// Extension and indeterminacy of an Abel-Jacobi section.
    Abeljacobi {
        /// Genus.
        g: u32,
        /// Number of markings.
        n: usize,
        /// Power of the dualizing sheaf removed.
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        /// Weights d_1 .. d_n of the markings.
        #[arg(long, num_args = 0.., allow_negative_numbers = true)]
        dvec: Vec<i64>,
        /// JSON, @file, `canonical-perturbed` or `kd-perturbed`.
        #[arg(long, default_value = "kd-perturbed")]
        phi: String,
    },
    /// Move a parameter into the fundamental domain.
    Normalize {
        /// Universal parameter as JSON or a file.
        #[arg(long)]
        phi: String,
    },
}

fn exit_code(e: &Error, plotting: bool) -> i32 {
    match e {
        Error::BoundsExceeded(_) => 2,
        Error::DimensionTooLarge(_) if plotting => 5,
        Error::DimensionTooLarge(_) => 2,
        Error::DegreeMismatch(_) | Error::NonIntegerDegree(_) => 3,
        Error::Degenerate(_) => 4,
        _ => 1,
    }
}

/// `@path` or an existing file path is read; anything else is literal.
fn read_arg(s: &str) -> Result<String> {
    let path = s.strip_prefix('@').unwrap_or(s);
    if s.starts_with('@') || std::path::Path::new(path).is_file() {
        std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))
    } else {
        Ok(s.to_string())
    }
}

fn parse_local_phi(s: &str) -> Result<LocalPhi> {
    let text = read_arg(s)?;
    let t = text.trim();
    if t.starts_with('{') {
        return parse_json(t);
    }
    if t.starts_with('[') {
        let raw: Vec<Value> = parse_json(t)?;
        let values = raw
            .iter()
            .map(|v| match v {
                Value::String(x) => parse_q(x),
                Value::Number(x) => parse_q(&x.to_string()),
                _ => Err(Error::Parse(format!("bad value {v}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(LocalPhi::new(values));
    }
    Ok(LocalPhi::new(t.split(',').map(parse_q).collect::<Result<Vec<_>>>()?))
}

fn parse_json<T: serde::de::DeserializeOwned>(s: &str) -> Result<T> {
    serde_json::from_str(&read_arg(s)?).map_err(|e| Error::Parse(e.to_string()))
}

fn parse_vine(s: &str) -> Result<VineLabel> {
    let (alpha, rest) = s
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("bad vine {s:?}")))?;
    let (i, set) = rest
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("bad vine {s:?}")))?;
    let label = crate::graphs::BoundaryLabel::parse(&format!("({i},{set})"))?;
    Ok(VineLabel {
        alpha: alpha
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad vine {s:?}")))?,
        i: label.i,
        s: label.s,
    })
}

fn parse_box(spec: &str) -> Result<(Vec<Option<Q>>, Vec<Option<Q>>)> {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (a, b) = part
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("bad interval {part:?}")))?;
        let side = |t: &str| -> Result<Option<Q>> {
            match t.trim() {
                "inf" | "-inf" | "+inf" => Ok(None),
                v => parse_q(v).map(Some),
            }
        };
        lo.push(side(a)?);
        hi.push(side(b)?);
    }
    Ok((lo, hi))
}

fn universal_phi(g: u32, n: usize, spec: &str, d: Option<&str>, seed: u64) -> Result<UniversalPhi> {
    let degree = || -> Result<Q> {
        d.map(parse_q)
            .unwrap_or_else(|| Err(Error::InvalidInput("--d is required".into())))
    };
    match spec {
        "canonical" => UniversalPhi::zero(g, n, degree()?),
        "random" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_phi(g, n, degree()?, 97, 3, &mut rng)
        }
        other => {
            let phi: UniversalPhi = parse_json(other)?;
            if phi.g != g || phi.n != n {
                return Err(Error::InvalidInput("parameter type differs from (g,n)".into()));
            }
            Ok(phi)
        }
    }
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn type_of(c: &Command) -> Option<(u32, usize)> {
    match *c {
        Command::Graphs { g, n }
        | Command::Eval { g, n, .. }
        | Command::Walls { g, n, .. }
        | Command::Chambers { g, n, .. }
        | Command::Orbits { g, n, .. }
        | Command::Abeljacobi { g, n, .. } => Some((g, n)),
        Command::Stable { .. } | Command::Normalize { .. } => None,
    }
}

fn execute(cli: &Cli) -> Result<Value> {
    let bounds = Bounds {
        max_vertices: cli.max_vertices,
        ..Bounds::default()
    };
    if let Some((g, n)) = type_of(&cli.command) {
        bounds.check(g, n)?;
    }
    match &cli.command {
        Command::Graphs { g, n } => {
            let graphs = enumerate_stable_graphs(*g, *n, &bounds)?;
            let items: Vec<Value> = graphs
                .iter()
                .map(|gr| {
                    json!({
                        "graph": to_json(gr),
                        "canonical_form": canonical_form(gr).to_string(),
                        "automorphisms": automorphism_group_order(gr).to_string(),
                        "spanning_trees": spanning_tree_count(gr).to_string(),
                    })
                })
                .collect();
            Ok(json!({"g": g, "n": n, "count": graphs.len(), "graphs": items}))
        }
        Command::Stable {
            graph,
            phi,
            sheaf,
            all,
            nonfree,
            semistable,
        } => {
            let graph: MarkedGraph = parse_json(graph)?;
            graph.validate()?;
            let phi = parse_local_phi(phi)?;
            if !*all {
                let sheaf: SheafClass = match sheaf {
                    Some(s) => parse_json(s)?,
                    None => return Err(Error::InvalidInput("give --sheaf or --all".into())),
                };
                let bad = local_stability::violations(&phi, &graph, &sheaf)?;
                let semi = local_stability::is_semistable(&phi, &graph, &sheaf)?;
                let verdict = if bad.is_empty() {
                    "stable"
                } else if semi {
                    "semistable"
                } else {
                    "unstable"
                };
                return Ok(json!({"verdict": verdict, "violations": to_json(&bad)}));
            }
            let classes = if *semistable {
                local_stability::semistable_sheaf_classes(&phi, &graph, *nonfree)?
            } else {
                if !local_stability::is_nondegenerate_local(&phi, &graph) {
                    return Err(Error::Degenerate("parameter lies on a local wall".into()));
                }
                local_stability::stable_sheaf_classes(&phi, &graph, *nonfree)?
            };
            Ok(json!({
                "count": classes.len(),
                "spanning_trees": spanning_tree_count(&graph).to_string(),
                "classes": to_json(&classes),
            }))
        }
        Command::Eval {
            g,
            n,
            phi,
            d,
            graph,
            vine,
        } => {
            let phi = universal_phi(*g, *n, phi, d.as_deref(), cli.seed)?;
            let graph: MarkedGraph = match (graph, vine) {
                (Some(gr), None) => parse_json(gr)?,
                (None, Some(v)) => make_vine(*g, *n, parse_vine(v)?)?,
                _ => return Err(Error::InvalidInput("give exactly one of --graph, --vine".into())),
            };
            let local = us::evaluate(&phi, &graph)?;
            Ok(json!({"phi": to_json(&phi), "graph": to_json(&graph), "values": local.values.iter().map(fmt_q).collect::<Vec<_>>()}))
        }
        Command::Walls {
            g,
            n,
            d,
            region,
            cube,
        } => {
            let d = parse_q(d)?;
            let space = Space::get(*g, *n)?;
            let dim = space.dim_c() + space.dim_d();
            let (lo, hi) = match (region, cube) {
                (Some(b), None) => parse_box(b)?,
                (None, Some(c)) => {
                    let (lo, hi) = parse_box(c)?;
                    if lo.len() != 1 {
                        return Err(Error::Parse("--cube takes one interval".into()));
                    }
                    (vec![lo[0]; dim], vec![hi[0]; dim])
                }
                _ => return Err(Error::InvalidInput("give exactly one of --box, --cube".into())),
            };
            let walls = walls_meeting_box(*g, *n, d, &BoxRegion { lo, hi })?;
            let items: Vec<Value> = walls
                .iter()
                .map(|w| {
                    json!({
                        "family": to_json(&w.family),
                        "k": w.k,
                        "coeffs": w.functional.coeffs.iter().map(fmt_q).collect::<Vec<_>>(),
                        "constant": fmt_q(&w.functional.constant),
                    })
                })
                .collect();
            Ok(json!({"count": walls.len(), "walls": items}))
        }
        Command::Chambers {
            g,
            n,
            d,
            svg,
            max_dim,
        } => {
            let space = Space::get(*g, *n)?;
            if svg.is_some() && space.dim_d() > 2 {
                return Err(Error::DimensionTooLarge(space.dim_d()));
            }
            let reps = enumerate_chambers(*g, *n, q(*d), *max_dim)?;
            let summary = orbit_summary_fixed_degree(*g, *n, *d, *max_dim)?;
            if let Some(path) = svg {
                let walls: Vec<_> = us::d_walls_meeting_cell(*g, *n, q(*d))?
                    .into_iter()
                    .map(|(f, k, a)| (f, k, a.coeffs, a.constant))
                    .collect();
                let doc = svg::render(&us::cell_widths(*g, *n), &reps, &summary.orbit_of, &walls, space.dim_d())?;
                std::fs::write(path, doc)
                    .map_err(|e| Error::InvalidInput(format!("cannot write svg: {e}")))?;
            }
            Ok(json!({
                "count": reps.len(),
                "orbits": summary.orbits,
                "chambers": reps.iter().zip(&summary.orbit_of).map(|(r, o)| json!({
                    "key": to_json(&r.key),
                    "phi": to_json(&r.phi),
                    "vertices": to_json(r).get("vertices").cloned().unwrap_or(Value::Null),
                    "orbit": o,
                })).collect::<Vec<_>>(),
            }))
        }
        Command::Orbits {
            g,
            n,
            fixed_degree,
            max_dim,
        } => {
            let s = match fixed_degree {
                Some(d) => orbit_summary_fixed_degree(*g, *n, *d, *max_dim)?,
                None => orbit_summary(*g, *n, *max_dim)?,
            };
            Ok(json!({"orbits": s.orbits, "transitive": s.transitive, "free": s.free}))
        }
        Command::Abeljacobi { g, n, k, dvec, phi } => {
            let aj = AJData {
                k: *k,
                d: dvec.clone(),
            };
            if aj.d.len() != *n {
                return Err(Error::InvalidInput("--dvec needs n entries".into()));
            }
            let degree = q(aj.degree(*g));
            let phi = match phi.as_str() {
                "kd-perturbed" => abel_jacobi::perturbed_phi_kd(*g, *n, &aj)?,
                "canonical-perturbed" => canonical_perturbed(*g, *n, degree)?,
                other => universal_phi(*g, *n, other, None, cli.seed)?,
            };
            let strata = abel_jacobi::indeterminacy_strata(&phi, &aj)?;
            let strata: Vec<Value> = strata
                .iter()
                .map(|l| json!([l.alpha, l.i, l.s.to_vec()]))
                .collect();
            Ok(json!({"extends": strata.is_empty(), "strata": strata}))
        }
        Command::Normalize { phi } => {
            let phi: UniversalPhi = parse_json(phi)?;
            if !us::is_nondegenerate(&phi)? {
                return Err(Error::Degenerate("parameter lies on a wall".into()));
            }
            let (out, witness) = normalize(&phi)?;
            Ok(json!({"phi": to_json(&out), "witness": to_json(&witness)}))
        }
    }
}

/// The canonical parameter moved off the walls the same way as
/// [`abel_jacobi::perturbed_phi_kd`].
fn canonical_perturbed(g: u32, n: usize, d: Q) -> Result<UniversalPhi> {
    let base = UniversalPhi::zero(g, n, d)?;
    let e = period(g);
    let eps = Q::new(1, 8 * e);
    let ratio = Q::new(1, 2 * e * (base.x.len() as i64).max(1) + 1);
    for geometric in [false, true] {
        let mut phi = base.clone();
        phi.alpha.iter_mut().for_each(|a| *a += eps);
        let mut w = Q::from_integer(1);
        for x in phi.x.iter_mut() {
            *x += eps * w;
            if geometric {
                w *= ratio;
            }
        }
        if us::is_nondegenerate(&phi)? {
            return Ok(phi);
        }
    }
    Err(Error::Degenerate("canonical parameter cannot be perturbed off the walls".into()))
}

/// Rows of the first array-valued field, one JSON item per line, or the
/// whole document pretty-printed when there is none.
fn table(v: &Value) -> String {
    let rows = v
        .as_object()
        .and_then(|o| o.values().find_map(Value::as_array));
    match rows {
        Some(rows) => rows
            .iter()
            .map(|r| match r.as_object() {
                Some(o) => o
                    .iter()
                    .map(|(k, x)| format!("{k}={x}"))
                    .collect::<Vec<_>>()
                    .join("\t"),
                None => r.to_string(),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        None => serde_json::to_string_pretty(v).expect("serializable"),
    }
}

/// Runs the CLI on `args`, writing the result to `out`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let plotting = matches!(cli.command, Command::Chambers { svg: Some(_), .. });
    match execute(&cli) {
        Ok(v) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string(&v).expect("serializable"),
                Format::Table => table(&v),
            };
            let _ = writeln!(out, "{text}");
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e, plotting)
        }
    }
}

