//! `opd`: verb-noun front end over `opd_core` with JSON and text output.
//!
//! Exit codes: 0 on pass or success, 1 when a checked identity fails, 2 on
//! usage, parse or construction errors.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use opd_core::algebra::{
    algebra_pushout, check_algebra, check_algebra_via_end, end_operad, free_algebra, Algebra,
    SGraph, SGraphMap,
};
use opd_core::exactcat::Scalar;
use opd_core::opcolim::{build_pushout, spanning_report, PushoutProblem};
use opd_core::operad::{
    ass_operad, check_operad, check_operad_map_truncated, free_counit, free_operad, matrix_operad,
    scaled_ass, unit_operad, Operad, Sequence,
};
use opd_core::report::{DimTable, Report, Status};
use opd_core::trees::{enumerate_trees, Tree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "opd",
    version,
    about = "Exact computations with non-symmetric operads and their algebras"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Planar rooted trees.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Operads in rational vector spaces.
    #[command(subcommand)]
    Operad(OperadCmd),
    /// Algebras over operads in graphs on a fixed object set.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Randomized property checks on rescaled associative operads.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum TreeCmd {
    /// Enumerate trees by leaf count and allowed inner-vertex arities.
    Enum {
        #[arg(long)]
        leaves: usize,
        /// Comma-separated arities, e.g. `2,3`.
        #[arg(long, value_delimiter = ',', required = true)]
        arities: Vec<usize>,
        /// Inner-vertex bound; required when arity 0 or 1 is allowed.
        #[arg(long)]
        max_inner: Option<usize>,
    },
    /// Parse a tree in bracket notation and draw it.
    Show { tree: String },
}

#[derive(Subcommand, Debug)]
pub enum OperadCmd {
    /// Unit and associativity axioms of the partial compositions up to an arity.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
    },
    /// Dimensions of the free operad on generators `arity:dim`.
    Free {
        /// Comma-separated `arity:dim` pairs, e.g. `2:1,3:1`.
        #[arg(long, value_delimiter = ',', required = true)]
        gen: Vec<String>,
        #[arg(long)]
        n_max: usize,
        /// Weight bound; required for generators of arity 0 or 1.
        #[arg(long)]
        w_max: Option<usize>,
        /// Write the operad as JSON to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks that the counit `F(O) -> O` is an operad map.
    Counit {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long)]
        w_max: Option<usize>,
    },
    /// Push-out of `F(f)` along `ḡ` by stagewise cell attachment.
    Pushout {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        n_max: usize,
        /// Stage bound; omit with `--exact`.
        #[arg(long)]
        t_max: Option<usize>,
        /// Run every stage up to `n - 1` and certify stabilization.
        #[arg(long)]
        exact: bool,
    },
    /// Emit a built-in operad: `ass`, `unit` or `matrix:<d>`.
    Builtin {
        name: String,
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum AlgebraCmd {
    /// Algebra axioms, checked directly and through the endomorphism operad.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
    },
    /// Carrier dimensions of the free algebra on a graph.
    Free {
        /// Operad JSON file, or a built-in name as for `operad builtin`.
        #[arg(long)]
        operad: String,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 3)]
        p_max: usize,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
    },
    /// Push-out of an algebra along a free map of graphs.
    Pushout {
        /// JSON `{"algebra": .., "f": .., "gbar": ..}`.
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        t_max: Option<usize>,
    },
    /// Dimensions and axioms of the endomorphism operad of a graph.
    End {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
    },
}

/// Exit code and rendered stdout of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// What a verb produced: an optional report, tables and JSON payload.
#[derive(Default)]
struct Output {
    report: Option<Report>,
    text: String,
    json: serde_json::Map<String, Value>,
}

impl Output {
    fn with_text(text: String) -> Self {
        Output {
            text,
            ..Default::default()
        }
    }

    fn code(&self) -> i32 {
        match &self.report {
            Some(r) if r.status == Status::Fail => 1,
            _ => 0,
        }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut s = self.text.clone();
                if let Some(r) = &self.report {
                    s.push_str(&r.to_string());
                }
                s
            }
            Format::Json => {
                let mut m = self.json.clone();
                if let Some(r) = &self.report {
                    m.insert(
                        "report".into(),
                        serde_json::to_value(r).expect("report serializes"),
                    );
                }
                let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("json");
                s.push('\n');
                s
            }
        }
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let msg = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: msg,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: msg,
                }
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(out) => Outcome {
            code: out.code(),
            stdout: out.render(cli.format),
            stderr: String::new(),
        },
        Err(Failure(msg)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn dispatch(cmd: &Command) -> Result<Output, Failure> {
    match cmd {
        Command::Tree(TreeCmd::Enum {
            leaves,
            arities,
            max_inner,
        }) => tree_enum(*leaves, arities, *max_inner),
        Command::Tree(TreeCmd::Show { tree }) => tree_show(tree),
        Command::Operad(OperadCmd::Check { file, max_arity }) => {
            let o: Operad = read_json(file)?;
            Ok(Output {
                report: Some(check_operad(&o, *max_arity)),
                ..Default::default()
            })
        }
        Command::Operad(OperadCmd::Free {
            gen,
            n_max,
            w_max,
            out,
        }) => operad_free(gen, *n_max, *w_max, out.as_deref()),
        Command::Operad(OperadCmd::Counit { file, n_max, w_max }) => {
            let o: Operad = read_json(file)?;
            let (fo, counit) = free_counit(&o, *n_max, *w_max)?;
            let rep = check_operad_map_truncated(&counit, *n_max, &fo);
            Ok(Output {
                report: Some(rep),
                ..Default::default()
            })
        }
        Command::Operad(OperadCmd::Pushout {
            problem,
            n_max,
            t_max,
            exact,
        }) => operad_pushout(problem, *n_max, *t_max, *exact),
        Command::Operad(OperadCmd::Builtin { name, max_arity }) => {
            let o = builtin(name, *max_arity)?;
            let mut out = Output::with_text(serde_json::to_string(&o)? + "\n");
            out.json.insert("operad".into(), serde_json::to_value(&o)?);
            Ok(out)
        }
        Command::Algebra(AlgebraCmd::Check { file, max_arity }) => {
            let a: Algebra = read_json(file)?;
            let mut rep = check_algebra(&a, *max_arity);
            rep.merge(check_algebra_via_end(&a, *max_arity));
            Ok(Output {
                report: Some(rep),
                ..Default::default()
            })
        }
        Command::Algebra(AlgebraCmd::Free {
            operad,
            graph,
            p_max,
            max_arity,
        }) => {
            let o = load_operad(operad, *max_arity)?;
            let y: SGraph = read_json(graph)?;
            let fa = free_algebra(&o, &y, *p_max)?;
            let mut out = graph_dims(&fa.algebra.carrier, "dim F(Y)");
            let mut rep = check_algebra(&fa.algebra, *max_arity);
            if fa.truncated {
                rep.mark_truncated(format!("grades <= {}", fa.p_max));
            }
            out.report = Some(rep);
            Ok(out)
        }
        Command::Algebra(AlgebraCmd::Pushout {
            problem,
            n_max,
            t_max,
        }) => {
            #[derive(Deserialize)]
            struct AlgebraProblem {
                algebra: Algebra,
                f: SGraphMap,
                gbar: SGraphMap,
            }
            let p: AlgebraProblem = read_json(problem)?;
            let res = algebra_pushout(&p.algebra, &p.f, &p.gbar, *n_max, *t_max)?;
            let mut out = graph_dims(&res.b.carrier, "dim B");
            let mut rep = res.report.clone();
            rep.merge(res.verify_cells());
            rep.merge(res.spanning_report());
            out.report = Some(rep);
            Ok(out)
        }
        Command::Algebra(AlgebraCmd::End { graph, max_arity }) => {
            let y: SGraph = read_json(graph)?;
            let o = end_operad(&y, *max_arity);
            let dims: Vec<usize> = (0..=*max_arity).map(|n| o.dim(n)).collect();
            let mut out = Output::with_text(dims_line("dim End(Y)(n)", &dims));
            out.json.insert("dims".into(), json!(dims));
            out.report = Some(check_operad(&o, *max_arity));
            Ok(out)
        }
        Command::Selftest {
            seed,
            max_arity,
            samples,
        } => Ok(selftest(*seed, *max_arity, *samples)),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let s =
        std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let mut de = serde_json::Deserializer::from_str(&s);
    T::deserialize(&mut de).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn builtin(name: &str, max_arity: usize) -> Result<Operad, Failure> {
    match name.split_once(':') {
        None if name == "ass" => Ok(ass_operad(max_arity)),
        None if name == "unit" => Ok(unit_operad(max_arity)),
        Some(("matrix", d)) => {
            let d: usize = d
                .parse()
                .map_err(|_| Failure(format!("matrix size {d:?} is not a number")))?;
            Ok(matrix_operad(d, max_arity))
        }
        _ => Err(Failure(format!(
            "unknown operad {name:?}; expected ass, unit or matrix:<d>"
        ))),
    }
}

fn load_operad(spec: &str, max_arity: usize) -> Result<Operad, Failure> {
    let p = Path::new(spec);
    if p.exists() {
        read_json(p)
    } else {
        builtin(spec, max_arity)
    }
}

fn dims_line(title: &str, dims: &[usize]) -> String {
    let body: Vec<String> = dims.iter().map(usize::to_string).collect();
    format!("{title}: {}\n", body.join(","))
}

fn graph_dims(g: &SGraph, title: &str) -> Output {
    let mut out = Output::default();
    let rows = g
        .objects
        .iter()
        .enumerate()
        .map(|(x, _)| (0..g.k()).map(|y| g.dim(x, y)).collect())
        .collect();
    let table = DimTable {
        title: title.into(),
        row_labels: g.objects.clone(),
        col_labels: g.objects.clone(),
        rows,
    };
    out.text = table.to_string();
    let hom: BTreeMap<String, usize> = g
        .pairs()
        .filter(|&(x, y)| g.dim(x, y) > 0)
        .map(|(x, y)| (g.pair_key(x, y), g.dim(x, y)))
        .collect();
    out.json.insert("objects".into(), json!(g.objects));
    out.json.insert("dims".into(), json!(hom));
    out
}

fn tree_enum(
    leaves: usize,
    arities: &[usize],
    max_inner: Option<usize>,
) -> Result<Output, Failure> {
    let support: BTreeSet<usize> = arities.iter().copied().collect();
    let trees = enumerate_trees(leaves, &support, max_inner)?;
    let mut out = Output::default();
    for t in &trees {
        writeln!(out.text, "{t}").expect("string write");
    }
    writeln!(out.text, "{} trees", trees.len()).expect("string write");
    out.json.insert("count".into(), json!(trees.len()));
    out.json.insert(
        "trees".into(),
        Value::Array(
            trees
                .iter()
                .map(|t| json!({ "tree": t.to_string() }))
                .collect(),
        ),
    );
    Ok(out)
}

fn tree_show(s: &str) -> Result<Output, Failure> {
    let t = Tree::parse(s)?;
    let mut out = Output::with_text(format!(
        "{t}\nleaves: {}, inner vertices: {}\n{}",
        t.n_leaves(),
        t.n_inner(),
        t.render_ascii()
    ));
    out.json.insert("tree".into(), json!(t.to_string()));
    out.json.insert("leaves".into(), json!(t.n_leaves()));
    out.json.insert("inner".into(), json!(t.n_inner()));
    out.json.insert(
        "decomposition".into(),
        json!(t.decompose_into_corollas().to_string()),
    );
    Ok(out)
}

fn parse_gens(gen: &[String]) -> Result<Sequence, Failure> {
    let mut pairs = Vec::with_capacity(gen.len());
    for g in gen {
        let (a, d) = g
            .split_once(':')
            .ok_or_else(|| Failure(format!("generator {g:?} is not arity:dim")))?;
        let a: usize = a
            .trim()
            .parse()
            .map_err(|_| Failure(format!("arity in {g:?} is not a number")))?;
        let d: usize = d
            .trim()
            .parse()
            .map_err(|_| Failure(format!("dimension in {g:?} is not a number")))?;
        pairs.push((a, d));
    }
    Ok(Sequence::from_dims(&pairs))
}

fn operad_free(
    gen: &[String],
    n_max: usize,
    w_max: Option<usize>,
    path: Option<&Path>,
) -> Result<Output, Failure> {
    let v = parse_gens(gen)?;
    let fv = free_operad(&v, n_max, w_max)?;
    let dims: Vec<usize> = (1..=n_max).map(|n| fv.operad.dim(n)).collect();
    let mut out = Output::with_text(dims_line(&format!("dim F(V)(n), n=1..{n_max}"), &dims));
    out.json.insert("dims".into(), json!(dims));
    if let Some(p) = path {
        std::fs::write(p, serde_json::to_string(&fv.operad)?)
            .map_err(|e| Failure(format!("{}: {e}", p.display())))?;
    }
    let mut rep = check_operad(&fv.operad, n_max);
    if let Some(w) = w_max {
        rep.mark_truncated(format!("trees of weight <= {w}"));
    }
    out.report = Some(rep);
    Ok(out)
}

fn operad_pushout(
    path: &Path,
    n_max: usize,
    t_max: Option<usize>,
    exact: bool,
) -> Result<Output, Failure> {
    let prob: PushoutProblem = read_json(path)?;
    let t_max = match (exact, t_max) {
        (true, Some(_)) => {
            return Err(Failure("--exact and --t-max are mutually exclusive".into()))
        }
        (true, None) => None,
        (false, Some(t)) => Some(t),
        (false, None) => return Err(Failure("pass --t-max T or --exact".into())),
    };
    let res = build_pushout(&prob, n_max, t_max)?;
    let mut rep = spanning_report(&res);
    if t_max.is_some() {
        rep.mark_truncated(format!("stages t <= {}", t_max.unwrap_or_default()));
    }
    let table = res.dim_table();
    rep.tables.push(table);
    let dims: Vec<usize> = (0..=res.n_max()).map(|n| res.p.dim(n)).collect();
    let mut out = Output::with_text(dims_line("dim P(n)", &dims));
    for c in &res.certificates {
        writeln!(
            out.text,
            "arity {}: stable after t={} ({})",
            c.arity, c.last_stage, c.reason
        )
        .expect("string write");
    }
    out.json.insert("dims".into(), json!(dims));
    out.json.insert(
        "certificates".into(),
        serde_json::to_value(&res.certificates)?,
    );
    out.report = Some(rep);
    Ok(out)
}

/// Operad axioms on random rescalings of `Ass`, seeded.
fn selftest(seed: u64, max_arity: usize, samples: usize) -> Output {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = Report::new();
    for _ in 0..samples {
        let lambdas: Vec<Scalar> = (0..=max_arity.max(1))
            .map(|_| {
                let (p, q) = (rng.gen_range(1..=9i64), rng.gen_range(1..=9i64));
                let s = if rng.gen_bool(0.5) { -1 } else { 1 };
                Scalar::ratio(s * p, q)
            })
            .collect();
        rep.merge(check_operad(&scaled_ass(&lambdas), max_arity));
    }
    let mut out = Output::with_text(format!(
        "seed {seed}: {samples} rescaled associative operads\n"
    ));
    out.json.insert("seed".into(), json!(seed));
    out.report = Some(rep);
    out
}
