//! The `gropetower` command line.
//!
//! Exit codes: 0 on success, 1 when input is well formed but fails a
//! validation or precondition, 2 on parse errors, 64 on usage errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use grope_tower::certify::{certify_half_grope, certify_height, certify_k_slice, Certificate};
use grope_tower::grope::{grope_class, CappedGrope};
use grope_tower::hybrid::{grope_to_tower, hybrid_class, hybrid_order, tower_to_grope, HybridTree, Preference};
use grope_tower::oracle::{enumerate_brackets, enumerate_unrooted};
use grope_tower::rewrite::{ihx_rewrite, ihx_site_at, normalize_right_normed, normalize_simple, site_branches};
use grope_tower::tower::{extract_split, tower_order, RawTower, SplitTower};
use grope_tower::trees::parse_tree_text;
use grope_tower::{Bracket, EdgeRef, Error};
use serde::Serialize;
use serde_json::{json, Value};

mod dot;

pub use dot::render_dot;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "gropetower", version, about = "Trees of gropes and Whitney towers")]
struct Cli {
    /// Output format. Defaults to text, or dot for `render`.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Direction {
    GropeToTower,
    TowerToGrope,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CertKind {
    Height,
    HalfGrope,
    KSlice,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Degree of a bracket `(A,B)` or of a tree `p(A,B)`.
    Degree { expr: String },
    /// Class of a capped grope or hybrid tree file.
    Class { file: PathBuf },
    /// Order of a tower (split or raw) or hybrid tree file.
    Order { file: PathBuf },
    /// Convert between capped gropes and split towers.
    Convert {
        direction: Direction,
        file: PathBuf,
        /// Root choices for tower-to-grope: `auto`, a label or `#vertex`,
        /// either one for all trees, a comma list per tree, or `index=choice`
        /// pairs.
        #[arg(long)]
        prefer: Option<String>,
    },
    /// Rewrite a tree into simple trees, or with --rooted a bracket into
    /// right-normed brackets.
    Normalize {
        expr: String,
        #[arg(long)]
        rooted: bool,
    },
    /// Apply IHX at an internal edge.
    Ihx {
        expr: String,
        #[arg(long)]
        edge: usize,
    },
    /// Build a certificate from a capped grope file.
    Certify {
        kind: CertKind,
        file: PathBuf,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Re-check a certificate file.
    Verify { file: PathBuf },
    /// List all brackets (or unrooted trees) on a leaf multiset.
    Enumerate {
        #[arg(long, value_delimiter = ',', required = true)]
        leaves: Vec<String>,
        #[arg(long)]
        unrooted: bool,
    },
    /// Draw a punctured tree.
    Render { expr: String },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(m: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: m.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_syntax() { EXIT_PARSE } else { EXIT_INVALID };
        Failure { code, message: e.to_string() }
    }
}

type CmdResult = Result<String, Failure>;

/// Run the command line with explicit streams; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure { code: EXIT_INVALID, message: format!("cannot read {}: {e}", path.display()) })
}

fn json_failure(path: &Path, e: serde_json::Error) -> Failure {
    use serde_json::error::Category;
    let msg = e.to_string();
    let syntax = matches!(e.classify(), Category::Syntax | Category::Eof)
        || msg.contains("syntax error at offset")
        || msg.contains("invalid label");
    Failure { code: if syntax { EXIT_PARSE } else { EXIT_INVALID }, message: format!("{}: {msg}", path.display()) }
}

fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| json_failure(path, e))
}

fn load_value(path: &Path) -> Result<Value, Failure> {
    load::<Value>(path)
}

fn from_value<T: serde::de::DeserializeOwned>(path: &Path, v: Value) -> Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| json_failure(path, e))
}

/// A split tower from either the split or the raw format.
fn load_tower(path: &Path) -> Result<SplitTower, Failure> {
    let v = load_value(path)?;
    if v.get("points").is_some() {
        let raw: RawTower = from_value(path, v)?;
        Ok(extract_split(&raw)?)
    } else {
        from_value(path, v)
    }
}

fn parse_prefer(s: &str) -> Result<Vec<Preference>, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    if parts.iter().all(|p| !p.contains('=')) {
        return parts.iter().map(|p| p.parse::<Preference>().map_err(Failure::from)).collect();
    }
    let mut keyed = Vec::new();
    for p in parts {
        let (i, v) =
            p.split_once('=').ok_or_else(|| Failure::usage(format!("mix of keyed and plain preferences in {s:?}")))?;
        let i: usize = i.parse().map_err(|_| Failure::usage(format!("bad tree index {i:?}")))?;
        keyed.push((i, v.parse::<Preference>()?));
    }
    Ok(keyed.into_iter().fold(Vec::new(), |mut acc, (i, p)| {
        if acc.len() <= i {
            acc.resize(i + 1, Preference::Auto);
        }
        acc[i] = p;
        acc
    }))
}

fn dispatch(cli: &Cli) -> CmdResult {
    let format = cli.format.unwrap_or(match cli.command {
        Command::Render { .. } => Format::Dot,
        _ => Format::Text,
    });
    if format == Format::Dot && !matches!(cli.command, Command::Render { .. }) {
        return Err(Failure::usage("--format dot is only available for render"));
    }
    let json = format == Format::Json;
    match &cli.command {
        Command::Degree { expr } => {
            let d = if expr.trim_start().starts_with("p(") {
                parse_tree_text(expr)?.degree()
            } else {
                Bracket::parse(expr)?.degree()
            };
            Ok(if json { pretty(&json!({ "degree": d })) } else { format!("{d}\n") })
        }
        Command::Class { file } => {
            let v = load_value(file)?;
            if v.get("tags").is_some() {
                let h: HybridTree = from_value(file, v)?;
                let c = hybrid_class(&h);
                return Ok(if json { pretty(&json!({ "class": c })) } else { format!("{c}\n") });
            }
            let g: CappedGrope = from_value(file, v)?;
            let c = grope_class(&g)?;
            if json {
                return Ok(pretty(&json!({ "class": c.overall, "per_surface": c.per_surface })));
            }
            let mut s = format!("{}\n", c.overall);
            for (o, k) in &c.per_surface {
                s.push_str(&format!("{o}: {k}\n"));
            }
            Ok(s)
        }
        Command::Order { file } => {
            let v = load_value(file)?;
            if v.get("tags").is_some() {
                let h: HybridTree = from_value(file, v)?;
                let o = hybrid_order(&h);
                return Ok(if json { pretty(&json!({ "order": o })) } else { format!("{o}\n") });
            }
            let t = load_tower(file)?;
            let o = tower_order(&t);
            Ok(if json { pretty(&json!({ "order": o })) } else { format!("{o}\n") })
        }
        Command::Convert { direction, file, prefer } => match direction {
            Direction::GropeToTower => {
                if prefer.is_some() {
                    return Err(Failure::usage("--prefer applies to tower-to-grope"));
                }
                let g: CappedGrope = load(file)?;
                Ok(pretty(&grope_to_tower(&g)?))
            }
            Direction::TowerToGrope => {
                let t = load_tower(file)?;
                let prefs = prefer.as_deref().map(parse_prefer).transpose()?.unwrap_or_default();
                Ok(pretty(&tower_to_grope(&t, &prefs)?))
            }
        },
        Command::Normalize { expr, rooted } => {
            if *rooted {
                let b = Bracket::parse(expr)?;
                let n = normalize_right_normed(&b);
                if json {
                    return Ok(pretty(&json!({ "input": b, "brackets": n.brackets, "trace": n.trace })));
                }
                Ok(n.brackets.iter().map(|b| format!("{b}\n")).collect())
            } else {
                let t = parse_tree_text(expr)?.tree;
                let n = normalize_simple(&t);
                if json {
                    return Ok(pretty(&json!({ "input": t, "trees": n.trees, "trace": n.trace })));
                }
                Ok(n.trees.iter().map(|t| format!("{t}\n")).collect())
            }
        }
        Command::Ihx { expr, edge } => {
            let t = parse_tree_text(expr)?.tree;
            let site = ihx_site_at(&t, EdgeRef(*edge))?;
            let grouping = site_branches(&t, &site)?.grouping();
            let (a, b) = ihx_rewrite(&t, &site)?;
            if json {
                return Ok(pretty(&json!({ "tree": t, "site": site, "grouping": grouping, "outputs": [a, b] })));
            }
            Ok(format!("{a}\n{b}\n"))
        }
        Command::Certify { kind, file, k } => {
            let g: CappedGrope = load(file)?;
            let cert = match kind {
                CertKind::Height => Certificate::Height(certify_height(&g)?),
                CertKind::HalfGrope => Certificate::HalfGrope(certify_half_grope(&g)?),
                CertKind::KSlice => {
                    let k = k.ok_or_else(|| Failure::usage("certify k-slice requires --k"))?;
                    Certificate::KSlice(certify_k_slice(&g, k)?)
                }
            };
            Ok(pretty(&cert))
        }
        Command::Verify { file } => {
            let c: Certificate = load(file)?;
            c.verify()?;
            let kind = match c {
                Certificate::Height(_) => "height",
                Certificate::HalfGrope(_) => "half-grope",
                Certificate::KSlice(_) => "k-slice",
            };
            Ok(if json { pretty(&json!({ "valid": true, "kind": kind })) } else { format!("ok: {kind} certificate\n") })
        }
        Command::Enumerate { leaves, unrooted } => {
            for l in leaves {
                grope_tower::Label::new(l.as_str())?;
            }
            let refs: Vec<&str> = leaves.iter().map(String::as_str).collect();
            let mut items: Vec<String> = if *unrooted {
                if refs.len() < 2 {
                    return Err(Failure { code: EXIT_INVALID, message: "unrooted trees need two leaves".into() });
                }
                enumerate_unrooted(&refs).iter().map(|t| t.to_string()).collect()
            } else {
                enumerate_brackets(&refs).iter().map(|b| b.canonical().to_string()).collect()
            };
            items.sort();
            Ok(if json { pretty(&items) } else { items.iter().map(|s| format!("{s}\n")).collect() })
        }
        Command::Render { expr } => {
            let p = parse_tree_text(expr)?;
            match format {
                Format::Dot => Ok(render_dot(&p)),
                Format::Json => Ok(pretty(
                    &json!({ "tree": p, "edges": p.tree.edges().map(|e| p.tree.endpoints(e).unwrap()).collect::<Vec<_>>() }),
                )),
                Format::Text => Ok(format!("{p}\n")),
            }
        }
    }
}
