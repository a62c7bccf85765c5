//! Command-line front end for the asymmetry toolkit.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use asymmetry::approx::max_overlap;
use asymmetry::bochner::{gns_construct, is_positive_definite};
use asymmetry::channel::{embed_channel, embedded_rep, is_g_covariant, twirl_channel};
use asymmetry::equivalence::{decide_g_equivalence, decide_unitary_g_equivalence, u1_shift_equivalence, EQUIV_TOL};
use asymmetry::group::from_name;
use asymmetry::io;
use asymmetry::rep::{decompose, regular_rep};
use asymmetry::state::{charfunc, fourier_inverse, reduction_onto_irreps, symmetry_subgroup, QuantumState};
use asymmetry::{Error, GroupTable, UnitaryRep};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "asymmetry", version, about = "Asymmetry of quantum states under finite groups")]
struct Cli {
    /// Seed for every randomized step (decomposition, sampling).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Override the command's default tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build or validate a group and list its conjugacy classes.
    Group {
        #[arg(long, conflicts_with = "name", required_unless_present = "name")]
        group: Option<PathBuf>,
        /// Named group: cyclic:N, dihedral:N, symmetric:N, klein, A*B.
        #[arg(long)]
        name: Option<String>,
    },
    /// Decompose a representation into irreps.
    Decompose {
        #[arg(long)]
        rep: PathBuf,
        /// Include the basis change W in the output.
        #[arg(long)]
        basis: bool,
    },
    /// Characteristic function of a state.
    Charfunc(RepState),
    /// Reduction of a state onto irreps, with its symmetry subgroup.
    Reduce(RepState),
    /// Reduction onto irreps from a function on the group.
    Fourier {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        func: PathBuf,
    },
    /// Decide unitary G-equivalence of two pure states.
    Uequiv(RepPair),
    /// Decide G-equivalence of two pure states.
    Equiv(RepPair),
    /// Shift equivalence of two U(1) weight distributions.
    U1shift {
        #[arg(long = "state", num_args = 1, required = true)]
        states: Vec<PathBuf>,
    },
    /// Optimal overlap under G-invariant unitaries with lower bounds.
    Overlap(RepPair),
    /// Test whether a function is positive definite.
    Bochner(GroupFunc),
    /// Reconstruct a representation and cyclic state from a function.
    Gns(GroupFunc),
    /// Check covariance of a channel.
    Covcheck {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        rep: PathBuf,
        /// Output-space representation (defaults to --rep).
        #[arg(long)]
        rep_out: Option<PathBuf>,
    },
    /// Twirl an endomorphic channel over the group.
    Twirl {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        rep: PathBuf,
    },
    /// Embed a channel into an endomorphic channel on the direct sum.
    Embed {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        rep_out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct RepState {
    #[arg(long)]
    rep: PathBuf,
    #[arg(long)]
    state: PathBuf,
}

#[derive(Args, Debug)]
struct RepPair {
    #[arg(long)]
    rep: PathBuf,
    /// Pass exactly twice: ψ then φ.
    #[arg(long = "state", num_args = 1, required = true)]
    states: Vec<PathBuf>,
}

#[derive(Args, Debug)]
struct GroupFunc {
    #[arg(long)]
    group: PathBuf,
    #[arg(long)]
    func: PathBuf,
}

fn read(path: &Path) -> asymmetry::Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))
}

fn load_rep(path: &Path) -> asymmetry::Result<UnitaryRep> {
    io::rep_from_json(&read(path)?)
}

fn load_state(path: &Path) -> asymmetry::Result<QuantumState> {
    io::state_from_json(&read(path)?)
}

fn load_pair(paths: &[PathBuf]) -> asymmetry::Result<(QuantumState, QuantumState)> {
    match paths {
        [a, b] => Ok((load_state(a)?, load_state(b)?)),
        _ => Err(Error::InvalidParameter(format!("expected exactly two --state files, got {}", paths.len()))),
    }
}

fn load_group(path: &Path) -> asymmetry::Result<Arc<GroupTable>> {
    Ok(Arc::new(io::group_from_json(&read(path)?)?))
}

fn run(cli: &Cli) -> asymmetry::Result<(Value, Option<f64>)> {
    let seed = cli.seed;
    let tol_or = |d: f64| cli.tol.unwrap_or(d);
    Ok(match &cli.command {
        Command::Group { group, name } => {
            let g = match (group, name) {
                (Some(p), _) => io::group_from_json(&read(p)?)?,
                (None, Some(n)) => from_name(n)?,
                (None, None) => unreachable!("clap requires one of --group, --name"),
            };
            (io::group_value(&g), None)
        }
        Command::Decompose { rep, basis } => {
            let r = load_rep(rep)?;
            let dec = decompose(&r, seed)?;
            (io::decomposition_value(&dec, dec.reconstruction_residual(&r), *basis), None)
        }
        Command::Charfunc(a) => {
            let r = load_rep(&a.rep)?;
            (io::charfunc_value(&charfunc(&load_state(&a.state)?, &r)?), None)
        }
        Command::Reduce(a) => {
            let tol = tol_or(1e-9);
            let r = load_rep(&a.rep)?;
            let s = load_state(&a.state)?;
            let dec = decompose(&r, seed)?;
            let mut v = io::reduction_value(&reduction_onto_irreps(&s, &dec)?, &dec);
            v["symmetry_subgroup"] = json!(symmetry_subgroup(&s, &r, tol)?.elements());
            (v, Some(tol))
        }
        Command::Fourier { rep, func } => {
            let r = load_rep(rep)?;
            let f = io::func_from_json(&read(func)?, r.group().clone())?;
            let dec = decompose(&r, seed)?;
            (io::reduction_value(&fourier_inverse(&f, &dec)?, &dec), None)
        }
        Command::Uequiv(p) => {
            let tol = tol_or(EQUIV_TOL);
            let r = load_rep(&p.rep)?;
            let (a, b) = load_pair(&p.states)?;
            let dec = decompose(&r, seed)?;
            (io::verdict_value(&decide_unitary_g_equivalence(&a, &b, &dec, tol)?), Some(tol))
        }
        Command::Equiv(p) => {
            let tol = tol_or(EQUIV_TOL);
            let r = load_rep(&p.rep)?;
            let (a, b) = load_pair(&p.states)?;
            let reg = decompose(&regular_rep(r.group().clone()), seed)?;
            (io::verdict_value(&decide_g_equivalence(&a, &b, &r, &reg, tol)?), Some(tol))
        }
        Command::U1shift { states } => {
            let tol = tol_or(1e-9);
            let [a, b] = states.as_slice() else {
                return Err(Error::InvalidParameter(format!(
                    "expected exactly two --state files, got {}",
                    states.len()
                )));
            };
            let wa = io::weight_state_from_json(&read(a)?)?;
            let wb = io::weight_state_from_json(&read(b)?)?;
            (json!({ "delta": u1_shift_equivalence(&wa, &wb, tol) }), Some(tol))
        }
        Command::Overlap(p) => {
            let r = load_rep(&p.rep)?;
            let (a, b) = load_pair(&p.states)?;
            let dec = decompose(&r, seed)?;
            (io::overlap_value(&max_overlap(&a, &b, &dec)?), None)
        }
        Command::Bochner(gf) => {
            let g = load_group(&gf.group)?;
            let f = io::func_from_json(&read(&gf.func)?, g.clone())?;
            let dec = decompose(&regular_rep(g), seed)?;
            (io::bochner_value(&is_positive_definite(&f, &dec)?, &dec), None)
        }
        Command::Gns(gf) => {
            let g = load_group(&gf.group)?;
            let f = io::func_from_json(&read(&gf.func)?, g)?;
            (io::gns_value(&gns_construct(&f)?), None)
        }
        Command::Covcheck { channel, rep, rep_out } => {
            let tol = tol_or(1e-10);
            let c = io::channel_from_json(&read(channel)?)?;
            let r_in = load_rep(rep)?;
            let r_out = match rep_out {
                Some(p) => load_rep(p)?,
                None => r_in.clone(),
            };
            let chk = is_g_covariant(&c, &r_in, &r_out, tol)?;
            (json!({ "covariant": chk.covariant, "residual": io::num(chk.residual) }), Some(tol))
        }
        Command::Twirl { channel, rep } => {
            let tol = tol_or(1e-10);
            let c = io::channel_from_json(&read(channel)?)?;
            let r = load_rep(rep)?;
            let t = twirl_channel(&c, &r)?;
            let chk = is_g_covariant(&t, &r, &r, tol)?;
            (
                json!({
                    "channel": io::channel_value(&t),
                    "covariant": chk.covariant,
                    "residual": io::num(chk.residual),
                }),
                Some(tol),
            )
        }
        Command::Embed { channel, rep, rep_out } => {
            let tol = tol_or(1e-10);
            let c = io::channel_from_json(&read(channel)?)?;
            let (r_in, r_out) = (load_rep(rep)?, load_rep(rep_out)?);
            let input_covariant = is_g_covariant(&c, &r_in, &r_out, tol)?;
            let e = embed_channel(&c, &r_in, &r_out)?;
            let rs = embedded_rep(&r_in, &r_out)?;
            let chk = is_g_covariant(&e, &rs, &rs, tol)?;
            (
                json!({
                    "channel": io::channel_value(&e),
                    "rep": io::rep_value(&rs),
                    "input_covariant": input_covariant.covariant,
                    "covariant": chk.covariant,
                    "residual": io::num(chk.residual),
                }),
                Some(tol),
            )
        }
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Group { .. } => "group",
        Command::Decompose { .. } => "decompose",
        Command::Charfunc(_) => "charfunc",
        Command::Reduce(_) => "reduce",
        Command::Fourier { .. } => "fourier",
        Command::Uequiv(_) => "uequiv",
        Command::Equiv(_) => "equiv",
        Command::U1shift { .. } => "u1shift",
        Command::Overlap(_) => "overlap",
        Command::Bochner(_) => "bochner",
        Command::Gns(_) => "gns",
        Command::Covcheck { .. } => "covcheck",
        Command::Twirl { .. } => "twirl",
        Command::Embed { .. } => "embed",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((result, tol)) => {
            let mut report = json!({
                "command": command_name(&cli.command),
                "seed": cli.seed,
                "result": result,
            });
            if let Some(t) = tol {
                report["tol"] = io::num(t);
            }
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("serializable")),
                Format::Table => print!("{}", table::render(&report)),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}

mod table {
    //! Aligned plain-text rendering of a JSON report.

    use serde_json::Value;

    fn compact(v: &Value) -> String {
        match v {
            Value::Null => "-".into(),
            Value::String(s) => s.clone(),
            other => other.to_string(),
        }
    }

    fn is_matrix(v: &Value) -> bool {
        matches!(v, Value::Array(rows) if !rows.is_empty()
            && rows.iter().all(|r| matches!(r, Value::Array(c) if c.iter().all(|x| x.is_array()))))
    }

    fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(map) => {
                for (k, x) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    flatten(&key, x, out);
                }
            }
            Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object) => {
                for (i, x) in items.iter().enumerate() {
                    flatten(&format!("{prefix}[{i}]"), x, out);
                }
            }
            Value::Array(rows) if is_matrix(v) => {
                let lines: Vec<String> = rows.iter().map(compact).collect();
                out.push((prefix.to_string(), lines.join("\n")));
            }
            other => out.push((prefix.to_string(), compact(other))),
        }
    }

    pub fn render(v: &Value) -> String {
        let mut rows = Vec::new();
        flatten("", v, &mut rows);
        let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        let mut s = String::new();
        for (k, val) in rows {
            if val.is_empty() {
                s.push_str(&format!("{k}\n"));
            }
            for (i, line) in val.lines().enumerate() {
                let key = if i == 0 { k.as_str() } else { "" };
                s.push_str(&format!("{key:<width$}  {line}\n"));
            }
        }
        s
    }
}
