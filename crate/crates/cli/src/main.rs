use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use sumset_core::bounds::{
    gap_sum_upper_bound, induced_index_cstar, ksum_candidate_bound, lower_bound_l,
    tight_witness_pair, upper_bound_m,
};
use sumset_core::fractal::{fractal_cover, fractal_endpoints, FractalSpec};
use sumset_core::index::{largest_gap, schneider_index};
use sumset_core::io::{parse_partition, parse_set, parse_system, set_to_json, write_set};
use sumset_core::oracle::{verify_gap_claims, verify_lower_bound_sweep, SweepConfig};
use sumset_core::partitions::{check_fractional_subadditive_c, validate_partition};
use sumset_core::rational::{format_rational, parse_rational, to_decimal};
use sumset_core::regions::{
    fractal_lyusternik3_witness, lyusternik_membership_l2, schneider_membership_s12,
    schneider_witness_s12,
};
use sumset_core::{CompactSet1D, Rational};

#[derive(Parser)]
#[command(name = "sumset", version, about = "Exact non-convexity index of compact sets on the line")]
struct Cli {
    /// Render scalar results as decimals with this many digits.
    #[arg(long, global = true, value_name = "P")]
    decimal: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Index, largest gap and diameter of a set file.
    Index { file: PathBuf },
    /// Minkowski sum of set files.
    Sum {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Best lower bound on the index of a sum of two sets.
    LowerBound {
        #[arg(value_parser = rational)]
        c1: Rational,
        #[arg(value_parser = rational)]
        c2: Rational,
    },
    /// Sets realizing the lower bound, or a prescribed index of the sum.
    Witness {
        #[arg(value_parser = rational)]
        c1: Rational,
        #[arg(value_parser = rational)]
        c2: Rational,
        #[arg(value_parser = rational)]
        c12: Option<Rational>,
    },
    /// Candidate lower bound for a sum of k sets.
    Kbound {
        #[arg(value_parser = rational, num_args = 2.., required = true)]
        c: Vec<Rational>,
    },
    /// Smallest k making the candidate bound vanish.
    Cstar {
        #[arg(value_parser = rational)]
        c: Rational,
    },
    /// Upper bound on the largest gap of a sum, from descending gaps.
    GapBound {
        #[arg(value_parser = rational, required = true)]
        g: Vec<Rational>,
    },
    /// Region membership tests.
    #[command(subcommand)]
    Region(Region),
    /// Fractional partition checks.
    #[command(subcommand)]
    Partition(PartitionCmd),
    /// Depth-d cover of the digit-restricted fractal.
    Fractal {
        n: u32,
        k: u32,
        depth: u32,
        /// Emit the finite endpoint set instead of the cover.
        #[arg(long)]
        endpoints: bool,
    },
    /// Fractal sets approaching a point outside the three-set measure region.
    Lyu3Witness {
        #[arg(value_parser = rational)]
        a13: Rational,
        #[arg(value_parser = rational)]
        a23: Rational,
        #[arg(value_parser = rational)]
        a123: Rational,
        depth: u32,
    },
    /// Grid sweep of the lower bound from a JSON config.
    Sweep { config: PathBuf },
    /// CSV of (c1, c2, L, M) on a D x D grid of [0, 1]^2.
    Slice {
        #[arg(long, value_name = "D")]
        grid: u32,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Subcommand)]
enum Region {
    /// Index triple (c1, c2, c12) of two sets on the line.
    S12 {
        #[arg(value_parser = rational)]
        c1: Rational,
        #[arg(value_parser = rational)]
        c2: Rational,
        #[arg(value_parser = rational)]
        c12: Rational,
    },
    /// Measure triple (|A|, |B|, |A+B|) in dimension N.
    Lyu2 {
        n: u32,
        #[arg(value_parser = rational)]
        a: Rational,
        #[arg(value_parser = rational)]
        b: Rational,
        #[arg(value_parser = rational)]
        c: Rational,
    },
}

#[derive(Subcommand)]
enum PartitionCmd {
    /// Fractional subadditivity of the index for a set system.
    Check { sets: PathBuf, partition: PathBuf },
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// A finished command either holds (exit 0) or reports a mathematical
/// failure (exit 1). Errors exit 2.
enum Verdict {
    Holds,
    Fails,
}

struct Out {
    decimal: Option<usize>,
}

impl Out {
    fn num(&self, x: &Rational) -> String {
        match self.decimal {
            Some(p) => to_decimal(x, p),
            None => format_rational(x),
        }
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_set(path: &Path) -> Result<CompactSet1D, String> {
    parse_set(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: Cli) -> Result<Verdict, String> {
    let out = Out { decimal: cli.decimal };
    let err = |e: sumset_core::Error| e.to_string();
    match cli.command {
        Command::Index { file } => {
            let a = read_set(&file)?;
            println!(
                "c={} G={} diam={}",
                out.num(&schneider_index(&a)),
                out.num(&largest_gap(&a)),
                out.num(&a.diam())
            );
        }
        Command::Sum { files, output } => {
            let sets = files.iter().map(|f| read_set(f)).collect::<Result<Vec<_>, _>>()?;
            let sum = CompactSet1D::sum_all(&sets).map_err(err)?;
            let text = write_set(&sum);
            match output {
                Some(path) => write_file(&path, &format!("{text}\n"))?,
                None => println!("{text}"),
            }
        }
        Command::LowerBound { c1, c2 } => {
            println!("{}", out.num(&lower_bound_l(&c1, &c2).map_err(err)?));
        }
        Command::Witness { c1, c2, c12 } => {
            let (a, b, target) = match c12 {
                None => {
                    let (a, b) = tight_witness_pair(&c1, &c2).map_err(err)?;
                    (a, b, lower_bound_l(&c1, &c2).map_err(err)?)
                }
                Some(c12) => match schneider_witness_s12(&c1, &c2, &c12) {
                    Ok((a, b)) => (a, b, c12),
                    Err(sumset_core::Error::NotMember) => {
                        println!("not a member: no pair has index triple ({c1}, {c2}, {c12})");
                        return Ok(Verdict::Fails);
                    }
                    Err(e) => return Err(e.to_string()),
                },
            };
            let doc = json!({
                "first": set_to_json(&a),
                "second": set_to_json(&b),
                "c12": out.num(&target),
            });
            println!("{doc}");
        }
        Command::Kbound { c } => {
            println!("{}", out.num(&ksum_candidate_bound(&c).map_err(err)?));
        }
        Command::Cstar { c } => {
            println!("{}", induced_index_cstar(&c).map_err(err)?);
        }
        Command::GapBound { g } => {
            println!("{}", out.num(&gap_sum_upper_bound(&g).map_err(err)?));
        }
        Command::Region(Region::S12 { c1, c2, c12 }) => {
            let m = schneider_membership_s12(&c1, &c2, &c12).map_err(err)?;
            if let Some(piece) = m.piece {
                println!("member: piece {piece}");
                return Ok(Verdict::Holds);
            }
            match m.window {
                Some((l, hi)) => println!(
                    "not a member: c12 ∈ [{}, {}) required",
                    out.num(&l),
                    out.num(&hi)
                ),
                None => println!("not a member: c1 and c2 must lie in [0, 1]"),
            }
            return Ok(Verdict::Fails);
        }
        Command::Region(Region::Lyu2 { n, a, b, c }) => {
            if lyusternik_membership_l2(n, &a, &b, &c).map_err(err)? {
                println!("member");
            } else {
                println!("not a member: |A+B| is below (|A|^(1/{n}) + |B|^(1/{n}))^{n}");
                return Ok(Verdict::Fails);
            }
        }
        Command::Partition(PartitionCmd::Check { sets, partition }) => {
            let sys = parse_system(&read(&sets)?).map_err(|e| format!("{}: {e}", sets.display()))?;
            let p = parse_partition(&read(&partition)?)
                .map_err(|e| format!("{}: {e}", partition.display()))?;
            let v = validate_partition(&p);
            if !v.valid {
                println!("not a fractional partition: {v}");
                return Ok(Verdict::Fails);
            }
            let rep = check_fractional_subadditive_c(&sys, &p).map_err(err)?;
            let doc = json!({
                "lhs": out.num(&rep.lhs),
                "rhs": out.num(&rep.rhs),
                "holds": rep.holds,
                "equality": rep.is_equality,
                "condition": format!("{:?}", rep.condition),
            });
            println!("{doc}");
            if !rep.holds || !rep.classified_correctly() {
                return Ok(Verdict::Fails);
            }
        }
        Command::Fractal { n, k, depth, endpoints } => {
            let spec = FractalSpec::new(n, k, depth).map_err(err)?;
            let set = if endpoints { fractal_endpoints(&spec) } else { fractal_cover(&spec) };
            println!("{}", write_set(&set));
        }
        Command::Lyu3Witness { a13, a23, a123, depth } => {
            let w = fractal_lyusternik3_witness(&a13, &a23, &a123, depth).map_err(err)?;
            let achieved: Value = w
                .achieved
                .vector()
                .iter()
                .map(|x| Value::String(out.num(x)))
                .collect();
            let doc = json!({
                "n": w.params.n,
                "k1": w.params.k1,
                "k2": w.params.k2,
                "depth": depth,
                "sets": w.sets.iter().map(set_to_json).collect::<Vec<_>>(),
                "achieved": achieved,
                "target": w.target.to_json(),
                "within_bounds": w.within_bounds(),
            });
            println!("{doc}");
            if !w.within_bounds() {
                return Ok(Verdict::Fails);
            }
        }
        Command::Sweep { config } => {
            let cfg: SweepConfig = serde_json::from_str(&read(&config)?)
                .map_err(|e| format!("{}: {e}", config.display()))?;
            cfg.validate().map_err(err)?;
            let sweep = verify_lower_bound_sweep(&cfg).map_err(err)?;
            let gaps = verify_gap_claims(&cfg).map_err(err)?;
            if let Some(path) = &cfg.report {
                let file = fs::File::create(path).map_err(|e| format!("{path}: {e}"))?;
                let mut w = std::io::BufWriter::new(file);
                sweep.write_jsonl(&mut w).map_err(|e| format!("{path}: {e}"))?;
                w.flush().map_err(|e| format!("{path}: {e}"))?;
            }
            let mut summary = sweep.summary_json();
            summary["gap_claims"] = gaps.to_json();
            println!("{summary}");
            if sweep.violations > 0 || !gaps.mismatches.is_empty() {
                return Ok(Verdict::Fails);
            }
        }
        Command::Slice { grid, output } => {
            if grid < 2 {
                return Err(format!("--grid {grid}: need at least 2 points per axis"));
            }
            let step = |i: u32| Rational::new(i.into(), (grid - 1).into());
            let mut csv = String::from("c1,c2,L,M\n");
            for i in 0..grid {
                for j in 0..grid {
                    let (c1, c2) = (step(i), step(j));
                    let l = lower_bound_l(&c1, &c2).map_err(err)?;
                    let m = upper_bound_m(&c1, &c2).map_err(err)?;
                    csv.push_str(&format!(
                        "{},{},{},{}\n",
                        out.num(&c1),
                        out.num(&c2),
                        out.num(&l),
                        out.num(&m)
                    ));
                }
            }
            write_file(&output, &csv)?;
            println!("wrote {} rows to {}", grid * grid, output.display());
        }
    }
    Ok(Verdict::Holds)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Holds) => ExitCode::SUCCESS,
        Ok(Verdict::Fails) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
