//! Command-line front end: every chain, eigenbasis, distance curve,
//! absorption table, shuffle law, and the acceptance suite as reproducible
//! batch commands.

use clap::{Args, Parser, Subcommand, ValueEnum};
use hopfchain::absorb::{self, CharacterSpec};
use hopfchain::chain::{self, ChainDirection};
use hopfchain::emit::{self, Meta};
use hopfchain::error::HopfError;
use hopfchain::gens::{BasisElt, Partition};
use hopfchain::hopf::HopfInstance;
use hopfchain::instances::deck::DeckInstance;
use hopfchain::instances::graphs::{
    parse_edge_list, LabeledGraphInstance, UnlabeledGraphInstance,
};
use hopfchain::instances::simplicial::{parse_faces, SimplicialInstance};
use hopfchain::instances::symfn::{QuotientSymFnInstance, SymFnInstance};
use hopfchain::ratio::{format_rat, parse_rat, Rat};
use hopfchain::{shuffle, spectral};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "hopfchain",
    version,
    about = "Markov chains from combinatorial Hopf algebras: exact matrices, eigenbases, samplers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Direction {
    Inverse,
    Forward,
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance: rock (symmetric functions), quotient-sym, deck, graph,
    /// labeled-graph, complex
    #[arg(long)]
    instance: String,
    /// Degree of the chain block (rock size / vertex count / deck size)
    #[arg(long)]
    n: Option<u32>,
    /// Deck composition, e.g. "1,1,1,1" or "3,2,1"
    #[arg(long)]
    nu: Option<String>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output path; defaults to stdout (or HOPFCHAIN_OUT_DIR/<name> if set)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact transition matrix of the degree-n block
    Matrix {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, default_value_t = 2)]
        a: u32,
        /// Chain direction for word instances (inverse = Hopf power)
        #[arg(long, value_enum, default_value = "inverse")]
        direction: Direction,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Left/right eigenbases with the duality certificate
    Eigen {
        #[command(flatten)]
        inst: InstanceArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sample trajectories (seed required; reproducible)
    Simulate {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, default_value_t = 2)]
        a: u32,
        /// Start state: rock "3,1"; deck word "213"
        #[arg(long)]
        start: Option<String>,
        /// Edge list file (graph instances)
        #[arg(long)]
        graph_file: Option<PathBuf>,
        /// Maximal-faces file (complex instance)
        #[arg(long)]
        complex_file: Option<PathBuf>,
        #[arg(long)]
        steps: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trajectories: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// TV/separation/sup distance to stationarity per step count l
    Distance {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long, default_value_t = 2)]
        a: u32,
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        graph_file: Option<PathBuf>,
        #[arg(long)]
        complex_file: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        lmax: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Chromatic quasisymmetric coefficients and absorption curves
    Absorb {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        graph_file: Option<PathBuf>,
        #[arg(long)]
        complex_file: Option<PathBuf>,
        /// Target generators by label, semicolon separated (default: all
        /// degree-one generators)
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value_t = 8)]
        kmax: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// GSR and q-shuffle tables, named eigenfunctions, q-samples
    Shuffle {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        a: u32,
        /// Emit the q-deformed law instead of the GSR table (rational, e.g. "1/2")
        #[arg(long)]
        q: Option<String>,
        /// What to emit: table | eigenfunctions | sample
        #[arg(long, default_value = "table")]
        mode: String,
        #[arg(long)]
        nu: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        samples: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the full acceptance suite and print one pass/fail line per criterion
    Verify,
}

enum AnyInstance {
    Sym(SymFnInstance),
    Quotient(QuotientSymFnInstance),
    Deck(DeckInstance),
    Graph(UnlabeledGraphInstance),
    LabeledGraph(LabeledGraphInstance),
    Complex(SimplicialInstance),
}

impl AnyInstance {
    fn as_dyn(&self) -> &dyn HopfInstance {
        match self {
            AnyInstance::Sym(i) => i,
            AnyInstance::Quotient(i) => i,
            AnyInstance::Deck(i) => i,
            AnyInstance::Graph(i) => i,
            AnyInstance::LabeledGraph(i) => i,
            AnyInstance::Complex(i) => i,
        }
    }
}

fn parse_nu(s: &str) -> Result<Vec<u32>, HopfError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| HopfError::InvalidInput(format!("bad composition entry {t}")))
        })
        .collect()
}

fn build_instance(args: &InstanceArgs) -> Result<(AnyInstance, u32), HopfError> {
    match args.instance.as_str() {
        "rock" | "sym" => {
            let n = args.n.ok_or_else(|| HopfError::InvalidInput("--n required".into()))?;
            Ok((AnyInstance::Sym(SymFnInstance::new(n)), n))
        }
        "quotient-sym" => {
            let n = args.n.ok_or_else(|| HopfError::InvalidInput("--n required".into()))?;
            Ok((AnyInstance::Quotient(QuotientSymFnInstance::new(n)), n))
        }
        "deck" => {
            let nu = args
                .nu
                .as_deref()
                .map(parse_nu)
                .transpose()?
                .or_else(|| args.n.map(|n| vec![1; n as usize]))
                .ok_or_else(|| HopfError::InvalidInput("--nu or --n required for deck".into()))?;
            let deck = DeckInstance::new(nu)?;
            let n = deck.n();
            Ok((AnyInstance::Deck(deck), n))
        }
        "graph" => {
            let n = args.n.ok_or_else(|| HopfError::InvalidInput("--n required".into()))?;
            Ok((AnyInstance::Graph(UnlabeledGraphInstance::new(n)?), n))
        }
        "labeled-graph" => {
            let n = args.n.ok_or_else(|| HopfError::InvalidInput("--n required".into()))?;
            Ok((AnyInstance::LabeledGraph(LabeledGraphInstance::new(n)?), n))
        }
        "complex" => {
            let n = args.n.ok_or_else(|| HopfError::InvalidInput("--n required".into()))?;
            Ok((AnyInstance::Complex(SimplicialInstance::new(n)?), n))
        }
        other => Err(HopfError::InvalidInput(format!("unknown instance {other}"))),
    }
}

fn parse_start(
    inst: &AnyInstance,
    n: u32,
    start: &Option<String>,
    graph_file: &Option<PathBuf>,
    complex_file: &Option<PathBuf>,
) -> Result<BasisElt, HopfError> {
    match inst {
        AnyInstance::Sym(_) | AnyInstance::Quotient(_) => {
            let s = start
                .as_deref()
                .ok_or_else(|| HopfError::InvalidInput("--start partition required".into()))?;
            let parts = parse_nu(s)?;
            let p = Partition::new(parts);
            if p.n() != n {
                return Err(HopfError::InvalidInput(format!(
                    "partition {p} has size {} (block is {n})",
                    p.n()
                )));
            }
            Ok(SymFnInstance::partition_to_elt(&p))
        }
        AnyInstance::Deck(_) => {
            let s = start
                .as_deref()
                .ok_or_else(|| HopfError::InvalidInput("--start word required".into()))?;
            let values: Vec<u32> = if s.contains(',') || s.contains('.') {
                s.split([',', '.'])
                    .map(|t| t.trim().parse::<u32>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| HopfError::InvalidInput(format!("bad word {s}")))?
            } else {
                s.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .ok_or_else(|| HopfError::InvalidInput(format!("bad word {s}")))
                    })
                    .collect::<Result<_, _>>()?
            };
            Ok(DeckInstance::word_from_values(&values))
        }
        AnyInstance::Graph(_) => {
            let path = graph_file
                .as_deref()
                .ok_or_else(|| HopfError::InvalidInput("--graph-file required".into()))?;
            let text = std::fs::read_to_string(path)?;
            let g = parse_edge_list(&text, n)?;
            UnlabeledGraphInstance::elt_of_graph(&g)
        }
        AnyInstance::LabeledGraph(_) => {
            let path = graph_file
                .as_deref()
                .ok_or_else(|| HopfError::InvalidInput("--graph-file required".into()))?;
            let text = std::fs::read_to_string(path)?;
            let g = parse_edge_list(&text, n)?;
            Ok(LabeledGraphInstance::elt_of_graph(&g))
        }
        AnyInstance::Complex(_) => {
            let path = complex_file
                .as_deref()
                .ok_or_else(|| HopfError::InvalidInput("--complex-file required".into()))?;
            let text = std::fs::read_to_string(path)?;
            let c = parse_faces(&text, n)?;
            SimplicialInstance::elt_of_complex(&c)
        }
    }
}

fn write_output(output: &OutputArgs, default_name: &str, content: &str) -> Result<(), HopfError> {
    let path = match (&output.out, std::env::var_os("HOPFCHAIN_OUT_DIR")) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) => {
            let mut p = PathBuf::from(dir);
            p.push(default_name);
            Some(p)
        }
        (None, None) => None,
    };
    match path {
        Some(p) => {
            std::fs::write(&p, content)?;
            eprintln!("wrote {}", p.display());
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn exit_code(err: &HopfError) -> i32 {
    match err {
        HopfError::NoMarkovRescaling { .. } => 3,
        HopfError::UnsupportedSize(_) => 4,
        HopfError::InternalInconsistency(_) => 5,
        _ => 2,
    }
}

fn run() -> Result<i32, HopfError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Matrix { inst, a, direction, output } => {
            let (any, n) = build_instance(&inst)?;
            let resc = chain::markov_instance(any.as_dyn(), n)?;
            let mut k = chain::transition_matrix(&resc, n, a)?;
            if direction == Direction::Forward
                && k.direction == ChainDirection::HopfInverse
                && resc.kind() == hopfchain::AlgebraKind::FreeCocommutative
            {
                // polynomial chains already run forward; word chains flip
                k = k.transpose()?;
            }
            let meta: Meta = vec![
                (
                    "command".into(),
                    format!("matrix --instance {} --n {} --a {}", inst.instance, n, a),
                ),
                ("instance".into(), resc.name()),
            ];
            let content = match output.format {
                Format::Csv => emit::matrix_csv(&k, &meta),
                Format::Json => emit::matrix_json(&k, &meta),
            };
            write_output(&output, "matrix.csv", &content)?;
            Ok(0)
        }
        Command::Eigen { inst, output } => {
            let (any, n) = build_instance(&inst)?;
            let resc = chain::markov_instance(any.as_dyn(), n)?;
            let sys = spectral::eigensystem(&resc, n)?;
            let cert = spectral::duality_certificate(&sys);
            let meta: Meta = vec![
                ("command".into(), format!("eigen --instance {} --n {}", inst.instance, n)),
                ("instance".into(), resc.name()),
            ];
            let content = match output.format {
                Format::Csv => emit::eigen_csv(&sys, cert, &meta),
                Format::Json => emit::eigen_json(&sys, cert, &meta),
            };
            write_output(&output, "eigen.csv", &content)?;
            if !cert {
                return Err(HopfError::InternalInconsistency(
                    "duality certificate failed".into(),
                ));
            }
            Ok(0)
        }
        Command::Simulate {
            inst,
            a,
            start,
            graph_file,
            complex_file,
            steps,
            seed,
            trajectories,
            output,
        } => {
            let (any, n) = build_instance(&inst)?;
            let start_elt = parse_start(&any, n, &start, &graph_file, &complex_file)?;
            let resc = chain::markov_instance(any.as_dyn(), n)?;
            let mut sim = chain::Simulator::new(&resc, n, a)?;
            let meta: Meta = vec![
                (
                    "command".into(),
                    format!(
                        "simulate --instance {} --n {} --a {} --steps {} --seed {}",
                        inst.instance, n, a, steps, seed
                    ),
                ),
                ("instance".into(), resc.name()),
            ];
            let mut lines = Vec::new();
            for t in 0..trajectories {
                let traj = sim.trajectory(&start_elt, steps, seed, t as u64)?;
                if trajectories > 1 {
                    lines.push(format!("# trajectory {t}"));
                }
                lines.extend(traj.iter().map(|b| resc.basis_label(b)));
            }
            let content = emit::trajectory_text(&lines, &meta);
            write_output(&output, "trajectory.txt", &content)?;
            Ok(0)
        }
        Command::Distance { inst, a, start, graph_file, complex_file, lmax, output } => {
            let (any, n) = build_instance(&inst)?;
            let start_elt = parse_start(&any, n, &start, &graph_file, &complex_file)?;
            let resc = chain::markov_instance(any.as_dyn(), n)?;
            let k = chain::transition_matrix(&resc, n, a)?;
            let i0 = k
                .index_of(&start_elt)
                .ok_or_else(|| HopfError::InvalidInput("start outside the block".into()))?;
            // target: point mass at the unique absorbing state, or the
            // uniform distribution on the start's stationary family
            let pi = match chain::stationary_set(&resc, n)? {
                chain::StationarySet::Absorbing(v) if v.len() == 1 => {
                    hopfchain::LinComb::singleton(v[0].clone(), Rat::from_integer(1.into()))
                }
                chain::StationarySet::Absorbing(_) => {
                    return Err(HopfError::NotApplicable(
                        "distance target needs a unique absorbing state".into(),
                    ))
                }
                chain::StationarySet::UniformFamilies { families, .. } => {
                    let fam = families
                        .iter()
                        .find(|f| f.contains(&start_elt))
                        .ok_or_else(|| {
                            HopfError::NotApplicable("start not in a stationary family".into())
                        })?;
                    let w = Rat::new(1.into(), (fam.len() as i64).into());
                    let mut pi = hopfchain::LinComb::zero();
                    for b in fam {
                        pi.add_term(b.clone(), w.clone());
                    }
                    pi
                }
            };
            let meta: Meta = vec![(
                "command".into(),
                format!(
                    "distance --instance {} --n {} --a {} --lmax {}",
                    inst.instance, n, a, lmax
                ),
            )];
            let mut lines = emit::meta_header(&meta);
            lines.push_str("l,tv,sep,linf\n");
            let mut power = k.clone();
            for l in 1..=lmax {
                if l > 1 {
                    power = power.multiply(&k)?;
                }
                let row = power.row_distribution(i0);
                let report = chain::distances(&k.basis, &row, &pi);
                let fmt_opt = |o: &Option<Rat>| -> String {
                    o.as_ref().map(format_rat).unwrap_or_else(|| "undefined".into())
                };
                lines.push_str(&format!(
                    "{l},{},{},{}\n",
                    format_rat(&report.tv),
                    fmt_opt(&report.sep),
                    fmt_opt(&report.linf)
                ));
            }
            write_output(&output, "distance.csv", &lines)?;
            Ok(0)
        }
        Command::Absorb { inst, start, graph_file, complex_file, target, kmax, output } => {
            let (any, n) = build_instance(&inst)?;
            let start_elt = parse_start(&any, n, &start, &graph_file, &complex_file)?;
            let resc = chain::markov_instance(any.as_dyn(), n)?;
            let spec = match &target {
                None => CharacterSpec::degree_one(any.as_dyn())?,
                Some(labels) => {
                    let wanted: Vec<&str> = labels.split(';').map(|s| s.trim()).collect();
                    let mut set = std::collections::BTreeSet::new();
                    for d in 1..=n {
                        for c in any.as_dyn().generators(d)? {
                            if wanted.contains(&any.as_dyn().generator_label(c).as_str()) {
                                set.insert(c);
                            }
                        }
                    }
                    CharacterSpec::new(set)?
                }
            };
            let chi = absorb::chromatic_quasisym(&resc, &start_elt, &spec)?;
            let curve = absorb::absorption_curve(&resc, &start_elt, &spec, kmax)?;
            let meta: Meta = vec![(
                "command".into(),
                format!("absorb --instance {} --n {} --kmax {}", inst.instance, n, kmax),
            )];
            match output.format {
                Format::Json => {
                    let content = emit::chi_json(&chi, &meta);
                    write_output(&output, "chi.json", &content)?;
                }
                Format::Csv => {
                    let content = emit::curve_csv(&curve, "k", "absorption", &meta);
                    write_output(&output, "absorption.csv", &content)?;
                }
            }
            Ok(0)
        }
        Command::Shuffle { n, a, q, mode, nu, seed, samples, output } => {
            let meta: Meta = vec![(
                "command".into(),
                format!("shuffle --n {n} --a {a} --mode {mode}"),
            )];
            match mode.as_str() {
                "table" => {
                    let content = match &q {
                        None => {
                            let k = shuffle::gsr_forward_matrix(n, a)?;
                            match output.format {
                                Format::Csv => emit::matrix_csv(&k, &meta),
                                Format::Json => emit::matrix_json(&k, &meta),
                            }
                        }
                        Some(qs) => {
                            let qv = parse_rat(qs).ok_or_else(|| {
                                HopfError::InvalidInput(format!("bad rational {qs}"))
                            })?;
                            let rows: Vec<(String, Rat)> = shuffle::all_permutations(n)
                                .into_iter()
                                .map(|w| {
                                    let p = shuffle::q_shuffle_probability(n, &qv, &w)?;
                                    let label: String =
                                        w.iter().map(|v| v.to_string()).collect();
                                    Ok((label, p))
                                })
                                .collect::<Result<_, HopfError>>()?;
                            match output.format {
                                Format::Csv => {
                                    emit::distribution_csv(&rows, "probability", &meta)
                                }
                                Format::Json => emit::distribution_json(&rows, "q-shuffle", &meta),
                            }
                        }
                    };
                    write_output(&output, "shuffle.csv", &content)?;
                }
                "eigenfunctions" => {
                    let nu = nu
                        .as_deref()
                        .map(parse_nu)
                        .transpose()?
                        .unwrap_or_else(|| vec![1; n as usize]);
                    let fams = shuffle::named_eigenfunctions(&nu, a)?;
                    let mut content = emit::meta_header(&meta);
                    for fam in &fams {
                        content.push_str(&format!(
                            "# {} (eigenvalue 1/a^{})\n",
                            fam.name, fam.exponent
                        ));
                        for (w, v) in &fam.values {
                            let label: String = w.iter().map(|x| x.to_string()).collect();
                            content.push_str(&format!("{label},{}\n", format_rat(v)));
                        }
                    }
                    write_output(&output, "eigenfunctions.csv", &content)?;
                }
                "sample" => {
                    let qv = match &q {
                        Some(qs) => parse_rat(qs).ok_or_else(|| {
                            HopfError::InvalidInput(format!("bad rational {qs}"))
                        })?,
                        None => Rat::from_integer(1.into()),
                    };
                    let seed = seed.ok_or_else(|| {
                        HopfError::InvalidInput("--seed required for sampling".into())
                    })?;
                    let mut content = emit::meta_header(&meta);
                    for s in 0..samples {
                        let w = shuffle::q_shuffle_sample_seeded(n, &qv, seed, s as u64)?;
                        let label: String = w.iter().map(|x| x.to_string()).collect();
                        content.push_str(&label);
                        content.push('\n');
                    }
                    write_output(&output, "samples.txt", &content)?;
                }
                other => {
                    return Err(HopfError::InvalidInput(format!("unknown shuffle mode {other}")))
                }
            }
            Ok(0)
        }
        Command::Verify => {
            let results = hopfchain::acceptance::run_all();
            let mut all_pass = true;
            for r in &results {
                let status = if r.pass { "PASS" } else { "FAIL" };
                println!("{status}  {:2}  {}  ({:.2}s)  {}", r.id, r.name, r.seconds, r.detail);
                all_pass &= r.pass;
            }
            if all_pass {
                println!("all {} criteria pass", results.len());
                Ok(0)
            } else {
                Ok(5)
            }
        }
    }
}

fn main() {
    match run() {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(exit_code(&err));
        }
    }
}
