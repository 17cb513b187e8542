use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mesocipher::attacks::grover_estimate;
use mesocipher::bits::{bits_to_bytes, bits_to_hex, bytes_to_bits, hex_to_bits};
use mesocipher::channel::{transmit, ChannelModel};
use mesocipher::cipher::{bob_decode, encode, otp_generate_and_wrap, Plaintext, SignalSequence};
use mesocipher::harness::{
    render_csv, run_experiment, sweep, write_csv_atomic, AttackKind, ExperimentConfig,
    ExperimentResult, Rows,
};
use mesocipher::keystream::{expand_running_key, Alphabet, SeedKey};
use mesocipher::optics::{general_overlap, Constellation, PhaseDiscriminator};
use mesocipher::{Error, Result};

#[derive(Parser)]
#[command(
    name = "mesocipher",
    version,
    about = "Coherent-state stream cipher simulator and attack harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the running key of a seed as hex symbols.
    Keystream {
        #[command(flatten)]
        key: KeyArgs,
        #[arg(long = "M", default_value_t = 32)]
        m: u64,
        #[arg(long)]
        n: usize,
    },
    /// Encode a plaintext into a signal sequence (CSV).
    Encode {
        #[command(flatten)]
        key: KeyArgs,
        #[command(flatten)]
        optics: OpticsArgs,
        #[command(flatten)]
        input: InputArgs,
        /// Signal CSV destination; stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Decode a signal CSV as the legitimate receiver.
    Decode {
        #[command(flatten)]
        key: KeyArgs,
        #[command(flatten)]
        optics: OpticsArgs,
        /// Signal CSV; stdin when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Transmission applied before detection.
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        #[arg(long = "master_seed", default_value_t = 0)]
        master_seed: u64,
        /// Write raw bytes instead of hex.
        #[arg(long)]
        raw: bool,
    },
    /// Key-generation variant: carry a random pad, print pad and ciphertext.
    OtpWrap {
        #[command(flatten)]
        key: KeyArgs,
        #[command(flatten)]
        optics: OpticsArgs,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long = "master_seed", default_value_t = 0)]
        master_seed: u64,
        /// Signal CSV destination for the pad.
        #[arg(long)]
        signal_out: Option<PathBuf>,
    },
    /// Run an attack experiment, or print the quantum search estimate.
    Attack {
        #[arg(value_enum)]
        kind: AttackArg,
        #[command(flatten)]
        exp: ExperimentArgs,
    },
    /// Run one experiment per value of a parameter.
    Sweep {
        /// One of t, r, k, alpha0, eta, b.
        #[arg(long)]
        axis: String,
        /// Comma-separated values; empty for a header-only table.
        #[arg(long, default_value = "", value_delimiter = ',')]
        values: Vec<String>,
        #[command(flatten)]
        exp: ExperimentArgs,
    },
    /// Print analytic tables as CSV.
    Table {
        #[command(subcommand)]
        table: TableCommand,
    },
}

#[derive(Subcommand)]
enum TableCommand {
    /// Log-overlap of two coherent states per amplitude and phase step.
    Overlap {
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,5")]
        alpha0: Vec<f64>,
        #[arg(long = "M", default_value_t = 32)]
        m: u64,
    },
    /// Probability of reading 1 per phase step between state and basis.
    Flip {
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
        #[arg(long = "M", default_value_t = 32)]
        m: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AttackArg {
    Exhaustive,
    Multiwindow,
    Prune,
    Grover,
}

#[derive(Args)]
struct KeyArgs {
    #[arg(long, default_value_t = 12)]
    k: u32,
    /// Seed key in hex, MSB first.
    #[arg(long = "seed-hex", conflicts_with = "seed_bits")]
    seed_hex: Option<String>,
    /// Seed key as a 0/1 string; its length overrides --k.
    #[arg(long = "seed-bits")]
    seed_bits: Option<String>,
}

impl KeyArgs {
    fn seed(&self) -> Result<SeedKey> {
        match (&self.seed_hex, &self.seed_bits) {
            (Some(h), _) => SeedKey::from_hex(h, self.k),
            (None, Some(b)) => {
                let bits = b
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(Error::Parse(format!("seed bits must be 0 or 1, got {c:?}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                SeedKey::from_bits(&bits)
            }
            (None, None) => Err(Error::Config("give --seed-hex or --seed-bits".into())),
        }
    }
}

#[derive(Args)]
struct OpticsArgs {
    #[arg(long = "M", default_value_t = 32)]
    m: u64,
    #[arg(long, default_value_t = 5.0)]
    alpha0: f64,
}

impl OpticsArgs {
    fn constellation(&self) -> Result<Constellation> {
        Constellation::new(Alphabet::new(self.m)?, self.alpha0)
    }
}

#[derive(Args)]
struct InputArgs {
    /// Plaintext as hex.
    #[arg(long = "input-hex", conflicts_with = "input_file")]
    input_hex: Option<String>,
    /// Plaintext as raw bytes from a file.
    #[arg(long = "input-file")]
    input_file: Option<PathBuf>,
}

impl InputArgs {
    fn bits(&self) -> Result<Vec<bool>> {
        match (&self.input_hex, &self.input_file) {
            (Some(h), _) => hex_to_bits(h),
            (None, Some(p)) => Ok(bytes_to_bits(&fs::read(p)?)),
            (None, None) => {
                let mut buf = Vec::new();
                io::stdin().read_to_end(&mut buf)?;
                Ok(bytes_to_bits(&buf))
            }
        }
    }
}

/// Experiment flags; names follow the config-file keys and override them.
#[derive(Args, Default)]
struct ExperimentArgs {
    /// Config file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Attack used by sweeps: exhaustive, multiwindow or prune.
    #[arg(long)]
    attack: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long = "M")]
    m: Option<String>,
    #[arg(long)]
    alpha0: Option<String>,
    #[arg(long, conflicts_with = "t")]
    eta: Option<String>,
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    v: Option<String>,
    #[arg(long)]
    tau: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    scorer: Option<String>,
    #[arg(long)]
    runs: Option<String>,
    #[arg(long = "master_seed")]
    master_seed: Option<String>,
    #[arg(long = "output_path")]
    output_path: Option<String>,
    #[arg(long)]
    order: Option<String>,
    #[arg(long = "double_encryption")]
    double_encryption: Option<String>,
    #[arg(long = "otp_variant")]
    otp_variant: Option<String>,
    #[arg(long = "english_pass")]
    english_pass: Option<String>,
    #[arg(long = "english_weight")]
    english_weight: Option<String>,
    #[arg(long)]
    timing: Option<String>,
    /// Append to an existing CSV with the same header.
    #[arg(long)]
    append: bool,
    /// Only write aggregate rows.
    #[arg(long = "aggregate-only")]
    aggregate_only: bool,
}

impl ExperimentArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        let overrides = [
            ("attack", &self.attack),
            ("k", &self.k),
            ("M", &self.m),
            ("alpha0", &self.alpha0),
            ("eta", &self.eta),
            ("t", &self.t),
            ("n", &self.n),
            ("r", &self.r),
            ("v", &self.v),
            ("tau", &self.tau),
            ("b", &self.b),
            ("scorer", &self.scorer),
            ("runs", &self.runs),
            ("master_seed", &self.master_seed),
            ("output_path", &self.output_path),
            ("order", &self.order),
            ("double_encryption", &self.double_encryption),
            ("otp_variant", &self.otp_variant),
            ("english_pass", &self.english_pass),
            ("english_weight", &self.english_weight),
            ("timing", &self.timing),
        ];
        for (key, value) in overrides {
            if let Some(value) = value {
                cfg.set(key, value)?;
            }
        }
        Ok(cfg)
    }
}

fn emit(cfg: &ExperimentConfig, results: &[ExperimentResult], args: &ExperimentArgs) -> Result<()> {
    let rows = if args.aggregate_only {
        Rows::AggregateOnly
    } else {
        Rows::All
    };
    let table = render_csv(results, rows)?;
    match &cfg.output_path {
        Some(path) => {
            write_csv_atomic(path, &table, args.append)?;
            for r in results {
                let s = &r.summary;
                println!(
                    "success {}/{} ({:.4}, 95% CI {:.4}..{:.4}), mean symbols {:.1}",
                    s.successes, s.runs, s.success_rate, s.ci_low, s.ci_high, s.mean_symbols
                );
            }
        }
        None => io::stdout().write_all(&table)?,
    }
    Ok(())
}

fn write_signal(signal: &SignalSequence, output: Option<&PathBuf>) -> Result<()> {
    match output {
        Some(path) => {
            let mut buf = Vec::new();
            signal.write_csv(&mut buf)?;
            write_csv_atomic(path, &buf, false)
        }
        None => signal.write_csv(io::stdout().lock()),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Keystream { key, m, n } => {
            let running = expand_running_key(&key.seed()?, Alphabet::new(m)?, n);
            println!("{}", running.to_hex());
        }
        Command::Encode {
            key,
            optics,
            input,
            output,
        } => {
            let x = Plaintext::new(input.bits()?)?;
            let signal = encode(&key.seed()?, &x, &optics.constellation()?);
            write_signal(&signal, output.as_ref())?;
        }
        Command::Decode {
            key,
            optics,
            input,
            eta,
            master_seed,
            raw,
        } => {
            let constellation = optics.constellation()?;
            let signal = match input {
                Some(path) => SignalSequence::read_csv(fs::File::open(path)?, constellation)?,
                None => SignalSequence::read_csv(io::stdin().lock(), constellation)?,
            };
            let received = transmit(&signal, &ChannelModel::new(eta)?);
            let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
            let x = bob_decode(&key.seed()?, &received, &mut rng);
            if raw {
                io::stdout().write_all(&bits_to_bytes(x.bits()))?;
            } else {
                println!("{}", bits_to_hex(x.bits()));
            }
        }
        Command::OtpWrap {
            key,
            optics,
            input,
            master_seed,
            signal_out,
        } => {
            let message = input.bits()?;
            let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
            let (signal, session) = otp_generate_and_wrap(
                &key.seed()?,
                message.len(),
                &message,
                &optics.constellation()?,
                &mut rng,
            )?;
            if let Some(path) = signal_out.as_ref() {
                write_signal(&signal, Some(path))?;
            }
            println!("pad {}", bits_to_hex(&session.pad));
            println!("ciphertext {}", bits_to_hex(&session.ciphertext));
        }
        Command::Attack { kind, exp } => {
            let mut cfg = exp.config()?;
            let kind = match kind {
                AttackArg::Grover => {
                    let e = grover_estimate(cfg.k, cfg.transmission()?)?;
                    println!("k,eta,N,iterations,success_prob,feasible");
                    println!(
                        "{},{},{},{},{},{}",
                        cfg.k,
                        cfg.transmission()?,
                        e.search_space,
                        e.iterations,
                        e.success_prob,
                        e.feasible
                    );
                    return Ok(());
                }
                AttackArg::Exhaustive => AttackKind::Exhaustive,
                AttackArg::Multiwindow => AttackKind::MultiWindow,
                AttackArg::Prune => AttackKind::Prune,
            };
            cfg.attack = kind;
            let result = run_experiment(&cfg)?;
            emit(&cfg, &[result], &exp)?;
        }
        Command::Sweep { axis, values, exp } => {
            let cfg = exp.config()?;
            let values: Vec<String> = values
                .into_iter()
                .filter(|v| !v.trim().is_empty())
                .collect();
            let results = sweep(&cfg, &axis, &values)?;
            let args = ExperimentArgs {
                aggregate_only: true,
                ..exp
            };
            emit(&cfg, &results, &args)?;
        }
        Command::Table { table } => match table {
            TableCommand::Overlap { alpha0, m } => {
                let alphabet = Alphabet::new(m)?;
                println!("alpha0,step,delta,log_magnitude,magnitude");
                for a in alpha0 {
                    for step in 0..=alphabet.half() {
                        let delta = std::f64::consts::TAU * step as f64 / m as f64;
                        let o = general_overlap(a, delta);
                        println!("{a},{step},{delta},{},{}", o.log_magnitude, o.magnitude());
                    }
                }
            }
            TableCommand::Flip { amplitude, m } => {
                let alphabet = Alphabet::new(m)?;
                let receiver = PhaseDiscriminator::new(amplitude, alphabet);
                println!("amplitude,step,p_one");
                for step in 0..alphabet.size() {
                    println!("{amplitude},{step},{}", receiver.p_one(step));
                }
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}
