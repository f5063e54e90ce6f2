//! CLI for the set-code library: encode/decode through files, seeded channel
//! simulation, exhaustive verification, bound tables and the hash-sum census.
//!
//! Exit codes: 0 success/PASS, 1 FAIL, 2 usage error, 3 inconclusive
//! (enumeration budget exceeded). The `SETCODE_BUDGET` environment variable
//! overrides the default enumeration budget.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use setcode::channel::{self, ChannelSpec, Eps, ErrorKind};
use setcode::delhash::{bf_hash, DeletionHash};
use setcode::io::{message_from_text, message_to_text, Codec, ParamsFile};
use setcode::noloss::{hashsum_census, hashsum_census_for, HashSum, HashSumParams};
use setcode::seq::{set_from_text, set_to_text};

const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Parser)]
#[command(name = "setcode", about = "error-correcting codes over sets of sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CodecArgs {
    /// Params JSON file selecting the codec family and instance.
    #[arg(long)]
    params: PathBuf,
    /// Enumeration budget (candidate sets); env SETCODE_BUDGET overrides the default.
    #[arg(long)]
    budget: Option<u128>,
    /// Directory of cached brute-force hash tables (eps >= 2).
    #[arg(long)]
    hash_cache: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a message file into a set file.
    Encode {
        #[command(flatten)]
        codec: CodecArgs,
        /// Message text file (rank/bits/int/sym lines).
        #[arg(long)]
        message: PathBuf,
        /// Output set file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Decode a set file back into a message file.
    Decode {
        #[command(flatten)]
        codec: CodecArgs,
        /// Received set file.
        #[arg(long)]
        set: PathBuf,
        /// Output message file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run seeded encode -> corrupt -> decode trials.
    Simulate {
        #[command(flatten)]
        codec: CodecArgs,
        /// Channel spec `s:t:eps:KIND[:kplus:kminus]`, eps numeric or `*`.
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Allow a spec beyond the codec's declared capability.
        #[arg(long)]
        stress: bool,
    },
    /// Exhaustively verify ball disjointness over sampled codewords.
    Verify {
        #[command(flatten)]
        codec: CodecArgs,
        /// Channel spec; defaults to the codec's declared capability.
        #[arg(long)]
        spec: Option<String>,
        /// How many distinct codewords to check.
        #[arg(long, default_value_t = 10)]
        codewords: usize,
        #[arg(long, default_value_t = 17)]
        seed: u64,
    },
    /// Print the redundancy bound and construction tables at given parameters.
    Bounds {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 0)]
        s: usize,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        eps: usize,
        #[arg(long)]
        csv: bool,
    },
    /// Exhaustive hash-sum census: the best target and its class size.
    Census {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 1)]
        eps: usize,
        #[arg(long)]
        budget: Option<u128>,
        #[arg(long)]
        hash_cache: Option<PathBuf>,
    },
}

fn budget_of(explicit: Option<u128>) -> u128 {
    explicit
        .or_else(|| std::env::var("SETCODE_BUDGET").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(DEFAULT_BUDGET)
}

fn load_or_build_hash(eps: usize, n: usize, dir: &Path) -> anyhow::Result<DeletionHash> {
    let path = dir.join(format!("hash_eps{eps}_n{n}.bin"));
    if path.exists() {
        let bytes = fs::read(&path)?;
        let hash = DeletionHash::from_bytes(&bytes)
            .with_context(|| format!("corrupt hash cache {}", path.display()))?;
        if hash.eps() == eps && hash.n() == n {
            return Ok(hash);
        }
        return Err(anyhow!("hash cache {} holds different parameters", path.display()));
    }
    let hash = bf_hash(eps, n)?;
    fs::create_dir_all(dir)?;
    fs::write(&path, hash.to_bytes()?)?;
    Ok(hash)
}

fn build_codec(args: &CodecArgs) -> anyhow::Result<Codec> {
    let text = fs::read_to_string(&args.params)
        .with_context(|| format!("reading {}", args.params.display()))?;
    let file: ParamsFile = serde_json::from_str(&text).context("parsing params JSON")?;
    // eps >= 2 hash-sum instances may use a cached brute-force table
    if let (ParamsFile::Hashsum { params }, Some(dir)) = (&file, &args.hash_cache) {
        if params.eps >= 2 {
            let hash = load_or_build_hash(params.eps, params.l, dir)?;
            return Ok(Codec::HashSum(HashSum::with_hash(*params, hash)?));
        }
    }
    Ok(Codec::from_params(&file)?)
}

/// Is the requested corruption within the codec's declared capability?
fn within_capability(declared: &ChannelSpec, requested: &ChannelSpec) -> bool {
    let eps_le = |a: &Eps, b: &Eps| match (a, b) {
        (_, Eps::Unbounded) => true,
        (Eps::Unbounded, Eps::Bounded(_)) => false,
        (Eps::Bounded(x), Eps::Bounded(y)) => x <= y,
    };
    let kind_ok = match (requested.kind, declared.kind) {
        (a, b) if a == b => true,
        // an arbitrary-edit guarantee covers substitutions and deletions
        (ErrorKind::Substitution | ErrorKind::Deletion, ErrorKind::Edit) => true,
        (
            ErrorKind::LimitedMagnitude { k_plus: a, k_minus: b },
            ErrorKind::LimitedMagnitude { k_plus: c, k_minus: d },
        ) => a <= c && b <= d,
        _ => false,
    };
    requested.s <= declared.s && requested.t <= declared.t && eps_le(&requested.eps, &declared.eps) && kind_ok
}

fn run() -> anyhow::Result<i32> {
    match Cli::parse().command {
        Command::Encode { codec, message, out } => {
            let code = build_codec(&codec)?;
            let items = message_from_text(&fs::read_to_string(&message)?)?;
            let set = match code.encode_items(&items, budget_of(codec.budget)) {
                Ok(set) => set,
                Err(e @ setcode::Error::OutOfRange(_)) => {
                    eprintln!("{e}");
                    return Ok(2);
                }
                Err(e) => return Err(e.into()),
            };
            fs::write(&out, set_to_text(&set))?;
            match code.redundancy_bits() {
                Some(r) => println!("family={} redundancy_bits={r:.4}", code.family()),
                None => println!("family={} redundancy: see census", code.family()),
            }
            Ok(0)
        }
        Command::Decode { codec, set, out } => {
            let code = build_codec(&codec)?;
            let received = set_from_text(&fs::read_to_string(&set)?)?;
            match code.decode_items(&received) {
                Ok(items) => {
                    fs::write(&out, message_to_text(&items))?;
                    println!("decoded");
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("decode failed: {e}");
                    Ok(1)
                }
            }
        }
        Command::Simulate { codec, spec, seed, trials, stress } => {
            let code = build_codec(&codec)?;
            let spec = ChannelSpec::parse(&spec)?;
            if !stress && !within_capability(&code.channel_spec(), &spec) {
                eprintln!(
                    "spec {} exceeds the declared capability {}; pass --stress to run anyway",
                    spec.format(),
                    code.channel_spec().format()
                );
                return Ok(2);
            }
            let budget = budget_of(codec.budget);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut successes = 0u64;
            for trial in 0..trials {
                let set = code.sample_codeword(&mut rng, budget)?;
                let received = channel::corrupt(&set, &spec, seed ^ (trial << 1))?;
                if code.decode_to_set(&received).map(|d| d == set).unwrap_or(false) {
                    successes += 1;
                }
            }
            println!(
                "spec={} trials={trials} successes={successes} rate={:.2}%",
                spec.format(),
                100.0 * successes as f64 / trials.max(1) as f64
            );
            Ok(0)
        }
        Command::Verify { codec, spec, codewords, seed } => {
            let code = build_codec(&codec)?;
            let spec = match spec {
                Some(s) => ChannelSpec::parse(&s)?,
                None => code.channel_spec(),
            };
            let budget = budget_of(codec.budget);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut book = Vec::new();
            while book.len() < codewords {
                let set = code.sample_codeword(&mut rng, budget)?;
                if !book.contains(&set) {
                    book.push(set);
                }
            }
            match channel::verify_correcting(&book, &spec, budget) {
                Ok(channel::Verdict::Correcting) => {
                    println!("PASS: {} codewords, spec {}", book.len(), spec.format());
                    Ok(0)
                }
                Ok(channel::Verdict::Confusable { i, j, common }) => {
                    println!("FAIL: codewords {i} and {j} share an output");
                    print!("{}", set_to_text(&common));
                    Ok(1)
                }
                Err(setcode::Error::BudgetExceeded { needed, budget }) => {
                    println!("inconclusive: needs {needed} candidates, budget {budget}");
                    Ok(3)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Bounds { m, l, s, t, eps, csv } => {
            if csv {
                print!("{}", setcode::bounds::render_csv(m, l, s, t, eps));
            } else {
                print!("{}", setcode::bounds::render_tables(m, l, s, t, eps));
            }
            Ok(0)
        }
        Command::Census { m, l, eps, budget, hash_cache } => {
            let budget = budget_of(budget);
            let census = if let (true, Some(dir)) = (eps >= 2, &hash_cache) {
                let hash = load_or_build_hash(eps, l, dir)?;
                let probe = HashSum::with_hash(HashSumParams { m, l, eps, a: 0 }, hash)?;
                hashsum_census_for(&probe, budget)?
            } else {
                hashsum_census(m, l, eps, budget)?
            };
            let classes = census.counts.len() as u64;
            let bound = (&census.total + BigUint::from(classes - 1)) / BigUint::from(classes);
            println!(
                "census M={m} L={l} eps={eps}: best_a={:#b} class_size={} pigeonhole_bound={bound} total={}",
                census.best_a, census.best_count, census.total
            );
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            // BudgetExceeded anywhere maps to "inconclusive"
            if let Some(setcode::Error::BudgetExceeded { needed, budget }) =
                e.downcast_ref::<setcode::Error>()
            {
                eprintln!("inconclusive: needs {needed} candidates, budget {budget}");
                return ExitCode::from(3);
            }
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
