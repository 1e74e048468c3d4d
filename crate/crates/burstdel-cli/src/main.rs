//! `burstdel`: command-line front end for the burst-deletion codes.
//!
//! Exit codes: 0 on success, 1 when a word is not decodable or a check finds a
//! witness, 2 on bad flags, parameters or input files.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use burstdel::bounds::{lp_bound, perm_bound, redundancy_table, table_csv, BoundReport};
use burstdel::exec::{with_jobs, Exec};
use burstdel::pll2burst::pll_encode;
use burstdel::seqcore::{bit_string, deletion_ball, join_symbols, Interval, Sequence};
use burstdel::tburst::{dense_encode, DensityParams};
use burstdel::verify::{
    confusability_check, sieve, sweep_codebook, Codebook, Confusability, Decoder, Family,
    SieveRequest, DEFAULT_BUDGET,
};
use burstdel::Error;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Schema version of the files written by `encode`.
const ENCODED_SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "burstdel",
    version,
    about = "Burst-deletion codes: balls, codecs, sieving, checks and bounds"
)]
struct Cli {
    /// Worker threads for the parallel sweeps (0 = all cores, 1 = sequential).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the descendants of a word under a burst of deletions.
    Ball {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        t: usize,
        /// Comma-separated symbols, or a 0/1 string when q = 2.
        #[arg(long)]
        seq: String,
        /// Include every burst length from 1 to t.
        #[arg(long)]
        upto: bool,
    },
    /// Encode a binary message read from a file.
    Encode {
        #[arg(long, value_enum)]
        scheme: Scheme,
        #[arg(long, default_value_t = 2)]
        t: usize,
        /// Density window for the dense scheme (defaults to the standard choice).
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decode a received word against a codebook file.
    Decode {
        #[arg(long)]
        book: PathBuf,
        #[arg(long)]
        received: String,
        /// Known burst window `LO:HI` (1-based, inclusive); q-ary burst codes only.
        #[arg(long)]
        window: Option<String>,
    },
    /// Build the largest residue class of a code family and write it as a codebook.
    Sieve {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a codebook: no two codewords share a descendant; optionally decode every burst.
    Verify {
        #[arg(long)]
        book: PathBuf,
        /// Burst length to check (defaults to the codebook's own).
        #[arg(long)]
        t: Option<usize>,
        /// Also run the decoder on every burst of every codeword.
        #[arg(long)]
        sweep: bool,
    },
    /// Upper bound on the size of a burst-deletion code.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        t: usize,
        /// Bound for permutation codes of length n instead.
        #[arg(long)]
        perm: bool,
    },
    /// Write the redundancy table (formulas vs. sieved codebooks) as CSV.
    Table {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [8usize, 10, 12])]
        n: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 2)]
        t: usize,
        /// Comma-separated families (defaults to all).
        #[arg(long, value_delimiter = ',')]
        families: Vec<Family>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum Scheme {
    /// Bounded alternating segments, for bursts of two.
    Pll,
    /// Dense words: every window of δ bits holds the marker 0^t 1^t.
    Dense,
}

#[derive(Serialize)]
struct Encoded {
    schema_version: u32,
    scheme: Scheme,
    t: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<usize>,
    message: String,
    codeword: String,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::NotDecodable(_)) {
            1
        } else {
            2
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn io_failure(path: &std::path::Path, e: std::io::Error) -> Failure {
    usage(format!("{}: {e}", path.display()))
}

fn show(w: &[u16], q: u32) -> String {
    if q == 2 {
        bit_string(w)
    } else {
        join_symbols(w)
    }
}

fn parse_window(text: &str) -> Result<Interval, Failure> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| usage(format!("window {text:?} is not LO:HI")))?;
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| usage(format!("window {text:?} is not LO:HI")))
    };
    Ok(Interval::new(num(lo)?, num(hi)?)?)
}

fn print_bound(b: &BoundReport) {
    println!("bound: {}", b.floor);
    println!("exact: {}", b.value);
    println!("formula: {}", b.formula);
}

fn run(command: Command, exec: Exec) -> Result<(), Failure> {
    match command {
        Command::Ball { q, t, seq, upto } => {
            let u = Sequence::parse(&seq, q)?;
            let ball = deletion_ball(u.symbols(), t, upto)?;
            let items: Vec<String> = ball.iter().map(|w| show(w, q)).collect();
            println!("{{{}}}", items.join(if q == 2 { ", " } else { "; " }));
            println!("size {}", ball.len());
        }
        Command::Encode {
            scheme,
            t,
            delta,
            input,
            out,
        } => {
            let text = fs::read_to_string(&input).map_err(|e| io_failure(&input, e))?;
            let x = Sequence::parse(&text, 2)?;
            let (y, delta) = match scheme {
                Scheme::Pll => {
                    if t != 2 {
                        return Err(usage(
                            "the pll scheme corrects bursts of exactly two deletions (--t 2)",
                        ));
                    }
                    (pll_encode(x.symbols())?, None)
                }
                Scheme::Dense => {
                    let dp = match delta {
                        Some(d) => DensityParams::with_delta(x.len(), t, d)?,
                        None => DensityParams::new(x.len(), t)?,
                    };
                    (dense_encode(x.symbols(), &dp)?, Some(dp.delta))
                }
            };
            let record = Encoded {
                schema_version: ENCODED_SCHEMA_VERSION,
                scheme,
                t,
                delta,
                message: bit_string(x.symbols()),
                codeword: bit_string(&y),
            };
            let json = serde_json::to_string_pretty(&record).map_err(|e| usage(e.to_string()))?;
            fs::write(&out, json + "\n").map_err(|e| io_failure(&out, e))?;
            println!("{}", record.codeword);
            println!("length {} -> {}", x.len(), y.len());
        }
        Command::Decode {
            book,
            received,
            window,
        } => {
            let book = Codebook::load(&book)?;
            let q = book.q;
            // Permutations use the symbols 1..=n.
            let alphabet = if book.spec.family() == Family::Perm {
                q + 1
            } else {
                q
            };
            let y = Sequence::parse(&received, alphabet)?;
            let decoder = Decoder::new(book.spec.clone(), exec)?;
            let u = match window {
                Some(w) => decoder.decode_in(y.symbols(), parse_window(&w)?)?,
                None => decoder.decode(y.symbols())?,
            };
            println!("{}", show(&u, q));
        }
        Command::Sieve {
            family,
            n,
            q,
            t,
            delta,
            p,
            budget,
            out,
        } => {
            let mut req = SieveRequest::new(family, n, q, t).with_budget(budget);
            if let Some(d) = delta {
                req = req.with_delta(d);
            }
            if let Some(p) = p {
                req = req.with_p(p);
            }
            let book = sieve(&req, exec)?;
            book.save(&out)?;
            println!("family {family}");
            println!("size {}", book.size());
            match book.redundancy_bits {
                Some(r) => println!("redundancy_bits {r:.6}"),
                None => println!("redundancy_bits -"),
            }
        }
        Command::Verify { book, t, sweep } => {
            let book = Codebook::load(&book)?;
            let t = t.unwrap_or(book.t);
            match confusability_check(&book.words, t) {
                Confusability::Pass => {
                    println!("confusability: pass ({} codewords, t = {t})", book.size())
                }
                Confusability::Witness {
                    first,
                    second,
                    descendant,
                } => {
                    println!("confusability: witness");
                    println!("first {}", show(&first, book.q));
                    println!("second {}", show(&second, book.q));
                    println!("descendant {}", show(&descendant, book.q));
                    return Err(Failure {
                        code: 1,
                        message: "codewords share a descendant".into(),
                    });
                }
            }
            if sweep {
                let decoder = Decoder::new(book.spec.clone(), exec)?;
                if let Some(w) = book.first_non_member(&decoder) {
                    return Err(Failure {
                        code: 1,
                        message: format!("{} is not a codeword", show(w, book.q)),
                    });
                }
                let report = sweep_codebook(&book, &decoder, exec)?;
                match report.failure {
                    None => println!("sweep: pass ({} trials)", report.trials),
                    Some(f) => {
                        println!("sweep: failure");
                        println!("codeword {}", show(&f.codeword, book.q));
                        println!("received {}", show(&f.received, book.q));
                        println!("outcome {}", f.outcome);
                        return Err(Failure {
                            code: 1,
                            message: "a burst was not corrected".into(),
                        });
                    }
                }
            }
        }
        Command::Bounds { n, q, t, perm } => {
            let b = if perm {
                perm_bound(n, t)?
            } else {
                lp_bound(n, t, q)?
            };
            print_bound(&b);
        }
        Command::Table {
            out,
            n,
            q,
            t,
            families,
            budget,
        } => {
            let families = if families.is_empty() {
                Family::ALL.to_vec()
            } else {
                families
            };
            let rows = redundancy_table(&families, &n, q, t, budget, exec);
            fs::write(&out, table_csv(&rows)).map_err(|e| io_failure(&out, e))?;
            println!("{} rows written to {}", rows.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.jobs == 1 {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    match with_jobs(cli.jobs, move || run(cli.command, exec)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
