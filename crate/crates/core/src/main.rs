//! Command-line front end: runs the verification suites, emits witness
//! certificates, re-checks certificates, and drives the failure searches.
//!
//! Exit codes: 0 pass/found, 1 fail/absent, 2 usage or format error,
//! 3 budget exhausted (unknown).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use matchings_core::cert::{
    check_certificate, pairing_certificate, unmatchable_certificate, CertError, Certificate,
};
use matchings_core::constructions::{
    build_pairing, cycle_witness, qr_witness, random_profile_tied_pair, window_witness,
    ConstructionError, WindowFamily,
};
use matchings_core::group::GroupCarrier;
use matchings_core::linear::{
    linear_witness, lmp_counterexample_search, transcendental_witness, FieldTower,
};
use matchings_core::report::{run_suite, Status, Suite, SuiteOptions};
use matchings_core::search::{fails_at_order, matching_property_upto, Bounded, Budget};
use matchings_core::MatchingError;

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

#[derive(Parser)]
#[command(
    name = "matchings",
    about = "Witness generation and verification for matchings in Abelian groups and linear matchings in field extensions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write a deterministic report.
    Verify {
        /// Suite to run: group, linear, or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Upper bound for the prime-parameterized checks.
        #[arg(long, default_value_t = 101)]
        max_p: u64,
        /// Seed for the sampled checks; exhaustive checks ignore it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report output path (JSON).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Construct a witness certificate.
    Witness {
        #[command(subcommand)]
        kind: WitnessKind,
    },
    /// Re-validate a certificate file by recomputing its claims.
    Check {
        /// Certificate path.
        cert: PathBuf,
    },
    /// Search for failure witnesses or counterexamples.
    Search {
        #[command(subcommand)]
        target: SearchTarget,
    },
}

#[derive(Args)]
struct OutArg {
    /// Certificate output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum WitnessKind {
    /// Quadratic-residue witness over Z_p, p > 5 prime.
    Qr {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Permutation-cycle witness of order k over Z_p, 2 < k < p−2.
    Cycle {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Bounded-window witness on a torsion-free carrier (int, rat, dyadic).
    Window {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 200)]
        window: i64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Pairing bijection on a seeded profile-tied pair over Z_p.
    Pairing {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Profile-tied pair found by the order-m failure search.
    Failure {
        #[arg(long)]
        group: String,
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Scalar-equivalence witness over a finite tower with prime degree.
    Linear {
        /// Tower spec, e.g. gf:5^3; alternatively give --p and --n.
        #[arg(long, conflicts_with_all = ["p", "n"])]
        tower: Option<String>,
        #[arg(long, requires = "n")]
        p: Option<u64>,
        #[arg(long, requires = "p")]
        n: Option<usize>,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Scalar-equivalence witness over the rational-function tower.
    Transcendental {
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum SearchTarget {
    /// Two distinct profile-equal matchings of the given order.
    FailsAtOrder {
        #[arg(long)]
        group: String,
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        /// Element window for infinite carriers.
        #[arg(long, default_value_t = 20)]
        window: i64,
        #[command(flatten)]
        out: OutArg,
    },
    /// A pair |A| = |B| ≤ order with 0 ∉ B admitting no matching at all.
    MatchingProperty {
        #[arg(long)]
        group: String,
        #[arg(long)]
        order: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// A subspace pair with a basis matched to no basis of the partner.
    LmpCounterexample {
        #[arg(long)]
        tower: String,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[command(flatten)]
        out: OutArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify {
            suite,
            max_p,
            seed,
            out,
        } => cmd_verify(&suite, max_p, seed, out),
        Command::Witness { kind } => cmd_witness(kind),
        Command::Check { cert } => cmd_check(&cert),
        Command::Search { target } => cmd_search(target),
    };
    ExitCode::from(code)
}

fn write_output(text: &str, out: &Option<PathBuf>) -> Result<(), u8> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", path.display());
            EXIT_USAGE
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_verify(suite: &str, max_p: u64, seed: u64, out: Option<PathBuf>) -> u8 {
    let Some(suite) = Suite::parse(suite) else {
        eprintln!("error: unknown suite {suite:?} (expected group, linear, or all)");
        return EXIT_USAGE;
    };
    let report = run_suite(&SuiteOptions { suite, max_p, seed });
    for check in &report.checks {
        let status = match check.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Unknown => "UNKNOWN",
        };
        println!("check {:<28} {status:<8} ({} ms)", check.id, check.elapsed_ms);
        for note in &check.notes {
            println!("    - {note}");
        }
    }
    println!(
        "overall: {}",
        match report.overall {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Unknown => "UNKNOWN",
        }
    );
    if let Some(path) = out {
        if let Err(code) = write_output(&report.to_json(), &Some(path)) {
            return code;
        }
    }
    if report.all_pass() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

// rejected preconditions and unavailable constructions are command
// failures (exit 1); only unparseable inputs are usage errors (exit 2)
fn construction_exit(e: &ConstructionError) -> u8 {
    match e {
        ConstructionError::InvalidArgument(_)
        | ConstructionError::InvalidOrder(_)
        | ConstructionError::InvalidWindow(_)
        | ConstructionError::Unavailable(_) => EXIT_FAIL,
        ConstructionError::Group(_) => EXIT_USAGE,
        ConstructionError::Matching(MatchingError::BudgetExceeded(_)) => EXIT_UNKNOWN,
        ConstructionError::Matching(_) => EXIT_FAIL,
    }
}

fn emit_certificate(cert: &Certificate, out: &Option<PathBuf>) -> u8 {
    // every certificate re-validates before leaving the process
    let report = match check_certificate(&cert.to_json()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: generated certificate is malformed: {e}");
            return EXIT_FAIL;
        }
    };
    if !report.ok() {
        eprintln!(
            "error: generated certificate failed self-validation: {:?}",
            report.failures
        );
        return EXIT_FAIL;
    }
    match write_output(&cert.to_json(), out) {
        Ok(()) => EXIT_PASS,
        Err(code) => code,
    }
}

fn cmd_witness(kind: WitnessKind) -> u8 {
    match kind {
        WitnessKind::Qr { p, out } => match qr_witness(p) {
            Ok(w) => emit_certificate(&w.certificate(), &out.out),
            Err(e) => {
                eprintln!("error: {e}");
                construction_exit(&e)
            }
        },
        WitnessKind::Cycle { p, k, out } => match cycle_witness(p, k) {
            Ok(w) => emit_certificate(&w.certificate(), &out.out),
            Err(e) => {
                eprintln!("error: {e}");
                construction_exit(&e)
            }
        },
        WitnessKind::Window { group, window, out } => {
            let Some(family) = WindowFamily::parse(&group) else {
                eprintln!("error: window witnesses exist for int, rat, and dyadic");
                return EXIT_USAGE;
            };
            match window_witness(family, window) {
                Ok(w) => emit_certificate(&w.certificate(), &out.out),
                Err(e) => {
                    eprintln!("error: {e}");
                    construction_exit(&e)
                }
            }
        }
        WitnessKind::Pairing { p, seed, out } => {
            let carrier = match GroupCarrier::finite(vec![p]) {
                Ok(c) if matchings_core::group::is_prime(p) => c,
                _ => {
                    eprintln!("error: pairing witnesses need a prime modulus");
                    return EXIT_USAGE;
                }
            };
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
            match random_profile_tied_pair(&carrier, &mut rng, 5) {
                Ok(pair) => {
                    let phi = match build_pairing(&pair.f, &pair.g) {
                        Ok(Some(phi)) => phi,
                        _ => {
                            eprintln!("error: pairing construction failed");
                            return EXIT_FAIL;
                        }
                    };
                    emit_certificate(
                        &pairing_certificate(&pair.f, &pair.g, &phi, Some(seed)),
                        &out.out,
                    )
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    construction_exit(&e)
                }
            }
        }
        WitnessKind::Failure {
            group,
            order,
            budget,
            out,
        } => search_fails_at_order(&group, order, budget, 20, &out.out),
        WitnessKind::Linear { tower, p, n, m, out } => {
            let spec = match (tower, p, n) {
                (Some(spec), _, _) => spec,
                (None, Some(p), Some(n)) => format!("gf:{p}^{n}"),
                _ => {
                    eprintln!("error: give --tower, or both --p and --n");
                    return EXIT_USAGE;
                }
            };
            let tower = match FieldTower::parse_spec(&spec) {
                Ok(FieldTower::Finite(t)) => t,
                Ok(FieldTower::RatFun(_)) => {
                    eprintln!("error: use the transcendental kind for the ratfun tower");
                    return EXIT_USAGE;
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            };
            match linear_witness(&tower, m) {
                Ok(w) => emit_certificate(&w.certificate(), &out.out),
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_FAIL
                }
            }
        }
        WitnessKind::Transcendental { m, out } => match transcendental_witness(m) {
            Ok(w) => emit_certificate(&w.certificate(), &out.out),
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        },
    }
}

fn cmd_check(path: &PathBuf) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return EXIT_USAGE;
        }
    };
    match check_certificate(&text) {
        Ok(report) if report.ok() => {
            println!("certificate {} ok (kind {})", path.display(), report.kind);
            EXIT_PASS
        }
        Ok(report) => {
            println!("certificate {} INVALID (kind {})", path.display(), report.kind);
            for failure in &report.failures {
                println!("    - {failure}");
            }
            EXIT_FAIL
        }
        Err(CertError::Malformed(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

/// Window of elements used when searching infinite carriers.
fn search_universe(
    carrier: &GroupCarrier,
    window: i64,
) -> Result<Vec<matchings_core::GroupElement>, u8> {
    if carrier.is_finite() {
        return Ok(carrier.elements().expect("finite"));
    }
    let mut out = Vec::new();
    for v in -window..=window {
        out.push(carrier.element_from_i64(v).map_err(|_| EXIT_USAGE)?);
    }
    Ok(out)
}

fn search_fails_at_order(
    group: &str,
    order: usize,
    budget: u64,
    window: i64,
    out: &Option<PathBuf>,
) -> u8 {
    let carrier = match GroupCarrier::parse_spec(group) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let universe = match search_universe(&carrier, window) {
        Ok(u) => u,
        Err(code) => return code,
    };
    match fails_at_order(&carrier, &universe, order, Budget(budget)) {
        Ok(Bounded::Done(Some(w))) => {
            println!(
                "found witness of order {order} over {group}: |A| = {}",
                w.f.len()
            );
            emit_certificate(&w.certificate(order, Some(budget)), out)
        }
        Ok(Bounded::Done(None)) => {
            println!("no witness of order {order} over {group} (exhaustive)");
            EXIT_FAIL
        }
        Ok(Bounded::OutOfBudget) => {
            println!("budget exhausted before deciding order {order} over {group}");
            EXIT_UNKNOWN
        }
        Err(MatchingError::BudgetExceeded(msg)) => {
            println!("budget exhausted: {msg}");
            EXIT_UNKNOWN
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn cmd_search(target: SearchTarget) -> u8 {
    match target {
        SearchTarget::FailsAtOrder {
            group,
            order,
            budget,
            window,
            out,
        } => search_fails_at_order(&group, order, budget, window, &out.out),
        SearchTarget::MatchingProperty { group, order, out } => {
            let carrier = match GroupCarrier::parse_spec(&group) {
                Ok(c) if c.is_finite() => c,
                Ok(_) => {
                    eprintln!("error: the matching-property search needs a finite group");
                    return EXIT_USAGE;
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            };
            match matching_property_upto(&carrier, order) {
                Ok(Some((a, b))) => {
                    println!(
                        "counterexample over {group}: |A| = {} with no matching",
                        a.len()
                    );
                    let len = a.len();
                    emit_certificate(&unmatchable_certificate(&carrier, &a, &b, len), &out.out)
                }
                Ok(None) => {
                    println!("matching property holds over {group} up to size {order} (exhaustive)");
                    EXIT_FAIL
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_USAGE
                }
            }
        }
        SearchTarget::LmpCounterexample { tower, budget, out } => {
            let gf = match FieldTower::parse_spec(&tower) {
                Ok(FieldTower::Finite(t)) => t,
                Ok(FieldTower::RatFun(_)) => {
                    eprintln!("error: the counterexample search needs a finite tower");
                    return EXIT_USAGE;
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_USAGE;
                }
            };
            match lmp_counterexample_search(&gf, Budget(budget)) {
                Ok(Bounded::Done(Some(cx))) => {
                    println!(
                        "counterexample in {tower}: dim {} pair with an unmatched basis",
                        cx.a.dim()
                    );
                    let cert = cx.certificate(&FieldTower::Finite(gf), Some(budget));
                    emit_certificate(&cert, &out.out)
                }
                Ok(Bounded::Done(None)) => {
                    println!("no counterexample found in {tower} (scan exhausted)");
                    EXIT_FAIL
                }
                Ok(Bounded::OutOfBudget) => {
                    println!("budget exhausted while searching {tower}");
                    EXIT_UNKNOWN
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_USAGE
                }
            }
        }
    }
}
