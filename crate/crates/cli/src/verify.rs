use crate::args::{Suite, VerifyArgs};
use crate::checks::{self, CheckOutcome};
use crate::error::{EXIT_OK, EXIT_VERIFY_FAILED};

/// Grid cells of the oracle scan in the pencil suite.
pub const VERIFY_GRID_POINTS: usize = 100_000;

fn suite_name(suite: Suite) -> &'static str {
    match suite {
        Suite::Pencil => "pencil",
        Suite::Model => "model",
        Suite::Geometry => "geometry",
        Suite::All => "all",
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Vec<CheckOutcome> {
    match suite {
        Suite::Pencil => vec![
            checks::oracle_agreement(seed, 50, VERIFY_GRID_POINTS),
            checks::root_bound_agreement(seed, 50),
            checks::trivialization_invariance(seed, 50, &[-5.0, -1.0, 0.3, 2.0, 5.0]),
        ],
        Suite::Model => vec![
            checks::substitution_fixture(),
            checks::substitution_identity(seed, 100),
            checks::gaussian_identity(seed, 100),
            checks::harmonic_norm(seed, 20),
            checks::bergman_consistency(seed, 50),
        ],
        Suite::Geometry => vec![
            checks::y_equivalence(8),
            checks::restriction_interlacing(seed, 100),
            checks::equal_weight_emptiness(3),
            checks::bigness_fixtures(),
        ],
        Suite::All => [Suite::Pencil, Suite::Model, Suite::Geometry]
            .into_iter()
            .flat_map(|s| run_suite(s, seed))
            .collect(),
    }
}

pub fn print_table(title: &str, outcomes: &[CheckOutcome]) {
    println!("suite {title}");
    println!(
        "  {:<56} {:>6} {:>12} {:>10} {:>8}  status",
        "property", "cases", "worst", "tolerance", "seconds"
    );
    for o in outcomes {
        println!(
            "  {:<56} {:>6} {:>12.3e} {:>10.1e} {:>8.2}  {}",
            o.name,
            o.cases,
            o.worst,
            o.tolerance,
            o.elapsed_seconds,
            if o.passed { "PASS" } else { "FAIL" }
        );
    }
}

pub fn verify(args: &VerifyArgs) -> i32 {
    let suites = match args.suite {
        Suite::All => vec![Suite::Pencil, Suite::Model, Suite::Geometry],
        s => vec![s],
    };
    let mut first_failure: Option<(Suite, CheckOutcome)> = None;
    for suite in suites {
        let outcomes = run_suite(suite, args.seed);
        print_table(suite_name(suite), &outcomes);
        if first_failure.is_none() {
            first_failure = outcomes.into_iter().find(|o| !o.passed).map(|o| (suite, o));
        }
    }
    match first_failure {
        None => {
            println!("all properties passed");
            EXIT_OK
        }
        Some((suite, o)) => {
            eprintln!(
                "FAILED: {}: {}",
                o.name,
                o.failure.as_deref().unwrap_or("no detail")
            );
            eprintln!(
                "reproduce with: crmorse verify --suite {} --seed {}",
                suite_name(suite),
                args.seed
            );
            EXIT_VERIFY_FAILED
        }
    }
}
