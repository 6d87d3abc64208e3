//! One line per acceptance criterion; exits non-zero if any fails.

use std::process::ExitCode;

use unate::acceptance::{run, Ctx};

fn main() -> ExitCode {
    let ctx = Ctx::default();
    println!(
        "acceptance suite (seed {:#x}, {} workers)",
        ctx.seed, ctx.workers
    );
    let report = run(&ctx, &[], |c| println!("{}", c.line()));
    let failed = report.criteria.iter().filter(|c| !c.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed, {} ms",
        report.criteria.len() - failed,
        report.runtime_ms
    );
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
