//! Run the reproduction checks from code and print a one-line summary per check.

use ncball::cli::verify;
use ncball::Config;

fn main() {
    let report = verify::run(&Config::default(), None, &[]);
    for check in &report.checks {
        println!("{} {:<28} {:e}", if check.pass { "ok  " } else { "FAIL" }, check.id, check.computed);
    }
    println!("{} passed, {} failed", report.passed, report.failed);
    std::process::exit(report.exit_code());
}
