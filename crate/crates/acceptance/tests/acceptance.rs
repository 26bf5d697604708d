use std::process::ExitCode;
use std::time::Instant;

use guidetree_acceptance::CRITERIA;

fn main() -> ExitCode {
    let mut failed = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(c.run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {} [{secs:.1}s]: {detail}", c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL  {} [{secs:.1}s]: {why}", c.name);
            }
        }
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
