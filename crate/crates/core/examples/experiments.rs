//! Running an experiment from code, with overrides, and reading its report.

use bergman_lab::harness::{default_settings, run_experiment, EXPERIMENTS};

fn main() -> bergman_lab::Result<()> {
    for e in EXPERIMENTS {
        println!("{:<20} {}", e.id, e.claim);
    }

    let mut settings = default_settings("theta")?;
    settings.apply_text("samples=20000\nseed=5\n")?;
    let report = run_experiment("theta", &settings)?;
    print!("{}", report.summary());
    for c in &report.checks {
        println!("{:<16} n={:<6} ratio in [{:.4e}, {:.4e}] pass={}", c.claim.id, c.samples, c.ratio_min, c.ratio_max, c.pass);
    }
    let csv = report.to_delimited(',');
    println!("{} CSV rows; header: {}", csv.lines().count() - 1, csv.lines().next().unwrap_or_default());
    Ok(())
}
