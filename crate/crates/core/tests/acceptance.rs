//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints its `PASS`/`FAIL` line, with measured values and runtime
//! budget; the process exits nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use markov_lab::analysis::run_criterion;
use markov_lab::LabConfig;

const BIN: &str = env!("CARGO_BIN_EXE_markov-lab");

fn criterion(id: u32, budget: Option<Duration>) -> bool {
    let cfg = LabConfig::default();
    let start = Instant::now();
    let result = run_criterion(id, &cfg);
    let elapsed = start.elapsed();
    let in_budget = budget.is_none_or(|b| elapsed <= b);
    let pass = result.pass && in_budget;
    let budget_text = budget.map_or("-".to_string(), |b| format!("{:?}", b));
    println!(
        "{} criterion {:>2} ({}) in {:.2?} [budget {}] measured={} {}",
        if pass { "PASS" } else { "FAIL" },
        id,
        result.name,
        elapsed,
        budget_text,
        serde_json::to_string(&result.measured).unwrap(),
        result.detail
    );
    pass
}

fn cli_area() -> bool {
    let out = Command::new(BIN).args(["area", "--domain", "omega"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let ok = out.status.success() && text.trim().parse::<f64>().is_ok_and(|a| (a - 4.0 / 3.0).abs() <= 1e-12);
    println!("{} criterion  1 (cli: area --domain omega) printed {}", if ok { "PASS" } else { "FAIL" }, text.trim());
    ok
}

fn cli_thread_reports() -> bool {
    let dir = tempfile::tempdir().unwrap();
    let report = |threads: &str| {
        let path = dir.path().join(format!("report-{threads}.json"));
        Command::new(BIN)
            .args(["verify", "--threads", threads, "--json"])
            .arg(&path)
            .output()
            .unwrap();
        std::fs::read(&path).unwrap_or_default()
    };
    let one = report("1");
    let eight = report("8");
    let ok = !one.is_empty() && one == eight;
    println!(
        "{} criterion 11 (cli: verify --threads 1 vs --threads 8) {} bytes, identical={}",
        if ok { "PASS" } else { "FAIL" },
        one.len(),
        one == eight
    );
    ok
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let results = [
        cli_area(),
        criterion(1, secs(1)),
        criterion(2, secs(5)),
        criterion(3, secs(30)),
        criterion(4, None),
        criterion(5, secs(120)),
        criterion(6, secs(120)),
        criterion(7, secs(120)),
        criterion(8, secs(60)),
        criterion(9, None),
        criterion(10, None),
        criterion(11, None),
        cli_thread_reports(),
    ];
    let failed = results.iter().filter(|&&ok| !ok).count();
    println!("acceptance: {} checks, {} failed", results.len(), failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
