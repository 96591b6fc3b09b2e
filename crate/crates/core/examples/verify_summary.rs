// Runs a quick subset of the verification suite and prints the report.

use markov_lab::{verify_all, LabConfig};

fn main() {
    let cfg = LabConfig { criteria: Some(vec![1, 2, 7, 9, 10]), ..LabConfig::default() };
    let report = verify_all(&cfg);
    for c in &report.criteria {
        println!("{} {:>2} {}", if c.pass { "PASS" } else { "FAIL" }, c.id, c.name);
    }
    println!("{}", report.to_json());
}
