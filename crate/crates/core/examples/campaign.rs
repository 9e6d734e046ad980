//! A small seeded campaign over every suite.

use frechet::campaign::{run_campaign, CampaignConfig};

pub fn main() {
    let config = CampaignConfig { seed: 11, trials: 5, soundness_functions: 5, ..CampaignConfig::default() };
    let report = run_campaign(&config).unwrap();
    for suite in &report.suites {
        println!("{:<16} passed {:>5}  failed {}", suite.suite, suite.passed, suite.failed);
    }
    assert!(report.passed);
}
