//! (m,k)-firm update skipping: skip whenever the last k instances would
//! still contain m performed updates.

use freshsim::policy::{mk_firm_decision, Decision, MkHistory};

fn main() {
    for (m, k) in [(1, 2), (2, 3), (3, 5)] {
        let mut history = MkHistory::new(k);
        let pattern: String = (0..20)
            .map(|_| match mk_firm_decision(m, k, &mut history) {
                Decision::Perform => 'P',
                Decision::Skip => '.',
            })
            .collect();
        let performs = pattern.chars().filter(|&c| c == 'P').count();
        println!("({m},{k})  {pattern}  {performs}/20 performed");
    }
}
