//! Prints a seeded synthetic instance and its ground truth.
//!
//! Usage: `cargo run -p resultant-core --example instance -- <problem> [seed]`

use resultant_core::problems::{generate_instance, Problem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let problem: Problem = args.next().unwrap_or_else(|| "conic".into()).parse()?;
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);
    let instance = generate_instance(problem, seed);
    println!("{}", serde_json::to_string(&instance.data)?);
    eprintln!("ground truth: {:?}", instance.ground_truth);
    Ok(())
}
