//! Driving the batch runner from code: the same path the `varexp` binary takes.
use varexp::cli::{run, RunConfig};

pub fn main() {
    let config = RunConfig::from_json(
        r#"{
            "command": "certify",
            "exponent": {"kind": "t2", "gamma": "1/2", "p_in": "11/2", "p_out": 4}
        }"#,
    )
    .unwrap();
    let out = run(&config).unwrap();
    println!("{}", out.verdict);
    print!("{}", out.csv);
    println!("exit status {}", out.exit_code());
}
