//! Parses a scenario from text, runs two commands on it and prints both
//! report formats.

use phl::cli::{parse_scenario, run, Command, Options};

const TEXT: &str = "
scenario cubic
field F3

# k[x]/x^3 glued to k along evaluation at 0
algebra C {
  basis 1 x xx
  unit [1 0 0]
  product 1 1 1 1
  product 1 x x 1
  product x 1 x 1
  product 1 xx xx 1
  product xx 1 xx 1
  product x x xx 1
  radical [0 1 0] [0 0 1]
}
algebra k {
  basis 1
  unit [1]
  product 1 1 1 1
}
morphism ev C -> k [1 0 0]
morphism id k -> k [1]
pullback ev id

check milnor dim-bound=3
";

fn main() -> phl::Result<()> {
    let scenario = parse_scenario(TEXT)?;
    let opts = Options::default();
    print!("{}", run(Command::Pullback, &scenario, &opts)?.to_text(true));
    let report = run(Command::Milnor, &scenario, &opts)?;
    print!("{}", report.to_json(false));
    std::process::exit(report.exit_code);
}
