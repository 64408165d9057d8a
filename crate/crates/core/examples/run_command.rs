//! Driving the command layer directly, as the binary does, and printing the
//! CSV report.

use tropdeg::commands::{run, Command, Options};
use tropdeg::hilbert::Shape;

const LINE: &str = include_str!("../models/tropical_line.json");

fn main() -> tropdeg::Result<()> {
    let opts = Options {
        k_min: 4,
        k_max: 7,
        shape: Shape::Box,
        ..Options::default()
    };
    for cmd in [Command::Star, Command::Degree] {
        let out = run(cmd, LINE, &opts)?;
        print!("{}", out.render(&opts));
    }
    Ok(())
}
