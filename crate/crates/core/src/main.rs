// SPDX-License-Identifier: Apache-2.0

use clap::Parser;

use cyclegas::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
