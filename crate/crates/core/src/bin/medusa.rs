// SPDX-License-Identifier: Apache-2.0

use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(medusa_core::cli::run_from(std::env::args_os()) as u8)
}
