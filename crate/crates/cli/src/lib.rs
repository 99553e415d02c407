//! Command-line front end: instance formats, run records and subcommands.

mod commands;
pub mod format;
pub mod record;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use commands::Cli;

/// Parses `args` (program name first) and runs the subcommand.
///
/// Returns the process exit code: 0 on success, 1 when a verification fails
/// and 2 on usage or input errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match commands::dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}
