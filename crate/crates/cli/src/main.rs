use std::io::{IsTerminal, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use su2lift::{Side, Tolerance};
use su2lift_cli::{run, to_stable_string, CliError, Command, Options};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    /// SO(3) rotation -> SU(2) representative of its {U, -U} pair
    Lift,
    /// SU(2) unitary -> SO(3) rotation
    Adjoint,
    /// local unitaries on both qubits that diagonalize T
    Diagonalize,
    /// one-sided local unitary making T triangular
    Triangularize,
    /// one-sided local unitary making T symmetric
    Symmetrize,
    /// Hilbert-Schmidt orthogonality of two unitaries
    Ortho,
    /// apply [state, left, right] local operations
    Transform,
    /// run the seeded verification suite
    Verify,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Parser)]
#[command(name = "su2lift", version, about = "Lift SO(3) rotations to SU(2) and steer two-qubit correlation matrices")]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// input file, `-` for stdin
    #[arg(long = "in", default_value = "-")]
    input: PathBuf,
    /// output file, `-` for stdout
    #[arg(long = "out", default_value = "-")]
    output: PathBuf,
    /// zero threshold; other thresholds are widened to at least this value
    #[arg(long)]
    tol: Option<f64>,
    /// number of seeds for `verify`
    #[arg(long, default_value_t = 10_000)]
    seeds: u64,
    /// qubit acted on by `triangularize` and `symmetrize`
    #[arg(long, value_enum, default_value = "left")]
    side: SideArg,
}

fn is_dash(p: &Path) -> bool {
    p.as_os_str() == "-"
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let mut text = String::new();
    let res = if is_dash(path) {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| CliError::Malformed(format!("cannot read {}: {e}", path.display())))?;
    Ok(text)
}

fn execute(args: &Args) -> Result<String, CliError> {
    let tol = match args.tol {
        None => Tolerance::default(),
        Some(t) if t.is_finite() && t > 0.0 => Tolerance::with_zero(t),
        Some(t) => return Err(CliError::Malformed(format!("--tol must be a positive number, got {t}"))),
    };
    let command = match args.command {
        Cmd::Lift => Command::Lift,
        Cmd::Adjoint => Command::Adjoint,
        Cmd::Diagonalize => Command::Diagonalize,
        Cmd::Triangularize => Command::Triangularize,
        Cmd::Symmetrize => Command::Symmetrize,
        Cmd::Ortho => Command::Ortho,
        Cmd::Transform => Command::Transform,
        Cmd::Verify => Command::Verify,
    };
    let opts = Options {
        tol,
        seeds: args.seeds,
        side: match args.side {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        },
        ..Options::default()
    };
    let input = if command == Command::Verify {
        String::new()
    } else {
        read_input(&args.input)?
    };
    Ok(to_stable_string(&run(command, &input, &opts)?))
}

fn write_output(path: &Path, text: &str) -> std::io::Result<()> {
    if is_dash(path) {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()
    } else {
        std::fs::write(path, text)
    }
}

fn report(msg: &str) {
    let stderr = std::io::stderr();
    let color = stderr.is_terminal() && std::env::var_os("NO_COLOR").is_none();
    let label = if color { "\x1b[1;31merror:\x1b[0m" } else { "error:" };
    let _ = writeln!(stderr.lock(), "{label} {msg}");
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&args) {
        Ok(text) => match write_output(&args.output, &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                report(&format!("cannot write {}: {e}", args.output.display()));
                ExitCode::from(4)
            }
        },
        Err(e) => {
            report(&e.to_string());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
