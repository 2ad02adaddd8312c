use std::path::PathBuf;

use timebin::compiler::{compile_network, effective_unitary, ScheduleFile};

use super::{out_path, save_matrix, Globals, CLOSURE_TOL, UNITARY_FILE};
use crate::error::{exit, CliResult};
use crate::output::write_text;

pub const REPORT_FILE: &str = "compile_report.txt";

#[derive(Clone, Debug, clap::Args)]
pub struct CompileArgs {
    /// Schedule file; defaults to the one named in --config.
    #[arg(long)]
    pub schedule: Option<PathBuf>,
    /// Maximum closure deviation of the mode subset.
    #[arg(long, default_value_t = CLOSURE_TOL)]
    pub tol: f64,
}

/// Writes `unitary.json` and `compile_report.txt` to the output directory.
pub fn compile(args: &CompileArgs, globals: &Globals) -> CliResult<i32> {
    let (loop_config, schedule, subset, out) = match &args.schedule {
        Some(path) => {
            let (c, s, sub) = ScheduleFile::read(path)?.into_parts()?;
            (c, s, sub, globals.out_dir())
        }
        None => {
            let cfg = globals.load()?;
            (cfg.loop_config, cfg.schedule, cfg.subset, cfg.out)
        }
    };
    let full = compile_network(&loop_config, &schedule)?;
    let eff = effective_unitary(&full, &subset, args.tol)?;
    save_matrix(&out_path(&out, UNITARY_FILE), eff.unitary.as_matrix())?;
    let report = format!(
        "slots={}\nloops={}\nmodes={}\nsubset={}\nclosure_deviation={:e}\ntolerance={:e}\n",
        loop_config.slots,
        loop_config.loops,
        full.dim(),
        subset.len(),
        eff.deviation,
        args.tol
    );
    write_text(&out_path(&out, REPORT_FILE), &report)?;
    println!("closure_deviation={:e} modes={}", eff.deviation, subset.len());
    Ok(exit::OK)
}
