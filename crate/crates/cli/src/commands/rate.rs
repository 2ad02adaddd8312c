use timebin::rate::{n_fold_rate_per_hour, required_loop_transmission, EfficiencyBudget, SECONDS_PER_HOUR};

use crate::error::{exit, CliResult};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    #[default]
    Current,
    Projected,
}

#[derive(Clone, Debug, clap::Args)]
pub struct RateArgs {
    #[arg(long, value_enum, default_value_t = Preset::Current)]
    pub preset: Preset,
    #[arg(long)]
    pub rep_rate: Option<f64>,
    #[arg(long)]
    pub source_eff: Option<f64>,
    #[arg(long)]
    pub loop_transmission: Option<f64>,
    #[arg(long)]
    pub detector_eff: Option<f64>,
    #[arg(long)]
    pub loops: Option<u32>,
    #[arg(long)]
    pub bins: Option<u32>,
    #[arg(long)]
    pub overhead_loops: Option<u32>,
    /// Largest photon number in the table.
    #[arg(long, default_value_t = 20)]
    pub max_n: u32,
    /// Solve for the loop transmission reaching --target-per-hour at this photon number.
    #[arg(long)]
    pub solve_n: Option<u32>,
    #[arg(long, default_value_t = 100.0)]
    pub target_per_hour: f64,
}

impl RateArgs {
    pub fn budget(&self) -> EfficiencyBudget {
        let mut b = match self.preset {
            Preset::Current => EfficiencyBudget::current(),
            Preset::Projected => EfficiencyBudget::projected(),
        };
        if let Some(v) = self.rep_rate {
            b.rep_rate_hz = v;
        }
        if let Some(v) = self.source_eff {
            b.source_eff = v;
        }
        if let Some(v) = self.loop_transmission {
            b.loop_transmission = v;
        }
        if let Some(v) = self.detector_eff {
            b.detector_eff = v;
        }
        if let Some(v) = self.loops {
            b.loops = v;
        }
        if let Some(v) = self.bins {
            b.bins_per_trial = v;
        }
        if let Some(v) = self.overhead_loops {
            b.overhead_loops = v;
        }
        b
    }
}

pub fn rate(args: &RateArgs) -> CliResult<i32> {
    let b = args.budget();
    b.validate()?;
    println!("# eta_total={} trial_rate_hz={}", b.eta_total(), b.trial_rate_hz());
    println!("n,events_per_hour");
    for n in 1..=args.max_n {
        println!("{n},{:e}", n_fold_rate_per_hour(&b, n));
    }
    if let Some(n) = args.solve_n {
        let t = required_loop_transmission(&b, n, args.target_per_hour / SECONDS_PER_HOUR)?;
        println!("# required loop_transmission={t:.6} for n={n} at {} per hour", args.target_per_hour);
    }
    Ok(exit::OK)
}
