use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "anomaly",
    version,
    about = "Exact verification of anomalous actions of finite groups on finite-dimensional C*-algebras"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct GlobalArgs {
    /// Scalar backend.
    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Exact)]
    pub backend: BackendArg,
    /// Equality tolerance of the float backend.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Maximum basis size of a built algebra.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub budget: usize,
    /// Seed of the single generator behind every randomized sweep.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Report path; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Include wall-clock timings in the report (breaks byte-for-byte reproducibility).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendArg {
    Exact,
    Float,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Named finite groups.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Group cohomology with cyclic coefficients.
    #[command(subcommand)]
    Coh(CohCmd),
    /// Inductive-limit towers realizing a 3-cocycle.
    #[command(subcommand)]
    Tower(TowerCmd),
    /// Induced actions on twisted crossed products.
    #[command(subcommand)]
    Jones(JonesCmd),
    /// Checks on serialized anomalous actions.
    #[command(subcommand)]
    Action(ActionCmd),
    /// Rokhlin partitions of tower stages.
    #[command(subcommand)]
    Rokhlin(RokhlinCmd),
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupCmd {
    List,
    Show {
        #[arg(long)]
        name: String,
    },
}

/// A 3-cocycle given by group and class index, or by a cochain file.
///
/// On a cyclic group `Cn` the class index `j` selects the standard cocycle `j·ω_n`;
/// otherwise it is a mixed-radix index over the computed generators of `H³(G, ℤ_|G|)`.
#[derive(Clone, Debug, Args, Serialize)]
pub struct CocycleArgs {
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long = "class")]
    pub class: Option<u64>,
    /// Cochain JSON file.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CohCmd {
    Compute {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        /// Coefficient order; defaults to the group order.
        #[arg(long)]
        coeff: Option<u64>,
    },
    Check {
        #[command(flatten)]
        cocycle: CocycleArgs,
    },
    ClassOrder {
        #[command(flatten)]
        cocycle: CocycleArgs,
    },
    RestrictScan {
        #[command(flatten)]
        cocycle: CocycleArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyArg {
    All,
    None,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TowerCmd {
    Build {
        #[command(flatten)]
        cocycle: CocycleArgs,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = VerifyArg::None)]
        verify: VerifyArg,
        /// Where to write the tower bundle.
        #[arg(long)]
        bundle_out: Option<PathBuf>,
        /// Where to write one stage as an action bundle (with `--export-stage`).
        #[arg(long, requires = "export_stage")]
        action_out: Option<PathBuf>,
        /// Stage exported by `--action-out` (1-based).
        #[arg(long, requires = "action_out")]
        export_stage: Option<usize>,
    },
    Verify {
        #[arg(long)]
        bundle: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConventionArg {
    Conjugation,
    AsPrinted,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct JonesArgs {
    #[command(flatten)]
    pub cocycle: CocycleArgs,
    #[arg(long, default_value_t = 8)]
    pub max_kernel: usize,
    /// Tensor factors of `l²(Γ)` in the base algebra.
    #[arg(long, default_value_t = 1)]
    pub factors: usize,
    #[arg(long, value_enum, default_value_t = ConventionArg::Conjugation)]
    pub convention: ConventionArg,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum JonesCmd {
    FindExtension {
        #[command(flatten)]
        cocycle: CocycleArgs,
        #[arg(long, default_value_t = 8)]
        max_kernel: usize,
    },
    Induce {
        #[command(flatten)]
        jones: JonesArgs,
        /// Where to write the action bundle.
        #[arg(long)]
        bundle_out: Option<PathBuf>,
    },
    Verify {
        #[command(flatten)]
        jones: JonesArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Pointwise,
    Class,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpectArg {
    Agree,
    Differ,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActionCmd {
    Validate {
        #[arg(long)]
        bundle: PathBuf,
    },
    Anomaly {
        #[arg(long)]
        bundle: PathBuf,
    },
    /// Perturbs by seeded random unitaries and checks the anomaly is unchanged.
    Perturb {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Where to write the last perturbed action.
        #[arg(long)]
        bundle_out: Option<PathBuf>,
    },
    Tensor {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        bundle_out: Option<PathBuf>,
    },
    Compare {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Class)]
        mode: ModeArg,
        /// Turn the comparison into a check.
        #[arg(long, value_enum)]
        expect: Option<ExpectArg>,
    },
}

/// A tower given by cocycle and depth, or by a bundle file.
#[derive(Clone, Debug, Args, Serialize)]
pub struct TowerSource {
    #[command(flatten)]
    pub cocycle: CocycleArgs,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// Tower bundle JSON; overrides the cocycle arguments.
    #[arg(long)]
    pub bundle: Option<PathBuf>,
    /// Restrict to one stage (1-based).
    #[arg(long)]
    pub stage: Option<usize>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RokhlinCmd {
    Verify {
        #[command(flatten)]
        tower: TowerSource,
    },
    /// Averages seeded random unital embeddings over the partition.
    Average {
        #[command(flatten)]
        tower: TowerSource,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Trivializes seeded coboundary cocycles through the partition.
    Trivialize {
        #[command(flatten)]
        tower: TowerSource,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Group(GroupCmd::List) => "group list",
            Command::Group(GroupCmd::Show { .. }) => "group show",
            Command::Coh(CohCmd::Compute { .. }) => "coh compute",
            Command::Coh(CohCmd::Check { .. }) => "coh check",
            Command::Coh(CohCmd::ClassOrder { .. }) => "coh class-order",
            Command::Coh(CohCmd::RestrictScan { .. }) => "coh restrict-scan",
            Command::Tower(TowerCmd::Build { .. }) => "tower build",
            Command::Tower(TowerCmd::Verify { .. }) => "tower verify",
            Command::Jones(JonesCmd::FindExtension { .. }) => "jones find-extension",
            Command::Jones(JonesCmd::Induce { .. }) => "jones induce",
            Command::Jones(JonesCmd::Verify { .. }) => "jones verify",
            Command::Action(ActionCmd::Validate { .. }) => "action validate",
            Command::Action(ActionCmd::Anomaly { .. }) => "action anomaly",
            Command::Action(ActionCmd::Perturb { .. }) => "action perturb",
            Command::Action(ActionCmd::Tensor { .. }) => "action tensor",
            Command::Action(ActionCmd::Compare { .. }) => "action compare",
            Command::Rokhlin(RokhlinCmd::Verify { .. }) => "rokhlin verify",
            Command::Rokhlin(RokhlinCmd::Average { .. }) => "rokhlin average",
            Command::Rokhlin(RokhlinCmd::Trivialize { .. }) => "rokhlin trivialize",
        }
    }
}
