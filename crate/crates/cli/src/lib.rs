//! Configuration-driven scenarios over the macroqed-core models, written out as CSV.

pub mod config;
pub mod error;
pub mod run;
pub mod table;

use std::path::Path;

pub use config::{validate, LengthUnit, Scenario, ScenarioKind};
pub use error::CliError;
pub use run::run;
pub use table::{config_from_csv, ResultTable};

/// Reads and validates a configuration file.
pub fn load(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    validate(&text).map_err(CliError::Validation)
}

/// Text printed by `list-scenarios`.
pub fn scenario_listing() -> String {
    let mut out = String::from(
        "Every config holds \"scenario\", \"length_unit\" (lambda_T or c_over_omega_T), \"params\" and \"sweep\".\n\
         A sweep is {\"variable\", \"start\", \"stop\", \"points\"} or {\"variable\", \"values\"}, strictly increasing.\n\
         A medium is {\"model\": \"lorentz\", \"omega_p\", \"gamma\"[, \"omega_t\"]},\n\
         {\"model\": \"multi-lorentz\", \"terms\": [lorentz, ...]} or {\"model\": \"constant\", \"eps_re\", \"eps_im\"}.\n\
         Frequencies are in units of omega_T; rates are relative to the free-space rate.\n\n",
    );
    for kind in ScenarioKind::ALL {
        out.push_str(kind.name());
        out.push_str("\n  ");
        out.push_str(kind.help());
        out.push_str("\n\n");
    }
    out
}
