//! Scenario corpus: a declarative text format for spectral sequence,
//! Hochschild, homomorphism and CDGA computations, a runner producing
//! PASS/FAIL reports with property gates, JSON page tables, and SVG charts.

pub mod chart;
pub mod expr;
pub mod report;
pub mod runner;
pub mod scenario;

pub use chart::emit_chart;
pub use report::{ChartPage, Gates, PageJson, RunReport, Status};
pub use runner::{build_presentation, run_scenario, run_scenario_opts, Outcome, ScenarioError};
pub use scenario::{parse_scenario, Mode, ParseError, Scenario};

use std::path::{Path, PathBuf};

/// The shipped scenario directory: `corpus/` at the workspace root.
pub fn default_corpus_dir() -> PathBuf {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    manifest.parent().unwrap().parent().unwrap().join("corpus")
}

/// Scenario names listed in the corpus manifest, in manifest order.
pub fn manifest_names(corpus_dir: &Path) -> std::io::Result<Vec<String>> {
    let text = std::fs::read_to_string(corpus_dir.join("MANIFEST"))?;
    Ok(text
        .lines()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.to_string())
        .collect())
}

/// Load and parse one scenario by name.
pub fn load_scenario(corpus_dir: &Path, name: &str) -> Result<Scenario, String> {
    let path = corpus_dir.join(format!("{name}.scn"));
    let text = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let s = parse_scenario(&text).map_err(|e| format!("{name}.scn:{e}"))?;
    if s.name != name {
        return Err(format!("{name}.scn declares scenario `{}`", s.name));
    }
    Ok(s)
}
