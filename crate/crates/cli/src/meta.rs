use serde::Serialize;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, Serialize)]
pub struct Versions {
    pub memristive: &'static str,
    pub cli: &'static str,
}

/// Everything needed to rerun a command, written next to its primary output.
#[derive(Debug, Serialize)]
pub struct RunMetadata {
    pub command_line: Vec<String>,
    pub profile: Option<String>,
    pub seed: Option<u64>,
    pub versions: Versions,
    pub elapsed_seconds: f64,
    pub outputs: Vec<PathBuf>,
}

pub struct Run {
    started: Instant,
    pub profile: Option<String>,
    pub seed: Option<u64>,
    pub outputs: Vec<PathBuf>,
}

impl Run {
    pub fn start() -> Self {
        Run {
            started: Instant::now(),
            profile: None,
            seed: None,
            outputs: vec![],
        }
    }

    pub fn finish(self) -> RunMetadata {
        RunMetadata {
            command_line: std::env::args().collect(),
            profile: self.profile,
            seed: self.seed,
            versions: Versions {
                memristive: memristive::VERSION,
                cli: env!("CARGO_PKG_VERSION"),
            },
            elapsed_seconds: self.started.elapsed().as_secs_f64(),
            outputs: self.outputs,
        }
    }
}

/// `<out>.meta.json` beside the primary output.
pub fn meta_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}
