//! A Lie algebra read from a file. Only algebra-level checks apply.

use momap_core::LieAlgebraSpec;

use super::common;
use crate::config::ExperimentConfig;
use crate::report::Task;
use crate::CliError;

pub struct Ctx {
    pub algebra: LieAlgebraSpec,
}

impl Ctx {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self, CliError> {
        let path = cfg
            .user
            .algebra
            .as_ref()
            .ok_or_else(|| CliError::Config("user.algebra is not set".into()))?;
        let algebra = LieAlgebraSpec::from_file(path).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(Self { algebra })
    }

    pub fn tasks<'a>(&'a self, cfg: &ExperimentConfig) -> Vec<Task<'a>> {
        vec![common::jacobi_task(cfg, &self.algebra, ""), common::pairing_task(cfg, &self.algebra, "")]
    }
}
