use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{BodyError, MachineBody};
use crate::physics::{ParamError, PhysicsParams};
use crate::rulebook::RuleParams;

/// Everything a step needs besides the machines themselves.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SimParams {
    pub physics: PhysicsParams,
    pub rules: RuleParams,
    pub body: MachineBody,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimParamError {
    #[error(transparent)]
    Physics(#[from] ParamError),
    #[error(transparent)]
    Body(#[from] BodyError),
    #[error("rule constant `{0}` is out of range")]
    Rule(&'static str),
}

impl SimParams {
    pub fn validate(&self) -> Result<(), SimParamError> {
        self.physics.validate(&self.body)?;
        self.rules.validate()?;
        Ok(())
    }

    pub fn with_container(mut self, width: f64, height: f64) -> Self {
        self.physics.container_width = width;
        self.physics.container_height = height;
        self
    }
}
