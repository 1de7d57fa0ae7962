pub mod admissible;
pub mod polygon;
pub mod surfaces;
pub mod tessellate;

use cdk_core::Tolerances;

use crate::schema::{ModelTag, Report};

/// Settings shared by every command.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub tol: Tolerances,
    pub model: ModelTag,
}

pub struct Output {
    pub report: Report,
    pub svg: Option<String>,
}
