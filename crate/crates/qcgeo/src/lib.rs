//! Exact rational computations for quaternionic contact structures.

pub mod corpus;
pub mod frame;
pub mod linalg;
pub mod mat;
pub mod model;
pub mod scalar;
pub mod tensor;
pub mod spaces;
pub mod connection;
pub mod pipeline;
pub mod report;
pub mod repdims;
pub mod hwv;

#[doc = include_str!("../../../book/src/models.md")]
pub mod guide_models {}
#[doc = include_str!("../../../book/src/pipeline.md")]
pub mod guide_pipeline {}
#[doc = include_str!("../../../book/src/canonical.md")]
pub mod guide_canonical {}
#[doc = include_str!("../../../book/src/repdims.md")]
pub mod guide_repdims {}
#[doc = include_str!("../../../book/src/hwv.md")]
pub mod guide_hwv {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod guide_cli {}
