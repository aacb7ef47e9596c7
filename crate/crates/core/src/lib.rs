//! Exact computational kernel for non-symmetric operads over rational vector
//! spaces: planted planar trees, free operads, operad and algebra push-outs,
//! and enriched endomorphism operads.

pub mod algebra;
pub mod exactcat;
pub mod opcolim;
pub mod operad;
pub mod report;
pub mod trees;
