//! Certified bounds for rank, rank gradient, and (stable) integral simplicial
//! volume of closed oriented triangulated manifolds, together with executable
//! versions of the two constructions that bound rank by integral simplicial
//! volume.

pub mod constructions;
pub mod covers;
pub mod groups;
pub mod pipeline;
pub mod simplicial;
pub mod volume;
