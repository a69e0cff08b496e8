pub mod molgraph;
pub mod huckel;
pub mod builder;
pub mod device;
