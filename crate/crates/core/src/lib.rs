pub mod double;
pub mod fixtures;
pub mod groupoid;
pub mod jet;
pub mod material;
pub mod rational;
pub mod uniformity;
