pub mod error;
pub mod jonquieres;
pub mod matrix;
pub mod numerics;
pub mod realization;
pub mod spectrum;
pub mod weyl;
