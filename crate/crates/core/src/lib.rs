pub mod affine_an;
pub mod cli;
pub mod coxeter;
pub mod engine;
pub mod error;
pub mod heckemod;
pub mod laurent;
pub mod oracle;
