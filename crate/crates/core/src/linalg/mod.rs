pub mod dense;
pub mod jacobi;
pub mod rational;

pub use jacobi::{symmetric_eigenvalues, SymMatrix};
pub use rational::{IntMatrix, QMatrix, RankMode};
