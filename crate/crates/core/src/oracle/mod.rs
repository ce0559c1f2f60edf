//! Independent reference solutions: closed forms and finite differences.

mod analytic;
mod fd;

pub use analytic::{analytic_reference, AnalyticKind, AnalyticSolution, Profile, Velocity};
pub use fd::{fd_reference, fd_solve, BoundaryValue, FdProblem, FdSolution};
