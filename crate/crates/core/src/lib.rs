//! Exact computations around ω^ω-bases: an infinitesimal tower of rational
//! function fields, matrix groups over it, a cofinite reduced power, free
//! group neighbourhood calculus, finite order-theoretic certificates and
//! diagonal entourages of metric spaces.

pub mod expr;
pub mod field;
pub mod group_topology;
pub mod matrix;
pub mod order_lab;
pub mod poly;
pub mod reduced_power;
pub mod suites;
pub mod uniformity;

pub use field::{ArithOp, ExponentVector, FieldElement, FieldError, LeadingTerm, TowerLimits};
pub use group_topology::{GroupError, PhiMap, ReducedWord, SubsetSpec};
pub use matrix::{Matrix, MatrixError};
pub use order_lab::{Branch, FinitePoset, FnSeq, OrderError};
pub use poly::Rational;
pub use reduced_power::{EventualSeq, RpError, StarValue};
pub use suites::{SuiteConfig, SuiteError, SuiteReport};
pub use uniformity::{Entourage, MetricSpace, UniformityError};
