//! Precubical-set semantics of concurrent programs with mutexes, together
//! with the combinatorial non-positive-curvature checks, path (di)homotopy
//! deciders, 2-cell rewriting to canonical forms, and numeric spot checks of
//! the metric realizations.

pub mod gms;
pub mod lang;
pub mod npc;
pub mod paths;
pub mod pcs;
pub mod twocells;
