//! Cohomological lower bounds for topological complexity of simplicial
//! complexes with finite group actions, plus explicit sampled motion
//! planners on spheres.
//!
//! The crate is organized bottom-up:
//!
//! - [`algebra`]: exact dense linear algebra over Q and GF(p)
//! - [`complex`]: finite simplicial complexes, cohomology, cup products
//! - [`gaction`]: finite group actions, quotients, saturated diagonals
//! - [`cuplength`]: zero-divisor ideals and nilpotency bounds
//! - [`sphereplan`]: explicit motion planner constructions on spheres
//! - [`verify`]: sampled verification harness and the results table
//! - [`models`]: the built-in complexes and actions used throughout
//! - [`io`]: file formats for complexes, actions and reports

pub mod algebra;
pub mod complex;
pub mod cuplength;
pub mod gaction;
pub mod io;
pub mod models;
pub mod sphereplan;
pub mod verify;
