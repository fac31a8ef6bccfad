//! Toolkit for exploration and rendezvous on graphs whose edge set changes
//! over discrete time steps while the vertex set stays fixed.
//!
//! The core objects are [`tgraph::TemporalGraph`] (a finite sequence of
//! snapshot graphs, usually periodic) and [`tgraph::TemporalWalk`]
//! (a time-respecting walk that may wait). On top of those this crate
//! computes the symmetry group shared by all snapshots, partitions vertices
//! into orbits, transports walks along symmetries, and uses the orbit
//! structure to build short exploration and rendezvous schedules.

pub mod autgroup;
pub mod cli;
pub mod explorer;
pub mod gen;
pub mod lanes;
pub mod oracle;
pub mod rendezvous;
pub mod tgraph;
pub mod walktrans;
