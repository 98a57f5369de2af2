//! Exact finite group actions on rational surfaces, and a decision procedure
//! for their linearizability.

pub mod cyclo;
pub mod groups;
pub mod moebius;
pub mod quadric;
pub mod delpezzo;
pub mod sarkisov;
pub mod decider;
