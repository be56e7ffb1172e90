//! Exact simulation, catalysis passes and ZH rewriting for Clifford+T style circuits.

pub mod catalysis;
pub mod circuit;
pub mod estimator;
pub mod ring;
pub mod zh;

pub use circuit::{
    Circuit, CircuitError, Gate, GateKind, GateSet, Observable, StatePrep, StateVector,
};
pub use ring::{Dyadic, RingElement, RingError, RingMatrix, Tower};
