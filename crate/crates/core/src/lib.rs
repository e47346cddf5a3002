//! Exact statevector simulator and analysis toolkit for a spin-ladder quantum
//! cellular automaton: a cluster chain (sublattice A) exchanging spins with a
//! row of free spins (sublattice B).
//!
//! One time step is `U(J, g) = Π_x C_A(J, x) · Π_x SW_AB(g, x)`, with the
//! three-body cluster gate `exp(iJ Z X Z)` on the A chain and the exchange gate
//! `exp[ig (XX + YY)/2]` on every AB cell. Around that core the crate provides
//!
//! * [`lattice`]: the interleaved 2L-qubit statevector and its gate kernels,
//! * [`automaton`]: the step operator, trajectories, symmetry and Trotter checks,
//! * [`entanglement`]: reduced states, entropies, partial transposes, negativity,
//! * [`meanfield`]: the mean-field band structure and its self-consistent field,
//! * [`channel`]: Kraus, coherent-flip and Lindblad dynamics of the A register,
//! * [`random_ref`]: Haar reference mixtures and the effective environment size,
//! * [`order`]: the string order parameter.
//!
//! The guide under `book/` walks through each piece; its code listings are
//! compiled and run as doctests of this crate.

pub mod automaton;
pub mod channel;
mod error;
pub mod entanglement;
pub mod lattice;
pub mod linalg;
pub mod meanfield;
pub mod order;
pub mod random_ref;
pub mod series;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use automaton::{AutomatonParams, InitialState, Trajectory};
pub use entanglement::{DensityMatrix, Partition, SpectrumReport};
pub use lattice::{Boundary, LatticeLayout, Pauli, PauliString, PureState};
pub use series::{ObservableRecord, ObservableSeries};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/lattice.md")]
    mod lattice {}
    #[doc = include_str!("../../../book/src/automaton.md")]
    mod automaton {}
    #[doc = include_str!("../../../book/src/entanglement.md")]
    mod entanglement {}
    #[doc = include_str!("../../../book/src/meanfield.md")]
    mod meanfield {}
    #[doc = include_str!("../../../book/src/channel.md")]
    mod channel {}
    #[doc = include_str!("../../../book/src/random_reference.md")]
    mod random_reference {}
    #[doc = include_str!("../../../book/src/string_order.md")]
    mod string_order {}
}
