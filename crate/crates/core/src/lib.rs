//! Milnor fiber complexes of finite Coxeter and Shephard groups.
//!
//! The crate builds a group from its admissible diagram by coset
//! enumeration ([`group`]), forms the coset complex of standard parabolic
//! subgroups ([`complex`]), computes fixed subcomplexes and walls
//! ([`walls`]) and packages the classification checks into reports
//! ([`verify`]).

pub mod complex;
pub mod diagram;
pub mod group;
pub mod verify;
pub mod walls;

pub use complex::{ComplexAction, TypedComplex};
pub use diagram::{parse_symbol, Diagram, Family, GroupId};
pub use group::GroupTable;
