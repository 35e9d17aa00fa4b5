//! Constructions of special subvarieties: residue varieties, linear
//! varieties and their exponentiated equations, Teichmüller curves,
//! covering pullbacks, log differentials, and arithmetic points.

pub mod arithmetic;
pub mod cover;
pub mod dlog;
pub mod groups;
pub mod linear;
pub mod residue;
pub mod teich;
