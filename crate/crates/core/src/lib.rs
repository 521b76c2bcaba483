//! Garland posets of finite simplicial and cubical complexes, the spectral
//! vanishing criterion on their link graphs, and exact rational cross-checks.

pub mod analysis;
pub mod cohomology;
pub mod complex;
pub mod error;
pub mod exactness;
pub mod experiment;
pub mod garland;
pub mod generators;
pub mod linalg;
pub mod monodromy;
pub mod poset;
pub mod rng;
pub mod spectral;
pub mod unionfind;

pub use complex::{parse_complex, validate, Cell, CellComplex, ComplexKind, ValidationReport};
pub use error::{GarlandError, Result, Stage};
pub use garland::{build_garland, check_axioms, link_components, GarlandPoset, LinkGraph};
pub use poset::{face_poset, FacePoset};
