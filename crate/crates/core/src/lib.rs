pub mod axioms;
pub mod base;
pub mod caps;
pub mod edge;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod game;
pub mod graph;
pub mod io;
pub mod o2;
mod linalg;
pub mod par;
pub mod presentation;
pub mod subspace;
pub mod tree;
pub mod vector;

pub use caps::Caps;
pub use edge::{edge_set, EdgeId, EdgeSet, Ground};
pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use subspace::{Subspace, SupportMethod};
pub use vector::SparseVec;
pub use presentation::Presentation;
pub use tree::{glue, Kind, PreVector, TreeOfPresentations};
