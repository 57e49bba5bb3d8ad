//! Concrete Hopf instances: symmetric functions (rock-breaking), decks
//! (riffle shuffling), unlabeled/labeled graphs, simplicial complexes, and
//! the quotient symmetric algebra (the documented rescaling failure).

pub mod deck;
pub mod graphs;
pub mod simplicial;
pub mod symfn;

pub use deck::DeckInstance;
pub use graphs::{graph_canonicalize, GraphData, LabeledGraphInstance, UnlabeledGraphInstance};
pub use simplicial::{complex_canonicalize, ComplexData, SimplicialInstance};
pub use symfn::{QuotientSymFnInstance, SymFnInstance};
