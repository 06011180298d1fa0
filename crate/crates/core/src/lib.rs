pub mod corpus;
pub mod error;
pub mod gadget;
pub mod game;
pub mod io;
pub mod kernel;
pub mod linalg;
pub mod oracle;
pub mod pipeline;
pub mod prover;
pub mod sat;
pub mod scalar;
pub mod search;

pub use error::{Error, Result};
pub use game::{BimatrixGame, Block, Matrix, MixedProfile, RegretReport};
pub use prover::{InducedGameResult, ProverStrategy, TwoProverGame};
pub use scalar::{Rational, Scalar};

pub type Game = BimatrixGame<Rational>;
pub type Profile = MixedProfile<Rational>;
pub type GameF64 = BimatrixGame<f64>;
pub type ProfileF64 = MixedProfile<f64>;
pub type ProverGame = TwoProverGame<Rational>;
