//! Discrete exterior calculus on finite graph complexes and on the level-m
//! approximations of simplex gaskets, with exact rational arithmetic.

pub mod complex;
pub mod error;
pub mod fractal;
pub mod harmonic;
pub mod io;
pub mod linalg;
pub mod measure;
pub mod rational;
pub mod sg;
pub mod sg3;
pub mod verify;

pub use complex::{Cell, Chain, Complex, KForm};
pub use error::{Error, Result};
pub use rational::Rational;
