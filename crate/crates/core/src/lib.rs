//! Exact computations with cross-commuting nonabelian squares in the affine
//! groups `AGL_1(Z/nZ)`.
//!
//! A quadruple `(F0, F1, G0, G1)` of affine maps is a *cross-commuting
//! nonabelian square* when every `F_i` commutes with every `G_j` while
//! `F0, F1` and `G0, G1` each fail to commute. Such squares never occur over
//! a prime-power modulus (the common centralizer of a noncommuting pair is
//! abelian there), and they occur over `Z/nZ` exactly when at least two
//! prime-power factors of `n` exceed 2.
//!
//! The crate is organised as:
//!
//! * [`affine`], [`crt`], [`modular`]: residues, affine maps, and the CRT split.
//! * [`centralizer`]: Smith normal form over `Z/p^e` and common centralizers.
//! * [`classify`]: decision procedures and the explicit CRT witness.
//! * [`oracle`] and [`permutation`]: brute-force checks and the `S_n` comparison.
//! * [`css`]: two-row block arrays, GF(2) orthogonality, Tanner girth, alist.
//! * [`cli`]: the command-line front end.
//!
//! Exhaustive scans run on rayon when the `parallel` feature is on (the
//! default); see [`Exec`].

pub mod affine;
pub mod centralizer;
pub mod classify;
pub mod cli;
pub mod crt;
pub mod css;
mod error;
pub mod modular;
pub mod oracle;
mod par;
pub mod permutation;

pub use affine::{AffineMap, SquareVerdict};
pub use centralizer::{CentralizerSet, LocalRing, SmithDecomposition};
pub use classify::{ClassificationVerdict, ReasonCode, SquareWitness};
pub use crt::{CrtDecomposition, PrimePowerFactor};
pub use error::{Error, Result};
pub use modular::Modulus;
pub use par::{limit_threads, Exec};
