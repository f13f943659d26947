//! Exact q-Ehrhart series of lattice polytopes.
//!
//! Every dilate `mP` of a lattice polytope gives a finite point locus
//! `Z = ℤⁿ ∩ mP`. The graded quotient `S / gr I(Z)` (equivalently the
//! harmonic space `V_Z`) has a Hilbert polynomial `i_P(m; q)`, and these
//! assemble into the bivariate series `E_P(t, q) = Σ i_P(m; q) tᵐ`.
//!
//! The crate is organised bottom-up:
//!
//! * [`kernel`]: exact rationals, linear algebra, q/t series and rational
//!   function fitting.
//! * [`polytope`]: lattice polytopes, point loci, posets.
//! * [`harmonics`]: vanishing ideals, Gröbner bases, harmonic spaces and
//!   the Minkowski closure check over ℚ.
//! * [`modp`]: divided-power harmonic spaces over prime fields.
//! * [`qehrhart`]: q-Ehrhart series, guessing, structural identities.
//! * [`halgebra`]: the bigraded harmonic algebra.
//! * [`equivariant`]: graded characters under finite symmetry groups.
//! * [`suites`]: seeded property suites and the built-in golden corpora.
//!
//! All arithmetic is exact. Data-parallel loops go through [`par`], which
//! uses rayon when the `parallel` feature is enabled and runs sequentially
//! otherwise.

pub mod equivariant;
pub mod halgebra;
pub mod harmonics;
pub mod kernel;
pub mod modp;
pub mod par;
pub mod polytope;
pub mod qehrhart;
pub mod suites;

pub use kernel::{QPoly, RatFun2, TQSeries};
pub use polytope::{LatticePolytope, PointLocus, Poset};
