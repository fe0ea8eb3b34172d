//! Structured linear algebra on FFT-diagonalizable matrices.
//!
//! - circulant / skew-circulant products from their eigenvalues,
//! - symmetric Toeplitz products by circulant embedding,
//! - the Gohberg–Semencul solver for SPD Toeplitz systems,
//! - BTTB products by block-circulant-circulant-block embedding,
//! - DST-I based tau preconditioners and preconditioned CG.

pub mod bttb;
pub mod circulant;
pub mod fft;
pub mod gs;
pub mod pcg;
pub mod tau;
pub mod toeplitz;

pub use bttb::{BttbOperator, BttbWork};
pub use circulant::{
    circulant_eigenvalues, circulant_matvec, skew_circulant_eigenvalues, skew_circulant_matvec,
};
pub use gs::{gs_precompute, GsData, GsWork, SymToeplitz};
pub use pcg::{pcg, PcgReport};
pub use tau::{dst1, tau_spec_1d, tau_spec_2d, Dst1, TauSpec};
pub use toeplitz::{toeplitz_matvec, ToeplitzOperator};
