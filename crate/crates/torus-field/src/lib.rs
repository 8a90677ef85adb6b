//! Biharmonic Gaussian fields and quantum Liouville measures on the flat 4-torus.
//!
//! The torus is T⁴ = ℝ⁴/ℤ⁴ with the flat metric and unit volume. On it the
//! conformally covariant fourth-order energy reduces to (1/8π²)∫(Δu)², so the
//! field of interest is the centered Gaussian field h whose covariance operator
//! inverts Δ²/(8π²) on grounded functions (zero-mean against Lebesgue). Its
//! covariance kernel
//!
//!   k(x,y) = Σ_{n≠0} cos(2πn·(x−y)) / (2π²|n|⁴)
//!
//! diverges like −log d(x,y) on the diagonal, which puts the associated
//! exponential measures exp(γh − γ²/2·var) in the Gaussian multiplicative
//! chaos regime for |γ| < √8.
//!
//! Module map:
//! - [`torus`]: points, frequency vectors, periodic distance
//! - [`kernel`]: heat-kernel-split evaluation of the grounded Green kernel G̊,
//!   the biharmonic kernel k, fractional kernels G̊^(s) and the grounded heat
//!   kernel, all with recorded truncation error bounds
//! - [`spectral`]: band-limited real fields as Fourier coefficient tables,
//!   Paneitz energy, grounded Sobolev norms
//! - [`haar`]: the isotropic 4-D Haar system, dyadic cubes, grid fields,
//!   exact projections and Haar analysis/synthesis
//! - [`rng`]: index-addressed deterministic normal streams
//! - [`field`]: samplers for the field (Haar-driven and spectral), projected
//!   covariances k_ℓ and k̂_ℓ, negative Sobolev norms
//! - [`lattice`]: the discrete torus T⁴_ℓ — discrete Laplacian, spectral gap,
//!   Green operator (DFT / Neumann / dense), discrete field and Gibbs density
//! - [`conformal`]: conformal weights e^{2φ}g, the kernel shift k − ½φ̄⊕φ̄
//!   and the field shift h − ⟨h,1⟩_{g'}/vol_{g'}
//! - [`liouville`]: semi-discrete and discrete Liouville measures, moment
//!   identities and the quasi-invariance mass factor
//! - [`io`]: the shared little-endian binary dump format and JSONL reports

pub mod conformal;
pub mod fft4;
pub mod field;
pub mod haar;
pub mod io;
pub mod kernel;
pub mod lattice;
pub mod liouville;
pub mod rng;
pub mod special;
pub mod spectral;
pub mod torus;

pub use haar::{DyadicCube, GridField, HaarIndex};
pub use kernel::{KernelEvaluator, KernelKind, KernelTable, KernelValue};
pub use rng::SeededStream;
pub use spectral::SpectralField;
pub use torus::{FrequencyVector, TorusPoint};

/// Library error type shared by all modules.
#[derive(thiserror::Error, Debug)]
pub enum Error {
    /// Kernel evaluation at coincident points (the kernel diverges there).
    #[error("coincident points: kernel diverges (torus distance {0:.3e})")]
    CoincidentPoints(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Operation defined only on grounded (mean-zero) inputs.
    #[error("input not grounded: mean = {0:.3e}")]
    NotGrounded(f64),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed dump: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
