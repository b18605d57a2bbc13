//! Exact computer algebra for the Galilean Lie algebra gal(n): coadjoint-invariant
//! polynomials on the dual space, the center of the universal enveloping algebra,
//! and numerical orbit reduction to transversal normal form.
//!
//! The crate is organized as a library; each major capability has a runnable
//! example under `examples/`:
//!
//! ```text
//! cargo run --example generators          invariant generator sets Q1, Q2, Q3, ...
//! cargo run --example structure_constants Lie brackets of the basis, Jacobi check
//! cargo run --example invariance          symbolic + sampled coadjoint invariance
//! cargo run --example center              symmetrized generators in the PBW basis
//! cargo run --example orbit_reduction     float reduction to (A, B, theta) form
//! cargo run --example minor_identity      minor sums vs characteristic coefficients
//! cargo run --example independence        Jacobian rank certificates
//! ```
//!
//! A thin command-line front end (`galcas`) exposes the same operations as
//! subcommands: `gen`, `verify`, `reduce`, `center`, `structure`.

pub mod envelope;
pub mod error;
pub mod galilean;
pub mod invariants;
pub mod orbitreduce;
pub mod polyring;
pub mod ratmat;
pub mod verify;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Name of the environment variable that caps the rayon worker-thread count.
pub const THREADS_ENV_VAR: &str = "GALCAS_THREADS";

/// Builds the global rayon pool honoring `GALCAS_THREADS` if set.
///
/// Call once at process start (the CLI does). Returns quietly if the pool was
/// already initialized or the variable is unset/invalid; results never depend
/// on the thread count, only wall time does.
pub fn configure_threads() {
    if let Ok(raw) = std::env::var(THREADS_ENV_VAR) {
        if let Ok(k) = raw.trim().parse::<usize>() {
            if k >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
        }
    }
}
