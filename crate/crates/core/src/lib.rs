//! Exact p-adic dynamics of the Potts–Bethe map
//!
//! ```text
//! f(x) = ((θx + q − 1) / (x + θ + q − 2))^k
//! ```
//!
//! over `Q_p` with `p ≥ 3` and `p | q`. The crate is organised bottom-up:
//!
//! * [`padic`] — capped-relative p-adic numbers, norms and balls.
//! * [`hensel`] — Newton/Hensel root finding, principal k-th roots,
//!   Teichmüller roots of unity, and the nontrivial fixed point of the
//!   single-symbol regime.
//! * [`potts`] — the map itself, its multiplier, regime classification,
//!   the Markov partition and the inverse branches.
//! * [`dynamics`] — orbits, basin/Julia classification, itineraries,
//!   cylinder and periodic points, the incidence matrix, the dynamical
//!   metric and the pole-preimage tree.
//! * [`cli`] — batch front end producing JSON/CSV reports.

pub mod cli;
pub mod dynamics;
pub mod hensel;
pub mod padic;
pub mod potts;
pub mod sampling;

pub use dynamics::{Classification, DynError, IncidenceMatrix, Itinerary, OrbitResult, OrbitStatus, PottsSystem};
pub use hensel::{principal_kth_root, roots_of_unity, PolyZp};
pub use padic::{Ball, NormExp, Padic, PadicError, Separation};
pub use potts::{MapParams, Partition, Regime, RegimeTag};

/// Library version embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
