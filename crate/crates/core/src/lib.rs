//! Saturated designs for 2^k factorial experiments.
//!
//! Given the effects assumed negligible, the crate finds which sets of runs
//! may be deleted from the full factorial while keeping every remaining
//! effect estimable, ranks those sets by `|det C|` (equivalently by the
//! information in the kept design), and computes exact BLUE/BLUP estimates.
//! All linear algebra is exact.
//!
//! ```
//! use satdesign::{ModelSpec, SearchConfig, d_optimal};
//!
//! let spec = ModelSpec::from_labels(4, &["F123", "F124", "F134", "F234", "F1234"]).unwrap();
//! let best = d_optimal(&spec, &SearchConfig::default()).unwrap();
//! assert_eq!(best.best.abs_det_c, 48.into());
//! ```

pub mod error;
pub mod estimation;
pub mod factorial;
pub mod linalg;
pub mod partition;
pub mod report;
pub mod search;

pub use error::{Error, Result};
pub use estimation::{
    blue, blup_unobserved, dispersion, read_observations_csv, relative_efficiency, simulate,
    EstimationResult, ObservationVector, SimulationSummary,
};
pub use factorial::{
    all_effects, all_runs, build_model_matrix, parse_effect, parse_run, sign_of, Effect, ModelSpec, Run,
};
pub use linalg::{det_exact, inverse_exact, matmul, IntMatrix, RatMatrix};
pub use partition::{
    contrast_check, inverse_via_complement, make_partition, verify_theorem1, ComplementInverse, Partition,
    Theorem1Check,
};
pub use search::{
    d_optimal, enumerate_admissible, is_admissible, spectrum, DesignReport, Enumeration, OptimalDesign,
    SearchConfig, SearchMethod, Spectrum,
};
