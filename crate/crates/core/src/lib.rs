//! Exactly periodic signal decomposition with Ramanujan subspaces.
//!
//! A real signal of any length is split greedily into exactly periodic
//! components, one integer period at a time, by ranking candidate periods
//! with a periodicity metric and projecting onto the corresponding Ramanujan
//! subspace. The resulting periodic energy spectrum estimates hidden periods
//! and supports a length-independent similarity between signals.
//!
//! ```
//! use ramanujan_pursuit::{frsp, pes, three_cosine, PursuitConfig};
//!
//! let x = three_cosine(3060).unwrap();
//! let d = frsp(&x, &PursuitConfig::new(60).with_iterations(3)).unwrap();
//! assert_eq!(d.periods(), vec![17, 36, 45]);
//! let spectrum = pes(&d, 60).unwrap();
//! assert!(spectrum.energy(17) > 0.0);
//! ```

pub mod analysis;
pub mod error;
pub mod exec;
pub mod experiment;
pub mod metrics;
pub mod number_theory;
pub mod pursuit;
pub mod signal;
pub mod signal_gen;
pub mod subspace;

pub use analysis::{
    cosine_hellinger_distance, energy_histogram, hellinger_distance, periodic_similarity, pes,
    PeriodicEnergyHistogram, PeriodicEnergySpectrum,
};
pub use error::{Error, Result};
pub use exec::Execution;
pub use experiment::{run_experiment, ExperimentConfig, ExperimentReport, Protocol};
pub use metrics::{
    autocorrelation, estimate_metric_table, mle_periodic_energy, periodicity_metric, Acf,
    AcfMethod, MetricMode, MetricTable,
};
pub use number_theory::{
    divisors, euler_totient, factorize, ramanujan_sums, totient_summatory, PrimePowerFactorization,
    RamanujanSums,
};
pub use pursuit::{
    decompose, frsp, rsp, select_period, Algorithm, Decomposition, PursuitConfig, Selection,
};
pub use signal::Signal;
pub use signal_gen::{add_white_noise, random_mixture, three_cosine, MixtureSpec};
pub use subspace::{
    build_basis, project_exact, project_periodic, PeriodicComponent, RamanujanBasis,
};
