//! Relaxed proximal point, relaxed forward-backward and adaptive
//! Douglas–Rachford maps, driven by the Krasnosel'skiĭ–Mann engine.

pub mod instance;
pub mod km;
pub mod params;

pub use instance::{shadow, AlgorithmInstance, AlgorithmKind};
pub use km::{
    km_run, Admissibility, FixedPointMap, FnMap, IterationTrace, KmOptions, Status, StepSequence,
    TraceRecord,
};
pub use params::{
    gamma0, kappa_star_adr_comonotone, kappa_star_adr_monotone, kappa_star_rfb, kappa_star_rpp,
    suggest_params, validate_params, validate_params_comonotone, validate_params_monotone,
    ParamReport, Regime, RfbCase, Verdict,
};
