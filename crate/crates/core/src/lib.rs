//! Models for comparing and tuning power-delivery networks (PDNs) in
//! scalable mm-wave phased arrays.
//!
//! The crate is organised bottom-up:
//!
//! - [`netcore`]: frequency-domain two-port algebra (chain matrices,
//!   transmission lines, lumped elements, transformers, an ideal Wilkinson
//!   divider, S-parameter conversion).
//! - [`pdn_topology`]: analytic H-tree models for T-junction, Wilkinson and
//!   aperture-coupled distribution (routing length, junction count,
//!   footprint, loss, normalized area, band flatness).
//! - [`aperture`]: circuit model of the aperture-coupled differential feed
//!   and a bounded simplex search for matching geometry.
//! - [`array_budget`]: array factor, fill factor, EIRP and EIRP/PDC
//!   arithmetic plus the state-of-the-art comparison table.
//! - [`cli`]: scenario configuration and deterministic CSV/SVG reports
//!   behind the `pdnlab` binary.
//!
//! Every model is a pure function of its inputs.

pub mod aperture;
pub mod array_budget;
pub mod cli;
pub mod netcore;
pub mod pdn_topology;

/// Speed of light in vacuum, mm/s.
pub const C0_MM_PER_S: f64 = 299_792_458_000.0;
