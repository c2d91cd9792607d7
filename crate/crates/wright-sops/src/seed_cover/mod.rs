//! Initial cube cover built from pointwise envelopes on periodic solutions.

mod cover;
mod envelope;
mod fixture;
mod projection;

pub use cover::{CoverOutcome, build_cover, grid_hull};
pub use envelope::{
    BoundingFunction, EnvelopeSet, Provenance, bootstrap_envelopes, parse_envelopes, read_envelopes, write_envelopes,
};
pub use fixture::{FixtureParams, aligned_profile, fixture_envelopes};
pub use projection::{fourier_projection, time_translate};
