//! Periodic-point counts and zeta functions from Markov covers.

mod growth;
mod phi;
mod spectrum;

pub use growth::{
    cover_report, growth_report, oracle_comparison, sft_report, Audit, Growth, ZetaReport, RHO_TOLERANCE,
};
pub use phi::{phi_audit, PhiAudit, PhiTerm};
pub use spectrum::{
    consistency_check, counts_via_cover, series_agree, signed_counts, zeta_products, zeta_series_from_counts,
    zeta_via_cover, CoverSpectrum,
};
