//! Layered blocking scaffolds in lattice coordinates.
//!
//! A scaffold is `ell_max + 1` layers of `m` boxes stacked above its center.
//! Each box has an activation region on its right; a blue site there grows
//! leftward (`B = {e1}`) across the box. [`protection_certificate`] runs the
//! engine to check that the resulting blue rows hold red back.

mod certificate;
mod field;
mod scaffold;
mod scenario;
mod success;

pub use certificate::{
    protection_certificate, AxisCheck, BoxOutcome, CertificateConfig, CertificateMode, CertificateReport, Engine,
    LayerOutcome,
};
pub use field::{hand_built_field, BernoulliField, Bitmap, BlueField, PointSet};
pub use scaffold::{BlockingScaffold, Rect, RescaleRule, ScaffoldBox, ScaffoldParams};
pub use scenario::AxisScenario;
pub use success::{
    gap_area, gap_stats, gaps_from_indicators, is_successful, succeeds, witness_row, GapStats, SuccessReport,
};
