//! Certificate-producing extraction of monochromatic trees, rainbow paths and
//! properly colored trees from edge-colored complete graphs.
//!
//! Every search returns a [`Certificate`] that can be checked independently
//! with [`verify_certificate`].

pub mod certificate;
pub mod coloring;
pub mod constructions;
pub mod error;
pub mod median_order;
pub mod mono_embed;
pub mod oracle;
pub mod proper;
pub mod rainbow;
pub mod tree;

pub use certificate::{verify_certificate, Certificate, CertificateDocument, Rejection, Stage, Verdict};
pub use coloring::{Color, EdgeColoring};
pub use error::{Error, Result};
pub use tree::TreeSpec;
