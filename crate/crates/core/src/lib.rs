//! Relay placement over log-Euclidean graph geometry, unit-capacity max
//! flow, parallel route selection, and correlated-MISO beamforming
//! codebook learning, with a reproducible Monte Carlo experiment harness.

pub mod beamforming;
pub mod error;
pub mod experiments;
pub mod flow;
pub mod graph;
pub mod placement;
pub mod rng;
pub mod routing;
pub mod spd;

pub use beamforming::{Channel, Codebook, CorrelationMatrix, GeometricClassifier, UserLabel};
pub use error::{Error, Result};
pub use experiments::ExperimentConfig;
pub use flow::FlowResult;
pub use graph::{Deployment, Graph, Point, RelayEdgeModel, VertexKind};
pub use placement::{ObjectiveKind, Placement};
pub use routing::{Clustering, Route};
pub use spd::{lem_distance, log_euclidean_mean, LogMatrix, SpdMatrix, TangentVector};
