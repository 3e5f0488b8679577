//! Constructive transformations: modulo-to-integer conversion, 2-flow
//! decomposition, eulerian decomposition and circular-flow normalization.

pub mod conversion;
pub mod decompose;
pub mod eulerian;
pub mod normalize;

pub use conversion::{
    modflow_to_intflow, modflow_to_intflow_with, ConversionOptions, ConversionReport, ConversionState, ConversionStats,
    Ditrail, Tadpole,
};
pub use decompose::{decompose_into_2_flows, decompose_into_2_flows_with};
pub use eulerian::{eulerian_decompose, eulerian_decompose_with, DecompositionMember, EulerianDecomposition};
pub use normalize::{normalize_circular_flow, normalize_circular_flow_with, NormalizationState};
