use std::fmt;

use crate::signal::Shape;

/// Errors produced by the decomposition toolkit.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A signal with zero samples, or a shape with a zero dimension.
    Empty,
    /// Sample count does not match the product of the shape dimensions.
    SampleCount { shape: Shape, samples: usize },
    /// A NaN or infinite sample at the given flat index.
    NonFinite { index: usize },
    /// Two operands that must share a shape do not.
    ShapeMismatch { left: Shape, right: Shape },
    /// An operation requires a 1D signal.
    NotOneDimensional(Shape),
    /// A parameter outside its admissible range.
    InvalidParameter(String),
    /// A frequency response that is negative somewhere or not even.
    InvalidResponse(String),
    /// Filtering a real signal left an imaginary residue above tolerance.
    ImaginaryResidue { max_abs: f64 },
    /// Gram-Schmidt found a component (1-based index) in the span of its predecessors.
    LinearDependence { index: usize },
    /// A spiral steering rule produced no usable direction at step `step`.
    DegenerateSteering { step: usize },
    /// A black-box system under probe failed.
    System(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Empty => write!(f, "signal is empty"),
            Error::SampleCount { shape, samples } => {
                write!(f, "shape {shape} needs {} samples, got {samples}", shape.len())
            }
            Error::NonFinite { index } => write!(f, "non-finite sample at index {index}"),
            Error::ShapeMismatch { left, right } => {
                write!(f, "shape mismatch: {left} vs {right}")
            }
            Error::NotOneDimensional(shape) => {
                write!(f, "expected a 1D signal, got shape {shape}")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::InvalidResponse(msg) => write!(f, "invalid frequency response: {msg}"),
            Error::ImaginaryResidue { max_abs } => {
                write!(f, "filtered output has imaginary residue {max_abs:e}")
            }
            Error::LinearDependence { index } => {
                write!(f, "component {index} is linearly dependent on its predecessors")
            }
            Error::DegenerateSteering { step } => {
                write!(f, "steering rule degenerated at step {step}")
            }
            Error::System(msg) => write!(f, "system under probe failed: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
