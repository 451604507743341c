#pragma once

#include <stdexcept>
#include <string>

namespace framekit {

/// Malformed or mis-shaped input (non-finite entries, dimension mismatch).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SymmetryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an operation needs a frame but the family does not span.
class NotAFrameError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// ||I - A|| >= 1 (or inside the configured safety margin).
class ContractionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InconsistentThetaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A theorem hypothesis (e.g. mu < sqrt(m)) does not hold for the instance.
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GapHypothesisError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class LatticeError : public InputError {
public:
    using InputError::InputError;
};

/// An operator that must commute with the time-frequency lattice does not.
class StructureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace framekit
