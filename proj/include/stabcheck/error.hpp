#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stabcheck {

/// Base of every exception thrown by the library. Anything deriving from
/// this is an input or precondition problem, never a mathematical verdict.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit together (matrix/vector sizes, degrees, complexes).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

class InvalidComplexError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class NotACycleError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// A field sample is zero or numerically indistinguishable from zero.
class ZeroSampleError : public PreconditionError {
public:
    ZeroSampleError(std::size_t vertex, const std::string& what)
        : PreconditionError(what), vertex_(vertex) {}
    std::size_t vertex() const noexcept { return vertex_; }

private:
    std::size_t vertex_;
};

/// Samples at the two ends of an edge are too far apart in angle for the
/// discrete winding to be trusted; the mesh needs refinement there.
class AdequacyError : public PreconditionError {
public:
    AdequacyError(std::size_t edge, const std::string& what)
        : PreconditionError(what), edge_(edge) {}
    std::size_t edge() const noexcept { return edge_; }

private:
    std::size_t edge_;
};

/// A numerical trajectory left the domain where its sampler is defined.
class ChartError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace stabcheck
