#pragma once

#include <stdexcept>
#include <string>

namespace geoindex {

// Error taxonomy shared by every module.  The three mid-level categories map
// onto distinct process exit codes in the CLI:
//
//   DegenerateError  -> the input sits on a boundary case the algorithms
//                       refuse to resolve silently (exit code 2),
//   ResolutionError  -> the numerical procedure could not separate or certify
//                       what it found at the requested resolution (exit 3),
//   ConfigError      -> the request itself is malformed (exit 4).
//
// kind() is a stable machine-readable tag; message() carries the human text
// alone, what() both.
class Error : public std::runtime_error {
public:
    Error(std::string kind, std::string message)
        : std::runtime_error(kind + ": " + message),
          kind_(std::move(kind)),
          message_(std::move(message)) {}

    const std::string& kind() const noexcept { return kind_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::string kind_;
    std::string message_;
};

class DegenerateError : public Error {
public:
    using Error::Error;
};

class ResolutionError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& message) : Error("config", message) {}
};

// A path endpoint has a kernel at the working tolerance; crossing counts are
// undefined until the endpoints are perturbed away from the spectrum.
class EndpointDegenerateError : public DegenerateError {
public:
    explicit EndpointDegenerateError(const std::string& message)
        : DegenerateError("endpoint-degenerate", message) {}
};

// A bilinear form that must be invertible for the requested quantity has a
// numerical kernel.
class DegenerateFormError : public DegenerateError {
public:
    explicit DegenerateFormError(const std::string& message)
        : DegenerateError("degenerate-form", message) {}
};

// The right endpoint of the geodesic is conjugate to the left one; index
// counts are only claimed for nondegenerate geodesics.
class DegenerateGeodesicError : public DegenerateError {
public:
    explicit DegenerateGeodesicError(const std::string& message)
        : DegenerateError("degenerate-geodesic", message) {}
};

// The metric matrix failed to be positive definite where it was evaluated.
class MetricDegenerateError : public DegenerateError {
public:
    explicit MetricDegenerateError(const std::string& message)
        : DegenerateError("metric-degenerate", message) {}
};

// Gram-Schmidt ran out of admissible coordinate axes (tangent nearly spans
// the candidate axis).
class FrameDegenerateError : public DegenerateError {
public:
    explicit FrameDegenerateError(const std::string& message)
        : DegenerateError("frame-degenerate", message) {}
};

// Grid-scan candidates could not be reconciled with the kernel found after
// refinement; crossings are probably closer together than the grid can
// separate.
class UnresolvedClusterError : public ResolutionError {
public:
    explicit UnresolvedClusterError(const std::string& message)
        : ResolutionError("unresolved-cluster", message) {}
};

// A crossing was localized but its restricted derivative form is singular at
// the working tolerance, so no signature can be assigned.
class IrregularCrossingError : public ResolutionError {
public:
    explicit IrregularCrossingError(const std::string& message)
        : ResolutionError("irregular-crossing", message) {}
};

// kernel_fields was asked for a kernel at an instant where J(t0) has full
// rank at the working tolerance.
class NotAConjugateInstantError : public ResolutionError {
public:
    explicit NotAConjugateInstantError(const std::string& message)
        : ResolutionError("not-a-conjugate-instant", message) {}
};

// crossing-form evaluation was requested at a parameter with no kernel.
class NotACrossingError : public ResolutionError {
public:
    explicit NotACrossingError(const std::string& message)
        : ResolutionError("not-a-crossing", message) {}
};

}  // namespace geoindex
