#pragma once

#include <stdexcept>
#include <string>

namespace degseq {

// Base class for all library errors so callers can catch degseq failures
// separately from generic std exceptions.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Parameter validation failure; message names the violated inequality.
struct OutOfRange : Error {
    explicit OutOfRange(const std::string& msg) : Error(msg) {}
};

// epsilon choice leaves rho_eps >= 1.
struct DegenerateEpsilon : Error {
    explicit DegenerateEpsilon(const std::string& msg) : Error(msg) {}
};

// Preferential sampling requested on a graph with no edges.
struct EmptyGraph : Error {
    explicit EmptyGraph(const std::string& msg) : Error(msg) {}
};

// Adaptive quadrature could not certify the requested tolerance.
struct QuadratureFailure : Error {
    explicit QuadratureFailure(const std::string& msg) : Error(msg) {}
};

// Cancellation in an alternating sum exceeded the stability budget.
struct UnstableEvaluation : Error {
    explicit UnstableEvaluation(const std::string& msg) : Error(msg) {}
};

// Richardson extrapolation did not settle.
struct NoConvergence : Error {
    explicit NoConvergence(const std::string& msg) : Error(msg) {}
};

// No theoretical degree sequence exists for alpha1 >= 2*alpha_c.
struct ConjecturedRegime : Error {
    explicit ConjecturedRegime(const std::string& msg) : Error(msg) {}
};

struct TruncationTooSmall : Error {
    explicit TruncationTooSmall(const std::string& msg) : Error(msg) {}
};

// Mean-field iteration produced a negative count; start time too small.
struct NegativeMass : Error {
    explicit NegativeMass(const std::string& msg) : Error(msg) {}
};

// Tail fit window has too few populated degrees.
struct WindowTooSparse : Error {
    explicit WindowTooSparse(const std::string& msg) : Error(msg) {}
};

}  // namespace degseq
