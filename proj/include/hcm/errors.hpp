#pragma once

#include <stdexcept>
#include <string>

namespace hcm {

/// Base class for all hcm errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Matrix/element dimensions or algebra shapes do not match.
struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& what) : Error(what) {}
};

/// Module elements belong to different modules.
struct ParentMismatch : Error {
    explicit ParentMismatch(const std::string& what) : Error(what) {}
};

/// Input failed the Hermiticity symmetrization bound.
struct NotHermitian : Error {
    explicit NotHermitian(const std::string& what) : Error(what) {}
};

/// Input has an eigenvalue below the allowed negative round-off band.
struct NotPositive : Error {
    explicit NotPositive(const std::string& what) : Error(what) {}
};

/// Iterative kernel hit its sweep cap.
struct NoConvergence : Error {
    explicit NoConvergence(const std::string& what) : Error(what) {}
};

/// A singular value sits too close to a rank cutoff for the rank call
/// to be trustworthy.
struct ToleranceAmbiguity : Error {
    explicit ToleranceAmbiguity(const std::string& what) : Error(what) {}
};

/// A numerically-checked precondition of a constructive theorem failed.
struct PreconditionFailed : Error {
    explicit PreconditionFailed(const std::string& what) : Error(what) {}
};

/// The positive factor in a constructed isomorphism is numerically singular.
struct IllConditioned : Error {
    explicit IllConditioned(const std::string& what) : Error(what) {}
};

/// Unrecognized scenario kind.
struct UnknownKind : Error {
    explicit UnknownKind(const std::string& what) : Error(what) {}
};

/// Malformed external input (JSON, shape strings, ranges).
struct InvalidInput : Error {
    explicit InvalidInput(const std::string& what) : Error(what) {}
};

} // namespace hcm
