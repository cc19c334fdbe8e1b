#pragma once

#include <stdexcept>
#include <string>

namespace hybridbec {

/// Base of every error raised by the library. `kind()` is a stable
/// machine-readable tag used in the CLI's error JSON.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "internal"; }
};

class ConfigError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "config"; }
};

/// |B - B0| fell below the singularity floor.
class ResonanceSingularity : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "resonance-singularity"; }
};

class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain"; }
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "dimension-mismatch"; }
};

class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, double last_residual)
        : Error(what), last_residual_(last_residual) {}
    const char* kind() const noexcept override { return "no-convergence"; }
    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

/// Attractive interactions drove the condensate width to the grid floor.
class CollapseDetected : public Error {
public:
    CollapseDetected(const std::string& what, double width)
        : Error(what), width_(width) {}
    const char* kind() const noexcept override { return "collapse-detected"; }
    double width() const noexcept { return width_; }

private:
    double width_;
};

class FixedPointDivergence : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "fixed-point-divergence"; }
};

class EigensolverFailure : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "eigensolver-failure"; }
};

class NormalizationError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "mode-normalization"; }
};

/// Bose occupation requested for E <= 0.
class NonPositiveEnergy : public DomainError {
public:
    using DomainError::DomainError;
    const char* kind() const noexcept override { return "nonpositive-energy"; }
};

/// Variational minimizer landed on the search box boundary.
class NoInteriorMinimum : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "no-interior-minimum"; }
};

}  // namespace hybridbec
