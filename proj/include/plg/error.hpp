#pragma once

#include <stdexcept>
#include <string>

namespace plg {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// A query point lies outside the closed unit square beyond tolerance.
class OutOfDomain : public Error {
public:
    using Error::Error;
};

class UnsupportedDegree : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class SolverFailure : public Error {
public:
    SolverFailure(const std::string& what, double residual)
        : Error(what), residual_(residual) {}

    /// Relative residual ||Ax - b|| / ||b|| reached before giving up.
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// An upwind point left the domain by more than the clamping tolerance.
class UpwindEscape : public Error {
public:
    UpwindEscape(const std::string& what, double courant)
        : Error(what), courant_(courant) {}

    double courant() const noexcept { return courant_; }

private:
    double courant_;
};

/// A time step failed; wraps the underlying error with the step index.
class SimulationError : public Error {
public:
    SimulationError(int step, const std::string& what)
        : Error("step " + std::to_string(step) + ": " + what), step_(step) {}

    int step() const noexcept { return step_; }

private:
    int step_;
};

}  // namespace plg
