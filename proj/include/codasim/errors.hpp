#ifndef CODASIM_ERRORS_HPP
#define CODASIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace codasim {

// Base class for all runtime failures of the simulation core.  Parsing
// problems are reported as Diagnostic data, not exceptions; everything that
// stops a run mid-flight derives from here.
class SimulationError : public std::runtime_error {
public:
    explicit SimulationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Linear algebra failure (singular matrix, all-zero row), names the entity.
class SolveError : public SimulationError {
public:
    SolveError(const std::string& context, const std::string& entity)
        : SimulationError(context + ": " + entity), entity_(entity) {}
    const std::string& entity() const { return entity_; }
private:
    std::string entity_;
};

// Nonlinear solver gave up.  Carries the final residual for post-mortems.
class ConvergenceError : public SimulationError {
public:
    ConvergenceError(const std::string& msg, double finalResidual)
        : SimulationError(msg), finalResidual_(finalResidual) {}
    double finalResidual() const { return finalResidual_; }
private:
    double finalResidual_;
};

// Input data does not cover the requested horizon.
class WeatherCoverageError : public SimulationError {
public:
    WeatherCoverageError(const std::string& msg, long long firstMissing)
        : SimulationError(msg), firstMissing_(firstMissing) {}
    long long firstMissingTime() const { return firstMissing_; }
private:
    long long firstMissing_;
};

} // namespace codasim

#endif
