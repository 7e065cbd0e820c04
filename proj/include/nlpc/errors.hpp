#pragma once

#include <stdexcept>
#include <string>

namespace nlpc {

/// Input outside the physical domain of an operation (wavelength window,
/// contrast range, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A field frequency falls inside a photonic band gap, where the Bloch wave
/// does not propagate. `field` names the offending wave ("pump", "signal",
/// "idler", or a polarization label).
class InGapError : public DomainError {
public:
    InGapError(std::string field, double omega)
        : DomainError(field + " frequency " + std::to_string(omega) + " rad/s lies inside a band gap"),
          field_(std::move(field)),
          omega_(omega) {}

    const std::string& field() const noexcept { return field_; }
    double omega() const noexcept { return omega_; }

private:
    std::string field_;
    double omega_;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nlpc
