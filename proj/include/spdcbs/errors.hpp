#pragma once

#include <stdexcept>
#include <string>

namespace spdcbs {

// Raised when a requested detector efficiency falls outside [0, 1]; the raw
// value is kept so callers can report how far out of range the requirement was.
class InfeasibleRegime : public std::domain_error {
public:
    InfeasibleRegime(double raw_value, const std::string& what)
        : std::domain_error(what), raw_(raw_value) {}

    double raw_value() const { return raw_; }

private:
    double raw_;
};

// Raised when a computation would exceed a configured size cap.
class ResourceLimit : public std::runtime_error {
public:
    ResourceLimit(long long requested, long long cap, const std::string& what)
        : std::runtime_error(what), requested_(requested), cap_(cap) {}

    long long requested() const { return requested_; }
    long long cap() const { return cap_; }

private:
    long long requested_;
    long long cap_;
};

// Raised when a posterior is conditioned on a zero-probability herald outcome.
class UndefinedPosterior : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace spdcbs
