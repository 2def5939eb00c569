#pragma once

#include <stdexcept>
#include <string>

namespace duality {

// Malformed input files or unparseable data.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The physics leaves the requested quantity undefined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// D -> 1: one arm carries no amplitude, V = 0 for every T and the
// transmittance cannot be identified from (V, D).
class SingularPredictability : public DomainError {
public:
    explicit SingularPredictability(double d_hat);

    double predictability() const { return d_hat_; }

private:
    double d_hat_;
};

} // namespace duality
