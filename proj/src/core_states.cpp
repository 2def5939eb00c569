#include "duality/core_states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace duality {

namespace {

double squared_norm(const std::vector<Complex>& v) {
    double sum = 0.0;
    for (const auto& c : v) sum += std::norm(c);
    return sum;
}

void require_finite(const std::vector<Complex>& v) {
    for (const auto& c : v) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw std::invalid_argument("MarginalVector: non-finite component");
        }
    }
}

void require_unit_interval(double value, const char* name) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " +
                                    std::to_string(value));
    }
}

} // namespace

MarginalVector::MarginalVector(std::vector<Complex> components)
    : components_(std::move(components)) {
    if (components_.empty()) {
        throw std::invalid_argument("MarginalVector: dimension must be >= 1");
    }
    require_finite(components_);
    const double n = std::sqrt(squared_norm(components_));
    if (std::abs(n - 1.0) > kNormTolerance) {
        throw std::invalid_argument("MarginalVector: norm " + std::to_string(n) + " is not 1");
    }
}

MarginalVector::MarginalVector(std::initializer_list<Complex> components)
    : MarginalVector(std::vector<Complex>(components)) {}

MarginalVector MarginalVector::normalized(std::vector<Complex> components) {
    require_finite(components);
    const double n = std::sqrt(squared_norm(components));
    if (components.empty() || n == 0.0) {
        throw std::invalid_argument("MarginalVector::normalized: zero vector");
    }
    for (auto& c : components) c /= n;
    return MarginalVector(std::move(components));
}

Complex inner_product(const MarginalVector& a, const MarginalVector& b) {
    if (a.dimension() != b.dimension()) {
        throw std::invalid_argument("inner_product: dimension mismatch (" +
                                    std::to_string(a.dimension()) + " vs " +
                                    std::to_string(b.dimension()) + ")");
    }
    Complex sum{0.0, 0.0};
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        sum += std::conj(a[i]) * b[i];
    }
    return sum;
}

double degree_of_coherence(const MarginalVector& a, const MarginalVector& b) {
    return std::clamp(std::abs(inner_product(a, b)), 0.0, 1.0);
}

TwoPathState make_two_path_state(double p1, double gamma, double overlap_phase, double phi) {
    require_unit_interval(p1, "p1");
    require_unit_interval(gamma, "gamma");
    TwoPathState s;
    s.c1 = Complex{std::sqrt(p1), 0.0};
    s.c2 = Complex{std::sqrt(1.0 - p1), 0.0};
    s.marginal_overlap = std::polar(gamma, overlap_phase);
    s.extra_phase = phi;
    s.overlap_complement = std::sqrt((1.0 - gamma) * (1.0 + gamma));
    return s;
}

TwoPathState make_two_path_state(Complex c1, Complex c2, const MarginalVector& m1,
                                 const MarginalVector& m2, double phi) {
    const double n = std::norm(c1) + std::norm(c2);
    if (std::abs(n - 1.0) > kNormTolerance) {
        throw std::invalid_argument("make_two_path_state: |c1|^2 + |c2|^2 = " +
                                    std::to_string(n) + ", expected 1");
    }
    TwoPathState s;
    s.c1 = c1;
    s.c2 = c2;
    s.marginal_overlap = inner_product(m1, m2);
    // Rounding can push |<M1|M2>| a hair above 1.
    if (const double g = std::abs(s.marginal_overlap); g > 1.0) {
        s.marginal_overlap /= g;
    }
    s.extra_phase = phi;
    s.overlap_complement = overlap_complement(m1, m2);
    return s;
}

double overlap_complement(const MarginalVector& a, const MarginalVector& b) {
    if (a.dimension() != b.dimension()) {
        throw std::invalid_argument("overlap_complement: dimension mismatch");
    }
    // Lagrange identity: |a|^2 |b|^2 - |<a|b>|^2 = sum_{i<j} |a_i b_j - a_j b_i|^2.
    double sum = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        for (std::size_t j = i + 1; j < a.dimension(); ++j) {
            sum += std::norm(a[i] * b[j] - a[j] * b[i]);
        }
    }
    return std::min(std::sqrt(sum), 1.0);
}

DensityMatrix2::DensityMatrix2(double rho11, Complex rho12, double rho22)
    : rho11_(rho11), rho12_(rho12), rho22_(rho22) {}

Complex DensityMatrix2::operator()(int row, int col) const {
    if (row == 0 && col == 0) return rho11_;
    if (row == 1 && col == 1) return rho22_;
    if (row == 0 && col == 1) return rho12_;
    if (row == 1 && col == 0) return rho21();
    throw std::out_of_range("DensityMatrix2: index out of range");
}

std::array<double, 2> DensityMatrix2::eigenvalues() const {
    const double half_trace = 0.5 * trace();
    const double half_gap = std::hypot(0.5 * (rho11_ - rho22_), std::abs(rho12_));
    return {half_trace - half_gap, half_trace + half_gap};
}

DensityMatrix2 reduced_path_density(const TwoPathState& s) {
    const Complex rho12 = s.c1 * std::conj(s.c2) * std::polar(1.0, s.extra_phase) *
                          std::conj(s.marginal_overlap);
    return DensityMatrix2(std::norm(s.c1), rho12, std::norm(s.c2));
}

double concurrence(const TwoPathState& s) {
    return 2.0 * std::abs(s.c1 * s.c2) * s.overlap_complement;
}

} // namespace duality
