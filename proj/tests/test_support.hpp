#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "duality/core_states.hpp"

namespace duality::testing {

inline std::vector<Complex> random_complex_vector(std::mt19937_64& rng, std::size_t d) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Complex> v(d);
    for (auto& c : v) c = Complex{g(rng), g(rng)};
    return v;
}

inline MarginalVector random_marginal(std::mt19937_64& rng, std::size_t d) {
    return MarginalVector::normalized(random_complex_vector(rng, d));
}

// Random path amplitudes with |c1|^2 + |c2|^2 = 1 and arbitrary phases.
inline std::pair<Complex, Complex> random_amplitudes(std::mt19937_64& rng) {
    auto v = random_complex_vector(rng, 2);
    const double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    return {v[0] / n, v[1] / n};
}

// Explicit joint state psi[j][m] of c1|1>|M1> + e^{-i phi} c2|2>|M2>.
struct JointState {
    std::vector<Complex> path1;
    std::vector<Complex> path2;
};

inline JointState build_joint(Complex c1, Complex c2, const MarginalVector& m1,
                              const MarginalVector& m2, double phi) {
    JointState psi;
    const Complex phase = std::polar(1.0, -phi);
    for (std::size_t m = 0; m < m1.dimension(); ++m) {
        psi.path1.push_back(c1 * m1[m]);
        psi.path2.push_back(phase * c2 * m2[m]);
    }
    return psi;
}

// rho_jk = sum_m psi_j[m] conj(psi_k[m]) -- brute-force partial trace.
struct TracedOut {
    double rho11;
    Complex rho12;
    double rho22;
    double det;  // via Cauchy-Binet on the joint columns, free of cancellation
};

inline TracedOut trace_out_marginal(const JointState& psi) {
    TracedOut r{0.0, {0.0, 0.0}, 0.0, 0.0};
    const std::size_t d = psi.path1.size();
    for (std::size_t m = 0; m < d; ++m) {
        r.rho11 += std::norm(psi.path1[m]);
        r.rho22 += std::norm(psi.path2[m]);
        r.rho12 += psi.path1[m] * std::conj(psi.path2[m]);
    }
    for (std::size_t m = 0; m < d; ++m) {
        for (std::size_t n = m + 1; n < d; ++n) {
            r.det += std::norm(psi.path1[m] * psi.path2[n] - psi.path1[n] * psi.path2[m]);
        }
    }
    return r;
}

} // namespace duality::testing
