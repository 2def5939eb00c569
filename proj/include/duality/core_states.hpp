#pragma once

#include <array>
#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace duality {

using Complex = std::complex<double>;

inline constexpr double kNormTolerance = 1e-12;

/// Unit-norm vector standing in for a marginal state |M> (everything that is
/// not the path mode: internal photon degrees of freedom plus environment).
class MarginalVector {
public:
    /// Throws std::invalid_argument if empty, non-finite, or not unit norm
    /// within kNormTolerance.
    explicit MarginalVector(std::vector<Complex> components);
    MarginalVector(std::initializer_list<Complex> components);

    /// Rescales arbitrary nonzero input to unit norm.
    static MarginalVector normalized(std::vector<Complex> components);

    std::size_t dimension() const { return components_.size(); }
    std::span<const Complex> components() const { return components_; }
    const Complex& operator[](std::size_t i) const { return components_[i]; }

private:
    std::vector<Complex> components_;
};

/// <a|b>, antilinear in the first argument.
Complex inner_product(const MarginalVector& a, const MarginalVector& b);

/// gamma = |<a|b>|, clamped into [0, 1] against rounding.
double degree_of_coherence(const MarginalVector& a, const MarginalVector& b);

/// sqrt(1 - |<a|b>|^2) for unit vectors, accurate even when the overlap is
/// within rounding of 1.
double overlap_complement(const MarginalVector& a, const MarginalVector& b);

/// c1 |1>|M1> + e^{-i phi} c2 |2>|M2>, with the marginals kept only through
/// their overlap <M1|M2>.
struct TwoPathState {
    Complex c1;
    Complex c2;
    Complex marginal_overlap;  // <M1|M2>
    double extra_phase = 0.0;  // accumulated relative phase phi
    /// sqrt(1 - gamma^2), computed at construction without cancellation near
    /// gamma = 1. Both factories keep it consistent with marginal_overlap.
    double overlap_complement = 0.0;

    double coherence() const { return std::abs(marginal_overlap); }
    double norm() const { return std::norm(c1) + std::norm(c2); }
};

/// c1 = sqrt(p1), c2 = sqrt(1 - p1), overlap = gamma e^{i overlap_phase}.
/// Throws std::invalid_argument when p1 or gamma lies outside [0, 1].
TwoPathState make_two_path_state(double p1, double gamma, double overlap_phase, double phi);

/// Builds the state from explicit amplitudes and marginals; only the overlap
/// survives. Amplitudes must satisfy |c1|^2 + |c2|^2 = 1.
TwoPathState make_two_path_state(Complex c1, Complex c2, const MarginalVector& m1,
                                 const MarginalVector& m2, double phi);

/// 2x2 path density matrix. rho21 is never stored, it is conj(rho12).
class DensityMatrix2 {
public:
    DensityMatrix2(double rho11, Complex rho12, double rho22);

    double rho11() const { return rho11_; }
    double rho22() const { return rho22_; }
    Complex rho12() const { return rho12_; }
    Complex rho21() const { return std::conj(rho12_); }
    Complex operator()(int row, int col) const;

    double trace() const { return rho11_ + rho22_; }
    double determinant() const { return rho11_ * rho22_ - std::norm(rho12_); }
    /// Ascending.
    std::array<double, 2> eigenvalues() const;

private:
    double rho11_;
    Complex rho12_;
    double rho22_;
};

/// Partial trace of the joint path (x) marginal state over the marginal.
///
/// With the phase attached to path 2 as e^{-i phi}, the coherence is
/// rho12 = c1 conj(c2) e^{i phi} conj(<M1|M2>), i.e. Tr_M(|Psi><Psi|)
/// evaluated with <M2|M1> = conj(<M1|M2>).
DensityMatrix2 reduced_path_density(const TwoPathState& s);

/// Path-marginal entanglement C = 2|c1 c2| sqrt(1 - gamma^2).
double concurrence(const TwoPathState& s);

} // namespace duality
