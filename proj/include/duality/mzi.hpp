#pragma once

#include "duality/core_states.hpp"

namespace duality {

enum class Arm { Arm1, Arm2 };

/// a|k>|M_k> + b|l>|M_l>: the photon in `arm` survives with amplitude a.
struct LossChannel {
    Arm arm = Arm::Arm1;
    double survival_amplitude = 1.0;

    LossChannel(Arm arm, double survival_amplitude);
};

/// Two-path state after a loss channel. The lost-photon mode never
/// re-interferes, so it is represented only by the missing norm.
struct LossyTwoPathState {
    TwoPathState state;

    double survival_norm() const { return state.norm(); }
};

/// Coherence threshold below which V/gamma takes its analytic limit.
inline constexpr double kCoherenceEpsilon = 1e-9;

/// One output port of an ideal 50/50 recombiner, conditioned on survival:
///   P(phi) = [N + 2|c1 c2| gamma cos(phi + phi0)] / (2N),
///   phi0   = arg(c1 conj(c2) conj(<M1|M2>)) + extra_phase.
/// The complementary port is 1 - P(phi).
double detection_probability(const TwoPathState& s, double phi);
double detection_probability(const LossyTwoPathState& s, double phi);

/// Effective fringe offset phi0 of detection_probability.
double fringe_offset(const TwoPathState& s);

double visibility(const TwoPathState& s);
double visibility(const LossyTwoPathState& s);

double predictability(const TwoPathState& s);
double predictability(const LossyTwoPathState& s);

/// (V/gamma)^2 + D^2 - 1. Zero for every valid state.
double duality_residual(const TwoPathState& s);
double duality_residual(const LossyTwoPathState& s);

/// Throws DomainError if nothing survives.
LossyTwoPathState apply_loss(const TwoPathState& s, const LossChannel& ch);

/// Renormalizes a lossy state back onto the unit sphere (survival-conditioned).
TwoPathState renormalized(const LossyTwoPathState& s);

} // namespace duality
