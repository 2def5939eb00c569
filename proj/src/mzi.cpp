#include "duality/mzi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "duality/errors.hpp"

namespace duality {

namespace {

// V / gamma: the fringe contrast the state would have at full coherence.
double coherent_visibility(const TwoPathState& s) {
    return 2.0 * std::abs(s.c1 * s.c2) / s.norm();
}

} // namespace

LossChannel::LossChannel(Arm arm_, double a) : arm(arm_), survival_amplitude(a) {
    if (!(a >= 0.0 && a <= 1.0)) {
        throw std::invalid_argument("LossChannel: survival amplitude must lie in [0, 1], got " +
                                    std::to_string(a));
    }
}

double fringe_offset(const TwoPathState& s) {
    const Complex cross = s.c1 * std::conj(s.c2) * std::conj(s.marginal_overlap);
    return std::arg(cross) + s.extra_phase;
}

double detection_probability(const TwoPathState& s, double phi) {
    const double n = s.norm();
    const double fringe = 2.0 * std::abs(s.c1 * s.c2) * s.coherence() *
                          std::cos(phi + fringe_offset(s));
    return std::clamp(0.5 * (n + fringe) / n, 0.0, 1.0);
}

double detection_probability(const LossyTwoPathState& s, double phi) {
    return detection_probability(s.state, phi);
}

double visibility(const TwoPathState& s) {
    return coherent_visibility(s) * s.coherence();
}

double visibility(const LossyTwoPathState& s) { return visibility(s.state); }

double predictability(const TwoPathState& s) {
    return std::abs(std::norm(s.c1) - std::norm(s.c2)) / s.norm();
}

double predictability(const LossyTwoPathState& s) { return predictability(s.state); }

double duality_residual(const TwoPathState& s) {
    const double gamma = s.coherence();
    const double scaled_v = gamma < kCoherenceEpsilon ? coherent_visibility(s)
                                                      : visibility(s) / gamma;
    const double d = predictability(s);
    return scaled_v * scaled_v + d * d - 1.0;
}

double duality_residual(const LossyTwoPathState& s) { return duality_residual(s.state); }

LossyTwoPathState apply_loss(const TwoPathState& s, const LossChannel& ch) {
    LossyTwoPathState out{s};
    if (ch.arm == Arm::Arm1) {
        out.state.c1 *= ch.survival_amplitude;
    } else {
        out.state.c2 *= ch.survival_amplitude;
    }
    if (!(out.survival_norm() > 0.0)) {
        throw DomainError("apply_loss: no photon survives the loss channel");
    }
    return out;
}

TwoPathState renormalized(const LossyTwoPathState& s) {
    TwoPathState out = s.state;
    const double scale = 1.0 / std::sqrt(s.survival_norm());
    out.c1 *= scale;
    out.c2 *= scale;
    return out;
}

} // namespace duality
