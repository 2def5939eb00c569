#pragma once

#include <iosfwd>
#include <vector>

namespace duality {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kData = 2;
inline constexpr int kPhysics = 3;
} // namespace exit_code

struct LocusPoint {
    double eta;
    double p1;
    double d;
    double v;
};

/// (D, V) points of the duality ellipse for gamma = 1 - eta, sweeping p1
/// over `samples` evenly spaced values in [0, 1].
std::vector<LocusPoint> ellipse_loci(const std::vector<double>& etas, int samples);

/// Entry point of the `duality` command-line tool.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace duality
