#include "duality/cli.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "duality/imaging.hpp"

using namespace duality;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "duality");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::map<std::string, std::string> key_values(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("duality_cli_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST(Cli, HelpDocumentsEveryFlag) {
    const std::map<std::string, std::vector<std::string>> flags{
        {"demo-ellipse", {"--eta", "--samples", "--out"}},
        {"scan", {"--p1", "--gamma", "--phase", "--grid", "--photons", "--seed", "--noiseless", "--out"}},
        {"calibrate", {"--p1", "--gamma", "--alpha", "--phase", "--grid", "--photons", "--seed",
                       "--noiseless", "--out"}},
        {"synth", {"--glyph", "--width", "--height", "--softness", "--ascii", "--out"}},
        {"reconstruct", {"--object", "--p1", "--gamma", "--alpha", "--grid", "--photons", "--seed",
                         "--noiseless", "--no-calibrate", "--threads", "--out-dir"}},
        {"report", {"--truth", "--reconstructed", "--out"}},
    };
    for (const auto& [cmd, expected] : flags) {
        const auto r = run({cmd, "--help"});
        EXPECT_EQ(r.code, 0) << cmd;
        for (const auto& f : expected) EXPECT_NE(r.out.find(f), std::string::npos) << cmd << " " << f;
    }
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, exit_code::kUsage);
    EXPECT_EQ(run({"scan", "--bogus"}).code, exit_code::kUsage);
    EXPECT_EQ(run({"frobnicate"}).code, exit_code::kUsage);
    EXPECT_EQ(run({"scan", "--p1", "1.5", "--seed", "1"}).code, exit_code::kUsage);
    EXPECT_EQ(run({"demo-ellipse", "--eta", "1.0"}).code, exit_code::kUsage);
    EXPECT_EQ(run({"scan", "--grid", "4", "--seed", "1"}).code, exit_code::kUsage);

    const auto no_seed = run({"scan"});
    EXPECT_EQ(no_seed.code, exit_code::kUsage);
    EXPECT_NE(no_seed.err.find("--seed"), std::string::npos);
    EXPECT_EQ(std::count(no_seed.err.begin(), no_seed.err.end(), '\n'), 1);
}

TEST(Cli, DemoEllipseLoci) {
    const auto r = run({"demo-ellipse", "--samples", "201"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "eta,gamma,p1,d,v");
    std::map<double, double> max_v;
    int rows = 0;
    while (std::getline(in, line)) {
        double eta, gamma, p1, d, v;
        ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &eta, &gamma, &p1, &d, &v), 5);
        EXPECT_NEAR((v / (1.0 - eta)) * (v / (1.0 - eta)) + d * d, 1.0, 1e-12);
        max_v[eta] = std::max(max_v[eta], v);
        ++rows;
    }
    EXPECT_EQ(rows, 3 * 201);
    EXPECT_NEAR(max_v[0.0], 1.0, 1e-9);
    EXPECT_NEAR(max_v[0.2], 0.8, 1e-9);
    EXPECT_NEAR(max_v[0.5], 0.5, 1e-9);
}

TEST(Cli, CalibrateNoiselessPrintsProduct) {
    const auto r = run({"calibrate", "--alpha", "0.9", "--gamma", "0.95", "--noiseless"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(std::stod(key_values(r.out).at("alpha_gamma_hat")), 0.855, 1e-12);

    const auto dir = temp_dir("calibrate");
    const auto to_file = run({"calibrate", "--alpha", "0.9", "--gamma", "0.95", "--noiseless",
                              "--out", (dir / "cal.txt").string()});
    ASSERT_EQ(to_file.code, 0);
    EXPECT_NEAR(std::stod(to_file.out), 0.855, 1e-12);
    EXPECT_NEAR(std::stod(key_values(slurp(dir / "cal.txt")).at("alpha_gamma_hat")), 0.855, 1e-12);
}

TEST(Cli, CalibrateSingularSplitIsPhysicsError) {
    const auto r = run({"calibrate", "--p1", "1", "--noiseless"});
    EXPECT_EQ(r.code, exit_code::kPhysics);
    EXPECT_NE(r.err.find("predictability"), std::string::npos);
}

// Frozen output of `scan --p1 0.5 --gamma 1 --photons 100000 --seed 12345`.
TEST(Cli, ScanMatchesGoldenFile) {
    const auto r = run({"scan", "--p1", "0.5", "--gamma", "1", "--photons", "100000", "--seed", "12345"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, slurp(std::filesystem::path(DUALITY_GOLDEN_DIR) / "scan_balanced_seed12345.csv"));
}

TEST(Cli, SynthReconstructNoiselessReproducesObject) {
    const auto dir = temp_dir("recon");
    const auto object = (dir / "s.pgm").string();
    ASSERT_EQ(run({"synth", "--glyph", "S", "--width", "64", "--height", "64", "--out", object}).code, 0);
    const auto r = run({"reconstruct", "--object", object, "--noiseless", "--out-dir",
                        (dir / "out").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(slurp(dir / "out" / "reconstructed.pgm"), slurp(object));
    EXPECT_LT(std::stod(key_values(r.out).at("rmse")), 1e-6);

    const auto rep = run({"report", "--truth", object, "--reconstructed",
                          (dir / "out" / "reconstructed.csv").string()});
    ASSERT_EQ(rep.code, 0) << rep.err;
    EXPECT_LT(std::stod(key_values(rep.out).at("max_abs_error")), 1e-6);
}

TEST(Cli, StochasticCommandsAreByteReproducible) {
    const auto dir = temp_dir("repro");
    const auto object = (dir / "o.csv").string();
    ASSERT_EQ(run({"synth", "--glyph", "O", "--width", "24", "--height", "20", "--out", object}).code, 0);
    for (const char* sub : {"a", "b"}) {
        ASSERT_EQ(run({"reconstruct", "--object", object, "--gamma", "0.9", "--alpha", "0.95",
                       "--photons", "5000", "--seed", "99", "--threads", sub[0] == 'a' ? "1" : "4",
                       "--out-dir", (dir / sub).string()})
                      .code,
                  0);
    }
    for (const char* f : {"summary.txt", "reconstructed.pgm", "reconstructed.csv", "visibility.csv",
                          "predictability.csv", "ellipticity.csv"}) {
        EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
    }
    const auto c1 = run({"calibrate", "--gamma", "0.9", "--seed", "5"});
    const auto c2 = run({"calibrate", "--gamma", "0.9", "--seed", "5"});
    EXPECT_EQ(c1.out, c2.out);
}

TEST(Cli, DataErrors) {
    const auto dir = temp_dir("data");
    EXPECT_EQ(run({"reconstruct", "--object", (dir / "nope.pgm").string(), "--seed", "1",
                   "--out-dir", (dir / "o").string()})
                  .code,
              exit_code::kData);
    {
        std::ofstream bad(dir / "bad.csv");
        bad << "0.1,0.2\n0.3\n";
    }
    EXPECT_EQ(run({"report", "--truth", (dir / "bad.csv").string(), "--reconstructed",
                   (dir / "bad.csv").string()})
                  .code,
              exit_code::kData);
}

TEST(Cli, ConfigFileWithFlagOverride) {
    const auto dir = temp_dir("config");
    {
        std::ofstream cfg(dir / "run.ini");
        cfg << "[calibrate]\ngamma=0.5\nalpha=0.5\nnoiseless=true\n";
    }
    const auto from_file = run({"--config", (dir / "run.ini").string(), "calibrate"});
    ASSERT_EQ(from_file.code, 0) << from_file.err;
    EXPECT_NEAR(std::stod(key_values(from_file.out).at("alpha_gamma_hat")), 0.25, 1e-12);

    const auto overridden =
        run({"--config", (dir / "run.ini").string(), "calibrate", "--alpha", "1.0"});
    ASSERT_EQ(overridden.code, 0) << overridden.err;
    EXPECT_NEAR(std::stod(key_values(overridden.out).at("alpha_gamma_hat")), 0.5, 1e-12);
}

TEST(EllipseLoci, RejectsBadInput) {
    EXPECT_THROW(ellipse_loci({1.0}, 10), std::invalid_argument);
    EXPECT_THROW(ellipse_loci({-0.1}, 10), std::invalid_argument);
    EXPECT_THROW(ellipse_loci({0.2}, 1), std::invalid_argument);
    EXPECT_EQ(ellipse_loci({0.0, 0.3}, 5).size(), 10u);
}
