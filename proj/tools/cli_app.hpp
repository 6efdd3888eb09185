#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "lmbo/evolution.hpp"
#include "lmbo/lattice.hpp"
#include "lmbo/shapes.hpp"

namespace lmbo::cli {

// Unset numeric fields hold NaN; presets and shape defaults fill them in.
struct SimulateConfig {
    std::string preset;  // subcritical | critical | supercritical | dumbbell | finger, or empty
    std::string shape;   // disk | dumbbell | finger | halfplane | parabola
    double radius = kUnset;
    double center_x = kUnset;
    double center_y = kUnset;
    double separation = kUnset;
    double neck = kUnset;
    double half_width = kUnset;
    double length = kUnset;
    double kappa = kUnset;
    double theta = kUnset;  // degrees
    double h = kUnset;
    double tau = kUnset;
    double mu = kUnset;
    double gamma = kUnset;
    double scale_C = kUnset;
    int steps = -1;   // -1: unset
    int stride = -1;
    std::vector<double> bbox;  // x0 y0 x1 y1
    std::string raster;        // within | center
    std::string path;          // fft | direct
    std::string output_dir;

    static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
};

struct VelocityConfig {
    double mu = 1.0;
    double kappa = 0.0;
    std::string sweep;  // CSV path for the (mu kappa, n0) table
    double sweep_min = 0.1;
    double sweep_max = 10.0;
    int sweep_count = 100;
    std::string consistency;  // CSV path for the (mu, n0/mu, kappa) table
};

struct PinningConfig {
    double tol = 1e-4;
    bool check = false;
};

struct AngleSweepConfig {
    std::vector<double> mu{0.5, 0.625, 0.75, 0.875, 1.0};
    double kappa = 4.0;
    double deg_min = 0.0;
    double deg_max = 45.0;
    double deg_step = 1.0;
    int max_q = 60;
    std::string output_dir = "angle_sweep";
};

struct VerifyConfig {
    std::string suite = "all";
    std::uint64_t seed = 1;
};

struct ExperimentConfig {
    std::string command;
    SimulateConfig simulate;
    VelocityConfig velocity;
    PinningConfig pinning;
    AngleSweepConfig angle_sweep;
    VerifyConfig verify;
};

bool operator==(const SimulateConfig& a, const SimulateConfig& b);
bool operator==(const VelocityConfig& a, const VelocityConfig& b);
bool operator==(const PinningConfig& a, const PinningConfig& b);
bool operator==(const AngleSweepConfig& a, const AngleSweepConfig& b);
bool operator==(const VerifyConfig& a, const VerifyConfig& b);
bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

/// Parses `lattice-mbo <command> [--config FILE] [flags]` (argv[0] is the program
/// name). Command-line flags win over config values. Throws ConfigError.
ExperimentConfig parse_args(const std::vector<std::string>& args);

/// Config-file text for the active command; parse_args on it reproduces `cfg`.
std::string serialize(const ExperimentConfig& cfg);

/// Simulation setup after presets and defaults have been applied.
struct SimulationPlan {
    SimulateConfig config;  // fully populated
    SchemeParams params;
    Shape shape;
    Rect bbox;
    RasterOptions raster;
    HeatPath path = HeatPath::Fft;
};

/// Applies the preset, fills shape defaults and validates. Throws ConfigError.
SimulationPlan plan_simulation(const SimulateConfig& cfg);

/// Full command dispatch; returns the process exit status
/// (0 ok, 1 validation, 2 numerical failure, 3 verification failure).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lmbo::cli
