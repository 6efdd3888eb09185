#include "cli_app.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "lmbo/anisotropy.hpp"
#include "lmbo/csv.hpp"
#include "lmbo/errors.hpp"
#include "lmbo/velocity_law.hpp"
#include "lmbo/verify.hpp"

namespace lmbo::cli {

namespace {

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

bool is_set(double v) { return !std::isnan(v); }

void fill(double& field, double value) {
    if (!is_set(field)) {
        field = value;
    }
}

void fill(std::string& field, const std::string& value) {
    if (field.empty()) {
        field = value;
    }
}

void fill(int& field, int value) {
    if (field < 0) {
        field = value;
    }
}

}  // namespace

bool operator==(const SimulateConfig& a, const SimulateConfig& b) {
    return a.preset == b.preset && a.shape == b.shape && same(a.radius, b.radius) && same(a.center_x, b.center_x) &&
           same(a.center_y, b.center_y) && same(a.separation, b.separation) && same(a.neck, b.neck) &&
           same(a.half_width, b.half_width) && same(a.length, b.length) && same(a.kappa, b.kappa) &&
           same(a.theta, b.theta) && same(a.h, b.h) && same(a.tau, b.tau) && same(a.mu, b.mu) &&
           same(a.gamma, b.gamma) && same(a.scale_C, b.scale_C) && a.steps == b.steps && a.stride == b.stride &&
           a.bbox == b.bbox && a.raster == b.raster && a.path == b.path && a.output_dir == b.output_dir;
}

bool operator==(const VelocityConfig& a, const VelocityConfig& b) {
    return a.mu == b.mu && a.kappa == b.kappa && a.sweep == b.sweep && a.sweep_min == b.sweep_min &&
           a.sweep_max == b.sweep_max && a.sweep_count == b.sweep_count && a.consistency == b.consistency;
}

bool operator==(const PinningConfig& a, const PinningConfig& b) { return a.tol == b.tol && a.check == b.check; }

bool operator==(const AngleSweepConfig& a, const AngleSweepConfig& b) {
    return a.mu == b.mu && a.kappa == b.kappa && a.deg_min == b.deg_min && a.deg_max == b.deg_max &&
           a.deg_step == b.deg_step && a.max_q == b.max_q && a.output_dir == b.output_dir;
}

bool operator==(const VerifyConfig& a, const VerifyConfig& b) { return a.suite == b.suite && a.seed == b.seed; }

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.command == b.command && a.simulate == b.simulate && a.velocity == b.velocity &&
           a.pinning == b.pinning && a.angle_sweep == b.angle_sweep && a.verify == b.verify;
}

// ---------------------------------------------------------------- parsing

namespace {

void build_app(CLI::App& app, ExperimentConfig& cfg) {
    app.require_subcommand(1);
    app.fallthrough();  // --config may follow the subcommand
    app.set_config("--config", "", "config file with one [section] per command; flags win");

    auto* sim = app.add_subcommand("simulate", "run the thresholding scheme on a shape");
    SimulateConfig& s = cfg.simulate;
    sim->set_help_flag("--help", "print this help message and exit");  // -h would clash with --h
    sim->add_option("--preset", s.preset, "subcritical | critical | supercritical | dumbbell | finger");
    sim->add_option("--shape", s.shape, "disk | dumbbell | finger | halfplane | parabola");
    sim->add_option("--radius", s.radius, "disk or dumbbell lobe radius");
    sim->add_option("--center-x", s.center_x, "disk centre x");
    sim->add_option("--center-y", s.center_y, "disk centre y");
    sim->add_option("--separation", s.separation, "dumbbell lobe centre distance");
    sim->add_option("--neck", s.neck, "dumbbell bar half-height");
    sim->add_option("--half-width", s.half_width, "finger half-width or parabola half-extent");
    sim->add_option("--length", s.length, "finger length or parabola depth");
    sim->add_option("--kappa", s.kappa, "parabola curvature at the apex");
    sim->add_option("--theta", s.theta, "tilt in degrees (parabola) or body direction (finger)");
    sim->add_option("--h", s.h, "lattice spacing");
    sim->add_option("--tau", s.tau, "time step");
    sim->add_option("--mu", s.mu, "critical scaling tau = mu h");
    sim->add_option("--gamma", s.gamma, "regime exponent in h = C tau^gamma");
    sim->add_option("--C", s.scale_C, "constant in h = C tau^gamma (default 1)");
    sim->add_option("--steps", s.steps, "number of scheme steps");
    sim->add_option("--stride", s.stride, "snapshot stride");
    sim->add_option("--bbox", s.bbox, "window x0 y0 x1 y1")->expected(4);
    sim->add_option("--raster", s.raster, "within | center");
    sim->add_option("--path", s.path, "fft | direct");
    sim->add_option("--output-dir", s.output_dir, "artifact directory");

    auto* vel = app.add_subcommand("velocity", "discrete normal velocity n0(mu, kappa)");
    VelocityConfig& v = cfg.velocity;
    vel->add_option("--mu", v.mu, "tau / h");
    vel->add_option("--kappa", v.kappa, "curvature");
    vel->add_option("--sweep", v.sweep, "write a (mu_kappa, n0) CSV to this path");
    vel->add_option("--sweep-min", v.sweep_min, "smallest mu kappa of the sweep");
    vel->add_option("--sweep-max", v.sweep_max, "largest mu kappa of the sweep");
    vel->add_option("--sweep-count", v.sweep_count, "number of sweep points");
    vel->add_option("--consistency", v.consistency, "write a (mu, n0/mu, kappa) CSV to this path");

    auto* pin = app.add_subcommand("pinning", "pinning threshold of mu kappa");
    pin->add_option("--tol", cfg.pinning.tol, "bisection tolerance");
    pin->add_flag("--check", cfg.pinning.check, "print phi(1, .) on both sides of the root");

    auto* sweep = app.add_subcommand("angle-sweep", "velocity against lattice angle");
    AngleSweepConfig& a = cfg.angle_sweep;
    sweep->add_option("--mu", a.mu, "list of mu values");
    sweep->add_option("--kappa", a.kappa, "curvature");
    sweep->add_option("--deg-min", a.deg_min, "first angle in degrees");
    sweep->add_option("--deg-max", a.deg_max, "last angle in degrees");
    sweep->add_option("--deg-step", a.deg_step, "angle increment in degrees");
    sweep->add_option("--max-q", a.max_q, "largest denominator of the rational slope");
    sweep->add_option("--output-dir", a.output_dir, "artifact directory");

    auto* ver = app.add_subcommand("verify", "oracle and property checks");
    ver->add_option("--suite", cfg.verify.suite, "kernel | evolution | velocity | anisotropy | all");
    ver->add_option("--seed", cfg.verify.seed, "seed of the random fixtures");

    for (auto* sub : {sim, vel, pin, sweep, ver}) {
        sub->callback([&cfg, sub] { cfg.command = sub->get_name(); });
    }
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.command == "simulate") {
        (void)plan_simulation(cfg.simulate);
    } else if (cfg.command == "velocity") {
        const VelocityConfig& v = cfg.velocity;
        if (!(v.mu > 0.0)) throw ConfigError("velocity: --mu must be positive");
        if (!(v.kappa >= 0.0)) throw ConfigError("velocity: --kappa must be >= 0");
        if (!v.sweep.empty() && !(v.sweep_min > 0.0 && v.sweep_max >= v.sweep_min && v.sweep_count >= 1)) {
            throw ConfigError("velocity: need 0 < --sweep-min <= --sweep-max and --sweep-count >= 1");
        }
    } else if (cfg.command == "pinning") {
        if (!(cfg.pinning.tol > 0.0 && cfg.pinning.tol < 0.1)) {
            throw ConfigError("pinning: --tol must lie in (0, 0.1)");
        }
    } else if (cfg.command == "angle-sweep") {
        const AngleSweepConfig& a = cfg.angle_sweep;
        if (a.mu.empty()) throw ConfigError("angle-sweep: --mu needs at least one value");
        for (double mu : a.mu) {
            if (!(mu > 0.0)) throw ConfigError("angle-sweep: every mu must be positive");
        }
        if (!(a.kappa >= 0.0)) throw ConfigError("angle-sweep: --kappa must be >= 0");
        if (!(a.deg_min >= 0.0 && a.deg_max < 90.0 && a.deg_min <= a.deg_max && a.deg_step > 0.0)) {
            throw ConfigError("angle-sweep: need 0 <= --deg-min <= --deg-max < 90 and --deg-step > 0");
        }
        if (a.max_q < 1) throw ConfigError("angle-sweep: --max-q must be >= 1");
    } else if (cfg.command == "verify") {
        const auto& names = verify_suite_names();
        if (std::find(names.begin(), names.end(), cfg.verify.suite) == names.end()) {
            throw ConfigError("verify: unknown suite '" + cfg.verify.suite + "'");
        }
    }
}

}  // namespace

ExperimentConfig parse_args(const std::vector<std::string>& args) {
    ExperimentConfig cfg;
    CLI::App app{"Lattice thresholding scheme for curvature motion", "lattice-mbo"};
    build_app(app, cfg);
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        throw;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }
    validate(cfg);
    return cfg;
}

namespace {

class IniWriter {
public:
    explicit IniWriter(std::ostream& os) : os_(os) {}
    void key(const char* k, double v) {
        if (is_set(v)) os_ << k << " = " << format_real(v) << '\n';
    }
    void key(const char* k, int v) {
        if (v >= 0) os_ << k << " = " << v << '\n';
    }
    void key(const char* k, std::uint64_t v) { os_ << k << " = " << v << '\n'; }
    void key(const char* k, bool v) { os_ << k << " = " << (v ? "true" : "false") << '\n'; }
    void key(const char* k, const std::string& v) {
        if (!v.empty()) os_ << k << " = \"" << v << "\"\n";
    }
    void key(const char* k, const std::vector<double>& v) {
        if (v.empty()) return;
        os_ << k << " = [";
        for (std::size_t i = 0; i < v.size(); ++i) {
            os_ << (i ? ", " : "") << format_real(v[i]);
        }
        os_ << "]\n";
    }

private:
    std::ostream& os_;
};

}  // namespace

std::string serialize(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << '[' << cfg.command << "]\n";
    IniWriter w(os);
    if (cfg.command == "simulate") {
        const SimulateConfig& s = cfg.simulate;
        w.key("preset", s.preset);
        w.key("shape", s.shape);
        w.key("radius", s.radius);
        w.key("center-x", s.center_x);
        w.key("center-y", s.center_y);
        w.key("separation", s.separation);
        w.key("neck", s.neck);
        w.key("half-width", s.half_width);
        w.key("length", s.length);
        w.key("kappa", s.kappa);
        w.key("theta", s.theta);
        w.key("h", s.h);
        w.key("tau", s.tau);
        w.key("mu", s.mu);
        w.key("gamma", s.gamma);
        w.key("C", s.scale_C);
        w.key("steps", s.steps);
        w.key("stride", s.stride);
        w.key("bbox", s.bbox);
        w.key("raster", s.raster);
        w.key("path", s.path);
        w.key("output-dir", s.output_dir);
    } else if (cfg.command == "velocity") {
        const VelocityConfig& v = cfg.velocity;
        w.key("mu", v.mu);
        w.key("kappa", v.kappa);
        w.key("sweep", v.sweep);
        w.key("sweep-min", v.sweep_min);
        w.key("sweep-max", v.sweep_max);
        w.key("sweep-count", v.sweep_count);
        w.key("consistency", v.consistency);
    } else if (cfg.command == "pinning") {
        w.key("tol", cfg.pinning.tol);
        w.key("check", cfg.pinning.check);
    } else if (cfg.command == "angle-sweep") {
        const AngleSweepConfig& a = cfg.angle_sweep;
        w.key("mu", a.mu);
        w.key("kappa", a.kappa);
        w.key("deg-min", a.deg_min);
        w.key("deg-max", a.deg_max);
        w.key("deg-step", a.deg_step);
        w.key("max-q", a.max_q);
        w.key("output-dir", a.output_dir);
    } else if (cfg.command == "verify") {
        w.key("suite", cfg.verify.suite);
        w.key("seed", cfg.verify.seed);
    }
    return os.str();
}

// ---------------------------------------------------------------- planning

namespace {

void apply_preset(SimulateConfig& c) {
    const bool user_step = is_set(c.tau) || is_set(c.mu) || is_set(c.gamma);
    auto step_gamma = [&](double gamma) {
        if (!user_step) {
            c.gamma = gamma;
            fill(c.scale_C, 1.0);
        }
    };
    auto step_mu = [&](double mu) {
        if (!user_step) c.mu = mu;
    };
    if (c.preset.empty()) {
        return;
    }
    if (c.preset == "subcritical") {
        // tau = h^{2/3}: tau >> h, one point of the mean-curvature regime.
        fill(c.shape, "disk");
        fill(c.radius, 1.0);
        fill(c.h, 1.0 / 256.0);
        step_gamma(1.5);
        fill(c.steps, 40);
    } else if (c.preset == "critical") {
        fill(c.shape, "disk");
        fill(c.radius, 1.0);
        fill(c.h, 1.0 / 64.0);
        step_mu(1.0);
        fill(c.steps, 40);
    } else if (c.preset == "supercritical") {
        // tau = h^2. The centre sits half a cell off the lattice so the disk has
        // no single-cell tips on the axes.
        fill(c.shape, "disk");
        fill(c.radius, 1.0);
        fill(c.h, 1.0 / 64.0);
        fill(c.center_x, 0.5 * c.h);
        fill(c.center_y, 0.5 * c.h);
        step_gamma(0.5);
        fill(c.steps, 10);
    } else if (c.preset == "dumbbell") {
        fill(c.shape, "dumbbell");
        fill(c.radius, 0.6);
        fill(c.separation, 1.6);
        fill(c.neck, 0.08);
        fill(c.h, 1.0 / 128.0);
        step_gamma(1.5);
        fill(c.steps, 6);
    } else if (c.preset == "finger") {
        fill(c.shape, "finger");
        fill(c.half_width, 0.25);
        fill(c.length, 1.5);
        fill(c.theta, -45.0);
        fill(c.h, 1.0 / 400.0);
        step_mu(1.0);
        fill(c.steps, 20);
        fill(c.raster, "center");
    } else {
        throw ConfigError("unknown preset '" + c.preset + "' (expected subcritical, critical, supercritical, dumbbell or finger)");
    }
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError(std::string("simulate: --") + name + " must be positive");
    }
}

}  // namespace

SimulationPlan plan_simulation(const SimulateConfig& input) {
    SimulationPlan plan;
    SimulateConfig c = input;
    apply_preset(c);
    if (c.shape.empty()) {
        throw ConfigError("simulate: no --shape given (or pick a --preset)");
    }
    if (!is_set(c.h)) {
        throw ConfigError("simulate: --h is required");
    }
    require_positive(c.h, "h");

    const int given = (is_set(c.tau) ? 1 : 0) + (is_set(c.mu) ? 1 : 0) + (is_set(c.gamma) ? 1 : 0);
    if (given != 1) {
        throw ConfigError("simulate: give exactly one of --tau, --mu, or --gamma (with optional --C)");
    }
    if (is_set(c.scale_C) && !is_set(c.gamma)) {
        throw ConfigError("simulate: --C only applies together with --gamma");
    }
    if (c.steps == 0 || c.steps < -1) {
        throw ConfigError("simulate: --steps must be >= 1");
    }
    fill(c.steps, 10);
    if (c.stride == 0 || c.stride < -1) {
        throw ConfigError("simulate: --stride must be >= 1");
    }
    fill(c.stride, 1);
    fill(c.raster, c.shape == "parabola" ? "center" : "within");
    fill(c.path, "fft");
    fill(c.output_dir, "simulate_out");

    if (is_set(c.tau)) {
        require_positive(c.tau, "tau");
        plan.params = SchemeParams::from_tau(c.h, c.tau, c.steps);
    } else if (is_set(c.mu)) {
        require_positive(c.mu, "mu");
        plan.params = SchemeParams::from_mu(c.h, c.mu, c.steps);
    } else {
        fill(c.scale_C, 1.0);
        require_positive(c.gamma, "gamma");
        require_positive(c.scale_C, "C");
        plan.params = SchemeParams::from_gamma(c.h, c.gamma, c.scale_C, c.steps);
    }

    if (c.raster == "within") {
        plan.raster.mode = RasterMode::WithinH;
    } else if (c.raster == "center") {
        plan.raster.mode = RasterMode::CenterInside;
    } else {
        throw ConfigError("simulate: --raster must be 'within' or 'center'");
    }
    if (c.path == "fft") {
        plan.path = HeatPath::Fft;
    } else if (c.path == "direct") {
        plan.path = HeatPath::Direct;
    } else {
        throw ConfigError("simulate: --path must be 'fft' or 'direct'");
    }

    const double deg = std::numbers::pi / 180.0;
    if (c.shape == "disk") {
        fill(c.radius, 1.0);
        fill(c.center_x, 0.0);
        fill(c.center_y, 0.0);
        require_positive(c.radius, "radius");
        plan.shape = shapes::disk({c.center_x, c.center_y}, c.radius);
    } else if (c.shape == "dumbbell") {
        fill(c.radius, 0.6);
        fill(c.separation, 1.6);
        fill(c.neck, 0.08);
        require_positive(c.radius, "radius");
        require_positive(c.separation, "separation");
        require_positive(c.neck, "neck");
        if (c.neck >= c.radius) throw ConfigError("simulate: --neck must be smaller than --radius");
        plan.shape = shapes::dumbbell(c.radius, c.separation, c.neck);
    } else if (c.shape == "finger") {
        fill(c.half_width, 0.25);
        fill(c.length, 1.5);
        fill(c.theta, -45.0);
        require_positive(c.half_width, "half-width");
        require_positive(c.length, "length");
        if (c.length <= c.half_width) throw ConfigError("simulate: --length must exceed --half-width");
        plan.shape = shapes::finger(c.half_width, c.length, c.theta * deg);
    } else if (c.shape == "halfplane") {
        plan.shape = shapes::half_plane_below(0.0);
        plan.raster.clip_frame = true;
    } else if (c.shape == "parabola") {
        fill(c.kappa, 1.0);
        fill(c.theta, 0.0);
        fill(c.half_width, 0.5);
        fill(c.length, 0.5);
        if (!(c.kappa >= 0.0)) throw ConfigError("simulate: --kappa must be >= 0");
        require_positive(c.half_width, "half-width");
        require_positive(c.length, "length");
        if (c.theta == 0.0) {
            plan.shape = shapes::parabola_cap(c.kappa, c.half_width, c.length);
        } else {
            if (!(c.theta > 0.0 && c.theta <= 45.0)) {
                throw ConfigError("simulate: parabola --theta must lie in [0, 45] degrees");
            }
            const RationalAngle a = rational_angle(c.theta);
            plan.shape = shapes::tilted_parabola(a.p, a.q, c.kappa, c.half_width);
        }
    } else {
        throw ConfigError("simulate: unknown shape '" + c.shape + "'");
    }

    if (!c.bbox.empty()) {
        if (c.bbox.size() != 4 || !(c.bbox[0] < c.bbox[2] && c.bbox[1] < c.bbox[3])) {
            throw ConfigError("simulate: --bbox needs x0 y0 x1 y1 with x0 < x1 and y0 < y1");
        }
        plan.bbox = {c.bbox[0], c.bbox[1], c.bbox[2], c.bbox[3]};
    } else if (plan.shape.bounded) {
        plan.bbox = plan.shape.bounds.inflated(4.0 * c.h);
    } else {
        plan.bbox = {-0.5, -0.5, 0.5, 0.5};
    }
    plan.config = c;
    return plan;
}

// ---------------------------------------------------------------- commands

namespace {

// Direction in which the set advances for shapes with a moving tip.
std::optional<Point> advance_direction(const SimulateConfig& c) {
    const double deg = std::numbers::pi / 180.0;
    if (c.shape == "finger") {
        return Point{std::cos(c.theta * deg), std::sin(c.theta * deg)};
    }
    if (c.shape == "parabola") {
        const double t = std::atan2(rational_angle(c.theta).p, rational_angle(c.theta).q);
        return Point{std::sin(t), -std::cos(t)};
    }
    return std::nullopt;
}

// Position of the leading tip along -dir, units of h.
double tip_position(const BinaryField& f, Point dir) {
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < f.height(); ++j) {
        for (int i = 0; i < f.width(); ++i) {
            if (f(i, j)) {
                const Point p = f.grid().position(i, j);
                best = std::max(best, -(p.x * dir.x + p.y * dir.y));
            }
        }
    }
    return best / f.spacing();
}

void write_simulate_plot(std::ostream& os, const SimulateConfig& c) {
    os << "import csv\n"
          "import math\n"
          "import os\n"
          "\n"
          "import matplotlib\n"
          "matplotlib.use(\"Agg\")\n"
          "import matplotlib.pyplot as plt\n"
          "\n"
          "here = os.path.dirname(os.path.abspath(__file__))\n"
          "with open(os.path.join(here, \"diagnostics.csv\")) as f:\n"
          "    rows = list(csv.DictReader(f))\n"
          "t = [float(r[\"t\"]) for r in rows]\n"
          "area = [float(r[\"area\"]) for r in rows]\n"
          "fig, ax = plt.subplots(figsize=(6, 4))\n";
    if (c.shape == "disk") {
        os << "r0 = " << format_real(c.radius)
           << "\n"
              "ax.plot(t, [math.sqrt(a / math.pi) for a in area], \"o\", label=\"measured sqrt(area / pi)\")\n"
              "ax.plot(t, [float(r[\"radius_estimate\"]) for r in rows], \".\", label=\"front radius\")\n"
              "te = [i * r0 * r0 / 2 / 200 for i in range(201)]\n"
              "ax.plot(te, [math.sqrt(max(r0 * r0 - 2 * s, 0.0)) for s in te], \"k-\", label=\"sqrt(R0^2 - 2t)\")\n"
              "ax.set_ylabel(\"radius\")\n";
    } else {
        os << "ax.plot(t, area, \"o-\", label=\"area\")\n"
              "ax2 = ax.twinx()\n"
              "ax2.step(t, [int(r[\"components\"]) for r in rows], \"r\", where=\"post\")\n"
              "ax2.set_ylabel(\"components\")\n"
              "ax.set_ylabel(\"area\")\n";
    }
    os << "ax.set_xlabel(\"t\")\n"
          "ax.legend()\n"
          "fig.tight_layout()\n"
          "fig.savefig(os.path.join(here, \"evolution.png\"), dpi=150)\n";
}

int cmd_simulate(const SimulateConfig& cfg, std::ostream& out) {
    const SimulationPlan plan = plan_simulation(cfg);
    const SimulateConfig& c = plan.config;
    const BinaryField init = rasterize(plan.shape, plan.params.h, plan.bbox, plan.raster);
    const Trajectory traj = run_scheme(plan.params, init, {c.stride, plan.path, -1});
    const std::filesystem::path dir = c.output_dir;
    write_trajectory(dir, traj);
    write_file_atomic(dir / "plot_evolution.py", [&](std::ostream& os) { write_simulate_plot(os, c); });

    if (const auto dir_adv = advance_direction(c)) {
        write_file_atomic(dir / "front_tip.csv", [&](std::ostream& os) {
            CsvWriter csv(os, {"k", "tip_position", "advance"});
            double prev = std::numeric_limits<double>::quiet_NaN();
            for (const auto& [k, field] : traj.snapshots) {
                if (field.count() == 0) break;
                const double tip = tip_position(field, *dir_adv);
                csv.row(k, tip, std::isnan(prev) ? 0.0 : prev - tip);
                prev = tip;
            }
        });
    }

    const auto& first = traj.diagnostics.front();
    const auto& last = traj.diagnostics.back();
    out << "regime=" << to_string(plan.params.regime()) << " h=" << format_real(plan.params.h)
        << " tau=" << format_real(plan.params.tau) << " alpha=" << format_real(plan.params.alpha()) << '\n';
    out << "steps_taken=" << traj.steps_taken << " vanished=" << (traj.vanished ? "yes" : "no")
        << " cells=" << first.front_cells << "->" << last.front_cells << " components=" << first.components << "->"
        << last.components << " unchanged=" << (traj.final_field == init ? "yes" : "no") << '\n';
    out << "artifacts=" << dir.string() << '\n';
    return 0;
}

int cmd_velocity(const VelocityConfig& v, std::ostream& out) {
    const VelocityReport r = discrete_velocity(v.mu, v.kappa);
    out << "mu=" << format_real(r.mu) << '\n'
        << "kappa=" << format_real(r.kappa) << '\n'
        << "mu_kappa=" << format_real(r.mu * r.kappa) << '\n'
        << "n0=" << r.n0 << '\n'
        << "velocity=" << format_real(r.velocity) << '\n'
        << "phi_at_n0=" << format_real(r.phi_at_n0) << '\n'
        << "phi_at_n0_plus_1=" << format_real(r.phi_at_n0_plus_1) << '\n';
    if (!v.sweep.empty()) {
        std::vector<double> cs;
        for (int k = 0; k < v.sweep_count; ++k) {
            const double f = v.sweep_count == 1 ? 0.0 : static_cast<double>(k) / (v.sweep_count - 1);
            cs.push_back(v.sweep_min + f * (v.sweep_max - v.sweep_min));
        }
        write_file_atomic(v.sweep, [&](std::ostream& os) { write_velocity_sweep_csv(os, v.mu, cs); });
        out << "sweep=" << v.sweep << '\n';
    }
    if (!v.consistency.empty()) {
        const double kappa = v.kappa > 0.0 ? v.kappa : 1.0;
        const std::vector<double> mus{10, 20, 50, 100, 200, 500, 1000, 2000};
        write_file_atomic(v.consistency, [&](std::ostream& os) { write_consistency_csv(os, kappa, mus); });
        out << "consistency=" << v.consistency << '\n';
    }
    return 0;
}

int cmd_pinning(const PinningConfig& p, std::ostream& out) {
    const double root = pinning_threshold(p.tol);
    const int digits = std::max(1, static_cast<int>(std::ceil(-std::log10(p.tol))));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, root);
    out << "mu_kappa_star=" << buf << '\n';
    if (p.check) {
        const double below = phi(1, root - 0.01);
        const double above = phi(1, root + 0.01);
        out << "phi(1, mu_kappa_star - 0.01)=" << format_real(below) << (below > 0.0 ? " positive" : " NOT positive")
            << '\n';
        out << "phi(1, mu_kappa_star + 0.01)=" << format_real(above) << (above < 0.0 ? " negative" : " NOT negative")
            << '\n';
    }
    return 0;
}

int cmd_angle_sweep(const AngleSweepConfig& a, std::ostream& out) {
    std::vector<RationalAngle> angles;
    const int count = static_cast<int>(std::floor((a.deg_max - a.deg_min) / a.deg_step + 1e-9)) + 1;
    for (int k = 0; k < count; ++k) {
        angles.push_back(rational_angle(a.deg_min + k * a.deg_step, a.max_q));
    }
    std::vector<AngleSweepRow> rows;
    for (double mu : a.mu) {
        auto part = angle_sweep(mu, a.kappa, angles);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    const std::filesystem::path dir = a.output_dir;
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "angle_sweep.csv", [&](std::ostream& os) { write_angle_sweep_csv(os, rows); });
    write_file_atomic(dir / "plot_angle_sweep.py",
                      [&](std::ostream& os) { write_angle_sweep_plot(os, "angle_sweep.csv", "angle_sweep.png"); });
    out << "rows=" << rows.size() << " (" << a.mu.size() << " mu values x " << angles.size() << " angles)\n";
    out << "artifacts=" << dir.string() << '\n';
    return 0;
}

int cmd_verify(const VerifyConfig& v, std::ostream& out) {
    const auto checks = run_verify_suite(v.suite, v.seed);
    print_checks(out, checks);
    const auto failed = std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.pass; });
    out << (checks.size() - failed) << '/' << checks.size() << " checks passed\n";
    return failed == 0 ? 0 : 3;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        ExperimentConfig cfg;
        try {
            cfg = parse_args(args);
        } catch (const CLI::CallForHelp&) {
            ExperimentConfig dummy;
            CLI::App app{"Lattice thresholding scheme for curvature motion", "lattice-mbo"};
            build_app(app, dummy);
            out << app.help();
            return 0;
        }
        if (cfg.command == "simulate") return cmd_simulate(cfg.simulate, out);
        if (cfg.command == "velocity") return cmd_velocity(cfg.velocity, out);
        if (cfg.command == "pinning") return cmd_pinning(cfg.pinning, out);
        if (cfg.command == "angle-sweep") return cmd_angle_sweep(cfg.angle_sweep, out);
        if (cfg.command == "verify") return cmd_verify(cfg.verify, out);
        err << "error: no command given\n";
        return 1;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const PaddingError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const TruncationError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace lmbo::cli
