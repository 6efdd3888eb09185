#pragma once

#include <filesystem>
#include <memory>
#include <utility>
#include <vector>

#include "lmbo/heat_kernel.hpp"
#include "lmbo/lattice.hpp"

namespace lmbo {

/// Real-valued field on the same geometry as a BinaryField.
struct RealField {
    Grid grid;
    std::vector<double> values;

    RealField() = default;
    explicit RealField(const Grid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
    explicit RealField(const BinaryField& u);

    double operator()(int i, int j) const { return values[grid.index(i, j)]; }
    double& operator()(int i, int j) { return values[grid.index(i, j)]; }
    double sum() const;
    double sum_of_squares() const;
};

/// Largest |a - b| over all cells; grids must match.
double max_abs_diff(const RealField& a, const RealField& b);

struct DirectOptions {
    /// Largest admissible kernel mass leaving the window (absolute, summed over cells).
    double spill_tolerance = 1e-10;
};

/// Separable convolution with the truncated table (rows, then columns),
/// accumulated in long double. Throws PaddingError when more than
/// `spill_tolerance` of mass leaves the window.
RealField heat_step_direct(const RealField& u, const KernelTable& table, DirectOptions options = {});
RealField heat_step_direct(const BinaryField& u, const KernelTable& table, DirectOptions options = {});

/// Spectral heat step with the exact lattice symbol e^{alpha (cos xi1 + cos xi2 - 2)}
/// on a grid padded by `padding` zero cells on every side. Plans are reused
/// across calls; instances are not shareable between threads.
class HeatPropagator {
public:
    HeatPropagator(const Grid& grid, double alpha, int padding);
    ~HeatPropagator();
    HeatPropagator(const HeatPropagator&) = delete;
    HeatPropagator& operator=(const HeatPropagator&) = delete;
    HeatPropagator(HeatPropagator&&) noexcept;
    HeatPropagator& operator=(HeatPropagator&&) noexcept;

    RealField apply(const RealField& u);
    RealField apply(const BinaryField& u);

    const Grid& grid() const;
    double alpha() const;
    int padding() const;
    /// Largest heat value that landed outside the window on the last call. Above
    /// 1/2 the window was too small: a cell outside it would have switched on.
    double last_outside_max() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Smallest padding accepted by the FFT path: radius of the 1e-12 table.
int minimum_fft_padding(double alpha);

/// One-shot wrapper around HeatPropagator. Throws PaddingError if `padding`
/// is below minimum_fft_padding(alpha).
RealField heat_step_fft(const RealField& u, double alpha, int padding);
RealField heat_step_fft(const BinaryField& u, double alpha, int padding);

/// 1 where w > 1/2 (a value of exactly 1/2 maps to 0).
BinaryField threshold(const RealField& w);

/// Reference solution of du/dt = (1/h^2) Laplacian_5pt u over [0, tau] on the
/// infinite lattice (emulated by internal zero padding), adaptive RK4 with step
/// doubling. Grids up to 128x128. Throws NumericalError on step-size underflow.
RealField ode_oracle(const BinaryField& u, double tau, double h, double tolerance = 1e-10);

enum class HeatPath { Fft, Direct };

struct StepDiagnostics {
    int k = 0;
    double t = 0.0;
    std::size_t front_cells = 0;
    double radius = 0.0;  // NaN once the set has vanished
    double area = 0.0;
    int components = 0;
    double outside_max = 0.0;  // largest heat value outside the window (NaN on the direct path)
};

struct Trajectory {
    SchemeParams params;
    std::vector<std::pair<int, BinaryField>> snapshots;
    std::vector<StepDiagnostics> diagnostics;
    BinaryField final_field;
    int steps_taken = 0;
    bool vanished = false;
};

struct RunOptions {
    int stride = 1;
    HeatPath path = HeatPath::Fft;
    /// Padding for the FFT path; negative selects table radius + 8.
    int padding = -1;
};

/// Alternates heat step and threshold for params.steps steps. Throws
/// PaddingError if the set reaches the window frame or heat above 1/2 lands
/// outside the window.
Trajectory run_scheme(const SchemeParams& params, const BinaryField& init, RunOptions options = {});

/// snapshots/step_<k>.pbm plus diagnostics.csv under `dir`.
void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj);

}  // namespace lmbo
