#include "lmbo/evolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>

#include "lmbo/csv.hpp"
#include "lmbo/errors.hpp"

namespace lmbo {

RealField::RealField(const BinaryField& u) : grid(u.grid()), values(u.grid().size(), 0.0) {
    const auto cells = u.cells();
    for (std::size_t k = 0; k < cells.size(); ++k) {
        values[k] = cells[k] ? 1.0 : 0.0;
    }
}

double RealField::sum() const {
    long double s = 0.0L;
    for (double v : values) {
        s += v;
    }
    return static_cast<double>(s);
}

double RealField::sum_of_squares() const {
    long double s = 0.0L;
    for (double v : values) {
        s += static_cast<long double>(v) * v;
    }
    return static_cast<double>(s);
}

double max_abs_diff(const RealField& a, const RealField& b) {
    if (a.grid.width != b.grid.width || a.grid.height != b.grid.height) {
        throw DomainError("max_abs_diff: grid shapes differ");
    }
    double m = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        m = std::max(m, std::abs(a.values[k] - b.values[k]));
    }
    return m;
}

// ---------------------------------------------------------------- direct path

namespace {

// out[x] = sum_k G_|k| in[x + k], restricted to the window, along one line.
void convolve_line(const double* in, std::ptrdiff_t in_stride, double* out, std::ptrdiff_t out_stride, int len,
                   const KernelTable& table) {
    const int r = table.radius;
    for (int x = 0; x < len; ++x) {
        const int lo = std::max(0, x - r);
        const int hi = std::min(len - 1, x + r);
        long double acc = 0.0L;
        for (int y = lo; y <= hi; ++y) {
            const double v = in[y * in_stride];
            if (v != 0.0) {
                acc += static_cast<long double>(table.coeffs[static_cast<std::size_t>(std::abs(y - x))]) * v;
            }
        }
        out[x * out_stride] = static_cast<double>(acc);
    }
}

}  // namespace

RealField heat_step_direct(const RealField& u, const KernelTable& table, DirectOptions options) {
    if (table.alpha == 0.0 || table.radius == 0) {
        if (table.coeffs.empty() || table.coeffs[0] != 1.0) {
            throw DomainError("heat_step_direct: malformed kernel table");
        }
        return u;
    }
    const int w = u.grid.width;
    const int h = u.grid.height;
    RealField rows(u.grid);
    for (int j = 0; j < h; ++j) {
        const std::size_t off = u.grid.index(0, j);
        convolve_line(u.values.data() + off, 1, rows.values.data() + off, 1, w, table);
    }
    RealField out(u.grid);
    for (int i = 0; i < w; ++i) {
        convolve_line(rows.values.data() + i, w, out.values.data() + i, w, h, table);
    }

    const double m = table.mass();
    const double spill = u.sum() * m * m - out.sum();
    if (spill > options.spill_tolerance) {
        char msg[160];
        std::snprintf(msg, sizeof msg, "insufficient padding: %.3g of heat mass leaves the window (tolerance %.3g)",
                      spill, options.spill_tolerance);
        throw PaddingError(msg);
    }
    return out;
}

RealField heat_step_direct(const BinaryField& u, const KernelTable& table, DirectOptions options) {
    return heat_step_direct(RealField(u), table, options);
}

// ---------------------------------------------------------------- FFT path

namespace {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

bool is_smooth(int n) {
    for (int f : {2, 3, 5, 7}) {
        while (n % f == 0) {
            n /= f;
        }
    }
    return n == 1;
}

int next_smooth(int n) {
    while (!is_smooth(n)) {
        ++n;
    }
    return n;
}

}  // namespace

struct HeatPropagator::Impl {
    Grid grid;
    double alpha = 0.0;
    int padding = 0;
    int pw = 0;
    int ph = 0;
    int cw = 0;  // complex row length pw / 2 + 1
    double* real = nullptr;
    fftw_complex* freq = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    std::vector<double> symbol;
    double outside_max = 0.0;

    ~Impl() {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        if (forward) {
            fftw_destroy_plan(forward);
        }
        if (backward) {
            fftw_destroy_plan(backward);
        }
        fftw_free(real);
        fftw_free(freq);
    }
};

HeatPropagator::HeatPropagator(const Grid& grid, double alpha, int padding) : impl_(std::make_unique<Impl>()) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw DomainError("heat propagator: alpha must be finite and >= 0");
    }
    if (grid.width < 1 || grid.height < 1) {
        throw DomainError("heat propagator: empty grid");
    }
    const int need = minimum_fft_padding(alpha);
    if (padding < need) {
        throw PaddingError("insufficient padding: " + std::to_string(padding) + " < kernel radius " +
                           std::to_string(need));
    }
    Impl& d = *impl_;
    d.grid = grid;
    d.alpha = alpha;
    d.padding = padding;
    d.pw = next_smooth(grid.width + 2 * padding);
    d.ph = next_smooth(grid.height + 2 * padding);
    d.cw = d.pw / 2 + 1;
    const std::size_t nreal = static_cast<std::size_t>(d.pw) * static_cast<std::size_t>(d.ph);
    const std::size_t ncplx = static_cast<std::size_t>(d.cw) * static_cast<std::size_t>(d.ph);
    d.real = fftw_alloc_real(nreal);
    d.freq = fftw_alloc_complex(ncplx);
    if (!d.real || !d.freq) {
        throw std::bad_alloc();
    }
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        d.forward = fftw_plan_dft_r2c_2d(d.ph, d.pw, d.real, d.freq, FFTW_ESTIMATE);
        d.backward = fftw_plan_dft_c2r_2d(d.ph, d.pw, d.freq, d.real, FFTW_ESTIMATE);
    }
    if (!d.forward || !d.backward) {
        throw NumericalError("FFTW plan creation failed");
    }
    // Symbol on the padded frequency grid, with the 1/N of the inverse transform folded in.
    const double inv_n = 1.0 / static_cast<double>(nreal);
    std::vector<double> ex(static_cast<std::size_t>(d.cw));
    std::vector<double> ey(static_cast<std::size_t>(d.ph));
    for (int k = 0; k < d.cw; ++k) {
        ex[static_cast<std::size_t>(k)] = std::exp(alpha * (std::cos(2.0 * std::numbers::pi * k / d.pw) - 1.0));
    }
    for (int k = 0; k < d.ph; ++k) {
        ey[static_cast<std::size_t>(k)] = std::exp(alpha * (std::cos(2.0 * std::numbers::pi * k / d.ph) - 1.0));
    }
    d.symbol.resize(ncplx);
    for (int ky = 0; ky < d.ph; ++ky) {
        for (int kx = 0; kx < d.cw; ++kx) {
            d.symbol[static_cast<std::size_t>(ky) * d.cw + kx] =
                ex[static_cast<std::size_t>(kx)] * ey[static_cast<std::size_t>(ky)] * inv_n;
        }
    }
}

HeatPropagator::~HeatPropagator() = default;
HeatPropagator::HeatPropagator(HeatPropagator&&) noexcept = default;
HeatPropagator& HeatPropagator::operator=(HeatPropagator&&) noexcept = default;

const Grid& HeatPropagator::grid() const { return impl_->grid; }
double HeatPropagator::alpha() const { return impl_->alpha; }
int HeatPropagator::padding() const { return impl_->padding; }
double HeatPropagator::last_outside_max() const { return impl_->outside_max; }

RealField HeatPropagator::apply(const RealField& u) {
    Impl& d = *impl_;
    if (u.grid.width != d.grid.width || u.grid.height != d.grid.height) {
        throw DomainError("heat propagator: field shape does not match the plan");
    }
    if (d.alpha == 0.0) {
        d.outside_max = 0.0;
        return u;
    }
    const std::size_t nreal = static_cast<std::size_t>(d.pw) * static_cast<std::size_t>(d.ph);
    std::fill(d.real, d.real + nreal, 0.0);
    for (int j = 0; j < u.grid.height; ++j) {
        const double* src = u.values.data() + u.grid.index(0, j);
        std::copy(src, src + u.grid.width,
                  d.real + static_cast<std::size_t>(j + d.padding) * d.pw + d.padding);
    }
    fftw_execute(d.forward);
    const std::size_t ncplx = d.symbol.size();
    for (std::size_t k = 0; k < ncplx; ++k) {
        d.freq[k][0] *= d.symbol[k];
        d.freq[k][1] *= d.symbol[k];
    }
    fftw_execute(d.backward);

    RealField out(u.grid);
    double outside = 0.0;
    for (int y = 0; y < d.ph; ++y) {
        const double* row = d.real + static_cast<std::size_t>(y) * d.pw;
        const int j = y - d.padding;
        if (j < 0 || j >= u.grid.height) {
            outside = std::max(outside, *std::max_element(row, row + d.pw));
            continue;
        }
        outside = std::max(outside, *std::max_element(row, row + d.padding));
        outside = std::max(outside, *std::max_element(row + d.padding + u.grid.width, row + d.pw));
        std::copy(row + d.padding, row + d.padding + u.grid.width, out.values.data() + u.grid.index(0, j));
    }
    d.outside_max = outside;
    return out;
}

RealField HeatPropagator::apply(const BinaryField& u) { return apply(RealField(u)); }

int minimum_fft_padding(double alpha) {
    if (alpha == 0.0) {
        return 0;
    }
    return kernel_table(alpha, 1e-12).radius;
}

RealField heat_step_fft(const RealField& u, double alpha, int padding) {
    HeatPropagator prop(u.grid, alpha, padding);
    return prop.apply(u);
}

RealField heat_step_fft(const BinaryField& u, double alpha, int padding) {
    return heat_step_fft(RealField(u), alpha, padding);
}

BinaryField threshold(const RealField& w) {
    BinaryField out(w.grid);
    for (int j = 0; j < w.grid.height; ++j) {
        for (int i = 0; i < w.grid.width; ++i) {
            if (w(i, j) > 0.5) {
                out.set(i, j, true);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------- ODE oracle

namespace {

// Dirichlet-zero 5-point Laplacian on an nx x ny array.
void laplacian(const std::vector<double>& u, std::vector<double>& out, int nx, int ny) {
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = static_cast<std::size_t>(j) * nx + i;
            const double c = u[k];
            const double l = i > 0 ? u[k - 1] : 0.0;
            const double r = i + 1 < nx ? u[k + 1] : 0.0;
            const double b = j > 0 ? u[k - static_cast<std::size_t>(nx)] : 0.0;
            const double t = j + 1 < ny ? u[k + static_cast<std::size_t>(nx)] : 0.0;
            out[k] = l + r + b + t - 4.0 * c;
        }
    }
}

struct Rk4 {
    int nx;
    int ny;
    std::vector<double> k1, k2, k3, k4, tmp;

    Rk4(int nx_, int ny_) : nx(nx_), ny(ny_) {
        const std::size_t n = static_cast<std::size_t>(nx) * ny;
        k1.resize(n);
        k2.resize(n);
        k3.resize(n);
        k4.resize(n);
        tmp.resize(n);
    }

    void step(const std::vector<double>& y, double dt, std::vector<double>& out) {
        const std::size_t n = y.size();
        laplacian(y, k1, nx, ny);
        for (std::size_t k = 0; k < n; ++k) tmp[k] = y[k] + 0.5 * dt * k1[k];
        laplacian(tmp, k2, nx, ny);
        for (std::size_t k = 0; k < n; ++k) tmp[k] = y[k] + 0.5 * dt * k2[k];
        laplacian(tmp, k3, nx, ny);
        for (std::size_t k = 0; k < n; ++k) tmp[k] = y[k] + dt * k3[k];
        laplacian(tmp, k4, nx, ny);
        out.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            out[k] = y[k] + dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
        }
    }
};

}  // namespace

RealField ode_oracle(const BinaryField& u, double tau, double h, double tolerance) {
    if (u.width() > 128 || u.height() > 128) {
        throw DomainError("ode_oracle: grid larger than 128x128");
    }
    if (!(tau >= 0.0) || !(h > 0.0) || !std::isfinite(tau) || !std::isfinite(h)) {
        throw DomainError("ode_oracle: need tau >= 0 and h > 0");
    }
    RealField start(u);
    if (tau == 0.0) {
        return start;
    }
    // Time is rescaled by h^2 so the right-hand side is the bare Laplacian.
    const double s_end = tau / (h * h);
    const double alpha = 2.0 * s_end;
    const int pad = static_cast<int>(std::ceil(10.0 * std::sqrt(alpha))) + 10;
    const int nx = u.width() + 2 * pad;
    const int ny = u.height() + 2 * pad;
    std::vector<double> y(static_cast<std::size_t>(nx) * ny, 0.0);
    for (int j = 0; j < u.height(); ++j) {
        for (int i = 0; i < u.width(); ++i) {
            y[static_cast<std::size_t>(j + pad) * nx + (i + pad)] = start(i, j);
        }
    }

    Rk4 rk(nx, ny);
    std::vector<double> full, half, two_half;
    double s = 0.0;
    double dt = std::min(0.1, s_end);
    const double dt_min = 1e-14 * std::max(1.0, s_end);
    while (s < s_end) {
        dt = std::min(dt, s_end - s);
        rk.step(y, dt, full);
        rk.step(y, 0.5 * dt, half);
        rk.step(half, 0.5 * dt, two_half);
        double err = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k) {
            err = std::max(err, std::abs(two_half[k] - full[k]));
        }
        err /= 15.0;
        if (err <= tolerance) {
            for (std::size_t k = 0; k < y.size(); ++k) {
                y[k] = two_half[k] + (two_half[k] - full[k]) / 15.0;
            }
            s += dt;
        }
        const double factor = err > 0.0 ? 0.9 * std::pow(tolerance / err, 0.2) : 2.0;
        dt *= std::clamp(factor, 0.2, 2.0);
        if (dt < dt_min && s < s_end) {
            throw NumericalError("ode_oracle: step size underflow");
        }
    }

    RealField out(u.grid());
    for (int j = 0; j < u.height(); ++j) {
        for (int i = 0; i < u.width(); ++i) {
            out(i, j) = y[static_cast<std::size_t>(j + pad) * nx + (i + pad)];
        }
    }
    return out;
}

// ---------------------------------------------------------------- driver

namespace {

StepDiagnostics diagnose(const BinaryField& u, int k, double tau, double outside_max) {
    StepDiagnostics d;
    d.k = k;
    d.t = k * tau;
    d.outside_max = outside_max;
    const double h = u.spacing();
    d.area = static_cast<double>(u.count()) * h * h;
    d.components = count_components(u);
    if (auto front = extract_front(u, k)) {
        d.front_cells = front->cells.size();
        d.radius = measure_radius(*front);
    } else {
        d.radius = std::numeric_limits<double>::quiet_NaN();
    }
    return d;
}

}  // namespace

Trajectory run_scheme(const SchemeParams& params, const BinaryField& init, RunOptions options) {
    params.validate();
    if (options.stride < 1) {
        throw ConfigError("stride must be >= 1");
    }
    if (std::abs(init.spacing() - params.h) > 1e-9 * params.h) {
        throw ConfigError("initial field spacing does not match h");
    }
    if (!init.frame_is_clear()) {
        throw PaddingError("initial set touches the window frame");
    }
    const double alpha = params.alpha();

    Trajectory traj;
    traj.params = params;
    traj.snapshots.emplace_back(0, init);
    traj.diagnostics.push_back(diagnose(init, 0, params.tau, 0.0));

    std::unique_ptr<HeatPropagator> prop;
    KernelTable table;
    if (options.path == HeatPath::Fft) {
        const int padding = options.padding >= 0 ? options.padding : minimum_fft_padding(alpha) + 8;
        prop = std::make_unique<HeatPropagator>(init.grid(), alpha, padding);
    } else {
        table = kernel_table(alpha, 1e-13);
    }

    BinaryField u = init;
    if (u.count() == 0) {
        traj.vanished = true;
    }
    for (int k = 1; k <= params.steps && !traj.vanished; ++k) {
        RealField w;
        double outside = std::numeric_limits<double>::quiet_NaN();
        if (prop) {
            w = prop->apply(u);
            outside = prop->last_outside_max();
            if (outside > 0.5) {
                throw PaddingError("window too small: heat above 1/2 outside the window at step " +
                                   std::to_string(k));
            }
        } else {
            w = heat_step_direct(u, table, {std::numeric_limits<double>::infinity()});
        }
        u = threshold(w);
        if (!u.frame_is_clear()) {
            throw PaddingError("set reached the window frame at step " + std::to_string(k));
        }
        traj.steps_taken = k;
        traj.diagnostics.push_back(diagnose(u, k, params.tau, outside));
        const bool empty = u.count() == 0;
        if (k % options.stride == 0 || k == params.steps || empty) {
            traj.snapshots.emplace_back(k, u);
        }
        if (empty) {
            traj.vanished = true;
        }
    }
    traj.final_field = u;
    return traj;
}

void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj) {
    namespace fs = std::filesystem;
    const fs::path snaps = dir / "snapshots";
    fs::create_directories(snaps);
    for (const auto& [k, field] : traj.snapshots) {
        char name[32];
        std::snprintf(name, sizeof name, "step_%06d.pbm", k);
        write_file_atomic(snaps / name, [&](std::ostream& os) { write_pbm(os, field); });
    }
    write_file_atomic(dir / "diagnostics.csv", [&](std::ostream& os) {
        CsvWriter csv(os, {"k", "t", "front_cell_count", "radius_estimate", "area", "components", "outside_max"});
        for (const auto& d : traj.diagnostics) {
            csv.row(d.k, d.t, d.front_cells, d.radius, d.area, d.components, d.outside_max);
        }
    });
}

}  // namespace lmbo
