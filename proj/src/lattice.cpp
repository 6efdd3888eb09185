#include "lmbo/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "lmbo/csv.hpp"
#include "lmbo/errors.hpp"

namespace lmbo {

Cell Grid::cell_at(Point p) const {
    return {static_cast<int>(std::lround(p.x / h)) + origin.i, static_cast<int>(std::lround(p.y / h)) + origin.j};
}

std::size_t BinaryField::count() const {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

bool BinaryField::frame_is_clear() const {
    const int w = width();
    const int hgt = height();
    for (int i = 0; i < w; ++i) {
        if ((*this)(i, 0) || (*this)(i, hgt - 1)) {
            return false;
        }
    }
    for (int j = 0; j < hgt; ++j) {
        if ((*this)(0, j) || (*this)(w - 1, j)) {
            return false;
        }
    }
    return true;
}

BinaryField rasterize(const Shape& shape, double h, const Rect& bbox, RasterOptions options) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw DomainError("rasterize: spacing must be positive");
    }
    constexpr double snap = 1e-9;
    const int i0 = static_cast<int>(std::ceil(bbox.x0 / h - snap));
    const int i1 = static_cast<int>(std::floor(bbox.x1 / h + snap));
    const int j0 = static_cast<int>(std::ceil(bbox.y0 / h - snap));
    const int j1 = static_cast<int>(std::floor(bbox.y1 / h + snap));
    if (i1 - i0 < 2 || j1 - j0 < 2) {
        throw DomainError("rasterize: bounding box holds fewer than 3x3 lattice points");
    }
    Grid grid{i1 - i0 + 1, j1 - j0 + 1, h, {-i0, -j0}};
    BinaryField field(grid);

    // Bounded shapes only need their (slightly inflated) support scanned.
    int ia = 0, ib = grid.width - 1, ja = 0, jb = grid.height - 1;
    if (shape.bounded) {
        const Rect b = shape.bounds.inflated(2.0 * h);
        ia = std::max(ia, static_cast<int>(std::floor(b.x0 / h)) + grid.origin.i);
        ib = std::min(ib, static_cast<int>(std::ceil(b.x1 / h)) + grid.origin.i);
        ja = std::max(ja, static_cast<int>(std::floor(b.y0 / h)) + grid.origin.j);
        jb = std::min(jb, static_cast<int>(std::ceil(b.y1 / h)) + grid.origin.j);
    }

    // Sample ring used when no distance function is available.
    Point ring[8];
    for (int k = 0; k < 8; ++k) {
        const double a = k * std::numbers::pi / 4.0;
        ring[k] = {h * std::cos(a), h * std::sin(a)};
    }

    for (int j = ja; j <= jb; ++j) {
        for (int i = ia; i <= ib; ++i) {
            const Point p = grid.position(i, j);
            bool in = false;
            if (options.mode == RasterMode::CenterInside) {
                in = shape.contains(p);
            } else if (shape.distance) {
                in = shape.distance(p) <= h * (1.0 + 1e-12);
            } else {
                in = shape.contains(p);
                for (int k = 0; k < 8 && !in; ++k) {
                    in = shape.contains({p.x + ring[k].x, p.y + ring[k].y});
                }
            }
            if (in) {
                field.set(i, j, true);
            }
        }
    }

    if (!field.frame_is_clear()) {
        if (!options.clip_frame) {
            throw PaddingError("rasterize: insufficient padding, shape '" + shape.name +
                               "' reaches the window frame");
        }
        for (int i = 0; i < grid.width; ++i) {
            field.set(i, 0, false);
            field.set(i, grid.height - 1, false);
        }
        for (int j = 0; j < grid.height; ++j) {
            field.set(0, j, false);
            field.set(grid.width - 1, j, false);
        }
    }
    return field;
}

std::optional<FrontSample> extract_front(const BinaryField& field, int step) {
    FrontSample front;
    front.grid = field.grid();
    front.step = step;
    double sx = 0.0;
    double sy = 0.0;
    for (int j = 0; j < field.height(); ++j) {
        for (int i = 0; i < field.width(); ++i) {
            if (!field(i, j)) {
                continue;
            }
            if (!field.at(i + 1, j) || !field.at(i - 1, j) || !field.at(i, j + 1) || !field.at(i, j - 1)) {
                front.cells.push_back({i, j});
                const Point p = front.grid.position(i, j);
                sx += p.x;
                sy += p.y;
            }
        }
    }
    if (front.cells.empty()) {
        return std::nullopt;
    }
    const double n = static_cast<double>(front.cells.size());
    front.centroid = {sx / n, sy / n};
    return front;
}

double measure_radius(const FrontSample& front) {
    if (front.cells.empty()) {
        throw DomainError("measure_radius: vanished front");
    }
    double sum = 0.0;
    for (const Cell& c : front.cells) {
        const Point p = front.grid.position(c.i, c.j);
        sum += std::hypot(p.x - front.centroid.x, p.y - front.centroid.y);
    }
    return sum / static_cast<double>(front.cells.size());
}

std::optional<int> column_top(const BinaryField& field, int column) {
    if (column < 0 || column >= field.width()) {
        return std::nullopt;
    }
    for (int j = field.height() - 1; j >= 0; --j) {
        if (field(column, j)) {
            return j;
        }
    }
    return std::nullopt;
}

int front_displacement(const BinaryField& before, const BinaryField& after, ColumnProbe probe) {
    if (!(before.grid() == after.grid())) {
        throw DomainError("front_displacement: fields have different geometry");
    }
    const auto top_before = column_top(before, probe.column);
    if (!top_before) {
        throw DomainError("front_displacement: probe column misses the front");
    }
    const int top_after = column_top(after, probe.column).value_or(-1);
    return *top_before - top_after;
}

namespace {

void check_direction(int p, int q) {
    if (q < 1 || p < 0 || std::gcd(p, q) != 1) {
        throw DomainError("direction (p, q) must satisfy q >= 1, p >= 0, gcd(p, q) = 1");
    }
}

}  // namespace

Cell probe_offset(int level, int p, int q) {
    check_direction(p, q);
    if (level < 1) {
        throw DomainError("probe_offset: level must be >= 1");
    }
    // Unique s in [0, q) with s p = level (mod q); then j follows from s p - j q = level.
    for (long long s = 0; s < q; ++s) {
        const long long r = s * p - level;
        if (r % q == 0) {
            return {static_cast<int>(s), static_cast<int>(r / q)};
        }
    }
    throw NumericalError("probe_offset: no residue found");  // unreachable for coprime p, q
}

DirectionalDisplacement front_displacement(const BinaryField& before, const BinaryField& after,
                                           DirectionProbe probe) {
    check_direction(probe.p, probe.q);
    if (!(before.grid() == after.grid())) {
        throw DomainError("front_displacement: fields have different geometry");
    }
    if (!before.at(probe.anchor.i, probe.anchor.j)) {
        throw DomainError("front_displacement: anchor is not a cell of the set");
    }
    const double norm = std::hypot(static_cast<double>(probe.p), static_cast<double>(probe.q));
    for (int level = 1;; ++level) {
        const Cell off = probe_offset(level, probe.p, probe.q);
        const int i = probe.anchor.i + off.i;
        const int j = probe.anchor.j + off.j;
        if (!after.grid().contains(i, j)) {
            throw DomainError("front_displacement: probe left the window without meeting the set");
        }
        if (after(i, j)) {
            return {level - 1, (level - 1) / norm};
        }
    }
}

std::optional<Cell> extreme_cell(const BinaryField& field, int p, int q, Point near) {
    std::optional<Cell> best;
    long long best_level = std::numeric_limits<long long>::min();
    double best_dist = 0.0;
    for (int j = 0; j < field.height(); ++j) {
        for (int i = 0; i < field.width(); ++i) {
            if (!field(i, j)) {
                continue;
            }
            const long long level = static_cast<long long>(q) * j - static_cast<long long>(p) * i;
            const Point pos = field.grid().position(i, j);
            const double dist = std::hypot(pos.x - near.x, pos.y - near.y);
            if (level > best_level || (level == best_level && dist < best_dist)) {
                best = Cell{i, j};
                best_level = level;
                best_dist = dist;
            }
        }
    }
    return best;
}

int count_components(const BinaryField& field) {
    const Grid& g = field.grid();
    std::vector<std::uint8_t> seen(g.size(), 0);
    std::vector<Cell> stack;
    int components = 0;
    for (int j = 0; j < g.height; ++j) {
        for (int i = 0; i < g.width; ++i) {
            if (!field(i, j) || seen[g.index(i, j)]) {
                continue;
            }
            ++components;
            stack.push_back({i, j});
            seen[g.index(i, j)] = 1;
            while (!stack.empty()) {
                const Cell c = stack.back();
                stack.pop_back();
                const Cell nbrs[4] = {{c.i + 1, c.j}, {c.i - 1, c.j}, {c.i, c.j + 1}, {c.i, c.j - 1}};
                for (const Cell& n : nbrs) {
                    if (field.at(n.i, n.j) && !seen[g.index(n.i, n.j)]) {
                        seen[g.index(n.i, n.j)] = 1;
                        stack.push_back(n);
                    }
                }
            }
        }
    }
    return components;
}

void write_pbm(std::ostream& os, const BinaryField& field) {
    const Grid& g = field.grid();
    os << "P1\n# lmbo h=" << format_real(g.h) << " origin=" << g.origin.i << ',' << g.origin.j << '\n';
    os << g.width << ' ' << g.height << '\n';
    std::string row(static_cast<std::size_t>(g.width), '0');
    for (int j = g.height - 1; j >= 0; --j) {
        for (int i = 0; i < g.width; ++i) {
            row[static_cast<std::size_t>(i)] = field(i, j) ? '1' : '0';
        }
        os << row << '\n';
    }
}

BinaryField read_pbm(std::istream& is) {
    std::string magic;
    is >> magic;
    if (magic != "P1") {
        throw DomainError("read_pbm: expected P1 header");
    }
    Grid g;
    // Header tokens, skipping comments but harvesting our own metadata line.
    auto next_int = [&is, &g]() {
        for (;;) {
            is >> std::ws;
            if (is.peek() == '#') {
                std::string line;
                std::getline(is, line);
                std::istringstream meta(line);
                std::string tok;
                while (meta >> tok) {
                    if (tok.rfind("h=", 0) == 0) {
                        g.h = std::stod(tok.substr(2));
                    } else if (tok.rfind("origin=", 0) == 0) {
                        const auto comma = tok.find(',');
                        g.origin.i = std::stoi(tok.substr(7, comma - 7));
                        g.origin.j = std::stoi(tok.substr(comma + 1));
                    }
                }
                continue;
            }
            int v = 0;
            if (!(is >> v)) {
                throw DomainError("read_pbm: malformed header");
            }
            return v;
        }
    };
    g.width = next_int();
    g.height = next_int();
    if (g.width <= 0 || g.height <= 0) {
        throw DomainError("read_pbm: non-positive dimensions");
    }
    BinaryField field(g);
    for (int j = g.height - 1; j >= 0; --j) {
        for (int i = 0; i < g.width; ++i) {
            char c = 0;
            if (!(is >> c) || (c != '0' && c != '1')) {
                throw DomainError("read_pbm: truncated or invalid pixel data");
            }
            field.set(i, j, c == '1');
        }
    }
    return field;
}

void write_front_csv(std::ostream& os, std::span<const FrontSample> fronts) {
    CsvWriter csv(os, {"k", "m", "n", "x", "y"});
    for (const FrontSample& f : fronts) {
        for (const Cell& c : f.cells) {
            const Point p = f.grid.position(c.i, c.j);
            csv.row(f.step, c.i, c.j, p.x, p.y);
        }
    }
}

}  // namespace lmbo
