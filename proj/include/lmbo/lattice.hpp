#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "lmbo/shapes.hpp"

namespace lmbo {

/// Array index of a lattice cell: i runs along x, j along y.
struct Cell {
    int i = 0;
    int j = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
};

/// Finite window of the lattice hZ^2. Array cell (i, j) sits at the physical
/// point ((i - origin.i) h, (j - origin.j) h).
struct Grid {
    int width = 0;
    int height = 0;
    double h = 1.0;
    Cell origin;

    std::size_t size() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(width) + static_cast<std::size_t>(i);
    }
    bool contains(int i, int j) const { return i >= 0 && j >= 0 && i < width && j < height; }
    Point position(int i, int j) const { return {(i - origin.i) * h, (j - origin.j) * h}; }
    /// Array cell nearest to a physical point (may fall outside the window).
    Cell cell_at(Point p) const;

    friend bool operator==(const Grid&, const Grid&) = default;
};

/// {0,1} occupancy on a window, with the convention that the outermost frame
/// of cells is 0 so the set never touches the window boundary.
class BinaryField {
public:
    BinaryField() = default;
    explicit BinaryField(const Grid& grid) : grid_(grid), cells_(grid.size(), 0) {}

    const Grid& grid() const { return grid_; }
    int width() const { return grid_.width; }
    int height() const { return grid_.height; }
    double spacing() const { return grid_.h; }

    bool operator()(int i, int j) const { return cells_[grid_.index(i, j)] != 0; }
    /// Out-of-window cells read as 0.
    bool at(int i, int j) const { return grid_.contains(i, j) && (*this)(i, j); }
    void set(int i, int j, bool v) { cells_[grid_.index(i, j)] = v ? 1 : 0; }

    std::span<const std::uint8_t> cells() const { return cells_; }
    std::size_t count() const;
    bool frame_is_clear() const;

    friend bool operator==(const BinaryField&, const BinaryField&) = default;

private:
    Grid grid_;
    std::vector<std::uint8_t> cells_;
};

enum class RasterMode {
    /// Cell is set when the lattice point lies within distance h of the region.
    WithinH,
    /// Cell is set when the lattice point itself lies in the region.
    CenterInside,
};

struct RasterOptions {
    RasterMode mode = RasterMode::WithinH;
    /// Zero the frame instead of failing when the region reaches it (unbounded shapes).
    bool clip_frame = false;
};

/// Lattice points of `bbox` (inclusive) become the window; cells are set per
/// `options.mode`. Throws PaddingError if the region reaches the frame and
/// clipping is off, DomainError on a degenerate box or non-positive h.
BinaryField rasterize(const Shape& shape, double h, const Rect& bbox, RasterOptions options = {});

/// 1-cells with at least one 4-neighbour equal to 0, and their centroid.
struct FrontSample {
    Grid grid;
    std::vector<Cell> cells;
    Point centroid;
    int step = 0;
};

/// nullopt signals a vanished set.
std::optional<FrontSample> extract_front(const BinaryField& field, int step = 0);

/// Mean distance of the front cells to their centroid, physical units.
double measure_radius(const FrontSample& front);

struct ColumnProbe {
    int column = 0;
};

/// Probe along a rational direction. The set is assumed to lie locally below
/// the line of slope p/q through `anchor`; the probe visits the lattice points
/// below that line in order of their distance to it.
struct DirectionProbe {
    Cell anchor;
    int p = 0;
    int q = 1;
};

struct DirectionalDisplacement {
    /// Number of leading probe points that were expelled (0 means pinned).
    int index = 0;
    /// Distance of the last expelled probe point to the tangent line, units of h.
    double distance = 0.0;
};

/// Signed change of the topmost 1-cell in a column (positive = front moved down).
int front_displacement(const BinaryField& before, const BinaryField& after, ColumnProbe probe);

/// Discrete normal displacement measured at `probe.anchor` (a 1-cell of `before`).
DirectionalDisplacement front_displacement(const BinaryField& before, const BinaryField& after,
                                           DirectionProbe probe);

/// Offset of the probe point with the given level l = s p - j q (l >= 1).
Cell probe_offset(int level, int p, int q);

/// Topmost 1-cell in a column, or nullopt if the column is empty.
std::optional<int> column_top(const BinaryField& field, int column);

/// 1-cell maximising q j - p i; ties go to the cell closest to `near`.
std::optional<Cell> extreme_cell(const BinaryField& field, int p, int q, Point near);

/// Number of 4-connected components of the 1-set.
int count_components(const BinaryField& field);

// Plain PBM ("P1") with a comment line carrying h and the origin.
void write_pbm(std::ostream& os, const BinaryField& field);
BinaryField read_pbm(std::istream& is);

/// Columns k, m, n, x, y (m, n are array indices).
void write_front_csv(std::ostream& os, std::span<const FrontSample> fronts);

}  // namespace lmbo
