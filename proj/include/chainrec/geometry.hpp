/* Rectangular cell partitions of periodic/non-periodic boxes, with the
 * product metric used throughout the chain-recurrence pipeline. */
#ifndef CHAINREC_GEOMETRY_HPP
#define CHAINREC_GEOMETRY_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace chainrec {

using CellIndex = std::int32_t;
using Point = std::vector<double>;

struct AxisInterval {
  double lo = 0.0;
  double hi = 1.0;
  bool periodic = false;

  double span() const { return hi - lo; }
};

/** A compact box, each axis optionally a circle (hi identified with lo).
 *  Carries the product metric: per-axis differences (wrapped on periodic
 *  axes) combined as a Euclidean norm. */
class Domain {
 public:
  explicit Domain(std::vector<AxisInterval> axes);

  static Domain unit_circle();              // [0,1) periodic
  static Domain unit_torus(int dim);        // [0,1)^dim, all axes periodic
  static Domain unit_box(int dim);          // [0,1]^dim, no periodicity

  int dim() const { return static_cast<int>(axes_.size()); }
  const AxisInterval& axis(int k) const { return axes_[static_cast<size_t>(k)]; }
  const std::vector<AxisInterval>& axes() const { return axes_; }

  /// Wrap a coordinate of a periodic axis into [lo, hi); identity otherwise.
  double reduce_coord(int k, double x) const;
  Point reduce(Point p) const;

  /// |a - b| along axis k, shorter arc on periodic axes.
  double axis_distance(int k, double a, double b) const;

  /// Distance from x to the closed interval [a, b] along axis k (0 if inside).
  double axis_distance_to_interval(int k, double x, double a, double b) const;

  double metric(const Point& p, const Point& q) const;

  /// True if every coordinate lies within its axis interval (after reduction).
  bool contains(const Point& p) const;

 private:
  std::vector<AxisInterval> axes_;
};

/** Uniform subdivision of a Domain into half-open cells, row-major indexed.
 *  Axis 0 is the most significant coordinate.  Every point of the domain
 *  lies in exactly one cell; on a non-periodic axis the endpoint hi belongs
 *  to the last cell. */
class Grid {
 public:
  Grid(Domain domain, std::vector<std::int64_t> subdivisions);

  const Domain& domain() const { return domain_; }
  int dim() const { return domain_.dim(); }
  CellIndex num_cells() const { return num_cells_; }
  std::int64_t subdivisions(int k) const { return subdiv_[static_cast<size_t>(k)]; }
  double cell_width(int k) const { return width_[static_cast<size_t>(k)]; }

  /// Euclidean norm of the per-axis cell widths; an upper bound on the
  /// distance between any two points of one cell.
  double cell_diameter() const { return diameter_; }

  CellIndex cell_of(const Point& p) const;   // throws std::out_of_range off-domain
  Point cell_center(CellIndex c) const;

  std::vector<std::int64_t> cell_coords(CellIndex c) const;
  CellIndex cell_from_coords(std::span<const std::int64_t> coords) const;

  /// Cells whose closed box intersects the closed ball B(p, r).
  /// Over-inclusive exactly on tangency, as the outer edge rule requires.
  std::vector<CellIndex> ball_cells(const Point& p, double r) const;
  void ball_cells(const Point& p, double r, std::vector<CellIndex>& out) const;

  /// Cells whose center lies strictly within distance r of p.
  std::vector<CellIndex> cells_with_center_in_ball(const Point& p, double r) const;
  void cells_with_center_in_ball(const Point& p, double r, std::vector<CellIndex>& out) const;

 private:
  struct AxisCandidate {
    std::int64_t index;
    double dist;  // per-axis distance contribution
  };
  void collect_cells(const Point& p, double r, bool boxes, std::vector<CellIndex>& out) const;

  Domain domain_;
  std::vector<std::int64_t> subdiv_;
  std::vector<double> width_;
  std::vector<std::int64_t> stride_;
  CellIndex num_cells_ = 0;
  double diameter_ = 0.0;
};

/** Dense bitset over the cells of one grid. */
class CellSet {
 public:
  CellSet() = default;
  explicit CellSet(CellIndex universe);
  static CellSet all(CellIndex universe);

  CellIndex universe_size() const { return universe_; }
  bool test(CellIndex c) const {
    return (bits_[static_cast<size_t>(c >> 6)] >> (c & 63)) & 1u;
  }
  void set(CellIndex c) { bits_[static_cast<size_t>(c >> 6)] |= std::uint64_t{1} << (c & 63); }
  void reset(CellIndex c) { bits_[static_cast<size_t>(c >> 6)] &= ~(std::uint64_t{1} << (c & 63)); }

  CellIndex count() const;
  bool empty() const { return count() == 0; }
  bool is_all() const { return count() == universe_; }

  CellSet& operator|=(const CellSet& o);
  CellSet& operator&=(const CellSet& o);
  CellSet& subtract(const CellSet& o);
  CellSet complement() const;

  bool operator==(const CellSet& o) const;
  bool is_subset_of(const CellSet& o) const;
  bool intersects(const CellSet& o) const;

  std::vector<CellIndex> to_vector() const;  // ascending

  template <typename F>
  void for_each(F&& f) const {
    for (size_t w = 0; w < bits_.size(); ++w) {
      std::uint64_t word = bits_[w];
      while (word) {
        int bit = __builtin_ctzll(word);
        f(static_cast<CellIndex>((w << 6) + static_cast<size_t>(bit)));
        word &= word - 1;
      }
    }
  }

 private:
  CellIndex universe_ = 0;
  std::vector<std::uint64_t> bits_;
};

}  // namespace chainrec

#endif
