#include "chainrec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chainrec {

Domain::Domain(std::vector<AxisInterval> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw std::invalid_argument("Domain: dimension must be positive");
  for (const auto& ax : axes_) {
    if (!(ax.lo < ax.hi)) throw std::invalid_argument("Domain: axis requires lo < hi");
  }
}

Domain Domain::unit_circle() { return Domain({{0.0, 1.0, true}}); }

Domain Domain::unit_torus(int dim) {
  return Domain(std::vector<AxisInterval>(static_cast<size_t>(dim), {0.0, 1.0, true}));
}

Domain Domain::unit_box(int dim) {
  return Domain(std::vector<AxisInterval>(static_cast<size_t>(dim), {0.0, 1.0, false}));
}

double Domain::reduce_coord(int k, double x) const {
  const AxisInterval& ax = axes_[static_cast<size_t>(k)];
  if (!ax.periodic) return x;
  const double s = ax.span();
  double y = x - s * std::floor((x - ax.lo) / s);
  if (y >= ax.hi) y = ax.lo;  // guards the floating boundary y == hi
  return y;
}

Point Domain::reduce(Point p) const {
  if (static_cast<int>(p.size()) != dim())
    throw std::invalid_argument("Domain::reduce: dimension mismatch");
  for (int k = 0; k < dim(); ++k) p[static_cast<size_t>(k)] = reduce_coord(k, p[static_cast<size_t>(k)]);
  return p;
}

double Domain::axis_distance(int k, double a, double b) const {
  const AxisInterval& ax = axes_[static_cast<size_t>(k)];
  double d = std::fabs(reduce_coord(k, a) - reduce_coord(k, b));
  if (ax.periodic) {
    const double s = ax.span();
    d = std::min(d, s - d);
  }
  return d;
}

double Domain::axis_distance_to_interval(int k, double x, double a, double b) const {
  const AxisInterval& ax = axes_[static_cast<size_t>(k)];
  if (!ax.periodic) {
    if (x < a) return a - x;
    if (x > b) return x - b;
    return 0.0;
  }
  // On a circle the interval is an arc; either x lies on it or the nearest
  // point is an endpoint.
  const double s = ax.span();
  double xr = reduce_coord(k, x);
  double ar = a, br = b;
  if (br - ar >= s) return 0.0;  // arc covers the whole circle
  ar = reduce_coord(k, ar);
  double len = b - a;
  double rel = xr - ar;
  if (rel < 0) rel += s;
  if (rel <= len) return 0.0;
  return std::min(axis_distance(k, xr, a), axis_distance(k, xr, b));
}

double Domain::metric(const Point& p, const Point& q) const {
  if (static_cast<int>(p.size()) != dim() || static_cast<int>(q.size()) != dim())
    throw std::invalid_argument("Domain::metric: dimension mismatch");
  double sum = 0.0;
  for (int k = 0; k < dim(); ++k) {
    double d = axis_distance(k, p[static_cast<size_t>(k)], q[static_cast<size_t>(k)]);
    sum += d * d;
  }
  return std::sqrt(sum);
}

bool Domain::contains(const Point& p) const {
  if (static_cast<int>(p.size()) != dim()) return false;
  for (int k = 0; k < dim(); ++k) {
    const AxisInterval& ax = axes_[static_cast<size_t>(k)];
    if (ax.periodic) continue;
    double x = p[static_cast<size_t>(k)];
    if (x < ax.lo || x > ax.hi) return false;
  }
  return true;
}

Grid::Grid(Domain domain, std::vector<std::int64_t> subdivisions)
    : domain_(std::move(domain)), subdiv_(std::move(subdivisions)) {
  if (static_cast<int>(subdiv_.size()) != domain_.dim())
    throw std::invalid_argument("Grid: one subdivision count per axis required");
  std::int64_t total = 1;
  double diam2 = 0.0;
  for (int k = 0; k < domain_.dim(); ++k) {
    std::int64_t n = subdiv_[static_cast<size_t>(k)];
    if (n < 1) throw std::invalid_argument("Grid: subdivisions must be positive");
    total *= n;
    if (total > std::numeric_limits<CellIndex>::max())
      throw std::invalid_argument("Grid: total cell count exceeds index range");
    double w = domain_.axis(k).span() / static_cast<double>(n);
    width_.push_back(w);
    diam2 += w * w;
  }
  num_cells_ = static_cast<CellIndex>(total);
  diameter_ = std::sqrt(diam2);
  stride_.assign(subdiv_.size(), 1);
  for (int k = domain_.dim() - 2; k >= 0; --k)
    stride_[static_cast<size_t>(k)] = stride_[static_cast<size_t>(k + 1)] * subdiv_[static_cast<size_t>(k + 1)];
}

CellIndex Grid::cell_of(const Point& p) const {
  if (static_cast<int>(p.size()) != dim())
    throw std::invalid_argument("Grid::cell_of: dimension mismatch");
  std::int64_t idx = 0;
  for (int k = 0; k < dim(); ++k) {
    const AxisInterval& ax = domain_.axis(k);
    double x = domain_.reduce_coord(k, p[static_cast<size_t>(k)]);
    if (!ax.periodic && (x < ax.lo || x > ax.hi))
      throw std::out_of_range("Grid::cell_of: point outside non-periodic axis interval");
    std::int64_t n = subdiv_[static_cast<size_t>(k)];
    auto i = static_cast<std::int64_t>(std::floor((x - ax.lo) / width_[static_cast<size_t>(k)]));
    if (i < 0) i = 0;
    if (i >= n) i = n - 1;  // x == hi on a closed axis falls into the last cell
    idx += i * stride_[static_cast<size_t>(k)];
  }
  return static_cast<CellIndex>(idx);
}

Point Grid::cell_center(CellIndex c) const {
  auto coords = cell_coords(c);
  Point p(static_cast<size_t>(dim()));
  for (int k = 0; k < dim(); ++k) {
    p[static_cast<size_t>(k)] =
        domain_.axis(k).lo + (static_cast<double>(coords[static_cast<size_t>(k)]) + 0.5) * width_[static_cast<size_t>(k)];
  }
  return p;
}

std::vector<std::int64_t> Grid::cell_coords(CellIndex c) const {
  if (c < 0 || c >= num_cells_) throw std::out_of_range("Grid::cell_coords: bad cell index");
  std::vector<std::int64_t> coords(static_cast<size_t>(dim()));
  std::int64_t rest = c;
  for (int k = 0; k < dim(); ++k) {
    coords[static_cast<size_t>(k)] = rest / stride_[static_cast<size_t>(k)];
    rest %= stride_[static_cast<size_t>(k)];
  }
  return coords;
}

CellIndex Grid::cell_from_coords(std::span<const std::int64_t> coords) const {
  std::int64_t idx = 0;
  for (int k = 0; k < dim(); ++k) idx += coords[static_cast<size_t>(k)] * stride_[static_cast<size_t>(k)];
  return static_cast<CellIndex>(idx);
}

void Grid::collect_cells(const Point& p, double r, bool boxes, std::vector<CellIndex>& out) const {
  out.clear();
  if (r < 0) return;
  const int d = dim();
  // Per-axis candidates with their distance contribution; the final norm test
  // decides membership, so the candidate window only needs to be a superset.
  static thread_local std::vector<std::vector<AxisCandidate>> cands;
  cands.assign(static_cast<size_t>(d), {});
  for (int k = 0; k < d; ++k) {
    const AxisInterval& ax = domain_.axis(k);
    const std::int64_t n = subdiv_[static_cast<size_t>(k)];
    const double w = width_[static_cast<size_t>(k)];
    const double x = domain_.reduce_coord(k, p[static_cast<size_t>(k)]);
    auto& list = cands[static_cast<size_t>(k)];
    auto lo_i = static_cast<std::int64_t>(std::floor((x - r - ax.lo) / w)) - 1;
    auto hi_i = static_cast<std::int64_t>(std::floor((x + r - ax.lo) / w)) + 1;
    if (ax.periodic && hi_i - lo_i + 1 >= n) {
      lo_i = 0;
      hi_i = n - 1;
    }
    if (!ax.periodic) {
      lo_i = std::max<std::int64_t>(lo_i, 0);
      hi_i = std::min<std::int64_t>(hi_i, n - 1);
    }
    for (std::int64_t raw = lo_i; raw <= hi_i; ++raw) {
      std::int64_t i = raw;
      if (ax.periodic) i = ((raw % n) + n) % n;
      double a = ax.lo + static_cast<double>(i) * w;
      double dist = boxes ? domain_.axis_distance_to_interval(k, x, a, a + w)
                          : domain_.axis_distance(k, x, a + 0.5 * w);
      if (dist <= r) list.push_back({i, dist});
    }
    std::sort(list.begin(), list.end(),
              [](const AxisCandidate& u, const AxisCandidate& v) { return u.index < v.index; });
    list.erase(std::unique(list.begin(), list.end(),
                           [](const AxisCandidate& u, const AxisCandidate& v) { return u.index == v.index; }),
               list.end());
    if (list.empty()) return;
  }
  // Depth-first product in ascending coordinate order -> ascending row-major
  // cell indices, no sort needed afterwards.
  static thread_local std::vector<std::int64_t> coords;
  coords.assign(static_cast<size_t>(d), 0);
  static thread_local std::vector<double> partial;
  partial.assign(static_cast<size_t>(d) + 1, 0.0);
  int k = 0;
  std::vector<size_t> pos(static_cast<size_t>(d), 0);
  while (k >= 0) {
    if (pos[static_cast<size_t>(k)] >= cands[static_cast<size_t>(k)].size()) {
      pos[static_cast<size_t>(k)] = 0;
      --k;
      if (k >= 0) ++pos[static_cast<size_t>(k)];
      continue;
    }
    const AxisCandidate& cand = cands[static_cast<size_t>(k)][pos[static_cast<size_t>(k)]];
    double sum = partial[static_cast<size_t>(k)] + cand.dist * cand.dist;
    coords[static_cast<size_t>(k)] = cand.index;
    if (k + 1 < d) {
      partial[static_cast<size_t>(k) + 1] = sum;
      ++k;
    } else {
      // Same norm-then-compare form as Domain::metric so both routes agree
      // bit for bit on the threshold test.
      double norm = std::sqrt(sum);
      bool in = boxes ? (norm <= r) : (norm < r);
      if (in) out.push_back(cell_from_coords(coords));
      ++pos[static_cast<size_t>(k)];
    }
  }
}

std::vector<CellIndex> Grid::ball_cells(const Point& p, double r) const {
  std::vector<CellIndex> out;
  ball_cells(p, r, out);
  return out;
}

void Grid::ball_cells(const Point& p, double r, std::vector<CellIndex>& out) const {
  if (!(r > 0)) throw std::invalid_argument("Grid::ball_cells: radius must be positive");
  collect_cells(p, r, /*boxes=*/true, out);
}

std::vector<CellIndex> Grid::cells_with_center_in_ball(const Point& p, double r) const {
  std::vector<CellIndex> out;
  cells_with_center_in_ball(p, r, out);
  return out;
}

void Grid::cells_with_center_in_ball(const Point& p, double r, std::vector<CellIndex>& out) const {
  collect_cells(p, r, /*boxes=*/false, out);
}

CellSet::CellSet(CellIndex universe)
    : universe_(universe), bits_(static_cast<size_t>((universe + 63) / 64), 0) {}

CellSet CellSet::all(CellIndex universe) {
  CellSet s(universe);
  for (auto& w : s.bits_) w = ~std::uint64_t{0};
  if (universe & 63) s.bits_.back() = (std::uint64_t{1} << (universe & 63)) - 1;
  return s;
}

CellIndex CellSet::count() const {
  std::int64_t n = 0;
  for (auto w : bits_) n += __builtin_popcountll(w);
  return static_cast<CellIndex>(n);
}

CellSet& CellSet::operator|=(const CellSet& o) {
  for (size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
  return *this;
}

CellSet& CellSet::operator&=(const CellSet& o) {
  for (size_t i = 0; i < bits_.size(); ++i) bits_[i] &= o.bits_[i];
  return *this;
}

CellSet& CellSet::subtract(const CellSet& o) {
  for (size_t i = 0; i < bits_.size(); ++i) bits_[i] &= ~o.bits_[i];
  return *this;
}

CellSet CellSet::complement() const {
  CellSet s = all(universe_);
  s.subtract(*this);
  return s;
}

bool CellSet::operator==(const CellSet& o) const {
  return universe_ == o.universe_ && bits_ == o.bits_;
}

bool CellSet::is_subset_of(const CellSet& o) const {
  for (size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] & ~o.bits_[i]) return false;
  return true;
}

bool CellSet::intersects(const CellSet& o) const {
  for (size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] & o.bits_[i]) return true;
  return false;
}

std::vector<CellIndex> CellSet::to_vector() const {
  std::vector<CellIndex> v;
  v.reserve(static_cast<size_t>(count()));
  for_each([&](CellIndex c) { v.push_back(c); });
  return v;
}

}  // namespace chainrec
