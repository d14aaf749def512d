#include "fluxlab/geometry.hpp"

#include "fluxlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <sstream>

namespace fluxlab {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

struct Box {
  Vec2 lo;
  Vec2 hi;
};

Box bounding_box(const Shape& shape) {
  return std::visit(overloaded{
                        [](const Disk& d) {
                          Vec2 r(d.radius, d.radius);
                          return Box{d.center - r, d.center + r};
                        },
                        [](const Rect& r) { return Box{r.lo, r.hi}; },
                    },
                    shape);
}

void validate_shape(const Shape& shape) {
  std::visit(overloaded{
                 [](const Disk& d) {
                   if (!(d.radius > 0.0) || !d.center.allFinite())
                     throw Error(ErrorCode::InvalidSpec, "disk radius must be positive");
                 },
                 [](const Rect& r) {
                   if (!(r.hi.x() > r.lo.x() && r.hi.y() > r.lo.y()))
                     throw Error(ErrorCode::InvalidSpec, "rectangle corners must satisfy lo < hi");
                 },
             },
             shape);
}

// Smallest distance from the boundary of `inner` to the boundary of `outer`,
// where `inner` is expected to lie inside `outer` (positive result) or
// outside it (sign flipped by `inside`).
double sampled_gap(const Shape& from, const Shape& to, bool inside) {
  double gap = std::numeric_limits<double>::infinity();
  for (const Vec2& p : boundary_samples(from, 2048)) {
    double d = signed_distance(to, p);
    gap = std::min(gap, inside ? -d : d);
  }
  return gap;
}

}  // namespace

double signed_distance(const Shape& shape, const Vec2& p) {
  return std::visit(overloaded{
                        [&](const Disk& d) { return (p - d.center).norm() - d.radius; },
                        [&](const Rect& r) {
                          Vec2 c = 0.5 * (r.lo + r.hi);
                          Vec2 half = 0.5 * (r.hi - r.lo);
                          Vec2 q = (p - c).cwiseAbs() - half;
                          double outside = q.cwiseMax(0.0).norm();
                          double inside = std::min(std::max(q.x(), q.y()), 0.0);
                          return outside + inside;
                        },
                    },
                    shape);
}

Vec2 reference_point(const Shape& shape) {
  return std::visit(overloaded{
                        [](const Disk& d) { return d.center; },
                        [](const Rect& r) { Vec2 c = 0.5 * (r.lo + r.hi); return c; },
                    },
                    shape);
}

std::vector<Vec2> boundary_samples(const Shape& shape, int count) {
  std::vector<Vec2> out;
  out.reserve(count);
  std::visit(overloaded{
                 [&](const Disk& d) {
                   for (int k = 0; k < count; ++k) {
                     double a = 2.0 * kPi * k / count;
                     out.push_back(d.center + d.radius * Vec2(std::cos(a), std::sin(a)));
                   }
                 },
                 [&](const Rect& r) {
                   const std::array<Vec2, 4> corners{r.lo, Vec2(r.hi.x(), r.lo.y()), r.hi,
                                                     Vec2(r.lo.x(), r.hi.y())};
                   int per_side = std::max(1, count / 4);
                   for (int s = 0; s < 4; ++s) {
                     const Vec2& a = corners[s];
                     const Vec2& b = corners[(s + 1) % 4];
                     for (int k = 0; k < per_side; ++k)
                       out.push_back(a + (b - a) * (static_cast<double>(k) / per_side));
                   }
                 },
             },
             shape);
  return out;
}

void Graph::finalize() {
  incident.assign(num_vertices, {});
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    incident[edges[e].tail].push_back(e);
    incident[edges[e].head].push_back(e);
  }
}

double angle_increment(const Vec2& a, const Vec2& b, const Vec2& c) {
  double d = std::atan2(b.y() - c.y(), b.x() - c.x()) - std::atan2(a.y() - c.y(), a.x() - c.x());
  if (d > kPi) d -= 2.0 * kPi;
  if (d <= -kPi) d += 2.0 * kPi;
  return d;
}

Vec2 GridDomain::position(int v) const {
  return Vec2(index_[v].i * spacing_, index_[v].j * spacing_);
}

int GridDomain::slot(LatticeIndex idx) const {
  if (idx.i < lo_.i || idx.i > hi_.i || idx.j < lo_.j || idx.j > hi_.j) return -1;
  return (idx.j - lo_.j) * width_ + (idx.i - lo_.i);
}

int GridDomain::vertex_at(LatticeIndex idx) const {
  int s = slot(idx);
  return s < 0 ? -1 : vertex_slot_[s];
}

int GridDomain::inactive_region(LatticeIndex idx) const {
  int s = slot(idx);
  return s < 0 ? 0 : region_slot_[s];
}

int GridDomain::cell_at(LatticeIndex ll) const {
  int s = slot(ll);
  return s < 0 ? -1 : cell_slot_[s];
}

std::array<int, 4> GridDomain::cell_corners(int cell) const {
  int ll = cell_ll_[cell];
  LatticeIndex p = index_[ll];
  return {ll, vertex_at({p.i + 1, p.j}), vertex_at({p.i + 1, p.j + 1}), vertex_at({p.i, p.j + 1})};
}

std::optional<DirectedEdge> GridDomain::edge_between(int v, int w) const {
  LatticeIndex a = index_[v];
  LatticeIndex b = index_[w];
  int di = b.i - a.i;
  int dj = b.j - a.j;
  if (di == 1 && dj == 0 && right_edge_[v] >= 0) return DirectedEdge{right_edge_[v], +1};
  if (di == -1 && dj == 0 && right_edge_[w] >= 0) return DirectedEdge{right_edge_[w], -1};
  if (di == 0 && dj == 1 && up_edge_[v] >= 0) return DirectedEdge{up_edge_[v], +1};
  if (di == 0 && dj == -1 && up_edge_[w] >= 0) return DirectedEdge{up_edge_[w], -1};
  return std::nullopt;
}

GridDomain build_grid(const DomainSpec& spec) {
  const double h = spec.spacing;
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidSpec, "spacing must be positive");
  validate_shape(spec.outer);
  for (const Shape& hole : spec.holes) validate_shape(hole);

  // Geometric separation: every hole must sit inside the outer shape and away
  // from the other holes by at least three cells.
  const double min_gap = 3.0 * h;
  for (std::size_t a = 0; a < spec.holes.size(); ++a) {
    if (signed_distance(spec.outer, reference_point(spec.holes[a])) >= 0.0)
      throw Error(ErrorCode::InvalidSpec, "hole " + std::to_string(a + 1) + " is not inside the outer shape");
    if (sampled_gap(spec.holes[a], spec.outer, true) < min_gap)
      throw Error(ErrorCode::SpecTooCoarse,
                  "gap between hole " + std::to_string(a + 1) + " and the outer boundary is under 3 cells");
    for (std::size_t b = a + 1; b < spec.holes.size(); ++b) {
      if (sampled_gap(spec.holes[a], spec.holes[b], false) < min_gap)
        throw Error(ErrorCode::SpecTooCoarse, "gap between holes " + std::to_string(a + 1) + " and " +
                                                  std::to_string(b + 1) + " is under 3 cells");
    }
  }

  GridDomain g;
  g.spacing_ = h;
  Box box = bounding_box(spec.outer);
  // one padding ring so that the exterior region is connected
  g.lo_ = {static_cast<int>(std::floor(box.lo.x() / h)) - 1, static_cast<int>(std::floor(box.lo.y() / h)) - 1};
  g.hi_ = {static_cast<int>(std::ceil(box.hi.x() / h)) + 1, static_cast<int>(std::ceil(box.hi.y() / h)) + 1};
  g.width_ = g.hi_.i - g.lo_.i + 1;
  const int height = g.hi_.j - g.lo_.j + 1;
  const int slots = g.width_ * height;

  const double eps = 1e-9 * h;
  auto active_point = [&](const Vec2& p) {
    if (signed_distance(spec.outer, p) > eps) return false;
    for (const Shape& hole : spec.holes)
      if (signed_distance(hole, p) < -eps) return false;
    return true;
  };

  std::vector<char> active(slots, 0);
  for (int j = g.lo_.j; j <= g.hi_.j; ++j)
    for (int i = g.lo_.i; i <= g.hi_.i; ++i) {
      bool pad = i == g.lo_.i || i == g.hi_.i || j == g.lo_.j || j == g.hi_.j;
      active[g.slot({i, j})] = !pad && active_point(Vec2(i * h, j * h));
    }

  // Inactive regions by 8-connected flood fill; the one holding the padding
  // ring is the exterior.
  g.region_slot_.assign(slots, -1);
  std::vector<int> component(slots, -1);
  int num_components = 0;
  for (int s = 0; s < slots; ++s) {
    if (active[s] || component[s] >= 0) continue;
    std::deque<int> queue{s};
    component[s] = num_components;
    while (!queue.empty()) {
      int cur = queue.front();
      queue.pop_front();
      int ci = cur % g.width_ + g.lo_.i;
      int cj = cur / g.width_ + g.lo_.j;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          int n = g.slot({ci + di, cj + dj});
          if (n < 0 || active[n] || component[n] >= 0) continue;
          component[n] = num_components;
          queue.push_back(n);
        }
    }
    ++num_components;
  }
  const int exterior = component[0];

  std::vector<int> region_of_component(num_components, -1);
  region_of_component[exterior] = 0;
  g.hole_refs_.clear();
  for (std::size_t a = 0; a < spec.holes.size(); ++a) {
    const Shape& hole = spec.holes[a];
    Vec2 ref = reference_point(hole);
    // inactive lattice point strictly inside the hole, nearest to its center
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    Box hb = bounding_box(hole);
    for (int j = static_cast<int>(std::floor(hb.lo.y() / h)); j <= static_cast<int>(std::ceil(hb.hi.y() / h)); ++j)
      for (int i = static_cast<int>(std::floor(hb.lo.x() / h)); i <= static_cast<int>(std::ceil(hb.hi.x() / h)); ++i) {
        Vec2 p(i * h, j * h);
        int s = g.slot({i, j});
        if (s < 0 || active[s] || signed_distance(hole, p) >= -eps) continue;
        double d = (p - ref).norm();
        if (d < best_d) {
          best_d = d;
          best = s;
        }
      }
    if (best < 0)
      throw Error(ErrorCode::SpecTooCoarse, "hole " + std::to_string(a + 1) + " contains no lattice point");
    int c = component[best];
    if (region_of_component[c] != -1)
      throw Error(ErrorCode::SpecTooCoarse,
                  "hole " + std::to_string(a + 1) + " merges with another boundary region on the lattice");
    region_of_component[c] = static_cast<int>(a) + 1;
    g.hole_refs_.push_back(ref);
  }
  for (int c = 0; c < num_components; ++c)
    if (region_of_component[c] < 0)
      throw Error(ErrorCode::SpecTooCoarse, "lattice produces an excluded region that matches no hole");
  for (int s = 0; s < slots; ++s)
    if (!active[s]) g.region_slot_[s] = region_of_component[component[s]];

  // Active vertices in row-major order (j, then i).
  g.vertex_slot_.assign(slots, -1);
  for (int s = 0; s < slots; ++s) {
    if (!active[s]) continue;
    g.vertex_slot_[s] = static_cast<int>(g.index_.size());
    g.index_.push_back({s % g.width_ + g.lo_.i, s / g.width_ + g.lo_.j});
  }
  const int n = static_cast<int>(g.index_.size());
  if (n == 0) throw Error(ErrorCode::SpecTooCoarse, "no active lattice points");

  g.graph_.num_vertices = n;
  g.right_edge_.assign(n, -1);
  g.up_edge_.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    LatticeIndex p = g.index_[v];
    int r = g.vertex_at({p.i + 1, p.j});
    if (r >= 0) {
      g.right_edge_[v] = static_cast<int>(g.graph_.edges.size());
      g.graph_.edges.push_back({v, r});
    }
    int u = g.vertex_at({p.i, p.j + 1});
    if (u >= 0) {
      g.up_edge_[v] = static_cast<int>(g.graph_.edges.size());
      g.graph_.edges.push_back({v, u});
    }
  }
  g.graph_.finalize();

  // connectivity of the active set
  {
    std::vector<char> seen(n, 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int count = 1;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int e : g.graph_.incident[v]) {
        int w = g.graph_.other_end(e, v);
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          queue.push_back(w);
        }
      }
    }
    if (count != n)
      throw Error(ErrorCode::DisconnectedDomain, std::to_string(n - count) + " active vertices are cut off");
  }

  // boundary labels from 8-neighborhoods
  g.label_.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    LatticeIndex p = g.index_[v];
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        int region = g.inactive_region({p.i + di, p.j + dj});
        if (region < 0) continue;
        if (g.label_[v] >= 0 && g.label_[v] != region)
          throw Error(ErrorCode::SpecTooCoarse, "a lattice vertex touches two boundary components");
        g.label_[v] = region;
      }
  }
  std::vector<int> per_label(spec.holes.size() + 1, 0);
  for (int v = 0; v < n; ++v)
    if (g.label_[v] >= 0) ++per_label[g.label_[v]];
  for (std::size_t c = 0; c < per_label.size(); ++c)
    if (per_label[c] == 0)
      throw Error(ErrorCode::SpecTooCoarse, "boundary component " + std::to_string(c) + " has no vertices");

  g.cell_slot_.assign(slots, -1);
  for (int v = 0; v < n; ++v) {
    LatticeIndex p = g.index_[v];
    if (g.vertex_at({p.i + 1, p.j}) >= 0 && g.vertex_at({p.i, p.j + 1}) >= 0 &&
        g.vertex_at({p.i + 1, p.j + 1}) >= 0) {
      g.cell_slot_[g.slot(p)] = static_cast<int>(g.cell_ll_.size());
      g.cell_ll_.push_back(v);
    }
  }
  return g;
}

namespace {

// Directed boundary edges of a union of lattice squares, each square
// contributing its counter-clockwise boundary. Returns false when the result
// is not a single simple cycle.
bool trace_square_union(const std::vector<LatticeIndex>& squares, std::vector<LatticeIndex>& cycle) {
  std::map<std::pair<LatticeIndex, LatticeIndex>, int> directed;
  for (const LatticeIndex& s : squares) {
    const std::array<LatticeIndex, 4> c{s, LatticeIndex{s.i + 1, s.j}, LatticeIndex{s.i + 1, s.j + 1},
                                        LatticeIndex{s.i, s.j + 1}};
    for (int k = 0; k < 4; ++k) {
      auto fwd = std::make_pair(c[k], c[(k + 1) % 4]);
      auto rev = std::make_pair(fwd.second, fwd.first);
      if (auto it = directed.find(rev); it != directed.end())
        directed.erase(it);
      else
        directed[fwd] = 1;
    }
  }
  if (directed.empty()) return false;
  std::map<LatticeIndex, LatticeIndex> next;
  for (const auto& [e, unused] : directed) {
    if (next.count(e.first)) return false;  // pinch point
    next[e.first] = e.second;
  }
  cycle.clear();
  LatticeIndex start = next.begin()->first;
  LatticeIndex cur = start;
  do {
    cycle.push_back(cur);
    auto it = next.find(cur);
    if (it == next.end()) return false;
    cur = it->second;
  } while (!(cur == start) && cycle.size() <= next.size());
  return cycle.size() == next.size();
}

}  // namespace

LatticeLoop hole_loop(const GridDomain& grid, int i) {
  if (i < 1 || i > grid.num_holes())
    throw Error(ErrorCode::NoSuchHole, "hole index " + std::to_string(i) + " outside 1.." +
                                           std::to_string(grid.num_holes()));
  // lattice points of the hole region, then grow by one ring per attempt
  std::vector<LatticeIndex> region;
  LatticeIndex lo = grid.box_lo();
  LatticeIndex hi = grid.box_hi();
  for (int j = lo.j; j <= hi.j; ++j)
    for (int ii = lo.i; ii <= hi.i; ++ii)
      if (grid.inactive_region({ii, j}) == i) region.push_back({ii, j});

  for (int grow = 0; grow < 3; ++grow) {
    // squares with at least one corner in the region
    std::vector<LatticeIndex> squares;
    {
      std::map<LatticeIndex, int> seen;
      for (const LatticeIndex& p : region)
        for (int dj = -1; dj <= 0; ++dj)
          for (int di = -1; di <= 0; ++di) {
            LatticeIndex s{p.i + di, p.j + dj};
            if (!seen.count(s)) {
              seen[s] = 1;
              squares.push_back(s);
            }
          }
    }
    std::vector<LatticeIndex> cycle;
    if (trace_square_union(squares, cycle)) {
      LatticeLoop loop;
      bool ok = true;
      for (const LatticeIndex& p : cycle) {
        int v = grid.vertex_at(p);
        if (v < 0) {
          ok = false;
          break;
        }
        loop.vertices.push_back(v);
      }
      if (ok) {
        for (std::size_t k = 0; k < loop.vertices.size() && ok; ++k) {
          auto de = grid.edge_between(loop.vertices[k], loop.vertices[(k + 1) % loop.vertices.size()]);
          if (!de) ok = false;
          else loop.edges.push_back(*de);
        }
      }
      if (ok) {
        auto poly = loop_polygon(grid, loop);
        for (int other = 1; other <= grid.num_holes() && ok; ++other) {
          double w = winding_number(poly, grid.hole_refs()[other - 1]);
          ok = std::abs(w - (other == i ? 1.0 : 0.0)) < 1e-9;
        }
        if (ok) return loop;
      }
    }
    // dilate the region by one lattice ring (8-neighborhood)
    std::map<LatticeIndex, int> grown;
    for (const LatticeIndex& p : region)
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) grown[{p.i + di, p.j + dj}] = 1;
    region.clear();
    for (const auto& [p, unused] : grown) region.push_back(p);
  }
  throw Error(ErrorCode::SpecTooCoarse, "could not trace a lattice loop around hole " + std::to_string(i));
}

double winding_number(std::span<const Vec2> polygon, const Vec2& point) {
  double total = 0.0;
  for (std::size_t k = 0; k < polygon.size(); ++k)
    total += angle_increment(polygon[k], polygon[(k + 1) % polygon.size()], point);
  return total / (2.0 * kPi);
}

std::vector<Vec2> loop_polygon(const GridDomain& grid, const LatticeLoop& loop) {
  std::vector<Vec2> poly;
  poly.reserve(loop.vertices.size());
  for (int v : loop.vertices) poly.push_back(grid.position(v));
  return poly;
}

void write_geometry(std::ostream& os, const GridDomain& grid) {
  os << "# vertices " << grid.num_vertices() << " edges " << grid.num_edges() << " holes " << grid.num_holes()
     << " spacing " << grid.spacing() << "\n";
  os.precision(17);
  for (int v = 0; v < grid.num_vertices(); ++v) {
    Vec2 p = grid.position(v);
    os << "v " << v << ' ' << p.x() << ' ' << p.y() << ' ' << grid.boundary_label(v) << '\n';
  }
  for (int e = 0; e < grid.num_edges(); ++e)
    os << "e " << e << ' ' << grid.edges()[e].tail << ' ' << grid.edges()[e].head << '\n';
}

}  // namespace fluxlab
