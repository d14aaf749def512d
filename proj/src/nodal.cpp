#include "fluxlab/nodal.hpp"

#include "fluxlab/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

namespace fluxlab {

namespace {

constexpr double kTiny = 1e-300;

// Checks the deck antisymmetry of f and replaces exact zeros by +-1e-300 with
// the sign of their first nonzero cover neighbor.
Eigen::VectorXd prepared_values(const Eigen::VectorXd& f, const CoverGraph& cover) {
  const int N = cover.base_vertices;
  if (f.size() != 2 * static_cast<Eigen::Index>(N))
    throw Error(ErrorCode::InconsistentSizes, "function does not live on the cover");
  const double scale = f.cwiseAbs().maxCoeff();
  if (scale == 0.0) throw Error(ErrorCode::NoSignChange, "function vanishes identically");
  double defect = 0.0;
  for (int v = 0; v < N; ++v) defect = std::max(defect, std::abs(f[v] + f[v + N]));
  if (defect > 1e-8 * scale)
    throw Error(ErrorCode::PreconditionViolated,
                "function is not antisymmetric under the deck map (defect " + std::to_string(defect / scale) + ")");

  Eigen::VectorXd g = f;
  for (int v = 0; v < N; ++v) {
    if (g[v] != 0.0) continue;
    double sign = 1.0;
    for (int e : cover.graph.incident[v]) {
      const double w = f[cover.graph.other_end(e, v)];
      if (w != 0.0) {
        sign = w > 0 ? 1.0 : -1.0;
        break;
      }
    }
    g[v] = sign * kTiny;
    g[v + N] = -sign * kTiny;
  }
  return g;
}

struct Segment {
  int a;
  int b;
  int cell;
};

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

 private:
  std::vector<int> parent_;
};

// Boundary label for a contour end on base edge e: the label of an edge
// vertex, else of the nearest labeled vertex within two lattice steps.
int end_label(const GridDomain& grid, int e) {
  const Edge& edge = grid.edges()[e];
  for (int v : {edge.tail, edge.head})
    if (grid.is_boundary(v)) return grid.boundary_label(v);
  int best = -1;
  int best_dist = 3;
  for (int v : {edge.tail, edge.head}) {
    const LatticeIndex c = grid.index(v);
    for (int di = -2; di <= 2; ++di)
      for (int dj = -2; dj <= 2; ++dj) {
        const int w = grid.vertex_at({c.i + di, c.j + dj});
        if (w < 0 || !grid.is_boundary(w)) continue;
        const int d = std::max(std::abs(di), std::abs(dj));
        if (d < best_dist) {
          best_dist = d;
          best = grid.boundary_label(w);
        }
      }
  }
  return best;
}

// Edge ids of a cell, in the order c0c1, c1c2, c2c3, c3c0.
std::array<int, 4> cell_edges(const GridDomain& grid, const std::array<int, 4>& c) {
  std::array<int, 4> out{};
  for (int k = 0; k < 4; ++k) out[k] = grid.edge_between(c[k], c[(k + 1) % 4])->edge;
  return out;
}

}  // namespace

NodalSet extract_nodal_set(const Eigen::VectorXd& f, const CoverGraph& cover, const GridDomain& grid, int sheet) {
  if (cover.base_vertices != grid.num_vertices())
    throw Error(ErrorCode::InconsistentSizes, "cover does not belong to this grid");
  if (sheet != 0 && sheet != 1) throw Error(ErrorCode::InvalidArgument, "sheet must be 0 or 1");
  const Eigen::VectorXd g = prepared_values(f, cover);

  NodalSet set;
  set.cell_mask.assign(grid.num_cells(), 0);
  std::map<int, Vec2> nodes;
  std::vector<Segment> segments;

  for (int cell = 0; cell < grid.num_cells(); ++cell) {
    const auto c = grid.cell_corners(cell);
    const auto e = cell_edges(grid, c);
    std::array<int, 4> s{};
    s[0] = sheet;
    s[1] = s[0] ^ cover.cut[e[0]];
    s[2] = s[1] ^ cover.cut[e[1]];
    s[3] = s[0] ^ cover.cut[e[3]];
    std::array<double, 4> a{};
    for (int k = 0; k < 4; ++k) a[k] = g[cover.lift(c[k], s[k])];

    std::array<bool, 4> crossed{};
    int count = 0;
    for (int k = 0; k < 4; ++k) {
      crossed[k] = (a[k] > 0) != (a[(k + 1) % 4] > 0);
      if (!crossed[k]) continue;
      ++count;
      if (!nodes.contains(e[k])) {
        const double t = a[k] / (a[k] - a[(k + 1) % 4]);
        const Vec2 p = grid.position(c[k]);
        nodes.emplace(e[k], p + t * (grid.position(c[(k + 1) % 4]) - p));
      }
    }
    if (count == 0) continue;
    set.cell_mask[cell] = 1;
    if (count == 2) {
      int first = -1;
      for (int k = 0; k < 4; ++k)
        if (crossed[k]) {
          if (first < 0)
            first = e[k];
          else
            segments.push_back({first, e[k], cell});
        }
    } else {
      ++set.saddle_cells;
      const double mean = 0.25 * (a[0] + a[1] + a[2] + a[3]);
      if ((mean > 0) == (a[0] > 0)) {
        // c0 and c2 are joined through the center; cut off c1 and c3
        segments.push_back({e[0], e[1], cell});
        segments.push_back({e[2], e[3], cell});
      } else {
        segments.push_back({e[3], e[0], cell});
        segments.push_back({e[1], e[2], cell});
      }
    }
  }

  std::map<int, std::vector<int>> touching;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    touching[segments[k].a].push_back(static_cast<int>(k));
    touching[segments[k].b].push_back(static_cast<int>(k));
  }
  std::vector<char> used(segments.size(), 0);
  auto follow = [&](int start_node, int start_segment) {
    Polyline line;
    line.points.push_back(nodes.at(start_node));
    int node = start_node;
    int seg = start_segment;
    while (seg >= 0) {
      used[seg] = 1;
      line.cells.push_back(segments[seg].cell);
      node = segments[seg].a == node ? segments[seg].b : segments[seg].a;
      line.points.push_back(nodes.at(node));
      seg = -1;
      for (int next : touching[node])
        if (!used[next]) {
          seg = next;
          break;
        }
    }
    return std::pair{line, node};
  };

  for (const auto& [node, segs] : touching) {
    if (segs.size() != 1 || used[segs[0]]) continue;
    auto [line, last] = follow(node, segs[0]);
    line.endpoint_labels = {end_label(grid, node), end_label(grid, last)};
    set.polylines.push_back(std::move(line));
  }
  for (std::size_t k = 0; k < segments.size(); ++k) {
    if (used[k]) continue;
    auto [line, last] = follow(segments[k].a, static_cast<int>(k));
    line.closed = true;
    set.polylines.push_back(std::move(line));
  }
  return set;
}

void refresh_mask(NodalSet& set, const GridDomain& grid) {
  set.cell_mask.assign(grid.num_cells(), 0);
  for (const Polyline& line : set.polylines)
    for (int cell : line.cells) set.cell_mask[cell] = 1;
}

NodalSet without_polyline(const NodalSet& set, std::size_t index, const GridDomain& grid) {
  if (index >= set.polylines.size()) throw Error(ErrorCode::InvalidArgument, "no such polyline");
  NodalSet out = set;
  out.polylines.erase(out.polylines.begin() + static_cast<std::ptrdiff_t>(index));
  refresh_mask(out, grid);
  return out;
}

NodalSet merge(const NodalSet& a, const NodalSet& b, const GridDomain& grid) {
  NodalSet out = a;
  out.polylines.insert(out.polylines.end(), b.polylines.begin(), b.polylines.end());
  out.saddle_cells += b.saddle_cells;
  refresh_mask(out, grid);
  return out;
}

SlitReport topology_report(const NodalSet& set, const GridDomain& grid, const CoverGraph& cover) {
  const int k = grid.num_holes();
  SlitReport report;
  report.n_lines = static_cast<int>(set.polylines.size());
  report.endpoints_per_component.assign(k + 1, 0);
  report.distinct_ends_ok = true;
  for (const Polyline& line : set.polylines) {
    if (line.closed) {
      ++report.closed_loops;
      report.distinct_ends_ok = false;
      continue;
    }
    for (int label : line.endpoint_labels) {
      if (label < 0)
        ++report.unclassified_endpoints;
      else
        ++report.endpoints_per_component[label];
    }
    if (line.endpoint_labels[0] == line.endpoint_labels[1]) report.distinct_ends_ok = false;
  }
  report.parity_ok = true;
  for (int c = 1; c <= k; ++c)
    if (report.endpoints_per_component[c] % 2 == 0) report.parity_ok = false;
  report.bounds_ok = 2 * report.n_lines >= k && report.n_lines <= k;

  const int cells = grid.num_cells();
  std::vector<char> mask = set.cell_mask;
  mask.resize(cells, 0);

  // base complement, 4-adjacent cells
  DisjointSets base(cells);
  for (int cell = 0; cell < cells; ++cell) {
    if (mask[cell]) continue;
    const LatticeIndex ll = grid.index(grid.cell_corners(cell)[0]);
    for (LatticeIndex nb : {LatticeIndex{ll.i + 1, ll.j}, LatticeIndex{ll.i, ll.j + 1}}) {
      const int other = grid.cell_at(nb);
      if (other >= 0 && !mask[other]) base.unite(cell, other);
    }
  }
  std::vector<char> seen(cells, 0);
  for (int cell = 0; cell < cells; ++cell)
    if (!mask[cell] && !seen[base.find(cell)]) {
      seen[base.find(cell)] = 1;
      ++report.complement_components;
    }
  report.complement_connected = report.complement_components == 1;

  // cover complement: cover cell (cell, s) has its lower-left corner on sheet s
  DisjointSets lifted(2 * cells);
  for (int cell = 0; cell < cells; ++cell) {
    if (mask[cell]) continue;
    const auto c = grid.cell_corners(cell);
    const auto e = cell_edges(grid, c);
    const LatticeIndex ll = grid.index(c[0]);
    const int right = grid.cell_at({ll.i + 1, ll.j});
    const int up = grid.cell_at({ll.i, ll.j + 1});
    for (int s = 0; s < 2; ++s) {
      if (right >= 0 && !mask[right]) lifted.unite(cell + s * cells, right + (s ^ cover.cut[e[0]]) * cells);
      if (up >= 0 && !mask[up]) lifted.unite(cell + s * cells, up + (s ^ cover.cut[e[3]]) * cells);
    }
  }
  std::vector<char> seen_lifted(2 * cells, 0);
  for (int x = 0; x < 2 * cells; ++x)
    if (!mask[x % cells] && !seen_lifted[lifted.find(x)]) {
      seen_lifted[lifted.find(x)] = 1;
      ++report.cover_domain_count;
    }
  return report;
}

std::string to_json(const SlitReport& report) {
  nlohmann::ordered_json j;
  j["n_lines"] = report.n_lines;
  j["closed_loops"] = report.closed_loops;
  j["endpoints_per_component"] = report.endpoints_per_component;
  j["unclassified_endpoints"] = report.unclassified_endpoints;
  j["parity_ok"] = report.parity_ok;
  j["distinct_ends_ok"] = report.distinct_ends_ok;
  j["complement_components"] = report.complement_components;
  j["complement_connected"] = report.complement_connected;
  j["cover_domain_count"] = report.cover_domain_count;
  j["bounds_ok"] = report.bounds_ok;
  j["slits"] = report.slits();
  return j.dump();
}

PairCheck degenerate_pair_check(const Eigen::VectorXcd& u1, const Eigen::VectorXcd& u2, int multiplicity,
                                const GridDomain& grid, const CoverGraph& cover, const ThetaField& theta) {
  if (multiplicity != 2)
    throw Error(ErrorCode::PreconditionViolated, "pair check needs a twofold level, got " + std::to_string(multiplicity));
  if (u1.size() != grid.num_vertices() || u2.size() != grid.num_vertices())
    throw Error(ErrorCode::InconsistentSizes, "vectors do not match the grid");
  const double overlap = std::abs(u1.dot(u2));
  if (overlap > 1e-8 * u1.norm() * u2.norm())
    throw Error(ErrorCode::PreconditionViolated, "representatives are not orthogonal");

  PairCheck check;
  check.first = extract_nodal_set(real_lift(u1, theta, cover).values, cover, grid);
  check.second = extract_nodal_set(real_lift(u2, theta, cover).values, cover, grid);
  for (int cell = 0; cell < grid.num_cells(); ++cell)
    if (check.first.cell_mask[cell] && check.second.cell_mask[cell]) ++check.shared_cells;
  check.disjoint = check.shared_cells == 0;

  const Eigen::VectorXd modulus = (u1 + Complex(0.0, 1.0) * u2).cwiseAbs();
  const double top = modulus.maxCoeff();
  double low = std::numeric_limits<double>::infinity();
  for (int v = 0; v < grid.num_vertices(); ++v)
    if (!grid.is_boundary(v)) low = std::min(low, modulus[v]);
  check.min_combination_ratio = top > 0 ? low / top : 0.0;
  check.combination_nonvanishing = check.min_combination_ratio > 1e-6;
  return check;
}

std::vector<double> circle_nodal_points(const Eigen::VectorXd& f, const CoverGraph& cover, int n) {
  if (cover.base_vertices != n) throw Error(ErrorCode::InconsistentSizes, "cover does not belong to the circle");
  const Eigen::VectorXd g = prepared_values(f, cover);
  const double step = 2.0 * std::numbers::pi / n;
  std::vector<double> out;
  for (int e = 0; e < cover.base_edges; ++e) {
    const Edge& edge = cover.graph.edges[e];
    const double a = g[edge.tail];
    const double b = g[edge.head];
    if ((a > 0) == (b > 0)) continue;
    out.push_back((edge.tail + a / (a - b)) * step);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void write_svg(std::ostream& os, const GridDomain& grid, const std::vector<NodalSet>& sets) {
  static constexpr const char* colors[] = {"#c0392b", "#2471a3", "#1e8449", "#b9770e", "#7d3c98"};
  const double h = grid.spacing();
  const double x0 = grid.box_lo().i * h;
  const double y1 = grid.box_hi().j * h;
  const double width = (grid.box_hi().i - grid.box_lo().i) * h;
  const double height = (grid.box_hi().j - grid.box_lo().j) * h;
  const double px = 600.0 / std::max(width, height);
  auto X = [&](const Vec2& p) { return (p.x() - x0) * px; };
  auto Y = [&](const Vec2& p) { return (y1 - p.y()) * px; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width * px << "\" height=\"" << height * px
     << "\">\n<g stroke=\"#222\" stroke-width=\"1\">\n";
  std::vector<int> uses(grid.num_edges(), 0);
  for (int cell = 0; cell < grid.num_cells(); ++cell)
    for (int e : cell_edges(grid, grid.cell_corners(cell))) ++uses[e];
  for (int e = 0; e < grid.num_edges(); ++e) {
    if (uses[e] != 1) continue;
    const Vec2 a = grid.position(grid.edges()[e].tail);
    const Vec2 b = grid.position(grid.edges()[e].head);
    os << "<line x1=\"" << X(a) << "\" y1=\"" << Y(a) << "\" x2=\"" << X(b) << "\" y2=\"" << Y(b) << "\"/>\n";
  }
  os << "</g>\n";
  for (std::size_t k = 0; k < sets.size(); ++k) {
    os << "<g fill=\"none\" stroke=\"" << colors[k % std::size(colors)] << "\" stroke-width=\"2\">\n";
    for (const Polyline& line : sets[k].polylines) {
      os << "<polyline points=\"";
      for (const Vec2& p : line.points) os << X(p) << ',' << Y(p) << ' ';
      os << "\"/>\n";
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
}

void write_polylines(std::ostream& os, const NodalSet& set) {
  for (std::size_t k = 0; k < set.polylines.size(); ++k) {
    const Polyline& line = set.polylines[k];
    os << "# polyline " << k << (line.closed ? " closed" : " open") << " labels " << line.endpoint_labels[0] << ' '
       << line.endpoint_labels[1] << '\n';
    for (const Vec2& p : line.points) os << p.x() << ' ' << p.y() << '\n';
  }
}

}  // namespace fluxlab
