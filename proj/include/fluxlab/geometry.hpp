#pragma once

#include <Eigen/Core>

#include <array>
#include <optional>
#include <ostream>
#include <span>
#include <variant>
#include <vector>

namespace fluxlab {

using Vec2 = Eigen::Vector2d;

struct Disk {
  Vec2 center;
  double radius;
};

struct Rect {
  Vec2 lo;
  Vec2 hi;
};

using Shape = std::variant<Disk, Rect>;

/// Negative inside, zero on the boundary, positive outside.
double signed_distance(const Shape& shape, const Vec2& p);
/// Center of a disk or a rectangle.
Vec2 reference_point(const Shape& shape);
/// Evenly spaced points on the boundary curve of the shape.
std::vector<Vec2> boundary_samples(const Shape& shape, int count);

struct DomainSpec {
  Shape outer;
  std::vector<Shape> holes;
  double spacing = 0.0;
};

/// Undirected edge stored with a canonical orientation tail -> head.
struct Edge {
  int tail;
  int head;
};

/// Edge traversed either along (+1) or against (-1) its canonical orientation.
struct DirectedEdge {
  int edge;
  int sign;
};

/// Plain vertex/edge incidence structure shared by lattice domains and the
/// discretized circle.
struct Graph {
  int num_vertices = 0;
  std::vector<Edge> edges;

  /// Incident edges per vertex, filled by finalize().
  std::vector<std::vector<int>> incident;

  void finalize();
  int other_end(int edge, int vertex) const {
    return edges[edge].tail == vertex ? edges[edge].head : edges[edge].tail;
  }
};

struct LatticeIndex {
  int i;
  int j;
  bool operator==(const LatticeIndex&) const = default;
  auto operator<=>(const LatticeIndex&) const = default;
};

struct LatticeLoop {
  std::vector<DirectedEdge> edges;
  /// vertices[k] is the tail of edges[k]; the loop closes back on vertices[0].
  std::vector<int> vertices;
  int orientation = +1;
};

/// Square-lattice discretization of a planar domain with k holes.
///
/// Lattice points sit at (i h, j h) for integers i, j. A point is active when
/// it lies in the closed outer shape and outside every open hole. Edges join
/// 4-neighbors that are both active. Active vertices with an inactive point
/// among their 8 neighbors are boundary vertices and carry the label of that
/// inactive region: 0 for the unbounded exterior, i for the i-th hole.
class GridDomain {
 public:
  int num_vertices() const { return graph_.num_vertices; }
  int num_edges() const { return static_cast<int>(graph_.edges.size()); }
  int num_holes() const { return static_cast<int>(hole_refs_.size()); }
  int num_boundary_components() const { return num_holes() + 1; }
  double spacing() const { return spacing_; }

  const Graph& graph() const { return graph_; }
  std::span<const Edge> edges() const { return graph_.edges; }
  std::span<const Vec2> hole_refs() const { return hole_refs_; }

  Vec2 position(int v) const;
  LatticeIndex index(int v) const { return index_[v]; }
  /// Vertex id at a lattice index, -1 when inactive or outside the box.
  int vertex_at(LatticeIndex idx) const;
  /// Boundary label of a vertex, -1 for interior vertices.
  int boundary_label(int v) const { return label_[v]; }
  bool is_boundary(int v) const { return label_[v] >= 0; }
  std::span<const int> boundary_labels() const { return label_; }

  /// Edge id joining v and w with the sign of traversal v -> w.
  std::optional<DirectedEdge> edge_between(int v, int w) const;

  /// Full cells are lattice squares whose four corners are active. A cell is
  /// identified by its lower-left vertex.
  int num_cells() const { return static_cast<int>(cell_ll_.size()); }
  /// Corners in counter-clockwise order starting at the lower-left one.
  std::array<int, 4> cell_corners(int cell) const;
  /// Cell whose lower-left corner has the given lattice index, -1 if none.
  int cell_at(LatticeIndex ll) const;
  /// Region id of an inactive lattice point (0 exterior, i for hole i), -1
  /// for active points; indices outside the bounding box report 0.
  int inactive_region(LatticeIndex idx) const;

  /// Lattice points strictly inside the bounding box plus one padding ring.
  LatticeIndex box_lo() const { return lo_; }
  LatticeIndex box_hi() const { return hi_; }

 private:
  friend GridDomain build_grid(const DomainSpec& spec);
  int slot(LatticeIndex idx) const;

  double spacing_ = 0.0;
  Graph graph_;
  std::vector<LatticeIndex> index_;
  std::vector<int> label_;
  std::vector<Vec2> hole_refs_;
  LatticeIndex lo_{0, 0};
  LatticeIndex hi_{0, 0};
  int width_ = 0;
  std::vector<int> vertex_slot_;   // active vertex id or -1
  std::vector<int> region_slot_;   // inactive region id or -1
  std::vector<int> right_edge_;    // per vertex, edge to (i+1, j) or -1
  std::vector<int> up_edge_;       // per vertex, edge to (i, j+1) or -1
  std::vector<int> cell_ll_;
  std::vector<int> cell_slot_;
};

GridDomain build_grid(const DomainSpec& spec);

/// Counter-clockwise lattice cycle around hole i (1-based) that encloses no
/// other hole.
LatticeLoop hole_loop(const GridDomain& grid, int i);

/// Winding number of a closed polygon about a point, by summing the wrapped
/// angle increments of consecutive vertices.
double winding_number(std::span<const Vec2> polygon, const Vec2& point);
std::vector<Vec2> loop_polygon(const GridDomain& grid, const LatticeLoop& loop);

/// Plain-text listing: one "v id x y label" line per vertex, then one
/// "e id tail head" line per edge.
void write_geometry(std::ostream& os, const GridDomain& grid);

/// Angle increment from a to b as seen from c, wrapped into (-pi, pi].
double angle_increment(const Vec2& a, const Vec2& b, const Vec2& c);

}  // namespace fluxlab
