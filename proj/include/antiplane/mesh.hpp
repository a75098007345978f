#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace antiplane {

enum class BoundaryTag : std::uint8_t { Dirichlet, Neumann, Contact };

const char* tag_name(BoundaryTag tag);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct BoundaryEdge {
  int a = -1;  // oriented so the interior lies to the left; outward normal
  int b = -1;  // is the tangent rotated by -90 degrees
  BoundaryTag tag = BoundaryTag::Neumann;
};

/// Conforming 2D triangulation with a three-way boundary partition.
/// Immutable after construction; share freely across threads.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<BoundaryEdge> boundary_edges;

  double triangle_area(int t) const;
  double edge_length(const BoundaryEdge& e) const;
  double boundary_length(BoundaryTag tag) const;
  double total_area() const;
};

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Physical-group id -> boundary tag, used only for Gmsh input.
using GmshTagMap = std::map<int, BoundaryTag>;

GmshTagMap default_gmsh_tags();  // 1=D, 2=N, 3=C

/// Parses either the native section format or Gmsh MSH v2 ASCII
/// (auto-detected), validates all mesh invariants, and canonicalizes
/// boundary-edge orientation. Throws MeshError with line info on failure.
Mesh load_mesh(std::istream& in, const GmshTagMap& gmsh_tags = default_gmsh_tags());
Mesh load_mesh_file(const std::string& path, const GmshTagMap& gmsh_tags = default_gmsh_tags());

void export_native(const Mesh& mesh, std::ostream& out);

/// Validates an already-parsed mesh (positive areas, conformity, boundary
/// coverage, canonical edge orientation). load_mesh calls this internally.
void validate_mesh(const Mesh& mesh);

enum class PartitionMode { Strict, Verification };

struct PartitionReport {
  double dirichlet_length = 0.0;
  double neumann_length = 0.0;
  double contact_length = 0.0;
  bool ok = false;
  std::vector<std::string> warnings;
};

/// Strict mode requires |Gamma_D| > 0 and |Gamma_C| > 0; verification mode
/// downgrades an empty contact boundary to a warning.
PartitionReport validate_partition(const Mesh& mesh, PartitionMode mode);

/// Red refinement: each triangle into 4 congruent children, boundary tags
/// inherited by child edges.
Mesh refine_uniform(const Mesh& mesh);

/// Builders used by tests and scenario setup.
Mesh unit_square_mesh(BoundaryTag bottom, BoundaryTag right, BoundaryTag top, BoundaryTag left);

}  // namespace antiplane
