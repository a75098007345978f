#include "antiplane/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace antiplane {

const char* tag_name(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Dirichlet: return "D";
    case BoundaryTag::Neumann: return "N";
    case BoundaryTag::Contact: return "C";
  }
  return "?";
}

static BoundaryTag parse_tag(const std::string& s, int line_no) {
  if (s == "D") return BoundaryTag::Dirichlet;
  if (s == "N") return BoundaryTag::Neumann;
  if (s == "C") return BoundaryTag::Contact;
  throw MeshError("line " + std::to_string(line_no) + ": unknown boundary tag '" + s + "'");
}

double Mesh::triangle_area(int t) const {
  const auto& tri = triangles[t];
  const Vec2& p0 = vertices[tri[0]];
  const Vec2& p1 = vertices[tri[1]];
  const Vec2& p2 = vertices[tri[2]];
  return 0.5 * ((p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y));
}

double Mesh::edge_length(const BoundaryEdge& e) const {
  const Vec2& pa = vertices[e.a];
  const Vec2& pb = vertices[e.b];
  return std::hypot(pb.x - pa.x, pb.y - pa.y);
}

double Mesh::boundary_length(BoundaryTag tag) const {
  double len = 0.0;
  for (const auto& e : boundary_edges)
    if (e.tag == tag) len += edge_length(e);
  return len;
}

double Mesh::total_area() const {
  double area = 0.0;
  for (int t = 0; t < static_cast<int>(triangles.size()); ++t) area += triangle_area(t);
  return area;
}

GmshTagMap default_gmsh_tags() {
  return {{1, BoundaryTag::Dirichlet}, {2, BoundaryTag::Neumann}, {3, BoundaryTag::Contact}};
}

namespace {

struct LineReader {
  std::istream& in;
  int line_no = 0;
  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++line_no;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      // trim trailing CR / whitespace
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
        line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw MeshError("line " + std::to_string(line_no) + ": " + what);
  }
};

Mesh parse_native(LineReader& rd, const std::string& first) {
  Mesh mesh;
  std::string line = first;
  do {
    if (line == "$Vertices") {
      std::string cnt;
      if (!rd.next(cnt)) rd.fail("expected vertex count");
      int n = std::stoi(cnt);
      mesh.vertices.reserve(n);
      for (int i = 0; i < n; ++i) {
        if (!rd.next(line)) rd.fail("expected vertex line");
        std::istringstream ss(line);
        Vec2 v;
        if (!(ss >> v.x >> v.y)) rd.fail("bad vertex line '" + line + "'");
        mesh.vertices.push_back(v);
      }
    } else if (line == "$Triangles") {
      std::string cnt;
      if (!rd.next(cnt)) rd.fail("expected triangle count");
      int n = std::stoi(cnt);
      mesh.triangles.reserve(n);
      for (int i = 0; i < n; ++i) {
        if (!rd.next(line)) rd.fail("expected triangle line");
        std::istringstream ss(line);
        std::array<int, 3> tri;
        if (!(ss >> tri[0] >> tri[1] >> tri[2])) rd.fail("bad triangle line '" + line + "'");
        mesh.triangles.push_back(tri);
      }
    } else if (line == "$BoundaryEdges") {
      std::string cnt;
      if (!rd.next(cnt)) rd.fail("expected boundary edge count");
      int n = std::stoi(cnt);
      mesh.boundary_edges.reserve(n);
      for (int i = 0; i < n; ++i) {
        if (!rd.next(line)) rd.fail("expected boundary edge line");
        std::istringstream ss(line);
        BoundaryEdge e;
        std::string tag;
        if (!(ss >> e.a >> e.b >> tag)) rd.fail("bad boundary edge line '" + line + "'");
        e.tag = parse_tag(tag, rd.line_no);
        mesh.boundary_edges.push_back(e);
      }
    } else {
      rd.fail("unknown section '" + line + "'");
    }
  } while (rd.next(line));
  return mesh;
}

Mesh parse_gmsh_v2(LineReader& rd, const GmshTagMap& tags) {
  Mesh mesh;
  std::string line;
  if (!rd.next(line)) rd.fail("truncated $MeshFormat");
  {
    std::istringstream ss(line);
    double version;
    int file_type, data_size;
    if (!(ss >> version >> file_type >> data_size)) rd.fail("bad $MeshFormat line");
    if (version < 2.0 || version >= 3.0 || file_type != 0)
      rd.fail("unsupported MSH format (need v2 ASCII)");
  }
  if (!rd.next(line) || line != "$EndMeshFormat") rd.fail("expected $EndMeshFormat");

  std::map<long, int> node_id;  // gmsh node id -> 0-based index
  while (rd.next(line)) {
    if (line == "$Nodes") {
      if (!rd.next(line)) rd.fail("expected node count");
      int n = std::stoi(line);
      for (int i = 0; i < n; ++i) {
        if (!rd.next(line)) rd.fail("expected node line");
        std::istringstream ss(line);
        long id;
        double x, y, z;
        if (!(ss >> id >> x >> y >> z)) rd.fail("bad node line '" + line + "'");
        node_id[id] = static_cast<int>(mesh.vertices.size());
        mesh.vertices.push_back({x, y});
      }
      if (!rd.next(line) || line != "$EndNodes") rd.fail("expected $EndNodes");
    } else if (line == "$Elements") {
      if (!rd.next(line)) rd.fail("expected element count");
      int n = std::stoi(line);
      for (int i = 0; i < n; ++i) {
        if (!rd.next(line)) rd.fail("expected element line");
        std::istringstream ss(line);
        long id;
        int type, ntags;
        if (!(ss >> id >> type >> ntags)) rd.fail("bad element line '" + line + "'");
        int phys = 0;
        for (int k = 0; k < ntags; ++k) {
          int t;
          if (!(ss >> t)) rd.fail("bad element tags");
          if (k == 0) phys = t;
        }
        auto node = [&](long gid) {
          auto it = node_id.find(gid);
          if (it == node_id.end()) rd.fail("element references unknown node " + std::to_string(gid));
          return it->second;
        };
        if (type == 1) {  // 2-node line
          long a, b;
          if (!(ss >> a >> b)) rd.fail("bad line element");
          auto it = tags.find(phys);
          if (it == tags.end())
            rd.fail("unknown boundary tag (physical group " + std::to_string(phys) + ")");
          mesh.boundary_edges.push_back({node(a), node(b), it->second});
        } else if (type == 2) {  // 3-node triangle
          long a, b, c;
          if (!(ss >> a >> b >> c)) rd.fail("bad triangle element");
          mesh.triangles.push_back({node(a), node(b), node(c)});
        } else {
          rd.fail("unsupported element type " + std::to_string(type));
        }
      }
      if (!rd.next(line) || line != "$EndElements") rd.fail("expected $EndElements");
    } else if (line[0] == '$') {
      // skip unknown section
      std::string end = "$End" + line.substr(1);
      while (rd.next(line) && line != end) {}
    } else {
      rd.fail("unexpected line '" + line + "'");
    }
  }
  return mesh;
}

using EdgeKey = std::pair<int, int>;

EdgeKey key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

}  // namespace

void validate_mesh(const Mesh& mesh) {
  const int nv = static_cast<int>(mesh.vertices.size());
  if (nv == 0 || mesh.triangles.empty()) throw MeshError("empty mesh");
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    for (int i : mesh.triangles[t])
      if (i < 0 || i >= nv)
        throw MeshError("triangle " + std::to_string(t) + ": vertex index out of range");
    if (mesh.triangle_area(static_cast<int>(t)) <= 0.0)
      throw MeshError("negative triangle area (triangle " + std::to_string(t) + ")");
  }

  // Count triangle adjacency per undirected edge. Conformity: at most 2; the
  // set with exactly 1 is the topological boundary.
  std::map<EdgeKey, int> edge_count;
  // Oriented boundary edge as it appears in its (unique) CCW triangle.
  std::map<EdgeKey, std::pair<int, int>> oriented;
  for (const auto& tri : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      int a = tri[k], b = tri[(k + 1) % 3];
      int& c = edge_count[key(a, b)];
      ++c;
      if (c > 2) throw MeshError("edge shared by more than two triangles (non-conforming)");
      oriented[key(a, b)] = {a, b};
    }
  }
  std::set<EdgeKey> boundary;
  for (const auto& [e, c] : edge_count)
    if (c == 1) boundary.insert(e);

  std::set<EdgeKey> tagged;
  for (const auto& e : mesh.boundary_edges) {
    if (e.a < 0 || e.a >= nv || e.b < 0 || e.b >= nv)
      throw MeshError("boundary edge vertex index out of range");
    EdgeKey k = key(e.a, e.b);
    if (!boundary.count(k))
      throw MeshError("tagged edge (" + std::to_string(e.a) + "," + std::to_string(e.b) +
                      ") is not on the topological boundary");
    if (!tagged.insert(k).second)
      throw MeshError("boundary edge (" + std::to_string(e.a) + "," + std::to_string(e.b) +
                      ") tagged more than once");
  }
  if (tagged.size() != boundary.size())
    throw MeshError("boundary edges do not cover the topological boundary (" +
                    std::to_string(tagged.size()) + " tagged, " +
                    std::to_string(boundary.size()) + " present)");

  // Hanging-vertex check: every vertex must belong to some triangle.
  std::vector<char> used(nv, 0);
  for (const auto& tri : mesh.triangles)
    for (int i : tri) used[i] = 1;
  for (int i = 0; i < nv; ++i)
    if (!used[i]) throw MeshError("hanging vertex " + std::to_string(i));
}

static void canonicalize_boundary_orientation(Mesh& mesh) {
  std::map<EdgeKey, std::pair<int, int>> oriented;
  for (const auto& tri : mesh.triangles)
    for (int k = 0; k < 3; ++k) {
      int a = tri[k], b = tri[(k + 1) % 3];
      oriented[key(a, b)] = {a, b};
    }
  for (auto& e : mesh.boundary_edges) {
    auto it = oriented.find(key(e.a, e.b));
    if (it != oriented.end()) {
      e.a = it->second.first;
      e.b = it->second.second;
    }
  }
}

Mesh load_mesh(std::istream& in, const GmshTagMap& gmsh_tags) {
  LineReader rd{in};
  std::string line;
  if (!rd.next(line)) throw MeshError("empty input");
  Mesh mesh = (line == "$MeshFormat") ? parse_gmsh_v2(rd, gmsh_tags) : parse_native(rd, line);
  validate_mesh(mesh);
  canonicalize_boundary_orientation(mesh);
  return mesh;
}

Mesh load_mesh_file(const std::string& path, const GmshTagMap& gmsh_tags) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file '" + path + "'");
  try {
    return load_mesh(in, gmsh_tags);
  } catch (const MeshError& e) {
    throw MeshError(path + ": " + e.what());
  }
}

void export_native(const Mesh& mesh, std::ostream& out) {
  out << "$Vertices\n" << mesh.vertices.size() << "\n";
  out.precision(17);
  for (const auto& v : mesh.vertices) out << v.x << " " << v.y << "\n";
  out << "$Triangles\n" << mesh.triangles.size() << "\n";
  for (const auto& t : mesh.triangles) out << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "$BoundaryEdges\n" << mesh.boundary_edges.size() << "\n";
  for (const auto& e : mesh.boundary_edges)
    out << e.a << " " << e.b << " " << tag_name(e.tag) << "\n";
}

PartitionReport validate_partition(const Mesh& mesh, PartitionMode mode) {
  PartitionReport rep;
  rep.dirichlet_length = mesh.boundary_length(BoundaryTag::Dirichlet);
  rep.neumann_length = mesh.boundary_length(BoundaryTag::Neumann);
  rep.contact_length = mesh.boundary_length(BoundaryTag::Contact);
  rep.ok = true;
  if (rep.dirichlet_length <= 0.0) {
    rep.ok = false;
    throw MeshError("|Gamma_D| = 0 (measured lengths D=" + std::to_string(rep.dirichlet_length) +
                    " N=" + std::to_string(rep.neumann_length) +
                    " C=" + std::to_string(rep.contact_length) + ")");
  }
  if (rep.contact_length <= 0.0) {
    if (mode == PartitionMode::Strict) {
      rep.ok = false;
      throw MeshError("|Gamma_C| = 0 (measured lengths D=" + std::to_string(rep.dirichlet_length) +
                      " N=" + std::to_string(rep.neumann_length) + " C=0)");
    }
    rep.warnings.push_back("|Gamma_C| = 0: contact terms are inactive (verification mode)");
  }
  return rep;
}

Mesh refine_uniform(const Mesh& mesh) {
  Mesh out;
  out.vertices = mesh.vertices;
  std::map<EdgeKey, int> midpoint;
  auto mid = [&](int a, int b) {
    EdgeKey k = key(a, b);
    auto it = midpoint.find(k);
    if (it != midpoint.end()) return it->second;
    const Vec2& pa = mesh.vertices[a];
    const Vec2& pb = mesh.vertices[b];
    int idx = static_cast<int>(out.vertices.size());
    out.vertices.push_back({0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)});
    midpoint[k] = idx;
    return idx;
  };
  for (const auto& tri : mesh.triangles) {
    int a = tri[0], b = tri[1], c = tri[2];
    int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    out.triangles.push_back({a, ab, ca});
    out.triangles.push_back({ab, b, bc});
    out.triangles.push_back({ca, bc, c});
    out.triangles.push_back({ab, bc, ca});
  }
  for (const auto& e : mesh.boundary_edges) {
    int m = mid(e.a, e.b);
    out.boundary_edges.push_back({e.a, m, e.tag});
    out.boundary_edges.push_back({m, e.b, e.tag});
  }
  return out;
}

Mesh unit_square_mesh(BoundaryTag bottom, BoundaryTag right, BoundaryTag top, BoundaryTag left) {
  Mesh mesh;
  mesh.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  mesh.triangles = {{0, 1, 2}, {0, 2, 3}};
  mesh.boundary_edges = {{0, 1, bottom}, {1, 2, right}, {2, 3, top}, {3, 0, left}};
  validate_mesh(mesh);
  return mesh;
}

}  // namespace antiplane
