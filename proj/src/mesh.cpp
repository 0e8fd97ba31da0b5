#include "hdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace hdg {

double norm(Point a) { return std::hypot(a.x, a.y); }

MeshParseError::MeshParseError(std::size_t line, const std::string& what)
    : MeshError("line " + std::to_string(line) + ": " + what), line_(line) {}

std::string to_string(const BoundaryTag& tag) {
  switch (tag.kind) {
    case BoundaryTag::Kind::Interior: return "Interior";
    case BoundaryTag::Kind::Dirichlet: return "Dirichlet(" + std::to_string(tag.id) + ")";
    case BoundaryTag::Kind::Neumann: return "Neumann(" + std::to_string(tag.id) + ")";
    case BoundaryTag::Kind::Floating: return "Floating(" + std::to_string(tag.id) + ")";
  }
  return "?";
}

std::array<Point, 3> Mesh2D::element_vertices(int k) const {
  const auto& e = elements_[k];
  return {vertices_[e[0]], vertices_[e[1]], vertices_[e[2]]};
}

double Mesh2D::element_area(int k) const {
  const auto v = element_vertices(k);
  return 0.5 * cross(v[1] - v[0], v[2] - v[0]);
}

double Mesh2D::shortest_edge(int k) const {
  const auto v = element_vertices(k);
  return std::min({norm(v[1] - v[0]), norm(v[2] - v[1]), norm(v[0] - v[2])});
}

double Mesh2D::longest_edge(int k) const {
  const auto v = element_vertices(k);
  return std::max({norm(v[1] - v[0]), norm(v[2] - v[1]), norm(v[0] - v[2])});
}

Point Mesh2D::outward_normal(int k, int local_face) const {
  const auto v = element_vertices(k);
  const Point d = v[(local_face + 1) % 3] - v[local_face];
  const double len = norm(d);
  return {d.y / len, -d.x / len};
}

double Mesh2D::face_length(int face) const {
  const auto& f = faces_[face];
  return norm(vertices_[f.vertices[1]] - vertices_[f.vertices[0]]);
}

double Mesh2D::total_area() const {
  double a = 0.0;
  for (std::size_t k = 0; k < elements_.size(); ++k) a += element_area(static_cast<int>(k));
  return a;
}

namespace {

std::pair<int, int> edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

std::string edge_name(int a, int b) {
  std::ostringstream os;
  os << "(" << a << ", " << b << ")";
  return os.str();
}

}  // namespace

Mesh2D build_skeleton(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
                      const std::vector<BoundaryEdge>& boundary) {
  if (triangles.empty()) throw MeshError("mesh has no elements");
  const int nv = static_cast<int>(vertices.size());

  for (std::size_t k = 0; k < triangles.size(); ++k) {
    auto& t = triangles[k];
    for (int v : t) {
      if (v < 0 || v >= nv) {
        throw MeshError("element " + std::to_string(k) + " references vertex " +
                        std::to_string(v) + " outside [0, " + std::to_string(nv) + ")");
      }
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw MeshError("element " + std::to_string(k) + " repeats a vertex");
    }
    const double twice_area =
        cross(vertices[t[1]] - vertices[t[0]], vertices[t[2]] - vertices[t[0]]);
    const double scale = std::max({norm(vertices[t[1]] - vertices[t[0]]),
                                   norm(vertices[t[2]] - vertices[t[0]])});
    if (!(std::abs(twice_area) > 1e-14 * scale * scale)) {
      throw MeshError("element " + std::to_string(k) + " is degenerate");
    }
    if (twice_area < 0.0) std::swap(t[1], t[2]);
  }

  Mesh2D mesh;
  mesh.vertices_ = std::move(vertices);
  mesh.elements_ = std::move(triangles);
  mesh.element_faces_.resize(mesh.elements_.size());

  std::map<std::pair<int, int>, int> face_of_edge;
  for (std::size_t k = 0; k < mesh.elements_.size(); ++k) {
    const auto& t = mesh.elements_[k];
    for (int l = 0; l < 3; ++l) {
      const int a = t[l];
      const int b = t[(l + 1) % 3];
      const auto key = edge_key(a, b);
      auto it = face_of_edge.find(key);
      if (it == face_of_edge.end()) {
        Face f;
        f.vertices = {a, b};
        f.elements[0] = static_cast<int>(k);
        f.local_index[0] = l;
        face_of_edge.emplace(key, static_cast<int>(mesh.faces_.size()));
        mesh.element_faces_[k][l] = static_cast<int>(mesh.faces_.size());
        mesh.faces_.push_back(f);
        continue;
      }
      Face& f = mesh.faces_[it->second];
      if (f.elements[1] >= 0) {
        throw MeshError("non-manifold edge " + edge_name(a, b) +
                        ": more than two adjacent elements");
      }
      if (f.vertices[0] != b) {
        throw MeshError("edge " + edge_name(a, b) +
                        " is traversed in the same direction by two elements (overlap)");
      }
      f.elements[1] = static_cast<int>(k);
      f.local_index[1] = l;
      mesh.element_faces_[k][l] = it->second;
    }
  }

  std::vector<char> marked(mesh.faces_.size(), 0);
  for (const auto& be : boundary) {
    const auto it = face_of_edge.find(edge_key(be.vertices[0], be.vertices[1]));
    const std::string name = edge_name(be.vertices[0], be.vertices[1]);
    if (it == face_of_edge.end()) throw MeshError("boundary marker on unknown edge " + name);
    Face& f = mesh.faces_[it->second];
    if (f.is_interior()) {
      if (be.tag.is_floating()) throw MeshError("Floating tag on interior face " + name);
      throw MeshError("boundary tag " + to_string(be.tag) + " on interior face " + name);
    }
    if (be.tag.is_interior()) throw MeshError("Interior tag given for boundary edge " + name);
    if (marked[it->second]) throw MeshError("boundary edge " + name + " tagged twice");
    if (be.tag.is_floating() && be.tag.id < 1) {
      throw MeshError("conductor index must be >= 1 on edge " + name);
    }
    marked[it->second] = 1;
    f.tag = be.tag;
  }

  std::set<int> conductors;
  for (std::size_t i = 0; i < mesh.faces_.size(); ++i) {
    const Face& f = mesh.faces_[i];
    if (f.is_interior()) {
      mesh.interior_faces_.push_back(static_cast<int>(i));
    } else if (!marked[i]) {
      throw MeshError("untagged boundary edge " + edge_name(f.vertices[0], f.vertices[1]));
    } else if (f.tag.is_floating()) {
      conductors.insert(f.tag.id);
    }
  }
  const int m = static_cast<int>(conductors.size());
  if (m > 0 && (*conductors.begin() != 1 || *conductors.rbegin() != m)) {
    throw MeshError("conductor indices must form the contiguous range 1.." + std::to_string(m));
  }
  mesh.conductor_count_ = m;
  return mesh;
}

std::vector<BoundaryEdge> boundary_edges(const Mesh2D& mesh) {
  std::vector<BoundaryEdge> out;
  for (const auto& f : mesh.faces()) {
    if (!f.is_interior()) out.push_back({f.vertices, f.tag});
  }
  return out;
}

}  // namespace hdg
