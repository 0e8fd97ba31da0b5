#include <fstream>
#include <iomanip>
#include <sstream>

#include "hdg/mesh.hpp"

namespace hdg {

void write_mesh(const Mesh2D& mesh, std::ostream& out) {
  out << "hdgmesh 1\n";
  out << "vertices " << mesh.num_vertices() << "\n";
  out << std::setprecision(17);
  for (const auto& v : mesh.vertices()) out << v.x << " " << v.y << "\n";
  out << "elements " << mesh.num_elements() << "\n";
  for (const auto& e : mesh.elements()) out << e[0] << " " << e[1] << " " << e[2] << "\n";
  const auto boundary = boundary_edges(mesh);
  out << "faces " << boundary.size() << "\n";
  for (const auto& b : boundary) {
    char tag = 'D';
    if (b.tag.kind == BoundaryTag::Kind::Neumann) tag = 'N';
    if (b.tag.kind == BoundaryTag::Kind::Floating) tag = 'C';
    out << b.vertices[0] << " " << b.vertices[1] << " " << tag << " " << b.tag.id << "\n";
  }
}

void save_mesh(const Mesh2D& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot open " + path.string() + " for writing");
  write_mesh(mesh, out);
  if (!out) throw MeshError("failed writing " + path.string());
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank line as a token stream; throws at end of input.
  std::istringstream next(const char* expecting) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(line);
    }
    throw MeshParseError(line_no_ + 1, std::string("unexpected end of file, expecting ") + expecting);
  }

  std::size_t line() const { return line_no_; }

  [[noreturn]] void fail(const std::string& what) const { throw MeshParseError(line_no_, what); }

  void expect_end(std::istringstream& ss) const {
    std::string extra;
    if (ss >> extra) fail("unexpected trailing token '" + extra + "'");
  }

  std::size_t section(const char* keyword) {
    auto ss = next(keyword);
    std::string word;
    long long count = -1;
    if (!(ss >> word) || word != keyword) fail(std::string("expected '") + keyword + " <count>'");
    if (!(ss >> count) || count < 0) fail(std::string("invalid ") + keyword + " count");
    expect_end(ss);
    return static_cast<std::size_t>(count);
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

Mesh2D read_mesh(std::istream& in) {
  LineReader reader(in);
  {
    auto ss = reader.next("header");
    std::string magic;
    int version = 0;
    if (!(ss >> magic >> version) || magic != "hdgmesh") reader.fail("expected header 'hdgmesh 1'");
    if (version != 1) reader.fail("unsupported format version " + std::to_string(version));
    reader.expect_end(ss);
  }

  const std::size_t nv = reader.section("vertices");
  std::vector<Point> vertices(nv);
  for (auto& v : vertices) {
    auto ss = reader.next("vertex");
    if (!(ss >> v.x >> v.y)) reader.fail("expected 'x y'");
    reader.expect_end(ss);
  }

  const std::size_t ne = reader.section("elements");
  std::vector<std::array<int, 3>> elements(ne);
  for (auto& e : elements) {
    auto ss = reader.next("element");
    if (!(ss >> e[0] >> e[1] >> e[2])) reader.fail("expected 'i0 i1 i2'");
    reader.expect_end(ss);
    for (int v : e) {
      if (v < 0 || static_cast<std::size_t>(v) >= nv) {
        reader.fail("vertex index " + std::to_string(v) + " out of range");
      }
    }
  }

  const std::size_t nf = reader.section("faces");
  std::vector<BoundaryEdge> boundary(nf);
  for (auto& b : boundary) {
    auto ss = reader.next("face");
    std::string tag;
    if (!(ss >> b.vertices[0] >> b.vertices[1] >> tag)) reader.fail("expected 'v0 v1 TAG [id]'");
    int id = 1;
    const bool has_id = static_cast<bool>(ss >> id);
    if (!has_id && !ss.eof()) reader.fail("invalid face id");
    reader.expect_end(ss);
    if (tag == "D") {
      b.tag = BoundaryTag::dirichlet(id);
    } else if (tag == "N") {
      b.tag = BoundaryTag::neumann(id);
    } else if (tag == "C") {
      if (!has_id) reader.fail("conductor face needs a conductor index");
      b.tag = BoundaryTag::floating(id);
    } else {
      reader.fail("unknown face tag '" + tag + "' (expected D, N or C)");
    }
  }

  return build_skeleton(std::move(vertices), std::move(elements), boundary);
}

Mesh2D load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open " + path.string());
  return read_mesh(in);
}

}  // namespace hdg
