#include <algorithm>
#include <cmath>
#include <numbers>

#include "hdg/mesh.hpp"

namespace hdg {

Mesh2D generate_annulus_with_fpc(double r0, double r2, double r3, double r1,
                                 const AnnulusResolution& res) {
  if (!(0.0 < r0 && r0 < r2 && r2 < r3 && r3 < r1)) {
    throw MeshError("annulus radii must satisfy 0 < r0 < r2 < r3 < r1");
  }
  if (res.n_azimuthal < 8) throw MeshError("n_azimuthal must be >= 8");
  if (res.n_radial_inner < 1 || res.n_radial_outer < 1) {
    throw MeshError("each annulus needs at least one radial layer");
  }

  const int na = res.n_azimuthal;
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary;

  // Rings from r_in to r_out, log-uniform; returns index of the first vertex.
  auto add_annulus = [&](double r_in, double r_out, int layers, BoundaryTag inner_tag,
                         BoundaryTag outer_tag) {
    const int base = static_cast<int>(vertices.size());
    for (int i = 0; i <= layers; ++i) {
      const double r = (i == layers) ? r_out : r_in * std::pow(r_out / r_in, double(i) / layers);
      for (int j = 0; j < na; ++j) {
        const double t = 2.0 * std::numbers::pi * j / na;
        vertices.push_back({r * std::cos(t), r * std::sin(t)});
      }
    }
    auto id = [&](int i, int j) { return base + i * na + (j % na); };
    for (int i = 0; i < layers; ++i) {
      for (int j = 0; j < na; ++j) {
        const int a = id(i, j), b = id(i, j + 1), c = id(i + 1, j + 1), d = id(i + 1, j);
        triangles.push_back({a, d, c});
        triangles.push_back({a, c, b});
      }
    }
    for (int j = 0; j < na; ++j) {
      boundary.push_back({{id(0, j), id(0, j + 1)}, inner_tag});
      boundary.push_back({{id(layers, j), id(layers, j + 1)}, outer_tag});
    }
  };

  add_annulus(r0, r2, res.n_radial_inner, BoundaryTag::dirichlet(1), BoundaryTag::floating(1));
  add_annulus(r3, r1, res.n_radial_outer, BoundaryTag::floating(1), BoundaryTag::dirichlet(2));
  return build_skeleton(std::move(vertices), std::move(triangles), boundary);
}

namespace {

// Uniform lines plus the plate coordinates; uniform lines too close to a
// plate line are dropped to avoid slivers.
std::vector<double> grid_lines(double length, int n, const std::vector<double>& forced) {
  const double h = length / n;
  std::vector<double> lines = forced;
  for (int i = 0; i <= n; ++i) {
    const double x = (i == n) ? length : i * h;
    const bool near_forced = std::any_of(forced.begin(), forced.end(), [&](double f) {
      return std::abs(f - x) < 0.25 * h;
    });
    if (!near_forced || i == 0 || i == n) lines.push_back(x);
  }
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end(),
                          [&](double a, double b) { return std::abs(a - b) < 1e-12 * length; }),
              lines.end());
  return lines;
}

}  // namespace

Mesh2D generate_rect_with_fpc_plates(double width, double height, int nx, int ny,
                                     const std::vector<PlateSpec>& plates,
                                     const RectSides& sides) {
  if (!(width > 0.0 && height > 0.0)) throw MeshError("rectangle size must be positive");
  if (nx < 1 || ny < 1) throw MeshError("grid needs at least one cell per direction");
  for (const auto& t : {sides.left, sides.right, sides.bottom, sides.top}) {
    if (t.is_interior() || t.is_floating()) {
      throw MeshError("outer sides must be Dirichlet or Neumann, got " + to_string(t));
    }
  }

  std::vector<double> fx, fy;
  for (std::size_t p = 0; p < plates.size(); ++p) {
    const auto& pl = plates[p];
    if (!(pl.x0 < pl.x1 && pl.y0 < pl.y1)) {
      throw MeshError("plate " + std::to_string(p + 1) + " has non-positive extent");
    }
    if (!(pl.x0 > 0.0 && pl.x1 < width && pl.y0 > 0.0 && pl.y1 < height)) {
      throw MeshError("plate " + std::to_string(p + 1) + " touches or crosses the outer boundary");
    }
    for (std::size_t q = 0; q < p; ++q) {
      const auto& o = plates[q];
      if (pl.x0 <= o.x1 && o.x0 <= pl.x1 && pl.y0 <= o.y1 && o.y0 <= pl.y1) {
        throw MeshError("plates " + std::to_string(q + 1) + " and " + std::to_string(p + 1) +
                        " overlap or touch");
      }
    }
    fx.insert(fx.end(), {pl.x0, pl.x1});
    fy.insert(fy.end(), {pl.y0, pl.y1});
  }

  const auto xs = grid_lines(width, nx, fx);
  const auto ys = grid_lines(height, ny, fy);
  const int cx = static_cast<int>(xs.size()) - 1;
  const int cy = static_cast<int>(ys.size()) - 1;

  // owner[i][j]: 0 if meshed, else 1-based plate index covering cell (i, j).
  std::vector<int> owner(static_cast<std::size_t>(cx) * cy, 0);
  auto cell = [&](int i, int j) -> int& { return owner[static_cast<std::size_t>(j) * cx + i]; };
  for (int j = 0; j < cy; ++j) {
    for (int i = 0; i < cx; ++i) {
      const double xm = 0.5 * (xs[i] + xs[i + 1]);
      const double ym = 0.5 * (ys[j] + ys[j + 1]);
      for (std::size_t p = 0; p < plates.size(); ++p) {
        const auto& pl = plates[p];
        if (xm > pl.x0 && xm < pl.x1 && ym > pl.y0 && ym < pl.y1) cell(i, j) = int(p) + 1;
      }
    }
  }

  std::vector<int> vid(static_cast<std::size_t>(cx + 1) * (cy + 1), -1);
  std::vector<Point> vertices;
  auto vertex = [&](int i, int j) {
    int& v = vid[static_cast<std::size_t>(j) * (cx + 1) + i];
    if (v < 0) {
      v = static_cast<int>(vertices.size());
      vertices.push_back({xs[i], ys[j]});
    }
    return v;
  };

  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary;
  for (int j = 0; j < cy; ++j) {
    for (int i = 0; i < cx; ++i) {
      if (cell(i, j) != 0) continue;
      const int a = vertex(i, j), b = vertex(i + 1, j), c = vertex(i + 1, j + 1),
                d = vertex(i, j + 1);
      triangles.push_back({a, b, c});
      triangles.push_back({a, c, d});

      if (j == 0) boundary.push_back({{a, b}, sides.bottom});
      if (j == cy - 1) boundary.push_back({{d, c}, sides.top});
      if (i == 0) boundary.push_back({{a, d}, sides.left});
      if (i == cx - 1) boundary.push_back({{b, c}, sides.right});
      if (j > 0 && cell(i, j - 1) != 0) {
        boundary.push_back({{a, b}, BoundaryTag::floating(cell(i, j - 1))});
      }
      if (j < cy - 1 && cell(i, j + 1) != 0) {
        boundary.push_back({{d, c}, BoundaryTag::floating(cell(i, j + 1))});
      }
      if (i > 0 && cell(i - 1, j) != 0) {
        boundary.push_back({{a, d}, BoundaryTag::floating(cell(i - 1, j))});
      }
      if (i < cx - 1 && cell(i + 1, j) != 0) {
        boundary.push_back({{b, c}, BoundaryTag::floating(cell(i + 1, j))});
      }
    }
  }
  return build_skeleton(std::move(vertices), std::move(triangles), boundary);
}

Mesh2D generate_unit_square(int n) { return generate_rect_with_fpc_plates(1.0, 1.0, n, n, {}); }

}  // namespace hdg
