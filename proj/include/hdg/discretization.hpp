#pragma once

#include <memory>

#include "hdg/assembly.hpp"
#include "hdg/basis.hpp"
#include "hdg/local_ops.hpp"
#include "hdg/mesh.hpp"

namespace hdg {

/// Mesh, element and numbering for one order, plus the problem data.
struct Discretization {
  Discretization(std::shared_ptr<const Mesh2D> mesh_in, int order, ProblemData data_in)
      : mesh(std::move(mesh_in)), ref(order), dofs(*mesh, ref), data(std::move(data_in)) {}

  std::shared_ptr<const Mesh2D> mesh;
  ReferenceElement ref;
  TraceDofMap dofs;
  ProblemData data;
};

}  // namespace hdg
