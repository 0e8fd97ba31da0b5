#pragma once

#include <iosfwd>
#include <span>

#include "hdg/recovery.hpp"

namespace hdg {

/// Legacy ASCII VTK unstructured grid. Every element writes its own N_p nodes
/// (no sharing, so the discontinuous field is kept) and is split into p^2
/// linear triangles of its node lattice. Point data: "phi" and vector "E".
void write_vtk(const Discretization& disc, const Solution& sol, std::ostream& out);

/// CSV with header "s,x,y,phi,Ex,Ey,inside"; 17 significant digits.
void write_line_csv(std::span<const LineSample> samples, std::ostream& out);

}  // namespace hdg
