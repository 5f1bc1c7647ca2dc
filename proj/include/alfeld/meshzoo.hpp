// Copyright (c) 2026 the alfeld developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "alfeld/mesh.hpp"

namespace alfeld {

/// Built-in meshes:
///   tri1       unit triangle, one cell
///   square2    unit square as two triangles (shared diagonal)
///   square<N>  N x N structured grid of the unit square, two triangles each
///   tet1       reference tetrahedron
///   tet2       two tetrahedra sharing a facet
///   cube6      unit cube as six tetrahedra (Kuhn triangulation)
///   cube<N>    N^3 Kuhn cubes (e.g. cube2)
///   simplex<d> reference d-simplex, one cell (any d >= 1)
MacroMesh builtin_mesh(const std::string& name);

MacroMesh unit_triangle();
MacroMesh unit_square_two_triangles();
MacroMesh square_grid(int n);
MacroMesh reference_tet();
MacroMesh two_tets();
MacroMesh kuhn_cube(int n);
MacroMesh reference_simplex_mesh(int d);

}  // namespace alfeld
