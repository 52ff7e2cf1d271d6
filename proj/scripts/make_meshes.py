#!/usr/bin/env python3
"""Regenerate the mesh files under data/meshes/.

Mesh text format:
    dim nv ne ns
    nv lines of vertex coordinates
    ne lines of element vertex indices (0-based)
    ns lines of side vertex indices followed by a boundary tag
       (0 = impervious, 1 = Dirichlet inflow)
Sides omitted from the file default to tag 0.
"""

import os

OUT = os.path.join(os.path.dirname(__file__), "..", "data", "meshes")


def write_mesh(name, dim, vertices, elements, tagged_sides):
    path = os.path.join(OUT, name)
    with open(path, "w") as f:
        f.write(f"{dim} {len(vertices)} {len(elements)} {len(tagged_sides)}\n")
        for v in vertices:
            f.write(" ".join(repr(float(c)) for c in v) + "\n")
        for e in elements:
            f.write(" ".join(str(i) for i in e) + "\n")
        for side, tag in tagged_sides:
            f.write(" ".join(str(i) for i in side) + f" {tag}\n")
    print("wrote", path)


def unit_triangle():
    # Single right triangle, every side tagged Dirichlet.
    verts = [(0, 0), (1, 0), (0, 1)]
    elems = [(0, 1, 2)]
    sides = [((0, 1), 1), ((0, 2), 1), ((1, 2), 1)]
    write_mesh("unit_triangle.msh", 2, verts, elems, sides)


def obtuse_triangle():
    # One obtuse triangle (angle ~136 deg at the apex); all sides impervious.
    verts = [(0, 0), (1, 0), (0.5, 0.2)]
    elems = [(0, 1, 2)]
    write_mesh("obtuse_triangle.msh", 2, verts, elems, [])


def unit_square_2():
    # Two triangles on the unit square, all boundary impervious (tags omitted).
    verts = [(0, 0), (1, 0), (1, 1), (0, 1)]
    elems = [(0, 1, 2), (0, 2, 3)]
    write_mesh("unit_square_2.msh", 2, verts, elems, [])


def structured_square(n, name):
    # n x n cells, each split into two right triangles (uniform diagonal
    # direction, so every triangle is non-obtuse). Left edge (x = 0) is
    # tagged Dirichlet, the rest stays impervious.
    verts = []
    for j in range(n + 1):
        for i in range(n + 1):
            verts.append((i / n, j / n))
    idx = lambda i, j: j * (n + 1) + i
    elems = []
    for j in range(n):
        for i in range(n):
            v00, v10 = idx(i, j), idx(i + 1, j)
            v01, v11 = idx(i, j + 1), idx(i + 1, j + 1)
            elems.append((v00, v10, v11))
            elems.append((v00, v11, v01))
    sides = []
    for j in range(n):
        sides.append(((idx(0, j), idx(0, j + 1)), 1))
    write_mesh(name, 2, verts, elems, sides)


def reference_tet():
    # Single reference tetrahedron, all faces impervious.
    verts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    elems = [(0, 1, 2, 3)]
    write_mesh("reference_tet.msh", 3, verts, elems, [])


if __name__ == "__main__":
    os.makedirs(OUT, exist_ok=True)
    unit_triangle()
    obtuse_triangle()
    unit_square_2()
    structured_square(8, "unit_square_8.msh")
    structured_square(16, "unit_square_16.msh")
    reference_tet()
