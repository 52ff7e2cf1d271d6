#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "porflow/geometry.hpp"

namespace porflow {

struct MeshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Boundary classification of a side: impervious (no-flux) or Dirichlet
/// inflow where both phase pressures are pinned to zero.
enum class BoundaryTag : int { impervious = 0, dirichlet = 1 };

struct Side {
    std::array<int, 3> vertices{-1, -1, -1};  // sorted ascending; dim entries used
    std::array<int, 2> elements{-1, -1};      // incident elements, -1 if none
    BoundaryTag tag = BoundaryTag::impervious;

    bool boundary() const { return elements[1] < 0; }
};

/// Simplicial triangulation (triangles in 2D, tetrahedra in 3D) with its
/// sides enumerated in lexicographic order of sorted vertex tuples, so the
/// numbering is reproducible across runs and platforms.
class PrimalMesh {
  public:
    int dim = 2;
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 4>> elements;       // dim+1 entries used
    std::vector<Side> sides;
    std::vector<std::array<int, 4>> element_sides;  // side opposite local vertex i

    int vertices_per_element() const { return dim + 1; }

    std::array<Vec3, 4> element_points(int k) const {
        std::array<Vec3, 4> p;
        for (int i = 0; i <= dim; ++i) p[i] = vertices[elements[k][i]];
        return p;
    }

    double element_measure(int k) const {
        auto p = element_points(k);
        return simplex_measure(std::span<const Vec3>(p.data(), dim + 1));
    }

    Vec3 element_barycentre(int k) const {
        auto p = element_points(k);
        return barycentre(std::span<const Vec3>(p.data(), dim + 1));
    }

    double element_diameter(int k) const {
        auto p = element_points(k);
        return diameter(std::span<const Vec3>(p.data(), dim + 1));
    }

    std::array<Vec3, 3> side_points(int s) const {
        std::array<Vec3, 3> p;
        for (int i = 0; i < dim; ++i) p[i] = vertices[sides[s].vertices[i]];
        return p;
    }

    double side_measure(int s) const {
        auto p = side_points(s);
        return simplex_measure(std::span<const Vec3>(p.data(), dim));
    }

    /// Barycentre of side s; the point carrying the side's unknown.
    Vec3 side_barycentre(int s) const {
        auto p = side_points(s);
        return barycentre(std::span<const Vec3>(p.data(), dim));
    }

    double total_volume() const {
        double v = 0.0;
        for (std::size_t k = 0; k < elements.size(); ++k) v += element_measure(static_cast<int>(k));
        return v;
    }
};

struct RegularityReport {
    double kappa = 0.0;  // min over elements of |K| / diam(K)^dim
    double h = 0.0;      // max element diameter
    int worst_element = -1;
};

namespace detail {

inline std::array<int, 3> sorted_side_key(const std::array<int, 4>& elem, int dim, int opposite) {
    std::array<int, 3> key{-1, -1, -1};
    int n = 0;
    for (int i = 0; i <= dim; ++i)
        if (i != opposite) key[n++] = elem[i];
    std::sort(key.begin(), key.begin() + dim);
    return key;
}

}  // namespace detail

/// Assemble a validated mesh from raw vertex/element/tag data. Sides are
/// enumerated from the element connectivity; `tagged_sides` entries override
/// the default impervious tag and must match an enumerated side.
inline PrimalMesh build_primal(int dim, std::vector<Vec3> vertices,
                               std::vector<std::array<int, 4>> elements,
                               const std::vector<std::pair<std::array<int, 3>, BoundaryTag>>&
                                   tagged_sides = {}) {
    if (dim != 2 && dim != 3) throw MeshError("mesh dimension must be 2 or 3");
    PrimalMesh mesh;
    mesh.dim = dim;
    mesh.vertices = std::move(vertices);
    mesh.elements = std::move(elements);

    const int nv = static_cast<int>(mesh.vertices.size());
    for (std::size_t k = 0; k < mesh.elements.size(); ++k) {
        for (int i = 0; i <= dim; ++i) {
            int v = mesh.elements[k][i];
            if (v < 0 || v >= nv)
                throw MeshError("element " + std::to_string(k) + " references vertex " +
                                std::to_string(v) + " out of range");
        }
        double vol = mesh.element_measure(static_cast<int>(k));
        double diam = mesh.element_diameter(static_cast<int>(k));
        if (!(vol > 0.0) || vol < 1e-14 * std::pow(diam, dim))
            throw MeshError("degenerate element " + std::to_string(k) + " (measure " +
                            std::to_string(vol) + ")");
    }

    // Enumerate sides: lexicographic order on sorted vertex tuples.
    std::map<std::array<int, 3>, std::vector<std::pair<int, int>>> incident;  // key -> (elem, local)
    for (std::size_t k = 0; k < mesh.elements.size(); ++k) {
        for (int i = 0; i <= dim; ++i) {
            auto key = detail::sorted_side_key(mesh.elements[k], dim, i);
            auto& inc = incident[key];
            if (inc.size() == 2)
                throw MeshError("non-manifold side shared by more than 2 elements");
            inc.emplace_back(static_cast<int>(k), i);
        }
    }

    mesh.sides.reserve(incident.size());
    mesh.element_sides.assign(mesh.elements.size(), {-1, -1, -1, -1});
    std::map<std::array<int, 3>, int> side_index;
    for (const auto& [key, inc] : incident) {
        Side s;
        s.vertices = key;
        s.elements = {inc[0].first, inc.size() > 1 ? inc[1].first : -1};
        int id = static_cast<int>(mesh.sides.size());
        side_index[key] = id;
        for (const auto& [k, local] : inc) mesh.element_sides[k][local] = id;
        mesh.sides.push_back(s);
    }

    for (const auto& [key, tag] : tagged_sides) {
        std::array<int, 3> sorted = key;
        std::sort(sorted.begin(), sorted.begin() + dim);
        auto it = side_index.find(sorted);
        if (it == side_index.end()) throw MeshError("tagged side does not exist in the mesh");
        mesh.sides[it->second].tag = tag;
    }
    return mesh;
}

/// Parse the text mesh format: `dim nv ne ns` header, vertex lines, element
/// lines, then optional `v0 .. v_{dim-1} tag` side-tag lines. Blank lines and
/// `#` comments are skipped.
inline PrimalMesh parse_primal(std::istream& in) {
    auto next_line = [&in](std::string& line) {
        while (std::getline(in, line)) {
            auto pos = line.find('#');
            if (pos != std::string::npos) line.erase(pos);
            if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
        }
        return false;
    };

    std::string line;
    if (!next_line(line)) throw MeshError("empty mesh file");
    std::istringstream hdr(line);
    int dim = 0;
    long nv = 0, ne = 0, ns = 0;
    if (!(hdr >> dim >> nv >> ne >> ns)) throw MeshError("malformed mesh header");
    if (dim != 2 && dim != 3) throw MeshError("mesh dimension must be 2 or 3");
    if (nv < dim + 1 || ne < 1 || ns < 0) throw MeshError("implausible mesh header counts");

    std::vector<Vec3> vertices(nv);
    for (long i = 0; i < nv; ++i) {
        if (!next_line(line)) throw MeshError("unexpected end of file in vertex block");
        std::istringstream ls(line);
        for (int c = 0; c < dim; ++c)
            if (!(ls >> vertices[i][c])) throw MeshError("malformed vertex line " + std::to_string(i));
    }

    std::vector<std::array<int, 4>> elements(ne, {-1, -1, -1, -1});
    for (long k = 0; k < ne; ++k) {
        if (!next_line(line)) throw MeshError("unexpected end of file in element block");
        std::istringstream ls(line);
        for (int c = 0; c <= dim; ++c)
            if (!(ls >> elements[k][c])) throw MeshError("malformed element line " + std::to_string(k));
    }

    std::vector<std::pair<std::array<int, 3>, BoundaryTag>> tags;
    for (long s = 0; s < ns; ++s) {
        if (!next_line(line)) throw MeshError("unexpected end of file in side block");
        std::istringstream ls(line);
        std::array<int, 3> v{-1, -1, -1};
        int tag = 0;
        for (int c = 0; c < dim; ++c)
            if (!(ls >> v[c])) throw MeshError("malformed side line " + std::to_string(s));
        if (!(ls >> tag) || (tag != 0 && tag != 1))
            throw MeshError("malformed side tag on line " + std::to_string(s));
        tags.emplace_back(v, static_cast<BoundaryTag>(tag));
    }
    return build_primal(dim, std::move(vertices), std::move(elements), tags);
}

inline PrimalMesh load_primal(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open mesh file: " + path);
    return parse_primal(in);
}

inline RegularityReport regularity(const PrimalMesh& mesh) {
    RegularityReport rep;
    rep.kappa = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < mesh.elements.size(); ++k) {
        double diam = mesh.element_diameter(static_cast<int>(k));
        double ratio = mesh.element_measure(static_cast<int>(k)) / std::pow(diam, mesh.dim);
        rep.h = std::max(rep.h, diam);
        if (ratio < rep.kappa) {
            rep.kappa = ratio;
            rep.worst_element = static_cast<int>(k);
        }
    }
    return rep;
}

/// Uniform (red) refinement of a triangular mesh: each triangle splits into
/// four self-similar children through its edge midpoints. Boundary tags are
/// inherited by the two halves of each refined side.
inline PrimalMesh refine_red(const PrimalMesh& mesh) {
    if (mesh.dim != 2) throw MeshError("red refinement implemented for 2D meshes only");

    std::vector<Vec3> verts = mesh.vertices;
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
        auto key = std::minmax(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        int id = static_cast<int>(verts.size());
        verts.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
        midpoint[key] = id;
        return id;
    };

    std::vector<std::array<int, 4>> elems;
    elems.reserve(4 * mesh.elements.size());
    for (const auto& e : mesh.elements) {
        int a = e[0], b = e[1], c = e[2];
        int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
        elems.push_back({a, ab, ca, -1});
        elems.push_back({ab, b, bc, -1});
        elems.push_back({ca, bc, c, -1});
        elems.push_back({ab, bc, ca, -1});
    }

    std::vector<std::pair<std::array<int, 3>, BoundaryTag>> tags;
    for (const Side& s : mesh.sides) {
        if (s.tag == BoundaryTag::impervious) continue;
        int a = s.vertices[0], b = s.vertices[1];
        int m = mid(a, b);
        tags.push_back({{a, m, -1}, s.tag});
        tags.push_back({{m, b, -1}, s.tag});
    }
    return build_primal(2, std::move(verts), std::move(elems), tags);
}

}  // namespace porflow
