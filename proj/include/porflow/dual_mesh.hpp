#pragma once

#include <vector>

#include "porflow/mesh.hpp"

namespace porflow {

/// Dual (side-centred) mesh. There is one dual volume per side of the primal
/// mesh, built by joining the barycentres of the side's incident elements
/// through the side's vertices; boundary dual volumes are closed by the side
/// itself. Unknowns live at the side barycentres.
class DualMesh {
  public:
    struct Volume {
        double measure = 0.0;
        Vec3 barycentre;  // barycentre of the owning side
        Vec3 centroid;    // volume centroid of the dual cell
        int side = -1;
        bool boundary = false;
    };

    /// Geometry of the interface between two neighboring dual volumes: the
    /// (unique) primal element containing it, its measure and the distance
    /// between the two side barycentres.
    struct FaceGeom {
        int element = -1;
        double measure = 0.0;
        double distance = 0.0;
    };

    std::vector<Volume> volumes;              // indexed like mesh.sides
    std::vector<std::vector<int>> neighbors;  // sorted dual indices per volume
    std::vector<std::vector<FaceGeom>> faces; // aligned with neighbors

    std::size_t size() const { return volumes.size(); }

    double total_measure() const {
        double v = 0.0;
        for (const auto& d : volumes) v += d.measure;
        return v;
    }

    int neighbor_slot(int d, int e) const {
        const auto& nb = neighbors[d];
        auto it = std::lower_bound(nb.begin(), nb.end(), e);
        return (it != nb.end() && *it == e) ? static_cast<int>(it - nb.begin()) : -1;
    }
};

inline DualMesh build_dual(const PrimalMesh& mesh) {
    const int dim = mesh.dim;
    const int ns = static_cast<int>(mesh.sides.size());
    DualMesh dual;
    dual.volumes.resize(ns);
    dual.neighbors.resize(ns);
    dual.faces.resize(ns);

    std::vector<Vec3> centroid_acc(ns);
    for (int d = 0; d < ns; ++d) {
        dual.volumes[d].side = d;
        dual.volumes[d].barycentre = mesh.side_barycentre(d);
        dual.volumes[d].boundary = mesh.sides[d].boundary();
    }

    // A side contributes the simplex (side vertices, element barycentre) to
    // its dual volume; its measure is exactly |K|/(dim+1).
    for (std::size_t k = 0; k < mesh.elements.size(); ++k) {
        const double piece = mesh.element_measure(static_cast<int>(k)) / (dim + 1);
        const Vec3 g = mesh.element_barycentre(static_cast<int>(k));
        for (int i = 0; i <= dim; ++i) {
            const int d = mesh.element_sides[k][i];
            std::array<Vec3, 4> pts;
            for (int c = 0; c < dim; ++c) pts[c] = mesh.vertices[mesh.sides[d].vertices[c]];
            pts[dim] = g;
            const Vec3 pc = barycentre(std::span<const Vec3>(pts.data(), dim + 1));
            dual.volumes[d].measure += piece;
            centroid_acc[d] = centroid_acc[d] + piece * pc;
        }
    }
    for (int d = 0; d < ns; ++d)
        dual.volumes[d].centroid = (1.0 / dual.volumes[d].measure) * centroid_acc[d];

    // Neighbor pairs: two sides of the same element. The interface inside
    // that element is the simplex spanned by their shared vertices and the
    // element barycentre (a segment in 2D, a triangle in 3D).
    std::vector<std::vector<std::pair<int, DualMesh::FaceGeom>>> adj(ns);
    for (std::size_t k = 0; k < mesh.elements.size(); ++k) {
        const Vec3 g = mesh.element_barycentre(static_cast<int>(k));
        for (int i = 0; i <= dim; ++i) {
            for (int j = i + 1; j <= dim; ++j) {
                const int d = mesh.element_sides[k][i];
                const int e = mesh.element_sides[k][j];
                std::array<Vec3, 3> pts;
                int n = 0;
                for (int c = 0; c < dim; ++c) {
                    int v = mesh.sides[d].vertices[c];
                    for (int c2 = 0; c2 < dim; ++c2)
                        if (mesh.sides[e].vertices[c2] == v) pts[n++] = mesh.vertices[v];
                }
                pts[n++] = g;
                DualMesh::FaceGeom geom;
                geom.element = static_cast<int>(k);
                geom.measure = simplex_measure(std::span<const Vec3>(pts.data(), n));
                geom.distance = distance(dual.volumes[d].barycentre, dual.volumes[e].barycentre);
                adj[d].emplace_back(e, geom);
                adj[e].emplace_back(d, geom);
            }
        }
    }
    for (int d = 0; d < ns; ++d) {
        std::sort(adj[d].begin(), adj[d].end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        dual.neighbors[d].reserve(adj[d].size());
        dual.faces[d].reserve(adj[d].size());
        for (const auto& [e, geom] : adj[d]) {
            dual.neighbors[d].push_back(e);
            dual.faces[d].push_back(geom);
        }
    }
    return dual;
}

}  // namespace porflow
