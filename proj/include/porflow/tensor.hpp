#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <functional>

#include "porflow/geometry.hpp"

namespace porflow {

/// Symmetric permeability/diffusion tensor. Stored as a full 3x3; 2D meshes
/// only use the upper-left block.
struct SymTensor {
    double a[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

    static SymTensor identity(double s = 1.0) {
        SymTensor t;
        t.a[0][0] = t.a[1][1] = t.a[2][2] = s;
        return t;
    }

    static SymTensor diag(double xx, double yy, double zz = 1.0) {
        SymTensor t;
        t.a[0][0] = xx;
        t.a[1][1] = yy;
        t.a[2][2] = zz;
        return t;
    }

    static SymTensor full2d(double xx, double xy, double yy) {
        SymTensor t;
        t.a[0][0] = xx;
        t.a[0][1] = t.a[1][0] = xy;
        t.a[1][1] = yy;
        t.a[2][2] = 1.0;
        return t;
    }

    Vec3 apply(const Vec3& v) const {
        return {a[0][0] * v.x + a[0][1] * v.y + a[0][2] * v.z,
                a[1][0] * v.x + a[1][1] * v.y + a[1][2] * v.z,
                a[2][0] * v.x + a[2][1] * v.y + a[2][2] * v.z};
    }

    double min_eigenvalue(int dim) const {
        Eigen::MatrixXd m(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) m(i, j) = a[i][j];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }
};

/// Tensor field, evaluated at element barycentres during assembly.
using TensorField = std::function<SymTensor(const Vec3&)>;

inline TensorField constant_tensor(SymTensor t) {
    return [t](const Vec3&) { return t; };
}

}  // namespace porflow
