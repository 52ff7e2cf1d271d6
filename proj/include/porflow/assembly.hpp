#pragma once

#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "porflow/dual_mesh.hpp"
#include "porflow/tensor.hpp"

namespace porflow {

struct AssemblyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Crouzeix-Raviart stiffness couplings, indexed by dual volumes (= sides).
///
/// Entries are stored in the Galerkin (inner-product) form
///   A[D][E] = sum_K (Lambda grad phi_E, grad phi_D)_{0,K},
/// whose rows sum to zero since the CR basis functions sum to one on every
/// element. The scheme consumes the transmissibilities M_{D,E} = -A[D][E]
/// for E != D. Off-diagonal entries receive a contribution from exactly one
/// element, recorded as provenance.
class StiffnessMatrix {
  public:
    int size() const { return static_cast<int>(diag_.size()); }

    double diagonal(int d) const { return diag_[d]; }

    /// Galerkin entry A[D][E]; zero when E is not adjacent to D.
    double galerkin(int d, int e) const {
        if (d == e) return diag_[d];
        const int slot = slot_of(d, e);
        return slot < 0 ? 0.0 : off_[d][slot];
    }

    /// Scheme coupling M_{D,E} = -A[D][E] (off-diagonal only).
    double transmissibility(int d, int e) const { return -galerkin(d, e); }
    double transmissibility_slot(int d, int slot) const { return -off_[d][slot]; }

    const std::vector<int>& adjacency(int d) const { return adj_[d]; }
    int provenance(int d, int slot) const { return prov_[d][slot]; }

    /// u^T A u = sum_K (Lambda grad u_h, grad u_h)_{0,K}.
    double quadratic_form(std::span<const double> u) const {
        double q = 0.0;
        for (int d = 0; d < size(); ++d) {
            double row = diag_[d] * u[d];
            for (std::size_t j = 0; j < adj_[d].size(); ++j) row += off_[d][j] * u[adj_[d][j]];
            q += u[d] * row;
        }
        return q;
    }

    /// Largest row sum relative to the diagonal scale; zero for an exact
    /// constant-kernel matrix.
    double row_kernel_residual() const {
        double worst = 0.0, scale = 0.0;
        for (int d = 0; d < size(); ++d) {
            double row = diag_[d];
            for (double v : off_[d]) row += v;
            worst = std::max(worst, std::abs(row));
            scale = std::max(scale, std::abs(diag_[d]));
        }
        return scale > 0.0 ? worst / scale : worst;
    }

    /// Smallest eigenvalue of Lambda over the elements (the coercivity
    /// constant of the assembled form).
    double c_lambda() const { return c_lambda_; }

    friend StiffnessMatrix assemble(const PrimalMesh&, const DualMesh&, const TensorField&);

  private:
    int slot_of(int d, int e) const {
        const auto& nb = adj_[d];
        auto it = std::lower_bound(nb.begin(), nb.end(), e);
        return (it != nb.end() && *it == e) ? static_cast<int>(it - nb.begin()) : -1;
    }

    std::vector<double> diag_;
    std::vector<std::vector<int>> adj_;
    std::vector<std::vector<double>> off_;
    std::vector<std::vector<int>> prov_;
    double c_lambda_ = 0.0;
};

namespace detail {

/// Gradients of the CR basis functions on one element: phi_i = 1 - dim *
/// lambda_i with lambda_i the barycentric coordinate of the vertex opposite
/// side i, so grad phi_i = -dim * grad lambda_i. The barycentric gradients
/// come from inverting the affine vertex map.
inline std::array<Vec3, 4> cr_gradients(const PrimalMesh& mesh, int k) {
    const int dim = mesh.dim;
    Eigen::MatrixXd m(dim + 1, dim + 1);
    for (int i = 0; i <= dim; ++i) {
        const Vec3 v = mesh.vertices[mesh.elements[k][i]];
        for (int c = 0; c < dim; ++c) m(i, c) = v[c];
        m(i, dim) = 1.0;
    }
    const Eigen::MatrixXd inv = m.inverse();
    std::array<Vec3, 4> grads{};
    for (int i = 0; i <= dim; ++i) {
        Vec3 g;
        for (int c = 0; c < dim; ++c) g[c] = inv(c, i);  // grad lambda_i
        grads[i] = -static_cast<double>(dim) * g;
    }
    return grads;
}

}  // namespace detail

/// Assemble the CR stiffness couplings for a tensor field evaluated at the
/// element barycentres (piecewise-constant Lambda makes the element
/// integrals exact). Elements are visited in index order, so the result is
/// bit-reproducible in serial.
inline StiffnessMatrix assemble(const PrimalMesh& mesh, const DualMesh& dual,
                                const TensorField& lambda) {
    const int dim = mesh.dim;
    StiffnessMatrix A;
    A.diag_.assign(dual.size(), 0.0);
    A.adj_ = dual.neighbors;
    A.off_.resize(dual.size());
    A.prov_.resize(dual.size());
    for (std::size_t d = 0; d < dual.size(); ++d) {
        A.off_[d].assign(A.adj_[d].size(), 0.0);
        A.prov_[d].assign(A.adj_[d].size(), -1);
    }

    A.c_lambda_ = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < mesh.elements.size(); ++k) {
        const SymTensor t = lambda(mesh.element_barycentre(static_cast<int>(k)));
        const double lam_min = t.min_eigenvalue(dim);
        if (!(lam_min > 0.0))
            throw AssemblyError("permeability tensor not SPD on element " + std::to_string(k));
        A.c_lambda_ = std::min(A.c_lambda_, lam_min);

        const auto grads = detail::cr_gradients(mesh, static_cast<int>(k));
        const double vol = mesh.element_measure(static_cast<int>(k));
        for (int i = 0; i <= dim; ++i) {
            const int d = mesh.element_sides[k][i];
            const Vec3 tg = t.apply(grads[i]);
            A.diag_[d] += vol * dot(tg, grads[i]);
            for (int j = 0; j <= dim; ++j) {
                if (j == i) continue;
                const int e = mesh.element_sides[k][j];
                const int slot = A.slot_of(d, e);
                A.off_[d][slot] += vol * dot(tg, grads[j]);
                A.prov_[d][slot] = static_cast<int>(k);
            }
        }
    }

    if (A.row_kernel_residual() > 1e-12)
        throw AssemblyError("stiffness rows do not annihilate constants");
    return A;
}

/// Broken energy seminorm squared, ||u_h||^2_{X_h} = sum_K |grad u_h|^2_{0,K},
/// as the quadratic form of an identity-tensor assembly.
inline double broken_norm_sq(const StiffnessMatrix& identity_stiffness,
                             std::span<const double> u) {
    return identity_stiffness.quadratic_form(u);
}

struct CoercivityResult {
    double min_ratio = 0.0;
    int samples = 0;
    std::vector<double> worst_vector;  // argmin of the Rayleigh ratio
};

/// Sample the Rayleigh ratio u^T A_Lambda u / ||u||^2_{X_h} over random
/// nonconstant vectors; the minimum should stay above c_Lambda.
inline CoercivityResult coercivity_check(const StiffnessMatrix& a_lambda,
                                         const StiffnessMatrix& a_identity, int samples,
                                         std::uint64_t seed = 20240811ULL) {
    if (a_lambda.size() != a_identity.size())
        throw AssemblyError("coercivity check: matrix sizes differ");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    CoercivityResult result;
    result.min_ratio = std::numeric_limits<double>::infinity();
    std::vector<double> u(a_lambda.size());
    for (int it = 0; it < samples; ++it) {
        double mean = 0.0;
        for (double& v : u) mean += (v = unif(rng));
        mean /= u.size();
        for (double& v : u) v -= mean;
        const double denom = a_identity.quadratic_form(u);
        if (denom < 1e-20) continue;
        const double ratio = a_lambda.quadratic_form(u) / denom;
        ++result.samples;
        if (ratio < result.min_ratio) {
            result.min_ratio = ratio;
            result.worst_vector = u;
        }
    }
    return result;
}

struct TransmissibilitySignReport {
    struct Entry {
        int d = -1, e = -1;
        double value = 0.0;  // the negative transmissibility M_{D,E}
    };
    std::vector<Entry> negative_pairs;  // unordered pairs, d < e
    std::size_t total_pairs = 0;
    double nonnegative_fraction = 1.0;
};

/// Report the sign pattern of the couplings. Nonnegativity holds for scalar
/// tensors on meshes without obtuse angles and underpins the discrete
/// maximum principle; this only reports, it never fails.
inline TransmissibilitySignReport transmissibility_signs(const StiffnessMatrix& a,
                                                         double tol = 1e-14) {
    TransmissibilitySignReport rep;
    for (int d = 0; d < a.size(); ++d) {
        const auto& nb = a.adjacency(d);
        for (std::size_t j = 0; j < nb.size(); ++j) {
            if (nb[j] < d) continue;  // count each unordered pair once
            ++rep.total_pairs;
            const double m = a.transmissibility_slot(d, static_cast<int>(j));
            if (m < -tol) rep.negative_pairs.push_back({d, nb[j], m});
        }
    }
    rep.nonnegative_fraction =
        rep.total_pairs == 0
            ? 1.0
            : 1.0 - static_cast<double>(rep.negative_pairs.size()) / rep.total_pairs;
    return rep;
}

}  // namespace porflow
