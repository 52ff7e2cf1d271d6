#pragma once

#include <vector>

#include "porflow/fluid_model.hpp"

namespace porflow {

/// Tabulated functions of the global-pressure formulation.
///
/// With M = M_l + M_g the total mobility and p_c' the capillary slope, the
/// artificial pressures and the capillary potential are
///
///   pbar(s)   =            int_0^s (M_g / M) p_c'(z) dz,
///   ptilde(s) = -p_c(0) -  int_0^s (M_l / M) p_c'(z) dz,
///   gamma(s)  = -(M_l M_g / M) p_c'(s) >= 0,
///   B(s)      =            int_0^s gamma(z) dz,
///
/// so that pbar - ptilde = p_c identically and the global pressure can be
/// evaluated from either phase: p = p_l + pbar(s_l) = p_g + ptilde(s_l).
/// The gauge is fixed by pbar(0) = 0. Tables are built by per-interval
/// Simpson quadrature on a uniform saturation grid; point evaluations add a
/// local Simpson correction from the nearest grid node.
class DerivedFunctions {
  public:
    explicit DerivedFunctions(const FluidModel& model, int grid_intervals = 4096)
        : model_(&model), n_(grid_intervals) {
        if (n_ < 16) throw ModelError("derived-function table needs at least 16 intervals");
        const double h = 1.0 / n_;
        pbar_.assign(n_ + 1, 0.0);
        ptilde_.assign(n_ + 1, 0.0);
        big_b_.assign(n_ + 1, 0.0);
        gamma_.assign(n_ + 1, 0.0);
        ptilde_[0] = -model.capillary.pc(0.0);
        for (int i = 0; i <= n_; ++i) gamma_[i] = gamma(i * h);
        for (int i = 0; i < n_; ++i) {
            const double a = i * h, b = (i + 1) * h, m = a + 0.5 * h;
            pbar_[i + 1] = pbar_[i] + simpson_1(&DerivedFunctions::pbar_integrand, a, m, b);
            ptilde_[i + 1] = ptilde_[i] + simpson_1(&DerivedFunctions::ptilde_integrand, a, m, b);
            big_b_[i + 1] = big_b_[i] + simpson_1(&DerivedFunctions::gamma, a, m, b);
        }
        theta_ = estimate_theta();
    }

    int grid_intervals() const { return n_; }

    double gamma(double s) const {
        const double ml = model_->mobility_l(s);
        const double mg = model_->mobility_g(1.0 - s);
        return -ml * mg / (ml + mg) * model_->capillary.dpc(s);
    }

    double pbar(double s) const { return eval(pbar_, &DerivedFunctions::pbar_integrand, s); }
    double ptilde(double s) const { return eval(ptilde_, &DerivedFunctions::ptilde_integrand, s); }
    double big_b(double s) const { return eval(big_b_, &DerivedFunctions::gamma, s); }

    double dpbar(double s) const { return pbar_integrand(s); }
    double dptilde(double s) const { return ptilde_integrand(s); }

    double big_b_total() const { return big_b_[n_]; }

    /// Inverse of B on [0, B(1)], resolved by bisection against the same
    /// table-backed evaluation; inputs within 1e-9 * B(1) outside the range
    /// are clamped, anything further is a domain error.
    double big_b_inverse(double b) const {
        const double top = big_b_total();
        const double slack = 1e-9 * top;
        if (b < -slack || b > top + slack)
            throw std::domain_error("B^-1 argument outside [0, B(1)]");
        b = std::clamp(b, 0.0, top);
        double lo = 0.0, hi = 1.0;
        while (hi - lo > 1e-12) {
            const double m = 0.5 * (lo + hi);
            if (big_b(m) <= b)
                lo = m;
            else
                hi = m;
        }
        return 0.5 * (lo + hi);
    }

    /// Numerically estimated Hoelder exponent of B^-1 (diagnostic metadata
    /// only; nothing downstream consumes it).
    double theta() const { return theta_; }

  private:
    double pbar_integrand(double s) const {
        const double mg = model_->mobility_g(1.0 - s);
        return mg / model_->total_mobility(s) * model_->capillary.dpc(s);
    }

    double ptilde_integrand(double s) const {
        const double ml = model_->mobility_l(s);
        return -ml / model_->total_mobility(s) * model_->capillary.dpc(s);
    }

    using Integrand = double (DerivedFunctions::*)(double) const;

    double simpson_1(Integrand f, double a, double m, double b) const {
        return (b - a) / 6.0 * ((this->*f)(a) + 4.0 * (this->*f)(m) + (this->*f)(b));
    }

    double eval(const std::vector<double>& table, Integrand f, double s) const {
        if (s < -1e-12 || s > 1.0 + 1e-12)
            throw std::domain_error("saturation outside [0,1]");
        s = std::clamp(s, 0.0, 1.0);
        const double h = 1.0 / n_;
        int i = std::min(static_cast<int>(s * n_), n_ - 1);
        const double a = i * h;
        if (s == a) return table[i];
        return table[i] + simpson_1(f, a, 0.5 * (a + s), s);
    }

    double estimate_theta() const {
        // Slope of log(distance to endpoint in s) against log(distance in B)
        // near both endpoints; the smaller slope is the binding exponent.
        double theta = 1.0;
        const double h = 1.0 / n_;
        for (bool left : {true, false}) {
            const double ds1 = 4.0 * h, ds2 = 8.0 * h;
            const double s1 = left ? ds1 : 1.0 - ds1;
            const double s2 = left ? ds2 : 1.0 - ds2;
            const double b0 = left ? 0.0 : big_b_total();
            const double db1 = std::abs(big_b(s1) - b0), db2 = std::abs(big_b(s2) - b0);
            if (db1 <= 0.0 || db2 <= 0.0 || db1 == db2) continue;
            const double slope = (std::log(ds2) - std::log(ds1)) / (std::log(db2) - std::log(db1));
            theta = std::min(theta, std::abs(slope));
        }
        return std::clamp(theta, 1e-3, 1.0);
    }

    const FluidModel* model_;
    int n_;
    std::vector<double> pbar_, ptilde_, big_b_, gamma_;
    double theta_ = 1.0;
};

/// Global pressure evaluated through the liquid branch: p = p_l + pbar(s_l).
inline double global_pressure(const DerivedFunctions& derived, double p_l, double s_l) {
    return p_l + derived.pbar(s_l);
}

/// Global pressure evaluated through the gas branch: p = p_g + ptilde(s_l).
inline double global_pressure_from_gas(const DerivedFunctions& derived, double p_g, double s_l) {
    return p_g + derived.ptilde(s_l);
}

inline double big_B(const DerivedFunctions& derived, double s_l) { return derived.big_b(s_l); }
inline double big_B_inverse(const DerivedFunctions& derived, double b) {
    return derived.big_b_inverse(b);
}

}  // namespace porflow
