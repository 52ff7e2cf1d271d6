#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "porflow/quadrature.hpp"
#include "porflow/tensor.hpp"

namespace porflow {

struct ModelError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Phase { liquid, gas };

/// Phase density law rho(p) together with its derivative and the
/// antiderivative of 1/rho (used by the interface density and the energy
/// functional). Closed forms are supplied by the presets; the quadrature
/// fallback covers user-defined laws.
struct DensityLaw {
    std::function<double(double)> rho;
    std::function<double(double)> drho;
    std::function<double(double)> inv_antiderivative;  // g(p) = int_0^p dz/rho(z)

    double operator()(double p) const { return rho(p); }

    double g(double p) const {
        if (inv_antiderivative) return inv_antiderivative(p);
        const auto f = [this](double z) { return 1.0 / rho(z); };
        const double scale = std::abs(p) / rho(0.0) + 1e-30;
        return adaptive_simpson(f, 0.0, p, 1e-12 * scale);
    }

    static DensityLaw constant(double rho0) {
        DensityLaw law;
        law.rho = [rho0](double) { return rho0; };
        law.drho = [](double) { return 0.0; };
        law.inv_antiderivative = [rho0](double p) { return p / rho0; };
        return law;
    }

    /// rho(p) = clamp(rho_ref * exp(p / c2), lo, hi); the clamp enforces the
    /// global density bounds and is a deliberate regularization.
    static DensityLaw exp_clamped(double rho_ref, double c2, double lo, double hi) {
        if (!(rho_ref > lo && rho_ref < hi) || !(c2 > 0.0))
            throw ModelError("exp_clamped density: need lo < rho_ref < hi and c2 > 0");
        DensityLaw law;
        law.rho = [=](double p) {
            return std::clamp(rho_ref * std::exp(p / c2), lo, hi);
        };
        law.drho = [=](double p) {
            const double r = rho_ref * std::exp(p / c2);
            return (r <= lo || r >= hi) ? 0.0 : r / c2;
        };
        const double p_lo = c2 * std::log(lo / rho_ref);
        const double p_hi = c2 * std::log(hi / rho_ref);
        // g on the unclamped branch: (c2/rho_ref)(1 - exp(-p/c2)).
        const auto g_mid = [=](double p) { return c2 / rho_ref * (1.0 - std::exp(-p / c2)); };
        law.inv_antiderivative = [=](double p) {
            if (p < p_lo) return g_mid(p_lo) + (p - p_lo) / lo;
            if (p > p_hi) return g_mid(p_hi) + (p - p_hi) / hi;
            return g_mid(p);
        };
        return law;
    }
};

/// Capillary pressure law p_c(s_l), strictly decreasing with p_c(1) = 0.
struct CapillaryLaw {
    std::function<double(double)> pc;
    std::function<double(double)> dpc;
    std::function<double(double)> inverse;  // optional closed-form inverse

    double range_min() const { return pc(1.0); }
    double range_max() const { return pc(0.0); }

    static CapillaryLaw linear(double p_max) {
        if (!(p_max > 0.0)) throw ModelError("linear capillary law needs p_max > 0");
        CapillaryLaw law;
        law.pc = [p_max](double s) { return p_max * (1.0 - s); };
        law.dpc = [p_max](double) { return -p_max; };
        law.inverse = [p_max](double v) { return 1.0 - v / p_max; };
        return law;
    }
};

struct ModelConstants {
    double m0 = 0.0;            // total mobility floor
    double pc_slope_min = 0.0;  // min |p_c'| over [0,1]
    double pc_max = 0.0;        // p_c(0)
};

/// Constitutive catalogue: porosity, permeability, mobilities, capillary
/// pressure, densities and gravity, with the global bounds that the
/// assumptions place on them.
struct FluidModel {
    std::function<double(const Vec3&)> porosity;
    TensorField permeability;
    double mu_l = 1.0, mu_g = 1.0;
    std::function<double(double)> kr_l, kr_g;    // relative permeabilities on [0,1]
    std::function<double(double)> dkr_l, dkr_g;
    CapillaryLaw capillary;
    DensityLaw rho_l, rho_g;
    Vec3 gravity{0.0, 0.0, 0.0};
    double phi_min = 0.0, phi_max = 1.0;
    double rho_min = 0.0, rho_max = 0.0;  // global density bounds (A-bounds)
    ModelConstants constants;

    const DensityLaw& density(Phase a) const { return a == Phase::liquid ? rho_l : rho_g; }

    // Mobilities take the phase's own saturation, extended by zero below 0
    // and frozen at the s = 1 value above 1.
    double mobility_l(double s_l) const { return kr_l(std::clamp(s_l, 0.0, 1.0)) / mu_l; }
    double mobility_g(double s_g) const { return kr_g(std::clamp(s_g, 0.0, 1.0)) / mu_g; }
    double mobility(Phase a, double s_own) const {
        return a == Phase::liquid ? mobility_l(s_own) : mobility_g(s_own);
    }
    double dmobility(Phase a, double s_own) const {
        if (s_own < 0.0 || s_own > 1.0) return 0.0;
        return a == Phase::liquid ? dkr_l(s_own) / mu_l : dkr_g(s_own) / mu_g;
    }
    double total_mobility(double s_l) const { return mobility_l(s_l) + mobility_g(1.0 - s_l); }
};

namespace detail {

// Ternary-search refinement of a sampled minimum of a smooth function.
inline double refine_minimum(const std::function<double(double)>& f, double lo, double hi) {
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
        if (f(a) < f(b))
            hi = b;
        else
            lo = a;
    }
    return f(0.5 * (lo + hi));
}

}  // namespace detail

/// Validate the assumption bounds on a sampled grid and store the resulting
/// constants (total-mobility floor m0, capillary slope bound) in the model.
/// Throws ModelError on a violated assumption.
inline void validate_model(FluidModel& model, int samples = 2048,
                           double p_check_lo = -100.0, double p_check_hi = 100.0) {
    if (!(model.mu_l > 0.0) || !(model.mu_g > 0.0)) throw ModelError("viscosities must be positive");
    if (std::abs(model.kr_l(0.0)) > 1e-14 || std::abs(model.kr_g(0.0)) > 1e-14)
        throw ModelError("relative permeabilities must vanish at zero saturation");
    if (model.capillary.pc(1.0) < 0.0) throw ModelError("capillary pressure must be nonnegative");

    const auto total = [&](double s) { return model.total_mobility(s); };
    double m0 = total(0.0);
    int arg = 0;
    for (int i = 1; i <= samples; ++i) {
        const double v = total(static_cast<double>(i) / samples);
        if (v < m0) {
            m0 = v;
            arg = i;
        }
    }
    const double lo = std::max(0.0, (arg - 1.0) / samples);
    const double hi = std::min(1.0, (arg + 1.0) / samples);
    m0 = std::min(m0, detail::refine_minimum(total, lo, hi));
    if (!(m0 > 0.0)) throw ModelError("total mobility is not bounded away from zero");

    double slope = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= samples; ++i) {
        const double s = static_cast<double>(i) / samples;
        const double d = model.capillary.dpc(s);
        if (d >= 0.0) throw ModelError("capillary pressure must be strictly decreasing");
        slope = std::min(slope, std::abs(d));
    }
    if (!(slope > 0.0)) throw ModelError("capillary slope is not bounded away from zero");

    if (model.rho_max > 0.0) {
        for (int i = 0; i <= samples; ++i) {
            const double p = p_check_lo + (p_check_hi - p_check_lo) * i / samples;
            for (Phase a : {Phase::liquid, Phase::gas}) {
                const double r = model.density(a)(p);
                if (r < model.rho_min - 1e-12 || r > model.rho_max + 1e-12)
                    throw ModelError("density leaves its stated bounds at p = " + std::to_string(p));
            }
        }
    }

    model.constants.m0 = m0;
    model.constants.pc_slope_min = slope;
    model.constants.pc_max = model.capillary.pc(0.0);
}

/// Invert the capillary law: returns s with p_c(s) = value. Inputs within
/// 1e-9 * p_c(0) outside the range are clamped to the nearest endpoint;
/// anything further out is a domain error (Newton overshoot territory is the
/// caller's business, see capillary_inverse_extended).
inline double capillary_inverse(const FluidModel& model, double value) {
    const auto& law = model.capillary;
    const double lo = law.range_min(), hi = law.range_max();
    const double slack = 1e-9 * hi;
    if (value < lo - slack || value > hi + slack)
        throw std::domain_error("capillary value " + std::to_string(value) +
                                " outside range [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
    const double v = std::clamp(value, lo, hi);
    if (law.inverse) return std::clamp(law.inverse(v), 0.0, 1.0);
    double a = 0.0, b = 1.0;  // pc decreasing: pc(a) = hi >= v >= lo = pc(b)
    while (b - a > 1e-12) {
        const double m = 0.5 * (a + b);
        if (law.pc(m) >= v)
            a = m;
        else
            b = m;
    }
    return 0.5 * (a + b);
}

struct ExtendedInverse {
    double s_raw = 0.0;         // linear extrapolation outside [0,1]
    double s = 0.0;             // clamped to [0,1]
    double clamp_excess = 0.0;  // capillary-pressure overshoot beyond the range
};

/// Closure-friendly inverse: out-of-range capillary values are extrapolated
/// with the endpoint slope so transient Newton overshoot stays differentiable
/// and reportable instead of fatal.
inline ExtendedInverse capillary_inverse_extended(const FluidModel& model, double value) {
    const auto& law = model.capillary;
    const double lo = law.range_min(), hi = law.range_max();
    ExtendedInverse out;
    if (value > hi) {
        out.s_raw = 0.0 + (value - hi) / law.dpc(0.0);
        out.clamp_excess = value - hi;
    } else if (value < lo) {
        out.s_raw = 1.0 + (value - lo) / law.dpc(1.0);
        out.clamp_excess = lo - value;
    } else if (law.inverse) {
        out.s_raw = law.inverse(value);
    } else {
        double a = 0.0, b = 1.0;
        while (b - a > 1e-12) {
            const double m = 0.5 * (a + b);
            if (law.pc(m) >= value)
                a = m;
            else
                b = m;
        }
        out.s_raw = 0.5 * (a + b);
    }
    out.s = std::clamp(out.s_raw, 0.0, 1.0);
    return out;
}

/// Antiderivative of 1/rho_alpha from 0 to p.
inline double g_alpha(const FluidModel& model, double p, Phase phase) {
    return model.density(phase).g(p);
}

struct QuadraticLinearParams {
    double mu_l = 1.0;
    double mu_g = 0.5;
    double p_max = 1.0;      // p_c(0)
    double rho_l = 1.0;
    double rho_ref = 0.5;    // gas density at p = 0
    double c2 = 10.0;        // gas compressibility scale
    double rho_clamp_lo = 0.1;
    double rho_clamp_hi = 10.0;
    double phi = 0.2;
    SymTensor lambda = SymTensor::identity();
    Vec3 gravity{0.0, 0.0, 0.0};
};

/// Preset (i): quadratic relative permeabilities, linear capillary pressure,
/// constant liquid density and a clamped-exponential gas density.
inline FluidModel make_quadratic_linear_model(const QuadraticLinearParams& p = {}) {
    FluidModel m;
    const double phi = p.phi;
    m.porosity = [phi](const Vec3&) { return phi; };
    m.permeability = constant_tensor(p.lambda);
    m.mu_l = p.mu_l;
    m.mu_g = p.mu_g;
    m.kr_l = [](double s) { return s * s; };
    m.kr_g = [](double s) { return s * s; };
    m.dkr_l = [](double s) { return 2.0 * s; };
    m.dkr_g = [](double s) { return 2.0 * s; };
    m.capillary = CapillaryLaw::linear(p.p_max);
    m.rho_l = DensityLaw::constant(p.rho_l);
    m.rho_g = DensityLaw::exp_clamped(p.rho_ref, p.c2, p.rho_clamp_lo, p.rho_clamp_hi);
    m.gravity = p.gravity;
    m.phi_min = m.phi_max = p.phi;
    m.rho_min = std::min(p.rho_l, p.rho_clamp_lo);
    m.rho_max = std::max(p.rho_l, p.rho_clamp_hi);
    validate_model(m);
    return m;
}

/// Preset (ii): both densities constant; used by manufactured solutions and
/// conservation checks.
inline FluidModel make_constant_density_model(const QuadraticLinearParams& p = {}) {
    FluidModel m = make_quadratic_linear_model(p);
    m.rho_g = DensityLaw::constant(p.rho_ref);
    m.rho_min = std::min(p.rho_l, p.rho_ref);
    m.rho_max = std::max(p.rho_l, p.rho_ref);
    validate_model(m);
    return m;
}

}  // namespace porflow
