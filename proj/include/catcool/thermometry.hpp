// thermometry.hpp
// Temperature estimation with a qubit probe coupled to a degenerate three-level
// environment, with and without a qubit catalyst

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "currents.hpp"
#include "errors.hpp"
#include "state.hpp"

namespace catcool {

struct ThermometrySetup {
    DiagonalState probe;    // p1 > p2
    EnergyLevels env_levels; // eps1 = eps2 < eps3
    double beta = 0.0;
    // Catalyst ground population; when absent the loop-balancing value is used.
    std::optional<double> catalyst_p1v;
};

struct SensitivityRecord {
    double p1_final = 0.0;
    double dp1_dbeta = 0.0;
    double sigma = 0.0;  // inverse-temperature units
    bool in_optimal_regime = false;
    bool catalyst_restored = true;
};

inline ThermometrySetup make_thermometry_setup(double probe_ratio, double eps3, double beta) {
    if (!(probe_ratio > 0.0 && probe_ratio < 1.0)) {
        throw out_of_regime("probe ratio p2/p1 must lie in (0, 1)");
    }
    if (!(eps3 > 0.0)) {
        throw invalid_input("eps3 must be positive");
    }
    return {DiagonalState::normalized({1.0, probe_ratio}), EnergyLevels({0.0, 0.0, eps3}), beta,
            std::nullopt};
}

inline std::vector<double> env_lambdas(const EnergyLevels& levels, double beta) {
    const auto p = thermal_state(levels, beta);
    double mean = 0.0;
    for (std::size_t j = 0; j < levels.size(); ++j) {
        mean += p[j] * levels[j];
    }
    std::vector<double> lam(levels.size());
    for (std::size_t j = 0; j < levels.size(); ++j) {
        lam[j] = p[j] * (mean - levels[j]);
    }
    return lam;
}

inline double cramer_rao_bound(const EnergyLevels& levels, double beta) {
    const auto p = thermal_state(levels, beta);
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t j = 0; j < levels.size(); ++j) {
        m1 += p[j] * levels[j];
        m2 += p[j] * levels[j] * levels[j];
    }
    const double var = m2 - m1 * m1;
    return var > 0.0 ? 1.0 / std::sqrt(var) : std::numeric_limits<double>::infinity();
}

inline double estimation_error(double p1, double dp1) {
    if (dp1 == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::sqrt(std::max(p1 * (1.0 - p1), 0.0)) / std::abs(dp1);
}

namespace detail {

inline void check_setup(const ThermometrySetup& s) {
    if (s.probe.size() != 2) {
        throw invalid_input("the probe must be a qubit");
    }
    if (s.env_levels.size() != 3 || s.env_levels[0] != s.env_levels[1] ||
        !(s.env_levels[2] > s.env_levels[1])) {
        throw invalid_input("environment levels must be (e, e, e3) with e3 > e");
    }
    if (!(s.probe[0] - s.probe[1] > kEps)) {
        throw out_of_regime("the probe must not be fully mixed");
    }
    if (s.catalyst_p1v && !(*s.catalyst_p1v >= 0.5 && *s.catalyst_p1v <= 1.0)) {
        throw out_of_regime("catalyst ground population must lie in [1/2, 1]");
    }
}

} // namespace detail

inline bool thermometry_in_optimal_regime(const ThermometrySetup& s) {
    const auto pe = thermal_state(s.env_levels, s.beta);
    // e^{-beta eps3} <= p2/p1, cross-multiplied.
    return pe[2] * s.probe[0] <= pe[0] * s.probe[1] + kEps;
}

// Swap |1_P 3_e> <-> |2_P 1_e>.
inline SensitivityRecord probe_after_optimal_swap(const ThermometrySetup& s) {
    detail::check_setup(s);
    const auto pe = thermal_state(s.env_levels, s.beta);
    const auto lam = env_lambdas(s.env_levels, s.beta);
    const double p1 = s.probe[0], p2 = s.probe[1];
    SensitivityRecord r;
    r.p1_final = p1 * (1.0 - pe[2]) + p2 * pe[0];
    r.dp1_dbeta = p1 * (lam[0] + lam[1]) + p2 * lam[0];
    r.sigma = estimation_error(r.p1_final, r.dp1_dbeta);
    r.in_optimal_regime = thermometry_in_optimal_regime(s);
    return r;
}

// Catalyst excited population that balances the catalytic loop after the swap.
inline double balancing_catalyst_p2v(const ThermometrySetup& s) {
    const auto pe = thermal_state(s.env_levels, s.beta);
    const double p2 = s.probe[1];
    return p2 / ((1.0 + p2) * pe[1] + p2);
}

// Swaps |2_P 2_e 1_v> <-> |1_P 3_e 2_v>, |1_P 1_e 2_v> <-> |1_P 3_e 1_v> and
// |2_P 2_e 2_v> <-> |2_P 3_e 1_v> after the probe swap.
inline SensitivityRecord sensitivity_after_catalytic(const ThermometrySetup& s) {
    detail::check_setup(s);
    const auto first = probe_after_optimal_swap(s);
    const auto pe = thermal_state(s.env_levels, s.beta);
    const auto lam = env_lambdas(s.env_levels, s.beta);
    const double p2 = s.probe[1];
    const double q2_opt = balancing_catalyst_p2v(s);
    const double q1 = s.catalyst_p1v ? *s.catalyst_p1v : 1.0 - q2_opt;
    const double q2 = 1.0 - q1;
    SensitivityRecord r;
    r.p1_final = first.p1_final + p2 * (pe[1] * q1 - pe[0] * q2);
    r.dp1_dbeta = first.dp1_dbeta + p2 * (q1 * lam[1] - q2 * lam[0]);
    r.sigma = estimation_error(r.p1_final, r.dp1_dbeta);
    r.in_optimal_regime = first.in_optimal_regime;
    r.catalyst_restored = std::abs(q2 - q2_opt) <= 1e-9;
    return r;
}

// Probe ground population from an explicit permutation of the joint
// (probe, environment, catalyst) populations at inverse temperature beta.
inline double simulate_probe_p1(const ThermometrySetup& s, double beta, bool catalytic) {
    detail::check_setup(s);
    const auto pe = thermal_state(s.env_levels, beta);
    double q1 = 1.0;
    if (catalytic) {
        q1 = s.catalyst_p1v ? *s.catalyst_p1v : 1.0 - balancing_catalyst_p2v(s);
    }
    auto joint = JointState::product({s.probe.probs(), pe.probs(), {q1, 1.0 - q1}});
    const auto& c = joint.codec();
    for (std::size_t v = 0; v < 2; ++v) {
        joint.rotate(c.encode({0, 2, v}), c.encode({1, 0, v}), 1.0);
    }
    if (catalytic) {
        joint.rotate(c.encode({1, 1, 0}), c.encode({0, 2, 1}), 1.0);
        joint.rotate(c.encode({0, 0, 1}), c.encode({0, 2, 0}), 1.0);
        joint.rotate(c.encode({1, 1, 1}), c.encode({1, 2, 0}), 1.0);
    }
    return joint.marginal(0)[0];
}

// Central-difference derivative of the simulated pipeline, catalyst held fixed.
// Near beta = 0 a second-order forward stencil keeps beta non-negative.
inline double finite_difference_dp1(const ThermometrySetup& s, bool catalytic, double h = 1e-5) {
    if (s.beta < h) {
        return (-3.0 * simulate_probe_p1(s, s.beta, catalytic) +
                4.0 * simulate_probe_p1(s, s.beta + h, catalytic) -
                simulate_probe_p1(s, s.beta + 2.0 * h, catalytic)) /
               (2.0 * h);
    }
    return (simulate_probe_p1(s, s.beta + h, catalytic) -
            simulate_probe_p1(s, s.beta - h, catalytic)) /
           (2.0 * h);
}

struct ThermometryRow {
    double x = 0.0;
    double sigma_prime = 0.0;
    double sigma_double_prime = 0.0;
    double cramer_rao = 0.0;
    bool in_optimal_regime = false;
    double beta = 0.0;
};

inline std::vector<double> log_grid(double lo, double hi, std::size_t points) {
    if (points < 2 || !(lo > 0.0) || !(hi > lo)) {
        throw invalid_input("log grid needs 0 < lo < hi and at least two points");
    }
    std::vector<double> g(points);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < points; ++i) {
        g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

inline std::vector<ThermometryRow> thermometry_sweep(double probe_ratio, double eps3,
                                                     const std::vector<double>& x_grid) {
    std::vector<ThermometryRow> rows;
    for (double x : x_grid) {
        if (!(x > 0.0 && x <= 1.0)) {
            throw invalid_input("x = exp(-beta eps3) must lie in (0, 1]");
        }
        const double beta = -std::log(x) / eps3;
        auto s = make_thermometry_setup(probe_ratio, eps3, beta);
        ThermometryRow row;
        row.x = x;
        row.beta = beta;
        row.sigma_prime = probe_after_optimal_swap(s).sigma;
        row.sigma_double_prime = sensitivity_after_catalytic(s).sigma;
        row.cramer_rao = cramer_rao_bound(s.env_levels, beta);
        row.in_optimal_regime = thermometry_in_optimal_regime(s);
        rows.push_back(row);
    }
    return rows;
}

} // namespace catcool
