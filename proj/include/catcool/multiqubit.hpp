// multiqubit.hpp
// Heat extracted from N identical qubits: many-body cooling versus repeated
// catalytic cooling with one hot qubit per cycle

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"

namespace catcool {

inline void check_p2(double p2) {
    if (!(p2 >= 0.0 && p2 <= 0.5)) {
        throw invalid_input("excited population must lie in [0, 1/2]");
    }
}

inline double binomial(std::size_t n, std::size_t k) {
    double b = 1.0;
    for (std::size_t i = 1; i <= k; ++i) {
        b = b * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return b;
}

// Ground-population gain of one cold qubit cooled by k hot qubits.
inline double hot_qubits_cooling_sum(std::size_t k, double p2) {
    if (k < 2) {
        throw invalid_input("need at least two hot qubits");
    }
    check_p2(p2);
    const double p1 = 1.0 - p2;
    // l runs to k/2 - 1 for even k and (k-3)/2 for odd k; for k = 3 the range is l = 0 only.
    const std::size_t l_max = (k % 2 == 0) ? k / 2 - 1 : (k - 3) / 2;
    double sum = 0.0;
    for (std::size_t l = 0; l <= l_max; ++l) {
        const double j = std::pow(p1, double(k - l)) * std::pow(p2, double(l + 1)) -
                         std::pow(p1, double(l + 1)) * std::pow(p2, double(k - l));
        sum += binomial(k, l) * j;
    }
    return sum;
}

inline double cooling_coefficient(std::size_t k, double p2) {
    return hot_qubits_cooling_sum(k, p2) / static_cast<double>(k);
}

inline double xi2_closed(double p2) {
    check_p2(p2);
    return (1.0 - 2.0 * p2) / 2.0 * (1.0 - p2) * p2;
}

struct CoefficientTable {
    std::vector<double> p2_grid;
    std::size_t k_max = 2;
    // xi[k-2][g] for k = 2..k_max
    std::vector<std::vector<double>> xi;
    bool conjecture_holds = true;
};

inline CoefficientTable verify_coefficient_conjecture(std::size_t k_max,
                                                      const std::vector<double>& p2_grid) {
    if (k_max < 2) {
        throw invalid_input("k_max must be at least 2");
    }
    CoefficientTable t;
    t.p2_grid = p2_grid;
    t.k_max = k_max;
    for (std::size_t k = 2; k <= k_max; ++k) {
        std::vector<double> row;
        for (double p2 : p2_grid) {
            row.push_back(cooling_coefficient(k, p2));
        }
        t.xi.push_back(std::move(row));
    }
    for (std::size_t r = 1; r < t.xi.size(); ++r) {
        for (std::size_t g = 0; g < p2_grid.size(); ++g) {
            if (t.xi[r][g] > t.xi[0][g] + 1e-15) {
                t.conjecture_holds = false;
            }
        }
    }
    return t;
}

struct QubitEnsembleParams {
    std::size_t N = 0;
    std::size_t Nc = 0;
    double p2 = 0.0;
};

inline void check_params(const QubitEnsembleParams& q) {
    if (q.N < 2 || q.Nc < 1 || q.Nc >= q.N) {
        throw invalid_input("need 1 <= Nc <= N-1");
    }
    check_p2(q.p2);
}

inline double one_plus_2p1p2(double p2) { return 1.0 + 2.0 * (1.0 - p2) * p2; }

// Heat per catalytic cycle with one cold and one hot qubit and a rank-2 catalyst.
inline double cc_cycle_value(double p2) {
    check_p2(p2);
    return (1.0 - 2.0 * p2) / one_plus_2p1p2(p2) * (1.0 - p2) * p2;
}

inline double q_cc(const QubitEnsembleParams& q) {
    check_params(q);
    const std::size_t nc = std::min(q.Nc, q.N - q.Nc);
    return static_cast<double>(nc) * cc_cycle_value(q.p2);
}

struct MbcBounds {
    double lower = 0.0;
    double upper = 0.0;
    bool exact = false;     // exact only if xi(k) <= xi(2) holds for all k
    bool boundary = false;
};

inline bool mbc_exact_regime(const QubitEnsembleParams& q) { return 3 * q.Nc >= q.N; }

// Nc = ceil(N/3) - 1 with 3 not dividing N lies above the real threshold N/3 - 1
// but below N/3.
inline bool mbc_boundary_cell(const QubitEnsembleParams& q) {
    return q.N % 3 != 0 && q.Nc + 1 == (q.N + 2) / 3;
}

inline MbcBounds q_mbc_bounds(const QubitEnsembleParams& q) {
    check_params(q);
    const double x2 = xi2_closed(q.p2);
    const double nh = static_cast<double>(q.N - q.Nc);
    MbcBounds b;
    if (mbc_exact_regime(q)) {
        b.lower = b.upper = x2 * nh;
        b.exact = true;
    } else {
        b.lower = 2.0 * x2 * static_cast<double>(q.Nc);
        b.upper = x2 * nh;
    }
    b.boundary = mbc_boundary_cell(q);
    return b;
}

enum class GammaRegime { cc_saturated, balanced, few_cold };

inline std::string to_string(GammaRegime g) {
    switch (g) {
    case GammaRegime::cc_saturated: return "Nc>=N/2+1";
    case GammaRegime::balanced: return "N/3<=Nc<=N/2";
    case GammaRegime::few_cold: return "Nc<=N/3-1";
    }
    return "?";
}

struct StrategyReport {
    MbcBounds q_mbc;
    double q_cc = 0.0;
    double gamma_lower = 0.0;
    double gamma_upper = 0.0;
    bool gamma_exact = false;
    GammaRegime regime = GammaRegime::balanced;
    bool boundary = false;
};

// The factor (1-2p2) p1 p2 cancels between numerator and denominator, so the
// ratio stays finite at p2 = 0 and p2 = 1/2.
inline StrategyReport performance_ratio(const QubitEnsembleParams& q) {
    check_params(q);
    StrategyReport r;
    r.q_mbc = q_mbc_bounds(q);
    r.q_cc = q_cc(q);
    const double nc = static_cast<double>(std::min(q.Nc, q.N - q.Nc));
    const double nh = static_cast<double>(q.N - q.Nc);
    const double f = 2.0 / one_plus_2p1p2(q.p2);
    if (mbc_exact_regime(q)) {
        r.gamma_lower = r.gamma_upper = f * nc / nh;
        r.gamma_exact = true;
        r.regime = (2 * q.Nc <= q.N) ? GammaRegime::balanced : GammaRegime::cc_saturated;
        // Odd N with Nc = (N+1)/2 sits between N/2 and N/2+1.
        r.boundary = (q.N % 2 == 1) && (2 * q.Nc == q.N + 1);
    } else {
        r.gamma_lower = f * nc / nh;
        r.gamma_upper = f * nc / (2.0 * static_cast<double>(q.Nc));
        r.regime = GammaRegime::few_cold;
    }
    r.boundary = r.boundary || r.q_mbc.boundary;
    return r;
}

// Nc/N above which catalytic cooling beats many-body cooling.
inline double cc_advantage_threshold(double p2) {
    check_p2(p2);
    const double a = 2.0 * (1.0 - p2) * p2;
    return (1.0 + a) / (3.0 + a);
}

struct OptimalNcReport {
    double max_q_cc = 0.0;
    std::size_t argmax_nc = 0;
    double necessary_threshold = 0.0;  // Nc/N below this can favour optimal CC
    double ratio_closed = 0.0;         // max over Nc of Q_cc over max over Nc >= N/3 of Q_mbc
    double ratio_finite = 0.0;         // the same ratio at this N
};

inline OptimalNcReport optimal_nc_comparison(std::size_t N, double p2) {
    if (N < 2) {
        throw invalid_input("need N >= 2");
    }
    check_p2(p2);
    OptimalNcReport r;
    r.argmax_nc = N / 2;
    r.max_q_cc = static_cast<double>(N / 2) * cc_cycle_value(p2);
    const double a = 2.0 * (1.0 - p2) * p2;
    r.necessary_threshold = a / (1.0 + a);
    r.ratio_closed = 1.5 / (1.0 + a);
    // Best many-body heat with Nc >= N/3 uses the smallest such Nc.
    const std::size_t nc_min = (N + 2) / 3;
    r.ratio_finite = static_cast<double>(N / 2) * (2.0 / (1.0 + a)) /
                     static_cast<double>(N - nc_min);
    return r;
}

} // namespace catcool
