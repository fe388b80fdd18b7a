// cooling_opt.hpp
// Optimal catalytic cooling of a qubit, optimal cooling with the hot object
// alone, and catalytic enhancement on top of it

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cnu.hpp"
#include "currents.hpp"
#include "errors.hpp"
#include "state.hpp"

namespace catcool {

enum class CoolingRegion { inside, boundary, outside };

inline std::string to_string(CoolingRegion r) {
    switch (r) {
    case CoolingRegion::inside: return "true";
    case CoolingRegion::boundary: return "boundary";
    case CoolingRegion::outside: return "false";
    }
    return "?";
}

struct OptimalCatalystSolution {
    std::size_t n = 0;
    std::vector<double> spectrum;
    double j_max = 0.0;
    double r_h = 0.0;
    double p1c_final = 0.0;
    CoolingRegion region = CoolingRegion::outside;
};

// sum_{i<m} r^i by direct summation, so r = 1 gives m without a 0/0.
inline double geometric_sum(double r, std::size_t m) {
    double s = 0.0, x = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
        s += x;
        x *= r;
    }
    return s;
}

// Rank-n qubit catalyst closing a uniform loop between the cooling edge
// |2_c 1_h 1_v> -> |1_c 2_h n_v> and the hot-only chain |1_h (k+1)_v> -> |2_h k_v>.
inline OptimalCatalystSolution optimal_qubit_catalyst(double p2c, double p2h, std::size_t n) {
    if (n < 2) {
        throw invalid_input("catalyst rank must be at least 2");
    }
    if (!(p2c > 0.0) || !(p2h <= 0.5) || p2c > p2h) {
        throw out_of_regime("need 0 < p2c <= p2h <= 1/2");
    }
    const double p1c = 1.0 - p2c;
    const double p1h = 1.0 - p2h;
    const double r = p2h / p1h;
    const double s = geometric_sum(r, n - 1);
    const double rn1 = std::pow(r, static_cast<double>(n - 1));
    // J / p_n and p_1 / p_n
    const double j_over_pn = p1h * (p2c - p1c * rn1 * r) / (rn1 + p2c * s);
    const double p1_over_pn = (1.0 + s * r * p1c) / (rn1 + s * p2c);
    const double j_over_p1 = j_over_pn / p1_over_pn;

    OptimalCatalystSolution sol;
    sol.n = n;
    sol.r_h = r;
    // p_{k+1} = r p_k + J / p1h, which stays well conditioned for small r.
    sol.spectrum.resize(n);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sol.spectrum[k] = std::pow(r, static_cast<double>(k)) + j_over_p1 / p1h * geometric_sum(r, k);
        sum += sol.spectrum[k];
    }
    for (double& p : sol.spectrum) {
        p /= sum;
    }
    sol.j_max = j_over_p1 * sol.spectrum.front();
    sol.p1c_final = p1c + sol.j_max;
    if (sol.j_max > kEps) {
        sol.region = CoolingRegion::inside;
    } else if (sol.j_max >= -kEps) {
        sol.region = CoolingRegion::boundary;
    } else {
        sol.region = CoolingRegion::outside;
    }
    return sol;
}

// The n swap currents of the loop, cooling edge first.
inline std::vector<double> qubit_loop_currents(double p2c, double p2h,
                                               const std::vector<double>& pv) {
    const double p1c = 1.0 - p2c, p1h = 1.0 - p2h;
    std::vector<double> out{p2c * p1h * pv.front() - p1c * p2h * pv.back()};
    for (std::size_t k = 0; k + 1 < pv.size(); ++k) {
        out.push_back(p1h * pv[k + 1] - p2h * pv[k]);
    }
    return out;
}

struct HotOnlyPlan {
    // (hot index of |2_c j>_down, hot index of |1_c j>_up), 0-based.
    std::vector<std::pair<std::size_t, std::size_t>> swaps;
    double delta_p1c = 0.0;
    JointState post_state;  // (cold, hot) after the swaps
};

inline HotOnlyPlan optimal_hot_only_cooling(const DiagonalState& pc, const DiagonalState& ph) {
    if (pc.size() != 2) {
        throw invalid_input("the cold object must be a qubit");
    }
    if (ph.size() < 2) {
        throw invalid_input("the hot object needs at least two levels");
    }
    const std::size_t dh = ph.size();
    HotOnlyPlan plan;
    plan.post_state = JointState::product({pc.probs(), ph.probs()});
    const JointIndexCodec& codec = plan.post_state.codec();
    for (std::size_t j = 0; j < dh / 2; ++j) {
        const std::size_t down = j, up = dh - 1 - j;
        const double gain = pc[1] * ph[down] - pc[0] * ph[up];
        if (gain > kEps) {
            plan.swaps.emplace_back(down, up);
            plan.delta_p1c += gain;
            plan.post_state.rotate(codec.encode({1, down}), codec.encode({0, up}), 1.0);
        }
    }
    return plan;
}

inline bool enhancement_applicable(const DiagonalState& ph) {
    const std::size_t dh = ph.size();
    if (dh < 3) {
        throw invalid_input("the hot object needs at least three levels");
    }
    const std::size_t block = (dh % 2 == 1) ? (dh + 1) / 2 : dh / 2;
    const bool top = ph[0] - ph[block - 1] > kEps;
    const bool bottom = ph[dh - block] - ph[dh - 1] > kEps;
    return top || bottom;
}

struct EnhancementPlan {
    HotOnlyPlan pre;
    DiagonalState catalyst;
    JointState initial;  // post-swap (cold, hot) state times the catalyst
    TransformPlan plan;
};

// After the optimal hot-only swaps, a catalyst loop built from the untouched
// eigenstates cools the qubit further.
inline EnhancementPlan build_enhancement_plan(const DiagonalState& pc, const DiagonalState& ph) {
    if (!enhancement_applicable(ph)) {
        throw out_of_regime("hot spectrum blocks are fully degenerate");
    }
    if (!(pc[1] > 0.0)) {
        throw out_of_regime("a pure qubit cannot be cooled");
    }
    EnhancementPlan out;
    out.pre = optimal_hot_only_cooling(pc, ph);
    const std::size_t dh = ph.size();
    std::vector<bool> touched_down(dh, false), touched_up(dh, false);
    for (auto [down, up] : out.pre.swaps) {
        touched_down[down] = true;
        touched_up[up] = true;
    }
    const auto& post = out.pre.post_state;
    auto value = [&](std::size_t c, std::size_t j) { return post.at({c, j}); };
    // Untouched excited-cold states and untouched ground-cold states.
    std::optional<std::size_t> gmax, gmin, emax, emin;
    for (std::size_t j = 0; j < dh; ++j) {
        if (!touched_down[j]) {
            if (!emax || value(1, j) > value(1, *emax)) emax = j;
            if (!emin || value(1, j) < value(1, *emin)) emin = j;
        }
        if (!touched_up[j]) {
            if (!gmax || value(0, j) > value(0, *gmax)) gmax = j;
            if (!gmin || value(0, j) < value(0, *gmin)) gmin = j;
        }
    }
    const double cool_src = value(1, *emax);
    const double cool_dst = value(0, *gmin);
    const bool ground_chain = value(0, *gmax) - value(0, *gmin) > kEps;
    const bool excited_chain = value(1, *emax) - value(1, *emin) > kEps;
    if (!ground_chain && !excited_chain) {
        throw out_of_regime("untouched eigenvalues are degenerate");
    }
    const std::size_t chain_c = ground_chain ? 0 : 1;
    const std::size_t hi = ground_chain ? *gmax : *emax;
    const std::size_t lo = ground_chain ? *gmin : *emin;
    const double t = std::sqrt(value(chain_c, lo) / value(chain_c, hi));

    for (std::size_t dv = 2; dv <= kMaxCatalystDim; ++dv) {
        auto pv = geometric_catalyst(t, dv);
        if (cool_src * pv.front() - cool_dst * pv.back() <= kEps) {
            continue;
        }
        std::vector<double> joint;
        for (double p : post.probs()) {
            for (double q : pv.probs()) {
                joint.push_back(p * q);
            }
        }
        JointState initial(JointIndexCodec({2, dh, dv}), std::move(joint));
        Loop loop;
        loop.cooling = {{1, *emax, 0}, {0, *gmin, dv - 1}};
        for (std::size_t k = 0; k + 1 < dv; ++k) {
            loop.restoring.push_back({{chain_c, hi, k + 1}, {chain_c, lo, k}});
        }
        std::vector<Rotation> rotations;
        try {
            rotations = solve_uniform_loop(initial, loop);
        } catch (const no_loop&) {
            continue;
        }
        out.catalyst = pv;
        out.initial = std::move(initial);
        out.plan.dims = {2, dh, dv};
        out.plan.rotations = std::move(rotations);
        out.plan.expected_cooling_current =
            out.plan.rotations.front().intensity * edge_swap_current(out.initial, loop.cooling);
        out.plan.target_prefix = 1;
        return out;
    }
    throw not_synthesizable("catalyst dimension limit reached");
}

struct EnhancementResult {
    double j_cool = 0.0;
    double j_cool_prime = 0.0;
    double j_res_left = 0.0;
    double j_res_right = 0.0;
    double p1c_initial = 0.0;
    double p1c_hot_only = 0.0;
    double p1c_final = 0.0;
    double p1v_optimal = 0.0;
    std::optional<double> p1v_supplied;
    bool p1v_matches = true;
};

// Hot spectrum (1, 1, x)/(2+x); the pre-step swaps |2_c 1_h> with |1_c 3_h>.
inline EnhancementResult catalytic_enhancement_degenerate3(double p2c, double x,
                                                           std::optional<double> p1v = std::nullopt) {
    if (!(x > 0.0 && x < 1.0)) {
        throw out_of_regime("need 0 < x < 1");
    }
    if (!(p2c > 0.0 && p2c <= 0.5)) {
        throw out_of_regime("need 0 < p2c <= 1/2");
    }
    const double p1c = 1.0 - p2c;
    if (x * p1c - p2c > kEps) {
        throw out_of_regime("the hot object alone cannot cool the qubit (x > p2c/p1c)");
    }
    if (p1v && !(*p1v >= 0.5 && *p1v <= 1.0)) {
        throw out_of_regime("catalyst ground population must lie in [1/2, 1]");
    }
    const double h = 1.0 / (2.0 + x);
    const double y = x / (2.0 + x);
    EnhancementResult r;
    r.p1c_initial = p1c;
    r.j_cool = std::max(p2c * h - p1c * y, 0.0);
    r.p1c_hot_only = p1c + r.j_cool;
    const double denom = (1.0 + p2c) * h + p2c;
    r.j_cool_prime = (h * p1c - y * p2c) / denom * p2c * h;
    const double q2 = p2c / denom;  // catalyst excited population at the optimum
    r.p1v_optimal = 1.0 - q2;
    r.j_res_left = p1c * h * q2 - p2c * h * r.p1v_optimal;
    r.j_res_right = p2c * (h * q2 - y * r.p1v_optimal);
    r.p1c_final = p1c + r.j_cool + r.j_cool_prime;
    if (p1v) {
        r.p1v_supplied = p1v;
        r.p1v_matches = std::abs(*p1v - r.p1v_optimal) <= 1e-9;
    }
    return r;
}

struct Degenerate3Plan {
    JointState initial;  // after the pre-step swap, times the catalyst
    TransformPlan plan;
};

// Explicit catalytic step for the degenerate three-level hot object on the
// post-swap state: cooling |2_c 2_h 1_v> -> |1_c 3_h 2_v> restored by the two
// parallel edges |1_c 1_h 2_v> -> |1_c 3_h 1_v> and |2_c 2_h 2_v> -> |2_c 3_h 1_v>.
inline Degenerate3Plan build_degenerate3_plan(double p2c, double x, double p1v) {
    catalytic_enhancement_degenerate3(p2c, x, p1v);
    const double p1c = 1.0 - p2c;
    auto ph = DiagonalState::normalized({1.0, 1.0, x});
    DiagonalState pc({p1c, p2c});
    auto cold_hot = JointState::product({pc.probs(), ph.probs()});
    const auto& ch = cold_hot.codec();
    cold_hot.rotate(ch.encode({1, 0}), ch.encode({0, 2}), 1.0);
    std::vector<double> joint;
    for (double p : cold_hot.probs()) {
        joint.push_back(p * p1v);
        joint.push_back(p * (1.0 - p1v));
    }
    Degenerate3Plan out{JointState(JointIndexCodec({2, 3, 2}), std::move(joint)), {}};
    // Full swaps on all three edges. For p2c above roughly 1/3 the left edge
    // carries a negative current; the signed balance still restores the catalyst.
    const Edge cooling{{1, 1, 0}, {0, 2, 1}};
    out.plan.dims = {2, 3, 2};
    out.plan.rotations = {{cooling, 1.0},
                          {{{0, 0, 1}, {0, 2, 0}}, 1.0},
                          {{{1, 1, 1}, {1, 2, 0}}, 1.0}};
    require_disjoint(out.initial.codec(), out.plan.rotations);
    out.plan.expected_cooling_current = edge_swap_current(out.initial, cooling);
    out.plan.target_prefix = 1;
    return out;
}

} // namespace catcool
