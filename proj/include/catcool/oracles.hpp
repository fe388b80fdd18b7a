// oracles.hpp
// Brute-force reference computations for tests and the oracle subcommand

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "catcool.hpp"

namespace oracle {

// Minimum of sum_i i * (mass assigned to cold level i) over every way of
// placing the joint populations into dc groups of size dh.
inline double min_cold_energy(const std::vector<double>& values, std::size_t dc, std::size_t dh) {
    std::vector<std::size_t> room(dc, dh);
    double best = std::numeric_limits<double>::infinity();
    std::function<void(std::size_t, double)> rec = [&](std::size_t idx, double acc) {
        if (acc >= best) {
            return;
        }
        if (idx == values.size()) {
            best = acc;
            return;
        }
        for (std::size_t g = 0; g < dc; ++g) {
            if (room[g] == 0) {
                continue;
            }
            --room[g];
            rec(idx + 1, acc + static_cast<double>(g) * values[idx]);
            ++room[g];
        }
    };
    rec(0, 0.0);
    return best;
}

inline double cold_energy(const std::vector<double>& pc) {
    double e = 0.0;
    for (std::size_t i = 0; i < pc.size(); ++i) {
        e += static_cast<double>(i) * pc[i];
    }
    return e;
}

inline bool passive_by_enumeration(const catcool::DiagonalState& pc,
                                   const catcool::DiagonalState& ph) {
    std::vector<double> joint;
    for (double a : pc.probs()) {
        for (double b : ph.probs()) {
            joint.push_back(a * b);
        }
    }
    return min_cold_energy(joint, pc.size(), ph.size()) >= cold_energy(pc.probs()) - 1e-12;
}

// Largest ground population of a cold qubit reachable by permuting the joint
// (cold qubit, hot) populations: best subset of size dh placed at cold level 1.
inline double best_qubit_ground_population(const std::vector<double>& joint, std::size_t dh) {
    const std::size_t n = joint.size();
    double best = -1.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != dh) {
            continue;
        }
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                s += joint[i];
            }
        }
        best = std::max(best, s);
    }
    return best;
}

inline std::vector<double> random_sorted_state(std::mt19937_64& rng, std::size_t d,
                                               double floor = 0.02) {
    std::uniform_real_distribution<double> u(floor, 1.0);
    std::vector<double> w(d);
    for (double& x : w) {
        x = u(rng);
    }
    std::sort(w.begin(), w.end(), std::greater<>());
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) {
        x /= s;
    }
    return w;
}

// Exhaustive search for a catalytic transformation with one cooling current:
// a cooling edge into a lower cold level that moves the catalyst, closed by a
// chain of arbitrary single edges stepping the catalyst back level by level.
// Every candidate runs with uniform intensities and is accepted when the
// catalyst comes back and the cold marginal escapes majorization.
inline bool cnu1_exists_by_enumeration(const catcool::DiagonalState& pc,
                                       const catcool::DiagonalState& ph,
                                       const catcool::DiagonalState& pv) {
    using namespace catcool;
    const auto state = JointState::product({pc, ph, pv});
    const auto& codec = state.codec();
    const std::size_t n = codec.size();
    const std::size_t dv = pv.size();
    auto cold = [&](std::size_t f) { return codec.decode(f)[0]; };
    auto cat = [&](std::size_t f) { return codec.decode(f)[2]; };

    bool found = false;
    std::vector<std::pair<std::size_t, std::size_t>> chain;
    std::vector<bool> used(n, false);

    auto try_loop = [&](std::size_t cs, std::size_t cd) {
        std::vector<std::pair<std::size_t, std::size_t>> edges{{cs, cd}};
        edges.insert(edges.end(), chain.begin(), chain.end());
        double jmin = std::numeric_limits<double>::infinity();
        for (auto [s, d] : edges) {
            jmin = std::min(jmin, state[s] - state[d]);
        }
        JointState after = state;
        for (auto [s, d] : edges) {
            after.rotate(s, d, jmin / (state[s] - state[d]));
        }
        double dev = 0.0;
        for (double x : catalyst_marginal_delta(state, after, 2)) {
            dev = std::max(dev, std::abs(x));
        }
        if (dev > 1e-10) {
            return;
        }
        if (max_prefix_excess(state.marginal(0), after.marginal(0)).amount > kEps) {
            found = true;
        }
    };

    // Extend the chain from catalyst level `level` until it reaches `target`.
    std::function<void(std::size_t, std::size_t, std::size_t, std::size_t, std::vector<bool>&)>
        extend = [&](std::size_t cs, std::size_t cd, std::size_t level, std::size_t target,
                     std::vector<bool>& levels_seen) {
            if (found) {
                return;
            }
            if (level == target) {
                try_loop(cs, cd);
                return;
            }
            if (chain.size() + 1 > dv - 1) {
                return;
            }
            for (std::size_t s = 0; s < n; ++s) {
                if (used[s] || cat(s) != level) {
                    continue;
                }
                for (std::size_t d = 0; d < n; ++d) {
                    if (used[d] || d == s) {
                        continue;
                    }
                    const std::size_t next = cat(d);
                    if (next == level || (levels_seen[next] && next != target)) {
                        continue;
                    }
                    if (state[s] - state[d] <= kEps) {
                        continue;
                    }
                    used[s] = used[d] = true;
                    levels_seen[next] = true;
                    chain.emplace_back(s, d);
                    extend(cs, cd, next, target, levels_seen);
                    chain.pop_back();
                    levels_seen[next] = false;
                    used[s] = used[d] = false;
                    if (found) {
                        return;
                    }
                }
            }
        };

    for (std::size_t s = 0; s < n && !found; ++s) {
        for (std::size_t d = 0; d < n && !found; ++d) {
            if (cold(s) <= cold(d) || cat(s) == cat(d) || state[s] - state[d] <= kEps) {
                continue;
            }
            used.assign(n, false);
            used[s] = used[d] = true;
            std::vector<bool> seen(dv, false);
            seen[cat(d)] = true;
            chain.clear();
            extend(s, d, cat(d), cat(s), seen);
        }
    }
    return found;
}

// Maximum over the simplex of the loop minimum for the qubit catalyst of rank n,
// by enumerating every vertex of the linear program
//   max J  s.t.  J <= current_x(p) for all loop edges, sum p = 1, p >= 0.
inline double qubit_loop_lp_max(double p2c, double p2h, std::size_t n) {
    const double p1c = 1.0 - p2c, p1h = 1.0 - p2h;
    const std::size_t nv = n + 1;  // p_1..p_n, J
    // Inequalities as rows a . z <= b.
    std::vector<Eigen::VectorXd> rows;
    std::vector<double> rhs;
    {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(nv);
        a(n) = 1.0;
        a(0) -= p2c * p1h;
        a(n - 1) += p1c * p2h;
        rows.push_back(a);
        rhs.push_back(0.0);
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(nv);
        a(n) = 1.0;
        a(k + 1) -= p1h;
        a(k) += p2h;
        rows.push_back(a);
        rhs.push_back(0.0);
    }
    for (std::size_t k = 0; k < n; ++k) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(nv);
        a(k) = -1.0;
        rows.push_back(a);
        rhs.push_back(0.0);
    }
    const std::size_t m = rows.size();
    double best = -std::numeric_limits<double>::infinity();
    std::vector<bool> pick(m, false);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(n), true);
    do {
        Eigen::MatrixXd A(nv, nv);
        Eigen::VectorXd b(nv);
        std::size_t r = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (pick[i]) {
                A.row(static_cast<long>(r)) = rows[i].transpose();
                b(static_cast<long>(r)) = rhs[i];
                ++r;
            }
        }
        A.row(static_cast<long>(n)).setZero();
        A.block(static_cast<long>(n), 0, 1, static_cast<long>(n)).setOnes();
        b(static_cast<long>(n)) = 1.0;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
        if (!lu.isInvertible()) {
            continue;
        }
        Eigen::VectorXd z = lu.solve(b);
        bool feasible = true;
        for (std::size_t i = 0; i < m && feasible; ++i) {
            feasible = rows[i].dot(z) <= rhs[i] + 1e-12;
        }
        if (feasible) {
            best = std::max(best, z(static_cast<long>(n)));
        }
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return best;
}

} // namespace oracle
