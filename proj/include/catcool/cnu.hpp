// cnu.hpp
// Catalytic non-unital transformations with one cooling current: existence
// certificates, catalyst synthesis, plan construction and execution

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "currents.hpp"
#include "errors.hpp"
#include "format.hpp"
#include "state.hpp"

namespace catcool {

enum class ChainKind { hot_only, left, right };

inline std::string to_string(ChainKind k) {
    switch (k) {
    case ChainKind::hot_only: return "hot-only";
    case ChainKind::left: return "left";
    case ChainKind::right: return "right";
    }
    return "?";
}

struct ChainEdge {
    std::size_t k = 0;
    Edge edge;
};

// All indices 0-based. The cooling edge moves population from
// |(i+1)_c 1_h l_v> to |i_c d_h (lp+1)_v>; the chain covers k = l..lp.
struct Cnu1Certificate {
    std::size_t i = 0;
    std::size_t l = 0;
    std::size_t lp = 0;
    ChainKind chain_kind = ChainKind::hot_only;
    Edge cooling;
    std::vector<ChainEdge> chain_edges;
    double loop_current = 0.0;
};

struct TransformPlan {
    std::vector<std::size_t> dims;
    std::vector<Rotation> rotations;
    double expected_cooling_current = 0.0;
    // 1-based label of the cold prefix sum that grows.
    std::size_t target_prefix = 0;
};

namespace detail {

// Either (cold, hot, catalyst) or, for a bare system, (system, catalyst) with a
// trivial one-level hot factor.
struct Factors {
    std::vector<double> pc;
    std::vector<double> ph;
    std::vector<double> pv;
    bool with_hot = true;

    std::vector<std::size_t> dims() const {
        if (with_hot) {
            return {pc.size(), ph.size(), pv.size()};
        }
        return {pc.size(), pv.size()};
    }

    Pattern at(std::optional<std::size_t> c, std::size_t h, std::size_t v) const {
        if (with_hot) {
            return {c, h, v};
        }
        return {c, v};
    }

    double value(std::optional<std::size_t> c, std::size_t h, std::size_t v) const {
        return (c ? pc[*c] : 1.0) * ph[h] * pv[v];
    }
};

inline Factors make_factors(const DiagonalState& pc, const DiagonalState& ph,
                            const DiagonalState& pv) {
    if (pc.size() < 2) {
        throw invalid_input("the cooled system needs at least two levels");
    }
    if (pv.size() < 2) {
        throw invalid_input("the catalyst needs at least two levels");
    }
    return {pc.probs(), ph.probs(), pv.probs(), true};
}

inline Factors make_system_factors(const DiagonalState& ps, const DiagonalState& pv) {
    if (ps.size() < 2) {
        throw invalid_input("the system needs at least two levels");
    }
    if (pv.size() < 2) {
        throw invalid_input("the catalyst needs at least two levels");
    }
    return {ps.probs(), {1.0}, pv.probs(), false};
}

struct Candidate {
    Edge edge;
    double current = 0.0;
};

inline Candidate cooling_edge(const Factors& f, std::size_t i, std::size_t l, std::size_t lp) {
    const std::size_t dh = f.ph.size();
    return {{f.at(i + 1, 0, l), f.at(i, dh - 1, lp + 1)},
            f.value(i + 1, 0, l) - f.value(i, dh - 1, lp + 1)};
}

inline Candidate chain_edge(const Factors& f, ChainKind kind, std::size_t i, std::size_t k) {
    const std::size_t dc = f.pc.size();
    const std::size_t dh = f.ph.size();
    std::optional<std::size_t> src_c, dst_c;
    switch (kind) {
    case ChainKind::hot_only:
        src_c = dst_c = std::nullopt;
        break;
    case ChainKind::left:
        src_c = 0;
        dst_c = i;
        break;
    case ChainKind::right:
        src_c = i + 1;
        dst_c = dc - 1;
        break;
    }
    return {{f.at(src_c, 0, k + 1), f.at(dst_c, dh - 1, k)},
            f.value(src_c, 0, k + 1) - f.value(dst_c, dh - 1, k)};
}

inline constexpr ChainKind kChainOrder[] = {ChainKind::hot_only, ChainKind::left,
                                           ChainKind::right};

inline bool certificate_holds(const Factors& f, const Cnu1Certificate& c) {
    if (c.i + 1 >= f.pc.size() || c.l > c.lp || c.lp + 1 >= f.pv.size()) {
        return false;
    }
    if (!f.with_hot && c.chain_kind == ChainKind::hot_only) {
        return false;
    }
    if (cooling_edge(f, c.i, c.l, c.lp).current <= kEps) {
        return false;
    }
    for (std::size_t k = c.l; k <= c.lp; ++k) {
        if (chain_edge(f, c.chain_kind, c.i, k).current <= kEps) {
            return false;
        }
    }
    return true;
}

inline Cnu1Certificate make_certificate(const Factors& f, std::size_t i, std::size_t l,
                                        std::size_t lp, ChainKind kind) {
    Cnu1Certificate c;
    c.i = i;
    c.l = l;
    c.lp = lp;
    c.chain_kind = kind;
    auto cool = cooling_edge(f, i, l, lp);
    c.cooling = cool.edge;
    c.loop_current = cool.current;
    for (std::size_t k = l; k <= lp; ++k) {
        auto e = chain_edge(f, kind, i, k);
        c.chain_edges.push_back({k, e.edge});
        c.loop_current = std::min(c.loop_current, e.current);
    }
    return c;
}

inline std::optional<Cnu1Certificate> search(const Factors& f) {
    const std::size_t dc = f.pc.size();
    const std::size_t dv = f.pv.size();
    std::optional<Cnu1Certificate> best;
    for (std::size_t i = 0; i + 1 < dc; ++i) {
        // Per chain kind, the current of each step k.
        std::vector<std::vector<double>> step(3, std::vector<double>(dv - 1));
        for (std::size_t kind = 0; kind < 3; ++kind) {
            for (std::size_t k = 0; k + 1 < dv; ++k) {
                step[kind][k] = chain_edge(f, kChainOrder[kind], i, k).current;
            }
        }
        for (std::size_t l = 0; l + 1 < dv; ++l) {
            double run_min[3];
            bool alive[3];
            for (std::size_t kind = 0; kind < 3; ++kind) {
                run_min[kind] = std::numeric_limits<double>::infinity();
                alive[kind] = f.with_hot || kChainOrder[kind] != ChainKind::hot_only;
            }
            for (std::size_t lp = l; lp + 1 < dv; ++lp) {
                for (std::size_t kind = 0; kind < 3; ++kind) {
                    alive[kind] = alive[kind] && step[kind][lp] > kEps;
                    run_min[kind] = std::min(run_min[kind], step[kind][lp]);
                }
                if (!(alive[0] || alive[1] || alive[2])) {
                    break;
                }
                const double cool = cooling_edge(f, i, l, lp).current;
                if (cool <= kEps) {
                    continue;
                }
                for (std::size_t kind = 0; kind < 3; ++kind) {
                    if (!alive[kind]) {
                        continue;
                    }
                    const double j = std::min(cool, run_min[kind]);
                    if (!best || j > best->loop_current + 1e-15) {
                        best = make_certificate(f, i, l, lp, kChainOrder[kind]);
                    }
                    break;
                }
            }
        }
    }
    return best;
}

inline TransformPlan build(const Factors& f, const Cnu1Certificate& cert) {
    if (!certificate_holds(f, cert)) {
        throw inconsistent_certificate("certificate inequalities do not hold for these states");
    }
    auto fresh = make_certificate(f, cert.i, cert.l, cert.lp, cert.chain_kind);
    Loop loop;
    loop.cooling = fresh.cooling;
    for (const auto& ce : fresh.chain_edges) {
        loop.restoring.push_back(ce.edge);
    }
    const auto state = f.with_hot ? JointState::product({f.pc, f.ph, f.pv})
                                  : JointState::product({f.pc, f.pv});
    TransformPlan plan;
    plan.dims = f.dims();
    plan.rotations = solve_uniform_loop(state, loop);
    plan.expected_cooling_current = fresh.loop_current;
    plan.target_prefix = cert.i + 1;
    return plan;
}

} // namespace detail

inline std::optional<Cnu1Certificate> check_cnu1(const DiagonalState& pc, const DiagonalState& ph,
                                                 const DiagonalState& pv) {
    return detail::search(detail::make_factors(pc, ph, pv));
}

inline std::optional<Cnu1Certificate> check_cnu1_general(const DiagonalState& ps,
                                                         const DiagonalState& pv) {
    return detail::search(detail::make_system_factors(ps, pv));
}

inline TransformPlan build_plan(const DiagonalState& pc, const DiagonalState& ph,
                                const DiagonalState& pv, const Cnu1Certificate& cert) {
    return detail::build(detail::make_factors(pc, ph, pv), cert);
}

inline TransformPlan build_plan_general(const DiagonalState& ps, const DiagonalState& pv,
                                        const Cnu1Certificate& cert) {
    return detail::build(detail::make_system_factors(ps, pv), cert);
}

inline DiagonalState geometric_catalyst(double t, std::size_t dv) {
    if (!(t > 0.0 && t <= 1.0) || dv < 2) {
        throw invalid_input("geometric catalyst needs 0 < t <= 1 and at least two levels");
    }
    std::vector<double> w(dv);
    double x = 1.0;
    for (std::size_t k = 0; k < dv; ++k) {
        w[k] = x;
        x *= t;
    }
    return DiagonalState::normalized(std::move(w));
}

struct SynthesisResult {
    DiagonalState catalyst;
    Cnu1Certificate certificate;
    double ratio = 0.0;  // t in p_k ~ t^(k-1)
    int condition = 0;   // 1: hot-only chain, 2: chain through the cold object
};

inline constexpr std::size_t kMaxCatalystDim = 4096;

namespace detail {

// Log-midpoint between the lower bound on t and 1.
inline double midpoint_ratio(double lower) {
    return lower > 0.0 ? std::sqrt(lower) : 0.5;
}

inline std::optional<SynthesisResult> grow_catalyst(const DiagonalState& pc,
                                                    const DiagonalState& ph, bool with_hot,
                                                    std::size_t i, ChainKind kind, double t,
                                                    int condition) {
    for (std::size_t dv = 2; dv <= kMaxCatalystDim; ++dv) {
        auto pv = geometric_catalyst(t, dv);
        Factors f = with_hot ? make_factors(pc, ph, pv) : make_system_factors(pc, pv);
        Cnu1Certificate c;
        c.i = i;
        c.l = 0;
        c.lp = dv - 2;
        c.chain_kind = kind;
        if (certificate_holds(f, c)) {
            return SynthesisResult{pv, make_certificate(f, i, 0, dv - 2, kind), t, condition};
        }
    }
    return std::nullopt;
}

// Chain through the cold object: for each i take the looser of the left and
// right bounds on t, keep the i needing the smallest catalyst.
inline std::optional<SynthesisResult> synthesize_cold_chain(const DiagonalState& pc,
                                                            const DiagonalState& ph,
                                                            bool with_hot,
                                                            std::optional<std::size_t> only_i) {
    const std::size_t dc = pc.size();
    std::optional<SynthesisResult> best;
    for (std::size_t i = 0; i + 1 < dc; ++i) {
        if (only_i && *only_i != i) {
            continue;
        }
        if (pc[i + 1] <= 0.0) {
            continue;
        }
        const double left = pc[i] / pc[0];
        const double right = pc[dc - 1] / pc[i + 1];
        const bool use_left = left <= right;
        const double lower = std::min(left, right);
        if (lower >= 1.0 - kEps) {
            continue;
        }
        auto r = grow_catalyst(pc, ph, with_hot, i,
                               use_left ? ChainKind::left : ChainKind::right,
                               midpoint_ratio(lower), 2);
        if (r && (!best || r->catalyst.size() < best->catalyst.size())) {
            best = r;
        }
    }
    return best;
}

} // namespace detail

inline SynthesisResult synthesize_catalyst(const DiagonalState& pc, const DiagonalState& ph) {
    if (pc.size() < 2) {
        throw invalid_input("the cold object needs at least two levels");
    }
    if (!ph.fully_mixed()) {
        std::optional<std::size_t> best_i;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < pc.size(); ++i) {
            if (pc[i + 1] > 0.0 && pc[i] / pc[i + 1] < best_ratio) {
                best_ratio = pc[i] / pc[i + 1];
                best_i = i;
            }
        }
        if (best_i) {
            auto r = detail::grow_catalyst(pc, ph, true, *best_i, ChainKind::hot_only,
                                           detail::midpoint_ratio(ph.back() / ph.front()), 1);
            if (r) {
                return *r;
            }
        }
    }
    if (pc.size() >= 3 && !pc.fully_mixed()) {
        if (auto r = detail::synthesize_cold_chain(pc, ph, true, std::nullopt)) {
            return *r;
        }
    }
    throw not_synthesizable("no catalyst satisfies the existence conditions for these states");
}

// Cooling of the g-fold ground subspace of a bare system with a chain through
// the system itself; g is the ground degeneracy (1-based count).
inline SynthesisResult synthesize_ground_catalyst(const DiagonalState& pc, std::size_t g) {
    if (g == 0 || g + 1 > pc.size()) {
        throw invalid_input("ground degeneracy must be between 1 and d-1");
    }
    auto r = detail::synthesize_cold_chain(pc, DiagonalState({1.0}), false, g - 1);
    if (!r) {
        throw not_synthesizable("no chain through the system can restore the catalyst");
    }
    return *r;
}

struct ExecuteOptions {
    std::size_t cold_axis = 0;
    std::optional<std::vector<double>> cold_energies;
    std::optional<std::size_t> ground_degeneracy;
    double tolerance = kCatalystTol;
};

struct VerificationReport {
    double catalyst_deviation = 0.0;
    PrefixExcess majorization_excess;
    std::vector<double> cold_delta;
    double realized_cooling_current = 0.0;
    std::optional<double> delta_energy;
    std::optional<double> delta_ground_population;
};

struct ExecutionResult {
    JointState state;
    VerificationReport report;
};

inline ExecutionResult execute_plan(const JointState& state, const TransformPlan& plan,
                                    const ExecuteOptions& opt = {}) {
    if (!plan.dims.empty() && plan.dims != state.codec().dims()) {
        throw invalid_input("plan was built for a different joint space");
    }
    require_disjoint(state.codec(), plan.rotations);
    ExecutionResult out{apply_rotations(state, plan.rotations), {}};
    auto& rep = out.report;
    const std::size_t cat = state.codec().axes() - 1;
    for (double d : catalyst_marginal_delta(state, out.state, cat)) {
        rep.catalyst_deviation = std::max(rep.catalyst_deviation, std::abs(d));
    }
    const auto before = state.marginal(opt.cold_axis);
    const auto after = out.state.marginal(opt.cold_axis);
    rep.cold_delta.resize(before.size());
    for (std::size_t i = 0; i < before.size(); ++i) {
        rep.cold_delta[i] = after[i] - before[i];
    }
    rep.majorization_excess = max_prefix_excess(before, after);
    if (!plan.rotations.empty()) {
        rep.realized_cooling_current =
            plan.rotations.front().intensity * edge_swap_current(state, plan.rotations.front().edge);
    }
    if (opt.cold_energies) {
        if (opt.cold_energies->size() != before.size()) {
            throw invalid_input("cold energies do not match the cold dimension");
        }
        double de = 0.0;
        for (std::size_t i = 0; i < before.size(); ++i) {
            de += (*opt.cold_energies)[i] * rep.cold_delta[i];
        }
        rep.delta_energy = de;
    }
    if (opt.ground_degeneracy) {
        double dg = 0.0;
        for (std::size_t i = 0; i < std::min(*opt.ground_degeneracy, before.size()); ++i) {
            dg += rep.cold_delta[i];
        }
        rep.delta_ground_population = dg;
    }
    if (rep.catalyst_deviation > opt.tolerance) {
        throw verification_failure("catalyst marginal changed by " +
                                   format_number(rep.catalyst_deviation));
    }
    return out;
}

struct DiagramCoordinate {
    std::string label;
    double log_value = 0.0;
};

struct DiagramArrow {
    std::string kind;  // "cooling" or "restoring"
    std::string src_label;
    std::string dst_label;
};

struct DiagramData {
    std::vector<DiagramCoordinate> columns;
    std::vector<DiagramCoordinate> rows;
    std::vector<DiagramArrow> arrows;
};

namespace detail {

inline double safe_log(double p) {
    return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
}

inline std::string level_label(const std::optional<std::size_t>& idx, char axis) {
    return (idx ? std::to_string(*idx + 1) : std::string("*")) + axis;
}

} // namespace detail

inline DiagramData diagram_export(const DiagonalState& pc, const DiagonalState& ph,
                                  const DiagonalState& pv,
                                  const std::optional<TransformPlan>& plan = std::nullopt) {
    DiagramData d;
    for (std::size_t i = 0; i < pc.size(); ++i) {
        for (std::size_t j = 0; j < ph.size(); ++j) {
            d.columns.push_back({detail::level_label(i, 'c') + detail::level_label(j, 'h'),
                                 detail::safe_log(pc[i] * ph[j])});
        }
    }
    std::stable_sort(d.columns.begin(), d.columns.end(),
                     [](const auto& a, const auto& b) { return a.log_value > b.log_value; });
    for (std::size_t k = 0; k < pv.size(); ++k) {
        d.rows.push_back({detail::level_label(k, 'v'), detail::safe_log(pv[k])});
    }
    if (!plan) {
        return d;
    }
    if (plan->dims != std::vector<std::size_t>{pc.size(), ph.size(), pv.size()}) {
        throw invalid_input("plan does not match the diagram states");
    }
    auto positive = [&](const Pattern& p) {
        return (!p[0] || pc[*p[0]] > 0.0) && ph[*p[1]] > 0.0 && pv[*p[2]] > 0.0;
    };
    auto label = [](const Pattern& p) {
        return detail::level_label(p[0], 'c') + detail::level_label(p[1], 'h') +
               detail::level_label(p[2], 'v');
    };
    for (std::size_t r = 0; r < plan->rotations.size(); ++r) {
        const auto& e = plan->rotations[r].edge;
        if (!e.src[1] || !e.src[2] || !positive(e.src) || !positive(e.dst)) {
            continue;
        }
        d.arrows.push_back({r == 0 ? "cooling" : "restoring", label(e.src), label(e.dst)});
    }
    return d;
}

inline std::string diagram_csv(const DiagramData& d) {
    std::string out = "section,label,log_value,kind,src_label,dst_label\n";
    for (const auto& c : d.columns) {
        out += "columns," + c.label + ',' + format_number(c.log_value) + ",,,\n";
    }
    for (const auto& r : d.rows) {
        out += "rows," + r.label + ',' + format_number(r.log_value) + ",,,\n";
    }
    for (const auto& a : d.arrows) {
        out += "arrows,,," + a.kind + ',' + a.src_label + ',' + a.dst_label + '\n';
    }
    return out;
}

} // namespace catcool
