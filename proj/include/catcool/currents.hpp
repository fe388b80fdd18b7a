// currents.hpp
// Joint index space, two-level rotations, population currents and uniform loops

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "format.hpp"
#include "state.hpp"

namespace catcool {

// Row-major codec, last factor fastest. Axis order is (cold, hot, catalyst)
// or (system, catalyst); the catalyst is always the last axis.
class JointIndexCodec {
public:
    JointIndexCodec() = default;

    explicit JointIndexCodec(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
        if (dims_.empty()) {
            throw invalid_input("codec needs at least one factor");
        }
        strides_.assign(dims_.size(), 1);
        total_ = 1;
        for (std::size_t a = dims_.size(); a-- > 0;) {
            if (dims_[a] == 0) {
                throw invalid_input("codec dimensions must be positive");
            }
            strides_[a] = total_;
            total_ *= dims_[a];
        }
        if (total_ < 2) {
            throw invalid_input("joint space needs at least two states");
        }
    }

    std::size_t size() const { return total_; }
    std::size_t axes() const { return dims_.size(); }
    std::size_t dim(std::size_t axis) const { return dims_[axis]; }
    std::size_t stride(std::size_t axis) const { return strides_[axis]; }
    const std::vector<std::size_t>& dims() const { return dims_; }

    std::size_t encode(const std::vector<std::size_t>& idx) const {
        if (idx.size() != dims_.size()) {
            throw invalid_input("multi-index has the wrong number of factors");
        }
        std::size_t flat = 0;
        for (std::size_t a = 0; a < dims_.size(); ++a) {
            if (idx[a] >= dims_[a]) {
                throw invalid_input("multi-index out of range");
            }
            flat += idx[a] * strides_[a];
        }
        return flat;
    }

    std::vector<std::size_t> decode(std::size_t flat) const {
        if (flat >= total_) {
            throw invalid_input("flat index out of range");
        }
        std::vector<std::size_t> idx(dims_.size());
        for (std::size_t a = 0; a < dims_.size(); ++a) {
            idx[a] = flat / strides_[a];
            flat %= strides_[a];
        }
        return idx;
    }

    bool operator==(const JointIndexCodec& o) const { return dims_ == o.dims_; }

private:
    std::vector<std::size_t> dims_;
    std::vector<std::size_t> strides_;
    std::size_t total_ = 0;
};

class JointState {
public:
    JointState() = default;

    JointState(JointIndexCodec codec, std::vector<double> probs)
        : codec_(std::move(codec)), probs_(std::move(probs)) {
        if (probs_.size() != codec_.size()) {
            throw invalid_input("joint probabilities do not match the codec size");
        }
        double sum = 0.0;
        for (double& p : probs_) {
            clamp(p);
            sum += p;
        }
        if (std::abs(sum - 1.0) > kEps) {
            throw invalid_input("joint probabilities must sum to 1");
        }
    }

    static JointState product(const std::vector<std::vector<double>>& factors) {
        std::vector<std::size_t> dims;
        for (const auto& f : factors) {
            dims.push_back(f.size());
        }
        JointIndexCodec codec(dims);
        std::vector<double> probs(codec.size(), 1.0);
        for (std::size_t flat = 0; flat < codec.size(); ++flat) {
            auto idx = codec.decode(flat);
            for (std::size_t a = 0; a < factors.size(); ++a) {
                probs[flat] *= factors[a][idx[a]];
            }
        }
        return JointState(std::move(codec), std::move(probs));
    }

    static JointState product(const std::vector<DiagonalState>& factors) {
        std::vector<std::vector<double>> raw;
        for (const auto& f : factors) {
            raw.push_back(f.probs());
        }
        return product(raw);
    }

    const JointIndexCodec& codec() const { return codec_; }
    const std::vector<double>& probs() const { return probs_; }
    double operator[](std::size_t flat) const { return probs_[flat]; }
    double at(const std::vector<std::size_t>& idx) const { return probs_[codec_.encode(idx)]; }

    std::vector<double> marginal(std::size_t axis) const {
        if (axis >= codec_.axes()) {
            throw invalid_input("axis out of range");
        }
        std::vector<double> m(codec_.dim(axis), 0.0);
        for (std::size_t flat = 0; flat < probs_.size(); ++flat) {
            m[(flat / codec_.stride(axis)) % codec_.dim(axis)] += probs_[flat];
        }
        return m;
    }

    // p'_dst = p_dst + a^2 (p_src - p_dst); a full swap exchanges the entries exactly.
    void rotate(std::size_t src, std::size_t dst, double intensity) {
        if (src >= probs_.size() || dst >= probs_.size() || src == dst) {
            throw invalid_input("rotation indices out of range or equal");
        }
        if (!(intensity >= 0.0 && intensity <= 1.0)) {
            throw invalid_input("rotation intensity must lie in [0,1]");
        }
        if (intensity == 1.0) {
            std::swap(probs_[src], probs_[dst]);
            return;
        }
        const double moved = intensity * (probs_[src] - probs_[dst]);
        probs_[dst] += moved;
        probs_[src] -= moved;
        clamp(probs_[src]);
        clamp(probs_[dst]);
    }

private:
    static void clamp(double& p) {
        if (p < 0.0) {
            if (p < -kClampTol) {
                throw verification_failure("negative population beyond rounding noise");
            }
            p = 0.0;
        }
    }

    JointIndexCodec codec_;
    std::vector<double> probs_;
};

struct TwoLevelRotation {
    std::size_t src = 0;
    std::size_t dst = 0;
    double intensity = 0.0;
};

struct Current {
    std::size_t src = 0;
    std::size_t dst = 0;
    double magnitude = 0.0;
};

inline JointState apply_rotation(JointState state, const TwoLevelRotation& rot) {
    state.rotate(rot.src, rot.dst, rot.intensity);
    return state;
}

inline double swap_current(const JointState& state, std::size_t src, std::size_t dst) {
    if (src >= state.codec().size() || dst >= state.codec().size()) {
        throw invalid_input("index out of range");
    }
    return std::max(state[src] - state[dst], 0.0);
}

inline std::vector<double> catalyst_marginal_delta(const JointState& before,
                                                   const JointState& after,
                                                   std::size_t catalyst_axis) {
    if (!(before.codec() == after.codec())) {
        throw invalid_input("codec mismatch");
    }
    auto mb = before.marginal(catalyst_axis);
    auto ma = after.marginal(catalyst_axis);
    for (std::size_t k = 0; k < mb.size(); ++k) {
        ma[k] -= mb[k];
    }
    return ma;
}

// Passive with respect to the Hamiltonian on `axis` when every population in a
// lower sector is at least every population in the next sector up.
inline bool is_passive_joint(const JointState& state, std::size_t axis = 0) {
    const auto& c = state.codec();
    if (axis >= c.axes()) {
        throw invalid_input("axis out of range");
    }
    const std::size_t d = c.dim(axis);
    std::vector<double> lo(d, std::numeric_limits<double>::infinity());
    std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
    for (std::size_t f = 0; f < c.size(); ++f) {
        const std::size_t k = (f / c.stride(axis)) % d;
        lo[k] = std::min(lo[k], state[f]);
        hi[k] = std::max(hi[k], state[f]);
    }
    for (std::size_t k = 0; k + 1 < d; ++k) {
        if (hi[k + 1] - lo[k] > kEps) {
            return false;
        }
    }
    return true;
}

// A multi-index where std::nullopt is a spectator factor (identity on that axis).
using Pattern = std::vector<std::optional<std::size_t>>;

// Two-level rotation between src and dst lifted by identity on spectator factors.
struct Edge {
    Pattern src;
    Pattern dst;

    bool operator==(const Edge&) const = default;
};

inline std::vector<std::pair<std::size_t, std::size_t>> expand(const JointIndexCodec& codec,
                                                               const Edge& e) {
    const std::size_t n = codec.axes();
    if (e.src.size() != n || e.dst.size() != n) {
        throw invalid_input("edge pattern has the wrong number of factors");
    }
    std::vector<std::size_t> free_axes;
    for (std::size_t a = 0; a < n; ++a) {
        if (e.src[a].has_value() != e.dst[a].has_value()) {
            throw invalid_input("spectator factors must match in src and dst");
        }
        if (!e.src[a]) {
            free_axes.push_back(a);
        } else if (*e.src[a] >= codec.dim(a) || *e.dst[a] >= codec.dim(a)) {
            throw invalid_input("edge index out of range");
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::vector<std::size_t> s(n), d(n), counter(free_axes.size(), 0);
    while (true) {
        for (std::size_t a = 0; a < n; ++a) {
            if (e.src[a]) {
                s[a] = *e.src[a];
                d[a] = *e.dst[a];
            }
        }
        for (std::size_t f = 0; f < free_axes.size(); ++f) {
            s[free_axes[f]] = d[free_axes[f]] = counter[f];
        }
        out.emplace_back(codec.encode(s), codec.encode(d));
        std::size_t f = free_axes.size();
        while (f > 0) {
            --f;
            if (++counter[f] < codec.dim(free_axes[f])) {
                break;
            }
            counter[f] = 0;
            if (f == 0) {
                return out;
            }
        }
        if (free_axes.empty()) {
            return out;
        }
    }
}

// Sum of the expanded differences; a spectator edge moves the whole block.
inline double edge_swap_current(const JointState& state, const Edge& e) {
    double total = 0.0;
    for (auto [s, d] : expand(state.codec(), e)) {
        const double diff = state[s] - state[d];
        if (diff < -kEps) {
            return 0.0;
        }
        total += std::max(diff, 0.0);
    }
    return total;
}

struct Rotation {
    Edge edge;
    double intensity = 0.0;
};

inline std::vector<TwoLevelRotation> flatten(const JointIndexCodec& codec,
                                             const std::vector<Rotation>& rotations) {
    std::vector<TwoLevelRotation> out;
    for (const auto& r : rotations) {
        for (auto [s, d] : expand(codec, r.edge)) {
            out.push_back({s, d, r.intensity});
        }
    }
    return out;
}

inline void require_disjoint(const JointIndexCodec& codec, const std::vector<Rotation>& rotations) {
    std::set<std::size_t> used;
    for (const auto& r : flatten(codec, rotations)) {
        if (!used.insert(r.src).second || !used.insert(r.dst).second) {
            throw no_loop("rotation supports overlap");
        }
    }
}

inline JointState apply_rotations(JointState state, const std::vector<Rotation>& rotations) {
    for (const auto& r : flatten(state.codec(), rotations)) {
        state.rotate(r.src, r.dst, r.intensity);
    }
    return state;
}

using Chain = std::vector<Edge>;

struct Loop {
    Edge cooling;
    Chain restoring;
};

inline std::size_t catalyst_level(const Pattern& p) {
    if (!p.back()) {
        throw invalid_input("loop edges must fix the catalyst level");
    }
    return *p.back();
}

// Intensities a_x^2 = J_min / J_x. Parallel restoring edges between the same
// pair of catalyst levels share one step of the chain and split its flow.
inline std::vector<Rotation> solve_uniform_loop(const JointState& state, const Loop& loop) {
    if (loop.restoring.empty()) {
        throw no_loop("a loop needs a restoring chain");
    }
    const std::size_t from = catalyst_level(loop.cooling.src);
    const std::size_t to = catalyst_level(loop.cooling.dst);
    if (from == to) {
        throw no_loop("cooling edge does not move catalyst population");
    }
    const double j_cool = edge_swap_current(state, loop.cooling);
    if (j_cool <= kEps) {
        throw no_loop("cooling swap current is not positive");
    }

    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> steps;
    for (std::size_t e = 0; e < loop.restoring.size(); ++e) {
        const auto& edge = loop.restoring[e];
        const std::size_t s = catalyst_level(edge.src);
        const std::size_t d = catalyst_level(edge.dst);
        if (s == d) {
            throw no_loop("restoring edge does not move catalyst population");
        }
        steps[{s, d}].push_back(e);
    }

    // The steps must form one simple path from `to` back to `from`.
    std::map<std::size_t, std::pair<std::size_t, std::size_t>> next;
    for (const auto& [key, edges] : steps) {
        if (!next.emplace(key.first, key).second) {
            throw no_loop("restoring chain branches");
        }
    }
    std::set<std::size_t> visited{to};
    std::size_t level = to;
    std::size_t used = 0;
    while (level != from) {
        auto it = next.find(level);
        if (it == next.end()) {
            throw no_loop("restoring chain does not close the loop");
        }
        level = it->second.second;
        if (level != from && !visited.insert(level).second) {
            throw no_loop("restoring chain revisits a catalyst level");
        }
        ++used;
    }
    if (used != steps.size()) {
        throw no_loop("restoring chain has edges outside the loop");
    }

    double j_min = j_cool;
    std::map<std::pair<std::size_t, std::size_t>, double> capacity;
    for (const auto& [key, edges] : steps) {
        double cap = 0.0;
        for (std::size_t e : edges) {
            const double j = edge_swap_current(state, loop.restoring[e]);
            if (j <= kEps) {
                throw no_loop("restoring swap current is not positive");
            }
            cap += j;
        }
        capacity[key] = cap;
        j_min = std::min(j_min, cap);
    }

    std::vector<Rotation> out;
    out.push_back({loop.cooling, j_cool == j_min ? 1.0 : j_min / j_cool});
    std::vector<std::pair<std::size_t, std::size_t>> order;
    for (std::size_t e = 0; e < loop.restoring.size(); ++e) {
        order.emplace_back(std::min(catalyst_level(loop.restoring[e].src),
                                    catalyst_level(loop.restoring[e].dst)),
                           e);
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto [lvl, e] : order) {
        const auto& edge = loop.restoring[e];
        const double cap = capacity[{catalyst_level(edge.src), catalyst_level(edge.dst)}];
        out.push_back({edge, cap == j_min ? 1.0 : j_min / cap});
    }
    require_disjoint(state.codec(), out);
    return out;
}

// Line format: "<src> <dst> <intensity>" with 1-based comma-separated
// multi-indices and '*' for a spectator factor.
inline std::string format_pattern(const Pattern& p) {
    std::string s;
    for (std::size_t a = 0; a < p.size(); ++a) {
        if (a) {
            s += ',';
        }
        s += p[a] ? std::to_string(*p[a] + 1) : std::string("*");
    }
    return s;
}

inline Pattern parse_pattern(const std::string& text) {
    Pattern p;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "*") {
            p.push_back(std::nullopt);
            continue;
        }
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(tok, &pos);
        } catch (const std::exception&) {
            throw invalid_input("bad plan index '" + tok + "'");
        }
        if (pos != tok.size() || v == 0) {
            throw invalid_input("bad plan index '" + tok + "'");
        }
        p.push_back(v - 1);
    }
    return p;
}

inline std::string serialize_rotations(const std::vector<Rotation>& rotations) {
    std::string out;
    for (const auto& r : rotations) {
        out += format_pattern(r.edge.src) + ' ' + format_pattern(r.edge.dst) + ' ' +
               format_number(r.intensity) + '\n';
    }
    return out;
}

inline std::vector<Rotation> parse_rotations(const std::string& text) {
    std::vector<Rotation> out;
    std::stringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::stringstream ls(line);
        std::string s, d;
        double a = 0.0;
        if (!(ls >> s >> d >> a)) {
            throw invalid_input("bad plan line '" + line + "'");
        }
        out.push_back({{parse_pattern(s), parse_pattern(d)}, a});
    }
    return out;
}

} // namespace catcool
