// state.hpp
// Diagonal states, thermal states, majorization and passivity

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace catcool {

inline constexpr double kInfiniteBeta = std::numeric_limits<double>::infinity();

class EnergyLevels {
public:
    EnergyLevels() = default;

    explicit EnergyLevels(std::vector<double> energies) : energies_(std::move(energies)) {
        if (energies_.size() < 2) {
            throw invalid_input("energy levels need at least two entries");
        }
        for (std::size_t i = 0; i < energies_.size(); ++i) {
            if (!std::isfinite(energies_[i])) {
                throw invalid_input("energy levels must be finite");
            }
            if (i > 0 && energies_[i] < energies_[i - 1]) {
                throw invalid_input("energy levels must be non-decreasing");
            }
        }
    }

    std::size_t size() const { return energies_.size(); }
    double operator[](std::size_t i) const { return energies_[i]; }
    const std::vector<double>& values() const { return energies_; }

private:
    std::vector<double> energies_;
};

// Sorted probability vector. Index 0 is the label "1" of the most populated level.
class DiagonalState {
public:
    DiagonalState() = default;

    explicit DiagonalState(std::vector<double> probs,
                           std::optional<EnergyLevels> levels = std::nullopt)
        : probs_(std::move(probs)), levels_(std::move(levels)) {
        if (probs_.empty()) {
            throw invalid_input("a state needs at least one level");
        }
        double sum = 0.0;
        for (double& p : probs_) {
            if (!std::isfinite(p)) {
                throw invalid_input("probabilities must be finite");
            }
            if (p < 0.0 && p >= -kClampTol) {
                p = 0.0;
            }
            if (p < 0.0 || p > 1.0 + kClampTol) {
                throw invalid_input("probabilities must lie in [0,1]");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > kEps) {
            throw invalid_input("probabilities must sum to 1");
        }
        for (std::size_t k = 0; k + 1 < probs_.size(); ++k) {
            if (probs_[k + 1] - probs_[k] > kClampTol) {
                throw invalid_input("probabilities must be sorted non-increasing");
            }
        }
        if (levels_ && levels_->size() != probs_.size()) {
            throw invalid_input("energy levels and probabilities differ in length");
        }
    }

    // Rescales to unit sum first; for states assembled from products or ratios.
    static DiagonalState normalized(std::vector<double> weights,
                                    std::optional<EnergyLevels> levels = std::nullopt) {
        double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
        if (!(sum > 0.0) || !std::isfinite(sum)) {
            throw invalid_input("weights must have a positive finite sum");
        }
        for (double& w : weights) {
            w /= sum;
        }
        return DiagonalState(std::move(weights), std::move(levels));
    }

    static DiagonalState uniform(std::size_t d) {
        return DiagonalState(std::vector<double>(d, 1.0 / static_cast<double>(d)));
    }

    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t k) const { return probs_[k]; }
    double front() const { return probs_.front(); }
    double back() const { return probs_.back(); }
    const std::vector<double>& probs() const { return probs_; }
    const std::optional<EnergyLevels>& levels() const { return levels_; }

    bool fully_mixed() const { return probs_.front() - probs_.back() <= kEps; }

private:
    std::vector<double> probs_;
    std::optional<EnergyLevels> levels_;
};

inline DiagonalState thermal_state(const EnergyLevels& levels, double beta) {
    if (std::isnan(beta) || beta < 0.0) {
        throw invalid_input("inverse temperature must be non-negative");
    }
    const std::size_t d = levels.size();
    std::vector<double> w(d, 0.0);
    const double e0 = levels[0];
    if (std::isinf(beta)) {
        // Ground set only; equal energies share the weight.
        for (std::size_t k = 0; k < d; ++k) {
            w[k] = (levels[k] == e0) ? 1.0 : 0.0;
        }
    } else {
        for (std::size_t k = 0; k < d; ++k) {
            w[k] = std::exp(-beta * (levels[k] - e0));
        }
    }
    return DiagonalState::normalized(std::move(w), levels);
}

inline std::vector<double> sorted_descending(std::vector<double> v) {
    std::stable_sort(v.begin(), v.end(), std::greater<>());
    return v;
}

// Largest increase of a descending prefix sum of `after` over `before`;
// positive means `before` does not majorize `after`.
struct PrefixExcess {
    std::size_t length = 0;  // prefix length, i.e. the 1-based label of its last element
    double amount = 0.0;
};

inline PrefixExcess max_prefix_excess(const std::vector<double>& before,
                                      const std::vector<double>& after) {
    if (before.size() != after.size()) {
        throw invalid_input("dimension mismatch");
    }
    auto b = sorted_descending(before);
    auto a = sorted_descending(after);
    PrefixExcess best{0, -std::numeric_limits<double>::infinity()};
    double sb = 0.0, sa = 0.0;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
        sb += b[i];
        sa += a[i];
        if (sa - sb > best.amount) {
            best = {i + 1, sa - sb};
        }
    }
    if (b.size() < 2) {
        best = {0, 0.0};
    }
    return best;
}

inline bool majorizes(const std::vector<double>& r, const std::vector<double>& q) {
    if (r.size() != q.size()) {
        throw invalid_input("majorization needs equal dimensions");
    }
    return max_prefix_excess(r, q).amount <= kEps;
}

inline bool majorizes(const DiagonalState& r, const DiagonalState& q) {
    return majorizes(r.probs(), q.probs());
}

// No joint permutation lowers the cold energy: every adjacent cold pair fails the
// cooling swap |(i+1)_c 1_h> <-> |i_c d_h>.
inline bool is_passive_wrt_cold(const DiagonalState& pc, const DiagonalState& ph) {
    for (std::size_t i = 0; i + 1 < pc.size(); ++i) {
        if (pc[i + 1] * ph.front() - pc[i] * ph.back() > kEps) {
            return false;
        }
    }
    return true;
}

inline double entropy(const std::vector<double>& p) {
    double s = 0.0;
    for (double x : p) {
        if (x > 0.0) {
            s -= x * std::log(x);
        }
    }
    return s;
}

inline double entropy(const DiagonalState& p) { return entropy(p.probs()); }

} // namespace catcool
