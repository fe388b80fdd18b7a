// catcool command line: every analysis as a subcommand writing CSV.
// Exit codes: 0 ok, 2 invalid input, 3 out of regime, 4 verification failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "catcool/catcool.hpp"
#include "catcool/oracles.hpp"

using namespace catcool;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitRegime = 3;
constexpr int kExitVerify = 4;

// Flags shared by every subcommand.
struct Globals {
    std::string config_path;
    std::string output_path;
    std::uint64_t seed = 12345;
    SweepConfig config;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw invalid_input("cannot read '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        v.push_back(detail::parse_double(detail::trim(tok), what));
    }
    if (v.empty()) {
        throw invalid_input(what + " is empty");
    }
    return v;
}

// Hand-typed distributions: off by up to 1e-9 is rounding, up to 1e-6 gets
// renormalized with a warning, anything more is rejected.
DiagonalState parse_state(const std::string& text, const std::string& what) {
    auto v = parse_list(text, what);
    double sum = 0.0;
    for (double p : v) {
        if (!std::isfinite(p) || p < 0.0) {
            throw invalid_input(what + " has a negative or non-finite entry");
        }
        sum += p;
    }
    const double off = std::abs(sum - 1.0);
    if (off > 1e-6) {
        throw invalid_input(what + " sums to " + format_number(sum) + ", not 1");
    }
    if (off > 1e-9) {
        std::cerr << "warning: " << what << " sums to " << format_number(sum)
                  << "; renormalized\n";
    }
    return DiagonalState::normalized(v);
}

std::string state_text(const DiagonalState& s) {
    std::string out;
    for (std::size_t k = 0; k < s.size(); ++k) {
        out += (k ? " " : "") + format_number(s[k]);
    }
    return out;
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

// key,value output for single results.
class KeyValue {
public:
    KeyValue& add(const std::string& k, const std::string& v) {
        text_ += k + ',' + v + '\n';
        return *this;
    }
    KeyValue& add(const std::string& k, double v) { return add(k, format_number(v)); }
    KeyValue& add(const std::string& k, bool v) { return add(k, bool_text(v)); }
    KeyValue& add(const std::string& k, std::size_t v) { return add(k, std::to_string(v)); }
    std::string str() const { return "key,value\n" + text_; }

private:
    std::string text_;
};

void emit(const Globals& g, const std::string& csv) {
    std::string path = g.output_path;
    if (path.empty() && g.config.output) {
        path = *g.config.output;
    }
    if (path.empty()) {
        std::cout << csv;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw invalid_input("cannot write '" + path + "'");
    }
    out << csv;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw invalid_input("cannot write '" + path + "'");
    }
    out << text;
}

// Flag value, else config value, else default.
double pick(const std::optional<double>& flag, const Globals& g, const std::string& key,
            double fallback) {
    if (flag) {
        return *flag;
    }
    auto it = g.config.values.find(key);
    return it == g.config.values.end() ? fallback : detail::parse_double(it->second, key);
}

// A fixed value on the command line collapses the grid to one point.
std::vector<double> axis(const std::optional<double>& flag, const Globals& g,
                         const std::string& key, const GridSpec& fallback) {
    if (flag) {
        return {*flag};
    }
    if (auto it = g.config.values.find(key); it != g.config.values.end()) {
        return {detail::parse_double(it->second, key)};
    }
    auto it = g.config.grids.find(key);
    return (it == g.config.grids.end() ? fallback : it->second).values();
}

double tolerance(const Globals& g, const std::string& key, double fallback) {
    auto it = g.config.tolerances.find(key);
    return it == g.config.tolerances.end() ? fallback : it->second;
}

std::vector<std::size_t> parse_sizes(const std::string& text, const std::string& what) {
    std::vector<std::size_t> out;
    for (double v : parse_list(text, what)) {
        if (!(v >= 1.0) || v != std::floor(v)) {
            throw invalid_input(what + " must hold positive integers");
        }
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

void add_certificate(KeyValue& kv, const Cnu1Certificate& c) {
    kv.add("i", c.i + 1)
        .add("l", c.l + 1)
        .add("lp", c.lp + 1)
        .add("chain_kind", to_string(c.chain_kind))
        .add("loop_current", c.loop_current)
        .add("cooling_src", format_pattern(c.cooling.src))
        .add("cooling_dst", format_pattern(c.cooling.dst))
        .add("chain_edges", c.chain_edges.size());
}

void add_report(KeyValue& kv, const VerificationReport& r) {
    kv.add("catalyst_deviation", r.catalyst_deviation)
        .add("majorization_prefix", r.majorization_excess.length)
        .add("majorization_excess", r.majorization_excess.amount)
        .add("realized_cooling_current", r.realized_cooling_current);
    for (std::size_t i = 0; i < r.cold_delta.size(); ++i) {
        kv.add("delta_p" + std::to_string(i + 1) + "c", r.cold_delta[i]);
    }
    if (r.delta_energy) {
        kv.add("delta_energy", *r.delta_energy);
    }
    if (r.delta_ground_population) {
        kv.add("delta_ground_population", *r.delta_ground_population);
    }
}

// ---- subcommands ------------------------------------------------------------

struct StateFlags {
    std::string pc, ph, pv, ps;
};

void run_passivity(const Globals& g, const StateFlags& f) {
    auto pc = parse_state(f.pc, "--pc");
    auto ph = parse_state(f.ph, "--ph");
    KeyValue kv;
    kv.add("passive", is_passive_wrt_cold(pc, ph));
    emit(g, kv.str());
}

void run_cnu1_check(const Globals& g, const StateFlags& f) {
    auto pv = parse_state(f.pv, "--pv");
    std::optional<Cnu1Certificate> cert;
    if (!f.ps.empty()) {
        cert = check_cnu1_general(parse_state(f.ps, "--ps"), pv);
    } else {
        cert = check_cnu1(parse_state(f.pc, "--pc"), parse_state(f.ph, "--ph"), pv);
    }
    KeyValue kv;
    kv.add("exists", cert.has_value());
    if (cert) {
        add_certificate(kv, *cert);
    }
    emit(g, kv.str());
}

struct RunFlags {
    std::string plan_in, plan_out, energies;
    std::optional<std::size_t> ground;
};

void run_cnu1_run(const Globals& g, const StateFlags& f, const RunFlags& r) {
    auto pv = parse_state(f.pv, "--pv");
    const bool general = !f.ps.empty();
    std::optional<DiagonalState> ps, pc, ph;
    if (general) {
        ps = parse_state(f.ps, "--ps");
    } else {
        pc = parse_state(f.pc, "--pc");
        ph = parse_state(f.ph, "--ph");
    }
    auto joint = general ? JointState::product({*ps, pv}) : JointState::product({*pc, *ph, pv});
    TransformPlan plan;
    KeyValue kv;
    if (!r.plan_in.empty()) {
        plan.dims = joint.codec().dims();
        plan.rotations = parse_rotations(read_file(r.plan_in));
        kv.add("plan_source", std::string("file"));
    } else {
        auto cert = general ? check_cnu1_general(*ps, pv) : check_cnu1(*pc, *ph, pv);
        if (!cert) {
            throw no_loop("no certificate for these states");
        }
        plan = general ? build_plan_general(*ps, pv, *cert) : build_plan(*pc, *ph, pv, *cert);
        kv.add("plan_source", std::string("certificate"));
        add_certificate(kv, *cert);
    }
    if (!r.plan_out.empty()) {
        write_text(r.plan_out, serialize_rotations(plan.rotations));
    }
    ExecuteOptions opt;
    opt.tolerance = tolerance(g, "catalyst", kCatalystTol);
    if (!r.energies.empty()) {
        opt.cold_energies = parse_list(r.energies, "--energies");
    }
    opt.ground_degeneracy = r.ground;
    auto res = execute_plan(joint, plan, opt);
    kv.add("rotations", plan.rotations.size());
    add_report(kv, res.report);
    emit(g, kv.str());
}

void run_synthesize(const Globals& g, const StateFlags& f, const RunFlags& r) {
    auto pc = parse_state(f.pc, "--pc");
    SynthesisResult s = r.ground ? synthesize_ground_catalyst(pc, *r.ground)
                                 : synthesize_catalyst(pc, parse_state(f.ph, "--ph"));
    TransformPlan plan;
    JointState joint = r.ground ? JointState::product({pc, s.catalyst})
                                : JointState::product({pc, parse_state(f.ph, "--ph"), s.catalyst});
    if (r.ground) {
        plan = build_plan_general(pc, s.catalyst, s.certificate);
    } else {
        plan = build_plan(pc, parse_state(f.ph, "--ph"), s.catalyst, s.certificate);
    }
    if (!r.plan_out.empty()) {
        write_text(r.plan_out, serialize_rotations(plan.rotations));
    }
    ExecuteOptions opt;
    opt.tolerance = tolerance(g, "catalyst", kCatalystTol);
    opt.ground_degeneracy = r.ground;
    auto res = execute_plan(joint, plan, opt);
    KeyValue kv;
    kv.add("condition", std::to_string(s.condition))
        .add("ratio", s.ratio)
        .add("catalyst_dim", s.catalyst.size())
        .add("catalyst", state_text(s.catalyst));
    add_certificate(kv, s.certificate);
    add_report(kv, res.report);
    emit(g, kv.str());
}

void run_diagram(const Globals& g, const StateFlags& f, bool with_plan) {
    auto pc = parse_state(f.pc, "--pc");
    auto ph = parse_state(f.ph, "--ph");
    auto pv = parse_state(f.pv, "--pv");
    std::optional<TransformPlan> plan;
    if (with_plan) {
        if (auto cert = check_cnu1(pc, ph, pv)) {
            plan = build_plan(pc, ph, pv, *cert);
        }
    }
    emit(g, diagram_csv(diagram_export(pc, ph, pv, plan)));
}

struct QubitFlags {
    std::optional<double> p2c, p2h;
    std::string ranks = "2,3,4,5";
};

void run_optimal_qubit(const Globals& g, const QubitFlags& f) {
    const auto p2c_axis = axis(f.p2c, g, "p2c", {0.01, 0.5, 50, false});
    const auto p2h_axis = axis(f.p2h, g, "p2h", {0.01, 0.5, 50, false});
    const auto ranks = parse_sizes(f.ranks, "--n");
    // Points with p2c > p2h lie outside the model and are skipped in sweeps.
    const bool single = p2c_axis.size() == 1 && p2h_axis.size() == 1;
    std::string csv = "p2c,p2h,n,J_cool_max,p1c_final,in_cooling_region\n";
    for (double p2c : p2c_axis) {
        for (double p2h : p2h_axis) {
            if (p2c > p2h && !single) {
                continue;
            }
            for (std::size_t n : ranks) {
                auto s = optimal_qubit_catalyst(p2c, p2h, n);
                csv += format_number(p2c) + ',' + format_number(p2h) + ',' + std::to_string(n) +
                       ',' + format_number(s.j_max) + ',' + format_number(s.p1c_final) + ',' +
                       bool_text(s.region == CoolingRegion::inside) + '\n';
            }
        }
    }
    emit(g, csv);
}

struct EnhanceFlags {
    std::string fig;
    std::string pc, ph;
    std::optional<double> x, e_cold, p1v;
};

void run_enhance(const Globals& g, const EnhanceFlags& f) {
    if (f.fig.empty()) {
        if (f.pc.empty() || f.ph.empty()) {
            throw invalid_input("enhance needs --fig or both --pc and --ph");
        }
        auto pc = parse_state(f.pc, "--pc");
        auto ph = parse_state(f.ph, "--ph");
        auto e = build_enhancement_plan(pc, ph);
        ExecuteOptions opt;
        opt.tolerance = tolerance(g, "catalyst", kCatalystTol);
        auto res = execute_plan(e.initial, e.plan, opt);
        KeyValue kv;
        kv.add("p1c_initial", pc[0])
            .add("p1c_hot_only", pc[0] + e.pre.delta_p1c)
            .add("p1c_catalytic", res.state.marginal(0)[0])
            .add("hot_only_swaps", e.pre.swaps.size())
            .add("catalyst_dim", e.catalyst.size())
            .add("catalyst", state_text(e.catalyst))
            .add("rotations", e.plan.rotations.size());
        add_report(kv, res.report);
        emit(g, kv.str());
        return;
    }
    std::string csv;
    if (f.fig == "7a") {
        const double x = pick(f.x, g, "x", 0.01);
        csv = "exp_neg_beta_c_eps,p1c_initial,p1c_hot_only,p1c_catalytic\n";
        for (double e : axis(f.e_cold, g, "exp_neg_beta_c_eps", {x, 1.0, 100, false})) {
            auto r = catalytic_enhancement_degenerate3(e / (1.0 + e), x, f.p1v);
            csv += format_number(e) + ',' + format_number(r.p1c_initial) + ',' +
                   format_number(r.p1c_hot_only) + ',' + format_number(r.p1c_final) + '\n';
        }
    } else if (f.fig == "8") {
        const double e = pick(f.e_cold, g, "exp_neg_beta_c_eps", 0.4);
        const double p2c = e / (1.0 + e);
        csv = "exp_neg_beta_h_eps3,J_cool,J_total\n";
        for (double x : axis(f.x, g, "x", {e / 100.0, e, 100, false})) {
            auto r = catalytic_enhancement_degenerate3(p2c, x, f.p1v);
            csv += format_number(x) + ',' + format_number(r.j_cool) + ',' +
                   format_number(r.j_cool + r.j_cool_prime) + '\n';
        }
    } else {
        throw invalid_input("--fig must be 7a or 8");
    }
    emit(g, csv);
}

struct MbcFlags {
    std::string fig;
    std::optional<std::size_t> N, Nc, k_max;
    std::optional<double> p2;
};

void run_mbc_vs_cc(const Globals& g, const MbcFlags& f) {
    if (f.fig.empty()) {
        if (!f.N || !f.Nc || !f.p2) {
            throw invalid_input("mbc-vs-cc needs --N, --Nc and --p2 (or --fig)");
        }
        QubitEnsembleParams q{*f.N, *f.Nc, *f.p2};
        auto r = performance_ratio(q);
        auto opt = optimal_nc_comparison(q.N, q.p2);
        KeyValue kv;
        kv.add("q_mbc_lower", r.q_mbc.lower)
            .add("q_mbc_upper", r.q_mbc.upper)
            .add("q_mbc_exact", r.q_mbc.exact)
            .add("q_cc", r.q_cc)
            .add("gamma_lower", r.gamma_lower)
            .add("gamma_upper", r.gamma_upper)
            .add("gamma_exact", r.gamma_exact)
            .add("regime", to_string(r.regime))
            .add("boundary", r.boundary)
            .add("cc_advantage_threshold", cc_advantage_threshold(q.p2))
            .add("optimal_nc", opt.argmax_nc)
            .add("max_q_cc", opt.max_q_cc)
            .add("mbc_necessary_threshold", opt.necessary_threshold)
            .add("optimal_ratio", opt.ratio_closed);
        emit(g, kv.str());
        return;
    }
    std::string csv;
    if (f.fig == "10") {
        const std::size_t k_max = f.k_max.value_or(14);
        auto table = verify_coefficient_conjecture(
            k_max, axis(f.p2, g, "p2", {0.0, 0.5, 100, false}));
        csv = "p2,k,xi\n";
        for (std::size_t r = 0; r < table.xi.size(); ++r) {
            for (std::size_t c = 0; c < table.p2_grid.size(); ++c) {
                csv += format_number(table.p2_grid[c]) + ',' + std::to_string(r + 2) + ',' +
                       format_number(table.xi[r][c]) + '\n';
            }
        }
        if (!table.conjecture_holds) {
            emit(g, csv);
            throw verification_failure("xi(k) exceeds xi(2) on the grid");
        }
    } else if (f.fig == "11") {
        const std::size_t N = f.N.value_or(210);
        // beta -> 0 is p2 = 1/2 and beta -> inf is p2 = 0; --p2 adds one finite curve.
        std::vector<std::pair<std::string, double>> curves{{"0", 0.5}, {"inf", 0.0}};
        if (f.p2) {
            curves.emplace_back("p2=" + format_number(*f.p2), *f.p2);
        }
        csv = "Nc_over_N,beta_label,gamma_or_bound,is_exact\n";
        for (const auto& [label, p2] : curves) {
            for (std::size_t nc = 1; nc < N; ++nc) {
                auto r = performance_ratio({N, nc, p2});
                csv += format_number(static_cast<double>(nc) / static_cast<double>(N)) + ',' +
                       label + ',' + format_number(r.gamma_exact ? r.gamma_lower : r.gamma_upper) +
                       ',' + bool_text(r.gamma_exact) + '\n';
            }
        }
    } else {
        throw invalid_input("--fig must be 10 or 11");
    }
    emit(g, csv);
}

struct ThermoFlags {
    std::optional<double> ratio, eps3, x, p1v;
    bool t_units = false;
    bool fd_check = false;
};

void run_thermometry(const Globals& g, const ThermoFlags& f) {
    const double ratio = pick(f.ratio, g, "ratio", 0.3);
    const double eps3 = pick(f.eps3, g, "eps3", 1.0);
    const auto grid = axis(f.x, g, "x", {1e-4, 1.0, 200, true});
    std::string csv = "x,sigma_prime,sigma_double_prime,cramer_rao,in_optimal_regime";
    if (f.t_units) {
        csv += ",sigma_prime_T,sigma_double_prime_T";
    }
    if (f.fd_check) {
        csv += ",fd_rel_err_prime,fd_rel_err_double_prime";
    }
    csv += '\n';
    const double fd_tol = tolerance(g, "fd", 1e-6);
    double worst = 0.0;
    for (double x : grid) {
        if (!(x > 0.0 && x <= 1.0)) {
            throw invalid_input("x = exp(-beta eps3) must lie in (0, 1]");
        }
        auto s = make_thermometry_setup(ratio, eps3, -std::log(x) / eps3);
        if (f.p1v) {
            s.catalyst_p1v = *f.p1v;
        }
        const auto a = probe_after_optimal_swap(s);
        const auto c = sensitivity_after_catalytic(s);
        csv += format_number(x) + ',' + format_number(a.sigma) + ',' + format_number(c.sigma) +
               ',' + format_number(cramer_rao_bound(s.env_levels, s.beta)) + ',' +
               bool_text(thermometry_in_optimal_regime(s));
        if (f.t_units) {
            // sigma(T) = T^2 sigma(beta)
            const double t2 = 1.0 / (s.beta * s.beta);
            csv += ',' + format_number(t2 * a.sigma) + ',' + format_number(t2 * c.sigma);
        }
        if (f.fd_check) {
            const double ea =
                std::abs(finite_difference_dp1(s, false) - a.dp1_dbeta) / std::abs(a.dp1_dbeta);
            const double ec =
                std::abs(finite_difference_dp1(s, true) - c.dp1_dbeta) / std::abs(c.dp1_dbeta);
            worst = std::max({worst, ea, ec});
            csv += ',' + format_number(ea) + ',' + format_number(ec);
        }
        csv += '\n';
    }
    emit(g, csv);
    if (worst > fd_tol) {
        throw verification_failure("finite-difference check off by " + format_number(worst));
    }
}

struct OracleFlags {
    std::string kind = "all";
    std::size_t trials = 200;
};

void run_oracle(const Globals& g, const OracleFlags& f) {
    std::mt19937_64 rng(g.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    struct Tally {
        std::size_t trials = 0, disagreements = 0;
        double max_error = 0.0;
    };
    std::map<std::string, Tally> out;
    const bool all = f.kind == "all";
    bool known = all;
    if (all || f.kind == "passivity") {
        known = true;
        auto& t = out["passivity"];
        for (std::size_t n = 0; n < f.trials; ++n) {
            DiagonalState pc(oracle::random_sorted_state(rng, 2 + n % 3, 0.0));
            DiagonalState ph(oracle::random_sorted_state(rng, 2 + n % 2, 0.3));
            t.disagreements += is_passive_wrt_cold(pc, ph) != oracle::passive_by_enumeration(pc, ph);
            ++t.trials;
        }
    }
    if (all || f.kind == "cnu1") {
        known = true;
        auto& t = out["cnu1"];
        for (std::size_t n = 0; n < f.trials; ++n) {
            DiagonalState pc(oracle::random_sorted_state(rng, 2));
            DiagonalState ph(oracle::random_sorted_state(rng, 2));
            DiagonalState pv(oracle::random_sorted_state(rng, 2 + n % 2));
            t.disagreements += check_cnu1(pc, ph, pv).has_value() !=
                               oracle::cnu1_exists_by_enumeration(pc, ph, pv);
            ++t.trials;
        }
    }
    if (all || f.kind == "hot-only") {
        known = true;
        auto& t = out["hot-only"];
        for (std::size_t n = 0; n < f.trials; ++n) {
            DiagonalState pc(oracle::random_sorted_state(rng, 2, 0.0));
            DiagonalState ph(oracle::random_sorted_state(rng, 2 + n % 4, 0.0));
            std::vector<double> joint;
            for (double a : pc.probs()) {
                for (double b : ph.probs()) {
                    joint.push_back(a * b);
                }
            }
            const double err = std::abs(pc[0] + optimal_hot_only_cooling(pc, ph).delta_p1c -
                                        oracle::best_qubit_ground_population(joint, ph.size()));
            t.max_error = std::max(t.max_error, err);
            t.disagreements += err > 1e-12;
            ++t.trials;
        }
    }
    if (all || f.kind == "qubit-lp") {
        known = true;
        auto& t = out["qubit-lp"];
        for (std::size_t n = 0; n < f.trials; ++n) {
            double a = 0.01 + 0.49 * u(rng), b = 0.01 + 0.49 * u(rng);
            if (a > b) {
                std::swap(a, b);
            }
            const std::size_t rank = 2 + n % 4;
            const double err =
                std::abs(optimal_qubit_catalyst(a, b, rank).j_max - oracle::qubit_loop_lp_max(a, b, rank));
            t.max_error = std::max(t.max_error, err);
            t.disagreements += err > 1e-6;
            ++t.trials;
        }
    }
    if (!known) {
        throw invalid_input("--kind must be passivity, cnu1, hot-only, qubit-lp or all");
    }
    std::string csv = "kind,trials,disagreements,max_abs_error\n";
    std::size_t bad = 0;
    for (const auto& [kind, t] : out) {
        csv += kind + ',' + std::to_string(t.trials) + ',' + std::to_string(t.disagreements) +
               ',' + format_number(t.max_error) + '\n';
        bad += t.disagreements;
    }
    emit(g, csv);
    if (bad) {
        throw verification_failure(std::to_string(bad) + " oracle disagreements");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Catalytic cooling and thermometry calculator"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config_path, "key=value sweep config file");
    app.add_option("--output,-o", g.output_path, "write CSV here instead of stdout");
    app.add_option("--seed", g.seed, "seed for randomized oracle checks");

    StateFlags st;
    RunFlags rf;
    auto add_states = [&](CLI::App* sc, bool pc, bool ph, bool pv, bool ps) {
        if (pc) sc->add_option("--pc", st.pc, "cold populations, sorted non-increasing");
        if (ph) sc->add_option("--ph", st.ph, "hot populations");
        if (pv) sc->add_option("--pv", st.pv, "catalyst populations")->required();
        if (ps) sc->add_option("--ps", st.ps, "system populations (no hot object)");
    };

    auto* passivity = app.add_subcommand("passivity", "is the cold object passive under the hot one");
    passivity->add_option("--pc", st.pc)->required();
    passivity->add_option("--ph", st.ph)->required();

    auto* check = app.add_subcommand("cnu1-check", "search for a single-cycle cooling certificate");
    add_states(check, true, true, true, true);

    auto* run = app.add_subcommand("cnu1-run", "build and execute the certified plan");
    add_states(run, true, true, true, true);
    run->add_option("--plan", rf.plan_in, "execute this plan file instead");
    run->add_option("--plan-out", rf.plan_out, "save the plan");
    run->add_option("--energies", rf.energies, "cold energies for the energy change");
    run->add_option("--ground", rf.ground, "ground degeneracy of the cold object");

    auto* synth = app.add_subcommand("synthesize", "build a catalyst that enables cooling");
    synth->add_option("--pc", st.pc)->required();
    synth->add_option("--ph", st.ph);
    synth->add_option("--ground", rf.ground, "target a g-fold degenerate ground, no hot object");
    synth->add_option("--plan-out", rf.plan_out);

    bool with_plan = false;
    auto* diagram = app.add_subcommand("diagram", "log-population diagram data");
    add_states(diagram, true, true, true, false);
    diagram->add_flag("--with-plan", with_plan, "draw the certified loop");

    QubitFlags qf;
    auto* qubit = app.add_subcommand("optimal-qubit", "optimal catalyst for qubit cold and hot objects");
    qubit->add_option("--p2c", qf.p2c);
    qubit->add_option("--p2h", qf.p2h);
    qubit->add_option("--n", qf.ranks, "comma-separated catalyst ranks");

    EnhanceFlags ef;
    auto* enhance = app.add_subcommand("enhance", "catalytic boost after optimal hot-only cooling");
    enhance->add_option("--fig", ef.fig, "7a or 8");
    enhance->add_option("--pc", ef.pc);
    enhance->add_option("--ph", ef.ph);
    enhance->add_option("--x", ef.x, "exp(-beta_h eps3)");
    enhance->add_option("--ec", ef.e_cold, "exp(-beta_c eps)");
    enhance->add_option("--p1v", ef.p1v, "catalyst ground population");

    MbcFlags mf;
    auto* mbc = app.add_subcommand("mbc-vs-cc", "many-body versus catalytic cooling of qubit ensembles");
    mbc->add_option("--fig", mf.fig, "10 or 11");
    mbc->add_option("--N", mf.N);
    mbc->add_option("--Nc", mf.Nc);
    mbc->add_option("--p2", mf.p2);
    mbc->add_option("--kmax", mf.k_max);

    ThermoFlags tf;
    auto* thermo = app.add_subcommand("thermometry", "probe sensitivity with and without a catalyst");
    thermo->add_option("--ratio", tf.ratio, "probe p2/p1");
    thermo->add_option("--eps3", tf.eps3);
    thermo->add_option("--x", tf.x, "single exp(-beta eps3) value");
    thermo->add_option("--p1v", tf.p1v, "catalyst ground population");
    thermo->add_flag("--t-units", tf.t_units, "add sigma in temperature units");
    thermo->add_flag("--fd-check", tf.fd_check, "compare derivatives with finite differences");

    OracleFlags of;
    auto* orc = app.add_subcommand("oracle", "randomized brute-force cross-checks");
    orc->add_option("--kind", of.kind);
    orc->add_option("--trials", of.trials);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitInvalid;
    }

    try {
        if (!g.config_path.empty()) {
            g.config = parse_sweep_config(read_file(g.config_path));
        }
        if (*passivity) run_passivity(g, st);
        else if (*check) run_cnu1_check(g, st);
        else if (*run) run_cnu1_run(g, st, rf);
        else if (*synth) run_synthesize(g, st, rf);
        else if (*diagram) run_diagram(g, st, with_plan);
        else if (*qubit) run_optimal_qubit(g, qf);
        else if (*enhance) run_enhance(g, ef);
        else if (*mbc) run_mbc_vs_cc(g, mf);
        else if (*thermo) run_thermometry(g, tf);
        else if (*orc) run_oracle(g, of);
    } catch (const invalid_input& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const out_of_regime& e) {
        std::cerr << "out of regime: " << e.what() << '\n';
        return kExitRegime;
    } catch (const verification_failure& e) {
        std::cerr << "verification failed: " << e.what() << '\n';
        return kExitVerify;
    }
    return 0;
}
