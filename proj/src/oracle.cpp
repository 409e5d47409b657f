#include "storeoffer/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "storeoffer/errors.hpp"

namespace storeoffer {

namespace {

constexpr double kGridSlack = 1e-9;  // in units of eta

int floor_index(double value, double eta) {
    return static_cast<int>(std::floor(value / eta + kGridSlack));
}

int ceil_index(double value, double eta) {
    return static_cast<int>(std::ceil(value / eta - kGridSlack));
}

struct Window {
    int lo;
    int hi;
};

// Grid levels reachable from `level` in one slot without over-committing.
Window reachable(double level, double u, const StorageSpec& spec, const DiscretizationConfig& disc) {
    const double eta = disc.eta();
    const int lo = std::max(0, ceil_index(level - spec.discharge_rate, eta));
    const double top = std::min(spec.capacity, level + std::min(spec.charge_rate, u));
    const int hi = std::min(disc.levels(), floor_index(top, eta));
    return {lo, std::max(lo, hi)};
}

void check_disc(const StorageSpec& spec, const DiscretizationConfig& disc) {
    spec.validate();
    if (std::abs(disc.capacity() - spec.capacity) > 1e-9 * spec.capacity) {
        throw ValidationError("discretization does not match the storage capacity");
    }
}

}  // namespace

DiscretizationConfig DiscretizationConfig::from_eta(double capacity, double eta) {
    if (!(capacity > 0.0) || !(eta > 0.0)) throw ValidationError("capacity and eta must be > 0");
    if (eta > capacity * (1.0 + 1e-9)) throw ValidationError("infeasible discretization: eta > C");
    const double ratio = capacity / eta;
    const long levels = std::lround(ratio);
    if (levels < 1 || std::abs(static_cast<double>(levels) * eta - capacity) > 1e-9 * capacity) {
        throw ValidationError("C / eta must be an integer");
    }
    return DiscretizationConfig(capacity / static_cast<double>(levels), static_cast<int>(levels));
}

DiscretizationConfig DiscretizationConfig::from_levels(double capacity, int levels) {
    if (!(capacity > 0.0) || levels < 1) throw ValidationError("need C > 0 and at least one level");
    return DiscretizationConfig(capacity / levels, levels);
}

OptResult offline_opt_dp(const Trace& trace, const StorageSpec& spec, const DiscretizationConfig& disc) {
    check_disc(spec, disc);
    const std::size_t horizon = trace.horizon();
    const int n = disc.levels();
    const double eta = disc.eta();

    // value[k]: best profit from slot t onward starting at level k*eta.
    std::vector<double> value(n + 1, 0.0), next(n + 1, 0.0);
    std::vector<std::vector<int>> choice(horizon, std::vector<int>(n + 1, 0));
    std::deque<int> window;

    for (std::size_t t = horizon; t-- > 1;) {
        const double p = trace[t].price;
        const double u = trace[t].renewable_output;
        auto key = [&](int j) { return value[j] - p * (j * eta); };
        window.clear();
        int pushed = -1;
        for (int k = 0; k <= n; ++k) {
            const auto w = reachable(k * eta, u, spec, disc);
            while (pushed < w.hi) {
                ++pushed;
                // Keep the largest index among equal keys: smallest commitment.
                while (!window.empty() && key(window.back()) <= key(pushed)) window.pop_back();
                window.push_back(pushed);
            }
            while (window.front() < w.lo) window.pop_front();
            const int j = window.front();
            const double x = std::max(0.0, u + (k - j) * eta);
            next[k] = p * x + value[j];
            choice[t][k] = j;
        }
        std::swap(value, next);
    }

    // First slot from the exact initial level, which need not sit on the grid.
    const double z0 = spec.initial_level;
    const double p0 = trace[0].price;
    const double u0 = trace[0].renewable_output;
    const auto w0 = reachable(z0, u0, spec, disc);
    int best_j = w0.hi;
    double best = -1.0;
    for (int j = w0.hi; j >= w0.lo; --j) {
        const double x = std::max(0.0, u0 + z0 - j * eta);
        const double v = p0 * x + value[j];
        if (v > best) {
            best = v;
            best_j = j;
        }
    }

    OptResult out;
    out.total_profit = best;
    out.levels.push_back(z0);
    out.commitments.push_back(std::max(0.0, u0 + z0 - best_j * eta));
    out.levels.push_back(best_j * eta);
    int k = best_j;
    for (std::size_t t = 1; t < horizon; ++t) {
        const int j = choice[t][k];
        out.commitments.push_back(std::max(0.0, trace[t].renewable_output + (k - j) * eta));
        out.levels.push_back(j * eta);
        k = j;
    }
    return out;
}

namespace {

struct Enumerator {
    const Trace& trace;
    const StorageSpec& spec;
    double eta;

    // Best profit from slot t at `level`; fills `path` with the commitments.
    double search(std::size_t t, double level, std::vector<double>& path) const {
        if (t == trace.horizon()) return 0.0;
        const double p = trace[t].price;
        const double u = trace[t].renewable_output;
        const int actions = floor_index(u + std::min(level, spec.discharge_rate), eta);
        double best = -1.0;
        std::vector<double> best_tail, tail;
        for (int a = 0; a <= actions; ++a) {
            const double x = a * eta;
            const auto step = evolve_storage(level, spec, u, x);
            tail.clear();
            const double v = p * x + search(t + 1, step.next_level, tail);
            if (v > best) {
                best = v;
                best_tail = tail;
                best_tail.insert(best_tail.begin(), x);
            }
        }
        path = std::move(best_tail);
        return best;
    }
};

}  // namespace

OptResult offline_opt_exhaustive(const Trace& trace, const StorageSpec& spec,
                                 const DiscretizationConfig& disc) {
    check_disc(spec, disc);
    if (trace.horizon() > 6) throw BudgetExceeded("exhaustive oracle limited to T <= 6");
    if (disc.levels() > 8) throw BudgetExceeded("exhaustive oracle limited to C_d <= 8");
    for (const auto& s : trace.slots()) {
        const int actions =
            floor_index(s.renewable_output + std::min(spec.capacity, spec.discharge_rate), disc.eta()) + 1;
        if (actions > 12) throw BudgetExceeded("exhaustive oracle limited to 12 actions per slot");
    }

    Enumerator e{trace, spec, disc.eta()};
    OptResult out;
    out.total_profit = e.search(0, spec.initial_level, out.commitments);
    double level = spec.initial_level;
    out.levels.push_back(level);
    for (std::size_t t = 0; t < trace.horizon(); ++t) {
        level = evolve_storage(level, spec, trace[t].renewable_output, out.commitments[t]).next_level;
        out.levels.push_back(level);
    }
    return out;
}

CompetitiveRatio CompetitiveRatio::of(double opt_profit, double alg_profit) {
    if (alg_profit > 0.0) return finite(opt_profit / alg_profit);
    if (opt_profit <= 0.0) return finite(1.0);
    return unbounded();
}

double CompetitiveRatio::value() const {
    if (unbounded_) throw std::logic_error("competitive ratio is unbounded");
    return value_;
}

std::string CompetitiveRatio::to_string() const {
    if (unbounded_) return "unbounded";
    std::ostringstream os;
    os.precision(17);
    os << value_;
    return os.str();
}

bool operator<(const CompetitiveRatio& a, const CompetitiveRatio& b) {
    if (a.unbounded_) return false;
    if (b.unbounded_) return true;
    return a.value_ < b.value_;
}

CompetitiveRatio empirical_cr(const Trace& trace, const StorageSpec& spec, const PenaltyParams& penalty,
                              const Strategy& strategy, const DiscretizationConfig& disc,
                              std::span<const Forecast> forecasts) {
    const double opt = offline_opt_dp(trace, spec, disc).total_profit;
    const double alg = simulate_run(trace, spec, penalty, strategy, forecasts).total_profit;
    return CompetitiveRatio::of(opt, alg);
}

}  // namespace storeoffer
