#pragma once

// Worst-case analysis tooling: the step-function view of a threshold curve,
// the local competitive-ratio closed form, equalized step lengths, simple
// counter-example curves, and an exhaustive adversary over small grids.

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "storeoffer/market.hpp"
#include "storeoffer/oracle.hpp"
#include "storeoffer/threshold.hpp"

namespace storeoffer {

/// Step i (1-based) covers storage (b_{i-1}, b_i] and carries price p_i = g(b_i).
/// Prices are non-increasing from p_1 to p_n; lengths are non-negative and
/// sum to the capacity, with a positive last step.
class StepFunction {
public:
    StepFunction(std::vector<double> prices, std::vector<double> lengths);

    /// Discretizes the optimal policy: a zero-length first step at p_max,
    /// `interior_steps` equal steps across [0, c_th] priced at their right
    /// end, and a last step of length l_n at p_min.
    static StepFunction from_policy(const ThresholdPolicy& policy, int interior_steps);

    std::size_t steps() const { return prices_.size(); }  // n
    const std::vector<double>& prices() const { return prices_; }
    const std::vector<double>& lengths() const { return lengths_; }
    double capacity() const { return cumulative_.back(); }
    /// b_i for i in 1..n.
    double cumulative(std::size_t i) const { return cumulative_.at(i - 1); }

private:
    std::vector<double> prices_;
    std::vector<double> lengths_;
    std::vector<double> cumulative_;
};

/// (p_i C + sum_{k=i+1}^{n-1} p_k l_k) / (sum_{k=i+1}^{n} p_k l_k) for 1 <= i <= n-1.
double local_cr_closed_form(const StepFunction& sf, std::size_t i);

/// Interior lengths l_2 .. l_{n-1} that equalize every local ratio, given
/// non-increasing step prices p_1 .. p_n, capacity C and last step l_n.
std::vector<double> step_lengths_from_equalization(const std::vector<double>& step_prices, double capacity,
                                                   double last_step);

/// g(z) == c everywhere. With c > p_min the policy never sells below c.
class ConstantCurve final : public PriceCurve {
public:
    ConstantCurve(PriceBounds bounds, double capacity, double price);
    const PriceBounds& bounds() const override { return bounds_; }
    double capacity() const override { return capacity_; }
    double offer_price(double level) const override;
    double sell_down_level(double price) const override;

private:
    PriceBounds bounds_;
    double capacity_;
    double price_;
};

/// g(z) = p_max - (p_max - p_min) z / C.
class LinearCurve final : public PriceCurve {
public:
    LinearCurve(PriceBounds bounds, double capacity);
    const PriceBounds& bounds() const override { return bounds_; }
    double capacity() const override { return capacity_; }
    double offer_price(double level) const override;
    double sell_down_level(double price) const override;

private:
    PriceBounds bounds_;
    double capacity_;
};

struct AdversaryGrid {
    PriceBounds bounds;
    int horizon = 4;                   // instances of every length 1..horizon
    std::vector<double> price_levels;  // within bounds
    std::vector<double> supply_levels;
    std::uint64_t budget = 10'000'000;

    /// Geometric ladder p_min * theta^{k/(K-1)}, k = 0..K-1.
    static std::vector<double> geometric_prices(const PriceBounds& bounds, int count);

    std::uint64_t instance_count() const;
};

struct WorstCaseReport {
    CompetitiveRatio max_ratio;
    Trace argmax_instance;
    double theoretical_bound;
    std::uint64_t instances;
    /// Worst ratio per reached minimum level, keyed by floor(b / eta).
    std::map<int, CompetitiveRatio> by_min_level;
};

/// Builds the strategy under test for one instance (strategies may carry
/// per-instance state, so a fresh one is made each time).
using StrategyFactory = std::function<Strategy()>;

/// Enumerates every trace on the grid, computing OPT / ALG on each. Throws
/// BudgetExceeded when the grid holds more instances than the budget.
/// `threads` == 0 picks the hardware concurrency; results do not depend on it.
WorstCaseReport adversarial_search(const AdversaryGrid& grid, const StrategyFactory& strategy,
                                   const StorageSpec& spec, const DiscretizationConfig& disc,
                                   double theoretical_bound, unsigned threads = 0);

}  // namespace storeoffer
