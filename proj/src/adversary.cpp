#include "storeoffer/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "storeoffer/errors.hpp"

namespace storeoffer {

StepFunction::StepFunction(std::vector<double> prices, std::vector<double> lengths)
    : prices_(std::move(prices)), lengths_(std::move(lengths)) {
    if (prices_.size() < 2 || prices_.size() != lengths_.size()) {
        throw ValidationError("step function needs n >= 2 matching prices and lengths");
    }
    double b = 0.0;
    for (std::size_t i = 0; i < prices_.size(); ++i) {
        if (!(prices_[i] > 0.0)) throw ValidationError("step prices must be positive");
        if (i > 0 && prices_[i] > prices_[i - 1]) throw ValidationError("step prices must be non-increasing");
        if (!(lengths_[i] >= 0.0)) throw ValidationError("step lengths must be non-negative");
        b += lengths_[i];
        cumulative_.push_back(b);
    }
    if (!(lengths_.back() > 0.0)) throw ValidationError("last step must have positive length");
}

StepFunction StepFunction::from_policy(const ThresholdPolicy& policy, int interior_steps) {
    if (interior_steps < 1) throw ValidationError("need at least one interior step");
    const double c_th = policy.c_th();
    const double unit = c_th / interior_steps;
    std::vector<double> prices{policy.bounds().p_max()};
    std::vector<double> lengths{0.0};
    for (int i = 1; i <= interior_steps; ++i) {
        prices.push_back(policy.offer_price(std::min(i * unit, c_th)));
        lengths.push_back(unit);
    }
    prices.push_back(policy.bounds().p_min());
    lengths.push_back(policy.last_step());
    return StepFunction(std::move(prices), std::move(lengths));
}

double local_cr_closed_form(const StepFunction& sf, std::size_t i) {
    const std::size_t n = sf.steps();
    if (i < 1 || i > n - 1) {
        throw std::out_of_range("step index " + std::to_string(i) + " outside 1..n-1");
    }
    const auto& p = sf.prices();
    const auto& l = sf.lengths();
    // 1-based k maps to p[k-1].
    double numerator = p[i - 1] * sf.capacity();
    double denominator = 0.0;
    for (std::size_t k = i + 1; k <= n; ++k) {
        const double mass = p[k - 1] * l[k - 1];
        if (k <= n - 1) numerator += mass;
        denominator += mass;
    }
    if (!(denominator > 0.0)) throw DomainError("local ratio has a zero denominator");
    return numerator / denominator;
}

std::vector<double> step_lengths_from_equalization(const std::vector<double>& step_prices, double capacity,
                                                   double last_step) {
    const std::size_t n = step_prices.size();
    if (n < 2) throw ValidationError("need at least two step prices");
    for (std::size_t i = 1; i < n; ++i) {
        if (step_prices[i] > step_prices[i - 1] || !(step_prices[i] > 0.0)) {
            throw ValidationError("step prices must be positive and non-increasing");
        }
    }
    if (!(last_step > 0.0 && last_step < capacity)) throw ValidationError("need 0 < l_n < C");

    const double p_n = step_prices[n - 1];
    const double p_prev = step_prices[n - 2];
    const double denominator = p_prev * capacity - p_n * last_step;
    if (!(denominator > 0.0)) throw DomainError("degenerate denominator p_{n-1} C - p_n l_n");
    const double scale = p_n * capacity * last_step / denominator;

    std::vector<double> lengths;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        lengths.push_back((step_prices[i - 1] - step_prices[i]) / step_prices[i] * scale);
    }
    return lengths;
}

ConstantCurve::ConstantCurve(PriceBounds bounds, double capacity, double price)
    : bounds_(bounds), capacity_(capacity), price_(price) {
    if (!(capacity > 0.0)) throw ValidationError("capacity must be > 0");
    if (!bounds_.contains(price)) throw ValidationError("constant curve price outside bounds");
}

double ConstantCurve::offer_price(double level) const {
    if (!(level >= 0.0 && level <= capacity_)) throw DomainError("storage level outside [0, C]");
    return price_;
}

double ConstantCurve::sell_down_level(double price) const { return price >= price_ ? 0.0 : capacity_; }

LinearCurve::LinearCurve(PriceBounds bounds, double capacity) : bounds_(bounds), capacity_(capacity) {
    if (!(capacity > 0.0)) throw ValidationError("capacity must be > 0");
}

double LinearCurve::offer_price(double level) const {
    if (!(level >= 0.0 && level <= capacity_)) throw DomainError("storage level outside [0, C]");
    return bounds_.p_max() - (bounds_.p_max() - bounds_.p_min()) * level / capacity_;
}

double LinearCurve::sell_down_level(double price) const {
    const double span = bounds_.p_max() - bounds_.p_min();
    if (price >= bounds_.p_max() || span == 0.0) return price >= bounds_.p_min() ? 0.0 : capacity_;
    if (price < bounds_.p_min()) return capacity_;
    return (bounds_.p_max() - price) * capacity_ / span;
}

std::vector<double> AdversaryGrid::geometric_prices(const PriceBounds& bounds, int count) {
    if (count < 1) throw ValidationError("need at least one price level");
    if (count == 1) return {bounds.p_min()};
    std::vector<double> prices;
    for (int k = 0; k < count; ++k) {
        prices.push_back(bounds.p_min() * std::pow(bounds.theta(), static_cast<double>(k) / (count - 1)));
    }
    // Keep the ladder ends exactly on the bounds.
    prices.front() = bounds.p_min();
    prices.back() = bounds.p_max();
    return prices;
}

std::uint64_t AdversaryGrid::instance_count() const {
    const std::uint64_t alphabet = price_levels.size() * supply_levels.size();
    std::uint64_t total = 0;
    std::uint64_t per_horizon = 1;
    for (int h = 1; h <= horizon; ++h) {
        if (alphabet != 0 && per_horizon > budget / alphabet + 1) return budget + 1;  // saturate
        per_horizon *= alphabet;
        total += per_horizon;
        if (total > budget) return budget + 1;
    }
    return total;
}

namespace {

struct Partial {
    CompetitiveRatio worst = CompetitiveRatio::finite(0.0);
    std::uint64_t worst_index = 0;
    bool any = false;
    std::map<int, CompetitiveRatio> buckets;
    std::exception_ptr error;
};

// Instance `index` over the concatenated horizons 1..H, slot alphabet of
// price_levels x supply_levels in lexicographic order.
std::vector<TraceSlot> decode(const AdversaryGrid& grid, std::uint64_t index) {
    const std::uint64_t prices = grid.price_levels.size();
    const std::uint64_t alphabet = prices * grid.supply_levels.size();
    std::uint64_t block = alphabet;
    int h = 1;
    while (index >= block) {
        index -= block;
        block *= alphabet;
        ++h;
    }
    std::vector<TraceSlot> slots(static_cast<std::size_t>(h));
    for (int t = h - 1; t >= 0; --t) {
        const std::uint64_t symbol = index % alphabet;
        index /= alphabet;
        slots[static_cast<std::size_t>(t)] = {grid.price_levels[symbol % prices],
                                              grid.supply_levels[symbol / prices]};
    }
    return slots;
}

}  // namespace

WorstCaseReport adversarial_search(const AdversaryGrid& grid, const StrategyFactory& strategy,
                                   const StorageSpec& spec, const DiscretizationConfig& disc,
                                   double theoretical_bound, unsigned threads) {
    spec.validate();
    if (grid.horizon < 1 || grid.horizon > 6) throw ValidationError("adversary horizon must lie in 1..6");
    if (grid.price_levels.empty() || grid.supply_levels.empty()) {
        throw ValidationError("adversary grid needs price and supply levels");
    }
    for (double s : grid.supply_levels) {
        if (!(s >= 0.0)) throw ValidationError("supply levels must be >= 0");
    }
    const std::uint64_t total = grid.instance_count();
    if (total > grid.budget) {
        throw BudgetExceeded("adversary grid exceeds the instance budget of " + std::to_string(grid.budget));
    }

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(total, 1)));

    const PenaltyParams penalty;
    const double eta = disc.eta();
    auto scan = [&](std::uint64_t begin, std::uint64_t end, Partial& part) {
        for (std::uint64_t idx = begin; idx < end; ++idx) {
            const Trace trace(decode(grid, idx), grid.bounds);
            const double opt = offline_opt_dp(trace, spec, disc).total_profit;
            const auto run = simulate_run(trace, spec, penalty, strategy());
            const auto ratio = CompetitiveRatio::of(opt, run.total_profit);

            double lowest = spec.initial_level;
            for (const auto& s : run.slots) lowest = std::min(lowest, s.storage_after);
            const int bucket = static_cast<int>(std::floor(lowest / eta + 1e-9));

            if (!part.any || part.worst < ratio) {
                part.worst = ratio;
                part.worst_index = idx;
                part.any = true;
            }
            auto [it, inserted] = part.buckets.try_emplace(bucket, ratio);
            if (!inserted && it->second < ratio) it->second = ratio;
        }
    };
    auto work = [&](std::uint64_t begin, std::uint64_t end, Partial& part) {
        try {
            scan(begin, end, part);
        } catch (...) {
            part.error = std::current_exception();
        }
    };

    std::vector<Partial> parts(threads);
    {
        std::vector<std::jthread> pool;
        const std::uint64_t chunk = (total + threads - 1) / threads;
        for (unsigned w = 0; w < threads; ++w) {
            const std::uint64_t begin = std::min(total, w * chunk);
            const std::uint64_t end = std::min(total, begin + chunk);
            pool.emplace_back(work, begin, end, std::ref(parts[w]));
        }
    }

    // Chunks are contiguous and merged in order, so the earliest maximizer wins
    // regardless of the thread count.
    for (const auto& part : parts) {
        if (part.error) std::rethrow_exception(part.error);
    }
    Partial merged;
    for (auto& part : parts) {
        if (!part.any) continue;
        if (!merged.any || merged.worst < part.worst) {
            merged.worst = part.worst;
            merged.worst_index = part.worst_index;
            merged.any = true;
        }
        for (const auto& [bucket, ratio] : part.buckets) {
            auto [it, inserted] = merged.buckets.try_emplace(bucket, ratio);
            if (!inserted && it->second < ratio) it->second = ratio;
        }
    }

    return WorstCaseReport{merged.worst, Trace(decode(grid, merged.worst_index), grid.bounds),
                           theoretical_bound, total, std::move(merged.buckets)};
}

}  // namespace storeoffer
