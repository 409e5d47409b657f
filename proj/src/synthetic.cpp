#include "storeoffer/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "storeoffer/errors.hpp"

namespace storeoffer {

void SyntheticParams::validate() const {
    if (!(wind_capacity >= 0.0)) throw ValidationError("wind capacity must be >= 0");
    if (!(price_volatility >= 0.0)) throw ValidationError("price volatility must be >= 0");
    if (!(wind_mean_fraction >= 0.0 && wind_mean_fraction <= 1.0)) {
        throw ValidationError("wind mean fraction must lie in [0, 1]");
    }
    if (!(wind_persistence >= 0.0 && wind_persistence < 1.0)) {
        throw ValidationError("wind persistence must lie in [0, 1)");
    }
    if (!(wind_noise_fraction >= 0.0)) throw ValidationError("wind noise must be >= 0");
}

Trace gen_synthetic(std::uint64_t seed, std::size_t horizon, const PriceBounds& bounds,
                    const SyntheticParams& params) {
    params.validate();
    if (horizon == 0) throw ValidationError("horizon must be >= 1");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    const double log_lo = std::log(bounds.p_min());
    const double log_hi = std::log(bounds.p_max());
    const double cap = params.wind_capacity;
    const double mean = params.wind_mean_fraction * cap;

    double log_price = 0.5 * (log_lo + log_hi);
    double wind = mean;
    std::vector<TraceSlot> slots;
    slots.reserve(horizon);
    for (std::size_t t = 0; t < horizon; ++t) {
        const double price = std::clamp(std::exp(log_price), bounds.p_min(), bounds.p_max());
        slots.push_back({price, std::clamp(wind, 0.0, cap)});

        log_price = std::clamp(log_price + params.price_volatility * normal(rng), log_lo, log_hi);
        wind = mean + params.wind_persistence * (wind - mean) + params.wind_noise_fraction * cap * normal(rng);
        wind = std::clamp(wind, 0.0, cap);
    }
    return Trace(std::move(slots), bounds);
}

ForecastInstance apply_forecast_error(const Trace& predicted, double e_max, std::uint64_t seed) {
    if (!(e_max >= 0.0 && e_max < 0.5)) throw ValidationError("e_max must lie in [0, 0.5)");
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0xF0u};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<TraceSlot> slots;
    std::vector<Forecast> forecasts;
    slots.reserve(predicted.horizon());
    forecasts.reserve(predicted.horizon());
    for (const auto& s : predicted.slots()) {
        const Forecast f{s.renewable_output, e_max};
        const double lo = (1.0 - e_max) * s.renewable_output;
        const double hi = (1.0 + e_max) * s.renewable_output;
        const double realized = std::clamp(lo + (hi - lo) * unit(rng), lo, hi);
        slots.push_back({s.price, realized});
        forecasts.push_back(f);
    }
    return {Trace(std::move(slots), predicted.bounds()), std::move(forecasts)};
}

}  // namespace storeoffer
