#pragma once

#include <cstdint>
#include <vector>

#include "storeoffer/market.hpp"

namespace storeoffer {

struct SyntheticParams {
    double wind_capacity = 10.0;       // MW
    double price_volatility = 0.15;    // std-dev of the hourly log-price step
    double wind_mean_fraction = 0.35;  // long-run wind level as a fraction of capacity
    double wind_persistence = 0.9;     // AR(1) coefficient
    double wind_noise_fraction = 0.1;  // innovation std-dev as a fraction of capacity

    void validate() const;

    friend bool operator==(const SyntheticParams&, const SyntheticParams&) = default;
};

/// Seeded synthetic instance: prices follow a log random walk clipped to the
/// bounds (starting at the geometric mid-price), wind follows a
/// mean-reverting AR(1) clipped to [0, wind_capacity].
Trace gen_synthetic(std::uint64_t seed, std::size_t horizon, const PriceBounds& bounds,
                    const SyntheticParams& params = {});

/// A realized trace plus the forecasts an MOCSMB run sees for it.
struct ForecastInstance {
    Trace realized;
    std::vector<Forecast> forecasts;
};

/// Treats `predicted` as the forecast series u~ and draws the realized output
/// uniformly from [(1 - e) u~, (1 + e) u~] per slot, with e(t) = e_max.
ForecastInstance apply_forecast_error(const Trace& predicted, double e_max, std::uint64_t seed);

}  // namespace storeoffer
