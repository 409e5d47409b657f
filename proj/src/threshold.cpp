#include "storeoffer/threshold.hpp"

#include <cmath>
#include <string>

#include "storeoffer/errors.hpp"

namespace storeoffer {

double theoretical_cr(double theta) {
    if (!(theta >= 1.0) || !std::isfinite(theta)) {
        throw DomainError("theoretical_cr requires theta >= 1, got " + std::to_string(theta));
    }
    const double l = std::log(theta);
    return (2.0 + l + std::sqrt(l * l + 4.0 * l)) / 2.0;
}

double c_threshold(double capacity, double theta) {
    if (!(capacity > 0.0) || !std::isfinite(capacity)) throw DomainError("capacity must be > 0");
    // l_n = ((2 + ln) - sqrt(ln^2 + 4 ln)) C / 2 is exactly C / CR; the
    // quotient avoids cancellation for large theta.
    return capacity - capacity / theoretical_cr(theta);
}

ThresholdPolicy::ThresholdPolicy(PriceBounds bounds, double capacity)
    : bounds_(bounds),
      capacity_(capacity),
      c_th_(c_threshold(capacity, bounds.theta())),
      cr_(theoretical_cr(bounds.theta())),
      decay_(0.0) {
    if (c_th_ > 0.0) decay_ = c_th_ / (capacity_ * (capacity_ - c_th_));
}

double ThresholdPolicy::offer_price(double level) const {
    if (!(level >= 0.0 && level <= capacity_)) {
        throw DomainError("storage level " + std::to_string(level) + " outside [0, C]");
    }
    if (level >= c_th_) return bounds_.p_min();
    return bounds_.p_min() * std::exp((c_th_ - level) * decay_);
}

double ThresholdPolicy::level_for_price(double price) const {
    if (!(price > bounds_.p_min() && price <= bounds_.p_max())) {
        throw DomainError("threshold inverse requires p_min < price <= p_max");
    }
    const double level = c_th_ - std::log(price / bounds_.p_min()) / decay_;
    return level < 0.0 ? 0.0 : level;
}

double ThresholdPolicy::sell_down_level(double price) const {
    if (price <= bounds_.p_min()) return c_th_;
    if (price >= bounds_.p_max()) return 0.0;
    return level_for_price(price);
}

}  // namespace storeoffer
