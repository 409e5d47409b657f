#pragma once

#include "storeoffer/market.hpp"

namespace storeoffer {

/// Competitive ratio of the adaptive-threshold policy as a function of the
/// price fluctuation ratio theta = p_max / p_min (natural log):
///   (2 + ln theta + sqrt(ln^2 theta + 4 ln theta)) / 2.
/// Throws DomainError for theta < 1.
double theoretical_cr(double theta);

/// Storage level c_th above which the policy sells at any price.
/// Equal to C - C / theoretical_cr(theta).
double c_threshold(double capacity, double theta);

/// A decreasing map from storage level to the minimum acceptable sale price.
/// SOCS works against this interface so alternative curves can be plugged in.
class PriceCurve {
public:
    virtual ~PriceCurve() = default;

    virtual const PriceBounds& bounds() const = 0;
    virtual double capacity() const = 0;

    /// g(z) for z in [0, C].
    virtual double offer_price(double level) const = 0;

    /// Lowest level the policy is willing to sell down to at clearing price
    /// `price`: inf{ z in [0, C] : g(z) <= price }, or C when no level qualifies.
    virtual double sell_down_level(double price) const = 0;
};

/// The optimal threshold function: exponential on [0, c_th) from p_max down to
/// p_min, flat at p_min on [c_th, C].
class ThresholdPolicy final : public PriceCurve {
public:
    ThresholdPolicy(PriceBounds bounds, double capacity);

    const PriceBounds& bounds() const override { return bounds_; }
    double capacity() const override { return capacity_; }
    double c_th() const { return c_th_; }
    double last_step() const { return capacity_ - c_th_; }  // l_n
    double cr_value() const { return cr_; }

    /// Throws DomainError when level is outside [0, C].
    double offer_price(double level) const override;

    /// Inverse of the exponential segment. Defined for p_min < price <= p_max.
    double level_for_price(double price) const;

    double sell_down_level(double price) const override;

private:
    PriceBounds bounds_;
    double capacity_;
    double c_th_;
    double cr_;
    double decay_;  // c_th / (C (C - c_th)); zero when theta == 1
};

}  // namespace storeoffer
