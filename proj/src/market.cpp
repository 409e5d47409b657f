#include "storeoffer/market.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "storeoffer/errors.hpp"

namespace storeoffer {

namespace {

double positive_part(double v) { return v > 0.0 ? v : 0.0; }

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

PriceBounds::PriceBounds(double p_min, double p_max) : p_min_(p_min), p_max_(p_max) {
    if (!(std::isfinite(p_min) && std::isfinite(p_max) && p_min > 0.0 && p_min <= p_max)) {
        throw ValidationError("price bounds require 0 < p_min <= p_max, got [" +
                              std::to_string(p_min) + ", " + std::to_string(p_max) + "]");
    }
}

Trace::Trace(std::vector<TraceSlot> slots, PriceBounds bounds)
    : slots_(std::move(slots)), bounds_(bounds) {
    if (slots_.empty()) throw ValidationError("trace must contain at least one slot");
    for (std::size_t t = 0; t < slots_.size(); ++t) {
        const auto& s = slots_[t];
        if (!std::isfinite(s.price) || !bounds_.contains(s.price)) {
            throw ValidationError("slot " + std::to_string(t) + ": price " + std::to_string(s.price) +
                                  " outside [p_min, p_max]");
        }
        if (!finite_nonneg(s.renewable_output)) {
            throw ValidationError("slot " + std::to_string(t) + ": negative renewable output");
        }
    }
}

StorageSpec StorageSpec::full(double capacity, double charge_rate, double discharge_rate) {
    return StorageSpec{capacity, charge_rate, discharge_rate, capacity};
}

void StorageSpec::validate() const {
    if (!(std::isfinite(capacity) && capacity > 0.0)) throw ValidationError("storage capacity must be > 0");
    if (!finite_nonneg(charge_rate) || !finite_nonneg(discharge_rate)) {
        throw ValidationError("charge/discharge rates must be >= 0");
    }
    if (!finite_nonneg(initial_level) || initial_level > capacity) {
        throw ValidationError("initial storage level must lie in [0, C]");
    }
}

void PenaltyParams::validate() const {
    if (!finite_nonneg(alpha1) || !finite_nonneg(alpha2)) {
        throw ValidationError("penalty parameters must be >= 0");
    }
}

void OfferBook::add(double price, double volume) {
    if (!std::isfinite(price) || !std::isfinite(volume) || volume < 0.0) {
        throw ValidationError("offer volume must be finite and >= 0");
    }
    if (volume == 0.0) return;
    if (!offers_.empty() && price < offers_.back().price) {
        throw ValidationError("offer prices must be non-decreasing within a book");
    }
    offers_.push_back({price, volume});
}

double OfferBook::total_volume() const {
    double total = 0.0;
    for (const auto& o : offers_) total += o.volume;
    return total;
}

double settle_offer(const OfferBook& book, double clearing_price) {
    double committed = 0.0;
    for (const auto& o : book.offers()) {
        if (o.price <= clearing_price) committed += o.volume;
    }
    return committed;
}

StorageStep evolve_storage(double level, const StorageSpec& spec, double u, double x) {
    StorageStep step;
    step.charge = std::min(spec.charge_rate, positive_part(u - x));
    step.discharge = std::min({spec.discharge_rate, positive_part(x - u), level});
    step.next_level = std::clamp(level + step.charge - step.discharge, 0.0, spec.capacity);
    return step;
}

double over_commitment(double x, double u, double level, double discharge_rate) {
    return positive_part(x - (u + std::min(level, discharge_rate)));
}

double slot_profit(double price, double x, double y, const PenaltyParams& penalty) {
    return price * x - (penalty.alpha1 * price + penalty.alpha2) * y;
}

RunResult simulate_run(const Trace& trace, const StorageSpec& spec, const PenaltyParams& penalty,
                       const Strategy& strategy, std::span<const Forecast> forecasts) {
    spec.validate();
    penalty.validate();
    if (!forecasts.empty() && forecasts.size() != trace.horizon()) {
        throw ValidationError("forecast series length must match the trace horizon");
    }

    RunResult result;
    result.slots.reserve(trace.horizon());
    double level = spec.initial_level;
    for (std::size_t t = 0; t < trace.horizon(); ++t) {
        const auto& slot = trace[t];
        SlotView view{t, slot.price, slot.renewable_output, level, std::nullopt};
        if (!forecasts.empty()) view.forecast = forecasts[t];

        const OfferBook book = strategy(view);
        SlotOutcome out;
        out.commitment = settle_offer(book, slot.price);
        out.over_commitment =
            over_commitment(out.commitment, slot.renewable_output, level, spec.discharge_rate);
        const double delivered = out.commitment - out.over_commitment;
        const auto step = evolve_storage(level, spec, slot.renewable_output, delivered);
        out.charge = step.charge;
        out.discharge = step.discharge;
        out.storage_after = step.next_level;
        out.profit = slot_profit(slot.price, out.commitment, out.over_commitment, penalty);

        result.total_profit += out.profit;
        level = step.next_level;
        result.slots.push_back(out);
    }
    return result;
}

}  // namespace storeoffer
