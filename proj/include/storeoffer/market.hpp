#pragma once

// Market and storage model shared by every strategy and oracle: offers,
// settlement against the clearing price, storage evolution, over-commitment
// and per-slot profit, plus a simulation loop that drives them over a trace.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace storeoffer {

class PriceBounds {
public:
    PriceBounds(double p_min, double p_max);

    double p_min() const { return p_min_; }
    double p_max() const { return p_max_; }
    double theta() const { return p_max_ / p_min_; }
    bool contains(double price) const { return price >= p_min_ && price <= p_max_; }

    friend bool operator==(const PriceBounds&, const PriceBounds&) = default;

private:
    double p_min_;
    double p_max_;
};

struct TraceSlot {
    double price = 0.0;             // currency / MWh
    double renewable_output = 0.0;  // MWh in the slot

    friend bool operator==(const TraceSlot&, const TraceSlot&) = default;
};

/// One input instance: hourly clearing prices and renewable output.
class Trace {
public:
    Trace(std::vector<TraceSlot> slots, PriceBounds bounds);

    std::size_t horizon() const { return slots_.size(); }
    const std::vector<TraceSlot>& slots() const { return slots_; }
    const TraceSlot& operator[](std::size_t t) const { return slots_[t]; }
    const PriceBounds& bounds() const { return bounds_; }

    friend bool operator==(const Trace&, const Trace&) = default;

private:
    std::vector<TraceSlot> slots_;
    PriceBounds bounds_;
};

struct StorageSpec {
    double capacity = 20.0;        // C, MWh
    double charge_rate = 10.0;     // rho_c, MWh per slot
    double discharge_rate = 10.0;  // rho_d, MWh per slot
    double initial_level = 20.0;   // z(1), MWh

    /// Spec with the storage initially full.
    static StorageSpec full(double capacity, double charge_rate, double discharge_rate);

    void validate() const;

    friend bool operator==(const StorageSpec&, const StorageSpec&) = default;
};

struct PenaltyParams {
    double alpha1 = 1.2;
    double alpha2 = 0.0;

    void validate() const;

    friend bool operator==(const PenaltyParams&, const PenaltyParams&) = default;
};

struct Offer {
    double price = 0.0;
    double volume = 0.0;

    friend bool operator==(const Offer&, const Offer&) = default;
};

/// Offers submitted for one slot, kept in non-decreasing price order.
/// Zero-volume offers are dropped on insertion.
class OfferBook {
public:
    OfferBook() = default;

    void add(double price, double volume);

    const std::vector<Offer>& offers() const { return offers_; }
    std::size_t size() const { return offers_.size(); }
    bool empty() const { return offers_.empty(); }
    double total_volume() const;

    friend bool operator==(const OfferBook&, const OfferBook&) = default;

private:
    std::vector<Offer> offers_;
};

struct SlotOutcome {
    double commitment = 0.0;       // x(t)
    double over_commitment = 0.0;  // y(t)
    double charge = 0.0;           // x_c(t)
    double discharge = 0.0;        // x_d(t)
    double profit = 0.0;           // R(t)
    double storage_after = 0.0;    // z(t+1)

    friend bool operator==(const SlotOutcome&, const SlotOutcome&) = default;
};

struct RunResult {
    std::vector<SlotOutcome> slots;
    double total_profit = 0.0;

    friend bool operator==(const RunResult&, const RunResult&) = default;
};

struct StorageStep {
    double next_level = 0.0;
    double charge = 0.0;
    double discharge = 0.0;
};

/// Volume committed by the book when the market clears at `clearing_price`.
/// An offer commits iff its price is at or below the clearing price.
double settle_offer(const OfferBook& book, double clearing_price);

/// Storage transition for one slot given renewable output `u` and energy `x`
/// sent to market. Surplus charges (rate-limited), deficit discharges
/// (rate- and level-limited); the level is projected onto [0, C], spilling overflow.
StorageStep evolve_storage(double level, const StorageSpec& spec, double u, double x);

/// Committed energy that cannot be delivered from u plus dischargeable storage.
double over_commitment(double x, double u, double level, double discharge_rate);

double slot_profit(double price, double x, double y, const PenaltyParams& penalty);

struct Forecast {
    double predicted = 0.0;    // u~(t)
    double error_bound = 0.0;  // e(t)
};

/// Everything the simulator knows at slot t. Each strategy reads only the
/// fields its information model permits (e.g. OCSMB ignores `price`).
struct SlotView {
    std::size_t t = 0;
    double price = 0.0;
    double renewable = 0.0;
    double level = 0.0;
    std::optional<Forecast> forecast;
};

using Strategy = std::function<OfferBook(const SlotView&)>;

/// Runs `strategy` over the trace. `forecasts`, when non-empty, must have one
/// entry per slot and is exposed through SlotView::forecast.
RunResult simulate_run(const Trace& trace, const StorageSpec& spec, const PenaltyParams& penalty,
                       const Strategy& strategy, std::span<const Forecast> forecasts = {});

}  // namespace storeoffer
