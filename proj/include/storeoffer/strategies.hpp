#pragma once

// Online offering strategies and the comparison baselines.
//
//   SOCS    next-slot price and output known; one offer at the clearing price.
//   OCSMB   output known, price unknown; up to m offers laid along g(z).
//   MOCSMB  OCSMB fed the lower end of the forecast band (1 - e) * u~.
//   FOnline storage-oblivious fixed threshold sqrt(p_min * p_max).

#include <memory>

#include "storeoffer/market.hpp"
#include "storeoffer/threshold.hpp"

namespace storeoffer {

struct StrategyConfig {
    ThresholdPolicy policy;
    StorageSpec spec;
    int offers = 10;     // m
    double e_max = 0.1;  // forecast error bound, < 0.5

    void validate() const;
};

/// SOCS offer for one slot. The offer is placed at the clearing price so the
/// whole volume commits; the volume follows the threshold curve:
///   g(z+) >  p : only output that cannot be charged, [u - rho_c]^+
///   otherwise  : sell z + u down to min{sell_down_level(p), z + rho_c}
/// and is finally capped at the deliverable energy u + min{z, rho_d}.
OfferBook socs_offer(const PriceCurve& curve, const StorageSpec& spec, double price, double u,
                     double level);
OfferBook socs_offer(const StrategyConfig& cfg, double price, double u, double level);

/// Multi-offer book laid out exactly as the multiple-offer algorithm states
/// (the volumes may exceed what can be delivered; see cap_to_deliverable).
OfferBook ocsmb_offers(const StrategyConfig& cfg, double u, double level);

/// Trims the highest-priced volume so the cumulative committed volume can
/// never exceed `deliverable`.
OfferBook cap_to_deliverable(const OfferBook& book, double deliverable);

/// OCSMB driven by the conservative output estimate (1 - e) * u~.
OfferBook mocsmb_offers(const StrategyConfig& cfg, const Forecast& forecast, double level);

/// Conservative output estimate used by MOCSMB.
double conservative_output(const Forecast& forecast);

OfferBook fonline_offer(const PriceBounds& bounds, const StorageSpec& spec, double u, double level);

/// Offline optimum without storage: sell the whole output every slot.
double nostorage_profit(const Trace& trace);

// Adapters for simulate_run. Each closure reads only the SlotView fields its
// information model allows.
Strategy make_socs(std::shared_ptr<const PriceCurve> curve, const StorageSpec& spec);
Strategy make_socs(const StrategyConfig& cfg);
Strategy make_ocsmb(const StrategyConfig& cfg);
Strategy make_mocsmb(const StrategyConfig& cfg);
Strategy make_fonline(const PriceBounds& bounds, const StorageSpec& spec);

}  // namespace storeoffer
