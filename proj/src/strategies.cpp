#include "storeoffer/strategies.hpp"

#include <algorithm>
#include <cmath>

#include "storeoffer/errors.hpp"

namespace storeoffer {

namespace {

double positive_part(double v) { return v > 0.0 ? v : 0.0; }

double deliverable(double u, double level, const StorageSpec& spec) {
    // Same expression as over_commitment() so a capped volume yields y == 0 exactly.
    return u + std::min(level, spec.discharge_rate);
}

void check_state(const StorageSpec& spec, double u, double level) {
    if (!(u >= 0.0) || !std::isfinite(u)) throw ValidationError("renewable output must be >= 0");
    if (!(level >= 0.0 && level <= spec.capacity)) throw ValidationError("storage level outside [0, C]");
}

double clamped_price(const PriceCurve& curve, double level) {
    return curve.offer_price(std::clamp(level, 0.0, curve.capacity()));
}

}  // namespace

void StrategyConfig::validate() const {
    spec.validate();
    if (offers < 1) throw ValidationError("number of offers must be >= 1");
    if (!(e_max >= 0.0 && e_max < 0.5)) throw ValidationError("e_max must lie in [0, 0.5)");
    if (std::abs(policy.capacity() - spec.capacity) > 1e-9 * spec.capacity) {
        throw ValidationError("threshold policy capacity differs from storage capacity");
    }
}

OfferBook socs_offer(const PriceCurve& curve, const StorageSpec& spec, double price, double u,
                     double level) {
    check_state(spec, u, level);
    const double post_charge = std::min(level + u, spec.capacity);
    const double candidate = curve.offer_price(post_charge);

    double volume = 0.0;
    if (candidate > price) {
        volume = positive_part(u - spec.charge_rate);
    } else {
        volume = level + u - std::min(curve.sell_down_level(price), level + spec.charge_rate);
    }
    volume = std::clamp(volume, 0.0, deliverable(u, level, spec));

    OfferBook book;
    book.add(price, volume);
    return book;
}

OfferBook socs_offer(const StrategyConfig& cfg, double price, double u, double level) {
    return socs_offer(cfg.policy, cfg.spec, price, u, level);
}

OfferBook ocsmb_offers(const StrategyConfig& cfg, double u, double level) {
    const auto& spec = cfg.spec;
    check_state(spec, u, level);
    if (cfg.offers < 1) throw ValidationError("number of offers must be >= 1");

    const double c_th = cfg.policy.c_th();
    const double p_min = cfg.policy.bounds().p_min();
    const int pieces = cfg.offers - 1;

    OfferBook book;
    if (std::min(u, spec.charge_rate) + level > c_th) {
        book.add(p_min, u + level - c_th);
        if (pieces == 0) return book;
        const double dx = std::min(c_th, u + spec.discharge_rate) / pieces;
        for (int i = 1; i <= pieces; ++i) book.add(clamped_price(cfg.policy, c_th - i * dx), dx);
    } else {
        book.add(p_min, positive_part(u - spec.charge_rate));
        if (pieces == 0) return book;
        const double dx = (u + std::min(level, spec.discharge_rate)) / pieces;
        for (int i = 1; i <= pieces; ++i) book.add(clamped_price(cfg.policy, level + u - i * dx), dx);
    }
    return book;
}

OfferBook cap_to_deliverable(const OfferBook& book, double cap) {
    OfferBook out;
    double cumulative = 0.0;
    for (const auto& o : book.offers()) {
        if (cumulative >= cap) break;
        double v = std::min(o.volume, cap - cumulative);
        // settle_offer sums a price-sorted prefix left to right; keep every
        // such prefix sum at or below the cap despite rounding.
        while (v > 0.0 && cumulative + v > cap) v = std::nextafter(v, 0.0);
        out.add(o.price, v);
        cumulative += v;
    }
    return out;
}

double conservative_output(const Forecast& forecast) {
    return (1.0 - forecast.error_bound) * forecast.predicted;
}

OfferBook mocsmb_offers(const StrategyConfig& cfg, const Forecast& forecast, double level) {
    if (!(forecast.predicted >= 0.0)) throw ValidationError("forecast output must be >= 0");
    if (!(forecast.error_bound >= 0.0 && forecast.error_bound <= cfg.e_max)) {
        throw ValidationError("forecast error bound must lie in [0, e_max]");
    }
    return ocsmb_offers(cfg, conservative_output(forecast), level);
}

OfferBook fonline_offer(const PriceBounds& bounds, const StorageSpec& spec, double u, double level) {
    check_state(spec, u, level);
    OfferBook book;
    book.add(std::sqrt(bounds.p_min() * bounds.p_max()), deliverable(u, level, spec));
    return book;
}

double nostorage_profit(const Trace& trace) {
    double total = 0.0;
    for (const auto& s : trace.slots()) total += s.price * s.renewable_output;
    return total;
}

Strategy make_socs(std::shared_ptr<const PriceCurve> curve, const StorageSpec& spec) {
    return [curve = std::move(curve), spec](const SlotView& v) {
        return socs_offer(*curve, spec, v.price, v.renewable, v.level);
    };
}

Strategy make_socs(const StrategyConfig& cfg) {
    cfg.validate();
    return make_socs(std::make_shared<ThresholdPolicy>(cfg.policy), cfg.spec);
}

Strategy make_ocsmb(const StrategyConfig& cfg) {
    cfg.validate();
    return [cfg](const SlotView& v) {
        return cap_to_deliverable(ocsmb_offers(cfg, v.renewable, v.level),
                                  deliverable(v.renewable, v.level, cfg.spec));
    };
}

Strategy make_mocsmb(const StrategyConfig& cfg) {
    cfg.validate();
    return [cfg](const SlotView& v) {
        if (!v.forecast) throw ValidationError("MOCSMB requires a forecast for every slot");
        const double u = conservative_output(*v.forecast);
        return cap_to_deliverable(mocsmb_offers(cfg, *v.forecast, v.level),
                                  deliverable(u, v.level, cfg.spec));
    };
}

Strategy make_fonline(const PriceBounds& bounds, const StorageSpec& spec) {
    spec.validate();
    return [bounds, spec](const SlotView& v) {
        return fonline_offer(bounds, spec, v.renewable, v.level);
    };
}

}  // namespace storeoffer
