#include "storeoffer/experiment.hpp"

#include <algorithm>
#include <exception>
#include <thread>

#include "storeoffer/errors.hpp"
#include "storeoffer/strategies.hpp"
#include "storeoffer/threshold.hpp"

namespace storeoffer {

namespace {

constexpr StrategyKind kAllKinds[] = {StrategyKind::socs,    StrategyKind::ocsmb,     StrategyKind::mocsmb,
                                      StrategyKind::fonline, StrategyKind::nostorage, StrategyKind::ofa};

// Offers each precomputed commitment at p_min so it always clears.
Strategy make_replay(std::vector<double> commitments, double p_min) {
    return [commitments = std::move(commitments), p_min](const SlotView& v) {
        OfferBook book;
        book.add(p_min, commitments.at(v.t));
        return book;
    };
}

StrategyConfig strategy_config(const ExperimentConfig& cfg, const Trace& trace, int offers) {
    return StrategyConfig{ThresholdPolicy(trace.bounds(), cfg.storage.capacity), cfg.storage, offers, cfg.e_max};
}

// Runs `body(run_index)` for every run, spreading runs over `threads` workers.
template <typename Body>
void for_each_run(int runs, unsigned threads, Body&& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(runs));
    if (threads <= 1) {
        for (int r = 0; r < runs; ++r) body(r);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (int r = static_cast<int>(w); r < runs; r += static_cast<int>(threads)) body(r);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

struct RunOutput {
    std::vector<RunRecord> records;
    std::vector<SlotRecord> slots;
};

void append_slots(std::vector<SlotRecord>& out, const char* name, const Trace& trace, const RunResult& run) {
    for (std::size_t t = 0; t < run.slots.size(); ++t) {
        out.push_back({name, t, trace[t].price, trace[t].renewable_output, run.slots[t]});
    }
}

double total_over_commitment(const RunResult& run) {
    double y = 0.0;
    for (const auto& s : run.slots) y += s.over_commitment;
    return y;
}

}  // namespace

const char* strategy_name(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::socs: return "socs";
        case StrategyKind::ocsmb: return "ocsmb";
        case StrategyKind::mocsmb: return "mocsmb";
        case StrategyKind::fonline: return "fonline";
        case StrategyKind::nostorage: return "nostorage";
        case StrategyKind::ofa: return "ofa";
    }
    return "unknown";
}

StrategyKind parse_strategy(const std::string& name) {
    for (auto kind : kAllKinds) {
        if (name == strategy_name(kind)) return kind;
    }
    throw ValidationError("unknown strategy '" + name + "'");
}

std::vector<StrategyKind> all_strategies() { return {std::begin(kAllKinds), std::end(kAllKinds)}; }

void ExperimentConfig::validate() const {
    if (runs < 1) throw ValidationError("runs must be >= 1");
    if (horizon < 1) throw ValidationError("horizon must be >= 1");
    storage.validate();
    penalty.validate();
    synthetic.validate();
    if (strategies.empty()) throw ValidationError("select at least one strategy");
    if (offers < 1) throw ValidationError("number of offers must be >= 1");
    if (!(e_max >= 0.0 && e_max < 0.5)) throw ValidationError("e_max must lie in [0, 0.5)");
    if (eta < 0.0) throw ValidationError("eta must be >= 0");
    if (price_csv.empty() != wind_csv.empty()) {
        throw ValidationError("price and wind CSVs must be given together");
    }
    discretization();
}

DiscretizationConfig ExperimentConfig::discretization() const {
    if (eta == 0.0) return DiscretizationConfig::standard(storage.capacity);
    return DiscretizationConfig::from_eta(storage.capacity, eta);
}

ForecastInstance experiment_instance(const ExperimentConfig& cfg, int run_index) {
    const std::uint64_t seed = cfg.seed ^ static_cast<std::uint64_t>(run_index);
    if (!cfg.price_csv.empty()) {
        const BoundsMode mode = cfg.derive_bounds ? BoundsMode::derived()
                                : cfg.clip_prices ? BoundsMode::clipped(cfg.bounds.p_min(), cfg.bounds.p_max())
                                                  : BoundsMode::fixed(cfg.bounds.p_min(), cfg.bounds.p_max());
        return apply_forecast_error(load_trace(cfg.price_csv, cfg.wind_csv, mode), cfg.e_max, seed);
    }
    return apply_forecast_error(gen_synthetic(seed, cfg.horizon, cfg.bounds, cfg.synthetic), cfg.e_max, seed);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned threads) {
    cfg.validate();
    const auto disc = cfg.discretization();
    const PenaltyParams& penalty = cfg.penalty;
    std::vector<RunOutput> outputs(static_cast<std::size_t>(cfg.runs));

    for_each_run(cfg.runs, threads, [&](int r) {
        const auto instance = experiment_instance(cfg, r);
        const Trace& trace = instance.realized;
        const auto scfg = strategy_config(cfg, trace, cfg.offers);
        const auto opt = offline_opt_dp(trace, cfg.storage, disc);
        const bool keep_slots = cfg.per_slot && r == 0;
        auto& out = outputs[static_cast<std::size_t>(r)];

        for (auto kind : cfg.strategies) {
            RunResult run;
            switch (kind) {
                case StrategyKind::socs:
                    run = simulate_run(trace, cfg.storage, penalty, make_socs(scfg));
                    break;
                case StrategyKind::ocsmb:
                    run = simulate_run(trace, cfg.storage, penalty, make_ocsmb(scfg));
                    break;
                case StrategyKind::mocsmb:
                    run = simulate_run(trace, cfg.storage, penalty, make_mocsmb(scfg), instance.forecasts);
                    break;
                case StrategyKind::fonline:
                    run = simulate_run(trace, cfg.storage, penalty, make_fonline(trace.bounds(), cfg.storage));
                    break;
                case StrategyKind::nostorage: {
                    run.total_profit = nostorage_profit(trace);
                    if (keep_slots) {
                        std::vector<double> all_output;
                        for (const auto& s : trace.slots()) all_output.push_back(s.renewable_output);
                        auto no_storage = cfg.storage;
                        no_storage.initial_level = 0.0;
                        no_storage.charge_rate = 0.0;
                        run = simulate_run(trace, no_storage, penalty,
                                           make_replay(std::move(all_output), trace.bounds().p_min()));
                    }
                    break;
                }
                case StrategyKind::ofa:
                    run.total_profit = opt.total_profit;
                    if (keep_slots) {
                        run = simulate_run(trace, cfg.storage, penalty,
                                           make_replay(opt.commitments, trace.bounds().p_min()));
                    }
                    break;
            }
            out.records.push_back({r, strategy_name(kind), run.total_profit,
                                   CompetitiveRatio::of(opt.total_profit, run.total_profit),
                                   total_over_commitment(run)});
            if (keep_slots) append_slots(out.slots, strategy_name(kind), trace, run);
        }
    });

    ExperimentResult result;
    result.report.meta.seed = cfg.seed;
    result.report.meta.runs = cfg.runs;
    result.report.config = cfg;
    for (auto& out : outputs) {
        result.runs.insert(result.runs.end(), out.records.begin(), out.records.end());
        result.report.slots.insert(result.report.slots.end(), out.slots.begin(), out.slots.end());
    }

    for (std::size_t k = 0; k < cfg.strategies.size(); ++k) {
        StrategySummary summary;
        summary.name = strategy_name(cfg.strategies[k]);
        CompetitiveRatio worst = CompetitiveRatio::finite(0.0);
        double ratio_sum = 0.0;
        bool unbounded = false;
        for (int r = 0; r < cfg.runs; ++r) {
            const auto& rec = outputs[static_cast<std::size_t>(r)].records[k];
            summary.total_profit += rec.profit;
            if (worst < rec.ratio) worst = rec.ratio;
            if (rec.ratio.is_unbounded()) {
                unbounded = true;
            } else {
                ratio_sum += rec.ratio.value();
            }
        }
        summary.mean_profit = summary.total_profit / cfg.runs;
        summary.empirical_cr_max = worst;
        summary.empirical_cr_mean =
            unbounded ? CompetitiveRatio::unbounded() : CompetitiveRatio::finite(ratio_sum / cfg.runs);
        result.report.strategies.push_back(summary);
    }
    return result;
}

std::vector<SweepRow> run_offer_sweep(const ExperimentConfig& cfg, const std::vector<int>& offer_counts,
                                      unsigned threads) {
    cfg.validate();
    for (int m : offer_counts) {
        if (m < 1) throw ValidationError("offer counts must be >= 1");
    }
    const auto disc = cfg.discretization();
    const std::size_t width = offer_counts.size();
    // Per run: OFA, SOCS, then (OCSMB, MOCSMB) per offer count.
    std::vector<std::vector<double>> profits(static_cast<std::size_t>(cfg.runs), std::vector<double>(2 + 2 * width));

    for_each_run(cfg.runs, threads, [&](int r) {
        const auto instance = experiment_instance(cfg, r);
        const Trace& trace = instance.realized;
        auto& row = profits[static_cast<std::size_t>(r)];
        row[0] = offline_opt_dp(trace, cfg.storage, disc).total_profit;
        row[1] = simulate_run(trace, cfg.storage, cfg.penalty, make_socs(strategy_config(cfg, trace, cfg.offers)))
                     .total_profit;
        for (std::size_t i = 0; i < width; ++i) {
            const auto scfg = strategy_config(cfg, trace, offer_counts[i]);
            row[2 + 2 * i] = simulate_run(trace, cfg.storage, cfg.penalty, make_ocsmb(scfg)).total_profit;
            row[3 + 2 * i] =
                simulate_run(trace, cfg.storage, cfg.penalty, make_mocsmb(scfg), instance.forecasts).total_profit;
        }
    });

    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < width; ++i) {
        SweepRow row;
        row.offers = offer_counts[i];
        for (const auto& p : profits) {
            row.ofa_mean_profit += p[0];
            row.socs_mean_profit += p[1];
            row.ocsmb_mean_profit += p[2 + 2 * i];
            row.mocsmb_mean_profit += p[3 + 2 * i];
        }
        row.ofa_mean_profit /= cfg.runs;
        row.socs_mean_profit /= cfg.runs;
        row.ocsmb_mean_profit /= cfg.runs;
        row.mocsmb_mean_profit /= cfg.runs;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace storeoffer
