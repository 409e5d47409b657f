#pragma once

// Multi-run comparison of the online strategies against the offline optimum,
// the no-storage optimum and the fixed-threshold baseline.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "storeoffer/market.hpp"
#include "storeoffer/oracle.hpp"
#include "storeoffer/synthetic.hpp"
#include "storeoffer/trace_io.hpp"

namespace storeoffer {

inline constexpr const char* kToolName = "storeoffer";
inline constexpr const char* kToolVersion = "0.1.0";

enum class StrategyKind { socs, ocsmb, mocsmb, fonline, nostorage, ofa };

const char* strategy_name(StrategyKind kind);
/// Throws ValidationError for unknown names.
StrategyKind parse_strategy(const std::string& name);
std::vector<StrategyKind> all_strategies();

struct ExperimentConfig {
    int runs = 100;
    std::size_t horizon = 360;
    std::uint64_t seed = 7;
    StorageSpec storage = StorageSpec::full(20.0, 10.0, 10.0);
    PriceBounds bounds{13.9, 186.9};
    PenaltyParams penalty;
    std::vector<StrategyKind> strategies = all_strategies();
    int offers = 10;
    double e_max = 0.1;
    double eta = 0.0;  // 0 selects C / 400
    SyntheticParams synthetic;

    // Optional user traces; when set they replace the synthetic generator and
    // every run uses the whole file (runs then differ only in forecast noise).
    std::string price_csv;
    std::string wind_csv;
    bool clip_prices = false;    // clip out-of-bounds prices instead of rejecting
    bool derive_bounds = false;  // take p_min / p_max from the loaded prices

    bool per_slot = false;  // include run-0 slot outcomes in the report

    void validate() const;
    DiscretizationConfig discretization() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct StrategySummary {
    std::string name;
    double total_profit = 0.0;
    double mean_profit = 0.0;
    CompetitiveRatio empirical_cr_max = CompetitiveRatio::finite(1.0);
    CompetitiveRatio empirical_cr_mean = CompetitiveRatio::finite(1.0);

    friend bool operator==(const StrategySummary&, const StrategySummary&) = default;
};

struct SlotRecord {
    std::string strategy;
    std::size_t slot = 0;
    double price = 0.0;
    double renewable = 0.0;
    SlotOutcome outcome;

    friend bool operator==(const SlotRecord&, const SlotRecord&) = default;
};

struct ReportMeta {
    std::string tool = kToolName;
    std::string version = kToolVersion;
    std::uint64_t seed = 0;
    int runs = 0;

    friend bool operator==(const ReportMeta&, const ReportMeta&) = default;
};

struct Report {
    ReportMeta meta;
    ExperimentConfig config;
    std::vector<StrategySummary> strategies;
    std::vector<SlotRecord> slots;

    friend bool operator==(const Report&, const Report&) = default;
};

struct RunRecord {
    int run = 0;
    std::string strategy;
    double profit = 0.0;
    CompetitiveRatio ratio = CompetitiveRatio::finite(1.0);
    double over_commitment = 0.0;  // total y over the run

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct ExperimentResult {
    Report report;
    std::vector<RunRecord> runs;  // run-major, strategies in configured order
};

/// Instance for run `run_index`: seeded with seed ^ run_index, so results do
/// not depend on scheduling.
ForecastInstance experiment_instance(const ExperimentConfig& cfg, int run_index);

/// `threads` == 0 uses the hardware concurrency; the result is identical for any value.
ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned threads = 1);

struct SweepRow {
    int offers = 0;
    double socs_mean_profit = 0.0;
    double ocsmb_mean_profit = 0.0;
    double mocsmb_mean_profit = 0.0;
    double ofa_mean_profit = 0.0;
};

/// Mean profits of OCSMB and MOCSMB for each offer count m, alongside the
/// m-independent SOCS and OFA means on the same instances.
std::vector<SweepRow> run_offer_sweep(const ExperimentConfig& cfg, const std::vector<int>& offer_counts,
                                      unsigned threads = 1);

}  // namespace storeoffer
