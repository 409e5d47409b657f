#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "storeoffer/adversary.hpp"
#include "storeoffer/config.hpp"
#include "storeoffer/errors.hpp"
#include "storeoffer/experiment.hpp"
#include "storeoffer/report.hpp"
#include "storeoffer/strategies.hpp"
#include "storeoffer/threshold.hpp"
#include "storeoffer/trace_io.hpp"

using namespace storeoffer;

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kIo = 2, kBudget = 3 };

// Canonical flags shared by every experiment-style subcommand. Unset flags
// leave the config-file (or default) value alone.
struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> runs;
    std::optional<std::size_t> horizon;
    std::optional<double> capacity;
    std::optional<double> charge_rate;
    std::optional<double> discharge_rate;
    std::optional<double> initial_level;
    std::optional<double> pmin;
    std::optional<double> pmax;
    std::optional<int> offers;
    std::optional<double> emax;
    std::optional<double> eta;
    std::optional<double> alpha1;
    std::optional<double> alpha2;
    bool clip_prices = false;
    bool derive_bounds = false;
    std::string price_csv;
    std::string wind_csv;
    std::optional<std::string> out;
    std::optional<unsigned> threads;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "Configuration file ([section] key = value)")->check(CLI::ExistingFile);
    cmd->add_option("--seed", f.seed, "Base seed; run r uses seed xor r");
    cmd->add_option("--runs", f.runs, "Number of runs");
    cmd->add_option("--horizon", f.horizon, "Slots per synthetic trace");
    cmd->add_option("--capacity", f.capacity, "Storage capacity C (MWh)");
    cmd->add_option("--charge-rate", f.charge_rate, "Charge rate limit (MW)");
    cmd->add_option("--discharge-rate", f.discharge_rate, "Discharge rate limit (MW)");
    cmd->add_option("--initial-level", f.initial_level, "Initial storage level (default: full)");
    cmd->add_option("--pmin", f.pmin, "Lower price bound");
    cmd->add_option("--pmax", f.pmax, "Upper price bound");
    cmd->add_option("--offers", f.offers, "Offers per slot for OCSMB / MOCSMB");
    cmd->add_option("--emax", f.emax, "Maximum relative forecast error");
    cmd->add_option("--eta", f.eta, "Oracle energy quantum (0: C/400)");
    cmd->add_option("--alpha1", f.alpha1, "Penalty price multiplier");
    cmd->add_option("--alpha2", f.alpha2, "Penalty constant per MWh");
    cmd->add_flag("--clip-prices", f.clip_prices, "Clip loaded prices onto [pmin, pmax]");
    cmd->add_flag("--derive-bounds", f.derive_bounds, "Take pmin / pmax from the loaded prices");
    cmd->add_option("--prices", f.price_csv, "Price CSV (timestamp,price)");
    cmd->add_option("--wind", f.wind_csv, "Wind CSV (timestamp,wind_mw)");
    cmd->add_option("--out", f.out, "Output directory");
    cmd->add_option("--threads", f.threads, "Worker threads (0: all cores)");
}

HarnessSettings resolve(const CommonFlags& f) {
    HarnessSettings s = f.config.empty() ? HarnessSettings{} : load_config(f.config);
    auto& cfg = s.experiment;
    if (f.seed) cfg.seed = *f.seed;
    if (f.runs) cfg.runs = *f.runs;
    if (f.horizon) cfg.horizon = *f.horizon;
    if (f.capacity) {
        cfg.storage.capacity = *f.capacity;
        cfg.storage.initial_level = *f.capacity;
    }
    if (f.charge_rate) cfg.storage.charge_rate = *f.charge_rate;
    if (f.discharge_rate) cfg.storage.discharge_rate = *f.discharge_rate;
    if (f.initial_level) cfg.storage.initial_level = *f.initial_level;
    if (f.pmin || f.pmax) {
        cfg.bounds = PriceBounds(f.pmin.value_or(cfg.bounds.p_min()), f.pmax.value_or(cfg.bounds.p_max()));
    }
    if (f.offers) cfg.offers = *f.offers;
    if (f.emax) cfg.e_max = *f.emax;
    if (f.eta) cfg.eta = *f.eta;
    if (f.alpha1) cfg.penalty.alpha1 = *f.alpha1;
    if (f.alpha2) cfg.penalty.alpha2 = *f.alpha2;
    if (f.clip_prices) cfg.clip_prices = true;
    if (f.derive_bounds) cfg.derive_bounds = true;
    if (!f.price_csv.empty()) cfg.price_csv = f.price_csv;
    if (!f.wind_csv.empty()) cfg.wind_csv = f.wind_csv;
    if (f.out) s.out_dir = *f.out;
    if (f.threads) s.threads = *f.threads;
    cfg.validate();
    return s;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void print_summary(const Report& report) {
    std::printf("%-10s %16s %16s %14s %14s\n", "strategy", "total_profit", "mean_profit", "cr_max", "cr_mean");
    for (const auto& s : report.strategies) {
        std::printf("%-10s %16.6g %16.6g %14s %14s\n", s.name.c_str(), s.total_profit, s.mean_profit,
                    s.empirical_cr_max.is_unbounded() ? "unbounded" : fmt(s.empirical_cr_max.value()).c_str(),
                    s.empirical_cr_mean.is_unbounded() ? "unbounded" : fmt(s.empirical_cr_mean.value()).c_str());
    }
}

int cmd_compare(const CommonFlags& flags, const std::string& strategies, const std::string& sweep,
                bool per_slot) {
    auto s = resolve(flags);
    auto& cfg = s.experiment;
    if (!strategies.empty()) {
        cfg.strategies.clear();
        for (const auto& name : CLI::detail::split(strategies, ',')) cfg.strategies.push_back(parse_strategy(name));
    }
    if (per_slot) cfg.per_slot = true;
    if (!sweep.empty()) s.sweep_offers = parse_int_list(sweep);
    cfg.validate();

    const auto result = run_experiment(cfg, s.threads);
    print_summary(result.report);
    if (!s.out_dir.empty()) emit_report(result, s.out_dir);

    if (!s.sweep_offers.empty()) {
        const auto rows = run_offer_sweep(cfg, s.sweep_offers, s.threads);
        const std::string csv = sweep_csv(rows);
        if (s.out_dir.empty()) {
            std::cout << csv;
        } else {
            write_text_file((std::filesystem::path(s.out_dir) / "sweep.csv").string(), csv);
        }
    }
    return kOk;
}

int cmd_simulate(const CommonFlags& flags, const std::string& strategy, int run_index) {
    auto s = resolve(flags);
    auto& cfg = s.experiment;
    cfg.strategies = {parse_strategy(strategy)};
    cfg.per_slot = true;
    cfg.runs = 1;

    // A single run of the chosen instance: reseed so run 0 sees run_index's trace.
    cfg.seed ^= static_cast<std::uint64_t>(run_index);
    const auto result = run_experiment(cfg, 1);
    const auto instance = experiment_instance(cfg, 0);

    Json out = Json::object();
    out["strategy"] = strategy;
    out["profit"] = result.runs.front().profit;
    out["empirical_cr"] = ratio_to_json(result.runs.front().ratio);
    out["over_commitment"] = result.runs.front().over_commitment;
    out["theta"] = instance.realized.bounds().theta();
    out["theoretical_cr"] = theoretical_cr(instance.realized.bounds().theta());
    if (s.out_dir.empty()) {
        std::cout << out.dump(2) << '\n';
    } else {
        std::filesystem::create_directories(s.out_dir);
        write_text_file((std::filesystem::path(s.out_dir) / "simulate.json").string(), out.dump(2) + "\n");
        write_text_file((std::filesystem::path(s.out_dir) / "slots.csv").string(), slots_csv(result.report.slots));
        write_trace_csv(instance.realized, (std::filesystem::path(s.out_dir) / "prices.csv").string(),
                        (std::filesystem::path(s.out_dir) / "wind.csv").string());
    }
    return kOk;
}

struct AdversaryFlags {
    double theta = 4.0;
    int price_levels = 4;
    int levels = 4;
    std::string supply = "0,1,2";
    std::string curve = "threshold";
    std::optional<double> constant_price;
    std::uint64_t budget = 10'000'000;
};

int cmd_adversary(const CommonFlags& flags, const AdversaryFlags& a) {
    auto s = resolve(flags);
    const auto& cfg = s.experiment;
    const double capacity = cfg.storage.capacity;
    // Worst-case grids default to rates equal to the capacity and a full start.
    StorageSpec spec = StorageSpec::full(capacity, flags.charge_rate.value_or(capacity),
                                         flags.discharge_rate.value_or(capacity));
    if (flags.initial_level) spec.initial_level = *flags.initial_level;
    spec.validate();

    const double p_min = flags.pmin.value_or(1.0);
    const PriceBounds bounds(p_min, flags.pmax.value_or(p_min * a.theta));
    const auto disc = DiscretizationConfig::from_levels(capacity, a.levels);

    AdversaryGrid grid{bounds, static_cast<int>(flags.horizon.value_or(4)), AdversaryGrid::geometric_prices(bounds, a.price_levels), {}, a.budget};
    for (double k : parse_double_list(a.supply)) grid.supply_levels.push_back(k * disc.eta());

    std::shared_ptr<const PriceCurve> curve;
    double bound = theoretical_cr(bounds.theta());
    if (a.curve == "threshold") {
        curve = std::make_shared<ThresholdPolicy>(bounds, capacity);
    } else if (a.curve == "constant") {
        curve = std::make_shared<ConstantCurve>(bounds, capacity, a.constant_price.value_or(bounds.p_min()));
    } else if (a.curve == "linear") {
        curve = std::make_shared<LinearCurve>(bounds, capacity);
    } else {
        throw ValidationError("unknown curve '" + a.curve + "' (threshold, constant, linear)");
    }
    if (a.curve == "constant" && !a.constant_price) bound = bounds.theta();

    const auto report = adversarial_search(grid, [&] { return make_socs(curve, spec); }, spec, disc, bound,
                                           s.threads);
    const Json j = worst_case_to_json(report);
    if (s.out_dir.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::filesystem::create_directories(s.out_dir);
        write_text_file((std::filesystem::path(s.out_dir) / "adversary.json").string(), j.dump(2) + "\n");
    }
    return kOk;
}

int cmd_gen_trace(const CommonFlags& flags) {
    auto s = resolve(flags);
    const auto& cfg = s.experiment;
    const Trace trace = gen_synthetic(cfg.seed, cfg.horizon, cfg.bounds, cfg.synthetic);
    if (s.out_dir.empty()) {
        write_price_csv(std::cout, trace);
        return kOk;
    }
    std::filesystem::create_directories(s.out_dir);
    write_trace_csv(trace, (std::filesystem::path(s.out_dir) / "prices.csv").string(),
                    (std::filesystem::path(s.out_dir) / "wind.csv").string());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online offering strategies for a storage-assisted renewable producer"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);

    CommonFlags common;
    std::string strategies;
    std::string sweep;
    bool per_slot = false;
    auto* compare = app.add_subcommand("compare", "Multi-run comparison against the offline optimum");
    add_common(compare, common);
    compare->add_option("--strategies", strategies, "Comma-separated subset of socs,ocsmb,mocsmb,fonline,nostorage,ofa");
    compare->add_option("--sweep-offers", sweep, "Offer counts to sweep, e.g. 1..15");
    compare->add_flag("--per-slot", per_slot, "Include run-0 slot outcomes in the report");

    std::string strategy = "socs";
    int run_index = 0;
    auto* simulate = app.add_subcommand("simulate", "One trace, one strategy");
    add_common(simulate, common);
    simulate->add_option("--strategy", strategy, "socs, ocsmb, mocsmb, fonline, nostorage or ofa");
    simulate->add_option("--run", run_index, "Run index selecting the synthetic instance");

    AdversaryFlags adv;
    auto* adversary = app.add_subcommand("adversary", "Exhaustive worst-case search on a small grid");
    add_common(adversary, common);
    adversary->add_option("--theta", adv.theta, "Price fluctuation ratio (with --pmin, default 1)");
    adversary->add_option("--price-levels", adv.price_levels, "Geometric price levels");
    adversary->add_option("--levels", adv.levels, "Storage quanta C_d");
    adversary->add_option("--supply", adv.supply, "Supply levels in quanta, e.g. 0,1,2");
    adversary->add_option("--curve", adv.curve, "threshold, constant or linear");
    adversary->add_option("--constant-price", adv.constant_price, "Price of the constant curve (default pmin)");
    adversary->add_option("--budget", adv.budget, "Maximum number of instances");

    std::string thetas = "13.44,5.32,3.63,50";
    int decimals = 2;
    auto* cr_table = app.add_subcommand("cr-table", "Closed-form competitive ratio per theta");
    cr_table->add_option("--thetas", thetas, "Comma-separated theta values");
    cr_table->add_option("--decimals", decimals, "Digits after the point")->check(CLI::Range(0, 17));

    auto* gen_trace = app.add_subcommand("gen-trace", "Write a synthetic trace as price / wind CSVs");
    add_common(gen_trace, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kValidation;
    }

    try {
        if (*compare) return cmd_compare(common, strategies, sweep, per_slot);
        if (*simulate) return cmd_simulate(common, strategy, run_index);
        if (*adversary) return cmd_adversary(common, adv);
        if (*cr_table) {
            std::cout << cr_table_csv(parse_double_list(thetas), decimals);
            return kOk;
        }
        if (*gen_trace) return cmd_gen_trace(common);
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBudget;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    }
    return kOk;
}
