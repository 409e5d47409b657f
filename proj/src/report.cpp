#include "storeoffer/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "storeoffer/errors.hpp"
#include "storeoffer/threshold.hpp"

namespace storeoffer {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json outcome_to_json(const SlotOutcome& o) {
    return Json{{"commitment", o.commitment},    {"over_commitment", o.over_commitment},
                {"charge", o.charge},            {"discharge", o.discharge},
                {"profit", o.profit},            {"storage_after", o.storage_after}};
}

SlotOutcome outcome_from_json(const Json& j) {
    return SlotOutcome{j.at("commitment").get<double>(), j.at("over_commitment").get<double>(),
                       j.at("charge").get<double>(),     j.at("discharge").get<double>(),
                       j.at("profit").get<double>(),     j.at("storage_after").get<double>()};
}

}  // namespace

Json ratio_to_json(const CompetitiveRatio& ratio) {
    if (ratio.is_unbounded()) return "unbounded";
    return ratio.value();
}

CompetitiveRatio ratio_from_json(const Json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() != "unbounded") throw ValidationError("bad ratio value in report");
        return CompetitiveRatio::unbounded();
    }
    return CompetitiveRatio::finite(j.get<double>());
}

Json config_to_json(const ExperimentConfig& cfg) {
    Json strategies = Json::array();
    for (auto kind : cfg.strategies) strategies.push_back(strategy_name(kind));
    return Json{
        {"runs", cfg.runs},
        {"horizon", cfg.horizon},
        {"seed", cfg.seed},
        {"storage",
         {{"capacity", cfg.storage.capacity},
          {"charge_rate", cfg.storage.charge_rate},
          {"discharge_rate", cfg.storage.discharge_rate},
          {"initial_level", cfg.storage.initial_level}}},
        {"prices",
         {{"p_min", cfg.bounds.p_min()},
          {"p_max", cfg.bounds.p_max()},
          {"theta", cfg.bounds.theta()},
          {"price_csv", cfg.price_csv},
          {"wind_csv", cfg.wind_csv},
          {"clip", cfg.clip_prices},
          {"derive_bounds", cfg.derive_bounds}}},
        {"penalty", {{"alpha1", cfg.penalty.alpha1}, {"alpha2", cfg.penalty.alpha2}}},
        {"strategy", {{"names", strategies}, {"offers", cfg.offers}, {"e_max", cfg.e_max}}},
        {"oracle", {{"eta", cfg.eta}, {"effective_eta", cfg.discretization().eta()}}},
        {"synthetic",
         {{"wind_capacity", cfg.synthetic.wind_capacity},
          {"price_volatility", cfg.synthetic.price_volatility},
          {"wind_mean_fraction", cfg.synthetic.wind_mean_fraction},
          {"wind_persistence", cfg.synthetic.wind_persistence},
          {"wind_noise_fraction", cfg.synthetic.wind_noise_fraction}}},
        {"per_slot", cfg.per_slot},
    };
}

ExperimentConfig config_from_json(const Json& j) {
    ExperimentConfig cfg;
    cfg.runs = j.at("runs").get<int>();
    cfg.horizon = j.at("horizon").get<std::size_t>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    const auto& st = j.at("storage");
    cfg.storage = StorageSpec{st.at("capacity").get<double>(), st.at("charge_rate").get<double>(),
                              st.at("discharge_rate").get<double>(), st.at("initial_level").get<double>()};
    const auto& pr = j.at("prices");
    cfg.bounds = PriceBounds(pr.at("p_min").get<double>(), pr.at("p_max").get<double>());
    cfg.price_csv = pr.at("price_csv").get<std::string>();
    cfg.wind_csv = pr.at("wind_csv").get<std::string>();
    cfg.clip_prices = pr.at("clip").get<bool>();
    cfg.derive_bounds = pr.at("derive_bounds").get<bool>();
    cfg.penalty = PenaltyParams{j.at("penalty").at("alpha1").get<double>(), j.at("penalty").at("alpha2").get<double>()};
    const auto& s = j.at("strategy");
    cfg.strategies.clear();
    for (const auto& name : s.at("names")) cfg.strategies.push_back(parse_strategy(name.get<std::string>()));
    cfg.offers = s.at("offers").get<int>();
    cfg.e_max = s.at("e_max").get<double>();
    cfg.eta = j.at("oracle").at("eta").get<double>();
    const auto& sy = j.at("synthetic");
    cfg.synthetic = SyntheticParams{sy.at("wind_capacity").get<double>(), sy.at("price_volatility").get<double>(),
                                    sy.at("wind_mean_fraction").get<double>(),
                                    sy.at("wind_persistence").get<double>(),
                                    sy.at("wind_noise_fraction").get<double>()};
    cfg.per_slot = j.at("per_slot").get<bool>();
    return cfg;
}

Json report_to_json(const Report& report) {
    Json strategies = Json::object();
    for (const auto& s : report.strategies) {
        strategies[s.name] = Json{{"total_profit", s.total_profit},
                                  {"mean_profit", s.mean_profit},
                                  {"empirical_cr_max", ratio_to_json(s.empirical_cr_max)},
                                  {"empirical_cr_mean", ratio_to_json(s.empirical_cr_mean)}};
    }
    Json j{{"meta",
            {{"tool", report.meta.tool},
             {"version", report.meta.version},
             {"seed", report.meta.seed},
             {"runs", report.meta.runs}}},
           {"config", config_to_json(report.config)},
           {"strategies", strategies}};
    if (!report.slots.empty()) {
        Json slots = Json::array();
        for (const auto& s : report.slots) {
            Json row{{"strategy", s.strategy}, {"slot", s.slot}, {"price", s.price}, {"renewable", s.renewable}};
            row.update(outcome_to_json(s.outcome));
            slots.push_back(std::move(row));
        }
        j["slots"] = std::move(slots);
    }
    return j;
}

Report report_from_json(const Json& j) {
    Report report;
    const auto& meta = j.at("meta");
    report.meta = ReportMeta{meta.at("tool").get<std::string>(), meta.at("version").get<std::string>(),
                             meta.at("seed").get<std::uint64_t>(), meta.at("runs").get<int>()};
    report.config = config_from_json(j.at("config"));
    for (const auto& [name, s] : j.at("strategies").items()) {
        report.strategies.push_back({name, s.at("total_profit").get<double>(), s.at("mean_profit").get<double>(),
                                     ratio_from_json(s.at("empirical_cr_max")),
                                     ratio_from_json(s.at("empirical_cr_mean"))});
    }
    if (j.contains("slots")) {
        for (const auto& s : j.at("slots")) {
            report.slots.push_back({s.at("strategy").get<std::string>(), s.at("slot").get<std::size_t>(),
                                    s.at("price").get<double>(), s.at("renewable").get<double>(),
                                    outcome_from_json(s)});
        }
    }
    return report;
}

std::string runs_csv(const std::vector<RunRecord>& runs) {
    std::ostringstream out;
    out << "run,strategy,profit,empirical_cr,over_commitment\n";
    for (const auto& r : runs) {
        out << r.run << ',' << r.strategy << ',' << num(r.profit) << ',' << r.ratio.to_string() << ','
            << num(r.over_commitment) << '\n';
    }
    return out.str();
}

std::string slots_csv(const std::vector<SlotRecord>& slots) {
    std::ostringstream out;
    out << "strategy,slot,price,renewable,commitment,over_commitment,charge,discharge,profit,storage_after\n";
    for (const auto& s : slots) {
        const auto& o = s.outcome;
        out << s.strategy << ',' << s.slot << ',' << num(s.price) << ',' << num(s.renewable) << ','
            << num(o.commitment) << ',' << num(o.over_commitment) << ',' << num(o.charge) << ','
            << num(o.discharge) << ',' << num(o.profit) << ',' << num(o.storage_after) << '\n';
    }
    return out.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "offers,socs_mean_profit,ocsmb_mean_profit,mocsmb_mean_profit,ofa_mean_profit\n";
    for (const auto& r : rows) {
        out << r.offers << ',' << num(r.socs_mean_profit) << ',' << num(r.ocsmb_mean_profit) << ','
            << num(r.mocsmb_mean_profit) << ',' << num(r.ofa_mean_profit) << '\n';
    }
    return out.str();
}

std::string cr_table_csv(const std::vector<double>& thetas, int decimals) {
    std::ostringstream out;
    out << "theta,cr\n";
    for (double theta : thetas) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%g,%.*f\n", theta, decimals, theoretical_cr(theta));
        out << buf;
    }
    return out.str();
}

Json trace_to_json(const Trace& trace) {
    Json slots = Json::array();
    for (const auto& s : trace.slots()) slots.push_back({{"price", s.price}, {"renewable", s.renewable_output}});
    return Json{{"p_min", trace.bounds().p_min()}, {"p_max", trace.bounds().p_max()}, {"slots", slots}};
}

Json worst_case_to_json(const WorstCaseReport& report) {
    Json buckets = Json::array();
    for (const auto& [level, ratio] : report.by_min_level) {
        buckets.push_back({{"min_level_index", level}, {"max_ratio", ratio_to_json(ratio)}});
    }
    return Json{{"max_ratio", ratio_to_json(report.max_ratio)},
                {"theoretical_bound", report.theoretical_bound},
                {"instances", report.instances},
                {"argmax_instance", trace_to_json(report.argmax_instance)},
                {"by_min_level", buckets}};
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("failed writing " + path);
}

void emit_report(const ExperimentResult& result, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
    const std::filesystem::path base(dir);
    write_text_file((base / "report.json").string(), report_to_json(result.report).dump(2) + "\n");
    write_text_file((base / "runs.csv").string(), runs_csv(result.runs));
    if (!result.report.slots.empty()) {
        write_text_file((base / "slots.csv").string(), slots_csv(result.report.slots));
    }
}

}  // namespace storeoffer
