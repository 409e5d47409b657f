// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Pass `--cli <path>` to also drive the CLI binary.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "storeoffer/adversary.hpp"
#include "storeoffer/experiment.hpp"
#include "storeoffer/oracle.hpp"
#include "storeoffer/report.hpp"
#include "storeoffer/strategies.hpp"
#include "storeoffer/synthetic.hpp"
#include "storeoffer/threshold.hpp"

using namespace storeoffer;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs a shell command and returns its stdout; exit status in `status`.
std::string capture(const std::string& command, int& status) {
    std::string out;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) {
        status = -1;
        return out;
    }
    char buf[4096];
    while (std::fgets(buf, sizeof buf, pipe)) out += buf;
    status = pclose(pipe);
    return out;
}

const PriceBounds kSuiteBounds(13.9, 186.9);
const StorageSpec kSuiteSpec = StorageSpec::full(20.0, 10.0, 10.0);

// ---------------------------------------------------------------------------

Outcome closed_form_table(const std::string& cli) {
    Outcome o;
    const auto start = Clock::now();
    const std::vector<std::pair<double, double>> expected{{13.44, 4.37}, {5.32, 3.38}, {3.63, 2.95}, {50.0, 5.74}};
    std::vector<double> thetas;
    for (const auto& e : expected) thetas.push_back(e.first);

    std::istringstream table(cr_table_csv(thetas, 6));
    std::string line;
    std::getline(table, line);
    if (line != "theta,cr") o.fail("bad header '" + line + "'");
    for (const auto& [theta, cr] : expected) {
        std::getline(table, line);
        double t = 0.0, value = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf", &t, &value) != 2 || std::abs(t - theta) > 1e-12) {
            o.fail("unparsable row '" + line + "'");
            continue;
        }
        if (std::abs(value - cr) > 0.005) o.fail("theta " + num(theta) + " -> " + num(value));
        o.detail += num(theta) + "->" + num(value, 5) + " ";
    }

    if (!cli.empty()) {
        int status = 0;
        const std::string out = capture("'" + cli + "' cr-table", status);
        for (const char* row : {"13.44,4.37", "5.32,3.38", "3.63,2.95", "50,5.74"}) {
            if (status != 0 || out.find(row) == std::string::npos) o.fail(std::string("cli output lacks ") + row);
        }
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= 1.0) o.fail("took " + num(elapsed) + " s");
    if (o.pass) o.detail += "(" + num(elapsed * 1e3, 3) + " ms)";
    return o;
}

Outcome threshold_identities() {
    Outcome o;
    const auto start = Clock::now();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> capacity(0.5, 200.0);
    std::uniform_real_distribution<double> theta(1.01, 100.0);
    std::uniform_real_distribution<double> p_min(0.5, 80.0);
    double worst_top = 0.0, worst_inverse = 0.0;
    for (int k = 0; k < 50; ++k) {
        const double c = capacity(rng);
        const double th = theta(rng);
        const double lo = p_min(rng);
        const ThresholdPolicy g(PriceBounds(lo, lo * th), c);
        const double p_max = g.bounds().p_max();

        worst_top = std::max(worst_top, std::abs(g.offer_price(0.0) - p_max) / p_max);
        if (g.offer_price(g.c_th()) != lo) o.fail("g(c_th) != p_min");

        constexpr int kSweep = 10'000;
        double prev = g.offer_price(0.0);
        for (int i = 1; i <= kSweep; ++i) {
            const double z = c * (static_cast<double>(i) / kSweep);
            const double p = g.offer_price(z);
            if (p > prev) o.fail("g increases at z=" + num(z));
            prev = p;
            if (z < g.c_th()) {
                const double back = g.level_for_price(p);
                worst_inverse = std::max(worst_inverse, std::abs(back - z) / c);
                worst_inverse = std::max(worst_inverse, std::abs(g.offer_price(back) - p) / p);
            }
        }
    }
    if (worst_top > 1e-9) o.fail("|g(0)-p_max|/p_max = " + num(worst_top));
    if (worst_inverse > 1e-9) o.fail("inverse round trip error " + num(worst_inverse));
    const double elapsed = seconds_since(start);
    if (elapsed >= 1.0) o.fail("took " + num(elapsed) + " s");
    if (o.pass) {
        o.detail = "max g(0) error " + num(worst_top, 3) + ", max inverse error " + num(worst_inverse, 3) + " (" +
                   num(elapsed * 1e3, 3) + " ms)";
    }
    return o;
}

Outcome no_over_commitment() {
    Outcome o;
    constexpr std::size_t kSlots = 10'000;
    constexpr std::size_t kHorizon = 100;
    std::size_t socs_slots = 0;
    std::size_t mocsmb_slots = 0;
    for (std::uint64_t seed = 0; seed * kHorizon < kSlots; ++seed) {
        const Trace trace = gen_synthetic(seed, kHorizon, kSuiteBounds);
        const StrategyConfig cfg{ThresholdPolicy(kSuiteBounds, 20.0), kSuiteSpec, 10, 0.49};
        for (const auto& s : simulate_run(trace, kSuiteSpec, {}, make_socs(cfg)).slots) {
            ++socs_slots;
            if (s.over_commitment != 0.0) o.fail("SOCS over-committed " + num(s.over_commitment));
        }
        for (double e : {0.1, 0.3, 0.49}) {
            auto ecfg = cfg;
            ecfg.e_max = e;
            const auto inst = apply_forecast_error(trace, e, seed + 1000);
            for (const auto& s : simulate_run(inst.realized, kSuiteSpec, {}, make_mocsmb(ecfg), inst.forecasts).slots) {
                ++mocsmb_slots;
                if (s.over_commitment != 0.0) o.fail("MOCSMB over-committed " + num(s.over_commitment));
            }
        }
    }
    if (o.pass) {
        o.detail = "y=0 on " + std::to_string(socs_slots) + " SOCS slots and " + std::to_string(mocsmb_slots) +
                   " MOCSMB slots";
    }
    return o;
}

Outcome oracle_soundness() {
    Outcome o;
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> horizon(1, 4), levels(1, 6), price(1, 20), supply(0, 3);
    const double etas[] = {0.25, 0.5, 1.0, 2.0};
    std::uniform_int_distribution<int> eta_pick(0, 3);
    int agreed = 0;
    for (int k = 0; k < 1000; ++k) {
        const double eta = etas[eta_pick(rng)];
        const int cd = levels(rng);
        const double c = cd * eta;
        std::uniform_int_distribution<int> quanta(0, cd), rate(1, cd);
        const StorageSpec spec{c, rate(rng) * eta, rate(rng) * eta, quanta(rng) * eta};
        std::vector<TraceSlot> slots;
        const int t = horizon(rng);
        for (int i = 0; i < t; ++i) slots.push_back({double(price(rng)), supply(rng) * eta});
        const Trace trace(slots, PriceBounds(1.0, 20.0));
        const auto disc = DiscretizationConfig::from_eta(c, eta);
        const double dp = offline_opt_dp(trace, spec, disc).total_profit;
        const double ex = offline_opt_exhaustive(trace, spec, disc).total_profit;
        if (dp != ex) {
            o.fail("instance " + std::to_string(k) + ": dp " + num(dp, 17) + " vs exhaustive " + num(ex, 17));
        } else {
            ++agreed;
        }
    }

    const auto disc = DiscretizationConfig::standard(20.0);
    double worst_margin = INFINITY;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto inst = apply_forecast_error(gen_synthetic(seed, 360, kSuiteBounds), 0.1, seed);
        const Trace& trace = inst.realized;
        const StrategyConfig cfg{ThresholdPolicy(kSuiteBounds, 20.0), kSuiteSpec, 10, 0.1};
        const double bound = offline_opt_dp(trace, kSuiteSpec, disc).total_profit +
                             kSuiteBounds.p_max() * disc.eta() * trace.horizon();
        const std::vector<double> profits{
            simulate_run(trace, kSuiteSpec, {}, make_socs(cfg)).total_profit,
            simulate_run(trace, kSuiteSpec, {}, make_ocsmb(cfg)).total_profit,
            simulate_run(trace, kSuiteSpec, {}, make_mocsmb(cfg), inst.forecasts).total_profit,
            simulate_run(trace, kSuiteSpec, {}, make_fonline(kSuiteBounds, kSuiteSpec)).total_profit,
            nostorage_profit(trace)};
        for (double p : profits) {
            worst_margin = std::min(worst_margin, bound - p);
            if (p > bound) o.fail("run " + std::to_string(seed) + ": profit " + num(p) + " above " + num(bound));
        }
    }
    if (o.pass) {
        o.detail = std::to_string(agreed) + "/1000 exact agreements; smallest dominance margin " + num(worst_margin);
    }
    return o;
}

Outcome ratio_certification() {
    Outcome o;
    for (double theta : {2.0, 4.0, 10.0}) {
        const PriceBounds bounds(1.0, theta);
        const double c = 4.0;
        const auto disc = DiscretizationConfig::from_levels(c, 4);
        const StorageSpec spec = StorageSpec::full(c, c, c);
        const AdversaryGrid grid{bounds, 4, AdversaryGrid::geometric_prices(bounds, 4),
                                 {0.0, disc.eta(), 2.0 * disc.eta()}, 10'000'000};
        const double cr = theoretical_cr(theta);

        const auto policy = std::make_shared<ThresholdPolicy>(bounds, c);
        const auto socs = adversarial_search(grid, [&] { return make_socs(policy, spec); }, spec, disc, cr);
        if (socs.max_ratio.is_unbounded() || socs.max_ratio.value() > cr * 1.05) {
            o.fail("theta " + num(theta) + ": SOCS max ratio " + socs.max_ratio.to_string() + " vs CR " + num(cr));
        }

        const auto floor_curve = std::make_shared<ConstantCurve>(bounds, c, bounds.p_min());
        const auto flat = adversarial_search(grid, [&] { return make_socs(floor_curve, spec); }, spec, disc, theta);
        if (flat.max_ratio.is_unbounded() || flat.max_ratio.value() > theta) {
            o.fail("theta " + num(theta) + ": g=p_min max ratio " + flat.max_ratio.to_string());
        }

        // g held above p_min never sells while the price sits at p_min.
        const auto high_curve = std::make_shared<ConstantCurve>(bounds, c, std::sqrt(theta));
        const Trace low({{bounds.p_min(), 0.0}, {bounds.p_min(), disc.eta()}}, bounds);
        const auto pathology = empirical_cr(low, spec, {}, make_socs(high_curve, spec), disc);
        if (!pathology.is_unbounded()) o.fail("constant g above p_min gave " + pathology.to_string());

        o.detail += "theta " + num(theta) + ": SOCS " + num(socs.max_ratio.value(), 5) + " <= " + num(cr * 1.05, 5) +
                    ", g=p_min " + num(flat.max_ratio.value(), 5) + "; ";
    }
    if (o.pass) o.detail += "constant g > p_min: unbounded";
    return o;
}

// Known-then-revealed prices: OCSMB commits its book before seeing p(t).
Outcome offer_bound() {
    Outcome o;
    const auto disc = DiscretizationConfig::standard(20.0);
    const double theta = kSuiteBounds.theta();
    const double cr = theoretical_cr(theta);
    double worst_slack = INFINITY;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const Trace trace = gen_synthetic(seed, 360, kSuiteBounds);
        // an upper estimate of the continuous optimum
        const double opt = offline_opt_dp(trace, kSuiteSpec, disc).total_profit +
                           kSuiteBounds.p_max() * disc.eta() * trace.horizon();
        for (int m : {2, 3, 5, 10}) {
            const StrategyConfig cfg{ThresholdPolicy(kSuiteBounds, 20.0), kSuiteSpec, m, 0.1};
            const double alg = simulate_run(trace, kSuiteSpec, {}, make_ocsmb(cfg)).total_profit;
            const double bound = (1.0 + cr * theta / (m * m)) * cr;
            if (!(alg > 0.0) || !(opt / alg < bound)) {
                o.fail("seed " + std::to_string(seed) + " m=" + std::to_string(m) + ": ratio " + num(opt / alg));
            } else {
                worst_slack = std::min(worst_slack, bound - opt / alg);
            }
        }
    }

    ExperimentConfig suite;
    const auto rows = run_offer_sweep(suite, {3}, 0);
    const double ratio = rows.front().ocsmb_mean_profit / rows.front().socs_mean_profit;
    if (!(ratio >= 0.9)) o.fail("OCSMB(m=3)/SOCS mean profit " + num(ratio));
    if (o.pass) {
        o.detail = "smallest gap to the bound " + num(worst_slack) + "; OCSMB(m=3)/SOCS mean profit " + num(ratio);
    }
    return o;
}

Outcome forecast_relation() {
    Outcome o;
    double worst = INFINITY;
    std::size_t books = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const Trace predicted = gen_synthetic(seed, 360, kSuiteBounds);
        for (double e : {0.1, 0.2, 0.4}) {
            const auto inst = apply_forecast_error(predicted, e, seed);
            const StrategyConfig cfg{ThresholdPolicy(kSuiteBounds, 20.0), kSuiteSpec, 10, e};
            const double informed = simulate_run(inst.realized, kSuiteSpec, {}, make_ocsmb(cfg)).total_profit;
            const double hedged =
                simulate_run(inst.realized, kSuiteSpec, {}, make_mocsmb(cfg), inst.forecasts).total_profit;
            worst = std::min(worst, hedged / informed);
            if (hedged < (1.0 - 2.0 * e) * informed) {
                o.fail("seed " + std::to_string(seed) + " e=" + num(e) + ": " + num(hedged) + " < (1-2e) " +
                       num(informed));
            }
        }

        // zero error: every submitted book matches OCSMB on the true output
        const auto exact = apply_forecast_error(predicted, 0.0, seed);
        const StrategyConfig cfg{ThresholdPolicy(kSuiteBounds, 20.0), kSuiteSpec, 10, 0.0};
        const auto ocsmb = make_ocsmb(cfg);
        const auto mocsmb = make_mocsmb(cfg);
        double level = kSuiteSpec.initial_level;
        for (std::size_t t = 0; t < exact.realized.horizon(); ++t) {
            const auto& slot = exact.realized[t];
            const SlotView view{t, slot.price, slot.renewable_output, level, exact.forecasts[t]};
            const OfferBook a = ocsmb(view);
            const OfferBook b = mocsmb(view);
            ++books;
            if (!(a == b) || !(ocsmb_offers(cfg, slot.renewable_output, level) ==
                               mocsmb_offers(cfg, exact.forecasts[t], level))) {
                o.fail("books differ at seed " + std::to_string(seed) + " slot " + std::to_string(t));
                break;
            }
            const double x = settle_offer(a, slot.price);
            level = evolve_storage(level, kSuiteSpec, slot.renewable_output, x).next_level;
        }
    }
    if (o.pass) {
        o.detail = "min MOCSMB/OCSMB profit " + num(worst) + "; " + std::to_string(books) +
                   " zero-error books identical";
    }
    return o;
}

Outcome local_ratio_numerics() {
    Outcome o;
    for (double theta : {2.0, 10.0, 50.0}) {
        const ThresholdPolicy policy(PriceBounds(1.0, theta), 20.0);
        const auto sf = StepFunction::from_policy(policy, 200);
        double lo = INFINITY, hi = 0.0;
        for (std::size_t i = 1; i < sf.steps(); ++i) {
            const double r = local_cr_closed_form(sf, i);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        const double spread = (hi - lo) / lo;
        const double cr = theoretical_cr(theta);
        const double gap = std::abs(hi - cr) / cr;
        if (spread > 0.02) o.fail("theta " + num(theta) + ": spread " + num(spread));
        if (gap > 0.02) o.fail("theta " + num(theta) + ": max " + num(hi) + " vs " + num(cr));
        o.detail += "theta " + num(theta) + ": spread " + num(spread * 100, 3) + "%, max " + num(hi, 5) + " vs " +
                    num(cr, 5) + "; ";
    }
    return o;
}

Outcome reproducibility(const std::string& cli) {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / "storeoffer_acceptance";
    fs::remove_all(root);

    ExperimentConfig cfg;
    cfg.runs = 100;
    cfg.horizon = 360;
    cfg.seed = 7;
    emit_report(run_experiment(cfg, 1), (root / "serial").string());
    emit_report(run_experiment(cfg, 4), (root / "parallel").string());
    for (const char* name : {"report.json", "runs.csv"}) {
        if (read_file(root / "serial" / name) != read_file(root / "parallel" / name)) {
            o.fail(std::string("serial and parallel ") + name + " differ");
        }
    }

    if (!cli.empty()) {
        for (const char* dir : {"cli1", "cli2", "cli_parallel"}) {
            const std::string threads = std::string(dir) == "cli_parallel" ? " --threads 4" : "";
            int status = 0;
            capture("'" + cli + "' compare --runs 100 --horizon 360 --seed 7 --out '" + (root / dir).string() + "'" +
                        threads,
                    status);
            if (status != 0) o.fail(std::string("cli run ") + dir + " exited with " + std::to_string(status));
        }
        for (const char* name : {"report.json", "runs.csv"}) {
            const std::string first = read_file(root / "cli1" / name);
            if (first.empty()) o.fail(std::string("cli wrote no ") + name);
            if (first != read_file(root / "cli2" / name)) o.fail(std::string("repeated cli ") + name + " differs");
            if (first != read_file(root / "cli_parallel" / name)) o.fail(std::string("parallel cli ") + name + " differs");
            if (first != read_file(root / "serial" / name)) o.fail(std::string("cli and library ") + name + " differ");
        }
    }
    if (o.pass) o.detail = cli.empty() ? "library reports identical" : "cli and library reports byte-identical";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
    }

    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "closed-form competitive ratio table", [&] { return closed_form_table(cli); }},
        {2, "threshold function identities", threshold_identities},
        {3, "no over-commitment", no_over_commitment},
        {4, "offline oracle soundness", oracle_soundness},
        {5, "adversarial ratio certification", ratio_certification},
        {6, "multiple-offer bound", offer_bound},
        {7, "forecast-error relation", forecast_relation},
        {8, "local ratio numerics", local_ratio_numerics},
        {9, "reproducibility", [&] { return reproducibility(cli); }},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        std::printf("%s criterion %d: %s [%.2fs] %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                    seconds_since(start), o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
