#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "storeoffer/adversary.hpp"
#include "storeoffer/errors.hpp"
#include "storeoffer/experiment.hpp"
#include "storeoffer/oracle.hpp"
#include "storeoffer/report.hpp"
#include "storeoffer/strategies.hpp"
#include "storeoffer/synthetic.hpp"
#include "storeoffer/threshold.hpp"
#include "storeoffer/trace_io.hpp"

namespace py = pybind11;
using namespace storeoffer;

namespace {

Trace make_trace(const std::vector<double>& prices, const std::vector<double>& output, const PriceBounds& bounds) {
    if (prices.size() != output.size()) throw ValidationError("prices and output differ in length");
    std::vector<TraceSlot> slots;
    for (std::size_t t = 0; t < prices.size(); ++t) slots.push_back({prices[t], output[t]});
    return Trace(std::move(slots), bounds);
}

Strategy strategy_for(const std::string& name, const Trace& trace, const StorageSpec& spec, int offers, double e_max) {
    const StrategyConfig cfg{ThresholdPolicy(trace.bounds(), spec.capacity), spec, offers, e_max};
    switch (parse_strategy(name)) {
        case StrategyKind::socs: return make_socs(cfg);
        case StrategyKind::ocsmb: return make_ocsmb(cfg);
        case StrategyKind::mocsmb: return make_mocsmb(cfg);
        case StrategyKind::fonline: return make_fonline(trace.bounds(), spec);
        default: throw ValidationError("simulate supports socs, ocsmb, mocsmb and fonline");
    }
}

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_python(const py::object& obj) {
    return Json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Online offering strategies for a storage-assisted renewable producer";
    m.attr("__version__") = kToolVersion;

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

    py::class_<PriceBounds>(m, "PriceBounds")
        .def(py::init<double, double>(), py::arg("p_min"), py::arg("p_max"))
        .def_property_readonly("p_min", &PriceBounds::p_min)
        .def_property_readonly("p_max", &PriceBounds::p_max)
        .def_property_readonly("theta", &PriceBounds::theta)
        .def("__repr__", [](const PriceBounds& b) {
            return "PriceBounds(" + std::to_string(b.p_min()) + ", " + std::to_string(b.p_max()) + ")";
        });

    py::class_<StorageSpec>(m, "StorageSpec")
        .def(py::init([](double capacity, double charge_rate, double discharge_rate, std::optional<double> initial) {
                 StorageSpec s = StorageSpec::full(capacity, charge_rate, discharge_rate);
                 if (initial) s.initial_level = *initial;
                 s.validate();
                 return s;
             }),
             py::arg("capacity") = 20.0, py::arg("charge_rate") = 10.0, py::arg("discharge_rate") = 10.0,
             py::arg("initial_level") = py::none())
        .def_readwrite("capacity", &StorageSpec::capacity)
        .def_readwrite("charge_rate", &StorageSpec::charge_rate)
        .def_readwrite("discharge_rate", &StorageSpec::discharge_rate)
        .def_readwrite("initial_level", &StorageSpec::initial_level);

    py::class_<Offer>(m, "Offer").def_readonly("price", &Offer::price).def_readonly("volume", &Offer::volume);

    py::class_<Trace>(m, "Trace")
        .def(py::init(&make_trace), py::arg("prices"), py::arg("output"), py::arg("bounds"))
        .def_property_readonly("horizon", &Trace::horizon)
        .def_property_readonly("bounds", &Trace::bounds)
        .def_property_readonly("prices", [](const Trace& t) {
            std::vector<double> v;
            for (const auto& s : t.slots()) v.push_back(s.price);
            return v;
        })
        .def_property_readonly("output", [](const Trace& t) {
            std::vector<double> v;
            for (const auto& s : t.slots()) v.push_back(s.renewable_output);
            return v;
        })
        .def("__len__", &Trace::horizon);

    py::class_<ThresholdPolicy>(m, "ThresholdPolicy")
        .def(py::init<PriceBounds, double>(), py::arg("bounds"), py::arg("capacity"))
        .def_property_readonly("c_th", &ThresholdPolicy::c_th)
        .def_property_readonly("last_step", &ThresholdPolicy::last_step)
        .def_property_readonly("cr", &ThresholdPolicy::cr_value)
        .def("offer_price", &ThresholdPolicy::offer_price, py::arg("level"))
        .def("level_for_price", &ThresholdPolicy::level_for_price, py::arg("price"))
        .def("sell_down_level", &ThresholdPolicy::sell_down_level, py::arg("price"));

    m.def("theoretical_cr", &theoretical_cr, py::arg("theta"));
    m.def("c_threshold", &c_threshold, py::arg("capacity"), py::arg("theta"));

    m.def(
        "socs_offer",
        [](const ThresholdPolicy& policy, const StorageSpec& spec, double price, double u, double level) {
            return socs_offer(policy, spec, price, u, level).offers();
        },
        py::arg("policy"), py::arg("spec"), py::arg("price"), py::arg("u"), py::arg("level"));
    m.def(
        "ocsmb_offers",
        [](const ThresholdPolicy& policy, const StorageSpec& spec, int offers, double u, double level) {
            return ocsmb_offers(StrategyConfig{policy, spec, offers, 0.1}, u, level).offers();
        },
        py::arg("policy"), py::arg("spec"), py::arg("offers"), py::arg("u"), py::arg("level"));

    m.def(
        "simulate",
        [](const std::string& strategy, const Trace& trace, const StorageSpec& spec, int offers, double e_max,
           std::uint64_t seed) {
            const auto inst = apply_forecast_error(trace, e_max, seed);
            const Trace& realized = strategy == "mocsmb" ? inst.realized : trace;
            const auto run = simulate_run(realized, spec, {}, strategy_for(strategy, trace, spec, offers, e_max),
                                          inst.forecasts);
            py::dict out;
            out["total_profit"] = run.total_profit;
            std::vector<double> commitments, over, levels;
            for (const auto& s : run.slots) {
                commitments.push_back(s.commitment);
                over.push_back(s.over_commitment);
                levels.push_back(s.storage_after);
            }
            out["commitments"] = commitments;
            out["over_commitment"] = over;
            out["levels"] = levels;
            return out;
        },
        py::arg("strategy"), py::arg("trace"), py::arg("spec") = StorageSpec{}, py::arg("offers") = 10,
        py::arg("e_max") = 0.1, py::arg("seed") = 0,
        "Runs one strategy over the trace. For mocsmb the trace output is the forecast and the realized output "
        "is drawn within the error band using `seed`.");

    m.def(
        "offline_opt",
        [](const Trace& trace, const StorageSpec& spec, double eta) {
            const auto disc = eta > 0.0 ? DiscretizationConfig::from_eta(spec.capacity, eta)
                                        : DiscretizationConfig::standard(spec.capacity);
            const auto opt = offline_opt_dp(trace, spec, disc);
            py::dict out;
            out["total_profit"] = opt.total_profit;
            out["commitments"] = opt.commitments;
            out["levels"] = opt.levels;
            return out;
        },
        py::arg("trace"), py::arg("spec") = StorageSpec{}, py::arg("eta") = 0.0);

    m.def(
        "gen_synthetic",
        [](std::uint64_t seed, std::size_t horizon, const PriceBounds& bounds) {
            return gen_synthetic(seed, horizon, bounds);
        },
        py::arg("seed"), py::arg("horizon"), py::arg("bounds") = PriceBounds(13.9, 186.9));

    m.def(
        "load_trace",
        [](const std::string& prices, const std::string& wind, std::optional<double> p_min,
           std::optional<double> p_max, bool clip) {
            if (!p_min || !p_max) return load_trace(prices, wind, BoundsMode::derived());
            return load_trace(prices, wind, clip ? BoundsMode::clipped(*p_min, *p_max) : BoundsMode::fixed(*p_min, *p_max));
        },
        py::arg("prices"), py::arg("wind"), py::arg("p_min") = py::none(), py::arg("p_max") = py::none(),
        py::arg("clip") = false);

    m.def(
        "run_experiment",
        [](const py::object& config, unsigned threads) {
            const ExperimentConfig cfg =
                config.is_none() ? ExperimentConfig{} : config_from_json(from_python(config));
            ExperimentResult result;
            {
                py::gil_scoped_release release;
                result = run_experiment(cfg, threads);
            }
            return to_python(report_to_json(result.report));
        },
        py::arg("config") = py::none(), py::arg("threads") = 1,
        "Runs the comparison experiment; `config` uses the report's config schema.");

    m.def("default_config", [] { return to_python(config_to_json(ExperimentConfig{})); });

    m.def(
        "adversarial_search",
        [](double theta, int horizon, int price_levels, int levels, std::vector<double> supply_quanta) {
            const PriceBounds bounds(1.0, theta);
            const double c = static_cast<double>(levels);
            const auto disc = DiscretizationConfig::from_levels(c, levels);
            const StorageSpec spec = StorageSpec::full(c, c, c);
            AdversaryGrid grid{bounds, horizon, AdversaryGrid::geometric_prices(bounds, price_levels), {}, 10'000'000};
            for (double q : supply_quanta) grid.supply_levels.push_back(q * disc.eta());
            const auto policy = std::make_shared<ThresholdPolicy>(bounds, c);
            WorstCaseReport report = [&] {
                py::gil_scoped_release release;
                return adversarial_search(grid, [&] { return make_socs(policy, spec); }, spec, disc,
                                          theoretical_cr(theta));
            }();
            return to_python(worst_case_to_json(report));
        },
        py::arg("theta"), py::arg("horizon") = 4, py::arg("price_levels") = 4, py::arg("levels") = 4,
        py::arg("supply_quanta") = std::vector<double>{0.0, 1.0, 2.0},
        "Worst-case SOCS ratio over every small trace with C_d = levels and a full start.");
}
