#include "storeoffer/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "storeoffer/errors.hpp"
#include "storeoffer/trace_io.hpp"

namespace storeoffer {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

double to_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ValidationError(key + ": '" + text + "' is not a number");
    }
    return v;
}

long long to_integer(const std::string& key, const std::string& text) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ValidationError(key + ": '" + text + "' is not an integer");
    }
    return v;
}

bool to_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ValidationError(key + ": '" + text + "' is not a boolean");
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::istream& in, const std::string& source) {
    std::map<std::string, std::string> values;
    std::string section;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        const std::string text = trim(comment == std::string::npos ? line : line.substr(0, comment));
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']') throw ParseError(source, lineno, "unterminated section header");
            section = trim(text.substr(1, text.size() - 2));
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ParseError(source, lineno, "expected 'key = value'");
        const std::string key = trim(text.substr(0, eq));
        if (key.empty()) throw ParseError(source, lineno, "empty key");
        values[section.empty() ? key : section + "." + key] = trim(text.substr(eq + 1));
    }
    return values;
}

void apply_settings(const std::map<std::string, std::string>& values, HarnessSettings& settings) {
    auto& cfg = settings.experiment;
    double p_min = cfg.bounds.p_min();
    double p_max = cfg.bounds.p_max();
    bool initial_set = false;
    for (const auto& [key, value] : values) {
        if (key == "experiment.runs") cfg.runs = static_cast<int>(to_integer(key, value));
        else if (key == "experiment.horizon") cfg.horizon = static_cast<std::size_t>(to_integer(key, value));
        else if (key == "experiment.seed") cfg.seed = static_cast<std::uint64_t>(to_integer(key, value));
        else if (key == "experiment.threads") settings.threads = static_cast<unsigned>(to_integer(key, value));
        else if (key == "experiment.sweep_offers") settings.sweep_offers = parse_int_list(value);
        else if (key == "storage.capacity") cfg.storage.capacity = to_double(key, value);
        else if (key == "storage.charge_rate") cfg.storage.charge_rate = to_double(key, value);
        else if (key == "storage.discharge_rate") cfg.storage.discharge_rate = to_double(key, value);
        else if (key == "storage.initial_level") {
            cfg.storage.initial_level = to_double(key, value);
            initial_set = true;
        }
        else if (key == "prices.p_min") p_min = to_double(key, value);
        else if (key == "prices.p_max") p_max = to_double(key, value);
        else if (key == "prices.clip") cfg.clip_prices = to_bool(key, value);
        else if (key == "prices.derive_bounds") cfg.derive_bounds = to_bool(key, value);
        else if (key == "prices.price_csv") cfg.price_csv = value;
        else if (key == "prices.wind_csv") cfg.wind_csv = value;
        else if (key == "penalty.alpha1") cfg.penalty.alpha1 = to_double(key, value);
        else if (key == "penalty.alpha2") cfg.penalty.alpha2 = to_double(key, value);
        else if (key == "strategy.names") {
            cfg.strategies.clear();
            for (const auto& name : split(value, ',')) cfg.strategies.push_back(parse_strategy(name));
        }
        else if (key == "strategy.offers") cfg.offers = static_cast<int>(to_integer(key, value));
        else if (key == "strategy.e_max") cfg.e_max = to_double(key, value);
        else if (key == "oracle.eta") cfg.eta = to_double(key, value);
        else if (key == "synthetic.wind_capacity") cfg.synthetic.wind_capacity = to_double(key, value);
        else if (key == "synthetic.price_volatility") cfg.synthetic.price_volatility = to_double(key, value);
        else if (key == "synthetic.wind_mean_fraction") cfg.synthetic.wind_mean_fraction = to_double(key, value);
        else if (key == "synthetic.wind_persistence") cfg.synthetic.wind_persistence = to_double(key, value);
        else if (key == "synthetic.wind_noise_fraction") cfg.synthetic.wind_noise_fraction = to_double(key, value);
        else if (key == "output.out") settings.out_dir = value;
        else if (key == "output.per_slot") cfg.per_slot = to_bool(key, value);
        else throw ValidationError("unknown configuration key '" + key + "'");
    }
    cfg.bounds = PriceBounds(p_min, p_max);
    // The storage starts full unless told otherwise.
    if (!initial_set && values.count("storage.capacity")) cfg.storage.initial_level = cfg.storage.capacity;
}

HarnessSettings load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    HarnessSettings settings;
    apply_settings(parse_key_values(in, path), settings);
    return settings;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (const auto& item : split(text, ',')) {
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(static_cast<int>(to_integer("list", item)));
            continue;
        }
        const auto lo = to_integer("list", trim(item.substr(0, dots)));
        const auto hi = to_integer("list", trim(item.substr(dots + 2)));
        if (hi < lo) throw ValidationError("empty range '" + item + "'");
        for (auto v = lo; v <= hi; ++v) out.push_back(static_cast<int>(v));
    }
    if (out.empty()) throw ValidationError("empty list");
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split(text, ',')) out.push_back(to_double("list", item));
    if (out.empty()) throw ValidationError("empty list");
    return out;
}

}  // namespace storeoffer
