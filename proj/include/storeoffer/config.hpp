#pragma once

// Experiment configuration files: `[section]` headers followed by
// `key = value` lines; `#` or `;` start a comment. Keys are addressed as
// `section.key`, e.g. `storage.capacity`. Unknown keys are rejected.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "storeoffer/experiment.hpp"

namespace storeoffer {

struct HarnessSettings {
    ExperimentConfig experiment;
    unsigned threads = 1;
    std::string out_dir;
    std::vector<int> sweep_offers;  // empty: no sweep
};

std::map<std::string, std::string> parse_key_values(std::istream& in, const std::string& source = "<config>");

void apply_settings(const std::map<std::string, std::string>& values, HarnessSettings& settings);

/// Throws IoError when the file cannot be read.
HarnessSettings load_config(const std::string& path);

/// Parses "1,2,5" or a range "1..15" (or a mix) into integers.
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);

}  // namespace storeoffer
