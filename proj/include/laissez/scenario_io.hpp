#pragma once

#include "laissez/scenario.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace laissez {

/// File could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses scenario YAML. Syntax and schema problems throw ScenarioError with
/// line and column; semantic checks are left to validate_scenario.
Scenario parse_scenario(std::string_view text);

/// Canonical YAML form. parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

/// Throws IoError or ScenarioError.
Scenario load_scenario_file(const std::filesystem::path& path);

struct BundledScenario {
    std::string_view name;
    std::string_view text;
};

const std::vector<BundledScenario>& bundled_scenarios();

/// A path to a scenario file, or the name of a bundled scenario.
Scenario resolve_scenario(const std::string& ref);

}  // namespace laissez
