#ifndef DEFORM_SCENARIO_HPP
#define DEFORM_SCENARIO_HPP

#include <optional>
#include <string>
#include <vector>

namespace deform {

// Deterministic renderings of one scenario run: the JSON document is
// byte-identical across runs on identical input.
struct ScenarioReport {
    bool pass = true;
    std::string json;
    std::string text;
};

ScenarioReport run_scenario(const std::string& path, std::optional<int> window_override = {});

// Diagnostics only; empty means the scenario file is well-formed and all
// references resolve.
std::vector<std::string> validate_scenario(const std::string& path);

} // namespace deform

#endif
