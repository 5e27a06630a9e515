#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "odlab/diffop.hpp"

namespace odlab {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::vector<std::string> details; // one line per sub-check
    double seconds = 0;
};

struct AcceptanceOptions {
    std::set<int> only; // empty: all ten
    Kernel kernel = Kernel::parallel;
    unsigned seed = 20240607;
    int random_pairs = 100;
    // called after each criterion, e.g. for streaming output
    std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});
std::string format_line(const CriterionResult& r);
nlohmann::json to_json(const std::vector<CriterionResult>& rs);

} // namespace odlab
