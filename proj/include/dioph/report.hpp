#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace dioph {

// Structured pass/fail plus numeric evidence for an inequality or Monte
// Carlo check. "pass" reflects the check that was actually run; labels in
// "notes" state what a finite-range run can and cannot claim.
struct ExperimentReport {
    std::string name;
    bool pass = true;
    std::map<std::string, double> metrics;
    std::vector<std::string> notes;
    nlohmann::json details = nlohmann::json::object();

    void note(std::string s) { notes.push_back(std::move(s)); }
    void fail(std::string s) {
        pass = false;
        notes.push_back(std::move(s));
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["name"] = name;
        j["pass"] = pass;
        j["metrics"] = metrics;
        j["notes"] = notes;
        j["details"] = details;
        return j;
    }
};

} // namespace dioph
