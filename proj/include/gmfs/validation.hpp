#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "gmfs/execution.hpp"

namespace gmfs {

enum class Profile { quick, full };

Profile parse_profile(const std::string& name);
std::string to_string(Profile p);

struct ValidationOptions {
    Profile profile = Profile::full;
    std::uint64_t seed = 20240611;
    Execution exec = Execution::parallel;
    /// Criteria to run (1..10); empty = all.
    std::vector<int> only;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    double limit_seconds = 0.0;
};

/// Runs the acceptance criteria. `on_result` (if set) is called as each
/// criterion finishes. A criterion passes only if its checks hold and it
/// finished within its runtime limit.
std::vector<CriterionResult> run_validation(const ValidationOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS [n] title: detail (t s / limit s)".
std::string format_result(const CriterionResult& r);

}  // namespace gmfs
