#pragma once

// The acceptance catalog: one entry per claim the toolkit reproduces, each
// with a runnable verifier measuring the claim at its stated tolerance.
// Both the `varqdyn check` subcommand and the standalone acceptance test
// binary drive this list; every verifier is deterministic and writes its
// artifacts (CSV time series / measurement tables) under the output
// directory.

#include <ostream>
#include <string>
#include <vector>

namespace varq::acceptance {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool passed = false;
    std::string detail;  // measured numbers, human readable
};

struct CatalogEntry {
    int index;           // 1-based, stable
    std::string name;    // stable identifier, also the artifact file stem
    std::string topic;   // what the check reproduces
    CriterionResult (*run)(const std::string& out_dir);
};

// Stable ordering; one entry per acceptance criterion.
const std::vector<CatalogEntry>& catalog();

// Runs every entry in order, printing one "criterion N: PASS/FAIL ..." line
// per entry plus a summary; returns true when all passed.
bool run_all(const std::string& out_dir, std::ostream& out);

}  // namespace varq::acceptance
