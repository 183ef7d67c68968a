#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace dcode {

// Offline prescription data: every column except the objective column `f`
// is a feature; cells stay as raw text so categorical columns work.
struct PrescriptionDataset {
    std::vector<std::string> features;           // column names, `f` excluded
    std::vector<std::vector<std::string>> cells; // rows x features
    std::vector<double> objective;               // the f column

    std::size_t size() const { return objective.size(); }
};

struct Constraint {
    enum class Op { le, ge, lt, gt, eq };
    std::string feature;
    Op op = Op::eq;
    double number = 0.0; // numeric comparisons and numeric equality
    std::string text;    // categorical equality
    bool numeric = true;
};

struct PrescribeResult {
    bool feasible = false;
    std::size_t index = 0;
    double objective = 0.0;
};

PrescriptionDataset load_prescription_csv(const std::filesystem::path& path);

// Parses "name<op>value" with op one of <=, >=, ==, <, >.
Constraint parse_constraint(const std::string& text);

bool satisfies(const PrescriptionDataset& ds, std::size_t row, const Constraint& c);

// Feasible record with minimal objective, ties to the lowest index;
// feasible=false when no record satisfies every constraint.
PrescribeResult olp_prescribe(const PrescriptionDataset& ds,
                              const std::vector<Constraint>& constraints);

} // namespace dcode
