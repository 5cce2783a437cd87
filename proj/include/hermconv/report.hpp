#pragma once

/// Structured verdicts emitted by checkers and experiments.

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hermconv {

enum class Verdict { pass, fail, inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "inconclusive";
    }
}

struct Witness {
    double t = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct ConditionReport {
    std::string name;
    Verdict verdict = Verdict::inconclusive;
    std::optional<Witness> witness;  // always present on fail
    std::optional<double> fitted_constant;
    std::string notes;
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<ConditionReport> children;

    bool passed() const { return verdict == Verdict::pass; }

    std::optional<double> metric(const std::string& key) const {
        for (const auto& [k, v] : metrics)
            if (k == key) return v;
        return std::nullopt;
    }

    void add_note(const std::string& s) {
        if (!notes.empty()) notes += "; ";
        notes += s;
    }
};

/// Tabular experiment output: named columns, numeric rows, scalar summary.
struct ConvergenceReport {
    std::string experiment;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, double>> summary;
    std::vector<std::string> notes;
    std::vector<ConditionReport> checks;
    std::vector<double> wall_times;  // per row, seconds; kept out of the deterministic outputs

    std::optional<double> value(const std::string& key) const {
        for (const auto& [k, v] : summary)
            if (k == key) return v;
        return std::nullopt;
    }

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        return columns.size();
    }

    bool all_checks_pass() const {
        for (const auto& c : checks)
            if (!c.passed()) return false;
        return true;
    }
};

} // namespace hermconv
