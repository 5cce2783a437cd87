#pragma once

/// JSON and TSV output. Reals are written with 17 significant digits;
/// non-finite values become the strings "inf", "-inf" and "nan".

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "errors.hpp"
#include "gridfn.hpp"
#include "hermite.hpp"
#include "report.hpp"

namespace hermconv::io {

using json = nlohmann::json;

inline json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline double to_double(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw config_error("json: expected a number, got " + j.dump());
}

namespace detail {

inline void emit(const json& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string end(static_cast<std::size_t>(indent * depth), ' ');
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
    case json::value_t::number_float: {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
        out += buf;
        break;
    }
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            break;
        }
        out += "{";
        out += nl;
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) {
                out += ",";
                out += nl;
            }
            first = false;
            out += pad + json(it.key()).dump() + (indent > 0 ? ": " : ":");
            emit(it.value(), out, indent, depth + 1);
        }
        out += nl + end + "}";
        break;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            break;
        }
        // Arrays of scalars stay on one line.
        const bool flat = std::none_of(j.begin(), j.end(), [](const json& e) { return e.is_structured(); });
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out += flat ? ", " : ",";
            if (!flat) out += nl + pad;
            emit(j[i], out, flat ? 0 : indent, depth + 1);
        }
        if (!flat) out += nl + end;
        out += "]";
        break;
    }
    default:
        out += j.dump();
    }
}

} // namespace detail

/// Serialises with reals at 17 significant digits.
inline std::string dump(const json& j, int indent = 2) {
    std::string out;
    detail::emit(j, out, indent, 0);
    return out;
}

inline json to_json(const Witness& w) { return {{"t", number(w.t)}, {"lhs", number(w.lhs)}, {"rhs", number(w.rhs)}}; }

inline json to_json(const ConditionReport& r) {
    json j;
    j["check"] = r.name;
    j["verdict"] = to_string(r.verdict);
    j["witness"] = r.witness ? to_json(*r.witness) : json(nullptr);
    j["fitted_constant"] = r.fitted_constant ? number(*r.fitted_constant) : json(nullptr);
    j["notes"] = r.notes;
    json m = json::object();
    for (const auto& [k, v] : r.metrics) m[k] = number(v);
    j["metrics"] = m;
    if (!r.children.empty()) {
        json c = json::array();
        for (const auto& ch : r.children) c.push_back(to_json(ch));
        j["children"] = c;
    }
    return j;
}

/// Wall times are left out so identical inputs give identical bytes.
inline json to_json(const ConvergenceReport& r) {
    json j;
    j["experiment"] = r.experiment;
    j["columns"] = r.columns;
    json rows = json::array();
    for (const auto& row : r.rows) {
        json a = json::array();
        for (double v : row) a.push_back(number(v));
        rows.push_back(a);
    }
    j["rows"] = rows;
    json s = json::object();
    for (const auto& [k, v] : r.summary) s[k] = number(v);
    j["summary"] = s;
    j["notes"] = r.notes;
    json c = json::array();
    for (const auto& ch : r.checks) c.push_back(to_json(ch));
    j["checks"] = c;
    return j;
}

inline std::string to_string(DomainKind k) { return k == DomainKind::half_line ? "half_line" : "real_line"; }
inline std::string to_string(Interp i) { return i == Interp::cell_constant ? "cell_constant" : "piecewise_linear"; }

inline json to_json(const GridFunction& f) {
    json j;
    j["domain_kind"] = to_string(f.domain_kind());
    j["nodes"] = f.nodes();
    j["values"] = f.values();
    j["support"] = {f.support().first, f.support().second};
    j["interp"] = to_string(f.interp());
    return j;
}

inline GridFunction grid_from_json(const json& j) {
    try {
        const std::string kind = j.value("domain_kind", "real_line");
        const std::string interp = j.value("interp", "cell_constant");
        if (kind != "real_line" && kind != "half_line") throw config_error("gridfunction: bad domain_kind " + kind);
        if (interp != "cell_constant" && interp != "piecewise_linear")
            throw config_error("gridfunction: bad interp " + interp);
        std::vector<double> nodes, values;
        for (const auto& v : j.at("nodes")) nodes.push_back(to_double(v));
        for (const auto& v : j.at("values")) values.push_back(to_double(v));
        const auto k = kind == "half_line" ? DomainKind::half_line : DomainKind::real_line;
        const auto ip = interp == "cell_constant" ? Interp::cell_constant : Interp::piecewise_linear;
        // Cell-constant input may list one value per cell.
        if (ip == Interp::cell_constant && values.size() + 1 == nodes.size()) values.push_back(0.0);
        return GridFunction(k, std::move(nodes), std::move(values), ip);
    } catch (const json::exception& e) {
        throw config_error(std::string("gridfunction json: ") + e.what());
    } catch (const invalid_input& e) {
        throw config_error(std::string("gridfunction json: ") + e.what());
    }
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw config_error(path + ": " + e.what());
    }
}

inline GridFunction read_grid(const std::string& path) { return grid_from_json(read_json_file(path)); }

inline json to_json(const hermite::Expansion& e) {
    json j;
    j["n"] = e.degree();
    j["T"] = e.truncation ? number(*e.truncation) : json(nullptr);
    j["coeffs"] = e.coeffs;
    return j;
}

inline std::string tsv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Tab-separated table with a header row.
inline std::string to_tsv(const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "\t" : "") + columns[i];
    out += "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "\t" : "") + tsv_number(row[i]);
        out += "\n";
    }
    return out;
}

inline std::string to_tsv(const ConvergenceReport& r) { return to_tsv(r.columns, r.rows); }

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot write " + path);
    out << content;
}

} // namespace hermconv::io
