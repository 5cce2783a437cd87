#include <CLI11.hpp>

#include <hermconv/corpus.hpp>
#include <hermconv/experiments.hpp>
#include <hermconv/hermite.hpp>
#include <hermconv/operators.hpp>
#include <hermconv/orlicz.hpp>
#include <hermconv/sansone.hpp>
#include <hermconv/serialize.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>

using namespace hermconv;
using io::json;

namespace {

enum Exit { ok = 0, check_failed = 1, bad_config = 2 };

int exit_for(Verdict v) { return v == Verdict::fail ? check_failed : ok; }

int exit_for(const std::vector<ConditionReport>& checks) {
    for (const auto& c : checks)
        if (c.verdict == Verdict::fail) return check_failed;
    return ok;
}

/// "a,b,c" or "log:lo,hi,count" (count points, log-spaced).
std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> v;
    const bool log = s.rfind("log:", 0) == 0;
    std::stringstream in(log ? s.substr(4) : s);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw config_error("bad number '" + item + "' in grid " + s);
        }
    }
    if (log) {
        if (v.size() != 3 || !(v[0] > 0.0 && v[1] > v[0]) || v[2] < 2 || v[2] != std::floor(v[2]))
            throw config_error("log grid must be log:lo,hi,count with 0 < lo < hi and count >= 2");
        const double lo = v[0], hi = v[1];
        const int count = static_cast<int>(v[2]);
        v.clear();
        for (int i = 0; i < count; ++i) v.push_back(lo * std::pow(hi / lo, i / (count - 1.0)));
    }
    if (v.empty()) throw config_error("empty grid");
    return v;
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    for (double d : parse_grid(s)) {
        if (d != std::floor(d) || d < 1 || d > 1e6) throw config_error("expected positive integers: " + s);
        out.push_back(static_cast<int>(d));
    }
    return out;
}

/// JSON to --output or stdout; a table goes next to it as .tsv.
void emit(const json& j, const std::string& output, const std::string& table = {}) {
    if (output.empty() || output == "-") {
        std::cout << io::dump(j) << "\n";
        return;
    }
    io::write_file(output, io::dump(j) + "\n");
    if (!table.empty()) io::write_file(std::filesystem::path(output).replace_extension(".tsv").string(), table);
}

struct Input {
    std::string file, corpus;
    std::uint64_t seed = 1;

    void add(CLI::App* app) {
        auto* f = app->add_option("--input", file, "GridFunction JSON file");
        auto* c = app->add_option("--corpus", corpus, "corpus function: triangle, bump, step, unit, zero, random");
        app->add_option("--seed", seed, "seed for random corpus functions");
        f->excludes(c);
        c->excludes(f);
    }

    GridFunction load() const {
        if (!file.empty()) return io::read_grid(file);
        if (!corpus.empty()) return corpus::by_name(corpus, seed);
        throw config_error("one of --input or --corpus is required");
    }
};

json grid_values(const std::string& check, const std::vector<double>& grid, const std::vector<double>& values) {
    json j;
    j["check"] = check;
    json g = json::array(), v = json::array();
    for (double x : grid) g.push_back(io::number(x));
    for (double y : values) v.push_back(io::number(y));
    j["grid"] = g;
    j["values"] = v;
    return j;
}

std::string two_columns(const std::string& a, const std::string& b, const std::vector<double>& x,
                        const std::vector<double>& y) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < x.size(); ++i) rows.push_back({x[i], y[i]});
    return io::to_tsv({a, b}, rows);
}

int run_experiment(const std::string& path, const std::string& out_override) {
    auto cfg = experiments::load_config(path);
    if (!out_override.empty()) cfg.output_dir = out_override;
    std::filesystem::create_directories(cfg.output_dir);
    const auto t0 = std::chrono::steady_clock::now();
    const auto reports = experiments::run(cfg);
    const std::string hash = experiments::hash_hex(experiments::config_hash(cfg));
    int code = ok;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        const std::string stem = (std::filesystem::path(cfg.output_dir) / (cfg.experiment + "_" + cfg.corpus[i])).string();
        json j;
        j["config_hash"] = hash;
        j["config"] = experiments::to_text(cfg);
        j["function"] = cfg.corpus[i];
        j["tolerances"] = {{"trend_factor", 2.0}, {"points_per_panel", 8}, {"panels_per_wavelength", 4}};
        j["report"] = io::to_json(r);
        io::write_file(stem + ".json", io::dump(j) + "\n");
        io::write_file(stem + ".tsv", io::to_tsv(r));
        std::vector<std::vector<double>> timing;
        for (std::size_t k = 0; k < r.wall_times.size() && k < r.rows.size(); ++k)
            timing.push_back({r.rows[k][0], r.wall_times[k]});
        io::write_file(stem + ".timing.tsv", io::to_tsv({r.columns.empty() ? "row" : r.columns[0], "seconds"}, timing));
        for (const auto& c : r.checks)
            std::cout << cfg.corpus[i] << "\t" << c.name << "\t" << to_string(c.verdict) << "\n";
        code = std::max(code, exit_for(r.checks));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "config " << hash << ", " << reports.size() << " report(s) in " << cfg.output_dir << ", "
              << secs << " s\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hermite expansion convergence harness"};
    app.set_version_flag("--version", HERMCONV_VERSION);
    app.require_subcommand(1);
    int code = ok;

    // run
    std::string config_path, out_dir;
    auto* run = app.add_subcommand("run", "run an experiment from a key = value config file");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--output-dir", out_dir, "override output_dir");
    run->callback([&] { code = run_experiment(config_path, out_dir); });

    // eval
    Input eval_in;
    std::string x_spec, output;
    auto* eval = app.add_subcommand("eval", "evaluate a grid function");
    eval_in.add(eval);
    eval->add_option("--x", x_spec, "points: a,b,c or log:lo,hi,count")->required();
    eval->add_option("--output", output, "JSON output file (default stdout)");
    eval->callback([&] {
        const auto f = eval_in.load();
        const auto x = parse_grid(x_spec);
        std::vector<double> v;
        for (double t : x) v.push_back(f(t));
        emit(grid_values("eval", x, v), output, two_columns("x", "f", x, v));
    });

    // hermite
    auto* herm = app.add_subcommand("hermite", "Hermite functions and partial sums");
    herm->require_subcommand(1);
    int n = 0;
    double sched_exp = 1.0 / 40.0, sched_scale = 1.0, T = 0.0;
    Input herm_in;
    auto schedule_opts = [&](CLI::App* a) {
        a->add_option("--schedule-exp", sched_exp, "T_n = scale n^exp, exp in (0, 1/34)");
        a->add_option("--schedule-scale", sched_scale, "T_n = scale n^exp");
    };
    auto schedule = [&] {
        hermite::TruncationSchedule s{sched_scale, sched_exp};
        try {
            s.validate();
        } catch (const invalid_input& e) {
            throw config_error(e.what());
        }
        return s;
    };

    auto* h_eval = herm->add_subcommand("eval", "h_0..h_n at the given points");
    h_eval->add_option("--n", n, "degree")->required()->check(CLI::Range(0, 1000000));
    h_eval->add_option("--x", x_spec, "points")->required();
    h_eval->add_option("--output", output, "JSON output file");
    h_eval->callback([&] {
        const auto x = parse_grid(x_spec);
        const hermite::Evaluator ev(n);
        json j;
        j["n"] = n;
        json rows = json::array();
        std::vector<std::vector<double>> table;
        for (double t : x) {
            const auto v = ev.values(t);
            rows.push_back({{"x", io::number(t)}, {"values", v}});
            table.push_back({t, v.back()});
        }
        j["points"] = rows;
        emit(j, output, io::to_tsv({"x", "h_n"}, table));
    });

    auto* h_expand = herm->add_subcommand("expand", "coefficients c_0..c_n");
    h_expand->add_option("--n", n, "degree")->required()->check(CLI::Range(0, 100000));
    h_expand->add_option("--T", T, "integrate over (-T, T); default whole line");
    schedule_opts(h_expand);
    herm_in.add(h_expand);
    h_expand->add_option("--output", output, "JSON output file");
    h_expand->callback([&] {
        const auto f = herm_in.load();
        std::optional<double> window;
        if (h_expand->count("--T")) window = T;
        else if (h_expand->count("--schedule-exp") || h_expand->count("--schedule-scale")) window = schedule().T(std::max(n, 1));
        emit(io::to_json(hermite::expand(f, n, window)), output);
    });

    auto* h_trunc = herm->add_subcommand("truncated-sum", "chi_n S_n(f chi_n) on [-T_n, T_n]");
    h_trunc->add_option("--n", n, "degree")->required()->check(CLI::Range(1, 100000));
    schedule_opts(h_trunc);
    herm_in.add(h_trunc);
    h_trunc->add_option("--output", output, "JSON output file");
    h_trunc->callback([&] {
        const auto g = hermite::truncated_partial_sum(herm_in.load(), n, schedule());
        emit(io::to_json(g), output, two_columns("x", "value", g.nodes(), g.values()));
    });

    // op
    auto* op = app.add_subcommand("op", "Hilbert, Stieltjes and Hardy operators");
    op->require_subcommand(1);
    Input op_in;
    std::string t_spec = "log:1e-3,1e3,64";
    auto op_opts = [&](CLI::App* a, const char* what) {
        op_in.add(a);
        a->add_option("--t-grid", t_spec, what)->capture_default_str();
        a->add_option("--output", output, "JSON output file");
    };

    auto* hil = op->add_subcommand("hilbert", "principal-value Hilbert transform");
    op_opts(hil, "evaluation points");
    hil->callback([&] {
        const auto f = op_in.load();
        const auto x = parse_grid(t_spec);
        std::vector<double> v(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) v[i] = operators::hilbert(f, x[i]);
        emit(grid_values("hilbert", x, v), output, two_columns("x", "Hf", x, v));
    });

    auto* sti = op->add_subcommand("stieltjes", "Stieltjes transform of a half-line function");
    op_opts(sti, "t > 0 points");
    sti->callback([&] {
        const auto g = op_in.load();
        const auto t = parse_grid(t_spec);
        std::vector<double> v(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) v[i] = operators::stieltjes(g, t[i]);
        emit(grid_values("stieltjes", t, v), output, two_columns("t", "Sg", t, v));
    });

    auto* sand = op->add_subcommand("sandwich", "Sg <= Pg + Qg <= 2 Sg");
    op_opts(sand, "t > 0 points");
    sand->callback([&] {
        const auto t = parse_grid(t_spec);
        const auto r = operators::sandwich_check(op_in.load(), t);
        json j = io::to_json(r);
        j["grid"] = t;
        j["margins"] = {{"lower", io::number(r.metrics.at(0).second)}, {"upper", io::number(r.metrics.at(1).second)}};
        emit(j, output);
        code = exit_for(r.verdict);
    });

    auto* hls = op->add_subcommand("hls", "(Hf)*(t) / Sf*(t)");
    op_opts(hls, "t > 0 points");
    hls->callback([&] {
        const auto t = parse_grid(t_spec);
        const auto r = operators::hls_ratio(op_in.load(), t);
        json j = io::to_json(r);
        j["grid"] = t;
        j["empirical_constant"] = r.fitted_constant ? io::number(*r.fitted_constant) : json(nullptr);
        emit(j, output);
        code = exit_for(r.verdict);
    });

    // orlicz
    auto* orl = app.add_subcommand("orlicz", "Young functions and Orlicz norms");
    orl->require_subcommand(1);
    std::string spec_a, spec_b;
    auto* pair = orl->add_subcommand("check-pair", "admissibility of (A, B)");
    pair->add_option("--A", spec_a, "e.g. power:2, powerlog:2,1,1, llogl:-2,0, exppair:0.5,1")->required();
    pair->add_option("--B", spec_b, "same syntax, read as the B member of a pair")->required();
    pair->add_option("--output", output, "JSON output file");
    pair->callback([&] {
        const auto r = orlicz::check_pair(orlicz::parse_spec(spec_a, orlicz::Role::A),
                                          orlicz::parse_spec(spec_b, orlicz::Role::B));
        emit(io::to_json(r), output);
        code = exit_for(r.verdict);
    });

    Input orl_in;
    auto* norm = orl->add_subcommand("norm", "Luxemburg norm and modular");
    norm->add_option("--A", spec_a, "Young function")->required();
    orl_in.add(norm);
    norm->add_option("--output", output, "JSON output file");
    norm->callback([&] {
        const auto A = orlicz::parse_spec(spec_a);
        const auto f = orl_in.load();
        json j;
        j["A"] = A.name;
        j["luxemburg_norm"] = io::number(orlicz::luxemburg_norm(A, f));
        j["modular"] = io::number(orlicz::modular(A, f));
        emit(j, output);
    });

    auto* scan = orl->add_subcommand("scan", "Delta_2, nabla_2 and log-integrability scans");
    scan->add_option("--A", spec_a, "Young function")->required();
    scan->add_option("--output", output, "JSON output file");
    scan->callback([&] {
        const auto A = orlicz::parse_spec(spec_a);
        json j = json::array();
        j.push_back(io::to_json(orlicz::delta2_scan(A)));
        j.push_back(io::to_json(orlicz::nabla2_scan(A)));
        j.push_back(io::to_json(orlicz::check_log_membership(A)));
        emit(j, output);
    });

    // sansone
    auto* san = app.add_subcommand("sansone", "Sansone asymptotics and the comb lower bound");
    san->require_subcommand(1);
    std::string n_list = "64,256,1024,4096";
    auto* rem = san->add_subcommand("remainder", "max |R(n,x)| / omega(n,x) on [0.05, 2]");
    rem->add_option("--n-list", n_list, "degrees")->capture_default_str();
    rem->add_option("--output", output, "JSON output file");
    rem->callback([&] {
        json j = json::array();
        std::vector<std::vector<double>> table;
        for (int k : parse_ints(n_list)) {
            const auto r = sansone::remainder_fit(k);
            j.push_back(io::to_json(r));
            table.push_back({static_cast<double>(k), *r.fitted_constant, r.witness->t});
            code = std::max(code, exit_for(r.verdict));
        }
        emit(j, output, io::to_tsv({"n", "max_ratio", "argmax_x"}, table));
    });

    std::string g_file, x_grid = "", m_range = "lemma", period = "alternating";
    auto* lb = san->add_subcommand("lower-bound", "comb sum of |S_n f_km| against Sg");
    lb->add_option("--g", g_file, "half-line GridFunction JSON")->required();
    lb->add_option("--n", n, "degree")->required()->check(CLI::Range(1, 100000));
    lb->add_option("--x-grid", x_grid, "points in (pi/(4N), T_n); default 45 points on [0.05, 1.1]");
    lb->add_option("--m-range", m_range, "lemma or proof")->check(CLI::IsMember({"lemma", "proof"}))->capture_default_str();
    lb->add_option("--comb-period", period, "alternating or sign_consistent")
        ->check(CLI::IsMember({"alternating", "sign_consistent"}))
        ->capture_default_str();
    schedule_opts(lb);
    lb->add_option("--output", output, "JSON output file");
    lb->callback([&] {
        const auto g = io::read_grid(g_file);
        std::vector<double> x;
        if (x_grid.empty())
            for (int i = 0; i < 45; ++i) x.push_back(0.05 + (1.1 - 0.05) * i / 44.0);
        else
            x = parse_grid(x_grid);
        const auto r = sansone::lower_bound_ratio(g, n, schedule(), x,
                                                  m_range == "lemma" ? sansone::MRange::lemma : sansone::MRange::proof,
                                                  period == "alternating" ? sansone::CombPeriod::alternating
                                                                    : sansone::CombPeriod::sign_consistent);
        emit(io::to_json(r), output, io::to_tsv(r));
        const auto lo = r.value("min_ratio");
        code = lo && *lo > 0.0 ? ok : check_failed;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : bad_config;
    } catch (const config_error& e) {
        std::cerr << "hermconv: " << e.what() << "\n";
        return bad_config;
    } catch (const invalid_input& e) {
        std::cerr << "hermconv: invalid input: " << e.what() << "\n";
        return bad_config;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "hermconv: " << e.what() << "\n";
        return bad_config;
    }
    return code;
}
