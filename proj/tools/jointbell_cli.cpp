// Copyright 2026 The jointbell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "jointbell/figures.hpp"
#include "jointbell/report.hpp"
#include "jointbell/run_config.hpp"
#include "jointbell/state_io.hpp"
#include "jointbell/validation.hpp"

namespace {

using namespace jointbell;

constexpr const char *kOutDirEnv = "JOINTBELL_OUT_DIR";

class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

// Flag values as typed; unset ones fall back to the config file, then defaults.
struct Flags {
    std::string config;
    std::optional<std::string> state;
    std::optional<double> theta_a;
    std::optional<double> theta_b;
    std::optional<double> mean_total;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> thetas;
    std::optional<std::string> out;
    std::optional<std::string> format;

    std::string count_file;
    std::string sweep_file;
    int figure = 0;
    std::string weighting = "auto";
    std::optional<double> duration;
};

void add_common(CLI::App *cmd, Flags &f) {
    cmd->add_option("--config", f.config, "key = value config file; flags override it");
    cmd->add_option("--state", f.state, "singlet, werner:<v> or a density-matrix file");
    cmd->add_option("--theta-a", f.theta_a, "trade-off angle on side A, degrees");
    cmd->add_option("--theta-b", f.theta_b, "trade-off angle on side B, degrees");
    cmd->add_option("--mean-total", f.mean_total, "expected total coincidences per setting");
    cmd->add_option("--seed", f.seed, "64-bit seed");
    cmd->add_option("--out", f.out, std::string("output file (default: stdout, or a file in $") + kOutDirEnv + ")");
    cmd->add_option("--format", f.format, "json or csv (figures: csv or svg)");
}

RunConfig resolve(const Flags &f) {
    RunConfig cfg;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw UsageError("cannot read config file '" + f.config + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        try {
            cfg = parse_run_config(buf.str());
        } catch (const ParseError &e) {
            throw UsageError(f.config + ": " + e.what());
        }
    }
    if (f.state) cfg.state = *f.state;
    if (f.theta_a) cfg.theta_a = *f.theta_a;
    if (f.theta_b) cfg.theta_b = *f.theta_b;
    if (f.mean_total) cfg.mean_total = *f.mean_total;
    if (f.seed) cfg.seed = *f.seed;
    if (f.thetas) cfg.thetas = parse_theta_list(*f.thetas);
    if (f.out) cfg.out = *f.out;
    if (f.format) cfg.format = *f.format;
    return cfg;
}

std::string pick_format(const RunConfig &cfg, const std::string &fallback, std::initializer_list<const char *> allowed) {
    const std::string fmt = cfg.format.empty() ? fallback : cfg.format;
    for (const char *a : allowed) {
        if (fmt == a) return fmt;
    }
    std::string list;
    for (const char *a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
    throw UsageError("unsupported format '" + fmt + "' (expected " + list + ")");
}

// Writes to --out, else to $JOINTBELL_OUT_DIR/<default_name>, else stdout.
void emit(const RunConfig &cfg, const std::string &default_name, const std::string &text) {
    std::filesystem::path path;
    if (!cfg.out.empty() && cfg.out != "-") {
        path = cfg.out;
    } else if (cfg.out.empty()) {
        if (const char *dir = std::getenv(kOutDirEnv); dir && *dir) path = std::filesystem::path(dir) / default_name;
    }
    if (path.empty()) {
        std::cout << text;
        return;
    }
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
    std::cerr << "wrote " << path.string() << '\n';
}

std::string json_text(const Json &doc) { return doc.dump(2) + "\n"; }

template <class Fn>
std::string render(Fn &&fn) {
    std::ostringstream os;
    fn(os);
    return os.str();
}

int cmd_simulate(const Flags &f) {
    const RunConfig cfg = resolve(f);
    const std::string fmt = pick_format(cfg, "json", {"json", "csv"});
    const auto state = load_state(cfg.state);
    const auto report = simulate_report(cfg.state, state, joint_distribution(state, cfg.theta_a, cfg.theta_b));
    if (fmt == "json") {
        emit(cfg, "simulate.json", json_text(report));
    } else {
        emit(cfg, "simulate.csv", render([&](std::ostream &os) { write_report_csv(os, report); }));
    }
    return 0;
}

int cmd_counts(const Flags &f) {
    const RunConfig cfg = resolve(f);
    pick_format(cfg, "csv", {"csv"});
    if (!cfg.mean_total) throw UsageError("counts needs --mean-total");
    const auto state = load_state(cfg.state);
    auto table = sample_counts(joint_distribution(state, cfg.theta_a, cfg.theta_b), *cfg.mean_total, cfg.seed);
    table.duration_s = f.duration;
    emit(cfg, "counts.csv", count_table_to_string(table));
    return 0;
}

CountTable load_count_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read count file '" + path + "'");
    try {
        return read_count_table(in);
    } catch (const ParseError &e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

int cmd_analyze(const Flags &f) {
    const RunConfig cfg = resolve(f);
    const std::string fmt = pick_format(cfg, "json", {"json", "csv"});
    if (f.count_file.empty()) throw UsageError("analyze needs --count-file");
    const auto table = load_count_file(f.count_file);
    const auto report = analyze_report(f.count_file, table, cfg.theta_a, cfg.theta_b);
    if (fmt == "json") {
        emit(cfg, "analyze.json", json_text(report));
    } else {
        emit(cfg, "analyze.csv", render([&](std::ostream &os) { write_report_csv(os, report); }));
    }
    return 0;
}

int cmd_sweep(const Flags &f) {
    const RunConfig cfg = resolve(f);
    pick_format(cfg, "csv", {"csv"});
    if (cfg.thetas.empty()) throw UsageError("sweep needs a non-empty --thetas list");
    const auto state = load_state(cfg.state);
    const auto rows = run_sweep(state, cfg.thetas, {cfg.mean_total, cfg.seed});
    emit(cfg, "sweep.csv", render([&](std::ostream &os) { write_sweep(os, rows); }));
    return 0;
}

Weighting parse_weighting(const std::string &w) {
    if (w == "auto") return Weighting::Automatic;
    if (w == "weighted") return Weighting::Weighted;
    if (w == "unweighted") return Weighting::Unweighted;
    throw UsageError("unknown weighting '" + w + "' (expected auto, weighted or unweighted)");
}

std::vector<LabeledFitPoint> load_fit_points(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read fit input '" + path + "'");
    if (std::filesystem::path(path).extension() == ".json") {
        Json doc;
        try {
            doc = Json::parse(in);
        } catch (const nlohmann::json::parse_error &e) {
            throw std::runtime_error(path + ": " + e.what());
        }
        return fit_points_from_json(doc);
    }
    try {
        const auto rows = read_sweep(in);
        return fit_points_from_sweep(rows);
    } catch (const ParseError &e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

int cmd_fit(const Flags &f) {
    const RunConfig cfg = resolve(f);
    const std::string fmt = pick_format(cfg, "json", {"json", "csv"});
    if (f.sweep_file.empty()) throw UsageError("fit needs --sweep-file");
    const auto labeled = load_fit_points(f.sweep_file);
    const auto pts = strip_labels(labeled);
    const auto result = fit_bell_magnitude(pts, parse_weighting(f.weighting));
    if (fmt == "json") {
        emit(cfg, "fit.json", json_text(fit_document(labeled, result)));
    } else {
        emit(cfg, "fit.csv", render([&](std::ostream &os) { write_fit_csv(os, labeled, result); }));
    }
    return 0;
}

int cmd_figures(const Flags &f) {
    const RunConfig cfg = resolve(f);
    const FigureId fig = figure_from_int(f.figure);
    const std::string fmt = pick_format(cfg, "csv", {"csv", "svg"});
    const auto thetas = cfg.thetas.empty() ? default_figure_thetas(fig) : cfg.thetas;
    const auto data = figure_data(fig, load_state(cfg.state), thetas, {cfg.mean_total, cfg.seed});
    const std::string name = "figure" + std::to_string(f.figure) + "." + fmt;
    if (fmt == "csv") {
        emit(cfg, name, render([&](std::ostream &os) { write_figure_csv(os, data); }));
    } else {
        emit(cfg, name, render([&](std::ostream &os) { write_figure_svg(os, data); }));
    }
    return 0;
}

int cmd_validate() {
    int failed = 0;
    for (const auto &suite : run_validation_suites()) {
        std::cout << (suite.passed() ? "PASS " : "FAIL ") << suite.name << " (" << suite.checks << " checks";
        if (!suite.passed()) std::cout << ", " << suite.failures.size() << "+ failed";
        std::cout << ")\n";
        for (const auto &msg : suite.failures) std::cout << "    " << msg << '\n';
        if (!suite.passed()) ++failed;
    }
    if (failed) {
        std::cout << failed << " suite(s) failed\n";
        return 1;
    }
    std::cout << "all suites passed\n";
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Joint-measurement Bell test simulator and analysis tool"};
    app.require_subcommand(1);
    Flags f;

    auto *simulate = app.add_subcommand("simulate", "exact 16-outcome distribution and aggregates");
    add_common(simulate, f);

    auto *counts = app.add_subcommand("counts", "Poisson-sampled coincidence count table");
    add_common(counts, f);
    counts->add_option("--duration", f.duration, "acquisition time in seconds, recorded in the table");

    auto *analyze = app.add_subcommand("analyze", "probabilities and errors from a count table");
    add_common(analyze, f);
    analyze->add_option("--count-file,count_file", f.count_file, "count table to read");

    auto *sweep = app.add_subcommand("sweep", "distribution over a list of trade-off angles");
    add_common(sweep, f);
    sweep->add_option("--thetas", f.thetas, "comma-separated angles in degrees");

    auto *fit = app.add_subcommand("fit", "line fit of minimal-outcome probabilities against p_bflip");
    add_common(fit, f);
    fit->add_option("--sweep-file,sweep_file", f.sweep_file, "sweep CSV or fit JSON document");
    fit->add_option("--weighting", f.weighting, "auto, weighted or unweighted");

    auto *figures = app.add_subcommand("figures", "plot-ready data for figures 6-9");
    add_common(figures, f);
    figures->add_option("--figure", f.figure, "figure id 6, 7, 8 or 9")->required();
    figures->add_option("--thetas", f.thetas, "override the figure's angle list");

    auto *validate = app.add_subcommand("validate", "run the invariant suites");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) return cmd_simulate(f);
        if (*counts) return cmd_counts(f);
        if (*analyze) return cmd_analyze(f);
        if (*sweep) return cmd_sweep(f);
        if (*fit) return cmd_fit(f);
        if (*figures) return cmd_figures(f);
        if (*validate) return cmd_validate();
    } catch (const UsageError &e) {
        std::cerr << "jointbell: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "jointbell: error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
