// Copyright 2026 The lgweak Authors
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

#include "lgweak/cli.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "lgweak/counts_io.h"
#include "lgweak/errors.h"
#include "lgweak/experiment.h"
#include "lgweak/qubit.h"

namespace lgweak {

namespace {

constexpr double kPi = std::numbers::pi;

std::string shortest(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

Violation parse_class(std::string_view s) {
    if (s == "pos") {
        return Violation::kPositive;
    }
    if (s == "neg") {
        return Violation::kNegative;
    }
    if (s == "none") {
        return Violation::kNone;
    }
    throw std::invalid_argument("unknown class '" + std::string(s) + "'");
}

double parse_double(std::string_view s) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("bad number '" + std::string(s) + "'");
    }
    return v;
}

nlohmann::json weak_value_json(double v) {
    return {{"value", v}, {"anomalous", v < -1 || v > 1}};
}

void write_text(const std::filesystem::path &path, std::string_view text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::invalid_argument("cannot write " + path.string());
    }
    f << text;
}

std::string read_text(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::invalid_argument("cannot read " + path);
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

/// Options shared by theory and simulate. Values given on the command line
/// override those from --config.
struct RunOptions {
    RunConfig cfg;
    std::string config_path;
    std::vector<std::pair<CLI::Option *, std::function<void(RunConfig &)>>> setters;

    template <typename T>
    void add(CLI::App *app, const std::string &flag, T RunConfig::*field, const std::string &help) {
        auto holder = std::make_shared<T>(cfg.*field);
        CLI::Option *opt = app->add_option(flag, *holder, help)->capture_default_str();
        setters.emplace_back(opt, [holder, field](RunConfig &c) { c.*field = *holder; });
    }

    void add_angles(CLI::App *app) {
        add(app, "--alpha", &RunConfig::alpha_pi, "pre-selection angle alpha, units of pi");
        add(app, "--gamma", &RunConfig::gamma_pi, "I_B axis gamma, units of pi");
        add(app, "--delta", &RunConfig::delta_pi, "post-selection angle delta, units of pi");
        app->add_option("--config", config_path, "flat key = value file; command-line flags take precedence");
    }

    RunConfig resolve() const {
        RunConfig c = config_path.empty() ? RunConfig{} : RunConfig::from_ini(read_text(config_path));
        for (const auto &[opt, set] : setters) {
            if (opt->count() > 0) {
                set(c);
            }
        }
        return c;
    }
};

}  // namespace

double SweepRange::at(int k) const {
    if (k == steps - 1) {
        return stop;
    }
    return start + (stop - start) * k / (steps - 1);
}

void SweepSpec::validate() const {
    if (!std::isfinite(gamma_pi)) {
        throw std::invalid_argument("gamma must be finite");
    }
    for (const SweepRange *r : {&alpha, &delta}) {
        if (r->steps < 2) {
            throw std::invalid_argument("sweep ranges need at least 2 steps");
        }
        if (!(r->start >= 0 && r->start <= 1 && r->stop >= 0 && r->stop <= 1)) {
            throw std::invalid_argument("sweep ranges must lie within [0, 1] (units of pi)");
        }
    }
}

SweepResult run_sweep(const SweepSpec &spec) {
    spec.validate();
    SweepResult out;
    out.rows.reserve(static_cast<size_t>(spec.alpha.steps) * spec.delta.steps);
    for (int a = 0; a < spec.alpha.steps; a++) {
        for (int d = 0; d < spec.delta.steps; d++) {
            SweepRow row;
            row.alpha_pi = spec.alpha.at(a);
            row.delta_pi = spec.delta.at(d);
            LGVerdict v = b4_from_correlators(row.alpha_pi * kPi, spec.gamma_pi * kPi, row.delta_pi * kPi);
            row.b4 = v.value;
            row.classification = v.classification;
            out.rows.push_back(row);
        }
    }
    out.max = out.rows.front();
    out.min = out.rows.front();
    for (const SweepRow &r : out.rows) {
        if (r.b4 > out.max.b4) {
            out.max = r;
        }
        if (r.b4 < out.min.b4) {
            out.min = r;
        }
    }
    return out;
}

std::string sweep_csv(const SweepResult &result) {
    std::string out = "alpha_pi,delta_pi,b4,class\n";
    for (const SweepRow &r : result.rows) {
        out += shortest(r.alpha_pi);
        out += ',';
        out += shortest(r.delta_pi);
        out += ',';
        out += shortest(r.b4);
        out += ',';
        out += violation_name(r.classification);
        out += '\n';
    }
    return out;
}

std::vector<SweepRow> parse_sweep_csv(std::string_view csv) {
    std::vector<SweepRow> rows;
    bool header = true;
    while (!csv.empty()) {
        size_t eol = csv.find('\n');
        std::string_view line = csv.substr(0, eol);
        csv = eol == std::string_view::npos ? std::string_view{} : csv.substr(eol + 1);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        if (header) {
            if (line != "alpha_pi,delta_pi,b4,class") {
                throw std::invalid_argument("unexpected sweep header '" + std::string(line) + "'");
            }
            header = false;
            continue;
        }
        std::vector<std::string_view> cells;
        size_t pos = 0;
        while (true) {
            size_t comma = line.find(',', pos);
            cells.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
            if (comma == std::string_view::npos) {
                break;
            }
            pos = comma + 1;
        }
        if (cells.size() != 4) {
            throw std::invalid_argument("sweep row needs 4 columns: '" + std::string(line) + "'");
        }
        rows.push_back(SweepRow{parse_double(cells[0]), parse_double(cells[1]), parse_double(cells[2]),
                                parse_class(cells[3])});
    }
    if (header) {
        throw std::invalid_argument("sweep CSV is missing its header");
    }
    return rows;
}

nlohmann::json sweep_summary(const SweepSpec &spec, const SweepResult &result) {
    size_t pos = 0, neg = 0;
    for (const SweepRow &r : result.rows) {
        pos += r.classification == Violation::kPositive;
        neg += r.classification == Violation::kNegative;
    }
    auto where = [](const SweepRow &r) {
        return nlohmann::json{{"b4", r.b4}, {"alpha_pi", r.alpha_pi}, {"delta_pi", r.delta_pi}};
    };
    return {
        {"gamma_pi", spec.gamma_pi},
        {"points", result.rows.size()},
        {"positive_violations", pos},
        {"negative_violations", neg},
        {"max", where(result.max)},
        {"min", where(result.min)},
    };
}

nlohmann::json theory_report(double alpha_pi, double gamma_pi, double delta_pi) {
    CorrelatorSet set = correlators_b4(alpha_pi * kPi, gamma_pi * kPi, delta_pi * kPi);
    LGVerdict v = b4_value(set);
    ViolationThresholds t = violation_thresholds(set);
    return {
        {"angles_pi", {{"alpha", alpha_pi}, {"gamma", gamma_pi}, {"delta", delta_pi}}},
        {"correlators", correlators_json(set)},
        {"b4",
         {{"value", v.value},
          {"lower_bound", v.lower_bound},
          {"upper_bound", v.upper_bound},
          {"classification", violation_name(v.classification)}}},
        {"b4_postselected_form", b4_postselected_form(set)},
        {"weak_values", {{"wv_c_plus", weak_value_json(set.wv_c_plus)}, {"wv_c_minus", weak_value_json(set.wv_c_minus)}}},
        {"anomaly_threshold", anomaly_threshold(set.exp_b, set.corr_bc, set.exp_c, set.p_d_minus)},
        {"violation_thresholds",
         {{"wv_c_minus_below_for_pos", t.minus_branch_positive},
          {"wv_c_minus_above_for_neg", t.minus_branch_negative},
          {"wv_c_plus_above_for_pos", t.plus_branch_positive},
          {"wv_c_plus_below_for_neg", t.plus_branch_negative}}},
    };
}

nlohmann::json bounds_report(int n, bool brute) {
    Bounds closed = bn_bounds(n);
    nlohmann::json j = {{"n", n}, {"closed_form", {{"lower", closed.lower}, {"upper", closed.upper}}}};
    if (brute) {
        Bounds b = macrorealist_bounds_bruteforce(n);
        j["brute_force"] = {{"lower", b.lower}, {"upper", b.upper}, {"assignments", uint64_t{1} << (n - 1)}};
        j["agreement"] = b == closed;
    }
    return j;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Leggett-Garg tests with sequential weak measurements", "lgweak"};
    app.require_subcommand(1);

    RunOptions theory_opts;
    CLI::App *theory = app.add_subcommand("theory", "exact B4, weak values and thresholds at one configuration");
    theory_opts.add_angles(theory);
    std::string theory_out;
    theory->add_option("--out", theory_out, "write the JSON report here instead of stdout");

    SweepSpec sweep_spec;
    std::string sweep_out;
    std::vector<double> alpha_range, delta_range;
    CLI::App *sweep = app.add_subcommand("sweep", "B4 violation map over (alpha, delta) for one gamma");
    sweep->add_option("--gamma", sweep_spec.gamma_pi, "I_B axis gamma, units of pi")->capture_default_str();
    int grid_steps = 101;
    sweep->add_option("--grid", grid_steps, "samples per axis")->capture_default_str();
    sweep->add_option("--alpha-range", alpha_range, "alpha start and stop, units of pi")->expected(2);
    sweep->add_option("--delta-range", delta_range, "delta start and stop, units of pi")->expected(2);
    sweep->add_option("--out", sweep_out, "CSV path; the summary then goes to stdout");

    RunOptions sim_opts;
    CLI::App *simulate = app.add_subcommand("simulate", "Monte Carlo pointer experiment for the three post-selections");
    sim_opts.add_angles(simulate);
    sim_opts.add(simulate, "--photons", &RunConfig::photons, "heralded photons per post-selection run");
    sim_opts.add(simulate, "--g-over-sigma", &RunConfig::g_over_sigma, "coupling strength over pointer width");
    sim_opts.add(simulate, "--pixels", &RunConfig::pixels, "detector pixels per side");
    sim_opts.add(simulate, "--pitch-over-sigma", &RunConfig::pitch_over_sigma, "pixel pitch over pointer width");
    sim_opts.add(simulate, "--dark-rate", &RunConfig::dark_rate, "mean dark counts per pixel per run");
    sim_opts.add(simulate, "--seed", &RunConfig::seed, "base seed");
    std::string sim_out;
    simulate->add_option("--out", sim_out, "directory for the counts frames, config and report");

    std::string frames_dir;
    CLI::App *analyze = app.add_subcommand("analyze", "estimate B4 from run_A, run_D and run_Dperp counts frames");
    analyze->add_option("--frames", frames_dir, "directory holding the frame pairs")->required();

    int bounds_n = 4;
    bool bounds_brute = false;
    CLI::App *bounds = app.add_subcommand("bounds", "macrorealist bounds of the n-measurement inequality");
    bounds->add_option("--n", bounds_n, "number of measurements, including preparation")->capture_default_str();
    bounds->add_flag("--brute", bounds_brute, "also enumerate all deterministic assignments");

    std::vector<const char *> argv;
    argv.push_back("lgweak");
    for (const std::string &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalidConfig;
    }

    try {
        if (*theory) {
            RunConfig c = theory_opts.resolve();
            std::string text = theory_report(c.alpha_pi, c.gamma_pi, c.delta_pi).dump(2) + "\n";
            if (theory_out.empty()) {
                out << text;
            } else {
                write_text(theory_out, text);
            }
        } else if (*sweep) {
            sweep_spec.alpha = {0, 1, grid_steps};
            sweep_spec.delta = {0, 1, grid_steps};
            if (!alpha_range.empty()) {
                sweep_spec.alpha = {alpha_range[0], alpha_range[1], grid_steps};
            }
            if (!delta_range.empty()) {
                sweep_spec.delta = {delta_range[0], delta_range[1], grid_steps};
            }
            SweepResult result = run_sweep(sweep_spec);
            std::string summary = sweep_summary(sweep_spec, result).dump(2) + "\n";
            if (sweep_out.empty()) {
                out << sweep_csv(result);
                err << summary;
            } else {
                write_text(sweep_out, sweep_csv(result));
                out << summary;
            }
        } else if (*simulate) {
            RunConfig c = sim_opts.resolve();
            c.validate();
            ExperimentResult result = run_experiment(c);
            std::string report = experiment_report(result).dump(2) + "\n";
            if (!sim_out.empty()) {
                std::filesystem::path dir(sim_out);
                std::filesystem::create_directories(dir);
                for (const SimulatedRun &run : result.runs) {
                    write_frame(dir / ("run_" + std::string(post_selection_label(run.which))), run.frame);
                }
                write_text(dir / "config.ini", c.to_ini());
                write_text(dir / "report.json", report);
            }
            out << report;
        } else if (*analyze) {
            std::filesystem::path dir(frames_dir);
            B4Estimate e = estimate_b4(read_frame(dir / "run_A"), read_frame(dir / "run_D"), read_frame(dir / "run_Dperp"));
            Bounds b = bn_bounds(4);
            LGVerdict v = classify(e.value, b.lower, b.upper);
            nlohmann::json j = estimate_json(e);
            j["b4"]["lower_bound"] = v.lower_bound;
            j["b4"]["upper_bound"] = v.upper_bound;
            j["b4"]["classification"] = violation_name(v.classification);
            out << j.dump(2) << "\n";
        } else if (*bounds) {
            out << bounds_report(bounds_n, bounds_brute).dump(2) << "\n";
        }
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kExitNumericalGuard;
    } catch (const std::invalid_argument &e) {
        err << "invalid configuration: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const std::filesystem::filesystem_error &e) {
        err << "invalid configuration: " << e.what() << "\n";
        return kExitInvalidConfig;
    }
    return kExitOk;
}

}  // namespace lgweak
