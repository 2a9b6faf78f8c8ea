// Command line front end: single runs, parameter sweeps, figure data
// regeneration and the simulator-vs-closed-form validation grid.
//
// Exit codes: 0 success, 1 validation failure, 2 usage error, 3 degenerate
// parameter domain.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spenla/analytics.hpp"
#include "spenla/protocol.hpp"

namespace {

using namespace spenla;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt10(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

double parse_double(const std::string& name, const std::string& raw) {
    try {
        std::size_t pos = 0;
        double value = std::stod(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument(raw);
        return value;
    } catch (const std::exception&) {
        throw UsageError("--" + name + " expects a number, got '" + raw + "'");
    }
}

long parse_long(const std::string& name, const std::string& raw) {
    try {
        std::size_t pos = 0;
        long value = std::stol(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument(raw);
        return value;
    } catch (const std::exception&) {
        throw UsageError("--" + name + " expects an integer, got '" + raw + "'");
    }
}

// Flat key=value file; blank lines and # comments allowed.
std::map<std::string, std::string> load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    std::map<std::string, std::string> cfg;
    std::string line;
    while (std::getline(in, line)) {
        const auto strip = [](std::string s) {
            const auto begin = s.find_first_not_of(" \t\r");
            if (begin == std::string::npos) return std::string();
            const auto end = s.find_last_not_of(" \t\r");
            return s.substr(begin, end - begin + 1);
        };
        line = strip(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line is not key=value: " + line);
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw UsageError("config line is not key=value: " + line);
        if (!cfg.emplace(key, value).second)
            throw UsageError("duplicate config key: " + key);
    }
    return cfg;
}

// Raw string-valued parameters shared by run and sweep.  Flags win over the
// config file; empty string means "not given".
struct RawParams {
    std::string eta, a2, alpha, beta, t1, t2, out, config;
    std::string var, start, stop, steps;  // sweep only

    void merge_config(bool sweep_keys) {
        if (config.empty()) return;
        auto cfg = load_config(config);
        auto take = [&cfg](const char* key, std::string& slot) {
            auto it = cfg.find(key);
            if (it == cfg.end()) return;
            if (slot.empty()) slot = it->second;
            cfg.erase(it);
        };
        take("eta", eta);
        take("a2", a2);
        take("alpha", alpha);
        take("beta", beta);
        take("t1", t1);
        take("t2", t2);
        take("out", out);
        if (sweep_keys) {
            take("var", var);
            take("start", start);
            take("stop", stop);
            take("steps", steps);
        }
        if (!cfg.empty()) throw UsageError("unknown config key: " + cfg.begin()->first);
    }
};

struct RunSettings {
    double eta;
    double a2;
    double alpha;
    double beta;
    double t1;
    std::optional<double> t2;  // empty: matched
};

double require_range(const std::string& name, const std::string& raw, double lo, double hi,
                     bool open) {
    if (raw.empty()) throw UsageError("missing required flag --" + name);
    const double v = parse_double(name, raw);
    const bool ok = open ? (v > lo && v < hi) : (v >= lo && v <= hi);
    if (!ok)
        throw UsageError("--" + name + " = " + raw + " is outside " +
                         (open ? "(" : "[") + fmt10(lo) + ", " + fmt10(hi) +
                         (open ? ")" : "]"));
    return v;
}

RunSettings check_run_settings(const RawParams& raw) {
    RunSettings s{};
    s.eta = require_range("eta", raw.eta, 0.0, 1.0, false);
    s.a2 = require_range("a2", raw.a2, 0.0, 1.0, false);
    s.alpha = raw.alpha.empty() ? 1.0 : require_range("alpha", raw.alpha, -1.0, 1.0, false);
    if (raw.beta.empty()) {
        s.beta = std::sqrt(std::max(0.0, 1.0 - s.alpha * s.alpha));
    } else {
        s.beta = require_range("beta", raw.beta, -1.0, 1.0, false);
        if (std::abs(s.alpha * s.alpha + s.beta * s.beta - 1.0) > 1e-9)
            throw UsageError("--alpha/--beta must satisfy alpha^2 + beta^2 = 1");
    }
    s.t1 = require_range("t1", raw.t1, 0.0, 1.0, true);
    if (!raw.t2.empty() && raw.t2 != "auto")
        s.t2 = require_range("t2", raw.t2, 0.0, 1.0, true);
    return s;
}

ProtocolParams to_protocol_params(const RunSettings& s) {
    return ProtocolParams{s.eta, std::sqrt(s.a2), s.alpha, s.beta, s.t1, s.t2};
}

// Closed-form metrics evaluated at an explicit t2; identical to the matched
// forms whenever t2 is the matched value.
struct ClosedAtT2 {
    double p1, p2, p_total, eta_out;
    std::optional<double> gain;
};

ClosedAtT2 closed_at(double eta, double a, double t1, double t2) {
    ClosedAtT2 c{};
    c.p1 = p1_general(a, t1, t2);
    c.p2 = p2_general(t1, t2);
    c.p_total = eta * c.p1 + (1.0 - eta) * c.p2;
    c.eta_out = c.p_total > 0.0 ? eta * c.p1 / c.p_total : 0.0;
    if (eta > 0.0 && c.p_total > 0.0) c.gain = c.eta_out / eta;
    return c;
}

const char* kSweepHeader =
    "t1,t2,a2,eta,p1_sim,p1_closed,p2_sim,p2_closed,pt_sim,pt_closed,"
    "eta_out_sim,eta_out_closed,gain_sim,gain_closed";

std::string sweep_row(const RunSettings& s, const ProtocolOutcome& out, const ClosedAtT2& c) {
    std::ostringstream os;
    os << fmt10(out.params.t1) << ',' << fmt10(out.t2) << ',' << fmt10(s.a2) << ','
       << fmt10(s.eta) << ',' << fmt10(out.p1) << ',' << fmt10(c.p1) << ',' << fmt10(out.p2)
       << ',' << fmt10(c.p2) << ',' << fmt10(out.p_total) << ',' << fmt10(c.p_total) << ','
       << fmt10(out.eta_out) << ',' << fmt10(c.eta_out) << ','
       << fmt10(out.gain ? *out.gain : std::nan("")) << ','
       << fmt10(c.gain ? *c.gain : std::nan(""));
    return os.str();
}

int cmd_run(RawParams raw) {
    raw.merge_config(false);
    const RunSettings s = check_run_settings(raw);
    const ProtocolOutcome out = run(to_protocol_params(s));
    const ClosedAtT2 closed = closed_at(s.eta, out.params.a, s.t1, out.t2);

    std::cout << "eta=" << fmt10(s.eta) << " a2=" << fmt10(s.a2) << " alpha=" << fmt10(s.alpha)
              << " beta=" << fmt10(s.beta) << " t1=" << fmt10(s.t1) << " t2=" << fmt10(out.t2)
              << (s.t2 ? "" : " (matched)") << "\n";
    std::cout << "metric        simulated        closed           |difference|\n";
    auto row = [](const char* name, double sim, double cl) {
        std::printf("%-12s  %-15s  %-15s  %s\n", name, fmt10(sim).c_str(), fmt10(cl).c_str(),
                    fmt10(std::abs(sim - cl)).c_str());
    };
    row("p1", out.p1, closed.p1);
    row("p2", out.p2, closed.p2);
    row("p_total", out.p_total, closed.p_total);
    row("eta_out", out.eta_out, closed.eta_out);
    if (out.gain)
        row("gain", *out.gain, closed.gain ? *closed.gain : std::nan(""));
    else
        std::printf("%-12s  %-15s  %-15s  -\n", "gain", "undefined", "undefined");

    if (!raw.out.empty()) {
        const bool fresh = [&] {
            std::ifstream probe(raw.out);
            return !probe.good() || probe.peek() == std::ifstream::traits_type::eof();
        }();
        std::ofstream csv(raw.out, std::ios::app);
        if (!csv) throw UsageError("cannot open output file: " + raw.out);
        if (fresh) csv << kSweepHeader << '\n';
        csv << sweep_row(s, out, closed) << '\n';
    }
    return 0;
}

int cmd_sweep(RawParams raw) {
    raw.merge_config(true);
    if (raw.var != "t1" && raw.var != "a2" && raw.var != "eta")
        throw UsageError("--var must be one of t1, a2, eta");
    if (raw.start.empty() || raw.stop.empty() || raw.steps.empty())
        throw UsageError("sweep needs --start, --stop and --steps");
    const double start = parse_double("start", raw.start);
    const double stop = parse_double("stop", raw.stop);
    const long steps = parse_long("steps", raw.steps);
    if (steps < 2) throw UsageError("--steps must be at least 2");
    if (!(start < stop)) throw UsageError("--start must be less than --stop");

    // The swept flag must not also be fixed; fill it per point below.
    RawParams fixed = raw;
    (raw.var == "t1" ? fixed.t1 : raw.var == "a2" ? fixed.a2 : fixed.eta) = "0.5";

    std::ostringstream body;
    body << kSweepHeader << '\n';
    for (long i = 0; i < steps; ++i) {
        const double value = start + i * (stop - start) / static_cast<double>(steps - 1);
        RawParams point = fixed;
        (raw.var == "t1" ? point.t1 : raw.var == "a2" ? point.a2 : point.eta) = fmt10(value);
        const RunSettings s = check_run_settings(point);
        const ProtocolOutcome out = run(to_protocol_params(s));
        body << sweep_row(s, out, closed_at(s.eta, out.params.a, s.t1, out.t2)) << '\n';
    }

    if (raw.out.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream csv(raw.out);
        if (!csv) throw UsageError("cannot open output file: " + raw.out);
        csv << body.str();
    }
    return 0;
}

int cmd_figure(int figure, const std::string& out_flag) {
    if (figure < 2 || figure > 5) throw UsageError("figure number must be 2, 3, 4 or 5");
    const std::string path = out_flag.empty() ? "figure" + std::to_string(figure) + ".csv"
                                              : out_flag;
    std::ofstream csv(path);
    if (!csv) throw UsageError("cannot open output file: " + path);

    const std::vector<double> fig2_a2 = {0.1, 0.2, 0.4, 0.5, 0.6, 0.8, 0.9};
    const std::vector<std::pair<double, double>> combos = {
        {0.5, 0.3}, {0.5, 0.6}, {0.5, 0.8}, {0.3, 0.3}, {0.3, 0.6}, {0.3, 0.8}};

    switch (figure) {
        case 2: {
            csv << "# matched transmissivity: t2 = t1*(1-a2)/(a2 - 2*a2*t1 + t1)\n";
            csv << "t1";
            for (double a2 : fig2_a2) csv << ",t2(a2=" << fmt10(a2) << ")";
            csv << '\n';
            for (int i = 0; i <= 200; ++i) {
                const double t1 = i / 200.0;
                csv << fmt10(t1);
                for (double a2 : fig2_a2)
                    csv << ',' << fmt10(t1 * (1.0 - a2) / (a2 - 2.0 * a2 * t1 + t1));
                csv << '\n';
            }
            break;
        }
        case 3: {
            csv << "# gain threshold: t1 = 2*a2/(1 + 2*a2)\n";
            csv << "a2,t1_threshold\n";
            for (int i = 0; i <= 200; ++i) {
                const double a2 = i / 200.0;
                csv << fmt10(a2) << ',' << fmt10(2.0 * a2 / (1.0 + 2.0 * a2)) << '\n';
            }
            break;
        }
        case 4: {
            csv << "# gain: g = 2*a2*(1-t1)/(2*eta*a2*(1-t1) + (1-eta)*t1)\n";
            csv << "t1";
            for (const auto& [a2, eta] : combos)
                csv << ",gain(a2=" << fmt10(a2) << ",eta=" << fmt10(eta) << ")";
            csv << '\n';
            for (int i = 0; i <= 200; ++i) {
                const double t1 = (1.0 + 3.0 * i) / 1000.0;
                csv << fmt10(t1);
                for (const auto& [a2, eta] : combos)
                    csv << ',' << fmt10(gain_closed(eta, std::sqrt(a2), t1));
                csv << '\n';
            }
            break;
        }
        case 5: {
            csv << "# p1 = 2*a2*(1-a2)^2*t1^3*(1-t1)/(a2 - 2*a2*t1 + t1)^2\n";
            csv << "# p2 = t1^4*(1-a2)^2/(a2 - 2*a2*t1 + t1)^2\n";
            csv << "# total heralding probability: p_t = eta*p1 + (1-eta)*p2\n";
            csv << "t1";
            for (const auto& [a2, eta] : combos)
                csv << ",p_t(a2=" << fmt10(a2) << ",eta=" << fmt10(eta) << ")";
            csv << '\n';
            for (int i = 0; i <= 200; ++i) {
                const double t1 = (1.0 + 3.0 * i) / 1000.0;
                csv << fmt10(t1);
                for (const auto& [a2, eta] : combos)
                    csv << ',' << fmt10(pt_closed(eta, std::sqrt(a2), t1));
                csv << '\n';
            }
            break;
        }
    }
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_validate(const std::string& eta_raw, const std::string& a2_raw,
                 const std::string& t1_raw, const std::string& tol_raw) {
    const double tolerance = tol_raw.empty() ? 1e-10 : parse_double("tolerance", tol_raw);
    if (!(tolerance >= 0.0)) throw UsageError("--tolerance must be non-negative");

    std::vector<double> etas, a2s, t1s;
    if (eta_raw.empty())
        for (int i = 1; i <= 9; ++i) etas.push_back(i / 10.0);
    else
        etas.push_back(require_range("eta", eta_raw, 0.0, 1.0, false));
    if (a2_raw.empty())
        for (int i = 1; i <= 9; ++i) a2s.push_back(i / 10.0);
    else
        a2s.push_back(require_range("a2", a2_raw, 0.0, 1.0, false));
    if (t1_raw.empty())
        for (int i = 1; i <= 12; ++i) t1s.push_back(i * 0.05);
    else
        t1s.push_back(require_range("t1", t1_raw, 0.0, 1.0, true));

    const char* names[5] = {"p1", "p2", "p_total", "eta_out", "gain"};
    double worst[5] = {0, 0, 0, 0, 0};
    std::string where[5];
    long points = 0;

    for (double eta : etas) {
        for (double a2 : a2s) {
            for (double t1 : t1s) {
                const double a = std::sqrt(a2);
                const ProtocolOutcome out = run(ProtocolParams{eta, a, 1.0, 0.0, t1, {}});
                const ClosedFormReport rep = closed_report(eta, a, t1);
                const double sim_gain = out.gain ? *out.gain : std::nan("");
                const double closed_gain = rep.gain ? *rep.gain : std::nan("");
                const double diffs[5] = {std::abs(out.p1 - rep.p1), std::abs(out.p2 - rep.p2),
                                         std::abs(out.p_total - rep.p_total),
                                         std::abs(out.eta_out - rep.eta_out),
                                         std::abs(sim_gain - closed_gain)};
                for (int m = 0; m < 5; ++m) {
                    if (diffs[m] > worst[m]) {
                        worst[m] = diffs[m];
                        where[m] = "eta=" + fmt10(eta) + " a2=" + fmt10(a2) +
                                   " t1=" + fmt10(t1);
                    }
                }
                ++points;
            }
        }
    }

    std::cout << "validate: " << points << " point" << (points == 1 ? "" : "s")
              << ", tolerance " << fmt10(tolerance) << "\n";
    bool pass = true;
    for (int m = 0; m < 5; ++m) {
        std::printf("worst |%s_sim - %s_closed| = %.3e%s\n", names[m], names[m], worst[m],
                    where[m].empty() ? "" : (" at " + where[m]).c_str());
        if (worst[m] > tolerance) pass = false;
    }
    std::cout << "result: " << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact simulator of a heralded amplifier for single-photon entanglement"};
    app.require_subcommand(1);

    RawParams run_raw, sweep_raw;
    int figure_n = 0;
    std::string figure_out;
    std::string val_eta, val_a2, val_t1, val_tol;

    CLI::App* c_run = app.add_subcommand("run", "simulate one parameter point");
    c_run->add_option("--eta", run_raw.eta, "channel survival probability, in [0,1]");
    c_run->add_option("--a2", run_raw.a2, "weight a^2 of the 'photon with Alice' branch");
    c_run->add_option("--alpha", run_raw.alpha, "polarization H amplitude (default 1)");
    c_run->add_option("--beta", run_raw.beta, "polarization V amplitude (default sqrt(1-alpha^2))");
    c_run->add_option("--t1", run_raw.t1, "first splitter transmissivity, in (0,1)");
    c_run->add_option("--t2", run_raw.t2, "second splitter transmissivity or 'auto' (matched)");
    c_run->add_option("--out", run_raw.out, "append the result as a CSV row");
    c_run->add_option("--config", run_raw.config, "key=value file supplying unset flags");

    CLI::App* c_sweep = app.add_subcommand("sweep", "sweep one parameter, write CSV");
    c_sweep->add_option("--var", sweep_raw.var, "swept parameter: t1, a2 or eta");
    c_sweep->add_option("--start", sweep_raw.start, "first grid value");
    c_sweep->add_option("--stop", sweep_raw.stop, "last grid value");
    c_sweep->add_option("--steps", sweep_raw.steps, "number of grid points (>= 2)");
    c_sweep->add_option("--eta", sweep_raw.eta, "fixed eta");
    c_sweep->add_option("--a2", sweep_raw.a2, "fixed a^2");
    c_sweep->add_option("--alpha", sweep_raw.alpha, "fixed alpha (default 1)");
    c_sweep->add_option("--beta", sweep_raw.beta, "fixed beta");
    c_sweep->add_option("--t1", sweep_raw.t1, "fixed t1");
    c_sweep->add_option("--t2", sweep_raw.t2, "fixed t2 or 'auto'");
    c_sweep->add_option("--out", sweep_raw.out, "output CSV path (default: stdout)");
    c_sweep->add_option("--config", sweep_raw.config, "key=value file supplying unset flags");

    CLI::App* c_figure = app.add_subcommand("figure", "regenerate figure data as CSV");
    c_figure->add_option("n", figure_n, "figure number: 2, 3, 4 or 5")->required();
    c_figure->add_option("--out", figure_out, "output CSV path (default: figure<n>.csv)");

    CLI::App* c_validate =
        app.add_subcommand("validate", "compare the simulator against the closed forms");
    c_validate->add_option("--eta", val_eta, "fix eta (default: grid 0.1..0.9)");
    c_validate->add_option("--a2", val_a2, "fix a^2 (default: grid 0.1..0.9)");
    c_validate->add_option("--t1", val_t1, "fix t1 (default: grid 0.05..0.60)");
    c_validate->add_option("--tolerance", val_tol, "pass threshold (default 1e-10)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c_run->parsed()) return cmd_run(run_raw);
        if (c_sweep->parsed()) return cmd_sweep(sweep_raw);
        if (c_figure->parsed()) return cmd_figure(figure_n, figure_out);
        return cmd_validate(val_eta, val_a2, val_t1, val_tol);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
