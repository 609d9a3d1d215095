// ecpsim: command-line front end for the qutrit entanglement-concentration
// simulator.
//
// Subcommands: enumerate, run, tables, optics compose, optics fidelity,
// homodyne, known.  Options can come from a JSON config file (--config);
// flags given on the command line override the file.  Exit codes: 0 success,
// 2 validation error, 3 internal invariant violation.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qecp/qecp.hpp"

namespace {

using nlohmann::json;
using namespace qecp;

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Complex coefficient parsing: "0.8", "-0.6i", "0.3+0.4i", "0.3-0.4i", "i".

Cx parse_complex(std::string s) {
    std::erase(s, ' ');
    if (s.empty()) throw ValidationError("empty coefficient");
    const bool has_i = s.back() == 'i' || s.back() == 'j';
    if (!has_i) {
        try {
            size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw ValidationError("bad coefficient '" + s + "'");
            return {v, 0.0};
        } catch (const std::exception&) {
            throw ValidationError("bad coefficient '" + s + "'");
        }
    }
    s.pop_back();  // trailing i
    // Find the split between the real and imaginary parts: the last +/- that
    // is not a leading sign and not part of an exponent.
    size_t split = std::string::npos;
    for (size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    auto parse_part = [](const std::string& p, bool imag_default_one) -> double {
        if (p.empty() || p == "+") return imag_default_one ? 1.0 : 0.0;
        if (p == "-") return imag_default_one ? -1.0 : 0.0;
        size_t pos = 0;
        const double v = std::stod(p, &pos);
        if (pos != p.size()) throw ValidationError("bad coefficient part '" + p + "'");
        return v;
    };
    try {
        if (split == std::string::npos) return {0.0, parse_part(s, true)};
        return {parse_part(s.substr(0, split), false), parse_part(s.substr(split), true)};
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception&) {
        throw ValidationError("bad coefficient '" + s + "i'");
    }
}

SchmidtTriple parse_triple(const std::vector<std::string>& items, bool polar) {
    if (items.size() != 3) throw ValidationError("exactly three coefficients required");
    Cx c[3];
    for (int i = 0; i < 3; ++i) {
        if (polar) {
            const auto sep = items[i].find(':');
            if (sep == std::string::npos)
                throw ValidationError("polar coefficient must be mag:phase");
            const double r = std::stod(items[i].substr(0, sep));
            const double ph = std::stod(items[i].substr(sep + 1));
            c[i] = Cx{r * std::cos(ph), r * std::sin(ph)};
        } else {
            c[i] = parse_complex(items[i]);
        }
    }
    SchmidtTriple t{c[0], c[1], c[2]};
    const double norm = std::sqrt(t.norm2());
    if (std::abs(norm - 1.0) > 1e-6)
        throw ValidationError("coefficients are not normalized (norm " + std::to_string(norm) +
                              ")");
    if (std::abs(norm - 1.0) > 1e-12) {
        std::cerr << "warning: renormalizing coefficients (norm was " << fmt_g(norm, 17) << ")\n";
    }
    t.alpha /= norm;
    t.beta /= norm;
    t.gamma /= norm;
    return t;
}

// ---------------------------------------------------------------------------
// Run configuration: JSON config file overlaid by explicit CLI flags.

struct RunConfig {
    std::vector<std::string> coeffs{"0.57735026918962576", "0.57735026918962576",
                                    "0.57735026918962576"};
    bool coeffs_polar = false;
    double alpha = 50.0;
    double theta = 0.35;
    double theta_prime = 0.35;
    double gamma_t = 0.0;
    std::string convention = "appendix_sqrt2";
    bool ideal_detection = false;
    long long trials = 10000;
    std::uint64_t seed = 1;
    std::string output;
    std::string format = "json";

    void validate_format() const {
        if (format != "csv" && format != "json")
            throw ValidationError("format must be csv or json");
    }

    SchmidtTriple triple() const { return parse_triple(coeffs, coeffs_polar); }

    QuadratureConvention quad() const {
        if (convention == "appendix_sqrt2") return QuadratureConvention::kAppendixSqrt2;
        if (convention == "figure_2x") return QuadratureConvention::kFigure2x;
        throw ValidationError("unknown convention '" + convention +
                              "' (use appendix_sqrt2 or figure_2x)");
    }

    DetectionModel detection() const {
        DetectionModel d;
        d.probe1 = HomodyneModel{alpha, theta, gamma_t, quad()};
        d.probe2 = HomodyneModel{alpha, theta_prime, gamma_t, quad()};
        d.ideal = ideal_detection;
        return d;
    }
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

void load_config_file(const std::string& path, RunConfig& cfg) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const std::exception& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    if (j.contains("coeffs")) {
        cfg.coeffs.clear();
        for (const auto& item : j["coeffs"]) {
            if (item.is_string())
                cfg.coeffs.push_back(item.get<std::string>());
            else
                cfg.coeffs.push_back(fmt_g(item.get<double>(), 17));
        }
        cfg.coeffs_polar = false;
    }
    if (j.contains("coeffs_polar")) {
        cfg.coeffs.clear();
        for (const auto& item : j["coeffs_polar"]) {
            cfg.coeffs.push_back(fmt_g(item.at(0).get<double>(), 17) + ":" +
                                 fmt_g(item.at(1).get<double>(), 17));
        }
        cfg.coeffs_polar = true;
    }
    if (j.contains("homodyne")) {
        const auto& h = j["homodyne"];
        if (h.contains("alpha")) cfg.alpha = h["alpha"].get<double>();
        if (h.contains("theta")) cfg.theta = h["theta"].get<double>();
        if (h.contains("theta_prime")) cfg.theta_prime = h["theta_prime"].get<double>();
        if (h.contains("gamma_t")) cfg.gamma_t = h["gamma_t"].get<double>();
        if (h.contains("convention")) cfg.convention = h["convention"].get<std::string>();
        if (h.contains("ideal_detection")) cfg.ideal_detection = h["ideal_detection"].get<bool>();
    }
    if (j.contains("trials")) cfg.trials = j["trials"].get<long long>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("output")) cfg.output = j["output"].get<std::string>();
    if (j.contains("format")) cfg.format = j["format"].get<std::string>();
}

int thread_cap() {
    const char* env = std::getenv("ECP_SIM_THREADS");
    if (!env || !*env) return 0;
    try {
        return std::max(0, std::stoi(env));
    } catch (const std::exception&) {
        return 0;
    }
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty())
        std::cout << content;
    else
        write_file(path, content);
}

// ---------------------------------------------------------------------------
// Subcommand bodies.

int cmd_enumerate(const RunConfig& cfg) {
    const auto branches = enumerate_branches(cfg.triple());
    std::ostringstream os;
    if (cfg.format == "csv") {
        os << "branch_p,branch_q,coefficient,probability,class\n";
        for (const auto& [pair, info] : branches)
            os << pair.p << "," << pair.q << "," << info.monomial << ","
               << csv_float(info.prob) << "," << to_string(info.tag) << "\n";
    } else {
        os << "{\"branches\":[";
        double sum = 0.0;
        bool first = true;
        for (const auto& [pair, info] : branches) {
            if (!first) os << ",";
            first = false;
            os << "{\"branch\":[" << pair.p << "," << pair.q << "],\"coefficient\":\""
               << info.monomial << "\",\"probability\":" << json_float(info.prob)
               << ",\"class\":\"" << to_string(info.tag) << "\"}";
            sum += info.prob;
        }
        os << "],\"sum\":" << json_float(sum) << "}\n";
    }
    emit(cfg.output, os.str());
    return 0;
}

int cmd_run(const RunConfig& cfg, const std::string& summary_path,
            std::optional<ImperfectionParams> fourier_imp) {
    if (cfg.output.empty()) throw ValidationError("run: --output is required");
    if (cfg.trials < 0) throw ValidationError("run: trials must be >= 0");
    const McResult res = run_monte_carlo(cfg.triple(), cfg.detection(), cfg.trials, cfg.seed,
                                         thread_cap(), fourier_imp);

    std::ostringstream csv;
    csv << "trial,branch_p,branch_q,k,l,m,n,misread,class,fidelity\n";
    for (size_t i = 0; i < res.trials.size(); ++i) {
        const TrialResult& t = res.trials[i];
        csv << i << "," << t.branch.p << "," << t.branch.q << "," << t.outcome.k << ","
            << t.outcome.l << "," << t.outcome.m << "," << t.outcome.n << ","
            << (t.homodyne_misread ? 1 : 0) << "," << to_string(t.final_class.tag) << ","
            << csv_float(t.fidelity) << "\n";
    }

    std::ostringstream js;
    js << "{\"trials\":" << res.summary.trials << ",\"seed\":" << cfg.seed
       << ",\"class_counts\":{";
    bool first = true;
    for (const auto& [name, count] : res.summary.class_counts) {
        if (!first) js << ",";
        first = false;
        js << "\"" << name << "\":" << count;
    }
    js << "},\"misread_count\":" << res.summary.misreads
       << ",\"misread_rate\":" << json_float(res.summary.misread_rate())
       << ",\"mean_fidelity\":" << json_float(res.summary.mean_fidelity) << "}\n";

    write_file(cfg.output, csv.str());
    const std::string spath = summary_path.empty() ? cfg.output + ".summary.json" : summary_path;
    write_file(spath, js.str());
    return 0;
}

int cmd_tables(int which, const RunConfig& cfg, const std::string& data_dir) {
    std::string csv, diff_text;
    switch (which) {
        case 1: {
            csv = regenerate_ledger_csv(cfg.triple());
            const auto fixture = load_ledger_fixture(data_dir + "/published_table1.csv");
            diff_text = diff_ledger(fixture).to_text("diff vs published table 1");
            break;
        }
        case 2:
        case 3: {
            csv = regenerate_maximal_csv();
            const auto fixture = load_feedforward_fixture(
                data_dir + "/published_table" + std::to_string(which) + ".csv");
            diff_text = diff_feedforward(fixture).to_text("diff vs published table " +
                                                          std::to_string(which));
            break;
        }
        case 4: {
            csv = regenerate_qubit_csv();
            const auto fixture = load_qubit_fixture(data_dir + "/published_table4.csv");
            diff_text = diff_qubit_tables(fixture).to_text("diff vs published table 4");
            break;
        }
        default:
            throw ValidationError("tables: --which must be 1, 2, 3 or 4");
    }
    if (cfg.output.empty()) {
        std::cout << csv << "\n" << diff_text;
    } else {
        write_file(cfg.output, csv);
        write_file(cfg.output + ".diff.txt", diff_text);
    }
    return 0;
}

int cmd_optics_compose(const RunConfig& cfg, double eps, double d_omega, double d_phi) {
    std::optional<ImperfectionParams> imp;
    if (eps != 0.0 || d_omega != 0.0 || d_phi != 0.0)
        imp = ImperfectionParams{eps, d_omega, d_phi};
    const auto [matrix, report] = compose_fourier(imp);
    std::ostringstream os;
    os << "{\"matrix\":[";
    for (int i = 0; i < 3; ++i) {
        os << (i ? ",[" : "[");
        for (int j = 0; j < 3; ++j) {
            os << (j ? "," : "") << "[" << json_float(matrix(i, j).real()) << ","
               << json_float(matrix(i, j).imag()) << "]";
        }
        os << "]";
    }
    os << "],\"permutation\":[" << report.permutation[0] << "," << report.permutation[1] << ","
       << report.permutation[2] << "],\"output_phases\":[" << json_float(report.output_phases[0])
       << "," << json_float(report.output_phases[1]) << ","
       << json_float(report.output_phases[2]) << "],\"residual\":" << json_float(report.residual)
       << ",\"deviation_from_uf\":" << json_float(report.deviation_from_uf)
       << ",\"equivalent\":" << (report.equivalent() ? "true" : "false") << "}\n";
    emit(cfg.output, os.str());
    return 0;
}

int cmd_optics_fidelity(const RunConfig& cfg, double eps_min, double eps_max, int eps_steps,
                        double d_min, double d_max, int d_steps, double omega, double phi) {
    if (eps_steps <= 0 || d_steps <= 0) throw ValidationError("optics fidelity: empty range");
    const auto surf = fidelity_surface(linspace(eps_min, eps_max, eps_steps),
                                       linspace(d_min, d_max, d_steps),
                                       BlockParams{phi, omega, {0, 1}});
    std::ostringstream os;
    os << "eps,delta,avg_fidelity\n";
    for (size_t ie = 0; ie < surf.eps_values.size(); ++ie)
        for (size_t id = 0; id < surf.delta_values.size(); ++id)
            os << csv_float(surf.eps_values[ie]) << "," << csv_float(surf.delta_values[id]) << ","
               << csv_float(surf.at(ie, id)) << "\n";
    emit(cfg.output, os.str());
    return 0;
}

int cmd_homodyne(const RunConfig& cfg, double a_min, double a_max, int a_steps, double g_min,
                 double g_max, int g_steps) {
    if (a_steps <= 0 || g_steps <= 0) throw ValidationError("homodyne: empty range");
    std::ostringstream os;
    os << "alpha,gamma_t,theta,p_suc,p_suc_full,p_x\n";
    for (double a : linspace(a_min, a_max, a_steps)) {
        for (double g : linspace(g_min, g_max, g_steps)) {
            const HomodyneModel m{a, cfg.theta, g, QuadratureConvention::kAppendixSqrt2};
            os << csv_float(a) << "," << csv_float(g) << "," << csv_float(cfg.theta) << ","
               << csv_float(p_suc(m)) << "," << csv_float(p_suc_full(m)) << ","
               << csv_float(p_x(m)) << "\n";
        }
    }
    emit(cfg.output, os.str());
    return 0;
}

int cmd_known(const RunConfig& cfg) {
    KnownEcpResult res;
    try {
        res = run_known(cfg.triple());
    } catch (const DegenerateRankError& e) {
        throw ValidationError(e.what());
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
    std::ostringstream os;
    os << "{\"success_prob\":" << json_float(res.success_prob)
       << ",\"paper_claimed\":" << json_float(res.paper_claimed) << ",\"detector_probs\":["
       << json_float(res.detector_probs[0]) << "," << json_float(res.detector_probs[1])
       << "],\"fidelity\":" << json_float(res.fidelity_to_maximal)
       << ",\"heralded_state\":" << state_to_json(res.heralded) << "}\n";
    emit(cfg.output, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qutrit entanglement-concentration simulator"};
    app.require_subcommand(1);
    app.fallthrough();  // parent options (--config) may follow the subcommand
    app.option_defaults()->always_capture_default();

    RunConfig cfg;
    std::string config_path, coeffs_arg, coeffs_polar_arg, summary_path, data_dir = "data";

    app.add_option("--config", config_path, "JSON config file; flags override its values");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--coeffs", coeffs_arg,
                        "three comma-separated complex coefficients, e.g. 0.8,0.6i,0");
        sub->add_option("--coeffs-polar", coeffs_polar_arg,
                        "three mag:phase pairs, e.g. 0.8:0,0.6:1.5708,0:0");
        sub->add_option("-o,--output", cfg.output, "output path (stdout when omitted)");
    };

    CLI::App* enumerate = app.add_subcommand("enumerate", "exact branch probabilities (JSON)");
    add_common(enumerate);
    enumerate->add_option("--format", cfg.format, "json (default) or csv");

    CLI::App* run = app.add_subcommand("run", "Monte Carlo trials (CSV + summary JSON)");
    add_common(run);
    run->add_option("--trials", cfg.trials, "number of trials (default 10000)");
    run->add_option("--seed", cfg.seed, "64-bit RNG seed (default 1)");
    run->add_option("--summary", summary_path, "summary JSON path (default <output>.summary.json)");
    run->add_option("--alpha", cfg.alpha, "probe amplitude (default 50)");
    run->add_option("--theta", cfg.theta, "Kerr phase theta (default 0.35)");
    run->add_option("--theta-prime", cfg.theta_prime, "Kerr phase theta' (default 0.35)");
    run->add_option("--gamma-t", cfg.gamma_t, "decay exposure gamma*t (default 0)");
    run->add_option("--convention", cfg.convention, "appendix_sqrt2 | figure_2x");
    run->add_flag("--ideal-detection", cfg.ideal_detection, "disable detector confusion");
    double run_eps = 0.0, run_domega = 0.0, run_dphi = 0.0;
    run->add_option("--optics-eps", run_eps,
                    "end-to-end mode: BS deviation of the measurement network");
    run->add_option("--optics-delta-omega", run_domega,
                    "end-to-end mode: internal phase error of the measurement network");
    run->add_option("--optics-delta-phi", run_dphi,
                    "end-to-end mode: input phase error of the measurement network");

    CLI::App* tables = app.add_subcommand("tables", "regenerate a published table + diff");
    add_common(tables);
    int which = 1;
    tables->add_option("--which", which, "table number: 1, 2, 3 or 4")->required();
    tables->add_option("--data-dir", data_dir, "fixture directory (default: data)");

    CLI::App* optics = app.add_subcommand("optics", "Fourier network tools");
    optics->require_subcommand(1);
    CLI::App* compose = optics->add_subcommand("compose", "compose the network (report JSON)");
    double eps = 0.0, d_omega = 0.0, d_phi = 0.0;
    compose->add_option("--eps", eps, "BS transmission deviation");
    compose->add_option("--delta-omega", d_omega, "internal phase error (radians)");
    compose->add_option("--delta-phi", d_phi, "input phase error (radians)");
    compose->add_option("-o,--output", cfg.output, "output path (stdout when omitted)");
    CLI::App* fid = optics->add_subcommand("fidelity", "block-fidelity surface (CSV)");
    double eps_min = 0.0, eps_max = 0.1, d_min = 0.0, d_max = 0.1;
    int eps_steps = 21, d_steps = 21;
    double omega = kPi / 4.0, phi = kPi / 3.0;
    fid->add_option("--eps-min", eps_min);
    fid->add_option("--eps-max", eps_max);
    fid->add_option("--eps-steps", eps_steps);
    fid->add_option("--delta-min", d_min);
    fid->add_option("--delta-max", d_max);
    fid->add_option("--delta-steps", d_steps);
    fid->add_option("--omega", omega, "block omega (default pi/4)");
    fid->add_option("--phi", phi, "block phi (default pi/3)");
    fid->add_option("-o,--output", cfg.output, "output path (stdout when omitted)");

    CLI::App* homodyne = app.add_subcommand("homodyne", "success-probability sweep (CSV)");
    double a_min = 10.0, a_max = 100.0, g_min = 0.0, g_max = 1.0;
    int a_steps = 10, g_steps = 5;
    homodyne->add_option("--alpha-min", a_min);
    homodyne->add_option("--alpha-max", a_max);
    homodyne->add_option("--alpha-steps", a_steps);
    homodyne->add_option("--gammat-min", g_min);
    homodyne->add_option("--gammat-max", g_max);
    homodyne->add_option("--gammat-steps", g_steps);
    homodyne->add_option("--theta", cfg.theta, "Kerr phase theta (default 0.35)");
    homodyne->add_option("-o,--output", cfg.output, "output path (stdout when omitted)");

    CLI::App* known = app.add_subcommand("known", "known-parameter scheme (JSON)");
    add_common(known);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (!verify_mzi_convention())
            throw std::logic_error("internal self-test failed: MZI composition vs closed form");

        if (!config_path.empty()) {
            // Flags parsed above wrote directly into cfg; re-apply file values
            // only for fields the user did not pass explicitly.
            RunConfig file_cfg;
            load_config_file(config_path, file_cfg);
            auto sub = app.get_subcommands().front();
            auto keep = [&](const std::string& flag) {
                const CLI::Option* o = sub->get_option_no_throw(flag);
                return o && o->count() > 0;
            };
            if (!keep("--trials")) cfg.trials = file_cfg.trials;
            if (!keep("--seed")) cfg.seed = file_cfg.seed;
            if (!keep("--alpha")) cfg.alpha = file_cfg.alpha;
            if (!keep("--theta")) cfg.theta = file_cfg.theta;
            if (!keep("--theta-prime")) cfg.theta_prime = file_cfg.theta_prime;
            if (!keep("--gamma-t")) cfg.gamma_t = file_cfg.gamma_t;
            if (!keep("--convention")) cfg.convention = file_cfg.convention;
            if (!keep("--ideal-detection")) cfg.ideal_detection = file_cfg.ideal_detection;
            if (!keep("--format")) cfg.format = file_cfg.format;
            if (!keep("--output") && !keep("-o") && cfg.output.empty())
                cfg.output = file_cfg.output;
            if (coeffs_arg.empty() && coeffs_polar_arg.empty()) {
                cfg.coeffs = file_cfg.coeffs;
                cfg.coeffs_polar = file_cfg.coeffs_polar;
            }
        }
        if (!coeffs_arg.empty()) {
            cfg.coeffs = split_list(coeffs_arg);
            cfg.coeffs_polar = false;
        } else if (!coeffs_polar_arg.empty()) {
            cfg.coeffs = split_list(coeffs_polar_arg);
            cfg.coeffs_polar = true;
        }

        cfg.validate_format();
        if (enumerate->parsed()) return cmd_enumerate(cfg);
        if (run->parsed()) {
            std::optional<ImperfectionParams> fourier_imp;
            if (run_eps != 0.0 || run_domega != 0.0 || run_dphi != 0.0)
                fourier_imp = ImperfectionParams{run_eps, run_domega, run_dphi};
            return cmd_run(cfg, summary_path, fourier_imp);
        }
        if (tables->parsed()) return cmd_tables(which, cfg, data_dir);
        if (optics->parsed()) {
            if (compose->parsed()) return cmd_optics_compose(cfg, eps, d_omega, d_phi);
            return cmd_optics_fidelity(cfg, eps_min, eps_max, eps_steps, d_min, d_max, d_steps,
                                       omega, phi);
        }
        if (homodyne->parsed())
            return cmd_homodyne(cfg, a_min, a_max, a_steps, g_min, g_max, g_steps);
        if (known->parsed()) return cmd_known(cfg);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
