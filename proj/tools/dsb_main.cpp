#include <chrono>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "dsb/report.hpp"

namespace {

// The one supported environment override: a directory prefixed to relative
// report paths.
std::string report_target(const std::string& path) {
    const char* dir = std::getenv("DSB_REPORT_DIR");
    if (!dir || path.empty() || path.front() == '/') return path;
    return std::string(dir) + "/" + path;
}

int run_and_emit(const dsb::Scenario& sc) {
    auto t0 = std::chrono::steady_clock::now();
    dsb::Report rep = dsb::run_scenario(sc);
    auto t1 = std::chrono::steady_clock::now();
    rep.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();

    std::cout << rep.text;
    if (sc.report_path) {
        try {
            dsb::emit_report(rep, report_target(*sc.report_path));
        } catch (const std::exception& e) {
            std::cerr << "report write failed: " << e.what() << "\n";
            return dsb::exit_io;
        }
        std::cout << "report written to " << report_target(*sc.report_path) << "\n";
    }
    std::cerr << "elapsed: " << rep.elapsed_ms << " ms\n";
    return rep.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact dual-span and linear-stability workbench on the projective line"};
    app.set_version_flag("--version", std::string(dsb::kToolName) + " " + dsb::kToolVersion);
    app.require_subcommand(1);

    // run <scenario file>
    std::string scenario_path;
    auto* run = app.add_subcommand("run", "run a scenario file");
    run->add_option("scenario", scenario_path, "scenario file")->required();
    std::string run_report;
    run->add_option("--report", run_report, "report path prefix (writes .json and .txt)");

    // shared flags for the direct commands
    struct Direct {
        std::string field = "rationals";
        long long gf = 0;
        std::vector<long long> bundle;
        long long random_count = 0;
        std::vector<std::string> sections;
        std::uint64_t seed = 1;
        long long samples = 20;
        bool sampled = false;
        int threads = 1;
        long long max_n = 6, max_p = 13;
        std::string report;
        std::vector<std::size_t> subbundle;
    };
    auto add_direct = [](CLI::App* cmd, Direct& d, bool with_subbundle) {
        cmd->add_option("--gf", d.gf, "prime field modulus (omit for rationals)");
        cmd->add_option("--bundle", d.bundle, "splitting type degrees")->required();
        cmd->add_option("--random", d.random_count, "number of seeded random sections");
        cmd->add_option("--section", d.sections,
                        "explicit section, components separated by ';' (repeatable)");
        cmd->add_option("--seed", d.seed, "master seed");
        cmd->add_option("--samples", d.samples, "sample budget for sampled searches");
        cmd->add_flag("--sampled", d.sampled, "force the sampled search instead of the sweep");
        cmd->add_option("--threads", d.threads, "sweep worker count");
        cmd->add_option("--max-n", d.max_n, "resource guard: largest n swept exhaustively");
        cmd->add_option("--max-p", d.max_p, "resource guard: largest p swept exhaustively");
        cmd->add_option("--report", d.report, "report path prefix");
        if (with_subbundle)
            cmd->add_option("--subbundle", d.subbundle, "summand indices of M forming S");
    };

    Direct d_dsb, d_lin, d_but;
    auto* c_dsb = app.add_subcommand("dsb", "compute the dual span bundle of a system");
    add_direct(c_dsb, d_dsb, false);
    auto* c_lin = app.add_subcommand("linstab", "decide or search linear (semi)stability");
    add_direct(c_lin, d_lin, false);
    auto* c_but = app.add_subcommand("butler-audit", "build a butler diagram and audit it");
    add_direct(c_but, d_but, true);

    // paper-verify <id>
    std::string verify_id;
    long long pv_e = 3, pv_n = 2, pv_g = 10, pv_d = 5, pv_prime = 0, pv_samples = 0;
    std::uint64_t pv_seed = 1;
    int pv_threads = 1;
    std::string pv_report;
    auto* c_ver = app.add_subcommand("paper-verify", "replay a named end-to-end construction");
    c_ver->add_option("id", verify_id, "thm-5.18 | thm-4.3 | prop-5.11")->required();
    c_ver->add_option("--e", pv_e, "bundle parameter e (thm-5.18)");
    c_ver->add_option("--n", pv_n, "twist parameter n (thm-4.3)");
    c_ver->add_option("--g", pv_g, "genus (thm-4.3)");
    c_ver->add_option("--d", pv_d, "degree (prop-5.11)");
    c_ver->add_option("--prime", pv_prime, "prime for the finite-field sweeps");
    c_ver->add_option("--samples", pv_samples, "number of seeded samples");
    c_ver->add_option("--seed", pv_seed, "master seed");
    c_ver->add_option("--threads", pv_threads, "sweep worker count");
    c_ver->add_option("--report", pv_report, "report path prefix");

    // audit-all
    std::string grid = "default", audit_report;
    auto* c_aud = app.add_subcommand("audit-all", "run every parametric audit and grid");
    c_aud->add_option("--grid", grid, "grid selection (only 'default' exists)");
    c_aud->add_option("--report", audit_report, "report path prefix");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            dsb::Scenario sc = dsb::parse_scenario_file(scenario_path);
            if (!run_report.empty()) sc.report_path = run_report;
            return run_and_emit(sc);
        }
        auto direct_scenario = [](const Direct& d, const std::string& cmd) {
            dsb::Scenario sc;
            sc.command = cmd;
            sc.field = d.gf ? dsb::FieldSpec::prime(static_cast<std::uint32_t>(d.gf))
                            : dsb::FieldSpec::rationals();
            sc.bundle = d.bundle;
            if (d.random_count > 0) {
                sc.sections_random = true;
                sc.sections_count = d.random_count;
            } else {
                for (const auto& s : d.sections) {
                    std::vector<std::string> comps;
                    std::string cur;
                    for (char c : s) {
                        if (c == ';') {
                            comps.push_back(cur);
                            cur.clear();
                        } else
                            cur += c;
                    }
                    comps.push_back(cur);
                    sc.sections_explicit.push_back(std::move(comps));
                }
                sc.sections_count = static_cast<long long>(sc.sections_explicit.size());
            }
            if (sc.sections_count == 0)
                throw std::invalid_argument("provide --random <count> or --section entries");
            sc.seed = d.seed;
            sc.samples = d.samples;
            sc.exhaustive = !d.sampled;
            sc.threads = d.threads;
            sc.guard_max_n = d.max_n;
            sc.guard_max_p = d.max_p;
            if (!d.report.empty()) sc.report_path = d.report;
            sc.subbundle = d.subbundle;
            return sc;
        };
        if (c_dsb->parsed()) return run_and_emit(direct_scenario(d_dsb, "dsb"));
        if (c_lin->parsed()) return run_and_emit(direct_scenario(d_lin, "linstab"));
        if (c_but->parsed()) return run_and_emit(direct_scenario(d_but, "butler-audit"));
        if (c_ver->parsed()) {
            dsb::Scenario sc;
            sc.command = "paper-verify";
            sc.verify_id = verify_id;
            sc.param_e = pv_e;
            sc.param_n = pv_n;
            sc.param_g = pv_g;
            sc.param_d = pv_d;
            if (pv_prime > 0) sc.prime = pv_prime;
            sc.samples = pv_samples > 0 ? pv_samples : (verify_id == "thm-4.3" ? 10 : 20);
            sc.seed = pv_seed;
            sc.threads = pv_threads;
            if (!pv_report.empty()) sc.report_path = pv_report;
            // parse-validate through the canonical text round trip
            return run_and_emit(dsb::parse_scenario_text(sc.canonical_text()));
        }
        if (c_aud->parsed()) {
            if (grid != "default") throw std::invalid_argument("unknown grid '" + grid + "'");
            dsb::Scenario sc;
            sc.command = "audit-all";
            if (!audit_report.empty()) sc.report_path = audit_report;
            return run_and_emit(sc);
        }
    } catch (const dsb::parse_error& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return dsb::exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return dsb::exit_usage;
    }
    return dsb::exit_usage;
}
