#ifndef DSB_SCENARIO_HPP
#define DSB_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dsb/fields.hpp"

namespace dsb {

struct parse_error : std::runtime_error {
    int line;
    parse_error(int line_, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

// Declarative input for one run. The format is a flat, line-oriented
// `key value...` text with one nested block (explicit sections):
//
//   command linstab
//   field gf 5
//   bundle 3 4
//   sections random 4
//   seed 42
//
//   sections explicit 2
//     s^3 ; 0
//     0 ; s^2*t - t^3
//   end
//
// Unknown keys are rejected; everything is validated before any computation.
struct Scenario {
    std::string command;                   // dsb | linstab | butler-audit | paper-verify | audit-all
    std::string verify_id;                 // thm-5.18 | thm-4.3 | prop-5.11 (paper-verify only)
    FieldSpec field = FieldSpec::rationals();
    std::string base = "p1";               // p1 | hyperelliptic
    std::vector<long long> bundle;         // splitting type of E
    bool sections_random = false;
    long long sections_count = 0;
    std::vector<std::vector<std::string>> sections_explicit;  // rows of component strings
    std::uint64_t seed = 1;
    std::optional<long long> prime;        // GF side of the verify pipelines
    long long samples = 20;
    bool exhaustive = true;
    int threads = 1;
    long long guard_max_n = 6;
    long long guard_max_p = 13;
    std::optional<std::string> report_path;
    std::optional<long long> param_e;      // verify parameters
    std::optional<long long> param_n;
    std::optional<long long> param_g;
    std::optional<long long> param_d;
    std::optional<long long> param_d3;
    std::vector<std::size_t> subbundle;    // summand indices of M for butler-audit
    std::vector<std::string> raw_lines;    // verbatim echo

    std::string canonical_text() const;
};

Scenario parse_scenario_text(const std::string& text);
Scenario parse_scenario_file(const std::string& path);

}  // namespace dsb

#endif
