#include "dsb/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace dsb {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

long long to_int(const std::string& tok, int line) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw parse_error(line, "expected an integer, got '" + tok + "'");
    }
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
    Scenario sc;
    std::istringstream is(text);
    std::string line;
    int ln = 0;
    bool have_command = false, have_sections = false;
    std::set<std::string> seen;

    const std::set<std::string> known = {
        "command", "field",  "base",    "bundle",  "sections", "seed",
        "prime",   "samples", "exhaustive", "threads", "max-n",   "max-p",
        "report",  "e",      "n",       "g",       "d",        "d3",
        "subbundle"};

    while (std::getline(is, line)) {
        ++ln;
        sc.raw_lines.push_back(line);
        std::string stripped = line;
        auto hash = stripped.find('#');
        if (hash != std::string::npos) stripped.resize(hash);
        auto toks = split_ws(stripped);
        if (toks.empty()) continue;
        const std::string key = toks[0];
        if (!known.count(key)) throw parse_error(ln, "unknown key '" + key + "'");
        if (seen.count(key) && key != "sections")
            throw parse_error(ln, "duplicate key '" + key + "'");
        seen.insert(key);
        auto need = [&](std::size_t k) {
            if (toks.size() < k + 1) throw parse_error(ln, "key '" + key + "' needs more arguments");
        };

        if (key == "command") {
            need(1);
            sc.command = toks[1];
            if (sc.command == "paper-verify") {
                need(2);
                sc.verify_id = toks[2];
            } else if (toks.size() > 2) {
                throw parse_error(ln, "unexpected arguments after command");
            }
            have_command = true;
        } else if (key == "field") {
            need(1);
            if (toks[1] == "rationals") {
                sc.field = FieldSpec::rationals();
            } else if (toks[1] == "gf") {
                need(2);
                long long p = to_int(toks[2], ln);
                try {
                    sc.field = FieldSpec::prime(static_cast<std::uint32_t>(p));
                } catch (const std::invalid_argument& e) {
                    throw parse_error(ln, e.what());
                }
            } else {
                throw parse_error(ln, "field must be 'rationals' or 'gf <p>'");
            }
        } else if (key == "base") {
            need(1);
            if (toks[1] != "p1" && toks[1] != "hyperelliptic")
                throw parse_error(ln, "base must be 'p1' or 'hyperelliptic'");
            sc.base = toks[1];
        } else if (key == "bundle") {
            need(1);
            for (std::size_t i = 1; i < toks.size(); ++i) sc.bundle.push_back(to_int(toks[i], ln));
        } else if (key == "sections") {
            need(1);
            if (have_sections) throw parse_error(ln, "duplicate sections block");
            have_sections = true;
            if (toks[1] == "random") {
                need(2);
                sc.sections_random = true;
                sc.sections_count = to_int(toks[2], ln);
            } else if (toks[1] == "explicit") {
                need(2);
                sc.sections_count = to_int(toks[2], ln);
                long long got = 0;
                while (std::getline(is, line)) {
                    ++ln;
                    sc.raw_lines.push_back(line);
                    auto inner = line;
                    auto h2 = inner.find('#');
                    if (h2 != std::string::npos) inner.resize(h2);
                    // trim
                    auto b = inner.find_first_not_of(" \t");
                    if (b == std::string::npos) continue;
                    auto e = inner.find_last_not_of(" \t");
                    inner = inner.substr(b, e - b + 1);
                    if (inner == "end") break;
                    std::vector<std::string> comps;
                    std::string cur;
                    auto push_trimmed = [&comps](std::string piece) {
                        auto pb = piece.find_first_not_of(" \t");
                        if (pb == std::string::npos) {
                            comps.push_back("0");
                            return;
                        }
                        auto pe = piece.find_last_not_of(" \t");
                        comps.push_back(piece.substr(pb, pe - pb + 1));
                    };
                    for (char c : inner) {
                        if (c == ';') {
                            push_trimmed(cur);
                            cur.clear();
                        } else {
                            cur += c;
                        }
                    }
                    push_trimmed(cur);
                    sc.sections_explicit.push_back(std::move(comps));
                    ++got;
                }
                if (got != sc.sections_count)
                    throw parse_error(ln, "sections block declared " +
                                              std::to_string(sc.sections_count) + " rows, found " +
                                              std::to_string(got));
            } else {
                throw parse_error(ln, "sections must be 'random <count>' or 'explicit <count>'");
            }
        } else if (key == "seed") {
            need(1);
            sc.seed = static_cast<std::uint64_t>(to_int(toks[1], ln));
        } else if (key == "prime") {
            need(1);
            sc.prime = to_int(toks[1], ln);
        } else if (key == "samples") {
            need(1);
            sc.samples = to_int(toks[1], ln);
        } else if (key == "exhaustive") {
            need(1);
            if (toks[1] == "on") sc.exhaustive = true;
            else if (toks[1] == "off") sc.exhaustive = false;
            else throw parse_error(ln, "exhaustive must be 'on' or 'off'");
        } else if (key == "threads") {
            need(1);
            sc.threads = static_cast<int>(to_int(toks[1], ln));
        } else if (key == "max-n") {
            need(1);
            sc.guard_max_n = to_int(toks[1], ln);
        } else if (key == "max-p") {
            need(1);
            sc.guard_max_p = to_int(toks[1], ln);
        } else if (key == "report") {
            need(1);
            sc.report_path = toks[1];
        } else if (key == "e") {
            need(1);
            sc.param_e = to_int(toks[1], ln);
        } else if (key == "n") {
            need(1);
            sc.param_n = to_int(toks[1], ln);
        } else if (key == "g") {
            need(1);
            sc.param_g = to_int(toks[1], ln);
        } else if (key == "d") {
            need(1);
            sc.param_d = to_int(toks[1], ln);
        } else if (key == "d3") {
            need(1);
            sc.param_d3 = to_int(toks[1], ln);
        } else if (key == "subbundle") {
            need(1);
            for (std::size_t i = 1; i < toks.size(); ++i)
                sc.subbundle.push_back(static_cast<std::size_t>(to_int(toks[i], ln)));
        }
    }
    if (!have_command) throw parse_error(ln, "scenario has no 'command' line");

    const std::set<std::string> commands = {"dsb", "linstab", "butler-audit", "paper-verify",
                                            "audit-all"};
    if (!commands.count(sc.command)) throw parse_error(0, "unknown command '" + sc.command + "'");
    if (sc.command == "paper-verify") {
        const std::set<std::string> ids = {"thm-5.18", "thm-4.3", "prop-5.11"};
        if (!ids.count(sc.verify_id))
            throw parse_error(0, "unknown paper-verify id '" + sc.verify_id + "'");
    }
    if (sc.command == "dsb" || sc.command == "linstab" || sc.command == "butler-audit") {
        if (sc.bundle.empty()) throw parse_error(0, sc.command + " needs a 'bundle' line");
        if (!have_sections) throw parse_error(0, sc.command + " needs a 'sections' line");
        if (sc.sections_count < 1) throw parse_error(0, "sections count must be >= 1");
    }
    if (sc.samples < 1) throw parse_error(0, "samples must be >= 1");
    return sc;
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

std::string Scenario::canonical_text() const {
    std::ostringstream os;
    os << "command " << command;
    if (command == "paper-verify") os << " " << verify_id;
    os << "\n";
    os << "field " << (field.kind == FieldSpec::Kind::rationals ? std::string("rationals")
                                                                : "gf " + std::to_string(field.p))
       << "\n";
    os << "base " << base << "\n";
    if (!bundle.empty()) {
        os << "bundle";
        for (auto a : bundle) os << " " << a;
        os << "\n";
    }
    if (sections_random) {
        os << "sections random " << sections_count << "\n";
    } else if (!sections_explicit.empty()) {
        os << "sections explicit " << sections_count << "\n";
        for (const auto& row : sections_explicit) {
            os << " ";
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? " ; " : " ") << row[i];
            os << "\n";
        }
        os << "end\n";
    }
    os << "seed " << seed << "\n";
    if (prime) os << "prime " << *prime << "\n";
    os << "samples " << samples << "\n";
    os << "exhaustive " << (exhaustive ? "on" : "off") << "\n";
    os << "threads " << threads << "\n";
    os << "max-n " << guard_max_n << "\n";
    os << "max-p " << guard_max_p << "\n";
    if (param_e) os << "e " << *param_e << "\n";
    if (param_n) os << "n " << *param_n << "\n";
    if (param_g) os << "g " << *param_g << "\n";
    if (param_d) os << "d " << *param_d << "\n";
    if (param_d3) os << "d3 " << *param_d3 << "\n";
    if (!subbundle.empty()) {
        os << "subbundle";
        for (auto i : subbundle) os << " " << i;
        os << "\n";
    }
    return os.str();
}

}  // namespace dsb
