#include <sstream>

#include "dsb/butler.hpp"
#include "dsb/hyperelliptic.hpp"
#include "dsb/numerology.hpp"
#include "dsb/report.hpp"

namespace dsb {

namespace {

using nlohmann::json;

json splitting_json(const SplittingType& st) {
    json j;
    j["degrees"] = st.degs;
    j["rank"] = st.rank();
    j["degree"] = st.degree();
    if (!st.empty()) j["slope"] = rat_str(st.slope());
    j["pretty"] = st.str();
    return j;
}

template <class F>
json mat_json(const F& K, const Mat<F>& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        std::string r;
        for (std::size_t j = 0; j < m.cols; ++j) {
            if (j) r += " ";
            r += K.str(m.at(i, j));
        }
        rows.push_back(r);
    }
    return rows;
}

template <class F>
json cert_json(const F& K, const LinStabCertificate<F>& c) {
    json j;
    j["dim_W"] = c.core.dim_W;
    j["rank_EW"] = c.core.rank_EW;
    j["deg_EW"] = c.core.deg_EW;
    j["kernel"] = c.kernel.str();
    j["lhs"] = rat_str(c.core.lhs);
    j["rhs"] = rat_str(c.core.rhs);
    j["relation"] = std::string(1, c.core.relation);
    j["W"] = mat_json(K, c.W);
    return j;
}

template <class F>
json verdict_json(const F& K, const StabilityVerdict<F>& v) {
    json j;
    j["kind"] = verdict_str(v.kind);
    j["coverage"] = v.exhaustive ? "exhaustive-GF(p)" : "sampled";
    j["note"] = v.note;
    j["dim1_trivial"] = v.dim1_trivial;
    j["proper_subspaces_total"] = v.proper_subspaces_total;
    json dims = json::object();
    for (const auto& [w, dc] : v.per_dim) {
        json d;
        d["swept"] = dc.swept;
        d["trivial_skipped"] = dc.trivial_skipped;
        d["strict_ok"] = dc.strict_ok;
        dims[std::to_string(w)] = d;
    }
    j["per_dim"] = dims;
    if (!v.exhaustive) j["samples_tried"] = v.samples_tried;
    json viols = json::array(), eqs = json::array();
    for (const auto& c : v.violations) viols.push_back(cert_json(K, c));
    for (const auto& c : v.equalities) eqs.push_back(cert_json(K, c));
    j["violations"] = viols;
    j["equalities"] = eqs;
    return j;
}

json audit_row_json(const AuditRow& r) {
    json j;
    j["name"] = r.name;
    j["params"] = r.params;
    j["lhs"] = rat_str(r.lhs);
    j["relation"] = r.rel_str();
    j["rhs"] = rat_str(r.rhs);
    j["pass"] = r.pass();
    j["discrepancy"] = r.discrepancy;
    j["note"] = r.note;
    return j;
}

std::string audit_row_text(const AuditRow& r) {
    std::ostringstream os;
    std::string flag = r.discrepancy ? (r.pass() ? "?DISCREPANCY-PASSED" : "DISCREPANCY")
                                     : (r.pass() ? "ok" : "FAIL");
    os << "  [" << flag << "] " << r.name;
    if (!r.params.empty()) os << " (" << r.params << ")";
    os << ": " << rat_str(r.lhs) << " " << r.rel_str() << " " << rat_str(r.rhs);
    if (!r.note.empty()) os << "  -- " << r.note;
    return os.str();
}

struct Outcome {
    json result;
    json certificates = json::array();
    json audit_rows = json::array();
    std::string text_body;
    std::string status = "pass";
    int exit_code = exit_pass;
};

template <class F>
CoherentSystem<F> build_system(const F& K, const Scenario& sc) {
    SplittingType E(sc.bundle);
    if (sc.sections_random) {
        return random_system(K, E, static_cast<std::size_t>(sc.sections_count), sc.seed);
    }
    std::vector<std::vector<BinaryForm<F>>> secs;
    for (const auto& row : sc.sections_explicit) {
        if (row.size() != E.rank())
            throw std::invalid_argument("each section needs one component per bundle summand");
        std::vector<BinaryForm<F>> sec;
        for (std::size_t i = 0; i < E.rank(); ++i)
            sec.push_back(parse_binary_form(K, row[i], static_cast<int>(E.degs[i])));
        secs.push_back(std::move(sec));
    }
    return make_system(K, E, secs);
}

template <class F>
json system_json(const F& K, const CoherentSystem<F>& sys) {
    (void)K;
    json j;
    j["type"] = sys.type_str();
    j["bundle"] = splitting_json(sys.E);
    json secs = json::array();
    for (std::size_t col = 0; col < sys.n; ++col) {
        json sec = json::array();
        for (std::size_t i = 0; i < sys.E.rank(); ++i) sec.push_back(bf_str(sys.eval.at(i, col)));
        secs.push_back(sec);
    }
    j["sections"] = secs;
    j["generated"] = is_generated(sys);
    return j;
}

template <class F>
Outcome cmd_dsb(const F& K, const Scenario& sc) {
    Outcome out;
    auto sys = build_system(K, sc);
    out.result["system"] = system_json(K, sys);
    std::ostringstream txt;
    txt << "system " << sys.type_str() << " over " << K.spec().str() << "\n";
    if (!is_generated(sys)) {
        out.status = "check-failed";
        out.exit_code = exit_check_failed;
        out.result["note"] = "system is not generated; the dual span construction refuses";
        txt << "NOT GENERATED: dual span refused\n";
        out.text_body = txt.str();
        return out;
    }
    auto kd = dual_span(sys);
    out.result["dual_span"] = splitting_json(kd.kernel);
    json basis = json::array();
    for (std::size_t col = 0; col < kd.kernel.rank(); ++col) {
        json c = json::array();
        for (std::size_t j = 0; j < sys.n; ++j) c.push_back(bf_str(kd.basis.at(j, col)));
        basis.push_back(c);
    }
    out.result["syzygy_basis"] = basis;
    out.result["generic_rank"] = kd.generic_rank;
    json prof;
    prof["d_lo"] = kd.profile.d_lo;
    prof["values"] = kd.profile.values;
    out.result["h0_profile"] = prof;
    auto sv = slope_stability_p1(kd.kernel);
    out.result["dual_span_stability"] = sv.str();
    auto [ambient_ss, ambient_note] = ambient_semistable_note(sys);
    out.result["ambient_semistable"] = ambient_ss;
    out.result["ambient_note"] = ambient_note;
    txt << "dual span: " << kd.kernel.str() << "  (" << sv.str() << ")\n";
    out.text_body = txt.str();
    return out;
}

template <class F>
Outcome linstab_outcome(const F& K, const CoherentSystem<F>& sys, const Scenario& sc);

template <class F>
std::string cert_text(const F& K, const std::string& label,
                      const std::vector<LinStabCertificate<F>>& certs, std::size_t limit = 5) {
    if (certs.empty()) return "";
    std::ostringstream os;
    os << label << " (" << certs.size() << "):\n";
    for (std::size_t i = 0; i < certs.size() && i < limit; ++i) {
        const auto& c = certs[i];
        os << "  dim " << c.core.dim_W << "  E_W rank " << c.core.rank_EW << " deg "
           << c.core.deg_EW << "  " << rat_str(c.core.lhs) << " " << c.core.relation << " "
           << rat_str(c.core.rhs) << "  W = [";
        for (std::size_t r = 0; r < c.W.rows; ++r) {
            if (r) os << " | ";
            for (std::size_t j = 0; j < c.W.cols; ++j) {
                if (j) os << " ";
                os << K.str(c.W.at(r, j));
            }
        }
        os << "]\n";
    }
    if (certs.size() > limit) os << "  ... (" << certs.size() - limit << " more in the JSON report)\n";
    return os.str();
}

template <>
Outcome linstab_outcome<GFpField>(const GFpField& K, const CoherentSystem<GFpField>& sys,
                                  const Scenario& sc) {
    Outcome out;
    if (sc.exhaustive) {
        SweepOptions opts;
        opts.max_n = sc.guard_max_n;
        opts.max_p = sc.guard_max_p;
        opts.threads = sc.threads;
        auto v = linstab_exhaustive(sys, opts);
        out.result["verdict"] = verdict_json(K, v);
        for (const auto& c : v.violations) out.certificates.push_back(cert_json(K, c));
        for (const auto& c : v.equalities) out.certificates.push_back(cert_json(K, c));
        if (v.kind == SystemVerdict::unstable) {
            out.status = "violations-found";
            out.exit_code = exit_violations;
        }
        out.text_body = "verdict: " + verdict_str(v.kind) + " (exhaustive, " +
                        std::to_string(v.proper_subspaces_total) + " proper subspaces)\n" +
                        cert_text(K, "violations", v.violations) +
                        cert_text(K, "equalities", v.equalities);
    } else {
        auto v = linstab_sampled(sys, sc.samples, sc.seed);
        out.result["verdict"] = verdict_json(K, v);
        for (const auto& c : v.violations) out.certificates.push_back(cert_json(K, c));
        if (v.kind == SystemVerdict::unstable) {
            out.status = "violations-found";
            out.exit_code = exit_violations;
        } else {
            out.status = "evidence-only";
            out.exit_code = exit_evidence_only;
        }
        out.text_body = "verdict: " + verdict_str(v.kind) + " (sampled)\n" +
                        cert_text(K, "violations", v.violations);
    }
    return out;
}

template <>
Outcome linstab_outcome<RatField>(const RatField& K, const CoherentSystem<RatField>& sys,
                                  const Scenario& sc) {
    Outcome out;
    auto v = linstab_sampled(sys, sc.samples, sc.seed);
    out.result["verdict"] = verdict_json(K, v);
    for (const auto& c : v.violations) out.certificates.push_back(cert_json(K, c));
    if (v.kind == SystemVerdict::unstable) {
        out.status = "violations-found";
        out.exit_code = exit_violations;
    } else {
        out.status = "evidence-only";
        out.exit_code = exit_evidence_only;
    }
    out.text_body = "verdict: " + verdict_str(v.kind) + " (sampled over the rationals)\n" +
                    cert_text(K, "violations", v.violations);
    return out;
}

template <class F>
Outcome cmd_linstab(const F& K, const Scenario& sc) {
    auto sys = build_system(K, sc);
    if (!is_generated(sys)) {
        Outcome out;
        out.result["system"] = system_json(K, sys);
        out.status = "check-failed";
        out.exit_code = exit_check_failed;
        out.result["note"] = "system is not generated; linear stability is undefined";
        out.text_body = "NOT GENERATED\n";
        return out;
    }
    Outcome out = linstab_outcome(K, sys, sc);
    out.result["system"] = system_json(K, sys);
    return out;
}

template <class F>
Outcome cmd_butler(const F& K, const Scenario& sc) {
    Outcome out;
    auto sys = build_system(K, sc);
    out.result["system"] = system_json(K, sys);
    auto kd = dual_span(sys);
    std::vector<std::size_t> idx = sc.subbundle;
    if (idx.empty()) idx = {0};
    for (auto i : idx)
        if (i >= kd.kernel.rank()) throw std::invalid_argument("subbundle index out of range");
    auto S = summand_inclusion(K, kd.kernel, idx);
    auto D = butler_from_subbundle(sys, S);
    auto A = audit_properties(D);

    out.result["M"] = splitting_json(D.M);
    out.result["S"] = splitting_json(D.S);
    out.result["F_S"] = splitting_json(D.F_S);
    out.result["W_dim"] = D.W_rows.rows;
    out.result["W"] = mat_json(K, D.W_canonical);
    json alpha = json::array();
    for (std::size_t i = 0; i < sys.E.rank(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < D.F_S.rank(); ++k) row.push_back(bf_str(D.alpha.at(i, k)));
        alpha.push_back(row);
    }
    out.result["alpha"] = alpha;
    auto strand = [](std::pair<long long, long long> p) {
        json j;
        j["rank"] = p.first;
        j["degree"] = p.second;
        return j;
    };
    out.result["N"] = strand(D.N_data);
    out.result["Q"] = strand(D.Q_data);
    out.result["T"] = strand(D.T_data);
    out.result["im_alpha"] = strand(D.im_alpha);
    json checklist;
    checklist["a_W_in_H0_FS"] = A.a_W_in_H0FS;
    checklist["b_FS_generated"] = A.b_generated;
    checklist["b_h0_FS_dual_zero"] = A.b_h0_dual_zero;
    checklist["c_alpha_nonzero"] = A.c_alpha_nonzero;
    checklist["d_applicable"] = A.d_applicable;
    checklist["d_deg_FS_le_deg_im_alpha"] = A.d_deg_bound;
    checklist["exactness"] = A.exactness;
    checklist["rederive_S"] = A.rederive_S;
    out.result["checklist"] = checklist;
    bool all = A.all_pass();
    out.result["all_pass"] = all;
    if (!all) {
        out.status = "check-failed";
        out.exit_code = exit_check_failed;
    }
    std::ostringstream txt;
    txt << "butler diagram: S=" << D.S.str() << "  W dim " << D.W_rows.rows << "  F_S=" << D.F_S.str()
        << "\nchecklist " << (all ? "all pass" : "FAILURES PRESENT") << "\n";
    out.text_body = txt.str();
    return out;
}

Outcome cmd_verify_518(const Scenario& sc) {
    Outcome out;
    const long long e = sc.param_e.value_or(3);
    const long long p = sc.prime.value_or(5);
    const long long samples = sc.samples;
    if (e < 3) throw std::invalid_argument("thm-5.18 needs e >= 3");
    GFpField K(static_cast<std::uint64_t>(p));
    SplittingType E({e, e + 1});

    SweepOptions opts;
    opts.max_n = sc.guard_max_n;
    opts.max_p = sc.guard_max_p;
    opts.threads = sc.threads;

    json rows = json::array();
    long long dsb_unstable = 0, generated_ok = 0, stable_count = 0;
    long long first_stable = -1;
    std::uint64_t expected_proper = 0;
    for (long long w = 1; w <= 3; ++w)
        expected_proper += to_u64(gaussian_binomial(4, w, p));

    std::ostringstream txt;
    txt << "bundle O(" << e << ")+O(" << e + 1 << ") over GF(" << p << "), " << samples
        << " seeded samples\n";
    for (long long i = 0; i < samples; ++i) {
        json row;
        row["sample"] = i;
        RandomSystemStats st;
        auto syso = random_generated_system(K, E, 4, derive_seed(sc.seed, "thm518-sample",
                                                                 static_cast<std::uint64_t>(i)),
                                            200, &st);
        row["rejected_nongenerated"] = st.rejected_nongenerated;
        if (!syso) {
            row["generated"] = false;
            rows.push_back(row);
            continue;
        }
        ++generated_ok;
        row["generated"] = true;
        auto kd = dual_span(*syso);
        row["dual_span"] = splitting_json(kd.kernel);
        auto sv = slope_stability_p1(kd.kernel);
        row["dual_span_stability"] = sv.str();
        bool dsb_ok = kd.kernel.rank() == 2 && kd.kernel.degree() == -(2 * e + 1) &&
                      sv.kind == BundleVerdict::unstable;
        if (dsb_ok) ++dsb_unstable;
        row["dsb_shape_ok"] = dsb_ok;
        auto v = linstab_exhaustive(*syso, opts);
        row["linstab"] = verdict_str(v.kind);
        row["proper_subspaces_total"] = v.proper_subspaces_total;
        if (v.proper_subspaces_total != expected_proper)
            throw internal_error("sweep coverage differs from the subspace count");
        if (v.kind == SystemVerdict::stable) {
            ++stable_count;
            if (first_stable < 0) first_stable = i;
        }
        rows.push_back(row);
    }
    out.result["samples"] = rows;
    out.result["generated_samples"] = generated_ok;
    out.result["dsb_unstable_count"] = dsb_unstable;
    out.result["linearly_stable_count"] = stable_count;
    out.result["first_linearly_stable_sample"] = first_stable;
    out.result["proper_subspaces_per_sweep"] = expected_proper;
    const bool pass = generated_ok == samples && dsb_unstable == samples && stable_count >= 1;
    if (!pass) {
        out.status = "check-failed";
        out.exit_code = exit_check_failed;
    }
    txt << "generated " << generated_ok << "/" << samples << ", dual span rank-2 odd-degree unstable "
        << dsb_unstable << "/" << samples << ", linearly stable " << stable_count << "/" << samples
        << " (sweep covers " << expected_proper << " proper subspaces)\n";
    out.text_body = txt.str();
    return out;
}

Outcome cmd_verify_511(const Scenario& sc) {
    Outcome out;
    const long long d = sc.param_d.value_or(5);
    const long long p = sc.prime.value_or(5);
    const long long samples = sc.samples;
    const long long d3 = sc.param_d3.value_or(gonality_lookup(GonalityProfile::p1(), 3));
    if (d < 1) throw std::invalid_argument("prop-5.11 needs d >= 1");
    GFpField K(static_cast<std::uint64_t>(p));
    SplittingType E({d / 2, d - d / 2});

    SweepOptions opts;
    opts.max_n = sc.guard_max_n;
    opts.max_p = sc.guard_max_p;
    opts.threads = sc.threads;

    json rows = json::array();
    long long violation_found = 0, consistent = 0, generated_ok = 0;
    for (long long i = 0; i < samples; ++i) {
        json row;
        row["sample"] = i;
        auto syso = random_generated_system(K, E, 4, derive_seed(sc.seed, "prop511-sample",
                                                                 static_cast<std::uint64_t>(i)),
                                            200);
        if (!syso) {
            row["generated"] = false;
            rows.push_back(row);
            continue;
        }
        ++generated_ok;
        row["generated"] = true;
        auto v = linstab_exhaustive(*syso, opts);
        row["linstab"] = verdict_str(v.kind);
        row["violations"] = v.violations.size();
        if (!v.violations.empty()) ++violation_found;
        auto rep = check_2d4_criterion(*syso, d3, v);
        row["hypothesis_d_lt_2d3"] = rep.hypothesis_holds;
        row["dsb"] = splitting_json(rep.dsb_type);
        row["consistent"] = rep.consistent;
        if (rep.consistent) ++consistent;
        rows.push_back(row);
    }
    out.result["samples"] = rows;
    out.result["generated_samples"] = generated_ok;
    out.result["violation_found_count"] = violation_found;
    out.result["consistent_count"] = consistent;
    out.result["d3"] = d3;
    out.result["hypothesis"] = d < 2 * d3;
    const bool pass = generated_ok == samples && violation_found == samples && consistent == samples;
    if (!pass) {
        out.status = "check-failed";
        out.exit_code = exit_check_failed;
    }
    out.text_body = "type (2," + std::to_string(d) + ",4) over GF(" + std::to_string(p) + "): " +
                    std::to_string(violation_found) + "/" + std::to_string(samples) +
                    " samples exhibit a violation certificate (forced when d < 2 d_3)\n";
    return out;
}

Outcome cmd_verify_43(const Scenario& sc) {
    Outcome out;
    const long long n = sc.param_n.value_or(2);
    const long long g = sc.param_g.value_or(10);
    const long long p = sc.prime.value_or(7);
    HyperellipticModel model(g, n);
    auto rep = hyperelliptic_pipeline(model, p, sc.seed, sc.samples);
    json steps = json::array();
    std::ostringstream txt;
    for (const auto& s : rep.steps) {
        json j;
        j["name"] = s.name;
        j["detail"] = s.detail;
        j["pass"] = s.pass;
        steps.push_back(j);
        txt << (s.pass ? "  [ok] " : "  [FAIL] ") << s.name << " :: " << s.detail << "\n";
    }
    out.result["steps"] = steps;
    out.result["kernel_dims"] = rep.kernel_dims;
    out.result["witness_sample"] = rep.witness_seed_index;
    out.result["all_pass"] = rep.all_pass;
    if (!rep.all_pass) {
        out.status = "check-failed";
        out.exit_code = exit_check_failed;
    }
    out.text_body = txt.str();
    return out;
}

Outcome cmd_audit_all(const Scenario&) {
    Outcome out;
    auto res = audit_all();
    std::ostringstream txt;
    for (const auto& r : res.showcase) {
        out.audit_rows.push_back(audit_row_json(r));
        txt << audit_row_text(r) << "\n";
    }
    json grids = json::array();
    txt << "grids:\n";
    for (const auto& g : res.grids) {
        json j;
        j["name"] = g.name;
        j["tuples"] = g.tuples;
        j["rows"] = g.rows;
        j["unexpected_failures"] = g.unexpected_failures;
        j["discrepancy_rows"] = g.discrepancy_rows;
        j["missing_discrepancies"] = g.missing_discrepancies;
        j["green"] = g.green();
        grids.push_back(j);
        txt << "  " << g.name << ": " << g.tuples << " tuples, " << g.rows << " rows, "
            << g.discrepancy_rows << " flagged discrepancy rows, " << g.unexpected_failures
            << " unexpected failures -> " << (g.green() ? "green" : "RED") << "\n";
    }
    out.result["grids"] = grids;
    out.result["green"] = res.green;
    if (!res.green) {
        out.status = "check-failed";
        out.exit_code = exit_check_failed;
    }
    out.text_body = txt.str();
    return out;
}

Report assemble(const Scenario& sc, Outcome&& out) {
    Report rep;
    rep.json["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    rep.json["command"] = sc.command + (sc.verify_id.empty() ? "" : " " + sc.verify_id);
    rep.json["scenario"] = {{"canonical", sc.canonical_text()}, {"raw", sc.raw_lines}};
    rep.json["seeds"] = {{"master", sc.seed}};
    rep.json["status"] = out.status;
    rep.json["exit_code"] = out.exit_code;
    rep.json["result"] = std::move(out.result);
    rep.json["certificates"] = std::move(out.certificates);
    rep.json["audit_rows"] = std::move(out.audit_rows);
    rep.json["timing_ms"] = nullptr;  // wall-clock never enters the report files

    std::ostringstream txt;
    txt << "# " << kToolName << " " << kToolVersion << "\n";
    txt << "command: " << rep.json["command"].get<std::string>() << "\n";
    txt << "status: " << out.status << " (exit " << out.exit_code << ")\n";
    txt << out.text_body;
    rep.text = txt.str();
    rep.exit_code = out.exit_code;
    return rep;
}

}  // namespace

Report run_scenario(const Scenario& sc) {
    try {
        Outcome out;
        if (sc.command == "audit-all") {
            out = cmd_audit_all(sc);
        } else if (sc.command == "paper-verify") {
            if (sc.verify_id == "thm-5.18") out = cmd_verify_518(sc);
            else if (sc.verify_id == "prop-5.11") out = cmd_verify_511(sc);
            else out = cmd_verify_43(sc);
        } else if (sc.field.kind == FieldSpec::Kind::prime_field) {
            GFpField K(sc.field.p);
            if (sc.command == "dsb") out = cmd_dsb(K, sc);
            else if (sc.command == "linstab") out = cmd_linstab(K, sc);
            else out = cmd_butler(K, sc);
        } else {
            RatField K;
            if (sc.command == "dsb") out = cmd_dsb(K, sc);
            else if (sc.command == "linstab") out = cmd_linstab(K, sc);
            else out = cmd_butler(K, sc);
        }
        return assemble(sc, std::move(out));
    } catch (const resource_guard_error& e) {
        Outcome out;
        out.status = "refused";
        out.exit_code = exit_guard;
        out.result["error"] = e.what();
        out.text_body = std::string("refused: ") + e.what() + "\n";
        return assemble(sc, std::move(out));
    } catch (const internal_error& e) {
        Outcome out;
        out.status = "internal-error";
        out.exit_code = exit_internal;
        out.result["error"] = e.what();
        out.text_body = std::string("internal error: ") + e.what() + "\n";
        return assemble(sc, std::move(out));
    } catch (const std::invalid_argument& e) {
        Outcome out;
        out.status = "invalid-input";
        out.exit_code = exit_usage;
        out.result["error"] = e.what();
        out.text_body = std::string("invalid input: ") + e.what() + "\n";
        return assemble(sc, std::move(out));
    }
}

}  // namespace dsb
