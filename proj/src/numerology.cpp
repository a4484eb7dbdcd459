#include "dsb/numerology.hpp"

#include <stdexcept>

#include "dsb/coherent.hpp"
#include "dsb/fields.hpp"

namespace dsb {

namespace {

AuditRow row(std::string name, std::string params, Rat lhs, AuditRow::Rel rel, Rat rhs,
             std::string note = "", bool discrepancy = false) {
    return AuditRow{std::move(name), std::move(params), std::move(lhs), std::move(rhs), rel,
                    std::move(note), discrepancy};
}

std::string ps(std::initializer_list<std::pair<const char*, long long>> kv) {
    std::string out;
    for (const auto& [k, v] : kv) {
        if (!out.empty()) out += " ";
        out += std::string(k) + "=" + std::to_string(v);
    }
    return out;
}

}  // namespace

long long riemann_roch(long long r, long long d, long long g) {
    if (r < 1) throw std::invalid_argument("riemann_roch: rank must be >= 1");
    return d + r * (1 - g);
}

// Genus-2 family with a canonical destabilizing subsystem: the reduced slope
// of the canonical subsystem is 2, while the full system's reduced slope
// d/(d-2r-a) exceeds 2 exactly on the admissible window.
std::vector<AuditRow> exa_one_audit(long long r, long long a, long long d) {
    if (r < 1 || a < 1) throw std::invalid_argument("exa_one_audit: r and a must be positive");
    if (!(3 * r + 2 * a < d && d < 4 * r + 2 * a))
        throw std::invalid_argument("exa_one_audit: d outside the window (3r+2a, 4r+2a)");
    const long long m = d - 2 * r - a;
    const std::string P = ps({{"r", r}, {"a", a}, {"d", d}});
    std::vector<AuditRow> rows;
    rows.push_back(row("window-lower", P, rat_of(3 * r + 2 * a), AuditRow::Rel::lt, rat_of(d)));
    rows.push_back(row("window-upper", P, rat_of(d), AuditRow::Rel::lt, rat_of(4 * r + 2 * a)));
    rows.push_back(row("m-definition", P, rat_of(m), AuditRow::Rel::eq, rat_of(d - 2 * r - a),
                       "m = d - 2r - a"));
    rows.push_back(row("canonical-reduced-slope", P, make_rat(2, 2 - 1), AuditRow::Rel::eq, rat_of(2),
                       "deg K / (h0(K) - rk K) at genus 2"));
    rows.push_back(row("system-reduced-slope-exceeds-2", P, make_rat(d, m), AuditRow::Rel::gt,
                       rat_of(2), "equivalent to d < 4r + 2a"));
    rows.push_back(row("dsb-slope-print-variant", P, make_rat(-d, d - 2 * r - a), AuditRow::Rel::eq,
                       make_rat(-d, d - 2 * r - 2 * a),
                       "printed denominator d-2r-2a conflicts with m = d-2r-a; both variants kept",
                       /*discrepancy=*/true));
    rows.push_back(row("not-linearly-semistable", P, rat_of(2), AuditRow::Rel::lt, make_rat(d, m),
                       "canonical subsystem beats the system's reduced slope"));
    return rows;
}

// Strictly semistable ambient bundle: a subbundle of equal slope gives an
// exact tie between the reduced slopes, so the system is at best strictly
// semistable.
std::vector<AuditRow> exa_two_audit(long long r, long long d, long long g, long long r_prime) {
    if (r < 1 || r_prime < 1 || r_prime > r)
        throw std::invalid_argument("exa_two_audit: need 1 <= r' <= r");
    if (!(d > 2 * r * g - r)) throw std::invalid_argument("exa_two_audit: need d > 2rg - r");
    if ((d * r_prime) % r != 0)
        throw std::invalid_argument("exa_two_audit: d' = d r'/r is not integral");
    const long long d_prime = d * r_prime / r;
    const std::string P = ps({{"r", r}, {"d", d}, {"g", g}, {"r'", r_prime}});
    std::vector<AuditRow> rows;
    rows.push_back(row("degree-bound", P, rat_of(d), AuditRow::Rel::gt, rat_of(2 * r * g - r)));
    rows.push_back(row("h0-E", P, rat_of(riemann_roch(r, d, g)), AuditRow::Rel::eq,
                       rat_of(d + r * (1 - g)), "h1 = 0 in this range"));
    rows.push_back(row("h0-E'", P, rat_of(riemann_roch(r_prime, d_prime, g)), AuditRow::Rel::eq,
                       rat_of(d_prime + r_prime * (1 - g))));
    const Rat sub = make_rat(d_prime, d_prime - r_prime * (g - 1) - r_prime);
    const Rat full = make_rat(d, d - r * g);
    rows.push_back(row("subsystem-reduced-slope", P, sub, AuditRow::Rel::eq,
                       make_rat(d_prime, d_prime - r_prime * g)));
    rows.push_back(row("reduced-slope-tie", P, sub, AuditRow::Rel::eq, full,
                       "equal slopes force at best strict semistability"));
    return rows;
}

// Semistable ambient bundle: a generated subsystem of type (s, e, m) obeys
// the two displayed bounds, which chain into the reduced-slope comparison.
std::vector<AuditRow> exa_three_audit(long long r, long long d, long long n, long long s,
                                      long long e, long long m) {
    if (e <= 0) throw std::invalid_argument("exa_three_audit: need e > 0");
    if (m <= s) throw std::invalid_argument("exa_three_audit: need m > s");
    if (n <= r || r < 1 || s < 1 || d < 1)
        throw std::invalid_argument("exa_three_audit: need n > r >= 1, s >= 1, d >= 1");
    const std::string P = ps({{"r", r}, {"d", d}, {"n", n}, {"s", s}, {"e", e}, {"m", m}});
    std::vector<AuditRow> rows;
    const Rat lhs5 = make_rat(s, r * (m - s));
    const Rat rhs5 = make_rat(1, n - r);
    const Rat lhs6 = rat_of(e);
    const Rat rhs6 = make_rat(d * s, r);
    // the two displayed bounds are hypotheses: record the measured relation,
    // so these rows document rather than claim
    auto measured = [](const Rat& a, const Rat& b) {
        int c = cmp(a, b);
        return c < 0 ? AuditRow::Rel::lt : (c == 0 ? AuditRow::Rel::eq : AuditRow::Rel::gt);
    };
    const bool hyp5 = cmp(lhs5, rhs5) <= 0, hyp6 = cmp(lhs6, rhs6) <= 0;
    rows.push_back(row("rank-ratio-bound", P, lhs5, measured(lhs5, rhs5), rhs5,
                       std::string("hypothesis s/(r(m-s)) <= 1/(n-r) ") +
                           (hyp5 ? "holds" : "fails")));
    rows.push_back(row("semistable-degree-bound", P, lhs6, measured(lhs6, rhs6), rhs6,
                       std::string("hypothesis e <= ds/r ") + (hyp6 ? "holds" : "fails")));
    const bool applicable = hyp5 && hyp6;
    if (!applicable) {
        rows.push_back(row("inapplicable", P, rat_of(0), AuditRow::Rel::eq, rat_of(0),
                           "a hypothesis fails; no conclusion is drawn"));
        return rows;
    }
    const Rat concl_lhs = make_rat(e, m - s);
    const Rat concl_rhs = make_rat(d, n - r);
    rows.push_back(row("reduced-slope-conclusion", P, concl_lhs, AuditRow::Rel::le, concl_rhs,
                       "e/(m-s) <= d/(n-r)"));
    const bool strict = cmp(lhs5, rhs5) < 0 || cmp(lhs6, rhs6) < 0;
    if (strict)
        rows.push_back(row("strictness-propagates", P, concl_lhs, AuditRow::Rel::lt, concl_rhs,
                           "a strict hypothesis forces a strict conclusion"));
    else
        rows.push_back(row("at-best-strictly-semistable", P, concl_lhs, AuditRow::Rel::eq, concl_rhs,
                           "all bounds tight: exact tie"));
    return rows;
}

// Dimension counts behind the genericity argument over an elliptic curve for
// the type (2, 7, 4) system.
std::vector<AuditRow> elliptic_dims_audit(long long e) {
    if (e != 2 && e != 3) throw std::invalid_argument("elliptic_dims_audit: e must be 2 or 3");
    const std::string P = ps({{"e", e}});
    std::vector<AuditRow> rows;
    rows.push_back(row("quot1-dim", P, rat_of(riemann_roch(1, 7 - 2 * e, 1)), AuditRow::Rel::eq,
                       rat_of(7 - 2 * e), "chi of Hom(M, E/M) at genus 1"));
    rows.push_back(row("sigma-i-dim", P, rat_of(2 * (e - 2) + 2 * (5 - 2)), AuditRow::Rel::eq,
                       rat_of(2 * e + 2)));
    rows.push_back(row("union-bound", P, rat_of((2 * e + 2) + (7 - 2 * e)), AuditRow::Rel::eq,
                       rat_of(9)));
    rows.push_back(row("grassmannian-dim", P, rat_of(4 * (7 - 4)), AuditRow::Rel::eq, rat_of(12)));
    rows.push_back(row("union-lt-grassmannian", P, rat_of(9), AuditRow::Rel::lt, rat_of(12)));
    rows.push_back(row("h0-F-nonsplit", P, rat_of(riemann_roch(2, 3, 1)), AuditRow::Rel::eq,
                       rat_of(3), "rank-2 degree-3 nonsplit case; h1 = 0"));
    rows.push_back(row("quot04-dim", P, rat_of(2 * 4), AuditRow::Rel::eq, rat_of(8)));
    rows.push_back(row("sigma-j-plus-quot", P, rat_of(3 + 8), AuditRow::Rel::eq, rat_of(11)));
    rows.push_back(row("rank2-union-lt-grassmannian", P, rat_of(11), AuditRow::Rel::lt, rat_of(12)));
    return rows;
}

// Dimension counts for the rank-two family on the projective line. The
// printed first Quot dimension disagrees with the Euler characteristic by 4;
// the row is flagged and both union-bound chains are reported.
std::vector<AuditRow> counterex_dims_audit(long long e, long long t) {
    if (e < 3) throw std::invalid_argument("counterex_dims_audit: e must be >= 3");
    if (t < 1 || t > e + 1) throw std::invalid_argument("counterex_dims_audit: need 1 <= t <= e+1");
    const std::string P = ps({{"e", e}, {"t", t}});
    std::vector<AuditRow> rows;
    const long long chi = riemann_roch(1, 2 * e + 1 - 2 * t, 0);  // = 2e + 2 - 2t
    const long long printed = 2 * (e - t - 1);
    rows.push_back(row("quot1-dim-printed", P, rat_of(printed), AuditRow::Rel::eq, rat_of(printed),
                       "printed value, recorded verbatim"));
    rows.push_back(row("quot1-chi-recomputed", P, rat_of(chi), AuditRow::Rel::eq,
                       rat_of(2 * e + 2 - 2 * t), "chi(O(2e+1-2t)) on the line"));
    rows.push_back(row("quot1-chi-discrepancy", P, rat_of(printed), AuditRow::Rel::eq, rat_of(chi),
                       "printed 2(e-t-1) vs recomputed 2e+2-2t: off by 4 for every (e,t)",
                       /*discrepancy=*/true));
    rows.push_back(row("sigma-j-dim", P, rat_of(2 * (2 * e + t - 4)), AuditRow::Rel::eq,
                       rat_of(2 * (2 * e + t - 4)), "printed bound, recorded verbatim"));
    rows.push_back(row("union-bound-corrected-chi", P, rat_of(2 * (2 * e + t - 4) + chi),
                       AuditRow::Rel::eq, rat_of(6 * e - 6),
                       "printed sigma bound + recomputed chi reproduces 6e-6 exactly"));
    rows.push_back(row("union-bound-printed-chi", P, rat_of(2 * (2 * e + t - 4) + printed),
                       AuditRow::Rel::le, rat_of(6 * e - 6),
                       "with the printed chi the union bound only tightens"));
    rows.push_back(row("grassmannian-dim", P, rat_of(4 * (2 * e + 3 - 4)), AuditRow::Rel::eq,
                       rat_of(8 * e - 4)));
    rows.push_back(row("union-lt-grassmannian", P, rat_of(6 * e - 6), AuditRow::Rel::lt,
                       rat_of(8 * e - 4)));
    rows.push_back(row("h0-F", P, rat_of(e + 2), AuditRow::Rel::eq, rat_of(e + 2),
                       "generically generated rank-2 degree-e splitting"));
    rows.push_back(row("sigma-F-dim", P, rat_of(3 * ((e + 2) - 3) + (2 * e - 1)), AuditRow::Rel::eq,
                       rat_of(5 * e - 4)));
    rows.push_back(row("quot0-dim", P, rat_of(2 * (e + 1)), AuditRow::Rel::eq, rat_of(2 * e + 2)));
    rows.push_back(row("sigma-F-chain", P, rat_of((5 * e - 4) + 2 * (e + 1)), AuditRow::Rel::eq,
                       rat_of(7 * e - 2)));
    rows.push_back(row("sigma-F-lt-grassmannian", P, rat_of(7 * e - 2), AuditRow::Rel::lt,
                       rat_of(8 * e - 4), "strict exactly when e > 2"));
    return rows;
}

// Bielliptic instantiation: d_3 = 8 and the degree-14 pullback satisfies the
// rank-two criterion's hypothesis.
std::vector<AuditRow> bielliptic_audit() {
    std::vector<AuditRow> rows;
    rows.push_back(row("d3-bielliptic", "", rat_of(2 * 3 + 2), AuditRow::Rel::eq, rat_of(8)));
    NumericalSystem base{2, 7, 4, 1, {}, {}, {}, {}, {}, {}, {}, {}};
    auto lifted = pullback_numeric(base, 2);
    rows.push_back(row("pullback-type", "k=2", rat_of(lifted.d), AuditRow::Rel::eq, rat_of(14),
                       "(2,7,4) pulled back along a double cover"));
    rows.push_back(row("criterion-hypothesis", "", rat_of(14), AuditRow::Rel::lt, rat_of(2 * 8),
                       "deg f*E = 14 < 2 d_3"));
    return rows;
}

GonalityProfile GonalityProfile::p1(std::size_t len) {
    GonalityProfile g{"p1", {}};
    for (std::size_t k = 1; k <= len; ++k) g.entries.push_back(static_cast<long long>(k));
    return g;
}

GonalityProfile GonalityProfile::hyperelliptic(std::size_t len) {
    GonalityProfile g{"hyperelliptic", {}};
    for (std::size_t k = 1; k <= len; ++k) g.entries.push_back(2 * static_cast<long long>(k));
    return g;
}

GonalityProfile GonalityProfile::bielliptic(std::size_t len) {
    // gonality 4; from k = 2 on, pullbacks of degree-(k+1) classes give 2k+2
    GonalityProfile g{"bielliptic", {4}};
    for (std::size_t k = 2; k <= len; ++k) g.entries.push_back(2 * static_cast<long long>(k) + 2);
    return g;
}

GonalityProfile GonalityProfile::custom(std::vector<long long> entries) {
    GonalityProfile g{"custom", std::move(entries)};
    long long prev = 0;
    for (auto v : g.entries) {
        if (v <= 0 || v < prev)
            throw std::invalid_argument("gonality profile must be positive and nondecreasing");
        prev = v;
    }
    return g;
}

long long gonality_lookup(const GonalityProfile& profile, std::size_t k) {
    if (k < 1 || k > profile.entries.size())
        throw std::out_of_range("gonality index outside the profile");
    return profile.entries[k - 1];
}

namespace {

void tally(GridSummary& g, const std::vector<AuditRow>& rows) {
    ++g.tuples;
    for (const auto& r : rows) {
        ++g.rows;
        if (r.discrepancy) {
            ++g.discrepancy_rows;
            if (r.pass()) ++g.missing_discrepancies;
        } else if (!r.pass()) {
            ++g.unexpected_failures;
        }
    }
}

}  // namespace

GridSummary run_exa_one_grid(long long max_r, long long max_a) {
    GridSummary g{"exa-one", 0, 0, 0, 0, 0};
    for (long long r = 1; r <= max_r; ++r)
        for (long long a = 1; a <= max_a; ++a)
            for (long long d = 3 * r + 2 * a + 1; d < 4 * r + 2 * a; ++d)
                tally(g, exa_one_audit(r, a, d));
    return g;
}

GridSummary run_exa_two_grid(long long max_g, long long max_r) {
    GridSummary g{"exa-two", 0, 0, 0, 0, 0};
    for (long long gg = 2; gg <= max_g; ++gg)
        for (long long r = 2; r <= max_r; ++r)
            for (long long rp = 1; rp < r; ++rp)
                for (long long d = 2 * r * gg - r + 1; d <= 2 * r * gg + 2 * r; ++d) {
                    if ((d * rp) % r != 0) continue;
                    tally(g, exa_two_audit(r, d, gg, rp));
                }
    return g;
}

GridSummary run_exa_three_grid(long long limit) {
    GridSummary g{"exa-three", 0, 0, 0, 0, 0};
    for (long long r = 1; r < limit; ++r)
        for (long long n = r + 1; n <= limit; ++n)
            for (long long d = 1; d <= limit; ++d)
                for (long long s = 1; s <= limit; ++s)
                    for (long long m = s + 1; m <= limit; ++m)
                        for (long long e = 1; e <= limit; ++e)
                            tally(g, exa_three_audit(r, d, n, s, e, m));
    return g;
}

GridSummary run_counterex_grid(long long e_lo, long long e_hi) {
    GridSummary g{"counterex-dims", 0, 0, 0, 0, 0};
    for (long long e = e_lo; e <= e_hi; ++e)
        for (long long t = 1; t <= e + 1; ++t) {
            auto rows = counterex_dims_audit(e, t);
            long long before = g.discrepancy_rows;
            tally(g, rows);
            if (g.discrepancy_rows != before + 1) ++g.unexpected_failures;  // exactly one per (e,t)
        }
    return g;
}

GridSummary run_elliptic_grid() {
    GridSummary g{"elliptic-dims", 0, 0, 0, 0, 0};
    for (long long e = 2; e <= 3; ++e) tally(g, elliptic_dims_audit(e));
    return g;
}

AuditAllResult audit_all() {
    AuditAllResult out;
    auto add = [&out](const std::vector<AuditRow>& rows) {
        for (const auto& r : rows) out.showcase.push_back(r);
    };
    add(exa_one_audit(2, 1, 9));
    add(exa_two_audit(2, 10, 2, 1));
    add(exa_three_audit(2, 8, 5, 1, 4, 3));
    add(elliptic_dims_audit(2));
    add(elliptic_dims_audit(3));
    add(counterex_dims_audit(3, 1));
    add(bielliptic_audit());
    {
        std::vector<AuditRow> gon;
        gon.push_back(AuditRow{"gonality-p1-d3", "k=3", rat_of(gonality_lookup(GonalityProfile::p1(), 3)),
                               rat_of(3), AuditRow::Rel::eq, "", false});
        gon.push_back(AuditRow{"gonality-bielliptic-d3", "k=3",
                               rat_of(gonality_lookup(GonalityProfile::bielliptic(), 3)), rat_of(8),
                               AuditRow::Rel::eq, "", false});
        gon.push_back(AuditRow{"gonality-hyperelliptic-d1", "k=1",
                               rat_of(gonality_lookup(GonalityProfile::hyperelliptic(), 1)), rat_of(2),
                               AuditRow::Rel::eq, "", false});
        add(gon);
    }
    out.grids.push_back(run_exa_one_grid());
    out.grids.push_back(run_exa_two_grid());
    out.grids.push_back(run_exa_three_grid());
    out.grids.push_back(run_elliptic_grid());
    out.grids.push_back(run_counterex_grid());
    out.green = true;
    for (const auto& r : out.showcase) {
        if (r.discrepancy) {
            if (r.pass()) out.green = false;
        } else if (!r.pass()) {
            out.green = false;
        }
    }
    for (const auto& g : out.grids) out.green = out.green && g.green();
    return out;
}

}  // namespace dsb
