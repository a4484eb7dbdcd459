#ifndef DSB_STABILITY_HPP
#define DSB_STABILITY_HPP

#include <future>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dsb/coherent.hpp"

namespace dsb {

struct resource_guard_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rat slope(long long r, long long d) {
    if (r < 1) throw std::domain_error("slope needs rank >= 1");
    return make_rat(d, r);
}

inline Rat mu_alpha(long long r, long long d, long long n, const Rat& alpha) {
    if (r < 1) throw std::domain_error("alpha-slope needs rank >= 1");
    if (sgn(alpha) < 0) throw std::domain_error("alpha must be >= 0");
    return (rat_of(d) + alpha * rat_of(n)) / rat_of(r);
}

// Slope (semi)stability of a split bundle on P^1: only line bundles are
// stable; higher rank is semistable exactly when all twists agree, and
// otherwise the top twist is a maximal destabilizing line subbundle.
enum class BundleVerdict { stable, strictly_semistable, unstable };

struct SlopeVerdict {
    BundleVerdict kind;
    std::optional<long long> destabilizer;  // twist of a maximal-degree summand

    std::string str() const {
        switch (kind) {
            case BundleVerdict::stable: return "stable";
            case BundleVerdict::strictly_semistable: return "strictly-semistable";
            default: return "unstable";
        }
    }
};

inline SlopeVerdict slope_stability_p1(const SplittingType& T) {
    if (T.empty()) throw std::domain_error("stability of the zero bundle");
    if (T.rank() == 1) return {BundleVerdict::stable, std::nullopt};
    if (T.degs.front() == T.degs.back()) return {BundleVerdict::strictly_semistable, std::nullopt};
    return {BundleVerdict::unstable, T.degs.front()};
}

inline void check_verdict_against_subbundles(const SplittingType& T) {
    // brute force over sub-splitting degrees; used by tests for rank <= 3
    auto v = slope_stability_p1(T);
    bool any_ge = false, any_gt = false;
    for (std::size_t take = 1; take < T.rank(); ++take) {
        // the maximal-slope subbundle of given rank is the sum of the top twists
        long long dsum = 0;
        for (std::size_t i = 0; i < take; ++i) dsum += T.degs[i];
        Rat sub = make_rat(dsum, static_cast<long long>(take));
        if (sub > T.slope()) any_gt = true;
        if (sub >= T.slope()) any_ge = true;
    }
    bool ok = (v.kind == BundleVerdict::unstable) == any_gt;
    if (T.rank() > 1) ok = ok && ((v.kind == BundleVerdict::strictly_semistable) == (!any_gt && any_ge));
    if (!ok) throw internal_error("slope verdict disagrees with subbundle sweep");
}

// ---------------------------------------------------------------------------
// Linear (semi)stability certificates.

struct CertCore {
    long long dim_W = 0;
    long long rank_EW = 0;
    long long deg_EW = 0;
    Rat lhs;  // deg(E_W) / (dim W - rk E_W)
    Rat rhs;  // d / (n - r)
    char relation = '?';  // '<' violation, '=', '>'
};

inline char rat_relation(const Rat& a, const Rat& b) {
    int c = cmp(a, b);
    return c < 0 ? '<' : (c == 0 ? '=' : '>');
}

inline CertCore pullback_certificate(CertCore c, long long k) {
    if (k < 1) throw std::invalid_argument("pullback degree must be >= 1");
    c.deg_EW *= k;
    c.lhs *= rat_of(k);
    c.rhs *= rat_of(k);
    char rel = rat_relation(c.lhs, c.rhs);
    if (rel != c.relation) throw internal_error("pullback changed a certificate relation");
    return c;
}

template <class F>
struct LinStabCertificate {
    Mat<F> W;  // canonical echelon coordinates in the section basis
    SplittingType kernel;  // splitting type of M_{W, E_W}
    CertCore core;
};

// gcd degree of the (target-rank) maximal minors of a map with full target
// rank; measures the torsion of E/E_W.
template <class F>
long long minor_gcd_full_rank(const BundleMap<F>& m) {
    // reuse the source-rank minor machinery on the transpose
    return injection_minor_gcd_degree(bm_transpose_dual(m));
}

// Exact check of one subspace. Returns nullopt when W generates a trivial
// subsheaf (the definition excludes those). The certificate numerator equals
// the dual slope of M_{W,E_W} by construction; it is additionally
// cross-checked through an independent degree computation whenever the image
// has rank one or full rank.
template <class F>
std::optional<LinStabCertificate<F>> linstab_check_one(const CoherentSystem<F>& sys,
                                                       const Mat<F>& W_coords,
                                                       bool cross_check = true) {
    auto rep = subsheaf_generated(sys, W_coords);
    if (rep.trivial) return std::nullopt;

    const long long w = static_cast<long long>(rep.W.rows);
    CertCore core;
    core.dim_W = w;
    core.rank_EW = rep.rank_EW;
    core.deg_EW = rep.deg_EW;
    core.lhs = make_rat(rep.deg_EW, w - rep.rank_EW);
    core.rhs = make_rat(sys.degree(), static_cast<long long>(sys.n) - sys.rank());
    core.relation = rat_relation(core.lhs, core.rhs);

    if (cross_check) {
        auto map = restricted_eval(sys, rep.W);
        if (rep.rank_EW == 1) {
            if (rank_one_image_degree(map) != rep.deg_EW)
                throw internal_error("rank-one image degree cross-check failed");
        } else if (rep.rank_EW == sys.rank()) {
            if (sys.degree() - minor_gcd_full_rank(map) != rep.deg_EW)
                throw internal_error("full-rank image degree cross-check failed");
        }
    }
    return LinStabCertificate<F>{rep.W, rep.kernel, core};
}

// ---------------------------------------------------------------------------
// Enumeration of subspaces of GF(p)^n by reduced row echelon representatives.

inline Int gaussian_binomial(long long n, long long w, long long p) {
    if (w < 0 || w > n) return Int(0);
    Int num(1), den(1);
    for (long long i = 0; i < w; ++i) {
        Int pn, pd;
        mpz_ui_pow_ui(pn.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(n - i));
        mpz_ui_pow_ui(pd.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(i + 1));
        num *= pn - 1;
        den *= pd - 1;
    }
    Int q = num / den;
    if (q * den != num) throw internal_error("gaussian binomial division not exact");
    return q;
}

// Emits each w-dimensional subspace of GF(p)^n exactly once, as the unique
// reduced row echelon basis matrix. Subspaces are indexed 0..total-1: pivot
// column sets iterate in lexicographic order and the free entries run as a
// base-p counter, so any index range can be handed to a worker independently.
struct GrassmannEnumerator {
    long long n, w, p;

    struct Combo {
        std::vector<long long> pivots;
        std::vector<std::pair<long long, long long>> free_pos;  // (row, col)
        Int count;  // p^{#free_pos}
    };
    std::vector<Combo> combos;
    Int total_count{0};

    GrassmannEnumerator(long long n_, long long w_, long long p_) : n(n_), w(w_), p(p_) {
        if (w < 0 || w > n) throw std::invalid_argument("grassmann enumerator: bad dimension");
        std::vector<long long> piv(w);
        for (long long i = 0; i < w; ++i) piv[i] = i;
        while (true) {
            Combo c;
            c.pivots = piv;
            for (long long row = 0; row < w; ++row)
                for (long long col = piv[row] + 1; col < n; ++col) {
                    bool is_pivot_col = false;
                    for (long long q = 0; q < w; ++q)
                        if (piv[q] == col) is_pivot_col = true;
                    if (!is_pivot_col) c.free_pos.emplace_back(row, col);
                }
            Int cnt;
            mpz_ui_pow_ui(cnt.get_mpz_t(), static_cast<unsigned long>(p),
                          static_cast<unsigned long>(c.free_pos.size()));
            c.count = cnt;
            total_count += cnt;
            combos.push_back(std::move(c));
            long long pos = w - 1;
            while (pos >= 0 && piv[pos] == n - w + pos) --pos;
            if (pos < 0) break;
            ++piv[pos];
            for (long long q = pos + 1; q < w; ++q) piv[q] = piv[q - 1] + 1;
        }
    }

    Int total() const { return total_count; }
    std::uint64_t total_u64() const { return to_u64(total_count); }

    template <class F>
    Mat<F> at(const F& K, std::uint64_t index) const {
        Int idx = Int(static_cast<unsigned long>(index));
        const Int P = int_of(p);
        for (const auto& c : combos) {
            if (idx >= c.count) {
                idx -= c.count;
                continue;
            }
            Mat<F> M(K, w, n);
            for (long long row = 0; row < w; ++row) M.at(row, c.pivots[row]) = K.one();
            Int rem = idx;
            for (const auto& [row, col] : c.free_pos) {
                Int digit = rem % P;
                rem /= P;
                M.at(row, col) = K.from_int(digit.get_si());
            }
            return M;
        }
        throw std::out_of_range("grassmann enumerator index out of range");
    }
};

// ---------------------------------------------------------------------------
// Verdicts.

enum class SystemVerdict { stable, strictly_semistable, unstable, evidence_only };

inline std::string verdict_str(SystemVerdict v) {
    switch (v) {
        case SystemVerdict::stable: return "linearly-stable";
        case SystemVerdict::strictly_semistable: return "linearly-strictly-semistable";
        case SystemVerdict::unstable: return "linearly-unstable";
        default: return "evidence-only";
    }
}

struct DimCount {
    std::uint64_t swept = 0;
    std::uint64_t trivial_skipped = 0;
    std::uint64_t strict_ok = 0;
};

template <class F>
struct StabilityVerdict {
    SystemVerdict kind = SystemVerdict::evidence_only;
    bool exhaustive = false;
    std::vector<LinStabCertificate<F>> violations;
    std::vector<LinStabCertificate<F>> equalities;
    std::map<long long, DimCount> per_dim;       // dims actually swept (2..n-1)
    std::uint64_t dim1_trivial = 0;              // counted, not swept: always trivial
    std::uint64_t proper_subspaces_total = 0;    // dims 1..n-1
    long long samples_tried = 0;                 // sampled mode only
    std::string note;
};

struct SweepOptions {
    long long max_n = 6;   // resource guards, configurable
    long long max_p = 13;
    int threads = 1;
};

namespace detail {

template <class F>
void canonical_sort(std::vector<LinStabCertificate<F>>& certs, const F& K) {
    std::sort(certs.begin(), certs.end(), [&](const auto& a, const auto& b) {
        if (a.core.dim_W != b.core.dim_W) return a.core.dim_W < b.core.dim_W;
        const auto& A = a.W.a;
        const auto& B = b.W.a;
        for (std::size_t i = 0; i < std::min(A.size(), B.size()); ++i) {
            if (K.is_zero(K.sub(A[i], B[i]))) continue;
            return A[i] < B[i];
        }
        return A.size() < B.size();
    });
    certs.erase(std::unique(certs.begin(), certs.end(),
                            [&](const auto& a, const auto& b) {
                                return a.core.dim_W == b.core.dim_W && mat_equal(K, a.W, b.W);
                            }),
                certs.end());
}

template <class F>
SystemVerdict classify(const StabilityVerdict<F>& v) {
    if (!v.violations.empty()) return SystemVerdict::unstable;
    if (!v.exhaustive) return SystemVerdict::evidence_only;
    return v.equalities.empty() ? SystemVerdict::stable : SystemVerdict::strictly_semistable;
}

}  // namespace detail

// Exhaustive decision over a prime field: sweeps every subspace W of V with
// 2 <= dim W <= n-1. Dimension-1 subspaces always generate a trivial line
// (one independent section spans O); they are counted, not swept. W = V gives
// equality by definition and is excluded from the verdict.
template <class GF = GFpField>
StabilityVerdict<GF> linstab_exhaustive(const CoherentSystem<GF>& sys, SweepOptions opts = {}) {
    const GF& K = sys.field;
    const long long n = static_cast<long long>(sys.n);
    if (!is_generated(sys))
        throw std::invalid_argument("linear stability sweep needs a generated system");
    if (n > opts.max_n)
        throw resource_guard_error("resource guard: n exceeds the configured sweep limit");
    if (static_cast<long long>(K.p) > opts.max_p)
        throw resource_guard_error("resource guard: p exceeds the configured sweep limit");

    StabilityVerdict<GF> out;
    out.exhaustive = true;
    out.note = "verdict is about the GF(" + std::to_string(K.p) +
               ") system as given; no lift to characteristic zero is claimed";
    out.dim1_trivial = to_u64(gaussian_binomial(n, 1, static_cast<long long>(K.p)));
    out.proper_subspaces_total = out.dim1_trivial;

    for (long long w = 2; w <= n - 1; ++w) {
        GrassmannEnumerator en(n, w, static_cast<long long>(K.p));
        const std::uint64_t total = en.total_u64();
        out.proper_subspaces_total += total;
        DimCount dc;

        auto sweep_range = [&](std::uint64_t lo, std::uint64_t hi) {
            struct Part {
                DimCount dc;
                std::vector<LinStabCertificate<GF>> viol, eq;
            } part;
            for (std::uint64_t idx = lo; idx < hi; ++idx) {
                auto W = en.at(K, idx);
                auto cert = linstab_check_one(sys, W);
                ++part.dc.swept;
                if (!cert) {
                    ++part.dc.trivial_skipped;
                    continue;
                }
                if (cert->core.relation == '<') part.viol.push_back(std::move(*cert));
                else if (cert->core.relation == '=') part.eq.push_back(std::move(*cert));
                else ++part.dc.strict_ok;
            }
            return part;
        };

        int workers = std::max(1, opts.threads);
        if (workers == 1 || total < 64) {
            auto part = sweep_range(0, total);
            dc = part.dc;
            for (auto& c : part.viol) out.violations.push_back(std::move(c));
            for (auto& c : part.eq) out.equalities.push_back(std::move(c));
        } else {
            std::vector<std::future<decltype(sweep_range(0, 0))>> futs;
            std::uint64_t chunk = (total + workers - 1) / workers;
            for (int t = 0; t < workers; ++t) {
                std::uint64_t lo = t * chunk, hi = std::min(total, lo + chunk);
                if (lo >= hi) break;
                futs.push_back(std::async(std::launch::async, sweep_range, lo, hi));
            }
            for (auto& f : futs) {
                auto part = f.get();
                dc.swept += part.dc.swept;
                dc.trivial_skipped += part.dc.trivial_skipped;
                dc.strict_ok += part.dc.strict_ok;
                for (auto& c : part.viol) out.violations.push_back(std::move(c));
                for (auto& c : part.eq) out.equalities.push_back(std::move(c));
            }
        }
        out.per_dim[w] = dc;
    }

    detail::canonical_sort(out.violations, K);
    detail::canonical_sort(out.equalities, K);
    out.kind = detail::classify(out);
    return out;
}

// Search over QQ (or any field): seeded random subspaces plus structured
// candidates. A violation is an exact disproof; finding none is evidence
// only and is labeled as such.
template <class F>
StabilityVerdict<F> linstab_sampled(const CoherentSystem<F>& sys, long long samples,
                                    std::uint64_t seed) {
    const F& K = sys.field;
    const long long n = static_cast<long long>(sys.n);
    if (!is_generated(sys))
        throw std::invalid_argument("linear stability search needs a generated system");

    StabilityVerdict<F> out;
    out.exhaustive = false;
    out.samples_tried = 0;
    out.note = "sampled search: absence of violations is evidence, not proof";

    auto consider = [&](const Mat<F>& Wc) {
        Mat<F> W = Wc;
        if (mat_rank(K, W) != Wc.rows) return;  // dependent candidate rows: skip
        auto cert = linstab_check_one(sys, Wc);
        ++out.samples_tried;
        if (!cert) return;
        if (cert->core.relation == '<') out.violations.push_back(std::move(*cert));
        else if (cert->core.relation == '=') out.equalities.push_back(std::move(*cert));
    };

    // structured candidates: every span of a proper subset of the sections
    // (coordinate subspaces), in particular all (n-1)-subsets
    for (long long w = 2; w <= n - 1; ++w) {
        std::vector<long long> cols(w);
        for (long long i = 0; i < w; ++i) cols[i] = i;
        while (true) {
            Mat<F> W(K, w, n);
            for (long long i = 0; i < w; ++i) W.at(i, cols[i]) = K.one();
            consider(W);
            long long pos = w - 1;
            while (pos >= 0 && cols[pos] == n - w + pos) --pos;
            if (pos < 0) break;
            ++cols[pos];
            for (long long q = pos + 1; q < w; ++q) cols[q] = cols[q - 1] + 1;
        }
    }
    // divisor-vanishing candidates: sections vanishing at small rational points
    {
        const long long pts[][2] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}, {2, 1}, {1, 2}, {3, 1}, {1, 3}};
        for (auto& pt : pts) {
            auto s0 = K.from_int(pt[0]), t0 = K.from_int(pt[1]);
            Mat<F> Aval(K, sys.E.rank(), sys.n);
            for (std::size_t i = 0; i < sys.E.rank(); ++i)
                for (std::size_t j = 0; j < sys.n; ++j)
                    Aval.at(i, j) = bf_eval(sys.eval.at(i, j), s0, t0);
            auto kerv = mat_kernel(K, std::move(Aval));
            if (kerv.size() < 2) continue;
            Mat<F> W(K, kerv.size(), sys.n);
            for (std::size_t r = 0; r < kerv.size(); ++r)
                for (std::size_t j = 0; j < sys.n; ++j) W.at(r, j) = kerv[r][j];
            if (static_cast<long long>(kerv.size()) <= n - 1) consider(W);
        }
    }
    // seeded random subspaces of every proper dimension >= 2
    if (n >= 3) {
        SplitMix64 g(derive_seed(seed, "linstab-sampled"));
        for (long long it = 0; it < samples; ++it) {
            long long w = 2 + static_cast<long long>(g.below(static_cast<std::uint64_t>(n - 2)));
            Mat<F> W(K, w, n);
            for (auto& x : W.a) x = K.random(g);
            if (mat_rank(K, W) != static_cast<std::size_t>(w)) continue;
            consider(W);
        }
    }

    detail::canonical_sort(out.violations, K);
    detail::canonical_sort(out.equalities, K);
    out.kind = out.violations.empty() ? SystemVerdict::evidence_only : SystemVerdict::unstable;
    return out;
}

// Necessary condition from the alpha -> 0 regime: an alpha-semistable system
// has a semistable ambient bundle. Reported alongside verdicts; never claimed
// in the other direction.
template <class F>
std::pair<bool, std::string> ambient_semistable_note(const CoherentSystem<F>& sys) {
    auto v = slope_stability_p1(sys.E);
    bool semistable = v.kind != BundleVerdict::unstable;
    std::string note = semistable
                           ? "ambient bundle is semistable; no alpha-stability obstruction"
                           : "ambient bundle is unstable, so the system is alpha-unstable for small alpha";
    return {semistable, note};
}

// Consistency report for type (2, d, 4) systems: if the system is linearly
// stable and d < 2 d_3, the dual span must be stable. On P^1 a rank-two dual
// span is never stable, so under the hypothesis no linearly stable system
// can exist; both directions are evaluated and compared.
template <class F>
struct TwoDFourReport {
    long long d = 0, d3 = 0;
    bool hypothesis_holds = false;       // d < 2 d3
    SystemVerdict linstab = SystemVerdict::evidence_only;
    BundleVerdict dsb = BundleVerdict::unstable;
    SplittingType dsb_type;
    bool consistent = false;
    std::string note;
};

template <class F>
TwoDFourReport<F> check_2d4_criterion(const CoherentSystem<F>& sys, long long d3,
                                      const StabilityVerdict<F>& linstab) {
    if (sys.rank() != 2 || sys.n != 4)
        throw std::invalid_argument("criterion applies to type (2,d,4) systems only");
    TwoDFourReport<F> rep;
    rep.d = sys.degree();
    rep.d3 = d3;
    rep.hypothesis_holds = rep.d < 2 * d3;
    rep.linstab = linstab.kind;
    auto kd = dual_span(sys);
    rep.dsb_type = kd.kernel;
    rep.dsb = slope_stability_p1(kd.kernel).kind;
    const bool dsb_stable = rep.dsb == BundleVerdict::stable;
    // implication: hypothesis && linearly stable => DSB stable
    rep.consistent = !(rep.hypothesis_holds && rep.linstab == SystemVerdict::stable && !dsb_stable);
    rep.note = rep.consistent ? "implication holds on this instance"
                              : "counterexample to the implication: inspect certificates";
    return rep;
}

}  // namespace dsb

#endif
