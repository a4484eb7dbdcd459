#ifndef DSB_COHERENT_HPP
#define DSB_COHERENT_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dsb/bundle_map.hpp"
#include "dsb/prng.hpp"

namespace dsb {

// A pair (E, V): a split bundle on P^1 together with an explicit basis of n
// independent sections. Sections are kept in reduced echelon form over the
// coefficient field so that equal subspaces have equal representations.
template <class F>
struct CoherentSystem {
    F field{};
    SplittingType E;
    std::size_t n = 0;
    // section j = column j of the evaluation matrix: component i is a form of
    // degree E.degs[i]
    BundleMap<F> eval;  // O^n -> E

    long long rank() const { return static_cast<long long>(E.rank()); }
    long long degree() const { return E.degree(); }
    std::string type_str() const {
        return "(" + std::to_string(rank()) + "," + std::to_string(degree()) + "," +
               std::to_string(n) + ")";
    }
};

namespace detail {

// n x h^0(E) coefficient matrix of the sections (row per section).
template <class F>
Mat<F> section_coeff_matrix(const F& K, const SplittingType& E,
                            const std::vector<std::vector<BinaryForm<F>>>& sections) {
    GradedLayout L = GradedLayout::of(E, 0);
    Mat<F> M(K, sections.size(), L.dim);
    for (std::size_t j = 0; j < sections.size(); ++j)
        for (std::size_t i = 0; i < E.rank(); ++i) {
            const auto& f = sections[j][i];
            if (f.is_zero()) continue;
            for (int l = 0; l <= f.deg; ++l)
                M.at(j, L.block_off[i] + static_cast<std::size_t>(l)) = f.c[l];
        }
    return M;
}

template <class F>
std::vector<std::vector<BinaryForm<F>>> coeff_rows_to_sections(const F& K, const SplittingType& E,
                                                               const Mat<F>& M) {
    GradedLayout L = GradedLayout::of(E, 0);
    std::vector<std::vector<BinaryForm<F>>> sections(M.rows);
    for (std::size_t j = 0; j < M.rows; ++j) {
        std::vector<typename F::Elt> v(L.dim);
        for (std::size_t q = 0; q < L.dim; ++q) v[q] = M.at(j, q);
        sections[j] = coords_to_column(K, E, 0, v);
    }
    return sections;
}

}  // namespace detail

// Build a coherent system from explicit sections. Throws if the sections are
// dependent or any component has the wrong degree. Sections are replaced by
// the canonical echelon basis of their span.
template <class F>
CoherentSystem<F> make_system(const F& K, const SplittingType& E,
                              const std::vector<std::vector<BinaryForm<F>>>& sections) {
    if (E.rank() == 0) throw std::invalid_argument("coherent system needs a bundle of rank >= 1");
    for (auto a : E.degs)
        if (a < 0) throw std::invalid_argument("sections of a negative twist are zero; bundle must have degrees >= 0");
    for (const auto& sec : sections) {
        if (sec.size() != E.rank()) throw std::invalid_argument("section has wrong number of components");
        for (std::size_t i = 0; i < E.rank(); ++i)
            if (!sec[i].is_zero() && sec[i].deg != E.degs[i])
                throw std::invalid_argument("section component degree does not match the bundle");
    }
    Mat<F> M = detail::section_coeff_matrix(K, E, sections);
    Mat<F> canon = mat_row_space_canonical(K, M);
    if (canon.rows != sections.size())
        throw std::invalid_argument("sections are linearly dependent");
    auto canon_secs = detail::coeff_rows_to_sections(K, E, canon);

    CoherentSystem<F> sys;
    sys.field = K;
    sys.E = E;
    sys.n = sections.size();
    BundleMap<F> ev{K, SplittingType::trivial(sys.n), E, {}};
    ev.ent.assign(sys.n * E.rank(), bf_zero(K));
    for (std::size_t j = 0; j < sys.n; ++j)
        for (std::size_t i = 0; i < E.rank(); ++i) ev.at(i, j) = canon_secs[j][i];
    bm_validate(ev);
    sys.eval = std::move(ev);
    return sys;
}

// The complete system (E, H^0(E)): the deterministic monomial basis.
template <class F>
CoherentSystem<F> complete_system(const F& K, const SplittingType& E) {
    std::vector<std::vector<BinaryForm<F>>> secs;
    for (std::size_t i = 0; i < E.rank(); ++i) {
        long long a = E.degs[i];
        for (long long k = 0; k <= a; ++k) {
            std::vector<BinaryForm<F>> sec(E.rank(), bf_zero(K));
            sec[i] = bf_monomial(K, static_cast<int>(a), static_cast<int>(k), K.one());
            secs.push_back(std::move(sec));
        }
    }
    return make_system(K, E, secs);
}

struct RandomSystemStats {
    std::uint64_t seed = 0;
    long long rejected_dependent = 0;
    long long rejected_nongenerated = 0;
};

// Seeded sampling of an n-section system; rejects dependent draws. With
// n == h^0(E) the deterministic monomial basis is returned instead.
template <class F>
CoherentSystem<F> random_system(const F& K, const SplittingType& E, std::size_t n,
                                std::uint64_t seed, RandomSystemStats* stats = nullptr) {
    long long h0 = E.h0();
    if (static_cast<long long>(n) > h0)
        throw std::invalid_argument("requested more sections than h^0(E)");
    if (static_cast<long long>(n) == h0) return complete_system(K, E);
    SplitMix64 g(derive_seed(seed, "random-system-sections"));
    RandomSystemStats st;
    st.seed = seed;
    while (true) {
        std::vector<std::vector<BinaryForm<F>>> secs;
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<BinaryForm<F>> sec;
            for (std::size_t i = 0; i < E.rank(); ++i) {
                int a = static_cast<int>(E.degs[i]);
                std::vector<typename F::Elt> cs(a + 1);
                for (auto& x : cs) x = K.random(g);
                sec.push_back(bf_from_coeffs(K, a, std::move(cs)));
            }
            secs.push_back(std::move(sec));
        }
        try {
            auto sys = make_system(K, E, secs);
            if (stats) *stats = st;
            return sys;
        } catch (const std::invalid_argument&) {
            ++st.rejected_dependent;
            if (st.rejected_dependent > 10000)
                throw std::runtime_error("random_system: too many dependent draws");
        }
    }
}

// Generatedness: the evaluation map is surjective at every point iff the
// maximal minors of the section matrix have no common projective zero, i.e.
// their gcd is a nonzero constant. n < rank can never generate.
template <class F>
bool is_generated(const CoherentSystem<F>& sys) {
    if (sys.n < sys.E.rank()) return false;
    auto minors = maximal_minors(sys.eval);
    if (minors.empty()) return false;  // evaluation matrix has rank < r everywhere
    return bf_gcd(sys.field, minors).deg == 0;
}

// Seeded sampling restricted to generated systems (rejection with budget).
template <class F>
std::optional<CoherentSystem<F>> random_generated_system(const F& K, const SplittingType& E,
                                                         std::size_t n, std::uint64_t seed,
                                                         int budget = 100,
                                                         RandomSystemStats* stats = nullptr) {
    RandomSystemStats st;
    st.seed = seed;
    for (int attempt = 0; attempt < budget; ++attempt) {
        RandomSystemStats inner;
        auto sys = random_system(K, E, n, derive_seed(seed, "generated-attempt", attempt), &inner);
        st.rejected_dependent += inner.rejected_dependent;
        if (is_generated(sys)) {
            if (stats) *stats = st;
            return sys;
        }
        ++st.rejected_nongenerated;
    }
    if (stats) *stats = st;
    return std::nullopt;
}

// The dual span bundle M_{V,E} = ker(V (x) O -> E), with its syzygy basis.
template <class F>
KernelData<F> dual_span(const CoherentSystem<F>& sys) {
    if (!is_generated(sys))
        throw std::invalid_argument("dual span requested for a non-generated system");
    auto kd = kernel_splitting(sys.eval);
    if (static_cast<long long>(kd.kernel.rank()) != static_cast<long long>(sys.n) - sys.rank())
        throw internal_error("dual span rank differs from n - r");
    if (kd.kernel.degree() != -sys.degree())
        throw internal_error("dual span degree differs from -deg(E)");
    return kd;
}

// Report on the subsheaf generated by a subspace W of the section space.
template <class F>
struct SubsheafReport {
    Mat<F> W;  // canonical echelon basis, w x n, coordinates in the sections
    SplittingType kernel;
    long long rank_EW = 0;
    long long deg_EW = 0;
    bool trivial = false;  // deg == 0 <=> image is O^w
};

// Evaluation map restricted to W: columns are the W-combinations of sections.
template <class F>
BundleMap<F> restricted_eval(const CoherentSystem<F>& sys, const Mat<F>& W_rows) {
    const F& K = sys.field;
    const std::size_t w = W_rows.rows;
    BundleMap<F> m{K, SplittingType::trivial(w), sys.E, {}};
    m.ent.assign(w * sys.E.rank(), bf_zero(K));
    for (std::size_t k = 0; k < w; ++k)
        for (std::size_t i = 0; i < sys.E.rank(); ++i) {
            BinaryForm<F> acc = bf_zero(K);
            for (std::size_t j = 0; j < sys.n; ++j) {
                if (K.is_zero(W_rows.at(k, j))) continue;
                acc = bf_add(acc, bf_scale(sys.eval.at(i, j), W_rows.at(k, j)));
            }
            m.at(i, k) = std::move(acc);
        }
    bm_validate(m);
    return m;
}

template <class F>
SubsheafReport<F> subsheaf_generated(const CoherentSystem<F>& sys, const Mat<F>& W_coords) {
    const F& K = sys.field;
    if (W_coords.cols != sys.n) throw std::invalid_argument("W coordinates must have n columns");
    Mat<F> W = mat_row_space_canonical(K, W_coords);
    if (W.rows != W_coords.rows) throw std::invalid_argument("W basis is dependent");
    if (W.rows == 0) throw std::invalid_argument("W must be nonzero");

    auto map = restricted_eval(sys, W);
    auto kd = kernel_splitting(map);

    SubsheafReport<F> rep;
    rep.W = std::move(W);
    rep.kernel = kd.kernel;
    rep.rank_EW = static_cast<long long>(map.src.rank()) - static_cast<long long>(kd.kernel.rank());
    rep.deg_EW = -kd.kernel.degree();
    rep.trivial = (rep.deg_EW == 0);
    // dichotomy: independent sections force every kernel generator twist >= 1
    for (auto b : kd.kernel.degs)
        if (-b < 1) throw internal_error("kernel of independent sections has a generator at twist 0");
    if (rep.trivial != (rep.rank_EW == static_cast<long long>(rep.W.rows)))
        throw internal_error("trivial-image dichotomy violated");
    return rep;
}

// Numeric shadow of a coherent system, used by the parametric audits and the
// pullback transform. Degree-like fields scale under covers; ranks and
// section counts do not.
struct NumericalSystem {
    long long r = 1, d = 0, n = 1;
    long long g = 0;
    std::optional<long long> a, s, e, m, k, d_prime, r_prime, t;
};

inline NumericalSystem pullback_numeric(NumericalSystem ns, long long k) {
    if (k < 1) throw std::invalid_argument("pullback degree must be >= 1");
    ns.d *= k;
    if (ns.e) ns.e = *ns.e * k;
    if (ns.d_prime) ns.d_prime = *ns.d_prime * k;
    ns.k = k;
    return ns;
}

}  // namespace dsb

#endif
