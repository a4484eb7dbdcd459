#ifndef DSB_BUNDLE_MAP_HPP
#define DSB_BUNDLE_MAP_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dsb/binary_form.hpp"
#include "dsb/linalg.hpp"
#include "dsb/splitting.hpp"

namespace dsb {

// Map of split bundles on P^1 as a matrix of homogeneous forms. Entry (i, j)
// has degree tgt[i] - src[j]; positions where that is negative must hold the
// zero form (there is no nonzero map O(c) -> O(a) with a < c).
template <class F>
struct BundleMap {
    F field{};
    SplittingType src, tgt;
    std::vector<BinaryForm<F>> ent;  // row-major, tgt.rank() x src.rank()

    const BinaryForm<F>& at(std::size_t i, std::size_t j) const { return ent[i * src.rank() + j]; }
    BinaryForm<F>& at(std::size_t i, std::size_t j) { return ent[i * src.rank() + j]; }
};

template <class F>
void bm_validate(const BundleMap<F>& m) {
    if (m.ent.size() != m.src.rank() * m.tgt.rank())
        throw std::invalid_argument("bundle map: entry count does not match ranks");
    for (std::size_t i = 0; i < m.tgt.rank(); ++i)
        for (std::size_t j = 0; j < m.src.rank(); ++j) {
            const auto& f = m.at(i, j);
            long long need = m.tgt.degs[i] - m.src.degs[j];
            if (f.is_zero()) continue;
            if (!f.field.same(m.field)) throw field_mismatch("bundle map entry over wrong field");
            if (f.deg != need)
                throw std::invalid_argument("bundle map entry (" + std::to_string(i) + "," +
                                            std::to_string(j) + ") has degree " +
                                            std::to_string(f.deg) + ", expected " +
                                            std::to_string(need));
        }
}

template <class F>
BundleMap<F> bm_make(const F& K, SplittingType src, SplittingType tgt,
                     std::vector<BinaryForm<F>> entries) {
    BundleMap<F> m{K, std::move(src), std::move(tgt), std::move(entries)};
    bm_validate(m);
    return m;
}

template <class F>
BundleMap<F> bm_zero(const F& K, SplittingType src, SplittingType tgt) {
    std::vector<BinaryForm<F>> e(src.rank() * tgt.rank(), bf_zero(K));
    return BundleMap<F>{K, std::move(src), std::move(tgt), std::move(e)};
}

template <class F>
bool bm_is_zero(const BundleMap<F>& m) {
    for (const auto& f : m.ent)
        if (!f.is_zero()) return false;
    return true;
}

// Polynomial matrix product g . f  (f: A -> B, g: B -> C).
template <class F>
BundleMap<F> bm_compose(const BundleMap<F>& g, const BundleMap<F>& f) {
    if (!(g.src == f.tgt)) throw std::invalid_argument("bm_compose: middle splitting types differ");
    const F& K = g.field;
    BundleMap<F> r = bm_zero(K, f.src, g.tgt);
    for (std::size_t i = 0; i < g.tgt.rank(); ++i)
        for (std::size_t j = 0; j < f.src.rank(); ++j) {
            BinaryForm<F> acc = bf_zero(K);
            for (std::size_t k = 0; k < g.src.rank(); ++k)
                acc = bf_add(acc, bf_mul(g.at(i, k), f.at(k, j)));
            r.at(i, j) = std::move(acc);
        }
    bm_validate(r);
    return r;
}

// Dual map between the dual bundles. Splitting types are kept descending, so
// dualizing reverses the summand order; entries are transposed and reversed
// to keep rows and columns paired with their twists.
template <class F>
BundleMap<F> bm_transpose_dual(const BundleMap<F>& m) {
    const std::size_t r = m.tgt.rank(), w = m.src.rank();
    BundleMap<F> out{m.field, m.tgt.dual(), m.src.dual(), {}};
    out.ent.assign(r * w, bf_zero(m.field));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < w; ++j)
            out.at(w - 1 - j, r - 1 - i) = m.at(i, j);
    bm_validate(out);
    return out;
}

// ---------------------------------------------------------------------------
// Graded pieces: H^0 of the twisted map as a plain scalar matrix.
// Monomial bases: the block of O(a) at twist d is s^(a+d), s^(a+d-1) t, ...,
// t^(a+d) (empty when a + d < 0).

struct GradedLayout {
    std::vector<long long> block_deg;     // form degree per block (may be < 0 = empty)
    std::vector<std::size_t> block_off;   // offset of each block
    std::size_t dim = 0;

    static GradedLayout of(const SplittingType& st, long long d) {
        GradedLayout L;
        for (auto a : st.degs) {
            L.block_deg.push_back(a + d);
            L.block_off.push_back(L.dim);
            L.dim += static_cast<std::size_t>(h0_line(a + d));
        }
        return L;
    }
};

template <class F>
Mat<F> graded_piece(const BundleMap<F>& m, long long d, GradedLayout* dom_out = nullptr,
                    GradedLayout* cod_out = nullptr) {
    const F& K = m.field;
    GradedLayout dom = GradedLayout::of(m.src, d);
    GradedLayout cod = GradedLayout::of(m.tgt, d);
    Mat<F> A(K, cod.dim, dom.dim);
    for (std::size_t j = 0; j < m.src.rank(); ++j) {
        long long cd = dom.block_deg[j];
        if (cd < 0) continue;
        for (std::size_t i = 0; i < m.tgt.rank(); ++i) {
            const auto& f = m.at(i, j);
            if (f.is_zero()) continue;
            // f * s^(cd-k) t^k lands in the degree-(tgt_i + d) block with
            // t-exponent l + k for each coefficient f.c[l].
            for (long long k = 0; k <= cd; ++k)
                for (int l = 0; l <= f.deg; ++l)
                    A.at(cod.block_off[i] + static_cast<std::size_t>(l + k),
                         dom.block_off[j] + static_cast<std::size_t>(k)) =
                        K.add(A.at(cod.block_off[i] + static_cast<std::size_t>(l + k),
                                   dom.block_off[j] + static_cast<std::size_t>(k)),
                              f.c[l]);
        }
    }
    if (dom_out) *dom_out = dom;
    if (cod_out) *cod_out = cod;
    return A;
}

// Read a domain-coordinate vector at twist d back into a column of forms.
template <class F>
std::vector<BinaryForm<F>> coords_to_column(const F& K, const SplittingType& src, long long d,
                                            const std::vector<typename F::Elt>& v) {
    GradedLayout dom = GradedLayout::of(src, d);
    std::vector<BinaryForm<F>> col;
    col.reserve(src.rank());
    for (std::size_t j = 0; j < src.rank(); ++j) {
        long long cd = dom.block_deg[j];
        if (cd < 0) {
            col.push_back(bf_zero(K));
            continue;
        }
        std::vector<typename F::Elt> cs(static_cast<std::size_t>(cd) + 1, K.zero());
        for (long long k = 0; k <= cd; ++k) cs[static_cast<std::size_t>(k)] = v[dom.block_off[j] + k];
        col.push_back(bf_from_coeffs(K, static_cast<int>(cd), std::move(cs)));
    }
    return col;
}

// Kernel section dimensions per twist, starting at d_lo.
struct H0Profile {
    long long d_lo = 0;
    std::vector<long long> values;

    long long at(long long d) const {
        if (d < d_lo) return 0;
        std::size_t i = static_cast<std::size_t>(d - d_lo);
        return i < values.size() ? values[i] : -1;  // -1 = not measured
    }
};

inline long long h0_of_twists(const std::vector<long long>& gen_twists, long long d) {
    long long total = 0;
    for (auto b : gen_twists) total += std::max(0ll, d - b + 1);
    return total;
}

template <class F>
struct KernelData {
    SplittingType kernel;       // sum of O(-b_k); empty when the map is injective
    BundleMap<F> basis;         // kernel -> src, columns are the syzygies
    H0Profile profile;          // measured kernel h^0 per scanned twist
    long long generic_rank = 0;
    long long sampled_rank = 0;  // evaluation lower bound, certified <= generic_rank
};

namespace detail {

// Deterministic evaluation points for the sampled rank bound; seeded from the
// shape of the map so repeated runs agree.
template <class F>
long long sampled_rank_bound(const BundleMap<F>& m, int points = 8) {
    const F& K = m.field;
    std::uint64_t seed = fnv1a("sampled-rank");
    for (auto a : m.tgt.degs) seed = seed * 1099511628211ull + static_cast<std::uint64_t>(a + 512);
    for (auto c : m.src.degs) seed = seed * 1099511628211ull + static_cast<std::uint64_t>(c + 512);
    SplitMix64 g(seed);
    long long best = 0;
    for (int it = 0; it < points; ++it) {
        auto s0 = K.random(g);
        auto t0 = K.random(g);
        if (K.is_zero(s0) && K.is_zero(t0)) t0 = K.one();
        Mat<F> A(K, m.tgt.rank(), m.src.rank());
        for (std::size_t i = 0; i < m.tgt.rank(); ++i)
            for (std::size_t j = 0; j < m.src.rank(); ++j)
                A.at(i, j) = bf_eval(m.at(i, j), s0, t0);
        best = std::max(best, static_cast<long long>(mat_rank(K, std::move(A))));
    }
    return best;
}

template <class F>
std::size_t exact_generic_rank(const BundleMap<F>& m) {
    const F& K = m.field;
    std::vector<std::vector<Poly1<F>>> P(m.tgt.rank(), std::vector<Poly1<F>>(m.src.rank()));
    for (std::size_t i = 0; i < m.tgt.rank(); ++i)
        for (std::size_t j = 0; j < m.src.rank(); ++j) P[i][j] = bf_dehomogenize(m.at(i, j));
    return poly_mat_rank(K, std::move(P));
}

}  // namespace detail

// Splitting type of the kernel sheaf, with an explicit syzygy basis.
//
// The kernel of a graded map of free modules over F[s,t] is free, so its
// twist-by-twist section dimensions h(d) are determined by the generator
// twists b_k: h(d) = sum_k max(0, d - b_k + 1). The scan below reads the b_k
// off the first differences of measured h(d). The generic rank is computed
// exactly (fraction-free elimination over F[x]), which pins the number of
// generators in advance; the scan stops once all of them have appeared and
// one further twist has confirmed the reconstruction. For maps out of a
// trivial source every b_k is bounded by the total positive target degree,
// which gives the hard termination cap.
template <class F>
KernelData<F> kernel_splitting(const BundleMap<F>& m) {
    const F& K = m.field;
    bm_validate(m);
    const std::size_t s = m.src.rank();

    const long long rho = static_cast<long long>(detail::exact_generic_rank(m));
    const long long sampled = detail::sampled_rank_bound(m);
    if (sampled > rho)
        throw internal_error("sampled rank exceeds exact generic rank: evaluation or elimination bug");

    KernelData<F> out;
    out.generic_rank = rho;
    out.sampled_rank = sampled;
    const long long ker_rank = static_cast<long long>(s) - rho;

    if (ker_rank == 0) {
        out.kernel = SplittingType{};
        out.basis = bm_zero(K, SplittingType{}, m.src);
        out.profile.d_lo = 0;
        return out;
    }

    long long max_src = m.src.degs.empty() ? 0 : m.src.degs.front();
    long long min_src = m.src.degs.empty() ? 0 : m.src.degs.back();
    bool trivial_src = (max_src == 0 && min_src == 0);
    long long pos_tgt = 0;
    for (auto a : m.tgt.degs) pos_tgt += std::max(0ll, a);
    const long long d_cap = trivial_src ? pos_tgt + 1 : pos_tgt - std::min(0ll, min_src) + std::max(0ll, max_src) + 2;
    const long long d_start = -max_src;

    struct Gen {
        long long twist;
        std::vector<typename F::Elt> coords;  // domain coordinates at its twist
    };
    std::vector<Gen> gens;
    auto gen_twists = [&gens] {
        std::vector<long long> t;
        t.reserve(gens.size());
        for (const auto& g : gens) t.push_back(g.twist);
        return t;
    };

    out.profile.d_lo = d_start;
    bool complete_prev = false;  // scan one confirmation twist past the last generator
    for (long long d = d_start;; ++d) {
        if (d > d_cap) throw internal_error("kernel generator scan exceeded the provable twist cap");
        GradedLayout dom;
        Mat<F> A = graded_piece(m, d, &dom);
        auto ker = mat_kernel(K, std::move(A));
        const long long h = static_cast<long long>(ker.size());
        out.profile.values.push_back(h);

        const long long expected_old = h0_of_twists(gen_twists(), d);
        if (h < expected_old)
            throw internal_error("kernel profile dropped below its generator reconstruction");

        if (h > expected_old) {
            // Span of monomial multiples of the generators found so far; the
            // kernel module is free, so these are independent.
            Mat<F> span(K, static_cast<std::size_t>(expected_old), dom.dim);
            std::size_t r = 0;
            for (const auto& g : gens) {
                long long mul_deg = d - g.twist;
                if (mul_deg < 0) continue;
                auto col = coords_to_column(K, m.src, g.twist, g.coords);
                for (long long k = 0; k <= mul_deg; ++k) {
                    auto mono = bf_monomial(K, static_cast<int>(mul_deg), static_cast<int>(k), K.one());
                    for (std::size_t j = 0; j < s; ++j) {
                        auto prod = bf_mul(col[j], mono);
                        if (prod.is_zero()) continue;
                        for (int l = 0; l <= prod.deg; ++l)
                            span.at(r, dom.block_off[j] + static_cast<std::size_t>(l)) = prod.c[l];
                    }
                    ++r;
                }
            }
            auto pivots = mat_rref(K, span);
            if (static_cast<long long>(pivots.size()) != expected_old)
                throw internal_error("generator multiples are dependent: kernel module not free");

            for (auto& v : ker) {
                for (std::size_t rr = 0; rr < pivots.size(); ++rr) {
                    auto f = v[pivots[rr]];
                    if (K.is_zero(f)) continue;
                    for (std::size_t j = 0; j < dom.dim; ++j)
                        v[j] = K.sub(v[j], K.mul(f, span.at(rr, j)));
                }
                bool zero = true;
                for (const auto& x : v)
                    if (!K.is_zero(x)) {
                        zero = false;
                        break;
                    }
                if (zero) continue;
                std::size_t lead = 0;
                while (K.is_zero(v[lead])) ++lead;
                auto inv = K.inv(v[lead]);
                for (auto& x : v) x = K.mul(x, inv);
                Mat<F> grown(K, span.rows + 1, dom.dim);
                for (std::size_t rr = 0; rr < span.rows; ++rr)
                    for (std::size_t j = 0; j < dom.dim; ++j) grown.at(rr, j) = span.at(rr, j);
                for (std::size_t j = 0; j < dom.dim; ++j) grown.at(span.rows, j) = v[j];
                span = std::move(grown);
                pivots = mat_rref(K, span);
                gens.push_back(Gen{d, v});
            }
            if (static_cast<long long>(gens.size()) > ker_rank)
                throw internal_error("found more kernel generators than the certified kernel rank");
            if (h0_of_twists(gen_twists(), d) != h)
                throw internal_error("new kernel generators do not account for the measured profile");
        }

        const bool complete = static_cast<long long>(gens.size()) == ker_rank;
        if (complete && complete_prev) break;
        complete_prev = complete;
    }

    // assemble the splitting type and basis, generators ordered by twist
    std::stable_sort(gens.begin(), gens.end(),
                     [](const Gen& a, const Gen& b) { return a.twist < b.twist; });
    std::vector<long long> ker_degs;
    for (const auto& g : gens) ker_degs.push_back(-g.twist);
    out.kernel = SplittingType(ker_degs);

    BundleMap<F> basis{K, out.kernel, m.src, {}};
    basis.ent.assign(out.kernel.rank() * m.src.rank(), bf_zero(K));
    for (std::size_t kcol = 0; kcol < gens.size(); ++kcol) {
        auto col = coords_to_column(K, m.src, gens[kcol].twist, gens[kcol].coords);
        for (std::size_t j = 0; j < s; ++j) basis.at(j, kcol) = col[j];
    }
    bm_validate(basis);
    out.basis = basis;

    // final certifications: reconstruction of every measured twist, and the
    // syzygy identity as polynomial matrices
    for (std::size_t i = 0; i < out.profile.values.size(); ++i) {
        long long d = out.profile.d_lo + static_cast<long long>(i);
        std::vector<long long> bt;
        for (const auto& g : gens) bt.push_back(g.twist);
        if (out.profile.values[i] != h0_of_twists(bt, d))
            throw internal_error("measured kernel profile differs from its splitting reconstruction");
    }
    if (!bm_is_zero(bm_compose(m, basis)))
        throw internal_error("kernel basis columns are not syzygies of the map");

    return out;
}

// Rank and degree of the image sheaf. For maps out of a trivial source the
// degree equals sum(b_k) >= 0.
template <class F>
std::pair<long long, long long> image_data(const BundleMap<F>& m) {
    auto kd = kernel_splitting(m);
    long long rank = static_cast<long long>(m.src.rank()) - static_cast<long long>(kd.kernel.rank());
    long long deg = m.src.degree() - kd.kernel.degree();
    return {rank, deg};
}

template <class F>
long long generic_rank(const BundleMap<F>& m) {
    return kernel_splitting(m).generic_rank;
}

namespace detail {

// determinant of the square submatrix picked by rows x cols, by permutation
// expansion; the matrices in this artifact stay tiny
template <class F>
BinaryForm<F> submatrix_det(const BundleMap<F>& m, const std::vector<std::size_t>& rows,
                            const std::vector<std::size_t>& cols) {
    const F& K = m.field;
    const std::size_t k = rows.size();
    BinaryForm<F> det = bf_zero(K);
    std::vector<bool> used(k, false);
    std::vector<std::size_t> cur;
    std::function<void(std::size_t, bool)> rec = [&](std::size_t depth, bool parity) {
        if (depth == k) {
            BinaryForm<F> prod = bf_const(K, K.one());
            for (std::size_t i = 0; i < k && !prod.is_zero(); ++i)
                prod = bf_mul(prod, m.at(rows[i], cols[cur[i]]));
            det = parity ? bf_add(det, prod) : bf_sub(det, prod);
            return;
        }
        for (std::size_t j = 0; j < k; ++j) {
            if (used[j]) continue;
            bool flip = false;
            for (std::size_t q = 0; q < j; ++q)
                if (!used[q]) flip = !flip;
            used[j] = true;
            cur.push_back(j);
            rec(depth + 1, flip ? !parity : parity);
            cur.pop_back();
            used[j] = false;
        }
    };
    rec(0, true);
    return det;
}

inline bool next_combination(std::vector<std::size_t>& sel, std::size_t limit) {
    const std::size_t k = sel.size();
    std::size_t pos = k;
    while (pos > 0 && sel[pos - 1] == limit - k + pos - 1) --pos;
    if (pos == 0) return false;
    ++sel[pos - 1];
    for (std::size_t q = pos; q < k; ++q) sel[q] = sel[q - 1] + 1;
    return true;
}

}  // namespace detail

// All nonzero maximal minors (size min(rank) taken over subsets of the larger
// side).
template <class F>
std::vector<BinaryForm<F>> maximal_minors(const BundleMap<F>& m) {
    const std::size_t w = m.src.rank(), r = m.tgt.rank();
    const std::size_t k = std::min(w, r);
    std::vector<std::size_t> rows(k), cols(k);
    for (std::size_t i = 0; i < k; ++i) rows[i] = cols[i] = i;
    std::vector<BinaryForm<F>> minors;
    if (w <= r) {
        do {
            auto det = detail::submatrix_det(m, rows, cols);
            if (!det.is_zero()) minors.push_back(std::move(det));
        } while (detail::next_combination(rows, r));
    } else {
        do {
            auto det = detail::submatrix_det(m, rows, cols);
            if (!det.is_zero()) minors.push_back(std::move(det));
        } while (detail::next_combination(cols, w));
    }
    return minors;
}

// gcd of the maximal (source-rank) minors of an injective map; a constant
// gcd certifies that the image is a subbundle (already saturated). Returns
// the gcd's degree, i.e. the saturation defect.
template <class F>
long long injection_minor_gcd_degree(const BundleMap<F>& m) {
    if (m.src.rank() > m.tgt.rank())
        throw std::invalid_argument("minor gcd: source rank exceeds target rank");
    auto minors = maximal_minors(m);
    if (minors.empty()) throw std::invalid_argument("minor gcd: map is not injective");
    return bf_gcd(m.field, minors).deg;
}

// Independent degree computation for a rank-one image: factor the matrix as
// (primitive column) x (row of forms). The primitive column spans a line
// subbundle O(m); the image is that line twisted down by the gcd of the row.
template <class F>
long long rank_one_image_degree(const BundleMap<F>& m) {
    const F& K = m.field;
    const std::size_t w = m.src.rank(), r = m.tgt.rank();
    std::size_t j0 = w;
    for (std::size_t j = 0; j < w && j0 == w; ++j)
        for (std::size_t i = 0; i < r; ++i)
            if (!m.at(i, j).is_zero()) {
                j0 = j;
                break;
            }
    if (j0 == w) throw std::invalid_argument("rank-one image of the zero map");
    std::vector<BinaryForm<F>> col;
    for (std::size_t i = 0; i < r; ++i) col.push_back(m.at(i, j0));
    auto content = bf_gcd(K, col);
    std::vector<BinaryForm<F>> u(r, bf_zero(K));
    std::size_t i0 = r;
    for (std::size_t i = 0; i < r; ++i) {
        if (col[i].is_zero()) continue;
        if (!bf_divides(content, col[i], &u[i]))
            throw internal_error("column content does not divide the column");
        if (i0 == r) i0 = i;
    }
    long long line_deg = m.tgt.degs[i0] - u[i0].deg;
    std::vector<BinaryForm<F>> gs;
    for (std::size_t j = 0; j < w; ++j) {
        bool zero_col = true;
        for (std::size_t i = 0; i < r; ++i)
            if (!m.at(i, j).is_zero()) zero_col = false;
        if (zero_col) continue;
        BinaryForm<F> g;
        if (!bf_divides(u[i0], m.at(i0, j), &g))
            throw internal_error("matrix is not of rank one: column not a multiple of the direction");
        // verify the whole column
        for (std::size_t i = 0; i < r; ++i)
            if (!bf_equal(m.at(i, j), bf_mul(u[i], g)))
                throw internal_error("matrix is not of rank one: direction check failed");
        gs.push_back(g);
    }
    return line_deg - bf_gcd(K, gs).deg;
}

}  // namespace dsb

#endif
