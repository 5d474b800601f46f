#ifndef SUMMER_DICTIONARIES_HPP
#define SUMMER_DICTIONARIES_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "summer/config.hpp"
#include "summer/errors.hpp"

namespace summer {

/// CS measurement matrices. Per channel c: A[c] is K x TN (delay steering at
/// the selected Fourier indices), B[c] is Q x TR (azimuth steering). F is the
/// plain P x P DFT matrix, stored unnormalized (scaling = 1, recorded here).
struct DictionarySet {
    std::vector<Eigen::MatrixXcd> A; // channels, K x TN
    std::vector<Eigen::MatrixXcd> B; // channels, Q x TR
    Eigen::MatrixXcd F;              // P x P, F(p, u) = exp(-j 2 pi p u / P)
    std::string fourier_scaling = "unnormalized";

    int channels() const { return int(A.size()); }

    Eigen::MatrixXcd stacked_a() const {
        const Eigen::Index rows = A.size() * A[0].rows();
        Eigen::MatrixXcd out(rows, A[0].cols());
        for (std::size_t c = 0; c < A.size(); ++c) {
            out.middleRows(Eigen::Index(c) * A[0].rows(), A[0].rows()) = A[c];
        }
        return out;
    }
    Eigen::MatrixXcd stacked_b() const {
        const Eigen::Index rows = B.size() * B[0].rows();
        Eigen::MatrixXcd out(rows, B[0].cols());
        for (std::size_t c = 0; c < B.size(); ++c) {
            out.middleRows(Eigen::Index(c) * B[0].rows(), B[0].rows()) = B[c];
        }
        return out;
    }
};

inline DictionarySet build_dictionaries(const RadarConfig& cfg) {
    validate(cfg);
    const ChannelLayout lay = effective_layout(cfg);
    const int kc = cfg.k_count();
    const int qc = cfg.q_count();
    const int tn = cfg.waveform.delay_bins();
    const int tr = cfg.waveform.azimuth_bins();
    constexpr double two_pi = 2.0 * std::numbers::pi;

    DictionarySet dict;
    dict.A.reserve(lay.channels);
    dict.B.reserve(lay.channels);
    for (int c = 0; c < lay.channels; ++c) {
        Eigen::MatrixXcd a(kc, tn);
        const double carrier_ratio = lay.carrier[c] / cfg.waveform.bandwidth_bh;
        for (int n = 0; n < tn; ++n) {
            for (int k = 0; k < kc; ++k) {
                const double turns = double(cfg.sampling.kappa[k]) * n / double(tn) +
                                     carrier_ratio * n / double(cfg.waveform.t_count);
                a(k, n) = std::polar(1.0, -two_pi * turns);
            }
        }
        dict.A.push_back(std::move(a));

        Eigen::MatrixXcd b(qc, tr);
        for (int r = 0; r < tr; ++r) {
            const double theta = -1.0 + 2.0 * double(r) / double(tr);
            for (int q = 0; q < qc; ++q) {
                b(q, r) = std::polar(1.0, -two_pi * cfg.beta(c, q) * theta);
            }
        }
        dict.B.push_back(std::move(b));
    }

    const int p = lay.pris;
    dict.F.resize(p, p);
    for (int u = 0; u < p; ++u) {
        for (int row = 0; row < p; ++row) {
            dict.F(row, u) = std::polar(1.0, -two_pi * double(row) * u / double(p));
        }
    }
    return dict;
}

/// Exact spark (smallest number of linearly dependent columns) by subset
/// enumeration; `value` is a lower bound when `exact` is false.
struct SparkResult {
    int value = 0;
    bool exact = true;
};

namespace detail {

inline bool columns_dependent(const Eigen::MatrixXcd& sub) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sub);
    const auto& sv = svd.singularValues();
    return sv(sv.size() - 1) <= 1e-10 * sv(0);
}

// Visit all size-j column subsets in lexicographic order until the visitor
// returns true; returns false if the subset budget runs out.
template <typename Visitor>
inline bool for_each_subset(int n, int j, long budget, Visitor&& visit, bool& exhausted) {
    std::vector<int> idx(j);
    for (int i = 0; i < j; ++i) idx[i] = i;
    long visited = 0;
    while (true) {
        if (visited++ > budget) {
            exhausted = true;
            return false;
        }
        if (visit(idx)) return true;
        int i = j - 1;
        while (i >= 0 && idx[i] == n - j + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (int t = i + 1; t < j; ++t) idx[t] = idx[t - 1] + 1;
    }
}

} // namespace detail

inline SparkResult spark(const Eigen::MatrixXcd& mat, int max_check,
                         long subset_budget = 4'000'000) {
    const int cols = int(mat.cols());
    const int limit = std::min(cols, max_check);
    Eigen::MatrixXcd sub;
    for (int j = 1; j <= limit; ++j) {
        if (j > mat.rows() + 1) break; // any rows+1 columns are dependent
        bool exhausted = false;
        bool found = detail::for_each_subset(
            cols, j, subset_budget,
            [&](const std::vector<int>& idx) {
                sub.resize(mat.rows(), j);
                for (int t = 0; t < j; ++t) sub.col(t) = mat.col(idx[t]);
                return detail::columns_dependent(sub);
            },
            exhausted);
        if (found) return {j, true};
        if (exhausted) return {j, false}; // checked all sizes < j only
    }
    if (limit >= std::min(cols, int(mat.rows()) + 1)) {
        // No dependent subset exists within the structural bound.
        return {std::min(cols + 1, int(mat.rows()) + 1), true};
    }
    return {limit + 1, false};
}

/// Report for the spark identity of the stacked Kronecker measurement matrix.
struct Lemma1Report {
    SparkResult spark_c, spark_a, spark_b;
    bool equal = false;
};

inline Eigen::MatrixXcd stack_rows(const std::vector<Eigen::MatrixXcd>& parts) {
    Eigen::Index rows = 0;
    for (const auto& p : parts) rows += p.rows();
    Eigen::MatrixXcd out(rows, parts[0].cols());
    Eigen::Index at = 0;
    for (const auto& p : parts) {
        out.middleRows(at, p.rows()) = p;
        at += p.rows();
    }
    return out;
}

/// Materializes C = stack_m(conj(B^m) kron A^m) and checks
/// spark(C) == min(spark(A), spark(B)) by brute force.
inline Lemma1Report verify_lemma1(const std::vector<Eigen::MatrixXcd>& a_list,
                                  const std::vector<Eigen::MatrixXcd>& b_list,
                                  int max_check = 32) {
    if (a_list.empty() || a_list.size() != b_list.size()) {
        throw model_error("lemma check: need matching non-empty matrix lists");
    }
    const Eigen::Index n = a_list[0].cols();
    const Eigen::Index r = b_list[0].cols();
    std::vector<Eigen::MatrixXcd> blocks;
    blocks.reserve(a_list.size());
    for (std::size_t m = 0; m < a_list.size(); ++m) {
        const Eigen::MatrixXcd bbar = b_list[m].conjugate();
        Eigen::MatrixXcd kron(bbar.rows() * a_list[m].rows(), r * n);
        for (Eigen::Index i = 0; i < bbar.rows(); ++i) {
            for (Eigen::Index j = 0; j < r; ++j) {
                kron.block(i * a_list[m].rows(), j * n, a_list[m].rows(), n) =
                    bbar(i, j) * a_list[m];
            }
        }
        blocks.push_back(std::move(kron));
    }
    Lemma1Report rep;
    rep.spark_c = spark(stack_rows(blocks), max_check);
    rep.spark_a = spark(stack_rows(a_list), max_check);
    rep.spark_b = spark(stack_rows(b_list), max_check);
    rep.equal = rep.spark_c.exact && rep.spark_a.exact && rep.spark_b.exact &&
                rep.spark_c.value == std::min(rep.spark_a.value, rep.spark_b.value);
    return rep;
}

struct Lemma1Suite {
    int random_instances = 0;
    int planted_instances = 0;
    int random_equal = 0;
    int planted_equal = 0;
    bool all_equal() const {
        return random_equal == random_instances && planted_equal == planted_instances;
    }
};

namespace detail {
inline Eigen::MatrixXcd gaussian_matrix(int rows, int cols, Rng& rng) {
    Eigen::MatrixXcd m(rows, cols);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) m(i, j) = rng.complex_gaussian();
    }
    return m;
}
} // namespace detail

namespace detail {
// Factor dimensions for one suite instance. The identity requires the
// stacked factors to be wide (MK < N, MQ < R) so their sparks are attained;
// at M = 1 this reduces to the minimal 2 x 3 factors.
struct Lemma1Dims {
    int m, k, q, n, r;
};
inline Lemma1Dims lemma1_dims(int i) {
    Lemma1Dims d;
    d.m = 1 + i % 3;
    d.k = d.m == 3 ? 1 : 2 - (i / 3) % 2;
    d.q = d.m == 3 ? 1 : 2 - (i / 5) % 2;
    d.n = d.m * d.k + 1;
    d.r = d.m * d.q + 1;
    return d;
}
} // namespace detail

/// Spark-identity check battery: seeded complex Gaussian instances with
/// M in {1, 2, 3} and small wide factors (2 x 3 at M = 1), plus constructed
/// instances with planted dependent columns (duplicate, zero or a linear
/// combination) in A or B.
inline Lemma1Suite run_lemma1_suite(int random_instances, std::uint64_t seed,
                                    int planted_instances = 10) {
    Lemma1Suite suite;
    suite.random_instances = random_instances;
    suite.planted_instances = planted_instances;
    for (int i = 0; i < random_instances; ++i) {
        Rng rng(derive_seed(seed, 0x6c656d6d61ULL, std::uint64_t(i)));
        const auto d = detail::lemma1_dims(i);
        std::vector<Eigen::MatrixXcd> a, b;
        for (int c = 0; c < d.m; ++c) {
            a.push_back(detail::gaussian_matrix(d.k, d.n, rng));
            b.push_back(detail::gaussian_matrix(d.q, d.r, rng));
        }
        if (verify_lemma1(a, b).equal) ++suite.random_equal;
    }
    for (int i = 0; i < planted_instances; ++i) {
        Rng rng(derive_seed(seed, 0x706c616e74ULL, std::uint64_t(i)));
        const auto d = detail::lemma1_dims(i);
        std::vector<Eigen::MatrixXcd> a, b;
        for (int c = 0; c < d.m; ++c) {
            a.push_back(detail::gaussian_matrix(d.k, d.n, rng));
            b.push_back(detail::gaussian_matrix(d.q, d.r, rng));
        }
        // Plant a dependent pair (or a zero column) in A or B across all m.
        const int kind = i % 4;
        for (int c = 0; c < d.m; ++c) {
            switch (kind) {
            case 0: a[c].col(d.n - 1) = a[c].col(0); break;
            case 1: b[c].col(d.r - 1) = b[c].col(0); break;
            case 2: a[c].col(1).setZero(); break;
            default: b[c].col(0) = 0.5 * b[c].col(1) - 2.0 * b[c].col(d.r - 1); break;
            }
        }
        if (verify_lemma1(a, b).equal) ++suite.planted_equal;
    }
    return suite;
}

/// Maximum normalized inner product between distinct columns.
inline double coherence(const Eigen::MatrixXcd& mat) {
    const Eigen::Index n = mat.cols();
    Eigen::VectorXd norms(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        norms(i) = mat.col(i).norm();
        if (norms(i) <= 0.0) throw model_error("coherence: zero column");
    }
    double best = 0.0;
    constexpr Eigen::Index block = 256;
    for (Eigen::Index i0 = 0; i0 < n; i0 += block) {
        const Eigen::Index w = std::min(block, n - i0);
        const Eigen::MatrixXcd gram = mat.middleCols(i0, w).adjoint() * mat;
        for (Eigen::Index i = 0; i < w; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (i0 + i == j) continue;
                const double v = std::abs(gram(i, j)) / (norms(i0 + i) * norms(j));
                if (v > best) best = v;
            }
        }
    }
    return best;
}

/// Which randomized design parameters a coherence search may redraw.
enum class SearchSpace { time, space, both };

struct CoherenceSearchResult {
    RadarConfig best;
    double best_coherence = 0.0;
    std::vector<double> trace; // max(coh(A), coh(B)) per trial
};

/// Randomized minimax search over (kappa, carriers) and/or (positions,
/// carriers): keep the draw minimizing max(coherence(A), coherence(B)).
inline CoherenceSearchResult coherence_search(const RadarConfig& base, int trials,
                                              std::uint64_t seed,
                                              SearchSpace space = SearchSpace::both) {
    if (trials < 1) throw config_error("coherence search: trials must be >= 1");
    CoherenceSearchResult res;
    res.trace.reserve(trials);
    for (int t = 0; t < trials; ++t) {
        RadarConfig cand = base;
        const std::uint64_t s = derive_seed(seed, 0x636f68ULL, std::uint64_t(t));
        cand.carriers = assign_carriers(cand.waveform.t_count, cand.carriers.count(),
                                        cand.waveform.bandwidth_bh, derive_seed(s, 1));
        if (space != SearchSpace::space) {
            cand.sampling = select_fourier_indices(cand.waveform.n_nyquist,
                                                   cand.sampling.k_count(), derive_seed(s, 2));
        }
        if (space != SearchSpace::time) {
            cand.geometry = thin_array(cand.waveform.t_count, cand.waveform.r_count,
                                       cand.geometry.m_count(), cand.geometry.q_count(),
                                       derive_seed(s, 3));
        }
        const DictionarySet dict = build_dictionaries(cand);
        const double v = std::max(coherence(dict.stacked_a()), coherence(dict.stacked_b()));
        res.trace.push_back(v);
        if (t == 0 || v < res.best_coherence) {
            res.best_coherence = v;
            res.best = cand;
        }
    }
    return res;
}

} // namespace summer

#endif
