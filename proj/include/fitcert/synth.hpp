#pragma once

// Seeded generators for arrangements, data and masks.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "certifier.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "mask.hpp"

namespace fitcert {

// mt19937_64 seeded through seed_seq{seed low, seed high, stream low, stream
// high}. Uniform doubles take the top 53 bits; normals use Box-Muller,
// returning the cosine branch and then the cached sine branch.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream),
                          static_cast<std::uint32_t>(stream >> 32)};
        gen_.seed(seq);
    }

    std::uint64_t next() { return gen_(); }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), by rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            auto x = next();
            if (x >= threshold) return x % n;
        }
    }

    double normal() {
        if (cached_) {
            double v = *cached_;
            cached_.reset();
            return v;
        }
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        double rad = std::sqrt(-2.0 * std::log(u1));
        double ang = 2.0 * std::numbers::pi * u2;
        cached_ = rad * std::sin(ang);
        return rad * std::cos(ang);
    }

private:
    std::mt19937_64 gen_;
    std::optional<double> cached_;
};

enum class MaskProperty { satisfies_t1, satisfies_t2_only, fails_both, explicit_mask };
enum class AssignmentMode { all_same, mixed };

inline std::string to_string(MaskProperty p) {
    switch (p) {
        case MaskProperty::satisfies_t1: return "t1";
        case MaskProperty::satisfies_t2_only: return "t2-only";
        case MaskProperty::fails_both: return "fails-both";
        case MaskProperty::explicit_mask: return "explicit";
    }
    return "?";
}

inline std::string to_string(AssignmentMode m) {
    return m == AssignmentMode::all_same ? "same" : "mixed";
}

inline MaskProperty parse_mask_property(const std::string& s) {
    if (s == "t1") return MaskProperty::satisfies_t1;
    if (s == "t2-only") return MaskProperty::satisfies_t2_only;
    if (s == "fails-both") return MaskProperty::fails_both;
    if (s == "explicit") return MaskProperty::explicit_mask;
    throw std::invalid_argument("unknown mask property '" + s + "'");
}

inline AssignmentMode parse_assignment_mode(const std::string& s) {
    if (s == "same") return AssignmentMode::all_same;
    if (s == "mixed") return AssignmentMode::mixed;
    throw std::invalid_argument("unknown assignment mode '" + s + "'");
}

struct GenSpec {
    std::size_t d = 0;
    std::size_t r = 0;
    std::size_t K = 1;
    std::size_t N = 1;
    std::uint64_t seed = 0;
    MaskProperty mask_property = MaskProperty::satisfies_t1;
    AssignmentMode assignment_mode = AssignmentMode::all_same;

    void validate() const {
        if (r < 1 || r >= d) throw std::invalid_argument("need 1 <= r < d");
        if (N < 1) throw std::invalid_argument("need N >= 1");
        if (K < 1) throw std::invalid_argument("need K >= 1");
    }
};

inline nlohmann::json genspec_to_json(const GenSpec& s) {
    return {{"d", s.d},
            {"r", s.r},
            {"k", s.K},
            {"n", s.N},
            {"seed", s.seed},
            {"property", to_string(s.mask_property)},
            {"assignment", to_string(s.assignment_mode)}};
}

// Random streams drawn from one seed.
inline constexpr std::uint64_t kArrangementStream = 1;
inline constexpr std::uint64_t kDataStream = 2;
inline constexpr std::uint64_t kMaskStream = 3;

inline constexpr int kArrangementRetries = 16;
inline constexpr int kMaskAttempts = 10'000;

inline std::vector<std::size_t> make_assignment(std::size_t N, std::size_t K,
                                                AssignmentMode mode) {
    std::vector<std::size_t> out(N, 1);
    if (mode == AssignmentMode::mixed)
        for (std::size_t i = 0; i < N; ++i) out[i] = i % K + 1;
    return out;
}

inline Matrix gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
    Matrix M(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = 0; j < M.cols(); ++j) M(i, j) = rng.normal();
    return M;
}

// K Gaussian d x r bases, each redrawn until non-degenerate.
inline Arrangement random_arrangement(const GenSpec& spec) {
    spec.validate();
    Rng rng(spec.seed, kArrangementStream);
    Arrangement a;
    for (std::size_t k = 0; k < spec.K; ++k) {
        for (int attempt = 0;; ++attempt) {
            if (attempt == kArrangementRetries)
                throw GenerationError("no non-degenerate basis after " +
                                      std::to_string(kArrangementRetries) + " draws");
            Matrix U = gaussian_matrix(rng, spec.d, spec.r);
            if (numeric_rank(U) != spec.r) continue;
            SubspaceBasis b(std::move(U));
            if (is_degenerate(b)) continue;
            a.bases.push_back(std::move(b));
            break;
        }
    }
    a.assignment = make_assignment(spec.N, spec.K, spec.assignment_mode);
    return a;
}

struct SampledData {
    Matrix X;  // d x N
    std::vector<std::size_t> assignment;
};

// Column i is U_{k_i} g_i with g_i standard normal.
inline SampledData sample_columns(const Arrangement& arrangement, std::size_t N,
                                  AssignmentMode mode, std::uint64_t seed) {
    if (arrangement.bases.empty()) throw std::invalid_argument("empty arrangement");
    Rng rng(seed, kDataStream);
    SampledData out;
    out.assignment = make_assignment(N, arrangement.bases.size(), mode);
    const auto d = static_cast<Eigen::Index>(arrangement.bases.front().ambient_dim());
    out.X.resize(d, static_cast<Eigen::Index>(N));
    for (std::size_t i = 0; i < N; ++i) {
        const Matrix& U = arrangement.bases[out.assignment[i] - 1].matrix();
        Vector g(U.cols());
        for (Eigen::Index q = 0; q < g.size(); ++q) g(q) = rng.normal();
        out.X.col(static_cast<Eigen::Index>(i)) = U * g;
    }
    return out;
}

// N uniform (r+1)-subsets of {1..d}, by partial Fisher-Yates.
inline ObservationPattern uniform_mask(Rng& rng, std::size_t d, std::size_t r, std::size_t N) {
    std::vector<std::vector<std::size_t>> cols;
    std::vector<std::size_t> perm(d);
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < d; ++j) perm[j] = j + 1;
        for (std::size_t k = 0; k <= r; ++k)
            std::swap(perm[k], perm[k + rng.below(d - k)]);
        cols.emplace_back(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(r + 1));
    }
    return ObservationPattern::from_lists(d, r, cols);
}

inline bool mask_has_property(const ObservationPattern& p, MaskProperty prop,
                              const CertifierOptions& opts = {}) {
    switch (prop) {
        case MaskProperty::satisfies_t1:
            return certify_all_of_a_kind(p, opts).kind == CertificateKind::all_of_a_kind;
        case MaskProperty::satisfies_t2_only:
            return certify_uniqueness(p, opts).kind == CertificateKind::unique &&
                   certify_all_of_a_kind(p, opts).kind != CertificateKind::all_of_a_kind;
        case MaskProperty::fails_both:
            return certify_uniqueness(p, opts).kind == CertificateKind::indeterminate;
        case MaskProperty::explicit_mask: return true;
    }
    return false;
}

// Rejection sampling of uniform masks until the certifier confirms the
// requested property. Rows must all be observed whenever N(r+1) >= d.
inline ObservationPattern random_mask(const GenSpec& spec) {
    spec.validate();
    const std::size_t need = spec.d - spec.r;
    switch (spec.mask_property) {
        case MaskProperty::satisfies_t1:
            if (spec.N < need + 1)
                throw std::invalid_argument("t1 masks need N >= d-r+1 = " +
                                            std::to_string(need + 1));
            break;
        case MaskProperty::satisfies_t2_only:
            if (spec.N < need)
                throw std::invalid_argument("t2-only masks need N >= d-r = " +
                                            std::to_string(need));
            break;
        case MaskProperty::explicit_mask:
            throw std::invalid_argument("explicit masks are supplied, not generated");
        default: break;
    }
    const bool cover = spec.N * (spec.r + 1) >= spec.d;
    Rng rng(spec.seed, kMaskStream);
    for (int attempt = 0; attempt < kMaskAttempts; ++attempt) {
        auto p = uniform_mask(rng, spec.d, spec.r, spec.N);
        if (cover && validate_assumptions(p).has(Violation::unobserved_row)) continue;
        if (mask_has_property(p, spec.mask_property)) return p;
    }
    throw GenerationError("no " + to_string(spec.mask_property) + " mask with d=" +
                          std::to_string(spec.d) + ", r=" + std::to_string(spec.r) +
                          ", N=" + std::to_string(spec.N) + " after " +
                          std::to_string(kMaskAttempts) + " attempts; try a larger N");
}

}  // namespace fitcert
