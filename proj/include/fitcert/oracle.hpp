#pragma once

// Ground truth by literal subset enumeration, and numeric agreement trials.
// Nothing here calls the certifier to decide independence.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "certifier.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "mask.hpp"
#include "synth.hpp"

namespace fitcert {

inline constexpr std::size_t kOracleMaxColumns = 20;

// ok[mask] says whether the columns in `mask` (bit k = sel[k]) form an
// independent set: m >= n + r for the set itself and, recursively, for every
// nonempty subset.
class SubsetTable {
public:
    SubsetTable(const ObservationPattern& pattern, const ColumnSet& selection)
        : sel_(normalize_selection(pattern, selection)) {
        if (sel_.size() > kOracleMaxColumns)
            throw CapacityError("oracle enumeration over " + std::to_string(sel_.size()) +
                                    " columns",
                                std::uint64_t{1} << kOracleMaxColumns);
        const std::size_t n = sel_.size(), r = pattern.rank();
        ok_.assign(std::size_t{1} << n, 1);
        std::vector<char> seen(pattern.ambient_dim() + 1);
        for (std::size_t mask = 1; mask < ok_.size(); ++mask) {
            std::fill(seen.begin(), seen.end(), 0);
            std::size_t m = 0, cnt = 0;
            for (std::size_t k = 0; k < n; ++k) {
                if (!(mask >> k & 1)) continue;
                ++cnt;
                for (auto j : pattern.column(sel_[k]).indices())
                    if (!seen[j]) {
                        seen[j] = 1;
                        ++m;
                    }
            }
            bool good = m >= cnt + r;
            for (std::size_t k = 0; good && k < n; ++k)
                if ((mask >> k & 1) && !ok_[mask ^ (std::size_t{1} << k)]) good = false;
            ok_[mask] = good;
        }
    }

    const ColumnSet& selection() const noexcept { return sel_; }
    std::size_t size() const noexcept { return sel_.size(); }
    bool independent(std::size_t mask) const { return ok_[mask]; }

    ColumnSet columns(std::size_t mask) const {
        ColumnSet out;
        for (std::size_t k = 0; k < sel_.size(); ++k)
            if (mask >> k & 1) out.push_back(sel_[k]);
        return out;
    }

    std::size_t mask_of(const ColumnSet& cols) const {
        std::size_t mask = 0;
        for (auto c : cols) {
            auto it = std::lower_bound(sel_.begin(), sel_.end(), c);
            if (it == sel_.end() || *it != c) throw BoundsError("column outside the table");
            mask |= std::size_t{1} << (it - sel_.begin());
        }
        return mask;
    }

private:
    ColumnSet sel_;
    std::vector<char> ok_;
};

inline bool brute_force_independent(const ObservationPattern& pattern,
                                    const ColumnSet& selection) {
    SubsetTable t(pattern, selection);
    return t.independent((std::size_t{1} << t.size()) - 1);
}

inline std::size_t brute_force_rank(const ObservationPattern& pattern,
                                    const ColumnSet& selection) {
    SubsetTable t(pattern, selection);
    std::size_t best = 0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << t.size()); ++mask)
        if (t.independent(mask))
            best = std::max<std::size_t>(best, static_cast<std::size_t>(std::popcount(mask)));
    return best;
}

// Some set of d-r+1 columns whose proper subsets are all independent; the
// lexicographically first one.
inline std::optional<ColumnSet> brute_force_all_of_a_kind(const ObservationPattern& pattern) {
    SubsetTable t(pattern, pattern.all_columns());
    const std::size_t k = pattern.ambient_dim() - pattern.rank() + 1;
    std::optional<ColumnSet> best;
    for (std::size_t mask = 1; mask < (std::size_t{1} << t.size()); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
        bool ok = true;
        for (std::size_t b = 0; ok && b < t.size(); ++b)
            if ((mask >> b & 1) && !t.independent(mask ^ (std::size_t{1} << b))) ok = false;
        if (!ok) continue;
        auto cols = t.columns(mask);
        if (!best || cols < *best) best = std::move(cols);
    }
    return best;
}

// ---------------------------------------------------------------------------
// Engine cross-check on every nonempty subset of a mask

struct EngineCheck {
    std::size_t subsets = 0;
    std::vector<ColumnSet> disagreements;

    bool agree() const noexcept { return disagreements.empty(); }
};

inline EngineCheck crosscheck_engines(const ObservationPattern& pattern,
                                      const CertifierOptions& base = {}) {
    SubsetTable t(pattern, pattern.all_columns());
    CertifierOptions brute = base, matching = base;
    brute.engine = Engine::brute_force;
    matching.engine = Engine::matching;
    EngineCheck out;
    for (std::size_t mask = 1; mask < (std::size_t{1} << t.size()); ++mask) {
        auto cols = t.columns(mask);
        bool truth = t.independent(mask);
        bool b = is_independent(pattern, cols, brute).independent;
        bool m = is_independent(pattern, cols, matching).independent;
        ++out.subsets;
        if (b != truth || m != truth) out.disagreements.push_back(std::move(cols));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Numeric agreement trials

struct TrialRow {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::string mode;
    std::size_t ell = 0;            // combinatorial rank
    std::size_t numeric_rank = 0;   // rank of A
    std::size_t kernel_dim = 0;
    bool t1 = false;                // mask holds an all-of-a-kind witness
    std::string outcome;            // agree | disagree | skipped | error
    std::string detail;
};

struct AgreementReport {
    std::vector<TrialRow> rows;

    std::size_t count(const std::string& outcome) const {
        std::size_t k = 0;
        for (const auto& r : rows) k += r.outcome == outcome;
        return k;
    }
    std::size_t agreed() const { return count("agree"); }
    std::size_t checked() const { return rows.size() - count("skipped"); }
    bool full_agreement() const { return agreed() == checked(); }

    std::string jsonl() const {
        std::string out;
        for (const auto& r : rows) {
            nlohmann::json j = {{"trial", r.trial},       {"seed", r.seed},
                                {"mode", r.mode},         {"ell", r.ell},
                                {"numeric_rank", r.numeric_rank},
                                {"kernel_dim", r.kernel_dim}, {"t1", r.t1},
                                {"outcome", r.outcome}};
            if (!r.detail.empty()) j["detail"] = r.detail;
            out += j.dump() + '\n';
        }
        return out;
    }
};

inline constexpr std::size_t kTrialMaxDim = 12;
inline constexpr std::size_t kTrialMaxColumns = 12;

// One trial on a fixed mask with the arrangement drawn from `spec`.
// ALL_SAME: rank(A) must equal the combinatorial rank and dim ker A = d - rank.
// MIXED on a mask with an all-of-a-kind witness: dim ker A < r. MIXED on
// other masks asserts nothing.
inline TrialRow run_trial(const ObservationPattern& pattern, const GenSpec& spec,
                          std::size_t index) {
    TrialRow row;
    row.trial = index;
    row.seed = spec.seed;
    row.mode = to_string(spec.assignment_mode);
    try {
        const std::size_t d = pattern.ambient_dim(), r = pattern.rank();
        row.ell = brute_force_rank(pattern, pattern.all_columns());
        row.t1 = pattern.size() > d - r && brute_force_all_of_a_kind(pattern).has_value();
        GenSpec s = spec;
        s.N = pattern.size();
        auto arrangement = random_arrangement(s);
        auto A = assemble_A(arrangement, pattern);
        row.numeric_rank = numeric_rank(A.matrix());
        row.kernel_dim = d - row.numeric_rank;
        if (spec.assignment_mode == AssignmentMode::all_same) {
            bool ok = row.numeric_rank == row.ell && row.kernel_dim == d - row.ell;
            row.outcome = ok ? "agree" : "disagree";
        } else if (row.t1) {
            row.outcome = row.kernel_dim < r ? "agree" : "disagree";
        } else {
            row.outcome = "skipped";
        }
    } catch (const std::exception& e) {
        row.outcome = "error";
        row.detail = e.what();
    }
    return row;
}

namespace detail {

template <class F>
AgreementReport run_trials(std::size_t trials, unsigned threads, F one) {
    AgreementReport rep;
    rep.rows.resize(trials);
    if (threads <= 1 || trials < 2) {
        for (std::size_t t = 0; t < trials; ++t) rep.rows[t] = one(t);
        return rep;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t t = w; t < trials; t += threads) rep.rows[t] = one(t);
        });
    for (auto& th : pool) th.join();
    return rep;
}

inline void check_trial_spec(const GenSpec& spec) {
    spec.validate();
    if (spec.d > kTrialMaxDim || spec.N > kTrialMaxColumns)
        throw std::invalid_argument("agreement trials need d <= 12 and N <= 12");
}

}  // namespace detail

// Trial t uses seed spec.seed + t for both the mask and the arrangement.
inline AgreementReport agreement_trial(const GenSpec& spec, std::size_t trials,
                                       unsigned threads = 1) {
    detail::check_trial_spec(spec);
    return detail::run_trials(trials, threads, [&](std::size_t t) {
        GenSpec s = spec;
        s.seed = spec.seed + t;
        try {
            return run_trial(random_mask(s), s, t);
        } catch (const std::exception& e) {
            TrialRow row;
            row.trial = t;
            row.seed = s.seed;
            row.mode = to_string(s.assignment_mode);
            row.outcome = "error";
            row.detail = e.what();
            return row;
        }
    });
}

// Same, on one fixed mask; only the arrangement changes between trials.
inline AgreementReport agreement_trial(const ObservationPattern& pattern, const GenSpec& spec,
                                       std::size_t trials, unsigned threads = 1) {
    GenSpec s = spec;
    s.d = pattern.ambient_dim();
    s.r = pattern.rank();
    s.N = pattern.size();
    detail::check_trial_spec(s);
    return detail::run_trials(trials, threads, [&](std::size_t t) {
        GenSpec st = s;
        st.seed = s.seed + t;
        return run_trial(pattern, st, t);
    });
}

}  // namespace fitcert
