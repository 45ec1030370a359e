#pragma once

// Combinatorial certificates: independence of observation sets, matroid rank,
// bases of a column, and the two fitting certificates.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "detail/hopcroft_karp.hpp"
#include "errors.hpp"
#include "mask.hpp"

namespace fitcert {

enum class Engine { automatic, brute_force, matching, both };

inline std::string to_string(Engine e) {
    switch (e) {
        case Engine::automatic: return "auto";
        case Engine::brute_force: return "brute";
        case Engine::matching: return "matching";
        case Engine::both: return "both";
    }
    return "?";
}

struct CertifierOptions {
    Engine engine = Engine::automatic;
    // Budget for subset enumeration (brute engine) and for the witness searches.
    std::uint64_t enumeration_cap = std::uint64_t{1} << 20;
    unsigned threads = 1;
};

struct IndependenceVerdict {
    bool independent = true;
    std::optional<ColumnSet> violating_subset;
};

struct BasisWitness {
    std::size_t target = 0;
    ColumnSet basis_columns;
};

struct TraceEntry {
    ColumnSet subset;
    std::size_t n = 0;
    std::size_t m = 0;

    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

enum class CertificateKind { unique, all_of_a_kind, indeterminate };

inline std::string to_string(CertificateKind k) {
    switch (k) {
        case CertificateKind::unique: return "UNIQUE";
        case CertificateKind::all_of_a_kind: return "ALL_OF_A_KIND";
        case CertificateKind::indeterminate: return "INDETERMINATE";
    }
    return "?";
}

struct Certificate {
    CertificateKind kind = CertificateKind::indeterminate;
    ColumnSet witness;
    std::size_t r = 0;
    std::size_t d = 0;
    std::vector<TraceEntry> trace;
    std::optional<ColumnSet> violating_subset;

    friend bool operator==(const Certificate&, const Certificate&) = default;
};

namespace detail {

inline bool fits_cap(std::size_t n, std::uint64_t cap) {
    return n < 64 && (std::uint64_t{1} << n) <= cap;
}

// Row sets of the columns as bitsets, plus the two engines that decide
// "m >= n + r for every nonempty subset".
class IndependenceTester {
public:
    IndependenceTester(const ObservationPattern& pattern, CertifierOptions opts)
        : pattern_(pattern), opts_(opts), r_(pattern.rank()),
          words_((pattern.ambient_dim() + 63) / 64), bits_(pattern.size() * words_, 0) {
        for (std::size_t i = 1; i <= pattern.size(); ++i) {
            const auto& s = pattern.column(i);
            if (s.size() != r_ + 1)
                throw std::invalid_argument(
                    "column " + std::to_string(i) + " has " + std::to_string(s.size()) +
                    " observed rows; independence needs exactly r+1 = " + std::to_string(r_ + 1) +
                    " (split or drop it first)");
            for (auto j : s.indices()) bits_[(i - 1) * words_ + (j - 1) / 64] |= bit(j - 1);
        }
        if (opts_.threads == 0) opts_.threads = 1;
    }

    const ObservationPattern& pattern() const noexcept { return pattern_; }
    const CertifierOptions& options() const noexcept { return opts_; }

    bool independent(const ColumnSet& cols) const {
        if (cols.empty()) return true;
        switch (pick(cols.size())) {
            case Engine::brute_force: return brute_independent(cols);
            case Engine::matching: return matching_independent(cols, nullptr);
            default: {
                bool a = brute_independent(cols);
                bool b = matching_independent(cols, nullptr);
                if (a != b) throw EngineDisagreement(disagreement(cols, a, b));
                return a;
            }
        }
    }

    // Is base ∪ {col} independent, given that base already is?
    bool extends(const ColumnSet& base, std::size_t col) const {
        ColumnSet all = base;
        all.insert(std::lower_bound(all.begin(), all.end(), col), col);
        switch (pick(base.size())) {
            case Engine::brute_force: return brute_extends(base, col);
            case Engine::matching: return matching_independent(all, nullptr);
            default: {
                bool a = brute_extends(base, col);
                bool b = matching_independent(all, nullptr);
                if (a != b) throw EngineDisagreement(disagreement(all, a, b));
                return a;
            }
        }
    }

    IndependenceVerdict verdict(const ColumnSet& cols) const {
        if (cols.empty()) return {};
        auto engine = pick(cols.size());
        if (engine == Engine::matching) {
            ColumnSet hall;
            if (matching_independent(cols, &hall)) return {};
            return {false, shrink_to_circuit(hall)};
        }
        bool ok = brute_independent(cols);
        if (engine == Engine::both) {
            bool b = matching_independent(cols, nullptr);
            if (ok != b) throw EngineDisagreement(disagreement(cols, ok, b));
        }
        if (ok) return {};
        return {false, brute_min_violator(cols)};
    }

    std::size_t rows_touched(const ColumnSet& cols) const {
        std::vector<std::uint64_t> acc(words_, 0);
        for (auto c : cols) or_into(acc, c);
        return count(acc);
    }

private:
    static std::uint64_t bit(std::size_t k) { return std::uint64_t{1} << (k % 64); }

    const std::uint64_t* row_bits(std::size_t col) const { return &bits_[(col - 1) * words_]; }

    void or_into(std::vector<std::uint64_t>& acc, std::size_t col) const {
        const auto* b = row_bits(col);
        for (std::size_t w = 0; w < words_; ++w) acc[w] |= b[w];
    }

    std::size_t count(const std::vector<std::uint64_t>& acc) const {
        std::size_t m = 0;
        for (auto w : acc) m += static_cast<std::size_t>(std::popcount(w));
        return m;
    }

    Engine pick(std::size_t n) const {
        switch (opts_.engine) {
            case Engine::automatic:
                return fits_cap(n, opts_.enumeration_cap) ? Engine::brute_force : Engine::matching;
            case Engine::brute_force:
                if (!fits_cap(n, opts_.enumeration_cap))
                    throw CapacityError("brute-force enumeration over " + std::to_string(n) +
                                            " columns needs the matching engine",
                                        opts_.enumeration_cap);
                return Engine::brute_force;
            case Engine::both:
                if (!fits_cap(n, opts_.enumeration_cap))
                    throw CapacityError("cross-checking " + std::to_string(n) +
                                            " columns by brute force",
                                        opts_.enumeration_cap);
                return Engine::both;
            default: return Engine::matching;
        }
    }

    static std::string disagreement(const ColumnSet& cols, bool brute, bool matching) {
        std::string s = "engines disagree on {";
        for (std::size_t k = 0; k < cols.size(); ++k) s += (k ? "," : "") + std::to_string(cols[k]);
        s += "}: brute=" + std::string(brute ? "independent" : "dependent") +
             ", matching=" + (matching ? "independent" : "dependent");
        return s;
    }

    // Depth-first walk over subsets T of cols (in lexicographic order) with
    // `fixed` rows and `fixed_n` columns always included. Returns false at the
    // first T with m < n + r. Empty T is checked only when fixed_n > 0.
    bool brute_scan(const ColumnSet& cols, std::vector<std::uint64_t> fixed,
                    std::size_t fixed_n) const {
        if (fixed_n > 0 && count(fixed) < fixed_n + r_) return false;
        std::vector<std::vector<std::uint64_t>> stack(cols.size() + 1, fixed);
        return brute_dfs(cols, stack, 0, 0, fixed_n);
    }

    bool brute_dfs(const ColumnSet& cols, std::vector<std::vector<std::uint64_t>>& stack,
                   std::size_t depth, std::size_t start, std::size_t fixed_n) const {
        for (std::size_t k = start; k < cols.size(); ++k) {
            auto& acc = stack[depth + 1];
            acc = stack[depth];
            or_into(acc, cols[k]);
            if (count(acc) < fixed_n + depth + 1 + r_) return false;
            if (!brute_dfs(cols, stack, depth + 1, k + 1, fixed_n)) return false;
        }
        return true;
    }

    bool brute_independent(const ColumnSet& cols) const {
        return brute_scan(cols, std::vector<std::uint64_t>(words_, 0), 0);
    }

    bool brute_extends(const ColumnSet& base, std::size_t col) const {
        std::vector<std::uint64_t> fixed(words_, 0);
        or_into(fixed, col);
        return brute_scan(base, std::move(fixed), 1);
    }

    // Smallest violating subset, lexicographically first among equals.
    ColumnSet brute_min_violator(const ColumnSet& cols) const {
        for (std::size_t k = 1; k <= cols.size(); ++k) {
            ColumnSet pick_idx;
            std::vector<std::uint64_t> acc(words_, 0);
            if (auto found = size_k_violator(cols, k, 0, acc, pick_idx)) return *found;
        }
        return cols;  // unreachable when cols is dependent
    }

    std::optional<ColumnSet> size_k_violator(const ColumnSet& cols, std::size_t k,
                                             std::size_t start,
                                             const std::vector<std::uint64_t>& acc,
                                             ColumnSet& chosen) const {
        if (chosen.size() == k) {
            if (count(acc) < k + r_) return chosen;
            return std::nullopt;
        }
        for (std::size_t i = start; i + (k - chosen.size()) <= cols.size(); ++i) {
            auto next = acc;
            or_into(next, cols[i]);
            chosen.push_back(cols[i]);
            auto got = size_k_violator(cols, k, i + 1, next, chosen);
            chosen.pop_back();
            if (got) return got;
        }
        return std::nullopt;
    }

    // For each r-subset R of the touched rows, the columns must be matched
    // into the remaining rows. `hall` receives a violating set on failure.
    bool matching_independent(const ColumnSet& cols, ColumnSet* hall) const {
        const std::size_t n = cols.size();
        std::vector<std::size_t> rows;
        std::vector<std::size_t> slot(pattern_.ambient_dim() + 1, BipartiteMatcher::npos);
        for (auto c : cols)
            for (auto j : pattern_.column(c).indices())
                if (slot[j] == BipartiteMatcher::npos) {
                    slot[j] = 0;
                    rows.push_back(j);
                }
        std::sort(rows.begin(), rows.end());
        for (std::size_t k = 0; k < rows.size(); ++k) slot[rows[k]] = k;
        const std::size_t m = rows.size();
        if (m < n + r_) {
            if (hall) *hall = cols;
            return false;
        }

        BipartiteMatcher proto(n, m);
        for (std::size_t u = 0; u < n; ++u)
            for (auto j : pattern_.column(cols[u]).indices()) proto.add_edge(u, slot[j]);

        // Worker t handles every threads-th deleted set; the lowest failing
        // enumeration index wins so the result does not depend on scheduling.
        constexpr auto none = std::numeric_limits<std::uint64_t>::max();
        std::atomic<std::uint64_t> first_fail{none};
        const unsigned nt = opts_.threads;
        std::vector<ColumnSet> found(nt);
        std::vector<std::uint64_t> found_at(nt, none);

        auto work = [&](unsigned t) {
            BipartiteMatcher g = proto;
            std::vector<std::size_t> R(r_);
            for (std::size_t k = 0; k < r_; ++k) R[k] = k;
            for (std::uint64_t idx = 0;; ++idx) {
                if (idx > first_fail.load(std::memory_order_relaxed)) return;
                if (idx % nt == t) {
                    for (auto v : R) g.set_enabled(v, false);
                    bool saturated = g.solve() == n;
                    if (!saturated) {
                        found_at[t] = idx;
                        for (auto u : g.hall_violator()) found[t].push_back(cols[u]);
                        auto cur = first_fail.load();
                        while (idx < cur && !first_fail.compare_exchange_weak(cur, idx)) {
                        }
                        return;
                    }
                    for (auto v : R) g.set_enabled(v, true);
                }
                // next r-combination of [0, m)
                std::size_t k = r_;
                while (k > 0 && R[k - 1] == m - r_ + k - 1) --k;
                if (k == 0) return;
                ++R[k - 1];
                for (std::size_t q = k; q < r_; ++q) R[q] = R[q - 1] + 1;
            }
        };

        if (nt == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < nt; ++t) pool.emplace_back(work, t);
            for (auto& th : pool) th.join();
        }
        const auto fail = first_fail.load();
        if (fail == none) return true;
        if (hall)
            for (unsigned t = 0; t < nt; ++t)
                if (found_at[t] == fail) *hall = found[t];
        return false;
    }

    // Delete columns (largest index first) while the remainder stays
    // dependent. The result is a circuit, hence itself violates m >= n + r.
    ColumnSet shrink_to_circuit(ColumnSet cols) const {
        for (std::size_t k = cols.size(); k-- > 0;) {
            if (cols.size() == 1) break;
            ColumnSet rest = cols;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
            if (!matching_independent(rest, nullptr)) cols = std::move(rest);
        }
        return cols;
    }

    const ObservationPattern& pattern_;
    CertifierOptions opts_;
    std::size_t r_;
    std::size_t words_;
    std::vector<std::uint64_t> bits_;
};

inline TraceEntry trace_of(const ObservationPattern& p, const ColumnSet& s) {
    auto st = subset_stats(p, s);
    return {st.column_ids, st.n, st.m};
}

class SearchBudget {
public:
    SearchBudget(std::uint64_t cap, std::string what) : cap_(cap), what_(std::move(what)) {}

    void tick() {
        if (++used_ > cap_) throw CapacityError(what_, cap_);
    }

private:
    std::uint64_t cap_;
    std::uint64_t used_ = 0;
    std::string what_;
};

inline ColumnSet greedy(const IndependenceTester& t, const ColumnSet& sel, std::size_t limit,
                        std::vector<TraceEntry>* trace) {
    ColumnSet basis;
    for (auto c : sel) {
        if (basis.size() >= limit) break;
        if (trace) {
            ColumnSet probe = basis;
            probe.insert(std::lower_bound(probe.begin(), probe.end(), c), c);
            trace->push_back(trace_of(t.pattern(), probe));
        }
        if (t.extends(basis, c)) basis.insert(std::lower_bound(basis.begin(), basis.end(), c), c);
    }
    return basis;
}

inline ColumnSet with(ColumnSet s, std::size_t c) {
    s.insert(std::lower_bound(s.begin(), s.end(), c), c);
    return s;
}

inline ColumnSet without(const ColumnSet& s, std::size_t c) {
    ColumnSet out;
    out.reserve(s.size());
    for (auto x : s)
        if (x != c) out.push_back(x);
    return out;
}

// B ∪ {t} is a circuit: every set obtained by dropping one member of B ∪ {t}
// is independent (B itself is checked by the caller).
inline bool closes_circuit(const IndependenceTester& t, const ColumnSet& B, std::size_t target) {
    for (auto b : B)
        if (!t.independent(with(without(B, b), target))) return false;
    return true;
}

// First B (lexicographic) of exactly `size` columns from `pool` with B ∪ {target}
// a circuit. Prefixes P keep P ∪ {target} independent, which every proper
// subset of such a B must.
inline std::optional<ColumnSet> circuit_search(const IndependenceTester& t, std::size_t target,
                                               const ColumnSet& pool, std::size_t size,
                                               SearchBudget& budget) {
    ColumnSet prefix;
    std::optional<ColumnSet> out;
    auto rec = [&](auto&& self, std::size_t start) -> bool {
        for (std::size_t i = start; i + (size - prefix.size()) <= pool.size(); ++i) {
            budget.tick();
            const auto c = pool[i];
            if (prefix.size() + 1 < size) {
                if (!t.extends(with(prefix, target), c)) continue;
                prefix.push_back(c);
                if (self(self, i + 1)) return true;
                prefix.pop_back();
            } else {
                if (!t.extends(prefix, c)) continue;
                ColumnSet B = with(prefix, c);
                if (t.extends(B, target)) continue;
                if (!closes_circuit(t, B, target)) continue;
                out = std::move(B);
                return true;
            }
        }
        return false;
    };
    if (size == 0) return std::nullopt;
    rec(rec, 0);
    return out;
}

inline void check_target(const ObservationPattern& p, std::size_t target) {
    if (target < 1 || target > p.size())
        throw BoundsError("column " + std::to_string(target) + " outside [1, " +
                          std::to_string(p.size()) + "]");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Independence and rank

inline IndependenceVerdict is_independent(const ObservationPattern& pattern,
                                          const ColumnSet& selection,
                                          const CertifierOptions& opts = {}) {
    auto sel = normalize_selection(pattern, selection);
    detail::IndependenceTester t(pattern, opts);
    return t.verdict(sel);
}

// Greedy maximal independent subset, scanning columns in ascending order.
inline ColumnSet greedy_basis(const ObservationPattern& pattern, const ColumnSet& selection,
                              const CertifierOptions& opts = {}) {
    auto sel = normalize_selection(pattern, selection);
    detail::IndependenceTester t(pattern, opts);
    return detail::greedy(t, sel, pattern.ambient_dim() - pattern.rank(), nullptr);
}

inline std::size_t matroid_rank(const ObservationPattern& pattern, const ColumnSet& selection,
                                const CertifierOptions& opts = {}) {
    return greedy_basis(pattern, selection, opts).size();
}

inline bool is_redundant(const ObservationPattern& pattern, std::size_t target,
                         const ColumnSet& selection, const CertifierOptions& opts = {}) {
    detail::check_target(pattern, target);
    auto sel = normalize_selection(pattern, selection);
    if (std::binary_search(sel.begin(), sel.end(), target))
        throw std::invalid_argument("target column " + std::to_string(target) +
                                    " must not be part of the selection");
    detail::IndependenceTester t(pattern, opts);
    const std::size_t limit = pattern.ambient_dim() - pattern.rank();
    auto base = detail::greedy(t, sel, limit, nullptr);
    return base.size() == limit || !t.extends(base, target);
}

// ---------------------------------------------------------------------------
// Bases of a column

// First basis of `target` with exactly `size` columns, lexicographic order.
inline std::optional<BasisWitness> find_basis_of_size(const ObservationPattern& pattern,
                                                      std::size_t target,
                                                      const ColumnSet& selection, std::size_t size,
                                                      const CertifierOptions& opts = {}) {
    detail::check_target(pattern, target);
    auto pool = detail::without(normalize_selection(pattern, selection), target);
    detail::IndependenceTester t(pattern, opts);
    detail::SearchBudget budget(opts.enumeration_cap, "basis search");
    auto B = detail::circuit_search(t, target, pool, size, budget);
    if (!B) return std::nullopt;
    return BasisWitness{target, *B};
}

// Smallest basis of `target` inside `selection`, lexicographically first
// among the smallest; absent when target is not redundant on the selection.
inline std::optional<BasisWitness> find_basis_of(const ObservationPattern& pattern,
                                                 std::size_t target, const ColumnSet& selection,
                                                 const CertifierOptions& opts = {}) {
    if (!is_redundant(pattern, target, selection, opts)) return std::nullopt;
    auto pool = normalize_selection(pattern, selection);
    detail::IndependenceTester t(pattern, opts);
    detail::SearchBudget budget(opts.enumeration_cap, "basis search");
    for (std::size_t k = 1; k <= pool.size(); ++k)
        if (auto B = detail::circuit_search(t, target, pool, k, budget))
            return BasisWitness{target, *B};
    return std::nullopt;
}

// Every basis of `target` inside `selection`, ordered by size then
// lexicographically. When target itself is selected, {target} is listed as
// its trivial basis.
inline std::vector<BasisWitness> enumerate_bases_of(const ObservationPattern& pattern,
                                                    std::size_t target,
                                                    const ColumnSet& selection,
                                                    const CertifierOptions& opts = {}) {
    detail::check_target(pattern, target);
    auto sel = normalize_selection(pattern, selection);
    auto pool = detail::without(sel, target);
    detail::IndependenceTester t(pattern, opts);
    detail::SearchBudget budget(opts.enumeration_cap, "basis enumeration");

    std::vector<BasisWitness> out;
    if (std::binary_search(sel.begin(), sel.end(), target)) out.push_back({target, {target}});

    ColumnSet prefix;
    auto rec = [&](auto&& self, std::size_t start) -> void {
        for (std::size_t i = start; i < pool.size(); ++i) {
            budget.tick();
            const auto c = pool[i];
            if (!t.extends(prefix, c)) continue;
            ColumnSet Q = detail::with(prefix, c);
            if (t.extends(Q, target)) {
                prefix.push_back(c);
                self(self, i + 1);
                prefix.pop_back();
            } else if (detail::closes_circuit(t, Q, target)) {
                out.push_back({target, std::move(Q)});
            }
        }
    };
    rec(rec, 0);
    std::stable_sort(out.begin(), out.end(), [](const BasisWitness& a, const BasisWitness& b) {
        if (a.basis_columns.size() != b.basis_columns.size())
            return a.basis_columns.size() < b.basis_columns.size();
        return a.basis_columns < b.basis_columns;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Certificates

inline Certificate certify_uniqueness(const ObservationPattern& pattern,
                                      const CertifierOptions& opts = {}) {
    detail::IndependenceTester t(pattern, opts);
    Certificate cert;
    cert.r = pattern.rank();
    cert.d = pattern.ambient_dim();
    const std::size_t need = cert.d - cert.r;
    auto basis = detail::greedy(t, pattern.all_columns(), need, &cert.trace);
    cert.witness = basis;
    if (basis.size() == need) {
        cert.kind = CertificateKind::unique;
        cert.trace.push_back(detail::trace_of(pattern, basis));
        return cert;
    }
    cert.kind = CertificateKind::indeterminate;
    auto v = t.verdict(pattern.all_columns());
    if (!v.independent) {
        cert.violating_subset = v.violating_subset;
        cert.trace.push_back(detail::trace_of(pattern, *v.violating_subset));
    }
    return cert;
}

// Lexicographically first set of d-r+1 columns whose proper subsets are all
// independent. Falls back to the uniqueness certificate when there is none.
inline Certificate certify_all_of_a_kind(const ObservationPattern& pattern,
                                         const CertifierOptions& opts = {}) {
    const std::size_t d = pattern.ambient_dim(), r = pattern.rank(), need = d - r;
    if (pattern.size() < need + 1) return certify_uniqueness(pattern, opts);

    detail::IndependenceTester t(pattern, opts);
    const auto all = pattern.all_columns();
    if (detail::greedy(t, all, need, nullptr).size() < need)
        return certify_uniqueness(pattern, opts);

    detail::SearchBudget budget(opts.enumeration_cap, "all-of-a-kind witness search");
    for (auto c : all) {
        // No witness contains a column below c (those searches were exhaustive).
        ColumnSet pool(all.begin() + static_cast<std::ptrdiff_t>(c), all.end());
        if (pool.size() < need) break;
        if (detail::greedy(t, pool, need, nullptr).size() < need) continue;
        auto B = detail::circuit_search(t, c, pool, need, budget);
        if (!B) continue;

        Certificate cert;
        cert.kind = CertificateKind::all_of_a_kind;
        cert.r = r;
        cert.d = d;
        cert.witness = detail::with(*B, c);
        cert.trace.push_back(detail::trace_of(pattern, cert.witness));
        for (auto x : cert.witness)
            cert.trace.push_back(detail::trace_of(pattern, detail::without(cert.witness, x)));
        return cert;
    }
    return certify_uniqueness(pattern, opts);
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json certificate_to_json(const Certificate& c) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& e : c.trace) trace.push_back({{"subset", e.subset}, {"n", e.n}, {"m", e.m}});
    nlohmann::json j = {{"kind", to_string(c.kind)},
                        {"witness", c.witness},
                        {"r", c.r},
                        {"d", c.d},
                        {"trace", trace}};
    if (c.violating_subset) j["violating_subset"] = *c.violating_subset;
    return j;
}

inline Certificate certificate_from_json(const nlohmann::json& j) {
    try {
        Certificate c;
        auto kind = j.at("kind").get<std::string>();
        if (kind == "UNIQUE")
            c.kind = CertificateKind::unique;
        else if (kind == "ALL_OF_A_KIND")
            c.kind = CertificateKind::all_of_a_kind;
        else if (kind == "INDETERMINATE")
            c.kind = CertificateKind::indeterminate;
        else
            throw FormatError("unknown certificate kind '" + kind + "'");
        c.witness = j.at("witness").get<ColumnSet>();
        c.r = j.at("r").get<std::size_t>();
        c.d = j.at("d").get<std::size_t>();
        for (const auto& e : j.at("trace"))
            c.trace.push_back(
                {e.at("subset").get<ColumnSet>(), e.at("n").get<std::size_t>(),
                 e.at("m").get<std::size_t>()});
        if (j.contains("violating_subset"))
            c.violating_subset = j.at("violating_subset").get<ColumnSet>();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad certificate JSON: ") + e.what());
    }
}

}  // namespace fitcert
