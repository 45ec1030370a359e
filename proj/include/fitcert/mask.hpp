#pragma once

// Observation patterns: which rows of which columns are observed.
//
// Row and column indices are 1-based everywhere in the public interface.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"

namespace fitcert {

using ColumnSet = std::vector<std::size_t>;
using RowSet = std::vector<std::size_t>;

inline constexpr char kObserved = 'x';
inline constexpr char kMissing = '.';

class ObservationSet {
public:
    ObservationSet(std::vector<std::size_t> indices, std::size_t ambient_dim)
        : indices_(std::move(indices)), ambient_dim_(ambient_dim) {
        if (ambient_dim_ == 0) throw std::invalid_argument("ambient dimension must be positive");
        if (indices_.empty()) throw std::invalid_argument("observation set must not be empty");
        std::sort(indices_.begin(), indices_.end());
        if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
            throw std::invalid_argument("observation set has duplicate row indices");
        if (indices_.front() < 1 || indices_.back() > ambient_dim_)
            throw BoundsError("row index outside [1, " + std::to_string(ambient_dim_) + "]");
    }

    const std::vector<std::size_t>& indices() const noexcept { return indices_; }
    std::size_t size() const noexcept { return indices_.size(); }
    std::size_t ambient_dim() const noexcept { return ambient_dim_; }
    std::size_t max() const noexcept { return indices_.back(); }

    bool contains(std::size_t row) const {
        return std::binary_search(indices_.begin(), indices_.end(), row);
    }

    friend bool operator==(const ObservationSet&, const ObservationSet&) = default;

private:
    std::vector<std::size_t> indices_;
    std::size_t ambient_dim_;
};

class ObservationPattern {
public:
    ObservationPattern(std::vector<ObservationSet> sets, std::size_t ambient_dim, std::size_t rank)
        : sets_(std::move(sets)), ambient_dim_(ambient_dim), rank_(rank) {
        if (rank_ < 1) throw std::invalid_argument("rank must be at least 1");
        if (rank_ >= ambient_dim_)
            throw std::invalid_argument("rank " + std::to_string(rank_) +
                                        " must be smaller than the ambient dimension " +
                                        std::to_string(ambient_dim_));
        for (const auto& s : sets_)
            if (s.ambient_dim() != ambient_dim_)
                throw std::invalid_argument("observation sets disagree on the ambient dimension");
    }

    // Convenience: build from plain 1-based index lists.
    static ObservationPattern from_lists(std::size_t d, std::size_t r,
                                         const std::vector<std::vector<std::size_t>>& columns) {
        std::vector<ObservationSet> sets;
        sets.reserve(columns.size());
        for (const auto& c : columns) sets.emplace_back(c, d);
        return ObservationPattern(std::move(sets), d, r);
    }

    std::size_t ambient_dim() const noexcept { return ambient_dim_; }
    std::size_t rank() const noexcept { return rank_; }
    std::size_t size() const noexcept { return sets_.size(); }
    const std::vector<ObservationSet>& sets() const noexcept { return sets_; }

    const ObservationSet& column(std::size_t i) const {
        if (i < 1 || i > sets_.size())
            throw BoundsError("column " + std::to_string(i) + " outside [1, " +
                              std::to_string(sets_.size()) + "]");
        return sets_[i - 1];
    }

    ColumnSet all_columns() const {
        ColumnSet out(sets_.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = i + 1;
        return out;
    }

    friend bool operator==(const ObservationPattern&, const ObservationPattern&) = default;

private:
    std::vector<ObservationSet> sets_;
    std::size_t ambient_dim_;
    std::size_t rank_;
};

struct SubsetStats {
    std::size_t n = 0;
    std::size_t m = 0;
    ColumnSet column_ids;
    RowSet row_ids;
};

// Sorted, deduplicated copy of a selection, checked against the pattern size.
inline ColumnSet normalize_selection(const ObservationPattern& pattern, ColumnSet selection) {
    std::sort(selection.begin(), selection.end());
    selection.erase(std::unique(selection.begin(), selection.end()), selection.end());
    if (!selection.empty() && (selection.front() < 1 || selection.back() > pattern.size()))
        throw BoundsError("selection index outside [1, " + std::to_string(pattern.size()) + "]");
    return selection;
}

inline SubsetStats subset_stats(const ObservationPattern& pattern, const ColumnSet& selection) {
    SubsetStats st;
    st.column_ids = normalize_selection(pattern, selection);
    std::vector<char> seen(pattern.ambient_dim() + 1, 0);
    for (std::size_t c : st.column_ids)
        for (std::size_t j : pattern.column(c).indices()) seen[j] = 1;
    for (std::size_t j = 1; j <= pattern.ambient_dim(); ++j)
        if (seen[j]) st.row_ids.push_back(j);
    st.n = st.column_ids.size();
    st.m = st.row_ids.size();
    return st;
}

// ---------------------------------------------------------------------------
// Grid text format

inline ObservationPattern parse_pattern(std::string_view text, std::size_t rank) {
    std::vector<std::string> rows;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string line(text.substr(pos, end - pos));
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        std::size_t first = line.find_first_not_of(" \t");
        if (first != std::string::npos && line[first] != '#') rows.push_back(line.substr(first));
        pos = end + 1;
    }
    if (rows.empty()) throw FormatError("mask grid is empty");

    const std::size_t width = rows.front().size();
    for (std::size_t j = 0; j < rows.size(); ++j) {
        if (rows[j].size() != width)
            throw FormatError("mask grid is ragged: row " + std::to_string(j + 1) + " has " +
                              std::to_string(rows[j].size()) + " cells, expected " +
                              std::to_string(width));
        for (std::size_t i = 0; i < width; ++i) {
            char ch = rows[j][i];
            if (ch != kObserved && ch != kMissing)
                throw FormatError(std::string("unknown character '") + ch + "' at row " +
                                  std::to_string(j + 1) + ", column " + std::to_string(i + 1));
        }
    }

    const std::size_t d = rows.size();
    std::vector<std::vector<std::size_t>> cols(width);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < width; ++i)
            if (rows[j][i] == kObserved) cols[i].push_back(j + 1);
    for (std::size_t i = 0; i < width; ++i)
        if (cols[i].empty())
            throw FormatError("column " + std::to_string(i + 1) + " has no observed entries");
    return ObservationPattern::from_lists(d, rank, cols);
}

inline std::string render_pattern(const ObservationPattern& pattern) {
    std::string out;
    out.reserve(pattern.ambient_dim() * (pattern.size() + 1));
    for (std::size_t j = 1; j <= pattern.ambient_dim(); ++j) {
        for (const auto& s : pattern.sets()) out.push_back(s.contains(j) ? kObserved : kMissing);
        out.push_back('\n');
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON form: {"d": int, "r": int, "columns": [[int,...],...]}

inline nlohmann::json pattern_to_json(const ObservationPattern& pattern) {
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& s : pattern.sets()) cols.push_back(s.indices());
    return {{"d", pattern.ambient_dim()}, {"r", pattern.rank()}, {"columns", cols}};
}

inline ObservationPattern pattern_from_json(const nlohmann::json& j) {
    try {
        auto d = j.at("d").get<std::size_t>();
        auto r = j.at("r").get<std::size_t>();
        auto cols = j.at("columns").get<std::vector<std::vector<std::size_t>>>();
        return ObservationPattern::from_lists(d, r, cols);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad mask JSON: ") + e.what());
    } catch (const BoundsError& e) {
        throw FormatError(std::string("bad mask JSON: ") + e.what());
    }
}

// Grid or JSON, detected by the first non-blank character. A rank given by
// the caller must match the one stored in JSON.
inline ObservationPattern load_pattern(std::string_view text, std::optional<std::size_t> rank) {
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw FormatError(std::string("bad mask JSON: ") + e.what());
        }
        auto p = pattern_from_json(j);
        if (rank && *rank != p.rank())
            throw std::invalid_argument("rank " + std::to_string(*rank) +
                                        " disagrees with the mask file's r=" +
                                        std::to_string(p.rank()));
        return p;
    }
    if (!rank) throw std::invalid_argument("a rank is required for grid masks");
    return parse_pattern(text, *rank);
}

// ---------------------------------------------------------------------------
// Assumption checks

enum class Violation { undersized, oversized, unobserved_row };

inline std::string to_string(Violation v) {
    switch (v) {
        case Violation::undersized: return "A4-undersized";
        case Violation::oversized: return "A4-oversized";
        case Violation::unobserved_row: return "A5";
    }
    return "?";
}

struct ValidationReport {
    struct Entry {
        Violation kind;
        ColumnSet columns;  // offending columns (A4)
        RowSet rows;        // unobserved rows (A5)
    };
    std::vector<Entry> entries;

    bool passed() const noexcept { return entries.empty(); }

    bool has(Violation v) const {
        return std::any_of(entries.begin(), entries.end(),
                           [v](const Entry& e) { return e.kind == v; });
    }

    std::string describe() const {
        std::ostringstream os;
        for (const auto& e : entries) {
            os << to_string(e.kind) << ':';
            const auto& ids = e.kind == Violation::unobserved_row ? e.rows : e.columns;
            os << (e.kind == Violation::unobserved_row ? " rows" : " columns");
            for (auto i : ids) os << ' ' << i;
            os << '\n';
        }
        return os.str();
    }
};

inline ValidationReport validate_assumptions(const ObservationPattern& pattern) {
    ValidationReport rep;
    const std::size_t target = pattern.rank() + 1;
    ColumnSet under, over;
    std::vector<char> seen(pattern.ambient_dim() + 1, 0);
    for (std::size_t i = 1; i <= pattern.size(); ++i) {
        const auto& s = pattern.column(i);
        if (s.size() < target) under.push_back(i);
        if (s.size() > target) over.push_back(i);
        for (auto j : s.indices()) seen[j] = 1;
    }
    if (!under.empty()) rep.entries.push_back({Violation::undersized, under, {}});
    if (!over.empty()) rep.entries.push_back({Violation::oversized, over, {}});
    RowSet missing;
    for (std::size_t j = 1; j <= pattern.ambient_dim(); ++j)
        if (!seen[j]) missing.push_back(j);
    if (!missing.empty()) rep.entries.push_back({Violation::unobserved_row, {}, missing});
    return rep;
}

// ---------------------------------------------------------------------------
// Oversized columns

// Staircase of |set| - r windows of width r+1 over the sorted indices. Every
// window adds one new row, so the windows form an independent family with
// m = n + r.
inline ObservationPattern split_oversized(const ObservationSet& set, std::size_t rank) {
    if (set.size() <= rank)
        throw UndersizedError("observation set of size " + std::to_string(set.size()) +
                              " cannot be split at rank " + std::to_string(rank) +
                              " (needs at least r+1 entries)");
    const auto& idx = set.indices();
    std::vector<ObservationSet> windows;
    for (std::size_t start = 0; start + rank < idx.size(); ++start)
        windows.emplace_back(
            std::vector<std::size_t>(idx.begin() + static_cast<std::ptrdiff_t>(start),
                                     idx.begin() + static_cast<std::ptrdiff_t>(start + rank + 1)),
            set.ambient_dim());
    return ObservationPattern(std::move(windows), set.ambient_dim(), rank);
}

// Pattern with every column of size exactly r+1: oversized columns are split,
// undersized ones either rejected or dropped. `origin[k]` is the input column
// that produced output column k+1.
struct NormalizedPattern {
    ObservationPattern pattern;
    std::vector<std::size_t> origin;
    ColumnSet dropped;
};

inline NormalizedPattern normalize_columns(const ObservationPattern& pattern, bool split,
                                           bool drop_undersized) {
    std::vector<ObservationSet> sets;
    std::vector<std::size_t> origin;
    ColumnSet dropped;
    const std::size_t r = pattern.rank();
    for (std::size_t i = 1; i <= pattern.size(); ++i) {
        const auto& s = pattern.column(i);
        if (s.size() <= r) {
            if (!drop_undersized)
                throw UndersizedError("column " + std::to_string(i) + " has " +
                                      std::to_string(s.size()) + " observed rows; at least " +
                                      std::to_string(r + 1) + " are required");
            dropped.push_back(i);
        } else if (s.size() > r + 1 && split) {
            auto windows = split_oversized(s, r);
            for (const auto& w : windows.sets()) {
                sets.push_back(w);
                origin.push_back(i);
            }
        } else {
            sets.push_back(s);
            origin.push_back(i);
        }
    }
    return {ObservationPattern(std::move(sets), pattern.ambient_dim(), r), std::move(origin),
            std::move(dropped)};
}

}  // namespace fitcert
