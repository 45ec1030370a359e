#pragma once

// Numeric side: subspace bases, restrictions, direction rows, the stacked
// constraint matrix and fit tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "errors.hpp"
#include "mask.hpp"

namespace fitcert {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

inline constexpr double kRankTol = 1e-9;
inline constexpr double kFitTol = 1e-8;

inline Vector singular_values(const Matrix& M) {
    if (M.rows() == 0 || M.cols() == 0) return Vector();
    return Eigen::JacobiSVD<Matrix>(M).singularValues();
}

// Count of singular values above tol * sigma_max.
inline std::size_t numeric_rank(const Matrix& M, double tol = kRankTol) {
    Vector s = singular_values(M);
    if (s.size() == 0 || s(0) == 0.0) return 0;
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > tol * s(0)) ++k;
    return k;
}

// Orthonormal basis of the column span.
inline Matrix orthonormal_span(const Matrix& M, double tol = kRankTol) {
    if (M.rows() == 0 || M.cols() == 0) return Matrix(M.rows(), 0);
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    Eigen::Index k = 0;
    if (s(0) > 0)
        while (k < s.size() && s(k) > tol * s(0)) ++k;
    return svd.matrixU().leftCols(k);
}

class SubspaceBasis {
public:
    explicit SubspaceBasis(Matrix U, double tol = kRankTol) : U_(std::move(U)) {
        if (U_.cols() < 1 || U_.rows() <= U_.cols())
            throw std::invalid_argument("basis must be d x r with 1 <= r < d");
        if (!U_.allFinite()) throw std::invalid_argument("basis has non-finite entries");
        if (numeric_rank(U_, tol) != static_cast<std::size_t>(U_.cols()))
            throw std::invalid_argument("basis columns are linearly dependent");
    }

    const Matrix& matrix() const noexcept { return U_; }
    std::size_t ambient_dim() const noexcept { return static_cast<std::size_t>(U_.rows()); }
    std::size_t rank() const noexcept { return static_cast<std::size_t>(U_.cols()); }

private:
    Matrix U_;
};

struct Arrangement {
    std::vector<SubspaceBasis> bases;
    std::vector<std::size_t> assignment;  // 1-based subspace index per column

    const SubspaceBasis& basis_for(std::size_t column) const {
        if (column < 1 || column > assignment.size())
            throw BoundsError("column " + std::to_string(column) + " has no assignment");
        auto k = assignment[column - 1];
        if (k < 1 || k > bases.size())
            throw BoundsError("assignment " + std::to_string(k) + " outside [1, " +
                              std::to_string(bases.size()) + "]");
        return bases[k - 1];
    }
};

struct DirectionRow {
    RowVector row;
    ObservationSet support;
};

struct ConstraintMatrix {
    std::size_t d = 0;
    std::vector<DirectionRow> rows;

    Matrix matrix() const {
        Matrix A = Matrix::Zero(static_cast<Eigen::Index>(rows.size()),
                                static_cast<Eigen::Index>(d));
        for (std::size_t i = 0; i < rows.size(); ++i)
            A.row(static_cast<Eigen::Index>(i)) = rows[i].row;
        return A;
    }
};

inline Matrix restrict(const Matrix& U, const ObservationSet& set) {
    Matrix out(static_cast<Eigen::Index>(set.size()), U.cols());
    Eigen::Index k = 0;
    for (auto j : set.indices()) {
        if (j > static_cast<std::size_t>(U.rows()))
            throw BoundsError("row " + std::to_string(j) + " outside the basis");
        out.row(k++) = U.row(static_cast<Eigen::Index>(j - 1));
    }
    return out;
}

inline Matrix restrict(const SubspaceBasis& basis, const ObservationSet& set) {
    return restrict(basis.matrix(), set);
}

inline Vector restrict(const Vector& x, const ObservationSet& set) {
    Vector out(static_cast<Eigen::Index>(set.size()));
    Eigen::Index k = 0;
    for (auto j : set.indices()) out(k++) = x(static_cast<Eigen::Index>(j - 1));
    return out;
}

// ---------------------------------------------------------------------------
// Degeneracy

struct DegeneracyReport {
    bool degenerate = false;
    bool sampled = false;        // too many blocks; a random subset was checked
    std::optional<RowSet> block; // first deficient block, 1-based rows
};

inline constexpr std::uint64_t kDegeneracyBlockCap = 1'000'000;

namespace detail {

inline std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    long double acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        acc = acc * static_cast<long double>(n - k + i) / static_cast<long double>(i);
        if (acc > static_cast<long double>(cap)) return cap + 1;
    }
    return static_cast<std::uint64_t>(std::llround(acc));
}

inline bool block_deficient(const Matrix& U, const std::vector<std::size_t>& rows, double floor) {
    Matrix B(static_cast<Eigen::Index>(rows.size()), U.cols());
    for (std::size_t k = 0; k < rows.size(); ++k)
        B.row(static_cast<Eigen::Index>(k)) = U.row(static_cast<Eigen::Index>(rows[k]));
    Vector s = singular_values(B);
    return s(s.size() - 1) <= floor;
}

}  // namespace detail

// Some r x r row block is numerically singular (relative to sigma_max of U).
// Smaller deficient blocks always extend to a deficient r x r block, so only
// those are visited. Above kDegeneracyBlockCap blocks a seeded random sample
// of that many is checked instead and `sampled` is set.
inline DegeneracyReport degeneracy_report(const SubspaceBasis& basis, double tol = kRankTol) {
    const Matrix& U = basis.matrix();
    const std::size_t d = basis.ambient_dim(), r = basis.rank();
    const double floor = tol * singular_values(U)(0);
    DegeneracyReport rep;

    auto hit = [&](const std::vector<std::size_t>& rows) {
        if (!detail::block_deficient(U, rows, floor)) return false;
        rep.degenerate = true;
        RowSet b;
        for (auto j : rows) b.push_back(j + 1);
        rep.block = std::move(b);
        return true;
    };

    if (detail::binomial_capped(d, r, kDegeneracyBlockCap) <= kDegeneracyBlockCap) {
        std::vector<std::size_t> rows(r);
        for (std::size_t k = 0; k < r; ++k) rows[k] = k;
        while (true) {
            if (hit(rows)) return rep;
            std::size_t k = r;
            while (k > 0 && rows[k - 1] == d - r + k - 1) --k;
            if (k == 0) break;
            ++rows[k - 1];
            for (std::size_t q = k; q < r; ++q) rows[q] = rows[q - 1] + 1;
        }
        return rep;
    }

    rep.sampled = true;
    std::mt19937_64 gen(0x5eedULL);
    std::vector<std::size_t> all(d);
    for (std::size_t j = 0; j < d; ++j) all[j] = j;
    for (std::uint64_t t = 0; t < kDegeneracyBlockCap; ++t) {
        for (std::size_t k = 0; k < r; ++k) {
            std::uniform_int_distribution<std::size_t> pick(k, d - 1);
            std::swap(all[k], all[pick(gen)]);
        }
        std::vector<std::size_t> rows(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(r));
        std::sort(rows.begin(), rows.end());
        if (hit(rows)) return rep;
    }
    return rep;
}

inline bool is_degenerate(const SubspaceBasis& basis, double tol = kRankTol) {
    return degeneracy_report(basis, tol).degenerate;
}

// ---------------------------------------------------------------------------
// Direction rows and A

// a with a_pivot = 1 and a on set \ {pivot} equal to -U_pivot (U_rest)^{-1};
// zero off the set. a * U = 0.
inline DirectionRow direction_row(const SubspaceBasis& basis, const ObservationSet& set,
                                  std::size_t pivot, double tol = kRankTol) {
    const std::size_t r = basis.rank();
    if (set.size() != r + 1)
        throw std::invalid_argument("direction rows need |set| = r+1 = " + std::to_string(r + 1));
    if (!set.contains(pivot))
        throw std::invalid_argument("pivot " + std::to_string(pivot) + " not in the set");
    const Matrix& U = basis.matrix();

    std::vector<std::size_t> rest;
    for (auto j : set.indices())
        if (j != pivot) rest.push_back(j);
    Matrix Urest(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
    for (std::size_t k = 0; k < r; ++k)
        Urest.row(static_cast<Eigen::Index>(k)) = U.row(static_cast<Eigen::Index>(rest[k] - 1));

    Eigen::JacobiSVD<Matrix> svd(Urest, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= tol * singular_values(U)(0))
        throw DegeneracyError("rows {" + [&] {
            std::string t;
            for (std::size_t k = 0; k < rest.size(); ++k)
                t += (k ? "," : "") + std::to_string(rest[k]);
            return t;
        }() + "} of the basis are singular");

    // y^T = U_pivot Urest^{-1}  <=>  Urest^T y = U_pivot^T
    Vector y = Urest.transpose().fullPivLu().solve(
        U.row(static_cast<Eigen::Index>(pivot - 1)).transpose());

    RowVector a = RowVector::Zero(U.rows());
    a(static_cast<Eigen::Index>(pivot - 1)) = 1.0;
    for (std::size_t k = 0; k < r; ++k) a(static_cast<Eigen::Index>(rest[k] - 1)) = -y(static_cast<Eigen::Index>(k));
    return {a, set};
}

// Row i is the direction row of column i against its assigned subspace,
// pivoting on the largest observed row.
inline ConstraintMatrix assemble_A(const Arrangement& arrangement,
                                   const ObservationPattern& pattern, double tol = kRankTol) {
    if (arrangement.assignment.size() != pattern.size())
        throw std::invalid_argument("assignment has " +
                                    std::to_string(arrangement.assignment.size()) +
                                    " entries for " + std::to_string(pattern.size()) + " columns");
    ConstraintMatrix A;
    A.d = pattern.ambient_dim();
    for (std::size_t i = 1; i <= pattern.size(); ++i) {
        const auto& set = pattern.column(i);
        try {
            A.rows.push_back(direction_row(arrangement.basis_for(i), set, set.max(), tol));
        } catch (const DegeneracyError& e) {
            throw DegeneracyError("column " + std::to_string(i) + ": " + e.what());
        }
    }
    return A;
}

inline std::size_t kernel_dimension(const ConstraintMatrix& A, double tol = kRankTol) {
    return A.d - numeric_rank(A.matrix(), tol);
}

// Orthonormal basis (d x k) of ker A.
inline Matrix kernel_basis(const ConstraintMatrix& A, double tol = kRankTol) {
    const auto d = static_cast<Eigen::Index>(A.d);
    if (A.rows.empty()) return Matrix::Identity(d, d);
    Matrix M = A.matrix();
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullV);
    auto rank = static_cast<Eigen::Index>(numeric_rank(M, tol));
    return svd.matrixV().rightCols(d - rank);
}

// ---------------------------------------------------------------------------
// Fits

inline bool subspaces_equal(const Matrix& A, const Matrix& B, double tol = kFitTol) {
    Matrix QA = orthonormal_span(A), QB = orthonormal_span(B);
    if (QA.cols() != QB.cols()) return false;
    if (QA.cols() == 0) return true;
    double ab = (QB - QA * (QA.transpose() * QB)).norm();
    double ba = (QA - QB * (QB.transpose() * QA)).norm();
    return ab <= tol && ba <= tol;
}

// x restricted to the set lies in the span of the restricted basis.
inline bool fits(const Matrix& S, const Vector& x, const ObservationSet& set,
                 double tol = kFitTol) {
    Vector xw = restrict(x, set);
    if (!xw.allFinite()) throw std::invalid_argument("observed entries must be finite");
    Matrix Q = orthonormal_span(restrict(S, set));
    Vector res = Q.cols() ? Vector(xw - Q * (Q.transpose() * xw)) : xw;
    return res.norm() <= tol * std::max(1.0, xw.norm());
}

inline bool fits(const SubspaceBasis& S, const Vector& x, const ObservationSet& set,
                 double tol = kFitTol) {
    return fits(S.matrix(), x, set, tol);
}

// S_{omega_i} equals the restriction of the assigned true subspace, for every i.
inline bool fits_pattern(const Matrix& S, const Arrangement& arrangement,
                         const ObservationPattern& pattern, double tol = kFitTol) {
    if (static_cast<std::size_t>(S.rows()) != pattern.ambient_dim())
        throw std::invalid_argument("subspace and pattern disagree on d");
    for (std::size_t i = 1; i <= pattern.size(); ++i) {
        const auto& set = pattern.column(i);
        if (!subspaces_equal(restrict(S, set), restrict(arrangement.basis_for(i), set), tol))
            return false;
    }
    return true;
}

inline bool fits_pattern(const SubspaceBasis& S, const Arrangement& arrangement,
                         const ObservationPattern& pattern, double tol = kFitTol) {
    return fits_pattern(S.matrix(), arrangement, pattern, tol);
}

// ---------------------------------------------------------------------------
// Matrix files. Missing entries are NaN in memory, "." in CSV, null in JSON.

inline Matrix parse_matrix_csv(std::string_view text) {
    std::vector<std::vector<double>> rows;
    std::size_t pos = 0, lineno = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string line(text.substr(pos, end - pos));
        pos = end + 1;
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            auto b = cell.find_first_not_of(" \t\r");
            auto e = cell.find_last_not_of(" \t\r");
            if (b == std::string::npos)
                throw FormatError("empty cell on line " + std::to_string(lineno));
            cell = cell.substr(b, e - b + 1);
            if (cell == ".") {
                row.push_back(std::numeric_limits<double>::quiet_NaN());
                continue;
            }
            std::size_t used = 0;
            double v = 0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != cell.size())
                throw FormatError("bad number '" + cell + "' on line " + std::to_string(lineno));
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw FormatError("ragged matrix: line " + std::to_string(lineno) + " has " +
                              std::to_string(row.size()) + " cells");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw FormatError("matrix file is empty");
    Matrix M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return M;
}

inline std::string format_double(double v) {
    if (std::isnan(v)) return ".";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string render_matrix_csv(const Matrix& M) {
    std::string out;
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (j) out += ',';
            out += format_double(M(i, j));
        }
        out += '\n';
    }
    return out;
}

inline nlohmann::json matrix_to_json(const Matrix& M) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (std::isnan(M(i, j)))
                row.push_back(nullptr);
            else
                row.push_back(M(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw FormatError("matrix JSON must be a non-empty array of rows");
    const auto cols = j[0].size();
    Matrix M(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw FormatError("ragged matrix JSON at row " + std::to_string(i + 1));
        for (std::size_t k = 0; k < cols; ++k) {
            const auto& v = j[i][k];
            double x;
            if (v.is_null())
                x = std::numeric_limits<double>::quiet_NaN();
            else if (v.is_number())
                x = v.get<double>();
            else
                throw FormatError("non-numeric matrix entry at row " + std::to_string(i + 1));
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = x;
        }
    }
    return M;
}

// CSV or JSON, told apart by a leading '['.
inline Matrix load_matrix(std::string_view text) {
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '[') {
        try {
            return matrix_from_json(nlohmann::json::parse(text));
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(std::string("bad matrix JSON: ") + e.what());
        }
    }
    return parse_matrix_csv(text);
}

// Copy of X with every entry outside the pattern replaced by NaN.
inline Matrix mask_data(const Matrix& X, const ObservationPattern& pattern) {
    if (static_cast<std::size_t>(X.rows()) != pattern.ambient_dim() ||
        static_cast<std::size_t>(X.cols()) != pattern.size())
        throw std::invalid_argument("data shape does not match the mask");
    Matrix out = Matrix::Constant(X.rows(), X.cols(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 1; i <= pattern.size(); ++i)
        for (auto j : pattern.column(i).indices()) {
            auto r = static_cast<Eigen::Index>(j - 1), c = static_cast<Eigen::Index>(i - 1);
            out(r, c) = X(r, c);
        }
    return out;
}

inline nlohmann::json arrangement_to_json(const Arrangement& a) {
    nlohmann::json bases = nlohmann::json::array();
    for (const auto& b : a.bases) bases.push_back(matrix_to_json(b.matrix()));
    return {{"bases", bases}, {"assignment", a.assignment}};
}

inline Arrangement arrangement_from_json(const nlohmann::json& j) {
    try {
        Arrangement a;
        for (const auto& b : j.at("bases")) a.bases.emplace_back(matrix_from_json(b));
        a.assignment = j.at("assignment").get<std::vector<std::size_t>>();
        return a;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad arrangement JSON: ") + e.what());
    }
}

}  // namespace fitcert
