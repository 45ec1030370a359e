#pragma once

// Subcommand bodies for the fitcert tool. Each returns the process exit code:
// 0 certified / agreement, 1 negative verdict, 2 usage or input error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <fitcert/fitcert.hpp>

namespace fitcert::cli {

inline constexpr int kOk = 0;
inline constexpr int kNegative = 1;
inline constexpr int kInputError = 2;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

inline std::string join(const std::vector<std::size_t>& v, const char* sep = " ") {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? sep : "") + std::to_string(v[k]);
    return s;
}

inline Engine parse_engine(const std::string& s) {
    if (s == "auto") return Engine::automatic;
    if (s == "brute") return Engine::brute_force;
    if (s == "matching") return Engine::matching;
    if (s == "both") return Engine::both;
    throw std::invalid_argument("unknown engine '" + s + "'");
}

inline void print_certificate(std::ostream& out, const Certificate& c) {
    out << "kind: " << to_string(c.kind) << '\n';
    out << "d=" << c.d << " r=" << c.r << '\n';
    out << "witness: {" << join(c.witness, ",") << "}\n";
    if (c.violating_subset) out << "violating subset: {" << join(*c.violating_subset, ",") << "}\n";
    out << "trace:\n";
    for (const auto& e : c.trace)
        out << "  {" << join(e.subset, ",") << "} n=" << e.n << " m=" << e.m << '\n';
}

// ---------------------------------------------------------------------------
// certify

struct CertifyArgs {
    std::string mask_path;
    std::optional<std::size_t> rank;
    std::string mode = "t2";  // t1 | t2 | independence
    std::string engine = "auto";
    bool json = false;
    bool split_oversized = false;
    bool drop_undersized = false;
    std::uint64_t cap = std::uint64_t{1} << 20;
    unsigned threads = 1;
};

// Reads a mask and brings it to |omega| = r+1 everywhere, or explains why not.
inline ObservationPattern prepare_pattern(const ObservationPattern& raw, bool split, bool drop,
                                          std::ostream& err) {
    auto report = validate_assumptions(raw);
    for (const auto& e : report.entries) {
        if (e.kind == Violation::undersized && !drop)
            throw UndersizedError("columns with at most r observed rows: " + join(e.columns) +
                                  " (pass --drop-undersized to ignore them)");
        if (e.kind == Violation::oversized && !split)
            throw std::invalid_argument("columns with more than r+1 observed rows: " +
                                        join(e.columns) + " (pass --split-oversized to split them)");
    }
    auto norm = normalize_columns(raw, split, drop);
    if (!norm.dropped.empty())
        err << "warning: dropped undersized columns " << join(norm.dropped) << '\n';
    if (norm.pattern.size() != raw.size() - norm.dropped.size()) {
        err << "note: columns after splitting come from input columns";
        for (auto o : norm.origin) err << ' ' << o;
        err << '\n';
    }
    if (norm.pattern.size() == 0) throw std::invalid_argument("no usable columns left");
    auto after = validate_assumptions(norm.pattern);
    if (after.has(Violation::unobserved_row))
        err << "warning: " << after.describe();
    return norm.pattern;
}

inline int cmd_certify(const CertifyArgs& a, std::ostream& out, std::ostream& err) {
    try {
        CertifierOptions opts;
        opts.engine = parse_engine(a.engine);
        opts.enumeration_cap = a.cap;
        opts.threads = a.threads;
        auto raw = load_pattern(read_file(a.mask_path), a.rank);
        auto pattern = prepare_pattern(raw, a.split_oversized, a.drop_undersized, err);

        if (a.mode == "independence") {
            auto v = is_independent(pattern, pattern.all_columns(), opts);
            if (a.json) {
                nlohmann::json j = {{"independent", v.independent},
                                    {"r", pattern.rank()},
                                    {"d", pattern.ambient_dim()}};
                if (v.violating_subset) {
                    auto st = subset_stats(pattern, *v.violating_subset);
                    j["violating_subset"] = *v.violating_subset;
                    j["n"] = st.n;
                    j["m"] = st.m;
                }
                out << j.dump() << '\n';
            } else {
                out << (v.independent ? "independent" : "dependent") << '\n';
                if (v.violating_subset) {
                    auto st = subset_stats(pattern, *v.violating_subset);
                    out << "violating subset: {" << join(*v.violating_subset, ",") << "} n=" << st.n
                        << " m=" << st.m << " < n+r=" << st.n + pattern.rank() << '\n';
                }
            }
            return v.independent ? kOk : kNegative;
        }

        Certificate c;
        CertificateKind wanted;
        if (a.mode == "t1") {
            c = certify_all_of_a_kind(pattern, opts);
            wanted = CertificateKind::all_of_a_kind;
        } else if (a.mode == "t2") {
            c = certify_uniqueness(pattern, opts);
            wanted = CertificateKind::unique;
        } else {
            throw std::invalid_argument("unknown mode '" + a.mode + "'");
        }
        if (a.json)
            out << certificate_to_json(c).dump() << '\n';
        else
            print_certificate(out, c);
        return c.kind == wanted ? kOk : kNegative;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

// ---------------------------------------------------------------------------
// validate

struct ValidateArgs {
    std::string data_path;
    std::string subspace_path;
    std::string mask_path;
    std::optional<std::size_t> rank;
    double tol = kFitTol;
};

inline int cmd_validate(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
    std::optional<ObservationPattern> loaded;
    Matrix X, S;
    try {
        loaded = load_pattern(read_file(a.mask_path), a.rank);
        const auto& pattern = *loaded;
        X = load_matrix(read_file(a.data_path));
        S = load_matrix(read_file(a.subspace_path));
        const auto d = pattern.ambient_dim();
        if (static_cast<std::size_t>(X.rows()) != d || static_cast<std::size_t>(X.cols()) != pattern.size())
            throw std::invalid_argument("data is " + std::to_string(X.rows()) + "x" +
                                        std::to_string(X.cols()) + " but the mask is " +
                                        std::to_string(d) + "x" + std::to_string(pattern.size()));
        if (static_cast<std::size_t>(S.rows()) != d ||
            static_cast<std::size_t>(S.cols()) != pattern.rank())
            throw std::invalid_argument("subspace basis must be " + std::to_string(d) + "x" +
                                        std::to_string(pattern.rank()));
        if (!S.allFinite()) throw std::invalid_argument("subspace basis has missing entries");
        for (std::size_t i = 1; i <= pattern.size(); ++i)
            for (auto j : pattern.column(i).indices())
                if (!std::isfinite(X(static_cast<Eigen::Index>(j - 1), static_cast<Eigen::Index>(i - 1))))
                    throw std::invalid_argument("entry (" + std::to_string(j) + "," +
                                                std::to_string(i) +
                                                ") is observed in the mask but missing in the data");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    const auto& pattern = *loaded;

    ColumnSet misfit;
    for (std::size_t i = 1; i <= pattern.size(); ++i)
        if (!fits(S, X.col(static_cast<Eigen::Index>(i - 1)), pattern.column(i), a.tol))
            misfit.push_back(i);
    const bool fit_ok = misfit.empty();
    out << "fit: " << (fit_ok ? "pass" : "fail");
    if (!fit_ok) out << " (columns " << join(misfit) << ")";
    out << '\n';

    bool cert_ok = false;
    try {
        auto norm = normalize_columns(pattern, true, false);
        auto c = certify_all_of_a_kind(norm.pattern);
        cert_ok = c.kind == CertificateKind::all_of_a_kind;
        out << "certificate: " << to_string(c.kind);
        if (cert_ok) out << " witness {" << join(c.witness, ",") << "}";
        out << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    if (!fit_ok) {
        out << "verdict: NO_FIT\n";
        return kNegative;
    }
    if (!cert_ok) {
        out << "verdict: UNVERIFIED (mask has no all-of-a-kind witness)\n";
        return kNegative;
    }
    out << "verdict: LIES_IN_S\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
    GenSpec spec;
    std::string out_dir;
};

inline int cmd_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
    try {
        const auto& spec = a.spec;
        auto pattern = random_mask(spec);
        auto arrangement = random_arrangement(spec);
        auto data = sample_columns(arrangement, spec.N, spec.assignment_mode, spec.seed);
        arrangement.assignment = data.assignment;

        std::filesystem::path dir(a.out_dir);
        std::filesystem::create_directories(dir);
        write_file(dir / "mask.txt", render_pattern(pattern));
        write_file(dir / "mask.json", pattern_to_json(pattern).dump(2) + "\n");
        write_file(dir / "arrangement.json", arrangement_to_json(arrangement).dump(2) + "\n");
        write_file(dir / "data.csv", render_matrix_csv(data.X));
        write_file(dir / "masked_data.csv", render_matrix_csv(mask_data(data.X, pattern)));
        nlohmann::json manifest = {
            {"tool", "fitcert"}, {"version", kVersion}, {"spec", genspec_to_json(spec)}};
        write_file(dir / "manifest.json", manifest.dump(2) + "\n");
        out << "wrote " << dir.string() << '\n';
        return kOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

// ---------------------------------------------------------------------------
// oracle

struct OracleArgs {
    std::optional<std::string> mask_path;
    std::optional<std::size_t> rank;
    GenSpec spec;
    bool have_seed = false;
    std::size_t trials = 0;
    unsigned threads = 1;
};

inline int cmd_oracle(const OracleArgs& a, std::ostream& out, std::ostream& err) {
    try {
        if (a.mask_path) {
            auto pattern = load_pattern(read_file(*a.mask_path), a.rank);
            auto check = crosscheck_engines(pattern);
            bool ok = check.agree();
            out << nlohmann::json{{"mask", *a.mask_path},
                                  {"subsets", check.subsets},
                                  {"disagreements", check.disagreements}}
                       .dump()
                << '\n';
            if (a.trials > 0) {
                if (!a.have_seed) throw std::invalid_argument("--trials needs an explicit --seed");
                auto rep = agreement_trial(pattern, a.spec, a.trials, a.threads);
                out << rep.jsonl();
                err << "trials agreeing: " << rep.agreed() << "/" << rep.checked() << '\n';
                ok = ok && rep.full_agreement();
            }
            return ok ? kOk : kNegative;
        }
        if (a.trials == 0) return kOk;
        if (!a.have_seed) throw std::invalid_argument("--trials needs an explicit --seed");
        auto rep = agreement_trial(a.spec, a.trials, a.threads);
        out << rep.jsonl();
        err << "trials agreeing: " << rep.agreed() << "/" << rep.checked() << '\n';
        return rep.full_agreement() ? kOk : kNegative;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

}  // namespace fitcert::cli
