#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <sys/wait.h>

#include "../tools/fitcert_commands.hpp"
#include "support.hpp"

using namespace fitcert;
using namespace fitcert::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("fitcert_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run(const std::string& args, const std::string& log = "/dev/null") {
    std::string cmd = std::string(FITCERT_CLI) + " " + args + " >" + log + " 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct Out {
    int code;
    std::string out, err;
};

Out certify(CertifyArgs a) {
    std::ostringstream o, e;
    int code = cmd_certify(a, o, e);
    return {code, o.str(), e.str()};
}

CertifyArgs certify_args(const std::string& fixture, std::size_t r, const std::string& mode) {
    CertifyArgs a;
    a.mask_path = fixtures::path(fixture + ".mask");
    a.rank = r;
    a.mode = mode;
    return a;
}

GenSpec gen(std::size_t d, std::size_t r, std::size_t K, std::size_t N, std::uint64_t seed,
            AssignmentMode mode = AssignmentMode::all_same) {
    return {d, r, K, N, seed, MaskProperty::satisfies_t1, mode};
}

fs::path generate(const std::string& name, const GenSpec& spec) {
    auto dir = scratch(name);
    std::ostringstream o, e;
    EXPECT_EQ(cmd_generate({spec, dir.string()}, o, e), kOk) << e.str();
    return dir;
}

Out validate(const fs::path& data, const fs::path& basis, const fs::path& mask,
             std::optional<std::size_t> r = std::nullopt) {
    ValidateArgs a;
    a.data_path = data.string();
    a.subspace_path = basis.string();
    a.mask_path = mask.string();
    a.rank = r;
    std::ostringstream o, e;
    int code = cmd_validate(a, o, e);
    return {code, o.str(), e.str()};
}

}  // namespace

TEST(CliCertify, AllOfAKindWitness) {
    auto res = certify(certify_args("circuit5", 2, "t1"));
    EXPECT_EQ(res.code, kOk);
    EXPECT_NE(res.out.find("ALL_OF_A_KIND"), std::string::npos);
    EXPECT_NE(res.out.find("witness: {1,2,3,4}"), std::string::npos) << res.out;
}

TEST(CliCertify, UniqueFallbackIsNegativeInT1Mode) {
    auto res = certify(certify_args("two_lines", 1, "t1"));
    EXPECT_EQ(res.code, kNegative);
    EXPECT_NE(res.out.find("UNIQUE"), std::string::npos);
    EXPECT_EQ(certify(certify_args("two_lines", 1, "t2")).code, kOk);
}

TEST(CliCertify, IndeterminateIsNegative) {
    auto a = certify_args("crowded", 2, "t2");
    a.json = true;
    auto res = certify(a);
    EXPECT_EQ(res.code, kNegative);
    auto c = certificate_from_json(nlohmann::json::parse(res.out));
    EXPECT_EQ(c.kind, CertificateKind::indeterminate);
    ASSERT_TRUE(c.violating_subset);
    EXPECT_EQ(*c.violating_subset, (ColumnSet{1, 2, 3}));
}

TEST(CliCertify, JsonRoundTrip) {
    auto a = certify_args("triangle", 1, "t1");
    a.json = true;
    a.engine = "both";
    auto res = certify(a);
    ASSERT_EQ(res.code, kOk) << res.err;
    auto c = certificate_from_json(nlohmann::json::parse(res.out));
    EXPECT_EQ(c, certify_all_of_a_kind(fixtures::triangle()));
    EXPECT_EQ(c.witness, (ColumnSet{1, 2, 3}));
}

TEST(CliCertify, IndependenceMode) {
    auto a = certify_args("independent3", 2, "independence");
    a.json = true;
    auto res = certify(a);
    EXPECT_EQ(res.code, kOk);
    EXPECT_EQ(nlohmann::json::parse(res.out)["independent"], true);

    auto b = certify_args("crowded", 2, "independence");
    b.json = true;
    res = certify(b);
    EXPECT_EQ(res.code, kNegative);
    auto j = nlohmann::json::parse(res.out);
    EXPECT_EQ(j["violating_subset"], (std::vector<std::size_t>{1, 2, 3}));
    EXPECT_LT(j["m"].get<std::size_t>(), j["n"].get<std::size_t>() + 2);
}

TEST(CliCertify, InputErrors) {
    auto a = certify_args("circuit5", 2, "t1");
    a.mask_path = "/nonexistent/mask";
    EXPECT_EQ(certify(a).code, kInputError);

    auto wrong_rank = certify_args("circuit5", 3, "t1");
    auto res = certify(wrong_rank);
    EXPECT_EQ(res.code, kInputError);
    EXPECT_NE(res.err.find("error:"), std::string::npos);

    auto bad_mode = certify_args("circuit5", 2, "t3");
    EXPECT_EQ(certify(bad_mode).code, kInputError);
    auto bad_engine = certify_args("circuit5", 2, "t1");
    bad_engine.engine = "fast";
    EXPECT_EQ(certify(bad_engine).code, kInputError);
}

TEST(CliCertify, OversizedNeedsFlag) {
    auto dir = scratch("oversized");
    write_file(dir / "m.txt", "x.\nxx\nxx\n.x\n");
    CertifyArgs a;
    a.mask_path = (dir / "m.txt").string();
    a.rank = 1;
    EXPECT_EQ(certify(a).code, kInputError);
    a.split_oversized = true;
    auto res = certify(a);
    EXPECT_NE(res.code, kInputError) << res.err;
}

TEST(CliCertify, CapacityIsInputError) {
    auto a = certify_args("six_bases", 2, "t1");
    a.cap = 2;
    auto res = certify(a);
    EXPECT_EQ(res.code, kInputError);
    EXPECT_NE(res.err.find("enumeration cap"), std::string::npos);
}

TEST(CliBinary, ExitCodes) {
    EXPECT_EQ(run("certify --mode t1 --rank 2 " + fixtures::path("circuit5.mask")), 0);
    EXPECT_EQ(run("certify --mode t2 --rank 2 " + fixtures::path("crowded.mask")), 1);
    EXPECT_EQ(run("certify --mode t1 --rank 0 " + fixtures::path("circuit5.mask")), 2);
    EXPECT_EQ(run("certify --rank 2 /nonexistent/mask"), 2);
    EXPECT_EQ(run("certify"), 2);
    EXPECT_EQ(run("bogus"), 2);
}

TEST(CliValidate, SparseExampleIsUnverified) {
    auto res = validate(fixtures::path("sparse_data.csv"), fixtures::path("sparse_line.csv"),
                        fixtures::path("two_lines.mask"), 1);
    EXPECT_EQ(res.code, kNegative) << res.err;
    EXPECT_NE(res.out.find("fit: pass"), std::string::npos);
    EXPECT_NE(res.out.find("verdict: UNVERIFIED"), std::string::npos);
}

TEST(CliValidate, GeneratedTruthLiesInS) {
    auto dir = generate("validate_same", gen(7, 2, 1, 8, 3));
    auto arr = arrangement_from_json(nlohmann::json::parse(read_file((dir / "arrangement.json").string())));
    write_file(dir / "basis.csv", render_matrix_csv(arr.bases[0].matrix()));
    auto res = validate(dir / "masked_data.csv", dir / "basis.csv", dir / "mask.json");
    EXPECT_EQ(res.code, kOk) << res.out << res.err;
    EXPECT_NE(res.out.find("verdict: LIES_IN_S"), std::string::npos);
    // Full data is accepted too; the mask picks the entries.
    EXPECT_EQ(validate(dir / "data.csv", dir / "basis.csv", dir / "mask.json").code, kOk);
}

TEST(CliValidate, MixedDataHasNoFit) {
    auto dir = generate("validate_mixed", gen(7, 2, 2, 8, 3, AssignmentMode::mixed));
    auto arr = arrangement_from_json(nlohmann::json::parse(read_file((dir / "arrangement.json").string())));
    write_file(dir / "basis.csv", render_matrix_csv(arr.bases[0].matrix()));
    auto res = validate(dir / "masked_data.csv", dir / "basis.csv", dir / "mask.json");
    EXPECT_EQ(res.code, kNegative);
    EXPECT_NE(res.out.find("verdict: NO_FIT"), std::string::npos);
}

TEST(CliValidate, ShapeErrors) {
    auto res = validate(fixtures::path("sparse_data.csv"), fixtures::path("sparse_truth.csv"),
                        fixtures::path("two_lines.mask"), 1);
    EXPECT_EQ(res.code, kInputError);
    res = validate(fixtures::path("sparse_truth.csv"), fixtures::path("sparse_line.csv"),
                   fixtures::path("triangle.mask"), 1);
    EXPECT_EQ(res.code, kInputError);
}

TEST(CliGenerate, ByteIdenticalAcrossRuns) {
    auto spec = gen(8, 2, 2, 9, 17, AssignmentMode::mixed);
    auto a = generate("gen_a", spec);
    auto b = generate("gen_b", spec);
    for (const char* f : {"mask.txt", "mask.json", "arrangement.json", "data.csv", "masked_data.csv",
                          "manifest.json"})
        EXPECT_EQ(read_file((a / f).string()), read_file((b / f).string())) << f;
    auto manifest = nlohmann::json::parse(read_file((a / "manifest.json").string()));
    EXPECT_EQ(manifest["spec"]["seed"], 17);
    auto mask = load_pattern(read_file((a / "mask.json").string()), std::nullopt);
    EXPECT_EQ(certify_all_of_a_kind(mask).kind, CertificateKind::all_of_a_kind);
}

TEST(CliGenerate, SingleColumnFailsBoth) {
    auto dir = scratch("gen_one");
    EXPECT_EQ(run("generate --d 4 --r 1 --n 1 --seed 2 --property fails-both --out " + dir.string()), 0);
    EXPECT_TRUE(fs::exists(dir / "masked_data.csv"));
    EXPECT_EQ(run("generate --d 4 --r 4 --n 1 --seed 2 --out " + dir.string()), 2);
}

TEST(CliOracle, FixturesAgree) {
    for (auto [name, r] : {std::pair{"circuit5", 2}, {"six_bases", 2}, {"crowded", 2},
                           {"triangle", 1}}) {
        OracleArgs a;
        a.mask_path = fixtures::path(std::string(name) + ".mask");
        a.rank = r;
        std::ostringstream o, e;
        EXPECT_EQ(cmd_oracle(a, o, e), kOk) << e.str();
        EXPECT_TRUE(nlohmann::json::parse(o.str())["disagreements"].empty());
    }
}

TEST(CliOracle, Trials) {
    EXPECT_EQ(run("oracle --trials 0"), 0);
    EXPECT_EQ(run("oracle --trials 5 --d 8 --r 2"), 2);
    auto log = scratch("oracle") / "log";
    EXPECT_EQ(run("oracle --trials 100 --d 8 --r 2 --seed 1", log.string()), 0);
    auto text = read_file(log.string());
    EXPECT_NE(text.find("100/100"), std::string::npos);
}
