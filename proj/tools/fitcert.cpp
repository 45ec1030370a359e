#include <iostream>

#include <CLI11.hpp>

#include "fitcert_commands.hpp"

int main(int argc, char** argv) {
    using namespace fitcert;
    CLI::App app{"Certify that partially observed columns determine their subspace"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    cli::CertifyArgs ca;
    std::size_t certify_rank = 0;
    auto* certify = app.add_subcommand("certify", "certificate for a mask");
    certify->add_option("mask", ca.mask_path, "mask grid or JSON")->required();
    auto* certify_rank_opt = certify->add_option("--rank,-r", certify_rank, "subspace dimension r");
    certify->add_option("--mode", ca.mode, "t1, t2 or independence")
        ->check(CLI::IsMember({"t1", "t2", "independence"}));
    certify->add_option("--engine", ca.engine, "independence engine")
        ->check(CLI::IsMember({"auto", "brute", "matching", "both"}));
    certify->add_flag("--json", ca.json, "print the certificate as JSON");
    certify->add_flag("--split-oversized", ca.split_oversized, "split columns with > r+1 rows");
    certify->add_flag("--drop-undersized", ca.drop_undersized, "drop columns with <= r rows");
    certify->add_option("--cap", ca.cap, "enumeration cap");
    certify->add_option("--threads", ca.threads, "worker threads for the matching engine");

    cli::ValidateArgs va;
    std::size_t validate_rank = 0;
    auto* validate = app.add_subcommand("validate", "check a fitted subspace against a mask");
    validate->add_option("--data", va.data_path, "d x N data, '.' for missing")->required();
    validate->add_option("--subspace", va.subspace_path, "d x r basis")->required();
    validate->add_option("--mask", va.mask_path, "mask grid or JSON")->required();
    auto* validate_rank_opt = validate->add_option("--rank,-r", validate_rank, "subspace dimension r");
    validate->add_option("--tol", va.tol, "relative fit tolerance");

    cli::GenerateArgs ga;
    std::string gen_property = "t1", gen_assignment = "same";
    auto* generate = app.add_subcommand("generate", "write a synthetic instance");
    generate->add_option("--d", ga.spec.d, "ambient dimension")->required();
    generate->add_option("--r", ga.spec.r, "subspace dimension")->required();
    generate->add_option("--k", ga.spec.K, "number of subspaces");
    generate->add_option("--n", ga.spec.N, "number of columns")->required();
    generate->add_option("--seed", ga.spec.seed, "random seed")->required();
    generate->add_option("--property", gen_property, "t1, t2-only or fails-both")
        ->check(CLI::IsMember({"t1", "t2-only", "fails-both"}));
    generate->add_option("--assignment", gen_assignment, "same or mixed")
        ->check(CLI::IsMember({"same", "mixed"}));
    generate->add_option("--out", ga.out_dir, "output directory")->required();

    cli::OracleArgs oa;
    std::string oracle_mask, or_property = "t1", or_assignment = "same";
    std::size_t oracle_rank = 0, oracle_n = 0;
    auto* oracle = app.add_subcommand("oracle", "cross-check engines and numeric rank");
    auto* oracle_mask_opt = oracle->add_option("mask", oracle_mask, "mask grid or JSON");
    auto* oracle_rank_opt = oracle->add_option("--rank", oracle_rank, "subspace dimension for a grid mask");
    oracle->add_option("--trials", oa.trials, "number of seeded numeric trials");
    oracle->add_option("--d", oa.spec.d, "ambient dimension");
    oracle->add_option("--r", oa.spec.r, "subspace dimension");
    oracle->add_option("--k", oa.spec.K, "number of subspaces");
    auto* oracle_n_opt = oracle->add_option("--n", oracle_n, "columns per trial");
    auto* oracle_seed_opt = oracle->add_option("--seed", oa.spec.seed, "base seed");
    oracle->add_option("--property", or_property, "t1, t2-only or fails-both")
        ->check(CLI::IsMember({"t1", "t2-only", "fails-both"}));
    oracle->add_option("--assignment", or_assignment, "same or mixed")
        ->check(CLI::IsMember({"same", "mixed"}));
    oracle->add_option("--threads", oa.threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kInputError;
    }

    try {
        if (certify->parsed()) {
            if (*certify_rank_opt) ca.rank = certify_rank;
            return cli::cmd_certify(ca, std::cout, std::cerr);
        }
        if (validate->parsed()) {
            if (*validate_rank_opt) va.rank = validate_rank;
            return cli::cmd_validate(va, std::cout, std::cerr);
        }
        if (generate->parsed()) {
            ga.spec.mask_property = parse_mask_property(gen_property);
            ga.spec.assignment_mode = parse_assignment_mode(gen_assignment);
            return cli::cmd_generate(ga, std::cout, std::cerr);
        }
        if (oracle->parsed()) {
            if (*oracle_mask_opt) oa.mask_path = oracle_mask;
            if (*oracle_rank_opt) oa.rank = oracle_rank;
            oa.have_seed = static_cast<bool>(*oracle_seed_opt);
            oa.spec.mask_property = parse_mask_property(or_property);
            oa.spec.assignment_mode = parse_assignment_mode(or_assignment);
            if (*oracle_n_opt)
                oa.spec.N = oracle_n;
            else if (oa.spec.d > oa.spec.r)
                oa.spec.N = std::min<std::size_t>(kTrialMaxColumns, oa.spec.d - oa.spec.r + 3);
            return cli::cmd_oracle(oa, std::cout, std::cerr);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kInputError;
    }
    return cli::kInputError;
}
