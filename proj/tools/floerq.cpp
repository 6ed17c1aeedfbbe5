#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "floerq/floerq.hpp"

namespace cli = floerq::cli;

int main(int argc, char** argv)
{
    CLI::App app{"floerq: Floer complexes, count tables and their products"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable output");

    std::string path;
    bool strict = false;
    auto* validate = app.add_subcommand("validate", "check data, tables, cycle and gluing identities");
    validate->add_option("path", path, "document")->required();
    validate->add_flag("--strict", strict, "reject unknown fields and degree warnings");
    validate->add_flag("--json", as_json, "machine-readable output");

    auto* hom = app.add_subcommand("homology", "HF_* and HF^* per degree");
    hom->add_option("path", path, "document")->required();
    hom->add_flag("--json", as_json, "machine-readable output");

    auto* prod = app.add_subcommand("products", "cup, intersection, cap, duality, unit and top");
    prod->add_option("path", path, "document")->required();
    prod->add_flag("--json", as_json, "machine-readable output");

    cli::MasseyArgs margs;
    std::string lambda;
    auto* massey = app.add_subcommand("massey", "Massey product of three cohomology classes");
    massey->add_option("path", path, "document")->required();
    massey->add_option("--a", margs.a, "cochain, e.g. 2*p01-p10")->required();
    massey->add_option("--b", margs.b, "cochain")->required();
    massey->add_option("--c", margs.c, "cochain")->required();
    massey->add_option("--zeta", margs.zeta, "cochain with dζ = a∪b")->capture_default_str();
    massey->add_option("--xi", margs.xi, "cochain with dξ = b∪c")->capture_default_str();
    auto* lambda_opt = massey->add_option("--lambda", lambda, "label of a q=1 table of slot (0,1,3)");
    massey->add_flag("--json", as_json, "machine-readable output");

    int dim = 2;
    std::string output;
    std::size_t samples = floerq::default_samples;
    auto* gen = app.add_subcommand("gen-torus", "write the oracle document of a flat torus");
    gen->add_option("--dim", dim, "even dimension")->required();
    gen->add_option("-o,--output", output, "output path (stdout when omitted)");
    gen->add_option("--samples", samples, "samples per circle")->capture_default_str();

    cli::GlueArgs gargs;
    std::string compare;
    auto* glue = app.add_subcommand("glue", "glue two tables, or trace one when --second is omitted");
    glue->add_option("path", path, "document")->required();
    glue->add_option("--first", gargs.first, "table label")->required();
    glue->add_option("--second", gargs.second, "table label");
    glue->add_option("-i", gargs.i, "plus slot of the first table")->capture_default_str();
    glue->add_option("-j", gargs.j, "minus slot of the second table")->capture_default_str();
    glue->add_option("--label", gargs.label, "label of the result")->capture_default_str();
    auto* compare_opt = glue->add_option("--compare", compare, "table label to compare with (exit 4 on mismatch)");
    glue->add_flag("--json", as_json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : cli::exit_usage;
    }

    try {
        if (*validate)
            return cli::cmd_validate(path, strict, as_json, std::cout);
        if (*hom)
            return cli::cmd_homology(path, as_json, std::cout);
        if (*prod)
            return cli::cmd_products(path, as_json, std::cout);
        if (*massey) {
            if (*lambda_opt)
                margs.lambda = lambda;
            return cli::cmd_massey(path, margs, as_json, std::cout);
        }
        if (*gen)
            return cli::cmd_gen_torus(dim, output, samples, std::cout);
        if (*glue) {
            if (*compare_opt)
                gargs.compare = compare;
            return cli::cmd_glue(path, gargs, as_json, std::cout);
        }
    } catch (const floerq::Error& e) {
        const int code = cli::exit_code_for(e.kind());
        if (as_json) {
            nlohmann::ordered_json j;
            j["error"] = floerq::to_string(e.kind());
            j["message"] = e.what();
            j["exit"] = code;
            std::cout << j.dump(2) << "\n";
        } else {
            std::cerr << "floerq: " << e.what() << "\n";
        }
        return code;
    } catch (const std::exception& e) {
        std::cerr << "floerq: " << e.what() << "\n";
        return cli::exit_usage;
    }
    return cli::exit_usage;
}
