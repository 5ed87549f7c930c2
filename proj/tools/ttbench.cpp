#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tt/experiments.hpp"
#include "tt/io.hpp"
#include "tt/qtt.hpp"
#include "tt/rsi.hpp"

namespace {

using tt::Index;

struct CommonOpts {
    std::vector<Index> chi_max{};
    double eps_id = 1e-14;
    Index oversample = 0;
    std::uint64_t seed = 1;
    Index runs = 5;
    Index nbits = 20;
    std::string out;
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& o, std::vector<Index> default_chi) {
    o.chi_max = std::move(default_chi);
    cmd->add_option("--chi-max", o.chi_max, "output bond cap(s)")->capture_default_str();
    cmd->add_option("--eps-id", o.eps_id, "ID termination tolerance (relative)")
        ->capture_default_str();
    cmd->add_option("--oversample", o.oversample, "sketch oversampling p")
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "base RNG seed")->capture_default_str();
    cmd->add_option("--runs", o.runs, "seeded repetitions per parameter point")
        ->capture_default_str();
    cmd->add_option("--nbits", o.nbits, "quantics bits (grid 2^nbits)")
        ->capture_default_str();
    cmd->add_option("--out", o.out, "output path (default stdout)");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

std::vector<std::uint64_t> seed_list(const CommonOpts& o) {
    std::vector<std::uint64_t> s;
    for (Index i = 0; i < o.runs; ++i) s.push_back(o.seed + static_cast<std::uint64_t>(i));
    return s;
}

void emit(const std::vector<tt::bench::ExperimentRecord>& records, const CommonOpts& o) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!o.out.empty()) {
        file.open(o.out);
        if (!file) throw std::invalid_argument("cannot open output path: " + o.out);
        os = &file;
    }
    if (o.format == "json")
        tt::bench::write_json(records, *os);
    else
        tt::bench::write_csv(records, *os);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ttbench: tensor-train Hadamard product and map benchmarks"};
    app.require_subcommand(1);

    CommonOpts psi2_o, gauss_o, osc_o, scal_o, relu_o;

    CLI::App* psi2 = app.add_subcommand("psi2", "squared wavefunction experiment");
    Index psi2_n = 20, psi2_chi = 10;
    std::uint64_t psi_seed = 5;
    add_common(psi2, psi2_o, {2, 4, 6, 8, 10, 100});
    psi2->add_option("--n", psi2_n, "number of sites")->capture_default_str();
    psi2->add_option("--chi", psi2_chi, "input bond dimension")->capture_default_str();
    psi2->add_option("--psi-seed", psi_seed, "seed of the random state")
        ->capture_default_str();

    CLI::App* gauss = app.add_subcommand("gaussian", "Gaussian product experiments");
    std::string variant = "separation";
    double mu1 = 0.4, mu2 = 0.6, sigma = 0.15;
    add_common(gauss, gauss_o, {4, 8, 12, 16, 20});
    gauss->add_option("--variant", variant, "separation|spike|multiproduct")
        ->check(CLI::IsMember({"separation", "spike", "multiproduct"}))
        ->capture_default_str();
    CLI::Option* mu1_opt = gauss->add_option("--mu1", mu1)->capture_default_str();
    CLI::Option* mu2_opt = gauss->add_option("--mu2", mu2)->capture_default_str();
    CLI::Option* sigma_opt = gauss->add_option("--sigma", sigma)->capture_default_str();

    CLI::App* osc = app.add_subcommand("oscillatory", "oscillatory product experiment");
    std::vector<Index> p_list{0, 5, 10};
    add_common(osc, osc_o, {20, 40, 60, 80, 100});
    osc->add_option("--oversample-list", p_list, "oversampling values p")
        ->capture_default_str();

    CLI::App* scal = app.add_subcommand("scaling", "runtime scaling experiment");
    std::vector<Index> chi_list{16, 32, 64, 128};
    Index scal_n = 20, scal_d = 2;
    add_common(scal, scal_o, {});
    scal->add_option("--chi-list", chi_list, "input/output bond sweep")
        ->capture_default_str();
    scal->add_option("--n", scal_n, "number of sites")->capture_default_str();
    scal->add_option("--d", scal_d, "physical dimension")->capture_default_str();

    CLI::App* relu = app.add_subcommand("relu", "elementwise ReLU map experiment");
    add_common(relu, relu_o, {5, 15, 25, 35, 45});
    relu_o.nbits = 14;
    relu_o.oversample = 2;

    CLI::App* product = app.add_subcommand("product", "multiply two TT JSON files");
    std::string in_a, in_b, prod_out;
    Index prod_chi = 16;
    double prod_eps = 1e-14;
    Index prod_p = 0;
    std::uint64_t prod_seed = 1;
    product->add_option("a", in_a, "first input TT JSON")->required();
    product->add_option("b", in_b, "second input TT JSON")->required();
    product->add_option("--out", prod_out, "output TT JSON path")->required();
    product->add_option("--chi-max", prod_chi)->capture_default_str();
    product->add_option("--eps-id", prod_eps)->capture_default_str();
    product->add_option("--oversample", prod_p)->capture_default_str();
    product->add_option("--seed", prod_seed)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (psi2->parsed()) {
            emit(tt::bench::exp_psi_squared(psi2_n, psi2_chi, psi2_o.chi_max,
                                            seed_list(psi2_o), psi_seed, psi2_o.eps_id,
                                            psi2_o.oversample),
                 psi2_o);
        } else if (gauss->parsed()) {
            if (variant == "spike") {
                // Narrow-spike defaults unless explicitly overridden.
                if (!*mu1_opt) mu1 = 0.49;
                if (!*mu2_opt) mu2 = 0.51;
                if (!*sigma_opt) sigma = 0.01;
            }
            emit(tt::bench::exp_gaussian(variant, mu1, mu2, sigma, gauss_o.nbits,
                                         gauss_o.chi_max, seed_list(gauss_o),
                                         gauss_o.eps_id, gauss_o.oversample),
                 gauss_o);
        } else if (osc->parsed()) {
            emit(tt::bench::exp_oscillatory(osc_o.nbits, osc_o.chi_max, p_list,
                                            seed_list(osc_o), osc_o.eps_id),
                 osc_o);
        } else if (scal->parsed()) {
            emit(tt::bench::exp_scaling(chi_list, scal_n, scal_d, seed_list(scal_o),
                                        scal_o.eps_id, scal_o.oversample),
                 scal_o);
        } else if (relu->parsed()) {
            emit(tt::bench::exp_relu(relu_o.nbits, relu_o.chi_max, seed_list(relu_o),
                                     relu_o.eps_id, relu_o.oversample),
                 relu_o);
        } else if (product->parsed()) {
            tt::TensorTrain a = tt::read_tt_json_file(in_a);
            tt::TensorTrain b = tt::read_tt_json_file(in_b);
            tt::RsiConfig cfg{prod_chi, prod_eps, prod_p, prod_seed, true, true};
            tt::RsiReport rep = tt::rsi_hadamard({&a, &b}, cfg);
            tt::write_tt_json_file(rep.output, prod_out);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::length_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
