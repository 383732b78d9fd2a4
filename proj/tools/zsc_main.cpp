// zsc: numerical laboratory for zero-scalar-curvature hypersurfaces of R^4.
// Subcommands map one-to-one onto the library modules; every run writes a
// single JSON document (or a CSV flattening) to standard output and
// diagnostics to standard error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zsc/run.hpp"

namespace {

struct ModelCli {
    std::string model;        // schwarzschild | cylinder | graph | path to JSON
    std::string model_json;   // inline JSON spec
    double m = 1.0;
    double t_max = 4000.0;
    double k = 1.0;
    std::string height = "t2";
    double extent = 100.0;
};

void add_model_flags(CLI::App* cmd, ModelCli& mc) {
    cmd->add_option("--model", mc.model,
                    "model name (schwarzschild, cylinder, graph) or path to a JSON spec");
    cmd->add_option("--model-json", mc.model_json, "inline JSON model spec");
    cmd->add_option("--m", mc.m, "rotational profile parameter m");
    cmd->add_option("--t-max", mc.t_max, "rotational chart extent in t");
    cmd->add_option("--k", mc.k, "cylinder curvature");
    cmd->add_option("--height", mc.height, "graph height function: zero, t2, sqrt1pt2");
    cmd->add_option("--extent", mc.extent, "graph box half-width");
}

void resolve_model(const ModelCli& mc, zsc::RunConfig& cfg) {
    if (mc.model.empty() && mc.model_json.empty()) return;
    cfg.has_model = true;
    if (!mc.model_json.empty()) {
        cfg.model = zsc::ModelSpec::from_json(nlohmann::json::parse(mc.model_json));
        return;
    }
    if (mc.model.size() > 5 && mc.model.substr(mc.model.size() - 5) == ".json") {
        std::ifstream f(mc.model);
        if (!f) throw zsc::ConfigInvalid("model: cannot open spec file " + mc.model);
        nlohmann::json j;
        f >> j;
        cfg.model = zsc::ModelSpec::from_json(j);
        return;
    }
    cfg.model = zsc::ModelSpec::named(mc.model);
    cfg.model.m = mc.m;
    cfg.model.t_max = mc.t_max;
    cfg.model.k = mc.k;
    cfg.model.height = mc.height;
    cfg.model.extent = mc.extent;
}

std::vector<double> parse_csv_doubles(const std::string& s, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            throw zsc::ConfigInvalid(std::string(what) + ": cannot parse '" + tok + "'");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for zero-scalar-curvature hypersurfaces of R^4"};
    app.require_subcommand(1);

    zsc::RunConfig cfg;
    ModelCli mc;
    std::string eigenvalues_arg, params_arg, center_arg, width_arg, bump_arg, rlist_arg;
    double cutoff_r = 0.0, beta_in = 0.0, delta_in = 0.0, c0_in = 0.0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", cfg.format, "output format: json or csv");
        cmd->add_option("--seed", cfg.seed, "seed for every stochastic component");
    };

    auto* inv = app.add_subcommand("invariants", "curvature invariants of an eigenvalue triple");
    inv->add_option("--eigenvalues", eigenvalues_arg, "comma-separated triple")->required();
    inv->add_flag("--normalize", cfg.normalize, "flip orientation so H >= 0 first");
    add_common(inv);

    auto* con = app.add_subcommand("constants", "pinching constant chain");
    con->add_option("--c", cfg.c, "pinching floor in (0, 4/27]");
    con->add_option("--q", cfg.q, "exponent q");
    auto* beta_opt = con->add_option("--beta", beta_in, "Young parameter beta (default window midpoint)");
    con->add_option("--c0-exponent", cfg.c0_exponent, "exponent on c0 in the weight (1 or 2)")
        ->check(CLI::IsMember({1, 2}));
    auto* c0_opt = con->add_option("--c0", c0_in, "override c0 instead of optimizing");
    con->add_option("--lattice", cfg.lattice, "constraint-set sampling density");
    add_common(con);

    auto* sur = app.add_subcommand("surface", "chart sample of a catalog model");
    add_model_flags(sur, mc);
    sur->add_option("--params", params_arg, "comma-separated chart parameters");
    add_common(sur);

    auto* sta = app.add_subcommand("stability", "stability quadratic form and search");
    add_model_flags(sta, mc);
    sta->add_option("--budget", cfg.budget, "evaluation budget for the search");
    sta->add_option("--center-range", center_arg, "bump center range lo,hi");
    sta->add_option("--width-range", width_arg, "bump width range lo,hi");
    sta->add_option("--amplitude", cfg.amplitude, "bump amplitude");
    auto* cut_opt = sta->add_option("--cutoff-r", cutoff_r, "evaluate Q1 of the cutoff at radius r");
    auto* bump_opt = sta->add_option("--bump", bump_arg, "evaluate Q1 of one bump: center,width,amplitude");
    add_common(sta);

    auto* sob = app.add_subcommand("sobolev", "weighted inequality checks");
    add_model_flags(sob, mc);
    sob->add_option("--r", cfg.r, "cutoff radius");
    auto* delta_opt = sob->add_option("--delta", delta_in, "Young parameter (default margin/2)");
    sob->add_option("--c", cfg.c, "pinching floor");
    sob->add_option("--q", cfg.q, "exponent q");
    sob->add_option("--c0-exponent", cfg.c0_exponent, "exponent on c0 (1 or 2)")
        ->check(CLI::IsMember({1, 2}));
    auto* c0s_opt = sob->add_option("--c0", c0_in, "override c0 instead of optimizing");
    sob->add_flag("--corollary", cfg.corollary, "check the |A|^{2p} form instead");
    sob->add_option("--p", cfg.p, "exponent p for the corollary form");
    add_common(sob);

    auto* tub = app.add_subcommand("tube", "tube volumes and embeddedness");
    add_model_flags(tub, mc);
    tub->add_option("--check", cfg.tube_check, "volume, embedded or bound");
    tub->add_option("--radius-kind", cfg.radius_kind, "constant, subfocal or theoremc");
    tub->add_option("--h0", cfg.h0, "constant tube radius");
    tub->add_option("--epsilon", cfg.epsilon, "subfocal factor in (0, 1]");
    tub->add_option("--b1", cfg.b1, "theorem-C b1 in (0, 1]");
    tub->add_option("--b2", cfg.b2, "theorem-C b2 > 0");
    tub->add_option("--delta-exp", cfg.delta_exp, "theorem-C exponent delta > 0");
    tub->add_option("--region-r", cfg.region_r, "intrinsic radius of the base region");
    tub->add_option("--resolution", cfg.resolution, "samples per chart axis (>= 16)");
    add_common(tub);

    auto* rep = app.add_subcommand("report", "full verification battery with plot data");
    add_model_flags(rep, mc);
    rep->add_option("--budget", cfg.budget, "stability search budget");
    rep->add_option("--r-list", rlist_arg, "comma-separated radii for the trends");
    rep->add_option("--output-dir", cfg.output_dir, "directory for the CSV plot files");
    rep->add_option("--region-r", cfg.region_r, "tube region radius");
    rep->add_option("--resolution", cfg.resolution, "tube test resolution");
    add_common(rep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }

    try {
        cfg.command = app.get_subcommands().front()->get_name();
        resolve_model(mc, cfg);
        if (!eigenvalues_arg.empty())
            cfg.eigenvalues = parse_csv_doubles(eigenvalues_arg, "--eigenvalues");
        if (!params_arg.empty()) {
            const auto v = parse_csv_doubles(params_arg, "--params");
            if (v.size() != 3) throw zsc::ConfigInvalid("--params: need three values");
            cfg.params = {v[0], v[1], v[2]};
        }
        if (!center_arg.empty()) {
            const auto v = parse_csv_doubles(center_arg, "--center-range");
            if (v.size() != 2) throw zsc::ConfigInvalid("--center-range: need lo,hi");
            cfg.center_range = {v[0], v[1]};
        }
        if (!width_arg.empty()) {
            const auto v = parse_csv_doubles(width_arg, "--width-range");
            if (v.size() != 2) throw zsc::ConfigInvalid("--width-range: need lo,hi");
            cfg.width_range = {v[0], v[1]};
        }
        if (*bump_opt) {
            const auto v = parse_csv_doubles(bump_arg, "--bump");
            if (v.size() != 3) throw zsc::ConfigInvalid("--bump: need center,width,amplitude");
            cfg.bump_eval = {{v[0], v[1], v[2]}};
        }
        if (*cut_opt) cfg.cutoff_r = cutoff_r;
        if (*beta_opt) cfg.beta = beta_in;
        if (*delta_opt) cfg.delta = delta_in;
        if (*c0_opt || *c0s_opt) cfg.c0_override = c0_in;
        if (!rlist_arg.empty()) {
            cfg.r_list = parse_csv_doubles(rlist_arg, "--r-list");
            if (cfg.r_list.size() < 2) throw zsc::ConfigInvalid("--r-list: need at least two radii");
        }
    } catch (const zsc::ConfigInvalid& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: model JSON: " << e.what() << '\n';
        return 1;
    }

    return zsc::run(cfg, std::cout, std::cerr);
}
