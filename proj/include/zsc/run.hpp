#pragma once

// Command dispatch for the CLI: configuration echo, module calls, JSON/CSV
// emission and the full verification battery of the `report` command.
// Exit codes: 0 success, 1 invalid configuration, 2 domain errors,
// 3 numeric non-convergence.

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zsc/chart.hpp"
#include "zsc/errors.hpp"
#include "zsc/geometry.hpp"
#include "zsc/invariants.hpp"
#include "zsc/json_out.hpp"
#include "zsc/models.hpp"
#include "zsc/parallel.hpp"
#include "zsc/pinching.hpp"
#include "zsc/stability.hpp"
#include "zsc/tube.hpp"

namespace zsc {

// Declarative model description; buildable and echoable into reports.
struct ModelSpec {
    std::string kind = "rotational";   // rotational | cylinder | graph
    double m = 1.0;                    // rotational profile parameter
    double t_max = 4000.0;
    double k = 1.0;                    // cylinder curvature
    std::string height = "t2";         // graph height function name
    double extent = 100.0;             // graph box half-width

    static ModelSpec named(const std::string& name) {
        ModelSpec s;
        if (name == "schwarzschild" || name == "rotational") {
            s.kind = "rotational";
        } else if (name == "cylinder") {
            s.kind = "cylinder";
        } else if (name == "graph") {
            s.kind = "graph";
        } else {
            throw ConfigInvalid("model: unknown model '" + name +
                                "' (expected schwarzschild, cylinder or graph)");
        }
        return s;
    }

    static ModelSpec from_json(const nlohmann::json& j) {
        if (!j.is_object() || !j.contains("kind"))
            throw ConfigInvalid("model: spec must be an object with a 'kind' field");
        ModelSpec s = named(j["kind"].get<std::string>());
        const auto params = j.value("params", nlohmann::json::object());
        const auto domain = j.value("domain", nlohmann::json::object());
        if (s.kind == "rotational") {
            if (params.contains("profile") && params["profile"] != "schwarzschild")
                throw ConfigInvalid("model: params/profile must be 'schwarzschild'");
            s.m = params.value("m", 1.0);
            s.t_max = domain.value("t_max", 4000.0);
        } else if (s.kind == "cylinder") {
            s.k = params.value("k", 1.0);
        } else {
            s.height = params.value("height", "t2");
            s.extent = domain.value("extent", 100.0);
        }
        return s;
    }

    ModelPtr build() const {
        if (kind == "rotational") {
            if (!(m > 0.0)) throw ConfigInvalid("model: m must be positive");
            if (!(t_max > 1.0)) throw ConfigInvalid("model: t_max must exceed 1");
            return RotationalModel::schwarzschild(m, t_max);
        }
        if (kind == "cylinder") {
            if (!(k > 0.0)) throw ConfigInvalid("model: k must be positive");
            return std::make_shared<CylinderModel>(k);
        }
        if (kind == "graph") {
            if (!(extent > 1.0)) throw ConfigInvalid("model: extent must exceed 1");
            return GraphModel::named(height, extent);
        }
        throw ConfigInvalid("model: unknown kind '" + kind + "'");
    }

    jout::Value echo() const {
        auto v = jout::Value::object();
        v.set("kind", kind);
        if (kind == "rotational") {
            v.set("profile", "schwarzschild").set("m", m).set("t_max", t_max);
        } else if (kind == "cylinder") {
            v.set("k", k);
        } else {
            v.set("height", height).set("extent", extent);
        }
        return v;
    }
};

struct RunConfig {
    std::string command;
    std::string format = "json";       // json | csv
    std::uint64_t seed = 0;

    ModelSpec model;
    bool has_model = false;

    // invariants
    std::vector<double> eigenvalues;
    bool normalize = false;

    // constants
    double c = kMaxPinching;
    double q = 0.01;
    std::optional<double> beta;
    int c0_exponent = 2;
    std::optional<double> c0_override;
    int lattice = 30000;

    // surface
    Vec3 params{1.0, 1.5707963267948966, 0.0};

    // stability
    int budget = 2000;
    std::array<double, 2> center_range{1.0, 50.0};
    std::array<double, 2> width_range{0.5, 30.0};
    double amplitude = 1.0;
    std::optional<double> cutoff_r;                  // evaluate Q1 of ssy_cutoff(r)
    std::optional<std::array<double, 3>> bump_eval;  // evaluate Q1 of one bump

    // sobolev
    double r = 5.0;
    std::optional<double> delta;  // absent => delta_margin_max / 2
    bool corollary = false;
    double p = 2.52;

    // tube
    std::string tube_check = "volume";      // volume | embedded | bound
    std::string radius_kind = "subfocal";   // constant | subfocal | theoremc
    double h0 = 0.1, epsilon = 0.5, b1 = 0.5, b2 = 1.0, delta_exp = 1.0;
    double region_r = 5.0;
    int resolution = 16;

    // report
    std::string output_dir = ".";
    std::vector<double> r_list{5.0, 10.0, 20.0, 40.0};
};

namespace run_detail {

inline jout::Value vec_json(const Vec3& v) {
    return jout::Value::numbers(v.data(), v.data() + 3);
}
inline jout::Value vec_json(const Vec4& v) {
    return jout::Value::numbers(v.data(), v.data() + 4);
}
inline jout::Value mat_json(const Eigen::Matrix3d& m) {
    auto rows = jout::Value::array();
    for (int i = 0; i < 3; ++i) {
        auto row = jout::Value::array();
        for (int j = 0; j < 3; ++j) row.push(m(i, j));
        rows.push(std::move(row));
    }
    return rows;
}

inline jout::Value invariants_json(const CurvatureInvariants& inv) {
    auto v = jout::Value::object();
    v.set("R", inv.R)
        .set("H", inv.H)
        .set("K", inv.K)
        .set("normA2", inv.normA2)
        .set("p1_spectrum", jout::Value::numbers(inv.p1_spectrum.begin(), inv.p1_spectrum.end()))
        .set("pinching", inv.pinching);
    return v;
}

inline jout::Value constants_json(const PinchingConstants& k) {
    auto v = jout::Value::object();
    v.set("c", k.c)
        .set("c0", k.c0)
        .set("c0_exponent", k.c0_exponent)
        .set("q", k.q)
        .set("q_max", k.q_max)
        .set("beta", k.beta)
        .set("beta_max", k.beta_max)
        .set("C1", k.C1)
        .set("C2", k.C2)
        .set("C3", k.C3)
        .set("Lambda1", k.Lambda1)
        .set("Lambda2", k.Lambda2)
        .set("p", k.p)
        .set("delta_max", delta_margin_max(k));
    return v;
}

inline jout::Value test_function_json(const TestFunction& f) {
    auto v = jout::Value::object();
    switch (f.kind) {
        case TestFunction::Kind::ssy_cutoff:
            v.set("kind", "ssy_cutoff").set("r", f.r);
            break;
        case TestFunction::Kind::piecewise_linear:
            v.set("kind", "piecewise_linear")
                .set("knots", jout::Value::numbers(f.knots.begin(), f.knots.end()))
                .set("values", jout::Value::numbers(f.values.begin(), f.values.end()));
            break;
        default:
            v.set("kind", "bump")
                .set("center", f.center)
                .set("width", f.width)
                .set("amplitude", f.amplitude);
    }
    v.set("support_radius", f.support_radius());
    return v;
}

inline jout::Value stability_json(const StabilityReport& rep) {
    auto v = jout::Value::object();
    v.set("q1_value", rep.q1_value)
        .set("gradient_term", rep.gradient_term)
        .set("curvature_term", rep.curvature_term)
        .set("quad_error", rep.quad_error)
        .set("verdict", to_string(rep.verdict))
        .set("test_function", test_function_json(rep.test_function))
        .set("evals", rep.evals);
    return v;
}

inline PinchingConstants config_constants(const RunConfig& cfg) {
    const double c0 = cfg.c0_override ? *cfg.c0_override : c0_of_c(cfg.c, cfg.lattice);
    return constants_from_c0(cfg.c, c0, cfg.q, cfg.beta, cfg.c0_exponent);
}

inline jout::Value cmd_invariants(const RunConfig& cfg) {
    if (cfg.eigenvalues.size() != 3)
        throw ConfigInvalid("invariants: --eigenvalues needs exactly three values");
    Eigenvalues ev{cfg.eigenvalues[0], cfg.eigenvalues[1], cfg.eigenvalues[2]};
    if (cfg.normalize) ev = normalize_orientation(ev);
    auto inputs = jout::Value::object();
    inputs.set("eigenvalues", jout::Value::numbers(cfg.eigenvalues.begin(), cfg.eigenvalues.end()))
        .set("normalized", cfg.normalize);
    auto results = invariants_json(invariants_from_eigenvalues(ev));
    auto doc = jout::Value::object();
    doc.set("command", "invariants").set("inputs", std::move(inputs)).set("results",
                                                                          std::move(results));
    return doc;
}

inline jout::Value cmd_constants(const RunConfig& cfg) {
    const auto k = config_constants(cfg);
    auto inputs = jout::Value::object();
    inputs.set("c", cfg.c).set("q", cfg.q).set("c0_exponent", cfg.c0_exponent);
    if (cfg.beta) inputs.set("beta", *cfg.beta);
    if (cfg.c0_override) inputs.set("c0", *cfg.c0_override);
    auto doc = jout::Value::object();
    doc.set("command", "constants")
        .set("inputs", std::move(inputs))
        .set("results", constants_json(k));
    return doc;
}

inline jout::Value cmd_surface(const RunConfig& cfg) {
    if (!cfg.has_model) throw ConfigInvalid("surface: --model is required");
    const auto model = cfg.model.build();
    const auto s = chart_sample(*model, cfg.params);
    auto results = jout::Value::object();
    results.set("position", vec_json(s.position))
        .set("normal", vec_json(s.normal))
        .set("metric", mat_json(s.metric))
        .set("second_form", mat_json(s.second_form))
        .set("eigenvalues",
             jout::Value(jout::Array{s.eigenvalues.lambda1, s.eigenvalues.lambda2,
                                     s.eigenvalues.lambda3}))
        .set("invariants", invariants_json(s.invariants))
        .set("grad_a_norm2", grad_a_norm2(s))
        .set("grad_h_norm2", grad_h_norm2(*model, cfg.params))
        .set("codazzi_asymmetry", codazzi_asymmetry(s))
        .set("geodesic_radius", geodesic_radius(*model, cfg.params));
    auto inputs = jout::Value::object();
    inputs.set("model", cfg.model.echo())
        .set("params", vec_json(cfg.params));
    auto doc = jout::Value::object();
    doc.set("command", "surface").set("inputs", std::move(inputs)).set("results",
                                                                       std::move(results));
    return doc;
}

inline jout::Value cmd_stability(const RunConfig& cfg) {
    if (!cfg.has_model) throw ConfigInvalid("stability: --model is required");
    const auto model = cfg.model.build();
    StabilityReport rep;
    if (cfg.cutoff_r) {
        rep = quadratic_form_q1(*model, TestFunction::ssy_cutoff(*cfg.cutoff_r));
    } else if (cfg.bump_eval) {
        const auto& b = *cfg.bump_eval;
        rep = quadratic_form_q1(*model, TestFunction::bump(b[0], b[1], b[2]));
    } else {
        BumpFamily fam;
        fam.center_range = cfg.center_range;
        fam.width_range = cfg.width_range;
        fam.amplitude = cfg.amplitude;
        rep = instability_search(*model, fam, cfg.budget, cfg.seed);
    }
    auto inputs = jout::Value::object();
    inputs.set("model", cfg.model.echo()).set("budget", cfg.budget).set("seed", cfg.seed);
    auto doc = jout::Value::object();
    doc.set("command", "stability")
        .set("inputs", std::move(inputs))
        .set("results", stability_json(rep));
    return doc;
}

inline jout::Value cmd_sobolev(const RunConfig& cfg) {
    if (!cfg.has_model) throw ConfigInvalid("sobolev: --model is required");
    const auto model = cfg.model.build();
    auto inputs = jout::Value::object();
    inputs.set("model", cfg.model.echo()).set("r", cfg.r);
    auto doc = jout::Value::object();
    if (cfg.corollary) {
        const auto chk = ssy_corollary_check(*model, cfg.p, cfg.r,
                                             cfg.c0_override.value_or(16.0), cfg.c0_exponent);
        inputs.set("p", cfg.p);
        auto results = jout::Value::object();
        results.set("lhs", chk.lhs).set("rhs", chk.rhs).set("ratio", chk.lhs / chk.rhs);
        doc.set("command", "sobolev")
            .set("inputs", std::move(inputs))
            .set("results", std::move(results));
        return doc;
    }
    const auto k = config_constants(cfg);
    const double delta = cfg.delta.value_or(0.5 * delta_margin_max(k));
    const auto chk = sobolev_check(*model, k, cfg.r, delta);
    inputs.set("delta", delta);
    auto results = jout::Value::object();
    results.set("lhs", chk.lhs)
        .set("rhs", chk.rhs)
        .set("ratio", chk.ratio)
        .set("margin", chk.margin)
        .set("grad_integral", chk.grad_integral)
        .set("constants", constants_json(k));
    doc.set("command", "sobolev")
        .set("inputs", std::move(inputs))
        .set("results", std::move(results));
    return doc;
}

inline TubeSpec tube_spec_of(const RunConfig& cfg, const ModelPtr& model) {
    TubeSpec spec;
    spec.model = model;
    if (cfg.radius_kind == "constant")
        spec.radius_kind = TubeSpec::Radius::constant;
    else if (cfg.radius_kind == "subfocal")
        spec.radius_kind = TubeSpec::Radius::subfocal;
    else if (cfg.radius_kind == "theoremc")
        spec.radius_kind = TubeSpec::Radius::theorem_c;
    else
        throw ConfigInvalid("tube: --radius-kind must be constant, subfocal or theoremc");
    spec.h0 = cfg.h0;
    spec.epsilon = cfg.epsilon;
    spec.b1 = cfg.b1;
    spec.b2 = cfg.b2;
    spec.delta_exp = cfg.delta_exp;
    spec.region_r = cfg.region_r;
    return spec;
}

inline jout::Value tube_point_json(const TubePoint& p) {
    auto v = jout::Value::object();
    v.set("params", vec_json(p.params)).set("tau", p.tau).set("point", vec_json(p.point));
    return v;
}

inline jout::Value cmd_tube(const RunConfig& cfg) {
    if (!cfg.has_model) throw ConfigInvalid("tube: --model is required");
    const auto model = cfg.model.build();
    const auto spec = tube_spec_of(cfg, model);
    auto inputs = jout::Value::object();
    inputs.set("model", cfg.model.echo())
        .set("check", cfg.tube_check)
        .set("radius_kind", cfg.radius_kind)
        .set("region_r", cfg.region_r);
    auto results = jout::Value::object();
    if (cfg.tube_check == "volume") {
        results.set("volume", tube_volume(spec));
    } else if (cfg.tube_check == "embedded") {
        const auto rep = self_intersection_test(spec, cfg.resolution);
        results.set("embedded", rep.embedded)
            .set("resolution", rep.resolution)
            .set("base_points", rep.base_points)
            .set("cloud_points", rep.cloud_points)
            .set("collision_tol", rep.collision_tol);
        if (rep.witness) {
            auto w = jout::Value::object();
            w.set("a", tube_point_json(rep.witness->a))
                .set("b", tube_point_json(rep.witness->b))
                .set("segment_distance", rep.witness->segment_distance)
                .set("base_distance", rep.witness->base_distance);
            results.set("witness", std::move(w));
        } else {
            results.set("witness", nullptr);
        }
    } else if (cfg.tube_check == "bound") {
        const auto chk = euclidean_ball_bound(*model, cfg.b1, cfg.region_r);
        results.set("tube_volume", chk.tube_volume)
            .set("bound", chk.bound)
            .set("a", chk.a)
            .set("holds", chk.holds);
    } else {
        throw ConfigInvalid("tube: --check must be volume, embedded or bound");
    }
    auto doc = jout::Value::object();
    doc.set("command", "tube").set("inputs", std::move(inputs)).set("results", std::move(results));
    return doc;
}

// ---- report battery ----

struct Check {
    std::string name;
    std::string status;  // pass | fail | not_applicable
    jout::Value data = jout::Value::object();
};

inline std::vector<Vec3> battery_grid(const ImmersionModel& m, int n) {
    std::vector<Vec3> pts;
    if (m.kind() == ModelKind::rotational) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 4; ++j)
                pts.push_back({0.3 + 2.4 * i / (n - 1.0), 0.7 + 0.5 * j, 0.4 + 0.9 * j});
    } else if (m.kind() == ModelKind::cylinder) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 4; ++j)
                pts.push_back({-2.0 + 4.0 * i / (n - 1.0), 1.0 - 0.4 * j, 0.3 + 1.4 * j});
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < 4; ++j)
                pts.push_back({-2.0 + 4.0 * i / (n - 1.0), 0.5 * j - 1.0, -2.0 + 1.3 * j});
    }
    return pts;
}

inline std::array<double, 3> reduction_lambdas(const ImmersionModel& m, const Vec3& p) {
    if (m.kind() == ModelKind::rotational) {
        const auto& rm = static_cast<const RotationalModel&>(m);
        std::array<double, 3> l{rm.lambda_meridian(p[0]), rm.lambda_sphere(p[0]),
                                rm.lambda_sphere(p[0])};
        std::sort(l.begin(), l.end());
        return l;
    }
    if (m.kind() == ModelKind::cylinder)
        return {0.0, 0.0, static_cast<const CylinderModel&>(m).k()};
    const auto& gm = static_cast<const GraphModel&>(m);
    std::array<double, 3> l{0.0, 0.0, gm.curve_curvature(p[2])};
    std::sort(l.begin(), l.end());
    return l;
}

inline jout::Value run_report(const RunConfig& cfg, std::ostream& err);

}  // namespace run_detail

// Flatten the results object of a document into CSV (key,value rows).
inline void emit_csv(const jout::Value& /*doc*/, const std::string& rendered,
                     std::ostream& out) {
    // parse the rendered JSON and flatten numeric/boolean leaves
    const auto j = nlohmann::json::parse(rendered);
    out << "key,value\n";
    const std::function<void(const nlohmann::json&, const std::string&)> walk =
        [&](const nlohmann::json& v, const std::string& prefix) {
            if (v.is_object()) {
                for (const auto& [k, sub] : v.items())
                    walk(sub, prefix.empty() ? k : prefix + "." + k);
            } else if (v.is_array()) {
                for (std::size_t i = 0; i < v.size(); ++i)
                    walk(v[i], prefix + "[" + std::to_string(i) + "]");
            } else if (v.is_number()) {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
                out << prefix << ',' << buf << '\n';
            } else if (v.is_boolean()) {
                out << prefix << ',' << (v.get<bool>() ? "true" : "false") << '\n';
            } else if (v.is_string()) {
                out << prefix << ',' << v.get<std::string>() << '\n';
            }
        };
    walk(j["results"], "results");
}

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        jout::Value doc;
        if (cfg.command == "invariants")
            doc = run_detail::cmd_invariants(cfg);
        else if (cfg.command == "constants")
            doc = run_detail::cmd_constants(cfg);
        else if (cfg.command == "surface")
            doc = run_detail::cmd_surface(cfg);
        else if (cfg.command == "stability")
            doc = run_detail::cmd_stability(cfg);
        else if (cfg.command == "sobolev")
            doc = run_detail::cmd_sobolev(cfg);
        else if (cfg.command == "tube")
            doc = run_detail::cmd_tube(cfg);
        else if (cfg.command == "report")
            doc = run_detail::run_report(cfg, err);
        else
            throw ConfigInvalid("run: unknown command '" + cfg.command + "'");

        std::ostringstream rendered;
        doc.dump(rendered, 2);
        if (cfg.format == "csv") {
            emit_csv(doc, rendered.str(), out);
        } else if (cfg.format == "json") {
            out << rendered.str() << '\n';
        } else {
            throw ConfigInvalid("run: --format must be json or csv");
        }
        return 0;
    } catch (const ConfigInvalid& e) {
        err << "config error: " << e.what() << '\n';
        return 1;
    } catch (const OptimizerDidNotConverge& e) {
        err << "non-convergence: " << e.what() << '\n';
        return 3;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

namespace run_detail {

inline jout::Value run_report(const RunConfig& cfg, std::ostream& err) {
    if (!cfg.has_model) throw ConfigInvalid("report: --model is required");
    const auto model_ptr = cfg.model.build();
    const ImmersionModel& m = *model_ptr;
    std::vector<Check> checks;

    const auto grid = battery_grid(m, 16);
    const bool pinched = m.kind() == ModelKind::rotational;

    // 1. algebraic identities and chart consistency over the grid
    {
        std::vector<double> id_res(grid.size()), hk_res(grid.size()), sym_res(grid.size()),
            eig_res(grid.size());
        parallel_for(grid.size(), [&](std::size_t i) {
            const auto s = chart_sample(m, grid[i]);
            const auto& inv = s.invariants;
            id_res[i] = std::abs(inv.H * inv.H - inv.normA2 - 2.0 * inv.R);
            hk_res[i] = std::max(0.0, inv.H * inv.K - 0.5 * inv.R * inv.R);
            const Eigen::Matrix3d ga = s.metric * s.shape_operator;
            sym_res[i] = (ga - ga.transpose()).norm();
            const auto l = reduction_lambdas(m, grid[i]);
            eig_res[i] = std::max({std::abs(s.eigenvalues.lambda1 - l[0]),
                                   std::abs(s.eigenvalues.lambda2 - l[1]),
                                   std::abs(s.eigenvalues.lambda3 - l[2])});
        });
        const double worst_id = *std::max_element(id_res.begin(), id_res.end());
        const double worst_hk = *std::max_element(hk_res.begin(), hk_res.end());
        const double worst_sym = *std::max_element(sym_res.begin(), sym_res.end());
        const double worst_eig = *std::max_element(eig_res.begin(), eig_res.end());
        Check c;
        c.name = "algebraic_identities";
        c.status = (worst_id < 1e-10 && worst_hk < 1e-10 && worst_sym < 1e-9 && worst_eig < 1e-8)
                       ? "pass"
                       : "fail";
        c.data.set("max_identity_residual", worst_id)
            .set("max_hk_violation", worst_hk)
            .set("max_selfadjoint_residual", worst_sym)
            .set("max_eigenvalue_error", worst_eig)
            .set("samples", grid.size());
        checks.push_back(std::move(c));
    }

    // 2. pointwise gradient estimate
    {
        Check c;
        c.name = "gradient_estimate";
        const double c0 = 16.0;
        double worst_margin = std::numeric_limits<double>::infinity();
        bool all_hold = true;
        for (const auto& p : grid) {
            const auto rep = verify_prop21_pointwise(m, p, c0);
            worst_margin = std::min(worst_margin, rep.margin);
            all_hold = all_hold && rep.holds;
        }
        c.status = all_hold ? "pass" : "fail";
        c.data.set("c0", c0).set("min_margin", worst_margin).set("samples", grid.size());
        checks.push_back(std::move(c));
    }

    // 3. L1 identity
    {
        Check c;
        c.name = "l1_identity";
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); i += 4)
            worst = std::max(worst, verify_l1_identity(m, grid[i]).residual);
        c.status = worst < 1e-5 ? "pass" : "fail";
        c.data.set("max_residual", worst);
        checks.push_back(std::move(c));
    }

    // 4. stability scan
    {
        Check c;
        c.name = "stability_scan";
        BumpFamily fam;
        fam.center_range = cfg.center_range;
        fam.width_range = cfg.width_range;
        if (m.kind() == ModelKind::graph) {
            // keep bump supports inside the graph box
            const double reach = reduction::product_uv_margin(m);
            fam.center_range = {1.0, std::min(fam.center_range[1], 0.1 * reach)};
            fam.width_range = {0.5, std::min(fam.width_range[1], 0.1 * reach)};
        }
        const auto rep = instability_search(m, fam, cfg.budget, cfg.seed);
        const bool flat = m.kind() != ModelKind::rotational;  // K = 0 catalog models
        c.status = flat ? (rep.q1_value >= -1e-12 ? "pass" : "fail") : "pass";
        c.data = stability_json(rep);
        checks.push_back(std::move(c));
    }

    // 5. weighted inequality trend + plot data
    std::ostringstream sob_csv;
    sob_csv << "r,lhs,rhs,ratio\n";
    {
        Check c;
        c.name = "sobolev_trend";
        if (!pinched) {
            c.status = "not_applicable";
            c.data.set("reason", "model has K = 0; no positive pinching floor");
        } else {
            const auto k = constants_from_c0(kMaxPinching, 16.0, cfg.q, std::nullopt,
                                             cfg.c0_exponent);
            const double delta = 0.5 * delta_margin_max(k);
            bool mono = true;
            double prev_rhs = std::numeric_limits<double>::infinity();
            double prev_lhs = -std::numeric_limits<double>::infinity();
            auto rows = jout::Value::array();
            for (const double r : cfg.r_list) {
                const auto chk = sobolev_check(m, k, r, delta);
                mono = mono && chk.rhs < prev_rhs && chk.lhs >= prev_lhs - 1e-9;
                prev_rhs = chk.rhs;
                prev_lhs = chk.lhs;
                auto row = jout::Value::object();
                row.set("r", r).set("lhs", chk.lhs).set("rhs", chk.rhs).set("ratio", chk.ratio);
                rows.push(std::move(row));
                char buf[128];
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", r, chk.lhs, chk.rhs,
                              chk.ratio);
                sob_csv << buf;
            }
            c.status = mono ? "pass" : "fail";
            c.data.set("delta", delta).set("rows", std::move(rows));
        }
        checks.push_back(std::move(c));
    }

    // 6. |A|-Sobolev ratio trend (all models)
    {
        Check c;
        c.name = "corollary_trend";
        double prev = 0.0;
        bool growing = true;
        auto rows = jout::Value::array();
        for (const double r : cfg.r_list) {
            const auto chk = ssy_corollary_check(m, cfg.p, r);
            const double ratio = chk.lhs / chk.rhs;
            growing = growing && ratio > prev;
            prev = ratio;
            auto row = jout::Value::object();
            row.set("r", r).set("lhs", chk.lhs).set("rhs", chk.rhs).set("ratio", ratio);
            rows.push(std::move(row));
            if (!pinched) {
                char buf[128];
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", r, chk.lhs, chk.rhs,
                              ratio);
                sob_csv << buf;
            }
        }
        c.status = growing ? "pass" : "fail";
        c.data.set("p", cfg.p).set("rows", std::move(rows));
        checks.push_back(std::move(c));
    }

    // 7. volume growth + plot data
    std::ostringstream vol_csv;
    vol_csv << "r,volume\n";
    {
        Check c;
        c.name = "volume_growth";
        const auto fit = growth_exponent(m, cfg.r_list);
        for (std::size_t i = 0; i < cfg.r_list.size(); ++i) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", cfg.r_list[i], fit.volumes[i]);
            vol_csv << buf;
        }
        c.status = std::isfinite(fit.alpha) ? "pass" : "fail";
        c.data.set("alpha", fit.alpha).set("stderr", fit.stderr_alpha);
        checks.push_back(std::move(c));
    }

    // 8. tube checks
    {
        Check c;
        c.name = "tube_checks";
        bool ok = true;
        double worst_k = 0.0;
        for (const auto& p : grid) {
            const auto kb = k_bound_check(m, p);
            worst_k = std::max(worst_k, kb.lhs - kb.rhs);
            ok = ok && kb.holds;
        }
        c.data.set("max_k_bound_excess", worst_k);
        try {
            const auto bb = euclidean_ball_bound(m, 0.5, cfg.region_r);
            ok = ok && bb.holds;
            c.data.set("ball_bound_holds", bb.holds)
                .set("tube_volume", bb.tube_volume)
                .set("ball_bound", bb.bound);
        } catch (const SubfocalUndefined&) {
            c.data.set("ball_bound_holds", "not_applicable");
        }
        TubeSpec spec;
        spec.model = model_ptr;
        spec.radius_kind = TubeSpec::Radius::constant;
        spec.h0 = 0.5;
        spec.region_r = std::min(cfg.region_r, 4.0);
        const auto emb = self_intersection_test(spec, cfg.resolution);
        c.data.set("embedded_at_h_half", emb.embedded);
        c.status = ok ? "pass" : "fail";
        checks.push_back(std::move(c));
    }

    // bundle
    bool all_pass = true;
    auto checks_json = jout::Value::array();
    for (auto& c : checks) {
        if (c.status == "fail") all_pass = false;
        auto v = jout::Value::object();
        v.set("name", c.name).set("status", c.status).set("data", std::move(c.data));
        checks_json.push(std::move(v));
        if (c.status == "fail") err << "report: check failed: " << c.name << '\n';
    }

    const std::string vol_path = cfg.output_dir + "/r_vs_volume.csv";
    const std::string sob_path = cfg.output_dir + "/r_vs_sobolev_ratio.csv";
    {
        std::ofstream f(vol_path);
        if (!f) throw ConfigInvalid("report: cannot write " + vol_path);
        f << vol_csv.str();
    }
    {
        std::ofstream f(sob_path);
        if (!f) throw ConfigInvalid("report: cannot write " + sob_path);
        f << sob_csv.str();
    }

    auto inputs = jout::Value::object();
    inputs.set("model", cfg.model.echo())
        .set("seed", cfg.seed)
        .set("budget", cfg.budget)
        .set("r_list", jout::Value::numbers(cfg.r_list.begin(), cfg.r_list.end()));
    auto results = jout::Value::object();
    results.set("passed", all_pass)
        .set("checks", std::move(checks_json))
        .set("plot_files", jout::Value(jout::Array{jout::Value("r_vs_volume.csv"),
                                                   jout::Value("r_vs_sobolev_ratio.csv")}));
    auto doc = jout::Value::object();
    doc.set("command", "report").set("inputs", std::move(inputs)).set("results",
                                                                      std::move(results));
    return doc;
}

}  // namespace run_detail
}  // namespace zsc
