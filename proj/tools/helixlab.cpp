#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "helixlab/catalog.hpp"
#include "helixlab/curves.hpp"
#include "helixlab/mfdfile.hpp"
#include "helixlab/report.hpp"

namespace hx = helixlab;

namespace {

// exit codes: 0 ok/confirmed, 1 negative verdict, 2 input error,
// 3 numeric failure, 4 hypothesis-not-met, 5 violated
constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitHypothesis = 4;
constexpr int kExitViolated = 5;

hx::Immersion resolve_manifold(const std::string& ref) {
    for (const auto& name : hx::catalog_list())
        if (name == ref) return hx::catalog_get(ref).immersion;
    if (std::filesystem::exists(ref)) return hx::load_manifold_file(ref);
    throw hx::InputError("unknown manifold '" + ref + "': not a catalog name (see 'helixlab list') "
                         "and not a file");
}

std::vector<double> split_numbers(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw hx::InputError("bad number '" + tok + "' in '" + csv + "'");
        }
    }
    return out;
}

std::vector<std::string> split_fields(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

Eigen::VectorXd parse_direction(const std::string& csv, int n) {
    const std::vector<double> xs = split_numbers(csv);
    if (static_cast<int>(xs.size()) != n)
        throw hx::InputError("direction needs " + std::to_string(n) + " components, got " +
                             std::to_string(xs.size()));
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(xs.data(), xs.size());
    const double norm = d.norm();
    if (norm < 1e-12) throw hx::InputError("direction must be nonzero");
    if (std::abs(norm - 1.0) > 1e-6)
        std::cerr << "warning: direction normalized (|d| = " << norm << ")\n";
    return d / norm;
}

Eigen::VectorXd parse_point(const std::string& csv, int m) {
    const std::vector<double> xs = split_numbers(csv);
    if (static_cast<int>(xs.size()) != m)
        throw hx::InputError("chart point needs " + std::to_string(m) + " components, got " +
                             std::to_string(xs.size()));
    return Eigen::Map<const Eigen::VectorXd>(xs.data(), xs.size());
}

void emit(const hx::Json& doc, const std::string& out_path) {
    const std::string text = hx::dump_document(doc);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw hx::InputError("cannot open output file '" + out_path + "'");
        out << text;
    }
}

hx::Json base_params(int grid, double tol, std::uint64_t seed) {
    hx::Json j;
    j["grid"] = grid;
    j["tol"] = tol;
    j["seed"] = seed;
    return j;
}

struct CommonOpts {
    std::string manifold;
    std::string direction;
    std::string out;
    int grid = 20;
    double tol = 1e-6;
    double step = 1e-2;
    double smax = 1.0;
    std::uint64_t seed = 42;
};

int run_analyze(const CommonOpts& opt) {
    const hx::Immersion M = resolve_manifold(opt.manifold);
    const Eigen::VectorXd d = parse_direction(opt.direction, M.ambient_dim());
    const auto grid = hx::make_grid(M.domain(), opt.grid);
    const hx::HelixVerdict v = hx::check_helix(M, d, grid, opt.tol);

    hx::Json instance;
    instance["manifold"] = M.name();
    instance["direction"] = std::vector<double>(d.data(), d.data() + d.size());
    emit(hx::make_document("analyze", instance, base_params(opt.grid, opt.tol, opt.seed),
                           hx::verdict_json(v)),
         opt.out);
    return v.is_helix ? kExitOk : kExitNegative;
}

int run_search(const CommonOpts& opt, int starts) {
    const hx::Immersion M = resolve_manifold(opt.manifold);
    const auto grid = hx::make_grid(M.domain(), opt.grid);
    const hx::WeakHelixResult r = hx::find_helix_directions(M, grid, opt.tol, starts, opt.seed);

    hx::Json instance;
    instance["manifold"] = M.name();
    hx::Json params = base_params(opt.grid, opt.tol, opt.seed);
    params["starts"] = starts;
    emit(hx::make_document("search", instance, params, hx::weak_helix_json(r)), opt.out);
    return kExitOk;
}

int run_trace(const CommonOpts& opt, const std::string& seed_point) {
    const hx::Immersion M = resolve_manifold(opt.manifold);
    const Eigen::VectorXd d = parse_direction(opt.direction, M.ambient_dim());
    const Eigen::VectorXd u0 = parse_point(seed_point, M.dim());

    const hx::CurveOnManifold c = hx::helix_line(M, d, u0, opt.smax, opt.step);
    if (c.samples.size() < 5)
        throw hx::GeometryError("trace produced fewer than 5 samples before leaving the domain");

    const double geo = hx::geodesic_residual(M, c);
    const std::vector<double> nc = hx::normal_curvature(M, c);
    const hx::FrenetData f = hx::frenet(c);
    double nc_min = nc.front(), nc_max = nc.front(), nc_sum = 0.0;
    for (double v : nc) {
        nc_min = std::min(nc_min, v);
        nc_max = std::max(nc_max, v);
        nc_sum += v;
    }
    double straight = 0.0;
    for (std::size_t i = 1; i + 1 < c.samples.size(); ++i)
        straight = std::max(straight, *f.k[i]);

    hx::Json summary;
    summary["samples"] = c.samples.size();
    summary["arc_length"] = c.samples.back().s;
    summary["truncated"] = c.truncated;
    summary["geodesic_residual"] = geo;
    summary["straightness_residual"] = straight;
    summary["normal_curvature_min"] = nc_min;
    summary["normal_curvature_mean"] = nc_sum / static_cast<double>(nc.size());
    summary["normal_curvature_max"] = nc_max;

    hx::Json instance;
    instance["manifold"] = M.name();
    instance["direction"] = std::vector<double>(d.data(), d.data() + d.size());
    instance["seed_point"] = std::vector<double>(u0.data(), u0.data() + u0.size());
    hx::Json params = base_params(opt.grid, opt.tol, opt.seed);
    params["step"] = opt.step;
    params["s_max"] = opt.smax;
    const hx::Json doc = hx::make_document("trace", instance, params, summary);

    if (!opt.out.empty()) {
        std::ofstream csv(opt.out, std::ios::binary);
        if (!csv) throw hx::InputError("cannot open output file '" + opt.out + "'");
        hx::write_curve_csv(csv, c);
        std::cout << hx::dump_document(doc);
    } else {
        hx::write_curve_csv(std::cout, c);
        std::cerr << hx::dump_document(doc);
    }
    return kExitOk;
}

int run_verify(const CommonOpts& opt, const std::string& theorem,
               const std::vector<std::string>& directions, const std::vector<std::string>& seeds,
               const std::string& xi_csv, const std::string& curve_field_csv) {
    const hx::Immersion M = resolve_manifold(opt.manifold);

    hx::VerifyParams params;
    params.grid_per_axis = opt.grid;
    params.tol = opt.tol;
    params.step = opt.step;
    params.s_max = opt.smax;
    params.seed = opt.seed;

    std::vector<Eigen::VectorXd> ds;
    for (const auto& s : directions) ds.push_back(parse_direction(s, M.ambient_dim()));

    std::vector<Eigen::VectorXd> seed_points;
    for (const auto& s : seeds) seed_points.push_back(parse_point(s, M.dim()));
    if (seed_points.empty()) seed_points = hx::default_seeds(M, 5, params.seed);

    auto need_direction = [&]() -> const Eigen::VectorXd& {
        if (ds.empty()) throw hx::InputError("theorem " + theorem + " needs --direction");
        return ds.front();
    };

    hx::TheoremReport report;
    if (theorem == "2.1") {
        report = hx::verify_prop_2_1(M, need_direction(), seed_points, params);
    } else if (theorem == "3.1") {
        report = hx::verify_thm_3_1(M, need_direction(), seed_points.front(), params);
    } else if (theorem == "3.2") {
        report = hx::verify_thm_3_2(M, need_direction(), seed_points, params);
    } else if (theorem == "L3.1") {
        report = hx::verify_lemma_3_1(M, need_direction(), seed_points, params);
    } else if (theorem == "3.3") {
        report = hx::verify_thm_3_3(M, params);
    } else if (theorem == "3.4") {
        report = hx::verify_thm_3_4(M, need_direction(), params);
    } else if (theorem == "3.5") {
        report = hx::verify_thm_3_5(M, need_direction(), seed_points, params);
    } else if (theorem == "3.6") {
        if (ds.empty()) throw hx::InputError("theorem 3.6 needs at least one --direction");
        if (xi_csv.empty() || curve_field_csv.empty())
            throw hx::InputError("theorem 3.6 needs --xi and --curve-field (expressions over u1..um)");
        const hx::NormalField xi = hx::NormalField::parse(M, split_fields(xi_csv));
        const hx::TangentField field = hx::TangentField::parse(M, split_fields(curve_field_csv));
        report = hx::verify_thm_3_6(M, ds, field, seed_points.front(), xi, params);
    } else if (theorem == "3.8") {
        report = hx::verify_thm_3_8(M, need_direction(), seed_points, params);
    } else if (theorem == "C3.2") {
        report = hx::verify_cor_3_2(M, need_direction(), seed_points, params);
    } else {
        throw hx::InputError("unknown theorem id '" + theorem +
                             "' (expected 2.1, 3.1, 3.2, L3.1, 3.3, 3.4, 3.5, 3.6, 3.8 or C3.2)");
    }

    hx::Json instance;
    instance["manifold"] = M.name();
    instance["theorem"] = theorem;
    {
        hx::Json dirs = hx::Json::array();
        for (const auto& d : ds)
            dirs.push_back(std::vector<double>(d.data(), d.data() + d.size()));
        instance["directions"] = std::move(dirs);
        hx::Json sp = hx::Json::array();
        for (const auto& u : seed_points)
            sp.push_back(std::vector<double>(u.data(), u.data() + u.size()));
        instance["seed_points"] = std::move(sp);
    }
    emit(hx::make_document("verify", instance, hx::params_json(params),
                           hx::theorem_report_json(report)),
         opt.out);

    switch (report.verdict) {
    case hx::Verdict::Confirmed: return kExitOk;
    case hx::Verdict::HypothesisNotMet: return kExitHypothesis;
    case hx::Verdict::Violated: return kExitViolated;
    }
    return kExitNumeric;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"helixlab: extrinsic differential geometry of parametric submanifolds and "
                 "numeric verification of weak r-helix theory"};
    app.require_subcommand(1);

    CommonOpts opt;
    int starts = 8;
    std::string theorem, seed_point, xi_csv, curve_field_csv;
    std::vector<std::string> directions, seed_points;

    auto add_common = [&](CLI::App* cmd, bool with_manifold = true) {
        if (with_manifold) cmd->add_option("manifold", opt.manifold, "catalog name or .mfd file");
        cmd->add_option("--grid", opt.grid, "grid points per axis")->capture_default_str();
        cmd->add_option("--tol", opt.tol, "zero-residual tolerance")->capture_default_str();
        cmd->add_option("--seed", opt.seed, "RNG seed")->capture_default_str();
        cmd->add_option("--out", opt.out, "write the report (or CSV for trace) to this file");
    };

    CLI::App* list_cmd = app.add_subcommand("list", "list catalog manifolds");

    CLI::App* analyze = app.add_subcommand("analyze", "check a single helix direction over a grid");
    add_common(analyze);
    analyze->add_option("--direction", opt.direction, "ambient direction, comma separated")
        ->required();

    CLI::App* search = app.add_subcommand("search", "find a weak r-helix direction set");
    add_common(search);
    search->add_option("--starts", starts, "extra random starts per deflation round")
        ->capture_default_str();

    CLI::App* trace = app.add_subcommand("trace", "integrate a helix line and write CSV");
    add_common(trace);
    trace->add_option("--direction", opt.direction, "helix direction")->required();
    trace->add_option("--seed-point", seed_point, "chart start point, comma separated")->required();
    trace->add_option("--step", opt.step, "arc-length step")->capture_default_str();
    trace->add_option("--smax", opt.smax, "arc length to integrate")->capture_default_str();

    CLI::App* verify = app.add_subcommand("verify", "run a theorem verifier");
    verify->add_option("theorem", theorem, "2.1, 3.1, 3.2, L3.1, 3.3, 3.4, 3.5, 3.6, 3.8, C3.2")
        ->required();
    add_common(verify);
    verify->add_option("--direction", directions, "helix direction (repeatable)");
    verify->add_option("--seed-point", seed_points, "curve seed point (repeatable)");
    verify->add_option("--step", opt.step, "arc-length step")->capture_default_str();
    verify->add_option("--smax", opt.smax, "arc length per curve")->capture_default_str();
    verify->add_option("--xi", xi_csv, "normal field: n expressions, comma separated (thm 3.6)");
    verify->add_option("--curve-field", curve_field_csv,
                       "curve field: m chart expressions, comma separated (thm 3.6)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (list_cmd->parsed()) {
            for (const auto& name : hx::catalog_list()) std::cout << name << "\n";
            return kExitOk;
        }
        if (analyze->parsed()) return run_analyze(opt);
        if (search->parsed()) return run_search(opt, starts);
        if (trace->parsed()) return run_trace(opt, seed_point);
        if (verify->parsed())
            return run_verify(opt, theorem, directions, seed_points, xi_csv, curve_field_csv);
    } catch (const hx::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const hx::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const hx::GeometryError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const hx::EvalError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const hx::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitInput;
}
