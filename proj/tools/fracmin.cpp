// Batch front end: resolves a JSON config (defaults, then --scene, then
// --config, then --seed), runs one experiment and writes
// {experiment}-{s}-{seed}.csv and .json into --out.

#include "fracmin/report.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <iostream>

using namespace fracmin;

namespace {

struct Common {
    std::string scene;
    std::string config;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out = ".";
    bool dry_run = false;
};

struct Output {
    std::string experiment;
    std::string tag;
    CsvTable table;
    Json summary;
};

using Runner = std::function<Output(const Json&)>;

std::vector<double> doubles(const Json& j, const char* key)
{
    const Json& v = j.at(key);
    require(v.is_array() && !v.empty(), ErrorKind::config, std::string("schema error at ") + key +
                                                               ": expected a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        require(x.is_number(), ErrorKind::config, std::string("schema error at ") + key + ": expected numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

std::vector<Vec2> points(const Json& j)
{
    require(j.contains("points") && j["points"].is_array(), ErrorKind::config,
            "schema error at points: expected an array of [x, y] pairs");
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < j["points"].size(); ++i)
        out.push_back(vec_from_json(j["points"][i], "points[" + std::to_string(i) + "]"));
    return out;
}

TangentField field_of(const Json& j, const Domain& omega)
{
    std::vector<FieldSpec> terms;
    const Json& f = j.at("fields");
    require(f.is_array() && !f.empty(), ErrorKind::config, "schema error at fields: expected a non-empty array");
    for (std::size_t i = 0; i < f.size(); ++i)
        terms.push_back(field_from_json(f[i], "fields[" + std::to_string(i) + "]"));
    return make_tangent_field(terms, omega);
}

std::vector<double> path_of(const Json& j)
{
    const Json& p = j.at("path");
    return geometric_path(p.at("rho0").get<double>(), p.at("q").get<double>(), p.at("count").get<int>());
}

Json history_json(const std::vector<BracketStep>& h)
{
    Json out = Json::array();
    for (const auto& b : h) out.push_back({b.lo, b.hi, b.f_lo, b.f_hi});
    return out;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

Output run_curvature(const Json& j)
{
    require(j.contains("set"), ErrorKind::config, "curvature needs a scene with a set (use --scene)");
    auto e = set_from_json(j["set"]);
    auto k = kernel_from_json(j.at("kernel"));
    auto cfg = quad_from_json(j.at("quad"));
    std::optional<Domain> omega;
    if (j.contains("domain")) omega = domain_from_json(j["domain"]);
    Output out{"curvature", s_tag(k.s()), CsvTable({"x", "y", "value", "error", "classification"}), Json::object()};
    for (const auto& x : points(j)) {
        bool exterior = omega && omega->signed_distance(x) > 0;
        auto rep = exterior ? fb_defect(e, *omega, x, k, cfg) : mean_curvature(e, x, k, cfg);
        out.table.add({x.x(), x.y(), rep.value, rep.result.error_estimate, std::string(to_string(rep.classification))});
    }
    out.summary["points"] = static_cast<long>(out.table.rows());
    return out;
}

Output run_perimeter(const Json& j)
{
    require(j.contains("set") && j.contains("domain"), ErrorKind::config,
            "perimeter needs a scene with a set and a domain (use --scene)");
    auto e = set_from_json(j["set"]);
    auto omega = domain_from_json(j["domain"]);
    auto k = kernel_from_json(j.at("kernel"));
    auto cfg = quad_from_json(j.at("quad"));
    PanelOptions opt;
    opt.h = j.value("panel_h", opt.h);
    auto p = frac_perimeter(e, omega, k, cfg, opt);
    Output out{"perimeter", s_tag(k.s()), CsvTable({"term", "value", "error"}), Json::object()};
    out.table.add({std::string("in_in"), p.term_in_in.value, p.term_in_in.error_estimate});
    out.table.add({std::string("in_out"), p.term_in_out.value, p.term_in_out.error_estimate});
    out.table.add({std::string("out_in"), p.term_out_in.value, p.term_out_in.error_estimate});
    out.table.add({std::string("total"), p.total, p.error});
    out.summary = {{"total", p.total}, {"error", p.error}, {"bias_bound", p.bias_bound}};
    return out;
}

Output run_annulus(const Json& j)
{
    double s = j.at("s").get<double>();
    auto cfg = quad_from_json(j.at("quad"));
    RootOptions opt;
    opt.tol_x = j.value("tol_R", opt.tol_x);
    opt.x_max = j.value("R_max", opt.x_max);
    auto sol = solve_annulus(s, cfg, opt, j.value("n", 2));
    Output out{"annulus", s_tag(s), CsvTable({"stage", "step", "lo", "hi", "f_lo", "f_hi"}), Json::object()};
    auto add = [&](const char* stage, const std::vector<BracketStep>& h) {
        for (std::size_t i = 0; i < h.size(); ++i)
            out.table.add({std::string(stage), static_cast<long>(i), h[i].lo, h[i].hi, h[i].f_lo, h[i].f_hi});
    };
    add("R", sol.history_R);
    add("r", sol.history_r);
    out.summary = {{"s", sol.s},
                   {"Rstar", sol.Rstar},
                   {"rstar", sol.rstar},
                   {"outer_radius", sol.Rstar * sol.rstar},
                   {"residual_f", sol.residual_f},
                   {"residual_g", sol.residual_g},
                   {"error_f", sol.error_f},
                   {"error_g", sol.error_g},
                   {"no_contact", sol.no_contact()}};
    return out;
}

Output run_sweep(const Json& j)
{
    auto s_list = doubles(j, "s_list");
    auto cfg = quad_from_json(j.at("quad"));
    auto sw = sweep_Rstar(s_list, cfg);
    Output out{"sweep-s", s_tag(s_list), CsvTable({"s", "Rstar", "residual"}), Json::object()};
    for (const auto& r : sw.rows) out.table.add({r.s, r.Rstar, r.residual});
    out.summary = {{"strictly_increasing", sw.strictly_increasing}};
    return out;
}

Output run_variation(const Json& j)
{
    auto e = set_from_json(j.at("set"));
    auto omega = domain_from_json(j.at("domain"));
    auto k = kernel_from_json(j.at("kernel"));
    auto cfg = quad_from_json(j.at("quad"));
    auto x = field_of(j, omega);
    Output out{"variation", s_tag(k.s()), CsvTable({"method", "value", "error"}), Json::object()};
    auto fm = first_variation_formula(e, omega, x, k, cfg);
    out.table.add({std::string("formula_interior"), fm.interior.value, fm.interior.error_estimate});
    out.table.add({std::string("formula_exterior"), fm.exterior.value, fm.exterior.error_estimate});
    out.table.add({std::string("formula"), fm.total, fm.error});
    out.summary = {{"formula", fm.total}, {"formula_error", fm.error}};
    if (j.value("finite_difference", true)) {
        auto fd = first_variation_fd(e, omega, x, k, cfg, j.value("h", 1e-2));
        out.table.add({std::string("fd"), fd.value, fd.error});
        out.summary["fd"] = fd.value;
        out.summary["fd_error"] = fd.error;
        out.summary["fd_flagged"] = fd.flagged;
        out.summary["difference"] = std::abs(fd.value - fm.total);
    }
    return out;
}

Output run_volume(const Json& j)
{
    std::string mode = j.value("mode", std::string("set"));
    if (mode == "catenoid") {
        auto sc = catenoid_scan(j.value("R_min", 0.5), j.value("R_max", 8.0), j.value("count", 40));
        Output out{"volume-catenoid", "classical", CsvTable({"R", "defect", "relative"}), Json::object()};
        for (std::size_t i = 0; i < sc.R.size(); ++i) out.table.add({sc.R[i], sc.defect[i], sc.relative[i]});
        out.summary = {{"min_abs", sc.min_abs},
                       {"min_relative", sc.min_relative},
                       {"sign_change", sc.sign_change},
                       {"equal_volume_radii", sc.equal_volume_radii}};
        return out;
    }
    if (mode == "lawson_halfvolume") {
        Output out{"volume-lawson", "half", CsvTable({"n", "m", "alpha", "fraction"}), Json::object()};
        for (auto [n, m] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{1, 2}}) {
            double a = lawson_halfvolume_alpha(n, m);
            out.table.add({static_cast<long>(n), static_cast<long>(m), a, lawson_fraction(n, m, a)});
        }
        return out;
    }
    require(mode == "set", ErrorKind::config, "schema error at mode: expected set, catenoid or lawson_halfvolume");
    auto e = set_from_json(j.at("set"));
    auto omega = domain_from_json(j.at("domain"));
    auto v = volume_condition_check(e, omega, j.value("tol", 1e-6));
    Output out{"volume", "set", CsvTable({"quantity", "value"}), Json::object()};
    out.table.add({std::string("vol_in"), v.vol_in});
    out.table.add({std::string("vol_out"), v.vol_out});
    out.table.add({std::string("defect"), v.defect});
    out.table.add({std::string("domain_volume"), v.domain_volume});
    out.summary = {{"defect", v.defect}, {"consistent", v.consistent}};
    return out;
}

Output run_concentration(const Json& j)
{
    auto e = set_from_json(j.at("set"));
    auto omega = domain_from_json(j.at("domain"));
    auto cfg = quad_from_json(j.at("quad"));
    auto x = field_of(j, omega);
    auto s_list = doubles(j, "s_list");
    auto t = s_to_1_concentration(e, omega, x, s_list, cfg);
    Output out{"concentration", s_tag(s_list), CsvTable({"s", "lhs", "lhs_error", "rhs", "rhs_literal", "ratio"}),
               Json::object()};
    for (const auto& r : t.rows) out.table.add({r.s, r.lhs, r.lhs_error, r.rhs, r.rhs_literal, r.ratio});
    out.summary = {{"psi", t.psi}, {"monotone", t.monotone}, {"lhs_decreasing", t.lhs_decreasing}};
    return out;
}

Output scan_output(const std::string& kind, const KernelSpec& k, const ScanReport& r)
{
    Output out{"scan-" + kind, s_tag(k.s()), CsvTable({"x", "y", "distance", "value", "error"}), Json::object()};
    for (const auto& p : r.points) out.table.add({p.x.x(), p.x.y(), p.distance, p.value, p.error});
    out.summary = {{"exponent", r.exponent}, {"sign", r.sign}, {"divergent", r.divergent}, {"constant", r.constant}};
    return out;
}

Output run_scan(const std::string& kind, const Json& j)
{
    auto k = kernel_from_json(j.at("kernel"));
    auto cfg = quad_from_json(j.at("quad"));
    auto rho = path_of(j);
    if (kind == "corner") {
        double t1 = j.value("theta1", 0.3), t2 = j.value("theta2", -0.2);
        auto e = SetGeometry::corner_pair(t1, t2);
        std::vector<Vec2> path;
        for (double r : rho) path.push_back(r * unit_dir(t1));
        return scan_output(kind, k, corner_blowup_scan(e, Vec2::Zero(), path, k, cfg));
    }
    if (kind == "tilt") return scan_output(kind, k, tilted_defect_scan(j.value("theta", 0.4), rho, k, cfg));
    if (kind == "stickiness") {
        std::string f = j.value("fixture", std::string("outside"));
        StickinessFixture fx = f == "outside"    ? StickinessFixture::outside
                               : f == "inside"   ? StickinessFixture::inside
                               : f == "symmetric" ? StickinessFixture::symmetric
                                                  : (fail(ErrorKind::config, "schema error at fixture: unknown \"" + f + "\""),
                                                     StickinessFixture::outside);
        return scan_output(kind + "-" + f, k,
                           stickiness_blowup_scan(fx, rho, k, cfg, j.value("strip_half_width", 0.1)));
    }
    if (kind == "kernel-mass") {
        auto omega = domain_from_json(j.at("domain"));
        Vec2 dir = j.contains("direction") ? vec_from_json(j["direction"], "direction").normalized() : Vec2::UnitX();
        std::vector<Vec2> path;
        for (double r : rho) {
            Vec2 base = omega.kind() == Domain::Kind::ball ? Vec2(omega.center() + omega.radius() * dir)
                                                           : Vec2(omega.offset() * omega.normal());
            Vec2 out = omega.kind() == Domain::Kind::ball ? dir : omega.normal();
            path.push_back(base + r * out);
        }
        return scan_output(kind, k, kernel_mass_scan(omega, path, k, cfg));
    }
    fail(ErrorKind::config, "unknown scan kind \"" + kind + "\"");
}

// ---------------------------------------------------------------------------
// Defaults
// ---------------------------------------------------------------------------

Json defaults_for(const std::string& cmd)
{
    Json quad = to_json(QuadConfig{});
    Json ball = {{"kind", "ball"}, {"center", {0.0, 0.0}}, {"radius", 1.0}};
    Json path = {{"rho0", 0.0625}, {"q", 0.5}, {"count", 17}};
    if (cmd == "curvature" || cmd == "perimeter") return {{"kernel", {{"n", 2}, {"s", 0.5}}}, {"quad", quad}};
    if (cmd == "annulus") return {{"s", 0.05}, {"n", 2}, {"tol_R", 1e-4}, {"R_max", 1e9}, {"quad", quad}};
    if (cmd == "sweep-s") return {{"s_list", {0.4, 0.2, 0.1, 0.05}}, {"quad", quad}};
    if (cmd == "variation")
        return {{"set", {{"shape", "half_space"}, {"normal", {0.0, 1.0}}, {"offset", 0.5}}},
                {"domain", ball},
                {"fields", {{{"kind", "rotation"}, {"bump_center", {0.866025403784439, 0.5}}, {"bump_radius", 0.4}}}},
                {"kernel", {{"n", 2}, {"s", 0.7}}},
                {"h", 1e-2},
                {"finite_difference", true},
                {"quad", quad}};
    if (cmd == "volume")
        return {{"mode", "set"},
                {"set", {{"shape", "half_space"}, {"normal", {0.0, 1.0}}, {"offset", 0.0}}},
                {"domain", ball},
                {"tol", 1e-6}};
    if (cmd == "concentration")
        return {{"set", {{"shape", "half_space"}, {"normal", {0.0, -1.0}}, {"offset", -0.5}}},
                {"domain", ball},
                {"fields", {{{"kind", "rotation"}, {"bump_center", {0.866025403784439, 0.5}}, {"bump_radius", 0.4}}}},
                {"s_list", {0.7, 0.8, 0.9, 0.95}},
                {"quad", quad}};
    if (cmd == "corner") return {{"theta1", 0.3}, {"theta2", -0.2}, {"kernel", {{"n", 2}, {"s", 0.5}}}, {"path", path}, {"quad", quad}};
    if (cmd == "tilt") return {{"theta", 0.4}, {"kernel", {{"n", 2}, {"s", 0.5}}}, {"path", path}, {"quad", quad}};
    if (cmd == "stickiness")
        return {{"fixture", "outside"}, {"strip_half_width", 0.1}, {"kernel", {{"n", 2}, {"s", 0.5}}},
                {"path", path},         {"quad", quad}};
    if (cmd == "kernel-mass")
        return {{"domain", ball}, {"direction", {1.0, 0.0}}, {"kernel", {{"n", 2}, {"s", 0.5}}},
                {"path", {{"rho0", 0.25}, {"q", 0.5}, {"count", 19}}}, {"quad", quad}};
    return Json::object();
}

Json resolve(const std::string& cmd, const Common& c)
{
    Json j = defaults_for(cmd);
    if (!c.scene.empty()) j.merge_patch(load_json(c.scene));
    if (!c.config.empty()) j.merge_patch(load_json(c.config));
    if (c.seed_set) {
        if (!j.contains("quad")) j["quad"] = to_json(QuadConfig{});
        j["quad"]["seed"] = c.seed;
    }
    return j;
}

std::uint64_t seed_of(const Json& j)
{
    if (j.contains("quad") && j["quad"].contains("seed") && j["quad"]["seed"].is_number_unsigned())
        return j["quad"]["seed"].get<std::uint64_t>();
    return QuadConfig{}.seed;
}

int execute(const std::string& cmd, const Common& c, const Runner& run)
{
    Json resolved = resolve(cmd, c);
    auto manifest = RunManifest::make(cmd, c.config, seed_of(resolved), c.out, resolved);
    if (c.dry_run) {
        std::cout << manifest.to_json().dump(2) << '\n';
        return 0;
    }
    auto t0 = std::chrono::steady_clock::now();
    Output out = run(resolved);
    manifest.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string stem = output_stem(out.experiment, out.tag, manifest.seed);
    write_file(c.out, stem + ".csv", out.table.str(manifest.config_hash));
    Json summary = {{"manifest", manifest.to_json()}, {"result", out.summary}};
    write_file(c.out, stem + ".json", summary.dump(2) + "\n");
    std::cout << stem << ".csv\n";
    return 0;
}

void add_common(CLI::App* app, Common& c, bool scene)
{
    if (scene) app->add_option("--scene", c.scene, "Scene JSON (set, domain, kernel, points)");
    app->add_option("--config", c.config, "Config JSON merged over the defaults");
    app->add_option("--seed", c.seed, "RNG seed")->each([&c](const std::string&) { c.seed_set = true; });
    app->add_option("--out", c.out, "Output directory");
    app->add_flag("--dry-run", c.dry_run, "Print the resolved config and exit");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"fracmin: fractional free-boundary laboratory"};
    app.require_subcommand(1);
    Common common;
    std::string scan_kind;

    struct Entry {
        std::string name;
        std::string help;
        Runner run;
        bool scene;
    };
    std::vector<Entry> entries = {
        {"curvature", "H at the scene points (A outside the domain)", run_curvature, true},
        {"perimeter", "Per_s(E; Omega) and its three terms", run_perimeter, true},
        {"annulus", "Boundary-free annulus solution", run_annulus, false},
        {"sweep-s", "R_* along a list of orders", run_sweep, false},
        {"variation", "First variation by finite differences and by the boundary formula", run_variation, true},
        {"volume", "Volume condition checks", run_volume, true},
        {"concentration", "Exterior term of the first variation as s -> 1", run_concentration, true},
    };
    std::vector<std::pair<CLI::App*, const Entry*>> subs;
    for (const auto& e : entries) {
        auto* sub = app.add_subcommand(e.name, e.help);
        add_common(sub, common, e.scene);
        subs.emplace_back(sub, &e);
    }
    auto* scan = app.add_subcommand("scan", "Blow-up scans near singular points");
    scan->add_option("kind", scan_kind, "corner, tilt, stickiness or kernel-mass")
        ->required()
        ->check(CLI::IsMember({"corner", "tilt", "stickiness", "kernel-mass"}));
    add_common(scan, common, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        for (auto& [sub, entry] : subs)
            if (sub->parsed()) return execute(entry->name, common, entry->run);
        if (scan->parsed())
            return execute(scan_kind, common, [&](const Json& j) { return run_scan(scan_kind, j); });
    } catch (const Error& e) {
        std::cerr << "fracmin: " << to_string(e.kind()) << " error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const Json::exception& e) {
        std::cerr << "fracmin: config error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
