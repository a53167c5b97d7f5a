// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are the
// constants below; a criterion listed in known_deviations still prints FAIL
// but does not change the exit status.

#include "fracmin/experiments.hpp"
#include "fracmin/report.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace fracmin;

namespace {

// Criterion 1
constexpr double limit_tol = 0.01;
// Criterion 2
constexpr double criticality_factor = 10;
// Criterion 3: brute-force MC oracle (tests/oracles/curvature_mc_oracle.py).
constexpr double oracle_sigmas = 3;
struct Anchor {
    double s, value, sigma;
};
constexpr Anchor oracle[] = {
    {0.3, 9.135223274874, 4.987e-3}, {0.5, 9.651584906479, 1.465e-2}, {0.7, 9.861131867959, 3.664e-2}};
// Criterion 4
constexpr double variation_rel_tol = 0.02;
constexpr int variation_fixtures = 10;
// Criterion 5
constexpr double residual_factor = 10;
// Criterion 7
constexpr double halfplane_tol = 1e-6;
constexpr double lawson_min_fraction = 0.1;
// Criterion 8
constexpr double exponent_rel_tol = 0.2;
// Criterion 9
constexpr double ratio_lo = 0.7, ratio_hi = 1.3;

// Criterion 1 compares c_{n,s}/(1-s) with 16n/|S^{n-1}|, which the closed
// form of c_{n,s} does not reach (its limit is 16 Gamma((n+1)/2)/pi^{n/2}).
const std::set<int> known_deviations = {1};

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double a)
{
    char b[64];
    std::snprintf(b, sizeof b, f, a);
    return b;
}

void note(Outcome& o, bool ok, const std::string& what)
{
    o.pass = o.pass && ok;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += what + (ok ? "" : " [x]");
}

Outcome constant_limits()
{
    Outcome o;
    for (int n : {2, 3}) {
        double lo_ref = 8 / sphere_area(n);
        double lo = frac_constant(n, 1e-4) / 1e-4;
        note(o, std::abs(lo - lo_ref) <= limit_tol * lo_ref,
             "n=" + std::to_string(n) + " c/s " + fmt("%.6f", lo) + " vs 8/w " + fmt("%.6f", lo_ref));
        double hi_ref = 16.0 * n / sphere_area(n);
        double hi = frac_constant(n, 1 - 1e-4) / 1e-4;
        note(o, std::abs(hi - hi_ref) <= limit_tol * hi_ref,
             "c/(1-s) " + fmt("%.6f", hi) + " vs 16n/w " + fmt("%.6f", hi_ref));
        double ex = frac_constant_limit_one(n);
        std::printf("    n=%d: c/(1-s) at 1-1e-4 is %.6f; 16 Gamma((n+1)/2)/pi^(n/2) = %.6f (rel %.2e)\n", n, hi, ex,
                    std::abs(hi / ex - 1));
    }
    return o;
}

Outcome symmetric_criticality()
{
    Outcome o;
    QuadConfig cfg;
    auto omega = Domain::ball(Vec2::Zero(), 1);
    auto line = SetGeometry::half_space(Vec2(0, 1), 0);
    const std::pair<const char*, SetGeometry> cases[] = {
        {"hyperplane", line},
        {"sector1", SetGeometry::cone_sector(1)},
        {"sector2", SetGeometry::cone_sector(2)},
        {"sector4", SetGeometry::cone_sector(4)},
        {"glued-hyperplane", SetGeometry::pie_glued(line, 1.0)},
        {"glued-sector2", SetGeometry::pie_glued(SetGeometry::cone_sector(2), 1.0)},
        {"glued-sector4", SetGeometry::pie_glued(SetGeometry::cone_sector(4), 1.0)},
    };
    CriticalityOptions opt;
    for (double s : {0.3, 0.7}) {
        auto k = KernelSpec::standard(2, s);
        for (const auto& [name, e] : cases) {
            auto r = criticality_residual(e, omega, k, cfg, opt);
            bool ok = r.nodes_H > 0 && r.max_H <= criticality_factor * r.error_H &&
                      r.max_A <= criticality_factor * r.error_A;
            std::printf("    s=%.1f %-17s H %.2e / %.2e (%d nodes)  A %.2e / %.2e (%d nodes)\n", s, name, r.max_H,
                        r.error_H, r.nodes_H, r.max_A, r.error_A, r.nodes_A);
            if (!ok) note(o, false, std::string(name) + " s=" + fmt("%.1f", s));
        }
    }
    if (o.pass) o.detail = "7 configurations x 2 orders, |H| and |A| within 10x their mean errors";
    return o;
}

Outcome oracle_crosscheck()
{
    Outcome o;
    QuadConfig cfg;
    auto disk = SetGeometry::ball(Vec2::Zero(), 1);
    for (const auto& a : oracle) {
        auto r = mean_curvature(disk, Vec2(1, 0), KernelSpec::standard(2, a.s), cfg);
        double sigma = std::hypot(a.sigma, r.result.error_estimate);
        double z = std::abs(r.value - a.value) / sigma;
        note(o, z <= oracle_sigmas, "s=" + fmt("%.1f", a.s) + " H " + fmt("%.9f", r.value) + " z " + fmt("%.2f", z));
    }
    return o;
}

Outcome first_variation()
{
    Outcome o;
    QuadConfig cfg;
    auto omega = Domain::ball(Vec2::Zero(), 1);
    std::mt19937_64 g(20240611);
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0;
    for (int i = 0; i < variation_fixtures; ++i) {
        double s = i % 2 ? 0.7 : 0.3;
        double phi = 2 * pi * u(g);
        double b = (0.15 + 0.45 * u(g)) * (u(g) < 0.5 ? -1 : 1);
        Vec2 nrm = unit_dir(phi);
        auto e = SetGeometry::half_space(nrm, b);
        // Bump placed near one contact point of the chord, with jitter.
        Vec2 foot = b * nrm, t = perp(nrm);
        double half = std::sqrt(1 - b * b);
        Vec2 contact = foot + (u(g) < 0.5 ? -half : half) * t;
        FieldSpec f;
        f.amplitude = (0.5 + u(g)) * (u(g) < 0.5 ? -1 : 1);
        f.bump_center = 0.95 * contact + 0.05 * unit_dir(2 * pi * u(g));
        f.bump_radius = 0.4 + 0.3 * u(g);
        auto x = make_tangent_field({f}, omega);
        auto k = KernelSpec::standard(2, s);
        auto fm = first_variation_formula(e, omega, x, k, cfg);
        auto fd = first_variation_fd(e, omega, x, k, cfg);
        double gap = std::abs(fd.value - fm.total);
        double allowed = std::max(variation_rel_tol * std::abs(fm.total), fd.error + fm.error);
        worst = std::max(worst, gap / allowed);
        std::printf("    fixture %d s=%.1f normal_angle %.3f offset %+.3f: fd %.8f formula %.8f gap %.2e allowed %.2e\n",
                    i, s, phi, b, fd.value, fm.total, gap, allowed);
        if (gap > allowed) note(o, false, "fixture " + std::to_string(i));
    }
    note(o, true, "worst gap/allowed " + fmt("%.3f", worst));
    return o;
}

Outcome annulus_existence()
{
    Outcome o;
    QuadConfig cfg;
    auto k_of = [](double s) { return KernelSpec::standard(2, s); };
    for (double s : {0.05, 0.1}) {
        auto sol = solve_annulus(s, cfg);
        bool roots = sol.no_contact() && sol.residual_f <= residual_factor * sol.error_f &&
                     sol.residual_g <= residual_factor * sol.error_g;
        CriticalityOptions opt;
        opt.exterior_reach = sol.Rstar * sol.rstar;  // reaches the outer circle
        auto crit = criticality_residual(sol.set(), Domain::ball(Vec2::Zero(), 1), k_of(s), cfg, opt);
        bool crit_ok = crit.nodes_H > 0 && crit.nodes_A > 0 && crit.max_H <= criticality_factor * crit.error_H &&
                       crit.max_A <= criticality_factor * crit.error_A;
        std::printf("    s=%.2f R*=%.9g r*=%.9g |f|=%.2e (err %.2e) |g|=%.2e (err %.2e); H %.2e / %.2e  A %.2e / %.2e\n",
                    s, sol.Rstar, sol.rstar, sol.residual_f, sol.error_f, sol.residual_g, sol.error_g, crit.max_H,
                    crit.error_H, crit.max_A, crit.error_A);
        note(o, roots && crit_ok, "s=" + fmt("%.2f", s) + " R*=" + fmt("%.6g", sol.Rstar) + " r*=" +
                                      fmt("%.6f", sol.rstar));
    }
    return o;
}

Outcome rstar_divergence()
{
    Outcome o;
    QuadConfig cfg;
    auto sw = sweep_Rstar({0.4, 0.2, 0.1, 0.05}, cfg);
    bool ok = sw.rows.size() == 4;
    for (std::size_t i = 0; ok && i + 1 < sw.rows.size(); ++i) ok = sw.rows[i + 1].Rstar > sw.rows[i].Rstar;
    std::string d;
    for (const auto& r : sw.rows) d += (d.empty() ? "" : " ") + fmt("%.6g", r.Rstar);
    note(o, ok, "R*(0.4, 0.2, 0.1, 0.05) = " + d);
    return o;
}

Outcome volume_condition()
{
    Outcome o;
    auto omega = Domain::ball(Vec2::Zero(), 1);
    auto hp = volume_condition_check(SetGeometry::half_space(Vec2(0.3, 0.95).normalized(), 0), omega);
    note(o, std::abs(hp.defect) <= halfplane_tol, "half-plane " + fmt("%.1e", hp.defect));
    auto lw = volume_condition_check(SetGeometry::lawson_cone(2, 1, std::sqrt(1 - 0.9)), omega);
    note(o, std::abs(lw.defect) >= lawson_min_fraction * lw.domain_volume,
         "Lawson(2,1) defect/|B| " + fmt("%.6f", lw.defect / lw.domain_volume));
    auto cat = catenoid_scan();
    bool nonzero = true;
    for (double d : cat.defect) nonzero = nonzero && d != 0.0;
    note(o, nonzero, "catenoid min |defect| " + fmt("%.6f", cat.min_abs) + ", min relative " +
                         fmt("%.5f", cat.min_relative));
    std::printf("    catenoid defect changes sign on the grid: %s", cat.sign_change ? "yes" : "no");
    for (double R : cat.equal_volume_radii) std::printf(", balanced at R=%.11g", R);
    std::printf("\n");
    return o;
}

Outcome blowup_exponents()
{
    Outcome o;
    QuadConfig cfg;
    auto within = [](double exponent, double s) { return std::abs(exponent + s) <= exponent_rel_tol * s; };
    auto line = [&](const std::string& name, const ScanReport& r, double s, int sign) {
        bool ok = r.divergent && r.sign == sign && within(r.exponent, s);
        std::printf("    %-24s s=%.2f exponent %.4f sign %+d\n", name.c_str(), s, r.exponent, r.sign);
        if (!ok) note(o, false, name + " s=" + fmt("%.2f", s));
    };
    auto omega = Domain::ball(Vec2::Zero(), 1);
    for (double s : {0.25, 0.5, 0.75}) {
        auto k = KernelSpec::standard(2, s);
        std::vector<Vec2> path;
        for (int j = 2; j <= 20; ++j) path.push_back(Vec2(1 + std::pow(2.0, -j), 0));
        line("kernel-mass", kernel_mass_scan(omega, path, k, cfg), s, +1);
    }
    auto rho = geometric_path(0.5, 0.5, 10);
    for (double s : {0.3, 0.5}) {
        auto k = KernelSpec::standard(2, s);
        std::vector<Vec2> cp;
        for (double r : rho) cp.push_back(r * unit_dir(0.3));
        line("corner(0.3,-0.3)", corner_blowup_scan(SetGeometry::corner_pair(0.3, -0.3), Vec2::Zero(), cp, k, cfg), s,
             -1);
        line("tilt +0.4", tilted_defect_scan(0.4, rho, k, cfg), s, -1);
        line("tilt -0.4", tilted_defect_scan(-0.4, rho, k, cfg), s, +1);
    }
    auto sticky = geometric_path(1.0 / 16, 0.5, 17);
    for (double s : {0.25, 0.5, 0.75})
        line("stickiness(outside)",
             stickiness_blowup_scan(StickinessFixture::outside, sticky, KernelSpec::standard(2, s), cfg), s, -1);
    if (o.pass) o.detail = "all scans within 20% of -s with the expected signs";
    return o;
}

Outcome concentration()
{
    Outcome o;
    QuadConfig cfg;
    auto omega = Domain::ball(Vec2::Zero(), 1);
    FieldSpec f;
    f.bump_center = Vec2(std::sqrt(3.0) / 2, 0.5);
    f.bump_radius = 0.4;
    auto t = s_to_1_concentration(SetGeometry::half_space(Vec2(0, -1), -0.5), omega, make_tangent_field({f}, omega),
                                  {0.7, 0.8, 0.9, 0.95}, cfg);
    for (const auto& r : t.rows) std::printf("    psi=pi/3 s=%.2f lhs %.6f rhs %.6f ratio %.6f\n", r.s, r.lhs, r.rhs, r.ratio);
    double last = t.rows.back().ratio;
    note(o, last >= ratio_lo && last <= ratio_hi, "ratio(0.95) " + fmt("%.4f", last));
    note(o, t.monotone, "monotone");

    // The circle |x - (sqrt 2, 0)| = 1 meets the unit circle orthogonally.
    FieldSpec g;
    g.bump_center = Vec2(std::sqrt(0.5), std::sqrt(0.5));
    g.bump_radius = 0.4;
    auto orth = s_to_1_concentration(SetGeometry::ball(Vec2(std::sqrt(2.0), 0), 1), omega,
                                     make_tangent_field({g}, omega), {0.7, 0.8, 0.9, 0.95, 0.99}, cfg);
    std::string d;
    for (const auto& r : orth.rows) d += (d.empty() ? "" : " ") + fmt("%.4g", std::abs(r.lhs));
    note(o, orth.lhs_decreasing, "orthogonal |lhs| " + d);
    return o;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism()
{
    Outcome o;
    namespace fs = std::filesystem;
    const fs::path root = FRACMIN_SCRATCH;
    const std::string data = FRACMIN_TEST_DATA;
    fs::remove_all(root);
    fs::create_directories(root);
    auto config = [&](const std::string& name, const std::string& text) {
        auto p = root / (name + ".json");
        std::ofstream(p) << text;
        return p.string();
    };
    struct Run {
        std::string name, args;
    };
    const std::vector<Run> runs = {
        {"curvature", "curvature --scene " + data + "/hyperplane.json"},
        {"perimeter", "perimeter --scene " + data + "/hyperplane.json"},
        {"annulus", "annulus --config " + config("annulus", R"({"s": 0.4})")},
        {"sweep-s", "sweep-s --config " + config("sweep", R"({"s_list": [0.4, 0.3]})")},
        {"variation", "variation --config " + data + "/variation.json"},
        {"volume", "volume"},
        {"concentration", "concentration --config " + config("conc", R"({"s_list": [0.7]})")},
        {"scan-corner", "scan corner"},
        {"scan-tilt", "scan tilt"},
        {"scan-stickiness", "scan stickiness"},
        {"scan-kernel-mass", "scan kernel-mass"},
    };
    int bad = 0;
    for (const auto& r : runs) {
        std::string csv[2];
        bool ran = true;
        for (int pass = 0; pass < 2; ++pass) {
            auto out = root / r.name / (pass ? "b" : "a");
            std::string cmd = std::string("\"") + FRACMIN_CLI + "\" " + r.args + " --out " + out.string() +
                              " > " + (root / (r.name + ".log")).string() + " 2>&1";
            if (std::system(cmd.c_str()) != 0) {
                ran = false;
                break;
            }
            for (const auto& entry : fs::directory_iterator(out))
                if (entry.path().extension() == ".csv") csv[pass] += entry.path().filename().string() + "\n" +
                                                                      slurp(entry.path());
        }
        bool same = ran && !csv[0].empty() && csv[0] == csv[1];
        std::printf("    %-18s %s\n", r.name.c_str(), same ? "identical" : (ran ? "DIFFERENT" : "command failed"));
        if (!same) ++bad;
    }
    note(o, bad == 0, std::to_string(runs.size() - bad) + "/" + std::to_string(runs.size()) + " commands byte-identical");
    return o;
}

}  // namespace

int main()
{
    std::setvbuf(stdout, nullptr, _IOLBF, 0);
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"constant limits", constant_limits},
        {"symmetry-certified criticality", symmetric_criticality},
        {"oracle cross-check", oracle_crosscheck},
        {"first-variation identity", first_variation},
        {"annulus existence", annulus_existence},
        {"R_* divergence proxy", rstar_divergence},
        {"volume condition", volume_condition},
        {"blow-up exponents", blowup_exponents},
        {"s -> 1 concentration", concentration},
        {"determinism", determinism},
    };
    int unexpected = 0, failed = 0;
    std::vector<std::string> summary;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        std::printf("[%d] %s\n", id, criteria[i].first);
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const Error& e) {
            o = {false, std::string("error (") + to_string(e.kind()) + "): " + e.what()};
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        char line[1024];
        std::snprintf(line, sizeof line, "criterion %2d %s: %s (%.0fs) %s", id, o.pass ? "PASS" : "FAIL",
                      criteria[i].first, secs, o.detail.c_str());
        std::printf("%s\n", line);
        summary.push_back(line);
        if (!o.pass) {
            ++failed;
            if (!known_deviations.count(id)) ++unexpected;
        }
    }
    std::printf("\n");
    for (const auto& l : summary) std::printf("%s\n", l.c_str());
    std::printf("%d of %zu criteria failed, %d outside the documented deviations\n", failed, criteria.size(),
                unexpected);
    return unexpected ? 1 : 0;
}
