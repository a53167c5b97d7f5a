#include "fracmin/report.hpp"
#include "fracmin/serialize.hpp"

#include "doctest.h"

#include <random>

using namespace fracmin;

namespace {

bool same_indicator(const SetGeometry& a, const SetGeometry& b)
{
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 500; ++i) {
        Vec2 x(u(g), u(g));
        if (a.indicator(x).value() != b.indicator(x).value()) return false;
    }
    return true;
}

ErrorKind kind_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::unsupported;
}

}  // namespace

TEST_CASE("set round trip through JSON")
{
    const SetGeometry shapes[] = {
        SetGeometry::half_space(Vec2(0.6, 0.8), 0.2),
        SetGeometry::ball(Vec2(0.1, -0.3), 0.8),
        SetGeometry::annulus(Vec2::Zero(), 0.5, 1.5),
        SetGeometry::cone_sector(3),
        SetGeometry::pie_glued(SetGeometry::cone_sector(2), 1.0),
        SetGeometry::corner_pair(0.3, -0.2),
        SetGeometry::lawson_cone(1, 1, 0.7),
        !SetGeometry::ball(Vec2::Zero(), 1),
        SetGeometry::unite(SetGeometry::ball(Vec2(-1, 0), 0.7), SetGeometry::ball(Vec2(1, 0), 0.7)),
        SetGeometry::transformed(SetGeometry::cone_sector(2), Isometry{rotation(0.4), Vec2(0.2, 0.1)}),
    };
    for (const auto& e : shapes) {
        Json j = to_json(e);
        auto back = set_from_json(j);
        CHECK(same_indicator(e, back));
        CHECK(to_json(back).dump() == j.dump());
    }
}

TEST_CASE("kernel, domain, quadrature and field round trips")
{
    auto k = KernelSpec::standard(2, 0.35).with_delta(0.1);
    auto kb = kernel_from_json(to_json(k));
    CHECK(kb.s() == 0.35);
    REQUIRE(kb.delta());
    CHECK(*kb.delta() == 0.1);

    auto d = Domain::half_space(Vec2(0, 1), 0.5);
    auto db = domain_from_json(to_json(d));
    CHECK(db.kind() == Domain::Kind::half_space);
    CHECK(db.offset() == 0.5);

    QuadConfig q;
    q.rel_tol = 1e-7;
    q.seed = 42;
    auto qb = quad_from_json(to_json(q));
    CHECK(qb.rel_tol == 1e-7);
    CHECK(qb.seed == 42);
    CHECK(quad_from_json(Json::object()).rel_tol == QuadConfig{}.rel_tol);

    FieldSpec f;
    f.bump_center = Vec2(0.5, 0.5);
    f.bump_radius = 0.3;
    auto fb = field_from_json(to_json(f));
    REQUIRE(fb.bump_center);
    CHECK(fb.bump_radius == 0.3);
}

TEST_CASE("schema errors are config errors naming the path")
{
    CHECK(kind_of([] { set_from_json(Json{{"shape", "torus"}}); }) == ErrorKind::config);
    CHECK(kind_of([] { set_from_json(Json{{"shape", "ball"}, {"center", {0, 0}}}); }) == ErrorKind::config);
    CHECK(kind_of([] { parse_json("{\"a\": 1,}", "inline"); }) == ErrorKind::config);
    CHECK(kind_of([] { kernel_from_json(Json{{"n", 2}, {"s", 1.5}}); }) == ErrorKind::config);
    try {
        set_from_json(Json{{"shape", "complement"}, {"of", {{"shape", "ball"}, {"radius", "x"}}}});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("set.of") != std::string::npos);
    }
}

TEST_CASE("content hash matches git blob hashes")
{
    // `printf 'hello\n' | git hash-object --stdin`
    CHECK(content_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
    CHECK(content_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_CASE("tables and manifests")
{
    CsvTable t({"s", "value"});
    t.add({0.5, 1.0 / 3});
    t.add({std::string("x"), 2L});
    CHECK(t.str("abc") == "# manifest abc\ns,value\n0.5,0.33333333333333331\nx,2\n");
    CHECK_THROWS_AS(t.add({1.0}), Error);

    auto a = RunManifest::make("curvature", "c.json", 1, "out", Json{{"s", 0.5}});
    auto b = RunManifest::make("curvature", "other.json", 1, "elsewhere", Json{{"s", 0.5}});
    auto c = RunManifest::make("curvature", "c.json", 2, "out", Json{{"s", 0.5}});
    CHECK(a.config_hash == b.config_hash);
    CHECK(a.config_hash != c.config_hash);
    CHECK(output_stem("annulus", s_tag(0.05), 1) == "annulus-0.05-1");
    CHECK(s_tag(std::vector<double>{0.7, 0.9}) == "0.7_0.9");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("exit codes")
{
    CHECK(exit_code(ErrorKind::config) == 2);
    CHECK(exit_code(ErrorKind::bracket) == 3);
    CHECK(exit_code(ErrorKind::hypothesis) == 4);
}
