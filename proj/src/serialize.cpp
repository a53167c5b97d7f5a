#include "fracmin/serialize.hpp"

#include <fstream>
#include <sstream>

namespace fracmin {

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& what)
{
    fail(ErrorKind::config, "schema error at " + path + ": " + what);
}

const Json& field(const Json& j, const std::string& key, const std::string& path)
{
    if (!j.is_object()) schema(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) schema(path, "missing field \"" + key + "\"");
    return *it;
}

double number(const Json& j, const std::string& key, const std::string& path)
{
    const Json& v = field(j, key, path);
    if (!v.is_number()) schema(path + "." + key, "expected a number");
    return v.get<double>();
}

double number_or(const Json& j, const std::string& key, double fallback, const std::string& path)
{
    return j.contains(key) ? number(j, key, path) : fallback;
}

int integer(const Json& j, const std::string& key, const std::string& path)
{
    const Json& v = field(j, key, path);
    if (!v.is_number_integer()) schema(path + "." + key, "expected an integer");
    return v.get<int>();
}

std::string text(const Json& j, const std::string& key, const std::string& path)
{
    const Json& v = field(j, key, path);
    if (!v.is_string()) schema(path + "." + key, "expected a string");
    return v.get<std::string>();
}

std::vector<double> numbers(const Json& j, const std::string& path)
{
    if (!j.is_array()) schema(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) schema(path + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back(j[i].get<double>());
    }
    return out;
}

Json list(const std::vector<double>& v) { return Json(v); }

}  // namespace

Vec2 vec_from_json(const Json& j, const std::string& path)
{
    auto v = numbers(j, path);
    if (v.size() != 2) schema(path, "expected two coordinates");
    return {v[0], v[1]};
}

Json to_json(const Vec2& v) { return Json::array({v.x(), v.y()}); }

SetGeometry set_from_json(const Json& j, const std::string& path)
{
    const std::string shape = text(j, "shape", path);
    auto vec = [&](const char* key) { return vec_from_json(field(j, key, path), path + "." + key); };
    auto child = [&](const char* key) { return set_from_json(field(j, key, path), path + "." + key); };
    if (shape == "half_space") return SetGeometry::half_space(vec("normal"), number(j, "offset", path));
    if (shape == "ball") return SetGeometry::ball(vec("center"), number(j, "radius", path));
    if (shape == "annulus")
        return SetGeometry::annulus(vec("center"), number(j, "r_in", path), number(j, "r_out", path));
    if (shape == "cone_sector") return SetGeometry::cone_sector(integer(j, "k", path));
    if (shape == "pie_glued") return SetGeometry::pie_glued(child("inner"), number(j, "radius", path));
    if (shape == "corner_pair") return SetGeometry::corner_pair(number(j, "theta1", path), number(j, "theta2", path));
    if (shape == "lawson_cone")
        return SetGeometry::lawson_cone(integer(j, "n", path), integer(j, "m", path), number(j, "alpha", path));
    if (shape == "complement") return SetGeometry::complement(child("of"));
    if (shape == "union" || shape == "intersection") {
        const Json& of = field(j, "of", path);
        if (!of.is_array() || of.size() < 2) schema(path + ".of", "expected an array of two or more sets");
        SetGeometry acc = set_from_json(of[0], path + ".of[0]");
        for (std::size_t i = 1; i < of.size(); ++i) {
            auto next = set_from_json(of[i], path + ".of[" + std::to_string(i) + "]");
            acc = shape == "union" ? SetGeometry::unite(acc, next) : SetGeometry::intersect(acc, next);
        }
        return acc;
    }
    if (shape == "transformed") {
        Isometry g{rotation(number_or(j, "angle", 0.0, path)), Vec2::Zero()};
        if (j.contains("shift")) g.t = vec("shift");
        return SetGeometry::transformed(child("of"), g);
    }
    if (shape == "empty") return SetGeometry::empty();
    schema(path + ".shape", "unknown shape \"" + shape + "\"");
}

Json to_json(const SetGeometry& e)
{
    const auto& p = e.params();
    Json j;
    switch (e.shape()) {
    case Shape::half_space:
        j = {{"shape", "half_space"}, {"normal", {p[0], p[1]}}, {"offset", p[2]}};
        break;
    case Shape::ball: j = {{"shape", "ball"}, {"center", {p[0], p[1]}}, {"radius", p[2]}}; break;
    case Shape::annulus:
        j = {{"shape", "annulus"}, {"center", {p[0], p[1]}}, {"r_in", p[2]}, {"r_out", p[3]}};
        break;
    case Shape::cone_sector: j = {{"shape", "cone_sector"}, {"k", static_cast<int>(p[0])}}; break;
    case Shape::pie_glued:
        j = {{"shape", "pie_glued"}, {"inner", to_json(e.children()[0])}, {"radius", p[0]}};
        break;
    case Shape::corner_pair: j = {{"shape", "corner_pair"}, {"theta1", p[0]}, {"theta2", p[1]}}; break;
    case Shape::lawson_cone:
        j = {{"shape", "lawson_cone"}, {"n", static_cast<int>(p[0])}, {"m", static_cast<int>(p[1])}, {"alpha", p[2]}};
        break;
    case Shape::complement: j = {{"shape", "complement"}, {"of", to_json(e.children()[0])}}; break;
    case Shape::set_union:
    case Shape::set_intersection:
        j = {{"shape", e.shape() == Shape::set_union ? "union" : "intersection"},
             {"of", {to_json(e.children()[0]), to_json(e.children()[1])}}};
        break;
    case Shape::transformed: {
        const auto& g = e.isometry();
        j = {{"shape", "transformed"},
             {"of", to_json(e.children()[0])},
             {"angle", std::atan2(g.R(1, 0), g.R(0, 0))},
             {"shift", to_json(g.t)}};
        break;
    }
    case Shape::empty: j = {{"shape", "empty"}}; break;
    }
    return j;
}

Domain domain_from_json(const Json& j, const std::string& path)
{
    const std::string kind = text(j, "kind", path);
    if (kind == "ball") {
        double r = number(j, "radius", path);
        Vec2 c = j.contains("center") ? vec_from_json(j["center"], path + ".center") : Vec2::Zero();
        return Domain::ball(c, r, number_or(j, "tube", 0.25 * r, path));
    }
    if (kind == "half_space")
        return Domain::half_space(vec_from_json(field(j, "normal", path), path + ".normal"), number(j, "offset", path),
                                  number_or(j, "tube", 1.0, path));
    schema(path + ".kind", "unknown domain kind \"" + kind + "\"");
}

Json to_json(const Domain& d)
{
    if (d.kind() == Domain::Kind::ball)
        return {{"kind", "ball"}, {"center", to_json(d.center())}, {"radius", d.radius()}, {"tube", d.tube()}};
    return {{"kind", "half_space"}, {"normal", to_json(d.normal())}, {"offset", d.offset()}, {"tube", d.tube()}};
}

KernelSpec kernel_from_json(const Json& j, const std::string& path)
{
    int n = j.contains("n") ? integer(j, "n", path) : 2;
    double s = number(j, "s", path);
    if (!(s > 0 && s < 1)) schema(path + ".s", "order must lie in (0, 1)");
    if (n < 1 || n > 3) schema(path + ".n", "dimension must be 1, 2 or 3");
    std::string kind = j.contains("kind") ? text(j, "kind", path) : "standard";
    KernelSpec k = KernelSpec::standard(n, s);
    if (kind == "tabulated") {
        const Json& t = field(j, "table", path);
        RadialTable table{numbers(field(t, "r", path + ".table"), path + ".table.r"),
                          numbers(field(t, "m", path + ".table"), path + ".table.m")};
        k = KernelSpec::tabulated(n, s, number(j, "scale", path), std::move(table));
    } else if (kind != "standard") {
        schema(path + ".kind", "unknown kernel kind \"" + kind + "\"");
    }
    if (j.contains("delta")) k = k.with_delta(number(j, "delta", path));
    return k;
}

Json to_json(const KernelSpec& k)
{
    Json j = {{"n", k.n()}, {"s", k.s()}};
    if (k.kind() == KernelKind::tabulated) {
        j["kind"] = "tabulated";
        j["scale"] = k.c();
        j["table"] = {{"r", list(k.table().r)}, {"m", list(k.table().m)}};
    } else {
        j["kind"] = "standard";
    }
    if (k.delta()) j["delta"] = *k.delta();
    return j;
}

QuadConfig quad_from_json(const Json& j, const std::string& path)
{
    QuadConfig q;
    if (j.is_null()) return q;
    if (!j.is_object()) schema(path, "expected an object");
    q.pv_excision = number_or(j, "pv_excision", q.pv_excision, path);
    q.trunc_radius = number_or(j, "trunc_radius", q.trunc_radius, path);
    q.rel_tol = number_or(j, "rel_tol", q.rel_tol, path);
    if (j.contains("mc_samples")) q.mc_samples = integer(j, "mc_samples", path);
    if (j.contains("max_depth")) q.max_depth = integer(j, "max_depth", path);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) schema(path + ".seed", "expected a non-negative integer");
        q.seed = j["seed"].get<std::uint64_t>();
    }
    q.validate();
    return q;
}

Json to_json(const QuadConfig& q)
{
    return {{"pv_excision", q.pv_excision}, {"trunc_radius", q.trunc_radius}, {"rel_tol", q.rel_tol},
            {"mc_samples", q.mc_samples},   {"seed", q.seed},                 {"max_depth", q.max_depth}};
}

FieldSpec field_from_json(const Json& j, const std::string& path)
{
    FieldSpec f;
    std::string kind = text(j, "kind", path);
    if (kind == "rotation") f.kind = FieldSpec::Kind::rotation;
    else if (kind == "interior_bump") f.kind = FieldSpec::Kind::interior_bump;
    else if (kind == "shear") f.kind = FieldSpec::Kind::shear;
    else schema(path + ".kind", "unknown field kind \"" + kind + "\"");
    f.amplitude = number_or(j, "amplitude", f.amplitude, path);
    if (j.contains("direction")) f.direction = vec_from_json(j["direction"], path + ".direction");
    f.cutoff_inner = number_or(j, "cutoff_inner", f.cutoff_inner, path);
    f.cutoff_outer = number_or(j, "cutoff_outer", f.cutoff_outer, path);
    if (j.contains("bump_center")) f.bump_center = vec_from_json(j["bump_center"], path + ".bump_center");
    f.bump_radius = number_or(j, "bump_radius", f.bump_radius, path);
    return f;
}

Json to_json(const FieldSpec& f)
{
    Json j = {{"kind", to_string(f.kind)}, {"amplitude", f.amplitude}, {"direction", to_json(f.direction)}};
    // Infinite cutoffs are the default and have no JSON literal.
    if (std::isfinite(f.cutoff_inner)) j["cutoff_inner"] = f.cutoff_inner;
    if (std::isfinite(f.cutoff_outer)) j["cutoff_outer"] = f.cutoff_outer;
    if (f.bump_center) j["bump_center"] = to_json(*f.bump_center);
    j["bump_radius"] = f.bump_radius;
    return j;
}

Json parse_json(const std::string& content, const std::string& source)
{
    try {
        return Json::parse(content);
    } catch (const Json::parse_error& e) {
        fail(ErrorKind::config, source + ": " + e.what());
    }
}

Json load_json(const std::string& file)
{
    std::ifstream in(file);
    require(static_cast<bool>(in), ErrorKind::config, "cannot open " + file);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str(), file);
}

}  // namespace fracmin
