#include "pwlab/domain_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace pwlab {

namespace {

Vec2 vec2(const json& j) {
    if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected a 2-vector");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

ConvexDomain domain_from_json(const json& j) {
    DomainKind kind = domain_kind_from_string(j.at("kind").get<std::string>());
    ConvexDomain d;
    switch (kind) {
        case DomainKind::BoxN: d = ConvexDomain::box(j.at("half_widths").get<std::vector<double>>()); break;
        case DomainKind::Polygon2D: {
            Polygon p;
            for (const auto& v : j.at("vertices")) p.push_back(vec2(v));
            d = ConvexDomain::polygon(std::move(p));
            break;
        }
        case DomainKind::Disc2D:
            d = ConvexDomain::disc(j.contains("center") ? vec2(j["center"]) : Vec2{0, 0}, j.value("radius", 1.0));
            break;
        case DomainKind::SmoothCurve2D: {
            const json& c = j.at("curve");
            CurveSpec s;
            s.type = c.value("type", std::string("ellipse"));
            s.a = c.value("a", 1.0);
            s.b = c.value("b", 1.0);
            s.rotation = c.value("rotation", 0.0);
            if (c.contains("center")) s.center = vec2(c["center"]);
            s.r0 = c.value("r0", 1.0);
            s.cos_coef = c.value("cos", std::vector<double>{});
            s.sin_coef = c.value("sin", std::vector<double>{});
            if (c.contains("matrix")) {
                auto m = c["matrix"].get<std::vector<double>>();
                if (m.size() != 4) throw std::invalid_argument("curve matrix needs 4 entries");
                s.M = {m[0], m[1], m[2], m[3]};
            }
            if (c.contains("offset")) s.offset = vec2(c["offset"]);
            d = ConvexDomain::smooth(s);
            break;
        }
    }
    if (j.contains("dimension") && j["dimension"].get<int>() != d.dim)
        throw std::invalid_argument("dimension field does not match the geometry");
    return d.scaled(j.value("scale", 1.0));
}

json domain_to_json(const ConvexDomain& d) {
    json j;
    j["kind"] = to_string(d.kind);
    j["dimension"] = d.dim;
    j["scale"] = d.scale;
    switch (d.kind) {
        case DomainKind::BoxN: j["half_widths"] = d.half_widths; break;
        case DomainKind::Polygon2D: {
            json v = json::array();
            for (auto& p : d.vertices) v.push_back({p[0], p[1]});
            j["vertices"] = v;
            break;
        }
        case DomainKind::Disc2D:
            j["center"] = {d.center[0], d.center[1]};
            j["radius"] = d.radius;
            break;
        case DomainKind::SmoothCurve2D: {
            const CurveSpec& s = d.curve;
            j["curve"] = {{"type", s.type},   {"a", s.a},          {"b", s.b},
                          {"rotation", s.rotation}, {"center", {s.center[0], s.center[1]}},
                          {"r0", s.r0},       {"cos", s.cos_coef}, {"sin", s.sin_coef},
                          {"matrix", {s.M[0], s.M[1], s.M[2], s.M[3]}},
                          {"offset", {s.offset[0], s.offset[1]}}};
            break;
        }
    }
    return j;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return json::parse(in);
}

void write_text_file(const std::string& path, const std::string& text) {
    auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

ConvexDomain load_domain(const std::string& path) { return domain_from_json(read_json_file(path)); }

}  // namespace pwlab
