#pragma once

// JSON set-spec documents: { "dim", "kind", kind fields }, rationals as "num/den"
// strings (plain integers are accepted on input). Errors carry a JSON-pointer path.

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "mksum/errors.hpp"
#include "mksum/set_spec.hpp"

namespace mksum {

using Json = nlohmann::json;

namespace detail {

inline std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
inline std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

inline const Json& field(const Json& doc, const std::string& path, const std::string& key) {
    if (!doc.is_object()) throw SpecError(path, "expected an object");
    auto it = doc.find(key);
    if (it == doc.end()) throw SpecError(child(path, key), "missing field");
    return *it;
}

inline Rational parse_rational_at(const Json& v, const std::string& path) {
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (!v.is_string()) throw SpecError(path, "expected a rational string \"num/den\"");
    try {
        return parse_rational(v.get<std::string>());
    } catch (const InvalidArgument& e) {
        throw SpecError(path, e.what());
    }
}

inline Point parse_point(const Json& v, const std::string& path, std::size_t dim) {
    if (!v.is_array()) throw SpecError(path, "expected a coordinate array");
    if (v.size() != dim)
        throw SpecError(path, "has dimension " + std::to_string(v.size()) + ", expected " + std::to_string(dim));
    Point p;
    for (std::size_t i = 0; i < v.size(); ++i) p.push_back(parse_rational_at(v[i], child(path, i)));
    return p;
}

inline std::vector<Point> parse_points(const Json& v, const std::string& path, std::size_t dim) {
    if (!v.is_array()) throw SpecError(path, "expected an array of points");
    std::vector<Point> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(parse_point(v[i], child(path, i), dim));
    return out;
}

inline Json point_json(const Point& p) {
    Json a = Json::array();
    for (const auto& x : p) a.push_back(to_string(x));
    return a;
}

inline Json points_json(const std::vector<Point>& ps) {
    Json a = Json::array();
    for (const auto& p : ps) a.push_back(point_json(p));
    return a;
}

}  // namespace detail

struct ParseOptions {
    /// Reject specs without volume semantics (singular affine maps).
    bool require_volume = false;
};

inline SetSpec parse_spec(const Json& doc, const ParseOptions& opt = {}, const std::string& path = "") {
    using namespace detail;
    const Json& dim_v = field(doc, path, "dim");
    if (!dim_v.is_number_integer() || dim_v.get<std::int64_t>() < 1)
        throw SpecError(child(path, "dim"), "expected a positive integer");
    const Json& kind_v = field(doc, path, "kind");
    if (!kind_v.is_string()) throw SpecError(child(path, "kind"), "expected a string");
    SetSpec spec;
    spec.dim = static_cast<std::size_t>(dim_v.get<std::int64_t>());
    const std::string kind = kind_v.get<std::string>();
    const std::size_t d = spec.dim;
    if (kind == "spider") {
        SpiderSpec s;
        s.apex = parse_point(field(doc, path, "apex"), child(path, "apex"), d);
        s.tips = parse_points(field(doc, path, "tips"), child(path, "tips"), d);
        if (s.tips.empty()) throw SpecError(child(path, "tips"), "a spider needs at least one tip");
        for (std::size_t i = 0; i < s.tips.size(); ++i)
            if (s.tips[i] == s.apex) throw SpecError(child(child(path, "tips"), i), "tip coincides with the apex");
        spec.body = s;
    } else if (kind == "hull") {
        HullSpec h;
        h.points = parse_points(field(doc, path, "points"), child(path, "points"), d);
        if (h.points.empty()) throw SpecError(child(path, "points"), "a hull needs at least one point");
        spec.body = h;
    } else if (kind == "box-union") {
        BoxUnionSpec b;
        const Json& boxes = field(doc, path, "boxes");
        const std::string bp = child(path, "boxes");
        if (!boxes.is_array() || boxes.empty()) throw SpecError(bp, "expected a non-empty array of boxes");
        for (std::size_t i = 0; i < boxes.size(); ++i) {
            const std::string ip = child(bp, i);
            BoxSpec box{parse_point(field(boxes[i], ip, "lo"), child(ip, "lo"), d),
                        parse_point(field(boxes[i], ip, "hi"), child(ip, "hi"), d)};
            for (std::size_t j = 0; j < d; ++j)
                if (box.hi[j] < box.lo[j]) throw SpecError(ip, "lo exceeds hi on axis " + std::to_string(j));
            b.boxes.push_back(std::move(box));
        }
        spec.body = b;
    } else if (kind == "planar-holes") {
        if (d != 2) throw SpecError(child(path, "dim"), "planar-holes sets must have dimension 2");
        PlanarHolesSpec h;
        h.outer = parse_points(field(doc, path, "outer"), child(path, "outer"), 2);
        const Json& bites = field(doc, path, "bites");
        if (!bites.is_array()) throw SpecError(child(path, "bites"), "expected an array of polygons");
        for (std::size_t i = 0; i < bites.size(); ++i)
            h.bites.push_back(parse_points(bites[i], child(child(path, "bites"), i), 2));
        try {
            validate_holes(h);
        } catch (const InvalidArgument& e) {
            throw SpecError(path, e.what());
        }
        spec.body = h;
    } else if (kind == "affine") {
        AffineSpec a;
        auto inner = parse_spec(field(doc, path, "inner"), ParseOptions{}, child(path, "inner"));
        const Json& m = field(doc, path, "matrix");
        const std::string mp = child(path, "matrix");
        if (!m.is_array() || m.size() != d) throw SpecError(mp, "expected " + std::to_string(d) + " rows");
        a.matrix = parse_points(m, mp, inner.dim);
        a.translation = parse_point(field(doc, path, "translation"), child(path, "translation"), d);
        a.inner = std::make_shared<const SetSpec>(std::move(inner));
        spec.body = a;
    } else {
        throw SpecError(child(path, "kind"), "unknown kind '" + kind + "'");
    }
    if (opt.require_volume) {
        try {
            require_volume_semantics(spec);
        } catch (const InvalidArgument& e) {
            throw SpecError(path.empty() ? "/" : path, e.what());
        }
    }
    return spec;
}

inline Json serialize(const SetSpec& spec) {
    using namespace detail;
    Json j;
    j["dim"] = spec.dim;
    j["kind"] = spec.kind();
    if (const auto* s = std::get_if<SpiderSpec>(&spec.body)) {
        j["apex"] = point_json(s->apex);
        j["tips"] = points_json(s->tips);
    } else if (const auto* h = std::get_if<HullSpec>(&spec.body)) {
        j["points"] = points_json(h->points);
    } else if (const auto* b = std::get_if<BoxUnionSpec>(&spec.body)) {
        j["boxes"] = Json::array();
        for (const auto& box : b->boxes) j["boxes"].push_back({{"lo", point_json(box.lo)}, {"hi", point_json(box.hi)}});
    } else if (const auto* ph = std::get_if<PlanarHolesSpec>(&spec.body)) {
        j["outer"] = points_json(ph->outer);
        j["bites"] = Json::array();
        for (const auto& bite : ph->bites) j["bites"].push_back(points_json(bite));
    } else {
        const auto& a = std::get<AffineSpec>(spec.body);
        j["matrix"] = points_json(a.matrix);
        j["translation"] = point_json(a.translation);
        j["inner"] = serialize(*a.inner);
    }
    return j;
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw SpecError("", std::string("malformed JSON: ") + e.what());
    }
}

inline SetSpec load_spec(const std::string& path, const ParseOptions& opt = {}) {
    return parse_spec(read_json_file(path), opt);
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace mksum
