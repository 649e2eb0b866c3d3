#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "geometa/csv.hpp"
#include "geometa/error.hpp"
#include "geometa/family.hpp"
#include "geometa/maps.hpp"
#include "geometa/space.hpp"

namespace geometa {

using json = nlohmann::json;

struct SampleConfig {
    enum Mode { Default, Grid, Random, Explicit } mode = Default;
    std::size_t size = 0;
    bool include_special = true;
    std::vector<Point> points;
};

struct FamilyConfig {
    std::string kind;
    std::size_t count = 0;
    std::uint64_t seed = 0;
    std::string mode = "residual";
    std::size_t beta_k = 1;
};

struct NetConfig {
    std::optional<double> radius;
    std::optional<std::size_t> k;
    std::optional<std::size_t> K;
};

struct ExperimentConfig {
    json raw;
    std::optional<Space> space;
    std::map<std::string, MapUnderTest> maps;  ///< "T" is the map under test
    std::optional<FamilyConfig> family;
    double lambda = 0.5;
    std::optional<double> mu;
    std::optional<Point> x1;
    std::optional<Point> fixed_point;
    std::string F = "2*n";
    std::vector<double> epsilons{0.1};
    std::optional<std::size_t> trace_length;
    std::size_t cap = kDefaultScanCap;
    std::uint64_t seed = 1;
    SampleConfig sample;
    double tolerance = 1e-9;
    std::vector<std::string> checks;
    std::vector<std::string> sequences{"residual", "step"};
    NetConfig net;
    std::map<std::string, std::vector<Point>> predicates;  ///< P(x) = d(x, set)
    std::map<std::string, Point> constants;
    std::map<std::string, Point> bindings;
    std::optional<std::string> formula_file;
    std::optional<std::string> builtin;
    std::optional<std::string> output;

    /// Hash of the effective configuration, including command-line overrides.
    std::string hash() const { return fnv1a_hex(effective().dump()); }

    json effective() const {
        json e = raw;
        e["seed"] = seed;
        e["cap"] = cap;
        e["F"] = F;
        e["epsilons"] = epsilons;
        e["lambda"] = lambda;
        e["tolerance"] = tolerance;
        return e;
    }

    const MapUnderTest& map() const {
        const auto it = maps.find("T");
        if (it == maps.end()) throw ConfigError("map", "a map is required for this command");
        return it->second;
    }

    const Space& require_space() const {
        if (!space) throw ConfigError("space", "a space is required for this command");
        return *space;
    }
};

namespace config_detail {

inline std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

inline double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    return j.get<double>();
}

inline std::size_t count(const json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() < 0) throw ConfigError(path, "expected a nonnegative integer");
    return j.get<std::size_t>();
}

inline std::string text(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

inline Point point(const json& j, const std::string& path) {
    if (j.is_number()) return Point{j.get<double>()};
    if (!j.is_array() || j.empty() || j.size() > kMaxDim)
        throw ConfigError(path, "expected a number or an array of 1.." + std::to_string(kMaxDim) + " numbers");
    std::vector<double> c;
    for (std::size_t i = 0; i < j.size(); ++i) c.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    return Point(std::span<const double>(c));
}

inline std::vector<double> numbers(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
    std::vector<double> v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    return v;
}

inline std::vector<Point> points(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of points");
    std::vector<Point> v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(point(j[i], path + "[" + std::to_string(i) + "]"));
    return v;
}

inline Norm norm(const json& j, const std::string& path) {
    const std::string s = text(j, path);
    if (s == "l1" || s == "1") return Norm::L1;
    if (s == "l2" || s == "2") return Norm::L2;
    if (s == "linf" || s == "inf") return Norm::Linf;
    throw ConfigError(path, "unknown norm '" + s + "' (l1, l2, linf)");
}

/// Runs `f`, rethrowing library validation errors as ConfigError at `path`.
template <class F>
auto at(const std::string& path, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
}

inline Space space(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    if (!j.contains("kind")) throw ConfigError(join(path, "kind"), "missing");
    const std::string kind = text(j["kind"], join(path, "kind"));
    Space s = at(path, [&] {
        if (kind == "interval")
            return Space::interval(number(j.value("lo", json(0.0)), join(path, "lo")),
                                   number(j.value("hi", json(1.0)), join(path, "hi")));
        if (kind == "box") {
            const Norm n = norm(j.value("norm", json("l2")), join(path, "norm"));
            if (j.contains("dim"))
                return Space::box(count(j["dim"], join(path, "dim")), number(j.value("lo", json(0.0)), join(path, "lo")),
                                  number(j.value("hi", json(1.0)), join(path, "hi")), n);
            return Space::box(point(j.at("lo"), join(path, "lo")), point(j.at("hi"), join(path, "hi")), n);
        }
        if (kind == "ball")
            return Space::ball(count(j.value("dim", json(2)), join(path, "dim")),
                               number(j.value("radius", json(1.0)), join(path, "radius")),
                               norm(j.value("norm", json("l2")), join(path, "norm")));
        if (kind == "sphere") return Space::sphere();
        throw ConfigError(join(path, "kind"), "unknown space kind '" + kind + "' (interval, box, ball, sphere)");
    });
    if (j.contains("scale")) s = at(join(path, "scale"), [&] { return s.scaled(number(j["scale"], join(path, "scale"))); });
    if (j.contains("geodesic")) {
        const std::string g = text(j["geodesic"], join(path, "geodesic"));
        GeodesicKind gk;
        if (g == "affine") gk = GeodesicKind::Affine;
        else if (g == "sup_alt") gk = GeodesicKind::SupNormAlternative;
        else if (g == "great_circle") gk = GeodesicKind::GreatCircle;
        else throw ConfigError(join(path, "geodesic"), "unknown geodesic '" + g + "' (affine, sup_alt, great_circle)");
        s = at(join(path, "geodesic"), [&] { return s.with_geodesic(gk); });
    }
    if (j.contains("diameter_bound"))
        s = at(join(path, "diameter_bound"),
               [&] { return s.with_diameter_bound(number(j["diameter_bound"], join(path, "diameter_bound"))); });
    return s;
}

inline MapUnderTest map(const json& j, const std::optional<Space>& sp, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    if (!j.contains("kind")) throw ConfigError(join(path, "kind"), "missing");
    const std::string kind = text(j["kind"], join(path, "kind"));
    if (kind == "suzuki") return MapUnderTest::suzuki_toy();
    if (!sp) throw ConfigError("space", "map kind '" + kind + "' needs a space");
    const Space& s = *sp;
    MapUnderTest m = at(path, [&] {
        if (kind == "affine") {
            const double c = number(j.value("c", json(1.0)), join(path, "c"));
            const json b = j.value("b", json(0.0));
            return b.is_number() ? MapUnderTest::affine(s, c, b.get<double>())
                                 : MapUnderTest::affine(s, c, point(b, join(path, "b")));
        }
        if (kind == "identity") return MapUnderTest::identity(s);
        if (kind == "constant") return MapUnderTest::constant(s, point(j.at("value"), join(path, "value")));
        if (kind == "rotation_shrink")
            return MapUnderTest::rotation_shrink(s, number(j.value("angle", json(0.0)), join(path, "angle")),
                                                 number(j.value("factor", json(1.0)), join(path, "factor")));
        if (kind == "piecewise_constant") {
            std::vector<std::pair<double, double>> jumps;
            if (j.contains("jumps")) {
                const json& js = j["jumps"];
                if (!js.is_array()) throw ConfigError(join(path, "jumps"), "expected an array of [x, value] pairs");
                for (std::size_t i = 0; i < js.size(); ++i) {
                    const auto v = numbers(js[i], join(path, "jumps") + "[" + std::to_string(i) + "]");
                    if (v.size() != 2) throw ConfigError(join(path, "jumps") + "[" + std::to_string(i) + "]", "expected [x, value]");
                    jumps.emplace_back(v[0], v[1]);
                }
            }
            return MapUnderTest::piecewise_constant(s, numbers(j.value("breaks", json::array()), join(path, "breaks")),
                                                    numbers(j.at("values"), join(path, "values")), std::move(jumps));
        }
        if (kind == "matrix") {
            std::vector<std::vector<double>> rows;
            const json& rs = j.at("rows");
            for (std::size_t i = 0; i < rs.size(); ++i)
                rows.push_back(numbers(rs[i], join(path, "rows") + "[" + std::to_string(i) + "]"));
            return MapUnderTest::matrix(s, std::move(rows));
        }
        if (kind == "table") {
            if (j.contains("path")) return MapUnderTest::load_table(s, text(j["path"], join(path, "path")));
            std::vector<std::pair<Point, Point>> entries;
            const json& es = j.at("entries");
            for (std::size_t i = 0; i < es.size(); ++i) {
                const std::string ep = join(path, "entries") + "[" + std::to_string(i) + "]";
                if (!es[i].is_array() || es[i].size() != 2) throw ConfigError(ep, "expected [x, Tx]");
                entries.emplace_back(point(es[i][0], ep + "[0]"), point(es[i][1], ep + "[1]"));
            }
            return MapUnderTest::table(s, std::move(entries));
        }
        throw ConfigError(join(path, "kind"), "unknown map kind '" + kind +
                                                  "' (suzuki, affine, identity, constant, rotation_shrink, "
                                                  "piecewise_constant, matrix, table)");
    });
    if (j.contains("name")) m = m.with_name(text(j["name"], join(path, "name")));
    return m;
}

inline std::string checked_F(const json& j, const std::string& path) {
    const std::string f = text(j, path);
    at(path, [&] { return FSpec::parse(f); });
    return f;
}

}  // namespace config_detail

inline const std::vector<std::string>& known_config_keys() {
    static const std::vector<std::string> keys = {
        "space", "map", "maps", "family", "lambda", "mu", "x1", "fixed_point", "F", "epsilons", "epsilon",
        "trace_length", "cap", "seed", "sample", "tolerance", "checks", "sequences", "net", "predicates",
        "constants", "bindings", "formula_file", "builtin", "output", "description"};
    return keys;
}

inline ExperimentConfig parse_config(const json& j) {
    using namespace config_detail;
    if (!j.is_object()) throw ConfigError("$", "configuration must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known_config_keys().begin(), known_config_keys().end(), it.key()) == known_config_keys().end())
            throw ConfigError(it.key(), "unknown field");

    ExperimentConfig c;
    c.raw = j;
    if (j.contains("space")) c.space = space(j["space"], "space");
    if (j.contains("map")) {
        c.maps.emplace("T", map(j["map"], c.space, "map"));
        if (!c.space) c.space = c.maps.at("T").space();
    }
    if (j.contains("maps")) {
        if (!j["maps"].is_object()) throw ConfigError("maps", "expected an object of named maps");
        for (auto it = j["maps"].begin(); it != j["maps"].end(); ++it) {
            c.maps.insert_or_assign(it.key(), map(it.value(), c.space, "maps." + it.key()));
            if (!c.space) c.space = c.maps.at(it.key()).space();
        }
    }
    if (j.contains("family")) {
        const json& f = j["family"];
        if (!f.is_object()) throw ConfigError("family", "expected an object");
        FamilyConfig fc;
        fc.kind = text(f.value("kind", json("")), "family.kind");
        static const std::vector<std::string> kinds = {"affine", "rotation", "jump", "constant", "mixed", "suzuki"};
        if (std::find(kinds.begin(), kinds.end(), fc.kind) == kinds.end())
            throw ConfigError("family.kind", "unknown family '" + fc.kind + "' (affine, rotation, jump, constant, mixed, suzuki)");
        fc.count = count(f.value("count", json(100)), "family.count");
        if (fc.count == 0) throw ConfigError("family.count", "must be at least 1");
        fc.seed = count(f.value("seed", json(1)), "family.seed");
        fc.mode = text(f.value("mode", json("residual")), "family.mode");
        if (fc.mode != "residual" && fc.mode != "fixedpoint")
            throw ConfigError("family.mode", "expected 'residual' or 'fixedpoint'");
        fc.beta_k = count(f.value("beta_k", json(1)), "family.beta_k");
        c.family = fc;
    }
    if (j.contains("lambda")) {
        c.lambda = number(j["lambda"], "lambda");
        if (!(c.lambda > 0.0 && c.lambda < 1.0)) throw ConfigError("lambda", "must lie in (0,1)");
    }
    if (j.contains("mu")) {
        c.mu = number(j["mu"], "mu");
        if (!(*c.mu >= 1.0)) throw ConfigError("mu", "must be at least 1");
    }
    if (j.contains("x1")) c.x1 = point(j["x1"], "x1");
    if (j.contains("fixed_point")) c.fixed_point = point(j["fixed_point"], "fixed_point");
    if (j.contains("F")) c.F = checked_F(j["F"], "F");
    if (j.contains("epsilon")) c.epsilons = {number(j["epsilon"], "epsilon")};
    if (j.contains("epsilons")) c.epsilons = numbers(j["epsilons"], "epsilons");
    for (std::size_t i = 0; i < c.epsilons.size(); ++i)
        if (!(c.epsilons[i] > 0.0)) throw ConfigError("epsilons[" + std::to_string(i) + "]", "must be positive");
    if (j.contains("trace_length")) {
        c.trace_length = count(j["trace_length"], "trace_length");
        if (*c.trace_length < 2) throw ConfigError("trace_length", "must be at least 2");
    }
    if (j.contains("cap")) {
        c.cap = count(j["cap"], "cap");
        if (c.cap < 1) throw ConfigError("cap", "must be at least 1");
    }
    if (j.contains("seed")) c.seed = count(j["seed"], "seed");
    if (j.contains("sample")) {
        const json& s = j["sample"];
        if (!s.is_object()) throw ConfigError("sample", "expected an object");
        if (s.contains("grid")) c.sample.mode = SampleConfig::Grid, c.sample.size = count(s["grid"], "sample.grid");
        else if (s.contains("random")) c.sample.mode = SampleConfig::Random, c.sample.size = count(s["random"], "sample.random");
        else if (s.contains("points")) c.sample.mode = SampleConfig::Explicit, c.sample.points = points(s["points"], "sample.points");
        else throw ConfigError("sample", "expected one of grid, random, points");
        if (s.contains("include_special")) {
            if (!s["include_special"].is_boolean()) throw ConfigError("sample.include_special", "expected a boolean");
            c.sample.include_special = s["include_special"].get<bool>();
        }
    }
    if (j.contains("tolerance")) {
        c.tolerance = number(j["tolerance"], "tolerance");
        if (!(c.tolerance >= 0.0)) throw ConfigError("tolerance", "must be nonnegative");
    }
    if (j.contains("checks")) {
        if (!j["checks"].is_array()) throw ConfigError("checks", "expected an array of check names");
        for (std::size_t i = 0; i < j["checks"].size(); ++i)
            c.checks.push_back(text(j["checks"][i], "checks[" + std::to_string(i) + "]"));
    }
    if (j.contains("sequences")) {
        c.sequences.clear();
        for (std::size_t i = 0; i < j["sequences"].size(); ++i) {
            const std::string p = "sequences[" + std::to_string(i) + "]";
            const std::string s = text(j["sequences"][i], p);
            if (s != "residual" && s != "step" && s != "points") throw ConfigError(p, "expected residual, step or points");
            c.sequences.push_back(s);
        }
    }
    if (j.contains("net")) {
        const json& n = j["net"];
        if (n.contains("radius")) c.net.radius = number(n["radius"], "net.radius");
        if (n.contains("k")) c.net.k = count(n["k"], "net.k");
        if (n.contains("K")) c.net.K = count(n["K"], "net.K");
        if (c.net.radius && !(*c.net.radius > 0.0)) throw ConfigError("net.radius", "must be positive");
    }
    if (j.contains("predicates")) {
        for (auto it = j["predicates"].begin(); it != j["predicates"].end(); ++it) {
            const std::string p = "predicates." + it.key();
            if (!it.value().is_object() || !it.value().contains("distance_to"))
                throw ConfigError(p, "expected {\"distance_to\": [points]}");
            c.predicates[it.key()] = points(it.value()["distance_to"], p + ".distance_to");
        }
    }
    if (j.contains("constants"))
        for (auto it = j["constants"].begin(); it != j["constants"].end(); ++it)
            c.constants[it.key()] = point(it.value(), "constants." + it.key());
    if (j.contains("bindings"))
        for (auto it = j["bindings"].begin(); it != j["bindings"].end(); ++it)
            c.bindings[it.key()] = point(it.value(), "bindings." + it.key());
    if (j.contains("formula_file")) c.formula_file = text(j["formula_file"], "formula_file");
    if (j.contains("builtin")) c.builtin = text(j["builtin"], "builtin");
    if (j.contains("output")) c.output = text(j["output"], "output");
    return c;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("$", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("$", "cannot read configuration file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

/// Quantifier/check sample: a grid (intervals and boxes), random points, or an
/// explicit list. Defaults: 1001-point grid on intervals, 1000 random points elsewhere.
inline std::vector<Point> build_sample(const ExperimentConfig& c) {
    const Space& s = c.require_space();
    SampleConfig sc = c.sample;
    if (sc.mode == SampleConfig::Default) {
        sc.mode = s.kind() == SpaceKind::Interval ? SampleConfig::Grid : SampleConfig::Random;
        sc.size = s.kind() == SpaceKind::Interval ? 1001 : 1000;
    }
    switch (sc.mode) {
    case SampleConfig::Grid: return config_detail::at("sample.grid", [&] { return grid_points(s, sc.size); });
    case SampleConfig::Random:
        return config_detail::at("sample.random", [&] { return sample_points(s, sc.size, c.seed, sc.include_special); });
    default:
        for (std::size_t i = 0; i < sc.points.size(); ++i)
            if (!s.contains(sc.points[i]))
                throw ConfigError("sample.points[" + std::to_string(i) + "]", "point outside the space");
        if (sc.points.empty()) throw ConfigError("sample.points", "must not be empty");
        return sc.points;
    }
}

inline FamilySpec build_family(const FamilyConfig& f, double lambda) {
    if (f.kind == "affine") return families::affine_contractions(f.count, f.seed, lambda);
    if (f.kind == "rotation") return families::rotation_shrinks(f.count, f.seed, lambda);
    if (f.kind == "jump") return families::jumps(f.count, f.seed, lambda);
    if (f.kind == "constant") return families::constants(f.count, f.seed, lambda);
    if (f.kind == "suzuki") return families::suzuki(f.count, lambda);
    return families::mixed(f.count, f.seed, lambda);
}

}  // namespace geometa
