#pragma once

#include <cstddef>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "geometa/axioms.hpp"
#include "geometa/conditions.hpp"
#include "geometa/config.hpp"
#include "geometa/csv.hpp"
#include "geometa/family.hpp"
#include "geometa/formula.hpp"
#include "geometa/iterate.hpp"
#include "geometa/metastab.hpp"
#include "geometa/tbound.hpp"

namespace geometa::cli {

enum ExitCode : int { Ok = 0, ValidationFailed = 1, RuntimeFailed = 2, CheckFailed = 3 };

/// Command-line overrides applied on top of the configuration file.
struct Overrides {
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> cap;
    std::optional<std::vector<double>> eps;
    std::optional<std::string> F;
    std::optional<std::string> formula_file;
    std::optional<std::string> builtin;
};

inline void apply(ExperimentConfig& c, const Overrides& o) {
    if (o.out) c.output = *o.out;
    if (o.seed) c.seed = *o.seed;
    if (o.cap) {
        if (*o.cap < 1) throw ConfigError("--cap", "must be at least 1");
        c.cap = *o.cap;
    }
    if (o.eps) {
        for (double e : *o.eps)
            if (!(e > 0.0)) throw ConfigError("--eps", "epsilons must be positive");
        c.epsilons = *o.eps;
    }
    if (o.F) {
        config_detail::at("--F", [&] { return FSpec::parse(*o.F); });
        c.F = *o.F;
    }
    if (o.formula_file) c.formula_file = *o.formula_file;
    if (o.builtin) c.builtin = *o.builtin;
}

inline std::vector<double> parse_eps_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw ConfigError("--eps", "cannot parse '" + item + "' as a number");
        }
    }
    if (out.empty()) throw ConfigError("--eps", "empty list");
    return out;
}

namespace detail {

inline std::string witness_text(const std::optional<Witness>& w) {
    if (!w) return "";
    std::string s;
    for (const Point& p : w->points) s += (s.empty() ? "" : ";") + CsvWriter::point(p);
    if (!w->params.empty()) {
        s += " t=";
        for (std::size_t i = 0; i < w->params.size(); ++i) s += (i ? "," : "") + CsvWriter::num(w->params[i]);
    }
    if (!w->note.empty()) s += " " + w->note;
    return s;
}

inline std::size_t trace_length(const ExperimentConfig& c, std::size_t fallback) {
    return c.trace_length.value_or(fallback);
}

inline Point start_point(const ExperimentConfig& c) {
    if (!c.x1) throw ConfigError("x1", "a starting point is required");
    if (!c.map().space().contains(*c.x1)) throw ConfigError("x1", "starting point outside the space");
    return *c.x1;
}

}  // namespace detail

/// Trace CSV: n, coordinates, r_n = d(x_n, T x_n), d_n = d(x_n, x_{n+1}).
inline int cmd_iterate(const ExperimentConfig& c, std::ostream& csv, std::ostream& log) {
    const MapUnderTest& T = c.map();
    const Point x1 = detail::start_point(c);
    const std::size_t N = detail::trace_length(c, 30);
    const IterationTrace tr = mann_iterate(T, x1, c.lambda, N, std::max(N, kDefaultTraceCap));

    CsvWriter w(csv);
    w.header_comment(c.hash());
    std::vector<std::string> head{"n"};
    const std::size_t dim = x1.dim();
    if (dim == 1) head.push_back("x");
    else
        for (std::size_t i = 1; i <= dim; ++i) head.push_back("x" + std::to_string(i));
    head.insert(head.end(), {"r_n", "d_n"});
    w.row(head);
    for (std::size_t n = 1; n <= tr.size(); ++n) {
        std::vector<std::string> r{std::to_string(n)};
        for (std::size_t i = 0; i < dim; ++i) r.push_back(CsvWriter::num(tr.x(n)[i]));
        r.push_back(CsvWriter::num(tr.r(n)));
        r.push_back(CsvWriter::num(tr.steps[n - 1]));
        w.row(r);
    }
    if (const auto fp = detect_fixed_point(tr, c.tolerance))
        log << "fixed point detected at n=" << fp->first << " x=" << CsvWriter::point(fp->second)
            << " (tolerance " << CsvWriter::num(c.tolerance) << ")\n";
    else
        log << "no fixed point within " << N << " steps (tolerance " << CsvWriter::num(c.tolerance) << ")\n";
    return Ok;
}

namespace detail {

struct CheckSpec {
    std::string name;
    std::optional<double> parameter;
};

inline CheckSpec parse_check(const std::string& s, std::size_t index) {
    const std::string path = "checks[" + std::to_string(index) + "]";
    const auto open = s.find('(');
    if (open == std::string::npos) return {s, std::nullopt};
    if (s.back() != ')') throw ConfigError(path, "expected name(parameter)");
    const std::string arg = s.substr(open + 1, s.size() - open - 2);
    const double v = config_detail::at(path, [&] { return formula::Rational::parse(arg).value(); });
    return {s.substr(0, open), v};
}

}  // namespace detail

/// One row per requested check; exit 3 when any check fails.
inline int cmd_check(const ExperimentConfig& c, std::ostream& csv, std::ostream& log) {
    CsvWriter w(csv);
    w.header_comment(c.hash());
    w.row({"check", "parameter", "passed", "worst_violation", "samples_checked", "samples_skipped", "tolerance",
           "witness"});
    if (c.checks.empty()) return Ok;

    std::vector<detail::CheckSpec> specs;
    for (std::size_t i = 0; i < c.checks.size(); ++i) specs.push_back(detail::parse_check(c.checks[i], i));

    const Space& space = c.require_space();
    const std::vector<Point> base = build_sample(c);
    std::optional<std::vector<Point>> sample;
    auto map_sample = [&]() -> const std::vector<Point>& {
        if (!sample) sample = checker_sample(c.map(), base);
        return *sample;
    };

    bool all = true;
    auto emit = [&](const std::string& name, double param, const ConditionReport& r) {
        all = all && r.passed;
        w.row({name, CsvWriter::num(param), r.passed ? "true" : "false", CsvWriter::num(r.worst_violation),
               std::to_string(r.samples_checked), std::to_string(r.samples_skipped), CsvWriter::num(r.tolerance),
               detail::witness_text(r.witness)});
    };
    auto emit_axiom = [&](const std::string& name, double param, const AxiomReport& r) {
        all = all && r.passed();
        w.row({name, CsvWriter::num(param), r.passed() ? "true" : "false", CsvWriter::num(r.worst_violation),
               std::to_string(r.samples_checked), "0", CsvWriter::num(r.tolerance), detail::witness_text(r.witness)});
    };

    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto& [name, param] = specs[i];
        const std::string path = "checks[" + std::to_string(i) + "]";
        if (name == "C") {
            const double l = param.value_or(c.lambda);
            emit(name, l, config_detail::at(path, [&] { return check_condition_C(c.map(), l, map_sample(), c.tolerance); }));
        } else if (name == "D") {
            const double l = param.value_or(c.lambda);
            emit(name, l, config_detail::at(path, [&] { return check_condition_D(c.map(), l, map_sample(), c.tolerance); }));
        } else if (name == "E") {
            if (!param && !c.mu) throw ConfigError(path, "E needs a parameter, e.g. E(3), or a mu field");
            const double m = param.value_or(c.mu.value_or(1.0));
            emit(name, m, config_detail::at(path, [&] { return check_condition_E(c.map(), m, map_sample(), c.tolerance); }));
        } else if (name == "nonexpansive") {
            emit(name, 0.0, check_nonexpansive(c.map(), map_sample(), c.tolerance));
        } else if (name == "directional") {
            const std::vector<double> grid = dense_t_grid(20);
            emit(name, 0.0, check_directional_nonexpansive(c.map(), grid, map_sample(), c.tolerance));
        } else if (name == "quasi_nonexpansive") {
            if (!c.fixed_point) throw ConfigError("fixed_point", "quasi_nonexpansive needs a fixed_point");
            emit(name, 0.0, check_quasi_nonexpansive_at(c.map(), *c.fixed_point, map_sample(), c.tolerance));
        } else if (name == "hyperbolic") {
            const std::vector<double> grid = param ? default_t_grid(*param) : default_t_grid();
            const std::vector<PointTriple> triples =
                space.kind() == SpaceKind::Sphere ? sphere_latitude_triples(base.size() / 3 + 1, c.seed)
                                                  : make_triples(sample_points(space, 3 * base.size(), c.seed));
            emit_axiom(name, param.value_or(0.0), check_hyperbolic_type(space, triples, grid, c.tolerance));
        } else if (name == "linear") {
            const std::vector<double> grid = dense_t_grid(16);
            const std::vector<PointPair> pairs = make_pairs(base);
            emit_axiom(name, 0.0, config_detail::at(path, [&] { return check_linear_axioms(space, pairs, grid, c.tolerance); }));
        } else {
            throw ConfigError(path, "unknown check '" + name +
                                        "' (C, D, E, nonexpansive, directional, quasi_nonexpansive, hyperbolic, linear)");
        }
    }
    log << (all ? "all checks passed\n" : "some checks failed\n");
    return all ? Ok : CheckFailed;
}

namespace detail {

inline void family_csv(CsvWriter& w, const FamilyResult& r, double eps) {
    for (const auto& ir : r.instances) {
        std::string params;
        for (const auto& [k, v] : ir.parameters) params += (params.empty() ? "" : ";") + k + "=" + CsvWriter::num(v);
        w.row({ir.id, params, CsvWriter::num(eps), ir.witness.witness_n ? std::to_string(*ir.witness.witness_n) : "",
               ir.witness.witness_n ? CsvWriter::num(ir.witness.oscillation_at_witness) : "",
               ir.witness.exhausted ? "true" : "false",
               ir.step_witness.witness_n ? std::to_string(*ir.step_witness.witness_n) : "",
               CsvWriter::num(ir.condition_violation), ir.condition_passed ? "true" : "false",
               ir.beta ? std::to_string(*ir.beta) : "", ir.error});
    }
    w.row({"uniform_bound", r.label + ":" + r.mode, CsvWriter::num(eps),
           r.uniform_bound ? std::to_string(*r.uniform_bound) : "", "", r.failures.empty() ? "false" : "true",
           r.uniform_bound_step ? std::to_string(*r.uniform_bound_step) : "", "", "",
           r.shared_beta ? std::to_string(*r.shared_beta) : "", "failures=" + std::to_string(r.failures.size())});
}

}  // namespace detail

/// Family experiment: one row per instance and a closing uniform-bound row per epsilon.
inline int cmd_family(const ExperimentConfig& c, std::ostream& csv, std::ostream& log) {
    if (!c.family) throw ConfigError("family", "a family description is required");
    const FamilySpec fam = build_family(*c.family, c.lambda);
    const FSpec F = FSpec::parse(c.F);
    FamilyOptions opt;
    opt.cap = c.cap;
    opt.trace_length = c.trace_length;
    opt.mu = c.mu.value_or(3.0);
    opt.beta_k = c.family->beta_k;

    CsvWriter w(csv);
    w.header_comment(c.hash());
    w.row({"instance", "parameters", "epsilon", "witness_n", "oscillation_at_witness", "exhausted", "step_witness_n",
           "condition_violation", "condition_passed", "beta", "error"});
    for (double eps : c.epsilons) {
        const FamilyResult r = c.family->mode == "fixedpoint" ? uniform_bound_fixedpoint(fam, F, eps, opt)
                                                               : uniform_bound(fam, F, eps, opt);
        detail::family_csv(w, r, eps);
        log << "epsilon " << CsvWriter::num(eps) << ": uniform bound (" << r.label << ") "
            << (r.uniform_bound ? std::to_string(*r.uniform_bound) : "none") << ", step form "
            << (r.uniform_bound_step ? std::to_string(*r.uniform_bound_step) : "none") << ", " << r.failures.size()
            << " failed instance(s)\n";
    }
    return Ok;
}

/// Single-sequence metastability report, or the family experiment when the
/// configuration describes a family.
inline int cmd_metastab(const ExperimentConfig& c, std::ostream& csv, std::ostream& log) {
    if (c.family) return cmd_family(c, csv, log);
    const MapUnderTest& T = c.map();
    const Point x1 = detail::start_point(c);
    const FSpec F = FSpec::parse(c.F);
    const std::size_t N = detail::trace_length(c, default_trace_length(F, c.cap));
    const IterationTrace tr = mann_iterate(T, x1, c.lambda, N, std::max(N, kDefaultTraceCap));

    CsvWriter w(csv);
    w.header_comment(c.hash());
    w.row({"sequence", "epsilon", "F", "witness_n", "oscillation_at_witness", "scan_cap", "exhausted",
           "cauchy_K_in_sample"});
    for (const std::string& seq : c.sequences) {
        for (double eps : c.epsilons) {
            MetastabilityReport rep;
            std::size_t K = 0;
            const std::vector<double> e1{eps};
            if (seq == "points") {
                const MetricOscillation osc(T.space(), tr.points);
                rep = least_witness(osc, F, eps, c.cap);
                K = cauchy_modulus_estimate(osc, e1)[0].K;
            } else {
                const std::vector<double>& v = seq == "residual" ? tr.residuals : tr.steps;
                const RealOscillation osc(v);
                rep = least_witness(osc, F, eps, c.cap);
                K = cauchy_modulus_estimate(osc, e1)[0].K;
            }
            w.row({seq, CsvWriter::num(eps), F.text(), rep.witness_n ? std::to_string(*rep.witness_n) : "",
                   rep.witness_n ? CsvWriter::num(rep.oscillation_at_witness) : "", std::to_string(rep.scan_cap),
                   rep.exhausted ? "true" : "false", std::to_string(K)});
            log << seq << " epsilon " << CsvWriter::num(eps) << ": "
                << (rep.witness_n ? "witness n=" + std::to_string(*rep.witness_n) : std::string("exhausted cap"))
                << '\n';
        }
    }
    return Ok;
}

/// Greedy net over the sample; rows are the centers. With net.K the radius is
/// 1/(k+1) for the k chosen by the beta-to-alpha conversion and coverage is
/// verified at 1/(K+1).
inline int cmd_net(const ExperimentConfig& c, std::ostream& csv, std::ostream& log) {
    const Space& space = c.require_space();
    const std::vector<Point> sample = build_sample(c);
    double radius = 0.0;
    std::optional<AlphaFromBeta> conv;
    if (c.net.K) {
        conv = alpha_from_beta([&](std::size_t k) { return modulus_beta(space, sample, k); }, *c.net.K);
        radius = 1.0 / static_cast<double>(conv->k + 1);
    } else if (c.net.k) {
        radius = 1.0 / static_cast<double>(*c.net.k + 1);
    } else if (c.net.radius) {
        radius = *c.net.radius;
    } else {
        throw ConfigError("net", "one of radius, k or K is required");
    }
    const NetResult net = greedy_net(space, sample, radius);

    CsvWriter w(csv);
    w.header_comment(c.hash());
    w.comment("radius " + CsvWriter::num(radius) + " sample " + std::to_string(sample.size()));
    std::vector<std::string> head{"center", "sample_index"};
    for (std::size_t i = 1; i <= space.dimension(); ++i) head.push_back("x" + std::to_string(i));
    w.row(head);
    for (std::size_t i = 0; i < net.centers.size(); ++i) {
        std::vector<std::string> r{std::to_string(i), std::to_string(net.center_indices[i])};
        for (std::size_t k = 0; k < net.centers[i].dim(); ++k) r.push_back(CsvWriter::num(net.centers[i][k]));
        w.row(r);
    }
    log << net.centers.size() << " center(s) at radius " << CsvWriter::num(radius) << ", covered "
        << (net.covered ? "yes" : "no") << ", max distance to nearest center "
        << CsvWriter::num(net.max_uncovered_distance) << '\n';
    if (c.net.k) log << "beta(" << *c.net.k << ") <= " << modulus_beta(space, sample, *c.net.k) << " (upper estimate)\n";
    if (conv) {
        const bool ok = net.max_uncovered_distance < 1.0 / static_cast<double>(*c.net.K + 1);
        log << "K=" << *c.net.K << " -> k=" << conv->k << " -> alpha=" << conv->alpha << "; coverage at 1/(K+1) "
            << (ok ? "verified" : "FAILED") << '\n';
        if (!ok) return CheckFailed;
    }
    return net.covered ? Ok : CheckFailed;
}

inline formula::FiniteStructure build_structure(const ExperimentConfig& c) {
    formula::FiniteStructure s{c.require_space(), c.maps, {}, build_sample(c), c.constants};
    for (const auto& [name, set] : c.predicates) s.predicates[name] = formula::distance_to_set(s.space, set);
    return s;
}

/// Evaluates a formula file or builtin over the configured structure.
inline int cmd_eval_formula(const ExperimentConfig& c, std::ostream& csv, std::ostream& log) {
    std::string source, origin;
    if (c.builtin) {
        source = config_detail::at("builtin", [&] { return formula::builtin_source(*c.builtin); });
        origin = *c.builtin;
    } else if (c.formula_file) {
        std::ifstream in(*c.formula_file);
        if (!in) throw ConfigError("formula_file", "cannot read " + *c.formula_file);
        std::ostringstream ss;
        ss << in.rdbuf();
        source = ss.str();
        origin = *c.formula_file;
    } else {
        throw ConfigError("formula_file", "a formula file or builtin is required");
    }
    formula::NodePtr ast;
    try {
        ast = formula::parse(source);
    } catch (const ParseError& e) {
        throw ParseError(e.message(), e.line(), e.column(), origin);
    }
    const formula::FiniteStructure s = build_structure(c);
    const formula::EvalResult r = formula::evaluate_with_witness(ast, s, c.bindings);

    CsvWriter w(csv);
    w.header_comment(c.hash());
    w.row({"formula", "value", "witnesses"});
    std::string ws;
    for (const auto& [v, p] : r.witnesses) ws += (ws.empty() ? "" : ";") + v + "=" + CsvWriter::point(p);
    w.row({formula::print(ast), CsvWriter::num(r.value), ws});
    log << "value = " << CsvWriter::num(r.value) << '\n';
    for (const auto& [v, p] : r.witnesses) log << "  " << v << " = " << CsvWriter::point(p) << '\n';
    return Ok;
}

using Command = std::function<int(const ExperimentConfig&, std::ostream&, std::ostream&)>;

inline Command command(const std::string& name) {
    if (name == "iterate") return cmd_iterate;
    if (name == "check") return cmd_check;
    if (name == "metastab") return cmd_metastab;
    if (name == "family") return cmd_family;
    if (name == "net") return cmd_net;
    if (name == "eval-formula") return cmd_eval_formula;
    return nullptr;
}

/// Loads the configuration, runs the command and maps errors to exit codes.
/// CSV goes to the configured output path, with the summary on `log`, or
/// else to `out`, with the summary on `err`.
inline int run(const std::string& name, const std::optional<std::string>& config_path, const Overrides& o,
               std::ostream& out, std::ostream& log, std::ostream& err) {
    const Command cmd = command(name);
    if (!cmd) {
        err << "error: unknown command '" << name << "'\n";
        return ValidationFailed;
    }
    try {
        ExperimentConfig c = config_path ? load_config(*config_path) : parse_config(json::object());
        apply(c, o);
        std::ostringstream buffer;
        const int code = cmd(c, buffer, c.output ? log : err);
        if (c.output) {
            std::ofstream f(*c.output, std::ios::binary);
            if (!f) throw Error("cannot write " + *c.output);
            f << buffer.str();
        } else {
            out << buffer.str();
        }
        return code;
    } catch (const ConfigError& e) {
        err << "validation error: " << e.what() << '\n';
        return ValidationFailed;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return ValidationFailed;
    } catch (const ParameterError& e) {
        err << "validation error: " << e.what() << '\n';
        return ValidationFailed;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return RuntimeFailed;
    }
}

}  // namespace geometa::cli
