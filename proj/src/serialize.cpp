#include "landau/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "landau/errors.hpp"

namespace landau {

namespace {

void write(const Json& j, std::string& out) {
    switch (j.type()) {
        case Json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += Json(it.key()).dump();
                out += ':';
                write(it.value(), out);
            }
            out += '}';
            break;
        }
        case Json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ',';
                write(j[i], out);
            }
            out += ']';
            break;
        }
        case Json::value_t::number_float: {
            double d = j.get<double>();
            if (std::isnan(d)) {
                out += "\"nan\"";
            } else if (std::isinf(d)) {
                out += d > 0 ? "\"inf\"" : "\"-inf\"";
            } else {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", d == 0 ? 0.0 : d);
                out += buf;
            }
            break;
        }
        default:
            out += j.dump();
    }
}

[[noreturn]] void schema(const std::string& what) { fail(ErrorKind::Schema, what); }

const Json& at(const Json& j, const char* key, const char* what) {
    if (!j.is_object() || !j.contains(key)) schema(std::string(what) + ": missing \"" + key + "\"");
    return j.at(key);
}

double num(const Json& j, const char* what) {
    if (!j.is_number()) schema(std::string(what) + ": expected a number");
    return j.get<double>();
}

std::int64_t integer(const Json& j, const char* what) {
    if (!j.is_number_integer()) schema(std::string(what) + ": expected an integer");
    return j.get<std::int64_t>();
}

std::vector<double> nums(const Json& j, const char* what) {
    if (!j.is_array()) schema(std::string(what) + ": expected an array");
    std::vector<double> out;
    for (const auto& v : j) out.push_back(num(v, what));
    return out;
}

Json interval_json(const Interval& iv) { return Json::array({iv.lo, iv.hi}); }

Interval interval_from(const Json& j, const char* what) {
    if (!j.is_array() || j.size() != 2) schema(std::string(what) + ": interval must be [lo, hi]");
    return {num(j[0], what), num(j[1], what)};
}

const char* kind_name(FactorKind k) {
    switch (k) {
        case FactorKind::RealLine: return "real";
        case FactorKind::Integers: return "integers";
        case FactorKind::Torus: return "torus";
        case FactorKind::Cyclic: return "cyclic";
    }
    return "?";
}

Json lattice_json(const LatticeGenerator& l) {
    return {{"real_basis", l.real_basis}, {"steps", l.steps}, {"cosets", l.cosets}};
}

LatticeGenerator lattice_from(const Json& j) {
    require_keys(j, {"real_basis", "steps", "cosets"}, "lattice");
    LatticeGenerator l;
    if (j.contains("real_basis")) l.real_basis = nums(j["real_basis"], "lattice.real_basis");
    if (j.contains("steps")) l.steps = nums(j["steps"], "lattice.steps");
    if (j.contains("cosets")) {
        if (!j["cosets"].is_array()) schema("lattice.cosets: expected an array");
        for (const auto& c : j["cosets"]) l.cosets.push_back(nums(c, "lattice.cosets"));
    }
    return l;
}

Json rows_json(const DensityEstimate& d) {
    Json rows = Json::array();
    for (const auto& r : d.rows)
        rows.push_back({{"h", r.h}, {"inf_count", r.inf_count}, {"sup_count", r.sup_count}, {"lower", r.lower},
                        {"upper", r.upper}});
    return rows;
}

std::string fmt(double d) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

}  // namespace

std::string canonical_json(const Json& j) {
    std::string out;
    write(j, out);
    return out;
}

void require_keys(const Json& j, std::initializer_list<const char*> allowed, const char* what) {
    if (!j.is_object()) schema(std::string(what) + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) schema(std::string(what) + ": unknown key \"" + it.key() + "\"");
    }
}

Json to_json(const LcaGroup& g) {
    Json f = Json::array();
    for (const auto& x : g.factors()) {
        if (x.kind == FactorKind::Cyclic)
            f.push_back({{"cyclic", x.order}});
        else
            f.push_back(kind_name(x.kind));
    }
    return {{"factors", f}, {"haar_scale", g.haar_scales()}};
}

LcaGroup group_from_json(const Json& j) {
    require_keys(j, {"factors", "haar_scale"}, "group");
    const auto& fs = at(j, "factors", "group");
    if (!fs.is_array()) schema("group.factors: expected an array");
    std::vector<ElementaryFactor> factors;
    for (const auto& f : fs) {
        if (f.is_string()) {
            auto s = f.get<std::string>();
            if (s == "real") factors.push_back(ElementaryFactor::real_line());
            else if (s == "integers") factors.push_back(ElementaryFactor::integers());
            else if (s == "torus") factors.push_back(ElementaryFactor::torus());
            else schema("group.factors: unknown factor \"" + s + "\"");
        } else if (f.is_object()) {
            require_keys(f, {"cyclic"}, "group.factors");
            factors.push_back(ElementaryFactor::cyclic(integer(at(f, "cyclic", "group.factors"), "cyclic order")));
        } else {
            schema("group.factors: factor must be a string or {\"cyclic\": N}");
        }
    }
    if (j.contains("haar_scale")) return LcaGroup(factors, nums(j["haar_scale"], "group.haar_scale"));
    return LcaGroup(factors);
}

Json to_json(const BoxComponent& c) {
    if (c.full) return "whole";
    if (!c.points.empty()) return {{"points", c.points}};
    if (c.intervals.size() == 1) return interval_json(c.intervals[0]);
    Json iv = Json::array();
    for (const auto& i : c.intervals) iv.push_back(interval_json(i));
    return {{"intervals", iv}};
}

BoxComponent component_from_json(const Json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() != "whole") schema("component: the only string form is \"whole\"");
        return BoxComponent::whole();
    }
    if (j.is_array()) return BoxComponent{{interval_from(j, "component")}, {}, false};
    require_keys(j, {"intervals", "points"}, "component");
    if (j.contains("intervals") == j.contains("points")) schema("component: give exactly one of intervals, points");
    BoxComponent c;
    if (j.contains("points")) {
        if (!j["points"].is_array()) schema("component.points: expected an array");
        for (const auto& p : j["points"]) c.points.push_back(integer(p, "component.points"));
    } else {
        if (!j["intervals"].is_array()) schema("component.intervals: expected an array");
        for (const auto& iv : j["intervals"]) c.intervals.push_back(interval_from(iv, "component.intervals"));
    }
    return c;
}

Json to_json(const Box& b) {
    Json out = Json::array();
    for (const auto& c : b) out.push_back(to_json(c));
    return out;
}

Box box_from_json(const Json& j, const LcaGroup& g) {
    if (!j.is_array()) schema("box: expected an array of components");
    Box b;
    for (const auto& c : j) b.push_back(component_from_json(c));
    validate_box(g, b, "box");
    return b;
}

Json to_json(const Spectrum& s) {
    Json pieces = Json::array();
    for (const auto& p : s.pieces) pieces.push_back(to_json(p));
    return {{"dual_group", to_json(s.dual_group)}, {"pieces", pieces}};
}

Spectrum spectrum_from_json(const Json& j) {
    require_keys(j, {"dual_group", "pieces"}, "spectrum");
    Spectrum s;
    s.dual_group = group_from_json(at(j, "dual_group", "spectrum"));
    const auto& ps = at(j, "pieces", "spectrum");
    if (!ps.is_array()) schema("spectrum.pieces: expected an array");
    for (const auto& p : ps) s.pieces.push_back(box_from_json(p, s.dual_group));
    validate_spectrum(s);
    return s;
}

Json to_json(const DiscreteSet& s) {
    Json gen;
    if (auto* l = std::get_if<LatticeGenerator>(&s.generator)) {
        gen = {{"lattice", lattice_json(*l)}};
    } else if (auto* p = std::get_if<PerturbedLattice>(&s.generator)) {
        gen = {{"perturbed", {{"base", lattice_json(p->base)}, {"amplitude", p->amplitude}, {"seed", p->seed}}}};
    } else {
        gen = {{"points", std::get<ExplicitList>(s.generator).points}};
    }
    return {{"group", to_json(s.group)},
            {"generator", gen},
            {"separation", s.separation},
            {"point_budget", s.point_budget}};
}

DiscreteSet set_from_json(const Json& j) {
    require_keys(j, {"group", "generator", "separation", "point_budget"}, "set");
    DiscreteSet s;
    s.group = group_from_json(at(j, "group", "set"));
    const auto& g = at(j, "generator", "set");
    require_keys(g, {"lattice", "perturbed", "points"}, "set.generator");
    if (g.size() != 1) schema("set.generator: give exactly one of lattice, perturbed, points");
    if (g.contains("lattice")) {
        s.generator = lattice_from(g["lattice"]);
    } else if (g.contains("perturbed")) {
        const auto& p = g["perturbed"];
        require_keys(p, {"base", "amplitude", "seed"}, "set.generator.perturbed");
        PerturbedLattice pl;
        pl.base = lattice_from(at(p, "base", "perturbed"));
        pl.amplitude = num(at(p, "amplitude", "perturbed"), "perturbed.amplitude");
        if (p.contains("seed")) pl.seed = p["seed"].get<std::uint64_t>();
        s.generator = pl;
    } else {
        ExplicitList l;
        if (!g["points"].is_array()) schema("set.generator.points: expected an array");
        for (const auto& p : g["points"]) l.points.push_back(nums(p, "points"));
        s.generator = l;
    }
    if (j.contains("separation")) s.separation = num(j["separation"], "set.separation");
    if (j.contains("point_budget")) s.point_budget = j["point_budget"].get<std::size_t>();
    validate_set(s);
    return s;
}

Json to_json(const Scenario& s) {
    return {{"name", s.name},
            {"set", to_json(s.set)},
            {"spectrum", to_json(s.spectrum)},
            {"mode", to_string(s.mode)},
            {"windows", s.windows},
            {"epsilon", s.epsilon},
            {"seed", s.seed},
            {"grid_budget", s.grid_budget},
            {"tile_width", s.tile_width},
            {"l_radius", s.l_radius},
            {"hap_schedule", s.hap_schedule.radii}};
}

Scenario scenario_from_json(const Json& j) {
    require_keys(j, {"name", "set", "spectrum", "mode", "windows", "epsilon", "seed", "grid_budget", "tile_width",
                     "l_radius", "hap_schedule"},
                 "scenario");
    Scenario s;
    if (j.contains("name")) s.name = j["name"].get<std::string>();
    s.set = set_from_json(at(j, "set", "scenario"));
    const auto& sp = at(j, "spectrum", "scenario");
    if (sp.is_object() && !sp.contains("dual_group")) {
        // spectrum given by its pieces only: it lives in the dual of the set's group
        Json full = sp;
        full["dual_group"] = to_json(dual(s.set.group));
        s.spectrum = spectrum_from_json(full);
    } else {
        s.spectrum = spectrum_from_json(sp);
    }
    if (j.contains("mode")) {
        auto m = j["mode"].get<std::string>();
        if (m == "sampling") s.mode = Mode::Sampling;
        else if (m == "interpolation") s.mode = Mode::Interpolation;
        else schema("scenario.mode: expected sampling or interpolation");
    }
    if (j.contains("windows")) s.windows = nums(j["windows"], "scenario.windows");
    if (j.contains("epsilon")) s.epsilon = num(j["epsilon"], "scenario.epsilon");
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("grid_budget")) s.grid_budget = j["grid_budget"].get<std::size_t>();
    if (j.contains("tile_width")) s.tile_width = nums(j["tile_width"], "scenario.tile_width");
    if (j.contains("l_radius")) s.l_radius = num(j["l_radius"], "scenario.l_radius");
    if (j.contains("hap_schedule")) s.hap_schedule.radii = nums(j["hap_schedule"], "scenario.hap_schedule");
    if (s.windows.empty()) schema("scenario.windows: at least one window is needed");
    return s;
}

std::vector<Scenario> batch_from_json(const Json& j) {
    if (j.is_object() && j.contains("scenarios")) {
        require_keys(j, {"schema_version", "scenarios"}, "batch");
        if (j.contains("schema_version") && j["schema_version"] != kSchemaVersion)
            schema("batch: unsupported schema_version");
        std::vector<Scenario> out;
        for (const auto& s : j["scenarios"]) out.push_back(scenario_from_json(s));
        return out;
    }
    return {scenario_from_json(j)};
}

Json to_json(const DensityEstimate& d) {
    return {{"rows", rows_json(d)}, {"lower", d.lower()}, {"upper", d.upper()}};
}

Json to_json(const ComparisonVerdict& v) {
    return {{"status", to_string(v.status)},
            {"witness_radius", v.witness_radius},
            {"max_violation", v.max_violation},
            {"windows_tested", v.windows_tested},
            {"expansions_tried", v.expansions_tried}};
}

Json to_json(const UniformDensity& u) {
    return {{"lower", u.lower},
            {"upper", u.upper},
            {"lower_bracket", {u.lower_bracket[0], u.lower_bracket[1]}},
            {"upper_bracket", {u.upper_bracket[0], u.upper_bracket[1]}},
            {"packing_bound", u.packing_bound},
            {"lower_capped", u.lower_capped}};
}

Json to_json(const FrameReport& f) {
    return {{"lower", f.lower},
            {"upper", f.upper},
            {"gram_spectrum", f.gram_spectrum},
            {"dual_norm_sup", f.dual_norm_sup},
            {"dual_norm_finite", f.dual_norm_finite},
            {"window_level", f.window_level},
            {"test_dimension", f.test_dimension}};
}

Json to_json(const ConcentrationReport& c) {
    Json counts = Json::object();
    for (const auto& [t, n] : c.counts_above) counts[fmt(t)] = n;
    return {{"trace", c.trace},     {"rank_estimate", c.rank_estimate}, {"eigenvalues", c.eigenvalues},
            {"counts_above", counts}, {"rank_p", c.rank_p},             {"rank_q", c.rank_q},
            {"trace_le_rank", c.trace_le_rank}};
}

Json to_json(const RsRecord& r) {
    return {{"hypothesis_holds", r.hypothesis_holds},
            {"failing_index", r.failing_index},
            {"failing_gamma", r.failing_gamma},
            {"max_distance", r.max_distance},
            {"c", r.c},
            {"c_finite", r.c_finite},
            {"gamma_count", r.gamma_count},
            {"multiplicity", r.multiplicity},
            {"lambda_count", r.lambda_count},
            {"lhs", r.lhs},
            {"rhs", r.rhs},
            {"conclusion_holds", r.conclusion_holds},
            {"trace", r.trace},
            {"rank", r.rank},
            {"chain_holds", r.chain_holds}};
}

Json to_json(const CubeSpec& c) {
    Json k = Json::array();
    for (const auto& f : c.compact_subgroup.factors) {
        const char* t = f.type == SubgroupFactor::Type::Trivial ? "trivial"
                        : f.type == SubgroupFactor::Type::Whole ? "whole"
                                                                : "lattice";
        k.push_back({{"type", t}, {"step", f.step}});
    }
    return {{"dual_group", to_json(c.dual_group)},
            {"half_width", c.half_width},
            {"torus_refinement", c.torus_refinement},
            {"subgroup_step", c.subgroup_step},
            {"origin", c.origin},
            {"cell", to_json(c.cell())},
            {"measure", c.measure()},
            {"compact_subgroup", k}};
}

Json to_json(const CubeAtlas& a, const Box& window) {
    auto pts = quasi_points(a, window);
    Json points = Json::array();
    for (std::size_t i = 0; i < pts.size(); ++i) points.push_back(pts.point(i));
    Json tiles = Json::array();
    for (const auto& t : tiles_meeting(a.cube, window)) tiles.push_back(t);
    return {{"cube", to_json(a.cube)},
            {"coset_reps", a.quasi.coset_reps},
            {"upsilon", to_json(a.quasi.upsilon)},
            {"window", to_json(window)},
            {"quasi_points", points},
            {"tiles", tiles}};
}

Json to_json(const NecessityReport& r) {
    Json trend = Json::array();
    for (const auto& t : r.trend) trend.push_back({{"window", t.window}, {"bound", t.bound}, {"points", t.points}});
    return {{"scenario", r.scenario},
            {"mode", to_string(r.mode)},
            {"nyquist", r.nyquist},
            {"beurling", to_json(r.beurling)},
            {"uniform", to_json(r.uniform)},
            {"comparison", to_json(r.comparison)},
            {"trend", trend},
            {"decaying", r.decaying},
            {"bounded_below", r.bounded_below},
            {"density_meets_nyquist", r.density_meets_nyquist},
            {"verdict", to_string(r.verdict)},
            {"note", r.note}};
}

Json to_json(const ReplayReport& r) {
    Json stages = Json::array();
    for (const auto& s : r.stages) {
        Json values = Json::object();
        for (const auto& [k, v] : s.values) values[k] = v;
        stages.push_back({{"name", s.name}, {"passed", s.passed}, {"message", s.message}, {"values", values}});
    }
    return {{"scenario", r.scenario},
            {"stages", stages},
            {"completed", r.completed},
            {"hypothesis_failure", r.hypothesis_failure},
            {"failed_stage", r.failed_stage},
            {"slack", r.slack}};
}

Json to_json(const EigenCountReport& r) {
    Json rows = Json::array();
    for (const auto& x : r.rows)
        rows.push_back({{"h", x.h},
                        {"count", x.count},
                        {"expected", x.expected},
                        {"residual", x.residual},
                        {"envelope", x.envelope},
                        {"nodes", x.nodes}});
    return {{"a", r.a},
            {"threshold", r.threshold},
            {"rows", rows},
            {"exponent", r.exponent},
            {"within_envelope", r.within_envelope}};
}

Json to_json(const BatchReport& b) {
    Json out = Json::array();
    for (const auto& o : b.outcomes) {
        Json e = {{"name", o.name}, {"error", o.error}, {"message", o.message}};
        if (o.report) {
            e["verdict"] = to_string(o.report->verdict);
            e["report"] = to_json(*o.report);
        } else {
            e["verdict"] = "error";
        }
        out.push_back(e);
    }
    return {{"scenarios", out},
            {"aggregate",
             {{"consistent", b.consistent},
              {"violated", b.violated},
              {"inconclusive", b.inconclusive},
              {"errors", b.errors}}}};
}

Json to_json(const RunRecord& r) {
    return {{"schema_version", kSchemaVersion},
            {"tool_version", kToolVersion},
            {"command", r.command},
            {"config", r.config},
            {"seed", r.seed},
            {"result", r.result}};
}

std::string density_csv(const DensityEstimate& d) {
    std::ostringstream os;
    os << "h,inf_count,sup_count,lower,upper\n";
    for (const auto& r : d.rows)
        os << fmt(r.h) << ',' << r.inf_count << ',' << r.sup_count << ',' << fmt(r.lower) << ',' << fmt(r.upper)
           << '\n';
    return os.str();
}

std::string eigenvalue_csv(const std::vector<double>& ev) {
    std::ostringstream os;
    os << "index,eigenvalue\n";
    for (std::size_t i = 0; i < ev.size(); ++i) os << i << ',' << fmt(ev[i]) << '\n';
    return os.str();
}

// multi-dimensional nodes are written with ';' between coordinates
std::string grid_csv(const QuadratureGrid& g) {
    std::ostringstream os;
    os << "node,weight\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto p = g.nodes.point(i);
        for (std::size_t k = 0; k < p.size(); ++k) os << (k ? ";" : "") << fmt(p[k]);
        os << ',' << fmt(g.weights[i]) << '\n';
    }
    return os.str();
}

}  // namespace landau
