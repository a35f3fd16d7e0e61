#include "deform/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "deform/errors.hpp"
#include "deform/pipelines.hpp"
#include "json.hpp"

namespace deform {

namespace {

using ordered_json = nlohmann::ordered_json;

void require_keys(const ordered_json& o, const std::set<std::string>& allowed,
                  const std::string& where)
{
    if (!o.is_object())
        throw ParseError(where + ": expected an object");
    for (const auto& [key, value] : o.items())
        if (allowed.find(key) == allowed.end())
            throw ParseError(where + ": unknown key \"" + key + "\"");
}

Rational parse_rat(const ordered_json& j, const std::string& where)
{
    try {
        if (j.is_number_integer())
            return Rational(static_cast<long>(j.get<long long>()));
        if (j.is_string()) {
            Rational q(j.get<std::string>());
            q.canonicalize();
            return q;
        }
    } catch (const std::exception&) {
    }
    throw ParseError(where + ": expected an integer or a rational string");
}

LaurentPoly parse_laurent(const ordered_json& j, const std::string& where)
{
    if (!j.is_object())
        throw ParseError(where + ": a Laurent polynomial is an object {exponent: coefficient}");
    LaurentPoly out;
    for (const auto& [key, value] : j.items()) {
        int e = 0;
        try {
            size_t used = 0;
            e = std::stoi(key, &used);
            if (used != key.size())
                throw std::invalid_argument(key);
        } catch (const std::exception&) {
            throw ParseError(where + ": bad exponent \"" + key + "\"");
        }
        Rational c = parse_rat(value, where + "[" + key + "]");
        if (!is_zero(c))
            out[e] = c;
    }
    return out;
}

RingMatrix parse_ring_matrix(const ordered_json& j, const std::string& where)
{
    if (!j.is_array() || j.empty())
        throw ParseError(where + ": expected a non-empty matrix of Laurent entries");
    RingMatrix out;
    size_t cols = 0;
    for (size_t i = 0; i < j.size(); ++i) {
        const auto& row = j[i];
        if (!row.is_array() || (i > 0 && row.size() != cols))
            throw ParseError(where + ": rows must be arrays of equal length");
        cols = row.size();
        std::vector<LaurentPoly> r;
        for (size_t c = 0; c < row.size(); ++c)
            r.push_back(parse_laurent(row[c], where + "[" + std::to_string(i) + "]["
                                                  + std::to_string(c) + "]"));
        out.push_back(std::move(r));
    }
    return out;
}

std::string rat_str(const Rational& q) { return q.get_str(); }

ordered_json laurent_json(const LaurentPoly& p)
{
    ordered_json out = ordered_json::object();
    for (const auto& [e, c] : p)
        out[std::to_string(e)] = rat_str(c);
    return out;
}

ordered_json sparse_vector_json(const SparseVector& v)
{
    ordered_json out = ordered_json::array();
    for (const auto& [i, c] : v)
        out.push_back(ordered_json::array({i, rat_str(c)}));
    return out;
}

ordered_json matrix_json(const SparseMatrix& m)
{
    ordered_json out = ordered_json::object();
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    ordered_json entries = ordered_json::array();
    for (const auto& [rc, c] : m.entries())
        entries.push_back(ordered_json::array({rc.first, rc.second, rat_str(c)}));
    out["entries"] = std::move(entries);
    return out;
}

ordered_json sequence_json(const std::vector<SequenceNode>& seq)
{
    ordered_json out = ordered_json::array();
    for (const auto& n : seq) {
        ordered_json o;
        o["name"] = n.name;
        o["dim"] = n.dim;
        o["rank_in"] = n.rank_in;
        o["ker_out"] = n.ker_out;
        o["composite_zero"] = n.composite_zero;
        o["exact"] = n.exact();
        out.push_back(std::move(o));
    }
    return out;
}

struct ScenarioData {
    int window = 0;
    std::map<std::string, SheafPresentation> sheaves;
    std::map<std::string, SheafMorphismPresentation> morphisms;
    std::map<std::string, ordered_json> system_specs;
    std::vector<ordered_json> checks;
    std::string name;
};

SheafPresentation parse_sheaf(const ordered_json& j, const CoverModel& cover,
                              const std::string& where)
{
    require_keys(j, {"line", "sum"}, where);
    if (j.contains("line")) {
        if (!j["line"].is_number_integer())
            throw ParseError(where + ".line: expected an integer degree");
        return make_line_bundle(j["line"].get<int>(), cover);
    }
    if (j.contains("sum")) {
        const auto& a = j["sum"];
        if (!a.is_array() || a.empty())
            throw ParseError(where + ".sum: expected a non-empty array of degrees");
        std::optional<SheafPresentation> acc;
        for (size_t i = 0; i < a.size(); ++i) {
            if (!a[i].is_number_integer())
                throw ParseError(where + ".sum: expected integer degrees");
            SheafPresentation line = make_line_bundle(a[i].get<int>(), cover);
            acc = acc ? sheaf_direct_sum(*acc, line) : line;
        }
        return *acc;
    }
    throw ParseError(where + ": a sheaf needs \"line\" or \"sum\"");
}

const SheafPresentation& sheaf_ref(const ScenarioData& d, const ordered_json& j,
                                   const std::string& key, const std::string& where)
{
    if (!j.contains(key) || !j[key].is_string())
        throw ParseError(where + ": missing sheaf reference \"" + key + "\"");
    auto it = d.sheaves.find(j[key].get<std::string>());
    if (it == d.sheaves.end())
        throw ParseError(where + ": unknown sheaf \"" + j[key].get<std::string>() + "\"");
    return it->second;
}

// A global section from its chart-0 expression: the chart-1 expression is
// g10 s0 and must be polynomial in 1/z.
GlobalSection section_from_s0(const SheafPresentation& e, const std::vector<LaurentPoly>& s0,
                              const std::string& where)
{
    if (static_cast<int>(s0.size()) != e.rank)
        throw ParseError(where + ": section must have " + std::to_string(e.rank) + " components");
    GlobalSection s;
    s.s0 = s0;
    RingMatrix col = rm_zero(e.rank, 1);
    for (int i = 0; i < e.rank; ++i)
        col[i][0] = s0[i];
    RingMatrix s1 = rm_mul(e.g10, col);
    s.s1.assign(e.rank, {});
    for (int i = 0; i < e.rank; ++i)
        s.s1[i] = s1[i][0];
    for (int i = 0; i < e.rank; ++i) {
        if (!lp_in_window(s.s0[i], 0, std::numeric_limits<int>::max()))
            throw ParseError(where + ": chart-0 expression has negative exponents");
        if (!lp_in_window(s.s1[i], std::numeric_limits<int>::min(), 0))
            throw ParseError(where + ": section is not regular on chart 1");
    }
    return s;
}

CoherentSystem build_system(const ScenarioData& d, const ordered_json& spec,
                            const std::string& where)
{
    require_keys(spec, {"sheaf", "sections"}, where);
    CoherentSystem sys;
    sys.e = sheaf_ref(d, spec, "sheaf", where);
    if (!spec.contains("sections"))
        throw ParseError(where + ": missing \"sections\"");
    const auto& sec = spec["sections"];
    if (sec.is_string() && sec.get<std::string>() == "h0") {
        sys.u = global_sections(sys.e);
        if (sys.u.empty())
            throw ParseError(where + ": the sheaf has no global sections");
        return sys;
    }
    if (!sec.is_array() || sec.empty())
        throw ParseError(where + ".sections: expected \"h0\" or a non-empty array");
    for (size_t i = 0; i < sec.size(); ++i) {
        const auto& one = sec[i];
        std::string w = where + ".sections[" + std::to_string(i) + "]";
        if (!one.is_array())
            throw ParseError(w + ": expected an array of Laurent components");
        std::vector<LaurentPoly> s0;
        for (size_t c = 0; c < one.size(); ++c)
            s0.push_back(parse_laurent(one[c], w + "[" + std::to_string(c) + "]"));
        sys.u.push_back(section_from_s0(sys.e, s0, w));
    }
    return sys;
}

ScenarioData parse_scenario(const std::string& path, std::optional<int> window_override)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open scenario file: " + path);
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const ordered_json::parse_error& e) {
        throw ParseError(std::string("scenario JSON: ") + e.what());
    }
    require_keys(doc, {"window", "cover", "sheaves", "morphisms", "systems", "checks"}, "scenario");
    if (!doc.contains("window") || !doc["window"].is_number_integer())
        throw ParseError("scenario: missing integer \"window\"");

    ScenarioData d;
    auto slash = path.find_last_of('/');
    d.name = slash == std::string::npos ? path : path.substr(slash + 1);
    d.window = window_override ? *window_override : doc["window"].get<int>();
    if (d.window < 1)
        throw BadWindow("window must be at least 1");
    if (doc.contains("cover")) {
        require_keys(doc["cover"], {"type"}, "cover");
        if (!doc["cover"].contains("type") || doc["cover"]["type"] != "p1")
            throw ParseError("cover.type: only \"p1\" is supported");
    }
    CoverModel cover = make_p1_cover(d.window);

    if (doc.contains("sheaves"))
        for (const auto& [name, spec] : doc["sheaves"].items())
            d.sheaves.emplace(name, parse_sheaf(spec, cover, "sheaves." + name));

    // the window must dominate every transition degree with slack
    for (const auto& [name, sh] : d.sheaves) {
        int deg = std::max(rm_max_abs_exp(sh.g01), rm_max_abs_exp(sh.g10));
        if (d.window < deg + 2)
            throw BadWindow("window " + std::to_string(d.window) + " too small for sheaf \"" + name
                            + "\" (needs at least " + std::to_string(deg + 2) + ")");
    }

    if (doc.contains("morphisms"))
        for (const auto& [name, spec] : doc["morphisms"].items()) {
            std::string where = "morphisms." + name;
            require_keys(spec, {"source", "target", "a0", "a1"}, where);
            SheafMorphismPresentation m;
            m.source = sheaf_ref(d, spec, "source", where);
            m.target = sheaf_ref(d, spec, "target", where);
            if (!spec.contains("a0"))
                throw ParseError(where + ": missing chart matrix \"a0\"");
            m.a0 = parse_ring_matrix(spec["a0"], where + ".a0");
            if (spec.contains("a1")) {
                m.a1 = parse_ring_matrix(spec["a1"], where + ".a1");
            } else {
                // a1 = g10^G a0 g01^F makes the compatibility automatic
                m.a1 = rm_mul(rm_mul(m.target.g10, m.a0), m.source.g01);
            }
            d.morphisms.emplace(name, std::move(m));
        }

    if (doc.contains("systems"))
        for (const auto& [name, spec] : doc["systems"].items())
            d.system_specs.emplace(name, spec);

    if (!doc.contains("checks") || !doc["checks"].is_array() || doc["checks"].empty())
        throw ParseError("scenario: \"checks\" must be a non-empty array");
    for (const auto& c : doc["checks"])
        d.checks.push_back(c);
    return d;
}

const std::set<std::string> kKnownOps = {"cohomology",        "deform_morphism", "pair_EU",
                                         "m_delta",           "section_extension",
                                         "defk_tangent",      "smoothness"};

void validate_check(const ScenarioData& d, const ordered_json& c, const std::string& where)
{
    if (!c.is_object() || !c.contains("op") || !c["op"].is_string())
        throw ParseError(where + ": each check needs a string \"op\"");
    std::string op = c["op"].get<std::string>();
    if (kKnownOps.find(op) == kKnownOps.end())
        throw UnknownCheck(where + ": \"" + op + "\"");
    if (op == "cohomology") {
        require_keys(c, {"op", "sheaf"}, where);
        sheaf_ref(d, c, "sheaf", where);
    } else if (op == "deform_morphism") {
        require_keys(c, {"op", "morphism"}, where);
        if (!c.contains("morphism") || !c["morphism"].is_string()
            || d.morphisms.find(c["morphism"].get<std::string>()) == d.morphisms.end())
            throw ParseError(where + ": unknown morphism reference");
    } else if (op == "pair_EU" || op == "m_delta" || op == "smoothness") {
        require_keys(c, {"op", "system"}, where);
        if (!c.contains("system") || !c["system"].is_string()
            || d.system_specs.find(c["system"].get<std::string>()) == d.system_specs.end())
            throw ParseError(where + ": unknown system reference");
    } else if (op == "section_extension") {
        require_keys(c, {"op", "sheaf", "a01", "section"}, where);
        sheaf_ref(d, c, "sheaf", where);
        if (!c.contains("a01") || !c.contains("section"))
            throw ParseError(where + ": needs \"a01\" and \"section\"");
    } else if (op == "defk_tangent") {
        require_keys(c, {"op", "sheaf", "k", "probe"}, where);
        sheaf_ref(d, c, "sheaf", where);
        if (!c.contains("k") || !c["k"].is_number_integer() || c["k"].get<int>() < 1)
            throw ParseError(where + ": needs a positive integer \"k\"");
    }
}

ordered_json run_check(const ScenarioData& d, const ordered_json& c, const std::string& where,
                       bool& pass)
{
    std::string op = c["op"].get<std::string>();
    ordered_json out;
    out["op"] = op;
    if (op == "cohomology") {
        out["sheaf"] = c["sheaf"];
        SheafPresentation e = sheaf_ref(d, c, "sheaf", where);
        CechCohomology h = cech_cohomology(e);
        out["h0"] = h.h0;
        out["h1"] = h.h1;
        out["pass"] = true;
    } else if (op == "deform_morphism") {
        out["morphism"] = c["morphism"];
        MorphismReport r =
            deform_morphism_report(d.morphisms.at(c["morphism"].get<std::string>()), d.window);
        out["h_tot"] = r.h_tot;
        out["h_n"] = r.h_n;
        out["h_coker"] = r.h_coker;
        out["sequence"] = sequence_json(r.sequence);
        out["exact"] = r.exact;
        out["pass"] = r.pass();
    } else if (op == "pair_EU") {
        out["system"] = c["system"];
        CoherentSystem sys = build_system(d, d.system_specs.at(c["system"].get<std::string>()),
                                          "systems." + c["system"].get<std::string>());
        PairEUReport r = pair_EU_report(sys, d.window);
        out["k"] = r.k;
        out["h0_e"] = r.h0_e;
        out["h1_e"] = r.h1_e;
        out["h0_end"] = r.h0_end;
        out["h1_end"] = r.h1_end;
        out["h_tot"] = r.h_tot;
        out["tangent"] = r.tangent;
        out["alpha_matrix"] = matrix_json(r.alpha_matrix);
        out["sequence"] = sequence_json(r.sequence);
        out["exact"] = r.exact;
        out["pass"] = r.pass();
    } else if (op == "m_delta") {
        out["system"] = c["system"];
        CoherentSystem sys = build_system(d, d.system_specs.at(c["system"].get<std::string>()),
                                          "systems." + c["system"].get<std::string>());
        MDeltaReport r = m_delta_check(sys, d.window);
        out["h"] = r.h;
        out["expected"] = r.expected;
        out["pass"] = r.pass();
    } else if (op == "smoothness") {
        out["system"] = c["system"];
        CoherentSystem sys = build_system(d, d.system_specs.at(c["system"].get<std::string>()),
                                          "systems." + c["system"].get<std::string>());
        SmoothnessFlags r = smoothness_flags(sys, d.window);
        out["hom_u_h1_vanishes"] = r.hom_u_h1_vanishes;
        out["h2_tot_vanishes"] = r.h2_tot_vanishes;
        out["r_u"] = r.r_u;
        out["def_pair"] = r.def_pair;
        out["def_e"] = r.def_e;
        out["pass"] = true;
    } else if (op == "section_extension") {
        out["sheaf"] = c["sheaf"];
        SheafPresentation e = sheaf_ref(d, c, "sheaf", where);
        RingMatrix a01 = parse_ring_matrix(c["a01"], where + ".a01");
        std::vector<LaurentPoly> s0;
        if (!c["section"].is_array())
            throw ParseError(where + ".section: expected an array of Laurent components");
        for (size_t i = 0; i < c["section"].size(); ++i)
            s0.push_back(parse_laurent(c["section"][i], where + ".section"));
        GlobalSection s = section_from_s0(e, s0, where + ".section");
        SectionExtension r = section_extension(e, a01, s, d.window);
        out["lifts"] = r.lifts;
        if (r.lifts) {
            ordered_json sig0 = ordered_json::array(), sig1 = ordered_json::array();
            for (const auto& p : r.sigma0)
                sig0.push_back(laurent_json(p));
            for (const auto& p : r.sigma1)
                sig1.push_back(laurent_json(p));
            out["sigma0"] = std::move(sig0);
            out["sigma1"] = std::move(sig1);
        } else {
            out["obstruction_class"] = sparse_vector_json(r.obstruction_class);
        }
        out["verified"] = r.verified;
        out["pass"] = r.verified;
    } else if (op == "defk_tangent") {
        out["sheaf"] = c["sheaf"];
        SheafPresentation e = sheaf_ref(d, c, "sheaf", where);
        std::optional<RingMatrix> probe;
        if (c.contains("probe"))
            probe = parse_ring_matrix(c["probe"], where + ".probe");
        DefkResult r = defk_tangent(e, c["k"].get<int>(), probe, d.window);
        out["k"] = r.k;
        out["h0"] = r.h0;
        out["h1_end"] = r.h1_end;
        out["exact_case"] = r.exact_case;
        if (r.exact_case) {
            out["tangent_dim"] = r.tangent_dim;
            ordered_json basis = ordered_json::array();
            for (const auto& v : r.tangent_basis)
                basis.push_back(sparse_vector_json(v));
            out["tangent_basis"] = std::move(basis);
        }
        if (r.probe_given) {
            out["probe_kernel_dim"] = r.probe_kernel_dim;
            out["probe_in_cone"] = r.probe_in_cone;
        }
        out["span_dim"] = r.span_dim;
        out["pass"] = true;
    }
    if (!out["pass"].get<bool>())
        pass = false;
    return out;
}

std::string render_text(const ordered_json& doc)
{
    std::ostringstream os;
    os << "scenario: " << doc["scenario"].get<std::string>() << "\n";
    os << "window: " << doc["window"].get<int>() << "\n";
    for (const auto& c : doc["checks"]) {
        os << "check " << c["op"].get<std::string>();
        for (const char* ref : {"sheaf", "morphism", "system"})
            if (c.contains(ref))
                os << " " << c[ref].get<std::string>();
        os << ": " << (c["pass"].get<bool>() ? "pass" : "FAIL") << "\n";
        for (const auto& [key, value] : c.items()) {
            if (key == "op" || key == "pass" || key == "sheaf" || key == "morphism"
                || key == "system")
                continue;
            if (key == "sequence") {
                for (const auto& n : value)
                    os << "    " << n["name"].get<std::string>() << ": dim " << n["dim"].get<int>()
                       << ", rank in " << n["rank_in"].get<int>() << ", ker out "
                       << n["ker_out"].get<int>() << (n["exact"].get<bool>() ? "" : "  NOT EXACT")
                       << "\n";
                continue;
            }
            os << "  " << key << ": " << value.dump() << "\n";
        }
    }
    os << "overall: " << (doc["pass"].get<bool>() ? "pass" : "FAIL") << "\n";
    return os.str();
}

} // namespace

ScenarioReport run_scenario(const std::string& path, std::optional<int> window_override)
{
    ScenarioData d = parse_scenario(path, window_override);
    for (size_t i = 0; i < d.checks.size(); ++i)
        validate_check(d, d.checks[i], "checks[" + std::to_string(i) + "]");

    ordered_json doc;
    doc["schema"] = 1;
    doc["scenario"] = d.name;
    doc["window"] = d.window;
    bool pass = true;
    ordered_json checks = ordered_json::array();
    for (size_t i = 0; i < d.checks.size(); ++i)
        checks.push_back(run_check(d, d.checks[i], "checks[" + std::to_string(i) + "]", pass));
    doc["checks"] = std::move(checks);
    doc["pass"] = pass;

    ScenarioReport out;
    out.pass = pass;
    out.json = doc.dump(2) + "\n";
    out.text = render_text(doc);
    return out;
}

std::vector<std::string> validate_scenario(const std::string& path)
{
    std::vector<std::string> diags;
    try {
        ScenarioData d = parse_scenario(path, {});
        for (size_t i = 0; i < d.checks.size(); ++i) {
            try {
                validate_check(d, d.checks[i], "checks[" + std::to_string(i) + "]");
            } catch (const Error& e) {
                diags.push_back(e.what());
            }
        }
        // systems must build (gluing, independence, membership in H0)
        for (const auto& [name, spec] : d.system_specs) {
            try {
                build_system(d, spec, "systems." + name);
            } catch (const Error& e) {
                diags.push_back(e.what());
            }
        }
    } catch (const Error& e) {
        diags.push_back(e.what());
    }
    return diags;
}

} // namespace deform
