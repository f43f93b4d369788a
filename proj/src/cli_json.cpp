#include "ruled/cli.hpp"

namespace ruled::cli {

namespace {

std::string kind_name(DescriptorKind k) {
    switch (k) {
        case DescriptorKind::Trivial: return "Trivial";
        case DescriptorKind::Decomposable: return "Decomposable";
        case DescriptorKind::Atiyah0: return "Atiyah0";
        case DescriptorKind::Atiyah1: return "Atiyah1";
        case DescriptorKind::Hirzebruch: return "Hirzebruch";
        case DescriptorKind::GenusAtLeastTwoTrivial: return "GenusAtLeastTwoTrivial";
    }
    return "?";
}

[[noreturn]] void bad(const std::string& msg) { throw Error(Errc::ParseError, "json: " + msg); }

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::string text(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_string()) bad(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

int integer(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number_integer()) bad(std::string("field '") + key + "' must be an integer");
    return v.get<int>();
}

}  // namespace

json to_json(const Curve& E) { return E.str(); }

json to_json(const Point& P) { return P.str(); }

json to_json(const DivisorClass& c) { return {{"degree", c.degree}, {"sum", c.sum.str()}}; }

json to_json(const SurfaceDescriptor& d) {
    json j{{"kind", kind_name(d.kind())}, {"text", d.str()}};
    if (d.is_elliptic()) j["curve"] = d.curve().str();
    if (d.kind() == DescriptorKind::Decomposable) j["M"] = to_json(d.M());
    if (d.kind() == DescriptorKind::Hirzebruch) j["n"] = d.n();
    if (d.kind() == DescriptorKind::GenusAtLeastTwoTrivial) j["tag"] = d.tag();
    return j;
}

json to_json(const BundleModel& m) {
    json tr = json::array();
    for (const auto& [z, M] : m.transitions())
        tr.push_back({{"z", z.str()},
                      {"matrix", json::array({json::array({M.m00.str(), M.m01.str()}), json::array({M.m10.str(), M.m11.str()})})}});
    return {{"curve", m.base().str()}, {"det_degree", det_degree(m)}, {"transitions", tr}};
}

json to_json(const ChainCertificate& c) {
    json steps = json::array();
    for (const ChainStep& st : c.steps)
        steps.push_back({{"before", to_json(st.before)},
                         {"after", to_json(st.after)},
                         {"z", st.z.str()},
                         {"segre", st.segre},
                         {"L", to_json(st.L)},
                         {"h0_L", st.h0_L},
                         {"h0_L_minus_z", st.h0_L_minus_z},
                         {"gamma_exists", st.gamma_exists}});
    return {{"start", to_json(c.start)}, {"steps", steps}};
}

json to_json(const ElmResult& r) {
    static const char* kinds[] = {"Known", "PartiallyKnown", "Undetermined"};
    json j{{"kind", kinds[static_cast<int>(r.kind)]}, {"segre", r.segre}};
    j["descriptor"] = r.descriptor ? to_json(*r.descriptor) : json(nullptr);
    j["decomposable"] = r.decomposable ? json(*r.decomposable) : json(nullptr);
    if (!r.reason.empty()) j["reason"] = r.reason;
    return j;
}

json to_json(const AutDescription& a) {
    json j{{"dimension", a.dimension ? json(*a.dimension) : json(nullptr)},
           {"kernel", to_string(a.kernel)},
           {"quotient", to_string(a.quotient)},
           {"extension_shaped", a.extension_shaped},
           {"commutative", a.commutative ? json(*a.commutative) : json(nullptr)},
           {"splits", to_string(a.splits)},
           {"maximal", a.maximal},
           {"justification", a.justification}};
    j["chain_witness"] = a.chain_witness ? to_json(*a.chain_witness) : json(nullptr);
    return j;
}

Curve curve_from_json(const json& j) {
    if (!j.is_string()) bad("curve must be a string");
    return parse_curve(j.get<std::string>());
}

Point point_from_json(const Curve& E, const json& j) {
    if (!j.is_string()) bad("point must be a string");
    return parse_point(E, j.get<std::string>());
}

DivisorClass class_from_json(const Curve& E, const json& j) {
    return {integer(j, "degree"), point_from_json(E, field(j, "sum"))};
}

SurfaceDescriptor descriptor_from_json(const json& j) {
    std::string k = text(j, "kind");
    if (k == "Hirzebruch") return SurfaceDescriptor::hirzebruch(integer(j, "n"));
    if (k == "GenusAtLeastTwoTrivial") return SurfaceDescriptor::genus_at_least_two(text(j, "tag"));
    Curve E = curve_from_json(field(j, "curve"));
    if (k == "Trivial") return SurfaceDescriptor::trivial(E);
    if (k == "Atiyah0") return SurfaceDescriptor::atiyah0(E);
    if (k == "Atiyah1") return SurfaceDescriptor::atiyah1(E);
    if (k == "Decomposable") return SurfaceDescriptor::decomposable(E, class_from_json(E, field(j, "M")));
    bad("unknown descriptor kind '" + k + "'");
}

BundleModel model_from_json(const json& j) {
    Curve E = curve_from_json(field(j, "curve"));
    BundleModel m(E);
    const json& tr = field(j, "transitions");
    if (!tr.is_array()) bad("transitions must be an array");
    for (const json& t : tr) {
        Point z = point_from_json(E, field(t, "z"));
        const json& M = field(t, "matrix");
        if (!M.is_array() || M.size() != 2 || !M[0].is_array() || !M[1].is_array() || M[0].size() != 2 ||
            M[1].size() != 2)
            bad("matrix must be 2x2");
        auto entry = [&](int r, int c) {
            if (!M[r][c].is_string()) bad("matrix entries must be strings");
            return parse_curve_function(E, M[r][c].get<std::string>(), "matrix entry");
        };
        Mat2 A{entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1)};
        if (A.det().is_zero()) bad("singular transition at " + z.str());
        m = m.with_transition(z, A);
    }
    return m;
}

ChainCertificate certificate_from_json(const json& j) {
    ChainCertificate c{descriptor_from_json(field(j, "start")), {}};
    const Curve& E = c.start.curve();
    const json& steps = field(j, "steps");
    if (!steps.is_array()) bad("steps must be an array");
    for (const json& s : steps) {
        const json& g = field(s, "gamma_exists");
        if (!g.is_boolean()) bad("gamma_exists must be a boolean");
        c.steps.push_back({descriptor_from_json(field(s, "before")), descriptor_from_json(field(s, "after")),
                           point_from_json(E, field(s, "z")), integer(s, "segre"), class_from_json(E, field(s, "L")),
                           integer(s, "h0_L"), integer(s, "h0_L_minus_z"), g.get<bool>()});
    }
    return c;
}

}  // namespace ruled::cli
