#include "ruled/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ruled/verify.hpp"

namespace ruled::cli {

namespace {

constexpr int kDeterminate = 0;
constexpr int kUndetermined = 1;
constexpr int kInputError = 2;

struct Globals {
    bool json = false;
    std::uint64_t seed = 1;
    std::optional<int> steps;
    std::uint64_t budget = 200000;
};

struct Output {
    std::ostream& out;
    const Globals& g;
    void emit(const json& j, const std::string& text) {
        if (g.json) out << j.dump(2) << "\n";
        else out << text << "\n";
    }
};

BundleModel load_model(const Curve& E, const std::string& spec, const std::vector<std::string>& elms, std::uint64_t seed) {
    BundleModel m = trivial_model(E);
    if (!spec.empty() && spec != "trivial") {
        std::string body = spec;
        if (spec.front() != '{') {
            std::ifstream in(spec);
            if (!in) throw Error(Errc::ParseError, "model: cannot read file '" + spec + "'");
            std::ostringstream ss;
            ss << in.rdbuf();
            body = ss.str();
        }
        json j;
        try {
            j = json::parse(body);
        } catch (const json::parse_error& e) {
            throw Error(Errc::ParseError, std::string("model: ") + e.what());
        }
        m = model_from_json(j);
        if (!(m.base() == E)) throw Error(Errc::BaseMismatch, "model is over " + m.base().str() + ", not " + E.str());
    }
    std::uint64_t k = 0;
    for (const std::string& s : elms) {
        ElmPoint p = parse_elm_center(E, s, "--elm");
        if (p.location != ElmLocation::ModelCoordinates)
            throw Error(Errc::ParseError, "--elm: model elms need loc=coords [u:v], got loc=" + to_string(p.location));
        m = elm_model(m, {p.z, p.coords->first, p.coords->second}, seed + k++);
    }
    return m;
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

int segre_cmd(Output& o, const std::string& curve, const std::string& desc, const std::string& model,
              const std::vector<std::string>& elms) {
    Curve E = parse_curve(curve);
    if (model.empty() && elms.empty()) {
        if (desc.empty()) throw Error(Errc::ParseError, "segre: give a descriptor or --model/--elm");
        SurfaceDescriptor d = parse_descriptor(&E, desc);
        o.emit({{"descriptor", to_json(d)}, {"segre", segre(d)}, {"minimal_sections", to_string(minimal_section_count(d))}},
               std::to_string(segre(d)));
        return kDeterminate;
    }
    BundleModel m = load_model(E, model, elms, o.g.seed);
    ModelDescription md = descriptor_of_model(m);
    json j{{"segre", md.data.segre},
           {"det_degree", det_degree(m)},
           {"rational", md.data.rational},
           {"minimal_sections", md.data.minimal_sections()},
           {"descriptor", md.descriptor ? to_json(*md.descriptor) : json(nullptr)}};
    if (!md.note.empty()) j["note"] = md.note;
    std::string text = std::to_string(md.data.segre) + "\ndescriptor: " + (md.descriptor ? md.descriptor->str() : "Undetermined") +
                       (md.note.empty() ? "" : " (" + md.note + ")");
    if (!desc.empty()) {
        SurfaceDescriptor d = parse_descriptor(&E, desc);
        bool agrees = md.descriptor && is_isomorphic(*md.descriptor, d);
        j["matches"] = agrees;
        text += "\nmatches " + d.str() + ": " + bool_text(agrees);
    }
    o.emit(j, text);
    return kDeterminate;
}

int selfint_cmd(Output& o, const std::string& curve, const std::string& section, const std::string& model,
                const std::vector<std::string>& elms) {
    Curve E = parse_curve(curve);
    BundleSection s = parse_section(E, section);
    BundleModel m = load_model(E, model, elms, o.g.seed);
    int sq = self_intersection(m, s);
    int degL = line_subbundle_degree(m, s);
    o.emit({{"self_intersection", sq}, {"det_degree", det_degree(m)}, {"deg_L", degL}},
           std::to_string(sq) + "\ndet=" + std::to_string(det_degree(m)) + " deg L=" + std::to_string(degL));
    return kDeterminate;
}

int elm_cmd(Output& o, const std::string& curve, const std::string& desc, const std::string& center,
            const std::string& model, const std::vector<std::string>& elms) {
    Curve E = parse_curve(curve);
    SurfaceDescriptor d = parse_descriptor(&E, desc);
    ElmPoint p = parse_elm_center(E, center);
    json j{{"before", to_json(d)}};
    std::string prefix;
    if (p.location == ElmLocation::ModelCoordinates) {
        if (model.empty() && elms.empty()) throw Error(Errc::ParseError, "center: loc=coords needs --model or --elm");
        BundleModel m = load_model(E, model, elms, o.g.seed);
        ModelDescription md = descriptor_of_model(m);
        if (!md.descriptor) {
            o.emit({{"kind", "Undetermined"}, {"reason", md.note}}, "Undetermined: " + md.note);
            return kUndetermined;
        }
        if (!is_isomorphic(*md.descriptor, d))
            throw Error(Errc::InconsistentCenter, "model realizes " + md.descriptor->str() + ", not " + d.str());
        d = *md.descriptor;
        p = locate_center(m, md, {p.z, p.coords->first, p.coords->second});
        j["location"] = to_string(p.location);
        prefix = "location: " + to_string(p.location) + "\n";
    }
    ElmResult r = elm_descriptor(d, p);
    j["result"] = to_json(r);
    o.emit(j, prefix + r.str());
    return r.kind == ElmResult::Kind::Known ? kDeterminate : kUndetermined;
}

int chain_cmd(Output& o, const std::string& curve, const std::string& desc) {
    Curve E = parse_curve(curve);
    SurfaceDescriptor d = parse_descriptor(&E, desc);
    ChainCertificate c = chain_theorem_A(E, d, o.g.steps.value_or(10), o.g.seed);
    std::string table = c.table();
    table.pop_back();
    o.emit(to_json(c), "start " + c.start.str() + ", segre " + std::to_string(segre(c.start)) + "\n" + table);
    return kDeterminate;
}

int iso_cmd(Output& o, const std::string& curve, const std::string& a, const std::string& b) {
    Curve E = parse_curve(curve);
    SurfaceDescriptor d1 = parse_descriptor(&E, a, "first descriptor"), d2 = parse_descriptor(&E, b, "second descriptor");
    bool r = is_isomorphic(d1, d2);
    o.emit({{"first", to_json(d1)}, {"second", to_json(d2)}, {"isomorphic", r}}, bool_text(r));
    return kDeterminate;
}

int conj_cmd(Output& o, const std::string& curve, const std::string& a, const std::string& b) {
    Curve E = parse_curve(curve);
    SurfaceDescriptor d1 = parse_descriptor(&E, a, "first descriptor"), d2 = parse_descriptor(&E, b, "second descriptor");
    ConjugacyAnswer r = is_conjugate_aut(d1, d2);
    std::string text = bool_text(r.conjugate);
    if (r.non_maximal) text += "\nnot both in a maximal class";
    o.emit({{"first", to_json(d1)}, {"second", to_json(d2)}, {"conjugate", r.conjugate}, {"non_maximal", r.non_maximal}}, text);
    return kDeterminate;
}

int aut_cmd(Output& o, const std::vector<std::string>& pos, bool delta, bool certificate) {
    if (pos.empty() || pos.size() > 2) throw Error(Errc::ParseError, "aut: expected [curve] descriptor");
    std::optional<Curve> E;
    if (pos.size() == 2) E = parse_curve(pos[0]);
    SurfaceDescriptor d = parse_descriptor(E ? &*E : nullptr, pos.back());
    AutDescription a = aut_of_bundle(d, delta, o.g.seed);
    json j = to_json(a);
    j["descriptor"] = to_json(d);
    std::string text = d.str() + ": " + a.str();
    if (certificate && a.maximal && d.is_elliptic()) {
        MaximalityCertificate c = maximality_certificate(d);
        j["certificate"] = {{"facts", c.facts}, {"lift_checked", c.lift_checked}, {"lift_ok", c.lift_ok}};
        text += "\ncertificate " + c.str();
    }
    if (delta && d.kind() == DescriptorKind::Atiyah1) {
        DeltaKernelReport r = delta_kernel_check(d.curve());
        j["delta"] = {{"ok", r.ok()}, {"centralizer_size", r.centralizer_size}};
        text += "\n" + r.str();
    }
    o.emit(j, text);
    return kDeterminate;
}

SurfaceClass parse_class(const std::vector<std::string>& pos) {
    if (pos.empty()) throw Error(Errc::ParseError, "classify: expected a surface tag");
    const std::string& t = pos[0];
    auto arity = [&](std::size_t n) {
        if (pos.size() != n + 1)
            throw Error(Errc::ParseError, "classify " + t + ": expected " + std::to_string(n) + " more argument(s)");
    };
    static const std::map<std::string, SurfaceTag> plain{
        {"rational-nonminimal", SurfaceTag::RationalNonMinimal}, {"abelian", SurfaceTag::Abelian},
        {"blown-up-abelian", SurfaceTag::BlownUpAbelian},        {"K3", SurfaceTag::K3},
        {"Enriques", SurfaceTag::Enriques},                      {"bielliptic", SurfaceTag::BiellipticWithP1Quotient},
        {"properly-elliptic", SurfaceTag::ProperlyEllipticOther}, {"general-type", SurfaceTag::GeneralType},
    };
    if (auto it = plain.find(t); it != plain.end()) {
        arity(0);
        return SurfaceClass::of(it->second);
    }
    if (t == "P2") {
        arity(0);
        return SurfaceClass::p2();
    }
    if (!t.empty() && t[0] == 'F') {
        arity(0);
        return SurfaceClass::hirzebruch_surface(parse_descriptor(nullptr, t, "surface tag").n());
    }
    if (t == "ruled-elliptic") {
        arity(2);
        Curve E = parse_curve(pos[1]);
        return SurfaceClass::ruled_elliptic(parse_descriptor(&E, pos[2]));
    }
    if (t == "ruled-higher-genus" || t == "quotient-properly-elliptic") {
        arity(1);
        bool first = t == "ruled-higher-genus" ? pos[1] == "trivial" : pos[1] == "in-E";
        const char* yes = t == "ruled-higher-genus" ? "trivial" : "in-E";
        const char* no = t == "ruled-higher-genus" ? "nontrivial" : "not-in-E";
        if (!first && pos[1] != no)
            throw Error(Errc::ParseError, "classify " + t + ": expected " + yes + " or " + no + ", got '" + pos[1] + "'");
        return t == "ruled-higher-genus" ? SurfaceClass::ruled_higher_genus(first) : SurfaceClass::quotient_properly_elliptic(first);
    }
    throw Error(Errc::ParseError,
                "classify: unknown tag '" + t +
                    "' (P2, F<n>, rational-nonminimal, ruled-elliptic, ruled-higher-genus, abelian, blown-up-abelian, K3, "
                    "Enriques, bielliptic, quotient-properly-elliptic, properly-elliptic, general-type)");
}

int classify_cmd(Output& o, const std::vector<std::string>& pos) {
    SurfaceClass c = parse_class(pos);
    AutDescription a = classify_theorem_D(c, o.g.seed);
    json j = to_json(a);
    j["class"] = c.str();
    o.emit(j, c.str() + ": " + a.str());
    return kDeterminate;
}

int atiyah_cmd(Output& o, const std::string& curve, int variant, const std::string& z1s, std::uint64_t p2_index,
               const std::string& z3s) {
    Curve E = parse_curve(curve);
    Point z1 = parse_point(E, z1s, "z1");
    if (variant != 0 && variant != 1) throw Error(Errc::ParseError, "variant: expected 0 or 1");
    AtiyahChoices ch{p2_index, std::nullopt, o.g.seed};
    if (!z3s.empty()) ch.z3 = parse_point(E, z3s, "--z3");
    AtiyahBuild b = build_atiyah(E, variant, z1, ch);
    ModelDescription md = descriptor_of_model(b.model);
    json centers = json::array();
    std::ostringstream text;
    text << b.descriptor.str() << "\ncenters:";
    for (const ElmCenter& c : b.centers) {
        centers.push_back({{"z", c.z.str()}, {"coords", {c.u0.value(), c.v0.value()}}});
        text << " z=" << c.z.str() << " [" << c.u0.str() << ":" << c.v0.str() << "]";
    }
    json j{{"descriptor", to_json(b.descriptor)}, {"centers", centers}, {"model", to_json(b.model)},
           {"segre", md.data.segre}, {"minimal_sections", md.data.minimal_sections()}};
    text << "\nsegre=" << md.data.segre << " minimal_sections=" << md.data.minimal_sections();
    try {
        int s = segre_search(b.model, 4, o.g.budget);
        j["search_segre"] = s;
        text << "\nsearch (degree 4): segre=" << s;
    } catch (const Error& e) {
        if (e.code() != Errc::FieldTooLarge) throw;
        j["search_segre"] = nullptr;
        text << "\nsearch skipped: " << e.what();
    }
    text << "\nmodel " << to_json(b.model).dump();
    o.emit(j, text.str());
    return kDeterminate;
}

int verify_cmd(Output& o, std::ostream& err, const std::string& which) {
    std::vector<std::string> names = which == "all" ? suite_names() : std::vector<std::string>{which};
    auto known = suite_names();
    for (auto& n : names)
        if (std::find(known.begin(), known.end(), n) == known.end()) {
            std::string list;
            for (auto& k : known) list += " " + k;
            throw Error(Errc::ParseError, "verify: unknown suite '" + n + "' (all" + list + ")");
        }
    VerifyOptions opt{o.g.seed, o.g.steps, o.g.budget};
    bool ok = true;
    json arr = json::array();
    std::ostringstream text;
    for (auto& n : names) {
        SuiteResult r = run_suite(n, opt);
        ok = ok && r.ok();
        arr.push_back({{"suite", r.name}, {"passed", r.passed}, {"total", r.total}, {"ok", r.ok()}, {"failures", r.failures}});
        text << (r.ok() ? "pass " : "FAIL ") << r.name << " " << r.passed << "/" << r.total;
        for (auto& f : r.failures) text << "\n  " << f;
        text << "\n";
        err << std::fixed << std::setprecision(3) << r.name << ": " << r.seconds << " s\n";
    }
    std::string t = text.str();
    t.pop_back();
    o.emit({{"suites", arr}, {"ok", ok}}, t);
    return ok ? kDeterminate : kUndetermined;
}

}  // namespace

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Globals g;
    CLI::App app{"Exact calculator for ruled surfaces over elliptic curves over F_p.", "ruled"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--json", g.json, "Structured output");
    app.add_option("--seed", g.seed, "Seed for every randomized choice");
    app.add_option("--steps", g.steps, "Chain length, or scenario count for verify crosscheck")->check(CLI::PositiveNumber);
    app.add_option("--budget", g.budget, "Section search budget");

    std::string curve, desc, desc2, center, section, model, z1, z3, suite;
    std::vector<std::string> elms, pos;
    int variant = 0;
    std::uint64_t p2_index = 0;
    bool delta = false, certificate = false;
    auto model_opts = [&](CLI::App* c) {
        c->add_option("--model", model, "Model as JSON text, a JSON file, or 'trivial'");
        c->add_option("--elm", elms, "Elm of the model at z=(x,y); loc=coords [u:v] (repeatable)");
    };

    auto* segre_c = app.add_subcommand("segre", "Segre invariant of a descriptor or a model");
    segre_c->add_option("curve", curve)->required();
    segre_c->add_option("descriptor", desc);
    model_opts(segre_c);
    auto* selfint_c = app.add_subcommand("selfint", "Self-intersection of a section [u : v]");
    selfint_c->add_option("curve", curve)->required();
    selfint_c->add_option("section", section)->required();
    model_opts(selfint_c);
    auto* elm_c = app.add_subcommand("elm", "Descriptor after an elementary transformation");
    elm_c->add_option("curve", curve)->required();
    elm_c->add_option("descriptor", desc)->required();
    elm_c->add_option("center", center)->required();
    model_opts(elm_c);
    auto* chain_c = app.add_subcommand("chain", "Non-stationary chain certificate from D(d; s), d >= 1");
    chain_c->add_option("curve", curve)->required();
    chain_c->add_option("descriptor", desc)->required();
    auto* iso_c = app.add_subcommand("iso", "Isomorphism of two surfaces");
    auto* conj_c = app.add_subcommand("conj", "Conjugacy of the automorphism groups of two surfaces");
    for (auto* c : {iso_c, conj_c}) {
        c->add_option("curve", curve)->required();
        c->add_option("first", desc)->required();
        c->add_option("second", desc2)->required();
    }
    auto* aut_c = app.add_subcommand("aut", "Automorphism group of a surface");
    aut_c->add_option("args", pos, "[curve] descriptor")->required();
    aut_c->add_flag("--delta", delta, "Check the two-torsion matrices for A1");
    aut_c->add_flag("--certificate", certificate, "Maximality certificate");
    auto* classify_c = app.add_subcommand("classify", "Automorphism verdict for a class of surfaces");
    classify_c->add_option("args", pos, "tag [arguments]")->required();
    auto* atiyah_c = app.add_subcommand("build-atiyah", "Build A0 (variant 0) or A1 (variant 1) by elms");
    atiyah_c->add_option("curve", curve)->required();
    atiyah_c->add_option("variant", variant)->required();
    atiyah_c->add_option("z1", z1)->required();
    atiyah_c->add_option("--p2-index", p2_index, "Choice of the second center");
    atiyah_c->add_option("--z3", z3, "Fiber of the third center");
    auto* verify_c = app.add_subcommand("verify", "Run verification suites");
    verify_c->add_option("suite", suite, "Suite name or all")->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kDeterminate : kInputError;
    }

    Output o{out, g};
    try {
        if (*segre_c) return segre_cmd(o, curve, desc, model, elms);
        if (*selfint_c) return selfint_cmd(o, curve, section, model, elms);
        if (*elm_c) return elm_cmd(o, curve, desc, center, model, elms);
        if (*chain_c) return chain_cmd(o, curve, desc);
        if (*iso_c) return iso_cmd(o, curve, desc, desc2);
        if (*conj_c) return conj_cmd(o, curve, desc, desc2);
        if (*aut_c) return aut_cmd(o, pos, delta, certificate);
        if (*classify_c) return classify_cmd(o, pos);
        if (*atiyah_c) return atiyah_cmd(o, curve, variant, z1, p2_index, z3);
        if (*verify_c) return verify_cmd(o, err, suite);
    } catch (const Error& e) {
        bool budget = e.code() == Errc::BudgetExceeded || e.code() == Errc::FieldTooLarge;
        err << "error: " << e.what() << "\n";
        return budget ? kUndetermined : kInputError;
    }
    return kInputError;
}

}  // namespace ruled::cli
