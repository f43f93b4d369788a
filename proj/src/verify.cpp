#include "ruled/verify.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <set>

#include "ruled/aut_atlas.hpp"
#include "ruled/sampling.hpp"

namespace ruled {

namespace {

using namespace sampling;

const Curve& e11() {
    static const Curve E(11, -1, 0);
    return E;
}

class Tally {
public:
    explicit Tally(SuiteResult& r) : r_(r) {}
    void operator()(bool ok, const std::string& what) {
        ++r_.total;
        if (ok) ++r_.passed;
        else if (r_.failures.size() < 20) r_.failures.push_back(what);
    }

private:
    SuiteResult& r_;
};

DivisorClass random_class(std::mt19937_64& rng, const Curve& E, int lo, int hi) {
    return {lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)), pick(rng, rational_points(E))};
}

void riemann_roch(const VerifyOptions& o, Tally& t) {
    const Curve& E = e11();
    std::mt19937_64 rng(o.seed);
    for (int i = 0; i < 100; ++i) {
        DivisorClass c = random_class(rng, E, -5, 6);
        t(h0(E, c) - h0(E, class_neg(E, c)) == c.degree, "h0(c) - h0(-c) = deg c for " + c.str());
        if (c.degree >= -1 && c.degree <= 6)
            t(static_cast<int>(riemann_roch_space(E, representative(c)).size()) == h0(E, c), "basis size for " + c.str());
    }
    for (const Point& s : rational_points(E)) t(h0(E, {2, s}) == 2, "h0((2, s)) = 2 for s = " + s.str());
}

void divisor_roundtrip(const VerifyOptions& o, Tally& t) {
    const Curve& E = e11();
    std::mt19937_64 rng(o.seed);
    for (int i = 0; i < 100; ++i) {
        Divisor D = random_principal(rng, E);
        t(divisor_of(E, function_with_divisor(E, D)) == D, "round trip of " + D.str());
    }
}

void selfint(const VerifyOptions& o, Tally& t) {
    const Curve& E = e11();
    BundleModel T = trivial_model(E);
    CurveFunction one = CurveFunction::constant(E, 1);
    t(self_intersection(T, {CurveFunction::constant(E, 3), one}) == 0, "constant section has square 0");
    t(self_intersection(T, {CurveFunction::x(E), one}) == 4, "section x has square 4");
    t(self_intersection(T, {CurveFunction::y(E), one}) == 6, "section y has square 6");
    std::mt19937_64 rng(o.seed);
    for (int i = 0; i < 100; ++i) {
        BundleModel m = random_model(rng, E, 3);
        BundleSection s = random_section(rng, E);
        t(self_intersection(m, s) == det_degree(m) - 2 * line_subbundle_degree(m, s), "square = det - 2 deg L");
    }
}

void segre_table(const VerifyOptions& o, Tally& t) {
    const Curve& E = e11();
    Point z1 = make_point(E, 8, 3), z2 = make_point(E, 4, 4);
    auto check = [&](const BundleModel& m, const SurfaceDescriptor& d, int expected) {
        ModelDescription md = descriptor_of_model(m);
        t(segre(d) == expected, "segre(" + d.str() + ") = " + std::to_string(expected));
        t(md.data.segre == expected, "model segre for " + d.str());
        t(md.descriptor && *md.descriptor == d, "model descriptor for " + d.str());
    };
    BundleModel T = trivial_model(E);
    check(T, SurfaceDescriptor::trivial(E), 0);
    BundleModel D1 = elm_model(T, {z1, E.fp(1), E.fp(0)}, o.seed);
    check(D1, SurfaceDescriptor::decomposable(E, {1, z1}), -1);
    BundleModel D0 = elm_model(D1, {z2, E.fp(0), E.fp(1)}, o.seed);
    check(D0, SurfaceDescriptor::decomposable(E, {0, sub_points(E, z1, z2)}), 0);
    check(build_atiyah(E, 0, z1, {0, std::nullopt, o.seed}).model, SurfaceDescriptor::atiyah0(E), 0);
    check(build_atiyah(E, 1, z1, {0, std::nullopt, o.seed}).model, SurfaceDescriptor::atiyah1(E), 1);
}

void chain(const VerifyOptions& o, Tally& t) {
    const Curve& E = e11();
    int n = o.steps.value_or(10);
    Point z0 = chain_centers(E, 1, o.seed).front();
    auto start = std::chrono::steady_clock::now();
    ChainCertificate c = chain_theorem_A(E, SurfaceDescriptor::decomposable(E, {1, z0}), n, o.seed);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    t(static_cast<int>(c.steps.size()) == n, "chain length");
    int prev = segre(c.start);
    for (const ChainStep& st : c.steps) {
        t(st.segre == prev - 1, "segre drops by one at " + st.z.str());
        prev = st.segre;
        if (st.L.degree >= 2)
            t(st.gamma_exists && st.h0_L - st.h0_L_minus_z == 1, "gamma exists for L = " + st.L.str());
    }
    if (n <= 10) t(secs < 1.0, "10-step chain under one second");
}

void atiyah(const VerifyOptions& o, Tally& t) {
    const Curve& E = e11();
    for (const Point& z1 : rational_points(E)) {
        if (z1.is_infinity()) continue;
        SegreData d0 = segre_linear(build_atiyah(E, 0, z1, {0, std::nullopt, o.seed}).model);
        t(d0.segre == 0 && d0.minimal_sections() == 1, "variant 0 at " + z1.str());
        SegreData d1 = segre_linear(build_atiyah(E, 1, z1, {0, std::nullopt, o.seed}).model);
        t(d1.segre == 1, "variant 1 at " + z1.str());
    }
    const Curve E5(5, -1, 0);
    for (int variant : {0, 1}) {
        try {
            int s = segre_search(build_atiyah(E5, variant, make_point(E5, 0, 0)).model, 4, o.budget);
            t(s == variant, "searched segre of variant " + std::to_string(variant));
        } catch (const Error& e) {
            t(false, std::string("search: ") + e.what());
        }
    }
}

void crosscheck(const VerifyOptions& o, Tally& t) {
    CrosscheckReport r = crosscheck_suite(e11(), o.seed, o.steps.value_or(200), 3);
    t(r.scenarios == o.steps.value_or(200), "scenario count");
    t(r.known > 0, "some Known branches");
    for (const std::string& d : r.disagreements) t(false, d);
    t(r.ok(), "no disagreements");
}

bool brute_force_pair_iso(const Curve& E, const Point& z1, const Point& z2, const Point& w1, const Point& w2) {
    std::set<Point> target{w1, w2};
    for (const auto& alpha : curve_automorphisms(E))
        for (const Point& tr : rational_points(E)) {
            auto f = [&](const Point& P) { return add_points(E, alpha.apply(E, P), tr); };
            if (std::set<Point>{f(z1), f(z2)} == target) return true;
        }
    return false;
}

void iso(const VerifyOptions& o, Tally& t) {
    std::mt19937_64 rng(o.seed);
    for (const Curve& E : {e11(), Curve(13, -1, 0)}) {
        auto pts = rational_points(E);
        for (int i = 0; i < 50; ++i) {
            Point z1 = pick(rng, pts), z2 = pick(rng, pts), w1 = pick(rng, pts), w2 = pick(rng, pts);
            if (i % 3 == 0) {
                Point s = pick(rng, pts);
                w1 = add_points(E, z1, s);
                w2 = add_points(E, z2, s);
            }
            bool fast = is_isomorphic(SurfaceDescriptor::decomposable(E, {0, sub_points(E, z2, z1)}),
                                      SurfaceDescriptor::decomposable(E, {0, sub_points(E, w2, w1)}));
            t(fast == brute_force_pair_iso(E, z1, z2, w1, w2), "pair " + z1.str() + z2.str() + " vs " + w1.str() + w2.str());
        }
    }
}

void delta_kernel(const VerifyOptions&, Tally& t) {
    for (const Curve& E : {e11(), Curve(13, -1, 0)}) {
        DeltaKernelReport r = delta_kernel_check(E);
        t(r.closed && r.involutions && r.noncyclic, "Klein four-group over " + E.str());
        t(r.normalizes, "normalizes the action over " + E.str());
        t(r.centralizer_is_the_four, "centralizer over " + E.str());
    }
}

void classify(const VerifyOptions& o, Tally& t) {
    const Curve& E = e11();
    const std::vector<std::pair<SurfaceClass, bool>> corpus{
        {SurfaceClass::p2(), true},
        {SurfaceClass::hirzebruch_surface(0), true},
        {SurfaceClass::hirzebruch_surface(1), false},
        {SurfaceClass::hirzebruch_surface(2), true},
        {SurfaceClass::of(SurfaceTag::RationalNonMinimal), false},
        {SurfaceClass::ruled_elliptic(SurfaceDescriptor::trivial(E)), true},
        {SurfaceClass::ruled_elliptic(SurfaceDescriptor::atiyah0(E)), true},
        {SurfaceClass::ruled_elliptic(SurfaceDescriptor::decomposable(E, {2, Point::infinity()})), false},
        {SurfaceClass::ruled_higher_genus(true), true},
        {SurfaceClass::ruled_higher_genus(false), false},
        {SurfaceClass::of(SurfaceTag::Abelian), true},
        {SurfaceClass::of(SurfaceTag::BlownUpAbelian), false},
        {SurfaceClass::of(SurfaceTag::K3), true},
        {SurfaceClass::of(SurfaceTag::Enriques), true},
        {SurfaceClass::of(SurfaceTag::BiellipticWithP1Quotient), true},
        {SurfaceClass::quotient_properly_elliptic(true), true},
        {SurfaceClass::quotient_properly_elliptic(false), false},
        {SurfaceClass::of(SurfaceTag::ProperlyEllipticOther), true},
        {SurfaceClass::of(SurfaceTag::GeneralType), true},
    };
    for (const auto& [c, maximal] : corpus) {
        AutDescription a = classify_theorem_D(c, o.seed);
        t(a.maximal == maximal, "maximal verdict for " + c.str());
        t(a.dimension_consistent(), "dimension for " + c.str());
    }
}

void properties(const VerifyOptions& o, Tally& t) {
    const Curve& E = e11();
    std::mt19937_64 rng(o.seed);
    for (int i = 0; i < 50; ++i) {
        BundleModel m = random_model(rng, E, 3);
        if (!m.is_special(Point::infinity())) m = m.with_transition(Point::infinity(), Mat2::identity(E));
        GaugeTransformation g = random_gauge(rng, m);
        BundleModel gm = apply_gauge(m, g);
        BundleSection a = random_section(rng, E), b = random_section(rng, E);
        bool same = self_intersection(gm, transport(g, a)) == self_intersection(m, a);
        if (!a.same_as(b)) same = same && intersection_number(gm, transport(g, a), transport(g, b)) == intersection_number(m, a, b);
        t(same, "gauge invariance");
    }
    const ElmLocation locs[] = {ElmLocation::OnMinimalSection, ElmLocation::OnComplementarySection,
                                ElmLocation::AtSpecialPoint, ElmLocation::GenericOffNamedSections};
    std::vector<SurfaceDescriptor> descs{SurfaceDescriptor::trivial(E), SurfaceDescriptor::atiyah0(E), SurfaceDescriptor::atiyah1(E)};
    for (const Point& s : rational_points(E))
        for (int d = 0; d <= 3; ++d)
            if (d > 0 || !s.is_infinity()) descs.push_back(SurfaceDescriptor::decomposable(E, {d, s}));
    for (const auto& d : descs)
        for (const Point& z : rational_points(E))
            for (ElmLocation loc : locs) {
                ElmResult r;
                try {
                    r = elm_descriptor(d, {z, loc, std::nullopt});
                } catch (const Error& e) {
                    if (e.code() != Errc::InconsistentCenter) t(false, e.what());
                    continue;
                }
                if (r.kind != ElmResult::Kind::Undetermined)
                    t(std::abs(r.segre - segre(d)) == 1, "segre step for " + d.str() + " at " + z.str());
            }
    int checked = 0;
    for (int i = 0; i < 60 && checked < 25; ++i) {
        BundleModel m = random_model(rng, E, 2);
        ModelDescription desc = descriptor_of_model(m);
        if (!desc.descriptor) continue;
        ElmCenter c = random_center(rng, E);
        ElmOutcome out = elm_model_ex(m, c, rng());
        ModelDescription desc2 = descriptor_of_model(out.model);
        ElmResult there = elm_descriptor(*desc.descriptor, locate_center(m, desc, c));
        if (there.kind != ElmResult::Kind::Known) continue;
        ElmResult back = elm_descriptor(*there.descriptor, locate_center(out.model, desc2, out.inverse_base));
        if (back.kind != ElmResult::Kind::Known) continue;
        t(*back.descriptor == *desc.descriptor, "elm round trip from " + desc.descriptor->str());
        ++checked;
    }
    for (int i = 0; i < 100; ++i) {
        DivisorClass c = random_class(rng, E, -4, 4);
        DivisorClass k = canonicalize(E, c);
        t(canonicalize(E, k) == k && canonicalize(E, class_neg(E, c)) == k, "canonicalize " + c.str());
    }
}

const std::map<std::string, std::function<void(const VerifyOptions&, Tally&)>>& registry() {
    static const std::map<std::string, std::function<void(const VerifyOptions&, Tally&)>> r{
        {"riemann-roch", riemann_roch}, {"divisor-roundtrip", divisor_roundtrip},
        {"selfint", selfint},           {"segre-table", segre_table},
        {"chain", chain},               {"atiyah", atiyah},
        {"crosscheck", crosscheck},     {"iso", iso},
        {"delta-kernel", delta_kernel}, {"classify", classify},
        {"properties", properties},
    };
    return r;
}

}  // namespace

std::vector<std::string> suite_names() {
    std::vector<std::string> out;
    for (auto& [k, v] : registry()) out.push_back(k);
    return out;
}

SuiteResult run_suite(const std::string& name, const VerifyOptions& opt) {
    auto it = registry().find(name);
    if (it == registry().end()) throw Error(Errc::ParseError, "unknown suite '" + name + "'");
    SuiteResult r;
    r.name = name;
    Tally t(r);
    auto start = std::chrono::steady_clock::now();
    try {
        it->second(opt, t);
    } catch (const Error& e) {
        t(false, std::string("error: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace ruled
