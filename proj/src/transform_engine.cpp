#include "ruled/transform_engine.hpp"

#include <random>
#include <sstream>

namespace ruled {

std::string to_string(ElmLocation loc) {
    switch (loc) {
        case ElmLocation::OnMinimalSection: return "min";
        case ElmLocation::OnComplementarySection: return "comp";
        case ElmLocation::AtSpecialPoint: return "q";
        case ElmLocation::GenericOffNamedSections: return "generic";
        case ElmLocation::ModelCoordinates: return "coords";
    }
    return "?";
}

ElmResult ElmResult::known(const SurfaceDescriptor& d) {
    ElmResult r;
    r.kind = Kind::Known;
    r.descriptor = d;
    r.segre = ruled::segre(d);
    r.decomposable = d.kind() == DescriptorKind::Decomposable || d.kind() == DescriptorKind::Trivial;
    return r;
}

ElmResult ElmResult::partial(int s, std::optional<bool> decomposable, const std::string& reason) {
    ElmResult r;
    r.kind = Kind::PartiallyKnown;
    r.segre = s;
    r.decomposable = decomposable;
    r.reason = reason;
    return r;
}

ElmResult ElmResult::undetermined(const std::string& reason) {
    ElmResult r;
    r.reason = reason;
    return r;
}

std::string ElmResult::str() const {
    switch (kind) {
        case Kind::Known: return descriptor->str();
        case Kind::PartiallyKnown: {
            std::string dec = decomposable ? (*decomposable ? "true" : "false") : "unknown";
            return "PartiallyKnown(segre=" + std::to_string(segre) + ", decomposable=" + dec + "): " + reason;
        }
        case Kind::Undetermined: return "Undetermined: " + reason;
    }
    return "?";
}

ElmResult elm_descriptor(const SurfaceDescriptor& d, const ElmPoint& p) {
    using L = ElmLocation;
    auto inconsistent = [&](const std::string& why) {
        return Error(Errc::InconsistentCenter, "center " + to_string(p.location) + " over " + p.z.str() + " on " + d.str() + ": " + why);
    };
    if (p.location == L::ModelCoordinates) throw inconsistent("coordinates must be resolved against a model first");
    if (!d.is_elliptic()) return ElmResult::undetermined("no elm rules for descriptors over a non-elliptic base");
    const Curve& E = d.curve();
    if (!on_curve(E, p.z)) throw Error(Errc::PointNotOnCurve, p.z.str() + " is not on " + E.str());
    if (p.location == L::AtSpecialPoint &&
        !(d.kind() == DescriptorKind::Decomposable && d.M().degree == 1 && d.M().sum == p.z))
        throw inconsistent("the special point exists only on D(1; s) over s");

    switch (d.kind()) {
        case DescriptorKind::Trivial:
            return ElmResult::known(SurfaceDescriptor::decomposable(E, point_class(p.z)));
        case DescriptorKind::Atiyah0:
            if (p.location == L::OnComplementarySection) throw inconsistent("A0 has no complementary section");
            if (p.location == L::OnMinimalSection)
                return ElmResult::partial(-1, true, "elm on the 0-section of A0 is decomposable with segre -1, class not determined");
            return ElmResult::known(SurfaceDescriptor::atiyah1(E));
        case DescriptorKind::Atiyah1:
            return ElmResult::undetermined("rule gap: no elm rule is recorded for A1");
        case DescriptorKind::Decomposable: break;
        default: return ElmResult::undetermined("no elm rules for Hirzebruch descriptors");
    }

    const DivisorClass& M = d.M();
    const Point& s = M.sum;
    if (p.location == L::OnMinimalSection)
        return ElmResult::known(SurfaceDescriptor::decomposable(E, class_add(E, M, point_class(p.z))));
    if (M.degree == 0) {
        if (p.location == L::OnComplementarySection)
            return ElmResult::known(SurfaceDescriptor::decomposable(E, class_sub(E, M, point_class(p.z))));
        return ElmResult::undetermined("rule gap: degree 0 rules cover only centers on the two 0-sections");
    }
    if (M.degree >= 2) return ElmResult::undetermined("rule gap: off the minimal section the rules cover only d <= 1");
    if (p.z == s) {
        // every section of self-intersection 1 passes through q over s
        if (p.location == L::AtSpecialPoint || p.location == L::OnComplementarySection)
            return ElmResult::known(SurfaceDescriptor::trivial(E));
        return ElmResult::known(SurfaceDescriptor::atiyah0(E));
    }
    return ElmResult::known(SurfaceDescriptor::decomposable(E, {0, sub_points(E, s, p.z)}));
}

namespace {

std::pair<Fp, Fp> normalized(const Fp& u, const Fp& v) {
    if (!u.is_zero()) return {u / u, v / u};
    return {u, v / v};
}

/// A section of self-intersection +d on D(d; s), d >= 1.
std::optional<BundleSection> complementary_section(const BundleModel& m, const ModelDescription& desc) {
    const Curve& E = m.base();
    const MaximalSubbundle& mx = desc.data.maximal.front();
    const BundleSection& smin = mx.basis.front();
    auto basis = twisted_sections(m, class_sub(E, desc.data.det, mx.N));
    std::vector<BundleSection> cand = basis;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) cand.push_back({basis[i].u + basis[j].u, basis[i].v + basis[j].v});
    for (auto& c : cand)
        if (!c.same_as(smin)) return c;
    return std::nullopt;
}

}  // namespace

std::pair<Fp, Fp> common_point_of_unit_sections(const BundleModel& m, const ModelDescription& desc) {
    if (!desc.descriptor || desc.descriptor->kind() != DescriptorKind::Decomposable || desc.descriptor->M().degree != 1)
        throw Error(Errc::InconsistentCenter, "common point of unit sections needs D(1; s)");
    auto c = complementary_section(m, desc);
    if (!c) throw Error(Errc::InconsistentCenter, "no section of self-intersection 1 found");
    return fiber_point(m, *c, desc.descriptor->M().sum);
}

ElmPoint locate_center(const BundleModel& m, const ModelDescription& desc, const ElmCenter& c) {
    using L = ElmLocation;
    const Curve& E = m.base();
    ElmPoint out{c.z, L::GenericOffNamedSections, std::nullopt};
    if (!desc.descriptor) return out;
    const SurfaceDescriptor& d = *desc.descriptor;
    auto at = normalized(c.u0, c.v0);
    auto on = [&](const BundleSection& s) { return fiber_point(m, s, c.z) == at; };
    switch (d.kind()) {
        case DescriptorKind::Trivial: out.location = L::OnMinimalSection; break;
        case DescriptorKind::Atiyah0:
            if (on(desc.data.maximal.front().basis.front())) out.location = L::OnMinimalSection;
            break;
        case DescriptorKind::Decomposable: {
            const DivisorClass& M = d.M();
            if (M.degree == 0) {
                for (const auto& mx : desc.data.maximal) {
                    if (!on(mx.basis.front())) continue;
                    bool m_side = class_sub(E, class_scale(E, 2, mx.N), desc.data.det) == M;
                    out.location = m_side ? L::OnMinimalSection : L::OnComplementarySection;
                }
                break;
            }
            if (on(desc.data.maximal.front().basis.front()))
                out.location = L::OnMinimalSection;
            else if (M.degree == 1 && c.z == M.sum)
                out.location = common_point_of_unit_sections(m, desc) == at ? L::AtSpecialPoint : L::GenericOffNamedSections;
            else
                // off the special fiber every other point lies on a section of self-intersection d
                out.location = L::OnComplementarySection;
            break;
        }
        default: break;
    }
    return out;
}

// ---- chains

std::vector<Point> chain_centers(const Curve& E, int n, std::uint64_t seed) {
    auto pts = rational_points(E);
    Point g = pts.front();
    std::size_t best = 0;
    for (const Point& P : pts) {
        std::size_t order = 1;
        for (Point Q = P; !Q.is_infinity(); Q = add_points(E, Q, P)) ++order;
        if (order > best) { best = order; g = P; }
    }
    std::vector<Point> out;
    Point z = pts[seed % pts.size()];
    for (int k = 0; k < n; ++k) {
        out.push_back(z);
        z = add_points(E, z, g);
    }
    return out;
}

ChainCertificate chain_theorem_A(const Curve& E, const SurfaceDescriptor& start, const std::vector<Point>& centers) {
    if (start.kind() != DescriptorKind::Decomposable || start.M().degree < 1)
        throw Error(Errc::InconsistentCenter, "chains start from D(d; s) with d >= 1, got " + start.str());
    if (!(start.curve() == E)) throw Error(Errc::BaseMismatch, "start descriptor lives over " + start.curve().str());
    if (centers.empty()) throw Error(Errc::BudgetExceeded, "a chain needs at least one step");
    ChainCertificate cert{start, {}};
    SurfaceDescriptor cur = start;
    for (const Point& z : centers) {
        ElmResult r = elm_descriptor(cur, {z, ElmLocation::OnMinimalSection, std::nullopt});
        ChainStep st{cur, *r.descriptor, z, 0, {}, 0, 0, false};
        st.segre = segre(st.after);
        if (st.segre != segre(cur) - 1) throw Error(Errc::InconsistentCenter, "segre did not drop at " + z.str());
        // det V = M and L(minimal section) = M, so det^-1 (x) L^2 = M
        st.L = st.after.M();
        st.h0_L = static_cast<int>(riemann_roch_space(E, representative(st.L)).size());
        st.h0_L_minus_z = static_cast<int>(riemann_roch_space(E, representative(class_sub(E, st.L, point_class(z)))).size());
        st.gamma_exists = st.h0_L > st.h0_L_minus_z;
        cert.steps.push_back(st);
        cur = st.after;
    }
    return cert;
}

ChainCertificate chain_theorem_A(const Curve& E, const SurfaceDescriptor& start, int n, std::uint64_t seed) {
    return chain_theorem_A(E, start, chain_centers(E, n, seed));
}

std::string ChainCertificate::table() const {
    std::ostringstream os;
    os << "step, segre, L=(d,s), h0(L), h0(L-z), gamma_exists\n";
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const ChainStep& st = steps[i];
        os << (i + 1) << ", " << st.segre << ", L=(" << st.L.degree << "," << st.L.sum.str() << "), " << st.h0_L << ", "
           << st.h0_L_minus_z << ", " << (st.gamma_exists ? "true" : "false") << "\n";
    }
    return os.str();
}

// ---- Atiyah constructions

AtiyahBuild build_atiyah(const Curve& E, int variant, const Point& z1, const AtiyahChoices& choices) {
    if (variant != 0 && variant != 1) throw Error(Errc::ParseError, "Atiyah variant must be 0 or 1");
    if (!on_curve(E, z1)) throw Error(Errc::PointNotOnCurve, z1.str() + " is not on " + E.str());
    BundleModel m = trivial_model(E);
    ElmCenter p1{z1, E.fp(1), E.fp(0)};
    ElmOutcome first = elm_model_ex(m, p1, choices.seed);
    auto q1 = normalized(first.inverse_base.u0, first.inverse_base.v0);
    auto minus_one = fiber_point(first.model, BundleSection::infinite(E), z1);
    std::vector<std::pair<Fp, Fp>> fiber{{E.fp(0), E.fp(1)}};
    for (std::uint64_t t = 0; t < E.p(); ++t) fiber.push_back({E.fp(1), Fp::from_residue(t, E.p())});
    std::vector<std::pair<Fp, Fp>> allowed;
    for (auto& f : fiber)
        if (f != q1 && f != minus_one) allowed.push_back(f);
    auto p2c = allowed[choices.p2_index % allowed.size()];
    ElmCenter p2{z1, p2c.first, p2c.second};
    AtiyahBuild out{elm_model(first.model, p2, choices.seed + 1), SurfaceDescriptor::atiyah0(E), {p1, p2}};
    if (variant == 0) return out;

    Point z3 = z1;
    if (choices.z3) {
        z3 = *choices.z3;
        if (!on_curve(E, z3)) throw Error(Errc::PointNotOnCurve, z3.str() + " is not on " + E.str());
    } else {
        for (const Point& P : rational_points(E))
            if (P != z1) { z3 = P; break; }
    }
    // the 0-section is the strict transform of the (-1)-section, still [1:0] in chart 0
    auto on_sigma0 = fiber_point(out.model, BundleSection::infinite(E), z3);
    std::pair<Fp, Fp> p3c = fiber.front();
    for (auto& f : fiber)
        if (f != on_sigma0) { p3c = f; break; }
    ElmCenter p3{z3, p3c.first, p3c.second};
    out.model = elm_model(out.model, p3, choices.seed + 2);
    out.descriptor = SurfaceDescriptor::atiyah1(E);
    out.centers.push_back(p3);
    return out;
}

// ---- cross-check

void CrosscheckReport::merge(const CrosscheckReport& o) {
    scenarios += o.scenarios;
    steps += o.steps;
    known += o.known;
    partial += o.partial;
    undetermined += o.undetermined;
    skipped += o.skipped;
    agreed += o.agreed;
    disagreements.insert(disagreements.end(), o.disagreements.begin(), o.disagreements.end());
    for (auto& [k, v] : o.branches) branches[k] += v;
}

std::string CrosscheckReport::str() const {
    std::ostringstream os;
    os << "scenarios=" << scenarios << " steps=" << steps << " known=" << known << " partial=" << partial
       << " undetermined=" << undetermined << " skipped=" << skipped << " agreed=" << agreed
       << " disagreements=" << disagreements.size() << "\n  branches:";
    for (auto& [k, v] : branches) os << " " << k << "=" << v;
    for (auto& d : disagreements) os << "\n  " << d;
    return os.str();
}

namespace {

std::string branch_name(const SurfaceDescriptor& d, const ElmPoint& p) {
    std::string shape = d.str();
    if (d.kind() == DescriptorKind::Decomposable) {
        int deg = d.M().degree;
        shape = deg >= 2 ? "D2+" : "D" + std::to_string(deg);
        if (deg == 1 && p.z == d.M().sum) shape += "@s";
    }
    return shape + ":" + to_string(p.location);
}

}  // namespace

CrosscheckReport crosscheck_elm(const Curve& E, std::uint64_t seed, int depth) {
    CrosscheckReport rep;
    rep.scenarios = 1;
    std::mt19937_64 rng(seed);
    auto pts = rational_points(E);
    auto random_fiber_point = [&]() -> std::pair<Fp, Fp> {
        std::uint64_t r = rng() % (E.p() + 1);
        if (r == E.p()) return {E.fp(1), E.fp(0)};
        return {Fp::from_residue(r, E.p()), E.fp(1)};
    };
    BundleModel m = trivial_model(E);
    ModelDescription desc = descriptor_of_model(m);
    std::optional<ElmCenter> q;
    std::string trail;
    for (int step = 0; step < depth; ++step) {
        if (!desc.descriptor) break;
        const SurfaceDescriptor& d = *desc.descriptor;
        ElmCenter c{pts[rng() % pts.size()], E.fp(1), E.fp(0)};
        auto rc = random_fiber_point();
        c.u0 = rc.first;
        c.v0 = rc.second;
        switch (rng() % 4) {
            case 0: break;
            case 1: {
                if (desc.data.maximal.empty()) break;
                const auto& mx = desc.data.maximal[rng() % desc.data.maximal.size()];
                BundleSection sct = mx.basis[rng() % mx.basis.size()];
                auto f = fiber_point(m, sct, c.z);
                c.u0 = f.first;
                c.v0 = f.second;
                break;
            }
            case 2:
                if (q) c = *q;
                break;
            default:
                if (d.kind() == DescriptorKind::Decomposable && d.M().degree == 1) {
                    c.z = d.M().sum;
                    if (rng() % 2) {
                        auto f = common_point_of_unit_sections(m, desc);
                        c.u0 = f.first;
                        c.v0 = f.second;
                    }
                }
        }
        ElmPoint tag = locate_center(m, desc, c);
        ElmOutcome next = elm_model_ex(m, c, rng());
        ModelDescription after = descriptor_of_model(next.model);
        ElmResult rule = elm_descriptor(d, tag);
        trail += (trail.empty() ? "" : " -> ") + d.str() + " elm[" + c.z.str() + "," + to_string(tag.location) + "]";
        ++rep.steps;
        ++rep.branches[branch_name(d, tag) + (rule.kind == ElmResult::Kind::Known ? "" : "?")];
        std::string where = "seed " + std::to_string(seed) + ": " + trail;
        switch (rule.kind) {
            case ElmResult::Kind::Known:
                ++rep.known;
                if (after.descriptor && *after.descriptor == *rule.descriptor)
                    ++rep.agreed;
                else
                    rep.disagreements.push_back(where + " rule " + rule.str() + " model " +
                                                (after.descriptor ? after.descriptor->str() : "undetermined"));
                break;
            case ElmResult::Kind::PartiallyKnown: {
                ++rep.partial;
                bool ok = after.data.segre == rule.segre;
                if (rule.decomposable && after.descriptor) {
                    auto k = after.descriptor->kind();
                    ok = ok && *rule.decomposable == (k == DescriptorKind::Decomposable || k == DescriptorKind::Trivial);
                }
                if (ok)
                    ++rep.agreed;
                else
                    rep.disagreements.push_back(where + " rule " + rule.str() + " model segre " + std::to_string(after.data.segre));
                break;
            }
            case ElmResult::Kind::Undetermined:
                if (after.descriptor)
                    ++rep.undetermined;
                else
                    ++rep.skipped;
                break;
        }
        m = next.model;
        desc = after;
        q = ElmCenter{next.inverse_base.z, next.inverse_base.u0, next.inverse_base.v0};
    }
    return rep;
}

CrosscheckReport crosscheck_suite(const Curve& E, std::uint64_t seed, int count, int max_depth) {
    CrosscheckReport total;
    for (int i = 0; i < count; ++i)
        total.merge(crosscheck_elm(E, seed * 1000003ULL + static_cast<std::uint64_t>(i), 1 + i % max_depth));
    return total;
}

}  // namespace ruled
