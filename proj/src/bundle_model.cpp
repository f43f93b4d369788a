#include "ruled/bundle_model.hpp"

#include <algorithm>
#include <climits>
#include <random>
#include <set>

namespace ruled {

namespace {

constexpr int kInf = INT_MAX;

int val_or_inf(const Curve& E, const CurveFunction& f, const Point& P) { return f.is_zero() ? kInf : valuation(E, f, P); }

int min_val(const Curve& E, const BundleSection& w, const Point& P) {
    return std::min(val_or_inf(E, w.u, P), val_or_inf(E, w.v, P));
}

int min_entry_val(const Curve& E, const Mat2& M, const Point& P) {
    return std::min({val_or_inf(E, M.m00, P), val_or_inf(E, M.m01, P), val_or_inf(E, M.m10, P),
                     val_or_inf(E, M.m11, P)});
}

CurveFunction cst(const Curve& E, std::int64_t c) { return CurveFunction::constant(E, c); }

Mat2 swap_matrix(const Curve& E) { return {cst(E, 0), cst(E, 1), cst(E, 1), cst(E, 0)}; }

// first = (m special or listed) ? first.at(z) : first.chart0
GaugeTransformation compose(const BundleModel& m, const GaugeTransformation& first, const GaugeTransformation& second) {
    GaugeTransformation g{second.chart0 * first.chart0, {}};
    std::set<Point> pts;
    for (auto& [z, M] : first.local) pts.insert(z);
    for (auto& [z, M] : second.local) pts.insert(z);
    for (const Point& z : pts) {
        Mat2 f = (m.is_special(z) || first.local.count(z)) ? first.at(z) : first.chart0;
        g.local.emplace(z, second.at(z) * f);
    }
    return g;
}

// Polynomial pair (A, B) with s = (A + B y) / D for a common D.
struct PolyPair {
    Poly a, b;
};

void clear_denominators(const BundleSection& s, PolyPair& u, PolyPair& v) {
    std::uint64_t p = s.u.curve().p();
    Poly D(p, {1});
    for (const RatFunc* r : {&s.u.a(), &s.u.b(), &s.v.a(), &s.v.b()}) {
        if (r->is_zero()) continue;
        D = D * (r->den() / poly_gcd(D, r->den()));
    }
    auto part = [&](const RatFunc& r) { return r.is_zero() ? Poly(p) : r.num() * (D / r.den()); };
    u = {part(s.u.a()), part(s.u.b())};
    v = {part(s.v.a()), part(s.v.b())};
}

// dim F_p[x,y]/(u, v), as the degree of the gcd of the 2x2 minors of the F_p[x]-lattice.
int colength(const Poly& f, const PolyPair& u, const PolyPair& v) {
    Poly g = poly_gcd(u.a * u.a - u.b * u.b * f, v.a * v.a - v.b * v.b * f);
    g = poly_gcd(g, u.a * v.b - u.b * v.a);
    g = poly_gcd(g, u.a * v.a - u.b * v.b * f);
    return g.deg();
}

}  // namespace

// ---- matrices

Mat2 Mat2::identity(const Curve& E) { return {cst(E, 1), cst(E, 0), cst(E, 0), cst(E, 1)}; }

Mat2 Mat2::constant(const Curve& E, const Fp& a, const Fp& b, const Fp& c, const Fp& d) {
    return {CurveFunction::constant(E, a), CurveFunction::constant(E, b), CurveFunction::constant(E, c),
            CurveFunction::constant(E, d)};
}

Mat2 Mat2::diag(const CurveFunction& a, const CurveFunction& b) {
    const Curve& E = a.curve();
    return {a, cst(E, 0), cst(E, 0), b};
}

CurveFunction Mat2::det() const { return m00 * m11 - m01 * m10; }

Mat2 Mat2::adj() const { return {m11, -m01, -m10, m00}; }

Mat2 Mat2::inv() const {
    CurveFunction d = det();
    if (d.is_zero()) throw Error(Errc::DivisionByZero, "singular transition matrix");
    CurveFunction id = d.inv();
    Mat2 a = adj();
    return {a.m00 * id, a.m01 * id, a.m10 * id, a.m11 * id};
}

Mat2 Mat2::operator*(const Mat2& o) const {
    return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11, m10 * o.m00 + m11 * o.m10,
            m10 * o.m01 + m11 * o.m11};
}

bool Mat2::operator==(const Mat2& o) const { return m00 == o.m00 && m01 == o.m01 && m10 == o.m10 && m11 == o.m11; }

std::string Mat2::str() const {
    return "[[" + m00.str() + ", " + m01.str() + "], [" + m10.str() + ", " + m11.str() + "]]";
}

// ---- sections

BundleSection BundleSection::constant(const Curve& E, const Fp& u0, const Fp& v0) {
    return {CurveFunction::constant(E, u0), CurveFunction::constant(E, v0)};
}

BundleSection BundleSection::infinite(const Curve& E) { return {cst(E, 1), cst(E, 0)}; }

BundleSection BundleSection::zero(const Curve& E) { return {cst(E, 0), cst(E, 1)}; }

bool BundleSection::same_as(const BundleSection& o) const { return (u * o.v - v * o.u).is_zero(); }

BundleSection apply(const Mat2& M, const BundleSection& s) {
    return {M.m00 * s.u + M.m01 * s.v, M.m10 * s.u + M.m11 * s.v};
}

// ---- models

BundleModel::BundleModel(const Curve& E) : E_(E) {}

std::vector<Point> BundleModel::special_points() const {
    std::vector<Point> out;
    for (auto& [z, M] : tau_) out.push_back(z);
    return out;
}

Mat2 BundleModel::transition(const Point& z) const {
    auto it = tau_.find(z);
    return it == tau_.end() ? Mat2::identity(E_) : it->second;
}

BundleModel BundleModel::with_transition(const Point& z, const Mat2& M) const {
    if (!on_curve(E_, z)) throw Error(Errc::PointNotOnCurve, z.str() + " is not on " + E_.str());
    if (M.det().is_zero()) throw Error(Errc::DivisionByZero, "transition at " + z.str() + " is singular");
    BundleModel out = *this;
    out.tau_.insert_or_assign(z, M);
    return out;
}

GaugeTransformation GaugeTransformation::identity(const Curve& E) { return {Mat2::identity(E), {}}; }

Mat2 GaugeTransformation::at(const Point& z) const {
    auto it = local.find(z);
    return it == local.end() ? Mat2::identity(chart0.m00.curve()) : it->second;
}

BundleModel apply_gauge(const BundleModel& m, const GaugeTransformation& g) {
    std::set<Point> pts;
    for (auto& [z, M] : m.transitions()) pts.insert(z);
    for (auto& [z, M] : g.local) pts.insert(z);
    Mat2 g0inv = g.chart0.inv();
    BundleModel out(m.base());
    for (const Point& z : pts) out = out.with_transition(z, g.at(z) * m.transition(z) * g0inv);
    return out;
}

BundleSection transport(const GaugeTransformation& g, const BundleSection& s) { return apply(g.chart0, s); }

BundleModel trivial_model(const Curve& E) { return BundleModel(E); }

void check_section(const BundleModel& m, const BundleSection& s) {
    if (s.u.is_zero() && s.v.is_zero()) throw Error(Errc::InvalidSection, "section with both coordinates zero");
    if (!(s.u.curve() == m.base()) || !(s.v.curve() == m.base()))
        throw Error(Errc::InvalidSection, "section over a different curve");
}

NormalizedModel normalize_section_to_infinity(const BundleModel& m, const BundleSection& s) {
    check_section(m, s);
    const Curve& E = m.base();
    Mat2 G0 = Mat2::identity(E);
    std::set<Point> pts;
    for (auto& [z, M] : m.transitions()) pts.insert(z);
    if (s.u.is_zero()) {
        G0 = swap_matrix(E);
    } else if (!s.v.is_zero()) {
        CurveFunction iu = s.u.inv();
        G0 = {iu, cst(E, 0), -(s.v * iu), cst(E, 1)};
        for (const CurveFunction* f : {&s.u, &s.v}) {
            Divisor D = divisor_of(E, *f);
            for (auto& [P, n] : D.terms()) pts.insert(P);
        }
    }
    Mat2 G0inv = G0.inv();
    BundleSection s0 = apply(G0inv, BundleSection::infinite(E));
    NormalizedModel out{BundleModel(E), {G0, {}}};
    for (const Point& z : pts) {
        Mat2 tau = m.transition(z);
        BundleSection w = apply(tau, s0);
        Mat2 Gz = Mat2::identity(E);
        if (!w.v.is_zero()) {
            if (val_or_inf(E, w.u, z) <= valuation(E, w.v, z))
                Gz = {cst(E, 1), cst(E, 0), -(w.v / w.u), cst(E, 1)};
            else
                Gz = {cst(E, 0), cst(E, 1), cst(E, -1), w.u / w.v};
        }
        out.model = out.model.with_transition(z, Gz * tau * G0inv);
        out.gauge.local.emplace(z, Gz);
    }
    return out;
}

NormalizedModel normalize_two_sections(const BundleModel& m, const BundleSection& s1, const BundleSection& s2) {
    check_section(m, s1);
    check_section(m, s2);
    if (s1.same_as(s2) || intersection_number(m, s1, s2) != 0)
        throw Error(Errc::NotDisjoint, "the two sections meet");
    const Curve& E = m.base();
    NormalizedModel n1 = normalize_section_to_infinity(m, s1);
    BundleSection t = transport(n1.gauge, s2);
    CurveFunction h = t.u / t.v;
    Mat2 H{cst(E, 1), -h, cst(E, 0), cst(E, 1)};
    Mat2 Hinv{cst(E, 1), h, cst(E, 0), cst(E, 1)};
    GaugeTransformation second{H, {}};
    BundleModel out(E);
    for (auto& [z, tau] : n1.model.transitions()) {
        BundleSection w = apply(tau, BundleSection{h, cst(E, 1)});
        if (!w.u.is_zero() && valuation(E, w.u, z) < valuation(E, w.v, z))
            throw Error(Errc::NotDisjoint, "the two sections meet over " + z.str());
        Mat2 K{cst(E, 1), -(w.u / w.v), cst(E, 0), cst(E, 1)};
        out = out.with_transition(z, K * tau * Hinv);
        second.local.emplace(z, K);
    }
    return {out, compose(n1.model, n1.gauge, second)};
}

DivisorClass det_class(const BundleModel& m) {
    Divisor D;
    for (auto& [z, M] : m.transitions()) D.add(z, valuation(m.base(), M.det(), z));
    return class_of(m.base(), D);
}

bool extends_to_isomorphism(const BundleModel& m1, const BundleModel& m2, const Mat2& chart0) {
    const Curve& E = m1.base();
    if (!(m2.base() == E)) throw Error(Errc::BaseMismatch, "models over different curves");
    if (chart0.det().is_zero()) return false;
    std::set<Point> pts;
    for (const Point& z : m1.special_points()) pts.insert(z);
    for (const Point& z : m2.special_points()) pts.insert(z);
    for (const CurveFunction* f : {&chart0.m00, &chart0.m01, &chart0.m10, &chart0.m11}) {
        if (f->is_zero()) continue;
        Divisor d = divisor_of(E, *f);
        for (auto& [P, n] : d.terms()) pts.insert(P);
    }
    Divisor dd = divisor_of(E, chart0.det());
    for (auto& [P, n] : dd.terms()) pts.insert(P);
    for (const Point& z : pts) {
        Mat2 G = m2.transition(z) * chart0 * m1.transition(z).inv();
        // projectively regular and invertible: det valuation twice the minimal entry valuation
        if (valuation(E, G.det(), z) != 2 * min_entry_val(E, G, z)) return false;
    }
    return true;
}

int det_degree(const BundleModel& m) { return det_class(m).degree; }

DivisorClass line_subbundle_class(const BundleModel& m, const BundleSection& s) {
    NormalizedModel n = normalize_section_to_infinity(m, s);
    Divisor D;
    for (auto& [z, M] : n.model.transitions()) D.add(z, valuation(m.base(), M.m00, z));
    return class_of(m.base(), D);
}

int line_subbundle_degree(const BundleModel& m, const BundleSection& s) {
    check_section(m, s);
    const Curve& E = m.base();
    PolyPair u, v;
    clear_denominators(s, u, v);
    BundleSection cleared{CurveFunction(E, RatFunc(u.a), RatFunc(u.b)), CurveFunction(E, RatFunc(v.a), RatFunc(v.b))};
    int deg = colength(E.cubic(), u, v);
    Point O = Point::infinity();
    if (!m.is_special(O)) deg += min_val(E, cleared, O);
    for (auto& [z, tau] : m.transitions()) {
        if (!z.is_infinity()) deg -= min_val(E, cleared, z);
        deg += min_val(E, apply(tau, cleared), z);
    }
    return deg;
}

int self_intersection(const BundleModel& m, const BundleSection& s) {
    check_section(m, s);
    try {
        NormalizedModel n = normalize_section_to_infinity(m, s);
        int total = 0;
        for (auto& [z, M] : n.model.transitions()) total += valuation(m.base(), M.m11, z) - valuation(m.base(), M.m00, z);
        return total;
    } catch (const Error& e) {
        if (e.code() != Errc::NonRationalSupport) throw;
    }
    return det_degree(m) - 2 * line_subbundle_degree(m, s);
}

int intersection_number(const BundleModel& m, const BundleSection& s1, const BundleSection& s2) {
    check_section(m, s1);
    check_section(m, s2);
    if (s1.same_as(s2)) throw Error(Errc::EqualSections, "intersection of a section with itself");
    const Curve& E = m.base();
    try {
        NormalizedModel n = normalize_section_to_infinity(m, s1);
        BundleSection t = transport(n.gauge, s2);
        int total = 0;
        if (!t.u.is_zero()) {
            Divisor D = divisor_of(E, t.v / t.u);
            for (auto& [P, k] : D.terms())
                if (k > 0 && !n.model.is_special(P)) total += k;
        }
        for (auto& [z, tau] : n.model.transitions()) {
            BundleSection w = apply(tau, t);
            if (!w.u.is_zero()) total += std::max(0, valuation(E, w.v, z) - valuation(E, w.u, z));
        }
        return total;
    } catch (const Error& e) {
        if (e.code() != Errc::NonRationalSupport) throw;
    }
    return det_degree(m) - line_subbundle_degree(m, s1) - line_subbundle_degree(m, s2);
}

std::pair<Fp, Fp> fiber_point(const BundleModel& m, const BundleSection& s, const Point& z) {
    check_section(m, s);
    const Curve& E = m.base();
    BundleSection w = apply(m.transition(z), s);
    int nu = min_val(E, w, z);
    auto lead = [&](const CurveFunction& f) {
        return val_or_inf(E, f, z) == nu ? leading_coefficient(E, f, z) : E.fp(0);
    };
    Fp a = lead(w.u), b = lead(w.v);
    if (!a.is_zero()) return {E.fp(1), b / a};
    return {E.fp(0), E.fp(1)};
}

// ---- elementary transformations

namespace {

// A function with a simple zero at z: div = (z) + (w) - (r) - (z + w - r).
CurveFunction elm_function(const Curve& E, const Point& z, const BundleModel& m, std::uint64_t seed) {
    auto pts = rational_points(E);
    std::uint64_t mix = seed * 0x9E3779B97F4A7C15ULL;
    if (!z.is_infinity()) mix ^= z.x().value() * 1315423911ULL + z.y().value() * 2654435761ULL;
    std::mt19937_64 rng(mix);
    for (int strict = 1; strict >= 0; --strict) {
        for (int attempt = 0; attempt < 200; ++attempt) {
            const Point& w = pts[rng() % pts.size()];
            const Point& r = pts[rng() % pts.size()];
            Point s = sub_points(E, add_points(E, z, w), r);
            if (w == z || r == z || s == z || w == r) continue;
            if (strict && (m.is_special(w) || m.is_special(r) || m.is_special(s))) continue;
            Divisor D = Divisor::point(z) + Divisor::point(w) - Divisor::point(r) - Divisor::point(s);
            return function_with_divisor(E, D);
        }
    }
    return uniformizer(E, z);
}

}  // namespace

ElmOutcome elm_model_ex(const BundleModel& m, const ElmCenter& p, std::uint64_t seed) {
    const Curve& E = m.base();
    if (!on_curve(E, p.z)) throw Error(Errc::PointNotOnCurve, p.z.str() + " is not on " + E.str());
    if (p.u0.is_zero() && p.v0.is_zero()) throw Error(Errc::InvalidSection, "fiber point [0:0]");
    Mat2 G = Mat2::identity(E);
    if (p.u0.is_zero()) G = swap_matrix(E);
    else if (!p.v0.is_zero()) G = Mat2::constant(E, E.fp(1), E.fp(0), -p.v0, p.u0);
    CurveFunction f = elm_function(E, p.z, m, seed);
    Mat2 tau = Mat2::diag(f, cst(E, 1)) * G * m.transition(p.z);
    return {m.with_transition(p.z, tau), {p.z, E.fp(0), E.fp(1)}, f};
}

BundleModel elm_model(const BundleModel& m, const ElmCenter& p, std::uint64_t seed) {
    return elm_model_ex(m, p, seed).model;
}

// ---- f_gamma

namespace {

void require_upper(const BundleModel& m) {
    for (auto& [z, M] : m.transitions())
        if (!M.is_upper_triangular())
            throw Error(Errc::InvalidSection, "the infinite section is not normalized at " + z.str());
}

Divisor f_gamma_divisor(const BundleModel& m) {
    Divisor G;
    for (auto& [z, M] : m.transitions())
        G.add(z, valuation(m.base(), M.m00, z) - valuation(m.base(), M.m11, z));
    return G;
}

}  // namespace

DivisorClass f_gamma_class(const BundleModel& m) {
    require_upper(m);
    return class_of(m.base(), f_gamma_divisor(m));
}

std::vector<CurveFunction> f_gamma_space(const BundleModel& m) {
    require_upper(m);
    return riemann_roch_space(m.base(), f_gamma_divisor(m));
}

GaugeTransformation apply_f_gamma(const BundleModel& m, const CurveFunction& gamma) {
    require_upper(m);
    const Curve& E = m.base();
    GaugeTransformation g{{cst(E, 1), gamma, cst(E, 0), cst(E, 1)}, {}};
    if (gamma.is_zero()) {
        for (auto& [z, M] : m.transitions()) g.local.emplace(z, Mat2::identity(E));
        return g;
    }
    // poles of gamma on U0
    auto fail = [](const std::string& why) { throw Error(Errc::NotGlobalSection, why); };
    std::set<Fp> xs;
    for (const RatFunc* r : {&gamma.a(), &gamma.b()}) {
        if (r->is_zero()) continue;
        auto rts = r->den().roots();
        int total = 0;
        for (auto& [x0, k] : rts) { total += k; xs.insert(x0); }
        if (total != r->den().deg()) fail("gamma has a pole at a non-rational point");
    }
    std::vector<Point> check{Point::infinity()};
    for (const Fp& x0 : xs) {
        Fp fx = E.cubic().eval(x0);
        if (!fx.is_square()) fail("gamma has a pole over x = " + x0.str());
        check.emplace_back(x0, fx.sqrt());
        check.emplace_back(x0, -fx.sqrt());
    }
    for (const Point& P : check)
        if (!m.is_special(P) && valuation(E, gamma, P) < 0) fail("gamma has a pole at " + P.str());
    for (auto& [z, M] : m.transitions()) {
        CurveFunction gz = M.m00 * gamma / M.m11;
        if (valuation(E, gz, z) < 0) fail("gamma is not a global section at " + z.str());
        g.local.emplace(z, Mat2{cst(E, 1), gz, cst(E, 0), cst(E, 1)});
    }
    return g;
}

bool f_gamma_moves_base_point(const BundleModel& m, const CurveFunction& gamma, const Point& z) {
    if (gamma.is_zero()) return false;
    GaugeTransformation g = apply_f_gamma(m, gamma);
    return !g.at(z).m01.is_zero() && valuation(m.base(), g.at(z).m01, z) == 0;
}

// ---- Segre invariant

namespace {

int ceil_div2(int n) { return n >= 0 ? (n + 1) / 2 : -((-n) / 2); }

}  // namespace

std::vector<BundleSection> twisted_sections(const BundleModel& m, const DivisorClass& N) {
    const Curve& E = m.base();
    Divisor DN = representative(N);
    Divisor G;
    for (auto& [z, tau] : m.transitions())
        G.add(z, valuation(E, tau.det(), z) - DN.coeff(z) - min_entry_val(E, tau, z));
    for (auto& [P, n] : DN.terms())
        if (!m.is_special(P)) G.add(P, -n);
    auto basis = riemann_roch_space(E, G);
    std::size_t k = basis.size();
    if (k == 0) return {};
    std::vector<std::vector<std::uint64_t>> rows;
    for (auto& [z, tau] : m.transitions()) {
        int bound = DN.coeff(z);
        const CurveFunction* row_entries[2][2] = {{&tau.m00, &tau.m01}, {&tau.m10, &tau.m11}};
        for (auto& re : row_entries) {
            std::vector<Series> ser;
            int low = kInf;
            for (int c = 0; c < 2; ++c)
                for (std::size_t i = 0; i < k; ++i) {
                    CurveFunction prod = *re[c] * basis[i];
                    ser.push_back(prod.is_zero() ? Series{E.p(), bound, {}} : expand(E, prod, z, bound));
                    if (!prod.is_zero()) low = std::min(low, valuation(E, prod, z));
                }
            for (int j = low; j < bound; ++j) {
                std::vector<std::uint64_t> row;
                for (auto& s : ser) row.push_back(s.coeff(j).value());
                rows.push_back(std::move(row));
            }
        }
    }
    auto ns = nullspace(rows, 2 * k, E.p());
    std::vector<BundleSection> out;
    for (auto& vec : ns) {
        BundleSection s{CurveFunction(E), CurveFunction(E)};
        for (std::size_t i = 0; i < k; ++i) {
            if (vec[i]) s.u += basis[i] * Fp::from_residue(vec[i], E.p());
            if (vec[k + i]) s.v += basis[i] * Fp::from_residue(vec[k + i], E.p());
        }
        out.push_back(s);
    }
    return out;
}

std::uint64_t SegreData::minimal_sections() const {
    std::uint64_t total = 0;
    for (auto& mx : maximal) {
        std::uint64_t pw = 1;
        for (std::size_t i = 0; i < mx.basis.size(); ++i) { total += pw; pw *= p; }
    }
    return total;
}

SegreData segre_linear(const BundleModel& m) {
    const Curve& E = m.base();
    SegreData out;
    out.p = E.p();
    out.det = det_class(m);
    int e0 = ceil_div2(out.det.degree - 1);
    auto pts = rational_points(E);
    bool any = false;
    for (int e = e0; e <= e0 + 64; ++e) {
        std::vector<MaximalSubbundle> found;
        for (const Point& s : pts) {
            DivisorClass N{e, s};
            auto basis = twisted_sections(m, N);
            if (!basis.empty()) found.push_back({N, std::move(basis)});
        }
        if (found.empty()) {
            if (!any) {
                // only a Galois-conjugate pair of maximal subbundles hides every degree-e0 subbundle
                if (out.det.degree % 2 != 0)
                    throw Error(Errc::BudgetExceeded, "no line subbundle of degree " + std::to_string(e0));
                out.rational = false;
                out.max_degree = e0;
                out.segre = 0;
                return out;
            }
            out.segre = out.det.degree - 2 * out.max_degree;
            return out;
        }
        any = true;
        out.max_degree = e;
        out.maximal = std::move(found);
    }
    throw Error(Errc::BudgetExceeded, "line subbundle degrees did not stabilize");
}

// ---- brute-force search

int segre_search(const BundleModel& m, int degree_bound, std::uint64_t budget) {
    if (degree_bound < 1) throw Error(Errc::BudgetExceeded, "degree bound must be at least 1");
    const Curve& E = m.base();
    std::uint64_t p = E.p();
    int n = degree_bound;
    // count of projective points of F_p^(2n)
    long double count = 0, pw = 1;
    for (int i = 0; i < 2 * n; ++i) { count += pw; pw *= static_cast<long double>(p); }
    if (count > static_cast<long double>(budget))
        throw Error(Errc::FieldTooLarge, "search space of " + std::to_string(static_cast<unsigned long long>(count)) +
                                             " sections exceeds the budget " + std::to_string(budget));
    // basis of L(nO): x^i (pole 2i) and x^i y (pole 2i+3)
    std::vector<CurveFunction> basis;
    std::vector<PolyPair> polys;
    std::vector<int> poles;
    for (int k = 0; k <= n; ++k) {
        if (k == 1) continue;
        if (k % 2 == 0) {
            basis.emplace_back(E, RatFunc(Poly::x(p).pow(k / 2)), RatFunc(p));
            polys.push_back({Poly::x(p).pow(k / 2), Poly(p)});
        } else {
            basis.emplace_back(E, RatFunc(p), RatFunc(Poly::x(p).pow((k - 3) / 2)));
            polys.push_back({Poly(p), Poly::x(p).pow((k - 3) / 2)});
        }
        poles.push_back(k);
    }
    std::size_t k = basis.size();
    // per special point: series of basis (affine only) and of the transition rows times basis
    struct Local {
        Point z;
        int window_lo = 0, window_hi = 0;
        std::vector<Series> self;
        std::vector<Series> rows[2][2];
    };
    std::vector<Local> locals;
    const int extra = 4 * n + 12;
    for (auto& [z, tau] : m.transitions()) {
        Local L;
        L.z = z;
        int lo = kInf;
        const CurveFunction* re[2][2] = {{&tau.m00, &tau.m01}, {&tau.m10, &tau.m11}};
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                for (auto& g : basis) {
                    CurveFunction prod = *re[r][c] * g;
                    if (!prod.is_zero()) lo = std::min(lo, valuation(E, prod, z));
                }
        L.window_lo = lo;
        L.window_hi = lo + extra;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                for (auto& g : basis) {
                    CurveFunction prod = *re[r][c] * g;
                    L.rows[r][c].push_back(prod.is_zero() ? Series{p, L.window_hi, {}} : expand(E, prod, z, L.window_hi));
                }
        if (!z.is_infinity())
            for (auto& g : basis) L.self.push_back(expand(E, g, z, extra));
        locals.push_back(std::move(L));
    }
    int det = det_degree(m);
    bool O_special = m.is_special(Point::infinity());
    int best = kInf;
    std::vector<std::uint64_t> vec(2 * k, 0);
    auto first_nonzero = [&](const std::vector<const Series*>& ser, const std::vector<std::uint64_t>& coef, int lo,
                             int hi) {
        for (int j = lo; j < hi; ++j) {
            std::uint64_t acc = 0;
            for (std::size_t i = 0; i < ser.size(); ++i)
                if (coef[i]) acc = (acc + mulmod(coef[i], ser[i]->coeff(j).value(), p)) % p;
            if (acc) return j;
        }
        return kInf;
    };
    // enumerate vectors whose first nonzero entry is 1
    for (std::size_t lead = 0; lead < 2 * k; ++lead) {
        std::size_t free = 2 * k - lead - 1;
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < free; ++i) total *= p;
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            std::fill(vec.begin(), vec.end(), 0);
            vec[lead] = 1;
            std::uint64_t t = idx;
            for (std::size_t i = lead + 1; i < 2 * k; ++i) { vec[i] = t % p; t /= p; }
            std::vector<std::uint64_t> cu(vec.begin(), vec.begin() + static_cast<std::ptrdiff_t>(k));
            std::vector<std::uint64_t> cv(vec.begin() + static_cast<std::ptrdiff_t>(k), vec.end());
            PolyPair u{Poly(p), Poly(p)}, v{Poly(p), Poly(p)};
            int pole_u = INT_MIN, pole_v = INT_MIN;
            for (std::size_t i = 0; i < k; ++i) {
                Fp a = Fp::from_residue(cu[i], p), b = Fp::from_residue(cv[i], p);
                if (cu[i]) { u.a += polys[i].a * a; u.b += polys[i].b * a; pole_u = std::max(pole_u, poles[i]); }
                if (cv[i]) { v.a += polys[i].a * b; v.b += polys[i].b * b; pole_v = std::max(pole_v, poles[i]); }
            }
            int deg = colength(E.cubic(), u, v);
            if (!O_special) deg += -std::max(pole_u, pole_v);
            bool exact = true;
            for (auto& L : locals) {
                if (!L.z.is_infinity()) {
                    std::vector<const Series*> su, sv;
                    for (auto& s : L.self) { su.push_back(&s); sv.push_back(&s); }
                    int mu = std::min(first_nonzero(su, cu, 0, extra), first_nonzero(sv, cv, 0, extra));
                    if (mu == kInf) exact = false;
                    deg -= mu == kInf ? 0 : mu;
                }
                std::vector<const Series*> ser;
                std::vector<std::uint64_t> coef;
                int mw = kInf;
                for (int r = 0; r < 2; ++r) {
                    ser.clear();
                    coef.clear();
                    for (std::size_t i = 0; i < k; ++i) { ser.push_back(&L.rows[r][0][i]); coef.push_back(cu[i]); }
                    for (std::size_t i = 0; i < k; ++i) { ser.push_back(&L.rows[r][1][i]); coef.push_back(cv[i]); }
                    mw = std::min(mw, first_nonzero(ser, coef, L.window_lo, L.window_hi));
                }
                if (mw == kInf) exact = false;
                deg += mw == kInf ? 0 : mw;
            }
            int si;
            if (exact) {
                si = det - 2 * deg;
            } else {
                BundleSection s{CurveFunction(E), CurveFunction(E)};
                for (std::size_t i = 0; i < k; ++i) {
                    if (cu[i]) s.u += basis[i] * Fp::from_residue(cu[i], p);
                    if (cv[i]) s.v += basis[i] * Fp::from_residue(cv[i], p);
                }
                si = det - 2 * line_subbundle_degree(m, s);
            }
            best = std::min(best, si);
        }
    }
    return best;
}

}  // namespace ruled
