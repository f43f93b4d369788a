#include "doctest.h"
#include "ruled/bundle_model.hpp"
#include "test_support.hpp"

using namespace ruled;
using namespace ruled::testing;

namespace {

const Curve E11(11, -1, 0);
const Curve E7(7, -1, 0);

CurveFunction X(const Curve& E) { return CurveFunction::x(E); }
CurveFunction Y(const Curve& E) { return CurveFunction::y(E); }
CurveFunction one(const Curve& E) { return CurveFunction::constant(E, 1); }

bool is_identity(const Mat2& M) { return M == Mat2::identity(M.m00.curve()); }

}  // namespace

TEST_CASE("trivial model invariants") {
    BundleModel m = trivial_model(E11);
    CHECK(det_degree(m) == 0);
    CHECK(m.special_points().empty());
    CHECK(self_intersection(m, BundleSection::infinite(E11)) == 0);
    CHECK(self_intersection(m, BundleSection::constant(E11, E11.fp(3), E11.fp(5))) == 0);
    CHECK(self_intersection(m, {X(E11), one(E11)}) == 4);
    CHECK(self_intersection(m, {Y(E11), one(E11)}) == 6);
    CHECK(line_subbundle_class(m, BundleSection::infinite(E11)) == DivisorClass{0, Point::infinity()});
    CHECK(line_subbundle_class(m, {X(E11), one(E11)}).degree == -2);
}

TEST_CASE("sections of the trivial model have even non-negative square") {
    std::mt19937_64 rng(1);
    BundleModel m = trivial_model(E11);
    for (int i = 0; i < 40; ++i) {
        BundleSection s = random_section(rng, E11);
        int s2 = self_intersection(m, s);
        CHECK(s2 >= 0);
        CHECK(s2 % 2 == 0);
        CHECK(s2 != 2);
    }
}

TEST_CASE("normalization examples") {
    BundleModel m = trivial_model(E11);
    auto n = normalize_section_to_infinity(m, BundleSection::infinite(E11));
    CHECK(is_identity(n.gauge.chart0));
    CHECK(n.model.transitions().empty());
    auto sw = normalize_section_to_infinity(m, BundleSection::zero(E11));
    CHECK(sw.gauge.chart0.m00.is_zero());
    CHECK(sw.gauge.chart0.m11.is_zero());
    CHECK(sw.model.transitions().empty());
    // already infinite on a model with special points
    BundleModel e = elm_model(m, {make_point(E11, 8, 3), E11.fp(1), E11.fp(0)});
    auto ne = normalize_section_to_infinity(e, BundleSection::infinite(E11));
    CHECK(is_identity(ne.gauge.chart0));
    for (auto& [z, G] : ne.gauge.local) CHECK(is_identity(G));
    CHECK(ne.model == e);
}

TEST_CASE("normalization makes transitions upper triangular") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 40; ++i) {
        BundleModel m = random_model(rng, E11, 3);
        BundleSection s = random_section(rng, E11);
        auto n = normalize_section_to_infinity(m, s);
        for (auto& [z, tau] : n.model.transitions()) CHECK(tau.is_upper_triangular());
        CHECK(transport(n.gauge, s).v.is_zero());
        CHECK(det_degree(n.model) == det_degree(m));
        CHECK(n.model == apply_gauge(m, n.gauge));
    }
}

TEST_CASE("intersection numbers") {
    BundleModel m = trivial_model(E11);
    CHECK(intersection_number(m, BundleSection::infinite(E11), BundleSection::zero(E11)) == 0);
    CHECK(intersection_number(m, BundleSection::zero(E11), {X(E11), one(E11)}) == 2);
    CHECK(intersection_number(m, {X(E11), one(E11)}, BundleSection::zero(E11)) == 2);
    CHECK_THROWS_AS(intersection_number(m, BundleSection::zero(E11), BundleSection::zero(E11)), Error);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        BundleModel mm = random_model(rng, E11, 2);
        BundleSection a = random_section(rng, E11), b = random_section(rng, E11);
        if (a.same_as(b)) continue;
        int ab = intersection_number(mm, a, b);
        CHECK(ab == intersection_number(mm, b, a));
        CHECK(ab >= 0);
        CHECK(ab == det_degree(mm) - line_subbundle_degree(mm, a) - line_subbundle_degree(mm, b));
    }
}

TEST_CASE("self intersection equals det minus twice deg L") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 100; ++i) {
        BundleModel m = random_model(rng, E11, 3);
        BundleSection s = random_section(rng, E11);
        int s2 = self_intersection(m, s);
        CHECK(s2 == det_degree(m) - 2 * line_subbundle_class(m, s).degree);
        CHECK(s2 == det_degree(m) - 2 * line_subbundle_degree(m, s));
    }
}

TEST_CASE("elementary transformation of the trivial model") {
    Point z = make_point(E11, 8, 3);
    BundleModel m = elm_model(trivial_model(E11), {z, E11.fp(1), E11.fp(0)});
    CHECK(det_degree(m) == 1);
    CHECK(det_class(m) == point_class(z));
    CHECK(self_intersection(m, BundleSection::infinite(E11)) == -1);
    for (std::int64_t a = 0; a < 11; ++a)
        CHECK(self_intersection(m, BundleSection::constant(E11, E11.fp(a), E11.fp(1))) == 1);
    SegreData sd = segre_linear(m);
    CHECK(sd.segre == -1);
    CHECK(sd.minimal_sections() == 1);
    REQUIRE(sd.maximal.size() == 1);
    CHECK(sd.maximal[0].N == point_class(z));
    CHECK(sd.maximal[0].basis[0].same_as(BundleSection::infinite(E11)));
    // a general fiber point goes through a constant gauge first
    BundleModel g = elm_model(trivial_model(E11), {z, E11.fp(4), E11.fp(7)});
    CHECK(self_intersection(g, BundleSection::constant(E11, E11.fp(4), E11.fp(7))) == -1);
    CHECK(segre_linear(g).segre == -1);
}

TEST_CASE("two elementary transformations give two disjoint 0-sections") {
    Point z1 = make_point(E11, 8, 3), z2 = make_point(E11, 4, 4);
    BundleModel m = trivial_model(E11);
    m = elm_model(m, {z1, E11.fp(1), E11.fp(0)});
    m = elm_model(m, {z2, E11.fp(0), E11.fp(1)});
    CHECK(det_degree(m) == 2);
    int zeros = 0;
    std::vector<BundleSection> zs;
    for (std::int64_t a = 0; a <= 11; ++a) {
        BundleSection s = a == 11 ? BundleSection::infinite(E11) : BundleSection::constant(E11, E11.fp(a), E11.fp(1));
        int s2 = self_intersection(m, s);
        CHECK((s2 == 0 || s2 == 2));
        if (s2 == 0) { ++zeros; zs.push_back(s); }
    }
    CHECK(zeros == 2);
    REQUIRE(zs.size() == 2);
    CHECK(intersection_number(m, zs[0], zs[1]) == 0);
    SegreData sd = segre_linear(m);
    CHECK(sd.segre == 0);
    CHECK(sd.minimal_sections() == 2);
    auto n = normalize_two_sections(m, zs[0], zs[1]);
    for (auto& [z, tau] : n.model.transitions()) CHECK(tau.is_diagonal());
    BundleSection t1 = transport(n.gauge, zs[0]), t2 = transport(n.gauge, zs[1]);
    CHECK(t1.v.is_zero());
    CHECK(t2.u.is_zero());
    CHECK_THROWS_AS(normalize_two_sections(m, zs[0], BundleSection{X(E11), one(E11)}), Error);
}

TEST_CASE("normalize_two_sections gives diagonal transitions") {
    std::mt19937_64 rng(5);
    int done = 0;
    while (done < 50) {
        BundleModel m = random_model(rng, E11, 3);
        BundleSection a = random_section(rng, E11), b = random_section(rng, E11);
        if (a.same_as(b) || intersection_number(m, a, b) != 0) continue;
        auto n = normalize_two_sections(m, a, b);
        for (auto& [z, tau] : n.model.transitions()) {
            CHECK(tau.m01.is_zero());
            CHECK(tau.m10.is_zero());
        }
        CHECK(transport(n.gauge, a).v.is_zero());
        CHECK(transport(n.gauge, b).u.is_zero());
        CHECK(n.model == apply_gauge(m, n.gauge));
        ++done;
    }
}

TEST_CASE("gauge invariance of intersection numbers") {
    std::mt19937_64 rng(6);
    for (int i = 0; i < 50; ++i) {
        BundleModel m = with_infinity_special(random_model(rng, E11, 3));
        GaugeTransformation g = random_gauge(rng, m);
        BundleModel gm = apply_gauge(m, g);
        BundleSection a = random_section(rng, E11), b = random_section(rng, E11);
        CHECK(det_degree(gm) == det_degree(m));
        CHECK(self_intersection(gm, transport(g, a)) == self_intersection(m, a));
        if (!a.same_as(b))
            CHECK(intersection_number(gm, transport(g, a), transport(g, b)) == intersection_number(m, a, b));
    }
}

TEST_CASE("elementary transformation shifts squares by incidence") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 60; ++i) {
        BundleModel m = random_model(rng, E11, 2);
        BundleSection s = random_section(rng, E11);
        ElmCenter c = random_center(rng, E11);
        if (rng() % 2) {
            auto fp = fiber_point(m, s, c.z);
            c.u0 = fp.first;
            c.v0 = fp.second;
        }
        auto fp = fiber_point(m, s, c.z);
        bool through = fp.first * c.v0 == fp.second * c.u0;
        BundleModel e = elm_model(m, c, rng());
        CHECK(det_degree(e) == det_degree(m) + 1);
        CHECK(self_intersection(e, s) == self_intersection(m, s) + (through ? -1 : 1));
    }
}

TEST_CASE("elm followed by the inverse elm") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 10; ++i) {
        BundleModel m = random_model(rng, E11, 2);
        ElmCenter c = random_center(rng, E11);
        ElmOutcome o = elm_model_ex(m, c, rng());
        BundleModel back = elm_model(o.model, o.inverse_base, rng());
        CHECK(det_degree(back) == det_degree(m) + 2);
        SegreData a = segre_linear(m), b = segre_linear(back);
        CHECK(a.segre == b.segre);
        CHECK(a.minimal_sections() == b.minimal_sections());
        for (int j = 0; j < 5; ++j) {
            BundleSection s = random_section(rng, E11), t = random_section(rng, E11);
            CHECK(self_intersection(back, s) == self_intersection(m, s));
            if (!s.same_as(t)) CHECK(intersection_number(back, s, t) == intersection_number(m, s, t));
        }
    }
}

TEST_CASE("segre search examples") {
    CHECK(segre_search(trivial_model(E11), 2) == 0);
    BundleModel e = elm_model(trivial_model(E7), {make_point(E7, 0, 0), E7.fp(1), E7.fp(0)});
    CHECK(segre_search(e, 3) == -1);
    CHECK_THROWS_AS(segre_search(trivial_model(Curve(101, 3, 7)), 4, 1000), Error);
}

TEST_CASE("segre search bounds the linear algebra value") {
    std::mt19937_64 rng(9);
    const Curve E5(5, -1, 0);
    for (int i = 0; i < 6; ++i) {
        BundleModel m = random_model(rng, E5, 2);
        int lin = segre_linear(m).segre;
        CHECK(segre_search(m, det_degree(m) + 2) == lin);
    }
}

TEST_CASE("f_gamma automorphisms") {
    Point z1 = make_point(E11, 8, 3), z2 = make_point(E11, 4, 4);
    BundleModel m = trivial_model(E11);
    m = elm_model(m, {z1, E11.fp(1), E11.fp(0)});
    m = elm_model(m, {z2, E11.fp(1), E11.fp(0)});
    CHECK(self_intersection(m, BundleSection::infinite(E11)) == -2);
    CHECK(segre_linear(m).segre == -2);
    GaugeTransformation id = apply_f_gamma(m, CurveFunction(E11));
    CHECK(is_identity(id.chart0));
    CHECK(f_gamma_class(m).degree == 2);
    auto space = f_gamma_space(m);
    CHECK(space.size() == 2);
    bool moved = false;
    for (auto& g : space) moved = moved || f_gamma_moves_base_point(m, g, z2);
    CHECK(moved);
    CHECK_THROWS_AS(apply_f_gamma(m, CurveFunction::x(E11)), Error);
    std::mt19937_64 rng(10);
    for (int i = 0; i < 20; ++i) {
        CurveFunction g = space[0] * random_fp(rng, E11) + space[1] * random_fp(rng, E11);
        GaugeTransformation f = apply_f_gamma(m, g);
        for (auto& [z, tau] : m.transitions()) CHECK(tau * f.chart0 == f.at(z) * tau);
        CHECK(apply_gauge(m, f) == m);
    }
}

TEST_CASE("minimal sections of a Segre-0 model are disjoint") {
    Point z1 = make_point(E11, 8, 3), z2 = make_point(E11, 6, 1);
    BundleModel m = trivial_model(E11);
    m = elm_model(m, {z1, E11.fp(1), E11.fp(0)});
    m = elm_model(m, {z2, E11.fp(0), E11.fp(1)});
    SegreData sd = segre_linear(m);
    REQUIRE(sd.maximal.size() == 2);
    BundleSection a = sd.maximal[0].basis[0], b = sd.maximal[1].basis[0];
    CHECK(self_intersection(m, a) == 0);
    CHECK(self_intersection(m, b) == 0);
    CHECK(intersection_number(m, a, b) == 0);
}
