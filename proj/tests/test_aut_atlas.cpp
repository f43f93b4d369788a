#include <doctest.h>

#include "ruled/aut_atlas.hpp"

using namespace ruled;

namespace {

const Curve E11(11, -1, 0);

std::vector<SurfaceDescriptor> samples(const Curve& E) {
    std::vector<SurfaceDescriptor> out{SurfaceDescriptor::trivial(E), SurfaceDescriptor::atiyah0(E), SurfaceDescriptor::atiyah1(E)};
    for (const Point& s : rational_points(E))
        for (int d = 0; d <= 3; ++d)
            if (d > 0 || !s.is_infinity()) out.push_back(SurfaceDescriptor::decomposable(E, {d, s}));
    return out;
}

}  // namespace

TEST_CASE("automorphism groups of the ruled surfaces") {
    Point s = make_point(E11, 8, 3);
    auto dec = aut_of_bundle(SurfaceDescriptor::decomposable(E11, {0, s}));
    CHECK(dec.kernel == AutKernel::Gm);
    CHECK(dec.dimension == 2);
    CHECK(dec.maximal);
    CHECK(dec.commutative == true);
    CHECK(dec.splits == Splits::No);
    auto a0 = aut_of_bundle(SurfaceDescriptor::atiyah0(E11));
    CHECK(a0.kernel == AutKernel::Ga);
    CHECK(a0.dimension == 2);
    CHECK(a0.splits == Splits::No);
    auto a1 = aut_of_bundle(SurfaceDescriptor::atiyah1(E11), true);
    CHECK(a1.kernel == AutKernel::TwoTorsionKlein);
    CHECK(a1.dimension == 1);
    CHECK(a1.justification.back().find("passed") != std::string::npos);
    auto t = aut_of_bundle(SurfaceDescriptor::trivial(E11));
    CHECK(t.kernel == AutKernel::ProductCxPGL2);
    CHECK(t.dimension == 4);
    auto d3 = aut_of_bundle(SurfaceDescriptor::decomposable(E11, {3, s}));
    CHECK_FALSE(d3.maximal);
    REQUIRE(d3.chain_witness.has_value());
    CHECK(d3.chain_witness->steps.front().segre == -4);
    CHECK(aut_of_bundle(SurfaceDescriptor::hirzebruch(1)).maximal == false);
    CHECK(aut_of_bundle(SurfaceDescriptor::hirzebruch(2)).maximal);
    CHECK(aut_of_bundle(SurfaceDescriptor::hirzebruch(0)).maximal);

    try {
        aut_of_bundle(SurfaceDescriptor::atiyah1(Curve(11, 0, 1)), true);
        FAIL("expected CharTwoOutOfScope");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::CharTwoOutOfScope);
    }
}

TEST_CASE("maximal verdicts are exactly the four classes and dimensions add up") {
    for (const auto& d : samples(E11)) {
        auto a = aut_of_bundle(d);
        CHECK(a.maximal == is_maximal_class(d));
        CHECK(a.dimension_consistent());
        if (!a.maximal) CHECK(a.chain_witness.has_value());
    }
}

TEST_CASE("conjugate descriptions have the same group data") {
    auto all = samples(E11);
    for (const auto& a : all)
        for (const auto& b : all) {
            auto c = is_conjugate_aut(a, b);
            if (!c.conjugate || c.non_maximal) continue;
            auto x = aut_of_bundle(a), y = aut_of_bundle(b);
            CHECK(x.kernel == y.kernel);
            CHECK(x.dimension == y.dimension);
            CHECK(x.maximal == y.maximal);
            CHECK(x.splits == y.splits);
        }
}

TEST_CASE("surface table verdicts") {
    struct Row {
        SurfaceClass c;
        AutKernel kernel;
        std::optional<int> dim;
        bool maximal;
    };
    const std::vector<Row> rows{
        {SurfaceClass::p2(), AutKernel::PGL3, 8, true},
        {SurfaceClass::hirzebruch_surface(0), AutKernel::None, 6, true},
        {SurfaceClass::hirzebruch_surface(1), AutKernel::None, 6, false},
        {SurfaceClass::hirzebruch_surface(3), AutKernel::None, 8, true},
        {SurfaceClass::of(SurfaceTag::RationalNonMinimal), AutKernel::None, std::nullopt, false},
        {SurfaceClass::ruled_elliptic(SurfaceDescriptor::atiyah1(E11)), AutKernel::TwoTorsionKlein, 1, true},
        {SurfaceClass::ruled_elliptic(SurfaceDescriptor::decomposable(E11, {1, Point::infinity()})), AutKernel::None, 2, false},
        {SurfaceClass::ruled_higher_genus(true), AutKernel::FullPGL2, 3, true},
        {SurfaceClass::ruled_higher_genus(false), AutKernel::None, std::nullopt, false},
        {SurfaceClass::of(SurfaceTag::Abelian), AutKernel::WholeAbelianSurface, 2, true},
        {SurfaceClass::of(SurfaceTag::BlownUpAbelian), AutKernel::TrivialGroup, 0, false},
        {SurfaceClass::of(SurfaceTag::K3), AutKernel::TrivialGroup, 0, true},
        {SurfaceClass::of(SurfaceTag::Enriques), AutKernel::TrivialGroup, 0, true},
        {SurfaceClass::of(SurfaceTag::BiellipticWithP1Quotient), AutKernel::EllipticCurveGroup, 1, true},
        {SurfaceClass::quotient_properly_elliptic(true), AutKernel::EllipticCurveGroup, 1, true},
        {SurfaceClass::quotient_properly_elliptic(false), AutKernel::TrivialGroup, 0, false},
        {SurfaceClass::of(SurfaceTag::ProperlyEllipticOther), AutKernel::TrivialGroup, 0, true},
        {SurfaceClass::of(SurfaceTag::GeneralType), AutKernel::TrivialGroup, 0, true},
    };
    for (const auto& r : rows) {
        INFO(r.c.str());
        auto a = classify_theorem_D(r.c);
        CHECK(a.kernel == r.kernel);
        CHECK(a.dimension == r.dim);
        CHECK(a.maximal == r.maximal);
        CHECK(a.dimension_consistent());
    }
}

TEST_CASE("two-torsion kernel matrices") {
    for (const Curve& E : {E11, Curve(7, -1, 0), Curve(13, -1, 0)}) {
        auto r = delta_kernel_check(E);
        INFO(r.str());
        CHECK(r.closed);
        CHECK(r.involutions);
        CHECK(r.noncyclic);
        CHECK(r.normalizes);
        CHECK(r.centralizer_size == 4);
        CHECK(r.ok());
        CHECK(r.table[1][2] == 3);
        CHECK(r.table[2][3] == 1);
    }
    try {
        delta_kernel_check(Curve(11, 0, 1));
        FAIL("expected IncompleteTorsion");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::IncompleteTorsion);
    }
}

TEST_CASE("maximality certificates") {
    for (const Point& s : rational_points(E11)) {
        if (s.is_infinity()) continue;
        auto d = SurfaceDescriptor::decomposable(E11, {0, s});
        auto c = maximality_certificate(d);
        INFO(c.str());
        CHECK(c.lift_checked);
        CHECK(c.lift_ok);
    }
    CHECK_FALSE(maximality_certificate(SurfaceDescriptor::trivial(E11)).facts.empty());
    CHECK_FALSE(maximality_certificate(SurfaceDescriptor::atiyah0(E11)).lift_checked);
    try {
        maximality_certificate(SurfaceDescriptor::decomposable(E11, {1, Point::infinity()}));
        FAIL("expected NotMaximalClass");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotMaximalClass);
    }
}

TEST_CASE("isomorphism check rejects a wrong gauge") {
    Point z1 = make_point(E11, 8, 3), z2 = make_point(E11, 4, 4);
    BundleModel T = trivial_model(E11);
    BundleModel S = elm_model(T, {z1, E11.fp(1), E11.fp(0)}, 1);
    CHECK(extends_to_isomorphism(T, T, Mat2::constant(E11, E11.fp(1), E11.fp(2), E11.fp(0), E11.fp(1))));
    CHECK_FALSE(extends_to_isomorphism(T, S, Mat2::identity(E11)));
    BundleModel S2 = elm_model(T, {z2, E11.fp(1), E11.fp(0)}, 1);
    CHECK_FALSE(extends_to_isomorphism(S, S2, Mat2::identity(E11)));
    CHECK(extends_to_isomorphism(S, S, Mat2::identity(E11)));
}
