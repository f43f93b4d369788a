#pragma once

#include <random>

#include "ruled/bundle_model.hpp"

/// Seeded random inputs for property checks.
namespace ruled::sampling {

inline Point pick(std::mt19937_64& rng, const std::vector<Point>& pts) { return pts[rng() % pts.size()]; }

inline Fp random_fp(std::mt19937_64& rng, const Curve& E) { return Fp::from_residue(rng() % E.p(), E.p()); }

inline Fp random_unit(std::mt19937_64& rng, const Curve& E) { return Fp::from_residue(1 + rng() % (E.p() - 1), E.p()); }

/// Principal divisor with at most 6 support points.
inline Divisor random_principal(std::mt19937_64& rng, const Curve& E) {
    auto pts = rational_points(E);
    Divisor D;
    int k = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < k; ++i) D.add(pick(rng, pts), static_cast<int>(rng() % 5) - 2);
    DivisorClass c = class_of(E, D);
    D.add(negate(E, c.sum), 1);
    D.add(Point::infinity(), -(c.degree + 1));
    return D;
}

/// A function with rational zeros and poles.
inline CurveFunction random_function(std::mt19937_64& rng, const Curve& E) {
    return function_with_divisor(E, random_principal(rng, E)) * random_unit(rng, E);
}

/// Section whose coordinates have rational support.
inline BundleSection random_section(std::mt19937_64& rng, const Curve& E) {
    switch (rng() % 4) {
        case 0: return BundleSection::constant(E, random_fp(rng, E), random_unit(rng, E));
        case 1: return {random_function(rng, E), CurveFunction::constant(E, 1)};
        default: return {random_function(rng, E), random_function(rng, E)};
    }
}

inline ElmCenter random_center(std::mt19937_64& rng, const Curve& E) {
    auto pts = rational_points(E);
    Point z = pick(rng, pts);
    switch (rng() % 3) {
        case 0: return {z, E.fp(1), E.fp(0)};
        case 1: return {z, E.fp(0), E.fp(1)};
        default: return {z, random_fp(rng, E), E.fp(1)};
    }
}

/// Model from the trivial one by up to max_elms elementary transformations.
inline BundleModel random_model(std::mt19937_64& rng, const Curve& E, int max_elms) {
    BundleModel m = trivial_model(E);
    int n = static_cast<int>(rng() % (max_elms + 1));
    for (int i = 0; i < n; ++i) m = elm_model(m, random_center(rng, E), rng());
    return m;
}

/// Gauge regular and invertible on every chart of a model that has O special.
inline GaugeTransformation random_gauge(std::mt19937_64& rng, const BundleModel& m) {
    const Curve& E = m.base();
    auto unit_matrix = [&] {
        for (;;) {
            Fp a = random_fp(rng, E), b = random_fp(rng, E), c = random_fp(rng, E), d = random_fp(rng, E);
            if (!(a * d - b * c).is_zero()) return Mat2::constant(E, a, b, c, d);
        }
    };
    // h in L(3 O): regular away from O
    CurveFunction h = CurveFunction::constant(E, random_fp(rng, E)) + CurveFunction::x(E) * random_fp(rng, E) +
                      CurveFunction::y(E) * random_fp(rng, E);
    CurveFunction one = CurveFunction::constant(E, 1), zero = CurveFunction(E);
    Mat2 U = rng() % 2 ? Mat2{one, h, zero, one} : Mat2{one, zero, h, one};
    GaugeTransformation g{unit_matrix() * U, {}};
    for (const Point& z : m.special_points()) {
        Mat2 A = unit_matrix(), B = unit_matrix();
        CurveFunction t = uniformizer(E, z);
        g.local.emplace(z, Mat2{A.m00 + t * B.m00, A.m01 + t * B.m01, A.m10 + t * B.m10, A.m11 + t * B.m11});
    }
    return g;
}

inline BundleModel with_infinity_special(const BundleModel& m) {
    if (m.is_special(Point::infinity())) return m;
    return m.with_transition(Point::infinity(), Mat2::identity(m.base()));
}

}  // namespace ruled::sampling
