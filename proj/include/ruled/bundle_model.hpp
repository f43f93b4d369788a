#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ruled/elliptic.hpp"

namespace ruled {

/// [[m00, m01], [m10, m11]] over the function field.
struct Mat2 {
    CurveFunction m00, m01, m10, m11;

    static Mat2 identity(const Curve& E);
    static Mat2 constant(const Curve& E, const Fp& a, const Fp& b, const Fp& c, const Fp& d);
    static Mat2 diag(const CurveFunction& a, const CurveFunction& b);

    CurveFunction det() const;
    Mat2 adj() const;
    Mat2 inv() const;
    Mat2 operator*(const Mat2& o) const;
    bool operator==(const Mat2& o) const;
    bool is_upper_triangular() const { return m10.is_zero(); }
    bool is_diagonal() const { return m10.is_zero() && m01.is_zero(); }
    std::string str() const;
};

/// x -> [u(x) : v(x)] in the chart U0.
struct BundleSection {
    CurveFunction u, v;

    static BundleSection constant(const Curve& E, const Fp& u0, const Fp& v0);
    static BundleSection infinite(const Curve& E);
    static BundleSection zero(const Curve& E);
    /// Same projective section.
    bool same_as(const BundleSection& o) const;
};

/// Two column coordinates (w1, w2) = M (u, v).
BundleSection apply(const Mat2& M, const BundleSection& s);

/// Chart U0 = C minus the special points, plus one small chart at each special point z.
/// The transition at z maps chart-0 coordinates to chart-z coordinates.
class BundleModel {
public:
    explicit BundleModel(const Curve& E);

    const Curve& base() const noexcept { return E_; }
    const std::map<Point, Mat2>& transitions() const noexcept { return tau_; }
    std::vector<Point> special_points() const;
    bool is_special(const Point& z) const { return tau_.count(z) > 0; }
    /// Identity when z is not special.
    Mat2 transition(const Point& z) const;

    BundleModel with_transition(const Point& z, const Mat2& M) const;
    bool operator==(const BundleModel& o) const { return E_ == o.E_ && tau_ == o.tau_; }

private:
    Curve E_;
    std::map<Point, Mat2> tau_;
};

/// New chart-0 coordinates are chart0 times old ones, likewise for each local chart.
struct GaugeTransformation {
    Mat2 chart0;
    std::map<Point, Mat2> local;

    static GaugeTransformation identity(const Curve& E);
    Mat2 at(const Point& z) const;
};

BundleModel apply_gauge(const BundleModel& m, const GaugeTransformation& g);
BundleSection transport(const GaugeTransformation& g, const BundleSection& s);

struct NormalizedModel {
    BundleModel model;
    GaugeTransformation gauge;
};

BundleModel trivial_model(const Curve& E);

/// Whether chart0, read as a map from chart 0 of m1 to chart 0 of m2, glues to an isomorphism
/// of the P^1-bundles; needs rational support for the divisors of its entries.
bool extends_to_isomorphism(const BundleModel& m1, const BundleModel& m2, const Mat2& chart0);

/// Throws InvalidSection for the zero pair or a foreign curve.
void check_section(const BundleModel& m, const BundleSection& s);

NormalizedModel normalize_section_to_infinity(const BundleModel& m, const BundleSection& s);
NormalizedModel normalize_two_sections(const BundleModel& m, const BundleSection& s1, const BundleSection& s2);

int det_degree(const BundleModel& m);
DivisorClass det_class(const BundleModel& m);

/// Class of L(s), read off the normalized diagonal.
DivisorClass line_subbundle_class(const BundleModel& m, const BundleSection& s);
/// deg L(s) by a colength computation in F_p[x,y]/(y^2 - f); no rational support needed.
int line_subbundle_degree(const BundleModel& m, const BundleSection& s);

int self_intersection(const BundleModel& m, const BundleSection& s);
int intersection_number(const BundleModel& m, const BundleSection& s1, const BundleSection& s2);

/// [w1 : w2] at z in the chart at z, scaled so the first nonzero entry is 1.
std::pair<Fp, Fp> fiber_point(const BundleModel& m, const BundleSection& s, const Point& z);

struct ElmCenter {
    Point z;
    Fp u0, v0;
};

struct ElmOutcome {
    BundleModel model;
    /// Base point of the inverse, in the new chart at z.
    ElmCenter inverse_base;
    CurveFunction f;
};

ElmOutcome elm_model_ex(const BundleModel& m, const ElmCenter& p, std::uint64_t seed = 0);
BundleModel elm_model(const BundleModel& m, const ElmCenter& p, std::uint64_t seed = 0);

/// Fiberwise automorphism [[1, gamma], [0, 1]]; m must be upper triangular.
GaugeTransformation apply_f_gamma(const BundleModel& m, const CurveFunction& gamma);
/// Whether f_gamma moves [0:1] at z.
bool f_gamma_moves_base_point(const BundleModel& m, const CurveFunction& gamma, const Point& z);
/// Class of det(V)^-1 (x) L(infinite section)^2 for an upper triangular model.
DivisorClass f_gamma_class(const BundleModel& m);
/// Basis of the global sections gamma for an upper triangular model.
std::vector<CurveFunction> f_gamma_space(const BundleModel& m);

/// Min of self_intersection over (u, v) in L(bound O)^2; FieldTooLarge past the budget.
int segre_search(const BundleModel& m, int degree_bound, std::uint64_t budget = 200000);

/// Basis of H^0(V (x) N^-1) as sections (u, v) of V whose L contains N.
std::vector<BundleSection> twisted_sections(const BundleModel& m, const DivisorClass& N);

struct MaximalSubbundle {
    DivisorClass N;
    std::vector<BundleSection> basis;
};

struct SegreData {
    std::uint64_t p = 0;
    int segre = 0;
    int max_degree = 0;
    DivisorClass det;
    std::vector<MaximalSubbundle> maximal;
    /// False when the maximal subbundles are not defined over F_p; then maximal is empty.
    bool rational = true;
    /// Number of minimal sections over F_p.
    std::uint64_t minimal_sections() const;
};

/// Exact Segre invariant by linear algebra over rational classes N.
SegreData segre_linear(const BundleModel& m);

}  // namespace ruled
