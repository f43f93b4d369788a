#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ruled/exact_arith.hpp"

namespace ruled {

/// y^2 = x^3 + a x + b over F_p.
class Curve {
public:
    Curve(std::uint64_t p, std::int64_t a, std::int64_t b);
    std::uint64_t p() const noexcept { return p_; }
    const Fp& a() const noexcept { return a_; }
    const Fp& b() const noexcept { return b_; }
    /// The cubic x^3 + a x + b.
    const Poly& cubic() const noexcept { return f_; }
    Fp fp(std::int64_t v) const { return Fp(v, p_); }
    bool operator==(const Curve& o) const { return p_ == o.p_ && a_ == o.a_ && b_ == o.b_; }
    std::string str() const;

private:
    std::uint64_t p_;
    Fp a_, b_;
    Poly f_;
};

class Point {
public:
    Point() = default;
    static Point infinity() { return Point(); }
    Point(const Fp& x, const Fp& y) : inf_(false), x_(x), y_(y) {}

    bool is_infinity() const noexcept { return inf_; }
    const Fp& x() const;
    const Fp& y() const;

    bool operator==(const Point& o) const;
    std::strong_ordering operator<=>(const Point& o) const;
    std::string str() const;

private:
    bool inf_ = true;
    Fp x_, y_;
};

bool on_curve(const Curve& E, const Point& P);
Point make_point(const Curve& E, std::int64_t x, std::int64_t y);
Point add_points(const Curve& E, const Point& P, const Point& Q);
Point negate(const Curve& E, const Point& P);
Point sub_points(const Curve& E, const Point& P, const Point& Q);
Point scalar_mul(const Curve& E, std::int64_t k, const Point& P);
bool is_two_torsion(const Curve& E, const Point& P);

/// All rational points, infinity first, then sorted.
std::vector<Point> rational_points(const Curve& E);

struct TwoTorsion {
    std::vector<Point> points;
    bool incomplete = false;
};
TwoTorsion two_torsion(const Curve& E);

/// Finite formal sum of rational points in canonical point order.
class Divisor {
public:
    Divisor() = default;
    static Divisor point(const Point& P, int n = 1) { Divisor d; d.add(P, n); return d; }

    void add(const Point& P, int n);
    int coeff(const Point& P) const;
    int degree() const;
    bool empty() const noexcept { return terms_.empty(); }
    bool is_effective() const;
    const std::map<Point, int>& terms() const noexcept { return terms_; }

    Divisor operator+(const Divisor& o) const;
    Divisor operator-(const Divisor& o) const;
    Divisor operator-() const;
    Divisor operator*(int k) const;
    bool operator==(const Divisor& o) const { return terms_ == o.terms_; }
    std::string str() const;

private:
    std::map<Point, int> terms_;
};

/// (degree, sum under the group law); complete invariant of linear equivalence.
struct DivisorClass {
    int degree = 0;
    Point sum;
    bool operator==(const DivisorClass& o) const { return degree == o.degree && sum == o.sum; }
    std::string str() const;
};

DivisorClass class_of(const Curve& E, const Divisor& D);
DivisorClass class_add(const Curve& E, const DivisorClass& c1, const DivisorClass& c2);
DivisorClass class_neg(const Curve& E, const DivisorClass& c);
DivisorClass class_sub(const Curve& E, const DivisorClass& c1, const DivisorClass& c2);
DivisorClass class_scale(const Curve& E, int k, const DivisorClass& c);
/// Class of the point divisor [P].
DivisorClass point_class(const Point& P);
bool is_trivial(const DivisorClass& c);
/// A divisor in the class: (d-1) O + (s).
Divisor representative(const DivisorClass& c);

bool is_principal(const Curve& E, const Divisor& D);
int h0(const Curve& E, const DivisorClass& c);
int h1(const Curve& E, const DivisorClass& c);

/// a(x) + b(x) y modulo y^2 = x^3 + a x + b.
class CurveFunction {
public:
    explicit CurveFunction(const Curve& E);
    CurveFunction(const Curve& E, const RatFunc& a, const RatFunc& b);
    static CurveFunction constant(const Curve& E, std::int64_t c);
    static CurveFunction constant(const Curve& E, const Fp& c);
    static CurveFunction x(const Curve& E);
    static CurveFunction y(const Curve& E);
    /// x - x0
    static CurveFunction x_minus(const Curve& E, const Fp& x0);

    const Curve& curve() const noexcept { return E_; }
    const RatFunc& a() const noexcept { return a_; }
    const RatFunc& b() const noexcept { return b_; }
    bool is_zero() const noexcept { return a_.is_zero() && b_.is_zero(); }
    bool is_constant() const noexcept { return b_.is_zero() && a_.is_constant(); }

    CurveFunction operator+(const CurveFunction& o) const;
    CurveFunction operator-(const CurveFunction& o) const;
    CurveFunction operator*(const CurveFunction& o) const;
    CurveFunction operator/(const CurveFunction& o) const;
    CurveFunction operator*(const Fp& c) const;
    CurveFunction operator-() const;
    CurveFunction& operator+=(const CurveFunction& o) { return *this = *this + o; }
    CurveFunction& operator*=(const CurveFunction& o) { return *this = *this * o; }
    CurveFunction inv() const;
    CurveFunction pow(int e) const;
    /// a - b y
    CurveFunction conj() const;
    /// a^2 - b^2 f, the norm down to F_p(x).
    RatFunc norm() const;
    bool operator==(const CurveFunction& o) const { return a_ == o.a_ && b_ == o.b_; }
    std::string str() const;

private:
    Curve E_;
    RatFunc a_, b_;
};

int valuation(const Curve& E, const CurveFunction& f, const Point& P);
Divisor divisor_of(const Curve& E, const CurveFunction& f);
CurveFunction function_with_divisor(const Curve& E, const Divisor& D);
/// A function with a simple zero at P: x - x0, y, or x/y.
CurveFunction uniformizer(const Curve& E, const Point& P);

/// Truncated Laurent series in the local uniformizer:
/// sum c[i] t^(start+i) + O(t^(start + c.size())).
struct Series {
    std::uint64_t p = 0;
    int start = 0;
    std::vector<std::uint64_t> c;

    int precision() const { return start + static_cast<int>(c.size()); }
    /// Coefficient of t^k; zero below start, throws past the precision.
    Fp coeff(int k) const;
    Series operator+(const Series& o) const;
    Series operator-(const Series& o) const;
    Series operator*(const Series& o) const;
    Series trimmed() const;
    Series inv() const;
};

/// Expansion of f at P with coefficients known for every exponent below abs_prec.
Series expand(const Curve& E, const CurveFunction& f, const Point& P, int abs_prec);
/// Leading coefficient of f at P in the standard uniformizer.
Fp leading_coefficient(const Curve& E, const CurveFunction& f, const Point& P);
/// Value at P; throws DivisionByZero at a pole.
Fp value_at(const Curve& E, const CurveFunction& f, const Point& P);

/// Basis of L(G) = { g : div g + G >= 0 } for G on rational points.
std::vector<CurveFunction> riemann_roch_space(const Curve& E, const Divisor& G);

/// (x, y) -> (u^2 x, u^3 y).
struct CurveAutomorphism {
    Fp u;
    Point apply(const Curve& E, const Point& P) const;
    std::string str() const;
};
std::vector<CurveAutomorphism> curve_automorphisms(const Curve& E);

}  // namespace ruled
