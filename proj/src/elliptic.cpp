#include "ruled/elliptic.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

namespace ruled {

// ---- Curve and points

Curve::Curve(std::uint64_t p, std::int64_t a, std::int64_t b) : p_(p) {
    check_modulus(p);
    a_ = Fp(a, p);
    b_ = Fp(b, p);
    Fp disc = Fp(4, p) * a_ * a_ * a_ + Fp(27, p) * b_ * b_;
    if (disc.is_zero()) throw Error(Errc::InvalidModulus, "singular curve: 4a^3 + 27b^2 = 0");
    f_ = Poly(p, {b_.value(), a_.value(), 0, 1});
}

std::string Curve::str() const {
    std::ostringstream os;
    os << "E/F" << p_ << ": y^2 = x^3";
    auto term = [&](const Fp& c, const char* suffix) {
        if (c.is_zero()) return;
        std::int64_t v = c.signed_value();
        os << (v < 0 ? " - " : " + ") << (v < 0 ? -v : v) << suffix;
    };
    term(a_, "*x");
    term(b_, "");
    return os.str();
}

const Fp& Point::x() const {
    if (inf_) throw Error(Errc::PointNotOnCurve, "x-coordinate of the point at infinity");
    return x_;
}

const Fp& Point::y() const {
    if (inf_) throw Error(Errc::PointNotOnCurve, "y-coordinate of the point at infinity");
    return y_;
}

bool Point::operator==(const Point& o) const {
    if (inf_ || o.inf_) return inf_ == o.inf_;
    return x_ == o.x_ && y_ == o.y_;
}

std::strong_ordering Point::operator<=>(const Point& o) const {
    if (inf_ || o.inf_) return static_cast<int>(!inf_) <=> static_cast<int>(!o.inf_);
    if (auto c = x_.value() <=> o.x_.value(); c != 0) return c;
    return y_.value() <=> o.y_.value();
}

std::string Point::str() const {
    if (inf_) return "O";
    return "(" + x_.str() + "," + y_.str() + ")";
}

bool on_curve(const Curve& E, const Point& P) {
    if (P.is_infinity()) return true;
    if (P.x().modulus() != E.p() || P.y().modulus() != E.p()) return false;
    return P.y() * P.y() == E.cubic().eval(P.x());
}

Point make_point(const Curve& E, std::int64_t x, std::int64_t y) {
    Point P(E.fp(x), E.fp(y));
    if (!on_curve(E, P)) throw Error(Errc::PointNotOnCurve, P.str() + " is not on " + E.str());
    return P;
}

namespace {

void require_on(const Curve& E, const Point& P) {
    if (!on_curve(E, P)) throw Error(Errc::PointNotOnCurve, P.str() + " is not on " + E.str());
}

}  // namespace

Point negate(const Curve& E, const Point& P) {
    require_on(E, P);
    if (P.is_infinity()) return P;
    return Point(P.x(), -P.y());
}

Point add_points(const Curve& E, const Point& P, const Point& Q) {
    require_on(E, P);
    require_on(E, Q);
    if (P.is_infinity()) return Q;
    if (Q.is_infinity()) return P;
    Fp lambda;
    if (P.x() == Q.x()) {
        if ((P.y() + Q.y()).is_zero()) return Point::infinity();
        lambda = (Fp(3, E.p()) * P.x() * P.x() + E.a()) / (Fp(2, E.p()) * P.y());
    } else {
        lambda = (Q.y() - P.y()) / (Q.x() - P.x());
    }
    Fp x3 = lambda * lambda - P.x() - Q.x();
    Fp y3 = lambda * (P.x() - x3) - P.y();
    return Point(x3, y3);
}

Point sub_points(const Curve& E, const Point& P, const Point& Q) { return add_points(E, P, negate(E, Q)); }

Point scalar_mul(const Curve& E, std::int64_t k, const Point& P) {
    Point base = k < 0 ? negate(E, P) : P;
    std::uint64_t n = static_cast<std::uint64_t>(k < 0 ? -k : k);
    Point r = Point::infinity();
    while (n) {
        if (n & 1) r = add_points(E, r, base);
        base = add_points(E, base, base);
        n >>= 1;
    }
    return r;
}

bool is_two_torsion(const Curve& E, const Point& P) {
    require_on(E, P);
    return P.is_infinity() || P.y().is_zero();
}

std::vector<Point> rational_points(const Curve& E) {
    std::vector<Point> pts{Point::infinity()};
    for (std::uint64_t v = 0; v < E.p(); ++v) {
        Fp x = Fp::from_residue(v, E.p());
        Fp r = E.cubic().eval(x);
        if (!r.is_square()) continue;
        Fp y = r.sqrt();
        pts.emplace_back(x, y);
        if (!y.is_zero()) pts.emplace_back(x, -y);
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

TwoTorsion two_torsion(const Curve& E) {
    TwoTorsion t;
    t.points.push_back(Point::infinity());
    for (auto& [x0, m] : E.cubic().roots()) t.points.emplace_back(x0, Fp(0, E.p()));
    std::sort(t.points.begin(), t.points.end());
    t.incomplete = t.points.size() != 4;
    return t;
}

// ---- divisors

void Divisor::add(const Point& P, int n) {
    if (n == 0) return;
    int& c = terms_[P];
    c += n;
    if (c == 0) terms_.erase(P);
}

int Divisor::coeff(const Point& P) const {
    auto it = terms_.find(P);
    return it == terms_.end() ? 0 : it->second;
}

int Divisor::degree() const {
    int d = 0;
    for (auto& [P, n] : terms_) d += n;
    return d;
}

bool Divisor::is_effective() const {
    for (auto& [P, n] : terms_)
        if (n < 0) return false;
    return true;
}

Divisor Divisor::operator+(const Divisor& o) const {
    Divisor r = *this;
    for (auto& [P, n] : o.terms_) r.add(P, n);
    return r;
}

Divisor Divisor::operator-() const { return *this * -1; }

Divisor Divisor::operator-(const Divisor& o) const { return *this + (-o); }

Divisor Divisor::operator*(int k) const {
    Divisor r;
    if (k == 0) return r;
    for (auto& [P, n] : terms_) r.terms_[P] = n * k;
    return r;
}

std::string Divisor::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [P, n] : terms_) {
        if (!first) os << (n < 0 ? " - " : " + ");
        else if (n < 0) os << "-";
        int a = n < 0 ? -n : n;
        if (a != 1) os << a << "*";
        os << P.str();
        first = false;
    }
    return os.str();
}

std::string DivisorClass::str() const { return "(" + std::to_string(degree) + "," + sum.str() + ")"; }

DivisorClass class_of(const Curve& E, const Divisor& D) {
    DivisorClass c;
    for (auto& [P, n] : D.terms()) {
        c.degree += n;
        c.sum = add_points(E, c.sum, scalar_mul(E, n, P));
    }
    return c;
}

DivisorClass class_add(const Curve& E, const DivisorClass& c1, const DivisorClass& c2) {
    return {c1.degree + c2.degree, add_points(E, c1.sum, c2.sum)};
}

DivisorClass class_neg(const Curve& E, const DivisorClass& c) { return {-c.degree, negate(E, c.sum)}; }

DivisorClass class_sub(const Curve& E, const DivisorClass& c1, const DivisorClass& c2) {
    return class_add(E, c1, class_neg(E, c2));
}

DivisorClass class_scale(const Curve& E, int k, const DivisorClass& c) { return {k * c.degree, scalar_mul(E, k, c.sum)}; }

DivisorClass point_class(const Point& P) { return {1, P}; }

bool is_trivial(const DivisorClass& c) { return c.degree == 0 && c.sum.is_infinity(); }

Divisor representative(const DivisorClass& c) {
    Divisor D = Divisor::point(Point::infinity(), c.degree - 1);
    D.add(c.sum, 1);
    return D;
}

bool is_principal(const Curve& E, const Divisor& D) { return is_trivial(class_of(E, D)); }

int h0(const Curve& E, const DivisorClass& c) {
    (void)E;
    if (c.degree < 0) return 0;
    if (c.degree >= 1) return c.degree;
    return c.sum.is_infinity() ? 1 : 0;
}

int h1(const Curve& E, const DivisorClass& c) { return h0(E, class_neg(E, c)); }

// ---- functions

CurveFunction::CurveFunction(const Curve& E) : E_(E), a_(E.p()), b_(E.p()) {}

CurveFunction::CurveFunction(const Curve& E, const RatFunc& a, const RatFunc& b) : E_(E), a_(a), b_(b) {
    if (a.modulus() != E.p() || b.modulus() != E.p()) throw Error(Errc::IncompatibleField, "function coefficients");
}

CurveFunction CurveFunction::constant(const Curve& E, std::int64_t c) { return constant(E, E.fp(c)); }

CurveFunction CurveFunction::constant(const Curve& E, const Fp& c) {
    return CurveFunction(E, RatFunc::constant(c), RatFunc(E.p()));
}

CurveFunction CurveFunction::x(const Curve& E) { return CurveFunction(E, RatFunc(Poly::x(E.p())), RatFunc(E.p())); }

CurveFunction CurveFunction::y(const Curve& E) {
    return CurveFunction(E, RatFunc(E.p()), RatFunc(Poly(E.p(), {1})));
}

CurveFunction CurveFunction::x_minus(const Curve& E, const Fp& x0) {
    return CurveFunction(E, RatFunc(Poly::linear_root(x0)), RatFunc(E.p()));
}

CurveFunction CurveFunction::operator+(const CurveFunction& o) const { return CurveFunction(E_, a_ + o.a_, b_ + o.b_); }

CurveFunction CurveFunction::operator-(const CurveFunction& o) const { return CurveFunction(E_, a_ - o.a_, b_ - o.b_); }

CurveFunction CurveFunction::operator-() const { return CurveFunction(E_, -a_, -b_); }

CurveFunction CurveFunction::operator*(const CurveFunction& o) const {
    if (b_.is_zero() && o.b_.is_zero()) return CurveFunction(E_, a_ * o.a_, RatFunc(E_.p()));
    RatFunc f(E_.cubic());
    return CurveFunction(E_, a_ * o.a_ + b_ * o.b_ * f, a_ * o.b_ + b_ * o.a_);
}

CurveFunction CurveFunction::operator*(const Fp& c) const { return CurveFunction(E_, a_ * c, b_ * c); }

RatFunc CurveFunction::norm() const { return a_ * a_ - b_ * b_ * RatFunc(E_.cubic()); }

CurveFunction CurveFunction::conj() const { return CurveFunction(E_, a_, -b_); }

CurveFunction CurveFunction::inv() const {
    if (is_zero()) throw Error(Errc::DivisionByZero, "inverse of the zero function");
    if (b_.is_zero()) return CurveFunction(E_, a_.inv(), RatFunc(E_.p()));
    RatFunc n = norm().inv();
    return CurveFunction(E_, a_ * n, -(b_ * n));
}

CurveFunction CurveFunction::operator/(const CurveFunction& o) const { return *this * o.inv(); }

CurveFunction CurveFunction::pow(int e) const {
    if (e < 0) return inv().pow(-e);
    CurveFunction r = constant(E_, 1), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

std::string CurveFunction::str() const {
    if (is_zero()) return "0";
    if (b_.is_zero()) return a_.str();
    std::string bs = b_.is_constant() ? b_.str() : "(" + b_.str() + ")";
    std::string ys = bs == "1" ? "y" : bs + "*y";
    if (a_.is_zero()) return ys;
    std::string as = a_.den().deg() == 0 ? a_.str() : "(" + a_.str() + ")";
    return as + " + " + ys;
}

// ---- valuations

namespace {

int pole_order_at_infinity(const RatFunc& r) { return -r.degree(); }

}  // namespace

int valuation(const Curve& E, const CurveFunction& h, const Point& P) {
    if (h.is_zero()) throw Error(Errc::ZeroFunction, "valuation of the zero function");
    require_on(E, P);
    const RatFunc& a = h.a();
    const RatFunc& b = h.b();
    constexpr int kInf = INT_MAX;
    if (P.is_infinity()) {
        int va = a.is_zero() ? kInf : 2 * pole_order_at_infinity(a);
        int vb = b.is_zero() ? kInf : 2 * pole_order_at_infinity(b) - 3;
        return std::min(va, vb);
    }
    const Fp& x0 = P.x();
    if (P.y().is_zero()) {
        int va = a.is_zero() ? kInf : 2 * order_at(a, x0);
        int vb = b.is_zero() ? kInf : 2 * order_at(b, x0) + 1;
        return std::min(va, vb);
    }
    if (a.is_zero()) return order_at(b, x0);
    if (b.is_zero()) return order_at(a, x0);
    int oa = order_at(a, x0), ob = order_at(b, x0);
    if (oa != ob) return std::min(oa, ob);
    RatFunc t = RatFunc(Poly::linear_root(x0)).pow(-oa);
    RatFunc a1 = a * t, b1 = b * t;
    Fp v = a1.eval(x0) + b1.eval(x0) * P.y();
    if (!v.is_zero()) return oa;
    RatFunc n = a1 * a1 - b1 * b1 * RatFunc(E.cubic());
    return oa + order_at(n, x0);
}

Divisor divisor_of(const Curve& E, const CurveFunction& h) {
    if (h.is_zero()) throw Error(Errc::ZeroFunction, "divisor of the zero function");
    std::uint64_t p = E.p();
    Poly da = h.a().den(), db = h.b().den();
    Poly g = poly_gcd(da, db);
    Poly D = da * (db / g);
    Poly A = h.a().num() * (D / da);
    Poly B = h.b().num() * (D / db);
    Poly N = A * A - B * B * E.cubic();
    std::vector<Fp> xs;
    for (const Poly* q : {&D, &N}) {
        auto rts = q->roots();
        int total = 0;
        for (auto& [r, m] : rts) total += m;
        if (total != q->deg()) throw Error(Errc::NonRationalSupport, "an irreducible factor of degree > 1 in " + q->str());
        for (auto& [r, m] : rts) xs.push_back(r);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    Divisor out;
    for (const Fp& x0 : xs) {
        Fp fx = E.cubic().eval(x0);
        if (!fx.is_square()) throw Error(Errc::NonRationalSupport, "support over x = " + x0.str() + " is not rational");
        Fp y0 = fx.sqrt();
        Point P(x0, y0);
        out.add(P, valuation(E, h, P));
        if (!y0.is_zero()) {
            Point Q(x0, -y0);
            out.add(Q, valuation(E, h, Q));
        }
    }
    out.add(Point::infinity(), valuation(E, h, Point::infinity()));
    (void)p;
    return out;
}

CurveFunction function_with_divisor(const Curve& E, const Divisor& D) {
    for (auto& [P, n] : D.terms()) require_on(E, P);
    if (!is_principal(E, D)) throw Error(Errc::NotPrincipal, D.str() + " is not principal");
    std::uint64_t p = E.p();
    std::vector<Point> qs;
    RatFunc vert(Poly(p, {1}));
    for (auto& [P, n] : D.terms()) {
        if (P.is_infinity()) continue;
        if (n > 0) {
            for (int i = 0; i < n; ++i) qs.push_back(P);
        } else {
            Point mP = negate(E, P);
            for (int i = 0; i < -n; ++i) qs.push_back(mP);
            vert = vert * RatFunc(Poly::linear_root(P.x())).pow(-n);
        }
    }
    CurveFunction F = CurveFunction::constant(E, 1);
    Point R = Point::infinity();
    for (const Point& Q : qs) {
        if (R.is_infinity()) { R = Q; continue; }
        if (R.x() == Q.x() && (R.y() + Q.y()).is_zero()) {
            F = F * CurveFunction::x_minus(E, R.x());
            R = Point::infinity();
            continue;
        }
        Fp lambda = R == Q ? (Fp(3, p) * R.x() * R.x() + E.a()) / (Fp(2, p) * R.y())
                           : (Q.y() - R.y()) / (Q.x() - R.x());
        Point S = add_points(E, R, Q);
        // y - y_R - lambda (x - x_R)
        CurveFunction line(E, RatFunc(Poly(p, {(lambda * R.x() - R.y()).value(), (-lambda).value()})),
                           RatFunc(Poly(p, {1})));
        F = F * line / CurveFunction::x_minus(E, S.x());
        R = S;
    }
    return F * CurveFunction(E, vert.inv(), RatFunc(p));
}

CurveFunction uniformizer(const Curve& E, const Point& P) {
    require_on(E, P);
    if (P.is_infinity()) return CurveFunction::x(E) / CurveFunction::y(E);
    if (P.y().is_zero()) return CurveFunction::y(E);
    return CurveFunction::x_minus(E, P.x());
}

// ---- series

Fp Series::coeff(int k) const {
    if (k < start) return Fp::from_residue(0, p);
    if (k >= precision()) throw Error(Errc::BudgetExceeded, "series coefficient beyond precision");
    return Fp::from_residue(c[k - start], p);
}

Series Series::operator+(const Series& o) const {
    Series r;
    r.p = p ? p : o.p;
    r.start = std::min(start, o.start);
    int abs = std::min(precision(), o.precision());
    if (abs <= r.start) { r.start = abs; return r; }
    r.c.assign(abs - r.start, 0);
    for (int k = r.start; k < abs; ++k) {
        std::uint64_t s = 0;
        if (k >= start) s += c[k - start];
        if (k >= o.start) s += o.c[k - o.start];
        r.c[k - r.start] = s % r.p;
    }
    return r;
}

Series Series::operator-(const Series& o) const {
    Series n = o;
    for (auto& v : n.c) v = v == 0 ? 0 : n.p - v;
    return *this + n;
}

Series Series::operator*(const Series& o) const {
    Series r;
    r.p = p ? p : o.p;
    r.start = start + o.start;
    std::size_t n = std::min(c.size(), o.c.size());
    r.c.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (c[i] == 0) continue;
        for (std::size_t j = 0; i + j < n; ++j) r.c[i + j] = (r.c[i + j] + mulmod(c[i], o.c[j], r.p)) % r.p;
    }
    return r;
}

Series Series::trimmed() const {
    Series r = *this;
    std::size_t k = 0;
    while (k < r.c.size() && r.c[k] == 0) ++k;
    r.start += static_cast<int>(k);
    r.c.erase(r.c.begin(), r.c.begin() + static_cast<std::ptrdiff_t>(k));
    return r;
}

Series Series::inv() const {
    Series s = trimmed();
    if (s.c.empty()) throw Error(Errc::BudgetExceeded, "series inverse needs more precision");
    Series r;
    r.p = s.p;
    r.start = -s.start;
    std::size_t n = s.c.size();
    r.c.assign(n, 0);
    std::uint64_t i0 = invmod(s.c[0], s.p);
    r.c[0] = i0;
    for (std::size_t k = 1; k < n; ++k) {
        std::uint64_t acc = 0;
        for (std::size_t j = 1; j <= k; ++j) acc = (acc + mulmod(s.c[j], r.c[k - j], s.p)) % s.p;
        r.c[k] = mulmod(acc == 0 ? 0 : s.p - acc, i0, s.p);
    }
    return r;
}

namespace {

Series scaled(const Series& s, std::uint64_t k) {
    Series r = s;
    for (auto& v : r.c) v = mulmod(v, k, s.p);
    return r;
}

Series with_constant(const Series& s, std::uint64_t k) {
    if (k == 0) return s;
    Series cst;
    cst.p = s.p;
    cst.start = 0;
    int abs = s.precision();
    if (abs <= 0) return s;
    cst.c.assign(abs, 0);
    cst.c[0] = k;
    return s + cst;
}

Series constant_series(std::uint64_t p, std::uint64_t k, int n) {
    Series s;
    s.p = p;
    s.start = 0;
    s.c.assign(std::max(n, 1), 0);
    s.c[0] = k % p;
    return s;
}

Series eval_poly(const Poly& P, const Series& xs, int n) {
    if (P.is_zero()) {
        Series z;
        z.p = xs.p;
        z.start = xs.precision() + 1000000;
        return z;
    }
    const auto& c = P.raw();
    if (c.size() == 1) return constant_series(xs.p, c[0], n + std::max(0, -xs.start) * static_cast<int>(c.size()));
    Series r = scaled(xs, c.back());
    r = with_constant(r, c[c.size() - 2]);
    for (std::size_t i = c.size() - 2; i-- > 0;) {
        r = r * xs;
        r = with_constant(r, c[i]);
    }
    return r;
}

// Local coordinate series of x and y at P with relative precision n.
void local_xy(const Curve& E, const Point& P, int n, Series& xs, Series& ys) {
    std::uint64_t p = E.p();
    xs = Series{p, 0, {}};
    ys = Series{p, 0, {}};
    if (P.is_infinity()) {
        // t = x/y, v = 1/y = t^3 + a t v^2 + b v^3
        int N = n + 8;
        Series t{p, 1, std::vector<std::uint64_t>(N, 0)};
        t.c[0] = 1;
        Series v{p, 3, std::vector<std::uint64_t>(N, 0)};
        v.c[0] = 1;
        Series t3 = t * t * t;
        for (int it = 0; it < N + 2; ++it) {
            Series nv = t3 + scaled(t * v * v, E.a().value()) + scaled(v * v * v, E.b().value());
            nv.c.resize(std::min<std::size_t>(nv.c.size(), N));
            v = nv;
        }
        ys = v.inv();
        xs = t * ys;
        ys.c.resize(std::min<std::size_t>(ys.c.size(), n));
        xs.c.resize(std::min<std::size_t>(xs.c.size(), n));
        return;
    }
    Fp x0 = P.x(), y0 = P.y();
    if (!y0.is_zero()) {
        xs.c.assign(n, 0);
        xs.c[0] = x0.value();
        if (n > 1) xs.c[1] = 1;
        // y^2 = F(t) = f(x0 + t)
        std::vector<std::uint64_t> F(std::max(n, 4), 0);
        F[0] = E.cubic().eval(x0).value();
        F[1] = (Fp(3, p) * x0 * x0 + E.a()).value();
        F[2] = (Fp(3, p) * x0).value();
        F[3] = 1;
        ys.c.assign(n, 0);
        ys.c[0] = y0.value();
        std::uint64_t inv2y = (Fp(2, p) * y0).inv().value();
        for (int k = 1; k < n; ++k) {
            std::uint64_t acc = F[k];
            for (int i = 1; i < k; ++i) acc = (acc + p - mulmod(ys.c[i], ys.c[k - i], p)) % p;
            ys.c[k] = mulmod(acc, inv2y, p);
        }
        return;
    }
    // t = y, x = x0 + s with f'(x0) s + 3 x0 s^2 + s^3 = t^2
    std::uint64_t fp1 = (Fp(3, p) * x0 * x0 + E.a()).value();
    std::uint64_t ifp1 = invmod(fp1, p);
    Series t2{p, 2, std::vector<std::uint64_t>(n, 0)};
    t2.c[0] = 1;
    Series s = scaled(t2, ifp1);
    for (int it = 0; it < n + 2; ++it) {
        Series ns = t2 - scaled(s * s, (Fp(3, p) * x0).value()) - s * s * s;
        ns = scaled(ns, ifp1);
        ns.c.resize(std::min<std::size_t>(ns.c.size(), n));
        s = ns;
    }
    // pad s to start at 0
    Series zero0{p, 0, std::vector<std::uint64_t>(n, 0)};
    xs = with_constant(zero0 + s, x0.value());
    xs.c.resize(std::min<std::size_t>(xs.c.size(), n));
    ys = Series{p, 1, std::vector<std::uint64_t>(n, 0)};
    ys.c[0] = 1;
}

}  // namespace

Series expand(const Curve& E, const CurveFunction& f, const Point& P, int abs_prec) {
    require_on(E, P);
    int nu = valuation(E, f, P);
    int need = abs_prec - nu;
    Series out{E.p(), nu, {}};
    if (need <= 0) { out.start = abs_prec; return out; }
    Poly da = f.a().den(), db = f.b().den();
    Poly g = poly_gcd(da, db);
    Poly D = da * (db / g);
    Poly A = f.a().num() * (D / da);
    Poly B = f.b().num() * (D / db);
    int degs = std::max({A.deg(), B.deg(), D.deg(), 1});
    for (int W = need + 6 + 2 * degs; W < 100000; W *= 2) {
        Series xs, ys;
        local_xy(E, P, W, xs, ys);
        Series num = eval_poly(A, xs, W);
        if (!B.is_zero()) num = num + eval_poly(B, xs, W) * ys;
        num = num.trimmed();
        Series den = eval_poly(D, xs, W).trimmed();
        if (num.c.empty() || den.c.empty()) continue;
        Series r = (num * den.inv()).trimmed();
        if (r.start != nu) {
            if (r.c.empty() || r.start > nu) continue;
            throw Error(Errc::BudgetExceeded, "series expansion disagrees with the valuation");
        }
        if (static_cast<int>(r.c.size()) < need) continue;
        r.c.resize(need);
        return r;
    }
    throw Error(Errc::BudgetExceeded, "series expansion did not converge");
}

Fp leading_coefficient(const Curve& E, const CurveFunction& f, const Point& P) {
    int nu = valuation(E, f, P);
    return expand(E, f, P, nu + 1).coeff(nu);
}

Fp value_at(const Curve& E, const CurveFunction& f, const Point& P) {
    if (f.is_zero()) return Fp(0, E.p());
    int nu = valuation(E, f, P);
    if (nu < 0) throw Error(Errc::DivisionByZero, "pole at " + P.str());
    if (nu > 0) return Fp(0, E.p());
    if (!P.is_infinity()) {
        const Fp& x0 = P.x();
        auto regular = [&](const RatFunc& r) { return r.is_zero() || !r.den().eval(x0).is_zero(); };
        if (regular(f.a()) && regular(f.b())) {
            Fp v = f.a().is_zero() ? Fp(0, E.p()) : f.a().eval(x0);
            if (!f.b().is_zero()) v += f.b().eval(x0) * P.y();
            return v;
        }
    }
    return leading_coefficient(E, f, P);
}

// ---- Riemann-Roch spaces

std::vector<CurveFunction> riemann_roch_space(const Curve& E, const Divisor& G) {
    std::uint64_t p = E.p();
    for (auto& [P, n] : G.terms()) require_on(E, P);
    // denominator clearing the affine poles
    std::map<Fp, int> kx;
    for (auto& [P, n] : G.terms()) {
        if (P.is_infinity() || n <= 0) continue;
        int k = P.y().is_zero() ? (n + 1) / 2 : n;
        int& cur = kx[P.x()];
        cur = std::max(cur, k);
    }
    Poly Den(p, {1});
    for (auto& [x0, k] : kx) Den = Den * Poly::linear_root(x0).pow(k);
    int M = G.coeff(Point::infinity()) + 2 * Den.deg();
    if (M < 0) return {};
    std::vector<CurveFunction> cand;
    for (int i = 0; 2 * i <= M; ++i) cand.emplace_back(E, RatFunc(Poly::x(p).pow(i)), RatFunc(p));
    for (int i = 0; 2 * i + 3 <= M; ++i) cand.emplace_back(E, RatFunc(p), RatFunc(Poly::x(p).pow(i)));
    CurveFunction DenF(E, RatFunc(Den), RatFunc(p));
    // conditions nu_P(h) >= nu_P(Den) - G_P at the affine points involved
    std::vector<Point> pts;
    for (auto& [P, n] : G.terms())
        if (!P.is_infinity()) { pts.push_back(P); pts.push_back(negate(E, P)); }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<std::vector<std::uint64_t>> rows;
    for (const Point& P : pts) {
        int bound = valuation(E, DenF, P) - G.coeff(P);
        if (bound <= 0) continue;
        std::vector<Series> ser;
        for (auto& h : cand) ser.push_back(expand(E, h, P, bound));
        for (int k = 0; k < bound; ++k) {
            std::vector<std::uint64_t> row;
            for (auto& s : ser) row.push_back(s.coeff(k).value());
            rows.push_back(std::move(row));
        }
    }
    auto ns = nullspace(rows, cand.size(), p);
    std::vector<CurveFunction> out;
    CurveFunction invDen = DenF.inv();
    for (auto& v : ns) {
        CurveFunction h(E);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i]) h = h + cand[i] * Fp::from_residue(v[i], p);
        out.push_back(h * invDen);
    }
    return out;
}

// ---- automorphisms

Point CurveAutomorphism::apply(const Curve& E, const Point& P) const {
    require_on(E, P);
    if (P.is_infinity()) return P;
    Fp u2 = u * u;
    return Point(u2 * P.x(), u2 * u * P.y());
}

std::string CurveAutomorphism::str() const { return "(x,y) -> (" + (u * u).str() + "*x, " + (u * u * u).str() + "*y)"; }

std::vector<CurveAutomorphism> curve_automorphisms(const Curve& E) {
    std::uint64_t p = E.p();
    int order = 2;
    if (E.b().is_zero()) order = 4;
    if (E.a().is_zero()) order = 6;
    std::vector<CurveAutomorphism> out;
    for (std::uint64_t v = 1; v < p; ++v) {
        Fp u = Fp::from_residue(v, p);
        if (u.pow(order) == Fp(1, p)) out.push_back({u});
    }
    return out;
}

}  // namespace ruled
