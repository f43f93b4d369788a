#include "ruled/cli.hpp"

#include <cctype>
#include <optional>

namespace ruled::cli {

namespace {

class Cursor {
public:
    Cursor(std::string_view text, const std::string& what) : text_(text), what_(what) {}

    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= text_.size();
    }
    char peek() {
        skip_ws();
        return pos < text_.size() ? text_[pos] : '\0';
    }
    bool accept(std::string_view s) {
        skip_ws();
        if (text_.substr(pos, s.size()) != s) return false;
        pos += s.size();
        return true;
    }
    void expect(std::string_view s) {
        if (!accept(s)) fail("expected '" + std::string(s) + "'");
    }
    void expect_end() {
        if (!eof()) fail("unexpected trailing input");
    }

    std::uint64_t unsigned_integer(std::uint64_t limit = UINT64_MAX / 10) {
        skip_ws();
        std::size_t start = pos;
        if (pos >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos]))) fail("expected an integer");
        std::uint64_t v = 0;
        while (pos < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos]))) {
            if (v > limit) fail("integer too large", start);
            v = v * 10 + static_cast<std::uint64_t>(text_[pos++] - '0');
        }
        return v;
    }
    /// Signed decimal reduced mod p digit by digit.
    Fp residue(std::uint64_t p) {
        bool neg = accept("-");
        if (!neg) accept("+");
        Fp v = literal(p);
        return neg ? -v : v;
    }
    Fp literal(std::uint64_t p) {
        skip_ws();
        if (pos >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos]))) fail("expected an integer");
        std::uint64_t v = 0;
        while (pos < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos])))
            v = (mulmod(v, 10 % p, p) + static_cast<std::uint64_t>(text_[pos++] - '0') % p) % p;
        return Fp::from_residue(v, p);
    }
    int small_int() {
        bool neg = accept("-");
        std::uint64_t v = unsigned_integer(100000);
        if (v > 1000000) fail("integer out of range");
        return neg ? -static_cast<int>(v) : static_cast<int>(v);
    }
    std::string word() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos]))) ++pos;
        return std::string(text_.substr(start, pos - start));
    }

    [[noreturn]] void fail(const std::string& msg, std::optional<std::size_t> at = std::nullopt,
                           Errc code = Errc::ParseError) const {
        std::size_t col = at.value_or(pos);
        throw Error(code, what_ + ": " + msg + " at column " + std::to_string(col + 1) + "\n  " + std::string(text_) +
                              "\n  " + std::string(col, ' ') + "^");
    }

private:
    std::string_view text_;
    std::string what_;
};

/// Rational expressions in x (and y when allowed) evaluated in a field T.
template <class T>
class ExprParser {
public:
    ExprParser(Cursor& c, std::uint64_t p, T one, T x, std::optional<T> y, int max_slashes)
        : c_(c), p_(p), one_(std::move(one)), x_(std::move(x)), y_(std::move(y)), slashes_(max_slashes) {}

    T expr() {
        T v = c_.accept("-") ? -term() : (c_.accept("+"), term());
        for (;;) {
            if (c_.accept("+")) v = v + term();
            else if (c_.accept("-")) v = v - term();
            else return v;
        }
    }

private:
    T term() {
        T v = unary();
        for (;;) {
            char ch = c_.peek();
            if (ch == '*') {
                c_.accept("*");
                v = v * unary();
            } else if (ch == '/') {
                std::size_t at = c_.pos;
                if (slashes_ == 0) c_.fail("only one '/' is allowed", at);
                if (slashes_ > 0) --slashes_;
                c_.accept("/");
                T d = unary();
                if (d.is_zero()) c_.fail("division by zero", at, Errc::DivisionByZero);
                v = v / d;
            } else if (ch == 'x' || ch == 'y' || ch == '(') {
                v = v * unary();
            } else {
                return v;
            }
        }
    }
    T unary() {
        if (c_.accept("-")) return -unary();
        return factor();
    }
    T factor() {
        T base = atom();
        if (!c_.accept("^")) return base;
        std::size_t at = c_.pos;
        int e = c_.small_int();
        if (e < 0 && base.is_zero()) c_.fail("negative power of zero", at, Errc::DivisionByZero);
        if (e > 10000 || e < -10000) c_.fail("exponent out of range", at);
        return base.pow(e);
    }
    T atom() {
        char ch = c_.peek();
        std::size_t at = c_.pos;
        if (ch == '(') {
            c_.accept("(");
            T v = expr();
            c_.expect(")");
            return v;
        }
        if (ch == 'x') {
            c_.accept("x");
            return x_;
        }
        if (ch == 'y') {
            if (!y_) c_.fail("'y' is not allowed here", at);
            c_.accept("y");
            return *y_;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) return one_ * c_.literal(p_);
        c_.fail("expected a number, x, y or '('", at);
    }

    Cursor& c_;
    std::uint64_t p_;
    T one_, x_;
    std::optional<T> y_;
    int slashes_;
};

Point point_at(Cursor& c, const Curve& E) {
    std::size_t start = c.pos;
    if (c.accept("O")) return Point::infinity();
    c.expect("(");
    Fp x = c.residue(E.p());
    c.expect(",");
    Fp y = c.residue(E.p());
    c.expect(")");
    Point P(x, y);
    if (!on_curve(E, P)) {
        c.skip_ws();
        c.fail(P.str() + " is not on " + E.str(), start, Errc::PointNotOnCurve);
    }
    return P;
}

CurveFunction function_at(Cursor& c, const Curve& E) {
    ExprParser<CurveFunction> ep(c, E.p(), CurveFunction::constant(E, 1), CurveFunction::x(E), CurveFunction::y(E), -1);
    return ep.expr();
}

SurfaceDescriptor descriptor_at(Cursor& c, const Curve* E) {
    std::size_t start = c.pos;
    auto need_curve = [&] {
        if (!E) c.fail("this descriptor needs a curve", start);
        return *E;
    };
    if (c.accept("T")) return SurfaceDescriptor::trivial(need_curve());
    if (c.accept("A0")) return SurfaceDescriptor::atiyah0(need_curve());
    if (c.accept("A1")) return SurfaceDescriptor::atiyah1(need_curve());
    if (c.accept("F")) {
        std::size_t at = c.pos;
        int n = c.small_int();
        if (n < 0) c.fail("Hirzebruch index must be non-negative", at);
        return SurfaceDescriptor::hirzebruch(n);
    }
    if (c.accept("D")) {
        const Curve& C = need_curve();
        c.expect("(");
        int d = c.small_int();
        c.expect(";");
        c.expect("s");
        c.expect("=");
        Point s = point_at(c, C);
        c.expect(")");
        return SurfaceDescriptor::decomposable(C, {d, s});
    }
    c.fail("expected T, D(<d>; s=(x,y)), A0, A1 or F<n>");
}

}  // namespace

Curve parse_curve(std::string_view text, const std::string& what) {
    Cursor c(text, what);
    c.expect("E/F");
    std::size_t at = c.pos;
    std::uint64_t p = c.unsigned_integer();
    if (!is_prime(p) || p <= 3) c.fail("modulus must be a prime greater than 3", at, Errc::InvalidModulus);
    c.expect(":");
    c.expect("y^2");
    c.expect("=");
    c.skip_ws();
    at = c.pos;
    ExprParser<RatFunc> ep(c, p, RatFunc::constant(Fp(1, p)), RatFunc(Poly::x(p)), std::nullopt, 0);
    RatFunc rhs = ep.expr();
    c.expect_end();
    const Poly& f = rhs.num();
    if (rhs.den().deg() != 0 || f.deg() != 3 || f.coeff(3) != Fp(1, p) || !f.coeff(2).is_zero())
        c.fail("right-hand side must be x^3 + a*x + b", at);
    try {
        return Curve(p, f.coeff(1).signed_value(), f.coeff(0).signed_value());
    } catch (const Error& e) {
        c.fail(e.what(), at, e.code());
    }
}

Point parse_point(const Curve& E, std::string_view text, const std::string& what) {
    Cursor c(text, what);
    Point P = point_at(c, E);
    c.expect_end();
    return P;
}

SurfaceDescriptor parse_descriptor(const Curve* E, std::string_view text, const std::string& what) {
    Cursor c(text, what);
    SurfaceDescriptor d = descriptor_at(c, E);
    c.expect_end();
    return d;
}

ElmPoint parse_elm_center(const Curve& E, std::string_view text, const std::string& what) {
    Cursor c(text, what);
    ElmPoint p;
    c.expect("z");
    c.expect("=");
    p.z = point_at(c, E);
    c.expect(";");
    c.expect("loc");
    c.expect("=");
    c.skip_ws();
    std::size_t at = c.pos;
    std::string loc = c.word();
    if (loc == "min") p.location = ElmLocation::OnMinimalSection;
    else if (loc == "comp") p.location = ElmLocation::OnComplementarySection;
    else if (loc == "q") p.location = ElmLocation::AtSpecialPoint;
    else if (loc == "generic") p.location = ElmLocation::GenericOffNamedSections;
    else if (loc == "coords") p.location = ElmLocation::ModelCoordinates;
    else c.fail("expected min, comp, q, generic or coords", at);
    if (p.location == ElmLocation::ModelCoordinates) {
        c.expect("[");
        Fp u = c.residue(E.p());
        c.expect(":");
        Fp v = c.residue(E.p());
        c.expect("]");
        if (u.is_zero() && v.is_zero()) c.fail("[0:0] is not a point of P1", at);
        p.coords = {u, v};
    }
    c.expect_end();
    return p;
}

RatFunc parse_ratfunc(std::uint64_t p, std::string_view text, const std::string& what) {
    Cursor c(text, what);
    check_modulus(p);
    ExprParser<RatFunc> ep(c, p, RatFunc::constant(Fp(1, p)), RatFunc(Poly::x(p)), std::nullopt, 1);
    RatFunc f = ep.expr();
    c.expect_end();
    return f;
}

CurveFunction parse_curve_function(const Curve& E, std::string_view text, const std::string& what) {
    Cursor c(text, what);
    CurveFunction f = function_at(c, E);
    c.expect_end();
    return f;
}

BundleSection parse_section(const Curve& E, std::string_view text, const std::string& what) {
    Cursor c(text, what);
    c.expect("[");
    BundleSection s{function_at(c, E), CurveFunction(E)};
    c.expect(":");
    std::size_t at = c.pos;
    s.v = function_at(c, E);
    c.expect("]");
    c.expect_end();
    if (s.u.is_zero() && s.v.is_zero()) c.fail("[0:0] is not a section", at, Errc::InvalidSection);
    return s;
}

}  // namespace ruled::cli
