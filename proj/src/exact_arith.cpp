#include "ruled/exact_arith.hpp"

#include <algorithm>
#include <sstream>

namespace ruled {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::DivisionByZero: return "DivisionByZero";
        case Errc::IncompatibleField: return "IncompatibleField";
        case Errc::ZeroFunction: return "ZeroFunction";
        case Errc::PointNotOnCurve: return "PointNotOnCurve";
        case Errc::NotPrincipal: return "NotPrincipal";
        case Errc::NonRationalSupport: return "NonRationalSupport";
        case Errc::IncompleteTorsion: return "IncompleteTorsion";
        case Errc::InvalidSection: return "InvalidSection";
        case Errc::NotDisjoint: return "NotDisjoint";
        case Errc::EqualSections: return "EqualSections";
        case Errc::NotGlobalSection: return "NotGlobalSection";
        case Errc::FieldTooLarge: return "FieldTooLarge";
        case Errc::BudgetExceeded: return "BudgetExceeded";
        case Errc::BaseMismatch: return "BaseMismatch";
        case Errc::InconsistentCenter: return "InconsistentCenter";
        case Errc::NotMaximalClass: return "NotMaximalClass";
        case Errc::CharTwoOutOfScope: return "CharTwoOutOfScope";
        case Errc::InvalidModulus: return "InvalidModulus";
        case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(Errc c, const std::string& msg) : std::runtime_error(std::string(errc_name(c)) + ": " + msg), code_(c) {}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % d == 0) return n == d;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

void check_modulus(std::uint64_t p) {
    if (p <= 3 || !is_prime(p)) throw Error(Errc::InvalidModulus, "modulus must be a prime > 3, got " + std::to_string(p));
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
    a %= p;
    if (a == 0) throw Error(Errc::DivisionByZero, "inverse of zero mod " + std::to_string(p));
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a);
    while (nr != 0) {
        std::int64_t q = r / nr;
        std::int64_t tmp = t - q * nt; t = nt; nt = tmp;
        tmp = r - q * nr; r = nr; nr = tmp;
    }
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

// ---- Fp

Fp::Fp(std::int64_t v, std::uint64_t p) : p_(p) {
    if (p == 0) throw Error(Errc::InvalidModulus, "zero modulus");
    std::int64_t m = static_cast<std::int64_t>(p);
    std::int64_t r = v % m;
    if (r < 0) r += m;
    v_ = static_cast<std::uint64_t>(r);
}

void Fp::same_field(const Fp& o) const {
    if (p_ != o.p_) throw Error(Errc::IncompatibleField, "moduli " + std::to_string(p_) + " and " + std::to_string(o.p_));
}

Fp Fp::operator+(const Fp& o) const {
    same_field(o);
    std::uint64_t s = v_ + o.v_;
    if (s >= p_) s -= p_;
    return from_residue(s, p_);
}

Fp Fp::operator-(const Fp& o) const {
    same_field(o);
    return from_residue(v_ >= o.v_ ? v_ - o.v_ : v_ + p_ - o.v_, p_);
}

Fp Fp::operator*(const Fp& o) const {
    same_field(o);
    return from_residue(mulmod(v_, o.v_, p_), p_);
}

Fp Fp::operator/(const Fp& o) const { return *this * o.inv(); }

Fp Fp::operator-() const { return from_residue(v_ == 0 ? 0 : p_ - v_, p_); }

Fp Fp::inv() const { return from_residue(invmod(v_, p_), p_); }

Fp Fp::pow(std::uint64_t e) const { return from_residue(powmod(v_, e, p_), p_); }

bool Fp::is_square() const { return v_ == 0 || powmod(v_, (p_ - 1) / 2, p_) == 1; }

Fp Fp::sqrt() const {
    if (!is_square()) throw Error(Errc::NonRationalSupport, str() + " is not a square mod " + std::to_string(p_));
    if (v_ == 0) return *this;
    // Tonelli-Shanks
    std::uint64_t q = p_ - 1;
    int s = 0;
    while ((q & 1) == 0) { q >>= 1; ++s; }
    std::uint64_t z = 2;
    while (powmod(z, (p_ - 1) / 2, p_) != p_ - 1) ++z;
    std::uint64_t m = s, c = powmod(z, q, p_), t = powmod(v_, q, p_), r = powmod(v_, (q + 1) / 2, p_);
    while (t != 1) {
        std::uint64_t i = 0, tt = t;
        while (tt != 1) { tt = mulmod(tt, tt, p_); ++i; }
        std::uint64_t b = c;
        for (std::uint64_t j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p_);
        m = i;
        c = mulmod(b, b, p_);
        t = mulmod(t, c, p_);
        r = mulmod(r, b, p_);
    }
    return from_residue(std::min(r, p_ - r), p_);
}

std::int64_t Fp::signed_value() const {
    if (v_ > p_ / 2) return static_cast<std::int64_t>(v_) - static_cast<std::int64_t>(p_);
    return static_cast<std::int64_t>(v_);
}

std::string Fp::str() const { return std::to_string(v_); }

int Degree::value() const {
    if (!finite_) throw Error(Errc::ZeroFunction, "degree of the zero polynomial is minus infinity");
    return d_;
}

// ---- Poly

Poly::Poly(std::uint64_t p, std::vector<std::uint64_t> coeffs) : p_(p), c_(std::move(coeffs)) {
    if (p_ > 0) for (auto& c : c_) c %= p_;
    trim();
}

Poly Poly::constant(const Fp& c) { return Poly(c.modulus(), {c.value()}); }

Poly Poly::x(std::uint64_t p) { return Poly(p, {0, 1}); }

Poly Poly::linear_root(const Fp& x0) { return Poly(x0.modulus(), {(-x0).value(), 1}); }

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

void Poly::same_field(const Poly& o) const {
    if (p_ != o.p_) throw Error(Errc::IncompatibleField, "polynomials over different fields");
}

Degree Poly::degree() const { return c_.empty() ? Degree::minus_infinity() : Degree(deg()); }

Fp Poly::coeff(std::size_t i) const { return Fp::from_residue(i < c_.size() ? c_[i] : 0, p_); }

Fp Poly::lead() const {
    if (c_.empty()) throw Error(Errc::ZeroFunction, "leading coefficient of zero");
    return Fp::from_residue(c_.back(), p_);
}

Fp Poly::eval(const Fp& x) const {
    if (x.modulus() != p_) throw Error(Errc::IncompatibleField, "evaluation point");
    std::uint64_t r = 0, xv = x.value();
    for (std::size_t i = c_.size(); i-- > 0;) {
        r = mulmod(r, xv, p_) + c_[i];
        if (r >= p_) r -= p_;
    }
    return Fp::from_residue(r, p_);
}

Poly Poly::operator+(const Poly& o) const {
    same_field(o);
    std::vector<std::uint64_t> r(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::uint64_t s = (i < c_.size() ? c_[i] : 0) + (i < o.c_.size() ? o.c_[i] : 0);
        r[i] = s >= p_ ? s - p_ : s;
    }
    return Poly(p_, std::move(r));
}

Poly Poly::operator-() const {
    std::vector<std::uint64_t> r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i] == 0 ? 0 : p_ - c_[i];
    return Poly(p_, std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    same_field(o);
    if (c_.empty() || o.c_.empty()) return Poly(p_);
    std::vector<unsigned __int128> acc(c_.size() + o.c_.size() - 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) {
            acc[i + j] += static_cast<unsigned __int128>(c_[i]) * o.c_[j];
            if (acc[i + j] >> 120) acc[i + j] %= p_;
        }
    }
    std::vector<std::uint64_t> r(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) r[i] = static_cast<std::uint64_t>(acc[i] % p_);
    return Poly(p_, std::move(r));
}

Poly Poly::operator*(const Fp& c) const {
    if (c.modulus() != p_) throw Error(Errc::IncompatibleField, "scalar");
    std::vector<std::uint64_t> r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = mulmod(c_[i], c.value(), p_);
    return Poly(p_, std::move(r));
}

Poly Poly::pow(unsigned e) const {
    Poly r = Poly(p_, {1});
    Poly b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

Poly Poly::derivative() const {
    std::vector<std::uint64_t> r;
    for (std::size_t i = 1; i < c_.size(); ++i) r.push_back(mulmod(c_[i], i % p_, p_));
    return Poly(p_, std::move(r));
}

Poly Poly::monic() const {
    if (c_.empty()) return *this;
    return *this * lead().inv();
}

void Poly::divmod(const Poly& d, Poly& q, Poly& r) const {
    same_field(d);
    if (d.is_zero()) throw Error(Errc::DivisionByZero, "polynomial division by zero");
    std::vector<std::uint64_t> rem = c_;
    int dd = d.deg();
    if (deg() < dd) { q = Poly(p_); r = *this; return; }
    std::vector<std::uint64_t> quo(deg() - dd + 1, 0);
    std::uint64_t li = invmod(d.c_.back(), p_);
    for (int i = deg(); i >= dd; --i) {
        std::uint64_t c = mulmod(rem[i], li, p_);
        quo[i - dd] = c;
        if (c == 0) continue;
        for (int j = 0; j <= dd; ++j) {
            std::uint64_t t = mulmod(c, d.c_[j], p_);
            rem[i - dd + j] = rem[i - dd + j] >= t ? rem[i - dd + j] - t : rem[i - dd + j] + p_ - t;
        }
    }
    q = Poly(p_, std::move(quo));
    r = Poly(p_, std::move(rem));
}

Poly Poly::operator/(const Poly& d) const { Poly q(p_), r(p_); divmod(d, q, r); return q; }

Poly Poly::operator%(const Poly& d) const { Poly q(p_), r(p_); divmod(d, q, r); return r; }

bool Poly::divides(const Poly& other) const {
    if (is_zero()) return other.is_zero();
    return (other % *this).is_zero();
}

int Poly::multiplicity(const Fp& x0) const {
    if (is_zero()) throw Error(Errc::ZeroFunction, "multiplicity in the zero polynomial");
    // repeated synthetic division by (x - x0)
    int m = 0;
    std::vector<std::uint64_t> cur = c_;
    std::uint64_t a = x0.value();
    while (true) {
        std::uint64_t acc = 0;
        std::vector<std::uint64_t> quo(cur.size() > 0 ? cur.size() - 1 : 0);
        for (std::size_t i = cur.size(); i-- > 0;) {
            std::uint64_t next = (mulmod(acc, a, p_) + cur[i]) % p_;
            if (i > 0) quo[i - 1] = next;
            acc = next;
        }
        if (acc != 0) return m;
        ++m;
        cur = std::move(quo);
    }
}

std::vector<std::pair<Fp, int>> Poly::roots() const {
    std::vector<std::pair<Fp, int>> out;
    if (deg() <= 0) return out;
    int found = 0;
    for (std::uint64_t v = 0; v < p_ && found < deg(); ++v) {
        Fp x0 = Fp::from_residue(v, p_);
        if (!eval(x0).is_zero()) continue;
        int m = multiplicity(x0);
        out.emplace_back(x0, m);
        found += m;
    }
    return out;
}

std::string Poly::str(char var) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = c_.size(); i-- > 0;) {
        if (c_[i] == 0) continue;
        std::int64_t c = Fp::from_residue(c_[i], p_).signed_value();
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        std::uint64_t a = static_cast<std::uint64_t>(c < 0 ? -c : c);
        if (i == 0 || a != 1) os << a;
        if (i > 0) {
            if (a != 1) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    return os.str();
}

Poly poly_gcd(const Poly& f, const Poly& g) {
    Poly a = f, b = g;
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

// ---- RatFunc

RatFunc::RatFunc(std::uint64_t p) : num_(p), den_(p, {1}) {}

RatFunc::RatFunc(const Poly& num) : num_(num), den_(num.modulus(), {1}) {}

RatFunc::RatFunc(const Poly& num, const Poly& den) : num_(num), den_(den) {
    if (den.is_zero()) throw Error(Errc::DivisionByZero, "zero denominator");
    normalize();
}

void RatFunc::normalize() {
    if (num_.is_zero()) { den_ = Poly(num_.modulus(), {1}); return; }
    Poly g = poly_gcd(num_, den_);
    if (g.deg() > 0) { num_ = num_ / g; den_ = den_ / g; }
    Fp l = den_.lead();
    if (l.value() != 1) { Fp li = l.inv(); num_ = num_ * li; den_ = den_ * li; }
}

int RatFunc::degree() const {
    if (num_.is_zero()) throw Error(Errc::ZeroFunction, "degree of zero rational function");
    return num_.deg() - den_.deg();
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
    if (den_ == o.den_) return RatFunc(num_ + o.num_, den_);
    return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::operator*(const RatFunc& o) const {
    if (den_.deg() == 0 && o.den_.deg() == 0) {
        RatFunc r(num_ * o.num_);
        return r;
    }
    return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::operator/(const RatFunc& o) const { return *this * o.inv(); }

RatFunc RatFunc::operator*(const Fp& c) const {
    RatFunc r = *this;
    r.num_ = num_ * c;
    if (r.num_.is_zero()) r.den_ = Poly(num_.modulus(), {1});
    return r;
}

RatFunc RatFunc::operator-() const {
    RatFunc r = *this;
    r.num_ = -num_;
    return r;
}

RatFunc RatFunc::inv() const {
    if (num_.is_zero()) throw Error(Errc::DivisionByZero, "inverse of zero rational function");
    return RatFunc(den_, num_);
}

RatFunc RatFunc::pow(int e) const {
    if (e < 0) return inv().pow(-e);
    RatFunc r = RatFunc(Poly(modulus(), {1}));
    RatFunc b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

Fp RatFunc::eval(const Fp& x0) const {
    Fp d = den_.eval(x0);
    if (d.is_zero()) throw Error(Errc::DivisionByZero, "pole at x = " + x0.str());
    return num_.eval(x0) / d;
}

std::string RatFunc::str() const {
    if (den_.deg() == 0) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

RatFunc normalize(const RatFunc& f) { return RatFunc(f.num(), f.den()); }

int order_at(const RatFunc& f, const Fp& x0) {
    if (f.is_zero()) throw Error(Errc::ZeroFunction, "order of the zero function");
    return f.num().multiplicity(x0) - f.den().multiplicity(x0);
}

// ---- linear algebra over F_p

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(std::vector<std::vector<std::uint64_t>>& m, std::size_t ncols, std::uint64_t p) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
        std::size_t sel = row;
        while (sel < m.size() && m[sel][col] % p == 0) ++sel;
        if (sel == m.size()) continue;
        std::swap(m[sel], m[row]);
        std::uint64_t inv = invmod(m[row][col], p);
        for (auto& v : m[row]) v = mulmod(v, inv, p);
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][col] == 0) continue;
            std::uint64_t f = m[r][col];
            for (std::size_t c = col; c < ncols; ++c) {
                std::uint64_t t = mulmod(f, m[row][c], p);
                m[r][c] = m[r][c] >= t ? m[r][c] - t : m[r][c] + p - t;
            }
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

std::vector<std::vector<std::uint64_t>> nullspace(std::vector<std::vector<std::uint64_t>> rows,
                                                  std::size_t ncols, std::uint64_t p) {
    for (auto& r : rows) {
        r.resize(ncols, 0);
        for (auto& v : r) v %= p;
    }
    auto piv = rref(rows, ncols, p);
    std::vector<bool> is_piv(ncols, false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<std::vector<std::uint64_t>> basis;
    for (std::size_t free = 0; free < ncols; ++free) {
        if (is_piv[free]) continue;
        std::vector<std::uint64_t> v(ncols, 0);
        v[free] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) {
            std::uint64_t c = rows[i][free];
            v[piv[i]] = c == 0 ? 0 : p - c;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::size_t matrix_rank(std::vector<std::vector<std::uint64_t>> rows, std::size_t ncols, std::uint64_t p) {
    for (auto& r : rows) {
        r.resize(ncols, 0);
        for (auto& v : r) v %= p;
    }
    return rref(rows, ncols, p).size();
}

}  // namespace ruled
