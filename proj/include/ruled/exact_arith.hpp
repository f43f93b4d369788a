#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ruled {

enum class Errc {
    DivisionByZero,
    IncompatibleField,
    ZeroFunction,
    PointNotOnCurve,
    NotPrincipal,
    NonRationalSupport,
    IncompleteTorsion,
    InvalidSection,
    NotDisjoint,
    EqualSections,
    NotGlobalSection,
    FieldTooLarge,
    BudgetExceeded,
    BaseMismatch,
    InconsistentCenter,
    NotMaximalClass,
    CharTwoOutOfScope,
    InvalidModulus,
    ParseError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc c, const std::string& msg);
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

bool is_prime(std::uint64_t n);

/// Throws InvalidModulus unless p is a prime greater than 3.
void check_modulus(std::uint64_t p);

class Fp {
public:
    Fp() = default;
    Fp(std::int64_t v, std::uint64_t p);
    static Fp from_residue(std::uint64_t r, std::uint64_t p) { Fp a; a.v_ = r % p; a.p_ = p; return a; }

    std::uint64_t value() const noexcept { return v_; }
    std::uint64_t modulus() const noexcept { return p_; }
    bool is_zero() const noexcept { return v_ == 0; }

    Fp operator+(const Fp& o) const;
    Fp operator-(const Fp& o) const;
    Fp operator*(const Fp& o) const;
    Fp operator/(const Fp& o) const;
    Fp operator-() const;
    Fp& operator+=(const Fp& o) { return *this = *this + o; }
    Fp& operator-=(const Fp& o) { return *this = *this - o; }
    Fp& operator*=(const Fp& o) { return *this = *this * o; }
    Fp inv() const;
    Fp pow(std::uint64_t e) const;
    bool is_square() const;
    /// A square root when one exists; throws otherwise.
    Fp sqrt() const;

    bool operator==(const Fp& o) const { return v_ == o.v_ && p_ == o.p_; }
    std::strong_ordering operator<=>(const Fp& o) const { return v_ <=> o.v_; }

    /// Representative in (-p/2, p/2].
    std::int64_t signed_value() const;
    std::string str() const;

private:
    void same_field(const Fp& o) const;
    std::uint64_t v_ = 0;
    std::uint64_t p_ = 0;
};

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p);
std::uint64_t invmod(std::uint64_t a, std::uint64_t p);

/// Degree with a minus-infinity value for the zero polynomial.
class Degree {
public:
    constexpr Degree(int d) : d_(d), finite_(true) {}
    static constexpr Degree minus_infinity() { Degree d(0); d.finite_ = false; return d; }

    constexpr bool is_finite() const { return finite_; }
    int value() const;

    constexpr Degree operator+(const Degree& o) const {
        if (!finite_ || !o.finite_) return minus_infinity();
        return Degree(d_ + o.d_);
    }
    constexpr bool operator==(const Degree& o) const {
        return finite_ == o.finite_ && (!finite_ || d_ == o.d_);
    }
    constexpr std::strong_ordering operator<=>(const Degree& o) const {
        if (!finite_ || !o.finite_) return static_cast<int>(finite_) <=> static_cast<int>(o.finite_);
        return d_ <=> o.d_;
    }

private:
    int d_;
    bool finite_;
};

/// Dense univariate polynomial over F_p, lowest coefficient first.
class Poly {
public:
    explicit Poly(std::uint64_t p = 0) : p_(p) {}
    Poly(std::uint64_t p, std::vector<std::uint64_t> coeffs);
    static Poly constant(const Fp& c);
    static Poly x(std::uint64_t p);
    /// x - x0
    static Poly linear_root(const Fp& x0);

    std::uint64_t modulus() const noexcept { return p_; }
    bool is_zero() const noexcept { return c_.empty(); }
    Degree degree() const;
    /// Integer degree; -1 for zero.
    int deg() const noexcept { return static_cast<int>(c_.size()) - 1; }
    Fp coeff(std::size_t i) const;
    Fp lead() const;
    const std::vector<std::uint64_t>& raw() const noexcept { return c_; }

    Fp eval(const Fp& x) const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Fp& c) const;
    Poly operator-() const;
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    Poly pow(unsigned e) const;
    Poly derivative() const;
    Poly monic() const;
    bool operator==(const Poly& o) const { return p_ == o.p_ && c_ == o.c_; }

    /// Quotient and remainder; divisor must be nonzero.
    void divmod(const Poly& d, Poly& q, Poly& r) const;
    Poly operator/(const Poly& d) const;
    Poly operator%(const Poly& d) const;
    bool divides(const Poly& other) const;

    /// Multiplicity of x0 as a root; throws ZeroFunction for zero.
    int multiplicity(const Fp& x0) const;
    /// Roots in F_p with multiplicity, by brute force over the field.
    std::vector<std::pair<Fp, int>> roots() const;

    std::string str(char var = 'x') const;

private:
    void trim();
    void same_field(const Poly& o) const;
    std::uint64_t p_;
    std::vector<std::uint64_t> c_;
};

/// Monic gcd; gcd(0,0) = 0.
Poly poly_gcd(const Poly& f, const Poly& g);

/// Reduced quotient num/den with monic denominator.
class RatFunc {
public:
    explicit RatFunc(std::uint64_t p = 0);
    RatFunc(const Poly& num);
    RatFunc(const Poly& num, const Poly& den);
    static RatFunc constant(const Fp& c) { return RatFunc(Poly::constant(c)); }

    std::uint64_t modulus() const noexcept { return num_.modulus(); }
    const Poly& num() const noexcept { return num_; }
    const Poly& den() const noexcept { return den_; }
    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_constant() const noexcept { return num_.deg() <= 0 && den_.deg() == 0; }
    /// deg num - deg den; the order of the pole at infinity.
    int degree() const;

    RatFunc operator+(const RatFunc& o) const;
    RatFunc operator-(const RatFunc& o) const;
    RatFunc operator*(const RatFunc& o) const;
    RatFunc operator/(const RatFunc& o) const;
    RatFunc operator*(const Fp& c) const;
    RatFunc operator-() const;
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc inv() const;
    RatFunc pow(int e) const;
    bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }

    /// Value at x0; throws DivisionByZero on a pole.
    Fp eval(const Fp& x0) const;
    std::string str() const;

private:
    void normalize();
    Poly num_;
    Poly den_;
};

/// Rebuilds the canonical form of num/den.
RatFunc normalize(const RatFunc& f);

/// Order of vanishing of f at x = x0.
int order_at(const RatFunc& f, const Fp& x0);

/// Nullspace of a matrix over F_p given row-wise; returns a basis.
std::vector<std::vector<std::uint64_t>> nullspace(std::vector<std::vector<std::uint64_t>> rows,
                                                  std::size_t ncols, std::uint64_t p);
/// Rank of a matrix over F_p.
std::size_t matrix_rank(std::vector<std::vector<std::uint64_t>> rows, std::size_t ncols, std::uint64_t p);

}  // namespace ruled
