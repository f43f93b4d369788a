#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ruled/transform_engine.hpp"

namespace ruled {

enum class AutKernel { Gm, Ga, TwoTorsionKlein, TrivialGroup, FullPGL2, ProductCxPGL2, PGL3, WholeAbelianSurface, EllipticCurveGroup, None };
enum class AutQuotient { EllipticCurve, Point };
enum class Splits { Yes, No, NotApplicable };

std::string to_string(AutKernel k);
std::string to_string(AutQuotient q);
std::string to_string(Splits s);
/// ProductCxPGL2 counts its PGL2 factor, the C factor being the quotient.
int kernel_dimension(AutKernel k);

/// Identity component of the automorphism group and its maximality verdict.
struct AutDescription {
    std::optional<int> dimension;
    AutKernel kernel = AutKernel::None;
    AutQuotient quotient = AutQuotient::Point;
    /// kernel -> group -> quotient, so dimension = dim kernel + dim quotient.
    bool extension_shaped = false;
    std::optional<bool> commutative;
    Splits splits = Splits::NotApplicable;
    bool maximal = false;
    std::optional<ChainCertificate> chain_witness;
    std::vector<std::string> justification;

    bool dimension_consistent() const;
    std::string str() const;
};

struct DeltaKernelReport {
    /// Indices into the four matrices I, diag(-1,1), [[0,1],[1,0]], [[0,-1],[1,0]].
    int table[4][4] = {};
    bool closed = false;
    bool involutions = false;
    bool noncyclic = false;
    /// Each matrix conjugates every d_j to +-d_j.
    bool normalizes = false;
    /// Size of the centralizer of the fiberwise action in PGL2(F_p), found exhaustively.
    std::uint64_t centralizer_size = 0;
    bool centralizer_is_the_four = false;
    std::vector<Point> two_torsion;
    bool ok() const;
    std::string str() const;
};

/// Aut of the surface for an elliptic descriptor or a Hirzebruch tag.
/// With delta_detail, Atiyah1 needs the full rational two-torsion (CharTwoOutOfScope otherwise).
AutDescription aut_of_bundle(const SurfaceDescriptor& d, bool delta_detail = false, std::uint64_t seed = 0);

enum class SurfaceTag {
    RationalMinimal, RationalNonMinimal, RuledElliptic, RuledHigherGenus, Abelian, BlownUpAbelian, K3, Enriques,
    BiellipticWithP1Quotient, QuotientProperlyElliptic, ProperlyEllipticOther, GeneralType
};

struct SurfaceClass {
    SurfaceTag tag = SurfaceTag::GeneralType;
    /// RationalMinimal: the Hirzebruch index, or empty for P2.
    std::optional<int> hirzebruch;
    std::optional<SurfaceDescriptor> ruled;
    /// RuledHigherGenus: the trivial bundle C x P1.
    bool trivial = false;
    /// QuotientProperlyElliptic: whether X itself is in the set E.
    bool in_E = false;

    static SurfaceClass p2();
    static SurfaceClass hirzebruch_surface(int n);
    static SurfaceClass of(SurfaceTag tag);
    static SurfaceClass ruled_elliptic(const SurfaceDescriptor& d);
    static SurfaceClass ruled_higher_genus(bool trivial);
    static SurfaceClass quotient_properly_elliptic(bool in_E);
    std::string str() const;
};
std::string to_string(SurfaceTag t);

AutDescription classify_theorem_D(const SurfaceClass& c, std::uint64_t seed = 0);

/// Klein group check for the fiberwise two-torsion action; IncompleteTorsion without four rational 2-torsion points.
DeltaKernelReport delta_kernel_check(const Curve& E);

struct MaximalityCertificate {
    SurfaceDescriptor descriptor;
    std::vector<std::string> facts;
    /// Sample translation lifted on models, for degree 0 decomposable classes.
    std::optional<Point> translation;
    std::optional<Point> z1, z2;
    bool lift_checked = false;
    bool lift_ok = false;
    std::string str() const;
};

/// NotMaximalClass outside the classes with maximal Aut.
MaximalityCertificate maximality_certificate(const SurfaceDescriptor& d);

}  // namespace ruled
