#pragma once

#include <optional>
#include <string>

#include "ruled/bundle_model.hpp"

namespace ruled {

enum class DescriptorKind { Trivial, Decomposable, Atiyah0, Atiyah1, Hirzebruch, GenusAtLeastTwoTrivial };

/// Canonical class tag of a ruled surface. Decomposable(M) stands for P(O + M).
class SurfaceDescriptor {
public:
    static SurfaceDescriptor trivial(const Curve& E);
    /// Canonicalizes M; the trivial class gives the trivial tag.
    static SurfaceDescriptor decomposable(const Curve& E, const DivisorClass& M);
    static SurfaceDescriptor atiyah0(const Curve& E);
    static SurfaceDescriptor atiyah1(const Curve& E);
    static SurfaceDescriptor hirzebruch(int n);
    static SurfaceDescriptor genus_at_least_two(const std::string& tag);

    DescriptorKind kind() const noexcept { return kind_; }
    bool is_elliptic() const noexcept { return curve_.has_value(); }
    const Curve& curve() const;
    const DivisorClass& M() const;
    int n() const noexcept { return n_; }
    const std::string& tag() const noexcept { return tag_; }

    bool operator==(const SurfaceDescriptor& o) const;
    /// T, D(d; s=(x,y)), A0, A1, F<n>, G(<tag>)
    std::string str() const;

private:
    SurfaceDescriptor() = default;
    DescriptorKind kind_ = DescriptorKind::Trivial;
    std::optional<Curve> curve_;
    DivisorClass M_;
    int n_ = 0;
    std::string tag_;
};

enum class MinimalSectionCount { One, ExactlyTwo, InfinitelyMany, Undetermined };
std::string to_string(MinimalSectionCount c);

/// Representative of {M, -M} with degree >= 0; in degree 0 the smaller sum point.
DivisorClass canonicalize(const Curve& E, const DivisorClass& M);

int segre(const SurfaceDescriptor& d);
MinimalSectionCount minimal_section_count(const SurfaceDescriptor& d);

/// Isomorphism of surfaces; throws BaseMismatch for different elliptic bases.
bool is_isomorphic(const SurfaceDescriptor& d1, const SurfaceDescriptor& d2);

/// Both descriptors in the classes with maximal Aut.
bool is_maximal_class(const SurfaceDescriptor& d);

struct ConjugacyAnswer {
    bool conjugate = false;
    /// Set when either side is outside the maximal classes.
    bool non_maximal = false;
};
ConjugacyAnswer is_conjugate_aut(const SurfaceDescriptor& d1, const SurfaceDescriptor& d2);

struct ModelDescription {
    /// Empty when undetermined.
    std::optional<SurfaceDescriptor> descriptor;
    SegreData data;
    std::string note;
};

/// Classifies a model through its maximal line subbundles.
ModelDescription descriptor_of_model(const BundleModel& m);

}  // namespace ruled
