#include "ruled/descriptors.hpp"

namespace ruled {

SurfaceDescriptor SurfaceDescriptor::trivial(const Curve& E) {
    SurfaceDescriptor d;
    d.kind_ = DescriptorKind::Trivial;
    d.curve_ = E;
    return d;
}

SurfaceDescriptor SurfaceDescriptor::decomposable(const Curve& E, const DivisorClass& M) {
    if (!on_curve(E, M.sum)) throw Error(Errc::PointNotOnCurve, "class point " + M.sum.str() + " not on " + E.str());
    DivisorClass c = canonicalize(E, M);
    if (is_trivial(c)) return trivial(E);
    SurfaceDescriptor d;
    d.kind_ = DescriptorKind::Decomposable;
    d.curve_ = E;
    d.M_ = c;
    return d;
}

SurfaceDescriptor SurfaceDescriptor::atiyah0(const Curve& E) {
    SurfaceDescriptor d;
    d.kind_ = DescriptorKind::Atiyah0;
    d.curve_ = E;
    return d;
}

SurfaceDescriptor SurfaceDescriptor::atiyah1(const Curve& E) {
    SurfaceDescriptor d;
    d.kind_ = DescriptorKind::Atiyah1;
    d.curve_ = E;
    return d;
}

SurfaceDescriptor SurfaceDescriptor::hirzebruch(int n) {
    if (n < 0) throw Error(Errc::ParseError, "Hirzebruch index must be non-negative");
    SurfaceDescriptor d;
    d.kind_ = DescriptorKind::Hirzebruch;
    d.n_ = n;
    return d;
}

SurfaceDescriptor SurfaceDescriptor::genus_at_least_two(const std::string& tag) {
    SurfaceDescriptor d;
    d.kind_ = DescriptorKind::GenusAtLeastTwoTrivial;
    d.tag_ = tag;
    return d;
}

const Curve& SurfaceDescriptor::curve() const {
    if (!curve_) throw Error(Errc::BaseMismatch, "descriptor " + str() + " has no elliptic base");
    return *curve_;
}

const DivisorClass& SurfaceDescriptor::M() const {
    if (kind_ != DescriptorKind::Decomposable) throw Error(Errc::InvalidSection, "descriptor " + str() + " is not decomposable");
    return M_;
}

bool SurfaceDescriptor::operator==(const SurfaceDescriptor& o) const {
    return kind_ == o.kind_ && curve_ == o.curve_ && M_ == o.M_ && n_ == o.n_ && tag_ == o.tag_;
}

std::string SurfaceDescriptor::str() const {
    switch (kind_) {
        case DescriptorKind::Trivial: return "T";
        case DescriptorKind::Decomposable:
            return "D(" + std::to_string(M_.degree) + "; s=" + M_.sum.str() + ")";
        case DescriptorKind::Atiyah0: return "A0";
        case DescriptorKind::Atiyah1: return "A1";
        case DescriptorKind::Hirzebruch: return "F" + std::to_string(n_);
        case DescriptorKind::GenusAtLeastTwoTrivial: return "G(" + tag_ + ")";
    }
    return "?";
}

std::string to_string(MinimalSectionCount c) {
    switch (c) {
        case MinimalSectionCount::One: return "One";
        case MinimalSectionCount::ExactlyTwo: return "ExactlyTwo";
        case MinimalSectionCount::InfinitelyMany: return "InfinitelyMany";
        case MinimalSectionCount::Undetermined: return "Undetermined";
    }
    return "?";
}

DivisorClass canonicalize(const Curve& E, const DivisorClass& M) {
    if (M.degree < 0) return class_neg(E, M);
    if (M.degree > 0) return M;
    DivisorClass n = class_neg(E, M);
    return n.sum < M.sum ? n : M;
}

int segre(const SurfaceDescriptor& d) {
    switch (d.kind()) {
        case DescriptorKind::Trivial: return 0;
        case DescriptorKind::Decomposable: return -d.M().degree;
        case DescriptorKind::Atiyah0: return 0;
        case DescriptorKind::Atiyah1: return 1;
        case DescriptorKind::Hirzebruch: return -d.n();
        case DescriptorKind::GenusAtLeastTwoTrivial: return 0;
    }
    return 0;
}

MinimalSectionCount minimal_section_count(const SurfaceDescriptor& d) {
    switch (d.kind()) {
        case DescriptorKind::Trivial: return MinimalSectionCount::InfinitelyMany;
        case DescriptorKind::Decomposable:
            return d.M().degree > 0 ? MinimalSectionCount::One : MinimalSectionCount::ExactlyTwo;
        case DescriptorKind::Atiyah0: return MinimalSectionCount::One;
        case DescriptorKind::Atiyah1: return MinimalSectionCount::Undetermined;
        case DescriptorKind::Hirzebruch:
            return d.n() > 0 ? MinimalSectionCount::One : MinimalSectionCount::InfinitelyMany;
        case DescriptorKind::GenusAtLeastTwoTrivial: return MinimalSectionCount::InfinitelyMany;
    }
    return MinimalSectionCount::Undetermined;
}

bool is_isomorphic(const SurfaceDescriptor& d1, const SurfaceDescriptor& d2) {
    if (d1.is_elliptic() && d2.is_elliptic() && !(d1.curve() == d2.curve()))
        throw Error(Errc::BaseMismatch, "descriptors over " + d1.curve().str() + " and " + d2.curve().str());
    if (d1.kind() != d2.kind() || d1.is_elliptic() != d2.is_elliptic()) return false;
    switch (d1.kind()) {
        case DescriptorKind::Decomposable: {
            const DivisorClass &a = d1.M(), &b = d2.M();
            if (a.degree != b.degree) return false;
            // positive degree: translations reach every class of that degree
            if (a.degree > 0) return true;
            const Curve& E = d1.curve();
            for (const auto& alpha : curve_automorphisms(E)) {
                Point t = alpha.apply(E, a.sum);
                if (t == b.sum || t == negate(E, b.sum)) return true;
            }
            return false;
        }
        case DescriptorKind::Hirzebruch: return d1.n() == d2.n();
        case DescriptorKind::GenusAtLeastTwoTrivial: return d1.tag() == d2.tag();
        default: return true;
    }
}

bool is_maximal_class(const SurfaceDescriptor& d) {
    switch (d.kind()) {
        case DescriptorKind::Trivial:
        case DescriptorKind::Atiyah0:
        case DescriptorKind::Atiyah1: return true;
        case DescriptorKind::Decomposable: return d.M().degree == 0;
        default: return false;
    }
}

ConjugacyAnswer is_conjugate_aut(const SurfaceDescriptor& d1, const SurfaceDescriptor& d2) {
    return {is_isomorphic(d1, d2), !is_maximal_class(d1) || !is_maximal_class(d2)};
}

ModelDescription descriptor_of_model(const BundleModel& m) {
    const Curve& E = m.base();
    ModelDescription out{std::nullopt, segre_linear(m), {}};
    const SegreData& s = out.data;
    if (!s.rational) {
        out.note = "maximal subbundles are not defined over F_" + std::to_string(E.p());
        return out;
    }
    if (s.segre < 0) {
        // V = N + (det - N) with N the unique maximal subbundle
        const DivisorClass& N = s.maximal.front().N;
        out.descriptor = SurfaceDescriptor::decomposable(E, class_sub(E, s.det, class_scale(E, 2, N)));
    } else if (s.segre == 0) {
        std::uint64_t count = s.minimal_sections();
        if (count >= 3)
            out.descriptor = SurfaceDescriptor::trivial(E);
        else if (count == 2)
            out.descriptor = SurfaceDescriptor::decomposable(E, class_sub(E, s.maximal[1].N, s.maximal[0].N));
        else
            out.descriptor = SurfaceDescriptor::atiyah0(E);
    } else {
        out.descriptor = SurfaceDescriptor::atiyah1(E);
    }
    return out;
}

}  // namespace ruled
