#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ruled/descriptors.hpp"

namespace ruled {

enum class ElmLocation { OnMinimalSection, OnComplementarySection, AtSpecialPoint, GenericOffNamedSections, ModelCoordinates };
std::string to_string(ElmLocation loc);

/// Center of an elementary transformation, by position relative to the named sections.
/// For D(0; s) the minimal section is the one on the M side, i.e. with 2 L - det = M.
struct ElmPoint {
    Point z;
    ElmLocation location = ElmLocation::GenericOffNamedSections;
    /// [u:v] in the chart at z, for ModelCoordinates.
    std::optional<std::pair<Fp, Fp>> coords;
};

struct ElmResult {
    enum class Kind { Known, PartiallyKnown, Undetermined };
    Kind kind = Kind::Undetermined;
    std::optional<SurfaceDescriptor> descriptor;
    int segre = 0;
    std::optional<bool> decomposable;
    std::string reason;

    static ElmResult known(const SurfaceDescriptor& d);
    static ElmResult partial(int segre, std::optional<bool> decomposable, const std::string& reason);
    static ElmResult undetermined(const std::string& reason);
    std::string str() const;
};

/// Rule table for elm on descriptors; InconsistentCenter for impossible locations.
ElmResult elm_descriptor(const SurfaceDescriptor& d, const ElmPoint& p);

/// Resolves a model center to a location tag; desc must describe m.
ElmPoint locate_center(const BundleModel& m, const ModelDescription& desc, const ElmCenter& c);

/// Point of D(1; s) where all sections of self-intersection 1 meet, in the chart at s.
std::pair<Fp, Fp> common_point_of_unit_sections(const BundleModel& m, const ModelDescription& desc);

struct ChainStep {
    SurfaceDescriptor before, after;
    Point z;
    int segre = 0;
    DivisorClass L;
    int h0_L = 0;
    int h0_L_minus_z = 0;
    bool gamma_exists = false;
};

struct ChainCertificate {
    SurfaceDescriptor start;
    std::vector<ChainStep> steps;
    /// step, segre, L=(d,s), h0(L), h0(L-z), gamma_exists
    std::string table() const;
};

/// Repeated elm on the minimal section of Decomposable((d, s)), d >= 1.
ChainCertificate chain_theorem_A(const Curve& E, const SurfaceDescriptor& start, const std::vector<Point>& centers);
/// Centers z_k = z_0 + k g with g the first point of maximal order and z_0 picked by the seed.
ChainCertificate chain_theorem_A(const Curve& E, const SurfaceDescriptor& start, int n, std::uint64_t seed);
std::vector<Point> chain_centers(const Curve& E, int n, std::uint64_t seed);

struct AtiyahChoices {
    /// Index of p2 among the fiber points over z1 that avoid q1 and the (-1)-section.
    std::uint64_t p2_index = 0;
    /// Fiber of p3; the first point different from z1 when absent.
    std::optional<Point> z3;
    std::uint64_t seed = 0;
};

struct AtiyahBuild {
    BundleModel model;
    SurfaceDescriptor descriptor;
    std::vector<ElmCenter> centers;
};

/// elm at p1 = (z1, [1:0]), then p2 over z1, then (variant 1) p3 off the 0-section.
AtiyahBuild build_atiyah(const Curve& E, int variant, const Point& z1, const AtiyahChoices& choices = {});

struct CrosscheckReport {
    int scenarios = 0;
    int steps = 0;
    int known = 0;
    int partial = 0;
    int undetermined = 0;
    /// Steps whose model has no F_p-rational descriptor.
    int skipped = 0;
    int agreed = 0;
    std::vector<std::string> disagreements;
    /// Rule branch (descriptor shape and location) to number of steps.
    std::map<std::string, int> branches;
    bool ok() const { return disagreements.empty(); }
    void merge(const CrosscheckReport& o);
    std::string str() const;
};

/// One random elm sequence of the given depth from the trivial model.
CrosscheckReport crosscheck_elm(const Curve& E, std::uint64_t seed, int depth);
/// count scenarios with depths cycling through 1..max_depth.
CrosscheckReport crosscheck_suite(const Curve& E, std::uint64_t seed, int count, int max_depth = 3);

}  // namespace ruled
