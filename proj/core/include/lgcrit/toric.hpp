#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lgcrit/lattice.hpp"

namespace lgcrit {

/// Integer combination of the torus-invariant prime divisors, in ray order.
struct TDivisor {
    IntVec coeffs;

    static TDivisor zero(int rays) { return {IntVec(rays, 0)}; }
    static TDivisor unit(int rays, int index);
    TDivisor operator+(const TDivisor& o) const;
    TDivisor operator-(const TDivisor& o) const;
    TDivisor operator*(std::int64_t k) const;
    bool is_effective() const;
    bool is_zero() const;
    auto operator<=>(const TDivisor&) const = default;
};

/// Real combination of ray divisors. Argument profiles land in [0,1).
struct RDivisor {
    std::vector<double> coeffs;
};

struct PicClass {
    IntVec coords;

    PicClass operator+(const PicClass& o) const;
    PicClass operator-(const PicClass& o) const;
    auto operator<=>(const PicClass&) const = default;
};

struct RPicClass {
    std::vector<double> coords;
};

struct Facet {
    std::vector<int> rays;  // ascending ray indices
    IntVec normal;          // <normal, ray> = 1 on the facet, < 1 elsewhere
};

/// Named generators of Pic as integral ray-divisor combinations.
struct PicBasisSpec {
    std::vector<TDivisor> representatives;
    std::vector<std::string> labels;
};

struct CohomologyTable {
    std::vector<std::int64_t> dims;  // h^0 .. h^n
    bool operator==(const CohomologyTable&) const = default;
};

struct HomEntry {
    IntVec character;
    TDivisor divisor;
};

struct HomBasis {
    PicClass source;
    PicClass target;
    std::vector<HomEntry> entries;
    std::size_t size() const noexcept { return entries.size(); }
};

struct ExtFailure {
    int from;  // Ext^degree(E_from, E_to)
    int to;
    int degree;
    std::int64_t dimension;
};

struct ExceptionalityReport {
    bool isExceptional = false;
    bool isStrong = false;
    bool sizeMatchesEuler = false;
    std::vector<ExtFailure> failures;
};

struct QuiverEdge {
    int from;
    int to;
    TDivisor label;
};

struct Quiver {
    std::vector<PicClass> vertices;
    std::vector<QuiverEdge> edges;
};

namespace detail {
struct ModelData;
}

/// Smooth toric Fano manifold given by the vertices of its fan polytope.
/// Immutable and cheap to copy.
class ToricModel {
public:
    int dim() const noexcept;
    int ray_count() const noexcept;
    int pic_rank() const noexcept;
    int euler() const noexcept;  // number of facets

    const std::vector<IntVec>& rays() const noexcept;
    const std::vector<std::string>& ray_names() const noexcept;
    const std::vector<Facet>& facets() const noexcept;
    const std::vector<std::string>& basis_labels() const noexcept;
    const std::vector<TDivisor>& basis_representatives() const noexcept;

    /// rho x rays; maps a T-divisor to its class coordinates.
    const IntMatrix& class_matrix() const noexcept;
    /// rays x dim; row F is the ray vector, so div(m) = P m.
    const IntMatrix& principal_matrix() const noexcept;

    /// Rays on which class representatives are supported.
    const std::vector<int>& representative_support() const noexcept;

    TDivisor principal_divisor(std::span<const std::int64_t> character) const;
    TDivisor anticanonical() const;
    std::string format_divisor(const TDivisor& d) const;

    const detail::ModelData& data() const noexcept { return *data_; }

private:
    friend ToricModel build_model(std::vector<IntVec>, std::optional<PicBasisSpec>, std::vector<std::string>);
    std::shared_ptr<const detail::ModelData> data_;
};

/// Validates the polytope (reflexive, smooth, complete) and assembles the class map.
ToricModel build_model(std::vector<IntVec> vertices, std::optional<PicBasisSpec> basis = std::nullopt,
                       std::vector<std::string> rayNames = {});

PicClass divisor_class(const ToricModel& model, const TDivisor& d);
RPicClass real_class_coords(const ToricModel& model, const RDivisor& d);
/// Exact coordinates of numer/denominator, returned as numerators over denominator.
IntVec rational_class_numerators(const ToricModel& model, const TDivisor& numer);
PicClass floor_class(const RPicClass& b, double snapEps = 1e-6);
/// Exact floor of numer/denominator per coordinate.
PicClass floor_rational(std::span<const std::int64_t> numer, std::int64_t denominator);

/// Deterministic representative supported on representative_support().
TDivisor representative(const ToricModel& model, const PicClass& cls);

HomBasis hom_basis(const ToricModel& model, const PicClass& source, const PicClass& target);
CohomologyTable line_bundle_cohomology(const ToricModel& model, const TDivisor& d);
ExceptionalityReport is_strongly_exceptional(const ToricModel& model, std::span<const PicClass> collection);
Quiver build_quiver(const ToricModel& model, std::span<const PicClass> collection);

}  // namespace lgcrit
