#pragma once

#include <complex>
#include <initializer_list>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lgcrit/toric.hpp"

namespace lgcrit {

struct ProjectiveSpace {
    int s = 1;
};
/// P(O + O(a_1) + ... + O(a_r)) over P^s.
struct Bundle {
    int s = 1;
    std::vector<int> a;
};
/// Rays e_1..e_n plus the three sums v_1, v_2, v_3 split at n-r.
struct BlowupProduct {
    int n = 2;
    int r = 1;
};
/// Rays e_1..e_n, u_1 = -e_n and two twisted sums controlled by b.
struct BlowupBundle {
    int n = 3;
    int b = 0;
};

using ModelSpec = std::variant<ProjectiveSpace, Bundle, BlowupProduct, BlowupBundle>;

/// Accepts `ps:s=2`, `pb:s=3,a=1,2`, `bp:n=4,r=2`, `bb:n=5,b=0`.
ModelSpec parse_model_spec(std::string_view text);
std::string to_string(const ModelSpec& spec);
void validate(const ModelSpec& spec);

ToricModel make_model(const ModelSpec& spec);

struct CollectionEntry {
    std::string label;
    char family = 'E';  // 'E' or 'F'
    std::vector<int> indices;
    PicClass cls;
};

struct ReferenceCollection {
    std::vector<CollectionEntry> entries;

    std::vector<PicClass> classes() const;
    std::size_t size() const noexcept { return entries.size(); }
    const CollectionEntry* find(const PicClass& cls) const;
    const CollectionEntry* find(std::string_view label) const;
};

/// "E01", or "E1_10" style once an index leaves 0..9.
std::string grid_label(char family, std::initializer_list<int> indices);

ReferenceCollection reference_collection(const ModelSpec& spec);

enum class LimitSign { Negative = -1, Positive = 1 };

/// Coefficient of one vertex monomial: base * exp(rate * t).
struct CoefficientRule {
    std::complex<double> base{1.0, 0.0};
    double rate = 0.0;
};

struct LGFamily {
    ModelSpec spec;
    ToricModel model;
    std::vector<CoefficientRule> rules;  // one per ray
    LimitSign tSign = LimitSign::Negative;

    const std::vector<IntVec>& support() const noexcept { return model.rays(); }
    std::vector<std::complex<double>> coefficients(double t) const;
    /// Default working parameter, signed by tSign.
    double default_t() const noexcept { return 24.0 * static_cast<int>(tSign); }
};

LGFamily lg_family(const ModelSpec& spec);

struct Seed {
    std::string label;
    std::vector<double> modulus;
    std::vector<double> argFrac;  // fractions of a full turn in [0,1)

    std::vector<std::complex<double>> point() const;
};

struct SeedSet {
    double t = 0.0;
    std::vector<Seed> seeds;
};

SeedSet asymptotic_seeds(const ModelSpec& spec, double t, double tMin = 10.0);

/// Argument fractions of z (one coordinate, symmetric) for the w = i family of
/// BlowupBundle under the two available closed forms.
struct Family2Forms {
    std::vector<double> elimination;  // z^{n-1} = i^{1-b}
    std::vector<double> closedForm;   // rho_{4(n-1)}^{3(b+1)} rho_{n-1}^m
};
Family2Forms blowup_bundle_family2_forms(const BlowupBundle& spec);

}  // namespace lgcrit
