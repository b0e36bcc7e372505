#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <vector>

#include "ensred/matrix.hpp"

namespace ensred {

/// The three rock properties tracked by a geological model, in the fixed
/// order used for allele triplets and genome concatenation.
enum class Property : int { sw = 0, ntg = 1, phi = 2 };

inline constexpr int kNumProperties = 3;
inline constexpr int kDefaultAlleles = 24;

// Knot-point layout of one gene: depth(3) + stratigraphy(35) + strike(3)
// + dip(3). Consumers treat the 44-vector as opaque; only the total length
// and the block order are fixed.
inline constexpr int kDepthKnots = 3;
inline constexpr int kStratigraphyKnots = 35;
inline constexpr int kStrikeKnots = 3;
inline constexpr int kDipKnots = 3;
inline constexpr int kGeneKnots =
    kDepthKnots + kStratigraphyKnots + kStrikeKnots + kDipKnots;  // 44

inline constexpr int kGenomeLength = kNumProperties * kGeneKnots;  // 132

/// Ensemble size for the reference 3-property, 24-allele configuration.
inline constexpr int kEnsembleSize =
    kDefaultAlleles * kDefaultAlleles * kDefaultAlleles;  // 13824

/// One candidate explanation of a property's evolution along the four
/// geological trends, as 44 knot-point deltas.
struct Gene {
    Property property = Property::sw;
    int allele = 0;
    std::array<double, kGeneKnots> knots{};
};

/// Which gene explains each property: (sw, ntg, phi), each in [0, n_alleles).
struct Alleles {
    int sw = 0;
    int ntg = 0;
    int phi = 0;
    bool operator==(const Alleles&) const = default;
};

/// Sequential model identifier in [0, n_alleles^3).
struct ModelId {
    int value = 0;
    auto operator<=>(const ModelId&) const = default;
};

/// Complete model definition: sw gene ++ ntg gene ++ phi gene.
using Genome = std::array<double, kGenomeLength>;

/// All candidate genes of an oilfield: one gene per (property, allele).
class GeneLibrary {
public:
    explicit GeneLibrary(int n_alleles = kDefaultAlleles);

    int n_alleles() const { return n_alleles_; }
    int n_models() const { return n_alleles_ * n_alleles_ * n_alleles_; }

    const Gene& gene(Property p, int allele) const;
    Gene& gene(Property p, int allele);

private:
    int n_alleles_;
    std::vector<Gene> genes_;  // property-major, 3 * n_alleles entries
};

/// id = sw * n^2 + ntg * n + phi. Throws std::out_of_range on an invalid
/// component.
ModelId alleles_to_id(const Alleles& a, int n_alleles = kDefaultAlleles);

/// Base-n inverse of alleles_to_id. Throws std::out_of_range on an invalid id.
Alleles id_to_alleles(ModelId m, int n_alleles = kDefaultAlleles);

/// Concatenates the model's three property genes in (sw, ntg, phi) order.
Genome assemble_genome(const GeneLibrary& lib, const Alleles& a);

struct EnsembleEntry {
    ModelId id;
    Genome genome;
};

/// All n_alleles^3 models in ascending id order; entry i has id i.
std::vector<EnsembleEntry> enumerate_ensemble(const GeneLibrary& lib);

/// Genomes stacked into a matrix, row index == model id.
FeatureMatrix ensemble_matrix(const std::vector<EnsembleEntry>& ensemble);

}  // namespace ensred
