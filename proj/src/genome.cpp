#include "ensred/genome.hpp"

#include <stdexcept>
#include <string>

namespace ensred {

GeneLibrary::GeneLibrary(int n_alleles) : n_alleles_(n_alleles) {
    if (n_alleles < 1)
        throw std::invalid_argument("GeneLibrary: n_alleles must be >= 1");
    genes_.resize(static_cast<std::size_t>(kNumProperties) * n_alleles_);
    for (int p = 0; p < kNumProperties; ++p) {
        for (int a = 0; a < n_alleles_; ++a) {
            Gene& g = genes_[static_cast<std::size_t>(p) * n_alleles_ + a];
            g.property = static_cast<Property>(p);
            g.allele = a;
        }
    }
}

const Gene& GeneLibrary::gene(Property p, int allele) const {
    if (allele < 0 || allele >= n_alleles_)
        throw std::out_of_range("GeneLibrary: allele " + std::to_string(allele) +
                                " outside [0, " + std::to_string(n_alleles_) + ")");
    return genes_[static_cast<std::size_t>(p) * n_alleles_ + allele];
}

Gene& GeneLibrary::gene(Property p, int allele) {
    return const_cast<Gene&>(std::as_const(*this).gene(p, allele));
}

namespace {

void check_allele(int value, int n_alleles, const char* name) {
    if (value < 0 || value >= n_alleles)
        throw std::out_of_range(std::string("alleles_to_id: ") + name + " = " +
                                std::to_string(value) + " outside [0, " +
                                std::to_string(n_alleles) + ")");
}

}  // namespace

ModelId alleles_to_id(const Alleles& a, int n_alleles) {
    check_allele(a.sw, n_alleles, "sw");
    check_allele(a.ntg, n_alleles, "ntg");
    check_allele(a.phi, n_alleles, "phi");
    return ModelId{a.sw * n_alleles * n_alleles + a.ntg * n_alleles + a.phi};
}

Alleles id_to_alleles(ModelId m, int n_alleles) {
    const int n_models = n_alleles * n_alleles * n_alleles;
    if (m.value < 0 || m.value >= n_models)
        throw std::out_of_range("id_to_alleles: id " + std::to_string(m.value) +
                                " outside [0, " + std::to_string(n_models) + ")");
    Alleles a;
    a.phi = m.value % n_alleles;
    a.ntg = (m.value / n_alleles) % n_alleles;
    a.sw = m.value / (n_alleles * n_alleles);
    return a;
}

Genome assemble_genome(const GeneLibrary& lib, const Alleles& a) {
    Genome g{};
    const Gene* genes[kNumProperties] = {&lib.gene(Property::sw, a.sw),
                                         &lib.gene(Property::ntg, a.ntg),
                                         &lib.gene(Property::phi, a.phi)};
    for (int p = 0; p < kNumProperties; ++p)
        for (int j = 0; j < kGeneKnots; ++j)
            g[static_cast<std::size_t>(p) * kGeneKnots + j] = genes[p]->knots[j];
    return g;
}

std::vector<EnsembleEntry> enumerate_ensemble(const GeneLibrary& lib) {
    std::vector<EnsembleEntry> out;
    out.reserve(lib.n_models());
    for (int id = 0; id < lib.n_models(); ++id) {
        const Alleles a = id_to_alleles(ModelId{id}, lib.n_alleles());
        out.push_back({ModelId{id}, assemble_genome(lib, a)});
    }
    return out;
}

FeatureMatrix ensemble_matrix(const std::vector<EnsembleEntry>& ensemble) {
    FeatureMatrix m(ensemble.size(), kGenomeLength);
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
        auto r = m.row(i);
        for (int j = 0; j < kGenomeLength; ++j) r[j] = ensemble[i].genome[j];
    }
    return m;
}

}  // namespace ensred
