#include "ensred/oilfield.hpp"

#include <algorithm>
#include <stdexcept>

#include "ensred/rng.hpp"

namespace ensred {

double OilfieldConfig::property_base(Property p) const {
    switch (p) {
        case Property::sw: return sw_base;
        case Property::ntg: return ntg_base;
        case Property::phi: return phi_base;
    }
    throw std::invalid_argument("OilfieldConfig: unknown property");
}

void OilfieldConfig::validate() const {
    if (n_properties != kNumProperties)
        throw std::invalid_argument(
            "OilfieldConfig: n_properties must be 3 (fixed by the encoding)");
    if (n_alleles < 1)
        throw std::invalid_argument("OilfieldConfig: n_alleles must be >= 1");
    if (!(knot_step_sigma > 0.0))
        throw std::invalid_argument("OilfieldConfig: knot_step_sigma must be > 0");
    if (!(volume_constant > 0.0))
        throw std::invalid_argument("OilfieldConfig: volume_constant must be > 0");
    for (double b : {sw_base, ntg_base, phi_base})
        if (!(b > 0.0 && b < 1.0))
            throw std::invalid_argument(
                "OilfieldConfig: property bases must lie in (0, 1)");
    if (base_jitter_sigma < 0.0)
        throw std::invalid_argument(
            "OilfieldConfig: base_jitter_sigma must be >= 0");
}

GeneLibrary generate_gene_library(const OilfieldConfig& cfg) {
    cfg.validate();
    GeneLibrary lib(cfg.n_alleles);
    for (int p = 0; p < kNumProperties; ++p) {
        for (int a = 0; a < cfg.n_alleles; ++a) {
            const CounterStream stream(cfg.seed, static_cast<std::uint64_t>(p),
                                       static_cast<std::uint64_t>(a));
            Gene& g = lib.gene(static_cast<Property>(p), a);
            // Draw 0 is the gene's base offset, draws 1..43 the walk steps.
            g.knots[0] = cfg.base_jitter_sigma * stream.normal(0);
            for (int j = 1; j < kGeneKnots; ++j)
                g.knots[j] = g.knots[j - 1] + cfg.knot_step_sigma * stream.normal(j);
        }
    }
    return lib;
}

double effective_property(const Gene& g, const OilfieldConfig& cfg) {
    double mean = 0.0;
    for (double k : g.knots) mean += k;
    mean /= kGeneKnots;
    return std::clamp(cfg.property_base(g.property) + mean, 0.01, 0.99);
}

OipLabel oip_oracle(const Alleles& a, const GeneLibrary& lib,
                    const OilfieldConfig& cfg) {
    const double sw_eff = effective_property(lib.gene(Property::sw, a.sw), cfg);
    const double ntg_eff = effective_property(lib.gene(Property::ntg, a.ntg), cfg);
    const double phi_eff = effective_property(lib.gene(Property::phi, a.phi), cfg);
    const ModelId id = alleles_to_id(a, lib.n_alleles());
    return {id, cfg.volume_constant * ntg_eff * phi_eff * (1.0 - sw_eff)};
}

std::vector<OipLabel> evaluate_ensemble(const GeneLibrary& lib,
                                        const OilfieldConfig& cfg) {
    const int n = lib.n_models();
    std::vector<OipLabel> labels(n);
#pragma omp parallel for schedule(static)
    for (int id = 0; id < n; ++id)
        labels[id] = oip_oracle(id_to_alleles(ModelId{id}, lib.n_alleles()), lib, cfg);
    return labels;
}

std::vector<OipLabel> evaluate_ensemble_serial(const GeneLibrary& lib,
                                               const OilfieldConfig& cfg) {
    const int n = lib.n_models();
    std::vector<OipLabel> labels(n);
    for (int id = 0; id < n; ++id)
        labels[id] = oip_oracle(id_to_alleles(ModelId{id}, lib.n_alleles()), lib, cfg);
    return labels;
}

double CountingOracle::evaluate(ModelId id) {
    const Alleles a = id_to_alleles(id, lib_->n_alleles());
    ++counts_[id.value];
    ++total_;
    return oip_oracle(a, *lib_, *cfg_).oip;
}

}  // namespace ensred
