#pragma once

#include <cstdint>
#include <vector>

#include "ensred/genome.hpp"

namespace ensred {

/// Parameters of the synthetic oilfield generator and of the full-evaluation
/// OIP oracle that stands in for an expensive reservoir simulation.
struct OilfieldConfig {
    std::uint64_t seed = 42;
    int n_properties = 3;  // the encoding is fixed at 3; validated, not varied
    int n_alleles = kDefaultAlleles;
    double knot_step_sigma = 0.05;    // random-walk step scale
    double volume_constant = 1.9e9;   // barrels; collapses GRV/Bo
    double sw_base = 0.30;
    double ntg_base = 0.60;
    double phi_base = 0.20;
    double base_jitter_sigma = 0.08;  // per-gene offset scale

    double property_base(Property p) const;
    /// Throws std::invalid_argument on an out-of-contract field.
    void validate() const;
};

struct OipLabel {
    ModelId id;
    double oip = 0.0;  // barrels
};

/// Deterministic library: per (property, allele), knots form a smooth random
/// walk started at a jittered offset. Every draw comes from a counter stream
/// keyed by (seed, property, allele, knot), so the result is independent of
/// generation order and thread count.
GeneLibrary generate_gene_library(const OilfieldConfig& cfg);

/// clamp(base + mean(knots), 0.01, 0.99). The clamp keeps the volumetric
/// product strictly positive.
double effective_property(const Gene& g, const OilfieldConfig& cfg);

/// Volumetric OIP: volume_constant * ntg_eff * phi_eff * (1 - sw_eff).
OipLabel oip_oracle(const Alleles& a, const GeneLibrary& lib,
                    const OilfieldConfig& cfg);

/// All models' labels in ascending id order. The parallel kernel writes by
/// id, so the output is identical to the serial reference bit for bit.
std::vector<OipLabel> evaluate_ensemble(const GeneLibrary& lib,
                                        const OilfieldConfig& cfg);
std::vector<OipLabel> evaluate_ensemble_serial(const GeneLibrary& lib,
                                               const OilfieldConfig& cfg);

/// Oracle wrapper that records how often each model id was evaluated.
/// The reduction pipeline uses it to prove that true OIP is only read for
/// the training sample until the reporting stage.
class CountingOracle {
public:
    CountingOracle(const GeneLibrary& lib, const OilfieldConfig& cfg)
        : lib_(&lib), cfg_(&cfg), counts_(lib.n_models(), 0) {}

    double evaluate(ModelId id);

    const std::vector<std::uint32_t>& counts() const { return counts_; }
    std::uint64_t total_evaluations() const { return total_; }

private:
    const GeneLibrary* lib_;
    const OilfieldConfig* cfg_;
    std::vector<std::uint32_t> counts_;
    std::uint64_t total_ = 0;
};

}  // namespace ensred
