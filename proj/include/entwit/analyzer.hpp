#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "entwit/bipartite.hpp"

namespace entwit {

enum class StateClass { Product, Entangled, Indeterminate, Degenerate };
const char* to_string(StateClass c);

struct ScanRecord {
    std::vector<double> eigenvalues;  // ascending
    std::vector<StateClass> classes;
    std::vector<double> negativities;
};

struct ScanResult {
    std::vector<double> lambda_grid;
    std::vector<ScanRecord> per_lambda;
};

enum class VerdictKind {
    UselessCommutator,
    UsefulCertified,
    UsefulNumerical,
    UselessNumericalEvidence,
    Inconclusive,
};
const char* to_string(VerdictKind k);

struct Verdict {
    VerdictKind kind;
    std::optional<std::pair<double, double>> witness_slopes;  // (alpha, beta)
    std::optional<PureState> extremal_state;
    double extremal_negativity = 0;
    std::string evidence;
};

struct CommutatorVerdict {
    double norm_a = 0, norm_b = 0;
    bool side_a = false, side_b = false;  // commutator nonzero (norm > 1e-10)
};

// An unbiased qubit effect (1 + m.sigma)/2, described by its Bloch vector.
struct EffectPair {
    std::array<double, 3> m{};
    std::array<double, 3> n{};
};

struct ZeroPatternReport {
    bool applicable = false;
    std::string reason;
    bool degenerate_labels = false;  // extreme product levels were tied
    // Perturbation elements connecting the ground (top) product level to the
    // rest of its block, in the eigenbasis of C ordered so the ground level
    // is |00> and the top level is the last basis state.
    double max_ground_element = 0;
    double max_top_element = 0;
    bool ground_isolated_a = false, ground_isolated_b = false;
    bool top_isolated_a = false, top_isolated_b = false;
    bool fits_isolation_pattern = false;
    Mat transformed_factor_a, transformed_factor_b;
};

struct DegenerateProjectionReport {
    bool applicable = false;
    std::string reason;
    std::optional<PureState> plp_ground;  // ground state of the projected perturbation
    bool entangled = false;
    double splitting_gap = 0;  // eigenvalue gap of the projected block
};

struct AnalyzerOptions {
    double lambda_min = -5;
    double lambda_max = 5;
    int steps = 201;
    double negativity_floor = 1e-6;
};

CommutatorVerdict commutator_verdict(const ProductObservable& c, const ProductObservable& l);

ZeroPatternReport zero_pattern(const ProductObservable& c, const ProductObservable& l);

// Spectrum of C + lambda L over the grid, each eigenstate classified through
// its Schmidt coefficients. Near-degenerate levels are clustered and decided
// by the product-vector-in-subspace test (within clusters the eigenbasis is
// ambiguous).
ScanResult lambda_scan(const BipartiteOperator& c, const BipartiteOperator& l,
                       const std::vector<double>& grid);

// Can witnesses built from C and L detect entanglement? Commuting local
// factors on either side settle the question negatively; in small dimensions
// nonzero commutators settle it positively, and otherwise scans over
// alpha C + beta L provide numerical evidence.
Verdict usefulness_verdict(const ProductObservable& c, const ProductObservable& l,
                           const AnalyzerOptions& opt = {});

// For a two-fold degenerate product ground level of C: project L onto the
// level (PLP) and classify the split ground state.
DegenerateProjectionReport degenerate_projection(const BipartiteOperator& c,
                                                 const BipartiteOperator& l);

// Norm-sum criterion for a pair of unbiased qubit effects.
bool joint_measurability_unbiased(const std::array<double, 3>& m, const std::array<double, 3>& n);

std::vector<double> linspace(double lo, double hi, int steps);

// Product vectors inside span{psi1, psi2} (up to phase), found from the
// quadratic minor condition. all_products marks spans made of products only.
struct SpanProducts {
    std::vector<PureState> states;
    bool all_products = false;
};
SpanProducts product_vectors_in_span(const PureState& psi1, const PureState& psi2);

}  // namespace entwit
