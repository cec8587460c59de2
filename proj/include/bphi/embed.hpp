#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bphi/lattice.hpp"
#include "json.hpp"

namespace bphi {

// Gram matrix of the period sublattice with named basis vectors.
// Labels: fp (image of Gamma12), e (Gamma34), a (Gamma23), b (Gamma14), c (Gamma13 - Gamma24).
struct SourceGram {
    std::string kind;  // "product", "jacobian" or "custom"
    std::vector<std::string> labels;
    IMat gram;

    int index_of(const std::string& label) const;  // -1 when absent
    bool has(const std::string& label) const { return index_of(label) >= 0; }
    nlohmann::json to_json() const;
};

struct SourceDiagnostics {
    std::pair<int, int> signature;
    double period_pairing = 0;  // <P(T), conj P(T)> at a sample T
    bool ok = false;
};

// Gram computed from wedge products on H^1 of an abelian surface, doubled.
SourceGram derive_source_gram(const std::string& kind);
SourceDiagnostics check_source(const SourceGram& src);
// validates labels and the isotropy/orthogonality requirements on e
void validate_source(const SourceGram& src);

struct PinnedEmbedding {
    SourceGram source;
    int level = 1;
    std::vector<IVec> images;  // one per label, coordinates in Lambda
    bool flipped = false;      // a, b, c negated to bring B, D into the positive cone

    const IVec& image(const std::string& label) const;
    nlohmann::json to_json() const;
    static PinnedEmbedding from_json(const nlohmann::json& j);
};

struct EmbeddingCheck {
    bool gram_ok = false;
    bool primitive_ok = false;
    bool pin_ok = false;
    bool ok() const { return gram_ok && primitive_ok && pin_ok; }
};
EmbeddingCheck verify_embedding(const PinnedEmbedding& emb);

struct SearchOptions {
    long long height = 6;        // coordinate bound for candidate images
    long long pool_norm = 8;     // |norm| bound on the E8(2) part of candidates
    size_t max_results = 1;
    bool require_root_free = true;   // no roots orthogonal to the image
    bool require_no_split = true;    // roots with disallowed image norm (see discriminant_allowed)
    bool require_periodic = true;    // level 1: the T12 direction must be a period of Phi_1
    long long node_budget = 50'000'000;
};

struct SearchResult {
    std::vector<PinnedEmbedding> embeddings;
    long long nodes = 0;
    long long leaves = 0;
    long long rejected_root = 0;
    long long rejected_split = 0;
    long long rejected_cone = 0;
    bool exhausted = false;  // whole bounded space visited
    std::string message;
    nlohmann::json to_json() const;
};

SearchResult find_embeddings(const SourceGram& src, int level, const SearchOptions& opt = {});

// Roots of Lambda orthogonal to the image sublattice.
std::vector<IVec> complement_roots(const IMat& image_rows);
// Roots of Lambda whose projection to the image has negative norm, one per orthogonal part (either sign);
// the image part is searched among coset shifts bounded by shift_bound.
struct DiscriminantRoot {
    IVec root;
    mpq_class image_norm;
    std::vector<mpq_class> glue;  // image coordinates modulo 1
};
std::vector<DiscriminantRoot> discriminant_roots(const IMat& image_rows, long long shift_bound = 2);
// A root r whose projection to the image has norm -1, if any.
std::optional<IVec> split_root(const IMat& image_rows);
// whether a family of the given source kind tolerates roots with this image norm
bool discriminant_allowed(const std::string& kind, const mpq_class& image_norm);
// all discriminant roots allowed; for a jacobian source also along its diagonal sub-family
bool discriminant_ok(const SourceGram& src, const IMat& images);

struct PeriodCoeffs {
    int level = 1;
    IVec A, B, C, D;  // coordinates in M_level; C empty when absent
    bool has_C() const { return !C.empty(); }
    nlohmann::json to_json() const;
    static PeriodCoeffs from_json(const nlohmann::json& j);
};

// Brings B, D into the closed positive cone (negating a, b, c jointly when needed)
// and returns the coefficients together with the adjusted embedding.
PeriodCoeffs period_coeffs(PinnedEmbedding& emb);
PeriodCoeffs period_coeffs(const PinnedEmbedding& emb);
// checks iota_l(z(T)) is proportional to the period vector as polynomials in T
bool check_period_reconstruction(const PinnedEmbedding& emb, const PeriodCoeffs& pc);
// checks B, D isotropic, in the closed cone, <B,D> = 2, and (if present) C orthogonal to B, D
bool check_period_coeffs(const PeriodCoeffs& pc);

}  // namespace bphi
