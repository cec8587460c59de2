#include "bphi/embed.hpp"
#include "doctest.h"

using namespace bphi;

namespace {

// level-2 embedding of the jacobian source found by the default search (frozen)
PinnedEmbedding frozen_jacobian_l2() {
    PinnedEmbedding e;
    e.source = derive_source_gram("jacobian");
    e.level = 2;
    const std::map<std::string, IVec> im = {
        {"fp", {0, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
        {"e", {1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
        {"a", {0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
        {"b", {1, 0, -2, -2, 1, 2, 2, 2, 2, 2, 2, 1}},
        {"c", {0, 0, 1, 0, 0, 1, 1, 2, 2, 1, 0, 0}},
    };
    for (const auto& l : e.source.labels) e.images.push_back(im.at(l));
    return e;
}

}  // namespace

TEST_CASE("source Gram matrices") {
    const SourceGram p = derive_source_gram("product");
    CHECK(p.labels == std::vector<std::string>{"fp", "e", "a", "b"});
    CHECK(p.gram == IMat{{0, -2, 0, 0}, {-2, 0, 0, 0}, {0, 0, 0, -2}, {0, 0, -2, 0}});
    const SourceGram j = derive_source_gram("jacobian");
    CHECK(j.gram[4][4] == -4);
    CHECK(check_source(p).ok);
    CHECK(check_source(j).ok);
    CHECK_THROWS_AS(derive_source_gram("other"), std::invalid_argument);
}

TEST_CASE("product source embeds at level 2 and re-verifies") {
    const SearchResult r = find_embeddings(derive_source_gram("product"), 2);
    REQUIRE_FALSE(r.embeddings.empty());
    PinnedEmbedding emb = r.embeddings.front();
    CHECK(verify_embedding(emb).ok());
    const PeriodCoeffs pc = period_coeffs(emb);
    CHECK(check_period_coeffs(pc));
    CHECK(check_period_reconstruction(emb, pc));
    IMat rows = emb.images;
    CHECK(complement_roots(rows).empty());
    CHECK(discriminant_ok(emb.source, rows));
    // JSON round trip
    const PinnedEmbedding back = PinnedEmbedding::from_json(emb.to_json());
    CHECK(back.images == emb.images);
    CHECK(PeriodCoeffs::from_json(pc.to_json()).B == pc.B);
}

TEST_CASE("level-1 jacobian family is ruled out") {
    const SearchResult r = find_embeddings(derive_source_gram("jacobian"), 1);
    CHECK(r.embeddings.empty());
    CHECK(r.exhausted);
    CHECK(r.message.find("C/2") != std::string::npos);
    SearchOptions o;
    o.require_periodic = false;
    o.node_budget = 2000;
    // without the periodicity requirement the search is free to run (bounded here)
    CHECK_NOTHROW(find_embeddings(derive_source_gram("jacobian"), 1, o));
}

TEST_CASE("frozen level-2 jacobian embedding") {
    PinnedEmbedding emb = frozen_jacobian_l2();
    const EmbeddingCheck c = verify_embedding(emb);
    CHECK(c.gram_ok);
    CHECK(c.primitive_ok);
    CHECK(c.pin_ok);
    CHECK(discriminant_ok(emb.source, emb.images));
    const PeriodCoeffs pc = period_coeffs(emb);
    CHECK(pc.has_C());
    CHECK(check_period_coeffs(pc));
    CHECK(check_period_reconstruction(emb, pc));
}

TEST_CASE("embedding checks reject a corrupted image") {
    PinnedEmbedding emb = frozen_jacobian_l2();
    emb.images[3][4] += 1;  // b
    CHECK_FALSE(verify_embedding(emb).ok());
}

TEST_CASE("discriminant rules by source kind") {
    CHECK(discriminant_allowed("product", 0));
    CHECK_FALSE(discriminant_allowed("product", -1));
    CHECK(discriminant_allowed("jacobian", -1));
    CHECK_FALSE(discriminant_allowed("jacobian", mpq_class(-1, 2)));
}
