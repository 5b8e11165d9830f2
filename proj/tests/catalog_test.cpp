#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "numstab/catalog/catalog.hpp"
#include "numstab/exprscan/rules.hpp"

using namespace numstab::catalog;

namespace {

std::string seed_path() { return std::string(NUMSTAB_DATA_DIR) + "/catalog_seed.json"; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST(Catalog, SeedLoadsWithTheExpectedEntries) {
    const Catalog cat = Catalog::load(seed_path());
    EXPECT_GE(cat.entries().size(), 16u);
    for (int index : {2, 3, 4, 28}) EXPECT_NE(cat.find(index), nullptr);
    // Entries reconstructed from the literature carry no commit hash.
    for (const auto& e : cat.entries()) EXPECT_TRUE(e.commit_hash.empty());
}

TEST(Catalog, DuplicateIndicesAreRejected) {
    const auto doc = nlohmann::json::parse(slurp(seed_path()));
    nlohmann::json dup = doc;
    dup.push_back(doc[0]);
    EXPECT_THROW(Catalog::from_json(dup), std::runtime_error);
}

TEST(Catalog, UnknownEnumValueNamesTheFieldAndValue) {
    auto doc = nlohmann::json::parse(slurp(seed_path()));
    doc[0]["patch_type"] = "novel_fix";
    try {
        Catalog::from_json(doc);
        FAIL() << "expected a schema error";
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("patch_type"), std::string::npos);
        EXPECT_NE(msg.find("novel_fix"), std::string::npos);
    }
}

TEST(Catalog, UnknownFieldIsRejected) {
    auto doc = nlohmann::json::parse(slurp(seed_path()));
    doc[0]["surprise"] = 1;
    EXPECT_THROW(Catalog::from_json(doc), std::runtime_error);
}

TEST(Catalog, QueryByTopicFindsTheSoftmaxEntry) {
    const Catalog cat = Catalog::load(seed_path());
    CatalogQuery q;
    q.topic = "activation functions";
    const auto hits = cat.query(q);
    bool found_softmax = false;
    for (const auto& e : hits)
        if (e.index == 1) found_softmax = true;
    EXPECT_TRUE(found_softmax);
    // Results come back ordered by index.
    for (std::size_t i = 1; i < hits.size(); ++i)
        EXPECT_LT(hits[i - 1].index, hits[i].index);
}

TEST(Catalog, KeywordSearchReachesEveryTextField) {
    const Catalog cat = Catalog::load(seed_path());
    CatalogQuery q;
    q.keyword = "binary search";
    const auto hits = cat.query(q);
    bool found_28 = false;
    for (const auto& e : hits)
        if (e.index == 28) found_28 = true;
    EXPECT_TRUE(found_28);
}

TEST(Catalog, ConjunctiveFiltersCanProduceNothing) {
    const Catalog cat = Catalog::load(seed_path());
    CatalogQuery q;
    q.topic = "activation functions";
    q.keyword = "no such phrase anywhere";
    EXPECT_TRUE(cat.query(q).empty());
}

TEST(Catalog, AggregateFixtureReproducesTheStudyPercentages) {
    const auto agg =
        AggregateCounts::load(std::string(NUMSTAB_DATA_DIR) + "/paper_aggregate.json");
    EXPECT_EQ(agg.total_commits, 252);

    int exception_sum = 0;
    for (const auto& l : agg.exceptions) exception_sum += l.count;
    EXPECT_EQ(exception_sum, 252);
    int patch_sum = 0;
    for (const auto& l : agg.patches) patch_sum += l.count;
    EXPECT_EQ(patch_sum, 252);
    int topic_sum = 0;
    for (const auto& l : agg.topics) topic_sum += l.count;
    EXPECT_EQ(topic_sum, 222);
    EXPECT_EQ(static_cast<int>(std::lround(100.0 * topic_sum / agg.total_commits)), 88);

    auto pct = [&](const std::vector<StatLine>& dim, const std::string& label) {
        for (const auto& l : dim)
            if (l.label == label) return format_percent(l.count, agg.total_commits);
        return std::string("missing");
    };
    EXPECT_EQ(pct(agg.exceptions, "overflow"), "46.8%");
    EXPECT_EQ(pct(agg.exceptions, "loss of precision"), "34.1%");
    EXPECT_EQ(pct(agg.patches, "rewrite math formula"), "25.0%");
    EXPECT_EQ(pct(agg.patches, "increase precision/change variable type"), "23.4%");
    EXPECT_EQ(pct(agg.patches, "use a different algorithm"), "17.1%");
}

TEST(Catalog, EmptyCatalogStatsRenderAsDashes) {
    const Catalog cat = Catalog::from_json(nlohmann::json::array());
    const CatalogStats s = cat.stats();
    EXPECT_EQ(s.total, 0);
    EXPECT_TRUE(s.exceptions.empty());
    EXPECT_EQ(format_percent(0, 0), "—");
}

TEST(Catalog, SeedStatsCountCombinationsOnce) {
    const Catalog cat = Catalog::load(seed_path());
    const CatalogStats s = cat.stats();
    EXPECT_EQ(s.total, static_cast<int>(cat.entries().size()));
    int sum = 0;
    for (const auto& l : s.exceptions) sum += l.count;
    EXPECT_EQ(sum, s.total); // each entry lands in exactly one combination row
}

TEST(Catalog, LoadSaveRoundTripIsByteStable) {
    const Catalog cat = Catalog::load(seed_path());
    const std::string tmp1 = testing::TempDir() + "/catalog_roundtrip1.json";
    const std::string tmp2 = testing::TempDir() + "/catalog_roundtrip2.json";
    cat.save(tmp1);
    Catalog::load(tmp1).save(tmp2);
    EXPECT_EQ(slurp(tmp1), slurp(tmp2));
    std::remove(tmp1.c_str());
    std::remove(tmp2.c_str());
}

TEST(Catalog, ShippedSeedIsCanonical) {
    const Catalog cat = Catalog::load(seed_path());
    const std::string tmp = testing::TempDir() + "/catalog_canonical.json";
    cat.save(tmp);
    EXPECT_EQ(slurp(tmp), slurp(seed_path()));
    std::remove(tmp.c_str());
}

TEST(Catalog, EveryRuleLinkResolves) {
    const Catalog cat = Catalog::load(seed_path());
    std::ifstream in(std::string(NUMSTAB_DATA_DIR) + "/rules.json");
    std::ostringstream text;
    text << in.rdbuf();
    const auto rules = numstab::exprscan::load_rules_json(text.str());
    EXPECT_EQ(rules.size(), 10u);
    for (const auto& r : rules) EXPECT_NE(cat.find(r.catalog_index), nullptr)
        << "rule " << r.id << " links to missing catalog entry " << r.catalog_index;
}
