#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support/criteria.hpp"
#include "support/gen.hpp"
#include "torembed/errors.hpp"
#include "torembed/family.hpp"
#include "torembed/instance.hpp"
#include "torembed/report.hpp"
#include "torembed/search.hpp"

using namespace torembed;
namespace gen = torembed::testing;
using gen::Rng;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& name) { return gen::data_dir() + "/" + name; }

std::string schema_error(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Schema);
    return e.what();
  }
  ADD_FAILURE() << "parsed: " << text;
  return "";
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("torembed-test-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                         "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::size_t line_count(const std::string& path) {
  std::ifstream in(path);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) ++n;
  return n;
}

SearchConfig small_three_subfield(const std::string& out) {
  SearchConfig cfg;
  cfg.family = GridFamily::ThreeSubfield;
  cfg.params["a"] = {17};
  cfg.params["b"] = {89};
  for (int c = 2; c <= 40; ++c) cfg.params["c"].push_back(c);
  cfg.out = out;
  cfg.seed = 3;
  return cfg;
}

}  // namespace

TEST(Instance, ShippedFilesRoundTrip) {
  for (const char* name : {"hyperbolic_plane.json", "local_global.json", "three_subfield_bm.json"}) {
    const Instance a = load_instance(data(name));
    const std::string text = instance_to_json(a).dump(2);
    const Instance b = parse_instance(text);
    EXPECT_EQ(a, b) << name;
    EXPECT_EQ(instance_to_json(b).dump(2), text) << name;
    EXPECT_EQ(instance_hash(a), instance_hash(b));
  }
}

TEST(Instance, RandomRoundTrip) {
  Rng rng(81);
  for (int k = 0; k < 60; ++k) {
    Instance inst;
    switch (k % 3) {
      case 0: inst.E = gen::random_even_orthogonal(rng); break;
      case 1: inst.E = gen::random_odd_orthogonal(rng); break;
      default: inst.E = gen::random_unitary(rng); break;
    }
    inst.A = gen::constructive_algebra(inst.E, gen::random_scalars(rng, inst.E));
    inst.options.seed = static_cast<std::uint64_t>(k);
    EXPECT_EQ(parse_instance(instance_to_json(inst).dump()), inst);
  }
}

TEST(Instance, HashIgnoresOptions) {
  Instance a = load_instance(data("hyperbolic_plane.json"));
  Instance b = a;
  b.options.seed = 99;
  b.options.parallel = true;
  EXPECT_EQ(instance_hash(a), instance_hash(b));
  EXPECT_EQ(canonical_text(a), canonical_text(b));
  EXPECT_NE(instance_hash(a), instance_hash(load_instance(data("local_global.json"))));
}

TEST(Instance, BigIntegersSurvive) {
  Instance inst = load_instance(data("hyperbolic_plane.json"));
  Rat big(Int("123456789012345678901234567891"), Int(7));
  big.canonicalize();
  inst.A = validate_algebra({OrthSplit{DiagonalForm({big, -big})}});
  const Instance back = parse_instance(instance_to_json(inst).dump());
  EXPECT_EQ(instance_to_json(back).dump(), instance_to_json(inst).dump());
  EXPECT_EQ(back, inst);
}

TEST(Instance, SchemaErrorsNamePathAndLine) {
  const std::string broken = "{\n  \"version\": 1,\n  \"etale\": {\n    \"case\": \"orthogonal\",,\n";
  EXPECT_NE(schema_error(broken).find("line 4"), std::string::npos);

  const std::string bad_kind = R"({"version": 1,
    "etale": {"case": "orthogonal", "components": [{"F": "Q", "kind": "quadratic"}]},
    "algebra": {"variant": "orth_split", "q": [1, -1]}})";
  EXPECT_NE(schema_error(bad_kind).find("etale.components[0].kind"), std::string::npos);

  const std::string bad_q = R"({"version": 1,
    "etale": {"case": "orthogonal", "components": [{"F": "Q", "kind": "split"}]},
    "algebra": {"variant": "orth_split", "q": [1, "x/y"]}})";
  EXPECT_NE(schema_error(bad_q).find("algebra.q[1]"), std::string::npos);

  EXPECT_THROW(load_instance(data("does_not_exist.json")), Error);
}

TEST(Instance, ValidationKeepsItsErrorKind) {
  const std::string text = R"({"version": 1,
    "etale": {"case": "orthogonal", "components": [{"F": "Q", "kind": "trivial"}, {"F": "Q", "kind": "trivial"}]},
    "algebra": {"variant": "orth_split", "q": [1, -1]}})";
  try {
    parse_instance(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MultipleTrivial);
  }
}

TEST(Report, JsonRoundTrip) {
  for (const char* name : {"hyperbolic_plane.json", "local_global.json", "three_subfield_bm.json"}) {
    const Report r = make_report(load_instance(data(name)));
    const Json j = report_to_json(r);
    EXPECT_EQ(report_from_json(Json::parse(j.dump())), r) << name;
    EXPECT_EQ(j["verdict"]["exit_code"].get<int>(), exit_code(r.verdict.outcome));
  }
}

TEST(Report, RandomJsonRoundTrip) {
  Rng rng(82);
  for (int k = 0; k < 30; ++k) {
    Instance inst;
    inst.E = gen::random_even_orthogonal(rng);
    inst.A = gen::constructive_algebra(inst.E, gen::random_scalars(rng, inst.E));
    const Report r = make_report(inst);
    EXPECT_EQ(report_from_json(report_to_json(r)), r);
  }
}

TEST(Report, ShippedOutcomes) {
  EXPECT_EQ(make_report(load_instance(data("hyperbolic_plane.json"))).verdict.outcome, Outcome::GloballyEmbeddable);
  EXPECT_EQ(make_report(load_instance(data("local_global.json"))).verdict.outcome, Outcome::OrientationIndeterminate);
  const Report bm = make_report(load_instance(data("three_subfield_bm.json")));
  EXPECT_EQ(bm.verdict.outcome, Outcome::BrauerManinObstructed);
  const std::string text = render_text(bm);
  EXPECT_NE(text.find("witness    ({1,3},{2})"), std::string::npos);
  EXPECT_NE(text.find("sha        order 4"), std::string::npos);
}

TEST(Report, SchemaErrorOnGarbage) {
  EXPECT_THROW(report_from_json(Json::parse(R"({"seed": 1})")), Error);
}

TEST(Family, ShippedFilesMatchGenerators) {
  using torembed::Place;
  const Instance sec = local_global_instance({Place::prime(3), Place::prime(5), Place::prime(7), Place::prime(11)});
  EXPECT_EQ(canonical_text(sec), canonical_text(load_instance(data("local_global.json"))));
  const NonsplitPair ab = local_global_pair({Place::prime(3), Place::prime(5), Place::prime(7), Place::prime(11)});
  EXPECT_EQ(ab.a, 17);
  EXPECT_EQ(ab.b, 379);
  const NonsplitPair ab13 = local_global_pair({Place::prime(3), Place::prime(5), Place::prime(7), Place::prime(13)});
  EXPECT_TRUE(local_global_table_holds({Place::prime(3), Place::prime(5), Place::prime(7), Place::prime(13)}, ab13.a, ab13.b));
  EXPECT_EQ(canonical_text(three_subfield_instance().instance), canonical_text(load_instance(data("three_subfield_bm.json"))));
}

TEST(SearchConfigFile, ParsesShippedConfigs) {
  const SearchConfig t = load_search_config(data("search_three_subfield.json"));
  EXPECT_EQ(t.family, GridFamily::ThreeSubfield);
  EXPECT_EQ(t.params.at("c").size(), 39u);
  EXPECT_EQ(load_search_config(data("search_local_global.json")).place_sets.size(), 3u);
  EXPECT_THROW(parse_search_config(Json::parse(R"({"family": "nope"})")), Error);
  EXPECT_THROW(parse_search_config(Json::parse(R"({"family": "single", "workers": 0})")), Error);
}

TEST(Search, ThreeSubfieldGridFindsBrauerManinHits) {
  TempDir dir;
  const SearchStats st = run_search(small_three_subfield(dir.file("hits.jsonl")), false);
  EXPECT_EQ(st.candidates, 39u);
  EXPECT_GE(st.outcomes.count(Outcome::BrauerManinObstructed), 1u);
  ASSERT_FALSE(st.hits.empty());
  for (const Hit& h : st.hits) {
    EXPECT_EQ(h.outcome, Outcome::BrauerManinObstructed);
    EXPECT_EQ(h.witness, "({1,3},{2})");
    // every stored instance decides the same way again
    EXPECT_EQ(make_report(instance_from_json(h.instance)).verdict.outcome, Outcome::BrauerManinObstructed);
  }
  EXPECT_EQ(line_count(dir.file("hits.jsonl")), st.hits.size());
}

TEST(Search, SingleComponentGridHasNoBrauerManinHits) {
  SearchConfig cfg = load_search_config(data("search_single.json"));
  cfg.out.clear();
  const SearchStats st = run_search(cfg, false);
  EXPECT_GT(st.evaluated, 100u);
  EXPECT_EQ(st.outcomes.count(Outcome::BrauerManinObstructed), 0u);
}

TEST(Search, CounterexampleGridIsOrientationIndeterminate) {
  SearchConfig cfg = load_search_config(data("search_local_global.json"));
  cfg.out.clear();
  const SearchStats st = run_search(cfg, false);
  EXPECT_EQ(st.hits.size(), 3u);
  for (const Hit& h : st.hits) EXPECT_EQ(h.outcome, Outcome::OrientationIndeterminate);
}

TEST(Search, ResultsIndependentOfWorkersAndSeed) {
  SearchConfig cfg = small_three_subfield("");
  const SearchStats ref = search_serial(cfg);
  for (int w : {1, 2, 4}) {
    cfg.workers = w;
    cfg.seed = static_cast<std::uint64_t>(w) * 17;
    const SearchStats st = search_parallel(cfg);
    ASSERT_EQ(st.hits.size(), ref.hits.size());
    for (std::size_t i = 0; i < st.hits.size(); ++i) EXPECT_EQ(st.hits[i].hash, ref.hits[i].hash);
    EXPECT_EQ(st.outcomes, ref.outcomes);
  }
}

TEST(Search, StoreIsAppendOnlyAndDeduplicated) {
  TempDir dir;
  const SearchConfig cfg = small_three_subfield(dir.file("hits.jsonl"));
  const SearchStats first = run_search(cfg, false);
  const std::size_t lines = line_count(cfg.out);
  EXPECT_EQ(first.new_hits, lines);
  const SearchStats second = run_search(cfg, true);
  EXPECT_EQ(second.new_hits, 0u);
  EXPECT_EQ(line_count(cfg.out), lines);
  EXPECT_EQ(stored_hashes(cfg.out).size(), lines);
}

TEST(Search, CandidateBudget) {
  SearchConfig cfg = small_three_subfield("");
  cfg.max_candidates = 5;
  const SearchStats st = search_serial(cfg);
  EXPECT_TRUE(st.exhausted);
  EXPECT_LE(st.evaluated, 5u);
}
