#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "mbq/engine.hpp"
#include "mbq/io.hpp"

using namespace mbq;
using io::json;

namespace {

constexpr int kIterations = 16;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json k2_json() { return json::parse(io::emit_bundle(io::bundle_from_fixture(fixtures::fix_k2()))); }

/// Message of the ParseError or DimensionMismatch thrown by parsing `j`.
template <class E>
std::string parse_error_of(const json& j) {
  try {
    (void)io::bundle_from_json(j);
  } catch (const E& e) {
    return e.what();
  }
  return "";
}

Report sample_report(std::mt19937& rng) {
  Report r;
  std::uniform_int_distribution<int> pick(0, 2);
  for (int i = 0; i < 5; ++i) {
    const std::string id = "E" + std::to_string(i);
    switch (pick(rng)) {
      case 0:
        r.truth(id, "FAM", true, true);
        break;
      case 1:
        r.fail(id, "FAM", Witness{fixtures::vec({1, 0}), fixtures::vec({0, i})}, "note");
        break;
      default:
        r.skip(id, "FAM", "skipped");
    }
  }
  return r;
}

}  // namespace

// ---- Bundle parsing ----

TEST(BundleOracle, ParsesK2) {
  io::Bundle b = io::parse_bundle(io::emit_bundle(io::bundle_from_fixture(fixtures::fix_k2())));
  EXPECT_EQ(b.group.n(), 2u);
  EXPECT_EQ(b.name, "FIX-K2");
  EXPECT_FALSE(b.calculus.has_value());
  EXPECT_EQ(b.ideals.size(), 2u);
  EXPECT_EQ(b.group.sigma, flip(2, 2));
}

TEST(BundleOracle, EmitParseEmitIsByteIdentical) {
  for (const auto& name : engine::fixture_names()) {
    const std::string text = io::emit_bundle(engine::named_bundle(name));
    EXPECT_EQ(io::emit_bundle(io::parse_bundle(text)), text) << name;
  }
}

TEST(BundleOracle, ShippedBundlesMatchBuiltInFixtures) {
  for (const auto& name : engine::fixture_names())
    EXPECT_EQ(slurp(std::string(MBQ_BUNDLE_DIR) + "/" + name + ".bundle"), io::emit_bundle(engine::named_bundle(name)))
        << name;
}

TEST(BundleOracle, JsonIntegersAreExactScalars) {
  json j = k2_json();
  j["group"]["mult"]["rows"][0][0] = 1;
  EXPECT_EQ(io::bundle_from_json(j).group.alg.mult, fixtures::fix_k2().group.alg.mult);
}

TEST(BundleOracle, ComplexRationalScalarsRoundTrip) {
  for (const char* s : {"1/2+3i", "-i", "7/3", "-2/5-1/7i"}) {
    const Scalar x = Scalar::parse(s);
    EXPECT_EQ(io::scalar_from_json(io::scalar_to_json(x), "$"), x) << s;
  }
}

TEST(BundleNegative, FloatStringIsRejectedWithPath) {
  json j = k2_json();
  j["group"]["mult"]["rows"][1][3] = "0.5";
  const std::string msg = parse_error_of<ParseError>(j);
  EXPECT_NE(msg.find("$.group.mult.rows[1][3]"), std::string::npos) << msg;
  EXPECT_NE(msg.find("floats forbidden"), std::string::npos) << msg;
}

TEST(BundleNegative, FloatNumberIsRejected) {
  json j = k2_json();
  j["group"]["counit"]["rows"][0][0] = 1.0;
  EXPECT_NE(parse_error_of<ParseError>(j).find("$.group.counit.rows[0][0]"), std::string::npos);
  j = k2_json();
  j["group"]["antipode"]["rows"][0][1] = "1e3";
  EXPECT_NE(parse_error_of<ParseError>(j).find("floats forbidden"), std::string::npos);
}

TEST(BundleNegative, MissingFieldNamesThePath) {
  json j = k2_json();
  j["group"].erase("counit");
  EXPECT_NE(parse_error_of<ParseError>(j).find("$.group.counit"), std::string::npos);
  EXPECT_THROW((void)io::parse_bundle("{ not json"), ParseError);
}

TEST(BundleNegative, WrongShapeIsDimensionMismatch) {
  json j = k2_json();
  j["group"]["sigma"]["shape"] = {4, 3};
  EXPECT_NE(parse_error_of<DimensionMismatch>(j).find("$.group.sigma"), std::string::npos);
  j = k2_json();
  j["group"]["coproduct"]["rows"][2] = {"1", "0", "0"};
  EXPECT_NE(parse_error_of<DimensionMismatch>(j).find("$.group.coproduct.rows[2]"), std::string::npos);
  j = k2_json();
  j["group"]["dim"] = 3;
  EXPECT_FALSE(parse_error_of<DimensionMismatch>(j).empty());
}

TEST(BundleNegative, UnsupportedFormatVersion) {
  json j = k2_json();
  j["format_version"] = 2;
  EXPECT_NE(parse_error_of<ParseError>(j).find("format_version"), std::string::npos);
}

// ---- Reports ----

TEST(ReportOracle, DigestIgnoresTimestampAndVerifies) {
  std::mt19937 rng(1);
  const Report r = sample_report(rng);
  io::ReportMeta meta{"check", io::sha256_hex("x"), json{{"range", 2}}, json{{"ok", false}}};
  const std::string a = io::emit_report(r, meta, "2026-01-01T00:00:00Z");
  const std::string b = io::emit_report(r, meta, "2030-12-31T23:59:59Z");
  EXPECT_NE(a, b);
  EXPECT_EQ(json::parse(a)["digest"], json::parse(b)["digest"]);
  EXPECT_TRUE(io::verify_report_digest(a));
  json t = json::parse(a);
  t["summary"]["fail"] = 0;
  EXPECT_FALSE(io::verify_report_digest(io::canonical(t)));
}

TEST(ReportOracle, Sha256KnownVector) {
  EXPECT_EQ(io::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(ReportProperty, RunJobsKeepsOrderForAnyWorkerCount) {
  std::mt19937 rng(33);
  for (int it = 0; it < kIterations; ++it) {
    std::vector<std::function<Report()>> jobs;
    const int count = 1 + it % 7;
    for (int k = 0; k < count; ++k) {
      const unsigned seed = rng();
      jobs.push_back([seed] {
        std::mt19937 local(seed);
        return sample_report(local);
      });
    }
    io::ReportMeta meta;
    auto digest = [&](unsigned workers) {
      Report all;
      for (const auto& r : io::run_jobs(jobs, workers)) all.merge(r);
      return json::parse(io::emit_report(all, meta, "t"))["digest"];
    };
    EXPECT_EQ(digest(1), digest(1 + static_cast<unsigned>(it % 5))) << "iteration " << it;
  }
}

TEST(ReportNegative, RunJobsRethrows) {
  std::vector<std::function<Report()>> jobs{[] { return Report{}; }, []() -> Report { throw Error("boom"); }};
  EXPECT_THROW((void)io::run_jobs(jobs, 2), Error);
}

// ---- Engine ----

TEST(EngineOracle, CheckIsDeterministicAcrossJobCounts) {
  for (const char* name : {"fix_k2", "fix_h4", "broken"}) {
    const io::Bundle b = engine::named_bundle(name);
    engine::Options one, four;
    four.jobs = 4;
    const engine::Result r1 = engine::check(b, one), r4 = engine::check(b, four);
    io::ReportMeta m1{"check", "", engine::options_json(one), r1.outcome};
    io::ReportMeta m4{"check", "", engine::options_json(four), r4.outcome};
    EXPECT_EQ(io::canonical(io::report_body(r1.report, m1)), io::canonical(io::report_body(r4.report, m4))) << name;
  }
}

TEST(EngineOracle, BuildCalculusThenCheckPasses) {
  const io::Bundle b = engine::named_bundle("fix_h4");
  for (Side side : {Side::Left, Side::Right}) {
    engine::Built built = engine::build_calculus(b, "one_minus_g", side, engine::Options{});
    ASSERT_TRUE(built.bundle.has_value());
    EXPECT_EQ(built.bundle->name, std::string("FIX-H4/one_minus_g/") + to_string(side));
    const engine::Result r = engine::check(*built.bundle, engine::Options{});
    EXPECT_TRUE(r.report.ok());
    EXPECT_EQ(r.outcome["gdim"], built.bundle->calculus->gdim);
  }
}

TEST(EngineOracle, DeriveTauOnK2IsFlip) {
  EXPECT_EQ(engine::derive(engine::named_bundle("fix_k2"), "tau", 0, engine::Options{}), flip(2, 2));
  EXPECT_THROW((void)engine::derive(engine::named_bundle("fix_k2"), "nope", 0, engine::Options{}), engine::InputError);
}

TEST(EngineNegative, BrokenBundleIsNotLeftCovariant) {
  const engine::Result r = engine::covariance(engine::named_bundle("broken"), "left", engine::Options{});
  EXPECT_FALSE(r.report.ok());
  const Entry* e = r.report.find("NotLeftCovariant");
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->status, Status::Fail);
  EXPECT_EQ(r.outcome["left_covariant"], false);
  EXPECT_TRUE(engine::covariance(engine::named_bundle("broken"), "right", engine::Options{}).report.ok());
}

TEST(EngineNegative, CorruptCalculusGatesDecisions) {
  const io::Bundle b = engine::named_bundle("corrupt_mgl");
  const engine::Result r = engine::check(b, engine::Options{});
  EXPECT_FALSE(r.report.ok());
  ASSERT_NE(r.report.find("DECISIONS"), nullptr);
  EXPECT_EQ(r.report.find("DECISIONS")->status, Status::Skipped);
  const engine::Result cov = engine::covariance(b, "star", engine::Options{});
  ASSERT_NE(cov.report.find("NotCalculus"), nullptr);
  EXPECT_EQ(cov.outcome["calculus"], false);
}

TEST(EngineNegative, UnknownIdealIsInputError) {
  EXPECT_THROW((void)engine::build_calculus(engine::named_bundle("fix_k2"), "nope", Side::Left, engine::Options{}),
               engine::InputError);
  EXPECT_THROW((void)engine::covariance(engine::named_bundle("fix_k2"), "left", engine::Options{}),
               engine::InputError);
}
