#pragma once

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "mbq/calculus.hpp"
#include "mbq/fixtures.hpp"

namespace mbq::io {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kEngineVersion = "0.1.0";

struct Bundle {
  int format_version = kFormatVersion;
  std::string name;
  GroupData group;
  std::optional<FirstOrderCalculus> calculus;
  std::vector<fixtures::IdealSpec> ideals;
};

namespace detail {

inline std::string idx(const std::string& path, size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline const json& field(const json& j, const std::string& path, const char* name) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(path + "." + name + ": missing field");
  return *it;
}

inline size_t count_of(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ParseError(path + ": expected a non-negative integer");
  return static_cast<size_t>(j.get<long long>());
}

}  // namespace detail

inline json scalar_to_json(const Scalar& s) { return s.str(); }

/// Exact scalars are strings; JSON integers are accepted, JSON floats never.
inline Scalar scalar_from_json(const json& j, const std::string& path) {
  if (j.is_number_float()) throw ParseError(path + ": floating-point scalar " + j.dump() + " (floats forbidden)");
  if (j.is_number_integer()) return Scalar::parse(std::to_string(j.get<long long>()));
  if (!j.is_string()) throw ParseError(path + ": expected an exact scalar string");
  const std::string s = j.get<std::string>();
  if (s.find_first_of(".eE") != std::string::npos && s.find('i') == std::string::npos)
    throw ParseError(path + ": floating-point scalar \"" + s + "\" (floats forbidden)");
  try {
    return Scalar::parse(s);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline json vec_to_json(const Vec& v) {
  json a = json::array();
  for (const auto& s : v) a.push_back(scalar_to_json(s));
  return a;
}

inline Vec vec_from_json(const json& j, const std::string& path, std::optional<size_t> len = std::nullopt) {
  if (!j.is_array()) throw ParseError(path + ": expected an array of scalars");
  if (len && j.size() != *len)
    throw DimensionMismatch(path + ": length " + std::to_string(j.size()) + ", expected " + std::to_string(*len));
  Vec v;
  v.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) v.push_back(scalar_from_json(j[i], detail::idx(path, i)));
  return v;
}

/// {"shape": [rows, cols], "rows": [[...], ...]} in row-major order.
inline json matrix_to_json(const LinMap& f) {
  json rows = json::array();
  for (size_t i = 0; i < f.cod(); ++i) {
    json row = json::array();
    for (size_t j = 0; j < f.dom(); ++j) row.push_back(scalar_to_json(f.at(i, j)));
    rows.push_back(std::move(row));
  }
  return json{{"shape", {f.cod(), f.dom()}}, {"rows", std::move(rows)}};
}

inline LinMap matrix_from_json(const json& j, const std::string& path, size_t cod, size_t dom) {
  const json& shape = detail::field(j, path, "shape");
  if (!shape.is_array() || shape.size() != 2) throw ParseError(path + ".shape: expected [rows, cols]");
  const size_t r = detail::count_of(shape[0], path + ".shape[0]"), c = detail::count_of(shape[1], path + ".shape[1]");
  if (r != cod || c != dom)
    throw DimensionMismatch(path + ": shape " + std::to_string(r) + "x" + std::to_string(c) + ", expected " +
                            std::to_string(cod) + "x" + std::to_string(dom));
  const json& rows = detail::field(j, path, "rows");
  if (!rows.is_array()) throw ParseError(path + ".rows: expected an array");
  if (rows.size() != cod) throw DimensionMismatch(path + ".rows: " + std::to_string(rows.size()) + " rows");
  std::vector<Vec> table;
  table.reserve(cod);
  for (size_t i = 0; i < cod; ++i) table.push_back(vec_from_json(rows[i], detail::idx(path + ".rows", i), dom));
  return LinMap::from_rows(cod, dom, table);
}

inline json bundle_to_json(const Bundle& b) {
  const GroupData& d = b.group;
  json grp{{"dim", d.n()},
           {"basis_labels", d.labels},
           {"unit", matrix_to_json(d.alg.unit)},
           {"mult", matrix_to_json(d.alg.mult)},
           {"coproduct", matrix_to_json(d.phi)},
           {"counit", matrix_to_json(d.eps)},
           {"antipode", matrix_to_json(d.kappa)},
           {"sigma", matrix_to_json(d.sigma)}};
  if (d.star) grp["star"] = json{{"antilinear", true}, {"matrix", matrix_to_json(d.star->linear_part())}};
  json j{{"format_version", b.format_version}, {"name", b.name}, {"group", std::move(grp)}};
  if (b.calculus) {
    const FirstOrderCalculus& c = *b.calculus;
    j["calculus"] = json{{"gdim", c.gdim}, {"mgl", matrix_to_json(c.mgl)}, {"mgr", matrix_to_json(c.mgr)},
                         {"d", matrix_to_json(c.d)}};
  }
  json ideals = json::array();
  for (const auto& id_ : b.ideals) {
    json gens = json::array();
    for (const auto& v : id_.generators) gens.push_back(vec_to_json(v));
    ideals.push_back(json{{"name", id_.name}, {"generators", std::move(gens)}});
  }
  j["ideals"] = std::move(ideals);
  return j;
}

inline Bundle bundle_from_json(const json& j) {
  using detail::field;
  Bundle b;
  const json& ver = field(j, "$", "format_version");
  if (!ver.is_number_integer() || ver.get<int>() != kFormatVersion)
    throw ParseError("$.format_version: unsupported value " + ver.dump());
  const json& name = field(j, "$", "name");
  if (!name.is_string()) throw ParseError("$.name: expected a string");
  b.name = name.get<std::string>();
  const json& g = field(j, "$", "group");
  const size_t n = detail::count_of(field(g, "$.group", "dim"), "$.group.dim");
  if (n == 0) throw DimensionMismatch("$.group.dim: must be positive");
  GroupData& d = b.group;
  d.alg.dim = n;
  d.alg.unit = matrix_from_json(field(g, "$.group", "unit"), "$.group.unit", n, 1);
  d.alg.mult = matrix_from_json(field(g, "$.group", "mult"), "$.group.mult", n, n * n);
  d.phi = matrix_from_json(field(g, "$.group", "coproduct"), "$.group.coproduct", n * n, n);
  d.eps = matrix_from_json(field(g, "$.group", "counit"), "$.group.counit", 1, n);
  d.kappa = matrix_from_json(field(g, "$.group", "antipode"), "$.group.antipode", n, n);
  d.sigma = matrix_from_json(field(g, "$.group", "sigma"), "$.group.sigma", n * n, n * n);
  const json& labels = field(g, "$.group", "basis_labels");
  if (!labels.is_array() || labels.size() != n) throw DimensionMismatch("$.group.basis_labels: expected dim labels");
  for (size_t i = 0; i < n; ++i) {
    if (!labels[i].is_string()) throw ParseError(detail::idx("$.group.basis_labels", i) + ": expected a string");
    d.labels.push_back(labels[i].get<std::string>());
  }
  if (g.contains("star")) {
    const json& st = g["star"];
    const json& anti = field(st, "$.group.star", "antilinear");
    if (!anti.is_boolean() || !anti.get<bool>()) throw ParseError("$.group.star.antilinear: must be true");
    d.star = AntilinMap(matrix_from_json(field(st, "$.group.star", "matrix"), "$.group.star.matrix", n, n));
  }
  if (j.contains("calculus")) {
    const json& c = j["calculus"];
    const size_t gd = detail::count_of(field(c, "$.calculus", "gdim"), "$.calculus.gdim");
    FirstOrderCalculus calc;
    calc.gdim = gd;
    calc.mgl = matrix_from_json(field(c, "$.calculus", "mgl"), "$.calculus.mgl", gd, n * gd);
    calc.mgr = matrix_from_json(field(c, "$.calculus", "mgr"), "$.calculus.mgr", gd, gd * n);
    calc.d = matrix_from_json(field(c, "$.calculus", "d"), "$.calculus.d", gd, n);
    b.calculus = std::move(calc);
  }
  const json& ideals = field(j, "$", "ideals");
  if (!ideals.is_array()) throw ParseError("$.ideals: expected an array");
  for (size_t i = 0; i < ideals.size(); ++i) {
    const std::string p = detail::idx("$.ideals", i);
    fixtures::IdealSpec spec;
    const json& nm = field(ideals[i], p, "name");
    if (!nm.is_string()) throw ParseError(p + ".name: expected a string");
    spec.name = nm.get<std::string>();
    const json& gens = field(ideals[i], p, "generators");
    if (!gens.is_array()) throw ParseError(p + ".generators: expected an array");
    for (size_t k = 0; k < gens.size(); ++k)
      spec.generators.push_back(vec_from_json(gens[k], detail::idx(p + ".generators", k), n));
    b.ideals.push_back(std::move(spec));
  }
  return b;
}

/// Canonical text: sorted keys, two-space indent, trailing newline.
inline std::string canonical(const json& j) { return j.dump(2) + "\n"; }

inline std::string emit_bundle(const Bundle& b) { return canonical(bundle_to_json(b)); }

inline Bundle parse_bundle(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return bundle_from_json(j);
}

inline Bundle bundle_from_fixture(const fixtures::Fixture& f) {
  Bundle b;
  b.name = f.name;
  b.group = f.group;
  b.ideals = f.ideals;
  return b;
}

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("SHA-256 failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

inline json witness_to_json(const Witness& w) {
  return json{{"input", vec_to_json(w.input)}, {"residual", vec_to_json(w.residual)}};
}

inline json entry_to_json(const Entry& e) {
  json j{{"id", e.id}, {"family", e.family}, {"status", to_string(e.status)}, {"nonvacuous", e.nonvacuous}};
  if (!e.note.empty()) j["note"] = e.note;
  if (e.witness) j["witness"] = witness_to_json(*e.witness);
  return j;
}

/// Report metadata that enters the digest.
struct ReportMeta {
  std::string command;
  std::string input_digest;
  json options = json::object();
  json outcome = json::object();
};

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Report body without timestamp and digest; the digest is SHA-256 of its canonical text.
inline json report_body(const Report& r, const ReportMeta& meta) {
  json entries = json::array();
  for (const auto& e : r.entries()) entries.push_back(entry_to_json(e));
  return json{{"engine", {{"name", "mbqcalc"}, {"version", kEngineVersion}}},
              {"command", meta.command},
              {"input_digest", meta.input_digest},
              {"options", meta.options},
              {"outcome", meta.outcome},
              {"summary",
               {{"pass", r.count(Status::Pass)},
                {"fail", r.count(Status::Fail)},
                {"skipped", r.count(Status::Skipped)},
                {"total", r.entries().size()}}},
              {"entries", std::move(entries)}};
}

inline std::string emit_report(const Report& r, const ReportMeta& meta, const std::string& timestamp = utc_timestamp()) {
  json body = report_body(r, meta);
  const std::string digest = sha256_hex(canonical(body));
  body["digest"] = digest;
  body["timestamp"] = timestamp;
  return canonical(body);
}

/// Recomputes the digest of an emitted report and compares it with the stored one.
inline bool verify_report_digest(const std::string& text) {
  json j = json::parse(text);
  if (!j.contains("digest")) return false;
  const std::string stored = j["digest"].get<std::string>();
  j.erase("digest");
  j.erase("timestamp");
  return sha256_hex(canonical(j)) == stored;
}

/// Runs independent jobs on at most `workers` threads; results keep the job order.
inline std::vector<Report> run_jobs(const std::vector<std::function<Report()>>& jobs, unsigned workers) {
  std::vector<Report> out(jobs.size());
  std::vector<std::exception_ptr> errs(jobs.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      try {
        out[i] = jobs[i]();
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  const unsigned w = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < w; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace mbq::io
