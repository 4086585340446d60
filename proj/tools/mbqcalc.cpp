#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mbq/engine.hpp"

namespace {

using namespace mbq;
using engine::InputError;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

/// Emits the report and returns the exit code it implies.
int finish(const std::string& command, const io::Bundle& b, const engine::Result& res, const engine::Options& o,
           const std::string& report_path) {
  io::ReportMeta meta;
  meta.command = command;
  meta.input_digest = io::sha256_hex(io::emit_bundle(b));
  meta.options = engine::options_json(o);
  meta.outcome = res.outcome;
  write_text(report_path, io::emit_report(res.report, meta));
  const Report& r = res.report;
  std::cerr << command << ": " << r.count(Status::Pass) << " pass, " << r.count(Status::Fail) << " fail, "
            << r.count(Status::Skipped) << " skipped\n";
  for (const auto& e : r.entries())
    if (e.status == Status::Fail) std::cerr << "  FAIL " << e.id << (e.note.empty() ? "" : ": " + e.note) << "\n";
  return r.ok() ? kExitPass : kExitFail;
}

Side parse_side(const std::string& s) {
  if (s == "left") return Side::Left;
  if (s == "right") return Side::Right;
  throw InputError("side must be left or right");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification engine for multi-braided quantum groups and their first-order calculi"};
  app.require_subcommand(1);
  engine::Options opt;
  app.add_option("--range", opt.range, "sigma_n shift window for flip-over operators")->check(CLI::Range(1, 8));
  app.add_flag("--paranoid", opt.paranoid, "recompute derived maps on every access");
  app.add_option("--jobs", opt.jobs, "worker threads for independent checks")->check(CLI::Range(1u, 64u));

  std::string bundle_path, report_path, out_path, what = "tau", ideal, side = "left", mode, fixture;
  int shift = 1;
  size_t max_elems = 16;

  auto* check = app.add_subcommand("check", "verify the group and, when present, the calculus");
  check->add_option("bundle", bundle_path)->required();
  check->add_option("--report", report_path, "report path (default stdout)");

  auto* derive = app.add_subcommand("derive", "emit a derived map as a matrix");
  derive->add_option("bundle", bundle_path)->required();
  derive->add_option("--what", what)->required()->check(CLI::IsMember({"tau", "sigma-n", "a0", "kappa0", "ad"}));
  derive->add_option("-n", shift, "shift for sigma-n");
  derive->add_option("-o", out_path, "output path (default stdout)");

  auto* build = app.add_subcommand("build-calculus", "reconstruct the calculus of a named ideal");
  build->add_option("bundle", bundle_path)->required();
  build->add_option("--ideal", ideal)->required();
  build->add_option("--side", side)->check(CLI::IsMember({"left", "right"}));
  build->add_option("-o", out_path, "output bundle")->required();
  build->add_option("--report", report_path, "report path (default stdout)");

  auto* cov = app.add_subcommand("covariance", "decide one covariance property");
  cov->add_option("bundle", bundle_path)->required();
  cov->add_option("--mode", mode)
      ->required()
      ->check(CLI::IsMember({"left", "right", "bi", "kappa", "star", "braided"}));
  cov->add_option("--report", report_path, "report path (default stdout)");

  auto* complete = app.add_subcommand("complete-system", "close {sigma, tau} into a braid system");
  complete->add_option("bundle", bundle_path)->required();
  complete->add_option("--max", max_elems)->required();
  complete->add_option("--report", report_path, "report path (default stdout)");

  auto* exp = app.add_subcommand("export-fixture", "write a built-in fixture bundle");
  exp->add_option("name", fixture)->required()->check(CLI::IsMember(engine::fixture_names()));
  exp->add_option("-o", out_path, "output path (default stdout)");

  for (auto* sub : {check, derive, build, cov, complete, exp}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*exp) {
      write_text(out_path, io::emit_bundle(engine::named_bundle(fixture)));
      return kExitPass;
    }
    const io::Bundle b = io::parse_bundle(read_file(bundle_path));
    if (*check) return finish("check", b, engine::check(b, opt), opt, report_path);
    if (*cov) return finish("covariance --mode " + mode, b, engine::covariance(b, mode, opt), opt, report_path);
    if (*complete)
      return finish("complete-system --max " + std::to_string(max_elems), b,
                    engine::complete_system(b, max_elems, opt), opt, report_path);
    if (*derive) {
      const LinMap f = engine::derive(b, what, shift, opt);
      io::json j{{"what", what}, {"matrix", io::matrix_to_json(f)}};
      if (what == "sigma-n") j["n"] = shift;
      write_text(out_path, io::canonical(j));
      return kExitPass;
    }
    if (*build) {
      engine::Built built = engine::build_calculus(b, ideal, parse_side(side), opt);
      if (built.bundle) write_text(out_path, io::emit_bundle(*built.bundle));
      return finish("build-calculus --ideal " + ideal + " --side " + side, b, built.result, opt, report_path);
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DimensionMismatch& e) {
    std::cerr << "dimension error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
