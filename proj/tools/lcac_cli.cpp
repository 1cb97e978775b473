// Command-line front end: verify a scenario, fuzz the bounds, list the catalog.

#include "lcac/lcac.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

int emit(const lcac::Json& report, const std::string& out) {
  const std::string text = report.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(out);
  if (!f) {
    std::cerr << "error: cannot write " << out << "\n";
    return 2;
  }
  f << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature invariants and inequalities for submanifolds tangent to xi"};
  app.require_subcommand(1);

  std::string scenario, out;
  std::uint64_t seed = 0;
  unsigned jobs = lcac::default_jobs();
  auto* verify = app.add_subcommand("verify", "run the checks of a scenario file");
  verify->add_option("--scenario", scenario, "scenario JSON file")->required();
  verify->add_option("--out", out, "write the report here instead of stdout");
  auto* seed_opt = verify->add_option("--seed", seed, "override the scenario seed");
  verify->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  lcac::FuzzConfig fz;
  std::string fuzz_out;
  auto* fuzz = app.add_subcommand("fuzz", "random points: identities and universal bounds");
  fuzz->add_option("--n", fz.n, "tangent dimension")->required();
  fuzz->add_option("--m", fz.m, "ambient dimension is 2m+1")->required();
  fuzz->add_option("--trials", fz.trials, "number of draws")->required();
  fuzz->add_option("--seed", fz.seed, "base seed")->required();
  fuzz->add_option("--jobs", fz.jobs, "worker threads")->check(CLI::PositiveNumber);
  fuzz->add_flag("--zero-sigma", fz.zero_sigma, "force sigma = 0");
  fuzz->add_option("--out", fuzz_out, "write the summary here instead of stdout");
  fz.jobs = lcac::default_jobs();

  auto* cat = app.add_subcommand("catalog", "list catalog immersions and parameter ranges");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*verify) {
    std::optional<std::uint64_t> s;
    if (seed_opt->count() > 0) s = seed;
    const auto res = lcac::run_scenario(scenario, jobs, s);
    if (res.exit_code == 2) std::cerr << "error: " << res.report["error"]["message"].get<std::string>() << "\n";
    const int w = emit(res.report, out);
    return w != 0 ? w : res.exit_code;
  }
  if (*fuzz) {
    try {
      const auto sum = lcac::fuzz(fz);
      const int w = emit(sum.report, fuzz_out);
      return w != 0 ? w : (sum.violations == 0 ? 0 : 1);
    } catch (const lcac::ConfigurationError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  if (*cat) return emit(lcac::catalog_listing(), "");
  return 2;
}
