// Command-line front end. Talks to the library only through the C interface.
#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "zeroleak/zeroleak.h"

int main(int argc, char** argv) {
  CLI::App app{"Perfectly private lossless compression: mechanisms, bounds and codes"};

  zl_run_config cfg = zl_default_run_config();
  std::string input;
  std::string cmd = "analyze";
  std::string format = "text";
  std::string family = "det-f";
  std::string code_path;
  std::string save_code_path;
  std::uint64_t seed = cfg.seed;
  std::size_t n = cfg.n;
  double tol_lp = cfg.tol.lp;
  double tol_ent = cfg.tol.ent;

  app.add_option("--input", input, "Distribution file (joint: or kernel:/p_y: form)");
  app.add_option("--cmd", cmd, "Subcommand")
      ->check(CLI::IsMember({"analyze", "mechanism", "code", "audit", "sweep"}))
      ->capture_default_str();
  app.add_option("--seed", seed, "Seed for encoder randomness and sweeps")->capture_default_str();
  app.add_option("--tol-lp", tol_lp, "LP feasibility tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--tol-ent", tol_ent, "Entropy equality tolerance, bits")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();
  app.add_option("--n", n, "Instances for --cmd sweep")->capture_default_str();
  app.add_option("--family", family, "Instance family for --cmd sweep")
      ->check(CLI::IsMember({"det-f", "common-info", "invertible", "small-y"}))
      ->capture_default_str();
  app.add_option("--code", code_path, "Serialized code to audit (--cmd audit)");
  app.add_option("--save-code", save_code_path, "Write the built code here (--cmd code)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  cfg.input_path = input.empty() ? nullptr : input.c_str();
  cfg.command = cmd.c_str();
  cfg.seed = seed;
  cfg.tol.lp = tol_lp;
  cfg.tol.ent = tol_ent;
  cfg.format = format.c_str();
  cfg.n = n;
  cfg.family = family.c_str();
  cfg.code_path = code_path.empty() ? nullptr : code_path.c_str();
  cfg.save_code_path = save_code_path.empty() ? nullptr : save_code_path.c_str();

  int exit_status = 0;
  char* report = nullptr;
  const zl_status st = zl_run(&cfg, &exit_status, &report);
  if (st != ZL_OK) {
    std::fprintf(stderr, "error: %s: %s\n", zl_status_name(st), zl_last_error());
    return st == ZL_INTERNAL_ERROR || st == ZL_NUMERICAL_FAILURE ? 1 : 2;
  }
  std::fputs(report, stdout);
  zl_string_free(report);
  return exit_status;
}
