// nsbound: no-signaling bounds and minimum-error discrimination from the command line.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nsbound/report.hpp"

namespace {

void add_common(CLI::App* cmd, nsbound::RunOptions& opts) {
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  cmd->add_option("--out", opts.out, "Also write the JSON result to this path");
}

void add_oracle(CLI::App* cmd, nsbound::RunOptions& opts) {
  cmd->add_option("--max-iters", opts.max_iters, "Oracle iteration cap")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", opts.tol, "Certificate tolerance")->check(CLI::PositiveNumber);
}

void add_restarts(CLI::App* cmd, nsbound::RunOptions& opts) {
  cmd->add_option("--seed", opts.seed, "Seed for randomized oracle starts");
  cmd->add_option("--restarts", opts.restarts, "Oracle starts per ensemble")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace nsbound;
  CLI::App app{"No-signaling bounds for minimum-error state discrimination"};
  app.require_subcommand(1);

  RunOptions opts;
  BoundRequest bound;
  std::string path;

  auto* reproduce = app.add_subcommand("reproduce", "Trine, qubit sweep and spin-1 reproductions");
  add_common(reproduce, opts);
  add_oracle(reproduce, opts);
  add_restarts(reproduce, opts);

  auto* bound_cmd = app.add_subcommand("bound", "No-signaling bound for a family");
  bound_cmd->require_subcommand(1);
  add_common(bound_cmd, opts);
  auto* bq = bound_cmd->add_subcommand("qubit", "Symmetric qubit family");
  bq->add_option("--n", bound.n, "Number of states")->required()->check(CLI::Range(2, 1 << 20));
  bq->add_option("--theta", bound.theta, "Polar angle (radians)")->required();
  bq->add_option("--r", bound.r, "Bloch length")->required()->check(CLI::Range(0.0, 1.0));
  auto* bs = bound_cmd->add_subcommand("spin", "Spin-j rotated family");
  bs->add_option("--two-j", bound.two_j, "Twice the spin")->required()->check(CLI::PositiveNumber);
  bs->add_option("--alpha", bound.alpha, "Alpha of rho_0")->required();
  bs->add_option("--thetas", bound.thetas, "Comma-separated rotation angles (radians)")
      ->required()
      ->delimiter(',');
  auto* bf = bound_cmd->add_subcommand("file", "Ensemble file with a recognized symmetry");
  bf->add_option("path", bound.path, "Ensemble JSON")->required();

  for (auto* sub : {bq, bs, bf}) sub->fallthrough();

  auto* compare = app.add_subcommand("compare", "Bounds versus the optimized POVM");
  compare->add_option("path", path, "Ensemble JSON")->required();
  add_common(compare, opts);
  add_oracle(compare, opts);
  add_restarts(compare, opts);

  auto* discriminate = app.add_subcommand("discriminate", "Optimize a POVM for an ensemble");
  discriminate->add_option("path", path, "Ensemble JSON")->required();
  add_common(discriminate, opts);
  add_oracle(discriminate, opts);

  auto* check = app.add_subcommand("check", "Re-verify the orderings of a saved report");
  check->add_option("path", path, "Report JSON")->required();
  add_common(check, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  if (*reproduce) return cmd_reproduce(opts, std::cout, std::cerr);
  if (*bound_cmd) {
    if (*bq) bound.kind = BoundRequest::Kind::qubit;
    if (*bs) bound.kind = BoundRequest::Kind::spin;
    if (*bf) bound.kind = BoundRequest::Kind::file;
    return cmd_bound(bound, opts, std::cout, std::cerr);
  }
  if (*compare) return cmd_compare(path, opts, std::cout, std::cerr);
  if (*discriminate) return cmd_discriminate(path, opts, std::cout, std::cerr);
  if (*check) return cmd_check(path, opts, std::cout, std::cerr);
  return kExitInputError;
}
