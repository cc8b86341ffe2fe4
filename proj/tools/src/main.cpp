#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"g3: generalized 3D Yang-Mills verification suites and lattice solver"};
  app.require_subcommand(1, 1);

  g3::cli::RunConfig flags;
  std::string config_path;
  std::vector<std::int64_t> seeds;
  int seed_count = 0;
  double amp = 0, tol = 0;

  std::vector<CLI::Option*> opts;  // options that override the config file
  auto common = [&](CLI::App* sc) {
    sc->add_option("--config", config_path, "JSON config file; explicit flags override its values");
    opts.push_back(sc->add_option("--json", flags.json, "write the JSON report here"));
  };
  auto lattice = [&](CLI::App* sc) {
    opts.push_back(sc->add_option("--alg", flags.alg, "algebra label (su2, su3, so4, abelian(3), su2+su3, ...)"));
    opts.push_back(sc->add_option("--aux", flags.aux, "aux bracket: none | v | ccv | pair | pair-sum"));
    opts.push_back(sc->add_option("--seed", seeds, "seed (repeatable)"));
    opts.push_back(sc->add_option("--seeds", seed_count, "use seeds 1..count")->check(CLI::PositiveNumber));
    opts.push_back(sc->add_option("--tol", tol, "tolerance override"));
  };
  auto field = [&](CLI::App* sc) {
    opts.push_back(sc->add_option("--N", flags.N, "lattice points per axis"));
    opts.push_back(sc->add_option("--signature", flags.signature, "euclid | lorentz"));
    opts.push_back(sc->add_option("--deriv", flags.deriv, "spectral | central-2 | central-4"));
    opts.push_back(sc->add_option("--amp", amp, "random start amplitude (sup |A|)"));
  };

  auto* va = app.add_subcommand("verify-algebra", "aux-bracket suites: H, Jacobi, nullspace, classification");
  common(va);
  lattice(va);

  auto* vi = app.add_subcommand("verify-identities", "exact field identities on random configurations");
  common(vi);
  lattice(vi);
  field(vi);
  opts.push_back(vi->add_flag("--convergence", flags.convergence, "grid-derivative convergence study (FD modes)"));

  auto* so = app.add_subcommand("solve", "Gauss-Newton solve of the field equations");
  common(so);
  lattice(so);
  field(so);
  opts.push_back(so->add_option("--continuation", flags.continuation, "continuation steps in the aux coupling"));
  opts.push_back(so->add_option("--max-iters", flags.max_iters, "Gauss-Newton iteration cap"));
  opts.push_back(so->add_option("--penalty", flags.penalty, "gauge penalty weight"));
  opts.push_back(so->add_option("--out", flags.out, "write the final snapshot here"));
  opts.push_back(so->add_option("--init", flags.init, "start from this snapshot"));

  auto* rp = app.add_subcommand("report", "merge JSON reports into a pass/fail matrix");
  common(rp);
  opts.push_back(rp->add_option("inputs", flags.inputs, "report files"));
  opts.push_back(rp->add_option("--csv", flags.csv, "write the CSV summary here"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  g3::cli::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = g3::cli::load_config_file(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  auto given = [&](const std::string& name) {
    for (auto* o : opts)
      if (o->get_name() == name && o->count() > 0) return true;
    return false;
  };
  if (given("--alg")) cfg.alg = flags.alg;
  if (given("--aux")) cfg.aux = flags.aux;
  if (given("--N")) cfg.N = flags.N;
  if (given("--signature")) cfg.signature = flags.signature;
  if (given("--deriv")) cfg.deriv = flags.deriv;
  if (given("--seed")) cfg.seeds = seeds;
  if (given("--seeds")) {
    cfg.seeds.clear();
    for (int i = 1; i <= seed_count; ++i) cfg.seeds.push_back(i);
  }
  if (given("--amp")) cfg.amp = amp;
  if (given("--tol")) cfg.tol = tol;
  if (given("--json")) cfg.json = flags.json;
  if (given("--convergence")) cfg.convergence = flags.convergence;
  if (given("--continuation")) cfg.continuation = flags.continuation;
  if (given("--max-iters")) cfg.max_iters = flags.max_iters;
  if (given("--penalty")) cfg.penalty = flags.penalty;
  if (given("--out")) cfg.out = flags.out;
  if (given("--init")) cfg.init = flags.init;
  if (given("--csv")) cfg.csv = flags.csv;
  if (given("inputs")) cfg.inputs = flags.inputs;

  return g3::cli::run(cfg, std::cout, std::cerr);
}
