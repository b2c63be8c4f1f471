#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "folner/folner.h"

namespace {

struct Flags {
  std::string config;
  std::string out = ".";
  long long cap = -1;
  long long depth = -1;
  long long seed = -1;
};

int run(const std::string &command, const Flags &f)
{
  std::ifstream in(f.config, std::ios::binary);
  if (!in) {
    std::cerr << "folner: cannot read " << f.config << "\n";
    return 1;
  }
  std::ostringstream text;
  text << in.rdbuf();
  std::string dir = std::filesystem::path(f.config).parent_path().string();
  if (dir.empty())
    dir = ".";

  fol_run_options opts{f.out.c_str(), dir.c_str(), f.cap, f.depth, f.seed};
  int verdict = 1;
  char *summary = nullptr;
  fol_status st = fol_run_command(command.c_str(), text.str().c_str(), &opts, &verdict, &summary);
  if (st != FOL_OK) {
    std::cerr << "folner " << command << ": error " << st << ": " << fol_last_error() << "\n";
    return 1;
  }
  std::cout << command << ": " << (summary ? summary : "") << "\n";
  fol_string_free(summary);
  return verdict;
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Folner chains, dominating measures and ergodic-average certificates"};
  app.require_subcommand(1);
  Flags f;
  const char *names[][2] = {
      {"census", "enumerate Folner sets or balls and compare with closed forms"},
      {"chain", "build the E-sequence and omega, write a manifest"},
      {"dominate", "certify the measure comparison inequality per level"},
      {"simulate", "run ergodic averages on a finite quotient"},
      {"sweep", "repeat the dominance report over several schedules"},
  };
  for (auto &n : names) {
    CLI::App *sub = app.add_subcommand(n[0], n[1]);
    sub->add_option("--config", f.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--cap", f.cap, "set size cap")->check(CLI::PositiveNumber);
    sub->add_option("--depth", f.depth, "chain depth")->check(CLI::PositiveNumber);
    sub->add_option("--seed", f.seed, "random seed")->check(CLI::NonNegativeNumber);
  }
  CLI11_PARSE(app, argc, argv);
  return run(app.get_subcommands().front()->get_name(), f);
}
