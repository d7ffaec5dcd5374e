#include "diracwb/deffile.hpp"
#include "diracwb/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw diracwb::UsageError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CommonFlags {
  std::string file;
  diracwb::RunFlags run;
};

void add_common(CLI::App* cmd, CommonFlags& cf, bool file_required = true) {
  auto* fopt = cmd->add_option("--file", cf.file, "structure definition file");
  if (file_required) fopt->required();
  cmd->add_option("--seed", cf.run.seed, "seed for sampled regimes");
  cmd->add_option("--samples", cf.run.samples, "sampled polynomial multiples per check");
  cmd->add_option("--max-degree", cf.run.max_degree, "degree bound of sampled multipliers");
  cmd->add_flag("--pretty", cf.run.pretty, "human-readable table instead of JSON lines");
  cmd->add_flag("--timings", cf.run.timings, "emit timing_ms in reports");
}

int emit_single(const diracwb::CheckReport& rep, const diracwb::RunFlags& flags) {
  std::cout << (flags.pretty ? rep.pretty_line() : rep.json_line()) << "\n";
  return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diracwb: exact verification of Dirac pairs and compatible structures on Lie algebroids"};
  app.require_subcommand(1);

  CommonFlags run_cf;
  auto* run_cmd = app.add_subcommand("run", "run every check block of a definition file");
  add_common(run_cmd, run_cf);

  CommonFlags check_cf;
  std::string check_name;
  std::vector<std::pair<std::string, std::string*>> check_params;
  std::string p_first, p_second, p_bivector, p_twoform, p_endo, p_sub, p_cosub, p_mu, p_gamma,
      p_phi, p_psi, p_pmax;
  auto* check_cmd = app.add_subcommand("check", "run one named check");
  check_cmd->add_option("name", check_name, "check name (see 'diracwb list')")->required();
  add_common(check_cmd, check_cf, false);
  check_cmd->add_option("--first", p_first);
  check_cmd->add_option("--second", p_second);
  check_cmd->add_option("--bivector", p_bivector);
  check_cmd->add_option("--twoform", p_twoform);
  check_cmd->add_option("--endo", p_endo);
  check_cmd->add_option("--subbundle", p_sub);
  check_cmd->add_option("--cosubbundle", p_cosub);
  check_cmd->add_option("--mu", p_mu);
  check_cmd->add_option("--gamma", p_gamma);
  check_cmd->add_option("--phi", p_phi);
  check_cmd->add_option("--psi", p_psi);
  check_cmd->add_option("--pmax", p_pmax);

  CommonFlags torsion_cf;
  std::string torsion_endo, torsion_mu;
  auto* torsion_cmd = app.add_subcommand("torsion", "Nijenhuis torsion of an endomorphism");
  add_common(torsion_cmd, torsion_cf);
  torsion_cmd->add_option("--endo", torsion_endo)->required();
  torsion_cmd->add_option("--mu", torsion_mu);

  CommonFlags parse_cf;
  bool parse_render = false;
  auto* parse_cmd = app.add_subcommand("parse", "validate a definition file");
  add_common(parse_cmd, parse_cf);
  parse_cmd->add_flag("--render", parse_render, "print the canonical rendering");

  auto* list_cmd = app.add_subcommand("list", "list available checks");

  CommonFlags ma_cf;
  auto* ma_cmd = app.add_subcommand("monge-ampere", "built-in T*R^2 example suite");
  add_common(ma_cmd, ma_cf, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (list_cmd->parsed()) {
      for (const auto& name : diracwb::verifier_catalog()) std::cout << name << "\n";
      return 0;
    }
    if (run_cmd->parsed()) {
      diracwb::DefinitionFile f = diracwb::parse_definition(slurp(run_cf.file));
      return diracwb::run_file(f, run_cf.run, std::cout);
    }
    if (parse_cmd->parsed()) {
      diracwb::DefinitionFile f = diracwb::parse_definition(slurp(parse_cf.file));
      if (parse_render)
        std::cout << f.render();
      else
        std::cout << "ok: " << f.structures.size() << " structures, " << f.checks.size()
                  << " checks\n";
      return 0;
    }
    if (torsion_cmd->parsed()) {
      diracwb::DefinitionFile f = diracwb::parse_definition(slurp(torsion_cf.file));
      std::vector<std::pair<std::string, std::string>> params = {{"endo", torsion_endo}};
      if (!torsion_mu.empty()) params.emplace_back("mu", torsion_mu);
      return emit_single(diracwb::run_check(f, "torsion", params, torsion_cf.run),
                         torsion_cf.run);
    }
    if (ma_cmd->parsed()) {
      diracwb::DefinitionFile empty;
      return emit_single(diracwb::run_check(empty, "monge-ampere", {}, ma_cf.run), ma_cf.run);
    }
    if (check_cmd->parsed()) {
      diracwb::DefinitionFile f;
      if (!check_cf.file.empty()) f = diracwb::parse_definition(slurp(check_cf.file));
      std::vector<std::pair<std::string, std::string>> params;
      auto add = [&](const char* k, const std::string& v) {
        if (!v.empty()) params.emplace_back(k, v);
      };
      add("first", p_first);
      add("second", p_second);
      add("bivector", p_bivector);
      add("twoform", p_twoform);
      add("endo", p_endo);
      add("subbundle", p_sub);
      add("cosubbundle", p_cosub);
      add("mu", p_mu);
      add("gamma", p_gamma);
      add("phi", p_phi);
      add("psi", p_psi);
      add("pmax", p_pmax);
      return emit_single(diracwb::run_check(f, check_name, params, check_cf.run), check_cf.run);
    }
  } catch (const diracwb::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const diracwb::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
