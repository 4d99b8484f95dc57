// lab: command-line front end over the horolab C API.
//   lab run --config <path> [--suite <name>]... [--seed <u64>] [--json <path>]
//   lab tree --config <path> --radius <k> [--dot <path>]
//   lab periodic --config <path> --max-m <k> [--csv <path>]
//   lab trichotomy --config <path> --s <s> --r <r> [--N <n>] [--csv <path>]

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "horolab/horolab.h"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int write_out(const std::string& path, const char* text) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "lab: cannot write " << path << "\n";
    return 2;
  }
  out << text;
  return 0;
}

struct Handle {
  lab_workbench* wb = nullptr;
  ~Handle() { lab_workbench_free(wb); }
};

int fail_with(lab_status st) {
  std::cerr << "lab: " << lab_status_name(st) << ": " << lab_last_error() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification workbench for number-ring tree actions"};
  app.require_subcommand(1);

  std::string config_path, json_path, dot_path, csv_path;
  std::vector<std::string> suites;
  std::uint64_t seed = 0;
  bool seed_set = false;
  long radius = 2, max_m = 4, s_mod = 3, r_ord = 0, n_req = 3;

  auto* run = app.add_subcommand("run", "run verification suites");
  run->add_option("--config", config_path, "config JSON path")->required();
  run->add_option("--suite", suites, "suite name (repeatable; default all)");
  run->add_option("--seed", seed, "override RNG seed")->each([&](const std::string&) {
    seed_set = true;
  });
  run->add_option("--json", json_path, "write the report here (default stdout)");

  auto* tree = app.add_subcommand("tree", "export a tree ball as DOT");
  tree->add_option("--config", config_path, "config JSON path")->required();
  tree->add_option("--radius", radius, "ball radius")->required();
  tree->add_option("--dot", dot_path, "output path (default stdout)");

  auto* periodic = app.add_subcommand("periodic", "periodic-orbit counts as CSV");
  periodic->add_option("--config", config_path, "config JSON path")->required();
  periodic->add_option("--max-m", max_m, "largest period")->required();
  periodic->add_option("--csv", csv_path, "output path (default stdout)");

  auto* tricho = app.add_subcommand("trichotomy", "hyper-elementary class table as CSV");
  tricho->add_option("--config", config_path, "config JSON path")->required();
  tricho->add_option("--s", s_mod, "translation modulus")->required();
  tricho->add_option("--r", r_ord, "cyclic order")->required();
  tricho->add_option("--N", n_req, "trichotomy level (default 3)");
  tricho->add_option("--csv", csv_path, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  std::string config_text;
  try {
    config_text = read_file(config_path);
  } catch (const CLI::Error& e) {
    std::cerr << "lab: " << e.what() << "\n";
    return 2;
  }

  Handle h;
  lab_status st = lab_workbench_create(config_text.c_str(), &h.wb);
  if (st != LAB_OK) return fail_with(st);
  if (seed_set) lab_workbench_set_seed(h.wb, seed);

  char* text = nullptr;
  int rc = 0;
  if (run->parsed()) {
    std::vector<const char*> names;
    for (auto& s : suites) names.push_back(s.c_str());
    int all_passed = 0;
    st = lab_run_json(h.wb, names.empty() ? nullptr : names.data(), names.size(), &text,
                      &all_passed);
    if (st != LAB_OK) return fail_with(st);
    rc = write_out(json_path, text);
    if (rc == 0 && !all_passed) rc = 1;
    if (rc == 1) std::cerr << "lab: some checks failed\n";
  } else if (tree->parsed()) {
    st = lab_tree_dot(h.wb, radius, &text);
    if (st != LAB_OK) return fail_with(st);
    rc = write_out(dot_path, text);
  } else if (periodic->parsed()) {
    st = lab_periodic_csv(h.wb, max_m, &text);
    if (st != LAB_OK) return fail_with(st);
    rc = write_out(csv_path, text);
  } else if (tricho->parsed()) {
    st = lab_trichotomy_csv(h.wb, s_mod, r_ord, n_req, &text);
    if (st != LAB_OK) return fail_with(st);
    rc = write_out(csv_path, text);
  }
  lab_string_free(text);
  return rc;
}
