#pragma once

// Suite orchestration: config parsing, per-lemma check records, deterministic
// JSON reports, and the exports (DOT trees, periodic CSV, trichotomy CSV).

#include <string>
#include <vector>

#include "finitequotient.hpp"

namespace horolab {

struct Budgets {
  long ball_radius = 6;
  long fold_radius = 4;
  long diagonal_radius = 3;
  long n_max = 64;
  long forms_range = 96;
  std::size_t subgroup_bound = 50000;
  int overshoot = 8;
  int undershoot = 2;
  int quad_nodes = 240;
  int quad_nodes_flow = 96;  // wide-pair quadrature (Lipschitz flow checks)
  double quad_tmax = 12.0;
  int workers = 1;
};

struct SampleCounts {
  std::size_t residue = 32;
  std::size_t witness = 500;
  std::size_t stabilizer = 500;
  std::size_t action = 200;
  std::size_t fold_equivariance = 50;
  std::size_t diagonal_action = 100;
  std::size_t dd_pairs = 200;
  std::size_t ddc_pairs = 200;
  std::size_t rads = 64;
  std::size_t control = 128;
  std::size_t isometry = 48;
  std::size_t inq = 200;
  std::size_t hom_pairs = 200;
  std::size_t embedding_pairs = 100;
  std::size_t case_a = 500;
  std::size_t case_b = 12;
};

struct Tolerances {
  double distance = 1e-6;
  double probe_stability = 1.05;
  double fiber_equivariance = 1e-12;
  double vl_eps = 0.1;
  long vl_threshold = 20;
  double lpar_eps = 0.2;
};

struct SuiteConfig {
  IntVec m_coeffs;
  std::vector<std::string> suites;  // empty = all
  std::uint64_t seed = 1;
  Budgets budgets;
  SampleCounts samples;
  Tolerances tol;
};

/// JSON schema: {"m": [a0, ...], "suites": [...], "seed": u64,
/// "budgets": {...}, "samples": {...}, "tolerances": {...}}; unknown keys are
/// rejected, the monic leading coefficient is implicit.
SuiteConfig parse_config(const std::string& json_text);

std::vector<std::string> all_suite_names();

struct CheckRecord {
  std::string name;
  std::string lemma;
  long samples = 0;
  double worst_case = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  bool pass = true;
  std::vector<CheckRecord> checks;
  std::vector<std::string> notes;
};

struct Report {
  SuiteConfig config;
  std::string field_poly;
  std::size_t n = 0;
  Int d;
  std::vector<PrimeFactor> factorization;
  std::vector<SuiteReport> suites;
  bool pass = true;
};

/// Runs the selected suites; throws FieldRejected (carrying the failing
/// criterion) when the field does not pass define_field or factor_x.
Report run_suite(const SuiteConfig& config);

/// Deterministic byte output: fixed key order, fixed float formatting.
std::string report_to_json(const Report& report);

std::string export_tree(const SuiteConfig& config, long radius);
std::string periodic_csv(const SuiteConfig& config, long max_m);
std::string trichotomy_csv(const SuiteConfig& config, long s, long r, long n_required);

}  // namespace horolab
