#include "horolab/horolab.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "harness.hpp"

using namespace horolab;

struct lab_workbench {
  SuiteConfig config;
};

namespace {

thread_local std::string g_last_error;

lab_status status_of(Err code) {
  switch (code) {
    case Err::ConfigInvalid: return LAB_ERR_CONFIG;
    case Err::FieldRejected:
    case Err::NotIrreducible:
    case Err::DeterminantTooSmall:
    case Err::NotMaximalAtP: return LAB_ERR_FIELD_REJECTED;
    case Err::BudgetExceeded:
    case Err::GroupTooLarge: return LAB_ERR_BUDGET;
    case Err::NotAchieved:
    case Err::SearchExhausted:
    case Err::Inconclusive: return LAB_ERR_NOT_ACHIEVED;
    case Err::Internal: return LAB_ERR_INTERNAL;
    default: return LAB_ERR_DOMAIN;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
lab_status guarded(Fn&& fn) {
  try {
    fn();
    return LAB_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LAB_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* lab_version(void) { return "1.0.0"; }

const char* lab_status_name(lab_status status) {
  switch (status) {
    case LAB_OK: return "LAB_OK";
    case LAB_ERR_ARGUMENT: return "LAB_ERR_ARGUMENT";
    case LAB_ERR_CONFIG: return "LAB_ERR_CONFIG";
    case LAB_ERR_FIELD_REJECTED: return "LAB_ERR_FIELD_REJECTED";
    case LAB_ERR_BUDGET: return "LAB_ERR_BUDGET";
    case LAB_ERR_NOT_ACHIEVED: return "LAB_ERR_NOT_ACHIEVED";
    case LAB_ERR_DOMAIN: return "LAB_ERR_DOMAIN";
    case LAB_ERR_INTERNAL: return "LAB_ERR_INTERNAL";
  }
  return "LAB_ERR_UNKNOWN";
}

const char* lab_last_error(void) { return g_last_error.c_str(); }

lab_status lab_workbench_create(const char* config_json, lab_workbench** out) {
  if (!config_json || !out) {
    g_last_error = "null argument";
    return LAB_ERR_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&] {
    SuiteConfig cfg = parse_config(config_json);
    // reject unusable fields at construction time
    FieldDescriptor f = define_field(cfg.m_coeffs);
    (void)f;
    *out = new lab_workbench{std::move(cfg)};
  });
}

void lab_workbench_free(lab_workbench* wb) { delete wb; }

lab_status lab_workbench_set_seed(lab_workbench* wb, uint64_t seed) {
  if (!wb) {
    g_last_error = "null workbench";
    return LAB_ERR_ARGUMENT;
  }
  wb->config.seed = seed;
  return LAB_OK;
}

lab_status lab_run_json(lab_workbench* wb, const char* const* suites, size_t count,
                        char** json_out, int* all_passed) {
  if (!wb || !json_out || (count > 0 && !suites)) {
    g_last_error = "null argument";
    return LAB_ERR_ARGUMENT;
  }
  *json_out = nullptr;
  return guarded([&] {
    SuiteConfig cfg = wb->config;
    if (count > 0) {
      cfg.suites.clear();
      for (size_t i = 0; i < count; ++i) cfg.suites.emplace_back(suites[i]);
    }
    Report rep = run_suite(cfg);
    *json_out = dup_string(report_to_json(rep));
    if (all_passed) *all_passed = rep.pass ? 1 : 0;
  });
}

lab_status lab_tree_dot(lab_workbench* wb, long radius, char** dot_out) {
  if (!wb || !dot_out) {
    g_last_error = "null argument";
    return LAB_ERR_ARGUMENT;
  }
  *dot_out = nullptr;
  return guarded([&] { *dot_out = dup_string(export_tree(wb->config, radius)); });
}

lab_status lab_periodic_csv(lab_workbench* wb, long max_m, char** csv_out) {
  if (!wb || !csv_out) {
    g_last_error = "null argument";
    return LAB_ERR_ARGUMENT;
  }
  *csv_out = nullptr;
  return guarded([&] { *csv_out = dup_string(periodic_csv(wb->config, max_m)); });
}

lab_status lab_trichotomy_csv(lab_workbench* wb, long s, long r, long n_required,
                              char** csv_out) {
  if (!wb || !csv_out) {
    g_last_error = "null argument";
    return LAB_ERR_ARGUMENT;
  }
  *csv_out = nullptr;
  return guarded(
      [&] { *csv_out = dup_string(trichotomy_csv(wb->config, s, r, n_required)); });
}

void lab_string_free(char* s) { std::free(s); }

}  // extern "C"
