#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstring>
#include <string>

#include "horolab/horolab.h"

namespace {
struct Wb {
  lab_workbench* p = nullptr;
  ~Wb() { lab_workbench_free(p); }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  lab_string_free(s);
  return out;
}
}  // namespace

TEST_CASE("create, run, and report shape") {
  Wb wb;
  REQUIRE(lab_workbench_create("{\"m\": [-2]}", &wb.p) == LAB_OK);
  REQUIRE(wb.p != nullptr);
  CHECK(lab_workbench_set_seed(wb.p, 42) == LAB_OK);

  const char* suites[] = {"periodic", "embedding"};
  char* out = nullptr;
  int passed = 0;
  REQUIRE(lab_run_json(wb.p, suites, 2, &out, &passed) == LAB_OK);
  std::string text = take(out);
  CHECK(passed == 1);

  auto j = nlohmann::json::parse(text);
  CHECK(j.at("pass").get<bool>());
  CHECK(j.at("field").at("d").get<long>() == 2);
  CHECK(j.at("suites").size() == 2);
  for (auto& s : j.at("suites"))
    for (auto& c : s.at("checks")) {
      CHECK(c.contains("lemma"));
      CHECK(c.contains("samples"));
      CHECK(c.contains("worst_case"));
      CHECK(c.contains("tolerance"));
      CHECK(c.contains("pass"));
    }
}

TEST_CASE("determinism: same seed gives identical bytes") {
  Wb wb;
  REQUIRE(lab_workbench_create("{\"m\": [-2], \"seed\": 5}", &wb.p) == LAB_OK);
  const char* suites[] = {"tree"};
  char* a = nullptr;
  char* b = nullptr;
  REQUIRE(lab_run_json(wb.p, suites, 1, &a, nullptr) == LAB_OK);
  REQUIRE(lab_run_json(wb.p, suites, 1, &b, nullptr) == LAB_OK);
  std::string sa = take(a), sb = take(b);
  CHECK(sa == sb);

  REQUIRE(lab_workbench_set_seed(wb.p, 6) == LAB_OK);
  char* c = nullptr;
  REQUIRE(lab_run_json(wb.p, suites, 1, &c, nullptr) == LAB_OK);
  CHECK(take(c) != sa);
}

TEST_CASE("field rejection carries the criterion") {
  lab_workbench* wb = nullptr;
  CHECK(lab_workbench_create("{\"m\": [-4, 0]}", &wb) == LAB_ERR_FIELD_REJECTED);
  CHECK(wb == nullptr);
  CHECK(std::string(lab_last_error()).find("NotIrreducible") != std::string::npos);

  CHECK(lab_workbench_create("{\"m\": [1, 7]}", &wb) == LAB_ERR_FIELD_REJECTED);
  CHECK(std::string(lab_last_error()).find("DeterminantTooSmall") != std::string::npos);

  // not maximal at 2: rejected when suites actually need the factorization
  Wb bad;
  REQUIRE(lab_workbench_create("{\"m\": [4, 2]}", &bad.p) == LAB_OK);
  char* out = nullptr;
  const char* suites[] = {"periodic"};
  CHECK(lab_run_json(bad.p, suites, 1, &out, nullptr) == LAB_ERR_FIELD_REJECTED);
  CHECK(std::string(lab_last_error()).find("NotMaximalAtP") != std::string::npos);
  lab_string_free(out);
}

TEST_CASE("config errors and argument errors") {
  lab_workbench* wb = nullptr;
  CHECK(lab_workbench_create("not json", &wb) == LAB_ERR_CONFIG);
  CHECK(lab_workbench_create("{\"mm\": [2]}", &wb) == LAB_ERR_CONFIG);
  CHECK(lab_workbench_create("{\"m\": [-2], \"suites\": [\"nope\"]}", &wb) == LAB_ERR_CONFIG);
  CHECK(lab_workbench_create(nullptr, &wb) == LAB_ERR_ARGUMENT);
  CHECK(lab_run_json(nullptr, nullptr, 0, nullptr, nullptr) == LAB_ERR_ARGUMENT);
  CHECK(std::string(lab_status_name(LAB_ERR_CONFIG)) == "LAB_ERR_CONFIG");
  CHECK(lab_version() != nullptr);
}

TEST_CASE("dot and csv surfaces") {
  Wb wb;
  REQUIRE(lab_workbench_create("{\"m\": [-2]}", &wb.p) == LAB_OK);

  char* dot = nullptr;
  REQUIRE(lab_tree_dot(wb.p, 2, &dot) == LAB_OK);
  std::string d = take(dot);
  CHECK(d.find("digraph") != std::string::npos);
  CHECK(d.find("(0|0)") != std::string::npos);

  CHECK(lab_tree_dot(wb.p, 99, &dot) == LAB_ERR_BUDGET);

  char* csv = nullptr;
  REQUIRE(lab_periodic_csv(wb.p, 4, &csv) == LAB_OK);
  std::string c = take(csv);
  CHECK(c.find("m,lattice_solutions,total") == 0);
  CHECK(c.find("2,3,12") != std::string::npos);

  char* tcsv = nullptr;
  REQUIRE(lab_trichotomy_csv(wb.p, 3, 2, 2, &tcsv) == LAB_OK);
  std::string t = take(tcsv);
  CHECK(t.find("class_id,order,class_size,hyperelementary,pr_order,pr_index,k_max,case") == 0);
  // four classes of subgroups for s=3, r=2
  CHECK(std::count(t.begin(), t.end(), '\n') == 5);
}
