#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "doctest.h"
#include "json.hpp"
#include "qgc/edge_eval.hpp"

using namespace qgc;

namespace {

Model random_model(AnsatzKind kind, std::uint64_t seed, int layers = 2) {
  Rng rng(seed);
  Model m{build_ansatz(kind, 8, layers), {}};
  m.params.resize(m.circuit.slot_count);
  for (double& p : m.params) {
    p = rng.uniform(-std::numbers::pi, std::numbers::pi);
  }
  return m;
}

std::vector<NamedModel> three_models() {
  return {{"perm", random_model(AnsatzKind::PermutationInvariant, 1)},
          {"cyclic", random_model(AnsatzKind::CyclicInvariant, 2)},
          {"standard", random_model(AnsatzKind::Standard, 3, 1)}};
}

}  // namespace

TEST_CASE("classification with confidence cutoff") {
  CHECK(classify_with_confidence(-0.4) == Verdict::Disconnected);
  CHECK(classify_with_confidence(-4e-4) == Verdict::Undecided);
  CHECK(classify_with_confidence(0.0, 0.5) == Verdict::Undecided);
  CHECK(classify_with_confidence(0.16) == Verdict::Connected);
  CHECK(classify_with_confidence(0.01) == Verdict::Connected);  // boundary
  CHECK(classify_with_confidence(0.3, 0.0) == Verdict::Connected);
  CHECK_THROWS_AS(classify_with_confidence(1.5), std::invalid_argument);
  CHECK_THROWS_AS(classify_with_confidence(0.5, -0.1), std::invalid_argument);
}

TEST_CASE("report covers 7 graphs x 3 circuits with consistent rows") {
  const auto models = three_models();
  const auto report = edge_case_report(models);
  REQUIRE(report.size() == 21);

  const auto catalog = edge_case_catalog();
  for (std::size_t i = 0; i < report.size(); ++i) {
    const auto& row = report[i];
    CHECK(row.raw >= -1.0);
    CHECK(row.raw <= 1.0);
    CHECK(row.graph_name == catalog[i / 3].name);
    CHECK(row.truth_connected == catalog[i / 3].connected);
    if (row.verdict == Verdict::Undecided) {
      CHECK_FALSE(row.correct.has_value());
    } else {
      REQUIRE(row.correct.has_value());
      CHECK(*row.correct ==
            ((row.verdict == Verdict::Connected) == row.truth_connected));
    }
  }
}

TEST_CASE("raising the cutoff never turns a correct verdict incorrect") {
  const auto models = three_models();
  double prev_cutoff = 0.0;
  std::vector<EdgeCaseVerdict> prev = edge_case_report(models, prev_cutoff);
  for (double cutoff : {0.001, 0.01, 0.05, 0.2, 0.5}) {
    const auto cur = edge_case_report(models, cutoff);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (prev[i].correct && *prev[i].correct) {
        // correct can only stay correct or become undecided
        CHECK((!cur[i].correct.has_value() || *cur[i].correct));
      }
    }
    prev = cur;
  }
}

TEST_CASE("perm-invariant verdicts are invariant under relabeling") {
  const Model m = random_model(AnsatzKind::PermutationInvariant, 9);
  Rng rng(10);
  for (const auto& entry : edge_case_catalog()) {
    std::array<int, 8> perm;
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = 7; i > 0; --i) {
      std::swap(perm[i], perm[rng.bounded(static_cast<std::uint64_t>(i + 1))]);
    }
    const double a = predict(m, entry.graph);
    const double b = predict(m, relabel(entry.graph, perm));
    CHECK(std::abs(a - b) <= 1e-9);
  }
}

TEST_CASE("report is deterministic for fixed models") {
  const auto models = three_models();
  const auto a = edge_case_report(models);
  const auto b = edge_case_report(models);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].raw == b[i].raw);
    CHECK(a[i].verdict == b[i].verdict);
  }
}

TEST_CASE("extra graphs are appended after the catalog") {
  const auto models = three_models();
  Graph extra(8, {{0, 1}});
  const std::vector<NamedGraph> extras{{"custom", extra, false}};
  const auto report = edge_case_report(models, 0.01, extras);
  REQUIRE(report.size() == 24);
  CHECK(report[21].graph_name == "custom");
}

TEST_CASE("model/catalog qubit mismatch is rejected") {
  Rng rng(4);
  Model m{build_permutation_invariant(4, 1), {0.1, 0.2, 0.3}};
  const std::vector<NamedModel> models{{"perm", m}};
  CHECK_THROWS_AS(edge_case_report(models), std::invalid_argument);
}

TEST_CASE("JSON report schema") {
  const auto models = three_models();
  const auto report = edge_case_report(models);
  const auto j = nlohmann::json::parse(report_to_json(report));
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 21);
  for (const auto& row : j) {
    CHECK(row.contains("graph"));
    CHECK(row.contains("circuit"));
    CHECK(row["raw"].is_number());
    CHECK(row.contains("verdict"));
    CHECK(row.contains("truth"));
    CHECK(row.contains("correct"));
  }
}

TEST_CASE("text table has one line per verdict plus a header") {
  const auto models = three_models();
  const auto report = edge_case_report(models);
  const std::string table = render_report_table(report);
  CHECK(std::count(table.begin(), table.end(), '\n') == 22);
}
