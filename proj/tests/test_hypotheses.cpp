#include <funceq/hypotheses.hpp>

#include <funceq/corpus.hpp>

#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

using funceq::EquationSpec;
using funceq::Expr;
using funceq::MapSpec;

namespace {

Expr E(const char* text) { return Expr::parse(text); }

EquationSpec dyadic_weights(double w, const char* g, int resolution = 1024) {
  return EquationSpec({MapSpec::make(E("x/2")), MapSpec::make(E("(x+1)/2"))},
                      {Expr::constant(w), Expr::constant(w)}, E(g), resolution);
}

EquationSpec identity_weights(const char* g1, const char* g2, const char* g,
                              int resolution = 1024) {
  return EquationSpec({MapSpec::make(E("x")), MapSpec::make(E("x"))}, {E(g1), E(g2)}, E(g),
                      resolution);
}

}  // namespace

TEST_CASE("overlap count L") {
  // Dyadic branches tile [0,1] with null overlap.
  CHECK(funceq::compute_L(dyadic_weights(0.5, "0")) == 1);
  // Two identity maps share the whole interval.
  CHECK(funceq::compute_L(identity_weights("x/2", "x/3", "1")) == 2);
  // Power maps are both onto [0,1].
  const EquationSpec powers({MapSpec::make(E("x^1.25")), MapSpec::make(E("x^1.5"))},
                            {E("x/2"), E("x/2")}, E("1"), 1024);
  CHECK(funceq::compute_L(powers) == 2);
  // Half-covering third map overlaps each branch but the branches stay disjoint.
  const EquationSpec three(
      {MapSpec::make(E("x/2")), MapSpec::make(E("(x+1)/2")), MapSpec::make(E("x"))},
      {E("1/4"), E("1/4"), E("1/4")}, E("1"), 1024);
  CHECK(funceq::compute_L(three) == 2);
}

TEST_CASE("preimage bound K") {
  CHECK(funceq::estimate_K(dyadic_weights(0.5, "0")) == 1);
  CHECK(funceq::estimate_K(identity_weights("x/2", "x/3", "1")) == 1);
  const EquationSpec doubling({MapSpec::make(E("mod1(2*x)"), {0.5})}, {E("1/2")}, E("1"), 1024);
  CHECK(funceq::estimate_K(doubling) == 2);
}

TEST_CASE("coefficient bound C") {
  // Constant weights a over the dyadic branches: C = 2|a|.
  {
    const EquationSpec spec = dyadic_weights(0.4, "1");
    const double C = funceq::estimate_C(spec, funceq::estimate_K(spec), funceq::compute_L(spec));
    CHECK(C == doctest::Approx(0.8).epsilon(1e-12));
  }
  {
    const EquationSpec spec = dyadic_weights(-0.3, "1");
    const double C = funceq::estimate_C(spec, funceq::estimate_K(spec), funceq::compute_L(spec));
    CHECK(C == doctest::Approx(0.6).epsilon(1e-12));
  }
  // Identity maps with weight x/2 each and L = 2: the bound is exactly 1.
  {
    const EquationSpec spec = identity_weights("x/2", "x/2", "1");
    const double C = funceq::estimate_C(spec, 1, 2);
    CHECK(C == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(funceq::analyze_hypotheses(spec).holds_C);
  }
  // Corpus families with known bounds.
  {
    const auto& e = funceq::corpus_entry("ex4_2");
    const EquationSpec spec = e.build({{"eps", 0.25}}, 1024);
    const double C = funceq::estimate_C(spec, funceq::estimate_K(spec), funceq::compute_L(spec));
    CHECK(std::fabs(C - 0.75) <= 1e-9);
  }
  {
    const auto& e = funceq::corpus_entry("ex4_3");
    const EquationSpec spec = e.build({{"eps", 0.25}}, 1024);
    const double C = funceq::estimate_C(spec, funceq::estimate_K(spec), funceq::compute_L(spec));
    CHECK(std::fabs(C - 1.0 / 1.25) <= 1e-9);
  }
}

TEST_CASE("coefficient bound scales exactly with the weights") {
  const double base = funceq::estimate_C(dyadic_weights(0.4, "1"), 1, 1);
  for (const double t : {0.5, 2.0, 4.0}) {
    const EquationSpec scaled(
        {MapSpec::make(E("x/2")), MapSpec::make(E("(x+1)/2"))},
        {Expr::constant(t) * Expr::constant(0.4), Expr::constant(t) * Expr::constant(0.4)},
        E("1"), 1024);
    CHECK(funceq::estimate_C(scaled, 1, 1) == t * base);
  }
  CHECK(funceq::estimate_C(dyadic_weights(0.0, "1"), 1, 1) == 0.0);
}

TEST_CASE("coefficient bound is infinite over a flat piece with surviving weight") {
  const EquationSpec flat({MapSpec::make(E("1/2"))}, {E("1/2")}, E("x"), 1024);
  CHECK(std::isinf(funceq::estimate_C(flat, 1, 1)));
  const auto report = funceq::analyze_hypotheses(flat);
  CHECK_FALSE(report.holds_C);
  bool warned = false;
  for (const auto& n : report.notes) warned = warned || n.find("flat piece") != std::string::npos;
  CHECK(warned);
}

TEST_CASE("strict nodewise bound") {
  // Identity maps, total weight x: K*L*|g_n| = x < 1 away from the endpoints.
  CHECK(funceq::check_C1(identity_weights("x/2", "x/2", "1"), 1, 2));
  // Dyadic weights 1/2: equality K*L*|g_n| = |f_n'| everywhere, not strict.
  CHECK_FALSE(funceq::check_C1(dyadic_weights(0.5, "1"), 1, 1));
  // Zero coefficients satisfy any strict bound.
  CHECK(funceq::check_C1(dyadic_weights(0.0, "1"), 1, 1));
}

TEST_CASE("sum conditions") {
  {
    const auto [total, is_one] = funceq::check_sum_conditions(dyadic_weights(0.5, "0"));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(is_one);
  }
  {
    // Weights x/2 and x/3: integrals 1/4 and 1/6, and the sum 5x/6 is not 1.
    const auto [total, is_one] = funceq::check_sum_conditions(identity_weights("x/2", "x/3", "1"));
    CHECK(total == doctest::Approx(5.0 / 12.0).epsilon(1e-12));
    CHECK_FALSE(is_one);
  }
  {
    // Weights -1/2 sum to -1: the integrals still add to 1.
    const auto [total, is_one] = funceq::check_sum_conditions(dyadic_weights(-0.5, "1"));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(is_one);
  }
}

TEST_CASE("per-map certificates for the identity pair") {
  const EquationSpec spec = identity_weights("x/2", "x/3", "1");
  const auto certs = funceq::per_map_certificates(spec, 1, 2);
  REQUIRE(certs.size() == 2);

  CHECK(certs[0].m == 1);
  CHECK(std::fabs(certs[0].C_m - 1.0) <= 1e-9);
  CHECK_FALSE(certs[0].witness);

  CHECK(certs[1].m == 2);
  CHECK(std::fabs(certs[1].C_m - 2.0 / 3.0) <= 1e-9);
  // The image is all of [0,1], so every iterate keeps its whole mass inside.
  CHECK(certs[1].inf_ratio == 1.0);
  CHECK(certs[1].min_k >= 0);
  CHECK(std::fabs(certs[1].alpha - 5.0 / 6.0) <= 1e-9);
  CHECK(certs[1].witness);
}

TEST_CASE("vanishing iterates are reported as degenerate") {
  const EquationSpec cancel({MapSpec::make(E("x/2")), MapSpec::make(E("(x+1)/2"))},
                            {E("1/2"), E("-1/2")}, E("1"), 1024);
  CHECK_THROWS_AS(funceq::per_map_certificates(cancel, 1, 1), funceq::DegenerateInstance);
  const auto report = funceq::analyze_hypotheses(cancel);
  CHECK(report.degenerate_series);
  CHECK(report.per_map.empty());
}

TEST_CASE("full report on the identity pair") {
  const auto report = funceq::analyze_hypotheses(identity_weights("x/2", "x/3", "1"));
  CHECK(report.K == 1);
  CHECK(report.L == 2);
  CHECK(std::fabs(report.C_est - 1.0) <= 1e-9);
  CHECK_FALSE(report.holds_C);
  CHECK(report.holds_C1);
  CHECK(report.sum_gn_is_one == false);
  CHECK_FALSE(report.degenerate_series);
  REQUIRE(report.per_map.size() == 2);

  bool witness_note = false;
  bool structural_note = false;
  for (const auto& n : report.notes) {
    if (n.find("map 2 certifies convergence") != std::string::npos) witness_note = true;
    if (n.find("monotone-piece certification") != std::string::npos) structural_note = true;
  }
  CHECK(witness_note);
  CHECK(structural_note);
}

TEST_CASE("full report in the contraction regime") {
  const auto report = funceq::analyze_hypotheses(dyadic_weights(0.4, "1"));
  CHECK(report.K == 1);
  CHECK(report.L == 1);
  CHECK(report.C_est == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(report.holds_C);
  CHECK(report.sum_gn_is_one == false);  // weights sum to 0.8
  bool bound_note = false;
  for (const auto& n : report.notes)
    if (n.find("geometric convergence") != std::string::npos) bound_note = true;
  CHECK(bound_note);
}
