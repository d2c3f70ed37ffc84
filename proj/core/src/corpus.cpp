#include "funceq/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "funceq/errors.hpp"

namespace funceq {

namespace {

Expr X() { return Expr::var(); }
Expr K(double v) { return Expr::constant(v); }

std::vector<MapSpec> dyadic_branches() {
  return {MapSpec::make(X() / K(2.0)), MapSpec::make((X() + K(1.0)) / K(2.0))};
}

std::vector<MapSpec> identity_pair() {
  return {MapSpec::make(X()), MapSpec::make(X())};
}

void require_range(bool ok, const std::string& msg) {
  if (!ok) throw ParamOutOfRange(msg);
}

std::vector<CorpusEntry> build_registry() {
  std::vector<CorpusEntry> entries;

  entries.emplace_back(
      "ex1_5", "Example 1.5",
      "equal dyadic branches with weights -1/2; the series oscillates while the constant c/2 "
      "still solves the equation",
      Params{{"c", 1.0}},
      [](const Params& p, int m) {
        return EquationSpec(dyadic_branches(), {K(-0.5), K(-0.5)}, K(p.at("c")), m);
      },
      [](const Params& p) -> std::optional<Expr> { return K(p.at("c") / 2.0); },
      /*reference_in_l1=*/true,
      [](const Params& p) -> std::vector<SolveStatus> {
        if (p.at("c") == 0.0) return {SolveStatus::FiniteSum};
        return {SolveStatus::DivergentOscillating};
      },
      [](const Params&) -> std::optional<double> { return std::nullopt; });

  entries.emplace_back(
      "dyadic_fp", "§1",
      "equal-weight averaging over the dyadic branches; the homogeneous case has the zero "
      "solution",
      Params{{"b", 0.0}},
      [](const Params& p, int m) {
        return EquationSpec(dyadic_branches(), {K(0.5), K(0.5)}, K(p.at("b")), m);
      },
      [](const Params& p) -> std::optional<Expr> {
        if (p.at("b") == 0.0) return K(0.0);
        return std::nullopt;
      },
      /*reference_in_l1=*/true,
      [](const Params& p) -> std::vector<SolveStatus> {
        if (p.at("b") == 0.0) return {SolveStatus::FiniteSum};
        return {SolveStatus::DivergentOscillating, SolveStatus::MaxIterReached};
      },
      [](const Params&) -> std::optional<double> { return std::nullopt; });

  entries.emplace_back(
      "ex3_3", "Example 3.3",
      "identity maps with total weight x; the closed form b/(1-x) is not integrable, the series "
      "grows at a harmonic rate",
      Params{{"b", 1.0}},
      [](const Params& p, int m) {
        return EquationSpec(identity_pair(), {X() / K(2.0), X() / K(2.0)}, K(p.at("b")), m);
      },
      [](const Params& p) -> std::optional<Expr> { return K(p.at("b")) / (K(1.0) - X()); },
      /*reference_in_l1=*/false,
      [](const Params& p) -> std::vector<SolveStatus> {
        if (p.at("b") == 0.0) return {SolveStatus::FiniteSum};
        return {SolveStatus::DivergentGrowing, SolveStatus::MaxIterReached};
      },
      [](const Params&) -> std::optional<double> { return std::nullopt; });

  entries.emplace_back(
      "ex3_7", "Example 3.7",
      "identity maps with weights x/2 and x/a; no global contraction constant below 1, yet the "
      "series converges to 2ab/(2a-(2+a)x)",
      Params{{"a", 3.0}, {"b", 1.0}},
      [](const Params& p, int m) {
        require_range(p.at("a") > 2.0,
                      "ex3_7 needs a > 2, got a=" + format_double(p.at("a")));
        return EquationSpec(identity_pair(), {X() / K(2.0), X() / K(p.at("a"))}, K(p.at("b")),
                            m);
      },
      [](const Params& p) -> std::optional<Expr> {
        const double a = p.at("a");
        const double b = p.at("b");
        return K(2.0 * a * b) / (K(2.0 * a) - K(2.0 + a) * X());
      },
      /*reference_in_l1=*/true,
      [](const Params& p) -> std::vector<SolveStatus> {
        if (p.at("b") == 0.0) return {SolveStatus::FiniteSum};
        return {SolveStatus::Converged};
      },
      [](const Params&) -> std::optional<double> { return std::nullopt; });

  entries.emplace_back(
      "ex4_2", "Example 4.2",
      "dyadic branches with constant weights (1-eps)/2; the solution norm 1/eps blows up as eps "
      "shrinks",
      Params{{"eps", 0.25}},
      [](const Params& p, int m) {
        const double eps = p.at("eps");
        require_range(eps > 0.0 && eps <= 0.5,
                      "ex4_2 needs eps in (0, 0.5], got eps=" + format_double(eps));
        const Expr w = K((1.0 - eps) / 2.0);
        return EquationSpec(dyadic_branches(), {w, w}, K(1.0), m);
      },
      [](const Params& p) -> std::optional<Expr> { return K(1.0 / p.at("eps")); },
      /*reference_in_l1=*/true,
      [](const Params&) -> std::vector<SolveStatus> { return {SolveStatus::Converged}; },
      [](const Params& p) -> std::optional<double> { return 1.0 - p.at("eps"); });

  entries.emplace_back(
      "ex4_3", "Example 4.3",
      "power maps x^(1+eps), x^(1+2*eps) with weights x/2; contraction constant 1/(1+eps)",
      Params{{"eps", 0.25}},
      [](const Params& p, int m) {
        const double eps = p.at("eps");
        require_range(eps > 0.0 && eps <= 0.5,
                      "ex4_3 needs eps in (0, 0.5], got eps=" + format_double(eps));
        std::vector<MapSpec> maps;
        maps.push_back(MapSpec::make(pow(X(), 1.0 + eps)));
        maps.push_back(MapSpec::make(pow(X(), 1.0 + 2.0 * eps)));
        return EquationSpec(std::move(maps), {X() / K(2.0), X() / K(2.0)}, K(1.0), m);
      },
      [](const Params&) -> std::optional<Expr> { return std::nullopt; },
      /*reference_in_l1=*/true,
      [](const Params&) -> std::vector<SolveStatus> { return {SolveStatus::Converged}; },
      [](const Params& p) -> std::optional<double> { return 1.0 / (1.0 + p.at("eps")); });

  entries.emplace_back(
      "sec5", "§5",
      "dyadic branches with constant weights a and forcing b; solves to b/(1-2a) inside "
      "|a| < 1/2 and degenerates outside",
      Params{{"a", 0.4}, {"b", 1.0}},
      [](const Params& p, int m) {
        const Expr w = K(p.at("a"));
        return EquationSpec(dyadic_branches(), {w, w}, K(p.at("b")), m);
      },
      [](const Params& p) -> std::optional<Expr> {
        const double a = p.at("a");
        if (std::abs(a) < 0.5) return K(p.at("b") / (1.0 - 2.0 * a));
        if (p.at("b") == 0.0) return K(0.0);
        return std::nullopt;
      },
      /*reference_in_l1=*/true,
      [](const Params& p) -> std::vector<SolveStatus> {
        const double a = p.at("a");
        const double b = p.at("b");
        if (b == 0.0) return {SolveStatus::FiniteSum};
        if (std::abs(a) < 0.5) return {SolveStatus::Converged};
        if (a == -0.5) return {SolveStatus::DivergentOscillating};
        if (a == 0.5) return {SolveStatus::DivergentOscillating, SolveStatus::MaxIterReached};
        // |a| > 1/2: the growth cap fires once the partial sums pass it; with a
        // small forcing the stagnation rule may flag the run first.
        return {SolveStatus::DivergentGrowing, SolveStatus::DivergentOscillating,
                SolveStatus::MaxIterReached};
      },
      [](const Params& p) -> std::optional<double> {
        const double c = 2.0 * std::abs(p.at("a"));
        if (c < 1.0) return c;
        return std::nullopt;
      });

  return entries;
}

void validate_registry(const std::vector<CorpusEntry>& entries) {
  for (const auto& e : entries) {
    const auto ref = e.reference(e.defaults());
    if (!ref.has_value() || !e.reference_in_l1()) continue;
    const EquationSpec spec = e.build(e.defaults());
    const GridFunction sampled = GridFunction::sample(*ref, spec.resolution());
    const double res = residual(spec, sampled);
    if (!(res <= 1e-3)) {
      throw Error("corpus entry " + e.name() + ": reference residual " + format_double(res) +
                  " exceeds 1e-3; the registry is inconsistent");
    }
  }
}

}  // namespace

CorpusEntry::CorpusEntry(std::string name, std::string provenance, std::string summary,
                         Params defaults, std::function<EquationSpec(const Params&, int)> build,
                         std::function<std::optional<Expr>(const Params&)> reference,
                         bool reference_in_l1,
                         std::function<std::vector<SolveStatus>(const Params&)> expected,
                         std::function<std::optional<double>(const Params&)> contraction_bound)
    : name_(std::move(name)),
      provenance_(std::move(provenance)),
      summary_(std::move(summary)),
      defaults_(std::move(defaults)),
      build_(std::move(build)),
      reference_(std::move(reference)),
      reference_in_l1_(reference_in_l1),
      expected_(std::move(expected)),
      contraction_bound_(std::move(contraction_bound)) {}

Params CorpusEntry::merged_params(const Params& overrides) const {
  Params full = defaults_;
  for (const auto& [key, value] : overrides) {
    auto it = full.find(key);
    if (it == full.end()) {
      throw ParamOutOfRange("entry " + name_ + " has no parameter '" + key + "'");
    }
    if (!std::isfinite(value)) {
      throw ParamOutOfRange("parameter '" + key + "' of " + name_ + " must be finite");
    }
    it->second = value;
  }
  return full;
}

EquationSpec CorpusEntry::build(const Params& params, int resolution) const {
  return build_(merged_params(params), resolution);
}

std::optional<Expr> CorpusEntry::reference(const Params& params) const {
  return reference_(merged_params(params));
}

std::vector<SolveStatus> CorpusEntry::expected_statuses(const Params& params) const {
  return expected_(merged_params(params));
}

std::optional<double> CorpusEntry::contraction_bound(const Params& params) const {
  return contraction_bound_(merged_params(params));
}

const std::vector<CorpusEntry>& corpus_entries() {
  static const std::vector<CorpusEntry> entries = [] {
    auto e = build_registry();
    validate_registry(e);
    return e;
  }();
  return entries;
}

const CorpusEntry& corpus_entry(std::string_view name) {
  for (const auto& e : corpus_entries()) {
    if (e.name() == name) return e;
  }
  throw UnknownEntry("no corpus entry named '" + std::string(name) + "'");
}

std::vector<CorpusRunRow> run_corpus(double tol, int max_iter, int resolution,
                                     double reference_shift) {
  std::vector<CorpusRunRow> rows;
  for (const auto& e : corpus_entries()) {
    CorpusRunRow row;
    row.name = e.name();
    row.params = e.defaults();
    try {
      const EquationSpec spec = e.build(row.params, resolution);
      const SolveResult res =
          neumann_solve(spec, tol, max_iter, e.contraction_bound(row.params));
      row.status = res.status;
      const auto allowed = e.expected_statuses(row.params);
      row.ok = std::find(allowed.begin(), allowed.end(), res.status) != allowed.end();
      row.detail = row.ok ? res.detail
                          : std::string("status ") + to_string(res.status) + " not expected";

      const auto ref = e.reference(row.params);
      if (row.ok && ref.has_value() && e.reference_in_l1() &&
          res.status == SolveStatus::Converged) {
        GridFunction sampled = GridFunction::sample(*ref, resolution);
        if (reference_shift != 0.0) {
          sampled = GridFunction::combine(1.0, sampled, reference_shift,
                                          GridFunction::constant(1.0, resolution));
        }
        const double err = l1_distance(res.solution, sampled);
        row.reference_error = err;
        const double budget = 10.0 * tol + 100.0 / resolution;
        if (!(err <= budget)) {
          row.ok = false;
          row.detail = "reference error " + format_double(err) + " exceeds budget " +
                       format_double(budget);
        }
      }
    } catch (const Error& err) {
      row.ok = false;
      row.detail = err.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace funceq
