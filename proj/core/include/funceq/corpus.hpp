#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "funceq/solver.hpp"
#include "funceq/transfer_operator.hpp"

namespace funceq {

using Params = std::map<std::string, double>;

/// A named equation family with closed-form reference data where one exists.
/// Entry names, parameter keys and provenance strings are a stable CLI
/// contract; do not rename.
class CorpusEntry {
 public:
  CorpusEntry(std::string name, std::string provenance, std::string summary, Params defaults,
              std::function<EquationSpec(const Params&, int)> build,
              std::function<std::optional<Expr>(const Params&)> reference, bool reference_in_l1,
              std::function<std::vector<SolveStatus>(const Params&)> expected,
              std::function<std::optional<double>(const Params&)> contraction_bound);

  const std::string& name() const { return name_; }
  const std::string& provenance() const { return provenance_; }
  const std::string& summary() const { return summary_; }
  const Params& defaults() const { return defaults_; }

  /// Defaults overlaid with `overrides`. Unknown keys or non-finite values
  /// throw ParamOutOfRange.
  Params merged_params(const Params& overrides) const;

  /// Builds the equation at the given resolution; validates ranges.
  EquationSpec build(const Params& params, int resolution = EquationSpec::kDefaultResolution) const;

  /// Closed-form solution when the family has one.
  std::optional<Expr> reference(const Params& params) const;
  /// False when the closed form fails to be integrable (pole inside [0,1]),
  /// in which case it must not be sampled on the grid.
  bool reference_in_l1() const { return reference_in_l1_; }

  /// Statuses the solver is allowed to report for these parameters.
  std::vector<SolveStatus> expected_statuses(const Params& params) const;

  /// Contraction constant of the substitution operator when below 1;
  /// callers pass it to neumann_solve as c_hint.
  std::optional<double> contraction_bound(const Params& params) const;

 private:
  std::string name_;
  std::string provenance_;
  std::string summary_;
  Params defaults_;
  std::function<EquationSpec(const Params&, int)> build_;
  std::function<std::optional<Expr>(const Params&)> reference_;
  bool reference_in_l1_;
  std::function<std::vector<SolveStatus>(const Params&)> expected_;
  std::function<std::optional<double>(const Params&)> contraction_bound_;
};

/// All built-in entries, in stable order. On first access every entry with an
/// integrable reference is validated: the sampled reference must satisfy the
/// equation to residual 1e-3 at the default resolution.
const std::vector<CorpusEntry>& corpus_entries();

/// Lookup by name; throws UnknownEntry.
const CorpusEntry& corpus_entry(std::string_view name);

struct CorpusRunRow {
  std::string name;
  Params params;
  SolveStatus status = SolveStatus::MaxIterReached;
  std::optional<double> reference_error;  // L1 distance to the sampled
                                          // reference, Converged entries only
  bool ok = false;
  std::string detail;
};

/// Solves every entry at its default parameters. A row passes when the status
/// is among the expected ones and, for Converged entries with a reference,
/// the L1 error is at most 10*tol + 100/resolution. `reference_shift` offsets
/// the sampled reference by a constant; it exists so tests can prove a wrong
/// reference is caught.
std::vector<CorpusRunRow> run_corpus(double tol = 1e-6, int max_iter = 400,
                                     int resolution = EquationSpec::kDefaultResolution,
                                     double reference_shift = 0.0);

}  // namespace funceq
