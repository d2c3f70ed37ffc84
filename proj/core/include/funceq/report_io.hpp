#pragma once

#include <string>

#include "funceq/corpus.hpp"
#include "funceq/hypotheses.hpp"
#include "funceq/solver.hpp"

namespace funceq {

/// Human-readable key-value block, one field per line.
std::string render_text(const HypothesisReport& report);
std::string render_text(const SolveResult& result);

/// JSON mirroring the report structs field for field. Non-finite numbers are
/// emitted as the strings "inf"/"-inf"/"nan" (JSON has no encoding for them).
std::string to_json_text(const HypothesisReport& report, int indent = 2);
std::string to_json_text(const SolveResult& result, int indent = 2);
std::string to_json_text(const std::vector<CorpusRunRow>& rows, int indent = 2);

/// CSV with header "k,term_norm,partial_norm,apriori_bound"; the bound column
/// is empty unless the result carries a usable contraction hint.
std::string trace_csv(const SolveResult& result);

/// CSV with header "x,value", one row per grid node.
std::string solution_csv(const GridFunction& phi);

}  // namespace funceq
