#pragma once

// Per-iteration recording of runs plus lossless serialization. The CSV
// carries the per-step summary for plotting; the JSON carries everything
// (config, per-step y, lemma checks, oracle) for regression comparison.
// All decimals render with 17 significant digits so binary64 round-trips.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bpdyn/analysis.hpp"
#include "bpdyn/dynamics.hpp"
#include "bpdyn/oracle.hpp"
#include "bpdyn/types.hpp"

namespace bpdyn::trace {

enum class TerminalKind { max_iter, target_reached, support_collapse, kernel_error };

struct TerminalStatus {
    TerminalKind kind = TerminalKind::max_iter;
    std::string message;  // diagnostic detail for the error kinds
};

// Lemma checks for the step from k-1 to k.
struct StepChecks {
    std::int64_t k = 0;
    analysis::CheckResult norm_drop;
    analysis::CheckResult barrier;
    analysis::CheckResult energy_identity;
};

struct Trace {
    std::string instance_id;
    dynamics::StepConfig config;
    std::vector<analysis::PotentialReport> rows;
    std::vector<Vector> iterates;  // y per row, parallel to rows
    TerminalStatus terminal_status;
    std::optional<oracle::OracleResult> oracle;
    std::vector<StepChecks> checks;
    std::string timestamp;  // ISO 8601; excluded from comparisons
};

// Header "k,l1_w,l1_y,energy_E,barrier_B,max_ratio,j_value", one row per
// iteration, +inf rendered as "inf". Throws IoError.
void write_csv(const Trace& t, const std::string& path);

// Reads back only what the CSV carries: the rows. Bit-exact on finite
// values. Throws IoError on malformed input.
std::vector<analysis::PotentialReport> read_csv(const std::string& path);

// Full trace, schema-versioned with "schema": 1. Absent oracle stays
// absent. Throws IoError.
void write_json(const Trace& t, const std::string& path);
Trace read_json(const std::string& path);

} // namespace bpdyn::trace
