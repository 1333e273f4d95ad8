#pragma once

#include <map>
#include <string>
#include <vector>

#include "eop/estimator.hpp"
#include "eop/pipeline.hpp"
#include "eop/selection.hpp"

namespace eop {

/// Strict CSV with header `algorithm,environment,hyperparam_id,seed,value`.
/// Rejects duplicate (algorithm, environment, hyperparam_id, seed) keys and
/// non-finite values; errors name the offending line.
std::vector<RunRecord> parse_runs(const std::string& path);
void write_runs(const std::vector<RunRecord>& records, const std::string& path);

/// Strict CSV with header `round,policy_id,method,score,direction`;
/// direction is `higher` or `lower` and must be consistent per method.
/// Returns one table per round, in ascending round order.
std::vector<ScoreTable> parse_scores(const std::string& path);
void write_scores(const std::vector<ScoreTable>& tables, const std::string& path);

/// CSV with header `budget,mean,std,n`, one row per budget, shortest
/// round-trip decimals.
void emit_curve(const EopCurve& curve, const std::string& path);
EopCurve parse_curve(const std::string& path);

/// Line-oriented `key = value` config text; '#' starts a comment.
std::map<std::string, std::string> parse_config_file(const std::string& path);
PipelineConfig pipeline_config_from(const std::map<std::string, std::string>& entries);

/// Quarantined adapter for the external NeoRL results release (undocumented
/// layout; see README). Scans `dir` for per-algorithm CSV files matching the
/// environment tag and emits canonical run records.
std::vector<RunRecord> import_neorl(const std::string& dir,
                                    const std::string& environment);

std::string format_double(double value);  // shortest round-trip decimal

}  // namespace eop
