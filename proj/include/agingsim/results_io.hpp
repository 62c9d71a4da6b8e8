// SPDX-License-Identifier: Apache-2.0
//
// agingsim: channel aging and prediction for multi-cell massive MIMO
// ------------------------------------------------------------------------

#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "agingsim/montecarlo.hpp"
#include "agingsim/netsim.hpp"

namespace agingsim {

inline constexpr const char *kSweepHeader = "sweep_value,scenario,direction,mean_sum_rate,stderr,n_samples";

/// 17 significant digits, '.' decimal separator; "inf"/"-inf"/"nan" otherwise.
std::string format_double(double v);

std::string sweep_csv(std::span<const SweepRecord> records);
/// Sorted samples with empirical CDF i/n.
std::string cdf_csv(std::vector<double> samples);
std::string validation_csv(std::span<const ValidationRow> rows);

nlohmann::json metadata_json(const ExperimentResult &result);

/// Writes sweep.csv, one cdf_<scenario>_<direction>_<point>.csv per record
/// and metadata.json into `out_dir` (created if needed). Returns the paths.
std::vector<std::string> emit_results(const ExperimentResult &result, const std::string &out_dir);

/// Writes `content` to `path`, throwing Error on failure.
void write_file(const std::string &path, const std::string &content);

} // namespace agingsim
