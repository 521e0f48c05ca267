#pragma once

#include "mctrend/model.hpp"
#include "mctrend/sim.hpp"
#include "mctrend/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mctrend {

/// Parses a `dose,response` CSV into a Dataset.  Dose values are labels;
/// groups are ordered by `dose_order` when nonempty (it must list exactly
/// the labels present in the file), otherwise lexically, and the first
/// label is the control.  Malformed rows raise DataError naming the
/// 1-based line number; so do groups with fewer than two observations and
/// files with fewer than two groups.
Dataset parse_csv(const std::string& input_path,
                  const std::vector<std::string>& dose_order = {});

/// Stream variant used by parse_csv; `source_name` appears in messages.
Dataset parse_csv_stream(std::istream& in, const std::string& source_name,
                         const std::vector<std::string>& dose_order = {});

/// Reads a square correlation matrix from a whitespace-separated text
/// file (one row per line; blank lines and `#` comments ignored).
/// Ragged rows or a non-square layout raise DataError with the line
/// number; the entries are validated by CorrelationMatrix::from_matrix.
CorrelationMatrix read_correlation_file(const std::string& path);

/// Parses a simulation configuration from `key = value` lines (one per
/// line; `#` starts a comment).  Keys: k, n_per_group, sigma, alpha,
/// delta (a number or `auto`), target_power, replications, seed, methods
/// (comma-separated subset of dunnett,williams,cw,cp).  Unknown keys,
/// unknown methods and unparsable values raise DataError naming the key.
/// `delta = auto` (the default) leaves cfg.delta at 0 so the caller runs
/// calibrate_delta first.
SimConfig parse_sim_config(const std::string& path);
SimConfig parse_sim_config_stream(std::istream& in,
                                  const std::string& source_name);

/// PowerTable serializations used by the `simulate` subcommand.
std::string power_table_csv(const PowerTable& table);
std::string power_table_json(const PowerTable& table);

}  // namespace mctrend
