#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "mdvo/sim.hpp"

namespace mdvo {

/// Shortest round-trip decimal form of a double ("nan", "inf" for
/// non-finite values).
std::string format_double(double v);

/// CSV column schemas shared with the plotting scripts.
namespace csv_schema {
inline const std::vector<std::string> estimates = {"t", "robot", "mu", "p_hat_x", "p_hat_y", "p_hat_z", "l"};
inline const std::vector<std::string> positions = {"t", "robot", "role", "x", "y", "z"};
inline const std::vector<std::string> center = {"t", "mu", "pbar_x", "pbar_y", "pbar_z"};
inline const std::vector<std::string> blocks = {"t", "block", "robot", "mu", "y"};
// errors.csv: these columns, then formation_error_<id> per follower.
inline const std::vector<std::string> errors = {"t", "consensus_error", "label_error", "formation_error"};
}  // namespace csv_schema

std::string estimates_csv(const SimTrace& trace);
std::string positions_csv(const SimTrace& trace);
std::string center_csv(const SimTrace& trace);
std::string errors_csv(const SimTrace& trace);
/// Requires a trace recorded with RunOptions::record_blocks.
std::string blocks_csv(const SimTrace& trace);

/// Metadata sidecar: code version, seed, thetas, run statistics and the
/// full resolved scenario, enough to rerun the identical simulation.
nlohmann::json metadata(const SimTrace& trace, const std::vector<std::string>& files);

/// Writes <basename>_{estimates,positions,center,errors}.csv, optionally
/// <basename>_blocks.csv, and <basename>_meta.txt into dir. Returns the
/// written paths. Throws std::runtime_error on I/O failure.
std::vector<std::filesystem::path> write_outputs(const SimTrace& trace, const std::filesystem::path& dir,
                                                 const std::string& basename, bool include_blocks = false);

}  // namespace mdvo
