#ifndef FDLAB_IO_HPP
#define FDLAB_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdlab/domain.hpp"
#include "fdlab/pipeline.hpp"
#include "fdlab/profiles.hpp"

namespace fdlab {

/// Full round-trip decimal rendering of a double (%.17g).
std::string format_double(double x);

/// Writes a CSV file; every numeric cell uses the round-trip format.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// FNV-1a 64-bit checksum of a file's bytes; throws if unreadable.
std::uint64_t fnv1a64_file(const std::string& path);

nlohmann::json profile_to_json(const SimilarityProfile& profile);
nlohmann::json field_to_json(const RadialField& field);
nlohmann::json report_to_json(const VerificationReport& report);

/// Writes `<dir>/manifest.json` listing the run config, every produced file
/// with its checksum, and the wall time.
void write_manifest(const std::string& dir, const nlohmann::json& config,
                    const std::vector<std::string>& files, double wall_seconds);

}  // namespace fdlab

#endif
