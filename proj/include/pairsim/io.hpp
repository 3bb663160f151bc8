#pragma once

// Output files: CSV tables with '#' metadata lines, run manifests, and
// state grid dumps.

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pairsim/packets.hpp"

namespace pairsim::io {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scientific notation, 17 significant digits.
std::string format_number(double v);

class CsvWriter {
 public:
  using Meta = std::vector<std::pair<std::string, std::string>>;

  CsvWriter(const std::filesystem::path& path, std::vector<std::string> columns,
            const Meta& meta = {});

  void row(const std::vector<std::string>& cells);
  void row(std::initializer_list<double> values);
  /// Flushes and checks the stream; throws IoError on failure.
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream os_;
  std::size_t columns_;
};

std::string sha256_file(const std::filesystem::path& path);

nlohmann::json params_to_json(const PacketParams& p);

/// Writes manifest.json into `dir`: the resolved config, extra fields, and
/// a sha256 for every other regular file in the directory.
void write_manifest(const std::filesystem::path& dir, const nlohmann::json& config,
                    const nlohmann::json& extra);

/// '#'-prefixed JSON params line, then x1,x2,re,im rows over xs x xs.
void write_state_grid(const std::filesystem::path& path, const packets::TwoParticleState& state,
                      std::span<const double> xs);

}  // namespace pairsim::io
