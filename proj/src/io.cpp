#include "pairsim/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cstdio>

namespace pairsim::io {

namespace fs = std::filesystem;

std::string format_number(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.16e", v);
  return buf.data();
}

CsvWriter::CsvWriter(const fs::path& path, std::vector<std::string> columns, const Meta& meta)
    : path_(path), os_(path, std::ios::binary | std::ios::trunc), columns_(columns.size()) {
  if (!os_) throw IoError("cannot open " + path.string() + " for writing");
  for (const auto& [key, value] : meta) os_ << "# " << key << ": " << value << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
  os_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw IoError("row width mismatch in " + path_.string());
  for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
  os_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  row(cells);
}

void CsvWriter::close() {
  os_.flush();
  if (!os_) throw IoError("write failed for " + path_.string());
  os_.close();
}

std::string sha256_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (is) {
    is.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(is.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", md[i]);
    hex += byte;
  }
  return hex;
}

nlohmann::json params_to_json(const PacketParams& p) {
  return {{"gamma", p.gamma}, {"alpha", p.alpha}, {"beta", p.beta}, {"K0", p.K0},
          {"k0", p.k0},       {"r0", p.r0},       {"R0", p.R0}};
}

void write_manifest(const fs::path& dir, const nlohmann::json& config,
                    const nlohmann::json& extra) {
  nlohmann::json files = nlohmann::json::object();
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().filename() != "manifest.json") {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) files[p.filename().string()] = sha256_file(p);
  nlohmann::json manifest = {{"config", config}, {"files", files}};
  for (const auto& [k, v] : extra.items()) manifest[k] = v;
  std::ofstream os(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  os << manifest.dump(2) << '\n';
  if (!os) throw IoError("cannot write manifest in " + dir.string());
}

void write_state_grid(const fs::path& path, const packets::TwoParticleState& state,
                      std::span<const double> xs) {
  nlohmann::json header = params_to_json(state.params());
  header["kind"] = to_string(state.kind());
  header["form"] = state.form();
  header["symmetry"] = state.symmetry() == Symmetry::symmetric ? "symmetric" : "antisymmetric";
  CsvWriter csv(path, {"x1", "x2", "re", "im"}, {{"state", header.dump()}});
  for (double x1 : xs) {
    for (double x2 : xs) {
      const Complex v = state(x1, x2);
      csv.row({x1, x2, v.real(), v.imag()});
    }
  }
  csv.close();
}

}  // namespace pairsim::io
