#pragma once

// Single-file model format, all integers and floats little-endian:
//
//   "GUMORPH\0"  u32 version
//   u8 head, u8 has_pos, u8 pos
//   u64 embed_dim, hidden_dim, batch, epochs, seed; f64 lr, threshold, clip_norm
//   u64 outputs
//   u64 n; n x u32 code points (vocabulary, ids 2..)
//   u64 n; n x (u64 len, bytes) canonical class strings (tagger only)
//   u64 n; n x (u64 len, name, u64 rank, rank x u64 dims, f64 data)

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gumorph/nn.hpp"
#include "gumorph/tagset.hpp"

namespace gumorph {

inline constexpr std::uint32_t kModelFormatVersion = 1;

struct ModelFile {
  nn::ModelParams params;
  std::optional<Pos> pos;            // set for tagger models
  std::vector<std::string> classes;  // canonical bundles in class-id order

  bool operator==(const ModelFile&) const = default;
};

void write_model(std::ostream& out, const ModelFile& model);
/// Throws FormatError on a truncated or inconsistent file.
ModelFile read_model(std::istream& in);

void save_model(const std::string& path, const ModelFile& model);
ModelFile load_model(const std::string& path);

}  // namespace gumorph
