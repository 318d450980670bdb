#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

#include "wug/inflector/model.hpp"

namespace wug::data {

inline constexpr int kCheckpointVersion = 1;

enum class Precision { kFloat32, kFloat64 };

// Layout: text header lines
//   wug-checkpoint <version>
//   precision f32|f64
//   seed, epochs, every HyperParams field
//   vocab <n> followed by n token lines
//   param <name> <rows>x<cols> <byte offset> <count>   (one per tensor)
//   payload <bytes>
//   crc32 <hex>   over every header byte above plus the payload
//   end
// then the little-endian payload. Offsets are relative to the payload start
// and tile it without gaps.
void write_checkpoint(std::ostream& out, const Inflector& model, Precision precision = Precision::kFloat32);
Inflector read_checkpoint(std::istream& in, std::string_view source = "<stream>");

// Atomic: writes a temporary sibling and renames it.
void save_checkpoint(const Inflector& model, const std::filesystem::path& path,
                     Precision precision = Precision::kFloat32);
Inflector load_checkpoint(const std::filesystem::path& path);

// Reads `key = value` lines; '#' starts a comment line. Throws IngestionError
// with the line number on a malformed or repeated key.
std::map<std::string, std::string> read_key_values(std::istream& in, std::string_view source = "<stream>");

}  // namespace wug::data
