#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "detwork/protocol.hpp"
#include "detwork/spectrum.hpp"

namespace detwork {

/// Throws InvalidArgument when the file cannot be read.
std::string read_file(const std::string& path);

/// Writes through a temporary file in the same directory and renames it
/// into place, so a failed run never leaves a partial file.
void write_file_atomic(const std::string& path, std::string_view content);

/// Spectrum in the input file format; energies as exact rational strings.
std::string spectrum_to_json(const Spectrum& s);

std::string protocol_to_json(const ProtocolTable& pt);

/// Throws ProtocolViolation on malformed content.
ProtocolTable protocol_from_json(std::string_view text);

/// Comma-separated table with a header row and LF line endings.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const Table& t);

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// One "key=value" line per entry, in the given order.
std::string to_kv_text(const KeyValues& kv);

}  // namespace detwork
