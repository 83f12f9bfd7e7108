#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gamemark::detect {

// One decision from a gameplay record: everything a third-party detector
// needs to replay the partition, with no engine access.
struct MoveRecord {
  std::string observation;            // raw bytes (hex-encoded on the wire)
  std::vector<std::string> actions;   // legal set, canonical order
  std::string chosen;
  int player = 0;
  int round = 0;   // 0-based
  int move = 0;    // 0-based ply index within the round
};

// Line-delimited trace format (documented in docs/FORMATS.md):
//   round move player observation_hex actions_csv chosen
// '#' starts a comment line; blank lines are skipped.
std::string encode_record(const MoveRecord& rec);
MoveRecord decode_record(const std::string& line);

void write_trace(std::ostream& out, const std::vector<MoveRecord>& records);
std::vector<MoveRecord> read_trace(std::istream& in);
std::vector<MoveRecord> read_trace_file(const std::string& path);
void write_trace_file(const std::string& path,
                      const std::vector<MoveRecord>& records);

std::string to_hex(std::string_view bytes);
std::string from_hex(std::string_view hex);

}  // namespace gamemark::detect
