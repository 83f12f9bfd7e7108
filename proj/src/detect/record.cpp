#include "gamemark/detect/record.hpp"

#include <fstream>
#include <sstream>

#include "gamemark/error.hpp"

namespace gamemark::detect {

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  throw ParseError("trace: invalid hex digit");
}

void check_token(const std::string& s, const char* what) {
  if (s.empty()) throw ContractError(std::string("trace: empty ") + what);
  for (char c : s) {
    if (c == ' ' || c == ',' || c == '\n' || c == '\r' || c == '\t')
      throw ContractError(std::string("trace: ") + what +
                          " may not contain spaces, commas, or line breaks");
  }
}
}  // namespace

std::string to_hex(std::string_view bytes) {
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char b : bytes) {
    out.push_back(kHexDigits[b >> 4]);
    out.push_back(kHexDigits[b & 0xF]);
  }
  return out;
}

std::string from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw ParseError("trace: odd-length hex field");
  std::string out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(char((hex_nibble(hex[i]) << 4) | hex_nibble(hex[i + 1])));
  }
  return out;
}

std::string encode_record(const MoveRecord& rec) {
  if (rec.observation.empty()) throw ContractError("trace: empty observation");
  if (rec.actions.empty()) throw ContractError("trace: empty action list");
  std::ostringstream out;
  out << rec.round << ' ' << rec.move << ' ' << rec.player << ' '
      << to_hex(rec.observation) << ' ';
  for (std::size_t i = 0; i < rec.actions.size(); ++i) {
    check_token(rec.actions[i], "action");
    if (i) out << ',';
    out << rec.actions[i];
  }
  check_token(rec.chosen, "chosen action");
  out << ' ' << rec.chosen;
  return out.str();
}

MoveRecord decode_record(const std::string& line) {
  std::istringstream in(line);
  MoveRecord rec;
  std::string obs_hex, actions_csv;
  if (!(in >> rec.round >> rec.move >> rec.player >> obs_hex >> actions_csv >>
        rec.chosen))
    throw ParseError("trace: malformed record line: " + line);
  std::string extra;
  if (in >> extra) throw ParseError("trace: trailing data in record line");
  rec.observation = from_hex(obs_hex);
  std::size_t start = 0;
  while (start <= actions_csv.size()) {
    const std::size_t comma = actions_csv.find(',', start);
    const std::size_t end = comma == std::string::npos ? actions_csv.size() : comma;
    if (end == start) throw ParseError("trace: empty action in list");
    rec.actions.push_back(actions_csv.substr(start, end - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return rec;
}

void write_trace(std::ostream& out, const std::vector<MoveRecord>& records) {
  out << "# gamemark-trace v1\n";
  for (const MoveRecord& rec : records) out << encode_record(rec) << '\n';
}

std::vector<MoveRecord> read_trace(std::istream& in) {
  std::vector<MoveRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    records.push_back(decode_record(line));
  }
  return records;
}

std::vector<MoveRecord> read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("trace: cannot open " + path);
  return read_trace(in);
}

void write_trace_file(const std::string& path,
                      const std::vector<MoveRecord>& records) {
  std::ofstream out(path);
  if (!out) throw ParseError("trace: cannot write " + path);
  write_trace(out, records);
}

}  // namespace gamemark::detect
