#include "gamemark/uci/score.hpp"

#include "gamemark/error.hpp"

namespace gamemark::uci {

double map_score(std::string_view kind, long long value) {
  if (kind == "cp") return double(value);
  if (kind == "mate") {
    if (value == 0) throw SessionError("uci: 'mate 0' score token");
    return value > 0 ? 1'000'000.0 - 1000.0 * double(value)
                     : -1'000'000.0 - 1000.0 * double(value);
  }
  throw SessionError("uci: unknown score kind '" + std::string(kind) + "'");
}

}  // namespace gamemark::uci
