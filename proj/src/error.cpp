#include "xsl/error.hpp"

namespace xsl {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
    case ErrorKind::format: return "format";
    case ErrorKind::design: return "design";
    case ErrorKind::learner: return "learner";
  }
  return "unknown";
}

}  // namespace xsl
