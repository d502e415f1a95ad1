#include "lcc/propagation.hpp"

namespace lcc {

std::string to_string(SeedStepKind kind) {
  switch (kind) {
  case SeedStepKind::init:
    return "init";
  case SeedStepKind::case1:
    return "case1";
  case SeedStepKind::cleanup_grow:
    return "cleanup+grow";
  }
  return "?";
}

} // namespace lcc
