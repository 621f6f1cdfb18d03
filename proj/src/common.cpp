#include "expfunc/common.hpp"

#include <cstdio>

namespace expfunc {

std::string Extended::to_string() const {
  switch (kind_) {
    case Kind::PlusInfinity: return "+inf";
    case Kind::MinusInfinity: return "-inf";
    case Kind::Finite: break;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value_);
  return buf;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return "Satisfied";
    case Verdict::Violated: return "Violated";
    case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

}  // namespace expfunc
