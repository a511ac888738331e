#pragma once

#include <string_view>

namespace eoc {

enum class Status { Holds, FailsAt, Inconclusive };

inline std::string_view status_name(Status s) {
  switch (s) {
    case Status::Holds: return "Holds";
    case Status::FailsAt: return "FailsAt";
    case Status::Inconclusive: return "Inconclusive";
  }
  return "?";
}

}  // namespace eoc
