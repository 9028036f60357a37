#include "walklab/error.hpp"

namespace walklab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::ConstructionDefect: return "construction defect";
    case ErrorKind::ConnectivityDefect: return "connectivity defect";
    case ErrorKind::GeneratorDefect: return "generator defect";
    case ErrorKind::NotTreeLike: return "not tree-like";
    case ErrorKind::MalformedExcursion: return "malformed excursion";
    case ErrorKind::Capacity: return "capacity exceeded";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::Violation: return "inequality violation";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace walklab
