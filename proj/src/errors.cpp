#include "dacopt/errors.hpp"

namespace dacopt {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfigError;
  if (dynamic_cast<const InfeasibleError*>(&e)) return kExitInfeasible;
  if (dynamic_cast<const InternalError*>(&e)) return kExitInternal;
  return kExitInternal;
}

}  // namespace dacopt
