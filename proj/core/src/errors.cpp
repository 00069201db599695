#include "z2h/errors.hpp"

namespace z2h {

void throw_precondition(const std::string& what) { throw PreconditionError(what); }

}  // namespace z2h
