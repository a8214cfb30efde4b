#pragma once

#include <stdexcept>
#include <string>

namespace pns {

// Argument outside the supported numeric envelope.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Caller violated an operation's precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotInvertibleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A certified computation contradicted a proven bound. Seeing this means a
// bug in the arithmetic or an unsound error radius somewhere upstream.
class InternalContradiction : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace pns
