#ifndef COMBGEN_ERRORS_HPP
#define COMBGEN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace combgen {

// Thrown when a sampler would exceed its configured work budget (level counts,
// rejection attempts, diffusion steps).  Callers that surface this to a user
// should suggest the remedy carried in the message instead of retrying.
class Resource_cap_error : public std::runtime_error {
 public:
  explicit Resource_cap_error(const std::string& what) : std::runtime_error{what} {}
};

}  // namespace combgen

#endif  // COMBGEN_ERRORS_HPP
