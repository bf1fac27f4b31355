#ifndef MJP_ERRORS_HPP
#define MJP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mjp {

// Invalid models, inconsistent data, impossible observation sequences.
struct model_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical breakdown: non-finite values, zero-probability-event collisions.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw model_error(msg);
}

}  // namespace mjp

#endif
