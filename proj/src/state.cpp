#include "tumorsim/state.hpp"

namespace tumorsim {

State State::zeros(std::size_t n) {
  State s;
  s.phi_T.assign(n, 0.0);
  s.mu.assign(n, 0.0);
  s.phi_N.assign(n, 0.0);
  s.phi_sigma.assign(n, 0.0);
  s.phi_M.assign(n, 0.0);
  s.theta.assign(n, 0.0);
  return s;
}

bool State::consistent(std::size_t n) const {
  for (const auto* f : fields()) {
    if (f->size() != n) return false;
  }
  return true;
}

}  // namespace tumorsim
