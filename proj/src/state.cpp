#include "nsmlimit/state.hpp"

namespace nsmlimit {

bool FullState::all_finite() const {
  return n.all_finite() && u.all_finite() && J.all_finite() && E.all_finite() && B.all_finite();
}

FullState& FullState::operator+=(const FullState& o) {
  n += o.n;
  u += o.u;
  J += o.J;
  E += o.E;
  B += o.B;
  return *this;
}

FullState& FullState::operator*=(double s) {
  n *= s;
  u *= s;
  J *= s;
  E *= s;
  B *= s;
  return *this;
}

bool LimitState::all_finite() const { return n0.all_finite() && u0.all_finite(); }

LimitState& LimitState::operator+=(const LimitState& o) {
  n0 += o.n0;
  u0 += o.u0;
  return *this;
}

LimitState& LimitState::operator*=(double s) {
  n0 *= s;
  u0 *= s;
  return *this;
}

}  // namespace nsmlimit
