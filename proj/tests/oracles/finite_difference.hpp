#pragma once
// Central differences over every coordinate of a point set.

#include <functional>

#include "teethseg/types.hpp"

namespace oracle {

inline teethseg::Points central_gradient(const std::function<double(const teethseg::Points&)>& f,
                                         const teethseg::Points& at, double h = 1e-6) {
  teethseg::Points grad(at.size(), teethseg::Vec3::Zero());
  teethseg::Points probe = at;
  for (std::size_t i = 0; i < at.size(); ++i) {
    for (int a = 0; a < 3; ++a) {
      probe[i][a] = at[i][a] + h;
      double up = f(probe);
      probe[i][a] = at[i][a] - h;
      double down = f(probe);
      probe[i][a] = at[i][a];
      grad[i][a] = (up - down) / (2.0 * h);
    }
  }
  return grad;
}

// ||analytic - numeric|| / ||numeric||, with an absolute floor for tiny gradients.
inline double relative_gradient_error(const teethseg::Points& analytic, const teethseg::Points& numeric) {
  double diff = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < numeric.size(); ++i) {
    diff += (analytic[i] - numeric[i]).squaredNorm();
    norm += numeric[i].squaredNorm();
  }
  return std::sqrt(diff) / std::max(std::sqrt(norm), 1e-8);
}

}  // namespace oracle
