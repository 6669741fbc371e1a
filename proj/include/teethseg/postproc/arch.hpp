#pragma once

#include <vector>

#include "teethseg/annotation.hpp"
#include "teethseg/types.hpp"

namespace teethseg::postproc {

/// y = a x^2 + b x + c in the occlusal (xOy) plane.
struct ArchCurve {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double residual = 0.0;  // sum of squared y residuals of the fit

  double operator()(double x) const { return (a * x + b) * x + c; }
  /// x of the curve point closest to (px, py).
  double foot_parameter(double px, double py) const;
};

/// Least-squares parabola through the xy projection of `centroids`.
/// Throws degenerate_fit with fewer than three distinct x values.
ArchCurve fit_arch_curve(const Points& centroids);

struct ArchTooth {
  Vec3 centroid;
  int label = 0;
};

/// Repairs duplicated or out-of-order FDI labels. Teeth are ordered by their
/// foot point along the curve and aligned to the jaw's 16-slot arch order
/// with a strictly increasing slot assignment minimising, in turn, the
/// number of relabelled teeth, the number of skipped slots and the slot
/// sequence itself (lexicographically). Both reading directions of the arch
/// are tried; the canonical one (increasing x = patient right to left) wins
/// ties. Returns one label per input tooth, in input order.
std::vector<int> arch_label_correct(const std::vector<ArchTooth>& teeth, const ArchCurve& curve, Jaw jaw);

}  // namespace teethseg::postproc
