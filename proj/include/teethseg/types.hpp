#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace teethseg {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Vertex or face index. Signed so that -1 can mark "removed" or "unassigned".
using Index = std::int32_t;

using Face = std::array<Index, 3>;

using Points = std::vector<Vec3>;

}  // namespace teethseg
