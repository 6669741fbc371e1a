#include "teethseg/spatial_index.hpp"

#include <algorithm>
#include <iterator>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

namespace teethseg {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

using BPoint = bg::model::point<double, 3, bg::cs::cartesian>;
using BBox = bg::model::box<BPoint>;
using Value = std::pair<BPoint, Index>;

struct SpatialIndex::Impl {
  Points points;
  bgi::rtree<Value, bgi::rstar<16>> tree;
};

namespace {

BPoint to_bpoint(const Vec3& p) { return BPoint(p.x(), p.y(), p.z()); }

void sort_neighbors(std::vector<Neighbor>& out) {
  std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.index < b.index;
  });
}

}  // namespace

SpatialIndex::SpatialIndex(const Points& points) : impl_(std::make_unique<Impl>()) {
  impl_->points = points;
  std::vector<Value> values;
  values.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) values.emplace_back(to_bpoint(points[i]), static_cast<Index>(i));
  impl_->tree = bgi::rtree<Value, bgi::rstar<16>>(values.begin(), values.end());
}

SpatialIndex::~SpatialIndex() = default;
SpatialIndex::SpatialIndex(SpatialIndex&&) noexcept = default;
SpatialIndex& SpatialIndex::operator=(SpatialIndex&&) noexcept = default;

std::size_t SpatialIndex::size() const { return impl_->points.size(); }

std::vector<Neighbor> SpatialIndex::radius(const Vec3& query, double radius) const {
  std::vector<Neighbor> out;
  if (!(radius >= 0.0)) return out;
  BBox box(to_bpoint(query - Vec3::Constant(radius)), to_bpoint(query + Vec3::Constant(radius)));
  std::vector<Value> hits;
  impl_->tree.query(bgi::intersects(box), std::back_inserter(hits));
  for (const auto& [pt, idx] : hits) {
    double d = (impl_->points[idx] - query).norm();
    if (d <= radius) out.push_back({idx, d});
  }
  sort_neighbors(out);
  return out;
}

std::vector<Neighbor> SpatialIndex::nearest(const Vec3& query, std::size_t k) const {
  std::vector<Neighbor> out;
  if (k == 0 || impl_->points.empty()) return out;
  std::vector<Value> hits;
  impl_->tree.query(bgi::nearest(to_bpoint(query), static_cast<unsigned>(k)), std::back_inserter(hits));
  double kth = 0.0;
  for (const auto& [pt, idx] : hits) kth = std::max(kth, (impl_->points[idx] - query).norm());
  // The R-tree picks an arbitrary member among points tied at the k-th
  // distance; re-collect the whole shell so ties resolve by index.
  out = radius(query, kth);
  if (out.size() > k) out.resize(k);
  return out;
}

}  // namespace teethseg
