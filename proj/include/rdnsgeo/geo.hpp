#pragma once

namespace rdnsgeo {

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
};

// Great-circle distance in kilometres on a sphere of radius 6371 km.
// Throws std::domain_error when a coordinate is outside [-90,90] / [-180,180].
double haversine_km(const GeoPoint& a, const GeoPoint& b);

}  // namespace rdnsgeo
