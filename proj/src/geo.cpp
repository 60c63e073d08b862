#include "rdnsgeo/geo.hpp"

#include <cmath>
#include <stdexcept>

namespace rdnsgeo {

namespace {

constexpr double kEarthRadiusKm = 6371.0;
constexpr double kPi = 3.14159265358979323846;

double radians(double deg) { return deg * kPi / 180.0; }

void check_point(const GeoPoint& p) {
  if (!(p.lat >= -90.0 && p.lat <= 90.0)) {
    throw std::domain_error("latitude out of range");
  }
  if (!(p.lon >= -180.0 && p.lon <= 180.0)) {
    throw std::domain_error("longitude out of range");
  }
}

}  // namespace

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
  check_point(a);
  check_point(b);
  double lat1 = radians(a.lat);
  double lat2 = radians(b.lat);
  double dlat = radians(b.lat - a.lat);
  double dlon = radians(b.lon - a.lon);
  double s1 = std::sin(dlat / 2.0);
  double s2 = std::sin(dlon / 2.0);
  double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
  if (h > 1.0) h = 1.0;
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

}  // namespace rdnsgeo
