// Copyright 2026 The tcv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tcv/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tcv
{

namespace
{
constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
}  // namespace

double haversine_km(const LatLon & p, const LatLon & q)
{
  const double phi1 = p.lat * kDegToRad;
  const double phi2 = q.lat * kDegToRad;
  const double dphi = (q.lat - p.lat) * kDegToRad;
  const double dlambda = (q.lon - p.lon) * kDegToRad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  const double a = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

LatLon geodesic_midpoint(const LatLon & p, const LatLon & q)
{
  const double phi1 = p.lat * kDegToRad;
  const double phi2 = q.lat * kDegToRad;
  const double lambda1 = p.lon * kDegToRad;
  const double dlambda = (q.lon - p.lon) * kDegToRad;
  const double bx = std::cos(phi2) * std::cos(dlambda);
  const double by = std::cos(phi2) * std::sin(dlambda);
  const double phi_m = std::atan2(
    std::sin(phi1) + std::sin(phi2), std::sqrt((std::cos(phi1) + bx) * (std::cos(phi1) + bx) + by * by));
  const double lambda_m = lambda1 + std::atan2(by, std::cos(phi1) + bx);
  return {phi_m * kRadToDeg, lambda_m * kRadToDeg};
}

}  // namespace tcv
