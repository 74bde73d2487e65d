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

#ifndef TCV_GEO_HPP_
#define TCV_GEO_HPP_

namespace tcv
{

inline constexpr double kEarthRadiusKm = 6371.0;

struct LatLon
{
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees
};

// Great-circle distance in km on a sphere of radius kEarthRadiusKm.
double haversine_km(const LatLon & p, const LatLon & q);

// Point halfway along the great circle from p to q.
LatLon geodesic_midpoint(const LatLon & p, const LatLon & q);

}  // namespace tcv

#endif  // TCV_GEO_HPP_
