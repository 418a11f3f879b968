#pragma once

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "orthotour/geometry.hpp"

// Dense-array reference model for the mountain range: stores the function
// value at every doubled coordinate of the domain. Every operation is a
// direct pointwise transcription of its definition.

namespace orthotour::test {

struct MountainSim {
  Coord a2 = 0, b2 = 0;
  std::vector<Length> y2;  // value at x2 = a2 + index

  static MountainSim zero(Coord a, Coord b) {
    MountainSim s;
    s.a2 = 2 * a;
    s.b2 = 2 * b;
    s.y2.assign(std::size_t(s.b2 - s.a2) + 1, 0);
    return s;
  }
  Length at2(Coord x2) const { return y2[std::size_t(x2 - a2)]; }
  Length at(Coord x) const { return at2(2 * x) / 2; }

  MountainSim shift(Length delta) const {
    MountainSim s = *this;
    for (auto& v : s.y2) v += 2 * delta;
    return s;
  }
  MountainSim relax(int lambda, Length gamma) const {
    MountainSim s = *this;
    for (Coord x2 = a2; x2 <= b2; ++x2) {
      Length line = Length(lambda) * x2 + 2 * gamma;
      s.y2[std::size_t(x2 - a2)] = std::min(s.at2(x2), line);
    }
    return s;
  }
  MountainSim restrict(Coord a, Coord b) const {
    MountainSim s;
    s.a2 = 2 * a;
    s.b2 = 2 * b;
    s.y2.assign(y2.begin() + (s.a2 - a2), y2.begin() + (s.b2 - a2) + 1);
    return s;
  }
  static MountainSim join(const MountainSim& l, const MountainSim& r) {
    MountainSim s = l;
    s.b2 = r.b2;
    s.y2.insert(s.y2.end(), r.y2.begin() + 1, r.y2.end());
    return s;
  }
};

}  // namespace orthotour::test
