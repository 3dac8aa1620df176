#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glissando/charpoly.hpp"

namespace glissando {

/// Reduced fraction with positive denominator.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
  }

  /// "a/b", or "a" when b == 1.
  std::string to_string() const;
  /// Parses "a/b" or "a".
  static Rational parse(const std::string& s);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// A Newton slope: exact rational or +infinity.
class Slope {
 public:
  constexpr Slope() = default;
  Slope(Rational r) : value_(r) {}  // NOLINT(implicit)
  Slope(std::int64_t n) : value_(Rational(n)) {}  // NOLINT(implicit)
  static Slope infinity() {
    Slope s;
    s.infinite_ = true;
    return s;
  }

  bool is_infinite() const noexcept { return infinite_; }
  const Rational& rational() const noexcept { return value_; }

  friend bool operator==(const Slope& a, const Slope& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const Slope& a, const Slope& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    return a.value_ <=> b.value_;
  }

  /// "a/b", "a", or "inf".
  std::string to_string() const;
  static Slope parse(const std::string& s);

 private:
  Rational value_;
  bool infinite_ = false;
};

struct SlopeSegment {
  Slope slope;
  std::int64_t width = 0;

  friend bool operator==(const SlopeSegment&, const SlopeSegment&) = default;
};

struct Vertex {
  std::int64_t n = 0;
  std::int64_t v = 0;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Lower convex hull of {(n, v_t(a_n))} as segments of strictly increasing
/// slope, followed by a +infinity segment of width dim - deg_X P.
///
/// When built from a truncated series, only the segments of slope below
/// `certified_below` are present and each of them is guaranteed to agree with
/// the exact polygon.
struct NewtonPolygon {
  std::size_t dim = 0;
  std::vector<Vertex> vertices;
  std::vector<SlopeSegment> segments;
  std::optional<Slope> certified_below;

  bool partial() const noexcept { return certified_below.has_value(); }
  std::int64_t total_width() const noexcept;
  /// Segments with slope < cutoff.
  std::vector<SlopeSegment> below(const Slope& cutoff) const;
  /// "0^1, 3/2^2, inf^1".
  std::string to_string() const;

  friend bool operator==(const NewtonPolygon&, const NewtonPolygon&) = default;
};

/// Full polygon of an exact series; for a truncated series this is
/// newton_polygon(p, +infinity), which needs every coefficient exact.
NewtonPolygon newton_polygon(const CharSeries& p);

/// Polygon restricted to slopes < cutoff. Exact series yield the full
/// polygon. Truncated series throw PrecisionError unless every vertex of the
/// requested part is certified.
NewtonPolygon newton_polygon(const CharSeries& p, const Slope& cutoff);

/// Width of the segment of slope alpha, or 0.
std::int64_t slope_multiplicity(const NewtonPolygon& polygon, const Slope& alpha);

/// The parts of slope < cutoff coincide (slopes and widths, in order).
bool window_agreement(const NewtonPolygon& a, const NewtonPolygon& b, const Slope& cutoff);

}  // namespace glissando
