#include "glissando/newton.hpp"

#include <numeric>
#include <sstream>

#include "glissando/errors.hpp"

namespace glissando {

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw ParameterError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::string Rational::to_string() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string& s) {
  try {
    std::size_t pos = 0;
    const auto slash = s.find('/');
    if (slash == std::string::npos) {
      std::int64_t n = std::stoll(s, &pos);
      if (pos != s.size()) throw ParameterError("");
      return Rational(n);
    }
    std::int64_t n = std::stoll(s.substr(0, slash), &pos);
    if (pos != slash) throw ParameterError("");
    const std::string rest = s.substr(slash + 1);
    std::int64_t d = std::stoll(rest, &pos);
    if (pos != rest.size()) throw ParameterError("");
    return Rational(n, d);
  } catch (const std::exception&) {
    throw ParameterError("not a rational number: '" + s + "'");
  }
}

std::string Slope::to_string() const { return infinite_ ? "inf" : value_.to_string(); }

Slope Slope::parse(const std::string& s) {
  if (s == "inf" || s == "+inf" || s == "infinity") return infinity();
  return Slope(Rational::parse(s));
}

std::int64_t NewtonPolygon::total_width() const noexcept {
  std::int64_t w = 0;
  for (const auto& s : segments) w += s.width;
  return w;
}

std::vector<SlopeSegment> NewtonPolygon::below(const Slope& cutoff) const {
  if (certified_below && *certified_below < cutoff)
    throw PrecisionError("polygon is only certified below slope " + certified_below->to_string(),
                         0);
  std::vector<SlopeSegment> out;
  for (const auto& s : segments)
    if (s.slope < cutoff) out.push_back(s);
  return out;
}

std::string NewtonPolygon::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i) os << ", ";
    os << segments[i].slope.to_string() << '^' << segments[i].width;
  }
  return os.str();
}

namespace {

struct HullPoint {
  std::int64_t n;
  std::int64_t v;
  bool exact;
};

// Sign of the turn a -> b -> c; <= 0 means b is not strictly below chord ac.
__int128 cross(const HullPoint& a, const HullPoint& b, const HullPoint& c) {
  return static_cast<__int128>(b.n - a.n) * (c.v - a.v) -
         static_cast<__int128>(b.v - a.v) * (c.n - a.n);
}

std::size_t suggest_precision(const CharSeries& p, const Slope& cutoff) {
  const std::size_t exact_at = p.degree_bound + 1;
  if (cutoff.is_infinite()) return exact_at;
  const auto& c = cutoff.rational();
  const std::int64_t need = c.num() * static_cast<std::int64_t>(p.dim) / c.den() + 1;
  return std::min(exact_at, static_cast<std::size_t>(std::max<std::int64_t>(need, 1)));
}

}  // namespace

NewtonPolygon newton_polygon(const CharSeries& p) { return newton_polygon(p, Slope::infinity()); }

NewtonPolygon newton_polygon(const CharSeries& p, const Slope& cutoff) {
  if (p.coeffs.empty() || p.coeff(0).coeff(0) == 0)
    throw ParameterError("constant term of the series must be a unit");

  std::vector<HullPoint> pts;
  for (std::size_t n = 0; n < p.coeffs.size() && n <= p.dim; ++n) {
    const FpPoly& c = p.coeffs[n];
    if (p.exact()) {
      if (c.is_zero()) continue;
      pts.push_back({static_cast<std::int64_t>(n), c.valuation().value(), true});
    } else {
      const SeriesValuation v = p.valuation(n);
      pts.push_back({static_cast<std::int64_t>(n), v.value, v.exact});
    }
  }

  std::vector<HullPoint> hull;
  for (const auto& pt : pts) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), pt) <= 0) hull.pop_back();
    hull.push_back(pt);
  }

  NewtonPolygon poly;
  poly.dim = p.dim;
  poly.vertices.push_back({hull[0].n, hull[0].v});
  for (std::size_t i = 1; i < hull.size(); ++i) {
    const Slope s(Rational(hull[i].v - hull[i - 1].v, hull[i].n - hull[i - 1].n));
    if (!(s < cutoff)) break;
    if (!hull[i].exact) {
      const std::size_t hint = suggest_precision(p, cutoff);
      throw PrecisionError("insufficient precision " + std::to_string(p.precision) +
                               ": coefficient of X^" + std::to_string(hull[i].n) +
                               " is only known to have valuation >= " +
                               std::to_string(hull[i].v) + "; retry with precision >= " +
                               std::to_string(hint),
                           hint);
    }
    poly.segments.push_back({s, hull[i].n - hull[i - 1].n});
    poly.vertices.push_back({hull[i].n, hull[i].v});
  }

  if (p.exact()) {
    const auto tail = static_cast<std::int64_t>(p.dim) - hull.back().n;
    if (tail > 0) poly.segments.push_back({Slope::infinity(), tail});
  } else {
    poly.certified_below = cutoff;
  }
  return poly;
}

std::int64_t slope_multiplicity(const NewtonPolygon& polygon, const Slope& alpha) {
  if (polygon.certified_below && !(alpha < *polygon.certified_below))
    throw PrecisionError("slope " + alpha.to_string() + " is outside the certified window", 0);
  for (const auto& s : polygon.segments)
    if (s.slope == alpha) return s.width;
  return 0;
}

bool window_agreement(const NewtonPolygon& a, const NewtonPolygon& b, const Slope& cutoff) {
  return a.below(cutoff) == b.below(cutoff);
}

}  // namespace glissando
