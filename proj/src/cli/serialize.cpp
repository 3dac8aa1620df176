#include "glissando/cli/serialize.hpp"

#include <sstream>

#include "glissando/errors.hpp"

namespace glissando::cli {

json to_json(const FpPoly& f) { return json(f.coeffs()); }

FpPoly poly_from_json(const json& j, std::uint32_t p) {
  std::vector<std::uint32_t> c;
  for (const auto& x : j) {
    const auto v = x.get<std::int64_t>();
    if (v < 0 || v >= static_cast<std::int64_t>(p))
      throw ParameterError("coefficient out of range for F_" + std::to_string(p));
    c.push_back(static_cast<std::uint32_t>(v));
  }
  FpPoly f(p, c);
  if (f.coeffs().size() != c.size()) throw ParameterError("coefficient list has trailing zeros");
  return f;
}

json to_json(const UMatrix& u) {
  json rows = json::array();
  for (std::size_t i = 0; i < u.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < u.dim(); ++j) row.push_back(to_json(u.entries(i, j)));
    rows.push_back(std::move(row));
  }
  return {{"p", u.params.p}, {"q", u.params.q}, {"k", u.k}, {"entries", std::move(rows)}};
}

std::string to_text(const UMatrix& u) {
  std::vector<std::vector<std::string>> cells(u.dim(), std::vector<std::string>(u.dim()));
  std::size_t width = 1;
  for (std::size_t i = 0; i < u.dim(); ++i)
    for (std::size_t j = 0; j < u.dim(); ++j) {
      const FpPoly& e = u.entries(i, j);
      std::string s;
      if (e.is_zero()) {
        s = "0";
      } else if (e.is_monomial()) {
        const auto d = static_cast<std::size_t>(e.degree());
        s = std::to_string(e.coeff(d));
        if (d > 0) s += "*t^" + std::to_string(d);
      } else {
        s = "(" + e.to_string() + ")";
      }
      width = std::max(width, s.size());
      cells[i][j] = std::move(s);
    }
  std::ostringstream os;
  os << "U^(" << u.k << ") for p=" << u.params.p << " q=" << u.params.q << ", " << u.dim() << "x"
     << u.dim() << '\n';
  for (const auto& row : cells) {
    os << '[';
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) os << ' ';
      os << std::string(width - row[j].size(), ' ') << row[j];
    }
    os << "]\n";
  }
  return os.str();
}

json to_json(const CharSeries& s, const Params& params, int k) {
  json coeffs = json::array();
  for (const auto& c : s.coeffs) coeffs.push_back(to_json(c));
  return {{"p", params.p},
          {"q", params.q},
          {"k", k},
          {"dim", s.dim},
          {"precision", s.exact() ? json(nullptr) : json(s.precision)},
          {"degree_bound", s.degree_bound},
          {"coeffs", std::move(coeffs)}};
}

CharSeries series_from_json(const json& j) {
  CharSeries s;
  s.p = j.at("p").get<std::uint32_t>();
  s.dim = j.at("dim").get<std::size_t>();
  s.precision = j.at("precision").is_null() ? kExact : j.at("precision").get<std::size_t>();
  s.degree_bound = j.at("degree_bound").get<std::size_t>();
  for (const auto& c : j.at("coeffs")) s.coeffs.push_back(poly_from_json(c, s.p));
  if (s.coeffs.size() != s.dim + 1) throw ParameterError("series has the wrong number of coefficients");
  return s;
}

json to_json(const NewtonPolygon& poly) {
  json segs = json::array();
  for (const auto& s : poly.segments) segs.push_back({{"slope", s.slope.to_string()}, {"width", s.width}});
  json j = {{"dim", poly.dim}, {"segments", std::move(segs)}};
  if (poly.certified_below) j["certified_below"] = poly.certified_below->to_string();
  return j;
}

json to_json(const DivisorList& d) {
  json values = json::array();
  for (const auto& v : d.values) values.push_back(v.to_string());
  return {{"dims", {d.rows, d.cols}}, {"precision", d.precision}, {"divisors", std::move(values)}};
}

json to_json(const SweepReport& r) {
  return {{"target", r.target},     {"checks", r.checks},     {"ok", r.ok()},
          {"failures", r.failures}, {"warnings", r.warnings}, {"notes", r.notes}};
}

json to_json(const PeriodReport& r) {
  auto seg = [](const std::optional<SlopeSegment>& s) -> json {
    if (!s) return nullptr;
    return {{"slope", s->slope.to_string()}, {"width", s->width}};
  };
  json entries = json::array();
  for (const auto& e : r.entries) entries.push_back({{"k", e.k}, {"slope", seg(e.slope)}});
  json cycle = json::array();
  for (const auto& c : r.cycle()) cycle.push_back(seg(c));
  return {{"p", r.params.p},
          {"q", r.params.q},
          {"n", r.n},
          {"k_min", r.k_min},
          {"k_max", r.k_max},
          {"entries", std::move(entries)},
          {"period", r.period ? json(*r.period) : json(nullptr)},
          {"all_absent", r.all_absent},
          {"cycle", std::move(cycle)}};
}

}  // namespace glissando::cli
