#include "fermikit/region.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fermikit/errors.hpp"

namespace fermikit {

namespace {

double parse_bound(const std::string& s) {
  if (s == "inf" || s == "+inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DomainError("region: cannot parse bound '" + s + "'");
  }
  if (used != s.size()) throw DomainError("region: cannot parse bound '" + s + "'");
  return v;
}

std::string format_bound(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

RegionSet::RegionSet(std::vector<Interval> intervals) {
  for (const auto& iv : intervals) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi) || iv.lo > iv.hi)
      throw DomainError("region: interval bounds must satisfy lo <= hi");
  }
  std::sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const auto& iv : intervals) {
    if (iv.lo == iv.hi) continue;
    if (!ivs_.empty() && iv.lo <= ivs_.back().hi) ivs_.back().hi = std::max(ivs_.back().hi, iv.hi);
    else ivs_.push_back(iv);
  }
}

RegionSet RegionSet::real_line() { return RegionSet({Interval{}}); }
RegionSet RegionSet::below(double s) { return RegionSet({Interval{-HUGE_VAL, s}}); }
RegionSet RegionSet::above(double s) { return RegionSet({Interval{s, HUGE_VAL}}); }

RegionSet RegionSet::parse(const std::string& text) {
  std::vector<Interval> out;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    const auto colon = piece.find(':', piece.front() == '-' ? 1 : 0);
    if (colon == std::string::npos) throw DomainError("region: expected lo:hi, got '" + piece + "'");
    out.push_back({parse_bound(piece.substr(0, colon)), parse_bound(piece.substr(colon + 1))});
  }
  return RegionSet(std::move(out));
}

bool RegionSet::contains(double x) const {
  return std::any_of(ivs_.begin(), ivs_.end(), [x](const Interval& iv) { return x >= iv.lo && x <= iv.hi; });
}

bool RegionSet::is_real_line() const {
  return ivs_.size() == 1 && std::isinf(ivs_[0].lo) && std::isinf(ivs_[0].hi);
}

std::vector<Interval> RegionSet::complement_within(double box) const {
  std::vector<Interval> out;
  double cursor = -box;
  for (const auto& iv : ivs_) {
    if (iv.lo > cursor) out.push_back({cursor, std::min(iv.lo, box)});
    cursor = std::max(cursor, iv.hi);
    if (cursor >= box) break;
  }
  if (cursor < box) out.push_back({cursor, box});
  out.erase(std::remove_if(out.begin(), out.end(), [](const Interval& iv) { return !(iv.hi > iv.lo); }),
            out.end());
  return out;
}

std::string RegionSet::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < ivs_.size(); ++i) {
    if (i) s += ",";
    s += format_bound(ivs_[i].lo) + ":" + format_bound(ivs_[i].hi);
  }
  return s.empty() ? "empty" : s;
}

QuadratureGrid region_grid(const std::vector<Interval>& intervals, double panel_width, int order) {
  std::vector<QuadratureGrid> parts;
  for (const auto& iv : intervals) {
    if (std::isinf(iv.lo) || std::isinf(iv.hi)) throw DomainError("region_grid: intervals must be finite");
    const int panels = std::max(1, static_cast<int>(std::ceil((iv.hi - iv.lo) / panel_width)));
    parts.push_back(composite_grid(iv.lo, iv.hi, panels, order));
  }
  return concat(parts);
}

}  // namespace fermikit
