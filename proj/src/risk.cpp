#include "avsc/risk.hpp"

#include "avsc/util.hpp"

namespace avsc {

double RiskWeights::weight(Severity s) const {
  switch (s) {
    case Severity::Critical: return critical;
    case Severity::High: return high;
    case Severity::Medium: return medium;
    case Severity::Low: return low;
  }
  return low;
}

bool RiskWeights::valid() const {
  return low > 0.0 && critical > high && high > medium && medium > low;
}

double risk_score(Severity severity, double epss_percent, const RiskWeights& weights) {
  if (epss_percent < 0.0 || epss_percent > 100.0) {
    throw DomainError("epss_percent out of [0,100]: " +
                      util::format_trimmed(epss_percent));
  }
  return util::round_half_away(epss_percent * weights.weight(severity), 1);
}

double risk_score(Severity severity, const Epss& epss, const RiskWeights& weights) {
  return risk_score(severity, epss.percent, weights);
}

std::size_t& SeverityCounts::bucket(Severity s) {
  switch (s) {
    case Severity::Critical: return critical;
    case Severity::High: return high;
    case Severity::Medium: return medium;
    case Severity::Low: return low;
  }
  return low;
}

std::size_t SeverityCounts::bucket(Severity s) const {
  return const_cast<SeverityCounts*>(this)->bucket(s);
}

SeverityCounts severity_histogram(const std::vector<Severity>& severities) {
  SeverityCounts counts;
  for (Severity s : severities) ++counts.bucket(s);
  return counts;
}

SeverityCounts severity_histogram(const std::vector<Finding>& findings) {
  SeverityCounts counts;
  for (const Finding& f : findings) ++counts.bucket(f.severity);
  return counts;
}

SeverityCounts severity_histogram(const std::vector<DepFinding>& findings) {
  SeverityCounts counts;
  for (const DepFinding& f : findings) ++counts.bucket(f.advisory.severity);
  return counts;
}

namespace {

std::string ordinal(int n) {
  int mod100 = n % 100;
  const char* suffix = "th";
  if (mod100 < 11 || mod100 > 13) {
    switch (n % 10) {
      case 1: suffix = "st"; break;
      case 2: suffix = "nd"; break;
      case 3: suffix = "rd"; break;
      default: break;
    }
  }
  return std::to_string(n) + suffix;
}

}  // namespace

std::string format_epss(const Epss& epss) {
  if (epss.below_threshold) return "<0.1%";
  std::string out = util::format_fixed(epss.percent, 1) + "%";
  if (epss.percentile) out += " (" + ordinal(*epss.percentile) + ")";
  return out;
}

std::string format_risk(double risk, bool below_threshold) {
  if (below_threshold) return "<0.1";
  return util::format_fixed(risk, 1);
}

}  // namespace avsc
