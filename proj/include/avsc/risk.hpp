#pragma once

#include "avsc/depscan.hpp"
#include "avsc/types.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace avsc {

// Multiplicative severity weights for the EPSS-based risk score.
// Defaults are calibrated so that risk = round1(epss * weight) reproduces
// every published (severity, EPSS, risk) row; Low is an extrapolated step.
struct RiskWeights {
  double critical = 0.94;
  double high = 0.73;
  double medium = 0.55;
  double low = 0.36;

  double weight(Severity s) const;
  bool valid() const;  // positive and strictly decreasing

  friend bool operator==(const RiskWeights&, const RiskWeights&) = default;
};

// round1(epss_percent * weight(severity)), half away from zero.
// Throws DomainError when epss_percent is outside [0, 100].
double risk_score(Severity severity, double epss_percent,
                  const RiskWeights& weights = {});
// The "<0.1" marker scores with its carried 0.05 numeric value.
double risk_score(Severity severity, const Epss& epss,
                  const RiskWeights& weights = {});

struct SeverityCounts {
  std::size_t critical = 0;
  std::size_t high = 0;
  std::size_t medium = 0;
  std::size_t low = 0;

  std::size_t total() const { return critical + high + medium + low; }
  std::size_t& bucket(Severity s);
  std::size_t bucket(Severity s) const;

  friend bool operator==(const SeverityCounts&, const SeverityCounts&) = default;
};

SeverityCounts severity_histogram(const std::vector<Severity>& severities);
SeverityCounts severity_histogram(const std::vector<Finding>& findings);
SeverityCounts severity_histogram(const std::vector<DepFinding>& findings);

// Column renderers: "93.5% (99th)", "<0.1%" / "87.9", "<0.1".
std::string format_epss(const Epss& epss);
std::string format_risk(double risk, bool below_threshold);

}  // namespace avsc
