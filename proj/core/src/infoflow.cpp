#include "dephaselab/infoflow.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "dephaselab/correlate.hpp"
#include "dephaselab/error.hpp"

namespace dephaselab {

namespace {

ComplexVector qubit_vector(Complex zero, Complex one) {
  ComplexVector v(2);
  v << zero, one;
  return v;
}

IseTerms ise_from_globals(const DensityMatrix& first, const DensityMatrix& second) {
  IseTerms terms;
  terms.env_term = trace_distance(first.marginal(1), second.marginal(1));
  terms.corr_first = total_correlations(first);
  terms.corr_second = total_correlations(second);
  terms.total = terms.env_term + terms.corr_first + terms.corr_second;
  return terms;
}

}  // namespace

void validate_pair(const StatePair& pair) {
  if (pair.first.dims() != pair.second.dims()) {
    throw Error(ErrorCode::DimensionMismatch, "pair states have different dimensions");
  }
  pair.first.validate();
  pair.second.validate();
}

DensityMatrix psi_plus() { return pure_state(qubit_vector(1.0, 1.0)); }

DensityMatrix psi_minus() { return pure_state(qubit_vector(1.0, -1.0)); }

DensityMatrix psi_minus_r(double r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    std::ostringstream os;
    os << "psi_minus_r: r = " << r << " outside [0, 1]";
    throw Error(ErrorCode::OutOfDomain, os.str());
  }
  return pure_state(qubit_vector(r, -std::sqrt(1.0 - r * r)));
}

DensityMatrix bloch_pure_state(double theta, double phi) {
  const double st = std::sin(theta);
  return from_bloch(BlochVector(st * std::cos(phi), st * std::sin(phi), std::cos(theta)));
}

std::vector<StatePair> antipodal_pairs(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1) throw Error(ErrorCode::EmptyInput, "antipodal grid is empty");
  std::vector<StatePair> pairs;
  const double pi = std::numbers::pi;
  for (int i = 0; i < n_theta; ++i) {
    // theta in (0, pi/2]; the pole theta = 0 is a single direction.
    const double theta = 0.5 * pi * (i + 1) / n_theta;
    for (int j = 0; j < n_phi; ++j) {
      const double phi = pi * j / n_phi;
      std::ostringstream label;
      label << "antipodal(theta=" << theta << ",phi=" << phi << ")";
      pairs.push_back({bloch_pure_state(theta, phi), bloch_pure_state(pi - theta, phi + pi),
                       label.str()});
    }
  }
  pairs.push_back({bloch_pure_state(0.0, 0.0), bloch_pure_state(pi, 0.0), "antipodal(theta=0)"});
  return pairs;
}

double system_distance(const DephasingModel& model, const StatePair& pair, double t, int steps) {
  const Propagation p = propagate(model, t, steps);
  return trace_distance(reduced_state(model, pair.first, p), reduced_state(model, pair.second, p));
}

double delta_S(const DephasingModel& model, const StatePair& pair, double s, double t, int steps) {
  if (!(s >= 0.0 && s <= t)) {
    std::ostringstream os;
    os << "delta_S needs 0 <= s <= t (s = " << s << ", t = " << t << ")";
    throw Error(ErrorCode::BadInterval, os.str());
  }
  return system_distance(model, pair, t, steps) - system_distance(model, pair, s, steps);
}

IseTerms ise_terms(const DephasingModel& model, const StatePair& pair, double s, int steps) {
  if (!(s >= 0.0)) throw Error(ErrorCode::BadInterval, "ise_terms needs s >= 0");
  const Propagation p = propagate(model, s, steps);
  return ise_from_globals(global_state(model, pair.first, p), global_state(model, pair.second, p));
}

double positive_increments(const std::vector<double>& distances) {
  double sum = 0.0;
  for (std::size_t k = 1; k < distances.size(); ++k) {
    sum += std::max(0.0, distances[k] - distances[k - 1]);
  }
  return sum;
}

BlpResult blp_measure(const DephasingModel& model, const std::vector<StatePair>& candidates,
                      const std::vector<double>& grid, int steps) {
  if (candidates.empty()) throw Error(ErrorCode::EmptyInput, "no candidate pairs");
  if (grid.size() < 2) throw Error(ErrorCode::EmptyInput, "BLP grid needs at least two points");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw Error(ErrorCode::BadInterval, "BLP grid not ascending");
  }

  std::vector<Propagation> props;
  props.reserve(grid.size());
  for (double t : grid) props.push_back(propagate(model, t, steps));

  BlpResult best{-1.0, 0, candidates.front()};
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const StatePair& pair = candidates[i];
    std::vector<double> d;
    d.reserve(grid.size());
    for (const Propagation& p : props) {
      d.push_back(trace_distance(reduced_state(model, pair.first, p),
                                 reduced_state(model, pair.second, p)));
    }
    const double measure = positive_increments(d);
    if (measure > best.measure) {
      best.measure = measure;
      best.best_index = i;
    }
  }
  best.best_pair = candidates[best.best_index];
  return best;
}

InfoFlowReport info_flow_report(const DephasingModel& model, const StatePair& pair,
                                const std::vector<double>& times, int steps) {
  if (times.empty()) throw Error(ErrorCode::EmptyInput, "no report times");
  InfoFlowReport report;
  report.times = times;
  for (double t : times) {
    if (!(t >= 0.0)) throw Error(ErrorCode::BadInterval, "report times must be >= 0");
    const Propagation p = propagate(model, t, steps);
    const DensityMatrix g1 = global_state(model, pair.first, p);
    const DensityMatrix g2 = global_state(model, pair.second, p);
    report.D_S.push_back(trace_distance(g1.marginal(0), g2.marginal(0)));
    const IseTerms terms = ise_from_globals(g1, g2);
    report.env_term.push_back(terms.env_term);
    report.corr_term_1.push_back(terms.corr_first);
    report.corr_term_2.push_back(terms.corr_second);
    report.I_SE.push_back(terms.total);
  }
  const std::size_t n = times.size();
  report.delta_S.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (times[j] >= times[i]) report.delta_S[i][j] = report.D_S[j] - report.D_S[i];
  return report;
}

}  // namespace dephaselab
