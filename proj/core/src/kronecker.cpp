#include "ergomean/kronecker.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ergomean {

double TorusRotation::wrap01(double v) {
  double r = v - std::floor(v);
  if (r >= 1.0) r -= 1.0;  // floor rounding at the boundary
  return r;
}

TorusRotation::Element TorusRotation::wrap(Element v) const {
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = wrap01(v[i]);
  return v;
}

TorusRotation::TorusRotation(Eigen::VectorXd alpha, bool assume_ergodic)
    : alpha_(std::move(alpha)), ergodic_(assume_ergodic) {
  if (alpha_.size() < 1) {
    throw std::invalid_argument("TorusRotation: rotation vector must be non-empty");
  }
  if (!alpha_.allFinite()) {
    throw std::invalid_argument("TorusRotation: non-finite rotation");
  }
  alpha_ = wrap(alpha_);
}

TorusRotation::Element TorusRotation::add(const Element& a, const Element& b) const {
  if (a.size() != dim() || b.size() != dim()) {
    throw std::invalid_argument("TorusRotation: wrong element dimension");
  }
  return wrap(a + b);
}

TorusRotation::Element TorusRotation::negate(const Element& a) const {
  if (a.size() != dim()) throw std::invalid_argument("TorusRotation: wrong element dimension");
  return wrap(-a);
}

double TorusRotation::metric(const Element& a, const Element& b) const {
  if (a.size() != dim() || b.size() != dim()) {
    throw std::invalid_argument("TorusRotation: wrong element dimension");
  }
  double d = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double raw = std::abs(wrap01(a[i]) - wrap01(b[i]));
    d = std::max(d, std::min(raw, 1.0 - raw));
  }
  return d;
}

TorusRotation::Element TorusRotation::haar(Rng& rng) const {
  Element e(dim());
  for (Eigen::Index i = 0; i < e.size(); ++i) e[i] = rng.uniform01();
  return e;
}

std::vector<TorusRotation::Element> TorusRotation::quadrature_grid(
    std::int64_t target_size) const {
  if (target_size < 1) {
    throw std::invalid_argument("TorusRotation: quadrature size must be >= 1");
  }
  const auto d = dim();
  const std::int64_t per_axis = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::llround(
             std::pow(static_cast<double>(target_size), 1.0 / static_cast<double>(d)))));
  std::vector<Element> grid;
  grid.reserve(static_cast<std::size_t>(std::pow(per_axis, d)));
  Element point = Element::Zero(d);
  std::vector<std::int64_t> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    for (Eigen::Index i = 0; i < d; ++i) {
      point[i] = (static_cast<double>(idx[static_cast<std::size_t>(i)]) + 0.5) /
                 static_cast<double>(per_axis);
    }
    grid.push_back(point);
    Eigen::Index carry = d - 1;
    while (carry >= 0) {
      if (++idx[static_cast<std::size_t>(carry)] < per_axis) break;
      idx[static_cast<std::size_t>(carry)] = 0;
      --carry;
    }
    if (carry < 0) break;
  }
  return grid;
}

std::vector<TorusRotation::Element> TorusRotation::neighborhood_grid(
    double eta, std::int64_t samples) const {
  if (!(eta > 0.0)) throw std::invalid_argument("TorusRotation: eta must be > 0");
  if (samples < 1) throw std::invalid_argument("TorusRotation: samples must be >= 1");
  const auto d = dim();
  const double width =
      std::min(1.0, std::min(eta, std::pow(eta, 1.0 / static_cast<double>(d))));
  const double radius = 0.5 * width;
  const std::int64_t per_axis = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::llround(
             std::pow(static_cast<double>(samples), 1.0 / static_cast<double>(d)))));
  std::vector<Element> grid;
  Element point(d);
  std::vector<std::int64_t> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    for (Eigen::Index i = 0; i < d; ++i) {
      const double offset =
          -radius + (static_cast<double>(idx[static_cast<std::size_t>(i)]) + 0.5) *
                        (2.0 * radius / static_cast<double>(per_axis));
      point[i] = wrap01(offset);
    }
    grid.push_back(point);
    Eigen::Index carry = d - 1;
    while (carry >= 0) {
      if (++idx[static_cast<std::size_t>(carry)] < per_axis) break;
      idx[static_cast<std::size_t>(carry)] = 0;
      --carry;
    }
    if (carry < 0) break;
  }
  return grid;
}

double TorusRotation::neighborhood_measure(double eta) const {
  if (!(eta > 0.0)) throw std::invalid_argument("TorusRotation: eta must be > 0");
  const auto d = dim();
  const double width =
      std::min(1.0, std::min(eta, std::pow(eta, 1.0 / static_cast<double>(d))));
  return std::pow(width, static_cast<double>(d));
}

std::string TorusRotation::describe() const {
  std::ostringstream os;
  os << "torus:" << dim() << " alpha=[";
  for (Eigen::Index i = 0; i < alpha_.size(); ++i) {
    if (i) os << ",";
    os << alpha_[i];
  }
  os << "]" << (ergodic_ ? " (ergodic asserted)" : " (not asserted ergodic)");
  return os.str();
}

TorusRotation::OrbitCursor::OrbitCursor(Element start, Eigen::VectorXd alpha)
    : x_(std::move(start)), comp_(Eigen::VectorXd::Zero(alpha.size())),
      alpha_(std::move(alpha)) {}

void TorusRotation::OrbitCursor::advance() {
  for (Eigen::Index i = 0; i < x_.size(); ++i) {
    const double y = alpha_[i] - comp_[i];
    const double t = x_[i] + y;
    comp_[i] = (t - x_[i]) - y;
    x_[i] = t;
    if (x_[i] >= 1.0) x_[i] -= 1.0;  // exact for values in [1, 2)
    if (x_[i] < 0.0) x_[i] += 1.0;
  }
}

TorusRotation::OrbitCursor TorusRotation::orbit_cursor(const Element& start) const {
  if (start.size() != dim()) {
    throw std::invalid_argument("TorusRotation: wrong start dimension");
  }
  return OrbitCursor(wrap(start), alpha_);
}

CyclicGroup::CyclicGroup(std::int64_t order, std::int64_t generator)
    : order_(order), generator_(0), ergodic_(false) {
  if (order < 1) throw std::invalid_argument("CyclicGroup: order must be >= 1");
  generator_ = normalize(generator);
  ergodic_ = std::gcd(generator_, order_) == 1;
}

double CyclicGroup::metric(Element a, Element b) const {
  const Element k = normalize(a - b);
  return static_cast<double>(std::min(k, order_ - k)) / static_cast<double>(order_);
}

std::vector<CyclicGroup::Element> CyclicGroup::quadrature_grid(std::int64_t) const {
  std::vector<Element> grid(static_cast<std::size_t>(order_));
  for (std::int64_t i = 0; i < order_; ++i) grid[static_cast<std::size_t>(i)] = i;
  return grid;
}

std::vector<CyclicGroup::Element> CyclicGroup::neighborhood_grid(double eta,
                                                                 std::int64_t) const {
  if (!(eta > 0.0)) throw std::invalid_argument("CyclicGroup: eta must be > 0");
  std::vector<Element> grid;
  for (std::int64_t r = 0; r < order_; ++r) {
    if (eta >= 1.0 || metric(r, 0) < 0.5 * eta) grid.push_back(r);
  }
  return grid;
}

double CyclicGroup::neighborhood_measure(double eta) const {
  return static_cast<double>(neighborhood_grid(eta, 1).size()) /
         static_cast<double>(order_);
}

std::string CyclicGroup::describe() const {
  std::ostringstream os;
  os << "cyclic:" << order_ << " generator=" << generator_
     << (ergodic_ ? " (ergodic)" : " (not ergodic)");
  return os.str();
}

}  // namespace ergomean
