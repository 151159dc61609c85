#pragma once

#include <Eigen/Core>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <vector>

#include "ergomean/rng.hpp"

namespace ergomean {

// Compact abelian group with an invariant metric, a Haar sampler, and the
// ergodic translation tau(h) = h + g realized by an orbit cursor. Quadrature
// grids are deterministic (a lattice on the torus, full enumeration on
// cyclic groups), so every integral estimate is reproducible.
template <typename G>
concept KroneckerSystem =
    requires(const G& g, const typename G::Element& a, const typename G::Element& b,
             Rng& rng, std::int64_t n, double eta) {
      { g.identity() } -> std::convertible_to<typename G::Element>;
      { g.add(a, b) } -> std::convertible_to<typename G::Element>;
      { g.negate(a) } -> std::convertible_to<typename G::Element>;
      { g.metric(a, b) } -> std::convertible_to<double>;
      { g.haar(rng) } -> std::convertible_to<typename G::Element>;
      { g.is_ergodic() } -> std::convertible_to<bool>;
      { g.quadrature_grid(n) } -> std::convertible_to<std::vector<typename G::Element>>;
      { g.neighborhood_grid(eta, n) } -> std::convertible_to<std::vector<typename G::Element>>;
      { g.neighborhood_measure(eta) } -> std::convertible_to<double>;
      { g.orbit_cursor(a) };
      { g.describe() } -> std::convertible_to<std::string>;
    };

// The canonical badly-approximable rotation (sqrt(5) - 1) / 2.
inline double golden_rotation() { return (std::sqrt(5.0) - 1.0) / 2.0; }

// d-torus [0,1)^d translated by a fixed rotation vector. The metric is the
// max over coordinates of the wrap-around distance, which is shift
// invariant. Rational independence of (1, alpha_1, ..., alpha_d) is not
// decidable in floating point, so ergodicity is a caller assertion recorded
// here and echoed into run metadata.
class TorusRotation {
 public:
  using Element = Eigen::VectorXd;

  TorusRotation(Eigen::VectorXd alpha, bool assume_ergodic);

  Eigen::Index dim() const { return alpha_.size(); }
  const Eigen::VectorXd& rotation() const { return alpha_; }
  bool is_ergodic() const { return ergodic_; }

  Element identity() const { return Element::Zero(alpha_.size()); }
  Element add(const Element& a, const Element& b) const;
  Element negate(const Element& a) const;
  double metric(const Element& a, const Element& b) const;
  Element haar(Rng& rng) const;

  // Midpoint lattice with roughly target_size points in total.
  std::vector<Element> quadrature_grid(std::int64_t target_size) const;

  // Symmetric midpoint grid over the metric ball of radius
  // min(eta, eta^{1/d})/2 about the identity (so both the measure and the
  // diameter of the neighborhood stay below eta).
  std::vector<Element> neighborhood_grid(double eta, std::int64_t samples) const;
  double neighborhood_measure(double eta) const;

  std::string describe() const;

  // Streaming orbit with Kahan-compensated accumulation: the emitted phase
  // stays within ~1e-14 of start + n * alpha (mod 1) over millions of steps
  // instead of drifting linearly.
  class OrbitCursor {
   public:
    const Element& current() const { return x_; }
    void advance();

   private:
    friend class TorusRotation;
    OrbitCursor(Element start, Eigen::VectorXd alpha);
    Element x_;
    Eigen::VectorXd comp_;
    Eigen::VectorXd alpha_;
  };
  OrbitCursor orbit_cursor(const Element& start) const;

  static double wrap01(double v);

 private:
  Element wrap(Element v) const;
  Eigen::VectorXd alpha_;
  bool ergodic_;
};

// Integers mod `order` shifted by a fixed generator. Ergodic exactly when
// gcd(generator, order) = 1, which unlike the torus case is decidable.
class CyclicGroup {
 public:
  using Element = std::int64_t;

  CyclicGroup(std::int64_t order, std::int64_t generator);

  std::int64_t order() const { return order_; }
  std::int64_t generator() const { return generator_; }
  bool is_ergodic() const { return ergodic_; }

  Element identity() const { return 0; }
  Element add(Element a, Element b) const { return normalize(a + b); }
  Element negate(Element a) const { return normalize(-a); }
  double metric(Element a, Element b) const;
  Element haar(Rng& rng) const { return rng.uniform_int(order_); }

  // Exact enumeration of the whole group; target_size is ignored.
  std::vector<Element> quadrature_grid(std::int64_t) const;

  // Residues within wrap distance eta/2 of the identity; the whole group
  // once eta >= 1 (the caller should treat that as a degenerate mollifier).
  std::vector<Element> neighborhood_grid(double eta, std::int64_t) const;
  double neighborhood_measure(double eta) const;

  std::string describe() const;

  class OrbitCursor {
   public:
    const Element& current() const { return x_; }
    void advance() { x_ = (x_ + step_) % modulus_; }

   private:
    friend class CyclicGroup;
    OrbitCursor(Element start, Element step, Element modulus)
        : x_(start), step_(step), modulus_(modulus) {}
    Element x_;
    Element step_;
    Element modulus_;
  };
  OrbitCursor orbit_cursor(Element start) const {
    return OrbitCursor(normalize(start), generator_, order_);
  }

 private:
  Element normalize(Element a) const {
    Element r = a % order_;
    return r < 0 ? r + order_ : r;
  }
  std::int64_t order_;
  std::int64_t generator_;
  bool ergodic_;
};

// First n orbit points [start, tau(start), ..., tau^{n-1}(start)].
template <KroneckerSystem G>
std::vector<typename G::Element> orbit(const G& system,
                                       const typename G::Element& start,
                                       std::int64_t n) {
  if (n < 1) throw std::invalid_argument("orbit: n must be >= 1");
  std::vector<typename G::Element> out;
  out.reserve(static_cast<std::size_t>(n));
  auto cursor = system.orbit_cursor(start);
  out.push_back(cursor.current());
  for (std::int64_t i = 1; i < n; ++i) {
    cursor.advance();
    out.push_back(cursor.current());
  }
  return out;
}

}  // namespace ergomean
