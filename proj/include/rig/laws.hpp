#pragma once

// Discrete degree laws on {0, 1, 2, ...} and nonnegative weight laws.
//
// DegreeLaw variants: finite pmf, Poisson(lambda), mixed Poisson Po(X) for a
// WeightLaw X, a shift by an integer offset, and finite mixtures (mixtures
// arise from size-biasing a shifted law). WeightLaw variants: point mass,
// finite support, exponential, gamma (the size-biased exponential), Pareto.
//
// Moments are returned as std::optional: nullopt means infinite or not
// available in closed form.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>

#include "combinatorics.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace rig {

inline double poisson_pmf(double lambda, long long k) {
  if (k < 0) return 0.0;
  if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(static_cast<double>(k) * std::log(lambda) - lambda - std::lgamma(static_cast<double>(k) + 1.0));
}

inline long long sample_poisson(Rng& rng, double mean) {
  if (mean <= 0.0) return 0;
  boost::random::poisson_distribution<long long, double> dist(mean);
  return dist(rng);
}

inline std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// ---------------------------------------------------------------------------

class WeightLaw {
 public:
  struct PointMass { double x; };
  struct FiniteSupport { std::vector<std::pair<double, double>> atoms; std::vector<double> cumulative; };
  struct Exponential { double rate; };
  struct Gamma { double shape, rate; };
  struct Pareto { double shape, scale; };
  using Variant = std::variant<PointMass, FiniteSupport, Exponential, Gamma, Pareto>;

  static WeightLaw point_mass(double x) {
    require(std::isfinite(x) && x >= 0.0, "point mass weight must be finite and >= 0");
    return WeightLaw(PointMass{x});
  }
  // (value, probability) pairs; probabilities must sum to 1 within 1e-12.
  static WeightLaw finite(std::vector<std::pair<double, double>> atoms) {
    require(!atoms.empty(), "finite weight law needs at least one atom");
    double total = 0.0;
    for (auto [x, p] : atoms) {
      require(std::isfinite(x) && x >= 0.0, "weight atoms must be >= 0");
      require(p >= 0.0, "weight probabilities must be >= 0");
      total += p;
    }
    require(std::abs(total - 1.0) <= 1e-12, "weight probabilities must sum to 1");
    std::sort(atoms.begin(), atoms.end());
    FiniteSupport f{std::move(atoms), {}};
    double c = 0.0;
    for (auto [x, p] : f.atoms) f.cumulative.push_back(c += p);
    return WeightLaw(std::move(f));
  }
  static WeightLaw exponential(double rate) {
    require(rate > 0.0 && std::isfinite(rate), "exponential rate must be > 0");
    return WeightLaw(Exponential{rate});
  }
  static WeightLaw gamma(double shape, double rate) {
    require(shape > 0.0 && rate > 0.0, "gamma shape and rate must be > 0");
    return WeightLaw(Gamma{shape, rate});
  }
  // Density a s^a x^{-a-1} on [s, inf); the mean is finite iff a > 1.
  static WeightLaw pareto(double shape, double scale) {
    require(shape > 0.0 && scale > 0.0, "pareto shape and scale must be > 0");
    return WeightLaw(Pareto{shape, scale});
  }

  const Variant& variant() const { return v_; }

  std::optional<double> moment(int m) const {
    if (m == 0) return 1.0;
    return std::visit(
        [m](const auto& w) -> std::optional<double> {
          using T = std::decay_t<decltype(w)>;
          if constexpr (std::is_same_v<T, PointMass>) {
            return std::pow(w.x, m);
          } else if constexpr (std::is_same_v<T, FiniteSupport>) {
            double s = 0.0;
            for (auto [x, p] : w.atoms) s += p * std::pow(x, m);
            return s;
          } else if constexpr (std::is_same_v<T, Exponential>) {
            return comb::factorial(m) / std::pow(w.rate, m);
          } else if constexpr (std::is_same_v<T, Gamma>) {
            double r = 1.0;
            for (int i = 0; i < m; ++i) r *= (w.shape + i) / w.rate;
            return r;
          } else {
            if (static_cast<double>(m) >= w.shape) return std::nullopt;
            return w.shape * std::pow(w.scale, m) / (w.shape - m);
          }
        },
        v_);
  }

  double mean() const {
    auto m = moment(1);
    if (!m) throw moment_unavailable("weight law " + describe() + " has infinite mean");
    return *m;
  }

  std::optional<double> max_value() const {
    if (auto* p = std::get_if<PointMass>(&v_)) return p->x;
    if (auto* f = std::get_if<FiniteSupport>(&v_)) return f->atoms.back().first;
    return std::nullopt;
  }

  double sample(Rng& rng) const {
    return std::visit(
        [&rng](const auto& w) -> double {
          using T = std::decay_t<decltype(w)>;
          if constexpr (std::is_same_v<T, PointMass>) {
            return w.x;
          } else if constexpr (std::is_same_v<T, FiniteSupport>) {
            const double u = rng.uniform01();
            auto it = std::upper_bound(w.cumulative.begin(), w.cumulative.end(), u);
            if (it == w.cumulative.end()) --it;
            return w.atoms[static_cast<std::size_t>(it - w.cumulative.begin())].first;
          } else if constexpr (std::is_same_v<T, Exponential>) {
            return -std::log1p(-rng.uniform01()) / w.rate;
          } else if constexpr (std::is_same_v<T, Gamma>) {
            boost::random::gamma_distribution<double> dist(w.shape, 1.0 / w.rate);
            return dist(rng);
          } else {
            return w.scale * std::pow(1.0 - rng.uniform01(), -1.0 / w.shape);
          }
        },
        v_);
  }

  // Law with density proportional to x f(x).
  WeightLaw size_biased() const {
    const double mu = mean();
    require(mu > 0.0, "cannot size-bias a zero-mean weight law");
    return std::visit(
        [mu](const auto& w) -> WeightLaw {
          using T = std::decay_t<decltype(w)>;
          if constexpr (std::is_same_v<T, PointMass>) {
            return WeightLaw::point_mass(w.x);
          } else if constexpr (std::is_same_v<T, FiniteSupport>) {
            std::vector<std::pair<double, double>> atoms;
            double total = 0.0;
            for (auto [x, p] : w.atoms)
              if (x > 0.0 && p > 0.0) atoms.emplace_back(x, x * p / mu);
            for (auto& a : atoms) total += a.second;
            for (auto& a : atoms) a.second /= total;
            return WeightLaw::finite(std::move(atoms));
          } else if constexpr (std::is_same_v<T, Exponential>) {
            return WeightLaw::gamma(2.0, w.rate);
          } else if constexpr (std::is_same_v<T, Gamma>) {
            return WeightLaw::gamma(w.shape + 1.0, w.rate);
          } else {
            return WeightLaw::pareto(w.shape - 1.0, w.scale);
          }
        },
        v_);
  }

  // Law of c X, c > 0.
  WeightLaw scaled(double c) const {
    require(c > 0.0 && std::isfinite(c), "weight scale factor must be > 0");
    return std::visit(
        [c](const auto& w) -> WeightLaw {
          using T = std::decay_t<decltype(w)>;
          if constexpr (std::is_same_v<T, PointMass>) {
            return WeightLaw::point_mass(c * w.x);
          } else if constexpr (std::is_same_v<T, FiniteSupport>) {
            auto atoms = w.atoms;
            for (auto& a : atoms) a.first *= c;
            return WeightLaw::finite(std::move(atoms));
          } else if constexpr (std::is_same_v<T, Exponential>) {
            return WeightLaw::exponential(w.rate / c);
          } else if constexpr (std::is_same_v<T, Gamma>) {
            return WeightLaw::gamma(w.shape, w.rate / c);
          } else {
            return WeightLaw::pareto(w.shape, w.scale * c);
          }
        },
        v_);
  }

  // P(Po(X) = k) = E e^{-X} X^k / k!, when available in closed form.
  std::optional<double> mixed_poisson_pmf(long long k) const {
    if (k < 0) return 0.0;
    return std::visit(
        [k](const auto& w) -> std::optional<double> {
          using T = std::decay_t<decltype(w)>;
          const double kd = static_cast<double>(k);
          if constexpr (std::is_same_v<T, PointMass>) {
            return poisson_pmf(w.x, k);
          } else if constexpr (std::is_same_v<T, FiniteSupport>) {
            double s = 0.0;
            for (auto [x, p] : w.atoms) s += p * poisson_pmf(x, k);
            return s;
          } else if constexpr (std::is_same_v<T, Exponential>) {
            // geometric: rate/(1+rate) * (1/(1+rate))^k
            return std::exp(std::log(w.rate) - (kd + 1.0) * std::log1p(w.rate));
          } else if constexpr (std::is_same_v<T, Gamma>) {
            // negative binomial with size = shape, success prob rate/(1+rate)
            return std::exp(std::lgamma(kd + w.shape) - std::lgamma(w.shape) - std::lgamma(kd + 1.0) +
                            w.shape * (std::log(w.rate) - std::log1p(w.rate)) - kd * std::log1p(w.rate));
          } else {
            return std::nullopt;
          }
        },
        v_);
  }

  std::string describe() const {
    return std::visit(
        [](const auto& w) -> std::string {
          using T = std::decay_t<decltype(w)>;
          if constexpr (std::is_same_v<T, PointMass>) {
            return "point(" + format_number(w.x) + ")";
          } else if constexpr (std::is_same_v<T, FiniteSupport>) {
            std::string s = "finite{";
            for (std::size_t i = 0; i < w.atoms.size(); ++i)
              s += (i ? "," : "") + format_number(w.atoms[i].first) + ":" + format_number(w.atoms[i].second);
            return s + "}";
          } else if constexpr (std::is_same_v<T, Exponential>) {
            return "exponential(" + format_number(w.rate) + ")";
          } else if constexpr (std::is_same_v<T, Gamma>) {
            return "gamma(" + format_number(w.shape) + "," + format_number(w.rate) + ")";
          } else {
            return "pareto(" + format_number(w.shape) + "," + format_number(w.scale) + ")";
          }
        },
        v_);
  }

 private:
  explicit WeightLaw(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

// ---------------------------------------------------------------------------

class DegreeLaw {
 public:
  struct FinitePmf;
  struct Poisson;
  struct MixedPoisson;
  struct Shifted;
  struct Mixture;
  using Variant = std::variant<FinitePmf, Poisson, MixedPoisson, Shifted, Mixture>;

  static DegreeLaw constant(long long c);
  static DegreeLaw pmf(std::vector<std::pair<long long, double>> atoms);
  static DegreeLaw poisson(double lambda);
  static DegreeLaw mixed_poisson(WeightLaw weight);
  static DegreeLaw shifted(const DegreeLaw& base, long long offset);
  static DegreeLaw mixture(std::vector<std::pair<double, DegreeLaw>> components);

  const Variant& variant() const;

  std::optional<double> pmf_at(long long k) const;
  std::optional<double> raw_moment(int j) const;
  std::optional<double> factorial_moment(int j) const;
  double mean() const {
    auto m = raw_moment(1);
    if (!m) throw moment_unavailable("degree law " + describe() + " has infinite mean");
    return *m;
  }
  long long sample(Rng& rng) const;
  long long min_value() const;
  std::optional<long long> max_value() const;
  // lambda when the law is exactly Poisson(lambda) (including Po(point mass)).
  std::optional<double> poisson_parameter() const;

  // P(Z* = k) = k P(Z = k) / E Z.
  DegreeLaw size_biased() const;
  // Z* - 1: offspring law of a non-root node in the two-type branching tree.
  DegreeLaw offspring() const { return shifted(size_biased(), -1); }

  // pmf values p[0..K] with 1 - sum < eps, or nullopt if a pmf value has no
  // closed form or the tail does not fall below eps by max_len.
  struct Table {
    std::vector<double> p;
    double deficit = 0.0;
  };
  std::optional<Table> pmf_table(double eps, std::size_t max_len = 1u << 20) const;

  std::string describe() const;

 private:
  explicit DegreeLaw(std::shared_ptr<const Variant> v) : v_(std::move(v)) {}
  std::shared_ptr<const Variant> v_;
};

struct DegreeLaw::FinitePmf {
  std::vector<std::pair<long long, double>> atoms;  // sorted by value, positive probability
  std::vector<double> cumulative;
};
struct DegreeLaw::Poisson {
  double lambda;
};
struct DegreeLaw::MixedPoisson {
  WeightLaw weight;
};
struct DegreeLaw::Shifted {
  DegreeLaw base;
  long long offset;
};
struct DegreeLaw::Mixture {
  std::vector<std::pair<double, DegreeLaw>> components;
  std::vector<double> cumulative;
};

inline const DegreeLaw::Variant& DegreeLaw::variant() const { return *v_; }

inline DegreeLaw DegreeLaw::constant(long long c) { return pmf({{c, 1.0}}); }

inline DegreeLaw DegreeLaw::pmf(std::vector<std::pair<long long, double>> atoms) {
  require(!atoms.empty(), "pmf needs at least one atom");
  double total = 0.0;
  for (auto [k, p] : atoms) {
    require(k >= 0, "pmf support must be nonnegative");
    require(p >= 0.0 && std::isfinite(p), "pmf probabilities must be >= 0");
    total += p;
  }
  require(std::abs(total - 1.0) <= 1e-12, "pmf probabilities must sum to 1 (got " + format_number(total) + ")");
  std::sort(atoms.begin(), atoms.end());
  FinitePmf f;
  for (auto [k, p] : atoms) {
    if (p == 0.0) continue;
    if (!f.atoms.empty() && f.atoms.back().first == k)
      f.atoms.back().second += p;
    else
      f.atoms.emplace_back(k, p);
  }
  double c = 0.0;
  for (auto [k, p] : f.atoms) f.cumulative.push_back(c += p);
  return DegreeLaw(std::make_shared<const Variant>(std::move(f)));
}

inline DegreeLaw DegreeLaw::poisson(double lambda) {
  require(lambda > 0.0 && std::isfinite(lambda), "poisson lambda must be > 0");
  return DegreeLaw(std::make_shared<const Variant>(Poisson{lambda}));
}

inline DegreeLaw DegreeLaw::mixed_poisson(WeightLaw weight) {
  return DegreeLaw(std::make_shared<const Variant>(MixedPoisson{std::move(weight)}));
}

inline DegreeLaw DegreeLaw::shifted(const DegreeLaw& base, long long offset) {
  if (offset == 0) return base;
  if (auto* f = std::get_if<FinitePmf>(base.v_.get())) {
    auto atoms = f->atoms;
    for (auto& a : atoms) a.first += offset;
    return pmf(std::move(atoms));
  }
  if (auto* s = std::get_if<Shifted>(base.v_.get())) return shifted(s->base, s->offset + offset);
  require(base.min_value() + offset >= 0, "shifted law would have negative support");
  return DegreeLaw(std::make_shared<const Variant>(Shifted{base, offset}));
}

inline DegreeLaw DegreeLaw::mixture(std::vector<std::pair<double, DegreeLaw>> components) {
  require(!components.empty(), "mixture needs components");
  double total = 0.0;
  for (auto& [w, l] : components) {
    require(w >= 0.0, "mixture weights must be >= 0");
    total += w;
  }
  require(std::abs(total - 1.0) <= 1e-12, "mixture weights must sum to 1");
  Mixture m;
  double c = 0.0;
  for (auto& [w, l] : components) {
    if (w == 0.0) continue;
    m.components.emplace_back(w, l);
    m.cumulative.push_back(c += w);
  }
  if (m.components.size() == 1) return m.components.front().second;
  return DegreeLaw(std::make_shared<const Variant>(std::move(m)));
}

inline std::optional<double> DegreeLaw::pmf_at(long long k) const {
  return std::visit(
      [k](const auto& d) -> std::optional<double> {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FinitePmf>) {
          auto it = std::lower_bound(d.atoms.begin(), d.atoms.end(), std::make_pair(k, -1.0));
          return (it != d.atoms.end() && it->first == k) ? it->second : 0.0;
        } else if constexpr (std::is_same_v<T, Poisson>) {
          return poisson_pmf(d.lambda, k);
        } else if constexpr (std::is_same_v<T, MixedPoisson>) {
          return d.weight.mixed_poisson_pmf(k);
        } else if constexpr (std::is_same_v<T, Shifted>) {
          return d.base.pmf_at(k - d.offset);
        } else {
          double s = 0.0;
          for (const auto& [w, l] : d.components) {
            auto p = l.pmf_at(k);
            if (!p) return std::nullopt;
            s += w * *p;
          }
          return s;
        }
      },
      *v_);
}

inline std::optional<double> DegreeLaw::raw_moment(int j) const {
  if (j == 0) return 1.0;
  return std::visit(
      [j](const auto& d) -> std::optional<double> {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FinitePmf>) {
          double s = 0.0;
          for (auto [k, p] : d.atoms) s += p * std::pow(static_cast<double>(k), j);
          return s;
        } else if constexpr (std::is_same_v<T, Poisson>) {
          double s = 0.0;
          for (int m = 1; m <= j; ++m) s += comb::stirling2(j, m) * std::pow(d.lambda, m);
          return s;
        } else if constexpr (std::is_same_v<T, MixedPoisson>) {
          double s = 0.0;
          for (int m = 1; m <= j; ++m) {
            auto wm = d.weight.moment(m);
            if (!wm) return std::nullopt;
            s += comb::stirling2(j, m) * *wm;
          }
          return s;
        } else if constexpr (std::is_same_v<T, Shifted>) {
          double s = 0.0;
          const double c = static_cast<double>(d.offset);
          for (int i = 0; i <= j; ++i) {
            auto bi = d.base.raw_moment(i);
            if (!bi) return std::nullopt;
            s += comb::binomial(j, i) * std::pow(c, j - i) * *bi;
          }
          return s;
        } else {
          double s = 0.0;
          for (const auto& [w, l] : d.components) {
            auto m = l.raw_moment(j);
            if (!m) return std::nullopt;
            s += w * *m;
          }
          return s;
        }
      },
      *v_);
}

inline std::optional<double> DegreeLaw::factorial_moment(int j) const {
  if (j == 0) return 1.0;
  if (auto* p = std::get_if<Poisson>(v_.get())) return std::pow(p->lambda, j);
  if (auto* m = std::get_if<MixedPoisson>(v_.get())) return m->weight.moment(j);
  if (auto* f = std::get_if<FinitePmf>(v_.get())) {
    double s = 0.0;
    for (auto [k, p] : f->atoms) s += p * comb::falling(static_cast<double>(k), j);
    return s;
  }
  if (auto* mix = std::get_if<Mixture>(v_.get())) {
    double s = 0.0;
    for (const auto& [w, l] : mix->components) {
      auto fm = l.factorial_moment(j);
      if (!fm) return std::nullopt;
      s += w * *fm;
    }
    return s;
  }
  double s = 0.0;
  for (int i = 1; i <= j; ++i) {
    auto r = raw_moment(i);
    if (!r) return std::nullopt;
    s += comb::stirling1_signed(j, i) * *r;
  }
  return s;
}

inline long long DegreeLaw::sample(Rng& rng) const {
  return std::visit(
      [&rng](const auto& d) -> long long {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FinitePmf>) {
          if (d.atoms.size() == 1) return d.atoms.front().first;
          const double u = rng.uniform01() * d.cumulative.back();
          auto it = std::upper_bound(d.cumulative.begin(), d.cumulative.end(), u);
          if (it == d.cumulative.end()) --it;
          return d.atoms[static_cast<std::size_t>(it - d.cumulative.begin())].first;
        } else if constexpr (std::is_same_v<T, Poisson>) {
          return sample_poisson(rng, d.lambda);
        } else if constexpr (std::is_same_v<T, MixedPoisson>) {
          return sample_poisson(rng, d.weight.sample(rng));
        } else if constexpr (std::is_same_v<T, Shifted>) {
          return d.base.sample(rng) + d.offset;
        } else {
          const double u = rng.uniform01() * d.cumulative.back();
          auto it = std::upper_bound(d.cumulative.begin(), d.cumulative.end(), u);
          if (it == d.cumulative.end()) --it;
          return d.components[static_cast<std::size_t>(it - d.cumulative.begin())].second.sample(rng);
        }
      },
      *v_);
}

inline long long DegreeLaw::min_value() const {
  return std::visit(
      [](const auto& d) -> long long {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FinitePmf>) {
          return d.atoms.front().first;
        } else if constexpr (std::is_same_v<T, Shifted>) {
          return d.base.min_value() + d.offset;
        } else if constexpr (std::is_same_v<T, Mixture>) {
          long long m = std::numeric_limits<long long>::max();
          for (const auto& c : d.components) m = std::min(m, c.second.min_value());
          return m;
        } else {
          return 0;
        }
      },
      *v_);
}

inline std::optional<long long> DegreeLaw::max_value() const {
  return std::visit(
      [](const auto& d) -> std::optional<long long> {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FinitePmf>) {
          return d.atoms.back().first;
        } else if constexpr (std::is_same_v<T, Shifted>) {
          auto m = d.base.max_value();
          if (!m) return std::nullopt;
          return *m + d.offset;
        } else if constexpr (std::is_same_v<T, Mixture>) {
          long long m = 0;
          for (const auto& c : d.components) {
            auto cm = c.second.max_value();
            if (!cm) return std::nullopt;
            m = std::max(m, *cm);
          }
          return m;
        } else if constexpr (std::is_same_v<T, MixedPoisson>) {
          auto w = d.weight.max_value();
          if (w && *w == 0.0) return 0;
          return std::nullopt;
        } else {
          return std::nullopt;
        }
      },
      *v_);
}

inline std::optional<double> DegreeLaw::poisson_parameter() const {
  if (auto* p = std::get_if<Poisson>(v_.get())) return p->lambda;
  if (auto* m = std::get_if<MixedPoisson>(v_.get()))
    if (auto* pm = std::get_if<WeightLaw::PointMass>(&m->weight.variant())) {
      if (pm->x > 0.0) return pm->x;
    }
  return std::nullopt;
}

inline DegreeLaw DegreeLaw::size_biased() const {
  const double mu = mean();
  require(mu > 0.0, "cannot size-bias zero-mean law " + describe());
  return std::visit(
      [mu, this](const auto& d) -> DegreeLaw {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FinitePmf>) {
          std::vector<std::pair<long long, double>> atoms;
          for (auto [k, p] : d.atoms)
            if (k > 0) atoms.emplace_back(k, static_cast<double>(k) * p / mu);
          double total = 0.0;
          for (auto& a : atoms) total += a.second;
          for (auto& a : atoms) a.second /= total;
          return DegreeLaw::pmf(std::move(atoms));
        } else if constexpr (std::is_same_v<T, Poisson>) {
          return DegreeLaw::shifted(*this, 1);
        } else if constexpr (std::is_same_v<T, MixedPoisson>) {
          return DegreeLaw::shifted(DegreeLaw::mixed_poisson(d.weight.size_biased()), 1);
        } else if constexpr (std::is_same_v<T, Shifted>) {
          if (d.offset > 0) {
            // (Y + c)* is Y* + c w.p. EY/(EY + c) and Y + c w.p. c/(EY + c).
            const double ey = d.base.mean();
            const double c = static_cast<double>(d.offset);
            if (ey == 0.0) return *this;
            return DegreeLaw::mixture({{ey / (ey + c), DegreeLaw::shifted(d.base.size_biased(), d.offset)},
                                       {c / (ey + c), *this}});
          }
          auto table = pmf_table(0.0, 1u << 16);
          if (!table || table->deficit > 0.0)
            throw moment_unavailable("size-biasing " + describe() + " is not supported");
          std::vector<std::pair<long long, double>> atoms;
          for (std::size_t k = 0; k < table->p.size(); ++k)
            if (table->p[k] > 0.0) atoms.emplace_back(static_cast<long long>(k), table->p[k]);
          double total = 0.0;
          for (auto& a : atoms) total += a.second;
          for (auto& a : atoms) a.second /= total;
          return DegreeLaw::pmf(std::move(atoms)).size_biased();
        } else {
          std::vector<std::pair<double, DegreeLaw>> comps;
          for (const auto& [w, l] : d.components) {
            const double m = l.mean();
            if (m > 0.0) comps.emplace_back(w * m / mu, l.size_biased());
          }
          double total = 0.0;
          for (auto& c : comps) total += c.first;
          for (auto& c : comps) c.first /= total;
          return DegreeLaw::mixture(std::move(comps));
        }
      },
      *v_);
}

inline std::optional<DegreeLaw::Table> DegreeLaw::pmf_table(double eps, std::size_t max_len) const {
  Table t;
  const auto hi = max_value();
  double cum = 0.0;
  for (std::size_t k = 0; k < max_len; ++k) {
    auto p = pmf_at(static_cast<long long>(k));
    if (!p) return std::nullopt;
    t.p.push_back(*p);
    cum += *p;
    if (hi && static_cast<long long>(k) >= *hi) {
      t.deficit = 0.0;
      return t;
    }
    if (1.0 - cum < eps && k >= static_cast<std::size_t>(std::max<long long>(0, min_value()))) {
      t.deficit = std::max(0.0, 1.0 - cum);
      return t;
    }
  }
  return std::nullopt;
}

inline std::string DegreeLaw::describe() const {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, FinitePmf>) {
          std::string s = "pmf{";
          for (std::size_t i = 0; i < d.atoms.size(); ++i)
            s += (i ? "," : "") + std::to_string(d.atoms[i].first) + ":" + format_number(d.atoms[i].second);
          return s + "}";
        } else if constexpr (std::is_same_v<T, Poisson>) {
          return "poisson(" + format_number(d.lambda) + ")";
        } else if constexpr (std::is_same_v<T, MixedPoisson>) {
          return "mixed-poisson(" + d.weight.describe() + ")";
        } else if constexpr (std::is_same_v<T, Shifted>) {
          return "shifted(" + d.base.describe() + "," + (d.offset > 0 ? "+" : "") + std::to_string(d.offset) + ")";
        } else {
          std::string s = "mixture{";
          for (std::size_t i = 0; i < d.components.size(); ++i)
            s += (i ? "," : "") + format_number(d.components[i].first) + ":" + d.components[i].second.describe();
          return s + "}";
        }
      },
      *v_);
}

}  // namespace rig
